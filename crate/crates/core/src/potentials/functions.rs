use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::rng::SimRng;

/// Default number of random samples for the property checks below.
pub const DEFAULT_SAMPLES: usize = 1000;

const GRID: u32 = 200;

type BinaryFn = dyn Fn(f64, f64) -> f64 + Send + Sync;
type NodeFn = dyn Fn(NodeId, &[NodeId]) -> f64 + Send + Sync;

/// Symmetric, coordinate-wise non-decreasing `f(x, y)`.
#[derive(Clone)]
pub struct ProperFunction {
    name: String,
    f: Arc<BinaryFn>,
}

impl fmt::Debug for ProperFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProperFunction({})", self.name)
    }
}

impl ProperFunction {
    /// One of `sum`, `min`, `max`, `product`.
    pub fn named(name: &str) -> Result<Self> {
        let f: Arc<BinaryFn> = match name {
            "sum" => Arc::new(|x, y| x + y),
            "min" => Arc::new(f64::min),
            "max" => Arc::new(f64::max),
            "product" => Arc::new(|x, y| x * y),
            other => {
                return Err(Error::config(format!(
                    "unknown proper function {other:?} (expected sum, min, max or product)"
                )))
            }
        };
        Ok(ProperFunction {
            name: name.to_string(),
            f,
        })
    }

    /// An arbitrary function; call [`ProperFunction::check`] before trusting it.
    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ProperFunction {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, x: f64, y: f64) -> f64 {
        (self.f)(x, y)
    }

    /// Samples the integer grid for symmetry and monotonicity violations.
    pub fn check(&self, samples: usize, rng: &mut SimRng) -> Result<()> {
        for _ in 0..samples {
            let x = rng.gen_range(0..GRID) as f64;
            let y = rng.gen_range(0..GRID) as f64;
            let (a, b) = (self.apply(x, y), self.apply(y, x));
            if a != b {
                return Err(Error::config(format!(
                    "{} is not symmetric: f({x},{y})={a} but f({y},{x})={b}",
                    self.name
                )));
            }
            let up = self.apply(x, y + 1.0);
            if up < a {
                return Err(Error::config(format!(
                    "{} is not non-decreasing: f({x},{})={up} < f({x},{y})={a}",
                    self.name,
                    y + 1.0
                )));
            }
        }
        Ok(())
    }
}

/// A node function `g(u, N(u))` that may also read static per-node
/// attributes captured when it was built.
#[derive(Clone)]
pub struct DegreeLikeFunction {
    name: String,
    g: Arc<NodeFn>,
    domain: Option<usize>,
}

impl fmt::Debug for DegreeLikeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DegreeLikeFunction({})", self.name)
    }
}

impl DegreeLikeFunction {
    pub fn new(
        name: impl Into<String>,
        g: impl Fn(NodeId, &[NodeId]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        DegreeLikeFunction {
            name: name.into(),
            g: Arc::new(g),
            domain: None,
        }
    }

    /// Restricts sampling to node ids below `n`, for functions that index
    /// per-node attributes.
    pub fn with_domain(mut self, n: usize) -> Self {
        self.domain = Some(n);
        self
    }

    pub fn degree() -> Self {
        Self::new("degree", |_, nbrs| nbrs.len() as f64)
    }

    pub fn degree_plus_one() -> Self {
        Self::new("degree+1", |_, nbrs| nbrs.len() as f64 + 1.0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, u: NodeId, neighbors: &[NodeId]) -> f64 {
        (self.g)(u, neighbors)
    }

    /// Samples nested neighborhood pairs `N' ⊆ N` of random nodes and checks
    /// `g(u, N) ≥ g(u, N')`. Node ids range over the declared domain, or
    /// `0..32` without one.
    pub fn check(&self, samples: usize, rng: &mut SimRng) -> Result<()> {
        let n = self.domain.unwrap_or(32);
        if n < 2 {
            return Ok(());
        }
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        for _ in 0..samples {
            let u = rng.gen_range(0..n as NodeId);
            let density: f64 = rng.gen();
            outer.clear();
            inner.clear();
            for w in (0..n as NodeId).filter(|&w| w != u) {
                if rng.gen_bool(density) {
                    outer.push(w);
                    if rng.gen_bool(0.5) {
                        inner.push(w);
                    }
                }
            }
            let (big, small) = (self.apply(u, &outer), self.apply(u, &inner));
            if big < small || big.is_nan() || small.is_nan() {
                return Err(Error::config(format!(
                    "{} is not monotone under neighborhood inclusion at node {u}: \
                     g(N={outer:?})={big} < g(N'={inner:?})={small}",
                    self.name
                )));
            }
        }
        Ok(())
    }
}
