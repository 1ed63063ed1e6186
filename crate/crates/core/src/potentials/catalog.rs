use std::sync::Arc;

use super::{
    push_change, DegreeLikeFunction, PairRule, Potential, ProperFunction, RowScratch, Thresholds,
    DEFAULT_SAMPLES,
};
use crate::error::Result;
use crate::graph::{DynGraph, LocalView, NodeId, Pair};
use crate::rng::sim_rng;

/// Pairs with fewer common neighbors than this, and no edge, always fall in
/// the fourth Rule-110 branch, which keeps an absent edge absent.
pub const RULE110_FILTER_CN: usize = 40;

// Fixed so that constructing the same potential twice runs the same checks.
const CHECK_SEED: u64 = 0x5eed;

struct ProperDegree {
    f: ProperFunction,
}

impl PairRule for ProperDegree {
    fn radius(&self) -> usize {
        1
    }

    fn evaluate(&self, view: &LocalView<'_>) -> f64 {
        self.f
            .apply(view.degree(view.u()) as f64, view.degree(view.v()) as f64)
    }
}

/// `min(d(u), d(v))`. With `α ≤ n−1 < β` the dynamics converge to the
/// α-core plus isolated crust nodes.
pub fn min_degree_potential(alpha: f64, beta: f64) -> Result<Potential> {
    Ok(Potential::new(
        "min_degree",
        Thresholds::new(alpha, beta)?,
        Arc::new(ProperDegree {
            f: ProperFunction::named("min")?,
        }),
    ))
}

/// `f(d(u), d(v))` for a proper `f`, checked on [`DEFAULT_SAMPLES`] grid points.
pub fn proper_degree_potential(f: ProperFunction, alpha: f64, beta: f64) -> Result<Potential> {
    let t = Thresholds::new(alpha, beta)?;
    f.check(DEFAULT_SAMPLES, &mut sim_rng(CHECK_SEED))?;
    Ok(Potential::new(
        format!("proper_degree[{}]", f.name()),
        t,
        Arc::new(ProperDegree { f }),
    ))
}

struct DegreeLike {
    f: ProperFunction,
    g: DegreeLikeFunction,
}

impl PairRule for DegreeLike {
    fn radius(&self) -> usize {
        1
    }

    fn evaluate(&self, view: &LocalView<'_>) -> f64 {
        let (u, v) = (view.u(), view.v());
        let gu = self.g.apply(u, &view.neighbors(u));
        let gv = self.g.apply(v, &view.neighbors(v));
        self.f.apply(gu, gv)
    }
}

/// `f(g(u), g(v))` for proper `f` and degree-like `g`.
pub fn degree_like_potential(
    f: ProperFunction,
    g: DegreeLikeFunction,
    alpha: f64,
    beta: f64,
) -> Result<Potential> {
    let t = Thresholds::new(alpha, beta)?;
    let mut rng = sim_rng(CHECK_SEED);
    f.check(DEFAULT_SAMPLES, &mut rng)?;
    g.check(DEFAULT_SAMPLES, &mut rng)?;
    Ok(Potential::new(
        format!("degree_like[{},{}]", f.name(), g.name()),
        t,
        Arc::new(DegreeLike { f, g }),
    ))
}

struct Community {
    beta: f64,
}

impl PairRule for Community {
    fn radius(&self) -> usize {
        1
    }

    fn evaluate(&self, view: &LocalView<'_>) -> f64 {
        let (u, v) = (view.u(), view.v());
        let cn = view.common_neighbors(u, v);
        let ce = if cn >= 2 {
            view.edges_among_common_neighbors(u, v)
        } else {
            0
        };
        (cn + usize::from(view.has_edge()) + ce) as f64
    }

    // A non-adjacent pair without common neighbors scores 0, which is below
    // any positive β, so its edge stays absent.
    fn has_change_filter(&self) -> bool {
        self.beta > 0.0
    }

    fn may_change(&self, view: &LocalView<'_>, _t: &Thresholds) -> bool {
        view.has_edge() || view.common_neighbors(view.u(), view.v()) > 0
    }

    fn change_candidates(&self, g: &DynGraph, _t: &Thresholds) -> Option<Vec<Pair>> {
        let mut out: Vec<Pair> = g.edges().collect();
        let mut seen = vec![u32::MAX; g.node_count()];
        for u in g.nodes() {
            for &w in g.neighbors(u) {
                for &v in g.neighbors(w) {
                    if v > u && seen[v as usize] != u && !g.has_edge(u, v) {
                        seen[v as usize] = u;
                        out.push(Pair::new(u, v));
                    }
                }
            }
        }
        Some(out)
    }
}

/// `CN(u,v) + |E(u,v)| + CE(u,v)`.
pub fn community_potential(alpha: f64, beta: f64) -> Result<Potential> {
    Ok(Potential::new(
        "community",
        Thresholds::new(alpha, beta)?,
        Arc::new(Community { beta }),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule110Branch {
    /// `66 ≤ CN+E ≤ 70`
    Window,
    /// `CN+E = 71`
    Saturated,
    /// `40 ≤ CN ≤ 41`
    Flip,
    Otherwise,
}

pub fn rule110_branch(cn: usize, edge: bool) -> Rule110Branch {
    let s = cn + usize::from(edge);
    if (66..=70).contains(&s) {
        Rule110Branch::Window
    } else if s == 71 {
        Rule110Branch::Saturated
    } else if (40..=41).contains(&cn) {
        Rule110Branch::Flip
    } else {
        Rule110Branch::Otherwise
    }
}

/// The four-branch value; `ce` is only consulted by the first two branches.
pub fn rule110_value(beta: f64, cn: usize, edge: bool, ce: impl FnOnce() -> usize) -> f64 {
    let e = f64::from(u8::from(edge));
    match rule110_branch(cn, edge) {
        Rule110Branch::Window => beta + 60.0 + ce() as f64 - cn as f64,
        Rule110Branch::Saturated => beta + 12.0 - ce() as f64,
        Rule110Branch::Flip => beta - e,
        Rule110Branch::Otherwise => beta - 1.0 + e,
    }
}

struct Rule110 {
    beta: f64,
}

impl PairRule for Rule110 {
    fn radius(&self) -> usize {
        1
    }

    fn evaluate(&self, view: &LocalView<'_>) -> f64 {
        let (u, v) = (view.u(), view.v());
        let edge = view.has_edge();
        // CN ≤ min degree, so low-degree pairs cannot reach branches 1–3.
        if view.degree(u).min(view.degree(v)) < RULE110_FILTER_CN {
            return rule110_value(self.beta, 0, edge, || 0);
        }
        let cn = view.common_neighbors(u, v);
        rule110_value(self.beta, cn, edge, || {
            view.edges_among_common_neighbors(u, v)
        })
    }

    fn has_change_filter(&self) -> bool {
        true
    }

    fn may_change(&self, view: &LocalView<'_>, _t: &Thresholds) -> bool {
        view.has_edge()
            || (view.degree(view.u()).min(view.degree(view.v())) >= RULE110_FILTER_CN
                && view.common_neighbors(view.u(), view.v()) >= RULE110_FILTER_CN)
    }

    fn change_candidates(&self, g: &DynGraph, _t: &Thresholds) -> Option<Vec<Pair>> {
        let mut out: Vec<Pair> = g.edges().collect();
        let mut count = vec![0u32; g.node_count()];
        let mut touched = Vec::new();
        let heavy = |x: NodeId| g.degree(x) >= RULE110_FILTER_CN;
        for u in g.nodes().filter(|&u| heavy(u)) {
            for &w in g.neighbors(u) {
                for &v in g.neighbors(w) {
                    if v > u && heavy(v) {
                        if count[v as usize] == 0 {
                            touched.push(v);
                        }
                        count[v as usize] += 1;
                    }
                }
            }
            for v in touched.drain(..) {
                if count[v as usize] as usize >= RULE110_FILTER_CN && !g.has_edge(u, v) {
                    out.push(Pair::new(u, v));
                }
                count[v as usize] = 0;
            }
        }
        Some(out)
    }

    // Every pair in the row is accounted for: pairs that are non-adjacent in
    // both graphs and share no neighbor in `eval` have value β−1 and stay
    // absent, so only two-hop targets and neighbors need explicit work.
    fn row_changes(
        &self,
        eval: &DynGraph,
        reference: &DynGraph,
        u: NodeId,
        t: &Thresholds,
        scratch: &mut RowScratch,
        out: &mut Vec<(Pair, bool)>,
    ) -> crate::error::Result<()> {
        scratch.prepare(eval.node_count());
        let RowScratch { count, touched } = scratch;
        for &w in eval.neighbors(u) {
            for &v in eval.neighbors(w) {
                if v > u {
                    if count[v as usize] == 0 {
                        touched.push(v);
                    }
                    count[v as usize] += 1;
                }
            }
        }
        for &v in eval.neighbors(u).iter().chain(reference.neighbors(u)) {
            if v > u && count[v as usize] == 0 {
                touched.push(v);
            }
        }
        touched.sort_unstable();
        touched.dedup();
        for &v in touched.iter() {
            let cn = count[v as usize] as usize;
            let edge = eval.has_edge(u, v);
            let value = rule110_value(self.beta, cn, edge, || {
                eval.edges_among_common_neighbors(u, v).expect("valid pair")
            });
            push_change(value, reference, Pair::new(u, v), t, out)?;
        }
        for v in touched.drain(..) {
            count[v as usize] = 0;
        }
        Ok(())
    }
}

/// The Rule-110 potential with `α = β`.
pub fn rule110_potential(beta: f64) -> Result<Potential> {
    Ok(Potential::new(
        "rule110",
        Thresholds::new(beta, beta)?,
        Arc::new(Rule110 { beta }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{complete, cycle, path, star};

    fn complete_minus_nothing(n: usize) -> DynGraph {
        complete(n)
    }

    #[test]
    fn min_degree_examples() {
        let p = min_degree_potential(1.0, 5.0).unwrap();
        assert_eq!(p.value(&path(3), 0, 1).unwrap(), 1.0);
        assert_eq!(p.value(&complete(3), 0, 2).unwrap(), 2.0);
        assert_eq!(p.value(&star(5), 0, 3).unwrap(), 1.0);
        assert!(min_degree_potential(3.0, 2.0).is_err());
    }

    #[test]
    fn proper_degree_examples() {
        let sum = proper_degree_potential(ProperFunction::named("sum").unwrap(), 4.0, 4.0).unwrap();
        let c4 = cycle(4).unwrap();
        assert_eq!(sum.value(&c4, 0, 1).unwrap(), 4.0);
        assert_eq!(sum.value(&c4, 0, 2).unwrap(), 4.0);
        let prod =
            proper_degree_potential(ProperFunction::named("product").unwrap(), 0.0, 1.0).unwrap();
        assert_eq!(prod.value(&complete_minus_nothing(4), 1, 2).unwrap(), 9.0);
        let bad = ProperFunction::custom("diff", |x, y| x - y);
        assert!(proper_degree_potential(bad, 0.0, 1.0).is_err());
    }

    #[test]
    fn degree_like_examples() {
        let sum = ProperFunction::named("sum").unwrap();
        let p = degree_like_potential(sum.clone(), DegreeLikeFunction::degree_plus_one(), 0.0, 1.0)
            .unwrap();
        assert_eq!(p.value(&DynGraph::new(2), 0, 1).unwrap(), 2.0);
        let q = degree_like_potential(sum, DegreeLikeFunction::degree(), 0.0, 1.0).unwrap();
        let g = path(4);
        assert_eq!(q.value(&g, 1, 3).unwrap(), 3.0);
    }

    #[test]
    fn community_examples() {
        let p = community_potential(1.0, 1.0).unwrap();
        assert_eq!(p.value(&complete(4), 0, 1).unwrap(), 4.0);
        assert_eq!(p.value(&DynGraph::new(2), 0, 1).unwrap(), 0.0);
        assert_eq!(p.value(&cycle(5).unwrap(), 0, 1).unwrap(), 1.0);
        assert!(p.has_change_filter());
        assert!(!community_potential(-1.0, 0.0).unwrap().has_change_filter());
    }

    #[test]
    fn rule110_branch_values() {
        let beta = 7.0;
        // A-type (h,l) pair at an integer step with all neighboring cells 0.
        assert_eq!(rule110_value(beta, 70, false, || 8), beta - 2.0);
        assert_eq!(rule110_value(beta, 40, true, || 0), beta - 1.0);
        assert_eq!(rule110_value(beta, 41, false, || 0), beta);
        assert_eq!(rule110_value(beta, 20, true, || 0), beta);
        assert_eq!(rule110_value(beta, 20, false, || 0), beta - 1.0);
        assert_eq!(rule110_value(beta, 70, true, || 9), beta + 3.0);
        assert_eq!(rule110_branch(65, true), Rule110Branch::Window);
        assert_eq!(rule110_branch(41, false), Rule110Branch::Flip);
    }

    #[test]
    fn rule110_fast_row_matches_views() {
        use crate::rng::sim_rng;
        let p = rule110_potential(1.0).unwrap();
        for seed in 0..6 {
            let g = crate::graph::generators::gnp(90, 0.6, &mut sim_rng(seed)).unwrap();
            let t = p.thresholds();
            let mut scratch = RowScratch::default();
            for u in g.nodes() {
                let mut fast = Vec::new();
                p.rule()
                    .row_changes(&g, &g, u, &t, &mut scratch, &mut fast)
                    .unwrap();
                let mut slow = Vec::new();
                for v in u + 1..g.node_count() as NodeId {
                    let value = p.value(&g, u, v).unwrap();
                    push_change(value, &g, Pair::new(u, v), &t, &mut slow).unwrap();
                }
                assert_eq!(fast, slow, "row {u}, seed {seed}");
            }
        }
    }
}
