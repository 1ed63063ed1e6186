use std::collections::HashSet;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::io::{content_lines, parse_field};
use crate::graph::{NodeId, Pair};
use crate::potentials::{degree_like_potential, DegreeLikeFunction, Potential, ProperFunction};
use crate::rng::SimRng;

/// Static agent attributes: niceness `n(v) ≥ 0`, extroversion `x(v)`, and a
/// symmetric enemy relation. Enemies never change during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialProfile {
    niceness: Vec<f64>,
    extroversion: Vec<u32>,
    enemies: HashSet<Pair>,
}

impl SocialProfile {
    pub fn new(niceness: Vec<f64>, extroversion: Vec<u32>, enemies: Vec<Pair>) -> Result<Self> {
        if niceness.len() != extroversion.len() {
            return Err(Error::config(format!(
                "{} niceness values but {} extroversion values",
                niceness.len(),
                extroversion.len()
            )));
        }
        if let Some((u, x)) = niceness
            .iter()
            .enumerate()
            .find(|(_, x)| !(x.is_finite() && **x >= 0.0))
        {
            return Err(Error::config(format!(
                "niceness of node {u} is {x}; it must be finite and ≥ 0"
            )));
        }
        let n = niceness.len();
        if let Some(p) = enemies.iter().find(|p| p.hi() as usize >= n) {
            return Err(Error::config(format!(
                "enemy pair {p} is out of range for {n} nodes"
            )));
        }
        Ok(SocialProfile {
            niceness,
            extroversion,
            enemies: enemies.into_iter().collect(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.niceness.len()
    }

    pub fn niceness(&self, u: NodeId) -> f64 {
        self.niceness[u as usize]
    }

    pub fn extroversion(&self, u: NodeId) -> u32 {
        self.extroversion[u as usize]
    }

    pub fn max_extroversion(&self) -> u32 {
        self.extroversion.iter().copied().max().unwrap_or(0)
    }

    pub fn are_enemies(&self, u: NodeId, v: NodeId) -> bool {
        u != v && self.enemies.contains(&Pair::new(u, v))
    }

    pub fn enemies(&self) -> impl Iterator<Item = Pair> + '_ {
        self.enemies.iter().copied()
    }
}

/// `g(u) = n(u) + Σ_{w ∈ N(u)} n(w)`.
pub fn niceness_g(profile: Arc<SocialProfile>) -> DegreeLikeFunction {
    let n = profile.node_count();
    DegreeLikeFunction::new("niceness", move |u, nbrs| {
        profile.niceness(u) + nbrs.iter().map(|&w| profile.niceness(w)).sum::<f64>()
    })
    .with_domain(n)
}

/// `f = sum` over [`niceness_g`].
pub fn social_potential(profile: Arc<SocialProfile>, alpha: f64, beta: f64) -> Result<Potential> {
    degree_like_potential(
        ProperFunction::named("sum")?,
        niceness_g(profile),
        alpha,
        beta,
    )
}

/// Integer niceness in `0..=max_niceness`, extroversion in `0..=max_x`,
/// each pair an enemy pair with probability `enemy_p`.
pub fn random_profile(
    n: usize,
    max_niceness: u32,
    max_x: u32,
    enemy_p: f64,
    rng: &mut SimRng,
) -> SocialProfile {
    let niceness = (0..n)
        .map(|_| rng.gen_range(0..=max_niceness) as f64)
        .collect();
    let extroversion = (0..n).map(|_| rng.gen_range(0..=max_x)).collect();
    let mut enemies = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.gen_bool(enemy_p) {
                enemies.push(Pair::new(u, v));
            }
        }
    }
    SocialProfile::new(niceness, extroversion, enemies).expect("generated profile is valid")
}

/// Profile text: `id niceness extroversion` per node (ids `0..n`, each once)
/// and `enemy u v` lines, with `#` comments.
pub fn parse_profile<R: Read>(reader: R, source: &str) -> Result<SocialProfile> {
    let mut nodes: Vec<Option<(f64, u32)>> = Vec::new();
    let mut enemies = Vec::new();
    for item in content_lines(reader) {
        let (line, body) = item?;
        let mut tokens = body.split_whitespace();
        let first = tokens.next().unwrap();
        if first == "enemy" {
            let a: NodeId = parse_field(source, line, tokens.next(), "node id")?;
            let b: NodeId = parse_field(source, line, tokens.next(), "node id")?;
            enemies.push(Pair::try_new(a, b).map_err(|e| Error::parse(source, line, e))?);
        } else {
            let id: usize = parse_field(source, line, Some(first), "node id")?;
            let nice: f64 = parse_field(source, line, tokens.next(), "niceness")?;
            let x: u32 = parse_field(source, line, tokens.next(), "extroversion")?;
            if nodes.len() <= id {
                nodes.resize(id + 1, None);
            }
            if nodes[id].replace((nice, x)).is_some() {
                return Err(Error::parse(
                    source,
                    line,
                    format!("node {id} listed twice"),
                ));
            }
        }
        if tokens.next().is_some() {
            return Err(Error::parse(source, line, "trailing tokens"));
        }
    }
    if let Some(missing) = nodes.iter().position(Option::is_none) {
        return Err(Error::input(format!(
            "{source}: node {missing} has no profile line"
        )));
    }
    let (niceness, extroversion) = nodes.into_iter().map(Option::unwrap).unzip();
    SocialProfile::new(niceness, extroversion, enemies)
}

pub fn read_profile_file(path: &Path) -> Result<SocialProfile> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::input(format!("cannot open {}: {e}", path.display())))?;
    parse_profile(file, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::gnp;
    use crate::potentials::DEFAULT_SAMPLES;
    use crate::rng::sim_rng;

    #[test]
    fn niceness_examples() {
        let ones = Arc::new(SocialProfile::new(vec![1.0; 5], vec![0; 5], vec![]).unwrap());
        let g = niceness_g(ones);
        assert_eq!(g.apply(0, &[1, 2]), 3.0);
        let lone = Arc::new(SocialProfile::new(vec![3.0, 0.0], vec![0, 0], vec![]).unwrap());
        assert_eq!(niceness_g(lone).apply(0, &[]), 3.0);
    }

    #[test]
    fn zero_niceness_gives_zero_potential() {
        let p = Arc::new(SocialProfile::new(vec![0.0; 6], vec![1; 6], vec![]).unwrap());
        let pot = social_potential(p, 0.0, 1.0).unwrap();
        let g = gnp(6, 0.5, &mut sim_rng(1)).unwrap();
        for u in 0..6 {
            for v in u + 1..6 {
                assert_eq!(pot.value(&g, u, v).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn negative_niceness_rejected() {
        assert!(matches!(
            SocialProfile::new(vec![-1.0], vec![0], vec![]),
            Err(Error::Config(_))
        ));
        assert!(SocialProfile::new(vec![f64::NAN], vec![0], vec![]).is_err());
    }

    #[test]
    fn sampled_monotonicity() {
        for seed in 0..5 {
            let p = Arc::new(random_profile(20, 5, 3, 0.1, &mut sim_rng(seed)));
            niceness_g(p)
                .check(DEFAULT_SAMPLES, &mut sim_rng(seed))
                .unwrap();
        }
    }

    #[test]
    fn superset_neighborhood_orders_values() {
        let p = Arc::new(random_profile(10, 4, 2, 0.0, &mut sim_rng(3)));
        let g = niceness_g(p);
        assert!(g.apply(0, &[1, 2, 3, 4]) >= g.apply(0, &[2, 4]));
    }

    #[test]
    fn parse_profile_file_format() {
        let text = "# agents\n0 1.5 2\n1 0 1\n2 3 0\nenemy 0 2\n";
        let p = parse_profile(text.as_bytes(), "p").unwrap();
        assert_eq!(p.node_count(), 3);
        assert!(p.are_enemies(2, 0));
        assert!(!p.are_enemies(0, 1));
        assert_eq!(p.extroversion(0), 2);
        assert!(parse_profile("0 1 1\n2 1 1\n".as_bytes(), "p").is_err());
        assert!(parse_profile("0 -1 1\n".as_bytes(), "p").is_err());
        let err = parse_profile("0 1 1\nenemy 0 0\n".as_bytes(), "p").unwrap_err();
        assert!(err.to_string().starts_with("p:2:"));
    }
}
