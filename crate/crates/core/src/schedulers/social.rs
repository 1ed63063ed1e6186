use std::sync::Arc;

use super::{InteractionSet, Quiescence, Scheduler};
use crate::error::{Error, Result};
use crate::extensions::SocialProfile;
use crate::graph::{DynGraph, Pair};
use crate::rng::SimRng;

/// Activates the pairs the social model lets meet in a round:
///
/// * never enemies;
/// * strangers at distance `d` with `1 < d ≤ x(u) + x(v)`;
/// * friends sharing at most `γ` common friends (stronger ties are immune).
#[derive(Debug, Clone)]
pub struct SocialScheduler {
    profile: Arc<SocialProfile>,
    gamma: usize,
}

impl SocialScheduler {
    pub fn new(profile: Arc<SocialProfile>, gamma: usize) -> Self {
        SocialScheduler { profile, gamma }
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }
}

impl Scheduler for SocialScheduler {
    fn name(&self) -> String {
        format!("social[γ={}]", self.gamma)
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.profile.node_count() != n {
            return Err(Error::config(format!(
                "social profile covers {} nodes but the graph has {n}",
                self.profile.node_count()
            )));
        }
        Ok(())
    }

    fn interactions(
        &mut self,
        _round: u64,
        g: &DynGraph,
        _rng: &mut SimRng,
    ) -> Result<InteractionSet> {
        self.validate(g.node_count())?;
        let p = &*self.profile;
        let max_x = p.max_extroversion() as usize;
        let mut pairs = Vec::new();
        for u in g.nodes() {
            let reach = (p.extroversion(u) as usize + max_x).max(1);
            for (v, d) in g.bfs_within(&[u], reach) {
                if v <= u || p.are_enemies(u, v) {
                    continue;
                }
                let include = if d == 1 {
                    g.common_neighbors(u, v)? <= self.gamma
                } else {
                    d <= (p.extroversion(u) + p.extroversion(v)) as usize
                };
                if include {
                    pairs.push(Pair::new(u, v));
                }
            }
        }
        pairs.sort_unstable();
        Ok(InteractionSet::Listed(pairs))
    }

    fn fairness_period(&self, _n: usize) -> Option<u64> {
        None
    }

    fn quiescence(&self, _n: usize) -> Quiescence {
        Quiescence::GraphDetermined
    }
}
