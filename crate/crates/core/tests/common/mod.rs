//! Helpers shared by the integration tests: brute-force oracles that work
//! from an adjacency matrix, and fair script generators.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use threshold_dynamics::graph::pair_count;
use threshold_dynamics::rng::SimRng;
use threshold_dynamics::{DynGraph, Pair};

/// Dense adjacency matrix, rebuilt from the edge list.
pub struct Matrix {
    pub n: usize,
    adj: Vec<bool>,
}

impl Matrix {
    pub fn of(g: &DynGraph) -> Self {
        let n = g.node_count();
        let mut adj = vec![false; n * n];
        for p in g.edges() {
            let (a, b) = (p.lo() as usize, p.hi() as usize);
            adj[a * n + b] = true;
            adj[b * n + a] = true;
        }
        Matrix { n, adj }
    }

    pub fn has(&self, a: usize, b: usize) -> bool {
        self.adj[a * self.n + b]
    }

    pub fn degree(&self, a: usize) -> usize {
        (0..self.n).filter(|&b| self.has(a, b)).count()
    }

    pub fn common(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&w| w != a && w != b && self.has(a, w) && self.has(b, w))
            .collect()
    }

    pub fn cn(&self, a: usize, b: usize) -> usize {
        self.common(a, b).len()
    }

    /// Edges among the common neighbors, by enumerating quadruples.
    pub fn ce(&self, a: usize, b: usize) -> usize {
        let c = self.common(a, b);
        let mut count = 0;
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                if self.has(c[i], c[j]) {
                    count += 1;
                }
            }
        }
        count
    }
}

/// One synchronous complete-scheduler round computed from scratch:
/// `alpha`/`beta` thresholds applied to `value(matrix, u, v)`.
pub fn naive_round(
    g: &DynGraph,
    alpha: f64,
    beta: f64,
    value: impl Fn(&Matrix, usize, usize) -> f64,
) -> DynGraph {
    let m = Matrix::of(g);
    let mut edges = Vec::new();
    for u in 0..m.n {
        for v in u + 1..m.n {
            let e = value(&m, u, v);
            let present = if e < alpha {
                false
            } else if e >= beta {
                true
            } else {
                m.has(u, v)
            };
            if present {
                edges.push((u as u32, v as u32));
            }
        }
    }
    DynGraph::from_edges(m.n, edges).unwrap()
}

/// The k-core by repeatedly deleting one low-degree node at a time.
pub fn naive_core(g: &DynGraph, k: usize) -> Vec<bool> {
    let m = Matrix::of(g);
    let mut alive = vec![true; m.n];
    loop {
        let victim = (0..m.n)
            .find(|&u| alive[u] && (0..m.n).filter(|&w| alive[w] && m.has(u, w)).count() < k);
        match victim {
            Some(u) => alive[u] = false,
            None => return alive,
        }
    }
}

pub fn all_pairs(n: usize) -> Vec<Pair> {
    let mut out = Vec::with_capacity(pair_count(n) as usize);
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            out.push(Pair::new(u, v));
        }
    }
    out
}

/// Splits `pairs` into consecutive rounds of random sizes in `1..=max`.
fn batches(pairs: &[Pair], max: usize, rng: &mut SimRng) -> Vec<Vec<Pair>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let k = rng.gen_range(1..=max.max(1)).min(pairs.len() - i);
        out.push(pairs[i..i + k].to_vec());
        i += k;
    }
    out
}

/// A fair script that covers every pair in random batches of up to `batch`.
pub fn shuffled_script(n: usize, batch: usize, rng: &mut SimRng) -> Vec<Vec<Pair>> {
    let mut pairs = all_pairs(n);
    pairs.shuffle(rng);
    batches(&pairs, batch, rng)
}

/// Ten scripts that each cover every pair once per pass, with orderings and
/// pacing chosen to be unfriendly to the dynamics on `g0`.
pub fn adversarial_scripts(
    n: usize,
    g0: &DynGraph,
    rng: &mut SimRng,
) -> Vec<(&'static str, Vec<Vec<Pair>>)> {
    let pairs = all_pairs(n);
    let singles = |ps: &[Pair]| ps.iter().map(|&p| vec![p]).collect::<Vec<_>>();
    let mut out = Vec::new();

    out.push(("lexicographic singles", singles(&pairs)));

    let mut rev = pairs.clone();
    rev.reverse();
    out.push(("reverse singles", singles(&rev)));

    let mut shuffled = pairs.clone();
    shuffled.shuffle(rng);
    out.push(("random batches", batches(&shuffled, n, rng)));

    // Star rounds: every still-uncovered pair at node k.
    let mut stars = Vec::new();
    for k in 0..n as u32 {
        let round: Vec<Pair> = pairs.iter().copied().filter(|p| p.lo() == k).collect();
        if !round.is_empty() {
            stars.push(round);
        }
    }
    out.push(("node stars", stars));

    let mut burst = vec![pairs.clone()];
    burst.extend(std::iter::repeat_with(Vec::new).take(n));
    out.push(("burst then silence", burst));

    let mut sparse = Vec::new();
    for &p in &shuffled {
        sparse.push(vec![p]);
        sparse.push(Vec::new());
    }
    out.push(("singles with gaps", sparse));

    // Existing edges one at a time first, then the non-edges in bulk.
    let (edges, non_edges): (Vec<Pair>, Vec<Pair>) =
        pairs.iter().partition(|p| g0.has_edge(p.lo(), p.hi()));
    let mut edges_first = singles(&edges);
    edges_first.extend(batches(&non_edges, 4 * n, rng));
    out.push(("edges first", edges_first));

    // Round-robin tournament: perfect matchings (circle method).
    let m = n + n % 2;
    let mut matchings = Vec::new();
    for r in 0..m - 1 {
        let mut round = Vec::new();
        for i in 0..m / 2 {
            let a = if i == 0 { m - 1 } else { (r + i) % (m - 1) };
            let b = (r + m - 1 - i) % (m - 1);
            if a < n && b < n && a != b {
                round.push(Pair::new(a as u32, b as u32));
            }
        }
        matchings.push(round);
    }
    out.push(("matchings", matchings));

    // A hot subset replayed every round while coverage trickles in.
    let hot: Vec<Pair> = shuffled
        .iter()
        .copied()
        .take(n.min(shuffled.len()))
        .collect();
    let mut hot_rounds = Vec::new();
    for &p in &shuffled {
        let mut round = hot.clone();
        if !round.contains(&p) {
            round.push(p);
        }
        hot_rounds.push(round);
    }
    out.push(("hot subset", hot_rounds));

    let mut reversed_batches = batches(&shuffled, 3, rng);
    reversed_batches.reverse();
    let first = pairs[0];
    for round in reversed_batches.iter_mut() {
        if !round.contains(&first) {
            round.push(first);
        }
    }
    out.push(("one pair always", reversed_batches));
    out
}
