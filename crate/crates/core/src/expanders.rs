//! Bipartite left-regular graphs: random sampling, unique-neighbor
//! verification, and the induced set word map.
//!
//! Graphs are sampled with replacement (each left vertex draws its `d`
//! right endpoints independently and uniformly), so multi-edges can occur;
//! neighbor counting collapses them while unique-neighbor detection counts
//! edge multiplicity.

use crate::error::{Error, Result};
use crate::words::{Word, WordSet};
use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Left-regular bipartite graph. Neighbor lists are per-left-vertex, sorted,
/// 1-based (matching the on-disk format), with multi-edges repeated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    /// left side size
    pub n: usize,
    /// right side size
    pub m: usize,
    /// left degree
    pub d: usize,
    /// for each left vertex, its right neighbors (1-based, sorted, repeated
    /// according to multiplicity)
    pub adj: Vec<Vec<u32>>,
}

impl BipartiteGraph {
    pub fn new(n: usize, m: usize, d: usize, adj: Vec<Vec<u32>>) -> Result<Self> {
        if n == 0 || m == 0 || d == 0 {
            return Err(Error::InvalidParams("graph sides and degree must be positive".into()));
        }
        if adj.len() != n {
            return Err(Error::SizeMismatch { what: "adjacency lists", expected: n, got: adj.len() });
        }
        let mut adj = adj;
        for list in &mut adj {
            if list.len() != d {
                return Err(Error::SizeMismatch {
                    what: "left vertex degree",
                    expected: d,
                    got: list.len(),
                });
            }
            if list.iter().any(|&b| b == 0 || b as usize > m) {
                return Err(Error::InvalidParams(format!(
                    "right neighbor index out of 1..={m}"
                )));
            }
            list.sort_unstable();
        }
        Ok(BipartiteGraph { n, m, d, adj })
    }

    /// Per-right-vertex neighbor lists (0-based left indices, in left order,
    /// with multiplicity).
    pub fn right_neighbor_lists(&self) -> Vec<Vec<u32>> {
        let mut lists = vec![Vec::new(); self.m];
        for (v, nbrs) in self.adj.iter().enumerate() {
            for &b in nbrs {
                lists[(b - 1) as usize].push(v as u32);
            }
        }
        lists
    }

    /// Distinct right neighbors of a left vertex, as a bitset.
    fn neighbor_bitset(&self, words: usize, v: usize) -> Vec<u64> {
        let mut bs = vec![0u64; words];
        for &b in &self.adj[v] {
            let i = (b - 1) as usize;
            bs[i / 64] |= 1 << (i % 64);
        }
        bs
    }
}

/// Each left vertex draws `d` right endpoints independently and uniformly
/// (with replacement); deterministic under the given RNG.
pub fn sample_left_regular(
    n: usize,
    m: usize,
    d: usize,
    rng: &mut impl Rng,
) -> Result<BipartiteGraph> {
    if n == 0 || m == 0 || d == 0 {
        return Err(Error::InvalidParams("graph sides and degree must be positive".into()));
    }
    let adj = (0..n)
        .map(|_| {
            let mut nbrs: Vec<u32> = (0..d).map(|_| rng.gen_range(1..=m as u32)).collect();
            nbrs.sort_unstable();
            nbrs
        })
        .collect();
    BipartiteGraph::new(n, m, d, adj)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { trials: u64 },
}

/// Worst subset seen by the verifier.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WorstWitness {
    /// 0-based left vertices
    pub subset: Vec<u32>,
    pub distinct_neighbors: usize,
    /// the (1-eps) * d * |S| threshold the subset was held to
    pub required: Ratio<u64>,
}

/// Verification certificate: every checked subset `S` with
/// `|S| <= min(floor(alpha n), s_max)` has at least `(1-eps) d |S|` distinct
/// neighbors (`pass`), and at least one unique neighbor — a right vertex
/// meeting `S` by exactly one edge, multiplicity counted (`unique_ok`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpanderCert {
    pub alpha: Ratio<u64>,
    pub epsilon: Ratio<u64>,
    /// largest subset size actually checked
    pub s_checked: usize,
    pub s_max: usize,
    pub mode: VerifyMode,
    pub pass: bool,
    pub unique_ok: bool,
    pub worst: Option<WorstWitness>,
}

/// Budget for exhaustive subset enumeration; above it the verifier samples.
pub const DEFAULT_SUBSET_BUDGET: u128 = 5_000_000;

/// Default trial count per subset size in sampled mode.
pub const DEFAULT_SAMPLED_TRIALS: u64 = 2000;

pub fn verify_unique_neighbors(
    g: &BipartiteGraph,
    alpha: Ratio<u64>,
    epsilon: Ratio<u64>,
    s_max: usize,
    seed: u64,
) -> ExpanderCert {
    let alpha_n = (alpha * Ratio::new(g.n as u64, 1)).floor().to_integer() as usize;
    let s_checked = alpha_n.min(s_max).min(g.n);

    let total: u128 = (1..=s_checked)
        .map(|s| binomial(g.n as u128, s as u128))
        .sum();
    let exhaustive = total <= DEFAULT_SUBSET_BUDGET;

    let words = g.m.div_ceil(64);
    let once: Vec<Vec<u64>> = (0..g.n).map(|v| g.neighbor_bitset(words, v)).collect();
    // right vertices hit at least twice by a single left vertex
    let multi: Vec<Vec<u64>> = (0..g.n)
        .map(|v| {
            let mut bs = vec![0u64; words];
            let nbrs = &g.adj[v];
            for w in nbrs.windows(2) {
                if w[0] == w[1] {
                    let i = (w[0] - 1) as usize;
                    bs[i / 64] |= 1 << (i % 64);
                }
            }
            bs
        })
        .collect();

    let mut state = VerifyState {
        pass: true,
        unique_ok: true,
        worst: None,
        d: g.d as u64,
        epsilon,
    };

    let check = |state: &mut VerifyState, subset: &[u32]| {
        let mut touched = vec![0u64; words];
        let mut doubled = vec![0u64; words];
        for &v in subset {
            let ov = &once[v as usize];
            let mv = &multi[v as usize];
            for i in 0..words {
                doubled[i] |= mv[i] | (touched[i] & ov[i]);
                touched[i] |= ov[i];
            }
        }
        let distinct: usize = touched.iter().map(|w| w.count_ones() as usize).sum();
        let unique = touched
            .iter()
            .zip(&doubled)
            .any(|(&t, &m)| t & !m != 0);
        state.observe(subset, distinct, unique);
    };

    if exhaustive {
        let mut subset = Vec::with_capacity(s_checked);
        for s in 1..=s_checked {
            enumerate_subsets(g.n, s, &mut subset, 0, &mut |sub| check(&mut state, sub));
        }
        ExpanderCert {
            alpha,
            epsilon,
            s_checked,
            s_max,
            mode: VerifyMode::Exhaustive,
            pass: state.pass,
            unique_ok: state.unique_ok,
            worst: state.worst,
        }
    } else {
        let trials = DEFAULT_SAMPLED_TRIALS;
        let mut rng = crate::rng::substream(seed, "expander/verify/sampled");
        for s in 1..=s_checked {
            for _ in 0..trials {
                let subset = sample_subset(g.n, s, &mut rng);
                check(&mut state, &subset);
            }
        }
        ExpanderCert {
            alpha,
            epsilon,
            s_checked,
            s_max,
            mode: VerifyMode::Sampled { trials },
            pass: state.pass,
            unique_ok: state.unique_ok,
            worst: state.worst,
        }
    }
}

struct VerifyState {
    pass: bool,
    unique_ok: bool,
    worst: Option<WorstWitness>,
    d: u64,
    epsilon: Ratio<u64>,
}

impl VerifyState {
    fn observe(&mut self, subset: &[u32], distinct: usize, unique: bool) {
        let required =
            (Ratio::new(1, 1) - self.epsilon) * Ratio::new(self.d * subset.len() as u64, 1);
        if Ratio::new(distinct as u64, 1) < required {
            self.pass = false;
        }
        if !unique {
            self.unique_ok = false;
        }
        // track the largest shortfall against the threshold
        let deficiency = required - Ratio::new(distinct as u64, 1).min(required);
        let is_worse = match &self.worst {
            None => true,
            Some(w) => {
                let wd = w.required - Ratio::new(w.distinct_neighbors as u64, 1).min(w.required);
                deficiency > wd
            }
        };
        if is_worse {
            self.worst = Some(WorstWitness {
                subset: subset.to_vec(),
                distinct_neighbors: distinct,
                required,
            });
        }
    }
}

fn enumerate_subsets(
    n: usize,
    s: usize,
    subset: &mut Vec<u32>,
    start: usize,
    f: &mut impl FnMut(&[u32]),
) {
    if subset.len() == s {
        f(subset);
        return;
    }
    let remaining = s - subset.len();
    for v in start..=n.saturating_sub(remaining) {
        subset.push(v as u32);
        enumerate_subsets(n, s, subset, v + 1, f);
        subset.pop();
    }
}

fn sample_subset(n: usize, s: usize, rng: &mut impl Rng) -> Vec<u32> {
    let mut chosen: Vec<u32> = Vec::with_capacity(s);
    while chosen.len() < s {
        let v = rng.gen_range(0..n as u32);
        if !chosen.contains(&v) {
            chosen.push(v);
        }
    }
    chosen.sort_unstable();
    chosen
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// The set word map induced by a bipartite graph: one word per right vertex,
/// the concatenation of the input words of its left neighbors in left order,
/// multi-edges contributing multiplicity. Output words are freely reduced.
pub fn upsilon(g: &BipartiteGraph, input: &WordSet) -> Result<WordSet> {
    if input.words.len() != g.n {
        return Err(Error::SizeMismatch {
            what: "upsilon input words",
            expected: g.n,
            got: input.words.len(),
        });
    }
    let words: Vec<Word> = g
        .right_neighbor_lists()
        .into_iter()
        .map(|nbrs| {
            let mut w = Word::identity();
            for v in nbrs {
                w = w.concat(&input.words[v as usize]);
            }
            w.reduce()
        })
        .collect();
    WordSet::new(input.rank, words, format!("upsilon[{}x{}]({})", g.n, g.m, input.label))
}

/// Degree, expansion-fraction and minimum-size parameters for which a random
/// left-regular graph is a lossless expander with positive probability:
/// the smallest integer degree at least `e`, `2/eps` and `1/beta`, with
/// `alpha = d^(-8/eps)` and `n0 = ceil(1/alpha)`.
#[derive(Clone, Debug)]
pub struct LosslessParams {
    pub d: u64,
    pub alpha: BigRational,
    pub n0: BigUint,
}

pub fn lossless_params(beta: Ratio<u64>, epsilon: Ratio<u64>) -> Result<LosslessParams> {
    if beta <= Ratio::new(0, 1) || beta > Ratio::new(1, 1) {
        return Err(Error::InvalidParams("beta must lie in (0, 1]".into()));
    }
    if epsilon <= Ratio::new(0, 1) || epsilon >= Ratio::new(1, 2) {
        return Err(Error::InvalidParams("epsilon must lie in (0, 1/2)".into()));
    }
    let d_eps = (Ratio::new(2, 1) / epsilon).ceil().to_integer();
    let d_beta = beta.recip().ceil().to_integer();
    let d = 3u64.max(d_eps).max(d_beta); // 3 = ceil(e)

    // exponent 8/eps, rounded up when fractional (smaller alpha stays valid)
    let exponent = (Ratio::new(8, 1) / epsilon).ceil().to_integer();
    let d_pow = BigUint::from(d).pow(exponent as u32);
    let alpha = BigRational::new(
        num_bigint::BigInt::one(),
        num_bigint::BigInt::from(d_pow.clone()),
    );
    Ok(LosslessParams { d, alpha, n0: d_pow })
}

/// The reference constants for the doubling construction:
/// `d = 16`, `alpha = 2^-128`, `n0 = 2^128` (a valid, non-minimal choice
/// for `beta = 1/2`, `eps = 1/4`).
pub fn doubling_reference_params() -> LosslessParams {
    let n0 = BigUint::from(2u64).pow(128);
    LosslessParams {
        d: 16,
        alpha: BigRational::new(num_bigint::BigInt::one(), num_bigint::BigInt::from(n0.clone())),
        n0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cert(g: &BipartiteGraph, alpha: Ratio<u64>, eps: Ratio<u64>, s_max: usize) -> ExpanderCert {
        verify_unique_neighbors(g, alpha, eps, s_max, 0)
    }

    #[test]
    fn sample_shapes() {
        let mut rng = crate::rng::substream(1, "t");
        let g = sample_left_regular(16, 8, 4, &mut rng).unwrap();
        assert_eq!(g.adj.iter().map(|a| a.len()).sum::<usize>(), 64);

        let g1 = sample_left_regular(1, 1, 3, &mut rng).unwrap();
        assert_eq!(g1.adj, vec![vec![1, 1, 1]]);
    }

    #[test]
    fn sampling_is_deterministic_under_seed() {
        let mut r1 = crate::rng::substream(9, "graph");
        let mut r2 = crate::rng::substream(9, "graph");
        let a = sample_left_regular(12, 6, 3, &mut r1).unwrap();
        let b = sample_left_regular(12, 6, 3, &mut r2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn complete_bipartite_boundary_passes_at_half() {
        // K_{2,2} with d=2: S of both left vertices has 2 distinct neighbors,
        // and the threshold at eps=1/2 is (1/2)*2*2 = 2; boundary passes.
        let g = BipartiteGraph::new(2, 2, 2, vec![vec![1, 2], vec![1, 2]]).unwrap();
        let c = cert(&g, Ratio::new(1, 1), Ratio::new(1, 2), 2);
        assert!(c.pass);
        // but neither right vertex touches S exactly once
        assert!(!c.unique_ok);
    }

    #[test]
    fn shared_neighborhood_fails_below_half() {
        let g = BipartiteGraph::new(2, 4, 2, vec![vec![1, 2], vec![1, 2]]).unwrap();
        let c = cert(&g, Ratio::new(1, 1), Ratio::new(1, 4), 2);
        assert!(!c.pass, "two left vertices sharing all neighbors fail at |S|=2");
        let w = c.worst.unwrap();
        assert_eq!(w.subset, vec![0, 1]);
        assert_eq!(w.distinct_neighbors, 2);
    }

    #[test]
    fn verification_is_monotone() {
        let mut rng = crate::rng::substream(3, "mono");
        for _ in 0..5 {
            let g = sample_left_regular(12, 6, 3, &mut rng).unwrap();
            let strict = cert(&g, Ratio::new(1, 4), Ratio::new(1, 4), 4);
            if strict.pass {
                let looser_eps = cert(&g, Ratio::new(1, 4), Ratio::new(1, 2), 4);
                assert!(looser_eps.pass);
                let smaller_alpha = cert(&g, Ratio::new(1, 6), Ratio::new(1, 4), 4);
                assert!(smaller_alpha.pass);
            }
        }
    }

    #[test]
    fn upsilon_concatenates_in_left_order() {
        // input words [1],[2],[2],[3]; b1 sees the first two, b2 the last two:
        // output is {[1,2],[2,3]}
        let input = WordSet::new(
            3,
            vec![Word::generator(1), Word::generator(2), Word::generator(2), Word::generator(3)],
            "in",
        )
        .unwrap();
        let g = BipartiteGraph::new(4, 2, 1, vec![vec![1], vec![1], vec![2], vec![2]]).unwrap();
        let out = upsilon(&g, &input).unwrap();
        assert_eq!(out.words.len(), 2);
        assert_eq!(out.words[0].letters(), &[1, 2]);
        assert_eq!(out.words[1].letters(), &[2, 3]);
    }

    #[test]
    fn upsilon_multiplicity_and_empty() {
        // left vertex 1 has a double edge to b1; b2 untouched
        let g = BipartiteGraph::new(2, 2, 2, vec![vec![1, 1], vec![1, 1]]).unwrap();
        let input = WordSet::new(2, vec![Word::generator(2), Word::generator(2)], "in").unwrap();
        let out = upsilon(&g, &input).unwrap();
        assert_eq!(out.words[0].letters(), &[2, 2, 2, 2]);
        assert!(out.words[1].is_empty());
    }

    #[test]
    fn lossless_params_examples() {
        let p = lossless_params(Ratio::new(1, 1), Ratio::new(1, 4)).unwrap();
        assert_eq!(p.d, 8);
        assert_eq!(p.n0, BigUint::from(8u64).pow(32));

        let p = lossless_params(Ratio::new(1, 3), Ratio::new(1, 3)).unwrap();
        assert_eq!(p.d, 6);
        assert_eq!(p.n0, BigUint::from(6u64).pow(24));

        let p = lossless_params(Ratio::new(1, 2), Ratio::new(1, 4)).unwrap();
        assert_eq!(p.d, 8, "minimum degree for beta=1/2, eps=1/4");

        let r = doubling_reference_params();
        assert_eq!(r.d, 16);
        assert_eq!(r.n0, BigUint::from(2u64).pow(128));
        assert_eq!(
            r.alpha,
            BigRational::new(1.into(), num_bigint::BigInt::from(2u64).pow(128))
        );
    }

    #[test]
    fn graph_json_round_trip() {
        let mut rng = crate::rng::substream(4, "json");
        let g = sample_left_regular(6, 3, 2, &mut rng).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.contains("\"n\":6") && s.contains("\"adj\""));
        let back: BipartiteGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(g, back);
    }
}
