//! Test-subset generators: the subset-product (Hadamard-style) code, random
//! syndrome sampling, amplification by sub-sampling and closure, iterated
//! composition, and the expander-driven doubling chain.
//!
//! Randomized constructions are deterministic functions of their parameters
//! and seed, and resample whole batches until the construction's certificate
//! clears its target; the output carries the achieved certificate.

use crate::certify::{
    certified_delta, word_masks, CertifyOpts, SyndromeCertificate, WordMask,
};
use crate::error::{Error, Result};
use crate::expanders::{
    sample_left_regular, upsilon, verify_unique_neighbors, BipartiteGraph, ExpanderCert,
};
use crate::groups::{exact_delta_vector_space, sampled_delta_vector_space};
use crate::words::{length_stats, Word, WordSet};
use num_bigint::BigUint;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Default cap on the rank of the subset-product code (2^k words).
pub const DEFAULT_HADAMARD_CAP: usize = 20;

/// A rational strictly below 2/e = 0.735758882342885..., used as the
/// uncertified-fraction gate in amplification (slightly stricter is sound).
pub fn two_over_e_floor() -> Ratio<u64> {
    Ratio::new(735_758_882, 1_000_000_000)
}

/// ceil(log2 k) for k >= 1.
fn ceil_log2(k: usize) -> usize {
    if k <= 1 {
        1
    } else {
        (usize::BITS - (k - 1).leading_zeros()) as usize
    }
}

// ---- subset-product code ---------------------------------------------------

/// One word per subset S of {1..k}: the product of the generators of S in
/// increasing index order, enumerated in binary counting order on S.
/// Size 2^k, maximum length k, detection probability at least 1/2 in every
/// group (matching certificate).
pub fn hadamard_code(k: usize) -> Result<WordSet> {
    hadamard_code_capped(k, DEFAULT_HADAMARD_CAP)
}

pub fn hadamard_code_capped(k: usize, cap: usize) -> Result<WordSet> {
    if k == 0 {
        return Err(Error::InvalidParams("rank must be positive".into()));
    }
    if k > cap {
        return Err(Error::CapExceeded { what: "subset-product rank", needed: k as u128, cap: cap as u128 });
    }
    let words = (0..1u64 << k)
        .map(|mask| {
            let letters: Vec<i32> = (0..k)
                .filter(|&j| mask >> j & 1 == 1)
                .map(|j| (j + 1) as i32)
                .collect();
            Word::new(letters).unwrap()
        })
        .collect();
    WordSet::new(k, words, format!("hadamard(k={k})"))
}

/// The full subset-closure of an ordered word tuple: one word per subset of
/// positions, the concatenation of the tuple words in position order, in
/// binary counting order. Stored unreduced to preserve the product structure
/// the certificates count.
pub fn subset_closure(tuple: &[Word], rank: usize, label: &str) -> Result<WordSet> {
    let t = tuple.len();
    if t > 30 {
        return Err(Error::CapExceeded { what: "subset closure", needed: t as u128, cap: 30 });
    }
    let words = (0..1u64 << t)
        .map(|mask| {
            let mut w = Word::identity();
            for (j, tw) in tuple.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    w = w.concat(tw);
                }
            }
            w
        })
        .collect();
    WordSet::new(rank, words, label.to_string())
}

// ---- random syndrome construction -------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SyndromeParams {
    pub k: usize,
    /// words per level (432 at reference scale)
    pub c: u64,
    pub seed: u64,
    /// certificate target; `None` means 1 / (12 * ceil(log2 k))
    pub target: Option<Ratio<u64>>,
    pub max_resamples: u32,
    /// namespace for the random stream, so nested constructions stay independent
    pub stream: Option<String>,
}

impl SyndromeParams {
    pub fn new(k: usize, c: u64, seed: u64) -> Self {
        SyndromeParams { k, c, seed, target: None, max_resamples: 5, stream: None }
    }

    pub fn levels(&self) -> usize {
        ceil_log2(self.k)
    }

    pub fn effective_target(&self) -> Ratio<u64> {
        self.target
            .unwrap_or_else(|| Ratio::new(1, 12 * self.levels() as u64))
    }
}

#[derive(Clone, Debug)]
pub struct CertifiedWordSet {
    pub words: WordSet,
    pub certificate: SyndromeCertificate,
    pub attempts: u32,
}

/// For each level `l = 1..ceil(log2 k)`, sample `c * k` subset words with
/// each index included independently with probability `2^-l`; resample the
/// whole construction until the exhaustive one-occurrence certificate clears
/// the target. Empty samples yield the identity word and are kept.
pub fn random_syndrome_code(p: &SyndromeParams) -> Result<CertifiedWordSet> {
    if p.k < 2 {
        return Err(Error::InvalidParams("syndrome construction needs k >= 2".into()));
    }
    let levels = p.levels();
    let target = p.effective_target();
    let stream = p.stream.clone().unwrap_or_else(|| format!("syndrome/k{}", p.k));
    let mut best: Option<CertifiedWordSet> = None;

    for attempt in 0..p.max_resamples {
        let mut rng = crate::rng::substream(p.seed, &format!("{stream}/attempt/{attempt}"));
        let mut words = Vec::with_capacity(levels * (p.c as usize) * p.k);
        for level in 1..=levels {
            let denom = 1u64 << level;
            for _ in 0..p.c * p.k as u64 {
                let letters: Vec<i32> = (1..=p.k as i32)
                    .filter(|_| rng.gen_range(0..denom) == 0)
                    .collect();
                words.push(Word::new(letters).unwrap());
            }
        }
        let set = WordSet::new(
            p.k,
            words,
            format!("syndrome(k={},c={},levels={levels},seed={},attempt={attempt})", p.k, p.c, p.seed),
        )?;
        let certificate = certified_delta(&set, &CertifyOpts::default())?;
        let candidate = CertifiedWordSet { words: set, certificate, attempts: attempt + 1 };
        if candidate.certificate.delta_lower >= target {
            return Ok(candidate);
        }
        if best
            .as_ref()
            .is_none_or(|b| candidate.certificate.delta_lower > b.certificate.delta_lower)
        {
            best = Some(candidate);
        }
    }
    let best = best.unwrap();
    Err(Error::CertificationFailed {
        attempts: p.max_resamples,
        best_delta: best.certificate.delta_lower.to_string(),
        target: target.to_string(),
    })
}

// ---- amplification -----------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmplifyParams {
    /// certified detection probability of the input (gates the subset size)
    pub delta_in: Ratio<u64>,
    /// group-count factor (61 at reference scale)
    pub c_amp: u64,
    pub seed: u64,
    pub max_resamples: u32,
}

/// Certificate produced by amplification: per syndrome, at most
/// `worst_uncertified` of the sampled subsets contain no certified word, so
/// the closure of each remaining subset loses at most half to any subgroup
/// with that syndrome.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmplifiedCertificate {
    pub delta_lower: Ratio<u64>,
    pub worst_uncertified: Ratio<u64>,
    /// 1-based indices of the worst syndrome
    pub worst_syndrome: Vec<u32>,
    pub groups: u64,
    pub subset_size: u64,
}

#[derive(Clone, Debug)]
pub struct AmplifiedOutput {
    pub words: WordSet,
    pub certificate: AmplifiedCertificate,
    pub attempts: u32,
}

/// Sample `c_amp * k` subsets of size `d = ceil(1/delta_in)` from the input
/// and replace each by its subset closure; resample until for every nonempty
/// syndrome at most a 2/e fraction of the subsets are entirely uncertified
/// against it. Output size is `c_amp * k * 2^d` with certified detection
/// probability at least `(1/2)(1 - 2/e)`.
pub fn amplify(a: &WordSet, p: &AmplifyParams) -> Result<AmplifiedOutput> {
    if p.delta_in <= Ratio::new(0, 1) || p.delta_in > Ratio::new(1, 1) {
        return Err(Error::InvalidParams("delta_in must lie in (0, 1]".into()));
    }
    let input_cert = certified_delta(a, &CertifyOpts::default())?;
    if input_cert.delta_lower < p.delta_in {
        return Err(Error::InvalidParams(format!(
            "input certificate {} below declared delta {}",
            input_cert.delta_lower, p.delta_in
        )));
    }
    let d = p.delta_in.recip().ceil().to_integer() as usize;
    let masks = word_masks(a)?;
    amplify_verified(a, &masks, d, p.c_amp, a.rank, p.seed, "amplify", p.max_resamples)
}

/// Core of [`amplify`], also used per node by the iterated composition:
/// the caller guarantees the input is certified at the delta implying `d`.
#[allow(clippy::too_many_arguments)]
fn amplify_verified(
    a: &WordSet,
    masks: &[WordMask],
    d: usize,
    c_amp: u64,
    k: usize,
    seed: u64,
    stream: &str,
    max_resamples: u32,
) -> Result<AmplifiedOutput> {
    if a.rank > 24 {
        return Err(Error::CapExceeded {
            what: "amplification syndrome scan",
            needed: a.rank as u128,
            cap: 24,
        });
    }
    if d == 0 || d > a.words.len() {
        return Err(Error::InvalidParams(format!(
            "subset size {d} outside 1..={}",
            a.words.len()
        )));
    }
    let groups = (c_amp * k as u64) as usize;
    let gate = two_over_e_floor();
    let mut best_worst: Option<Ratio<u64>> = None;

    for attempt in 0..max_resamples {
        let mut rng = crate::rng::substream(seed, &format!("{stream}/attempt/{attempt}"));
        let positions: Vec<usize> = (0..a.words.len()).collect();
        let selections: Vec<Vec<usize>> = (0..groups)
            .map(|_| {
                let mut sel: Vec<usize> =
                    positions.choose_multiple(&mut rng, d).copied().collect();
                sel.sort_unstable();
                sel
            })
            .collect();

        // per syndrome: fraction of subsets with no certified word
        let full = 1u64 << a.rank;
        let mut worst = Ratio::new(0u64, 1);
        let mut worst_c = 0u64;
        for c in 1..full {
            let uncertified = selections
                .iter()
                .filter(|sel| {
                    !sel.iter().any(|&pos| {
                        let m = &masks[pos];
                        m.multi & c == 0 && (m.once & c).count_ones() == 1
                    })
                })
                .count() as u64;
            let frac = Ratio::new(uncertified, groups as u64);
            if frac > worst {
                worst = frac;
                worst_c = c;
            }
        }

        if worst <= gate {
            let mut words = Vec::with_capacity(groups << d);
            for sel in &selections {
                let tuple: Vec<Word> = sel.iter().map(|&pos| a.words[pos].clone()).collect();
                let closure = subset_closure(&tuple, a.rank, "psi")?;
                words.extend(closure.words);
            }
            let set = WordSet::new(
                a.rank,
                words,
                format!("amplified(d={d},groups={groups},seed={seed},attempt={attempt};{})", a.label),
            )?;
            let delta_lower = (Ratio::new(1u64, 1) - worst) / Ratio::new(2u64, 1);
            return Ok(AmplifiedOutput {
                words: set,
                certificate: AmplifiedCertificate {
                    delta_lower,
                    worst_uncertified: worst,
                    worst_syndrome: mask_indices(worst_c),
                    groups: groups as u64,
                    subset_size: d as u64,
                },
                attempts: attempt + 1,
            });
        }
        if best_worst.is_none_or(|b| worst < b) {
            best_worst = Some(worst);
        }
    }
    let best = best_worst.unwrap();
    Err(Error::CertificationFailed {
        attempts: max_resamples,
        best_delta: ((Ratio::new(1u64, 1) - best) / Ratio::new(2u64, 1)).to_string(),
        target: ((Ratio::new(1u64, 1) - gate) / Ratio::new(2u64, 1)).to_string(),
    })
}

fn mask_indices(mask: u64) -> Vec<u32> {
    let mut out = Vec::new();
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() + 1);
        m &= m - 1;
    }
    out
}

// ---- iterated composition -----------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComposeParams {
    pub k: usize,
    /// composition depth; t = 1 is syndrome sampling followed by amplification
    pub t: u32,
    /// syndrome words per level
    pub c: u64,
    /// subset-group factor
    pub c_amp: u64,
    /// subset size per node is `subset_factor * ceil(log2 rank)` (12 at reference scale)
    pub subset_factor: u64,
    pub seed: u64,
    pub max_resamples: u32,
    pub size_budget: u64,
}

impl ComposeParams {
    /// Reference-scale constants: c = 432, c_amp = 61, subset_factor = 12.
    pub fn paper(k: usize, t: u32, seed: u64) -> Self {
        ComposeParams {
            k,
            t,
            c: 432,
            c_amp: 61,
            subset_factor: 12,
            seed,
            max_resamples: 8,
            size_budget: 1 << 24,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComposeCertificate {
    pub t: u32,
    pub delta_lower: Ratio<u64>,
    /// worst per-node uncertified fraction at each depth
    pub per_level_worst: Vec<Ratio<u64>>,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub struct ComposeOutput {
    pub words: WordSet,
    pub certificate: ComposeCertificate,
    pub formula_size: BigUint,
}

/// The exact output size of the composition: the product over levels of the
/// subset-group counts, times the closure size of the last level.
pub fn compose_size_formula(k: usize, t: u32, c_amp: u64, subset_factor: u64) -> BigUint {
    let mut size = BigUint::from(1u64);
    let mut rank = k;
    for _ in 0..t {
        size *= BigUint::from(c_amp) * BigUint::from(rank as u64);
        rank = (subset_factor as usize) * ceil_log2(rank);
    }
    size << rank
}

struct ComposeStats {
    per_level_worst: Vec<Ratio<u64>>,
    nodes: u64,
}

/// The t-level composition: at each node over rank `s`, sample a syndrome
/// code, pick `c_amp * s` subsets of size `subset_factor * ceil(log2 s)`
/// certified as in amplification, and recurse on each subset as an abstract
/// tuple, closing with the subset closure at the last level. The certified
/// detection probability is at least `(1/2) (1 - 2/e)^t`.
pub fn iterative_compose(p: &ComposeParams) -> Result<ComposeOutput> {
    if p.t == 0 {
        return Err(Error::InvalidParams("composition depth must be >= 1".into()));
    }
    let formula_size = compose_size_formula(p.k, p.t, p.c_amp, p.subset_factor);
    if formula_size > BigUint::from(p.size_budget) {
        return Err(Error::CapExceeded {
            what: "composition size",
            needed: 0,
            cap: p.size_budget as u128,
        });
    }
    let mut stats = ComposeStats { per_level_worst: vec![Ratio::new(0, 1); p.t as usize], nodes: 0 };
    let words = compose_node(p.k, p.t, p, "compose", &mut stats)?;
    debug_assert_eq!(BigUint::from(words.words.len() as u64), formula_size);

    let mut delta = Ratio::new(1u64, 2);
    for worst in &stats.per_level_worst {
        delta *= Ratio::new(1u64, 1) - *worst;
    }
    Ok(ComposeOutput {
        words,
        certificate: ComposeCertificate {
            t: p.t,
            delta_lower: delta,
            per_level_worst: stats.per_level_worst,
            nodes: stats.nodes,
        },
        formula_size,
    })
}

fn compose_node(
    s: usize,
    t: u32,
    p: &ComposeParams,
    path: &str,
    stats: &mut ComposeStats,
) -> Result<WordSet> {
    stats.nodes += 1;
    let d = (p.subset_factor as usize) * ceil_log2(s);
    let lambda = random_syndrome_code(&SyndromeParams {
        k: s,
        c: p.c,
        seed: p.seed,
        target: Some(Ratio::new(1, d as u64)),
        max_resamples: p.max_resamples,
        stream: Some(format!("{path}/lambda")),
    })?;
    let masks = word_masks(&lambda.words)?;
    let groups = (p.c_amp * s as u64) as usize;
    let gate = two_over_e_floor();

    let level = (p.t - t) as usize;
    for attempt in 0..p.max_resamples {
        let mut rng = crate::rng::substream(p.seed, &format!("{path}/select/attempt/{attempt}"));
        let positions: Vec<usize> = (0..lambda.words.words.len()).collect();
        let selections: Vec<Vec<usize>> = (0..groups)
            .map(|_| {
                let mut sel: Vec<usize> = positions.choose_multiple(&mut rng, d).copied().collect();
                sel.sort_unstable();
                sel
            })
            .collect();

        let full = 1u64 << s;
        let mut worst = Ratio::new(0u64, 1);
        for c in 1..full {
            let uncertified = selections
                .iter()
                .filter(|sel| {
                    !sel.iter().any(|&pos| {
                        let m = &masks[pos];
                        m.multi & c == 0 && (m.once & c).count_ones() == 1
                    })
                })
                .count() as u64;
            worst = worst.max(Ratio::new(uncertified, groups as u64));
        }
        if worst > gate {
            continue;
        }
        stats.per_level_worst[level] = stats.per_level_worst[level].max(worst);

        let mut words = Vec::new();
        for (j, sel) in selections.iter().enumerate() {
            let tuple: Vec<Word> = sel.iter().map(|&pos| lambda.words.words[pos].clone()).collect();
            if t == 1 {
                let closure = subset_closure(&tuple, s, "leaf")?;
                words.extend(closure.words);
            } else {
                let inner = compose_node(d, t - 1, p, &format!("{path}/{j}"), stats)?;
                for w in &inner.words {
                    words.push(substitute_concat(w, &tuple));
                }
            }
        }
        return WordSet::new(s, words, format!("compose(rank={s},t={t})"));
    }
    Err(Error::CertificationFailed {
        attempts: p.max_resamples,
        best_delta: "-".into(),
        target: format!("uncertified fraction <= {gate} at every syndrome"),
    })
}

/// Substitution preserving the product structure (no reduction): the words
/// this crate constructs are positive, so this matches the reduced form.
fn substitute_concat(w: &Word, tuple: &[Word]) -> Word {
    let mut out = Word::identity();
    for &l in w.letters() {
        let idx = l.unsigned_abs() as usize - 1;
        if l > 0 {
            out = out.concat(&tuple[idx]);
        } else {
            out = out.concat(&tuple[idx].inverse());
        }
    }
    out
}

// ---- expander doubling chain ---------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpielmanParams {
    pub k0: usize,
    pub steps: u32,
    /// left degree of the sampled graphs
    pub d: usize,
    pub epsilon: Ratio<u64>,
    /// verified subset size per graph (alpha = subset_target / left size)
    pub subset_target: usize,
    pub s_max: usize,
    pub seed: u64,
    pub max_graph_resamples: u32,
}

impl SpielmanParams {
    /// Desk-scale defaults: small degree, boundary epsilon, pairs verified
    /// exhaustively. The reference asymptotic constants (d = 16,
    /// alpha = 2^-128) make the property vacuous at any buildable size.
    pub fn desk(k0: usize, steps: u32, seed: u64) -> Self {
        SpielmanParams {
            k0,
            steps,
            d: 3,
            epsilon: Ratio::new(1, 2),
            subset_target: 2,
            s_max: 4,
            seed,
            max_graph_resamples: 2000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpielmanStepReport {
    pub step: u32,
    pub rank: usize,
    pub size: usize,
    pub max_len: usize,
    pub graph_small_attempts: u32,
    pub graph_large_attempts: u32,
    /// exact detection probability in the mod-2 quotient (rank <= 16)
    pub delta_f2_exact: Option<Ratio<u64>>,
    /// sampled upper-bound evidence above that
    pub delta_f2_sampled: Option<Ratio<u64>>,
}

#[derive(Clone, Debug)]
pub struct SpielmanChainOutput {
    pub set: WordSet,
    pub reports: Vec<SpielmanStepReport>,
    /// the set after every step, starting with the base set
    pub intermediates: Vec<WordSet>,
}

/// One doubling step: from a size-4k set over rank k and verified graphs
/// with left sides 2k and 4k, build basis + (set word map applied to the
/// graph words) + (graph words of that), a size-8k set over rank 2k whose
/// first 2k entries are the standard basis.
pub fn spielman_step(
    a: &WordSet,
    g2k: &BipartiteGraph,
    g4k: &BipartiteGraph,
) -> Result<WordSet> {
    let k = a.rank;
    if a.words.len() != 4 * k {
        return Err(Error::SizeMismatch { what: "input set size", expected: 4 * k, got: a.words.len() });
    }
    if g2k.n != 2 * k || g2k.m != k {
        return Err(Error::SizeMismatch { what: "small graph sides", expected: 2 * k, got: g2k.n });
    }
    if g4k.n != 4 * k || g4k.m != 2 * k {
        return Err(Error::SizeMismatch { what: "large graph sides", expected: 4 * k, got: g4k.n });
    }
    let basis = WordSet::basis(2 * k);
    let d_words = upsilon(g2k, &basis)?;
    debug_assert_eq!(d_words.words.len(), k);
    let e_words = a.set_word_map(&d_words)?;
    debug_assert_eq!(e_words.words.len(), 4 * k);
    let f_words = upsilon(g4k, &e_words)?;
    debug_assert_eq!(f_words.words.len(), 2 * k);

    let mut words = basis.words;
    words.extend(e_words.words);
    words.extend(f_words.words);
    WordSet::new(2 * k, words, format!("doubling-step(k={k} -> {})", 2 * k))
}

/// Iterate the doubling step from four copies of the basis, sampling and
/// verifying both graphs per step (strong expansion at the configured
/// threshold and the unique-neighbor condition). Records per-step mod-2
/// quotient evidence.
pub fn spielman_chain(p: &SpielmanParams) -> Result<SpielmanChainOutput> {
    if p.k0 == 0 {
        return Err(Error::InvalidParams("base rank must be positive".into()));
    }
    let basis = WordSet::basis(p.k0);
    let mut words = Vec::with_capacity(4 * p.k0);
    for _ in 0..4 {
        words.extend(basis.words.clone());
    }
    let mut current = WordSet::new(p.k0, words, format!("doubling-base(k0={})", p.k0))?;
    let mut intermediates = vec![current.clone()];
    let mut reports = Vec::new();

    for step in 1..=p.steps {
        let k = current.rank;
        let (g2k, small_attempts) =
            sample_verified_graph(2 * k, k, p, &format!("chain/step{step}/small"))?;
        let (g4k, large_attempts) =
            sample_verified_graph(4 * k, 2 * k, p, &format!("chain/step{step}/large"))?;
        current = spielman_step(&current, &g2k, &g4k)?;
        let stats = length_stats(&current);
        let (exact, sampled) = if current.rank <= 16 {
            (Some(exact_delta_vector_space(&current, 2, 1 << 24)?), None)
        } else {
            (None, Some(sampled_delta_vector_space(&current, 2, 20_000, p.seed)?))
        };
        reports.push(SpielmanStepReport {
            step,
            rank: current.rank,
            size: current.words.len(),
            max_len: stats.max_len,
            graph_small_attempts: small_attempts,
            graph_large_attempts: large_attempts,
            delta_f2_exact: exact,
            delta_f2_sampled: sampled,
        });
        intermediates.push(current.clone());
    }
    Ok(SpielmanChainOutput { set: current, reports, intermediates })
}

fn sample_verified_graph(
    n: usize,
    m: usize,
    p: &SpielmanParams,
    stream: &str,
) -> Result<(BipartiteGraph, u32)> {
    // the chain needs the distinct-neighbor expansion bound; the
    // unique-neighbor condition is only required on the code-building path
    let alpha = Ratio::new(p.subset_target as u64, n as u64);
    let (g, _, attempts) = sample_verified(
        n,
        m,
        p.d,
        alpha,
        p.epsilon,
        p.s_max,
        false,
        p.seed,
        p.max_graph_resamples,
        stream,
    )?;
    Ok((g, attempts))
}

/// Sample left-regular graphs until one passes verification: the
/// distinct-neighbor expansion bound, plus the unique-neighbor condition
/// when `require_unique` is set (needed whenever the graph feeds the
/// integer-code construction).
#[allow(clippy::too_many_arguments)]
pub fn sample_verified(
    n: usize,
    m: usize,
    d: usize,
    alpha: Ratio<u64>,
    epsilon: Ratio<u64>,
    s_max: usize,
    require_unique: bool,
    seed: u64,
    max_resamples: u32,
    stream: &str,
) -> Result<(BipartiteGraph, ExpanderCert, u32)> {
    for attempt in 0..max_resamples {
        let mut rng = crate::rng::substream(seed, &format!("{stream}/attempt/{attempt}"));
        let g = sample_left_regular(n, m, d, &mut rng)?;
        let cert = verify_unique_neighbors(&g, alpha, epsilon, s_max, seed);
        if cert.pass && (!require_unique || cert.unique_ok) {
            return Ok((g, cert, attempt + 1));
        }
    }
    Err(Error::CertificationFailed {
        attempts: max_resamples,
        best_delta: "-".into(),
        target: format!("verified {n}x{m} graph at alpha={alpha}"),
    })
}
