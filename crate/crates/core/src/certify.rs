//! Certificates lower-bounding the detection probability of a word set in
//! the free group, without enumerating subgroups.
//!
//! The engine is the one-occurrence rule: a product with exactly one factor
//! outside a subgroup lies outside it. For a syndrome `C` (the set of
//! generator indices outside some subgroup), every stored word whose total
//! occurrence count of `C`-letters is exactly one is certified outside every
//! subgroup with that syndrome. Occurrences are counted in the stored,
//! unreduced letter sequence — reduction could cancel a pair of `C`-letters
//! and invalidate the argument — with signs ignored.
//!
//! Sets shaped as a full subset-closure over an ordered base additionally
//! carry a matching certificate of value 1/2: pairing each subset `S` with
//! `S + {i}` exhibits quotients `x_{S+i} x_S^-1` conjugate to the base word
//! `x_i` by a prefix over smaller indices.

use crate::abelian;
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::words::{length_stats, LengthStats, Word, WordSet};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// Letter-occurrence structure of one word, for rank <= 64: `once` marks
/// indices occurring exactly once in the stored sequence, `multi` those
/// occurring at least twice. Signs are ignored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WordMask {
    pub once: u64,
    pub multi: u64,
}

pub fn word_masks(ws: &WordSet) -> Result<Vec<WordMask>> {
    if ws.rank > 64 {
        return Err(Error::CapExceeded {
            what: "occurrence bitmasks",
            needed: ws.rank as u128,
            cap: 64,
        });
    }
    Ok(ws
        .words
        .iter()
        .map(|w| {
            let mut once = 0u64;
            let mut multi = 0u64;
            for &l in w.letters() {
                let bit = 1u64 << (l.unsigned_abs() - 1);
                if once & bit != 0 {
                    multi |= bit;
                    once &= !bit;
                } else if multi & bit == 0 {
                    once |= bit;
                }
            }
            WordMask { once, multi }
        })
        .collect())
}

#[inline]
fn mask_certified(m: &WordMask, c: u64) -> bool {
    m.multi & c == 0 && (m.once & c).count_ones() == 1
}

/// Number of words whose total occurrence count of letters with index in
/// `syndrome` (1-based, signs ignored, multiplicity counted in the stored
/// sequence) is exactly one. Every such word lies outside the union of
/// subgroups with that syndrome.
pub fn one_occurrence_count(ws: &WordSet, syndrome: &[u32]) -> u64 {
    ws.words
        .iter()
        .filter(|w| w.occurrences_in(syndrome) == 1)
        .count() as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertMode {
    Exhaustive,
    /// evidence only: sampled syndromes do not certify
    Sampled { trials: u64 },
}

/// Per-syndrome one-occurrence counts, summarized: the minimizing syndrome,
/// its count, and a histogram of counts over all checked syndromes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SyndromeCertificate {
    pub k: usize,
    pub set_size: u64,
    pub delta_lower: Ratio<u64>,
    pub min_count: u64,
    /// 1-based indices of a minimizing syndrome
    pub min_syndrome: Vec<u32>,
    /// count -> number of syndromes with that count
    pub histogram: BTreeMap<u64, u64>,
    pub mode: CertMode,
}

#[derive(Clone, Debug)]
pub struct CertifyOpts {
    /// exhaustive scan allowed while 2^k fits this many bits
    pub exhaustive_max_k: usize,
    /// random syndromes per size in sampled mode
    pub sampled_per_size: u64,
    pub seed: u64,
    pub threads: usize,
}

impl Default for CertifyOpts {
    fn default() -> Self {
        CertifyOpts { exhaustive_max_k: 24, sampled_per_size: 200, seed: 0, threads: 1 }
    }
}

/// Exhaustive per-syndrome counts for all nonempty `C` (index = bitmask),
/// by k rounds of subset-sum transforms: for each position `i`, a word with
/// `i` occurring once and the rest of its support disjoint from `C` is
/// counted at every `C` containing `i`.
pub fn exhaustive_counts(masks: &[WordMask], k: usize) -> Vec<u32> {
    let full = 1usize << k;
    let all = (full - 1) as u64;
    let mut dedup: HashMap<(u64, u64), u32> = HashMap::new();
    for m in masks {
        *dedup.entry((m.once, m.multi)).or_insert(0) += 1;
    }
    let mut counts = vec![0u32; full];
    let mut layer = vec![0u32; full];
    for i in 0..k {
        let bit = 1u64 << i;
        layer.fill(0);
        for (&(once, multi), &mult) in &dedup {
            if once & bit != 0 {
                let rest = ((once & !bit) | multi) as usize;
                layer[rest] += mult;
            }
        }
        // subset-sum: layer[d] = sum over e subset of d
        for b in 0..k {
            let bbit = 1usize << b;
            for d in 0..full {
                if d & bbit != 0 {
                    layer[d] += layer[d ^ bbit];
                }
            }
        }
        for (c, cnt) in counts.iter_mut().enumerate().skip(1) {
            if c as u64 & bit != 0 {
                *cnt += layer[(!(c as u64)) as usize & all as usize];
            }
        }
    }
    counts
}

/// Per-syndrome counts by direct popcount scanning; the reference kernel for
/// [`exhaustive_counts`] and the engine of sampled mode.
pub fn scan_counts(masks: &[WordMask], k: usize, threads: usize) -> Vec<u32> {
    let full = 1usize << k;
    let mut dedup: HashMap<(u64, u64), u32> = HashMap::new();
    for m in masks {
        *dedup.entry((m.once, m.multi)).or_insert(0) += 1;
    }
    let items: Vec<(WordMask, u32)> = dedup
        .into_iter()
        .map(|((once, multi), mult)| (WordMask { once, multi }, mult))
        .collect();

    let count_range = |lo: usize, hi: usize, out: &mut [u32]| {
        for c in lo..hi {
            let cm = c as u64;
            let mut acc = 0u32;
            for (m, mult) in &items {
                if mask_certified(m, cm) {
                    acc += mult;
                }
            }
            out[c - lo] = acc;
        }
    };

    let mut counts = vec![0u32; full];
    if threads <= 1 || full < 1 << 12 {
        count_range(1, full, &mut counts[1..]);
    } else {
        let chunk = full.div_ceil(threads);
        let mut slices: Vec<&mut [u32]> = counts[1..].chunks_mut(chunk).collect();
        std::thread::scope(|scope| {
            let mut lo = 1usize;
            for s in slices.iter_mut() {
                let hi = lo + s.len();
                let range = (lo, hi);
                let slice: &mut [u32] = s;
                scope.spawn(move || count_range(range.0, range.1, slice));
                lo = hi;
            }
        });
    }
    counts
}

/// Lower bound on the detection probability in the free group: the minimum
/// over nonempty syndromes of the one-occurrence count divided by the set
/// size. Exhaustive for small rank, sampled (evidence only) above.
pub fn certified_delta(ws: &WordSet, opts: &CertifyOpts) -> Result<SyndromeCertificate> {
    let n = ws.words.len() as u64;
    let k = ws.rank;
    if k <= opts.exhaustive_max_k {
        let masks = word_masks(ws)?;
        // the transform kernel is fastest single-threaded; the popcount scan
        // splits across workers when asked (identical counts either way)
        let counts = if opts.threads > 1 {
            scan_counts(&masks, k, opts.threads)
        } else {
            exhaustive_counts(&masks, k)
        };
        let mut min_count = u64::MAX;
        let mut min_c = 0u64;
        let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
        for (c, &cnt) in counts.iter().enumerate().skip(1) {
            *histogram.entry(cnt as u64).or_insert(0) += 1;
            if (cnt as u64) < min_count {
                min_count = cnt as u64;
                min_c = c as u64;
            }
        }
        Ok(SyndromeCertificate {
            k,
            set_size: n,
            delta_lower: Ratio::new(min_count, n),
            min_count,
            min_syndrome: mask_to_indices(min_c),
            histogram,
            mode: CertMode::Exhaustive,
        })
    } else {
        let mut rng = crate::rng::substream(opts.seed, "certify/sampled");
        let mut min_count = u64::MAX;
        let mut min_syndrome = Vec::new();
        let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
        let mut trials = 0u64;
        use rand::seq::SliceRandom;
        let indices: Vec<u32> = (1..=k as u32).collect();
        for size in 1..=k {
            for _ in 0..opts.sampled_per_size {
                let mut c: Vec<u32> = indices
                    .choose_multiple(&mut rng, size)
                    .copied()
                    .collect();
                c.sort_unstable();
                let cnt = one_occurrence_count(ws, &c);
                *histogram.entry(cnt).or_insert(0) += 1;
                trials += 1;
                if cnt < min_count {
                    min_count = cnt;
                    min_syndrome = c;
                }
            }
        }
        Ok(SyndromeCertificate {
            k,
            set_size: n,
            delta_lower: Ratio::new(min_count, n),
            min_count,
            min_syndrome,
            histogram,
            mode: CertMode::Sampled { trials },
        })
    }
}

fn mask_to_indices(mask: u64) -> Vec<u32> {
    let mut out = Vec::new();
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() + 1);
        m &= m - 1;
    }
    out
}

// ---- matching certificate ----------------------------------------------------

/// Certificate for sets that are a full subset-closure over an ordered base:
/// the pairing `S <-> S + {i}` halves every subgroup's intersection, so the
/// detection probability is at least 1/2.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatchingCertificate {
    pub value: Ratio<u64>,
    pub base_size: usize,
    pub pairs_checked: u64,
    pub mode: CertMode,
    /// description of the verified pairing witness
    pub witness: String,
}

/// Recover the base tuple of a subset-closure: `|A| = 2^t`, word at index
/// `2^j` is base word `j`, and every word is the concatenation (stored
/// letters, no reduction) of its base words in increasing index order.
pub fn subset_closure_base(ws: &WordSet) -> Result<Vec<Word>> {
    let n = ws.words.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NotSubsetClosure(format!(
            "size {n} is not a power of two at least 2"
        )));
    }
    let t = n.trailing_zeros() as usize;
    if !ws.words[0].is_empty() {
        return Err(Error::NotSubsetClosure("word 0 is not empty".into()));
    }
    let base: Vec<Word> = (0..t).map(|j| ws.words[1 << j].clone()).collect();
    for m in 0..n {
        let mut expect = Word::identity();
        for (j, b) in base.iter().enumerate() {
            if m >> j & 1 == 1 {
                expect = expect.concat(b);
            }
        }
        if ws.words[m] != expect {
            return Err(Error::NotSubsetClosure(format!(
                "word {m} is not the ordered product of its base words"
            )));
        }
    }
    Ok(base)
}

/// Verify the matching certificate of a subset-closure: for every base
/// position `i` and every subset `S` avoiding `i`, the reduced quotient
/// `x_{S+i} x_S^-1` equals the conjugate `u x_i u^-1` with `u` the prefix of
/// `x_S` over positions below `i` (all outside the syndrome when `i` is its
/// minimum). Exhaustive for base size <= 12, sampled above.
pub fn hadamard_matching_certificate(ws: &WordSet, seed: u64) -> Result<MatchingCertificate> {
    let base = subset_closure_base(ws)?;
    let t = base.len();

    let check_pair = |i: usize, s: u64| -> bool {
        let mut with = Word::identity();
        let mut without = Word::identity();
        let mut prefix = Word::identity();
        for (j, b) in base.iter().enumerate() {
            let in_s = s >> j & 1 == 1;
            if in_s {
                without = without.concat(b);
            }
            if in_s || j == i {
                with = with.concat(b);
            }
            if in_s && j < i {
                prefix = prefix.concat(b);
            }
        }
        let lhs = with.concat(&without.inverse()).reduce();
        let rhs = prefix.concat(&base[i]).concat(&prefix.inverse()).reduce();
        lhs == rhs
    };

    let mut pairs_checked = 0u64;
    let mode = if t <= 12 {
        for i in 0..t {
            let free_positions: Vec<usize> = (0..t).filter(|&j| j != i).collect();
            for bits in 0..(1u64 << (t - 1)) {
                let mut s = 0u64;
                for (b, &j) in free_positions.iter().enumerate() {
                    if bits >> b & 1 == 1 {
                        s |= 1 << j;
                    }
                }
                if !check_pair(i, s) {
                    return Err(Error::NotSubsetClosure(format!(
                        "conjugation identity fails at i={i}, S mask {s:#x}"
                    )));
                }
                pairs_checked += 1;
            }
        }
        CertMode::Exhaustive
    } else {
        use rand::Rng;
        let mut rng = crate::rng::substream(seed, "matching/sampled");
        let trials = 4096u64;
        for _ in 0..trials {
            let i = rng.gen_range(0..t);
            let s = rng.gen::<u64>() & ((1u64 << t) - 1) & !(1u64 << i);
            if !check_pair(i, s) {
                return Err(Error::NotSubsetClosure(format!(
                    "conjugation identity fails at i={i}, S mask {s:#x}"
                )));
            }
            pairs_checked += 1;
        }
        CertMode::Sampled { trials }
    };

    Ok(MatchingCertificate {
        value: Ratio::new(1, 2),
        base_size: t,
        pairs_checked,
        mode,
        witness: format!(
            "perfect matching S <-> S+{{i}} over {t} base words; quotients conjugate to base words by prefixes over smaller indices"
        ),
    })
}

// ---- aggregate report --------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct BackendDelta {
    pub backend: String,
    pub delta: Ratio<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectionReport {
    pub n: u64,
    pub k: usize,
    pub rate: Ratio<u64>,
    pub length: LengthStats,
    pub syndrome: SyndromeCertificate,
    pub matching: Option<MatchingCertificate>,
    pub backends: Vec<BackendDelta>,
    /// the rate a random linear code of this certified distance would allow
    pub gv_rate_at_delta: f64,
}

/// Aggregate everything known about a word set: certificates, exact deltas on
/// the requested finite backends, length statistics, and the rate/distance
/// point against the random-coding bound.
pub fn report(ws: &WordSet, backends: &[&FiniteGroup], opts: &CertifyOpts) -> Result<DetectionReport> {
    let syndrome = certified_delta(ws, opts)?;
    let matching = hadamard_matching_certificate(ws, opts.seed).ok();
    let mut backend_deltas = Vec::new();
    for g in backends {
        backend_deltas.push(BackendDelta {
            backend: g.describe(),
            delta: g.exact_delta_words(ws)?,
        });
    }
    let delta = syndrome.delta_lower.to_f64().unwrap();
    let gv_rate_at_delta = if delta < 0.5 {
        1.0 - abelian::gv_entropy(2, delta)?
    } else {
        0.0
    };
    Ok(DetectionReport {
        n: ws.words.len() as u64,
        k: ws.rank,
        rate: Ratio::new(ws.rank as u64, ws.words.len() as u64),
        length: length_stats(ws),
        syndrome,
        matching,
        backends: backend_deltas,
        gv_rate_at_delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[i32]) -> Word {
        Word::new(letters.to_vec()).unwrap()
    }

    fn ws(rank: usize, words: &[&[i32]]) -> WordSet {
        WordSet::new(rank, words.iter().map(|l| w(l)).collect(), "t").unwrap()
    }

    #[test]
    fn one_occurrence_examples() {
        let a = ws(2, &[&[1], &[2], &[1, 2]]);
        assert_eq!(one_occurrence_count(&a, &[1]), 2);
        assert_eq!(one_occurrence_count(&a, &[1, 2]), 2);
        let b = ws(1, &[&[1, 1]]);
        assert_eq!(one_occurrence_count(&b, &[1]), 0);
    }

    #[test]
    fn one_occurrence_is_sign_blind() {
        let a = ws(2, &[&[1], &[2], &[1, 2]]);
        let flipped = ws(2, &[&[-1], &[2], &[-1, -2]]);
        for c in [vec![1u32], vec![2], vec![1, 2]] {
            assert_eq!(one_occurrence_count(&a, &c), one_occurrence_count(&flipped, &c));
        }
    }

    #[test]
    fn certified_delta_examples() {
        let a = ws(2, &[&[1], &[2], &[1, 2]]);
        let cert = certified_delta(&a, &CertifyOpts::default()).unwrap();
        assert_eq!(cert.delta_lower, Ratio::new(2, 3));
        assert_eq!(cert.mode, CertMode::Exhaustive);

        for k in 2..=6 {
            let basis = WordSet::basis(k);
            let cert = certified_delta(&basis, &CertifyOpts::default()).unwrap();
            assert_eq!(cert.delta_lower, Ratio::new(1, k as u64), "basis of rank {k}");
            assert_eq!(cert.min_syndrome.len(), 1, "minimum at a singleton");
        }

        let ident = WordSet::new(1, vec![Word::identity()], "id").unwrap();
        let cert = certified_delta(&ident, &CertifyOpts::default()).unwrap();
        assert_eq!(cert.delta_lower, Ratio::new(0, 1));
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn transform_matches_scan() {
        let mut rng = crate::rng::substream(2, "kernel-agree");
        use rand::Rng;
        for _ in 0..20 {
            let k = rng.gen_range(1..8usize);
            let n = rng.gen_range(1..40usize);
            let words: Vec<Word> = (0..n)
                .map(|_| {
                    let len = rng.gen_range(0..10usize);
                    Word::new(
                        (0..len)
                            .map(|_| {
                                let idx = rng.gen_range(1..=k as i32);
                                if rng.gen() {
                                    idx
                                } else {
                                    -idx
                                }
                            })
                            .collect(),
                    )
                    .unwrap()
                })
                .collect();
            let set = WordSet::new(k, words, "rand").unwrap();
            let masks = word_masks(&set).unwrap();
            let fast = exhaustive_counts(&masks, k);
            let slow = scan_counts(&masks, k, 1);
            assert_eq!(fast[1..], slow[1..]);
            // and both match the letter-scanning definition
            for c in 1..(1usize << k) {
                let indices = mask_to_indices(c as u64);
                assert_eq!(fast[c] as u64, one_occurrence_count(&set, &indices));
            }
        }
    }

    #[test]
    fn scan_threads_deterministic() {
        let set = ws(4, &[&[1], &[2, 3], &[1, 2, 3, 4], &[4, 4]]);
        let masks = word_masks(&set).unwrap();
        assert_eq!(scan_counts(&masks, 4, 1), scan_counts(&masks, 4, 4));
    }

    #[test]
    fn union_counts_add() {
        let a = ws(3, &[&[1], &[2, 3]]);
        let b = ws(3, &[&[3], &[1, 2]]);
        let mut combined_words = a.words.clone();
        combined_words.extend(b.words.clone());
        let union = WordSet::new(3, combined_words, "union").unwrap();
        for c in 1..8u64 {
            let indices = mask_to_indices(c);
            assert_eq!(
                one_occurrence_count(&union, &indices),
                one_occurrence_count(&a, &indices) + one_occurrence_count(&b, &indices)
            );
        }
    }

    #[test]
    fn sampled_mode_kicks_in() {
        let set = WordSet::basis(30);
        let opts = CertifyOpts { exhaustive_max_k: 24, sampled_per_size: 5, seed: 3, threads: 1 };
        let cert = certified_delta(&set, &opts).unwrap();
        assert!(matches!(cert.mode, CertMode::Sampled { .. }));
    }

    #[test]
    fn subset_closure_detection() {
        // the closure over base ([1], [2]) in binary counting order
        let closure = ws(2, &[&[], &[1], &[2], &[1, 2]]);
        let base = subset_closure_base(&closure).unwrap();
        assert_eq!(base, vec![w(&[1]), w(&[2])]);

        let not_closure = ws(2, &[&[], &[1], &[2], &[2, 1]]);
        assert!(subset_closure_base(&not_closure).is_err());
        let wrong_size = ws(2, &[&[1], &[2], &[1, 2]]);
        assert!(subset_closure_base(&wrong_size).is_err());
    }

    #[test]
    fn matching_certificate_small() {
        let closure = ws(1, &[&[], &[1]]);
        let cert = hadamard_matching_certificate(&closure, 0).unwrap();
        assert_eq!(cert.value, Ratio::new(1, 2));
        assert_eq!(cert.base_size, 1);

        // k=2: the quotient x_{12} x_{1}^-1 reduces to [1,2,-1], a conjugate
        // of x_2 by the prefix [1]
        let closure = ws(2, &[&[], &[1], &[2], &[1, 2]]);
        let cert = hadamard_matching_certificate(&closure, 0).unwrap();
        assert_eq!(cert.value, Ratio::new(1, 2));
        assert_eq!(cert.pairs_checked, 4);
        let quotient = w(&[1, 2]).concat(&w(&[1]).inverse()).reduce();
        assert_eq!(quotient, w(&[1, 2, -1]));
    }

    #[test]
    fn report_on_basis() {
        let basis = WordSet::basis(2);
        let g = FiniteGroup::zmr(2, 2).unwrap();
        let rep = report(&basis, &[&g], &CertifyOpts::default()).unwrap();
        assert_eq!(rep.syndrome.delta_lower, Ratio::new(1, 2));
        assert_eq!(rep.backends[0].delta, Ratio::new(1, 2));
        assert!(rep.matching.is_none(), "a bare basis is not a subset closure");
    }

    #[test]
    fn report_on_subset_closure() {
        let a = crate::constructions::hadamard_code(4).unwrap();
        let g = FiniteGroup::zmr(2, 4).unwrap();
        let rep = report(&a, &[&g], &CertifyOpts::default()).unwrap();
        assert_eq!(rep.n, 16);
        assert_eq!(rep.rate, Ratio::new(1, 4));
        assert_eq!(rep.matching.as_ref().unwrap().value, Ratio::new(1, 2));
        assert_eq!(rep.backends[0].delta, Ratio::new(1, 2));
    }

    #[test]
    fn report_on_identity_only_set() {
        let a = WordSet::new(2, vec![Word::identity()], "id").unwrap();
        let g = FiniteGroup::zmr(2, 2).unwrap();
        let rep = report(&a, &[&g], &CertifyOpts::default()).unwrap();
        assert_eq!(rep.syndrome.delta_lower, Ratio::new(0, 1));
        assert_eq!(rep.backends[0].delta, Ratio::new(0, 1));
    }
}
