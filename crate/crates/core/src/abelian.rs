//! Integer parity maps from bipartite graphs, exact integer kernel bases,
//! and the resulting generator matrices that are good codes modulo every
//! prime simultaneously.
//!
//! All kernel computations use arbitrary-precision integer arithmetic; no
//! floating point touches a matrix entry.

use crate::error::{Error, Result};
use crate::expanders::{BipartiteGraph, ExpanderCert};
use crate::groups::{is_prime, Element, FiniteGroup};
use crate::words::WordSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::from(1));
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidParams("ragged rows".into()));
        }
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        Ok(m)
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch {
                what: "matrix product inner dimension",
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Largest bit length over all entries.
    pub fn entry_bits(&self) -> u64 {
        self.entries.iter().map(|e| e.bits()).max().unwrap_or(0)
    }

    /// Entries reduced into `0..p`, as machine words.
    pub fn entries_mod_p(&self, p: u64) -> Vec<u64> {
        let bp = BigInt::from(p);
        self.entries
            .iter()
            .map(|e| e.mod_floor(&bp).to_u64().unwrap())
            .collect()
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// col_dst -= q * col_src
    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, dst) - q * self.get(r, src);
            self.set(r, dst, v);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }
}

// serde representation with stringified entries, preserving arbitrary precision
#[derive(Serialize, Deserialize)]
struct IntMatrixDto {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).to_string()).collect())
            .collect();
        IntMatrixDto { rows: self.rows, cols: self.cols, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let dto = IntMatrixDto::deserialize(d)?;
        if dto.entries.len() != dto.rows {
            return Err(D::Error::custom("row count mismatch"));
        }
        let mut m = IntMatrix::zero(dto.rows, dto.cols);
        for (r, row) in dto.entries.iter().enumerate() {
            if row.len() != dto.cols {
                return Err(D::Error::custom("column count mismatch"));
            }
            for (c, s) in row.iter().enumerate() {
                let v: BigInt = s.parse().map_err(|_| D::Error::custom("bad integer"))?;
                m.set(r, c, v);
            }
        }
        Ok(m)
    }
}

/// Column echelon form over the integers via gcd elimination.
/// Returns `(echelon, transform, rank)` with `echelon = m * transform`,
/// `transform` unimodular; pivot entries positive and entries left of each
/// pivot reduced modulo it.
pub fn column_hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.cols);
    let mut pivot_col = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new();

    for row in 0..a.rows {
        if pivot_col == a.cols {
            break;
        }
        loop {
            // column with smallest nonzero magnitude at this row
            let mut best: Option<(usize, BigInt)> = None;
            for c in pivot_col..a.cols {
                let v = a.get(row, c);
                if !v.is_zero() {
                    let mag = v.abs();
                    if best.as_ref().is_none_or(|(_, b)| mag < *b) {
                        best = Some((c, mag));
                    }
                }
            }
            let Some((c, _)) = best else { break };
            a.swap_cols(pivot_col, c);
            u.swap_cols(pivot_col, c);
            let mut done = true;
            for c in pivot_col + 1..a.cols {
                if !a.get(row, c).is_zero() {
                    let q = a.get(row, c) / a.get(row, pivot_col);
                    a.sub_col(c, pivot_col, &q);
                    u.sub_col(c, pivot_col, &q);
                    if !a.get(row, c).is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                if a.get(row, pivot_col).is_negative() {
                    a.negate_col(pivot_col);
                    u.negate_col(pivot_col);
                }
                pivots.push((row, pivot_col));
                pivot_col += 1;
                break;
            }
        }
    }

    // reduce entries left of each pivot into [0, pivot)
    for &(row, col) in &pivots {
        let pivot = a.get(row, col).clone();
        for c in 0..col {
            let v = a.get(row, c);
            if !v.is_zero() {
                let q = v.div_floor(&pivot);
                a.sub_col(c, col, &q);
                u.sub_col(c, col, &q);
            }
        }
    }

    (a, u, pivots.len())
}

/// A basis of the integer kernel of `m`, as matrix columns. The number of
/// columns is `n - rank_Q(m) >= n - rows`, and `m * basis = 0` exactly.
/// The returned basis is itself in column echelon form so entries stay small.
pub fn integer_kernel_basis(m: &IntMatrix) -> IntMatrix {
    let (echelon, transform, rank) = column_hnf(m);
    let k = m.cols - rank;
    let mut kernel = IntMatrix::zero(m.cols, k);
    for (out_c, c) in (rank..m.cols).enumerate() {
        debug_assert!((0..echelon.rows).all(|r| echelon.get(r, c).is_zero()));
        for r in 0..m.cols {
            kernel.set(r, out_c, transform.get(r, c).clone());
        }
    }
    if k == 0 {
        return kernel;
    }
    let (reduced, _, reduced_rank) = column_hnf(&kernel);
    debug_assert_eq!(reduced_rank, k);
    reduced
}

/// Rank of the matrix over F_p.
pub fn mod_p_rank(m: &IntMatrix, p: u64) -> usize {
    let mut a = m.entries_mod_p(p);
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
            continue;
        };
        for j in 0..cols {
            a.swap(rank * cols + j, pr * cols + j);
        }
        let inv = mod_inverse(a[rank * cols + c], p);
        for j in 0..cols {
            a[rank * cols + j] = a[rank * cols + j] * inv % p;
        }
        for r in 0..rows {
            if r != rank && a[r * cols + c] != 0 {
                let f = a[r * cols + c];
                for j in 0..cols {
                    let sub = f * a[rank * cols + j] % p;
                    a[r * cols + j] = (a[r * cols + j] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime and a != 0 mod p
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Whether the columns of `b` stay linearly independent over F_p.
pub fn mod_p_independence(b: &IntMatrix, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(mod_p_rank(b, p) == b.cols)
}

/// The integer parity map of a bipartite graph: an `m x n` matrix whose
/// `(w, v)` entry is the multiplicity of edge `(v, w)`. Applied to a vector
/// indexed by the left side it sums neighbor values (with multiplicity).
pub fn parity_matrix(g: &BipartiteGraph) -> IntMatrix {
    let mut m = IntMatrix::zero(g.m, g.n);
    for (v, nbrs) in g.adj.iter().enumerate() {
        for &b in nbrs {
            let r = (b - 1) as usize;
            let cur = m.get(r, v) + 1;
            m.set(r, v, cur);
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistanceMethod {
    Exact,
    /// upper bound from random messages; not a certificate
    Sampled { trials: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistanceResult {
    pub distance: u64,
    pub method: DistanceMethod,
}

/// Minimum Hamming weight of `gen * msg mod p` over nonzero messages.
/// Exact when `p^k` fits the budget, otherwise a sampled upper bound.
#[allow(clippy::needless_range_loop)]
pub fn distance_exact(gen: &IntMatrix, p: u64, budget: u64) -> Result<DistanceResult> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (n, k) = (gen.rows, gen.cols);
    if k == 0 {
        return Err(Error::InvalidParams("generator matrix has no columns".into()));
    }
    let total = (p as u128).checked_pow(k as u32);
    let exact = total.is_some_and(|t| t <= budget as u128);
    let cols_mod: Vec<Vec<u64>> = {
        let flat = gen.entries_mod_p(p);
        (0..k)
            .map(|c| (0..n).map(|r| flat[r * k + c]).collect())
            .collect()
    };

    if !exact {
        let trials = budget.max(1);
        let mut rng = crate::rng::substream(p, "distance/sampled");
        let mut best = u64::MAX;
        use rand::Rng;
        for _ in 0..trials {
            let msg: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
            if msg.iter().all(|&d| d == 0) {
                continue;
            }
            let mut wt = 0u64;
            for r in 0..n {
                let mut acc = 0u64;
                for c in 0..k {
                    acc = (acc + cols_mod[c][r] * msg[c]) % p;
                }
                if acc != 0 {
                    wt += 1;
                }
            }
            best = best.min(wt);
        }
        return Ok(DistanceResult { distance: best, method: DistanceMethod::Sampled { trials } });
    }

    if p == 2 && n <= 64 {
        // codeword as a bitmask, Gray-code walk over messages
        let col_masks: Vec<u64> = (0..k)
            .map(|c| {
                let mut msk = 0u64;
                for r in 0..n {
                    if cols_mod[c][r] != 0 {
                        msk |= 1 << r;
                    }
                }
                msk
            })
            .collect();
        let mut cw = 0u64;
        let mut best = u64::MAX;
        for msg in 1u64..(1u64 << k) {
            cw ^= col_masks[msg.trailing_zeros() as usize];
            best = best.min(cw.count_ones() as u64);
        }
        return Ok(DistanceResult { distance: best, method: DistanceMethod::Exact });
    }

    // reflected mixed-radix Gray walk: one digit changes by +-1 per step
    let mut digits = vec![0u64; k];
    let mut dirs = vec![1i64; k];
    let mut focus: Vec<usize> = (0..=k).collect();
    let mut cw = vec![0u64; n];
    let mut weight = 0u64;
    let mut best = u64::MAX;
    loop {
        let j = focus[0];
        focus[0] = 0;
        if j == k {
            break;
        }
        let dir = dirs[j];
        digits[j] = (digits[j] as i64 + dir) as u64;
        for r in 0..n {
            let col = cols_mod[j][r];
            if col == 0 {
                continue;
            }
            let old = cw[r];
            let new = if dir > 0 { (old + col) % p } else { (old + p - col) % p };
            cw[r] = new;
            weight += (new != 0) as u64;
            weight -= (old != 0) as u64;
        }
        if digits[j] == 0 || digits[j] == p - 1 {
            dirs[j] = -dirs[j];
            focus[j] = focus[j + 1];
            focus[j + 1] = j + 1;
        }
        best = best.min(weight);
    }
    Ok(DistanceResult { distance: best, method: DistanceMethod::Exact })
}

/// Abelianized generator matrix of a word set: row i is the exponent-sum
/// vector of word i.
pub fn generator_matrix(ws: &WordSet) -> IntMatrix {
    let mut m = IntMatrix::zero(ws.words.len(), ws.rank);
    for (i, w) in ws.words.iter().enumerate() {
        for (j, s) in w.exponent_sums(ws.rank).into_iter().enumerate() {
            m.set(i, j, BigInt::from(s));
        }
    }
    m
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrimeReport {
    pub p: u64,
    pub dimension: usize,
    pub min_distance: u64,
    pub method: DistanceMethod,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbelianCodeReport {
    pub n: usize,
    pub k: usize,
    pub alpha_target: Ratio<u64>,
    pub entry_bits: u64,
    pub primes: Vec<PrimeReport>,
}

#[derive(Clone, Debug)]
pub struct AbelianCodeOpts {
    pub primes: Vec<u64>,
    pub distance_budget: u64,
    pub sampled_trials: u64,
}

impl Default for AbelianCodeOpts {
    fn default() -> Self {
        AbelianCodeOpts {
            primes: vec![2, 3, 5, 7, 11],
            distance_budget: 1 << 24,
            sampled_trials: 100_000,
        }
    }
}

/// Build the simultaneous code of a verified graph: the integer kernel basis
/// of its parity map, checked per prime for full dimension and for minimum
/// distance at least the verified subset size (exactly where the enumeration
/// budget allows, sampled evidence otherwise).
///
/// The certificate must carry `pass` and `unique_ok`: the distance guarantee
/// rests on every small left subset having a right vertex it meets by exactly
/// one edge, which distinct-neighbor expansion alone does not give at the
/// `epsilon = 1/2` boundary.
pub fn build_abelian_code(
    g: &BipartiteGraph,
    cert: &ExpanderCert,
    opts: &AbelianCodeOpts,
) -> Result<(IntMatrix, AbelianCodeReport)> {
    if !(cert.pass && cert.unique_ok) {
        return Err(Error::GraphNotVerified);
    }
    let parity = parity_matrix(g);
    let kernel = integer_kernel_basis(&parity);
    let n = g.n;
    let k = kernel.cols;
    debug_assert!(k >= n.saturating_sub(g.m));

    let alpha_target = Ratio::new(cert.s_checked as u64, n as u64);
    let mut primes = Vec::new();
    for &p in &opts.primes {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let dimension = mod_p_rank(&kernel, p);
        let exact_possible = (p as u128).checked_pow(k as u32).is_some_and(|t| {
            t <= opts.distance_budget as u128
        });
        let dist = if exact_possible {
            distance_exact(&kernel, p, opts.distance_budget)?
        } else {
            distance_exact(&kernel, p, opts.sampled_trials)?
        };
        // the unique-neighbor argument makes any nonzero codeword of weight
        // <= s_checked impossible
        if dist.method == DistanceMethod::Exact && dist.distance <= cert.s_checked as u64 {
            return Err(Error::DistanceBelowTarget {
                p,
                distance: dist.distance,
                required: cert.s_checked as u64 + 1,
            });
        }
        if dimension != k {
            return Err(Error::InvalidParams(format!(
                "kernel basis dropped rank mod {p}: {dimension} < {k}"
            )));
        }
        primes.push(PrimeReport {
            p,
            dimension,
            min_distance: dist.distance,
            method: dist.method,
        });
    }
    let report = AbelianCodeReport {
        n,
        k,
        alpha_target,
        entry_bits: kernel.entry_bits(),
        primes,
    };
    Ok((kernel, report))
}

/// The p-ary entropy function `H_p(x) = x log_p(p-1) - x log_p x - (1-x) log_p(1-x)`,
/// with the endpoint limits `H_p(0) = 0` and `H_p(1) = log_p(p-1)`.
pub fn gv_entropy(p: u64, x: f64) -> Result<f64> {
    if p < 2 {
        return Err(Error::InvalidParams("entropy base must be >= 2".into()));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParams(format!("entropy argument {x} outside [0,1]")));
    }
    let logp = |y: f64| y.ln() / (p as f64).ln();
    let mut h = x * logp((p - 1) as f64);
    if x > 0.0 {
        h -= x * logp(x);
    }
    if x < 1.0 {
        h -= (1.0 - x) * logp(1.0 - x);
    }
    Ok(h)
}

#[derive(Clone, Debug, Serialize)]
pub struct GvSizeReport {
    /// ceil of the largest per-prime size estimate r(G,p) / (1 - H_p(delta))
    pub size: u64,
    pub per_prime: Vec<(u64, f64)>,
    /// the simpler k / (1 - H_2(delta)) bound with k the largest rank
    pub binary_bound: f64,
}

/// Size estimate for a random-code test subset of a finite abelian group
/// with elementary-abelian ranks `ranks[p] = r(G, p)` and target detection
/// probability `delta`. Requires `delta < 1 - 1/min p`.
pub fn gv_abelian_size(ranks: &BTreeMap<u64, u64>, delta: f64) -> Result<GvSizeReport> {
    if ranks.is_empty() {
        return Err(Error::InvalidParams("no prime ranks given".into()));
    }
    let min_p = *ranks.keys().next().unwrap();
    if !(0.0 < delta && delta < 1.0 - 1.0 / min_p as f64) {
        return Err(Error::InvalidParams(format!(
            "delta {delta} outside (0, 1 - 1/{min_p})"
        )));
    }
    let mut per_prime = Vec::new();
    let mut size = 0f64;
    for (&p, &r) in ranks {
        let est = r as f64 / (1.0 - gv_entropy(p, delta)?);
        per_prime.push((p, est));
        size = size.max(est);
    }
    let k = *ranks.values().max().unwrap();
    let binary_bound = k as f64 / (1.0 - gv_entropy(2, delta)?);
    Ok(GvSizeReport { size: size.ceil() as u64, per_prime, binary_bound })
}

/// Pair two equal-length tuples over groups of coprime order into a diagonal
/// tuple over the direct product. The detection probability of the output is
/// at least the smaller of the two inputs'.
pub fn coprime_combine(
    ga: &FiniteGroup,
    a: &[Element],
    gb: &FiniteGroup,
    b: &[Element],
) -> Result<(FiniteGroup, Vec<Element>)> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch { what: "tuple lengths", expected: a.len(), got: b.len() });
    }
    let gcd = (ga.order() as u64).gcd(&(gb.order() as u64));
    if gcd != 1 {
        return Err(Error::NonCoprime { gcd });
    }
    let product = FiniteGroup::product(ga.spec(), gb.spec())?;
    let tuple: Vec<Element> = a
        .iter()
        .zip(b)
        .map(|(x, y)| Element::Pair(Box::new(x.clone()), Box::new(y.clone())))
        .collect();
    for e in &tuple {
        if product.element_index(e).is_none() {
            return Err(Error::InvalidParams("combined element missing from product".into()));
        }
    }
    Ok((product, tuple))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::ElementRepr;

    #[test]
    fn parity_matrix_examples() {
        let single = BipartiteGraph::new(1, 1, 1, vec![vec![1]]).unwrap();
        assert_eq!(parity_matrix(&single), IntMatrix::from_rows_i64(&[vec![1]]).unwrap());

        let all = BipartiteGraph::new(3, 1, 1, vec![vec![1], vec![1], vec![1]]).unwrap();
        assert_eq!(parity_matrix(&all), IntMatrix::from_rows_i64(&[vec![1, 1, 1]]).unwrap());

        let double = BipartiteGraph::new(1, 1, 2, vec![vec![1, 1]]).unwrap();
        assert_eq!(parity_matrix(&double), IntMatrix::from_rows_i64(&[vec![2]]).unwrap());
    }

    #[test]
    fn kernel_of_sum_map() {
        let m = IntMatrix::from_rows_i64(&[vec![1, 1, 1]]).unwrap();
        let k = integer_kernel_basis(&m);
        assert_eq!(k.cols, 2);
        assert!(m.mul(&k).unwrap().is_zero());
        // rank over Q is 2: mod 2 rank equals 2
        assert_eq!(mod_p_rank(&k, 2), 2);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = IntMatrix::identity(2);
        assert_eq!(integer_kernel_basis(&m).cols, 0);
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        let m = IntMatrix::zero(1, 3);
        let k = integer_kernel_basis(&m);
        assert_eq!(k.cols, 3);
        assert!(mod_p_independence(&k, 2).unwrap());
    }

    #[test]
    fn kernel_is_saturated_not_just_independent() {
        // rows (2,0),(0,2) scaled: kernel of [2 2] over Z is span{(1,-1)},
        // not span{(2,-2)}
        let m = IntMatrix::from_rows_i64(&[vec![2, 2]]).unwrap();
        let k = integer_kernel_basis(&m);
        assert_eq!(k.cols, 1);
        let a = k.get(0, 0).clone();
        let b = k.get(1, 0).clone();
        assert_eq!(a.abs(), BigInt::from(1));
        assert_eq!(a + b, BigInt::zero());
    }

    #[test]
    fn mod_p_independence_examples() {
        let b = IntMatrix::from_rows_i64(&[vec![2], vec![2]]).unwrap();
        assert!(!mod_p_independence(&b, 2).unwrap(), "all-even column dies mod 2");
        assert!(mod_p_independence(&IntMatrix::identity(3), 5).unwrap());
        assert!(mod_p_independence(&IntMatrix::identity(3), 2).unwrap());
        assert!(mod_p_independence(&b, 4).is_err(), "4 is not prime");
    }

    #[test]
    fn kernel_mod_p_independent_for_many_primes() {
        let mut rng = crate::rng::substream(17, "kernel-primes");
        use rand::Rng;
        for _ in 0..10 {
            let rows = rng.gen_range(1..4usize);
            let cols = rng.gen_range(2..6usize);
            let m = IntMatrix::from_rows_i64(
                &(0..rows)
                    .map(|_| (0..cols).map(|_| rng.gen_range(-4..5i64)).collect())
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let k = integer_kernel_basis(&m);
            assert!(m.mul(&k).unwrap().is_zero());
            assert!(k.cols >= cols.saturating_sub(rows));
            for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
                71, 73, 79, 83, 89, 97, 101]
            {
                if k.cols > 0 {
                    assert!(mod_p_independence(&k, p).unwrap(), "p={p} m={m:?} k={k:?}");
                }
            }
        }
    }

    #[test]
    fn distance_of_hadamard_generator() {
        // rows 00,10,01,11 over F_2: the [4,2,2] code
        let g = IntMatrix::from_rows_i64(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let d = distance_exact(&g, 2, 1 << 24).unwrap();
        assert_eq!(d.distance, 2);
        assert_eq!(d.method, DistanceMethod::Exact);
    }

    #[test]
    fn distance_repetition_and_identity() {
        let rep = IntMatrix::from_rows_i64(&[vec![1], vec![1], vec![1]]).unwrap();
        assert_eq!(distance_exact(&rep, 2, 1 << 24).unwrap().distance, 3);
        let id = IntMatrix::identity(4);
        assert_eq!(distance_exact(&id, 2, 1 << 24).unwrap().distance, 1);
    }

    #[test]
    fn distance_gray_walk_matches_naive_for_odd_p() {
        let mut rng = crate::rng::substream(23, "distance-odd");
        use rand::Rng;
        for p in [3u64, 5, 7] {
            for _ in 0..12 {
                let n = rng.gen_range(2..7usize);
                let k = rng.gen_range(1..6usize);
                let m = IntMatrix::from_rows_i64(
                    &(0..n)
                        .map(|_| (0..k).map(|_| rng.gen_range(-3..4i64)).collect())
                        .collect::<Vec<_>>(),
                )
                .unwrap();
                let fast = distance_exact(&m, p, 1 << 24).unwrap().distance;
                // naive enumeration
                let flat = m.entries_mod_p(p);
                let total = (p as usize).pow(k as u32);
                let mut best = u64::MAX;
                for msg_id in 1..total {
                    let mut digits = vec![0u64; k];
                    let mut x = msg_id;
                    for d in digits.iter_mut() {
                        *d = (x % p as usize) as u64;
                        x /= p as usize;
                    }
                    let mut wt = 0u64;
                    for r in 0..n {
                        let mut acc = 0u64;
                        for c in 0..k {
                            acc = (acc + flat[r * k + c] * digits[c]) % p;
                        }
                        if acc != 0 {
                            wt += 1;
                        }
                    }
                    best = best.min(wt);
                }
                assert_eq!(fast, best, "p={p}");
            }
        }
    }

    #[test]
    fn gv_entropy_values() {
        assert!((gv_entropy(2, 0.5).unwrap() - 1.0).abs() < 1e-12);
        assert!((gv_entropy(3, 2.0 / 3.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((gv_entropy(2, 0.9).unwrap() - 0.4690).abs() < 1e-4);
        assert_eq!(gv_entropy(2, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn gv_size_report() {
        let mut ranks = BTreeMap::new();
        ranks.insert(2u64, 4u64);
        ranks.insert(3u64, 3u64);
        let rep = gv_abelian_size(&ranks, 0.25).unwrap();
        assert!(rep.size >= 4);
        assert!(gv_abelian_size(&ranks, 0.6).is_err(), "delta above 1 - 1/2");
    }

    #[test]
    fn four_vertex_toy_code_has_distance_two() {
        // two left pairs, each feeding its own parity check: the kernel code
        // mod 2 is spanned by (1,1,0,0) and (0,0,1,1), all nonzero codewords
        // of weight >= 2 = alpha * n at alpha = 1/2
        let g = BipartiteGraph::new(4, 2, 1, vec![vec![1], vec![1], vec![2], vec![2]]).unwrap();
        let kernel = integer_kernel_basis(&parity_matrix(&g));
        assert_eq!(kernel.cols, 2);
        for p in [2u64, 3] {
            let d = distance_exact(&kernel, p, 1 << 20).unwrap();
            assert_eq!(d.distance, 2, "p={p}");
        }
    }

    #[test]
    fn coprime_combine_preserves_delta_on_gv_style_inputs() {
        let z22 = FiniteGroup::zmr(2, 2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        // basis of Z_2^2 (delta 1/2) against a doubled generator of Z_3 (delta 1)
        let a = vec![
            z22.element_from_repr(&ElementRepr::Tuple(vec![1, 0])).unwrap(),
            z22.element_from_repr(&ElementRepr::Tuple(vec![0, 1])).unwrap(),
        ];
        let b = vec![
            z3.element_from_repr(&ElementRepr::Tuple(vec![1])).unwrap(),
            z3.element_from_repr(&ElementRepr::Tuple(vec![1])).unwrap(),
        ];
        let da = z22.exact_delta(&a).unwrap();
        let db = z3.exact_delta(&b).unwrap();
        assert_eq!(da, Ratio::new(1, 2));
        assert_eq!(db, Ratio::new(1, 1));
        let (product, tuple) = coprime_combine(&z22, &a, &z3, &b).unwrap();
        let dc = product.exact_delta(&tuple).unwrap();
        assert!(dc >= da.min(db));
        assert_eq!(dc, Ratio::new(1, 2));
    }

    #[test]
    fn coprime_combine_z2_z3() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let a = vec![z2.element_from_repr(&ElementRepr::Tuple(vec![1])).unwrap()];
        let b = vec![z3.element_from_repr(&ElementRepr::Tuple(vec![1])).unwrap()];
        let (product, tuple) = coprime_combine(&z2, &a, &z3, &b).unwrap();
        assert_eq!(product.order(), 6);
        assert_eq!(product.exact_delta(&tuple).unwrap(), Ratio::new(1, 1));
    }

    #[test]
    fn coprime_combine_rejects_common_factor() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let a = vec![z2.element_from_repr(&ElementRepr::Tuple(vec![1])).unwrap()];
        let b = vec![z4.element_from_repr(&ElementRepr::Tuple(vec![1])).unwrap()];
        assert!(coprime_combine(&z2, &a, &z4, &b).is_err());
    }

    #[test]
    fn coprime_combine_identity_inputs_give_zero_delta() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let a = vec![z2.identity().clone()];
        let b = vec![z3.identity().clone()];
        let (product, tuple) = coprime_combine(&z2, &a, &z3, &b).unwrap();
        assert_eq!(product.exact_delta(&tuple).unwrap(), Ratio::new(0, 1));
    }

    #[test]
    fn matrix_json_round_trip() {
        let mut m = IntMatrix::zero(2, 2);
        m.set(0, 0, BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap());
        m.set(1, 1, BigInt::from(-7));
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("123456789012345678901234567890"));
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
    }
}
