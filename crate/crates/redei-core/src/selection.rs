//! Uniform sampling of branch-point sets of fixed total degree.
//!
//! A *selection* is a subset of a weighted universe — here the closed points
//! of `P¹` over `F_q`, where a point of degree `i` has weight `i` — chosen
//! uniformly at random among all subsets of prescribed total weight `d`.
//! Branch loci of hyperelliptic curves of genus `g` are exactly the
//! selections of weight `2g + 2` (with `∞` counting as a degree-1 point).
//!
//! The sampler here is *exactly* uniform: subset counts are computed with
//! arbitrary-precision integers by dynamic programming over (weight,
//! running total), and per-weight multiplicities are drawn by exact
//! categorical draws against those counts.  A scaled-floating-point twin
//! ([`ApproxSelectionSampler`]) with relative error around `1e-12` is
//! provided for degree statistics at totals where the exact tables become
//! expensive; it is never used to sample curves.
//!
//! The module also provides the independent-binomial comparison model
//! (`Z_i ~ Binomial(m_i, q^{-i}/(1 + q^{-i}))`), the canonical ordering of
//! a degree multiset, and the checker for the degree conditions `A₁`–`A₄`
//! under which the Rédei-matrix corank equidistributes.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::ffpoly;
use crate::redei::BranchPoint;

/// Errors from universe construction and sampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SelectionError {
    /// No subset of the universe has the requested total weight.
    Unsatisfiable { d: usize },
    /// The universe carries counts only, so concrete points cannot be drawn.
    NoIdentities,
    /// An excluded point is not a valid closed point of `P¹` over `F_q`
    /// (wrong field, non-monic, reducible) or appears twice.
    BadExclusion,
}

impl fmt::Display for SelectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectionError::Unsatisfiable { d } => {
                write!(f, "no subset of the universe has total weight {d}")
            }
            SelectionError::NoIdentities => {
                write!(f, "universe has counts only; point identities unavailable")
            }
            SelectionError::BadExclusion => write!(f, "invalid or duplicate excluded point"),
        }
    }
}

/// Möbius function values `μ(0..=n)` by a smallest-prime-factor sieve.
fn moebius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    let mut sieved = vec![false; n + 1];
    if n >= 1 {
        mu[0] = 0;
    }
    for p in 2..=n {
        if sieved[p] {
            continue;
        }
        // p is prime
        let mut m = p;
        while m <= n {
            sieved[m] = true;
            mu[m] = -mu[m];
            m += p;
        }
        if let Some(p2) = p.checked_mul(p) {
            let mut m = p2;
            while m <= n {
                mu[m] = 0;
                m += p2;
            }
        }
    }
    mu
}

/// Binomial coefficient `C(m, k)` for arbitrary-precision `m`.
pub fn binomial_coeff(m: &BigUint, k: usize) -> BigUint {
    let mut c = BigUint::one();
    for j in 0..k {
        let factor = if m <= &BigUint::from(j) {
            return BigUint::zero();
        } else {
            m - BigUint::from(j)
        };
        c = c * factor / BigUint::from(j + 1);
    }
    c
}

/// `a / b` as `f64` for arbitrary-precision operands (scaled to avoid
/// overflow; saturates to 0 or infinity for absurd exponent gaps).
fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let (ma, ea) = top_f64(a);
    let (mb, eb) = top_f64(b);
    let de = ea as i64 - eb as i64;
    if de > 1000 {
        f64::INFINITY
    } else if de < -1000 {
        0.0
    } else {
        (ma / mb) * libm::exp2(de as f64)
    }
}

/// Top 53-ish bits of `x` as `(mantissa, shift)` with `x ≈ mantissa · 2^shift`.
fn top_f64(x: &BigUint) -> (f64, u64) {
    let bits = x.bits();
    let sh = bits.saturating_sub(53);
    let top = (x >> sh).to_f64().expect("≤ 53 bits fits in f64");
    (top, sh)
}

/// The weighted universe of available points: `m_i` points of weight `i`.
///
/// For `P¹` over `F_q`: `m₁ = q + 1` (the monic linear polynomials plus
/// `∞`) and `m_i` is the number of monic irreducibles of degree `i`, minus
/// any excluded points.  A universe built by [`WeightedUniverse::toy`]
/// carries counts only and supports degree sampling but not point
/// identities.
#[derive(Debug, Clone)]
pub struct WeightedUniverse {
    q: u64,
    /// `counts[i] = m_i` for `1 ≤ i ≤ max_weight`; `counts[0] = 0`.
    counts: Vec<BigUint>,
    /// `Some(excluded)` for a `P¹` universe; `None` for an abstract one.
    excluded: Option<Vec<BranchPoint>>,
}

impl WeightedUniverse {
    /// The closed points of `P¹` over `F_q` of degree at most `max_weight`,
    /// minus the `excluded` points (which must be pairwise distinct valid
    /// points: `∞` or monic irreducibles over the same field).
    pub fn p1(
        q: u64,
        max_weight: usize,
        excluded: &[BranchPoint],
    ) -> Result<WeightedUniverse, SelectionError> {
        assert!(q >= 2, "field size must be at least 2");
        for (idx, p) in excluded.iter().enumerate() {
            if let BranchPoint::Finite(h) = p {
                if h.q() != q || !h.is_monic() || !ffpoly::is_irreducible(h) {
                    return Err(SelectionError::BadExclusion);
                }
            }
            if excluded[..idx].contains(p) {
                return Err(SelectionError::BadExclusion);
            }
        }
        let mu = moebius_table(max_weight);
        // powers[j] = q^j, built incrementally.
        let mut powers = Vec::with_capacity(max_weight + 1);
        powers.push(BigUint::one());
        for _ in 1..=max_weight {
            powers.push(powers.last().expect("nonempty") * q);
        }
        let mut counts = vec![BigUint::zero(); max_weight + 1];
        for i in 1..=max_weight {
            // Necklace formula (1/i)·Σ_{e|i} μ(e)·q^{i/e}.
            let mut pos = BigUint::zero();
            let mut neg = BigUint::zero();
            for e in 1..=i {
                if i % e != 0 {
                    continue;
                }
                match mu[e] {
                    1 => pos += &powers[i / e],
                    -1 => neg += &powers[i / e],
                    _ => {}
                }
            }
            counts[i] = (pos - neg) / BigUint::from(i);
        }
        if max_weight >= 1 {
            counts[1] += 1u32; // ∞
        }
        for p in excluded {
            let d = p.degree();
            if d <= max_weight {
                counts[d] -= 1u32;
            }
        }
        Ok(WeightedUniverse { q, counts, excluded: Some(excluded.to_vec()) })
    }

    /// An abstract universe given by explicit counts `(weight, m)`; `q` is
    /// only used as the parameter `y` of the comparison model.
    pub fn toy(q: u64, max_weight: usize, counts: &[(usize, u64)]) -> WeightedUniverse {
        let mut c = vec![BigUint::zero(); max_weight + 1];
        for &(w, m) in counts {
            assert!(1 <= w && w <= max_weight, "weight out of range");
            c[w] += m;
        }
        WeightedUniverse { q, counts: c, excluded: None }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn max_weight(&self) -> usize {
        self.counts.len() - 1
    }

    /// Number of available points of weight `i` (`0` above `max_weight`).
    pub fn m(&self, i: usize) -> BigUint {
        self.counts.get(i).cloned().unwrap_or_else(BigUint::zero)
    }

    /// The same universe with all weight-`w` points removed (used for the
    /// held-out counting identity; the result is abstract).
    pub fn without_weight(&self, w: usize) -> WeightedUniverse {
        let mut counts = self.counts.clone();
        if w < counts.len() {
            counts[w] = BigUint::zero();
        }
        WeightedUniverse { q: self.q, counts, excluded: None }
    }

    /// `θ_i = i·m_i·q^{-i}/(1 + q^{-i})`, the expected total weight
    /// contributed by weight-`i` points in the comparison model; tends to 1
    /// at rate `O(q^{-i/2})` for the full `P¹` universe.
    pub fn theta(&self, i: usize) -> f64 {
        let denom = ffpoly::q_pow(self.q, i) + 1u32;
        i as f64 * ratio_f64(&self.m(i), &denom)
    }
}

// ---------------------------------------------------------------------------
// Count arithmetic: exact (BigUint) and scaled floating point.
// ---------------------------------------------------------------------------

/// Arithmetic needed by the subset-count tables.  Implemented exactly by
/// `BigUint` and approximately by [`Fp`].
trait Count: Clone {
    fn zero_count() -> Self;
    fn one_count() -> Self;
    fn is_zero_count(&self) -> bool;
    fn from_biguint(x: &BigUint) -> Self;
    fn add_assign_ref(&mut self, rhs: &Self);
    /// `self = max(self − rhs, 0)`; exact counts never underflow here.
    fn sub_assign_clamped(&mut self, rhs: &Self);
    fn mul_ref(&self, rhs: &Self) -> Self;
    /// Draw an index with probability proportional to `weights[i]`.
    fn pick<R: Rng + ?Sized>(weights: &[Self], rng: &mut R) -> usize;
}

impl Count for BigUint {
    fn zero_count() -> Self {
        Zero::zero()
    }
    fn one_count() -> Self {
        One::one()
    }
    fn is_zero_count(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_biguint(x: &BigUint) -> Self {
        x.clone()
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn sub_assign_clamped(&mut self, rhs: &Self) {
        debug_assert!(&*self >= rhs, "exact subset counts must not underflow");
        *self -= rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn pick<R: Rng + ?Sized>(weights: &[Self], rng: &mut R) -> usize {
        let total: BigUint = weights.iter().sum();
        assert!(!total.is_zero(), "categorical draw over empty support");
        let mut r = rng.gen_biguint_below(&total);
        for (i, w) in weights.iter().enumerate() {
            if &r < w {
                return i;
            }
            r -= w;
        }
        unreachable!("r < total by construction")
    }
}

/// Scaled floating-point number `m · 2^(256·e)` with `m ∈ [1, 2^256)` or 0.
#[derive(Debug, Clone, Copy)]
struct Fp {
    m: f64,
    e: i64,
}

impl Fp {
    const ZERO: Fp = Fp { m: 0.0, e: 0 };

    fn chunk() -> f64 {
        libm::exp2(256.0)
    }

    fn normalise(mut self) -> Fp {
        if self.m <= 0.0 {
            return Fp::ZERO;
        }
        let up = Fp::chunk();
        while self.m >= up {
            self.m /= up;
            self.e += 1;
        }
        while self.m < 1.0 {
            self.m *= up;
            self.e -= 1;
        }
        self
    }

    /// `self` and `rhs` aligned to a common exponent (larger of the two);
    /// returns `(a, b, e)` with values `a·2^(256e)` and `b·2^(256e)`.
    fn aligned(&self, rhs: &Fp) -> (f64, f64, i64) {
        let e = self.e.max(rhs.e);
        let scale = |x: &Fp| {
            let d = x.e - e;
            if x.m == 0.0 || d < -3 {
                0.0
            } else {
                x.m * libm::exp2(256.0 * d as f64)
            }
        };
        (scale(self), scale(rhs), e)
    }
}

impl Count for Fp {
    fn zero_count() -> Self {
        Fp::ZERO
    }
    fn one_count() -> Self {
        Fp { m: 1.0, e: 0 }
    }
    fn is_zero_count(&self) -> bool {
        self.m == 0.0
    }
    fn from_biguint(x: &BigUint) -> Self {
        if Zero::is_zero(x) {
            return Fp::ZERO;
        }
        let (top, sh) = top_f64(x);
        let e = (sh / 256) as i64;
        let rem = (sh % 256) as f64;
        Fp { m: top * libm::exp2(rem), e }.normalise()
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        if rhs.m == 0.0 {
            return;
        }
        if self.m == 0.0 {
            *self = *rhs;
            return;
        }
        let (a, b, e) = self.aligned(rhs);
        *self = Fp { m: a + b, e }.normalise();
    }
    fn sub_assign_clamped(&mut self, rhs: &Self) {
        if rhs.m == 0.0 || self.m == 0.0 {
            if rhs.m != 0.0 {
                *self = Fp::ZERO;
            }
            return;
        }
        let (a, b, e) = self.aligned(rhs);
        *self = Fp { m: a - b, e }.normalise();
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.m == 0.0 || rhs.m == 0.0 {
            return Fp::ZERO;
        }
        Fp { m: self.m * rhs.m, e: self.e + rhs.e }.normalise()
    }
    fn pick<R: Rng + ?Sized>(weights: &[Self], rng: &mut R) -> usize {
        let emax = weights.iter().filter(|w| w.m != 0.0).map(|w| w.e).max();
        let emax = emax.expect("categorical draw over empty support");
        let scaled: Vec<f64> = weights
            .iter()
            .map(|w| {
                let d = w.e - emax;
                if w.m == 0.0 || d < -3 {
                    0.0
                } else {
                    w.m * libm::exp2(256.0 * d as f64)
                }
            })
            .collect();
        let total: f64 = scaled.iter().sum();
        let mut r = rng.gen::<f64>() * total;
        let mut last = 0;
        for (i, w) in scaled.iter().enumerate() {
            if *w > 0.0 {
                if r < *w {
                    return i;
                }
                r -= w;
                last = i;
            }
        }
        last
    }
}

// ---------------------------------------------------------------------------
// Subset-count tables and the deconvolution sampler.
// ---------------------------------------------------------------------------

/// Count table for a universe at total weight `d`, plus the per-weight
/// binomial rows `C(m_i, k)`.
struct Tables<T: Count> {
    d: usize,
    wmax: usize,
    /// `rows[i][k] = C(m_i, k)` for `0 ≤ k ≤ min(m_i, d/i)`.
    rows: Vec<Vec<T>>,
    /// `table[w]` = number of subsets of total weight `w` using weights
    /// `≤ wmax` (the full table after the build).
    table: Vec<T>,
}

impl<T: Count> Tables<T> {
    fn build(u: &WeightedUniverse, d: usize) -> Tables<T> {
        let wmax = u.max_weight().min(d);
        let mut rows: Vec<Vec<T>> = Vec::with_capacity(wmax + 1);
        rows.push(Vec::new());
        for i in 1..=wmax {
            let m = u.m(i);
            let kcap = d / i;
            // C(m, k) built iteratively; stops early once k exceeds m.
            let mut row_big = Vec::with_capacity(kcap + 1);
            row_big.push(BigUint::one());
            let mut c = BigUint::one();
            for k in 0..kcap {
                if m <= BigUint::from(k) {
                    break;
                }
                c = c * (&m - BigUint::from(k)) / BigUint::from(k + 1);
                row_big.push(c.clone());
            }
            rows.push(row_big.iter().map(T::from_biguint).collect());
        }
        let mut table = vec![T::zero_count(); d + 1];
        table[0] = T::one_count();
        for i in 1..=wmax {
            let row = &rows[i];
            // In-place convolution: descending w reads only not-yet-updated
            // lower entries.
            for w in (i..=d).rev() {
                let kmax = (w / i).min(row.len() - 1);
                let mut acc = table[w].clone();
                for k in 1..=kmax {
                    acc.add_assign_ref(&row[k].mul_ref(&table[w - i * k]));
                }
                table[w] = acc;
            }
        }
        Tables { d, wmax, rows, table }
    }

    /// Rewrite `work` from "counts with weights ≤ i" to "counts with
    /// weights < i" (ascending `w` reads already-rewritten entries).
    fn deconvolve_stage(&self, work: &mut [T], i: usize) {
        let row = &self.rows[i];
        for w in i..=self.d {
            let kmax = (w / i).min(row.len() - 1);
            for k in 1..=kmax {
                let t = row[k].mul_ref(&work[w - i * k]);
                work[w].sub_assign_clamped(&t);
            }
        }
    }

    /// One deconvolution pass serving a whole batch: returns per-sample
    /// ascending degree lists, or the indices that failed (possible only
    /// for the floating-point backend, with negligible probability).
    fn degrees_pass<R: Rng + ?Sized>(&self, batch: usize, rng: &mut R) -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut work = self.table.to_vec();
        let mut rem = vec![self.d; batch];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); batch];
        let mut weights: Vec<T> = Vec::new();
        for i in (1..=self.wmax).rev() {
            self.deconvolve_stage(&mut work, i);
            let row = &self.rows[i];
            for s in 0..batch {
                let w = rem[s];
                if w < i {
                    continue;
                }
                let kmax = (w / i).min(row.len() - 1);
                weights.clear();
                for k in 0..=kmax {
                    weights.push(row[k].mul_ref(&work[w - i * k]));
                }
                let k = T::pick(&weights, rng);
                rem[s] -= i * k;
                for _ in 0..k {
                    out[s].push(i);
                }
            }
        }
        let failed: Vec<usize> = (0..batch).filter(|&s| rem[s] != 0).collect();
        for o in &mut out {
            o.reverse(); // stages were visited in descending weight
        }
        (out, failed)
    }

    fn sample_degrees_batch<R: Rng + ?Sized>(&self, batch: usize, rng: &mut R) -> Vec<Vec<usize>> {
        let (mut out, mut failed) = self.degrees_pass(batch, rng);
        // Floating-point rounding can (with probability on the order of
        // 1e-12 per draw) strand a sample at a nonzero remainder; redraw.
        let mut retries = 0;
        while !failed.is_empty() {
            retries += 1;
            assert!(retries <= 8, "selection sampling failed to terminate");
            let (redo, still) = self.degrees_pass(failed.len(), rng);
            for (slot, degs) in failed.iter().zip(redo) {
                out[*slot] = degs;
            }
            failed = still.iter().map(|&j| failed[j]).collect();
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Public sampler API.
// ---------------------------------------------------------------------------

/// Number of subsets of the universe with total weight exactly `d`.
pub fn count_subsets(u: &WeightedUniverse, d: usize) -> BigUint {
    Tables::<BigUint>::build(u, d).table[d].clone()
}

/// A sampled selection: concrete points and their degree multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeMultiset {
    points: Vec<BranchPoint>,
    degrees: Vec<usize>,
}

impl DegreeMultiset {
    /// Wrap an explicit list of (distinct) points.
    pub fn from_points(points: Vec<BranchPoint>) -> DegreeMultiset {
        for (i, p) in points.iter().enumerate() {
            assert!(!points[..i].contains(p), "selection points must be distinct");
        }
        let mut degrees: Vec<usize> = points.iter().map(|p| p.degree()).collect();
        degrees.sort_unstable();
        DegreeMultiset { points, degrees }
    }

    pub fn points(&self) -> &[BranchPoint] {
        &self.points
    }

    /// Degrees in ascending order.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn total_degree(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// The canonical `(d₀; d₁ ≤ … ≤ d_n)` ordering of the degrees.
    pub fn ordered(&self) -> Option<OrderedDegrees> {
        order_degrees(&self.degrees)
    }
}

/// Exactly uniform sampler of selections of total weight `d`.
pub struct SelectionSampler {
    u: WeightedUniverse,
    t: Tables<BigUint>,
}

impl SelectionSampler {
    pub fn new(u: &WeightedUniverse, d: usize) -> Result<SelectionSampler, SelectionError> {
        let t = Tables::<BigUint>::build(u, d);
        if t.table[d].is_zero_count() {
            return Err(SelectionError::Unsatisfiable { d });
        }
        Ok(SelectionSampler { u: u.clone(), t })
    }

    /// Number of selections of the target weight.
    pub fn count(&self) -> &BigUint {
        &self.t.table[self.t.d]
    }

    /// Degree multisets (ascending) of `batch` independent uniform
    /// selections, served by a single deconvolution pass over the tables.
    pub fn sample_degrees_batch<R: Rng + ?Sized>(&self, batch: usize, rng: &mut R) -> Vec<Vec<usize>> {
        self.t.sample_degrees_batch(batch, rng)
    }

    pub fn sample_degrees<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        self.sample_degrees_batch(1, rng).pop().expect("batch of one")
    }

    /// A uniform selection with point identities (requires a `P¹` universe).
    pub fn sample_subset<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DegreeMultiset, SelectionError> {
        Ok(self.sample_subsets_batch(1, rng)?.pop().expect("batch of one"))
    }

    /// `batch` independent uniform selections with point identities.
    pub fn sample_subsets_batch<R: Rng + ?Sized>(
        &self,
        batch: usize,
        rng: &mut R,
    ) -> Result<Vec<DegreeMultiset>, SelectionError> {
        let excluded = self.u.excluded.as_ref().ok_or(SelectionError::NoIdentities)?;
        let all_degrees = self.t.sample_degrees_batch(batch, rng);
        let mut out = Vec::with_capacity(batch);
        for degrees in all_degrees {
            let mut points: Vec<BranchPoint> = Vec::with_capacity(degrees.len());
            let mut run = 0;
            while run < degrees.len() {
                let i = degrees[run];
                let mut k = 0;
                while run + k < degrees.len() && degrees[run + k] == i {
                    k += 1;
                }
                draw_points(self.u.q, i, k, excluded, &mut points, rng);
                run += k;
            }
            out.push(DegreeMultiset { points, degrees });
        }
        Ok(out)
    }
}

/// Enumerate the closed points of `P¹` of degree `i` (used for small pools).
fn points_of_degree(q: u64, i: usize) -> Vec<BranchPoint> {
    let mut pool: Vec<BranchPoint> = Vec::new();
    if i == 1 {
        pool.push(BranchPoint::Infinity);
    }
    for f in ffpoly::monic_polys(q, i) {
        if i == 1 || ffpoly::is_irreducible(&f) {
            pool.push(BranchPoint::Finite(f));
        }
    }
    pool
}

/// Draw `k` distinct uniform points of degree `i`, avoiding `excluded` and
/// anything already in `chosen`; appends to `chosen`.
fn draw_points<R: Rng + ?Sized>(
    q: u64,
    i: usize,
    k: usize,
    excluded: &[BranchPoint],
    chosen: &mut Vec<BranchPoint>,
    rng: &mut R,
) {
    let enumerable = (q as u128).checked_pow(i as u32).map(|n| n <= 1 << 15).unwrap_or(false);
    if enumerable {
        let mut pool: Vec<BranchPoint> = points_of_degree(q, i)
            .into_iter()
            .filter(|p| !excluded.contains(p) && !chosen.contains(p))
            .collect();
        assert!(pool.len() >= k, "counts promised more points than exist");
        // Partial Fisher–Yates.
        for j in 0..k {
            let pick = rng.gen_range(j..pool.len());
            pool.swap(j, pick);
        }
        chosen.extend(pool.into_iter().take(k));
    } else {
        // Rejection: the pool is astronomically larger than k.
        let mut drawn = 0;
        while drawn < k {
            let p = BranchPoint::Finite(ffpoly::random_monic_irreducible(q, i, rng));
            if !excluded.contains(&p) && !chosen.contains(&p) {
                chosen.push(p);
                drawn += 1;
            }
        }
    }
}

/// Approximate sampler of selection *degree* multisets, for totals where
/// the exact tables are too expensive.  Counts are kept as scaled floats
/// with relative error on the order of `1e-12`, so the sampled
/// distribution is within total-variation distance roughly `1e-9` of
/// uniform — negligible against every tolerance it is used with.  Curves
/// are never sampled through this type.
pub struct ApproxSelectionSampler {
    t: Tables<Fp>,
}

impl ApproxSelectionSampler {
    pub fn new(u: &WeightedUniverse, d: usize) -> Result<ApproxSelectionSampler, SelectionError> {
        let t = Tables::<Fp>::build(u, d);
        if t.table[d].is_zero_count() {
            return Err(SelectionError::Unsatisfiable { d });
        }
        Ok(ApproxSelectionSampler { t })
    }

    /// `log₂` of the subset count (diagnostic / cross-check).
    pub fn log2_count(&self) -> f64 {
        let c = &self.t.table[self.t.d];
        libm::log2(c.m) + 256.0 * c.e as f64
    }

    pub fn sample_degrees_batch<R: Rng + ?Sized>(&self, batch: usize, rng: &mut R) -> Vec<Vec<usize>> {
        self.t.sample_degrees_batch(batch, rng)
    }
}

// ---------------------------------------------------------------------------
// Independent-binomial comparison model.
// ---------------------------------------------------------------------------

/// Binomial(n, p) by inversion (means here are O(1)).
fn sample_binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    let nf = n as f64;
    let odds = p / (1.0 - p);
    let mut pmf = libm::exp(nf * libm::log1p(-p));
    let mut cdf = pmf;
    let u = rng.gen::<f64>();
    let mut k = 0u64;
    while u > cdf && k < n {
        pmf *= (nf - k as f64) / (k as f64 + 1.0) * odds;
        cdf += pmf;
        k += 1;
        if pmf < 1e-300 {
            break;
        }
    }
    k
}

/// Poisson(λ) by inversion (λ is O(1) here).
fn sample_poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    let mut pmf = libm::exp(-lambda);
    let mut cdf = pmf;
    let u = rng.gen::<f64>();
    let mut k = 0u64;
    while u > cdf {
        pmf *= lambda / (k as f64 + 1.0);
        cdf += pmf;
        k += 1;
        if pmf < 1e-300 {
            break;
        }
    }
    k
}

/// The independent-binomial model: for each weight `i`, draw
/// `Z_i ~ Binomial(m_i, p_i)` with `p_i = q^{-i}/(1 + q^{-i}) = 1/(q^i + 1)`
/// independently, and return the resulting degree multiset (ascending).
///
/// Used only for distributional comparison against the exact selection
/// sampler; when `m_i` exceeds `u64` the binomial is replaced by a Poisson
/// with the same mean (total-variation error below `q^{-i}`).
pub fn zi_model<R: Rng + ?Sized>(u: &WeightedUniverse, rng: &mut R) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 1..=u.max_weight() {
        let m = u.m(i);
        if Zero::is_zero(&m) {
            continue;
        }
        let denom = ffpoly::q_pow(u.q, i) + 1u32;
        let k = match m.to_u64() {
            Some(m64) => {
                let p = ratio_f64(&BigUint::one(), &denom);
                sample_binomial(m64, p, rng)
            }
            None => {
                let lambda = ratio_f64(&m, &denom);
                sample_poisson(lambda, rng)
            }
        };
        for _ in 0..k {
            out.push(i);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Degree ordering and the conditions A₁–A₄.
// ---------------------------------------------------------------------------

/// The canonical ordering of a branch-degree multiset: `d₀` minimises the
/// 2-adic valuation (ties by size), the rest are ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedDegrees {
    pub d0: usize,
    /// `d₁ ≤ … ≤ d_n`.
    pub rest: Vec<usize>,
    /// Whether `d₀` is odd (required for the Rédei-matrix machinery).
    pub d0_is_odd: bool,
}

/// Apply the ordering rules to a degree multiset; `None` when empty.
pub fn order_degrees(degrees: &[usize]) -> Option<OrderedDegrees> {
    let v2 = |d: usize| d.trailing_zeros();
    let (idx, &d0) = degrees.iter().enumerate().min_by_key(|&(_, &d)| (v2(d), d))?;
    let mut rest: Vec<usize> =
        degrees.iter().enumerate().filter(|&(i, _)| i != idx).map(|(_, &d)| d).collect();
    rest.sort_unstable();
    OrderedDegrees { d0, rest, d0_is_odd: d0 % 2 == 1 }.into()
}

/// Outcome of the degree-sequence conditions `A₁`–`A₄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conditions {
    /// `n ≥ (1 − γ)·log d` (natural log; `d` the total degree).
    pub a1: bool,
    /// At least `ε·n` of `d₀, …, d_n` are odd and at least `ε·n` are even.
    pub a2: bool,
    /// Some `1 ≤ i < √(log n)` has `d_i` odd.
    pub a3: bool,
    /// Every `i ≥ √(log n)` has `d_i ≥ 4·C(i, 2)`.
    pub a4: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.a1 && self.a2 && self.a3 && self.a4
    }
}

/// Evaluate `A₁`–`A₄` for an ordered degree sequence of total degree `d`.
pub fn check_conditions(ordered: &OrderedDegrees, d: usize, gamma: f64, eps: f64) -> Conditions {
    let n = ordered.rest.len();
    debug_assert_eq!(ordered.d0 + ordered.rest.iter().sum::<usize>(), d);
    let nf = n as f64;
    let a1 = nf >= (1.0 - gamma) * libm::log(d as f64);
    let odd = ordered.rest.iter().filter(|&&x| x % 2 == 1).count()
        + usize::from(ordered.d0 % 2 == 1);
    let even = (n + 1) - odd;
    let a2 = odd as f64 >= eps * nf && even as f64 >= eps * nf;
    let cut = if n >= 1 { libm::sqrt(libm::log(nf)) } else { 0.0 };
    let a3 = ordered
        .rest
        .iter()
        .enumerate()
        .any(|(j, &di)| ((j + 1) as f64) < cut && di % 2 == 1);
    let a4 = ordered
        .rest
        .iter()
        .enumerate()
        .all(|(j, &di)| ((j + 1) as f64) < cut || di >= 2 * (j + 1) * j);
    Conditions { a1, a2, a3, a4 }
}
