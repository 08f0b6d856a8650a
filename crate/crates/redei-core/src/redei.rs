//! The Rédei matrix of a hyperelliptic curve `y² = f(x)` over `F_q` and the
//! 4-rank of its degree-zero Picard group.
//!
//! The branch locus of the curve consists of the irreducible factors of the
//! monic squarefree `f`, plus the point at infinity when `deg f` is odd.  A
//! distinguished base point `p₀` of odd degree is chosen (infinity whenever
//! available, else the least finite factor of odd degree); the remaining
//! branch points index a basis `e_i` of the 2-torsion quotient, and the
//! matrix of the genus-theory pairing in that basis is assembled from
//! quadratic residue symbols between the factors.  The 4-rank is then the
//! F₂-nullity of the matrix minus one (the all-ones vector is always in the
//! kernel).

use alloc::vec::Vec;
use core::fmt;

use crate::ffpoly::{self, FfError, Poly};
use crate::matstat::{self, AlternatingForm, Gf, MatFl};

/// Errors from branch-data construction and matrix assembly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RedeiError {
    /// Every branch point has even degree; the construction requires an
    /// odd-degree base point.  Callers treat such curves as out of scope.
    NoOddBranchPoint,
    /// `second_order_class` was asked about a ramified point.
    RamifiedPoint,
    /// A structural theorem (column sums, C-symmetry) failed on the
    /// assembled matrix — this flags an implementation bug or an input
    /// outside the theorems' reach, and is never expected in practice.
    StructuralViolation(&'static str),
    /// Invalid polynomial input.
    Poly(FfError),
}

impl fmt::Display for RedeiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RedeiError::NoOddBranchPoint => write!(f, "curve has no odd-degree branch point"),
            RedeiError::RamifiedPoint => write!(f, "point is ramified in the double cover"),
            RedeiError::StructuralViolation(s) => write!(f, "structural invariant failed: {s}"),
            RedeiError::Poly(e) => write!(f, "bad polynomial input: {e}"),
        }
    }
}

impl From<FfError> for RedeiError {
    fn from(e: FfError) -> Self {
        RedeiError::Poly(e)
    }
}

/// A closed point of the projective line occurring in the branch locus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchPoint {
    /// The point at infinity (degree 1, uniformizer class `t = 1/x`).
    Infinity,
    /// A finite point cut out by a monic irreducible polynomial.
    Finite(Poly),
}

impl BranchPoint {
    pub fn degree(&self) -> usize {
        match self {
            BranchPoint::Infinity => 1,
            BranchPoint::Finite(h) => h.deg(),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, BranchPoint::Infinity)
    }

    /// The defining polynomial of a finite point.
    pub fn poly(&self) -> Option<&Poly> {
        match self {
            BranchPoint::Infinity => None,
            BranchPoint::Finite(h) => Some(h),
        }
    }
}

impl fmt::Display for BranchPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchPoint::Infinity => write!(f, "inf"),
            BranchPoint::Finite(h) => write!(f, "{h}"),
        }
    }
}

/// The ordered branch locus `(p₀, p₁, …, p_n)` of `y² = f(x)` together with
/// the curve data.  `p₀` has odd degree; `p₁, …, p_n` are sorted ascending
/// by degree with lexicographic tie-break on coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchData {
    q: u64,
    f: Poly,
    points: Vec<BranchPoint>,
    degrees: Vec<usize>,
}

impl BranchData {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    /// All branch points, `p₀` first.
    pub fn points(&self) -> &[BranchPoint] {
        &self.points
    }

    /// Degrees `(d₀, …, d_n)` parallel to [`points`](Self::points).
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn p0(&self) -> &BranchPoint {
        &self.points[0]
    }

    /// Matrix size `n` (= number of branch points minus one).
    pub fn n(&self) -> usize {
        self.points.len() - 1
    }
}

/// Builds [`BranchData`] by factoring `f`.
///
/// `p₀` is the point at infinity when `deg f` is odd; otherwise the
/// lexicographically least finite factor of minimal odd degree.  Fails with
/// [`RedeiError::NoOddBranchPoint`] when `deg f` is even and every factor
/// has even degree.
pub fn build_branch_data(q: u64, f: &Poly) -> Result<BranchData, RedeiError> {
    if !ffpoly::is_odd_prime(q) {
        return Err(RedeiError::Poly(FfError::BadFieldOrder(q)));
    }
    assert_eq!(f.q(), q, "field order mismatch");
    let factors = ffpoly::factor_squarefree(f)?;
    branch_data_from_factors(q, factors)
}

/// Builds [`BranchData`] from an already-factored branch locus: the distinct
/// monic irreducible factors of `f` (the product is recomputed; infinity is
/// a branch point iff the total degree is odd).
pub fn branch_data_from_factors(q: u64, mut factors: Vec<Poly>) -> Result<BranchData, RedeiError> {
    if factors.is_empty() {
        return Err(RedeiError::Poly(FfError::BadDegree));
    }
    factors.sort_by(|a, b| (a.deg(), a.coeffs()).cmp(&(b.deg(), b.coeffs())));
    let mut f = Poly::one(q);
    for h in &factors {
        debug_assert!(h.is_monic());
        f = f.mul(h);
    }
    let deg_f: usize = f.deg();
    let mut points: Vec<BranchPoint> = Vec::with_capacity(factors.len() + 1);
    if deg_f % 2 == 1 {
        // Infinity is a branch point of odd degree 1: always the base.
        points.push(BranchPoint::Infinity);
        points.extend(factors.into_iter().map(BranchPoint::Finite));
    } else {
        // Least finite factor of minimal odd degree (the sort above is
        // (degree, lex), so the first odd-degree factor is it).
        let pos = factors
            .iter()
            .position(|h| h.deg() % 2 == 1)
            .ok_or(RedeiError::NoOddBranchPoint)?;
        let h0 = factors.remove(pos);
        points.push(BranchPoint::Finite(h0));
        points.extend(factors.into_iter().map(BranchPoint::Finite));
    }
    let degrees: Vec<usize> = points.iter().map(BranchPoint::degree).collect();
    debug_assert_eq!(degrees.iter().sum::<usize>() % 2, 0, "total branch degree must be even");
    Ok(BranchData { q, f, points, degrees })
}

/// Maps a class in `{+1, −1}` to its additive F₂ avatar `[·]₊` (+1 ↦ 0).
#[inline]
fn plus(c: i8) -> u8 {
    debug_assert!(c == 1 || c == -1);
    if c == 1 {
        0
    } else {
        1
    }
}

fn qr_nonzero(f: &Poly, h: &Poly) -> i8 {
    let s = ffpoly::qr_symbol(f, h);
    assert!(s != 0, "branch points must be distinct irreducibles");
    s
}

/// Second-order class of the unramified point `p` in `y² = f`: `+1` iff `p`
/// splits in the double cover, `−1` iff it is inert.
///
/// For a finite point with polynomial `h` this is `qr_symbol(f, h)`; the
/// point at infinity with `deg f` even and `f` monic always splits.
pub fn second_order_class(f: &Poly, p: &BranchPoint) -> Result<i8, RedeiError> {
    match p {
        BranchPoint::Infinity => {
            if f.deg() % 2 == 1 {
                Err(RedeiError::RamifiedPoint)
            } else {
                // Unit part at infinity is the leading coefficient, 1.
                Ok(1)
            }
        }
        BranchPoint::Finite(h) => {
            let s = ffpoly::qr_symbol(f, h);
            if s == 0 {
                Err(RedeiError::RamifiedPoint)
            } else {
                Ok(s)
            }
        }
    }
}

/// The class `c_t(X_f → P¹, p₀)` of the input curve at its base point.
///
/// `+1` for `p₀ = ∞` with monic `f`; for finite `p₀ = h₀`, write
/// `f = h₀·g` and return `qr_symbol(g, h₀)`.
pub fn base_class(bd: &BranchData) -> i8 {
    match bd.p0() {
        BranchPoint::Infinity => 1,
        BranchPoint::Finite(h0) => {
            let (g, r) = bd.f().divrem(h0);
            debug_assert!(r.is_zero());
            qr_nonzero(&g, h0)
        }
    }
}

/// Base class of the quadratic twist `y² = c·f(x)`: multiplying `f` by a
/// non-square constant `c` flips the class, since `χ_{p₀}(c) = χ(c)^{d₀}`
/// and `d₀` is odd.
fn twisted_base_class(bd: &BranchData, nonsquare_twist: bool) -> i8 {
    let b = base_class(bd);
    if nonsquare_twist {
        -b
    } else {
        b
    }
}

/// Off-diagonal Rédei matrix entry `M_ij` (1-based indices into
/// `p₁, …, p_n`, `i ≠ j`): the pairing `⟨e_i, e_j⟩′` evaluated through the
/// auxiliary hyperelliptic cover attached to `p_j`, as an element of F₂.
pub fn redei_entry(bd: &BranchData, i: usize, j: usize) -> u8 {
    redei_entry_twisted(bd, i, j, false)
}

/// As [`redei_entry`], for the twist `y² = c·f(x)` with `χ(c) = −1` when
/// `nonsquare_twist` is set.  The twist enters only through the base
/// class, so only entries with `d_i`, `d_j` both odd change.
pub fn redei_entry_twisted(bd: &BranchData, i: usize, j: usize, nonsquare_twist: bool) -> u8 {
    assert!(i != j && 1 <= i && i <= bd.n() && 1 <= j && 1 <= bd.n());
    let hi = bd.points[i].poly().expect("p_i is finite");
    let hj = bd.points[j].poly().expect("p_j is finite");
    match bd.p0() {
        BranchPoint::Infinity => {
            // H_j is cut out by h_j itself (its unit at infinity is 1 since
            // h_j is monic), and base_class = +1 for monic f; a non-square
            // twist flips the base class, which (see below) touches
            // exactly the odd·odd entries.
            let mut e = plus(qr_nonzero(hj, hi));
            if nonsquare_twist && bd.degrees[i] % 2 == 1 && bd.degrees[j] % 2 == 1 {
                e ^= 1;
            }
            e
        }
        BranchPoint::Finite(h0) => {
            // Normalisation a_j = qr(h_j, h₀) forces c_{h₀}(H_j, p₀) = 1;
            // evaluating the normalised function at p_i gives the symbol
            // product below (exponents only matter mod 2).
            let di = bd.degrees[i];
            let dj = bd.degrees[j];
            let mut e = 0u8;
            if di % 2 == 1 {
                e ^= plus(qr_nonzero(hj, h0));
            }
            e ^= plus(qr_nonzero(hj, hi));
            if dj % 2 == 1 {
                e ^= plus(qr_nonzero(h0, hi));
            }
            // The base-class correction c_t(X → P¹, p₀) enters only when
            // both degrees are odd: the normalising constant of the
            // auxiliary cover acts on p_i through its class in the residue
            // field k(p_i), which is trivial for even d_i, and the unit
            // computation at p₀ picks up the curve's class only when the
            // divisor e_{p₀, p_j} has odd valuation at p₀, i.e. odd d_j.
            // (Only this placement is invariant under changing the
            // uniformiser class at p₀.)
            if di % 2 == 1 && dj % 2 == 1 {
                e ^= plus(twisted_base_class(bd, nonsquare_twist));
            }
            e
        }
    }
}

/// The assembled Rédei matrix together with its alternating form and the
/// block reordering that exhibits the standard `blockdiag(0, J−I)` shape.
#[derive(Debug, Clone)]
pub struct RedeiMatrix {
    n: usize,
    mat: MatFl,
    /// Permutation of `0..n` (indices into `p₁..p_n`) listing even-degree
    /// points first, then odd-degree points.
    block_order: Vec<usize>,
    c: AlternatingForm,
    degrees: Vec<usize>,
    p0: BranchPoint,
    base_class: i8,
}

impl RedeiMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entries in the natural (degree-ascending) order of `p₁, …, p_n`.
    pub fn matrix(&self) -> &MatFl {
        &self.mat
    }

    pub fn block_order(&self) -> &[usize] {
        &self.block_order
    }

    /// The standard form `C` with `M − Mᵀ = C` in block order.
    pub fn form(&self) -> &AlternatingForm {
        &self.c
    }

    pub fn c_rank(&self) -> usize {
        self.c.rank(&f2())
    }

    /// Degrees `(d₁, …, d_n)`.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn p0(&self) -> &BranchPoint {
        &self.p0
    }

    pub fn base_class(&self) -> i8 {
        self.base_class
    }

    pub fn nullity(&self) -> usize {
        self.mat.nullity(&f2())
    }

    /// 4-rank of `Pic⁰(X)(F_q)`: nullity minus one.
    pub fn four_rank(&self) -> usize {
        self.nullity() - 1
    }
}

fn f2() -> Gf {
    Gf::new(2).expect("F_2 exists")
}

/// Assembles the Rédei matrix: off-diagonal entries from [`redei_entry`],
/// diagonal forced by zero row sums.  Asserts the structural theorems
/// (column sums vanish; `M_ij ⊕ M_ji = ((q−1)/2)·d_i·d_j mod 2`) and
/// reports a [`RedeiError::StructuralViolation`] if either fails.
pub fn redei_matrix(bd: &BranchData) -> Result<RedeiMatrix, RedeiError> {
    redei_matrix_twisted(bd, false)
}

/// As [`redei_matrix`], for the quadratic twist `y² = c·f(x)` with
/// `χ(c) = −1` when `nonsquare_twist` is set.
pub fn redei_matrix_twisted(
    bd: &BranchData,
    nonsquare_twist: bool,
) -> Result<RedeiMatrix, RedeiError> {
    let n = bd.n();
    let q = bd.q();
    let mut mat = MatFl::zero(n, n);
    for i in 1..=n {
        let mut row_sum = 0u8;
        for j in 1..=n {
            if i == j {
                continue;
            }
            let e = redei_entry_twisted(bd, i, j, nonsquare_twist);
            mat.set(i - 1, j - 1, e);
            row_sum ^= e;
        }
        mat.set(i - 1, i - 1, row_sum);
    }
    // Column sums vanish (Lemma-level theorem; failure = bug).
    for j in 0..n {
        let mut s = 0u8;
        for i in 0..n {
            s ^= mat.get(i, j);
        }
        if s != 0 {
            return Err(RedeiError::StructuralViolation("column sums"));
        }
    }
    // C-symmetry: M_ij ⊕ M_ji = ((q−1)/2)·d_i·d_j mod 2.
    let half = ((q - 1) / 2) as usize;
    for i in 0..n {
        for j in 0..i {
            let expect = ((half * bd.degrees[i + 1] * bd.degrees[j + 1]) % 2) as u8;
            if mat.get(i, j) ^ mat.get(j, i) != expect {
                return Err(RedeiError::StructuralViolation("C-symmetry"));
            }
        }
    }
    let mut block_order: Vec<usize> = (0..n).filter(|&i| bd.degrees[i + 1] % 2 == 0).collect();
    let n_even = block_order.len();
    block_order.extend((0..n).filter(|&i| bd.degrees[i + 1] % 2 == 1));
    let c = matstat::standard_redei_form(n_even, n - n_even, q);
    Ok(RedeiMatrix {
        n,
        mat,
        block_order,
        c,
        degrees: bd.degrees[1..].to_vec(),
        p0: bd.p0().clone(),
        base_class: twisted_base_class(bd, nonsquare_twist),
    })
}

/// 2-rank of `Pic⁰(X)(F_q)`: the number of branch points minus two.
pub fn two_rank(bd: &BranchData) -> usize {
    bd.n() - 1
}

/// 4-rank of `Pic⁰(X)(F_q)` for `y² = f(x)`, via the Rédei matrix nullity.
pub fn four_rank(q: u64, f: &Poly) -> Result<usize, RedeiError> {
    let bd = build_branch_data(q, f)?;
    Ok(redei_matrix(&bd)?.four_rank())
}

/// As [`four_rank`], starting from prepared branch data.
pub fn four_rank_from_branch_data(bd: &BranchData) -> Result<usize, RedeiError> {
    Ok(redei_matrix(bd)?.four_rank())
}

/// 4-rank of the twist `y² = c·f(x)` (`χ(c) = −1` when `nonsquare_twist`).
pub fn four_rank_twisted(q: u64, f: &Poly, nonsquare_twist: bool) -> Result<usize, RedeiError> {
    let bd = build_branch_data(q, f)?;
    Ok(redei_matrix_twisted(&bd, nonsquare_twist)?.four_rank())
}
