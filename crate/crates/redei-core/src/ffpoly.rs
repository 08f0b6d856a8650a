//! Dense univariate polynomials over a prime field `F_q` with `q` an odd
//! prime, plus the number-theoretic primitives the Rédei construction needs:
//! quadratic residue symbols, irreducibility tests, squarefree factorisation
//! and counts of monic irreducibles.
//!
//! Coefficients are stored in ascending order (`coeffs[i]` multiplies `x^i`),
//! always reduced into `0..q`, with no trailing zeros; the zero polynomial is
//! the empty vector.  The field order travels with every polynomial and all
//! binary operations check that the operands agree.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Errors from parsing or from contract violations on polynomial inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FfError {
    /// `q` is not an odd prime.
    BadFieldOrder(u64),
    /// A parsed coefficient was not a residue in `0..q`.
    CoefficientOutOfRange { value: u64, q: u64 },
    /// The coefficient list could not be parsed at all.
    ParseError(String),
    /// An operation required a monic polynomial.
    NotMonic,
    /// An operation required a squarefree polynomial.
    NotSquarefree,
    /// An operation required a nonzero polynomial of positive degree.
    BadDegree,
    /// Two operands lived over different fields.
    FieldMismatch(u64, u64),
}

impl fmt::Display for FfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FfError::BadFieldOrder(q) => write!(f, "field order {q} is not an odd prime"),
            FfError::CoefficientOutOfRange { value, q } => {
                write!(f, "coefficient {value} is not a residue mod {q}")
            }
            FfError::ParseError(s) => write!(f, "cannot parse polynomial: {s}"),
            FfError::NotMonic => write!(f, "polynomial must be monic"),
            FfError::NotSquarefree => write!(f, "polynomial must be squarefree"),
            FfError::BadDegree => write!(f, "polynomial has unsuitable degree"),
            FfError::FieldMismatch(a, b) => write!(f, "field orders differ: {a} vs {b}"),
        }
    }
}

/// Returns true if `q` is an odd prime (trial division; field orders in this
/// crate are small).
pub fn is_odd_prime(q: u64) -> bool {
    if q < 3 || q % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Scalar inverse in `F_q` for `a != 0`.
pub fn inv_mod(a: u64, q: u64) -> u64 {
    debug_assert!(a % q != 0);
    // Fermat: a^(q-2). q is small so this loop is cheap.
    pow_mod_scalar(a, q - 2, q)
}

/// Scalar power in `F_q`.
pub fn pow_mod_scalar(mut a: u64, mut e: u64, q: u64) -> u64 {
    a %= q;
    let mut acc: u64 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulq(acc, a, q);
        }
        a = mulq(a, a, q);
        e >>= 1;
    }
    acc
}

#[inline]
fn mulq(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

/// Quadratic character of `F_q`: `+1` for nonzero squares, `-1` for
/// non-squares, `0` at zero (Euler's criterion).
pub fn chi(a: u64, q: u64) -> i8 {
    let a = a % q;
    if a == 0 {
        return 0;
    }
    let s = pow_mod_scalar(a, (q - 1) / 2, q);
    if s == 1 {
        1
    } else {
        debug_assert_eq!(s, q - 1);
        -1
    }
}

/// A dense polynomial over `F_q`, coefficients ascending, normalised.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    q: u64,
    coeffs: Vec<u64>,
}

impl Poly {
    /// Builds a polynomial, reducing every coefficient mod `q` and stripping
    /// trailing zeros.
    pub fn new(q: u64, mut coeffs: Vec<u64>) -> Poly {
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { q, coeffs }
    }

    pub fn zero(q: u64) -> Poly {
        Poly { q, coeffs: vec![] }
    }

    pub fn one(q: u64) -> Poly {
        Poly::constant(q, 1)
    }

    pub fn constant(q: u64, c: u64) -> Poly {
        Poly::new(q, vec![c])
    }

    /// The monomial `x`.
    pub fn x(q: u64) -> Poly {
        Poly::new(q, vec![0, 1])
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of a nonzero polynomial (panics on zero).
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn leading_coeff(&self) -> u64 {
        *self.coeffs.last().expect("leading coeff of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn check_field(&self, other: &Poly) {
        assert_eq!(self.q, other.q, "mixed field orders {} and {}", self.q, other.q);
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push((self.coeff(i) + other.coeff(i)) % self.q);
        }
        Poly::new(self.q, out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push((self.coeff(i) + self.q - other.coeff(i)) % self.q);
        }
        Poly::new(self.q, out)
    }

    pub fn neg(&self) -> Poly {
        let out: Vec<u64> = self.coeffs.iter().map(|&c| (self.q - c) % self.q).collect();
        Poly::new(self.q, out)
    }

    pub fn scale(&self, s: u64) -> Poly {
        let s = s % self.q;
        let out: Vec<u64> = self.coeffs.iter().map(|&c| mulq(c, s, self.q)).collect();
        Poly::new(self.q, out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.q);
        }
        let q = self.q as u128;
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = a as u128;
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] += a * b as u128;
            }
        }
        let out: Vec<u64> = acc.into_iter().map(|v| (v % q) as u64).collect();
        Poly::new(self.q, out)
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![0u64; k];
        out.extend_from_slice(&self.coeffs);
        Poly::new(self.q, out)
    }

    /// Euclidean division: `self = q_poly * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        self.check_field(d);
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return (Poly::zero(self.q), self.clone());
        }
        let q = self.q;
        let lc_inv = inv_mod(d.leading_coeff(), q);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.deg() - dd + 1];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let factor = mulq(c, lc_inv, q);
            quot[i - dd] = factor;
            // rem -= factor * x^(i-dd) * d
            for (j, &dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                let sub = mulq(factor, dc, q);
                rem[idx] = (rem[idx] + q - sub) % q;
            }
            debug_assert_eq!(rem[i], 0);
        }
        (Poly::new(q, quot), Poly::new(q, rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic normalisation (divide by the leading coefficient).
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading_coeff(), self.q))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `g = s*self + t*other`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        self.check_field(other);
        let q = self.q;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(q), Poly::zero(q));
        let (mut t0, mut t1) = (Poly::zero(q), Poly::one(q));
        while !r1.is_zero() {
            let (qq, r) = r0.divrem(&r1);
            let s = s0.sub(&qq.mul(&s1));
            let t = t0.sub(&qq.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let lc_inv = inv_mod(r0.leading_coeff(), q);
        (r0.scale(lc_inv), s0.scale(lc_inv), t0.scale(lc_inv))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        if self.is_constant() {
            return Poly::zero(self.q);
        }
        let out: Vec<u64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulq(i as u64 % self.q, c, self.q))
            .collect();
        Poly::new(self.q, out)
    }

    /// Evaluation at a field element (Horner).
    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.q;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mulq(acc, x, self.q) + c) % self.q;
        }
        acc
    }

    /// Taylor shift: the polynomial `g(t) = f(a + t)`.
    pub fn taylor_shift(&self, a: u64) -> Poly {
        // Horner in (t + a): acc <- acc*(t+a) + c.
        let shift = Poly::new(self.q, vec![a, 1]);
        let mut acc = Poly::zero(self.q);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&shift).add(&Poly::constant(self.q, c));
        }
        acc
    }

    /// Modular exponentiation `self^e mod m` with an arbitrary-precision
    /// exponent (square-and-multiply over the exponent bits).
    pub fn modpow(&self, e: &BigUint, m: &Poly) -> Poly {
        self.check_field(m);
        assert!(m.degree().map_or(false, |d| d >= 1), "modulus must be non-constant");
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.q);
        let mut e = e.clone();
        while !e.is_zero() {
            if e.bit(0) {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if !e.is_zero() {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Parses the ascending comma-separated residue format, e.g. `"2,0,1"`
    /// for `x^2 + 2` over `F_3`.  Residues must already lie in `0..q`.
    pub fn parse(q: u64, s: &str) -> Result<Poly, FfError> {
        if !is_odd_prime(q) {
            return Err(FfError::BadFieldOrder(q));
        }
        let mut coeffs = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let v: u64 = part
                .parse()
                .map_err(|_| FfError::ParseError(String::from(part)))?;
            if v >= q {
                return Err(FfError::CoefficientOutOfRange { value: v, q });
            }
            coeffs.push(v);
        }
        Ok(Poly::new(q, coeffs))
    }
}

impl fmt::Display for Poly {
    /// Ascending comma-separated residues; inverse of [`Poly::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `q^d` as a big integer.
pub fn q_pow(q: u64, d: usize) -> BigUint {
    BigUint::from(q).pow(d as u32)
}

/// `(q^d - 1) / 2`, the quadratic-residue exponent for a degree-`d` place.
fn qr_exponent(q: u64, d: usize) -> BigUint {
    (q_pow(q, d) - BigUint::one()) >> 1
}

/// Quadratic residue symbol `(f / h)` for a monic irreducible `h`: `0` when
/// `h | f`, otherwise `±1` according to whether `f mod h` is a square in the
/// residue field `F_q[x]/(h)`, computed by Euler's criterion.
///
/// Panics if the power is not `±1`, which would indicate a non-irreducible
/// modulus or an arithmetic bug.
pub fn qr_symbol(f: &Poly, h: &Poly) -> i8 {
    assert!(h.is_monic() && !h.is_constant(), "qr_symbol modulus must be monic non-constant");
    let fr = f.rem(h);
    if fr.is_zero() {
        return 0;
    }
    let s = f.modpow(&qr_exponent(f.q(), h.deg()), h);
    if s == Poly::one(f.q()) {
        1
    } else if s == Poly::constant(f.q(), f.q() - 1) {
        -1
    } else {
        panic!("qr_symbol: f^((q^d-1)/2) mod h not ±1; h is not irreducible or arithmetic is broken");
    }
}

/// Checks polynomial quadratic reciprocity for distinct monic irreducibles:
/// `(f/g)(g/f) = (-1)^{((q-1)/2) deg f deg g}`.
pub fn reciprocity_check(f: &Poly, g: &Poly) -> bool {
    let q = f.q();
    let lhs = i32::from(qr_symbol(f, g)) * i32::from(qr_symbol(g, f));
    let e = ((q - 1) / 2) as usize * f.deg() * g.deg();
    let rhs = if e % 2 == 0 { 1 } else { -1 };
    lhs == rhs
}

/// True if `f` is squarefree, i.e. `gcd(f, f')` is constant and `f' != 0`.
pub fn is_squarefree(f: &Poly) -> bool {
    if f.is_zero() {
        return false;
    }
    if f.is_constant() {
        return true;
    }
    let d = f.derivative();
    if d.is_zero() {
        // f is a p-th power in characteristic p.
        return false;
    }
    f.gcd(&d).is_constant()
}

/// Rabin irreducibility test for a monic polynomial of degree >= 1.
pub fn is_irreducible(f: &Poly) -> bool {
    assert!(f.is_monic(), "irreducibility test expects a monic polynomial");
    let d = f.deg();
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let q = f.q();
    let x = Poly::x(q);
    // x^(q^d) == x mod f ...
    if x.modpow(&q_pow(q, d), f) != x.rem(f) {
        return false;
    }
    // ... and for every prime r | d, gcd(x^(q^(d/r)) - x, f) = 1.
    for r in prime_divisors(d) {
        let h = x.modpow(&q_pow(q, d / r), f);
        if !h.sub(&x).gcd(f).is_constant() {
            return false;
        }
    }
    true
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Möbius function of a positive integer.
fn moebius(mut n: usize) -> i64 {
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of monic irreducible polynomials of degree `d` over `F_q`, by the
/// necklace formula `(1/d) * sum_{e | d} mu(e) q^(d/e)`.
pub fn count_irreducibles(q: u64, d: usize) -> BigUint {
    assert!(d >= 1);
    let mut pos = BigUint::zero();
    let mut neg = BigUint::zero();
    for e in 1..=d {
        if d % e != 0 {
            continue;
        }
        match moebius(e) {
            1 => pos += q_pow(q, d / e),
            -1 => neg += q_pow(q, d / e),
            _ => {}
        }
    }
    (pos - neg) / BigUint::from(d)
}

/// Uniform random monic polynomial of degree `d`.
pub fn random_monic<R: Rng + ?Sized>(q: u64, d: usize, rng: &mut R) -> Poly {
    let mut coeffs: Vec<u64> = (0..d).map(|_| rng.gen_range(0..q)).collect();
    coeffs.push(1);
    Poly::new(q, coeffs)
}

/// Uniform random monic squarefree polynomial of degree `d` (rejection).
pub fn random_monic_squarefree<R: Rng + ?Sized>(q: u64, d: usize, rng: &mut R) -> Poly {
    loop {
        let f = random_monic(q, d, rng);
        if is_squarefree(&f) {
            return f;
        }
    }
}

/// Uniform random monic irreducible polynomial of degree `d` (rejection).
pub fn random_monic_irreducible<R: Rng + ?Sized>(q: u64, d: usize, rng: &mut R) -> Poly {
    loop {
        let f = random_monic(q, d, rng);
        if is_irreducible(&f) {
            return f;
        }
    }
}

/// Iterator over all monic polynomials of degree `d` (odometer order on the
/// ascending coefficient vector, so also lexicographic order).
pub fn monic_polys(q: u64, d: usize) -> impl Iterator<Item = Poly> {
    let total = (q as u128).pow(d as u32);
    (0..total).map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push((idx % q as u128) as u64);
            idx /= q as u128;
        }
        coeffs.push(1);
        Poly::new(q, coeffs)
    })
}

/// Factors a monic squarefree polynomial into its monic irreducible factors,
/// sorted by (degree, ascending-coefficient lexicographic order).
///
/// Distinct-degree factorisation followed by Cantor–Zassenhaus equal-degree
/// splitting.  The random splitting elements come from a ChaCha stream seeded
/// from the input coefficients, so the function is deterministic.
pub fn factor_squarefree(f: &Poly) -> Result<Vec<Poly>, FfError> {
    if !f.is_monic() {
        return Err(FfError::NotMonic);
    }
    if f.is_constant() {
        return Err(FfError::BadDegree);
    }
    if !is_squarefree(f) {
        return Err(FfError::NotSquarefree);
    }
    let q = f.q();
    let mut rng = rng_from_poly(f);
    let mut factors: Vec<Poly> = Vec::new();
    let mut rest = f.clone();
    let x = Poly::x(q);
    // Frobenius iterate x^(q^d) mod rest, recomputed as rest shrinks.
    let mut frob = x.clone();
    let mut d = 0usize;
    while !rest.is_constant() {
        d += 1;
        if rest.deg() < 2 * d {
            // What is left is irreducible.
            factors.push(rest.clone());
            break;
        }
        frob = frob.modpow(&BigUint::from(q), &rest);
        let g = frob.sub(&x).gcd(&rest);
        if !g.is_constant() {
            equal_degree_split(&g, d, &mut factors, &mut rng);
            rest = rest.divrem(&g).0;
            frob = frob.rem(&rest);
        }
    }
    factors.sort_by(|a, b| (a.deg(), a.coeffs()).cmp(&(b.deg(), b.coeffs())));
    Ok(factors)
}

fn rng_from_poly(f: &Poly) -> ChaCha8Rng {
    // Cheap FNV-style fold of (q, coeffs) into a seed; only determinism
    // matters here, not hash quality.
    let mut h: u64 = 0xcbf29ce484222325;
    let mut mix = |v: u64| {
        h ^= v;
        h = h.wrapping_mul(0x100000001b3);
    };
    mix(f.q());
    for &c in f.coeffs() {
        mix(c.wrapping_add(1));
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Splits a product of distinct irreducibles all of degree `d` (Cantor–
/// Zassenhaus for odd q) and pushes the irreducible factors.
fn equal_degree_split(g: &Poly, d: usize, out: &mut Vec<Poly>, rng: &mut ChaCha8Rng) {
    if g.deg() == d {
        out.push(g.monic());
        return;
    }
    let q = g.q();
    let e = qr_exponent(q, d);
    loop {
        let r = random_monic(q, rng.gen_range(1..g.deg()), rng);
        let s = r.modpow(&e, g);
        let t = s.sub(&Poly::one(q)).gcd(g);
        if !t.is_constant() && t.deg() < g.deg() {
            let other = g.divrem(&t).0;
            equal_degree_split(&t, d, out, rng);
            equal_degree_split(&other, d, out, rng);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;

    #[test]
    fn parse_and_display_roundtrip() {
        // [TRIVIAL] "2,0,1" is x^2 + 2 over F_3.
        let p = Poly::parse(3, "2,0,1").unwrap();
        assert_eq!(p.coeffs(), &[2, 0, 1]);
        assert_eq!(alloc::format!("{p}"), "2,0,1");
        assert!(Poly::parse(3, "3,0,1").is_err());
        assert!(Poly::parse(9, "1").is_err());
        assert_eq!(Poly::parse(5, "0").unwrap(), Poly::zero(5));
    }

    #[test]
    fn modpow_worked_example() {
        // [DERIVED] x^4 mod (x^2+1) over F_3: x^2 ≡ -1, so x^4 ≡ 1.
        let x = Poly::x(3);
        let m = Poly::parse(3, "1,0,1").unwrap();
        assert_eq!(x.modpow(&BigUint::from(4u32), &m), Poly::one(3));
    }

    #[test]
    fn divrem_reconstructs() {
        let mut rng = StdRng::seed_from_u64(1);
        for q in [3u64, 5, 7] {
            for _ in 0..100 {
                let a = random_monic(q, rng.gen_range(1..8), &mut rng);
                let b = random_monic(q, rng.gen_range(1..8), &mut rng);
                let (quo, rem) = a.divrem(&b);
                assert_eq!(quo.mul(&b).add(&rem), a);
                assert!(rem.is_zero() || rem.deg() < b.deg());
            }
        }
    }

    #[test]
    fn xgcd_bezout() {
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..100 {
            let a = random_monic(5, rng.gen_range(1..7), &mut rng);
            let b = random_monic(5, rng.gen_range(1..7), &mut rng);
            let (g, s, t) = a.xgcd(&b);
            assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
            assert_eq!(g, a.gcd(&b));
        }
    }

    #[test]
    fn chi_euler_criterion() {
        // [DERIVED] squares mod 7 are {1,2,4}.
        assert_eq!(chi(0, 7), 0);
        for a in [1u64, 2, 4] {
            assert_eq!(chi(a, 7), 1);
        }
        for a in [3u64, 5, 6] {
            assert_eq!(chi(a, 7), -1);
        }
    }

    #[test]
    fn qr_symbol_matches_exhaustive_squares() {
        // [DERIVED] oracle: in residue fields of size q^d <= 125, list the
        // squares exhaustively and compare against Euler's criterion.
        let mut rng = StdRng::seed_from_u64(3);
        for (q, dmax) in [(3u64, 4usize), (5, 3)] {
            for d in 1..=dmax {
                let h = random_monic_irreducible(q, d, &mut rng);
                // All squares g^2 mod h.
                let mut squares = alloc::collections::BTreeSet::new();
                for g in monic_polys(q, d).flat_map(|p| {
                    (1..q).map(move |s| p.scale(s))
                }) {
                    squares.insert(g.mul(&g).rem(&h));
                }
                for _ in 0..20 {
                    let f = random_monic(q, rng.gen_range(1..=(d + 2)), &mut rng);
                    let sym = qr_symbol(&f, &h);
                    let fr = f.rem(&h);
                    let expect = if fr.is_zero() {
                        0
                    } else if squares.contains(&fr) {
                        1
                    } else {
                        -1
                    };
                    assert_eq!(sym, expect, "f={f} h={h}");
                }
            }
        }
    }

    #[test]
    fn qr_symbol_multiplicative() {
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..200 {
            let h = random_monic_irreducible(3, rng.gen_range(1..5), &mut rng);
            let a = random_monic(3, rng.gen_range(1..6), &mut rng);
            let b = random_monic(3, rng.gen_range(1..6), &mut rng);
            assert_eq!(
                qr_symbol(&a.mul(&b), &h),
                qr_symbol(&a, &h) * qr_symbol(&b, &h)
            );
        }
    }

    #[test]
    fn reciprocity_holds() {
        let mut rng = StdRng::seed_from_u64(5);
        for q in [3u64, 5, 7] {
            for _ in 0..100 {
                let f = random_monic_irreducible(q, rng.gen_range(1..5), &mut rng);
                let g = random_monic_irreducible(q, rng.gen_range(1..5), &mut rng);
                if f == g {
                    continue;
                }
                assert!(reciprocity_check(&f, &g), "q={q} f={f} g={g}");
            }
        }
    }

    #[test]
    fn count_irreducibles_small() {
        // [DERIVED] classical counts over F_3: degree 1: 3, degree 2:
        // (9-3)/2 = 3, degree 3: (27-3)/3 = 8, degree 4: (81-9)/4 = 18.
        assert_eq!(count_irreducibles(3, 1), BigUint::from(3u32));
        assert_eq!(count_irreducibles(3, 2), BigUint::from(3u32));
        assert_eq!(count_irreducibles(3, 3), BigUint::from(8u32));
        assert_eq!(count_irreducibles(3, 4), BigUint::from(18u32));
        assert_eq!(count_irreducibles(5, 2), BigUint::from(10u32));
    }

    #[test]
    fn count_irreducibles_matches_enumeration() {
        // [DERIVED] brute-force oracle: count irreducibles by testing every
        // monic polynomial.
        for (q, d) in [(3u64, 1usize), (3, 2), (3, 3), (3, 4), (5, 1), (5, 2), (5, 3)] {
            let n = monic_polys(q, d).filter(is_irreducible_ref).count();
            assert_eq!(count_irreducibles(q, d), BigUint::from(n));
        }
        fn is_irreducible_ref(p: &Poly) -> bool {
            is_irreducible(p)
        }
    }

    #[test]
    fn factor_squarefree_recomposes() {
        let mut rng = StdRng::seed_from_u64(6);
        for q in [3u64, 5] {
            for _ in 0..100 {
                let f = random_monic_squarefree(q, rng.gen_range(1..12), &mut rng);
                let factors = factor_squarefree(&f).unwrap();
                let mut prod = Poly::one(q);
                for h in &factors {
                    assert!(is_irreducible(h), "{h} not irreducible");
                    prod = prod.mul(h);
                }
                assert_eq!(prod, f);
                // Sorted and distinct.
                for w in factors.windows(2) {
                    assert!((w[0].deg(), w[0].coeffs()) < (w[1].deg(), w[1].coeffs()));
                }
            }
        }
    }

    #[test]
    fn factor_rejects_non_squarefree() {
        let x = Poly::x(3);
        assert_eq!(factor_squarefree(&x.mul(&x)), Err(FfError::NotSquarefree));
    }

    #[test]
    fn squarefree_counts() {
        // [DERIVED] q^d - q^(d-1) monic squarefree polynomials of degree
        // d >= 2.
        for (q, d) in [(3u64, 2usize), (3, 3), (3, 4), (5, 2), (5, 3)] {
            let n = monic_polys(q, d).filter(is_squarefree).count() as u64;
            assert_eq!(n, q.pow(d as u32) - q.pow(d as u32 - 1));
        }
    }

    #[test]
    fn taylor_shift_evaluates() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let f = random_monic(5, rng.gen_range(1..7), &mut rng);
            let a = rng.gen_range(0..5);
            let g = f.taylor_shift(a);
            for t in 0..5 {
                assert_eq!(g.eval(t), f.eval((a + t) % 5));
            }
        }
    }
}
