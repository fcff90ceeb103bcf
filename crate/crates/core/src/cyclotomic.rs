//! Exact arithmetic in `ℤ[ζ_q] = ℤ[x]/Φ_q(x)` and the additive characters of
//! `H(d,q)`, used to check that `f_z` is orthogonal to every `ε_y` with
//! `∂(u0,y) > ∂(u0,z)`.

use std::ops::{Add, Mul};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::schemes::{Scheme, SchemeSpec};

/// Coefficients of `Φ_q`, constant term first.
pub fn cyclotomic_polynomial(q: u32) -> Vec<i64> {
    assert!(q >= 1, "order must be positive");
    // x^q - 1
    let mut num = vec![0i64; q as usize + 1];
    num[0] = -1;
    num[q as usize] = 1;
    for e in (1..q).filter(|e| q.is_multiple_of(*e)) {
        num = exact_divide(&num, &cyclotomic_polynomial(e));
    }
    num
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = *den.last().expect("nonzero divisor");
    let mut quot = vec![0i64; rem.len().saturating_sub(dd)];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd] / lead;
        quot[k] = c;
        for (t, &dc) in den.iter().enumerate() {
            rem[k + t] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "division is not exact");
    quot
}

/// An element of `ℤ[ζ_q]` in the power basis `1, ζ, …, ζ^{φ(q)-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    q: u32,
    coeffs: Vec<i64>,
}

impl CyclotomicInt {
    pub fn zero(q: u32) -> Self {
        let deg = cyclotomic_polynomial(q).len() - 1;
        Self { q, coeffs: vec![0; deg] }
    }

    pub fn from_int(q: u32, c: i64) -> Self {
        Self::reduce(&[c], q)
    }

    /// `ζ^k`
    pub fn zeta_pow(q: u32, k: u64) -> Self {
        let mut p = vec![0i64; (k % q as u64) as usize + 1];
        *p.last_mut().unwrap() = 1;
        Self::reduce(&p, q)
    }

    /// Reduce an integer polynomial modulo `Φ_q`.
    pub fn reduce(poly: &[i64], q: u32) -> Self {
        let phi = cyclotomic_polynomial(q);
        let deg = phi.len() - 1;
        let mut rem = poly.to_vec();
        // Φ_q is monic
        for k in (deg..rem.len()).rev() {
            let c = rem[k];
            if c != 0 {
                for (t, &pc) in phi.iter().enumerate() {
                    rem[k - deg + t] -= c * pc;
                }
            }
        }
        rem.resize(deg, 0);
        Self { q, coeffs: rem }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(Error::MismatchedOrder(self.q, other.q));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { q: self.q, coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut prod = vec![0i64; (self.coeffs.len() + other.coeffs.len()).saturating_sub(1).max(1)];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Ok(Self::reduce(&prod, self.q))
    }

    /// Complex conjugation `ζ ↦ ζ^{q-1}`.
    pub fn conj(&self) -> Self {
        let q = self.q as usize;
        let mut p = vec![0i64; q];
        for (k, &c) in self.coeffs.iter().enumerate() {
            p[(q - k) % q] += c;
        }
        Self::reduce(&p, self.q)
    }
}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.try_add(rhs).expect("matching orders")
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.try_mul(rhs).expect("matching orders")
    }
}

/// `ε_x(y) = ζ^{Σ x_ℓ y_ℓ}`, stored as exponents mod `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub x: Vec<u8>,
    pub q: u32,
}

impl Character {
    pub fn new(x: &[u8], q: u32) -> Self {
        Self { x: x.to_vec(), q }
    }

    pub fn exponent(&self, y: &[u8]) -> u32 {
        let s: u64 = self.x.iter().zip(y).map(|(&a, &b)| a as u64 * b as u64).sum();
        (s % self.q as u64) as u32
    }

    pub fn value(&self, y: &[u8]) -> CyclotomicInt {
        CyclotomicInt::zeta_pow(self.q, self.exponent(y) as u64)
    }
}

fn hamming_q(s: &Scheme) -> Result<u32> {
    match s.spec() {
        SchemeSpec::Hamming { q, .. } => Ok(q as u32),
        other => Err(Error::Unsupported(format!("{} is not a Hamming scheme", other.short_name()))),
    }
}

/// `Σ_x conj(ε_y(x)) f_z(x)` with `u0 = 0…0`, by brute force over the
/// vertices under `z`.
pub fn character_hom_inner(s: &Scheme, y: usize, z: usize) -> Result<CyclotomicInt> {
    let q = hamming_q(s)?;
    let eps = Character::new(s.word(y).expect("word"), q);
    let zw = s.word(z).expect("word");
    let mut counts = vec![0i64; q as usize];
    for x in 0..s.n_vertices() {
        let xw = s.word(x).expect("word");
        // f_z(x) = 1 iff x agrees with z on the support of z
        if zw.iter().zip(xw).all(|(&zl, &xl)| zl == 0 || zl == xl) {
            counts[((q - eps.exponent(xw)) % q) as usize] += 1;
        }
    }
    Ok(CyclotomicInt::reduce(&counts, q))
}

/// The same inner product as a product over coordinates: `ζ^{-z_ℓ y_ℓ}` on
/// the support of `z` and `Σ_a ζ^{-a y_ℓ}` elsewhere.
pub fn character_hom_inner_factored(s: &Scheme, y: usize, z: usize) -> Result<CyclotomicInt> {
    let q = hamming_q(s)?;
    let yw = s.word(y).expect("word");
    let zw = s.word(z).expect("word");
    let mut acc = CyclotomicInt::from_int(q, 1);
    for (&zl, &yl) in zw.iter().zip(yw) {
        let factor = if zl != 0 {
            CyclotomicInt::zeta_pow(q, zl as u64 * yl as u64).conj()
        } else {
            (0..q as u64).fold(CyclotomicInt::zero(q), |sum, a| &sum + &CyclotomicInt::zeta_pow(q, a * yl as u64))
                .conj()
        };
        acc = &acc * &factor;
    }
    Ok(acc)
}

/// Tally for one `(i, j)` with `i > j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalityRow {
    pub i: usize,
    pub j: usize,
    pub pairs: u64,
    /// Pairs with a nonzero inner product.
    pub failures: u64,
    /// Pairs where the brute-force and factored values differ.
    pub mismatches: u64,
}

/// All `y ∈ X_i`, `z ∈ X_j` with `i > j`, base vertex `0…0`.
pub fn orthogonality_check(s: &Scheme) -> Result<Vec<OrthogonalityRow>> {
    hamming_q(s)?;
    let d = s.classes();
    let shells = s.shells(0)?;
    let mut rows = Vec::new();
    for i in 1..=d {
        for j in 0..i {
            let (pairs, failures, mismatches) = shells.shells[i]
                .par_iter()
                .map(|&y| {
                    let mut t = (0u64, 0u64, 0u64);
                    for &z in &shells.shells[j] {
                        let brute = character_hom_inner(s, y, z).expect("hamming");
                        let factored = character_hom_inner_factored(s, y, z).expect("hamming");
                        t.0 += 1;
                        t.1 += !brute.is_zero() as u64;
                        t.2 += (brute != factored) as u64;
                    }
                    t
                })
                .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
            rows.push(OrthogonalityRow { i, j, pairs, failures, mismatches });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(5).len(), 5);
    }

    #[test]
    fn root_identities() {
        let z4 = CyclotomicInt::zeta_pow(4, 1);
        assert_eq!(&z4 * &z4, CyclotomicInt::from_int(4, -1));
        assert!((&CyclotomicInt::from_int(2, 1) + &CyclotomicInt::zeta_pow(2, 1)).is_zero());
        let s3 = (0..3).fold(CyclotomicInt::zero(3), |a, k| &a + &CyclotomicInt::zeta_pow(3, k));
        assert!(s3.is_zero());
        assert!(CyclotomicInt::zeta_pow(7, 7) == CyclotomicInt::from_int(7, 1));
    }

    #[test]
    fn mismatched_orders() {
        let a = CyclotomicInt::zeta_pow(3, 1);
        let b = CyclotomicInt::zeta_pow(4, 1);
        assert!(matches!(a.try_add(&b), Err(Error::MismatchedOrder(3, 4))));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn characters_are_symmetric() {
        let a = Character::new(&[1, 2, 0], 3);
        let b = Character::new(&[2, 2, 1], 3);
        assert_eq!(a.exponent(&b.x), b.exponent(&a.x));
        let zero = Character::new(&[0, 0, 0], 3);
        assert_eq!(zero.exponent(&[2, 1, 2]), 0);
    }

    #[test]
    fn inner_products_on_h22() {
        let s = Scheme::build(SchemeSpec::Hamming { d: 2, q: 2 }).unwrap();
        let y = s.vertex_of_word(&[1, 1]).unwrap();
        let z = s.vertex_of_word(&[0, 1]).unwrap();
        assert!(character_hom_inner(&s, y, z).unwrap().is_zero());
        let full = character_hom_inner(&s, 0, 0).unwrap();
        assert_eq!(full, CyclotomicInt::from_int(2, 4));
    }

    #[test]
    fn orthogonality_h33() {
        let s = Scheme::build(SchemeSpec::Hamming { d: 3, q: 3 }).unwrap();
        let rows = orthogonality_check(&s).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.pairs > 0 && r.failures == 0 && r.mismatches == 0));
    }

    #[test]
    fn factored_form_agrees_even_when_nonzero() {
        let s = Scheme::build(SchemeSpec::Hamming { d: 2, q: 4 }).unwrap();
        for y in 0..s.n_vertices() {
            for z in 0..s.n_vertices() {
                assert_eq!(character_hom_inner(&s, y, z).unwrap(), character_hom_inner_factored(&s, y, z).unwrap());
            }
        }
    }

    fn triple() -> impl Strategy<Value = (CyclotomicInt, CyclotomicInt, CyclotomicInt)> {
        (2u32..=12).prop_flat_map(|q| {
            let el = move || proptest::collection::vec(-5i64..=5, q as usize).prop_map(move |p| CyclotomicInt::reduce(&p, q));
            (el(), el(), el())
        })
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
            prop_assert_eq!(a.conj().conj(), a);
        }
    }
}
