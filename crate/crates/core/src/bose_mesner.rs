//! Bose-Mesner algebra of a P-polynomial scheme.
//!
//! Everything is computed inside the `(d+1)`-dimensional algebra spanned by
//! `A_0..A_d`: left multiplication by `A_1` is the tridiagonal intersection
//! matrix `B` with `B[k][j] = p^k_{1j}`, so the Lagrange projectors of `B`
//! applied to `A_0` give the coordinates of the primitive idempotents. Full
//! `|X| x |X|` matrices are only materialized on request.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, int, ExactMatrix, Rational};
use crate::schemes::Scheme;

/// Eigen-data of the Bose-Mesner algebra, with the idempotents in the
/// Q-polynomial ordering when one exists (descending `theta` otherwise).
#[derive(Debug, Clone)]
pub struct BoseMesnerData {
    n: usize,
    d: usize,
    theta: Vec<Rational>,
    p: ExactMatrix,
    q: ExactMatrix,
    multiplicities: Vec<usize>,
    krein: Vec<Rational>,
    q_ordering: Option<Vec<usize>>,
    projector_polys: Vec<Vec<Rational>>,
    intersection_matrix: ExactMatrix,
}

/// Characteristic polynomial of a tridiagonal matrix, constant term first.
fn tridiagonal_charpoly(diag: &[BigInt], upper: &[BigInt], lower: &[BigInt]) -> Vec<BigInt> {
    // D_k = (x - a_k) D_{k-1} - upper_{k-1} lower_k D_{k-2}
    let mut prev2: Vec<BigInt> = vec![BigInt::one()];
    let mut prev: Vec<BigInt> = vec![-diag[0].clone(), BigInt::one()];
    for k in 1..diag.len() {
        let mut next = vec![BigInt::zero(); prev.len() + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &diag[k];
        }
        let f = &upper[k - 1] * &lower[k];
        for (i, c) in prev2.iter().enumerate() {
            next[i] -= c * &f;
        }
        prev2 = prev;
        prev = next;
    }
    prev
}

fn eval_poly(poly: &[BigInt], x: &BigInt) -> BigInt {
    poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Divide by `(x - r)`; `r` must be a root.
fn deflate(poly: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let deg = poly.len() - 1;
    let mut out = vec![BigInt::zero(); deg];
    let mut carry = BigInt::zero();
    for i in (1..=deg).rev() {
        carry = &poly[i] + carry * r;
        out[i - 1] = carry.clone();
    }
    out
}

/// Integer roots (with multiplicity) of an integer polynomial, by trial
/// division of the constant term. Returns the roots and the leftover factor.
pub fn integer_roots(poly: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut poly: Vec<BigInt> = poly.to_vec();
    while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    let mut roots = Vec::new();
    while poly.len() > 1 && poly[0].is_zero() {
        roots.push(BigInt::zero());
        poly.remove(0);
    }
    'outer: while poly.len() > 1 {
        let c0 = poly[0].abs();
        let limit = c0.sqrt();
        let mut t = BigInt::one();
        while t <= limit {
            if (&c0 % &t).is_zero() {
                let other = &c0 / &t;
                for cand in [t.clone(), -t.clone(), other.clone(), -other] {
                    if eval_poly(&poly, &cand).is_zero() {
                        poly = deflate(&poly, &cand);
                        roots.push(cand);
                        continue 'outer;
                    }
                }
            }
            t += 1;
        }
        break;
    }
    (roots, poly)
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

impl BoseMesnerData {
    /// Build the eigen-data of a P-polynomial scheme (natural ordering).
    pub fn primitive_idempotents(s: &Scheme) -> Result<Self> {
        let pn = s.intersection_numbers();
        let (Some(c), Some(a), Some(b)) = (&pn.c, &pn.a, &pn.b) else {
            return Err(Error::Unsupported(format!(
                "{} is not P-polynomial in its natural ordering",
                s.spec().short_name()
            )));
        };
        let d = s.classes();
        let n = s.n_vertices();
        let big = |v: &[u64]| -> Vec<BigInt> { v.iter().map(|&x| BigInt::from(x)).collect() };
        let charpoly = tridiagonal_charpoly(&big(a), &big(b), &big(c));
        let (mut roots, rest) = integer_roots(&charpoly);
        if rest.len() > 1 {
            return Err(Error::NonIntegerEigenvalue(format!(
                "characteristic polynomial of the intersection matrix of {} has a non-integer factor of degree {}",
                s.spec().short_name(),
                rest.len() - 1
            )));
        }
        roots.sort_by(|x, y| y.cmp(x));
        roots.dedup();
        if roots.len() != d + 1 {
            return Err(Error::NonIntegerEigenvalue("repeated eigenvalue of the intersection matrix".into()));
        }
        let theta: Vec<Rational> = roots.into_iter().map(Rational::from_integer).collect();

        let intersection_matrix = ExactMatrix::from_fn(d + 1, d + 1, |k, j| int(pn.p(1, j, k) as i64));
        let projectors = linalg::spectral_projectors(&intersection_matrix, &theta)?;
        let nr = int(n as i64);
        // Q(i,j) = |X| * (coordinate of E_j on A_i)
        let q = ExactMatrix::from_fn(d + 1, d + 1, |i, j| &projectors[j][(i, 0)] * &nr);
        // P(j,i) = v_i(theta_j) from c_{i+1} v_{i+1} = (x - a_i) v_i - b_{i-1} v_{i-1}
        let p = ExactMatrix::from_fn(d + 1, d + 1, |j, i| {
            let x = &theta[j];
            let mut vals = vec![int(1), x.clone()];
            for k in 1..i {
                let next = ((x - int(a[k] as i64)) * &vals[k] - int(b[k - 1] as i64) * &vals[k - 1])
                    / int(c[k + 1] as i64);
                vals.push(next);
            }
            vals[i].clone()
        });
        if p.mul(&q)? != ExactMatrix::identity(d + 1).scale(&nr) {
            return Err(Error::AxiomViolation("P Q != |X| I".into()));
        }
        let projector_polys = linalg::lagrange_polynomials(&theta);
        let mut out = Self {
            n,
            d,
            theta,
            p,
            q,
            multiplicities: Vec::new(),
            krein: Vec::new(),
            q_ordering: None,
            projector_polys,
            intersection_matrix,
        };
        out.multiplicities = (0..=d)
            .map(|j| {
                let m = &out.q[(0, j)];
                if !m.is_integer() || !m.is_positive() {
                    return Err(Error::AxiomViolation(format!("multiplicity m_{j} = {m} is not a positive integer")));
                }
                Ok(m.to_integer().to_usize().expect("fits"))
            })
            .collect::<Result<_>>()?;
        out.krein = out.compute_krein();
        if let Some(order) = out.detect_q_polynomial_ordering() {
            out.reorder(&order);
            out.q_ordering = Some(order);
        }
        Ok(out)
    }

    fn compute_krein(&self) -> Vec<Rational> {
        let w = self.d + 1;
        let nr = int(self.n as i64);
        let mut out = vec![Rational::zero(); w * w * w];
        for k in 0..w {
            for i in 0..w {
                for j in 0..w {
                    let mut s = Rational::zero();
                    for r in 0..w {
                        s += &self.q[(r, i)] * &self.q[(r, j)] * &self.p[(k, r)];
                    }
                    out[(k * w + i) * w + j] = s / &nr;
                }
            }
        }
        out
    }

    fn reorder(&mut self, order: &[usize]) {
        let w = self.d + 1;
        self.theta = order.iter().map(|&j| self.theta[j].clone()).collect();
        self.p = ExactMatrix::from_fn(w, w, |j, i| self.p[(order[j], i)].clone());
        self.q = ExactMatrix::from_fn(w, w, |i, j| self.q[(i, order[j])].clone());
        self.multiplicities = order.iter().map(|&j| self.multiplicities[j]).collect();
        self.projector_polys = order.iter().map(|&j| self.projector_polys[j].clone()).collect();
        self.krein = self.compute_krein();
    }

    /// `q^k_{ij}` in the current ordering.
    pub fn krein(&self, i: usize, j: usize, k: usize) -> &Rational {
        let w = self.d + 1;
        &self.krein[(k * w + i) * w + j]
    }

    /// Whether relabelling `E'_j = E_{perm[j]}` is a Q-polynomial ordering.
    pub fn is_q_polynomial_ordering(&self, perm: &[usize]) -> bool {
        let d = self.d;
        if perm.len() != d + 1 || perm[0] != 0 {
            return false;
        }
        let q1 = |j: usize, k: usize| self.krein(perm[1], perm[j], perm[k]);
        (0..=d).all(|j| {
            (0..=d).all(|k| k.abs_diff(j) <= 1 || q1(j, k).is_zero()) && (j == d || !q1(j, j + 1).is_zero())
        })
    }

    /// Lexicographically least permutation fixing 0 that is a Q-polynomial
    /// ordering of the current idempotent order.
    pub fn detect_q_polynomial_ordering(&self) -> Option<Vec<usize>> {
        let mut perm: Vec<usize> = (0..=self.d).collect();
        loop {
            if self.is_q_polynomial_ordering(&perm) {
                return Some(perm);
            }
            if !next_permutation(&mut perm[1..]) {
                return None;
            }
        }
    }

    /// The Q-polynomial permutation applied relative to descending `theta`, if any.
    pub fn q_ordering(&self) -> Option<&[usize]> {
        self.q_ordering.as_deref()
    }

    pub fn is_q_polynomial(&self) -> bool {
        self.q_ordering.is_some()
    }

    /// `P = Q` under the current orderings.
    pub fn formal_self_duality(&self) -> bool {
        self.p == self.q
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> usize {
        self.d
    }

    /// `theta_j`: eigenvalue of `A_1` on `E_j`.
    pub fn theta(&self) -> &[Rational] {
        &self.theta
    }

    /// `theta*_i = Q(i,1)`, the eigenvalue sequence of `A*_1`.
    pub fn theta_star(&self) -> Vec<Rational> {
        if self.d == 0 {
            return vec![self.q[(0, 0)].clone()];
        }
        (0..=self.d).map(|i| self.q[(i, 1)].clone()).collect()
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// `(P, Q)` with `P[(j,i)]` the eigenvalue of `A_i` on `E_j` and
    /// `E_j = |X|^{-1} sum_i Q[(i,j)] A_i`.
    pub fn eigenmatrices(&self) -> (&ExactMatrix, &ExactMatrix) {
        (&self.p, &self.q)
    }

    pub fn intersection_matrix(&self) -> &ExactMatrix {
        &self.intersection_matrix
    }

    /// Coefficients of `E_j` as a polynomial in `A_1`.
    pub fn projector_polynomial(&self, j: usize) -> &[Rational] {
        &self.projector_polys[j]
    }

    pub fn adjacency(&self, s: &Scheme, i: usize) -> ExactMatrix {
        ExactMatrix::from_fn(self.n, self.n, |x, y| int((s.relation(x, y) == i) as i64))
    }

    pub fn idempotent(&self, s: &Scheme, j: usize) -> ExactMatrix {
        let col: Vec<Rational> = (0..=self.d).map(|i| &self.q[(i, j)] / int(self.n as i64)).collect();
        ExactMatrix::from_fn(self.n, self.n, |x, y| col[s.relation(x, y)].clone())
    }

    /// `(E_j)_{xy}` for every `y`, as integers after scaling by a common factor.
    pub fn idempotent_row_scaled(&self, s: &Scheme, j: usize, x: usize) -> Vec<BigInt> {
        let col: Vec<Rational> = (0..=self.d).map(|i| self.q[(i, j)].clone()).collect();
        let l = col.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Vec<BigInt> = col.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        s.relation_row(x).iter().map(|&r| scaled[r as usize].clone()).collect()
    }

    /// `A_1^k v` for `k = 0..=d`.
    fn krylov(&self, s: &Scheme, v: &[Rational]) -> Vec<Vec<Rational>> {
        let mut out = vec![v.to_vec()];
        for _ in 0..self.d {
            let prev = out.last().expect("nonempty");
            out.push(apply_adjacency(s, prev));
        }
        out
    }

    /// `E_j v` for every `j`, via the projector polynomials in `A_1`.
    pub fn apply_idempotents(&self, s: &Scheme, v: &[Rational]) -> Vec<Vec<Rational>> {
        let powers = self.krylov(s, v);
        self.projector_polys
            .iter()
            .map(|poly| {
                let mut acc = vec![Rational::zero(); v.len()];
                for (c, pw) in poly.iter().zip(&powers) {
                    linalg::add_scaled(&mut acc, c, pw);
                }
                acc
            })
            .collect()
    }

    pub fn apply_idempotent(&self, s: &Scheme, j: usize, v: &[Rational]) -> Vec<Rational> {
        let powers = self.krylov(s, v);
        let mut acc = vec![Rational::zero(); v.len()];
        for (c, pw) in self.projector_polys[j].iter().zip(&powers) {
            linalg::add_scaled(&mut acc, c, pw);
        }
        acc
    }

    /// Check `A_i = sum_j P(j,i) E_j` and `E_j = |X|^{-1} sum_i Q(i,j) A_i`
    /// on materialized matrices, plus the idempotent identities. Intended for
    /// small schemes.
    pub fn verify_full_matrices(&self, s: &Scheme) -> Result<()> {
        let es: Vec<ExactMatrix> = (0..=self.d).map(|j| self.idempotent(s, j)).collect();
        let a1 = self.adjacency(s, 1);
        let projectors = linalg::spectral_projectors(&a1, &self.theta)?;
        for j in 0..=self.d {
            if projectors[j] != es[j] {
                return Err(Error::AxiomViolation(format!("E_{j} differs from the Lagrange projector of A_1")));
            }
            if es[j].mul(&es[j])? != es[j] {
                return Err(Error::AxiomViolation(format!("E_{j} is not idempotent")));
            }
            if linalg::rank(&es[j]) != self.multiplicities[j] || es[j].trace() != int(self.multiplicities[j] as i64) {
                return Err(Error::AxiomViolation(format!("rank/trace of E_{j} != m_{j}")));
            }
            for k in j + 1..=self.d {
                if !es[j].mul(&es[k])?.is_zero() {
                    return Err(Error::AxiomViolation(format!("E_{j} E_{k} != 0")));
                }
            }
        }
        for i in 0..=self.d {
            let mut sum = ExactMatrix::zeros(self.n, self.n);
            for (j, e) in es.iter().enumerate() {
                sum = sum.add(&e.scale(&self.p[(j, i)]))?;
            }
            if sum != self.adjacency(s, i) {
                return Err(Error::AxiomViolation(format!("A_{i} != sum_j P(j,{i}) E_j")));
            }
        }
        Ok(())
    }
}

/// `(A_1 v)(x) = sum_{y ~ x} v(y)`
pub fn apply_adjacency(s: &Scheme, v: &[Rational]) -> Vec<Rational> {
    (0..s.n_vertices())
        .map(|x| {
            let mut acc = Rational::zero();
            for &y in s.neighbors(x) {
                if !v[y].is_zero() {
                    acc += &v[y];
                }
            }
            acc
        })
        .collect()
}
