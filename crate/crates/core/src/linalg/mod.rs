//! Exact rational dense linear algebra.
//!
//! Every rank, nullspace and solve in the crate goes through this module. The
//! heavy lifting happens in [`kernel`], which clears denominators row by row
//! and runs fraction-free elimination; the public surface works with
//! [`Rational`] entries.

mod kernel;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `a` or `a/b`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Scale a rational vector by the lcm of its denominators.
pub fn integer_row(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `acc += c * v`
pub fn add_scaled(acc: &mut [Rational], c: &Rational, v: &[Rational]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.entries[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.entries[r * self.cols + c]
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    /// Build from equal-length rows. `cols` is needed for the empty case.
    pub fn from_rows(rows: &[Vec<Rational>], cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!("row of length {} != {cols}", bad.len())));
        }
        Ok(Self { rows: rows.len(), cols, entries: rows.concat() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), cols, |r, c| int(rows[r][c]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out.entries[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    /// Rows `rs` and columns `cs`, in the given order.
    pub fn submatrix(&self, rs: &[usize], cs: &[usize]) -> Self {
        Self::from_fn(rs.len(), cs.len(), |r, c| self[(rs[r], cs[c])].clone())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn augment(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("augment with different row counts".into()));
        }
        let cols = self.cols + other.cols;
        Ok(Self::from_fn(self.rows, cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        }))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

/// Linearly independent vectors spanning a subspace of `Q^ambient_dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vec<Rational>>,
}

impl SubspaceBasis {
    /// Fails unless every vector has length `ambient_dim` and the set is independent.
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch(format!("basis vector not of length {ambient_dim}")));
        }
        if rank_of_vectors(&vectors, ambient_dim) != vectors.len() {
            return Err(Error::LinearlyDependent);
        }
        Ok(Self { ambient_dim, vectors })
    }

    /// Keep a maximal independent subset of `vectors`, scanning in order.
    pub fn spanned_by(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Self {
        let mut builder = IncrementalBasis::new(ambient_dim);
        let mut kept = Vec::new();
        for v in vectors {
            if builder.insert(v) {
                kept.push(v.clone());
            }
        }
        Self { ambient_dim, vectors: kept }
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self { ambient_dim, vectors: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut b = IncrementalBasis::new(self.ambient_dim);
        for w in &self.vectors {
            b.insert(w);
        }
        !b.insert(v)
    }
}

/// Echelon basis that grows one vector at a time; used for closure computations.
#[derive(Debug, Clone)]
pub struct IncrementalBasis {
    ambient_dim: usize,
    // (pivot column, row scaled so the pivot is 1)
    rows: Vec<(usize, Vec<Rational>)>,
}

impl IncrementalBasis {
    pub fn new(ambient_dim: usize) -> Self {
        Self { ambient_dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after reduction against the current rows.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if !w[*p].is_zero() {
                let c = -w[*p].clone();
                add_scaled(&mut w, &c, row);
            }
        }
        w
    }

    /// Insert `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        debug_assert_eq!(v.len(), self.ambient_dim);
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        let w: Vec<Rational> = w.iter().map(|x| x * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = -row[p].clone();
                add_scaled(row, &c, &w);
            }
        }
        self.rows.push((p, w));
        true
    }
}

/// Result of [`rank_and_rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowReduction {
    pub rank: usize,
    pub rref: ExactMatrix,
    pub pivot_columns: Vec<usize>,
}

fn integer_rows(m: &ExactMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows).map(|r| integer_row(m.row(r))).collect()
}

/// Reduced row echelon form, rank and pivot columns. Pivots are chosen as the
/// first nonzero entry in column order, so the output is deterministic.
pub fn rank_and_rref(m: &ExactMatrix) -> RowReduction {
    let ech = kernel::reduce(&integer_rows(m), m.cols, true);
    let mut rref = ExactMatrix::zeros(m.rows, m.cols);
    for (i, (row, &p)) in ech.rows.iter().zip(&ech.pivots).enumerate() {
        let lead = &row[p];
        for (c, x) in row.iter().enumerate() {
            if !x.is_zero() {
                rref[(i, c)] = Rational::new(x.clone(), lead.clone());
            }
        }
    }
    RowReduction { rank: ech.pivots.len(), rref, pivot_columns: ech.pivots }
}

/// RREF together with an invertible `t` such that `t * m = rref`.
pub fn rref_with_transform(m: &ExactMatrix) -> (RowReduction, ExactMatrix) {
    let aug = m.augment(&ExactMatrix::identity(m.rows)).expect("same row count");
    let full = rank_and_rref(&aug);
    let all: Vec<usize> = (0..m.rows).collect();
    let left: Vec<usize> = (0..m.cols).collect();
    let right: Vec<usize> = (m.cols..m.cols + m.rows).collect();
    let rref = full.rref.submatrix(&all, &left);
    let t = full.rref.submatrix(&all, &right);
    let pivot_columns: Vec<usize> = full.pivot_columns.iter().copied().filter(|&c| c < m.cols).collect();
    (RowReduction { rank: pivot_columns.len(), rref, pivot_columns }, t)
}

pub fn rank(m: &ExactMatrix) -> usize {
    kernel::rank(&integer_rows(m), m.cols)
}

/// Rank of a list of vectors of common length `ambient_dim`.
pub fn rank_of_vectors(vectors: &[Vec<Rational>], ambient_dim: usize) -> usize {
    let rows: Vec<Vec<BigInt>> = vectors.iter().map(|v| integer_row(v)).collect();
    kernel::rank(&rows, ambient_dim)
}

/// Rank of integer rows of common width.
pub fn rank_of_integer_rows(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    kernel::rank(rows, ncols)
}

/// Basis of the right nullspace `{x : m x = 0}`, one vector per free column,
/// with a 1 in that column.
pub fn nullspace(m: &ExactMatrix) -> Vec<Vec<Rational>> {
    nullspace_of_integer_rows(&integer_rows(m), m.cols)
}

pub fn nullspace_of_integer_rows(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<Rational>> {
    let ech = kernel::reduce(rows, ncols, true);
    let mut is_pivot = vec![false; ncols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                if !row[f].is_zero() {
                    v[p] = -Rational::new(row[f].clone(), row[p].clone());
                }
            }
            v
        })
        .collect()
}

/// One exact solution of `a x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve_linear(a: &ExactMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.rows, b.len(), "solve_linear: a.rows must equal b.len()");
    let rhs = ExactMatrix::from_fn(b.len(), 1, |r, _| b[r].clone());
    let red = rank_and_rref(&a.augment(&rhs).expect("row counts agree"));
    if red.pivot_columns.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); a.cols];
    for (i, &p) in red.pivot_columns.iter().enumerate() {
        x[p] = red.rref[(i, a.cols)].clone();
    }
    Some(x)
}

/// Lagrange projectors `P_j = prod_{i != j} (a - theta_i I) / (theta_j - theta_i)`.
///
/// The eigenvalue list must be pairwise distinct and exhaustive; this is
/// checked by verifying `prod_i (a - theta_i I) = 0`. Any matrix annihilated by
/// a product of distinct linear factors is diagonalizable, so symmetry is not
/// required for the projector identities to hold.
pub fn spectral_projectors(a: &ExactMatrix, eigenvalues: &[Rational]) -> Result<Vec<ExactMatrix>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("spectral_projectors needs a square matrix".into()));
    }
    if eigenvalues.is_empty() {
        return Err(Error::MinimalPolynomial("empty eigenvalue list".into()));
    }
    for (i, x) in eigenvalues.iter().enumerate() {
        if eigenvalues[..i].contains(x) {
            return Err(Error::MinimalPolynomial(format!("eigenvalue {x} repeated")));
        }
    }
    let n = a.rows;
    let id = ExactMatrix::identity(n);
    let factors: Vec<ExactMatrix> = eigenvalues
        .iter()
        .map(|t| a.sub(&id.scale(t)).expect("square"))
        .collect();
    let mut prod = id.clone();
    for f in &factors {
        prod = prod.mul(f)?;
    }
    if !prod.is_zero() {
        return Err(Error::MinimalPolynomial(
            "product of (a - theta I) over the supplied eigenvalues is nonzero".into(),
        ));
    }
    let mut out = Vec::with_capacity(eigenvalues.len());
    for (j, tj) in eigenvalues.iter().enumerate() {
        let mut p = id.clone();
        let mut denom = Rational::one();
        for (i, ti) in eigenvalues.iter().enumerate() {
            if i != j {
                p = p.mul(&factors[i])?;
                denom *= tj - ti;
            }
        }
        out.push(p.scale(&denom.recip()));
    }
    Ok(out)
}

/// Coefficients (constant term first) of the Lagrange basis polynomials
/// `prod_{i != j} (x - theta_i) / (theta_j - theta_i)`.
pub fn lagrange_polynomials(eigenvalues: &[Rational]) -> Vec<Vec<Rational>> {
    (0..eigenvalues.len())
        .map(|j| {
            let mut poly = vec![Rational::one()];
            let mut denom = Rational::one();
            for (i, ti) in eigenvalues.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut next = vec![Rational::zero(); poly.len() + 1];
                for (k, c) in poly.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * ti;
                }
                poly = next;
                denom *= &eigenvalues[j] - ti;
            }
            let inv = denom.recip();
            poly.iter().map(|c| c * &inv).collect()
        })
        .collect()
}

/// Determinant by fraction-free reduction (small matrices only).
pub fn determinant(m: &ExactMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != col {
            for c in 0..n {
                let tmp = a[(p, c)].clone();
                a[(p, c)] = a[(col, c)].clone();
                a[(col, c)] = tmp;
            }
            det = -det;
        }
        let pivot = a[(col, col)].clone();
        det *= &pivot;
        for r in col + 1..n {
            if a[(r, col)].is_zero() {
                continue;
            }
            let f = &a[(r, col)] / &pivot;
            for c in col..n {
                let delta = &f * &a[(col, c)];
                a[(r, c)] -= delta;
            }
        }
    }
    Ok(det)
}

/// Orthogonalize (exact Gram-Schmidt, no normalization). Zero residuals are dropped.
pub fn gram_schmidt(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for (u, uu) in &out {
            let c = dot(&w, u) / uu;
            let c = -c;
            add_scaled(&mut w, &c, u);
        }
        if !is_zero_vector(&w) {
            let ww = dot(&w, &w);
            out.push((w, ww));
        }
    }
    out.into_iter().map(|(w, _)| w).collect()
}

/// Rescale to a primitive integer vector with positive first nonzero entry.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let row = integer_row(v);
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = row.iter().find(|x| !x.is_zero()).map_or(BigInt::one(), |x| {
        if x < &BigInt::zero() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    });
    let g = g * sign;
    row.iter().map(|x| Rational::from_integer(x / &g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_row_has_rank_one() {
        let m = ExactMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        let red = rank_and_rref(&m);
        assert_eq!(red.rank, 1);
        assert_eq!(red.rref, ExactMatrix::from_i64(&[&[1, 1], &[0, 0]]));
        assert_eq!(red.pivot_columns, vec![0]);
    }

    #[test]
    fn identity_has_full_rank() {
        for n in 0..6 {
            let red = rank_and_rref(&ExactMatrix::identity(n));
            assert_eq!(red.rank, n);
            assert_eq!(red.rref, ExactMatrix::identity(n));
        }
    }

    #[test]
    fn quarter_all_ones_has_rank_one() {
        let m = ExactMatrix::from_fn(4, 4, |_, _| rat(1, 4));
        assert_eq!(rank_and_rref(&m).rank, 1);
    }

    #[test]
    fn rref_entries_are_reduced() {
        let m = ExactMatrix::from_i64(&[&[2, 4, 1], &[1, 2, 3], &[3, 6, 4]]);
        let red = rank_and_rref(&m);
        assert_eq!(red.rank, 2);
        assert_eq!(red.pivot_columns, vec![0, 2]);
        assert_eq!(red.rref, ExactMatrix::from_i64(&[&[1, 2, 0], &[0, 0, 1], &[0, 0, 0]]));
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = vec![rat(1, 2), int(-3), rat(7, 5)];
        assert_eq!(solve_linear(&ExactMatrix::identity(3), &b), Some(b));
    }

    #[test]
    fn solve_underdetermined_satisfies_system() {
        let a = ExactMatrix::from_i64(&[&[1, 1]]);
        let x = solve_linear(&a, &[int(2)]).unwrap();
        assert_eq!(&x[0] + &x[1], int(2));
    }

    #[test]
    fn solve_inconsistent_is_none() {
        let a = ExactMatrix::from_i64(&[&[1], &[1]]);
        assert_eq!(solve_linear(&a, &[int(0), int(1)]), None);
    }

    #[test]
    fn projectors_of_hamming_2_2_adjacency() {
        // vertices 00, 01, 10, 11
        let a = ExactMatrix::from_i64(&[&[0, 1, 1, 0], &[1, 0, 0, 1], &[1, 0, 0, 1], &[0, 1, 1, 0]]);
        let ps = spectral_projectors(&a, &[int(2), int(0), int(-2)]).unwrap();
        assert_eq!(ps[0], ExactMatrix::from_fn(4, 4, |_, _| rat(1, 4)));
        let sum = ps.iter().skip(1).fold(ps[0].clone(), |acc, p| acc.add(p).unwrap());
        assert_eq!(sum, ExactMatrix::identity(4));
        for (j, p) in ps.iter().enumerate() {
            assert_eq!(p.mul(p).unwrap(), *p);
            for q in &ps[j + 1..] {
                assert!(p.mul(q).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn projector_of_zero_matrix_is_identity() {
        let ps = spectral_projectors(&ExactMatrix::zeros(3, 3), &[int(0)]).unwrap();
        assert_eq!(ps, vec![ExactMatrix::identity(3)]);
    }

    #[test]
    fn projectors_of_diagonal() {
        let a = ExactMatrix::from_i64(&[&[1, 0], &[0, 2]]);
        let ps = spectral_projectors(&a, &[int(1), int(2)]).unwrap();
        assert_eq!(ps[0], ExactMatrix::from_i64(&[&[1, 0], &[0, 0]]));
        assert_eq!(ps[1], ExactMatrix::from_i64(&[&[0, 0], &[0, 1]]));
    }

    #[test]
    fn incomplete_eigenvalues_are_rejected() {
        let a = ExactMatrix::from_i64(&[&[1, 0], &[0, 2]]);
        assert!(matches!(spectral_projectors(&a, &[int(1)]), Err(Error::MinimalPolynomial(_))));
        assert!(matches!(
            spectral_projectors(&a, &[int(1), int(1), int(2)]),
            Err(Error::MinimalPolynomial(_))
        ));
    }

    #[test]
    fn lagrange_polynomials_match_projectors() {
        let thetas = [int(2), int(0), int(-2)];
        let polys = lagrange_polynomials(&thetas);
        // p_0(x) = x(x+2)/8
        assert_eq!(polys[0], vec![int(0), rat(1, 4), rat(1, 8)]);
        for (j, p) in polys.iter().enumerate() {
            for (i, t) in thetas.iter().enumerate() {
                let val: Rational = p.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c);
                assert_eq!(val, if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let m = ExactMatrix::from_i64(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vector(&m.mul_vec(v).unwrap()));
        }
    }

    #[test]
    fn determinant_small() {
        let m = ExactMatrix::from_i64(&[&[1, 3], &[1, 4]]);
        assert_eq!(determinant(&m).unwrap(), int(1));
        let m = ExactMatrix::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(determinant(&m).unwrap(), int(-2));
    }

    #[test]
    fn gram_schmidt_is_orthogonal() {
        let vs = vec![vec![int(1), int(1), int(0)], vec![int(1), int(0), int(1)], vec![int(2), int(1), int(1)]];
        let out = gram_schmidt(&vs);
        assert_eq!(out.len(), 2);
        assert!(dot(&out[0], &out[1]).is_zero());
    }

    #[test]
    fn parse_and_primitive() {
        assert_eq!(parse_rational(" 3/6 "), Some(rat(1, 2)));
        assert_eq!(parse_rational("-4"), Some(int(-4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(primitive(&[rat(-1, 2), rat(3, 4)]), vec![int(2), int(-3)]);
    }

    #[test]
    fn subspace_basis_rejects_dependent_vectors() {
        let v = vec![int(1), int(2)];
        let w = vec![int(2), int(4)];
        assert_eq!(SubspaceBasis::new(2, vec![v.clone(), w.clone()]), Err(Error::LinearlyDependent));
        let b = SubspaceBasis::spanned_by(2, &[v.clone(), w]);
        assert_eq!(b.dim(), 1);
        assert!(b.contains(&[int(-3), int(-6)]));
        assert!(!b.contains(&[int(1), int(0)]));
    }
}
