//! Fraction-free integer row reduction.
//!
//! Rows are reduced with `row <- (a/g) row - (b/g) pivot` and then divided by
//! their content, which keeps entries small for the 0/1 and idempotent-scaled
//! matrices this crate feeds in. The elimination runs in `i128` with checked
//! arithmetic first and restarts over `BigInt` on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) trait KernelInt: Clone + PartialEq + Sized {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_one(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    /// Nonnegative gcd.
    fn gcd(&self, other: &Self) -> Option<Self>;
    fn div_exact(&self, other: &Self) -> Self;
}

impl KernelInt for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn gcd(&self, other: &Self) -> Option<Self> {
        let (mut a, mut b) = (self.unsigned_abs(), other.unsigned_abs());
        while b != 0 {
            let r = a % b;
            a = b;
            b = r;
        }
        i128::try_from(a).ok()
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
}

impl KernelInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn gcd(&self, other: &Self) -> Option<Self> {
        Some(Integer::gcd(self, other))
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
}

/// Row echelon form over the integers: each kept row is primitive with a
/// positive leading entry in column `pivots[i]`.
#[derive(Debug, Clone)]
pub(crate) struct Echelon<T> {
    pub rows: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
}

fn make_primitive<T: KernelInt>(row: &mut [T]) -> Option<()> {
    let mut g = T::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x)?;
            if g.is_one() {
                return Some(());
            }
        }
    }
    if g.is_zero() {
        return Some(());
    }
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x = x.div_exact(&g);
        }
    }
    Some(())
}

fn combine<T: KernelInt>(row: &mut [T], pivot: &[T], col: usize, from: usize) -> Option<()> {
    let a = &pivot[col];
    let b = row[col].clone();
    let g = a.gcd(&b)?;
    let fa = a.div_exact(&g);
    let fb = b.div_exact(&g);
    for c in from..row.len() {
        let p = &pivot[c];
        let scaled = if fa.is_one() { row[c].clone() } else { row[c].mul(&fa)? };
        row[c] = if p.is_zero() { scaled } else { scaled.sub(&p.mul(&fb)?)? };
    }
    make_primitive(row)
}

fn eliminate<T: KernelInt>(mut rows: Vec<Vec<T>>, ncols: usize, full: bool) -> Option<Echelon<T>> {
    for row in rows.iter_mut() {
        make_primitive(row)?;
    }
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..ncols {
        if prow == nrows {
            break;
        }
        let Some(src) = (prow..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(prow, src);
        if rows[prow][col].is_negative() {
            for x in rows[prow].iter_mut() {
                *x = x.neg()?;
            }
        }
        let (head, tail) = rows.split_at_mut(prow + 1);
        let pivot = &head[prow];
        for row in tail.iter_mut() {
            if !row[col].is_zero() {
                combine(row, pivot, col, col)?;
            }
        }
        if full {
            let (above, rest) = head.split_at_mut(prow);
            let pivot = &rest[0];
            for row in above.iter_mut() {
                if !row[col].is_zero() {
                    combine(row, pivot, col, 0)?;
                }
            }
        }
        pivots.push(col);
        prow += 1;
    }
    rows.truncate(prow);
    Some(Echelon { rows, pivots })
}

/// Reduce integer rows of width `ncols`. With `full`, entries above each
/// pivot are cleared as well (a scaled reduced row echelon form).
pub(crate) fn reduce(rows: &[Vec<BigInt>], ncols: usize, full: bool) -> Echelon<BigInt> {
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128()).collect())
        .collect();
    if let Some(small) = small {
        if let Some(ech) = eliminate(small, ncols, full) {
            return Echelon {
                rows: ech
                    .rows
                    .into_iter()
                    .map(|r| r.into_iter().map(BigInt::from).collect())
                    .collect(),
                pivots: ech.pivots,
            };
        }
    }
    eliminate(rows.to_vec(), ncols, full).expect("BigInt elimination cannot overflow")
}

pub(crate) fn rank(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    reduce(rows, ncols, false).pivots.len()
}
