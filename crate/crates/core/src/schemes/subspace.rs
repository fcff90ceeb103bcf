//! Subspaces of `F_p^n` for small primes `p`, stored by their unique reduced
//! row echelon basis, plus the symplectic form used by the dual polar family.

use std::cmp::Ordering;
use std::fmt;

/// Reduced row echelon form mod `p`. Returns the nonzero rows.
pub fn rref_mod_p(rows: &[Vec<u8>], p: u8) -> Vec<Vec<u8>> {
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let pp = p as u32;
    let inv = |a: u8| -> u8 { (1..p).find(|&b| (a as u32 * b as u32) % pp == 1).expect("p prime") };
    let mut prow = 0;
    for col in 0..ncols {
        let Some(src) = (prow..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(prow, src);
        let s = inv(m[prow][col]) as u32;
        for x in m[prow].iter_mut() {
            *x = ((*x as u32 * s) % pp) as u8;
        }
        let pivot = m[prow].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == prow || row[col] == 0 {
                continue;
            }
            let f = row[col] as u32;
            for (x, &y) in row.iter_mut().zip(&pivot) {
                *x = ((*x as u32 + pp * pp - f * y as u32) % pp) as u8;
            }
        }
        prow += 1;
        if prow == m.len() {
            break;
        }
    }
    m.truncate(prow);
    m
}

/// Basis of `{x : rows . x = 0}` mod `p`.
pub fn nullspace_mod_p(rows: &[Vec<u8>], ncols: usize, p: u8) -> Vec<Vec<u8>> {
    let red = rref_mod_p(rows, p);
    let pivots: Vec<usize> = red.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u8; ncols];
            v[f] = 1;
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// A subspace of `F_p^n`, canonical by its reduced echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: u8,
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<String>()).collect();
        write!(f, "<{}>", rows.join(","))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rows.cmp(&other.rows)
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subspace {
    pub fn span(vectors: &[Vec<u8>], n: usize, p: u8) -> Self {
        let reduced: Vec<Vec<u8>> = vectors.iter().map(|v| v.iter().map(|x| x % p).collect()).collect();
        Self { p, n, rows: rref_mod_p(&reduced, p) }
    }

    pub fn zero(n: usize, p: u8) -> Self {
        Self { p, n, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u8 {
        self.p
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut all = self.rows.clone();
        all.extend(other.rows.iter().cloned());
        Self::span(&all, self.n, self.p)
    }

    /// Annihilator under the standard dot product.
    fn annihilator(&self) -> Vec<Vec<u8>> {
        if self.rows.is_empty() {
            return (0..self.n)
                .map(|i| {
                    let mut v = vec![0; self.n];
                    v[i] = 1;
                    v
                })
                .collect();
        }
        nullspace_mod_p(&self.rows, self.n, self.p)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut constraints = self.annihilator();
        constraints.extend(other.annihilator());
        if constraints.is_empty() {
            return Self::span(&identity_rows(self.n), self.n, self.p);
        }
        Self::span(&nullspace_mod_p(&constraints, self.n, self.p), self.n, self.p)
    }

    pub fn contains(&self, other: &Self) -> bool {
        other.rows.iter().all(|v| self.contains_vector(v))
    }

    pub fn contains_vector(&self, v: &[u8]) -> bool {
        let mut all = self.rows.clone();
        all.push(v.to_vec());
        rref_mod_p(&all, self.p).len() == self.rows.len()
    }

    /// Orthogonal complement for the standard symplectic form on `F_p^{2d}`.
    pub fn symplectic_perp(&self) -> Self {
        let d = self.n / 2;
        let twisted: Vec<Vec<u8>> = self
            .rows
            .iter()
            .map(|u| {
                let mut w = vec![0u8; self.n];
                for k in 0..d {
                    w[k] = (self.p - u[d + k]) % self.p;
                    w[d + k] = u[k];
                }
                w
            })
            .collect();
        if twisted.is_empty() {
            return Self::span(&identity_rows(self.n), self.n, self.p);
        }
        Self::span(&nullspace_mod_p(&twisted, self.n, self.p), self.n, self.p)
    }

    pub fn is_totally_isotropic(&self) -> bool {
        let d = self.n / 2;
        self.rows.iter().enumerate().all(|(i, u)| {
            self.rows[i + 1..].iter().all(|v| symplectic_form(u, v, d, self.p) == 0)
        })
    }
}

fn identity_rows(n: usize) -> Vec<Vec<u8>> {
    (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect()
}

/// `sum_{i<d} (u_i v_{d+i} - u_{d+i} v_i) mod p`
pub fn symplectic_form(u: &[u8], v: &[u8], d: usize, p: u8) -> u8 {
    let pp = p as u32;
    let mut s = 0u32;
    for i in 0..d {
        s += u[i] as u32 * v[d + i] as u32;
        s += (pp - 1) * (u[d + i] as u32 * v[i] as u32 % pp);
    }
    (s % pp) as u8
}

/// All maximal (dimension `d`) totally isotropic subspaces of `F_p^{2d}`,
/// sorted by their reduced echelon basis matrices.
pub fn maximal_isotropic_subspaces(d: usize, p: u8) -> Vec<Subspace> {
    let n = 2 * d;
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        // free slots: (row, col) with col > pivot[row] and col not a pivot
        let slots: Vec<(usize, usize)> = (0..d)
            .flat_map(|r| {
                let piv = pivots.clone();
                (pivots[r] + 1..n).filter(move |c| !piv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let total = (p as u64).pow(slots.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![0u8; n]; d];
            for (r, &c) in pivots.iter().enumerate() {
                rows[r][c] = 1;
            }
            let mut rest = code;
            for &(r, c) in &slots {
                rows[r][c] = (rest % p as u64) as u8;
                rest /= p as u64;
            }
            let s = Subspace { p, n, rows };
            if s.is_totally_isotropic() {
                out.push(s);
            }
        }
        if !next_combination(&mut pivots, n) {
            break;
        }
    }
    out.sort();
    out
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
