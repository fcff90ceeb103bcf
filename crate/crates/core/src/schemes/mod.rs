//! Concrete symmetric association schemes with a canonical vertex order.
//!
//! Four families are built: Hamming `H(d,q)`, Johnson `J(v,d)`, the symplectic
//! dual polar schemes `C_d(q)` and Doob schemes (products of Shrikhande graphs
//! and `K_4`). Every scheme is checked against the association-scheme axiom at
//! construction: exhaustively up to 256 vertices, on sampled pairs above that.

pub mod subspace;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
pub use subspace::Subspace;

/// Largest vertex count accepted by [`Scheme::build`].
pub const MAX_VERTICES: usize = 4096;

/// Pairs above this many vertices are spot-checked instead of exhaustively.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Hamming,
    Johnson,
    DualPolarC,
    Doob,
}

/// Family plus parameters. Text form: `family=hamming d=4 q=2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeSpec {
    Hamming { d: usize, q: usize },
    Johnson { v: usize, d: usize },
    DualPolarC { d: usize, q: usize },
    Doob { n: usize, m: usize },
}

impl SchemeSpec {
    pub fn family(&self) -> Family {
        match self {
            SchemeSpec::Hamming { .. } => Family::Hamming,
            SchemeSpec::Johnson { .. } => Family::Johnson,
            SchemeSpec::DualPolarC { .. } => Family::DualPolarC,
            SchemeSpec::Doob { .. } => Family::Doob,
        }
    }

    /// Short label such as `H(4,2)` or `J(5,2)`.
    pub fn short_name(&self) -> String {
        match *self {
            SchemeSpec::Hamming { d, q } => format!("H({d},{q})"),
            SchemeSpec::Johnson { v, d } => format!("J({v},{d})"),
            SchemeSpec::DualPolarC { d, q } => format!("C{d}({q})"),
            SchemeSpec::Doob { n, m } => format!("Doob({n},{m})"),
        }
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SchemeSpec::Hamming { d, q } => write!(f, "family=hamming d={d} q={q}"),
            SchemeSpec::Johnson { v, d } => write!(f, "family=johnson v={v} d={d}"),
            SchemeSpec::DualPolarC { d, q } => write!(f, "family=dualpolarC d={d} q={q}"),
            SchemeSpec::Doob { n, m } => write!(f, "family=doob n={n} m={m}"),
        }
    }
}

impl FromStr for SchemeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut family = None;
        let mut params: Vec<(String, usize)> = Vec::new();
        for tok in s.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("expected key=value, got `{tok}`")))?;
            if k == "family" {
                family = Some(v.to_string());
            } else {
                let n = v
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("`{k}` must be a nonnegative integer")))?;
                params.push((k.to_string(), n));
            }
        }
        let family = family.ok_or_else(|| Error::InvalidInput("missing family=".into()))?;
        let take = |key: &str| -> Result<usize> {
            params
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::InvalidInput(format!("missing {key}= for family {family}")))
        };
        let allowed: &[&str] = match family.as_str() {
            "hamming" | "dualpolarC" => &["d", "q"],
            "johnson" => &["v", "d"],
            "doob" => &["n", "m"],
            other => return Err(Error::InvalidInput(format!("unknown family `{other}`"))),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidInput(format!("unexpected parameter `{k}` for family {family}")));
        }
        Ok(match family.as_str() {
            "hamming" => SchemeSpec::Hamming { d: take("d")?, q: take("q")? },
            "dualpolarC" => SchemeSpec::DualPolarC { d: take("d")?, q: take("q")? },
            "johnson" => SchemeSpec::Johnson { v: take("v")?, d: take("d")? },
            _ => SchemeSpec::Doob { n: take("n")?, m: take("m")? },
        })
    }
}

/// Canonical description of each vertex.
#[derive(Debug, Clone)]
pub enum VertexLabels {
    /// Digit tuples; for Doob schemes the digits are factor indices
    /// (Shrikhande factors in `0..16` first, then `K_4` factors in `0..4`).
    Words(Vec<Vec<u8>>),
    /// Sorted subsets of `{1..v}`.
    Subsets(Vec<Vec<usize>>),
    Subspaces(Vec<Subspace>),
}

/// Intersection numbers `p^k_{ij}` and, for P-polynomial schemes, `c_i, a_i, b_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionNumbers {
    d: usize,
    table: Vec<u64>,
    /// `c[i] = p^i_{1,i-1}` (with `c[0] = 0`), present when P-polynomial.
    pub c: Option<Vec<u64>>,
    /// `a[i] = p^i_{1,i}`.
    pub a: Option<Vec<u64>>,
    /// `b[i] = p^i_{1,i+1}` (with `b[d] = 0`).
    pub b: Option<Vec<u64>>,
}

impl IntersectionNumbers {
    fn from_table(d: usize, table: Vec<u64>) -> Self {
        let mut out = Self { d, table, c: None, a: None, b: None };
        let p1 = |k: usize, j: usize| out.p(1, j, k);
        let banded = (0..=d).all(|k| (0..=d).all(|j| k.abs_diff(j) <= 1 || p1(k, j) == 0));
        let chained = (1..=d).all(|i| p1(i, i - 1) > 0 && p1(i - 1, i) > 0);
        if d >= 1 && banded && chained {
            let c = (0..=d).map(|i| if i == 0 { 0 } else { p1(i, i - 1) }).collect();
            let a = (0..=d).map(|i| p1(i, i)).collect();
            let b = (0..=d).map(|i| if i == d { 0 } else { p1(i, i + 1) }).collect();
            out.c = Some(c);
            out.a = Some(a);
            out.b = Some(b);
        }
        out
    }

    /// `p^k_{ij}`
    pub fn p(&self, i: usize, j: usize, k: usize) -> u64 {
        let n = self.d + 1;
        self.table[(k * n + i) * n + j]
    }

    pub fn classes(&self) -> usize {
        self.d
    }

    pub fn valency(&self, i: usize) -> u64 {
        self.p(i, i, 0)
    }

    pub fn valencies(&self) -> Vec<u64> {
        (0..=self.d).map(|i| self.valency(i)).collect()
    }

    pub fn is_p_polynomial(&self) -> bool {
        self.c.is_some()
    }
}

/// A symmetric association scheme on vertices `0..n`.
#[derive(Debug, Clone)]
pub struct Scheme {
    spec: SchemeSpec,
    n: usize,
    d: usize,
    rel: Vec<u8>,
    neighbors: Vec<Vec<usize>>,
    labels: VertexLabels,
    intersection: IntersectionNumbers,
}

/// Shells `X_r` around a base vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasePointShells {
    pub u0: usize,
    pub shell_of: Vec<usize>,
    pub shells: Vec<Vec<usize>>,
    pub valencies: Vec<usize>,
}

impl BasePointShells {
    /// Position of `x` inside its shell list.
    pub fn position_in_shell(&self, x: usize) -> usize {
        self.shells[self.shell_of[x]].binary_search(&x).expect("vertex in its shell")
    }
}

impl Scheme {
    pub fn build(spec: SchemeSpec) -> Result<Self> {
        let (labels, d, n) = match spec {
            SchemeSpec::Hamming { d, q } => {
                if d < 1 || !(2..=255).contains(&q) {
                    return Err(Error::Unsupported(format!("Hamming needs d >= 1, q >= 2 (got d={d}, q={q})")));
                }
                let n = checked_size(q, d)?;
                (VertexLabels::Words(mixed_radix_words(&vec![q; d], n)), d, n)
            }
            SchemeSpec::Johnson { v, d } => {
                if d < 1 || v < 2 * d {
                    return Err(Error::Unsupported(format!("Johnson needs v >= 2d >= 2 (got v={v}, d={d})")));
                }
                let subsets = colex_subsets(v, d)?;
                let n = subsets.len();
                (VertexLabels::Subsets(subsets), d, n)
            }
            SchemeSpec::DualPolarC { d, q } => {
                if !(2..=3).contains(&d) || !(2..=3).contains(&q) {
                    return Err(Error::Unsupported(format!(
                        "dual polar C_d(q) is limited to d in {{2,3}}, q in {{2,3}} (got d={d}, q={q})"
                    )));
                }
                let subs = subspace::maximal_isotropic_subspaces(d, q as u8);
                let n = subs.len();
                (VertexLabels::Subspaces(subs), d, n)
            }
            SchemeSpec::Doob { n: ns, m } => {
                if ns < 1 {
                    return Err(Error::Unsupported("Doob needs at least one Shrikhande factor".into()));
                }
                let n = checked_size(16, ns).and_then(|a| {
                    a.checked_mul(checked_size(4, m)?)
                        .filter(|&x| x <= MAX_VERTICES)
                        .ok_or_else(|| Error::Unsupported(format!("Doob({ns},{m}) exceeds {MAX_VERTICES} vertices")))
                })?;
                let radix: Vec<usize> = std::iter::repeat_n(16, ns).chain(std::iter::repeat_n(4, m)).collect();
                (VertexLabels::Words(mixed_radix_words(&radix, n)), 2 * ns + m, n)
            }
        };
        if d > 255 {
            return Err(Error::Unsupported("more than 255 classes".into()));
        }
        let rel = relation_table(&spec, &labels, n);
        let neighbors = (0..n).map(|x| (0..n).filter(|&y| rel[x * n + y] == 1).collect()).collect();
        let intersection = check_axioms(&rel, n, d)?;
        Ok(Self { spec, n, d, rel, neighbors, labels, intersection })
    }

    pub fn spec(&self) -> SchemeSpec {
        self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family()
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    /// Number of classes `d`.
    pub fn classes(&self) -> usize {
        self.d
    }

    /// The `r` with `(x, y) in R_r`.
    #[inline]
    pub fn relation(&self, x: usize, y: usize) -> usize {
        self.rel[x * self.n + y] as usize
    }

    pub fn relation_row(&self, x: usize) -> &[u8] {
        &self.rel[x * self.n..(x + 1) * self.n]
    }

    /// Neighbors of `x` in `(X, R_1)`.
    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.neighbors[x]
    }

    pub fn labels(&self) -> &VertexLabels {
        &self.labels
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            VertexLabels::Words(w) => match self.spec {
                SchemeSpec::Doob { .. } => {
                    w[x].iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
                }
                _ => w[x].iter().map(|d| char::from_digit(*d as u32, 36).unwrap_or('?')).collect(),
            },
            VertexLabels::Subsets(s) => {
                format!("{{{}}}", s[x].iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
            }
            VertexLabels::Subspaces(s) => format!("{:?}", s[x]),
        }
    }

    /// Digit tuple of a Hamming or Doob vertex.
    pub fn word(&self, x: usize) -> Option<&[u8]> {
        match &self.labels {
            VertexLabels::Words(w) => Some(&w[x]),
            _ => None,
        }
    }

    pub fn subspace(&self, x: usize) -> Option<&Subspace> {
        match &self.labels {
            VertexLabels::Subspaces(s) => Some(&s[x]),
            _ => None,
        }
    }

    /// Index of a Hamming word (most significant coordinate first).
    pub fn vertex_of_word(&self, word: &[u8]) -> Option<usize> {
        let SchemeSpec::Hamming { d, q } = self.spec else {
            return None;
        };
        if word.len() != d || word.iter().any(|&x| x as usize >= q) {
            return None;
        }
        Some(word.iter().fold(0usize, |acc, &x| acc * q + x as usize))
    }

    pub fn vertex_of_subspace(&self, s: &Subspace) -> Option<usize> {
        match &self.labels {
            VertexLabels::Subspaces(all) => all.binary_search(s).ok(),
            _ => None,
        }
    }

    pub fn intersection_numbers(&self) -> &IntersectionNumbers {
        &self.intersection
    }

    pub fn valencies(&self) -> Vec<usize> {
        self.intersection.valencies().into_iter().map(|k| k as usize).collect()
    }

    pub fn shells(&self, u0: usize) -> Result<BasePointShells> {
        if u0 >= self.n {
            return Err(Error::InvalidInput(format!("base vertex {u0} out of range 0..{}", self.n)));
        }
        let shell_of: Vec<usize> = (0..self.n).map(|x| self.relation(u0, x)).collect();
        let mut shells = vec![Vec::new(); self.d + 1];
        for (x, &r) in shell_of.iter().enumerate() {
            shells[r].push(x);
        }
        let valencies = shells.iter().map(Vec::len).collect();
        Ok(BasePointShells { u0, shell_of, shells, valencies })
    }

    /// Whether relation index equals path-length distance in `(X, R_1)`.
    pub fn is_metric(&self) -> bool {
        (0..self.n).all(|x| {
            let mut dist = vec![usize::MAX; self.n];
            dist[x] = 0;
            let mut queue = VecDeque::from([x]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.neighbors[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            (0..self.n).all(|y| dist[y] == self.relation(x, y))
        })
    }

    /// Adjacency matrix of `R_i` as integer rows (0/1).
    pub fn adjacency_rows(&self, i: usize) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|x| self.relation_row(x).iter().map(|&r| (r as usize == i) as u8).collect())
            .collect()
    }
}

fn checked_size(base: usize, exp: usize) -> Result<usize> {
    let mut n: usize = 1;
    for _ in 0..exp {
        n = n
            .checked_mul(base)
            .filter(|&x| x <= MAX_VERTICES)
            .ok_or_else(|| Error::Unsupported(format!("more than {MAX_VERTICES} vertices")))?;
    }
    Ok(n)
}

fn mixed_radix_words(radix: &[usize], n: usize) -> Vec<Vec<u8>> {
    (0..n)
        .map(|mut idx| {
            let mut w = vec![0u8; radix.len()];
            for (pos, &r) in radix.iter().enumerate().rev() {
                w[pos] = (idx % r) as u8;
                idx /= r;
            }
            w
        })
        .collect()
}

/// `d`-subsets of `{1..v}` in colexicographic order.
fn colex_subsets(v: usize, d: usize) -> Result<Vec<Vec<usize>>> {
    let mut count: usize = 1;
    for i in 0..d {
        count = count * (v - i) / (i + 1);
        if count > MAX_VERTICES * v {
            return Err(Error::Unsupported(format!("J({v},{d}) exceeds {MAX_VERTICES} vertices")));
        }
    }
    if count > MAX_VERTICES {
        return Err(Error::Unsupported(format!("J({v},{d}) exceeds {MAX_VERTICES} vertices")));
    }
    let mut out = Vec::with_capacity(count);
    let mut cur: Vec<usize> = (1..=d).collect();
    loop {
        out.push(cur.clone());
        // colex successor: bump the lowest element that can move
        let mut i = 0;
        while i < d && (if i + 1 < d { cur[i] + 1 == cur[i + 1] } else { cur[i] == v }) {
            i += 1;
        }
        if i == d {
            break;
        }
        cur[i] += 1;
        for (j, slot) in cur.iter_mut().enumerate().take(i) {
            *slot = j + 1;
        }
    }
    Ok(out)
}

/// Shrikhande graph on `(Z/4)^2`, index `4a + b`; adjacency differences
/// `±(1,0), ±(0,1), ±(1,1)`.
pub fn shrikhande_distance(x: u8, y: u8) -> usize {
    if x == y {
        return 0;
    }
    let (da, db) = (((x / 4) + 4 - (y / 4)) % 4, ((x % 4) + 4 - (y % 4)) % 4);
    match (da, db) {
        (1, 0) | (3, 0) | (0, 1) | (0, 3) | (1, 1) | (3, 3) => 1,
        _ => 2,
    }
}

fn relation_table(spec: &SchemeSpec, labels: &VertexLabels, n: usize) -> Vec<u8> {
    let rows: Vec<Vec<u8>> = (0..n)
        .into_par_iter()
        .map(|x| {
            (0..n)
                .map(|y| {
                    let r = match (spec, labels) {
                        (SchemeSpec::Hamming { .. }, VertexLabels::Words(w)) => {
                            w[x].iter().zip(&w[y]).filter(|(a, b)| a != b).count()
                        }
                        (SchemeSpec::Doob { n: ns, .. }, VertexLabels::Words(w)) => w[x]
                            .iter()
                            .zip(&w[y])
                            .enumerate()
                            .map(|(pos, (&a, &b))| {
                                if pos < *ns {
                                    shrikhande_distance(a, b)
                                } else {
                                    (a != b) as usize
                                }
                            })
                            .sum(),
                        (SchemeSpec::Johnson { d, .. }, VertexLabels::Subsets(s)) => {
                            d - s[x].iter().filter(|e| s[y].binary_search(e).is_ok()).count()
                        }
                        (SchemeSpec::DualPolarC { d, .. }, VertexLabels::Subspaces(s)) => {
                            d - s[x].intersection(&s[y]).dim()
                        }
                        _ => unreachable!("labels always match the family"),
                    };
                    r as u8
                })
                .collect()
        })
        .collect();
    rows.concat()
}

fn counts_for_pair(rel: &[u8], n: usize, d: usize, x: usize, y: usize) -> Vec<u64> {
    let w = d + 1;
    let mut counts = vec![0u64; w * w];
    let (rx, ry) = (&rel[x * n..(x + 1) * n], &rel[y * n..(y + 1) * n]);
    for z in 0..n {
        counts[rx[z] as usize * w + ry[z] as usize] += 1;
    }
    counts
}

/// Verify the axioms and return `p^k_{ij}`.
fn check_axioms(rel: &[u8], n: usize, d: usize) -> Result<IntersectionNumbers> {
    for x in 0..n {
        if rel[x * n + x] != 0 {
            return Err(Error::AxiomViolation(format!("R_0 is not the diagonal at vertex {x}")));
        }
        for y in 0..x {
            if rel[x * n + y] != rel[y * n + x] {
                return Err(Error::AxiomViolation(format!("relation not symmetric at ({x},{y})")));
            }
            if rel[x * n + y] == 0 {
                return Err(Error::AxiomViolation(format!("distinct vertices {x},{y} in R_0")));
            }
        }
    }
    let w = d + 1;
    let mut reps: Vec<Option<(usize, usize)>> = vec![None; w];
    for y in 0..n {
        let r = rel[y] as usize;
        if r > d {
            return Err(Error::AxiomViolation(format!("relation index {r} exceeds d = {d}")));
        }
        if reps[r].is_none() {
            reps[r] = Some((0, y));
        }
    }
    let mut table = vec![0u64; w * w * w];
    for (k, rep) in reps.iter().enumerate() {
        let (x, y) = rep.ok_or_else(|| Error::AxiomViolation(format!("relation R_{k} is empty at vertex 0")))?;
        let counts = counts_for_pair(rel, n, d, x, y);
        table[k * w * w..(k + 1) * w * w].copy_from_slice(&counts);
    }
    let check_pair = |x: usize, y: usize| -> Result<()> {
        let k = rel[x * n + y] as usize;
        if counts_for_pair(rel, n, d, x, y) != table[k * w * w..(k + 1) * w * w] {
            return Err(Error::AxiomViolation(format!(
                "p^{k}_ij differs between the representative pair and ({x},{y})"
            )));
        }
        Ok(())
    };
    if n <= EXHAUSTIVE_AXIOM_LIMIT {
        (0..n).into_par_iter().try_for_each(|x| (0..n).try_for_each(|y| check_pair(x, y)))?;
    } else {
        // every vertex paired with a spread of partners
        let stride = (n / 61).max(1);
        (0..n).into_par_iter().try_for_each(|x| {
            (0..n).step_by(stride).try_for_each(|y| check_pair(x, (x + y) % n))
        })?;
    }
    Ok(IntersectionNumbers::from_table(d, table))
}
