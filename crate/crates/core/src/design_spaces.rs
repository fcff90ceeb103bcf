//! The spaces `Hom_j` and `L_j`, relative t-designs and Fisher type bounds.
//!
//! `f_z` (for `z` in shell `j`) is the indicator of the vertices `x` with
//! `z` on a geodesic from `u0` to `x`; `Hom_j` is spanned by these and `L_j`
//! is the column space of `E_j`. All functions take a [`TerwilligerContext`]
//! as the scheme-with-base-point.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, int, ExactMatrix, IncrementalBasis, Rational, SubspaceBasis};
use crate::schemes::{Family, SchemeSpec};
use crate::terwilliger::{Decomposition, TerwilligerContext};

/// Largest number of candidate subsets a search may enumerate.
pub const SEARCH_BUDGET: u128 = 10_000_000;

/// Strictly increasing shell indices `r_1 < ... < r_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShellSupport {
    r: Vec<usize>,
}

impl ShellSupport {
    pub fn new(r: Vec<usize>, d: usize) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::InvalidInput("empty shell support".into()));
        }
        if r.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!("shell indices {r:?} not strictly increasing")));
        }
        if r[r.len() - 1] > d {
            return Err(Error::InvalidInput(format!("shell index {} exceeds d = {d}", r[r.len() - 1])));
        }
        Ok(Self { r })
    }

    pub fn shells(&self) -> &[usize] {
        &self.r
    }

    pub fn p(&self) -> usize {
        self.r.len()
    }

    pub fn contains(&self, shell: usize) -> bool {
        self.r.binary_search(&shell).is_ok()
    }

    /// Every support with `lo <= r_1 < ... < r_p <= hi` and `p <= max_p`, in
    /// lexicographic order.
    pub fn all_between(lo: usize, hi: usize, max_p: usize) -> Vec<Self> {
        let mut out = Vec::new();
        if lo > hi {
            return out;
        }
        let width = hi - lo + 1;
        for mask in 1u64..(1 << width) {
            if mask.count_ones() as usize > max_p {
                continue;
            }
            out.push(Self { r: (0..width).filter(|b| mask >> b & 1 == 1).map(|b| lo + b).collect() });
        }
        out.sort_by(|a, b| a.r.cmp(&b.r));
        out
    }
}

impl fmt::Display for ShellSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.r.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Positive weights on distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSubset {
    entries: Vec<(usize, Rational)>,
    support: ShellSupport,
    shell_weights: Vec<Rational>,
}

impl WeightedSubset {
    pub fn new(ctx: &TerwilligerContext<'_>, mut entries: Vec<(usize, Rational)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("empty weighted subset".into()));
        }
        let n = ctx.scheme().n_vertices();
        entries.sort_by_key(|e| e.0);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidInput(format!("vertex {} listed twice", w[0].0)));
            }
        }
        for (x, w) in &entries {
            if *x >= n {
                return Err(Error::InvalidInput(format!("vertex {x} out of range 0..{n}")));
            }
            if !w.is_positive() {
                return Err(Error::InvalidInput(format!("weight {w} of vertex {x} is not positive")));
            }
        }
        let shell_of = &ctx.shells().shell_of;
        let mut r: Vec<usize> = entries.iter().map(|(x, _)| shell_of[*x]).collect();
        r.sort_unstable();
        r.dedup();
        let shell_weights = r
            .iter()
            .map(|&ri| entries.iter().filter(|(x, _)| shell_of[*x] == ri).map(|(_, w)| w.clone()).sum())
            .collect();
        Ok(Self { entries, support: ShellSupport { r }, shell_weights })
    }

    /// Unit weight on every listed vertex.
    pub fn uniform(ctx: &TerwilligerContext<'_>, vertices: &[usize]) -> Result<Self> {
        Self::new(ctx, vertices.iter().map(|&x| (x, int(1))).collect())
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> &ShellSupport {
        &self.support
    }

    /// `w(Y_{r_i})` in support order.
    pub fn shell_weights(&self) -> &[Rational] {
        &self.shell_weights
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Hom,
    L,
}

/// Which family of spaces defines a design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `Hom_0 + ... + Hom_t`
    P,
    /// `L_0 + ... + L_t`
    Q,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p" => Ok(Variant::P),
            "q" => Ok(Variant::Q),
            other => Err(Error::InvalidInput(format!("unknown variant '{other}', expected p or q"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::P => "p",
            Variant::Q => "q",
        })
    }
}

/// A basis of `Hom_j(X)` or `L_j(X)`.
#[derive(Debug, Clone)]
pub struct DesignSpace {
    pub kind: SpaceKind,
    pub j: usize,
    pub basis: SubspaceBasis,
}

impl DesignSpace {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

fn hom_indicator(ctx: &TerwilligerContext<'_>, z: usize) -> Vec<u8> {
    let s = ctx.scheme();
    let shell_of = &ctx.shells().shell_of;
    let j = shell_of[z];
    let row = s.relation_row(z);
    (0..s.n_vertices()).map(|x| (shell_of[x] >= j && row[x] as usize == shell_of[x] - j) as u8).collect()
}

/// `f_z` as a 0/1 vector.
pub fn hom_vector(ctx: &TerwilligerContext<'_>, z: usize) -> Result<Vec<Rational>> {
    if z >= ctx.scheme().n_vertices() {
        return Err(Error::InvalidInput(format!("vertex {z} out of range")));
    }
    Ok(hom_indicator(ctx, z).into_iter().map(|b| int(b as i64)).collect())
}

/// `f_z` for every `z` in shells `0..=t`, shell by shell.
fn hom_rows(ctx: &TerwilligerContext<'_>, t: usize) -> Vec<Vec<u8>> {
    let shells = &ctx.shells().shells;
    shells[..=t.min(shells.len() - 1)].iter().flatten().map(|&z| hom_indicator(ctx, z)).collect()
}

fn check_degree(ctx: &TerwilligerContext<'_>, j: usize) -> Result<()> {
    if j > ctx.classes() {
        return Err(Error::InvalidInput(format!("degree {j} exceeds d = {}", ctx.classes())));
    }
    Ok(())
}

pub fn hom_basis(ctx: &TerwilligerContext<'_>, j: usize) -> Result<DesignSpace> {
    check_degree(ctx, j)?;
    let n = ctx.scheme().n_vertices();
    let vectors: Vec<Vec<Rational>> = ctx.shells().shells[j]
        .iter()
        .map(|&z| hom_indicator(ctx, z).into_iter().map(|b| int(b as i64)).collect())
        .collect();
    let basis = SubspaceBasis::new(n, vectors)?;
    debug_assert_eq!(basis.dim(), ctx.shells().valencies[j]);
    Ok(DesignSpace { kind: SpaceKind::Hom, j, basis })
}

/// `|X| E_j` scaled to integers, as rows.
fn scaled_idempotent_rows(ctx: &TerwilligerContext<'_>, js: &[usize]) -> Vec<Vec<BigInt>> {
    let s = ctx.scheme();
    let (_, q) = ctx.algebra().eigenmatrices();
    let col: Vec<Rational> = (0..=s.classes()).map(|i| js.iter().map(|&j| q[(i, j)].clone()).sum()).collect();
    let l = col.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<BigInt> = col.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    (0..s.n_vertices()).map(|x| s.relation_row(x).iter().map(|&r| scaled[r as usize].clone()).collect()).collect()
}

/// Pivot columns of `E_j`; their number is `m_j`.
pub fn l_basis(ctx: &TerwilligerContext<'_>, j: usize) -> Result<DesignSpace> {
    check_degree(ctx, j)?;
    let n = ctx.scheme().n_vertices();
    let rows = scaled_idempotent_rows(ctx, &[j]);
    let m = ExactMatrix::from_fn(n, n, |x, y| Rational::from_integer(rows[x][y].clone()));
    let red = linalg::rank_and_rref(&m);
    // E_j is symmetric, so column c is row c
    let vectors: Vec<Vec<Rational>> =
        red.pivot_columns.iter().map(|&c| rows[c].iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let basis = SubspaceBasis::new(n, vectors)?;
    debug_assert_eq!(basis.dim(), ctx.algebra().multiplicities()[j]);
    Ok(DesignSpace { kind: SpaceKind::L, j, basis })
}

fn support_columns(ctx: &TerwilligerContext<'_>, support: &ShellSupport) -> Vec<usize> {
    let mut cols: Vec<usize> = support.shells().iter().flat_map(|&r| ctx.shells().shells[r].iter().copied()).collect();
    cols.sort_unstable();
    cols
}

/// `dim` of the span of all basis vectors restricted to the shells of `support`.
pub fn restricted_dim(ctx: &TerwilligerContext<'_>, spaces: &[DesignSpace], support: &ShellSupport) -> usize {
    let cols = support_columns(ctx, support);
    let rows: Vec<Vec<BigInt>> = spaces
        .iter()
        .flat_map(|sp| sp.basis.vectors().iter())
        .map(|v| linalg::integer_row(&cols.iter().map(|&c| v[c].clone()).collect::<Vec<_>>()))
        .collect();
    linalg::rank_of_integer_rows(&rows, cols.len())
}

/// `dim (Hom_0 + ... + Hom_e)(S)`, from the 0/1 rows `f_z`.
pub fn hom_restricted_dim(ctx: &TerwilligerContext<'_>, e: usize, support: &ShellSupport) -> usize {
    let cols = support_columns(ctx, support);
    let rows: Vec<Vec<BigInt>> =
        hom_rows(ctx, e).iter().map(|f| cols.iter().map(|&c| BigInt::from(f[c])).collect()).collect();
    linalg::rank_of_integer_rows(&rows, cols.len())
}

/// `dim (L_0 + ... + L_e)(S)`, as the rank of `F[S,S]` with
/// `F = E_0 + ... + E_e` (a symmetric idempotent, so `rank F[S,X] = rank F[S,S]`).
pub fn l_restricted_dim(ctx: &TerwilligerContext<'_>, e: usize, support: &ShellSupport) -> usize {
    let cols = support_columns(ctx, support);
    let js: Vec<usize> = (0..=e.min(ctx.classes())).collect();
    let rows = scaled_idempotent_rows(ctx, &js);
    let sub: Vec<Vec<BigInt>> = cols.iter().map(|&x| cols.iter().map(|&y| rows[x][y].clone()).collect()).collect();
    linalg::rank_of_integer_rows(&sub, cols.len())
}

/// Restricted dimensions and the closed-form sums for one support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FisherBounds {
    pub hom_bound: usize,
    pub l_bound: usize,
    /// `k_{e-p+1} + ... + k_e`, with `k_j = 0` for `j < 0`
    pub k_sum: usize,
    /// `m_{e-p+1} + ... + m_e`, with `m_j = 0` for `j < 0`
    pub m_sum: usize,
}

pub fn fisher_bounds(ctx: &TerwilligerContext<'_>, support: &ShellSupport, e: usize) -> Result<FisherBounds> {
    check_degree(ctx, e)?;
    let lo = (e + 1).saturating_sub(support.p());
    let k = &ctx.shells().valencies;
    let m = ctx.algebra().multiplicities();
    Ok(FisherBounds {
        hom_bound: hom_restricted_dim(ctx, e, support),
        l_bound: l_restricted_dim(ctx, e, support),
        k_sum: k[lo..=e].iter().sum(),
        m_sum: m[lo..=e].iter().sum(),
    })
}

/// The `p x p` matrix with entry `(i,h) = c_{r_i-e+p-1} ... c_{r_i-e+p-h}`
/// and whether its determinant is nonzero.
pub fn intersection_matrix_check(
    ctx: &TerwilligerContext<'_>,
    e: usize,
    support: &ShellSupport,
) -> Result<(ExactMatrix, bool)> {
    let c = ctx
        .scheme()
        .intersection_numbers()
        .c
        .clone()
        .ok_or_else(|| Error::Unsupported("scheme is not P-polynomial".into()))?;
    let p = support.p();
    let r = support.shells();
    if p - 1 > e || e > r[0] {
        return Err(Error::InvalidInput(format!("need p-1 <= e <= r_1, got p = {p}, e = {e}, r_1 = {}", r[0])));
    }
    let d = ctx.classes();
    if r[p - 1] + p - 1 - e > d {
        return Err(Error::InvalidInput(format!("index c_{} out of range", r[p - 1] + p - 1 - e)));
    }
    let m = ExactMatrix::from_fn(p, p, |i, h| {
        (1..=h).fold(int(1), |acc, t| acc * int(c[r[i] + p - e - t] as i64))
    });
    let det = linalg::determinant(&m)?;
    Ok((m, !det.is_zero()))
}

/// Outcome of checking the module hypotheses of the exact Fisher formulas.
#[derive(Debug, Clone)]
pub struct HypothesisReport {
    pub variant: Variant,
    pub holds: bool,
    /// One line per failing module or condition.
    pub failures: Vec<String>,
    /// The intersection-number matrix and its nonsingularity (P only).
    pub matrix: Option<(ExactMatrix, bool)>,
}

pub fn criterion_hypotheses(
    ctx: &TerwilligerContext<'_>,
    variant: Variant,
    decomposition: &Decomposition,
    e: usize,
    support: &ShellSupport,
) -> Result<HypothesisReport> {
    let p = support.p();
    let r = support.shells();
    let mut failures = Vec::new();
    let mut matrix = None;
    match variant {
        Variant::P => {
            let (m, ok) = intersection_matrix_check(ctx, e, support)?;
            if !ok {
                failures.push("intersection-number matrix is singular".into());
            }
            matrix = Some((m, ok));
            for (idx, w) in decomposition.modules.iter().enumerate() {
                if w.endpoint() > e {
                    continue;
                }
                if !w.irreducible_certified() {
                    failures.push(format!("module {idx}: endpoint {} but not certified thin", w.endpoint()));
                }
                if w.endpoint() + w.diameter() < r[p - 1] {
                    failures.push(format!(
                        "module {idx}: endpoint {} + diameter {} < r_p = {}",
                        w.endpoint(),
                        w.diameter(),
                        r[p - 1]
                    ));
                }
            }
        }
        Variant::Q => {
            if p - 1 > e || e > ctx.classes() {
                return Err(Error::InvalidInput(format!("need p-1 <= e <= d, got p = {p}, e = {e}")));
            }
            for (idx, w) in decomposition.modules.iter().enumerate() {
                let rs = w.dual_endpoint();
                if rs > e {
                    continue;
                }
                if !w.is_dual_thin() {
                    failures.push(format!("module {idx}: dual endpoint {rs} but not dual thin"));
                }
                if rs + w.diameter() < e {
                    failures.push(format!("module {idx}: dual endpoint {rs} + diameter {} < e = {e}", w.diameter()));
                }
                let hit = r.iter().filter(|&&ri| w.profile().shell_dims[ri] > 0).count();
                let need = p.min(e - rs + 1);
                if hit < need {
                    failures.push(format!("module {idx}: meets {hit} support shells, needs {need}"));
                }
            }
        }
    }
    Ok(HypothesisReport { variant, holds: failures.is_empty(), failures, matrix })
}

/// `c(x) = sum_i w(Y_{r_i})/k_{r_i} [x in X_{r_i}] - w(x)`; a design is a
/// subset whose `c` is orthogonal to the design space.
fn defect_vector(ctx: &TerwilligerContext<'_>, y: &WeightedSubset) -> Vec<Rational> {
    let n = ctx.scheme().n_vertices();
    let k = &ctx.shells().valencies;
    let mut c = vec![Rational::zero(); n];
    for (ri, w) in y.support().shells().iter().zip(y.shell_weights()) {
        let share = w / int(k[*ri] as i64);
        for &x in &ctx.shells().shells[*ri] {
            c[x] = share.clone();
        }
    }
    for (x, w) in y.entries() {
        c[*x] -= w;
    }
    c
}

/// Check the design equations on a basis of `Hom_0..Hom_t` (P) or
/// `L_0..L_t` (Q).
pub fn verify_relative_design(
    ctx: &TerwilligerContext<'_>,
    y: &WeightedSubset,
    t: usize,
    variant: Variant,
) -> Result<bool> {
    check_degree(ctx, t)?;
    if y.is_empty() {
        return Err(Error::InvalidInput("empty weighted subset".into()));
    }
    let c = defect_vector(ctx, y);
    Ok(match variant {
        Variant::P => hom_rows(ctx, t).iter().all(|f| {
            let mut acc = Rational::zero();
            for (b, cx) in f.iter().zip(&c) {
                if *b == 1 {
                    acc += cx;
                }
            }
            acc.is_zero()
        }),
        Variant::Q => {
            let projected = ctx.algebra().apply_idempotents(ctx.scheme(), &c);
            projected[..=t].iter().all(|v| linalg::is_zero_vector(v))
        }
    })
}

/// Ranks witnessing `Hom_0 + ... + Hom_t = L_0 + ... + L_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomLComparison {
    pub hom_rank: usize,
    pub l_rank: usize,
    pub joint_rank: usize,
}

impl HomLComparison {
    pub fn equal(&self) -> bool {
        self.hom_rank == self.joint_rank && self.l_rank == self.joint_rank
    }
}

pub fn hom_l_comparison(ctx: &TerwilligerContext<'_>, t: usize) -> Result<HomLComparison> {
    check_degree(ctx, t)?;
    let n = ctx.scheme().n_vertices();
    let hom: Vec<Vec<BigInt>> = hom_rows(ctx, t).iter().map(|f| f.iter().map(|&b| BigInt::from(b)).collect()).collect();
    let js: Vec<usize> = (0..=t).collect();
    let l = scaled_idempotent_rows(ctx, &js);
    let hom_rank = linalg::rank_of_integer_rows(&hom, n);
    let l_rank = linalg::rank_of_integer_rows(&l, n);
    let mut joint = hom;
    joint.extend(l);
    Ok(HomLComparison { hom_rank, l_rank, joint_rank: linalg::rank_of_integer_rows(&joint, n) })
}

pub fn hom_l_equality(ctx: &TerwilligerContext<'_>, t: usize) -> Result<bool> {
    Ok(hom_l_comparison(ctx, t)?.equal())
}

/// Whether `Hom_j` lies in `L_0 + ... + L_j` for every `j`, tested as
/// `E_i f_z = 0` for all `i > j` and `z` in shell `j`.
pub fn hom_inside_lower_l(ctx: &TerwilligerContext<'_>) -> bool {
    let d = ctx.classes();
    let shells = &ctx.shells().shells;
    (0..=d).all(|j| {
        shells[j].par_iter().all(|&z| {
            let f: Vec<Rational> = hom_indicator(ctx, z).into_iter().map(|b| int(b as i64)).collect();
            let proj = ctx.algebra().apply_idempotents(ctx.scheme(), &f);
            proj[j + 1..].iter().all(|v| linalg::is_zero_vector(v))
        })
    })
}

/// Constant value of `c_i / (theta*_i - theta*_0)` and the expansion
/// `sum_i c_i A_i u0 = alpha E_0 u0 + beta E_1 u0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioConstancy {
    pub value: Rational,
    pub alpha: Rational,
    pub beta: Rational,
    /// `sum_i c_i k_i`
    pub alpha_expected: Rational,
}

impl RatioConstancy {
    pub fn alpha_matches(&self) -> bool {
        self.alpha == self.alpha_expected
    }
}

pub fn ratio_constancy(ctx: &TerwilligerContext<'_>) -> Result<Option<RatioConstancy>> {
    let c = ctx
        .scheme()
        .intersection_numbers()
        .c
        .clone()
        .ok_or_else(|| Error::Unsupported("scheme is not P-polynomial".into()))?;
    let ts = ctx.theta_star();
    let d = ctx.classes();
    let mut ratios = Vec::with_capacity(d);
    for i in 1..=d {
        let gap = &ts[i] - &ts[0];
        if gap.is_zero() {
            return Err(Error::Degenerate(format!("theta*_{i} = theta*_0")));
        }
        ratios.push(int(c[i] as i64) / gap);
    }
    if ratios.windows(2).any(|w| w[0] != w[1]) {
        return Ok(None);
    }
    // shell-constant vectors: A_i u0 is the indicator of shell i, and
    // E_j u0 takes the value Q(i,j)/|X| on shell i
    let n = int(ctx.scheme().n_vertices() as i64);
    let (_, q) = ctx.algebra().eigenmatrices();
    let m = ExactMatrix::from_fn(d + 1, 2, |i, j| &q[(i, j)] / &n);
    let rhs: Vec<Rational> = (0..=d).map(|i| if i == 0 { Rational::zero() } else { int(c[i] as i64) }).collect();
    let sol = linalg::solve_linear(&m, &rhs)
        .ok_or_else(|| Error::Degenerate("sum c_i A_i u0 is not in span{E_0 u0, E_1 u0}".into()))?;
    let k = &ctx.shells().valencies;
    let alpha_expected = (1..=d).map(|i| int((c[i] as usize * k[i]) as i64)).sum();
    Ok(Some(RatioConstancy {
        value: ratios.swap_remove(0),
        alpha: sol[0].clone(),
        beta: sol[1].clone(),
        alpha_expected,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// One weight per support shell.
    UniformPerShell,
    /// One weight per point.
    SolveWeights,
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "uniform_per_shell" => Ok(SearchMode::UniformPerShell),
            "solve" | "solve_weights" => Ok(SearchMode::SolveWeights),
            other => Err(Error::InvalidInput(format!("unknown search mode '{other}'"))),
        }
    }
}

/// A design returned by [`design_search`] with its re-checks.
#[derive(Debug, Clone)]
pub struct FoundDesign {
    pub design: WeightedSubset,
    pub verified: bool,
    /// `(bound, |Y| >= bound)` for `t = 2e`; absent for odd `t`.
    pub fisher: Option<(usize, bool)>,
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub designs: Vec<FoundDesign>,
    pub candidates: u128,
    /// Whether a Fisher type inequality is a theorem for this scheme and variant.
    pub fisher_theorem_applies: bool,
}

impl SearchReport {
    pub fn minimum_size(&self) -> Option<usize> {
        self.designs.iter().map(|d| d.design.len()).min()
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Combinations of `0..n` of size `k` whose largest element is `top`, in colex order.
fn combos_with_top(n: usize, k: usize, top: usize) -> Vec<Vec<usize>> {
    debug_assert!(top < n && k >= 1);
    let mut out = Vec::new();
    if k - 1 > top {
        return out;
    }
    let mut cur: Vec<usize> = (0..k - 1).collect();
    loop {
        let mut c = cur.clone();
        c.push(top);
        out.push(c);
        // colex successor of cur within 0..top
        let mut i = 0;
        while i < cur.len() {
            let limit = if i + 1 < cur.len() { cur[i + 1] } else { top };
            if cur[i] + 1 < limit {
                cur[i] += 1;
                for (h, slot) in cur.iter_mut().enumerate().take(i) {
                    *slot = h;
                }
                break;
            }
            i += 1;
        }
        if i == cur.len() {
            return out;
        }
    }
}

/// A positive vector in the span of `null`, if one of a few natural
/// candidates is positive: each basis vector, its negative, and the sum.
fn positive_in_span(null: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let mut cands: Vec<Vec<Rational>> = Vec::new();
    for v in null {
        cands.push(v.clone());
        cands.push(v.iter().map(|x| -x).collect());
    }
    if null.len() > 1 {
        let mut sum = vec![Rational::zero(); null[0].len()];
        for v in null {
            linalg::add_scaled(&mut sum, &int(1), v);
        }
        cands.push(sum.iter().map(|x| -x).collect());
        cands.push(sum);
    }
    cands.into_iter().find(|v| v.iter().all(Signed::is_positive)).map(|v| linalg::primitive(&v))
}

/// Exhaustive search for relative t-designs supported exactly on `support`
/// with at most `max_size` points, in colex order of vertex sets.
pub fn design_search(
    ctx: &TerwilligerContext<'_>,
    support: &ShellSupport,
    t: usize,
    variant: Variant,
    max_size: usize,
    mode: SearchMode,
) -> Result<SearchReport> {
    check_degree(ctx, t)?;
    let points = support_columns(ctx, support);
    let npts = points.len();
    let candidates: u128 = (1..=max_size.min(npts)).map(|m| binomial(npts, m)).sum();
    if candidates > SEARCH_BUDGET {
        return Err(Error::BudgetExceeded { candidates, budget: SEARCH_BUDGET });
    }
    let shell_of = &ctx.shells().shell_of;
    let k = &ctx.shells().valencies;
    let r = support.shells();
    let slot: Vec<usize> = points.iter().map(|&x| r.binary_search(&shell_of[x]).expect("in support")).collect();

    // echelon basis of the design space restricted to the support points
    let mut space = IncrementalBasis::new(npts);
    let mut functionals: Vec<Vec<Rational>> = Vec::new();
    let raw: Vec<Vec<Rational>> = match variant {
        Variant::P => hom_rows(ctx, t).iter().map(|f| points.iter().map(|&x| int(f[x] as i64)).collect()).collect(),
        Variant::Q => {
            let js: Vec<usize> = (0..=t).collect();
            let rows = scaled_idempotent_rows(ctx, &js);
            points.iter().map(|&u| points.iter().map(|&x| Rational::from_integer(rows[u][x].clone())).collect()).collect()
        }
    };
    for g in raw {
        if space.insert(&g) {
            functionals.push(g);
        }
    }
    // each functional's shell averages sum_{x in X_r} g(x) / k_r
    let averages: Vec<Vec<Rational>> = functionals
        .iter()
        .map(|g| {
            let mut sums = vec![Rational::zero(); r.len()];
            for (gi, &s) in g.iter().zip(&slot) {
                sums[s] += gi;
            }
            sums.iter().zip(r).map(|(s, &ri)| s / int(k[ri] as i64)).collect()
        })
        .collect();

    let test = |combo: &[usize]| -> Option<Vec<Rational>> {
        let mut present = vec![0usize; r.len()];
        for &i in combo {
            present[slot[i]] += 1;
        }
        if present.contains(&0) {
            return None;
        }
        // unknowns: one weight per shell or per point
        let nvars = match mode {
            SearchMode::UniformPerShell => r.len(),
            SearchMode::SolveWeights => combo.len(),
        };
        let rows: Vec<Vec<Rational>> = functionals
            .iter()
            .zip(&averages)
            .map(|(g, avg)| {
                let mut row = vec![Rational::zero(); nvars];
                for (pos, &i) in combo.iter().enumerate() {
                    let var = match mode {
                        SearchMode::UniformPerShell => slot[i],
                        SearchMode::SolveWeights => pos,
                    };
                    row[var] += &avg[slot[i]] - &g[i];
                }
                row
            })
            .collect();
        let weights = if rows.is_empty() {
            vec![int(1); nvars]
        } else {
            let m = ExactMatrix::from_rows(&rows, nvars).expect("rectangular");
            positive_in_span(&linalg::nullspace(&m))?
        };
        Some(match mode {
            SearchMode::UniformPerShell => combo.iter().map(|&i| weights[slot[i]].clone()).collect(),
            SearchMode::SolveWeights => weights,
        })
    };

    let mut found: Vec<(Vec<usize>, Vec<Rational>)> = Vec::new();
    for size in 1..=max_size.min(npts) {
        let mut batch: Vec<(Vec<usize>, Vec<Rational>)> = (size - 1..npts)
            .into_par_iter()
            .flat_map_iter(|top| {
                combos_with_top(npts, size, top).into_iter().filter_map(|c| test(&c).map(|w| (c, w)))
            })
            .collect();
        batch.sort_by(|a, b| a.0.iter().rev().cmp(b.0.iter().rev()));
        found.extend(batch);
    }

    let fisher_theorem_applies = match variant {
        Variant::Q => true,
        Variant::P => matches!(ctx.scheme().spec().family(), Family::Hamming | Family::DualPolarC),
    };
    let designs = found
        .into_iter()
        .map(|(combo, weights)| {
            let entries = combo.iter().zip(weights).map(|(&i, w)| (points[i], w)).collect();
            let design = WeightedSubset::new(ctx, entries)?;
            let verified = verify_relative_design(ctx, &design, t, variant)?;
            let fisher = t.is_multiple_of(2).then(|| {
                let e = t / 2;
                let bound = match variant {
                    Variant::P => hom_restricted_dim(ctx, e, support),
                    Variant::Q => l_restricted_dim(ctx, e, support),
                };
                (bound, design.len() >= bound)
            });
            Ok(FoundDesign { design, verified, fisher })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SearchReport { designs, candidates, fisher_theorem_applies })
}

/// Contents of a design file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignFile {
    pub scheme: SchemeSpec,
    pub u0: usize,
    pub entries: Vec<(usize, Rational)>,
}

/// Parse `scheme: <spec>`, `u0: <index>`, then `<index> <num/den>` lines.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_design_file(text: &str) -> Result<DesignFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let err = |line: usize, message: String| Error::Parse { line, message };
    let (ln, first) = lines.next().ok_or_else(|| err(1, "missing 'scheme:' line".into()))?;
    let spec_text = first.strip_prefix("scheme:").ok_or_else(|| err(ln, "expected 'scheme: <spec>'".into()))?;
    let scheme: SchemeSpec = spec_text.trim().parse().map_err(|e: Error| err(ln, e.to_string()))?;
    let (ln, second) = lines.next().ok_or_else(|| err(ln + 1, "missing 'u0:' line".into()))?;
    let u0 = second
        .strip_prefix("u0:")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| err(ln, "expected 'u0: <vertex index>'".into()))?;
    let mut entries = Vec::new();
    for (ln, line) in lines {
        let mut parts = line.split_whitespace();
        let (Some(v), Some(w), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(ln, "expected '<vertex index> <weight>'".into()));
        };
        let v: usize = v.parse().map_err(|_| err(ln, format!("bad vertex index '{v}'")))?;
        let w = linalg::parse_rational(w).ok_or_else(|| err(ln, format!("bad weight '{w}'")))?;
        entries.push((v, w));
    }
    Ok(DesignFile { scheme, u0, entries })
}

pub fn format_design_file(spec: SchemeSpec, u0: usize, y: &WeightedSubset) -> String {
    let mut out = format!("scheme: {spec}\nu0: {u0}\n");
    for (x, w) in y.entries() {
        out.push_str(&format!("{x} {}/{}\n", w.numer(), w.denom()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bose_mesner::BoseMesnerData;
    use crate::linalg::rat;
    use crate::schemes::Scheme;
    use crate::terwilliger::{decompose_standard_module, dual_matrices};

    fn with_ctx<R>(spec: SchemeSpec, f: impl FnOnce(&TerwilligerContext<'_>) -> R) -> R {
        let s = Scheme::build(spec).unwrap();
        let b = BoseMesnerData::primitive_idempotents(&s).unwrap();
        let ctx = dual_matrices(&s, &b, 0).unwrap();
        f(&ctx)
    }

    fn sup(r: &[usize], d: usize) -> ShellSupport {
        ShellSupport::new(r.to_vec(), d).unwrap()
    }

    #[test]
    fn hom_vectors() {
        with_ctx(SchemeSpec::Hamming { d: 2, q: 2 }, |ctx| {
            assert!(hom_vector(ctx, 0).unwrap().iter().all(|x| x == &int(1)));
            let s = ctx.scheme();
            let z = s.vertex_of_word(&[0, 1]).unwrap();
            let f = hom_vector(ctx, z).unwrap();
            let support: Vec<usize> = (0..4).filter(|&x| f[x] == int(1)).collect();
            let mut expect = vec![z, s.vertex_of_word(&[1, 1]).unwrap()];
            expect.sort();
            assert_eq!(support, expect);
        });
    }

    #[test]
    fn space_dimensions() {
        with_ctx(SchemeSpec::Hamming { d: 3, q: 2 }, |ctx| {
            assert_eq!(hom_basis(ctx, 0).unwrap().dim(), 1);
            assert_eq!(l_basis(ctx, 0).unwrap().dim(), 1);
            assert_eq!(hom_basis(ctx, 1).unwrap().dim(), 3);
            assert_eq!(l_basis(ctx, 1).unwrap().dim(), 3);
            let spaces = vec![hom_basis(ctx, 0).unwrap(), hom_basis(ctx, 1).unwrap()];
            assert_eq!(restricted_dim(ctx, &spaces, &sup(&[1, 2], 3)), 4);
            assert_eq!(hom_restricted_dim(ctx, 1, &sup(&[1, 2], 3)), 4);
        });
        with_ctx(SchemeSpec::Hamming { d: 4, q: 2 }, |ctx| {
            let spaces = vec![hom_basis(ctx, 0).unwrap(), hom_basis(ctx, 1).unwrap()];
            assert_eq!(restricted_dim(ctx, &spaces, &sup(&[2], 4)), 4);
            let all = sup(&[0, 1, 2, 3, 4], 4);
            assert_eq!(restricted_dim(ctx, &spaces, &all), 5);
            let ls = vec![l_basis(ctx, 0).unwrap(), l_basis(ctx, 1).unwrap()];
            assert_eq!(restricted_dim(ctx, &ls, &sup(&[2], 4)), l_restricted_dim(ctx, 1, &sup(&[2], 4)));
        });
    }

    #[test]
    fn fisher_bound_examples() {
        with_ctx(SchemeSpec::Hamming { d: 4, q: 2 }, |ctx| {
            let fb = fisher_bounds(ctx, &sup(&[2], 4), 1).unwrap();
            assert_eq!(fb, FisherBounds { hom_bound: 4, l_bound: 4, k_sum: 4, m_sum: 4 });
            let fb = fisher_bounds(ctx, &sup(&[2, 3], 4), 2).unwrap();
            assert_eq!(fb.k_sum, 10);
            assert_eq!(fb.hom_bound, 10);
            for r in 0..=4 {
                let fb = fisher_bounds(ctx, &sup(&[r], 4), 0).unwrap();
                assert_eq!(fb, FisherBounds { hom_bound: 1, l_bound: 1, k_sum: 1, m_sum: 1 });
            }
        });
    }

    #[test]
    fn intersection_matrices() {
        with_ctx(SchemeSpec::Hamming { d: 4, q: 2 }, |ctx| {
            let (m, ok) = intersection_matrix_check(ctx, 2, &sup(&[2, 3], 4)).unwrap();
            assert_eq!(m, ExactMatrix::from_i64(&[&[1, 1], &[1, 2]]));
            assert!(ok);
            let (m, ok) = intersection_matrix_check(ctx, 0, &sup(&[3], 4)).unwrap();
            assert_eq!(m, ExactMatrix::from_i64(&[&[1]]));
            assert!(ok);
            assert!(intersection_matrix_check(ctx, 0, &sup(&[2, 3], 4)).is_err());
        });
        with_ctx(SchemeSpec::DualPolarC { d: 3, q: 2 }, |ctx| {
            let (m, ok) = intersection_matrix_check(ctx, 2, &sup(&[2, 3], 3)).unwrap();
            assert_eq!(m, ExactMatrix::from_i64(&[&[1, 1], &[1, 3]]));
            assert!(ok);
        });
    }

    #[test]
    fn hypotheses_on_hamming_4_2() {
        with_ctx(SchemeSpec::Hamming { d: 4, q: 2 }, |ctx| {
            let dec = decompose_standard_module(ctx).unwrap();
            assert!(criterion_hypotheses(ctx, Variant::P, &dec, 1, &sup(&[2], 4)).unwrap().holds);
            let bad = criterion_hypotheses(ctx, Variant::P, &dec, 1, &sup(&[4], 4)).unwrap();
            assert!(!bad.holds);
            assert!(criterion_hypotheses(ctx, Variant::Q, &dec, 0, &sup(&[3], 4)).unwrap().holds);
        });
    }

    #[test]
    fn design_verification() {
        with_ctx(SchemeSpec::Hamming { d: 2, q: 2 }, |ctx| {
            let s = ctx.scheme();
            let y = WeightedSubset::uniform(ctx, &[s.vertex_of_word(&[0, 1]).unwrap()]).unwrap();
            assert!(verify_relative_design(ctx, &y, 0, Variant::Q).unwrap());
            assert!(!verify_relative_design(ctx, &y, 1, Variant::Q).unwrap());
            assert!(!verify_relative_design(ctx, &y, 1, Variant::P).unwrap());
            let shell = WeightedSubset::new(ctx, ctx.shells().shells[1].iter().map(|&x| (x, rat(3, 7))).collect()).unwrap();
            for t in 0..=2 {
                assert!(verify_relative_design(ctx, &shell, t, Variant::P).unwrap());
                assert!(verify_relative_design(ctx, &shell, t, Variant::Q).unwrap());
            }
        });
        with_ctx(SchemeSpec::Hamming { d: 2, q: 2 }, |ctx| {
            assert!(WeightedSubset::new(ctx, vec![(1, int(0))]).is_err());
            assert!(WeightedSubset::new(ctx, vec![(1, int(1)), (1, int(2))]).is_err());
            assert!(WeightedSubset::new(ctx, vec![]).is_err());
        });
    }

    #[test]
    fn hom_l_equality_cases() {
        with_ctx(SchemeSpec::Hamming { d: 3, q: 2 }, |ctx| {
            let c = hom_l_comparison(ctx, 1).unwrap();
            assert!(c.equal());
            assert_eq!(c.joint_rank, 4);
            assert!(hom_l_equality(ctx, 3).unwrap());
            assert!(hom_inside_lower_l(ctx));
        });
        with_ctx(SchemeSpec::Doob { n: 1, m: 0 }, |ctx| {
            assert!(!hom_l_equality(ctx, 1).unwrap());
            assert!(hom_l_equality(ctx, 2).unwrap());
        });
    }

    #[test]
    fn ratio_constancy_values() {
        for (spec, value) in [
            (SchemeSpec::Hamming { d: 2, q: 2 }, rat(-1, 2)),
            (SchemeSpec::Hamming { d: 3, q: 3 }, rat(-1, 3)),
            (SchemeSpec::Doob { n: 1, m: 0 }, rat(-1, 4)),
        ] {
            with_ctx(spec, |ctx| {
                let rc = ratio_constancy(ctx).unwrap().unwrap();
                assert_eq!(rc.value, value);
                assert!(rc.alpha_matches());
            });
        }
    }

    #[test]
    fn search_on_hamming_4_2() {
        with_ctx(SchemeSpec::Hamming { d: 4, q: 2 }, |ctx| {
            let report = design_search(ctx, &sup(&[2], 4), 2, Variant::Q, 6, SearchMode::UniformPerShell).unwrap();
            assert!(report.designs.iter().any(|d| d.design.len() == 6));
            assert!(report.minimum_size().unwrap() >= 4);
            for d in &report.designs {
                assert!(d.verified);
                assert_eq!(d.fisher.unwrap().0, 4);
                assert!(d.fisher.unwrap().1);
            }
            assert!(matches!(
                design_search(ctx, &sup(&[0, 1, 2, 3, 4], 4), 2, Variant::Q, 16, SearchMode::SolveWeights),
                Ok(_) | Err(Error::BudgetExceeded { .. })
            ));
        });
    }

    #[test]
    fn combinations_in_colex_order() {
        let all: Vec<Vec<usize>> = (1..4).flat_map(|top| combos_with_top(4, 2, top)).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]);
        assert_eq!(combos_with_top(5, 1, 3), vec![vec![3]]);
        assert_eq!(binomial(6, 3), 20);
    }

    #[test]
    fn design_file_round_trip() {
        with_ctx(SchemeSpec::Hamming { d: 4, q: 2 }, |ctx| {
            let y = WeightedSubset::new(ctx, vec![(3, rat(1, 2)), (5, int(2))]).unwrap();
            let text = format_design_file(SchemeSpec::Hamming { d: 4, q: 2 }, 0, &y);
            let parsed = parse_design_file(&text).unwrap();
            assert_eq!(parsed.u0, 0);
            assert_eq!(parsed.entries, y.entries().to_vec());
            let bad = parse_design_file("scheme: family=hamming d=4 q=2\nu0: 0\n3 x/2\n").unwrap_err();
            assert_eq!(bad, Error::Parse { line: 3, message: "bad weight 'x/2'".into() });
        });
    }
}
