//! Dual Bose-Mesner algebra at a base vertex and T-modules.
//!
//! Vectors that live on a single shell are handled in shell-local
//! coordinates (position inside `X_i`); `E_j^* A E_i^*` is then a sparse
//! walk over the neighbours of each vertex that sit in shell `i`.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::bose_mesner::BoseMesnerData;
use crate::error::{Error, Result};
use crate::linalg::{self, int, ExactMatrix, IncrementalBasis, Rational, SubspaceBasis};
use crate::schemes::{BasePointShells, Scheme};

/// Scheme, eigen-data and base vertex, with the shell structure at `u0`.
#[derive(Debug, Clone)]
pub struct TerwilligerContext<'a> {
    scheme: &'a Scheme,
    algebra: &'a BoseMesnerData,
    shells: BasePointShells,
    theta_star: Vec<Rational>,
    // for each vertex x in X_i: positions of its neighbours in X_{i-1}, X_i, X_{i+1}
    local: Vec<[Vec<usize>; 3]>,
}

/// Build the context at `u0`. Fails on a non-metric scheme or a bad vertex.
pub fn dual_matrices<'a>(s: &'a Scheme, b: &'a BoseMesnerData, u0: usize) -> Result<TerwilligerContext<'a>> {
    TerwilligerContext::new(s, b, u0)
}

impl<'a> TerwilligerContext<'a> {
    pub fn new(s: &'a Scheme, b: &'a BoseMesnerData, u0: usize) -> Result<Self> {
        if b.n_vertices() != s.n_vertices() || b.classes() != s.classes() {
            return Err(Error::DimensionMismatch("eigen-data built for another scheme".into()));
        }
        let shells = s.shells(u0)?;
        let mut local = vec![[Vec::new(), Vec::new(), Vec::new()]; s.n_vertices()];
        for x in 0..s.n_vertices() {
            let i = shells.shell_of[x];
            for &y in s.neighbors(x) {
                let j = shells.shell_of[y];
                if j.abs_diff(i) > 1 {
                    return Err(Error::Unsupported("scheme is not metric with respect to R_1".into()));
                }
                local[x][j + 1 - i].push(shells.position_in_shell(y));
            }
        }
        Ok(Self { scheme: s, algebra: b, theta_star: b.theta_star(), shells, local })
    }

    pub fn scheme(&self) -> &'a Scheme {
        self.scheme
    }

    pub fn algebra(&self) -> &'a BoseMesnerData {
        self.algebra
    }

    pub fn u0(&self) -> usize {
        self.shells.u0
    }

    pub fn shells(&self) -> &BasePointShells {
        &self.shells
    }

    pub fn classes(&self) -> usize {
        self.scheme.classes()
    }

    pub fn theta_star(&self) -> &[Rational] {
        &self.theta_star
    }

    /// `E_i^*`, the 0/1 diagonal indicator of shell `i`.
    pub fn e_star(&self, i: usize) -> ExactMatrix {
        let n = self.scheme.n_vertices();
        ExactMatrix::from_fn(n, n, |x, y| int((x == y && self.shells.shell_of[x] == i) as i64))
    }

    /// `A_i^*` with `(A_i^*)_{xx} = |X| (E_i)_{u0,x}`.
    pub fn a_star(&self, i: usize) -> ExactMatrix {
        let n = self.scheme.n_vertices();
        let (_, q) = self.algebra.eigenmatrices();
        ExactMatrix::from_fn(n, n, |x, y| if x == y { q[(self.shells.shell_of[x], i)].clone() } else { Rational::zero() })
    }

    /// `E_j^* A E_i^*` applied to a vector supported on shell `i`.
    pub fn step(&self, v: &[Rational], i: usize, j: usize) -> Vec<Rational> {
        let off = j + 1 - i;
        self.shells.shells[j]
            .iter()
            .map(|&x| {
                let mut acc = Rational::zero();
                for &p in &self.local[x][2 - off] {
                    if !v[p].is_zero() {
                        acc += &v[p];
                    }
                }
                acc
            })
            .collect()
    }

    /// Integer matrix of `E_i^* A E_i^*` in shell-local coordinates.
    pub fn shell_adjacency(&self, i: usize) -> Vec<Vec<i64>> {
        let k = self.shells.valencies[i];
        let mut m = vec![vec![0i64; k]; k];
        for (a, &x) in self.shells.shells[i].iter().enumerate() {
            for &p in &self.local[x][1] {
                m[a][p] = 1;
            }
        }
        m
    }

    /// Embed a shell-local vector into `Q^X`.
    pub fn embed(&self, i: usize, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.scheme.n_vertices()];
        for (&x, c) in self.shells.shells[i].iter().zip(v) {
            out[x] = c.clone();
        }
        out
    }

    /// `E_i^* v` in shell-local coordinates.
    pub fn restrict(&self, i: usize, v: &[Rational]) -> Vec<Rational> {
        self.shells.shells[i].iter().map(|&x| v[x].clone()).collect()
    }
}

/// Profile of a T-module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleProfile {
    pub endpoint: usize,
    pub dual_endpoint: usize,
    pub diameter: usize,
    pub thin: bool,
    pub dual_thin: bool,
    /// `dim E_i^* W`
    pub shell_dims: Vec<usize>,
    /// `dim E_j W`
    pub dual_dims: Vec<usize>,
}

/// A T-module with its profile.
#[derive(Debug, Clone)]
pub struct TModule {
    basis: SubspaceBasis,
    profile: ModuleProfile,
    irreducible_certified: bool,
    // shell-local basis of each E_i^* W
    components: Vec<Vec<Vec<Rational>>>,
}

impl TModule {
    pub fn basis(&self) -> &SubspaceBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn profile(&self) -> &ModuleProfile {
        &self.profile
    }

    pub fn endpoint(&self) -> usize {
        self.profile.endpoint
    }

    pub fn dual_endpoint(&self) -> usize {
        self.profile.dual_endpoint
    }

    pub fn diameter(&self) -> usize {
        self.profile.diameter
    }

    pub fn is_thin(&self) -> bool {
        self.profile.thin
    }

    pub fn is_dual_thin(&self) -> bool {
        self.profile.dual_thin
    }

    pub fn irreducible_certified(&self) -> bool {
        self.irreducible_certified
    }

    /// Shell-local basis of `E_i^* W`.
    pub fn component(&self, i: usize) -> &[Vec<Rational>] {
        &self.components[i]
    }
}

fn dual_dims(ctx: &TerwilligerContext<'_>, vectors: &[Vec<Rational>]) -> Vec<usize> {
    let n = ctx.scheme.n_vertices();
    let d = ctx.classes();
    let projected: Vec<Vec<Vec<Rational>>> =
        vectors.iter().map(|v| ctx.algebra.apply_idempotents(ctx.scheme, v)).collect();
    (0..=d)
        .map(|j| {
            let rows: Vec<Vec<Rational>> = projected.iter().map(|p| p[j].clone()).collect();
            linalg::rank_of_vectors(&rows, n)
        })
        .collect()
}

fn profile_from_dims(shell_dims: Vec<usize>, dual_dims: Vec<usize>) -> Result<ModuleProfile> {
    let endpoint = shell_dims.iter().position(|&k| k > 0).ok_or(Error::ZeroVector)?;
    let dual_endpoint = dual_dims.iter().position(|&k| k > 0).ok_or(Error::ZeroVector)?;
    let diameter = shell_dims.iter().filter(|&&k| k > 0).count() - 1;
    Ok(ModuleProfile {
        endpoint,
        dual_endpoint,
        diameter,
        thin: shell_dims.iter().all(|&k| k <= 1),
        dual_thin: dual_dims.iter().all(|&k| k <= 1),
        shell_dims,
        dual_dims,
    })
}

fn certify(ctx: &TerwilligerContext<'_>, components: &[Vec<Vec<Rational>>], p: &ModuleProfile) -> bool {
    if !p.thin {
        return false;
    }
    let top = p.endpoint + p.diameter;
    (p.endpoint..=top).all(|i| components[i].len() == 1)
        && (p.endpoint..top).all(|i| !linalg::is_zero_vector(&ctx.step(&components[i][0], i, i + 1)))
}

/// Closure of shell-homogeneous seed vectors under every `E_j^* A E_i^*`.
fn close(ctx: &TerwilligerContext<'_>, seeds: Vec<(usize, Vec<Rational>)>) -> Vec<Vec<Vec<Rational>>> {
    let d = ctx.classes();
    let mut bases: Vec<IncrementalBasis> =
        ctx.shells.valencies.iter().map(|&k| IncrementalBasis::new(k)).collect();
    let mut kept: Vec<Vec<Vec<Rational>>> = vec![Vec::new(); d + 1];
    let mut queue = VecDeque::new();
    for (i, v) in seeds {
        if bases[i].insert(&v) {
            let v = linalg::primitive(&v);
            kept[i].push(v.clone());
            queue.push_back((i, v));
        }
    }
    while let Some((i, v)) = queue.pop_front() {
        for j in i.saturating_sub(1)..=(i + 1).min(d) {
            let w = ctx.step(&v, i, j);
            if !linalg::is_zero_vector(&w) && bases[j].insert(&w) {
                let w = linalg::primitive(&w);
                kept[j].push(w.clone());
                queue.push_back((j, w));
            }
        }
    }
    kept
}

fn module_from_components(ctx: &TerwilligerContext<'_>, components: Vec<Vec<Vec<Rational>>>) -> Result<TModule> {
    let n = ctx.scheme.n_vertices();
    let vectors: Vec<Vec<Rational>> = components
        .iter()
        .enumerate()
        .flat_map(|(i, vs)| vs.iter().map(move |v| (i, v)))
        .map(|(i, v)| ctx.embed(i, v))
        .collect();
    let shell_dims = components.iter().map(Vec::len).collect();
    let profile = profile_from_dims(shell_dims, dual_dims(ctx, &vectors))?;
    let irreducible_certified = certify(ctx, &components, &profile);
    Ok(TModule { basis: SubspaceBasis::new(n, vectors)?, profile, irreducible_certified, components })
}

/// Smallest subspace containing `v` closed under `A_1` and every `E_i^*`.
pub fn generate_module(ctx: &TerwilligerContext<'_>, v: &[Rational]) -> Result<TModule> {
    if v.len() != ctx.scheme.n_vertices() {
        return Err(Error::DimensionMismatch(format!("vector of length {}", v.len())));
    }
    if linalg::is_zero_vector(v) {
        return Err(Error::ZeroVector);
    }
    let seeds = (0..=ctx.classes())
        .map(|i| (i, ctx.restrict(i, v)))
        .filter(|(_, w)| !linalg::is_zero_vector(w))
        .collect();
    module_from_components(ctx, close(ctx, seeds))
}

/// Recompute the profile of `w` from its basis alone.
pub fn module_profile(w: &TModule, ctx: &TerwilligerContext<'_>) -> Result<ModuleProfile> {
    let vs = w.basis.vectors();
    let shell_dims = (0..=ctx.classes())
        .map(|i| {
            let rows: Vec<Vec<Rational>> = vs.iter().map(|v| ctx.restrict(i, v)).collect();
            linalg::rank_of_vectors(&rows, ctx.shells.valencies[i])
        })
        .collect();
    profile_from_dims(shell_dims, dual_dims(ctx, vs))
}

/// Whether the basis of `w` is closed under `A_1` and every `E_i^*`.
pub fn is_closed(w: &TModule, ctx: &TerwilligerContext<'_>) -> bool {
    let vs = w.basis.vectors();
    let n = ctx.scheme.n_vertices();
    vs.iter().all(|v| {
        let av = crate::bose_mesner::apply_adjacency(ctx.scheme, v);
        w.basis.contains(&av)
            && (0..=ctx.classes()).all(|i| {
                let mut e = vec![Rational::zero(); n];
                for &x in &ctx.shells.shells[i] {
                    e[x] = v[x].clone();
                }
                w.basis.contains(&e)
            })
    })
}

/// Modules of a decomposition of the standard module.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub modules: Vec<TModule>,
}

impl Decomposition {
    pub fn total_dim(&self) -> usize {
        self.modules.iter().map(TModule::dim).sum()
    }

    pub fn all_certified(&self) -> bool {
        self.modules.iter().all(TModule::irreducible_certified)
    }

    /// Exact check that bases of distinct modules are orthogonal.
    pub fn pairwise_orthogonal(&self) -> bool {
        let m = &self.modules;
        (0..m.len()).into_par_iter().all(|a| {
            m[a + 1..].iter().all(|other| {
                m[a].basis
                    .vectors()
                    .iter()
                    .all(|u| other.basis.vectors().iter().all(|v| linalg::dot(u, v).is_zero()))
            })
        })
    }
}

fn int_matrix_minus(m: &[Vec<i64>], lambda: i64) -> Vec<Vec<BigInt>> {
    m.iter()
        .enumerate()
        .map(|(a, row)| row.iter().enumerate().map(|(b, &x)| BigInt::from(x - if a == b { lambda } else { 0 })).collect())
        .collect()
}

/// Split `space` (independent shell-local vectors) into common eigenspaces
/// of the operator `op`, trying integer eigenvalues in `candidates`.
fn split_by<F>(space: &[Vec<Rational>], op: F, candidates: impl Iterator<Item = i64>) -> Option<Vec<Vec<Vec<Rational>>>>
where
    F: Fn(&[Rational]) -> Vec<Rational>,
{
    let k = space[0].len();
    let images: Vec<Vec<Rational>> = space.iter().map(|v| op(v)).collect();
    let mut found = 0;
    let mut out = Vec::new();
    for mu in candidates {
        let mu = int(mu);
        let m = ExactMatrix::from_fn(k, space.len(), |r, c| &images[c][r] - &mu * &space[c][r]);
        let coeffs = linalg::nullspace(&m);
        if coeffs.is_empty() {
            continue;
        }
        found += coeffs.len();
        out.push(
            coeffs
                .iter()
                .map(|c| {
                    let mut v = vec![Rational::zero(); k];
                    for (ci, s) in c.iter().zip(space) {
                        linalg::add_scaled(&mut v, ci, s);
                    }
                    v
                })
                .collect(),
        );
        if found == space.len() {
            return Some(out);
        }
    }
    None
}

/// Greedy decomposition of the standard module into thin irreducible modules.
///
/// Starts from the primary module; then, shell by shell, splits the part of
/// the orthogonal complement lying in `E_r^*` into eigenspaces of
/// `E_r^* A E_r^*` (refined, when a generated module is not thin, by the
/// operators `E_r^* (A E^*)^{2s} E_r^*` that go up `s` shells and back) and
/// generates one module per vector of an orthogonal basis of each piece.
pub fn decompose_standard_module(ctx: &TerwilligerContext<'_>) -> Result<Decomposition> {
    let d = ctx.classes();
    let n = ctx.scheme.n_vertices();
    let k1 = ctx.scheme.valencies().get(1).copied().unwrap_or(0) as i64;
    let mut raw: Vec<Vec<Vec<Vec<Rational>>>> = Vec::new();
    let mut used: Vec<Vec<Vec<Rational>>> = vec![Vec::new(); d + 1];
    let record = |comps: &Vec<Vec<Vec<Rational>>>, used: &mut Vec<Vec<Vec<Rational>>>| {
        for (i, vs) in comps.iter().enumerate() {
            used[i].extend(vs.iter().cloned());
        }
    };

    let primary = close(ctx, vec![(0, vec![Rational::one()])]);
    record(&primary, &mut used);
    raw.push(primary);

    for r in 1..=d {
        let kr = ctx.shells.valencies[r];
        if used[r].len() == kr {
            continue;
        }
        let m_r = ctx.shell_adjacency(r);
        let used_int: Vec<Vec<BigInt>> = used[r].iter().map(|v| linalg::integer_row(v)).collect();
        let mut pieces = Vec::new();
        let mut found = 0;
        for lambda in (-k1..=k1).rev() {
            let mut rows = int_matrix_minus(&m_r, lambda);
            rows.extend(used_int.iter().cloned());
            let null = linalg::nullspace_of_integer_rows(&rows, kr);
            if !null.is_empty() {
                found += null.len();
                pieces.push(null);
                if used[r].len() + found == kr {
                    break;
                }
            }
        }
        if used[r].len() + found != kr {
            return Err(Error::Certification(format!(
                "E_{r}^* A E_{r}^* has a non-integer eigenvalue on the complement in shell {r}"
            )));
        }
        let mut queue: VecDeque<(Vec<Vec<Rational>>, usize)> = pieces.into_iter().map(|p| (p, 1)).collect();
        while let Some((piece, depth)) = queue.pop_front() {
            let ortho = linalg::gram_schmidt(&piece);
            let comps: Vec<Vec<Vec<Vec<Rational>>>> =
                ortho.iter().map(|v| close(ctx, vec![(r, linalg::primitive(v))])).collect();
            let thin = comps.iter().all(|c| c.iter().all(|vs| vs.len() <= 1));
            if thin {
                for c in comps {
                    record(&c, &mut used);
                    raw.push(c);
                }
                continue;
            }
            // go up `depth` shells and back down
            if r + depth > d || piece.len() == 1 {
                return Err(Error::Certification(format!(
                    "a module generated in shell {r} is not thin (dims {:?})",
                    comps.iter().find(|c| c.iter().any(|vs| vs.len() > 1)).map(|c| c.iter().map(Vec::len).collect::<Vec<_>>())
                )));
            }
            let op = |v: &[Rational]| {
                let mut w = v.to_vec();
                for s in r..r + depth {
                    w = ctx.step(&w, s, s + 1);
                }
                for s in (r + 1..=r + depth).rev() {
                    w = ctx.step(&w, s, s - 1);
                }
                w
            };
            let bound = k1.pow(2 * depth as u32);
            let split = split_by(&piece, op, (0..=bound).rev()).ok_or_else(|| {
                Error::Certification(format!("could not split a non-thin piece in shell {r} by integer eigenvalues"))
            })?;
            if split.len() == 1 {
                queue.push_back((piece, depth + 1));
            } else {
                queue.extend(split.into_iter().map(|p| (p, depth + 1)));
            }
        }
        if used[r].len() != kr {
            return Err(Error::Certification(format!("shell {r} not exhausted by the decomposition")));
        }
    }

    let modules: Vec<TModule> =
        raw.into_par_iter().map(|c| module_from_components(ctx, c)).collect::<Result<_>>()?;
    let out = Decomposition { modules };
    if out.total_dim() != n {
        return Err(Error::Certification(format!("module dimensions sum to {} not {n}", out.total_dim())));
    }
    if let Some(bad) = out.modules.iter().find(|m| !m.irreducible_certified) {
        return Err(Error::Certification(format!("module with profile {:?} failed certification", bad.profile)));
    }
    Ok(out)
}

/// Shape of a connected component of the local graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentShape {
    pub vertices: usize,
    pub edges: usize,
    pub min_degree: usize,
    pub max_degree: usize,
}

impl ComponentShape {
    pub fn is_cycle(&self) -> bool {
        self.vertices >= 3 && self.min_degree == 2 && self.max_degree == 2
    }

    pub fn is_clique(&self) -> bool {
        self.edges == self.vertices * (self.vertices - 1) / 2
    }
}

/// Spectrum and component structure of the graph induced on shell 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGraphAnalysis {
    /// `(eigenvalue, multiplicity)` in decreasing order.
    pub spectrum: Vec<(i64, usize)>,
    pub components: Vec<ComponentShape>,
    /// `-1 - b_1 / (1 + theta_1)`
    pub local_eigenvalue_bound: Rational,
}

pub fn local_graph_analysis(ctx: &TerwilligerContext<'_>) -> Result<LocalGraphAnalysis> {
    let pn = ctx.scheme.intersection_numbers();
    let b = pn.b.as_ref().ok_or_else(|| Error::Unsupported("scheme is not P-polynomial".into()))?;
    let m = ctx.shell_adjacency(1);
    let k = m.len();
    let mut spectrum = Vec::new();
    let mut total = 0;
    for lambda in (-(k as i64)..=k as i64).rev() {
        let rows = int_matrix_minus(&m, lambda);
        let nullity = k - linalg::rank_of_integer_rows(&rows, k);
        if nullity > 0 {
            spectrum.push((lambda, nullity));
            total += nullity;
        }
    }
    if total != k {
        return Err(Error::NonIntegerEigenvalue("local graph has a non-integer eigenvalue".into()));
    }
    let mut seen = vec![false; k];
    let mut components = Vec::new();
    for start in 0..k {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut members = Vec::new();
        while let Some(u) = stack.pop() {
            members.push(u);
            for w in 0..k {
                if m[u][w] == 1 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let degrees: Vec<usize> = members.iter().map(|&u| m[u].iter().filter(|&&x| x == 1).count()).collect();
        components.push(ComponentShape {
            vertices: members.len(),
            edges: degrees.iter().sum::<usize>() / 2,
            min_degree: *degrees.iter().min().expect("nonempty"),
            max_degree: *degrees.iter().max().expect("nonempty"),
        });
    }
    let theta1 = &ctx.algebra.theta()[1];
    let denom = int(1) + theta1;
    if denom.is_zero() {
        return Err(Error::Degenerate("theta_1 = -1".into()));
    }
    let local_eigenvalue_bound = int(-1) - int(b[1] as i64) / denom;
    Ok(LocalGraphAnalysis { spectrum, components, local_eigenvalue_bound })
}
