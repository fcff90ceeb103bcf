//! Gates and products of geodesic indicators in symplectic dual polar graphs.
//!
//! Vertices are maximal totally isotropic subspaces and `∂(x,y) = d - dim(x ∩ y)`.
//! For a pair `x, y` with `U = x ∩ y` the set `X' = {z ⊇ U}` is convex and
//! every vertex has a unique nearest point `U + (z ∩ U^⊥)` in it, which gives
//! `f_x f_y = Σ f_z` over the `z ∈ X'` under both `x` and `y`.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::design_spaces::{self, ShellSupport, Variant, WeightedSubset};
use crate::error::{Error, Result};
use crate::linalg;
use crate::schemes::subspace::Subspace;
use crate::schemes::{Family, Scheme};
use crate::terwilliger::TerwilligerContext;

fn require_dual_polar(s: &Scheme) -> Result<()> {
    if s.family() != Family::DualPolarC {
        return Err(Error::Unsupported(format!("{} is not a dual polar scheme", s.spec().short_name())));
    }
    Ok(())
}

fn sub(s: &Scheme, x: usize) -> &Subspace {
    s.subspace(x).expect("dual polar vertex")
}

/// `∂(x,z) + ∂(z,y) = ∂(x,y)`
pub fn geodesic_split(s: &Scheme, x: usize, y: usize, z: usize) -> bool {
    s.relation(x, z) + s.relation(z, y) == s.relation(x, y)
}

/// `x ∩ y ⊆ z = (x ∩ z) + (y ∩ z)`
pub fn geodesic_subspace_criterion(x: &Subspace, y: &Subspace, z: &Subspace) -> bool {
    z.contains(&x.intersection(y)) && x.intersection(z).sum(&y.intersection(z)) == *z
}

/// `f_x(z) = 1` iff `x` lies on a geodesic from `u0` to `z`.
pub fn hom_value(s: &Scheme, u0: usize, x: usize, z: usize) -> bool {
    s.relation(u0, z) == s.relation(u0, x) + s.relation(x, z)
}

/// The data attached to a pair `x, y`.
#[derive(Debug, Clone)]
pub struct GateContext {
    pub x: usize,
    pub y: usize,
    pub u: Subspace,
    pub u_perp: Subspace,
    /// `dim(u0 ∩ U)`
    pub ell: usize,
    /// `{z | U ⊆ z}`, sorted.
    pub xprime: Vec<usize>,
}

impl GateContext {
    pub fn new(s: &Scheme, u0: usize, x: usize, y: usize) -> Result<Self> {
        require_dual_polar(s)?;
        let n = s.n_vertices();
        if x >= n || y >= n || u0 >= n {
            return Err(Error::InvalidInput("vertex out of range".into()));
        }
        let u = sub(s, x).intersection(sub(s, y));
        let ell = sub(s, u0).intersection(&u).dim();
        let xprime = (0..n).filter(|&z| sub(s, z).contains(&u)).collect();
        Ok(Self { x, y, u_perp: u.symplectic_perp(), u, ell, xprime })
    }
}

/// `z' = U + (z ∩ U^⊥)`
pub fn gate(s: &Scheme, ctx: &GateContext, z: usize) -> Result<usize> {
    let zp = ctx.u.sum(&sub(s, z).intersection(&ctx.u_perp));
    s.vertex_of_subspace(&zp)
        .ok_or_else(|| Error::AxiomViolation(format!("gate of vertex {z} is not a maximal isotropic subspace")))
}

/// `{z ∈ X' | f_x(z) = f_y(z) = 1}`; asserts `f_x f_y = Σ f_z` and that each
/// such `z` is at distance `d - ℓ` from `u0`.
pub fn product_decomposition(s: &Scheme, u0: usize, x: usize, y: usize) -> Result<Vec<usize>> {
    let ctx = GateContext::new(s, u0, x, y)?;
    let zs: Vec<usize> =
        ctx.xprime.iter().copied().filter(|&z| hom_value(s, u0, x, z) && hom_value(s, u0, y, z)).collect();
    let d = s.classes();
    if let Some(&z) = zs.iter().find(|&&z| s.relation(u0, z) != d - ctx.ell) {
        return Err(Error::AxiomViolation(format!("vertex {z} in the product is not at distance d - ℓ from u0")));
    }
    for w in 0..s.n_vertices() {
        let lhs = (hom_value(s, u0, x, w) && hom_value(s, u0, y, w)) as usize;
        let rhs = zs.iter().filter(|&&z| hom_value(s, u0, z, w)).count();
        if lhs != rhs {
            return Err(Error::AxiomViolation(format!("f_x f_y differs from the sum of f_z at vertex {w}")));
        }
    }
    Ok(zs)
}

/// Fisher type bound for a relative `2e`-design (P variant) of a dual polar
/// scheme, with the injectivity of the restriction map checked directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualPolarFisher {
    pub bound: usize,
    pub holds: bool,
    pub injectivity_certified: bool,
}

pub fn fisher_dual_polar(ctx: &TerwilligerContext<'_>, y: &WeightedSubset, e: usize) -> Result<DualPolarFisher> {
    let s = ctx.scheme();
    require_dual_polar(s)?;
    if 2 * e > s.classes() || !design_spaces::verify_relative_design(ctx, y, 2 * e, Variant::P)? {
        return Err(Error::NotADesign(format!("not a relative {}-design", 2 * e)));
    }
    let support: &ShellSupport = y.support();
    let bound = design_spaces::hom_restricted_dim(ctx, e, support);
    let cols: Vec<usize> = y.entries().iter().map(|(x, _)| *x).collect();
    let rows: Vec<Vec<BigInt>> = ctx.shells().shells[..=e]
        .iter()
        .flatten()
        .map(|&z| cols.iter().map(|&c| BigInt::from(hom_value(s, ctx.u0(), z, c) as u8)).collect())
        .collect();
    let on_y = linalg::rank_of_integer_rows(&rows, cols.len());
    Ok(DualPolarFisher { bound, holds: y.len() >= bound, injectivity_certified: on_y == bound })
}

/// Intersection numbers `c_i` of the graph induced on `vertices`, when it is
/// distance-regular with distances inherited from the scheme.
pub fn induced_distance_regular(s: &Scheme, vertices: &[usize]) -> Option<Vec<u64>> {
    // induced path distances must agree with ∂ (convexity)
    let m = vertices.len();
    let mut dist = vec![usize::MAX; m * m];
    for a in 0..m {
        dist[a * m + a] = 0;
        let mut queue = std::collections::VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            for w in 0..m {
                if s.relation(vertices[u], vertices[w]) == 1 && dist[a * m + w] == usize::MAX {
                    dist[a * m + w] = dist[a * m + u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if (0..m).any(|w| dist[a * m + w] != s.relation(vertices[a], vertices[w])) {
            return None;
        }
    }
    let diameter = dist.iter().copied().max().unwrap_or(0);
    let mut c = vec![None; diameter + 1];
    let mut b = vec![None; diameter + 1];
    for a in 0..m {
        for w in 0..m {
            let i = dist[a * m + w];
            let adj: Vec<usize> = (0..m).filter(|&v| dist[w * m + v] == 1).collect();
            let ci = adj.iter().filter(|&&v| dist[a * m + v] + 1 == i).count() as u64;
            let bi = adj.iter().filter(|&&v| dist[a * m + v] == i + 1).count() as u64;
            for (slot, val) in [(&mut c[i], ci), (&mut b[i], bi)] {
                match slot {
                    None => *slot = Some(val),
                    Some(prev) if *prev != val => return None,
                    _ => {}
                }
            }
        }
    }
    c.into_iter().collect()
}

/// One exhaustive check of the suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteCheck {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
}

impl SuiteCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

fn tally<I: ParallelIterator<Item = (u64, u64)>>(name: &'static str, it: I) -> SuiteCheck {
    let (cases, failures) = it.reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    SuiteCheck { name, cases, failures }
}

/// Exhaustive checks of the geodesic, gate, distance, uniqueness and product
/// statements over all vertices, pairs and triples, with base vertex `u0`.
pub fn gate_suite(s: &Scheme, u0: usize) -> Result<Vec<SuiteCheck>> {
    require_dual_polar(s)?;
    let n = s.n_vertices();
    let d = s.classes();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    let ctxs: Vec<GateContext> = pairs
        .par_iter()
        .map(|&(x, y)| GateContext::new(s, u0, x, y))
        .collect::<Result<_>>()?;

    let meets: Vec<Subspace> = pairs.par_iter().map(|&(x, y)| sub(s, x).intersection(sub(s, y))).collect();
    let geodesic = tally(
        "geodesic_criterion",
        pairs.par_iter().map(|&(x, y)| {
            let u = &meets[x * n + y];
            let bad = (0..n)
                .filter(|&z| {
                    let subspace_side =
                        sub(s, z).contains(u) && meets[x * n + z].sum(&meets[y * n + z]) == *sub(s, z);
                    geodesic_split(s, x, y, z) != subspace_side
                })
                .count();
            (n as u64, bad as u64)
        }),
    );

    let ell_bound = tally(
        "ell_lower_bound",
        ctxs.par_iter().map(|c| {
            let bad = c.ell + s.relation(u0, c.x) + s.relation(u0, c.y) < d;
            (1, bad as u64)
        }),
    );

    let xprime_diameter = tally(
        "xprime_diameter",
        ctxs.par_iter().map(|c| {
            let diam = c.xprime.iter().flat_map(|&a| c.xprime.iter().map(move |&b| s.relation(a, b))).max();
            (1, (diam != Some(s.relation(c.x, c.y))) as u64)
        }),
    );

    let gates: Vec<Vec<usize>> = ctxs
        .par_iter()
        .map(|c| (0..n).map(|z| gate(s, c, z)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let gate_unique = tally(
        "gate_unique_nearest",
        ctxs.par_iter().zip(&gates).map(|(c, g)| {
            let mut bad = 0;
            for z in 0..n {
                let best = c.xprime.iter().map(|&w| s.relation(z, w)).min().expect("x in X'");
                let minimizers: Vec<usize> = c.xprime.iter().copied().filter(|&w| s.relation(z, w) == best).collect();
                if minimizers != [g[z]] {
                    bad += 1;
                }
            }
            (n as u64, bad)
        }),
    );

    let gate_split = tally(
        "gate_distance_split",
        ctxs.par_iter().zip(&gates).map(|(c, g)| {
            let mut cases = 0;
            let mut bad = 0;
            for z in 0..n {
                for &z1 in &c.xprime {
                    cases += 1;
                    if s.relation(z, z1) != s.relation(z, g[z]) + s.relation(g[z], z1) {
                        bad += 1;
                    }
                }
            }
            (cases, bad)
        }),
    );

    let product_distance = tally(
        "product_shell_distance",
        ctxs.par_iter().map(|c| {
            let mut cases = 0;
            let mut bad = 0;
            for &z in &c.xprime {
                if hom_value(s, u0, c.x, z) && hom_value(s, u0, c.y, z) {
                    cases += 1;
                    if s.relation(u0, z) != d - c.ell {
                        bad += 1;
                    }
                }
            }
            (cases, bad)
        }),
    );

    let unique_cover = tally(
        "unique_covering_vertex",
        ctxs.par_iter().zip(&gates).map(|(c, g)| {
            let mut cases = 0;
            let mut bad = 0;
            for z in 0..n {
                if !(hom_value(s, u0, c.x, z) && hom_value(s, u0, c.y, z)) {
                    continue;
                }
                cases += 1;
                let covers: Vec<usize> = c
                    .xprime
                    .iter()
                    .copied()
                    .filter(|&w| hom_value(s, u0, c.x, w) && hom_value(s, u0, c.y, w) && hom_value(s, u0, w, z))
                    .collect();
                if covers != [g[z]] {
                    bad += 1;
                }
            }
            (cases, bad)
        }),
    );

    let product = tally(
        "product_identity",
        pairs.par_iter().map(|&(x, y)| (1, product_decomposition(s, u0, x, y).is_err() as u64)),
    );

    Ok(vec![geodesic, ell_bound, xprime_diameter, gate_unique, gate_split, product_distance, unique_cover, product])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bose_mesner::BoseMesnerData;
    use crate::linalg::int;
    use crate::schemes::SchemeSpec;
    use crate::terwilliger::dual_matrices;

    fn c22() -> Scheme {
        Scheme::build(SchemeSpec::DualPolarC { d: 2, q: 2 }).unwrap()
    }

    #[test]
    fn geodesic_examples() {
        let s = c22();
        for x in 0..15 {
            for y in 0..15 {
                assert!(geodesic_split(&s, x, y, x));
                for z in 0..15 {
                    let u = sub(&s, x).intersection(sub(&s, y));
                    if !sub(&s, z).contains(&u) {
                        assert!(!geodesic_split(&s, x, y, z));
                    }
                }
            }
        }
    }

    #[test]
    fn gate_fixes_xprime() {
        let s = c22();
        let ctx = GateContext::new(&s, 0, 3, 9).unwrap();
        for &z in &ctx.xprime {
            assert_eq!(gate(&s, &ctx, z).unwrap(), z);
        }
    }

    #[test]
    fn product_of_equal_vertices() {
        let s = c22();
        for x in 0..15 {
            assert_eq!(product_decomposition(&s, 0, x, x).unwrap(), vec![x]);
        }
    }

    #[test]
    fn suite_on_small_dual_polar() {
        let s = c22();
        for check in gate_suite(&s, 0).unwrap() {
            assert!(check.passed(), "{check:?}");
        }
        assert!(gate_suite(&Scheme::build(SchemeSpec::Hamming { d: 2, q: 2 }).unwrap(), 0).is_err());
    }

    #[test]
    fn xprime_is_distance_regular() {
        let s = Scheme::build(SchemeSpec::DualPolarC { d: 3, q: 2 }).unwrap();
        // x, y at distance 2 meet in a line, so X' is a dual polar graph of diameter 2
        let y = (0..s.n_vertices()).find(|&y| s.relation(0, y) == 2).unwrap();
        let ctx = GateContext::new(&s, 0, 0, y).unwrap();
        assert_eq!(ctx.u.dim(), 1);
        assert_eq!(induced_distance_regular(&s, &ctx.xprime), Some(vec![0, 1, 3]));
    }

    #[test]
    fn fisher_on_full_shells() {
        let s = c22();
        let b = BoseMesnerData::primitive_idempotents(&s).unwrap();
        let ctx = dual_matrices(&s, &b, 0).unwrap();
        let top = WeightedSubset::uniform(&ctx, &ctx.shells().shells[2]).unwrap();
        let f = fisher_dual_polar(&ctx, &top, 1).unwrap();
        assert!(f.holds && f.injectivity_certified);
        let mut both: Vec<(usize, linalg::Rational)> = ctx.shells().shells[1].iter().map(|&x| (x, int(1))).collect();
        both.extend(ctx.shells().shells[2].iter().map(|&x| (x, int(1))));
        let y = WeightedSubset::new(&ctx, both).unwrap();
        let f = fisher_dual_polar(&ctx, &y, 1).unwrap();
        assert!(f.holds && f.injectivity_certified);
        let single = WeightedSubset::uniform(&ctx, &[5]).unwrap();
        assert_eq!(fisher_dual_polar(&ctx, &single, 0).unwrap().bound, 1);
        assert!(matches!(fisher_dual_polar(&ctx, &single, 1), Err(Error::NotADesign(_))));
    }
}
