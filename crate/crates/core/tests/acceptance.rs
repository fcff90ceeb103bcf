//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Expected values come from closed forms computed here.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relans::bose_mesner::BoseMesnerData;
use relans::cyclotomic;
use relans::design_spaces::{self, SearchMode, ShellSupport, Variant, WeightedSubset};
use relans::dual_polar_products;
use relans::linalg::{self, int, rat, Rational};
use relans::schemes::{Scheme, SchemeSpec};
use relans::terwilliger::{self, decompose_standard_module, dual_matrices, TerwilligerContext};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn with_ctx<R>(spec: SchemeSpec, f: impl FnOnce(&TerwilligerContext<'_>) -> R) -> R {
    let s = Scheme::build(spec).unwrap_or_else(|e| panic!("{spec}: {e}"));
    let b = BoseMesnerData::primitive_idempotents(&s).unwrap_or_else(|e| panic!("{spec}: {e}"));
    let ctx = dual_matrices(&s, &b, 0).unwrap();
    f(&ctx)
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn hamming_k(d: usize, q: usize, j: usize) -> usize {
    binom(d, j) * (q - 1).pow(j as u32)
}

fn gaussian_binom(n: u32, k: u32, q: usize) -> usize {
    let num: usize = (0..k).map(|i| q.pow(n - i) - 1).product();
    let den: usize = (0..k).map(|i| q.pow(i + 1) - 1).product();
    num / den
}

fn dual_polar_k(d: usize, q: usize, j: usize) -> usize {
    q.pow((j * (j + 1) / 2) as u32) * gaussian_binom(d as u32, j as u32, q)
}

/// `Σ_{j = e-p+1}^{e} a_j` with `a_j = 0` for `j < 0`.
fn window_sum(e: usize, p: usize, a: impl Fn(usize) -> usize) -> usize {
    ((e + 1).saturating_sub(p)..=e).map(a).sum()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> std::result::Result<(), String> {
    ensure(start.elapsed() < limit, || format!("{what} took {:?}, limit {limit:?}", start.elapsed()))
}

fn hamming_sweep() -> Vec<SchemeSpec> {
    (1..=5).flat_map(|d| [2, 3].map(|q| SchemeSpec::Hamming { d, q })).collect()
}

fn hom_dimension_formula() -> Check {
    let start = Instant::now();
    let mut cases = 0;
    for spec in hamming_sweep() {
        let SchemeSpec::Hamming { d, q } = spec else { unreachable!() };
        with_ctx(spec, |ctx| {
            for e in (0..=2).filter(|e| 2 * e <= d) {
                for support in ShellSupport::all_between(e, d - e, d) {
                    let got = design_spaces::hom_restricted_dim(ctx, e, &support);
                    let want = window_sum(e, support.p(), |j| hamming_k(d, q, j));
                    ensure(got == want, || format!("{spec} e={e} r={support}: {got} != {want}"))?;
                    cases += 1;
                }
            }
            Ok::<_, String>(())
        })?;
    }
    within(start, Duration::from_secs(120), "sweep")?;
    Ok(format!("{cases} supports"))
}

fn l_dimension_formula() -> Check {
    let mut cases = 0;
    let mut hypotheses = 0;
    for spec in hamming_sweep() {
        let SchemeSpec::Hamming { d, q } = spec else { unreachable!() };
        with_ctx(spec, |ctx| {
            let dec = decompose_standard_module(ctx).map_err(|e| e.to_string())?;
            for e in (0..=2).filter(|e| 2 * e <= d) {
                for support in ShellSupport::all_between(e, d - e, d) {
                    let got = design_spaces::l_restricted_dim(ctx, e, &support);
                    // m_j = k_j since H(d,q) is self-dual
                    let want = window_sum(e, support.p(), |j| hamming_k(d, q, j));
                    ensure(got == want, || format!("{spec} e={e} r={support}: {got} != {want}"))?;
                    cases += 1;
                    if support.p() <= e + 1 {
                        let h = design_spaces::criterion_hypotheses(ctx, Variant::Q, &dec, e, &support)
                            .map_err(|e| e.to_string())?;
                        ensure(h.holds, || format!("{spec} e={e} r={support}: {:?}", h.failures))?;
                        hypotheses += 1;
                    }
                }
            }
            Ok::<_, String>(())
        })?;
    }
    Ok(format!("{cases} supports, hypotheses on {hypotheses}"))
}

const HOM_L_SCHEMES: [(usize, usize); 6] = [(3, 2), (4, 2), (2, 3), (3, 3), (2, 4), (6, 2)];

fn random_subset(ctx: &TerwilligerContext<'_>, rng: &mut ChaCha8Rng) -> WeightedSubset {
    let d = ctx.classes();
    let mut shells: Vec<usize> = (0..=d).collect();
    shells.shuffle(rng);
    let p = rng.gen_range(1..=2);
    let mut chosen = shells[..p].to_vec();
    chosen.sort_unstable();
    let whole = rng.gen_bool(0.5);
    let mut entries = Vec::new();
    for r in chosen {
        let mut pts = ctx.shells().shells[r].clone();
        let w = rng.gen_range(1..=4);
        if whole {
            entries.extend(pts.iter().map(|&x| (x, int(w))));
        } else {
            pts.shuffle(rng);
            let take = rng.gen_range(1..=pts.len());
            entries.extend(pts[..take].iter().map(|&x| (x, int(rng.gen_range(1..=3)))));
        }
    }
    WeightedSubset::new(ctx, entries).unwrap()
}

fn hom_equals_l() -> Check {
    let mut designs = 0;
    for (d, q) in HOM_L_SCHEMES {
        let spec = SchemeSpec::Hamming { d, q };
        with_ctx(spec, |ctx| {
            let n = ctx.scheme().n_vertices();
            for t in 0..=d {
                let hom: Vec<Vec<Rational>> = ctx.shells().shells[..=t]
                    .iter()
                    .flatten()
                    .map(|&z| design_spaces::hom_vector(ctx, z).unwrap())
                    .collect();
                let l: Vec<Vec<Rational>> =
                    (0..=t).flat_map(|j| ctx.algebra().idempotent(ctx.scheme(), j).row_vectors()).collect();
                let rh = linalg::rank_of_vectors(&hom, n);
                let rl = linalg::rank_of_vectors(&l, n);
                let joint: Vec<Vec<Rational>> = hom.iter().chain(&l).cloned().collect();
                let rj = linalg::rank_of_vectors(&joint, n);
                ensure(rh == rl && rl == rj, || format!("{spec} t={t}: ranks {rh}, {rl}, {rj}"))?;
                ensure(design_spaces::hom_l_equality(ctx, t).unwrap(), || format!("{spec} t={t}: equality false"))?;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(1729 ^ (d * 16 + q) as u64);
            for i in 0..100 {
                let y = random_subset(ctx, &mut rng);
                let t = rng.gen_range(0..=d);
                let p = design_spaces::verify_relative_design(ctx, &y, t, Variant::P).unwrap();
                let qv = design_spaces::verify_relative_design(ctx, &y, t, Variant::Q).unwrap();
                ensure(p == qv, || format!("{spec} subset {i}: verdicts {p} and {qv}"))?;
                designs += p as usize;
            }
            Ok::<_, String>(())
        })?;
    }
    Ok(format!("6 schemes, 600 seeded subsets ({designs} designs)"))
}

/// Relative t-design check straight from the definition (Hom side).
fn is_design_by_definition(s: &Scheme, y: &WeightedSubset, t: usize) -> bool {
    let f = |z: usize, x: usize| s.relation(0, x) == s.relation(0, z) + s.relation(z, x);
    let k = s.intersection_numbers().valencies();
    (0..s.n_vertices()).filter(|&z| s.relation(0, z) <= t).all(|z| {
        let lhs: Rational = y.entries().iter().filter(|(x, _)| f(z, *x)).map(|(_, w)| w.clone()).sum();
        let rhs: Rational = y
            .support()
            .shells()
            .iter()
            .zip(y.shell_weights())
            .map(|(&r, w)| {
                let hits = (0..s.n_vertices()).filter(|&x| s.relation(0, x) == r && f(z, x)).count();
                w * rat(hits as i64, k[r] as i64)
            })
            .sum();
        lhs == rhs
    })
}

fn fisher_search() -> Check {
    let start = Instant::now();
    with_ctx(SchemeSpec::Hamming { d: 4, q: 2 }, |ctx| {
        let support = ShellSupport::new(vec![2], 4).unwrap();
        let rep = design_spaces::design_search(ctx, &support, 2, Variant::P, 6, SearchMode::UniformPerShell)
            .map_err(|e| e.to_string())?;
        within(start, Duration::from_secs(60), "search")?;
        ensure(!rep.designs.is_empty(), || "no designs found".into())?;
        for found in &rep.designs {
            let y = &found.design;
            ensure(is_design_by_definition(ctx.scheme(), y, 2), || format!("{:?} is not a 2-design", y.entries()))?;
            ensure(y.len() >= 4, || format!("design of size {} below 4", y.len()))?;
        }
        Ok(format!("{} designs, minimum size {}", rep.designs.len(), rep.minimum_size().unwrap()))
    })
}

fn dual_polar() -> Check {
    let start = Instant::now();
    let mut notes = Vec::new();
    for d in [2usize, 3] {
        let spec = SchemeSpec::DualPolarC { d, q: 2 };
        let s = Scheme::build(spec).unwrap();
        let n = s.n_vertices() as u64;
        let c = s.intersection_numbers().c.clone().unwrap();
        ensure((0..=d).all(|i| c[i] == (1 << i) - 1), || format!("{spec}: c = {c:?}"))?;
        let checks = dual_polar_products::gate_suite(&s, 0).map_err(|e| e.to_string())?;
        for ch in &checks {
            ensure(ch.passed(), || format!("{spec}: {} failed {} of {}", ch.name, ch.failures, ch.cases))?;
        }
        let product = checks.iter().find(|c| c.name == "product_identity").unwrap();
        ensure(product.cases == n * n, || format!("{spec}: {} product checks", product.cases))?;
        let b = BoseMesnerData::primitive_idempotents(&s).unwrap();
        let ctx = dual_matrices(&s, &b, 0).unwrap();
        for support in ShellSupport::all_between(1, d - 1, d) {
            let got = design_spaces::hom_restricted_dim(&ctx, 1, &support);
            let want = window_sum(1, support.p(), |j| dual_polar_k(d, 2, j));
            ensure(got == want, || format!("{spec} r={support}: {got} != {want}"))?;
        }
        notes.push(format!("{} pairs", n * n));
    }
    within(start, Duration::from_secs(300), "dual polar checks")?;
    Ok(notes.join(", "))
}

fn characters() -> Check {
    let mut pairs = 0;
    for (d, q) in [(3, 2), (2, 3), (3, 3), (2, 4)] {
        let spec = SchemeSpec::Hamming { d, q };
        with_ctx(spec, |ctx| {
            let s = ctx.scheme();
            for row in cyclotomic::orthogonality_check(s).unwrap() {
                ensure(row.failures == 0 && row.mismatches == 0, || format!("{spec} {row:?}"))?;
                pairs += row.pairs;
            }
            // E_i f_z = 0 for i > j, with the full idempotent matrices
            let b = ctx.algebra();
            let es: Vec<_> = (0..=d).map(|i| b.idempotent(s, i)).collect();
            for z in 0..s.n_vertices() {
                let f = design_spaces::hom_vector(ctx, z).unwrap();
                for (i, e) in es.iter().enumerate().skip(s.relation(0, z) + 1) {
                    ensure(linalg::is_zero_vector(&e.mul_vec(&f).unwrap()), || format!("{spec}: E_{i} f_{z} != 0"))?;
                }
            }
            ensure(design_spaces::hom_inside_lower_l(ctx), || format!("{spec}: hom_inside_lower_l"))
        })?;
    }
    Ok(format!("{pairs} character pairs"))
}

fn doob() -> Check {
    with_ctx(SchemeSpec::Doob { n: 1, m: 0 }, |ctx| {
        let local = terwilliger::local_graph_analysis(ctx).map_err(|e| e.to_string())?;
        ensure(local.spectrum.iter().any(|&(ev, _)| ev == -2), || format!("spectrum {:?}", local.spectrum))?;
        ensure(
            local.components.len() == 1 && local.components[0].is_cycle() && local.components[0].vertices == 6,
            || format!("local graph {:?}", local.components),
        )?;
        ensure(local.local_eigenvalue_bound == int(-2), || format!("value {}", local.local_eigenvalue_bound))?;
        let dec = decompose_standard_module(ctx).map_err(|e| e.to_string())?;
        ensure(dec.modules.iter().any(|w| w.endpoint() == 1 && w.dual_endpoint() == 2), || "no (1,2) module".into())?;
        ensure(!design_spaces::hom_l_equality(ctx, 1).unwrap(), || "Hom = L at t = 1".into())?;
        Ok::<_, String>(())
    })?;
    for (d, q) in HOM_L_SCHEMES {
        with_ctx(SchemeSpec::Hamming { d, q }, |ctx| {
            ensure(design_spaces::hom_l_equality(ctx, 1).unwrap(), || format!("H({d},{q}): Hom != L at t = 1"))
        })?;
    }
    Ok("local graph C6, value -2, Hom != L".into())
}

fn ratio() -> Check {
    for d in 1..=5usize {
        for q in 2..=4usize {
            let spec = SchemeSpec::Hamming { d, q };
            with_ctx(spec, |ctx| {
                let rc = design_spaces::ratio_constancy(ctx).unwrap().ok_or_else(|| format!("{spec}: not constant"))?;
                ensure(rc.value == rat(-1, q as i64), || format!("{spec}: ratio {}", rc.value))?;
                // c_i = i on H(d,q)
                let alpha: usize = (1..=d).map(|i| i * hamming_k(d, q, i)).sum();
                ensure(rc.alpha == int(alpha as i64), || format!("{spec}: alpha {} != {alpha}", rc.alpha))
            })?;
        }
    }
    let value = with_ctx(SchemeSpec::Doob { n: 1, m: 0 }, |ctx| design_spaces::ratio_constancy(ctx).unwrap());
    let value = value.ok_or("Doob ratio not constant")?.value;
    ensure(value == rat(-1, 4), || format!("Doob ratio {value}"))?;
    Ok("constant -1/q on 15 Hamming schemes and -1/4 on Doob(1,0)".into())
}

fn modules() -> Check {
    let mut specs = hamming_sweep();
    specs.extend([
        SchemeSpec::Hamming { d: 6, q: 2 },
        SchemeSpec::Hamming { d: 2, q: 4 },
        SchemeSpec::DualPolarC { d: 2, q: 2 },
        SchemeSpec::DualPolarC { d: 3, q: 2 },
        SchemeSpec::Doob { n: 1, m: 0 },
        SchemeSpec::Johnson { v: 4, d: 2 },
        SchemeSpec::Johnson { v: 5, d: 2 },
    ]);
    let mut total = 0;
    for spec in &specs {
        with_ctx(*spec, |ctx| {
            let dec = decompose_standard_module(ctx).map_err(|e| e.to_string())?;
            let n = ctx.scheme().n_vertices();
            let d = ctx.classes();
            ensure(dec.total_dim() == n, || format!("{spec}: dims sum to {}", dec.total_dim()))?;
            ensure(dec.all_certified(), || format!("{spec}: not certified"))?;
            ensure(dec.pairwise_orthogonal(), || format!("{spec}: not orthogonal"))?;
            for w in &dec.modules {
                ensure(terwilliger::is_closed(w, ctx), || format!("{spec}: module not closed"))?;
                let (r, rs, delta) = (w.endpoint(), w.dual_endpoint(), w.diameter());
                match spec {
                    SchemeSpec::Hamming { q, .. } => {
                        ensure(r == rs, || format!("{spec}: rho {r} != rho* {rs}"))?;
                        if *q == 2 {
                            ensure(delta + 2 * rs == d, || format!("{spec}: delta {delta}, rho* {rs}"))?;
                        }
                    }
                    SchemeSpec::Johnson { .. } => ensure(r <= rs, || format!("{spec}: rho {r} > rho* {rs}"))?,
                    _ => {}
                }
            }
            total += dec.modules.len();
            Ok::<_, String>(())
        })?;
    }
    Ok(format!("{} schemes, {total} modules", specs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 hom restricted dimension = k window sum", hom_dimension_formula),
        ("2 L restricted dimension = m window sum", l_dimension_formula),
        ("3 Hom = L and variant verdicts agree", hom_equals_l),
        ("4 found 2-designs meet the Fisher bound", fisher_search),
        ("5 dual polar gates and products", dual_polar),
        ("6 characters orthogonal to geodesic indicators", characters),
        ("7 Doob local graph and Hom != L", doob),
        ("8 ratio constancy", ratio),
        ("9 T-module invariants", modules),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(note) => println!("PASS criterion {name}: {note} ({:.1?})", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
