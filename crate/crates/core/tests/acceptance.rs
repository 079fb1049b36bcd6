//! Acceptance suite: one line per criterion with the measured value, its
//! tolerance and the wall time. Exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use cliffft_core::clifford::{Blade, Multivector};
use cliffft_core::kernel::{kernel_minus, KernelParams};
use cliffft_core::poly::build_monogenic_basis;
use cliffft_core::transform::{
    cft_spectral, eigen_relation_check, eigenfunction, eigenvalue, gaussian_coeffs, indices_up_to, numeric_basis,
    plancherel_batch, plancherel_spectral, scaling_check, ChannelBatch, EigenIndex, Parity, PolyGaussian,
    QuadratureRule, QuadratureSetup, Sign, SpectralCoeffs,
};
use cliffft_core::uncertainty::{
    hardy_probe, heisenberg, infimum_helper, infimum_objective, radial_recurrence_residual, scan_minimum, HardyClass,
    HardyOptions,
};
use cliffft_core::{Result, VectorM};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    summary: String,
}

fn verdict(passed: bool, summary: String) -> Result<Verdict> {
    Ok(Verdict { passed, summary })
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_mv(r: &mut ChaCha8Rng, m: usize) -> Multivector {
    let coeffs = (0..1usize << m).map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
    Multivector::from_coeffs(m, coeffs).unwrap()
}

fn random_coeffs(r: &mut ChaCha8Rng, pool: &[EigenIndex], m: usize, terms: usize) -> SpectralCoeffs {
    let picked: Vec<EigenIndex> = pool.choose_multiple(r, terms).copied().collect();
    SpectralCoeffs::from_pairs(
        m,
        picked.into_iter().map(|i| (i, Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))),
    )
    .unwrap()
}

fn low_order(m: usize, max_order: usize) -> Vec<EigenIndex> {
    indices_up_to(m, max_order, max_order)
        .unwrap()
        .into_iter()
        .filter(|i| i.j + i.k <= max_order)
        .collect()
}

/// Quadrature transforms at m = 4 on the default rules, shared by the
/// fixed-point, eigenvalue and isometry criteria.
struct Shared {
    setup: QuadratureSetup,
    indices: Vec<EigenIndex>,
    batch: ChannelBatch,
    build_time: Duration,
}

static SHARED: OnceLock<Shared> = OnceLock::new();

fn shared() -> &'static Shared {
    SHARED.get_or_init(|| {
        let start = Instant::now();
        let setup = QuadratureSetup::default_for(4).unwrap();
        let indices = low_order(4, 3);
        let mut funcs = vec![PolyGaussian::gaussian(4)];
        funcs.extend(indices.iter().map(|i| PolyGaussian::from_eigen(i, 4).unwrap()));
        let batch = ChannelBatch::new(&funcs, &setup.source, &setup.target_points(), &setup.params).unwrap();
        Shared {
            setup,
            indices,
            batch,
            build_time: start.elapsed(),
        }
    })
}

fn algebra_axioms() -> Result<Verdict> {
    let mut exact = true;
    let mut checked = 0usize;
    for m in 1..=5 {
        let one = Multivector::one(m);
        for i in 1..=m {
            let ei = Multivector::generator(m, i);
            exact &= ei.geometric_product(&ei)? == one.scale(&c(-1.0));
            for j in 1..=m {
                if i != j {
                    let ej = Multivector::generator(m, j);
                    exact &= ei.geometric_product(&ej)? == ej.geometric_product(&ei)?.scale(&c(-1.0));
                }
            }
        }
        // every blade product against the ordered product of its generators
        for a in 0..(1usize << m) {
            for b in 0..(1usize << m) {
                let ba = Blade(a as u8);
                let bb = Blade(b as u8);
                let mut want = Multivector::one(m);
                for i in ba.indices().into_iter().chain(bb.indices()) {
                    want = want.geometric_product(&Multivector::generator(m, i))?;
                }
                let got = Multivector::blade(m, ba, c(1.0)).geometric_product(&Multivector::blade(m, bb, c(1.0)))?;
                exact &= got == want;
                checked += 1;
            }
        }
    }
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (a, b, d) = (random_mv(&mut r, 4), random_mv(&mut r, 4), random_mv(&mut r, 4));
        let lhs = a.geometric_product(&b)?.geometric_product(&d)?;
        let rhs = a.geometric_product(&b.geometric_product(&d)?)?;
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    verdict(
        exact && worst <= 1e-12,
        format!("squares/anticommutation/{checked} blade products exact: {exact}; associativity max error {worst:.2e} (tol 1e-12)"),
    )
}

fn monogenicity() -> Result<Verdict> {
    let mut count = 0;
    let mut all_zero = true;
    for m in [2, 4] {
        for k in 0..=3 {
            let basis = build_monogenic_basis(m, k)?;
            for p in basis.elements() {
                all_zero &= p.dirac().is_zero();
                count += 1;
            }
        }
    }
    verdict(all_zero, format!("{count} basis polynomials, Dirac image exactly zero: {all_zero}"))
}

fn kernel_scaling() -> Result<Verdict> {
    let p = KernelParams::new(4)?;
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x = VectorM::new((0..4).map(|_| r.gen_range(-1.5..1.5)).collect())?;
        let y = VectorM::new((0..4).map(|_| r.gen_range(-1.5..1.5)).collect())?;
        let s = r.gen_range(0.2..5.0);
        let a = kernel_minus(&x.scaled(s), &y, &p)?.to_multivector();
        let b = kernel_minus(&x, &y.scaled(s), &p)?.to_multivector();
        worst = worst.max(a.max_abs_diff(&b));
    }
    verdict(worst <= 1e-12, format!("K(cx, y) vs K(x, cy), 100 triples: max deviation {worst:.2e} (tol 1e-12)"))
}

fn gaussian_fixed_point() -> Result<Verdict> {
    let sh = shared();
    let g = PolyGaussian::gaussian(4);
    let mut worst = 0.0f64;
    let mut n = 0;
    for (t, y) in sh.batch.targets().iter().enumerate() {
        let r2: f64 = y.iter().map(|v| v * v).sum();
        if r2 > 9.0 {
            continue;
        }
        let want = Multivector::scalar(4, c((-0.5 * r2).exp()));
        worst = worst.max(sh.batch.transform_at(&g, t)?.max_abs_diff(&want));
        n += 1;
    }
    verdict(
        worst <= 1e-6,
        format!(
            "{} sources, {n} targets with |y| <= 3: max error {worst:.2e} (tol 1e-6); shared transform build {:.0} s",
            sh.setup.source.len(),
            sh.build_time.as_secs_f64()
        ),
    )
}

fn eigen_relations() -> Result<Verdict> {
    let sh = shared();
    let rows = eigen_relation_check(&sh.batch, &sh.setup.targets, &sh.indices, 4)?;
    let (mut worst, mut worst_idx) = (0.0f64, sh.indices[0]);
    for r in &rows {
        if r.relative_error > worst {
            worst = r.relative_error;
            worst_idx = r.idx;
        }
    }
    let mut spectral = rows.iter().map(|r| r.spectral_error).fold(0.0, f64::max);
    for idx in &sh.indices {
        let unit = SpectralCoeffs::from_pairs(4, [(*idx, c(1.0))])?;
        for sign in [Sign::Plus, Sign::Minus] {
            spectral = spectral.max((cft_spectral(&unit, sign).get(idx) - eigenvalue(idx, 4, sign)).norm());
        }
    }
    verdict(
        worst <= 1e-4 && spectral == 0.0,
        format!(
            "{} indices with j + k <= 3: max relative L2 error {worst:.2e} at {worst_idx} (tol 1e-4); spectral deviation {spectral:e} (tol 0)",
            rows.len()
        ),
    )
}

fn plancherel() -> Result<Verdict> {
    let sh = shared();
    let mut r = rng(6);
    let pool = low_order(4, 2);
    let mut funcs = vec![PolyGaussian::gaussian(4)];
    for _ in 0..5 {
        funcs.push(PolyGaussian::from_coeffs(&random_coeffs(&mut r, &pool, 4, 4))?);
    }
    let mut quad = 0.0f64;
    for f in &funcs {
        quad = quad.max(plancherel_batch(&sh.batch, &sh.setup.targets, f)?.relative_error);
    }
    let spool = low_order(4, 3);
    let mut spectral = 0.0f64;
    for _ in 0..20 {
        let f = random_coeffs(&mut r, &spool, 4, 6);
        for sign in [Sign::Plus, Sign::Minus] {
            spectral = spectral.max(plancherel_spectral(&f, sign)?.relative_error);
        }
    }
    verdict(
        quad <= 1e-5 && spectral <= 1e-14,
        format!("quadrature (Gaussian + 5 combinations, j + k <= 2): max relative error {quad:.2e} (tol 1e-5); spectral {spectral:.2e} (tol 1e-14)"),
    )
}

fn recurrences() -> Result<Verdict> {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    let mut identities = 0;
    for m in [2, 4] {
        for k in 0..=2 {
            let last = numeric_basis(m, k)?.len();
            for parity in [Parity::Even, Parity::Odd] {
                for j in 0..=3 {
                    for l in [1, last] {
                        let pts: Vec<Vec<f64>> = (0..100).map(|_| (0..m).map(|_| r.gen_range(-2.0..2.0)).collect()).collect();
                        worst = worst.max(radial_recurrence_residual(EigenIndex::new(parity, j, k, l), m, &pts)?);
                        identities += 1;
                    }
                }
            }
        }
    }
    verdict(
        worst <= 1e-10,
        format!("{identities} identities x 100 points: max residual {worst:.2e} (tol 1e-10)"),
    )
}

fn heisenberg_bound() -> Result<Verdict> {
    let mut r = rng(8);
    let mut min_ratio = f64::INFINITY;
    for m in [2, 4] {
        let pool = low_order(m, 3);
        for _ in 0..200 {
            let terms = r.gen_range(1..=6);
            let f = random_coeffs(&mut r, &pool, m, terms);
            for sign in [Sign::Plus, Sign::Minus] {
                min_ratio = min_ratio.min(heisenberg(&f, sign)?.ratio.expect("nonzero"));
            }
        }
    }
    let mut eq = 0.0f64;
    for m in [2, 4] {
        for p in [0.25, 0.5, 1.0, 2.0] {
            let f = gaussian_coeffs(m, p, c(1.0), 1e-15)?;
            eq = eq.max((heisenberg(&f, Sign::Minus)?.ratio.expect("nonzero") - 1.0).abs());
        }
    }
    verdict(
        min_ratio >= 1.0 - 1e-6 && eq <= 1e-5,
        format!("200 random functions per m: min ratio {min_ratio:.6} (tol >= 1 - 1e-6); Gaussian family max |ratio - 1| {eq:.2e} (tol 1e-5)"),
    )
}

fn infimum() -> Result<Verdict> {
    let mut r = rng(9);
    let (mut closed, mut scan) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let a = 10f64.powf(r.gen_range(-1.0..1.0));
        let b = 10f64.powf(r.gen_range(-1.0..1.0));
        let rep = infimum_helper(a, b)?;
        closed = closed.max((rep.min_value - 2.0 * a * b).abs().max((infimum_objective(a, b, rep.t_star) - 2.0 * a * b).abs()) / (a * b));
        let (_, v) = scan_minimum(a, b, 40.0, 200);
        scan = scan.max((v - rep.min_value).abs() / rep.min_value);
    }
    verdict(
        closed <= 1e-12 && scan <= 1e-9,
        format!("1000 pairs: closed form vs 2ab {closed:.2e} (tol 1e-12); scan agreement {scan:.2e} (tol 1e-9)"),
    )
}

fn hardy() -> Result<Verdict> {
    let setup = QuadratureSetup::default_for(4)?;
    let opts = HardyOptions::default();
    let probe = |f: &(dyn Fn(&[f64]) -> Multivector + Sync)| -> Result<cliffft_core::uncertainty::HardyReport> {
        let field = cliffft_core::transform::SampledField::from_fn(setup.source.clone(), "f", f)?;
        hardy_probe(&field, Sign::Minus, &opts)
    };
    let r2 = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    let g = probe(&|x: &[f64]| Multivector::scalar(4, c((-0.5 * r2(x)).exp())))?;
    let g1 = probe(&|x: &[f64]| Multivector::scalar(4, c((-r2(x)).exp())))?;
    let mut others = Vec::new();
    for idx in [EigenIndex::even(1, 1, 1), EigenIndex::odd(1, 0, 1), EigenIndex::even(0, 2, 5)] {
        let psi = eigenfunction(idx, 4)?;
        others.push((idx, probe(&|x: &[f64]| psi.eval(x))?));
    }
    let prefactor = (g.c_fit - 1.0).abs().max((g.c_fit_freq - 1.0).abs()).max((g.c_fit - g.c_fit_freq).abs());
    let critical = g.classification == HardyClass::Critical && (g.pq - 0.25).abs() <= 1e-3 && prefactor <= 1e-3;
    let critical1 = g1.classification == HardyClass::Critical && (g1.pq - 0.25).abs() <= 1e-3;
    let psi211 = others[0].1.classification == HardyClass::Subcritical;
    let no_super = std::iter::once(&g)
        .chain([&g1])
        .chain(others.iter().map(|o| &o.1))
        .all(|r| r.classification != HardyClass::Supercritical);
    let list: Vec<String> = others
        .iter()
        .map(|(i, r)| format!("{i}: pq {:.4} +- {:.3} {:?}", r.pq, r.band, r.classification))
        .collect();
    verdict(
        critical && critical1 && psi211 && no_super,
        format!(
            "exp(-|x|^2/2): pq {:.6} {:?}, prefactor deviation {prefactor:.1e} (tol 1e-3); exp(-|x|^2): pq {:.6} {:?}; {}; none supercritical: {no_super}",
            g.pq,
            g.classification,
            g1.pq,
            g1.classification,
            list.join("; ")
        ),
    )
}

fn scaling_law() -> Result<Verdict> {
    let setup = QuadratureSetup::default_for(4)?;
    let targets: Vec<Vec<f64>> = QuadratureRule::gauss_hermite(4, 3, 1.0)?.points().map(|p| p.to_vec()).collect();
    let psi = Arc::new(eigenfunction(EigenIndex::even(1, 1, 1), 4)?);
    let inputs: Vec<(&str, Box<dyn Fn(&[f64]) -> Multivector + Sync>)> = vec![
        ("Gaussian", Box::new(|x: &[f64]| Multivector::scalar(4, c((-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp())))),
        ("psi_(even,1,1,1)", Box::new(move |x: &[f64]| psi.eval(x))),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, f) in &inputs {
        let r = scaling_check(&**f, 2.0, setup.source.clone(), &targets, &setup.params, 1e-6)?;
        let resolved = match r.resolved_exponent {
            Some(e) if e == -4 => r.deviation_minus_m <= 1e-6,
            Some(_) => r.deviation_plus_m <= 1e-6,
            None => false,
        };
        ok &= resolved;
        parts.push(format!(
            "{name}: c^-m deviation {:.2e}, c^+m deviation {:.2e}, resolved exponent {:?}",
            r.deviation_minus_m, r.deviation_plus_m, r.resolved_exponent
        ));
    }
    verdict(ok, format!("c = 2, {} targets: {} (tol 1e-6)", targets.len(), parts.join("; ")))
}

type Criterion = (u32, &'static str, Option<u64>, fn() -> Result<Verdict>);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "algebra axioms", Some(5), algebra_axioms),
        (2, "monogenicity", Some(10), monogenicity),
        (3, "kernel scaling", Some(10), kernel_scaling),
        (4, "Gaussian fixed point", Some(300), gaussian_fixed_point),
        (5, "eigenvalue relations", Some(600), eigen_relations),
        (6, "Plancherel", None, plancherel),
        (7, "recurrences", None, recurrences),
        (8, "Heisenberg", Some(60), heisenberg_bound),
        (9, "infimum lemma", None, infimum),
        (10, "Hardy probe", None, hardy),
        (11, "scaling law", None, scaling_law),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let secs = start.elapsed().as_secs_f64();
        let timing = match limit {
            Some(l) => format!("{secs:.1} s (limit {l} s)"),
            None => format!("{secs:.1} s"),
        };
        let in_time = limit.map_or(true, |l| secs <= l as f64);
        let (passed, summary) = match outcome {
            Ok(Ok(v)) => (v.passed && in_time, v.summary),
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".to_string()),
        };
        if !passed {
            failed += 1;
        }
        println!("{} criterion {n:>2} {name}: {summary}; {timing}", if passed { "PASS" } else { "FAIL" });
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
