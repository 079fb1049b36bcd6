use cliffft_core::transform::{
    cft_spectral, eigenvalue, gaussian_coeffs, indices_up_to, plancherel_batch, plancherel_spectral,
    eigen_relation_check, scaling_check, ChannelBatch, EigenIndex, Parity, PolyGaussian, QuadratureRule, QuadratureSetup,
    Sign, SpectralCoeffs,
};
use cliffft_core::uncertainty::{
    heisenberg, infimum_helper, infimum_objective, radial_recurrence_residual, scan_minimum, sum_rule_check,
};
use cliffft_core::{Error, Multivector};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Suite, VerifyArgs};
use crate::commands::resolve_nodes;
use crate::output::{Body, Failure, Outcome, EXIT_VERIFICATION};

pub const PLANCHEREL_SPECTRAL_TOL: f64 = 1e-12;
pub const PLANCHEREL_QUADRATURE_TOL: f64 = 1e-5;
pub const EIGEN_QUADRATURE_TOL: f64 = 1e-4;
pub const RECURRENCE_TOL: f64 = 1e-10;
pub const HEISENBERG_SLACK: f64 = 1e-6;
pub const EQUALITY_TOL: f64 = 1e-5;
pub const SCALING_TOL: f64 = 1e-6;
pub const INFIMUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Check {
    fn at_most(name: &str, measured: f64, tolerance: f64, details: Value) -> Self {
        Check {
            name: name.into(),
            passed: measured <= tolerance,
            measured,
            tolerance,
            details,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// A few basis functions with random complex weights.
pub fn random_coeffs(rng: &mut ChaCha8Rng, pool: &[EigenIndex], m: usize, terms: usize) -> Result<SpectralCoeffs, Error> {
    let picked: Vec<EigenIndex> = pool.choose_multiple(rng, terms.min(pool.len())).copied().collect();
    SpectralCoeffs::from_pairs(
        m,
        picked
            .into_iter()
            .map(|i| (i, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))),
    )
}

fn low_order(m: usize, max_order: usize) -> Result<Vec<EigenIndex>, Error> {
    Ok(indices_up_to(m, max_order, max_order)?
        .into_iter()
        .filter(|i| i.j + i.k <= max_order)
        .collect())
}

fn kernel_available(m: usize) -> bool {
    m >= 4
}

struct Ctx<'a> {
    args: &'a VerifyArgs,
    rng: ChaCha8Rng,
    setup: Option<QuadratureSetup>,
}

impl Ctx<'_> {
    fn setup(&mut self) -> Result<&QuadratureSetup, Error> {
        if self.setup.is_none() {
            let (n, t) = resolve_nodes(self.args.m, &self.args.quadrature);
            self.setup = Some(QuadratureSetup::new(self.args.m, n, t)?);
        }
        Ok(self.setup.as_ref().expect("setup"))
    }

    fn cases(&self, default: usize) -> usize {
        self.args.cases.unwrap_or(default)
    }
}

fn plancherel(ctx: &mut Ctx) -> Result<SuiteReport, Error> {
    let m = ctx.args.m;
    let pool = low_order(m, 3)?;
    let cases = ctx.cases(5);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let c = random_coeffs(&mut ctx.rng, &pool, m, 6)?;
        for sign in [Sign::Plus, Sign::Minus] {
            worst = worst.max(plancherel_spectral(&c, sign)?.relative_error);
        }
    }
    let mut checks = vec![Check::at_most("spectral", worst, PLANCHEREL_SPECTRAL_TOL, json!({ "cases": cases }))];
    let mut skipped = Vec::new();
    if kernel_available(m) {
        let small = low_order(m, ctx.args.max_order)?;
        let mut funcs = vec![PolyGaussian::gaussian(m)];
        for _ in 0..cases {
            funcs.push(PolyGaussian::from_coeffs(&random_coeffs(&mut ctx.rng, &small, m, 4)?)?);
        }
        let s = ctx.setup()?;
        let batch = ChannelBatch::new(&funcs, &s.source, &s.target_points(), &s.params)?;
        let rel: Vec<f64> = funcs
            .iter()
            .map(|f| Ok(plancherel_batch(&batch, &s.targets, f)?.relative_error))
            .collect::<Result<_, Error>>()?;
        checks.push(Check::at_most("quadrature_gaussian", rel[0], PLANCHEREL_QUADRATURE_TOL, Value::Null));
        let combos = rel[1..].iter().copied().fold(0.0, f64::max);
        checks.push(Check::at_most(
            "quadrature_combinations",
            combos,
            PLANCHEREL_QUADRATURE_TOL,
            json!({ "cases": cases, "max_order": ctx.args.max_order, "relative_errors": &rel[1..] }),
        ));
    } else {
        skipped.push("quadrature: the kernel series needs m >= 4".into());
    }
    Ok(finish(Suite::Plancherel, checks, skipped))
}

fn eigen(ctx: &mut Ctx) -> Result<SuiteReport, Error> {
    let m = ctx.args.m;
    let indices = low_order(m, ctx.args.max_order)?;
    let mut worst = 0.0f64;
    for idx in &indices {
        let unit = SpectralCoeffs::from_pairs(m, [(*idx, real(1.0))])?;
        for sign in [Sign::Plus, Sign::Minus] {
            worst = worst.max((cft_spectral(&unit, sign).get(idx) - eigenvalue(idx, m, sign)).norm());
        }
    }
    let mut checks = vec![Check::at_most("spectral", worst, 0.0, json!({ "indices": indices.len() }))];
    let mut skipped = Vec::new();
    if kernel_available(m) {
        let funcs: Vec<PolyGaussian> = indices.iter().map(|i| PolyGaussian::from_eigen(i, m)).collect::<Result<_, _>>()?;
        let s = ctx.setup()?;
        let batch = ChannelBatch::new(&funcs, &s.source, &s.target_points(), &s.params)?;
        let rows = eigen_relation_check(&batch, &s.targets, &indices, m)?;
        let (worst_idx, worst) = rows
            .iter()
            .map(|r| (r.idx, r.relative_error))
            .fold((indices[0], 0.0), |a, b| if b.1 > a.1 { b } else { a });
        checks.push(Check::at_most(
            "quadrature",
            worst,
            EIGEN_QUADRATURE_TOL,
            json!({ "indices": rows.len(), "worst_index": worst_idx.to_string(), "max_order": ctx.args.max_order }),
        ));
    } else {
        skipped.push("quadrature: the kernel series needs m >= 4".into());
    }
    Ok(finish(Suite::Eigen, checks, skipped))
}

fn recurrence(ctx: &mut Ctx) -> Result<SuiteReport, Error> {
    let m = ctx.args.m;
    let n = ctx.cases(100);
    let mut worst = 0.0f64;
    let mut identities = 0;
    for parity in [Parity::Even, Parity::Odd] {
        for k in 0..=2 {
            for j in 0..=3 {
                let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| ctx.rng.gen_range(-2.0..2.0)).collect()).collect();
                worst = worst.max(radial_recurrence_residual(EigenIndex::new(parity, j, k, 1), m, &pts)?);
                identities += 1;
            }
        }
    }
    let checks = vec![Check::at_most(
        "pointwise",
        worst,
        RECURRENCE_TOL,
        json!({ "identities": identities, "points_per_identity": n }),
    )];
    Ok(finish(Suite::Recurrence, checks, Vec::new()))
}

fn heisenberg_suite(ctx: &mut Ctx) -> Result<SuiteReport, Error> {
    let m = ctx.args.m;
    let pool = low_order(m, 3)?;
    let cases = ctx.cases(200);
    let (mut min_ratio, mut sum_rule) = (f64::INFINITY, 0.0f64);
    for _ in 0..cases {
        let terms = ctx.rng.gen_range(1..=6);
        let c = random_coeffs(&mut ctx.rng, &pool, m, terms)?;
        for sign in [Sign::Plus, Sign::Minus] {
            if let Some(r) = heisenberg(&c, sign)?.ratio {
                min_ratio = min_ratio.min(r);
            }
            let s = sum_rule_check(&c, sign)?;
            sum_rule = sum_rule.max(s.identity_error / s.rhs.abs().max(f64::MIN_POSITIVE));
        }
    }
    let mut equality = Vec::new();
    let mut worst_eq = 0.0f64;
    for p in [0.25, 0.5, 1.0, 2.0] {
        let r = heisenberg(&gaussian_coeffs(m, p, real(1.0), 1e-15)?, Sign::Minus)?.ratio.unwrap_or(f64::NAN);
        worst_eq = worst_eq.max((r - 1.0).abs());
        equality.push(json!({ "p": p, "ratio": r }));
    }
    let checks = vec![
        Check {
            name: "bound".into(),
            passed: min_ratio >= 1.0 - HEISENBERG_SLACK,
            measured: min_ratio,
            tolerance: 1.0 - HEISENBERG_SLACK,
            details: json!({ "cases": cases, "note": "measured is the smallest ratio; it must be at least the tolerance" }),
        },
        Check::at_most("equality_family", worst_eq, EQUALITY_TOL, json!(equality)),
        Check::at_most("sum_rule", sum_rule, 1e-10, Value::Null),
    ];
    Ok(finish(Suite::Heisenberg, checks, Vec::new()))
}

fn scaling(ctx: &mut Ctx) -> Result<SuiteReport, Error> {
    let m = ctx.args.m;
    if !kernel_available(m) {
        return Ok(finish(Suite::Scaling, Vec::new(), vec!["the kernel series needs m >= 4".into()]));
    }
    let s = ctx.setup()?.clone();
    // a coarse grid keeps the two extra kernel sweeps per input cheap
    let per_axis = if m >= 6 { 2 } else { 3 };
    let targets: Vec<Vec<f64>> = QuadratureRule::gauss_hermite(m, per_axis, 1.0)?.points().map(|p| p.to_vec()).collect();
    let psi = cliffft_core::transform::eigenfunction(EigenIndex::odd(1, 1, 1), m)?;
    let inputs: Vec<(&str, Box<dyn Fn(&[f64]) -> Multivector + Sync>)> = vec![
        (
            "gaussian",
            Box::new(move |x: &[f64]| Multivector::scalar(m, real((-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp()))),
        ),
        ("psi_odd_1_1_1", Box::new(move |x: &[f64]| psi.eval(x))),
    ];
    let mut checks = Vec::new();
    for (name, f) in &inputs {
        let r = scaling_check(&**f, 2.0, s.source.clone(), &targets, &s.params, SCALING_TOL)?;
        let best = r.deviation_plus_m.min(r.deviation_minus_m);
        checks.push(Check {
            name: (*name).into(),
            passed: r.resolved_exponent.is_some() && best <= SCALING_TOL,
            measured: best,
            tolerance: SCALING_TOL,
            details: serde_json::to_value(&r).unwrap_or(Value::Null),
        });
    }
    Ok(finish(Suite::Scaling, checks, Vec::new()))
}

fn infimum(ctx: &mut Ctx) -> Result<SuiteReport, Error> {
    let cases = ctx.cases(1000);
    let (mut closed, mut scan) = (0.0f64, 0.0f64);
    for _ in 0..cases {
        let a = 10f64.powf(ctx.rng.gen_range(-1.0..1.0));
        let b = 10f64.powf(ctx.rng.gen_range(-1.0..1.0));
        let r = infimum_helper(a, b)?;
        closed = closed.max((infimum_objective(a, b, r.t_star) - r.min_value).abs() / r.min_value);
        let (_, v) = scan_minimum(a, b, 40.0, 200);
        scan = scan.max((v - r.min_value).abs() / r.min_value);
    }
    let checks = vec![
        Check::at_most("closed_form", closed, 1e-12, json!({ "cases": cases })),
        Check::at_most("scan_agreement", scan, INFIMUM_TOL, json!({ "cases": cases })),
    ];
    Ok(finish(Suite::Infimum, checks, Vec::new()))
}

fn finish(suite: Suite, checks: Vec<Check>, skipped: Vec<String>) -> SuiteReport {
    SuiteReport {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
        skipped,
    }
}

pub fn run(a: &VerifyArgs, seed: u64) -> Result<Outcome, Failure> {
    let m = a.m;
    if m % 2 == 1 || !(2..=cliffft_core::clifford::MAX_DIM).contains(&m) {
        return Err(Failure::invalid(format!("m must be even and between 2 and 6, got {m}")));
    }
    let suites = match a.suite {
        Suite::All => vec![
            Suite::Plancherel,
            Suite::Eigen,
            Suite::Recurrence,
            Suite::Heisenberg,
            Suite::Scaling,
            Suite::Infimum,
        ],
        s => vec![s],
    };
    let mut ctx = Ctx {
        args: a,
        rng: ChaCha8Rng::seed_from_u64(seed),
        setup: None,
    };
    let mut reports = Vec::new();
    for s in suites {
        let r = match s {
            Suite::Plancherel => plancherel(&mut ctx),
            Suite::Eigen => eigen(&mut ctx),
            Suite::Recurrence => recurrence(&mut ctx),
            Suite::Heisenberg => heisenberg_suite(&mut ctx),
            Suite::Scaling => scaling(&mut ctx),
            Suite::Infimum => infimum(&mut ctx),
            Suite::All => unreachable!("expanded above"),
        }?;
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed);
    let value = json!({ "passed": passed, "suites": reports });
    Ok(Outcome {
        body: Body::Json(value),
        code: if passed { 0 } else { EXIT_VERIFICATION },
    })
}
