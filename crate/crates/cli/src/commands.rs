use std::sync::Arc;

use cliffft_core::clifford::blades_in_display_order;
use cliffft_core::function::FunctionSpec;
use cliffft_core::kernel::{kernel_minus, KernelParams, KernelValue};
use cliffft_core::special::{bessel_j, bessel_j_scaled, gegenbauer, gegenbauer_derivative, laguerre};
use cliffft_core::transform::{
    analyze, cft_minus_quadrature, cft_spectral, transform_params, ExpansionEvaluator, QuadratureRule,
    QuadratureSetup, SampledField, Sign, SpectralCoeffs, SOURCE_PRUNE,
};
use cliffft_core::uncertainty::{
    hardy_probe, heisenberg, heisenberg_field, heisenberg_quadrature, HardyMethod, HardyOptions,
};
use cliffft_core::{Error, Multivector, VectorM};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{csv_table, flatten, num, text_table, Body, Failure, Outcome, EXIT_TRUNCATION};

/// Source and target nodes per axis when none are given.
pub fn default_nodes(m: usize) -> (usize, usize) {
    match m {
        6 => (12, 4),
        _ => (24, 6),
    }
}

pub fn resolve_nodes(m: usize, q: &QuadratureOpts) -> (usize, usize) {
    let (n, t) = default_nodes(m);
    (q.nodes.unwrap_or(n), q.target_nodes.unwrap_or(t))
}

/// Accepts JSON, a bare kind such as `gaussian`, or `@path` to a JSON file.
pub fn parse_function(text: &str) -> Result<FunctionSpec, Failure> {
    let t = text.trim();
    let body = if let Some(path) = t.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("cannot read function spec {path}: {e}")))?
    } else if t.starts_with('{') {
        t.to_string()
    } else {
        json!({ "kind": t }).to_string()
    };
    FunctionSpec::parse(&body).map_err(|e| Failure::invalid(format!("bad function spec '{t}': {e}")))
}

fn apply_kernel_opts(mut p: KernelParams, k: &KernelOpts) -> Result<KernelParams, Error> {
    if let Some(n) = k.k_max {
        p = p.with_k_max(n)?;
    }
    if let Some(t) = k.tail_tol {
        p = p.with_tail_tol(t)?;
    }
    Ok(p)
}

fn vector(m: usize, comps: &[f64], what: &str) -> Result<VectorM, Failure> {
    if comps.len() != m {
        return Err(Failure::invalid(format!("--{what} has {} components, expected m = {m}", comps.len())));
    }
    if comps.iter().any(|c| !c.is_finite()) {
        return Err(Failure::invalid(format!("--{what} must be finite")));
    }
    Ok(VectorM::new(comps.to_vec())?)
}

fn require_even(m: usize) -> Result<(), Failure> {
    if m % 2 == 1 || m < 2 || m > cliffft_core::clifford::MAX_DIM {
        return Err(Failure::invalid(format!("m must be even and between 2 and {}, got {m}", cliffft_core::clifford::MAX_DIM)));
    }
    Ok(())
}

fn source_rule(m: usize, nodes: usize) -> Result<Arc<QuadratureRule>, Error> {
    Ok(Arc::new(QuadratureRule::gauss_hermite(m, nodes, 2f64.sqrt())?.pruned(SOURCE_PRUNE)?))
}

fn setup(m: usize, q: &QuadratureOpts, k: Option<&KernelOpts>) -> Result<QuadratureSetup, Error> {
    let (n, t) = resolve_nodes(m, q);
    let mut s = QuadratureSetup::new(m, n, t)?;
    if let Some(k) = k {
        s.params = apply_kernel_opts(s.params, k)?;
    }
    Ok(s)
}

fn quadrature_sign(sign: Sign) -> Result<(), Failure> {
    if sign == Sign::Plus {
        return Err(Failure::invalid("the quadrature route computes F_- only; use --method spectral for F_+"));
    }
    Ok(())
}

/// Expansion of the input: exact for analytic specs, projected for samples.
fn coefficients(spec: &FunctionSpec, m: usize, q: &QuadratureOpts) -> Result<SpectralCoeffs, Error> {
    match spec.coefficients(m)? {
        Some(c) => Ok(c),
        None => {
            let (n, _) = resolve_nodes(m, q);
            let field = spec.sample(m, source_rule(m, n)?)?;
            analyze(&field, q.max_j, q.max_k)
        }
    }
}

fn complex(c: num_complex::Complex64) -> Value {
    json!({ "re": c.re, "im": c.im })
}

fn kernel_json(k: &KernelValue, m: usize) -> Value {
    let mut biv = serde_json::Map::new();
    for b in blades_in_display_order(m).into_iter().filter(|b| b.grade() == 2) {
        biv.insert(b.name(), complex(*k.bivector_part.coeff(b)));
    }
    json!({
        "scalar": complex(k.scalar_part),
        "bivector": biv,
        "truncation_estimate": k.truncation_estimate,
        "terms": k.terms,
    })
}

pub fn kernel(a: &KernelArgs) -> Result<Outcome, Failure> {
    let p = apply_kernel_opts(KernelParams::new(a.m)?, &a.kernel)?;
    let x = vector(a.m, &a.x, "x")?;
    let y = vector(a.m, &a.y, "y")?;
    match kernel_minus(&x, &y, &p) {
        Ok(k) => {
            let mut v = kernel_json(&k, a.m);
            v["converged"] = json!(true);
            Ok(Outcome::ok(Body::Json(v)))
        }
        Err(Error::Truncation {
            partial: Some(k),
            estimate,
            tail_tol,
            ..
        }) => {
            eprintln!("warning: kernel series not converged (tail bound {estimate:e} > {tail_tol:e}); partial sum reported");
            let mut v = kernel_json(&k, a.m);
            v["converged"] = json!(false);
            Ok(Outcome {
                body: Body::Json(v),
                code: EXIT_TRUNCATION,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, Failure> {
    if steps == 0 || !from.is_finite() || !to.is_finite() {
        return Err(Failure::invalid("grid needs finite end points and at least one step"));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    Ok((0..steps).map(|i| from + (to - from) * i as f64 / (steps - 1) as f64).collect())
}

pub fn kernel_table(a: &KernelTableArgs) -> Result<Outcome, Failure> {
    let m = a.m;
    let p = apply_kernel_opts(KernelParams::new(m)?, &a.kernel)?;
    let x = vector(m, &a.x, "x")?;
    let d = vector(m, &a.dir, "dir")?;
    let ts = grid(a.t_min, a.t_max, a.steps)?;
    let bivectors: Vec<_> = blades_in_display_order(m).into_iter().filter(|b| b.grade() == 2).collect();
    let mut header = vec!["t".to_string()];
    header.extend((1..=m).map(|i| format!("x{i}")));
    header.extend((1..=m).map(|i| format!("y{i}")));
    header.extend(["scalar_re".to_string(), "scalar_im".to_string()]);
    for b in &bivectors {
        header.push(format!("{}_re", b.name()));
        header.push(format!("{}_im", b.name()));
    }
    header.extend(["truncation_estimate".to_string(), "converged".to_string()]);
    let evals: Vec<(VectorM, Result<KernelValue, Error>)> = ts
        .par_iter()
        .map(|t| {
            let y = d.scaled(*t);
            let k = kernel_minus(&x, &y, &p);
            (y, k)
        })
        .collect();
    let mut rows = Vec::with_capacity(ts.len());
    let mut code = 0;
    for (t, (y, k)) in ts.iter().zip(evals) {
        let (k, converged) = match k {
            Ok(k) => (k, true),
            Err(Error::Truncation { partial: Some(k), .. }) => {
                code = EXIT_TRUNCATION;
                (*k, false)
            }
            Err(e) => return Err(e.into()),
        };
        let mut row = vec![num(*t)];
        row.extend(x.comps().iter().map(|v| num(*v)));
        row.extend(y.comps().iter().map(|v| num(*v)));
        row.extend([num(k.scalar_part.re), num(k.scalar_part.im)]);
        for b in &bivectors {
            let c = k.bivector_part.coeff(*b);
            row.extend([num(c.re), num(c.im)]);
        }
        row.extend([num(k.truncation_estimate), converged.to_string()]);
        rows.push(row);
    }
    if code != 0 {
        eprintln!("warning: kernel series not converged on some rows; partial sums reported");
    }
    Ok(Outcome {
        body: Body::Csv(csv_table(&header, &rows)?),
        code,
    })
}

pub fn parse_targets(text: &str, m: usize) -> Result<Vec<Vec<f64>>, Failure> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pt| {
            let v: Vec<f64> = pt
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|e| Failure::invalid(format!("bad target component '{c}': {e}"))))
                .collect::<Result<_, _>>()?;
            Ok(vector(m, &v, "targets")?.comps().to_vec())
        })
        .collect()
}

fn multivector_columns(m: usize) -> Vec<String> {
    blades_in_display_order(m)
        .into_iter()
        .flat_map(|b| [format!("{}_re", b.name()), format!("{}_im", b.name())])
        .collect()
}

fn multivector_row(v: &Multivector) -> Vec<String> {
    blades_in_display_order(v.dim())
        .into_iter()
        .flat_map(|b| {
            let c = v.coeff(b);
            [num(c.re), num(c.im)]
        })
        .collect()
}

pub fn transform(a: &TransformArgs) -> Result<Outcome, Failure> {
    let m = a.m;
    require_even(m)?;
    let spec = parse_function(&a.function.function)?;
    spec.validate(m)?;
    let (_, tn) = resolve_nodes(m, &a.quadrature);
    let targets = match &a.targets {
        Some(t) => parse_targets(t, m)?,
        None => QuadratureRule::gauss_hermite(m, tn, 1.0)?.points().map(|p| p.to_vec()).collect(),
    };
    if targets.is_empty() {
        return Err(Failure::invalid("no target points"));
    }
    let values: Vec<Multivector> = match a.method {
        Method::Spectral => {
            let c = coefficients(&spec, m, &a.quadrature)?;
            let ev = ExpansionEvaluator::new(&cft_spectral(&c, a.function.sign))?;
            targets.par_iter().map(|y| ev.eval(y)).collect()
        }
        Method::Quadrature => {
            quadrature_sign(a.function.sign)?;
            let s = setup(m, &a.quadrature, Some(&a.kernel))?;
            let field = spec.sample(m, s.source.clone())?;
            let ys: Vec<VectorM> = targets.iter().map(|t| VectorM::new(t.clone())).collect::<Result<_, _>>()?;
            cft_minus_quadrature(&field, &ys, &s.params)?
        }
    };
    let mut header: Vec<String> = (1..=m).map(|i| format!("y{i}")).collect();
    header.extend(multivector_columns(m));
    let rows: Vec<Vec<String>> = targets
        .iter()
        .zip(&values)
        .map(|(y, v)| {
            let mut r: Vec<String> = y.iter().map(|c| num(*c)).collect();
            r.extend(multivector_row(v));
            r
        })
        .collect();
    Ok(Outcome::ok(Body::Csv(csv_table(&header, &rows)?)))
}

fn report_body(v: Value, format: Format) -> Body {
    match format {
        Format::Json => Body::Json(v),
        Format::Text => {
            let mut rows = Vec::new();
            flatten("", &v, &mut rows);
            Body::Text(text_table(&rows))
        }
    }
}

pub fn heisenberg_cmd(a: &HeisenbergArgs) -> Result<Outcome, Failure> {
    let m = a.m;
    require_even(m)?;
    let spec = parse_function(&a.function.function)?;
    spec.validate(m)?;
    let (report, extra) = match a.method {
        Method::Spectral => {
            let c = coefficients(&spec, m, &a.quadrature)?;
            (heisenberg(&c, a.function.sign)?, json!({"route": "spectral", "expansion_residual": c.residual_norm, "terms": c.coeffs.len()}))
        }
        Method::Quadrature => {
            quadrature_sign(a.function.sign)?;
            let s = setup(m, &a.quadrature, None)?;
            let r = match spec.pointwise(m)? {
                Some(f) => heisenberg_quadrature(&*f, &s)?,
                None => heisenberg_field(&spec.sample(m, s.source.clone())?, &s)?,
            };
            (r, json!({"route": "quadrature"}))
        }
    };
    let mut v = serde_json::to_value(report)?;
    v["function"] = json!(spec.label());
    v["bound_holds"] = json!(report.ratio.map(|r| r >= 1.0 - 1e-6));
    for (k, val) in extra.as_object().expect("object") {
        v[k] = val.clone();
    }
    Ok(Outcome::ok(report_body(v, a.format)))
}

pub fn hardy_cmd(a: &HardyArgs) -> Result<Outcome, Failure> {
    let m = a.m;
    require_even(m)?;
    let spec = parse_function(&a.function.function)?;
    spec.validate(m)?;
    let method = match a.method {
        Method::Quadrature => {
            quadrature_sign(a.function.sign)?;
            transform_params(m)?;
            HardyMethod::Quadrature
        }
        Method::Spectral => HardyMethod::Spectral {
            max_j: a.quadrature.max_j,
            max_k: a.quadrature.max_k,
        },
    };
    let opts = HardyOptions {
        fit_range: (a.fit_lo, a.fit_hi),
        freq_radius: a.freq_radius,
        method,
        ..HardyOptions::default()
    };
    let (n, _) = resolve_nodes(m, &a.quadrature);
    let field: SampledField = spec.sample(m, source_rule(m, n)?)?;
    let report = hardy_probe(&field, a.function.sign, &opts)?;
    let mut v = serde_json::to_value(report)?;
    v["function"] = json!(spec.label());
    Ok(Outcome::ok(report_body(v, a.format)))
}

pub fn specfn(a: &SpecfnArgs) -> Result<Outcome, Failure> {
    let (header, rows): (Vec<&str>, Vec<Vec<f64>>) = match &a.family {
        Family::Bessel { nu, grid: g } => (
            vec!["z", "j", "jt"],
            grid(g.from, g.to, g.steps)?
                .into_iter()
                .map(|z| Ok(vec![z, bessel_j(*nu, z)?, bessel_j_scaled(*nu, z)?]))
                .collect::<Result<_, Error>>()?,
        ),
        Family::Gegenbauer { lambda, k, grid: g } => (
            vec!["w", "c", "dc"],
            grid(g.from, g.to, g.steps)?
                .into_iter()
                .map(|w| Ok(vec![w, gegenbauer(*k, *lambda, w)?, gegenbauer_derivative(*k, *lambda, w)?]))
                .collect::<Result<_, Error>>()?,
        ),
        Family::Laguerre { alpha, j, grid: g } => (
            vec!["t", "l"],
            grid(g.from, g.to, g.steps)?
                .into_iter()
                .map(|t| Ok(vec![t, laguerre(*j, *alpha, t)?]))
                .collect::<Result<_, Error>>()?,
        ),
    };
    let header: Vec<String> = header.into_iter().map(String::from).collect();
    let rows: Vec<Vec<String>> = rows.into_iter().map(|r| r.into_iter().map(num).collect()).collect();
    Ok(Outcome::ok(Body::Csv(csv_table(&header, &rows)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_shorthands() {
        assert_eq!(parse_function("gaussian").unwrap(), FunctionSpec::Gaussian { p: 0.5, c: 1.0 });
        assert!(parse_function(r#"{"kind":"gaussian","p":2}"#).is_ok());
        assert_eq!(parse_function("nope").unwrap_err().code, 2);
        assert_eq!(parse_function("@/nonexistent.json").unwrap_err().code, 2);
    }

    #[test]
    fn target_lists() {
        let t = parse_targets("1,0;0,-2.5", 2).unwrap();
        assert_eq!(t, vec![vec![1.0, 0.0], vec![0.0, -2.5]]);
        assert!(parse_targets("1,0,0", 2).is_err());
        assert!(parse_targets("a,b", 2).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(grid(0.0, 1.0, 3).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(grid(2.0, 5.0, 1).unwrap(), vec![2.0]);
        assert!(grid(0.0, 1.0, 0).is_err());
    }
}
