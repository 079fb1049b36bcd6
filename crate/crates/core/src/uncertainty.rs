//! Heisenberg-type inequality, its equality family, the infimum lemma used in
//! its proof, and a Gaussian-decay probe for Hardy's trichotomy.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{Multivector, VectorM};
use crate::error::{Error, Result};
use crate::transform::{
    analyze, cft_minus_quadrature, cft_spectral, closed_form_norm_sq, eigenfunction, radius_classes,
    transform_params, EigenIndex, ExpansionEvaluator, QuadratureRule, QuadratureSetup, SampledField,
    Sign, SpectralCoeffs,
};

/// `var_space * var_freq` against `m^2/4 ||f||^4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergReport {
    pub m: usize,
    /// `int |x|^2 |f(x)|^2 dx`
    pub var_space: f64,
    /// `int |y|^2 |F f(y)|^2 dy`
    pub var_freq: f64,
    /// `(int |f|^2)^2`
    pub norm4: f64,
    pub product: f64,
    pub bound: f64,
    /// `product / bound`; absent for the zero function.
    pub ratio: Option<f64>,
    pub degenerate: bool,
}

impl HeisenbergReport {
    pub fn from_parts(m: usize, var_space: f64, var_freq: f64, norm_sq: f64) -> Self {
        let norm4 = norm_sq * norm_sq;
        let product = var_space * var_freq;
        let bound = (m * m) as f64 / 4.0 * norm4;
        let degenerate = !(bound > 0.0);
        HeisenbergReport {
            m,
            var_space,
            var_freq,
            norm4,
            product,
            bound,
            ratio: (!degenerate).then(|| product / bound),
            degenerate,
        }
    }
}

/// Coefficients of `|x|^2 f`.
///
/// On each track `(parity, k, l)` multiplication by `|x|^2` is tridiagonal in
/// `j`: `r^2 psi_j = -(j+1) psi_{j+1} + (2j + alpha + 1) psi_j - (j + alpha) psi_{j-1}`
/// with `alpha` the Laguerre parameter of the track.
pub fn apply_radial_square(c: &SpectralCoeffs) -> SpectralCoeffs {
    let mut out: BTreeMap<EigenIndex, Complex64> = BTreeMap::new();
    for (idx, a) in &c.coeffs {
        let j = idx.j as f64;
        let alpha = idx.alpha(c.m);
        let mut push = |jj: usize, v: Complex64| {
            *out.entry(EigenIndex { j: jj, ..*idx }).or_default() += v;
        };
        push(idx.j + 1, a * -(j + 1.0));
        push(idx.j, a * (2.0 * j + alpha + 1.0));
        if idx.j > 0 {
            push(idx.j - 1, a * -(j + alpha));
        }
    }
    SpectralCoeffs {
        m: c.m,
        coeffs: out,
        residual_norm: 0.0,
    }
}

/// Largest pointwise deviation between `|x|^2 psi_idx(x)` and the three-term
/// combination given by [`apply_radial_square`], over `points`.
pub fn radial_recurrence_residual(idx: EigenIndex, m: usize, points: &[Vec<f64>]) -> Result<f64> {
    let unit = SpectralCoeffs::from_pairs(m, [(idx, Complex64::new(1.0, 0.0))])?;
    let terms: Vec<(Complex64, crate::transform::Eigenfunction)> = apply_radial_square(&unit)
        .coeffs
        .into_iter()
        .map(|(i, b)| Ok((b, eigenfunction(i, m)?)))
        .collect::<Result<_>>()?;
    let psi = eigenfunction(idx, m)?;
    let mut worst = 0.0f64;
    for x in points {
        if x.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: x.len() });
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let lhs = psi.eval(x).scale(&Complex64::new(r2, 0.0));
        let mut rhs = Multivector::zero(m);
        for (b, e) in &terms {
            rhs = rhs.checked_add(&e.eval(x).scale(b))?;
        }
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(worst)
}

/// `<f, g>` for two expansions, using orthogonality of the basis.
fn pairing(f: &SpectralCoeffs, g: &SpectralCoeffs) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (idx, a) in &f.coeffs {
        if let Some(b) = g.coeffs.get(idx) {
            total += a.conj() * b * closed_form_norm_sq(idx, f.m)?;
        }
    }
    Ok(total)
}

/// `int |x|^2 |f(x)|^2 dx` in coefficient space.
pub fn radial_second_moment(c: &SpectralCoeffs) -> Result<f64> {
    Ok(pairing(c, &apply_radial_square(c))?.re)
}

/// Coefficient-space route: both weighted norms come from the tridiagonal
/// action, the frequency one after multiplying by the eigenvalues.
pub fn heisenberg(c: &SpectralCoeffs, sign: Sign) -> Result<HeisenbergReport> {
    let var_space = radial_second_moment(c)?;
    let var_freq = radial_second_moment(&cft_spectral(c, sign))?;
    Ok(HeisenbergReport::from_parts(c.m, var_space, var_freq, c.norm_sq()?))
}

/// Direct route from pointwise values of `f` and of its transform on one rule.
pub fn heisenberg_pointwise(
    f: &(dyn Fn(&[f64]) -> Multivector + Sync),
    transform: &(dyn Fn(&[f64]) -> Multivector + Sync),
    rule: &QuadratureRule,
) -> HeisenbergReport {
    let (mut vs, mut vf, mut n) = (0.0, 0.0, 0.0);
    for (x, w) in rule.points().zip(rule.weights()) {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let fx = f(x).norm_sq();
        vs += w * r2 * fx;
        vf += w * r2 * transform(x).norm_sq();
        n += w * fx;
    }
    HeisenbergReport::from_parts(rule.dim(), vs, vf, n)
}

/// Quadrature route for `F_-`: the transform is computed by the kernel at the
/// target nodes, and all three integrals use the target rule.
pub fn heisenberg_quadrature(f: &(dyn Fn(&[f64]) -> Multivector + Sync), setup: &QuadratureSetup) -> Result<HeisenbergReport> {
    let field = SampledField::from_fn(setup.source.clone(), "f", f)?;
    let targets: Vec<VectorM> = setup
        .targets
        .points()
        .map(|p| VectorM::new(p.to_vec()))
        .collect::<Result<_>>()?;
    let ft = cft_minus_quadrature(&field, &targets, &setup.params)?;
    let (mut vs, mut vf, mut n) = (0.0, 0.0, 0.0);
    for ((y, w), fy) in setup.targets.points().zip(setup.targets.weights()).zip(&ft) {
        let r2: f64 = y.iter().map(|v| v * v).sum();
        let fx = f(y).norm_sq();
        vs += w * r2 * fx;
        vf += w * r2 * fy.norm_sq();
        n += w * fx;
    }
    Ok(HeisenbergReport::from_parts(setup.targets.dim(), vs, vf, n))
}

/// Quadrature route for a sampled field: the space-side integrals use the
/// field's own rule and the transform is taken at the target nodes.
pub fn heisenberg_field(f: &SampledField, setup: &QuadratureSetup) -> Result<HeisenbergReport> {
    let rule = f.rule();
    let (mut vs, mut n) = (0.0, 0.0);
    for ((x, w), v) in rule.points().zip(rule.weights()).zip(f.values()) {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        vs += w * r2 * v.norm_sq();
        n += w * v.norm_sq();
    }
    let targets: Vec<VectorM> = setup
        .targets
        .points()
        .map(|p| VectorM::new(p.to_vec()))
        .collect::<Result<_>>()?;
    let ft = cft_minus_quadrature(f, &targets, &setup.params)?;
    let vf: f64 = setup
        .targets
        .points()
        .zip(setup.targets.weights())
        .zip(&ft)
        .map(|((y, w), v)| w * y.iter().map(|c| c * c).sum::<f64>() * v.norm_sq())
        .sum();
    Ok(HeisenbergReport::from_parts(rule.dim(), vs, vf, n))
}

/// Both sides of `|| |x| f ||^2 + || |y| F f ||^2 = 2 sum |a|^2 (m/2 + k + n) ||psi||^2`
/// and the lower bound `m ||f||^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumRuleReport {
    pub lhs: f64,
    pub rhs: f64,
    pub lower_bound: f64,
    pub identity_error: f64,
    pub chain_holds: bool,
}

pub fn sum_rule_check(c: &SpectralCoeffs, sign: Sign) -> Result<SumRuleReport> {
    let lhs = radial_second_moment(c)? + radial_second_moment(&cft_spectral(c, sign))?;
    let half_m = c.m as f64 / 2.0;
    let mut rhs = 0.0;
    for (idx, a) in &c.coeffs {
        rhs += 2.0 * a.norm_sqr() * (half_m + (idx.k + idx.n()) as f64) * closed_form_norm_sq(idx, c.m)?;
    }
    let lower_bound = c.m as f64 * c.norm_sq()?;
    let identity_error = (lhs - rhs).abs();
    Ok(SumRuleReport {
        lhs,
        rhs,
        lower_bound,
        identity_error,
        chain_holds: lhs + 1e-12 * lhs.abs().max(1.0) >= lower_bound,
    })
}

/// Minimizer of `h(t) = (a/t)^2 + b^2 t^2` over `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfimumReport {
    pub t_star: f64,
    pub min_value: f64,
}

pub fn infimum_objective(a: f64, b: f64, t: f64) -> f64 {
    (a / t).powi(2) + (b * t).powi(2)
}

/// `t* = sqrt(a/b)` and `h(t*) = 2ab`.
pub fn infimum_helper(a: f64, b: f64) -> Result<InfimumReport> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("a and b must be positive, got a = {a}, b = {b}")));
    }
    Ok(InfimumReport {
        t_star: (a / b).sqrt(),
        min_value: 2.0 * a * b,
    })
}

/// Brute-force minimum of `h` on `(0, t_max]`: a uniform scan, then repeated
/// finer scans around the best node. Returns `(t, h(t))`.
pub fn scan_minimum(a: f64, b: f64, t_max: f64, points: usize) -> (f64, f64) {
    let points = points.max(3);
    let (mut lo, mut hi) = (0.0, t_max);
    let mut best = (t_max, infimum_objective(a, b, t_max));
    for _ in 0..12 {
        let step = (hi - lo) / points as f64;
        for i in 1..=points {
            let t = lo + step * i as f64;
            let v = infimum_objective(a, b, t);
            if v < best.1 {
                best = (t, v);
            }
        }
        lo = (best.0 - 2.0 * step).max(0.0);
        hi = (best.0 + 2.0 * step).min(t_max);
    }
    best
}

/// Outcome of comparing the fitted `pq` with `1/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HardyClass {
    /// `pq > 1/4`: only the zero function decays this fast on both sides.
    Supercritical,
    /// `pq = 1/4`: Gaussian.
    Critical,
    /// `pq < 1/4`.
    Subcritical,
    /// The confidence band straddles `1/4`.
    Inconclusive,
    /// A fitted rate is not positive, so the input shows no Gaussian decay on the annulus.
    NoDecay,
    /// The function vanishes on the annulus.
    Degenerate,
}

/// Which transform values the probe fits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HardyMethod {
    /// Kernel quadrature (`F_-` only).
    Quadrature,
    /// Projection onto the basis with the given ranges.
    Spectral { max_j: usize, max_k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyOptions {
    /// Annulus as fractions of the largest sample radius.
    pub fit_range: (f64, f64),
    /// Frequency samples lie on rays out to this radius.
    pub freq_radius: f64,
    pub freq_steps: usize,
    /// `|pq - 1/4|` (and twice its standard error) below this counts as critical.
    pub critical_tol: f64,
    pub method: HardyMethod,
}

impl Default for HardyOptions {
    fn default() -> Self {
        HardyOptions {
            fit_range: (0.5, 0.9),
            freq_radius: 4.5,
            freq_steps: 36,
            critical_tol: 1e-3,
            method: HardyMethod::Quadrature,
        }
    }
}

/// Least-squares fit of `log |g| = log A - rate r^2` to an envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub rate: f64,
    pub rate_sigma: f64,
    pub prefactor: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyReport {
    pub p_fit: f64,
    pub q_fit: f64,
    /// Prefactor of the spatial bound `|f| <= C e^{-p r^2}`.
    pub c_fit: f64,
    /// Prefactor of the frequency bound.
    pub c_fit_freq: f64,
    pub pq: f64,
    /// Two standard errors of `pq` from the regression residuals.
    pub band: f64,
    pub classification: HardyClass,
    pub degenerate: bool,
    pub space: Option<DecayFit>,
    pub freq: Option<DecayFit>,
}

/// Envelope `max log|g|` per radius, fitted on `[lo, hi]`.
fn fit_envelope(samples: &[(f64, f64)], lo: f64, hi: f64) -> Option<DecayFit> {
    // samples: (radius, |g|)
    let mut env: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    for &(r, g) in samples {
        if r < lo || r > hi || !(g > 0.0) || !g.is_finite() {
            continue;
        }
        let e = env.entry(r.to_bits()).or_insert((r, f64::NEG_INFINITY));
        e.1 = e.1.max(g.ln());
    }
    let pts: Vec<(f64, f64)> = env.values().map(|(r, l)| (-r * r, *l)).collect();
    let n = pts.len();
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let ux = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let uy = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - ux).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - ux) * (p.1 - uy)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = uy - slope * ux;
    let ssr: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Some(DecayFit {
        rate: slope,
        rate_sigma: (ssr / (nf - 2.0) / sxx).sqrt(),
        prefactor: intercept.exp(),
        r_min: lo,
        r_max: hi,
        points: n,
    })
}

/// Fixed rays for the frequency-side envelope.
fn probe_directions(m: usize) -> Vec<Vec<f64>> {
    let unit = |v: Vec<f64>| {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / n).collect::<Vec<f64>>()
    };
    let mut dirs = vec![unit((0..m).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect())];
    dirs.push(unit((0..m).map(|i| if i < 2 { 1.0 } else { 0.0 }).collect()));
    dirs.push(unit(vec![1.0; m]));
    dirs.push(unit((0..m).map(|i| (i as f64 + 1.0) * if i % 2 == 0 { 1.0 } else { -1.0 }).collect()));
    dirs.push(unit((0..m).map(|i| if i + 1 == m { 1.0 } else { 0.0 }).collect()));
    dirs
}

/// Fits joint Gaussian decay rates of `f` (from its samples) and of its
/// transform (on rays out to `freq_radius`), then places `pq` relative to `1/4`.
pub fn hardy_probe(f: &SampledField, sign: Sign, opts: &HardyOptions) -> Result<HardyReport> {
    let m = f.dim();
    let (lo_frac, hi_frac) = opts.fit_range;
    if !(0.0 <= lo_frac && lo_frac < hi_frac && hi_frac <= 1.0) {
        return Err(Error::InvalidArgument(format!("fit range {lo_frac}..{hi_frac} is not inside [0, 1]")));
    }
    let rule = f.rule();
    let (radii, classes) = radius_classes(rule.points());
    let space: Vec<(f64, f64)> = f
        .values()
        .iter()
        .zip(&classes)
        .map(|(v, c)| (radii[*c as usize], v.clifford_norm()))
        .collect();
    let support = space.iter().filter(|s| s.1 > 0.0).map(|s| s.0).fold(0.0, f64::max);

    let steps = opts.freq_steps.max(3);
    // every ray shares the same radii, so the envelope groups them exactly
    let mut targets = Vec::new();
    let mut rhos = Vec::new();
    for d in probe_directions(m) {
        for i in 1..=steps {
            let rho = opts.freq_radius * i as f64 / steps as f64;
            targets.push(d.iter().map(|v| v * rho).collect::<Vec<f64>>());
            rhos.push(rho);
        }
    }
    let ft: Vec<Multivector> = match (opts.method, sign) {
        (HardyMethod::Quadrature, Sign::Minus) => {
            let y: Vec<VectorM> = targets.iter().map(|t| VectorM::new(t.clone())).collect::<Result<_>>()?;
            cft_minus_quadrature(f, &y, &transform_params(m)?)?
        }
        (HardyMethod::Quadrature, Sign::Plus) => {
            return Err(Error::InvalidArgument("the quadrature route implements F_- only; use the spectral method".into()))
        }
        (HardyMethod::Spectral { max_j, max_k }, s) => {
            let ev = ExpansionEvaluator::new(&cft_spectral(&analyze(f, max_j, max_k)?, s))?;
            targets.iter().map(|t| ev.eval(t)).collect()
        }
    };
    let freq: Vec<(f64, f64)> = rhos.iter().zip(&ft).map(|(r, v)| (*r, v.clifford_norm())).collect();
    let freq_support = freq.iter().filter(|s| s.1 > 0.0).map(|s| s.0).fold(0.0, f64::max);

    let sf = fit_envelope(&space, lo_frac * support, hi_frac * support);
    let qf = fit_envelope(&freq, lo_frac * freq_support, hi_frac * freq_support);
    let (sf, qf) = match (sf, qf) {
        (Some(a), Some(b)) => (a, b),
        (a, b) => {
            return Ok(HardyReport {
                p_fit: 0.0,
                q_fit: 0.0,
                c_fit: 0.0,
                c_fit_freq: 0.0,
                pq: 0.0,
                band: 0.0,
                classification: HardyClass::Degenerate,
                degenerate: true,
                space: a,
                freq: b,
            })
        }
    };
    let (p, q) = (sf.rate, qf.rate);
    let pq = p * q;
    let band = 2.0 * ((q * sf.rate_sigma).powi(2) + (p * qf.rate_sigma).powi(2)).sqrt();
    let tol = opts.critical_tol;
    let classification = if !(p > 0.0 && q > 0.0) {
        HardyClass::NoDecay
    } else if (pq - 0.25).abs() <= tol && band <= tol {
        HardyClass::Critical
    } else if pq + band < 0.25 {
        HardyClass::Subcritical
    } else if pq - band > 0.25 {
        HardyClass::Supercritical
    } else {
        HardyClass::Inconclusive
    };
    Ok(HardyReport {
        p_fit: p,
        q_fit: q,
        c_fit: sf.prefactor,
        c_fit_freq: qf.prefactor,
        pq,
        band,
        classification,
        degenerate: false,
        space: Some(sf),
        freq: Some(qf),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::gaussian_coeffs;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn recurrence_residual_is_roundoff() {
        let pts = vec![vec![0.3, -1.1, 0.7, 0.2], vec![1.5, 0.4, -0.9, -1.3]];
        for idx in [EigenIndex::even(0, 1, 2), EigenIndex::odd(3, 2, 7)] {
            assert!(radial_recurrence_residual(idx, 4, &pts).unwrap() < 1e-10, "{idx}");
        }
        assert!(radial_recurrence_residual(EigenIndex::even(0, 0, 1), 4, &[vec![0.0; 2]]).is_err());
    }

    #[test]
    fn gaussian_equality_case() {
        for m in [2, 4, 6] {
            let g = SpectralCoeffs::from_pairs(m, [(EigenIndex::even(0, 0, 1), c(1.0))]).unwrap();
            let r = heisenberg(&g, Sign::Minus).unwrap();
            assert!((r.ratio.unwrap() - 1.0).abs() < 1e-12, "{r:?}");
            assert!((r.product - r.bound).abs() <= 1e-6 * r.bound);
        }
        let g = gaussian_coeffs(4, 0.8, c(2.5), 1e-15).unwrap();
        for s in [Sign::Plus, Sign::Minus] {
            assert!((heisenberg(&g, s).unwrap().ratio.unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn psi_211_is_strictly_above_bound() {
        let f = SpectralCoeffs::from_pairs(4, [(EigenIndex::even(1, 1, 1), c(1.0))]).unwrap();
        let r = heisenberg(&f, Sign::Minus).unwrap();
        // every basis function has var_space = var_freq = (m/2 + k + n) ||psi||^2
        let n2 = closed_form_norm_sq(&EigenIndex::even(1, 1, 1), 4).unwrap();
        assert!((r.var_space - 5.0 * n2).abs() < 1e-12 * r.var_space);
        assert!((r.ratio.unwrap() - 25.0 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn zero_function_is_degenerate() {
        let r = heisenberg(&SpectralCoeffs::new(4), Sign::Plus).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.ratio, None);
        let s = sum_rule_check(&SpectralCoeffs::new(4), Sign::Plus).unwrap();
        assert_eq!((s.lhs, s.rhs), (0.0, 0.0));
    }

    #[test]
    fn sum_rule_minimal_index() {
        let a = 1.7;
        let f = SpectralCoeffs::from_pairs(4, [(EigenIndex::even(0, 0, 1), c(a))]).unwrap();
        let s = sum_rule_check(&f, Sign::Minus).unwrap();
        let n2 = closed_form_norm_sq(&EigenIndex::even(0, 0, 1), 4).unwrap();
        assert!((s.lhs - 4.0 * a * a * n2).abs() < 1e-12 * s.lhs);
        assert!((s.lhs - s.lower_bound).abs() < 1e-12 * s.lhs);
        assert!(s.chain_holds);
    }

    #[test]
    fn radial_square_matches_pointwise() {
        let f = SpectralCoeffs::from_pairs(
            4,
            [
                (EigenIndex::even(0, 1, 2), c(0.5)),
                (EigenIndex::even(1, 1, 2), Complex64::new(0.2, -0.4)),
                (EigenIndex::odd(2, 0, 3), c(-1.0)),
            ],
        )
        .unwrap();
        let ev = ExpansionEvaluator::new(&f).unwrap();
        let ev2 = ExpansionEvaluator::new(&apply_radial_square(&f)).unwrap();
        let x = [0.3, -0.8, 0.5, 1.1];
        let r2: f64 = x.iter().map(|v| v * v).sum();
        assert!(ev.eval(&x).scale(&c(r2)).max_abs_diff(&ev2.eval(&x)) < 1e-12);
        // coefficient route against direct quadrature (exact for this degree)
        let rule = QuadratureRule::gauss_hermite(4, 10, 1.0).unwrap();
        let direct = rule.integrate(|x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            r2 * ev.eval(x).norm_sq()
        });
        let coeff = radial_second_moment(&f).unwrap();
        assert!((direct - coeff).abs() < 1e-10 * coeff, "{direct} vs {coeff}");
    }

    #[test]
    fn pointwise_route_matches_spectral_route() {
        let f = SpectralCoeffs::from_pairs(2, [(EigenIndex::even(0, 0, 1), c(1.0)), (EigenIndex::odd(1, 1, 2), c(0.7))]).unwrap();
        let ev = ExpansionEvaluator::new(&f).unwrap();
        let evt = ExpansionEvaluator::new(&cft_spectral(&f, Sign::Plus)).unwrap();
        let rule = QuadratureRule::gauss_hermite(2, 12, 1.0).unwrap();
        let q = heisenberg_pointwise(&|x| ev.eval(x), &|x| evt.eval(x), &rule);
        let s = heisenberg(&f, Sign::Plus).unwrap();
        assert!((q.ratio.unwrap() - s.ratio.unwrap()).abs() < 1e-10);
    }

    #[test]
    fn infimum_examples() {
        assert_eq!(infimum_helper(1.0, 1.0).unwrap(), InfimumReport { t_star: 1.0, min_value: 2.0 });
        assert_eq!(infimum_helper(4.0, 1.0).unwrap(), InfimumReport { t_star: 2.0, min_value: 8.0 });
        assert!(infimum_helper(0.0, 1.0).is_err());
        assert!(infimum_helper(1.0, -2.0).is_err());
        let (t, v) = scan_minimum(4.0, 1.0, 100.0, 2000);
        assert!((t - 2.0).abs() < 1e-6 && (v - 8.0).abs() < 1e-9);
    }

    #[test]
    fn hardy_gaussian_is_critical_spectral() {
        let rule = Arc::new(QuadratureRule::gauss_hermite(2, 30, 2f64.sqrt()).unwrap().pruned(1e-20).unwrap());
        let psi = eigenfunction(EigenIndex::even(0, 0, 1), 2).unwrap();
        let f = psi.sample(rule).unwrap();
        let opts = HardyOptions {
            method: HardyMethod::Spectral { max_j: 1, max_k: 1 },
            ..HardyOptions::default()
        };
        let r = hardy_probe(&f, Sign::Plus, &opts).unwrap();
        assert_eq!(r.classification, HardyClass::Critical, "{r:?}");
        assert!((r.pq - 0.25).abs() < 1e-6);
        assert!((r.c_fit - 1.0).abs() < 1e-6 && (r.c_fit_freq - 1.0).abs() < 1e-6);
        assert!(hardy_probe(&f, Sign::Plus, &HardyOptions::default()).is_err());
    }

    #[test]
    fn hardy_zero_is_degenerate() {
        let rule = Arc::new(QuadratureRule::gauss_hermite(2, 8, 1.0).unwrap());
        let f = SampledField::new(rule.clone(), vec![Multivector::zero(2); rule.len()], "0").unwrap();
        let opts = HardyOptions {
            method: HardyMethod::Spectral { max_j: 0, max_k: 0 },
            ..HardyOptions::default()
        };
        let r = hardy_probe(&f, Sign::Minus, &opts).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.classification, HardyClass::Degenerate);
    }

    proptest! {
        #[test]
        fn equality_family_ratio_is_one(p in 0.1f64..3.0, amp in 0.1f64..5.0) {
            let g = gaussian_coeffs(4, p, c(amp), 1e-15).unwrap();
            let r = heisenberg(&g, Sign::Minus).unwrap();
            prop_assert!((r.ratio.unwrap() - 1.0).abs() < 1e-8, "{:?}", r);
        }

        #[test]
        fn dilation_leaves_ratio_unchanged(p in 0.2f64..2.0, k in 0.5f64..2.0) {
            // f(kx) for a Gaussian of rate p is the Gaussian of rate p k^2
            let a = heisenberg(&gaussian_coeffs(2, p, c(1.0), 1e-15).unwrap(), Sign::Plus).unwrap();
            let b = heisenberg(&gaussian_coeffs(2, p * k * k, c(1.0), 1e-15).unwrap(), Sign::Plus).unwrap();
            prop_assert!((a.ratio.unwrap() - b.ratio.unwrap()).abs() < 1e-6);
        }

        #[test]
        fn infimum_matches_scan(a in 1e-3f64..10.0, b in 1e-3f64..10.0) {
            let r = infimum_helper(a, b).unwrap();
            prop_assert!((infimum_objective(a, b, r.t_star) - r.min_value).abs() <= 1e-12 * r.min_value);
            let (_, v) = scan_minimum(a, b, 100.0, 1000);
            prop_assert!(r.min_value <= v + 1e-9);
            prop_assert!((v - r.min_value).abs() <= 1e-9);
        }
    }
}
