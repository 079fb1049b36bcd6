//! The Clifford-Fourier kernel `K_-(x, y) = A(w, z) + B(w, z) + (x ^ y) C(w, z)`
//! with `z = |x||y|`, `zw = <x, y>` and `lambda = (m - 2)/2`, summed from its
//! Bessel–Gegenbauer series.
//!
//! The radial factors `z^-lambda J_{k+lambda}(z)` are taken in the normalized
//! form `2^-lambda (z/2)^k jt_{k+lambda}(z)`, which is finite at `z = 0`.
//! For even `m` the factors `i^m +- (-1)^k` are real, so the kernel is real.
//!
//! Truncation uses the majorant `|jt_nu(z)| <= 1/Gamma(nu+1)` together with
//! `|C_k^lambda(w)| <= C_k^lambda(1)` and `|x ^ y| <= z`. Every component of
//! the majorant has a term ratio that decreases in `k`, so the tail after `K`
//! is bounded by `T_{K+1} / (1 - rho)` with `rho` the largest ratio at `K+1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::{Multivector, VectorM};
use crate::error::{Error, Result};
use crate::special::{bessel_j_scaled_sequence_with, BesselParams, RecurrenceRow};

pub const DEFAULT_K_MAX: usize = 64;
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelParams {
    pub m: usize,
    pub lambda: f64,
    /// Largest series degree allowed.
    pub k_max: usize,
    /// Requested absolute bound on the dropped tail.
    pub tail_tol: f64,
}

impl KernelParams {
    pub fn new(m: usize) -> Result<Self> {
        let p = KernelParams {
            m,
            lambda: (m as f64 - 2.0) / 2.0,
            k_max: DEFAULT_K_MAX,
            tail_tol: DEFAULT_TAIL_TOL,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_k_max(mut self, k_max: usize) -> Result<Self> {
        self.k_max = k_max;
        self.validate()?;
        Ok(self)
    }

    pub fn with_tail_tol(mut self, tail_tol: f64) -> Result<Self> {
        self.tail_tol = tail_tol;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m % 2 == 1 {
            return Err(Error::UnsupportedDimension {
                m: self.m,
                reason: "the kernel series is implemented for even m only",
            });
        }
        if self.m < 4 || self.m > crate::clifford::MAX_DIM {
            return Err(Error::UnsupportedDimension {
                m: self.m,
                reason: "the kernel series needs 4 <= m <= 6; use the spectral path for m = 2",
            });
        }
        if self.lambda != (self.m as f64 - 2.0) / 2.0 {
            return Err(Error::InvalidArgument("lambda must equal (m - 2)/2".into()));
        }
        if self.k_max < 1 {
            return Err(Error::InvalidArgument("k_max must be at least 1".into()));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol.is_finite()) {
            return Err(Error::InvalidArgument("tail_tol must be positive".into()));
        }
        Ok(())
    }

    fn i_pow_m(&self) -> f64 {
        if self.m % 4 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Kernel value: scalar part `A + B` and bivector part `(x ^ y) C`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelValue {
    pub scalar_part: Complex64,
    pub bivector_part: Multivector,
    pub truncation_estimate: f64,
    /// Highest series degree included.
    pub terms: usize,
}

impl KernelValue {
    pub fn to_multivector(&self) -> Multivector {
        let mut mv = self.bivector_part.clone();
        mv.coeffs_mut()[0] += self.scalar_part;
        mv
    }

    pub fn clifford_norm(&self) -> f64 {
        self.to_multivector().clifford_norm()
    }
}

/// The `z`-dependent part of the series: the kernel at `(w, z)` is
/// `sum_k s_k C_k^lambda(w) + (x ^ y) sum_{k>=1} c_k C_{k-1}^{lambda+1}(w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSeries {
    pub z: f64,
    /// Truncation degree `K`.
    pub terms: usize,
    /// `s_0 .. s_K`.
    pub scalar_weights: Vec<f64>,
    /// `c_1 .. c_K`, stored from index 0.
    pub bivector_weights: Vec<f64>,
    pub truncation_estimate: f64,
    pub converged: bool,
}

fn gamma_int(n: usize) -> f64 {
    // Gamma(n) = (n-1)!
    (1..n).fold(1.0, |acc, i| acc * i as f64)
}

/// Smallest degree `K <= k_max` whose majorant tail meets `tail_tol`, with
/// the tail bound; `None` for the degree means the cap was hit.
fn choose_degree(params: &KernelParams, z: f64) -> (Option<usize>, usize, f64) {
    if z == 0.0 {
        return (Some(0), 0, 0.0);
    }
    let lam = params.lambda;
    let h = 0.5 * z;
    let pref = 2f64.powf(lam);
    let (g1, g2) = (gamma_int(params.m / 2), gamma_int(params.m / 2 - 1));
    // P_k = bbar_k * C_k(1), Q_k = bbar_k * binom(k + 2 lambda, k - 1)
    let mut p = 2f64.powf(-lam) / g1;
    let mut q = 0.0;
    let mut best = f64::INFINITY;
    for k in 0..=params.k_max {
        // advance to degree k+1
        let kf = k as f64;
        let q_next = if k == 0 {
            p * h / (lam + 1.0) * (2.0 * lam + 1.0)
        } else {
            q * h / (kf + lam + 1.0) * (kf + 1.0 + 2.0 * lam) / kf
        };
        let p_next = p * h / (kf + lam + 1.0) * (kf + 2.0 * lam) / (kf + 1.0);
        let k1 = kf + 1.0;
        let t_next = pref * (g1 * p_next + g2 * (k1 + lam) * p_next + g2 * 2.0 * lam * q_next);
        let rho_p = h * (k1 + 2.0 * lam) / ((k1 + lam + 1.0) * (k1 + 1.0)) * (k1 + 1.0 + lam) / (k1 + lam);
        let rho_q = h / (k1 + lam + 1.0) * (k1 + 1.0 + 2.0 * lam) / k1;
        let rho = rho_p.max(rho_q);
        let est = if rho < 1.0 { t_next / (1.0 - rho) } else { f64::INFINITY };
        if est <= params.tail_tol {
            return (Some(k), k, est);
        }
        best = est;
        p = p_next;
        q = q_next;
    }
    (None, params.k_max, best)
}

impl RadialSeries {
    /// Series coefficients at `z`, truncated adaptively; `converged` is false
    /// when `k_max` was reached before the tail bound met `tail_tol`.
    pub fn new(params: &KernelParams, z: f64, bessel: &BesselParams) -> Result<Self> {
        params.validate()?;
        if !(z >= 0.0 && z.is_finite()) {
            return Err(Error::InvalidArgument(format!("z must be finite and nonnegative, got {z}")));
        }
        let (ok, k, est) = choose_degree(params, z);
        let lam = params.lambda;
        let im = params.i_pow_m();
        let (g1, g2) = (gamma_int(params.m / 2), gamma_int(params.m / 2 - 1));
        let c_a = 2f64.powf(lam - 1.0) * g1;
        let c_b = 2f64.powf(lam - 1.0) * g2;
        let jt = bessel_j_scaled_sequence_with(bessel, lam, k + 1, z)?;
        let h = 0.5 * z;
        let base = 2f64.powf(-lam);
        let mut scalar = Vec::with_capacity(k + 1);
        let mut biv = Vec::with_capacity(k);
        // hk = (z/2)^k, hk1 = (z/2)^(k-1)
        let mut hk = 1.0;
        let mut hk1 = 0.0;
        for (kk, jv) in jt.iter().enumerate() {
            let sgn = if kk % 2 == 0 { 1.0 } else { -1.0 };
            let b = base * hk * jv;
            let kf = kk as f64;
            scalar.push(c_a * (im + sgn) * b - c_b * (kf + lam) * (im - sgn) * b);
            if kk >= 1 {
                let b_over_z = 0.5 * base * hk1 * jv;
                biv.push(-c_b * (im + sgn) * b_over_z * 2.0 * lam);
            }
            hk1 = hk;
            hk *= h;
        }
        Ok(RadialSeries {
            z,
            terms: k,
            scalar_weights: scalar,
            bivector_weights: biv,
            truncation_estimate: est,
            converged: ok.is_some(),
        })
    }

    /// `(scalar, bivector factor)` at `w` using rows for `lambda` and `lambda + 1`.
    pub fn eval(&self, w: f64, rows: &KernelRows) -> (f64, f64) {
        let s = rows.lam.clenshaw(&self.scalar_weights, w);
        let c = rows.lam1.clenshaw(&self.bivector_weights, w);
        (s, c)
    }
}

/// Gegenbauer recurrence rows for `C^lambda` and `C^(lambda+1)`.
#[derive(Debug, Clone)]
pub struct KernelRows {
    lam: RecurrenceRow,
    lam1: RecurrenceRow,
}

impl KernelRows {
    pub fn new(params: &KernelParams) -> Result<Self> {
        Ok(KernelRows {
            lam: RecurrenceRow::gegenbauer(params.lambda, params.k_max + 1)?,
            lam1: RecurrenceRow::gegenbauer(params.lambda + 1.0, params.k_max + 1)?,
        })
    }
}

/// `w = <x, y>/z` clamped to `[-1, 1]`; zero when `z = 0`.
pub fn cosine(x: &[f64], y: &[f64], z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    (dot / z).clamp(-1.0, 1.0)
}

fn kernel_from_series(x: &VectorM, y: &VectorM, series: &RadialSeries, rows: &KernelRows) -> Result<KernelValue> {
    let w = cosine(x.comps(), y.comps(), series.z);
    let (s, c) = series.eval(w, rows);
    let wedge = x.wedge(y)?;
    Ok(KernelValue {
        scalar_part: Complex64::new(s, 0.0),
        bivector_part: wedge.scale(&Complex64::new(c, 0.0)),
        truncation_estimate: series.truncation_estimate,
        terms: series.terms,
    })
}

/// Evaluates `K_-(x, y)`. If the tail bound is not met within `k_max` terms
/// the error carries the partial sum.
pub fn kernel_minus(x: &VectorM, y: &VectorM, params: &KernelParams) -> Result<KernelValue> {
    params.validate()?;
    for v in [x, y] {
        if v.dim() != params.m {
            return Err(Error::DimensionMismatch {
                expected: params.m,
                found: v.dim(),
            });
        }
    }
    let z = x.norm() * y.norm();
    let series = RadialSeries::new(params, z, &BesselParams::default())?;
    let rows = KernelRows::new(params)?;
    let value = kernel_from_series(x, y, &series, &rows)?;
    if !series.converged {
        return Err(Error::Truncation {
            k_max: params.k_max,
            z,
            estimate: series.truncation_estimate,
            tail_tol: params.tail_tol,
            partial: Some(Box::new(value)),
        });
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    /// Largest `|K(x, y)|_c / e^{|x||y|}` seen.
    pub max_ratio: f64,
    pub argmax_x: Vec<f64>,
    pub argmax_y: Vec<f64>,
    pub samples: usize,
}

/// Empirical constant in `|K_-(x, y)|_c <= C e^{|x||y|}` over the samples.
pub fn kernel_bound_check(samples: &[(VectorM, VectorM)], params: &KernelParams) -> Result<BoundReport> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("kernel_bound_check needs at least one sample".into()));
    }
    let mut report = BoundReport {
        max_ratio: f64::NEG_INFINITY,
        argmax_x: Vec::new(),
        argmax_y: Vec::new(),
        samples: samples.len(),
    };
    for (x, y) in samples {
        let k = kernel_minus(x, y, params)?;
        let ratio = k.clifford_norm() / (x.norm() * y.norm()).exp();
        if ratio > report.max_ratio {
            report.max_ratio = ratio;
            report.argmax_x = x.comps().to_vec();
            report.argmax_y = y.comps().to_vec();
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(c: &[f64]) -> VectorM {
        VectorM::new(c.to_vec()).unwrap()
    }

    fn max_diff(a: &KernelValue, b: &KernelValue) -> f64 {
        a.to_multivector().max_abs_diff(&b.to_multivector())
    }

    #[test]
    fn params_validation() {
        assert!(KernelParams::new(4).is_ok());
        assert!(KernelParams::new(6).is_ok());
        assert!(matches!(KernelParams::new(2), Err(Error::UnsupportedDimension { .. })));
        assert!(matches!(KernelParams::new(5), Err(Error::UnsupportedDimension { .. })));
        assert!(KernelParams::new(4).unwrap().with_k_max(0).is_err());
        assert!(KernelParams::new(4).unwrap().with_tail_tol(0.0).is_err());
    }

    #[test]
    fn zero_frequency_gives_one() {
        for m in [4, 6] {
            let p = KernelParams::new(m).unwrap();
            let mut x = vec![0.0; m];
            x[0] = 1.0;
            x[1] = -2.0;
            let k = kernel_minus(&v(&x), &VectorM::zeros(m), &p).unwrap();
            assert!((k.scalar_part - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            assert!(k.bivector_part.is_zero());
            assert_eq!(k.truncation_estimate, 0.0);
        }
    }

    // High-precision oracle: the same series summed to 50 terms in mpmath.
    #[test]
    fn collinear_values_match_oracle() {
        let cases = [
            (4, 0.5, 0.5),
            (4, 1.0, -2.2958874039497803e-41),
            (4, 2.0, -1.0),
            (6, 0.5, 0.75),
            (6, 1.0, 0.6666666666666666),
            (6, 2.0, 1.0),
        ];
        for (m, t, want) in cases {
            let p = KernelParams::new(m).unwrap();
            let mut x = vec![0.0; m];
            x[0] = 1.0;
            let mut y = vec![0.0; m];
            y[0] = t;
            let k = kernel_minus(&v(&x), &v(&y), &p).unwrap();
            assert!((k.scalar_part.re - want).abs() < 1e-13, "m={m} t={t}: {}", k.scalar_part.re);
            assert!(k.bivector_part.is_zero());
        }
    }

    #[test]
    fn truncation_failure_carries_partial_sum() {
        let p = KernelParams::new(4).unwrap().with_k_max(3).unwrap();
        let err = kernel_minus(&v(&[2.0, 1.0, 0.0, 0.0]), &v(&[1.0, 2.0, 0.5, 0.0]), &p).unwrap_err();
        match err {
            Error::Truncation { k_max, partial, estimate, .. } => {
                assert_eq!(k_max, 3);
                assert!(estimate > 1e-12);
                assert_eq!(partial.unwrap().terms, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch() {
        let p = KernelParams::new(4).unwrap();
        assert!(matches!(
            kernel_minus(&v(&[1.0, 0.0, 0.0]), &VectorM::zeros(4), &p),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bound_check_single_origin_sample() {
        let p = KernelParams::new(4).unwrap();
        let r = kernel_bound_check(&[(VectorM::zeros(4), VectorM::zeros(4))], &p).unwrap();
        assert!((r.max_ratio - 1.0).abs() < 1e-15);
        assert!(kernel_bound_check(&[], &p).is_err());
    }

    fn vec4() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-1.5f64..1.5, 4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn scaling_invariance(x in vec4(), y in vec4(), c in 0.2f64..5.0) {
            let p = KernelParams::new(4).unwrap();
            let (x, y) = (v(&x), v(&y));
            let a = kernel_minus(&x, &y, &p).unwrap();
            let b = kernel_minus(&x.scaled(1.0 / c), &y.scaled(c), &p).unwrap();
            prop_assert!(max_diff(&a, &b) <= 1e-12);
        }

        #[test]
        fn only_grades_zero_and_two(x in vec4(), y in vec4()) {
            let p = KernelParams::new(4).unwrap();
            let k = kernel_minus(&v(&x), &v(&y), &p).unwrap();
            prop_assert!(k.to_multivector().has_only_grades(&[0, 2]));
            prop_assert!(k.bivector_part.has_only_grades(&[2]));
        }

        #[test]
        fn swap_negates_bivector(x in vec4(), y in vec4()) {
            let p = KernelParams::new(4).unwrap();
            let (x, y) = (v(&x), v(&y));
            let a = kernel_minus(&x, &y, &p).unwrap();
            let b = kernel_minus(&y, &x, &p).unwrap();
            prop_assert!((a.scalar_part - b.scalar_part).norm() <= 1e-13);
            prop_assert!(a.bivector_part.max_abs_diff(&(-&b.bivector_part)) <= 1e-13);
        }

        #[test]
        fn truncation_is_monotone(x in vec4(), y in vec4(), extra in 1usize..10) {
            let p = KernelParams::new(4).unwrap().with_tail_tol(1e-6).unwrap();
            let (x, y) = (v(&x), v(&y));
            let a = kernel_minus(&x, &y, &p).unwrap();
            let z = x.norm() * y.norm();
            let longer = p.with_k_max(a.terms + extra).unwrap().with_tail_tol(1e-300).unwrap();
            let series = RadialSeries::new(&longer, z, &BesselParams::default()).unwrap();
            let rows = KernelRows::new(&longer).unwrap();
            let b = kernel_from_series(&x, &y, &series, &rows).unwrap();
            prop_assert!(max_diff(&a, &b) <= a.truncation_estimate + 1e-15);
        }

        #[test]
        fn exponential_bound(x in proptest::collection::vec(-1.7f64..1.7, 4), y in proptest::collection::vec(-1.7f64..1.7, 4)) {
            let p = KernelParams::new(4).unwrap();
            let (x, y) = (v(&x), v(&y));
            let k = kernel_minus(&x, &y, &p).unwrap();
            prop_assert!(k.clifford_norm() <= 4.0 * (x.norm() * y.norm()).exp());
        }
    }
}
