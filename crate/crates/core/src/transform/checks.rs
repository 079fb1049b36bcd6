//! Numerical checks of the transform identities: isometry, dilation and the
//! eigenvalue relations.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::batch::{ChannelBatch, PolyGaussian};
use super::eigen::{analyze, cft_spectral, eigenvalue, EigenIndex, Sign, SpectralCoeffs};
use super::field::SampledField;
use super::quad_cft::{cft_minus_quadrature, transform_params};
use super::quadrature::QuadratureRule;
use crate::clifford::{Multivector, VectorM};
use crate::error::{Error, Result};
use crate::kernel::KernelParams;

/// Source nodes whose weight is below this fraction of the largest are dropped.
pub const SOURCE_PRUNE: f64 = 1e-20;

/// Rules for quadrature transforms.
///
/// Functions are integrated on `source` (Gauss–Hermite with the weight
/// `e^{-|x|^2/2}` folded out). Transforms are evaluated at the nodes of
/// `targets` (weight `e^{-|y|^2}`), whose weights then give `L_2` norms on the
/// frequency side.
#[derive(Debug, Clone)]
pub struct QuadratureSetup {
    pub source: Arc<QuadratureRule>,
    pub targets: Arc<QuadratureRule>,
    pub params: KernelParams,
}

impl QuadratureSetup {
    pub fn new(m: usize, source_nodes: usize, target_nodes: usize) -> Result<Self> {
        let params = transform_params(m)?;
        let source = QuadratureRule::gauss_hermite(m, source_nodes, 2f64.sqrt())?.pruned(SOURCE_PRUNE)?;
        let targets = QuadratureRule::gauss_hermite(m, target_nodes, 1.0)?;
        Ok(QuadratureSetup {
            source: Arc::new(source),
            targets: Arc::new(targets),
            params,
        })
    }

    /// 24 source nodes per axis for `m = 4`, 12 for `m = 6`.
    pub fn default_for(m: usize) -> Result<Self> {
        match m {
            4 => Self::new(4, 24, 6),
            6 => Self::new(6, 12, 4),
            _ => Err(Error::UnsupportedDimension {
                m,
                reason: "quadrature transforms need m = 4 or m = 6",
            }),
        }
    }

    pub fn target_points(&self) -> Vec<Vec<f64>> {
        self.targets.points().map(|p| p.to_vec()).collect()
    }
}

/// `lhs = ||F f||`, `rhs = ||f||`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlancherelReport {
    pub lhs: f64,
    pub rhs: f64,
    pub relative_error: f64,
}

impl PlancherelReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        let gap = (lhs - rhs).abs();
        PlancherelReport {
            lhs,
            rhs,
            relative_error: if rhs > 0.0 { gap / rhs } else { gap },
        }
    }
}

/// Isometry in coefficient space.
pub fn plancherel_spectral(c: &SpectralCoeffs, sign: Sign) -> Result<PlancherelReport> {
    let rhs = c.norm_sq()?.sqrt();
    let lhs = cft_spectral(c, sign).norm_sq()?.sqrt();
    Ok(PlancherelReport::new(lhs, rhs))
}

/// `sum_t w_t |g(y_t)|^2` over the target rule.
fn target_norm_sq<'a>(values: impl Iterator<Item = &'a Multivector>, targets: &QuadratureRule) -> f64 {
    values.zip(targets.weights()).map(|(v, w)| w * v.norm_sq()).sum()
}

/// Isometry of `F_-` for a batched function. Both norms are taken on the
/// target rule, whose weight `e^{-|y|^2}` matches `|f|^2` for these inputs.
pub fn plancherel_batch(batch: &ChannelBatch, targets: &QuadratureRule, f: &PolyGaussian) -> Result<PlancherelReport> {
    let ft = batch.transform(f)?;
    let fv: Vec<Multivector> = targets.points().map(|y| f.eval(y)).collect();
    Ok(PlancherelReport::new(
        target_norm_sq(ft.iter(), targets).sqrt(),
        target_norm_sq(fv.iter(), targets).sqrt(),
    ))
}

/// Isometry of `F_-` for a pointwise function: `f` is sampled on the source
/// rule and transformed at the target nodes; both norms use the target rule.
pub fn plancherel_quadrature(f: &(dyn Fn(&[f64]) -> Multivector + Sync), setup: &QuadratureSetup) -> Result<PlancherelReport> {
    let field = SampledField::from_fn(setup.source.clone(), "f", f)?;
    let targets: Vec<VectorM> = setup
        .targets
        .points()
        .map(|p| VectorM::new(p.to_vec()))
        .collect::<Result<_>>()?;
    let ft = cft_minus_quadrature(&field, &targets, &setup.params)?;
    let fv: Vec<Multivector> = setup.targets.points().map(f).collect();
    Ok(PlancherelReport::new(
        target_norm_sq(ft.iter(), &setup.targets).sqrt(),
        target_norm_sq(fv.iter(), &setup.targets).sqrt(),
    ))
}

/// Coefficient-space isometry of a sampled field after projecting it onto
/// the basis with the given ranges.
pub fn plancherel_check(f: &SampledField, sign: Sign, max_j: usize, max_k: usize) -> Result<PlancherelReport> {
    plancherel_spectral(&analyze(f, max_j, max_k)?, sign)
}

/// Deviation of `F(f(c .))(y)` from `c^{+m} F(f)(y / c)` and from `c^{-m} F(f)(y / c)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub c: f64,
    pub m: usize,
    pub targets: usize,
    pub deviation_plus_m: f64,
    pub deviation_minus_m: f64,
    pub tolerance: f64,
    /// `Some(e)` when exactly the exponent `e` is within tolerance.
    pub resolved_exponent: Option<i32>,
}

/// Evaluates both candidate dilation laws for `F_-` by quadrature.
pub fn scaling_check(
    f: &(dyn Fn(&[f64]) -> Multivector + Sync),
    c: f64,
    source: Arc<QuadratureRule>,
    targets: &[Vec<f64>],
    params: &KernelParams,
    tolerance: f64,
) -> Result<ScalingReport> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("dilation factor must be positive, got {c}")));
    }
    let m = source.dim();
    // f(c .) is c times narrower than f, so it is integrated on the source
    // rule dilated by 1/c (a fixed rule would under-resolve one side). One
    // extra node per axis keeps the two node sets distinct, so the two sums
    // are independent quadratures rather than the same sum relabelled.
    let mut spec = source.dilated(1.0 / c)?.spec();
    spec.nodes_per_axis += 1;
    let fc = SampledField::from_fn(Arc::new(QuadratureRule::from_spec(spec)?), "f(c x)", |x| {
        let sx: Vec<f64> = x.iter().map(|v| c * v).collect();
        f(&sx)
    })?;
    let f1 = SampledField::from_fn(source, "f", f)?;
    let y: Vec<VectorM> = targets.iter().map(|t| VectorM::new(t.clone())).collect::<Result<_>>()?;
    let y_over_c: Vec<VectorM> = y.iter().map(|t| t.scaled(1.0 / c)).collect();
    let lhs = cft_minus_quadrature(&fc, &y, params)?;
    let base = cft_minus_quadrature(&f1, &y_over_c, params)?;
    let dev = |e: i32| -> f64 {
        let s = Complex64::new(c.powi(e), 0.0);
        lhs.iter()
            .zip(&base)
            .map(|(l, b)| l.max_abs_diff(&b.scale(&s)))
            .fold(0.0, f64::max)
    };
    let (plus, minus) = (dev(m as i32), dev(-(m as i32)));
    let resolved_exponent = match (plus <= tolerance, minus <= tolerance) {
        (true, false) => Some(m as i32),
        (false, true) => Some(-(m as i32)),
        _ => None,
    };
    Ok(ScalingReport {
        c,
        m,
        targets: targets.len(),
        deviation_plus_m: plus,
        deviation_minus_m: minus,
        tolerance,
        resolved_exponent,
    })
}

/// One eigenvalue relation `F_-(psi) = mu psi` measured on the target rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenRelationRow {
    pub idx: EigenIndex,
    pub eigenvalue: Complex64,
    /// `||F_-(psi) - mu psi|| / ||psi||` with both norms on the target rule.
    pub relative_error: f64,
    /// `|a' - mu|` for the coefficient-space transform of the unit coefficient.
    pub spectral_error: f64,
}

pub fn eigen_relation_check(batch: &ChannelBatch, targets: &QuadratureRule, indices: &[EigenIndex], m: usize) -> Result<Vec<EigenRelationRow>> {
    if batch.targets().len() != targets.len() {
        return Err(Error::InvalidArgument("batch was not built on this target rule".into()));
    }
    indices
        .iter()
        .map(|idx| {
            let mu = eigenvalue(idx, m, Sign::Minus);
            let pg = PolyGaussian::from_eigen(idx, m)?;
            let mut num = 0.0;
            let mut den = 0.0;
            for (t, (y, w)) in targets.points().zip(targets.weights()).enumerate() {
                let got = batch.transform_at(&pg, t)?;
                let want = pg.eval(y).scale(&mu);
                num += w * got.checked_sub(&want)?.norm_sq();
                den += w * want.norm_sq();
            }
            let unit = SpectralCoeffs::from_pairs(m, [(*idx, Complex64::new(1.0, 0.0))])?;
            let spectral_error = (cft_spectral(&unit, Sign::Minus).get(idx) - mu).norm();
            Ok(EigenRelationRow {
                idx: *idx,
                eigenvalue: mu,
                relative_error: (num / den).sqrt(),
                spectral_error,
            })
        })
        .collect()
}
