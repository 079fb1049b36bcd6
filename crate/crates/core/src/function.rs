//! Input functions described in JSON, shared by the command-line tools.

use std::path::PathBuf;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::transform::{
    eigenfunction, gaussian_coeffs, EigenIndex, ExpansionEvaluator, Parity, QuadratureRule, SampledField,
    SpectralCoeffs,
};

fn default_rate() -> f64 {
    0.5
}

fn default_amplitude() -> f64 {
    1.0
}

/// `{"kind":"gaussian","p":..,"c":..}`, `{"kind":"eigen","parity":..,"j":..,"k":..,"l":..}`
/// or `{"kind":"samples","file":..}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `c e^{-p |x|^2}`
    Gaussian {
        #[serde(default = "default_rate")]
        p: f64,
        #[serde(default = "default_amplitude")]
        c: f64,
    },
    Eigen {
        parity: Parity,
        j: usize,
        k: usize,
        l: usize,
    },
    /// A sampled field stored as JSON.
    Samples { file: PathBuf },
}

/// Pointwise evaluator.
pub type PointFn = Arc<dyn Fn(&[f64]) -> Multivector + Send + Sync>;

/// Terms kept in the Gaussian expansion capture all but this fraction of the norm.
const GAUSSIAN_TOL: f64 = 1e-15;

impl FunctionSpec {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        match self {
            FunctionSpec::Gaussian { p, c } => {
                if !(*p > 0.0 && p.is_finite()) {
                    return Err(Error::InvalidArgument(format!("Gaussian rate p must be positive, got {p}")));
                }
                if !c.is_finite() {
                    return Err(Error::InvalidArgument("Gaussian amplitude must be finite".into()));
                }
                Ok(())
            }
            FunctionSpec::Eigen { parity, j, k, l } => EigenIndex::new(*parity, *j, *k, *l).validate(m),
            FunctionSpec::Samples { file } => {
                if !file.is_file() {
                    return Err(Error::InvalidArgument(format!("sample file {} does not exist", file.display())));
                }
                Ok(())
            }
        }
    }

    /// Pointwise values, unless the function is only known by samples.
    pub fn pointwise(&self, m: usize) -> Result<Option<PointFn>> {
        self.validate(m)?;
        Ok(match self {
            FunctionSpec::Gaussian { p, c } => {
                let (p, c) = (*p, *c);
                Some(Arc::new(move |x: &[f64]| {
                    let r2: f64 = x.iter().map(|v| v * v).sum();
                    Multivector::scalar(m, Complex64::new(c * (-p * r2).exp(), 0.0))
                }))
            }
            FunctionSpec::Eigen { parity, j, k, l } => {
                let psi = eigenfunction(EigenIndex::new(*parity, *j, *k, *l), m)?;
                Some(Arc::new(move |x: &[f64]| psi.eval(x)))
            }
            FunctionSpec::Samples { .. } => None,
        })
    }

    /// Exact (or exponentially convergent) expansion, when one is known.
    pub fn coefficients(&self, m: usize) -> Result<Option<SpectralCoeffs>> {
        self.validate(m)?;
        Ok(match self {
            FunctionSpec::Gaussian { p, c } => Some(gaussian_coeffs(m, *p, Complex64::new(*c, 0.0), GAUSSIAN_TOL)?),
            FunctionSpec::Eigen { parity, j, k, l } => Some(SpectralCoeffs::from_pairs(
                m,
                [(EigenIndex::new(*parity, *j, *k, *l), Complex64::new(1.0, 0.0))],
            )?),
            FunctionSpec::Samples { .. } => None,
        })
    }

    /// Values on the nodes of `rule`; a sample file must match `m` (its own rule is kept).
    pub fn sample(&self, m: usize, rule: Arc<QuadratureRule>) -> Result<SampledField> {
        match self {
            FunctionSpec::Samples { file } => {
                self.validate(m)?;
                let field = SampledField::read(file)?;
                if field.dim() != m {
                    return Err(Error::DimensionMismatch {
                        expected: m,
                        found: field.dim(),
                    });
                }
                Ok(field)
            }
            _ => {
                let f = self.pointwise(m)?.expect("pointwise spec");
                let name = self.label();
                SampledField::from_fn(rule, name, move |x| f(x))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            FunctionSpec::Gaussian { p, c } => format!("{c}*exp(-{p}|x|^2)"),
            FunctionSpec::Eigen { parity, j, k, l } => EigenIndex::new(*parity, *j, *k, *l).to_string(),
            FunctionSpec::Samples { file } => file.display().to_string(),
        }
    }
}

/// Evaluator for a coefficient expansion, as a shareable closure.
pub fn expansion_fn(c: &SpectralCoeffs) -> Result<PointFn> {
    let ev = ExpansionEvaluator::new(c)?;
    Ok(Arc::new(move |x: &[f64]| ev.eval(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_variants() {
        assert_eq!(
            FunctionSpec::parse(r#"{"kind":"gaussian"}"#).unwrap(),
            FunctionSpec::Gaussian { p: 0.5, c: 1.0 }
        );
        let e = FunctionSpec::parse(r#"{"kind":"eigen","parity":"odd","j":1,"k":0,"l":2}"#).unwrap();
        assert_eq!(e, FunctionSpec::Eigen { parity: Parity::Odd, j: 1, k: 0, l: 2 });
        assert!(FunctionSpec::parse(r#"{"kind":"cosine"}"#).is_err());
        assert!(FunctionSpec::parse(r#"{"kind":"gaussian","q":1}"#).is_err());
        let round = serde_json::to_string(&e).unwrap();
        assert_eq!(FunctionSpec::parse(&round).unwrap(), e);
    }

    #[test]
    fn validation() {
        assert!(FunctionSpec::Gaussian { p: -1.0, c: 1.0 }.validate(4).is_err());
        assert!(FunctionSpec::Eigen { parity: Parity::Even, j: 0, k: 0, l: 17 }.validate(4).is_err());
        assert!(FunctionSpec::Samples { file: "/nonexistent/f.json".into() }.validate(4).is_err());
    }

    #[test]
    fn pointwise_and_coefficients_agree() {
        let x = [0.2, -0.5, 0.4, 0.1];
        for spec in [FunctionSpec::Gaussian { p: 0.9, c: 2.0 }, FunctionSpec::Eigen { parity: Parity::Odd, j: 1, k: 1, l: 4 }] {
            let f = spec.pointwise(4).unwrap().unwrap();
            let g = expansion_fn(&spec.coefficients(4).unwrap().unwrap()).unwrap();
            assert!(f(&x).max_abs_diff(&g(&x)) < 1e-12, "{spec:?}");
        }
    }

    #[test]
    fn samples_round_trip_through_file() {
        let rule = Arc::new(QuadratureRule::gauss_hermite(2, 5, 1.0).unwrap());
        let f = FunctionSpec::Gaussian { p: 0.5, c: 1.0 }.sample(2, rule).unwrap();
        let dir = std::env::temp_dir().join(format!("cliffft-fn-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("g.json");
        f.write(&path).unwrap();
        let spec = FunctionSpec::Samples { file: path.clone() };
        let back = spec.sample(2, Arc::new(QuadratureRule::gauss_hermite(2, 3, 1.0).unwrap())).unwrap();
        assert_eq!(back.values(), f.values());
        assert!(spec.sample(4, back.rule().clone()).is_err());
        std::fs::remove_dir_all(dir).ok();
    }
}
