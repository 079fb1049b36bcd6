use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quadrature::{QuadratureRule, RuleSpec};
use crate::clifford::Multivector;
use crate::error::{Error, Result};

/// Multivector values of a function at the nodes of a rule.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    rule: Arc<QuadratureRule>,
    values: Vec<Multivector>,
    pub name: String,
    /// Free-form tags such as "radial" or "scalar".
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldJson {
    pub schema: u32,
    pub name: String,
    #[serde(default)]
    pub flags: Vec<String>,
    pub rule: RuleSpec,
    /// Per node, `2^m` pairs `[re, im]` indexed by blade mask.
    pub values: Vec<Vec<[f64; 2]>>,
}

impl SampledField {
    pub fn new(rule: Arc<QuadratureRule>, values: Vec<Multivector>, name: impl Into<String>) -> Result<Self> {
        if values.len() != rule.len() {
            return Err(Error::InvalidArgument(format!(
                "field has {} values but the rule has {} nodes",
                values.len(),
                rule.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| v.dim() != rule.dim()) {
            return Err(Error::DimensionMismatch {
                expected: rule.dim(),
                found: v.dim(),
            });
        }
        Ok(SampledField {
            rule,
            values,
            name: name.into(),
            flags: Vec::new(),
        })
    }

    pub fn from_fn(
        rule: Arc<QuadratureRule>,
        name: impl Into<String>,
        f: impl Fn(&[f64]) -> Multivector + Sync,
    ) -> Result<Self> {
        let values: Vec<Multivector> = (0..rule.len()).into_par_iter().map(|i| f(rule.point(i))).collect();
        Self::new(rule, values, name)
    }

    pub fn with_flag(mut self, flag: &str) -> Self {
        self.flags.push(flag.to_string());
        self
    }

    pub fn rule(&self) -> &Arc<QuadratureRule> {
        &self.rule
    }

    pub fn dim(&self) -> usize {
        self.rule.dim()
    }

    pub fn values(&self) -> &[Multivector] {
        &self.values
    }

    /// `int |f|_c^2 dx` by the rule.
    pub fn norm_sq(&self) -> f64 {
        self.values
            .iter()
            .zip(self.rule.weights())
            .map(|(v, w)| w * v.norm_sq())
            .sum()
    }

    /// `int sum_A conj(f_A) g_A dx` by the rule.
    pub fn pairing(&self, other: &SampledField) -> Result<Complex64> {
        if self.rule != other.rule {
            return Err(Error::InvalidArgument("fields live on different rules".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.rule.weights())
            .map(|((a, b), w)| a.scalar_pairing(b) * *w)
            .sum())
    }

    pub fn map_values(&self, name: impl Into<String>, f: impl Fn(&[f64], &Multivector) -> Multivector) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| f(self.rule.point(i), v))
            .collect();
        SampledField {
            rule: self.rule.clone(),
            values,
            name: name.into(),
            flags: Vec::new(),
        }
    }

    pub fn to_json(&self) -> FieldJson {
        FieldJson {
            schema: 1,
            name: self.name.clone(),
            flags: self.flags.clone(),
            rule: self.rule.spec(),
            values: self
                .values
                .iter()
                .map(|v| v.coeffs().iter().map(|c| [c.re, c.im]).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &FieldJson) -> Result<Self> {
        let rule = Arc::new(QuadratureRule::from_spec(json.rule)?);
        let nb = 1usize << rule.dim();
        let values = json
            .values
            .iter()
            .map(|node| {
                if node.len() != nb {
                    return Err(Error::Serde(format!(
                        "each node needs {nb} coefficients, found {}",
                        node.len()
                    )));
                }
                Multivector::from_coeffs(rule.dim(), node.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut field = Self::new(rule, values, json.name.clone())?;
        field.flags = json.flags.clone();
        Ok(field)
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(&self.to_json())?)?;
        Ok(())
    }
}
