//! Tensor-product quadrature on `R^m`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::clifford::check_dim;
use crate::error::{Error, Result};

/// One-dimensional rule family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleKind {
    /// Gauss–Hermite nodes `x = scale * t`; the Gaussian weight is folded into
    /// the stored weights so that `sum W h(x)` approximates `int h(x) dx`.
    GaussHermite { scale: f64 },
    /// Midpoint rule on `[-half_width, half_width]`.
    TruncatedUniform { half_width: f64 },
}

/// Serializable description from which a rule is rebuilt exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub m: usize,
    pub nodes_per_axis: usize,
    #[serde(flatten)]
    pub kind: RuleKind,
    /// Drop nodes whose one-dimensional weight product is below this
    /// fraction of the largest product.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prune: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    spec: RuleSpec,
    axis_nodes: Vec<f64>,
    axis_weights: Vec<f64>,
    points: Vec<f64>,
    weights: Vec<f64>,
    /// Product of the raw one-dimensional weights (before unfolding the Gaussian).
    raw: Vec<f64>,
}

/// Gauss–Hermite nodes (ascending) and weights for the weight `e^{-t^2}`.
pub fn gauss_hermite_1d(n: usize) -> (Vec<f64>, Vec<f64>) {
    const PIM4: f64 = 0.751_125_544_464_942_5;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let half = (n + 1) / 2;
    let mut z = 0.0f64;
    for i in 0..half {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (PIM4, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    x.reverse();
    w.reverse();
    (x, w)
}

impl QuadratureRule {
    pub fn gauss_hermite(m: usize, nodes_per_axis: usize, scale: f64) -> Result<Self> {
        Self::from_spec(RuleSpec {
            m,
            nodes_per_axis,
            kind: RuleKind::GaussHermite { scale },
            prune: None,
        })
    }

    pub fn uniform(m: usize, nodes_per_axis: usize, half_width: f64) -> Result<Self> {
        Self::from_spec(RuleSpec {
            m,
            nodes_per_axis,
            kind: RuleKind::TruncatedUniform { half_width },
            prune: None,
        })
    }

    /// Same rule with negligible-weight nodes removed.
    pub fn pruned(&self, rel: f64) -> Result<Self> {
        let mut spec = self.spec;
        spec.prune = Some(rel);
        Self::from_spec(spec)
    }

    /// The same rule for `x -> factor * x`: nodes and weights scale together,
    /// so a function of width `factor` is resolved as well as this rule
    /// resolves one of width 1.
    pub fn dilated(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidArgument(format!("dilation factor must be positive, got {factor}")));
        }
        let mut spec = self.spec;
        spec.kind = match spec.kind {
            RuleKind::GaussHermite { scale } => RuleKind::GaussHermite { scale: scale * factor },
            RuleKind::TruncatedUniform { half_width } => RuleKind::TruncatedUniform {
                half_width: half_width * factor,
            },
        };
        Self::from_spec(spec)
    }

    pub fn from_spec(spec: RuleSpec) -> Result<Self> {
        check_dim(spec.m)?;
        let n = spec.nodes_per_axis;
        if n == 0 {
            return Err(Error::InvalidArgument("nodes_per_axis must be positive".into()));
        }
        let total = (n as u64).checked_pow(spec.m as u32).unwrap_or(u64::MAX);
        if total > 20_000_000 {
            return Err(Error::InvalidArgument(format!(
                "{n}^{} = {total} nodes is beyond the supported grid size",
                spec.m
            )));
        }
        let (axis_nodes, axis_weights, axis_raw): (Vec<f64>, Vec<f64>, Vec<f64>) = match spec.kind {
            RuleKind::GaussHermite { scale } => {
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(Error::InvalidArgument("Gauss-Hermite scale must be positive".into()));
                }
                let (t, w) = gauss_hermite_1d(n);
                let nodes = t.iter().map(|t| scale * t).collect();
                let full = t.iter().zip(&w).map(|(t, w)| scale * w * (t * t).exp()).collect();
                (nodes, full, w)
            }
            RuleKind::TruncatedUniform { half_width } => {
                if !(half_width > 0.0 && half_width.is_finite()) {
                    return Err(Error::InvalidArgument("uniform half width must be positive".into()));
                }
                let h = 2.0 * half_width / n as f64;
                let nodes = (0..n).map(|i| -half_width + h * (i as f64 + 0.5)).collect();
                (nodes, vec![h; n], vec![1.0; n])
            }
        };
        if let Some(p) = spec.prune {
            if !(p >= 0.0 && p < 1.0) {
                return Err(Error::InvalidArgument("prune fraction must lie in [0, 1)".into()));
            }
        }
        let m = spec.m;
        let raw_max = axis_raw.iter().cloned().fold(0.0, f64::max).powi(m as i32);
        let threshold = spec.prune.map(|p| p * raw_max).unwrap_or(0.0);
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let mut raw = Vec::new();
        let mut idx = vec![0usize; m];
        for _ in 0..total {
            let r: f64 = idx.iter().map(|&i| axis_raw[i]).product();
            if spec.prune.is_none() || r >= threshold {
                points.extend(idx.iter().map(|&i| axis_nodes[i]));
                weights.push(idx.iter().map(|&i| axis_weights[i]).product());
                raw.push(r);
            }
            for d in (0..m).rev() {
                idx[d] += 1;
                if idx[d] < n {
                    break;
                }
                idx[d] = 0;
            }
        }
        Ok(QuadratureRule {
            spec,
            axis_nodes,
            axis_weights,
            points,
            weights,
            raw,
        })
    }

    pub fn spec(&self) -> RuleSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.m
    }

    pub fn kind(&self) -> RuleKind {
        self.spec.kind
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.spec.nodes_per_axis
    }

    pub fn axis_nodes(&self) -> &[f64] {
        &self.axis_nodes
    }

    pub fn axis_weights(&self) -> &[f64] {
        &self.axis_weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let m = self.spec.m;
        &self.points[i * m..(i + 1) * m]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.spec.m)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn raw_weight(&self, i: usize) -> f64 {
        self.raw[i]
    }

    /// `sum_i W_i h(x_i)`.
    pub fn integrate(&self, h: impl Fn(&[f64]) -> f64) -> f64 {
        self.points().zip(&self.weights).map(|(x, w)| w * h(x)).sum()
    }

    /// Largest node norm.
    pub fn max_radius(&self) -> f64 {
        self.points()
            .map(|x| x.iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }
}

/// `|x|` computed from the sorted absolute coordinates, so points that are
/// signed permutations of each other get bit-identical radii.
pub fn canonical_radius(x: &[f64]) -> f64 {
    let mut a: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    a.sort_by(|p, q| p.partial_cmp(q).expect("finite coordinates"));
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Groups points by radius: returns the distinct radii and the class of each point.
pub fn radius_classes<'a>(points: impl Iterator<Item = &'a [f64]>) -> (Vec<f64>, Vec<u32>) {
    let mut index: HashMap<u64, u32> = HashMap::new();
    let mut radii = Vec::new();
    let mut classes = Vec::new();
    for x in points {
        let r = canonical_radius(x);
        let next = radii.len() as u32;
        let c = *index.entry(r.to_bits()).or_insert_with(|| {
            radii.push(r);
            next
        });
        classes.push(c);
    }
    (radii, classes)
}
