//! Transforms of many polynomial-times-Gaussian functions at once.
//!
//! Every basis function is a finite combination of scalar channels
//! `|x|^{2i} x^alpha e^{-|x|^2/2}` times blades, so transforming the distinct
//! channels once is enough to transform all of them.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use super::eigen::{numeric_basis, EigenIndex, Parity, SpectralCoeffs};
use super::quad_cft::{kernel_channel_sums, ChannelSums};
use super::quadrature::QuadratureRule;
use crate::clifford::{blade_product_sign, Multivector};
use crate::error::{Error, Result};
use crate::kernel::KernelParams;

/// Scalar channel `|x|^{2 r2_power} x^exponents e^{-|x|^2/2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelKey {
    pub r2_power: usize,
    pub exponents: Vec<u32>,
}

impl ChannelKey {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let mono: f64 = x.iter().zip(&self.exponents).map(|(v, e)| v.powi(*e as i32)).product();
        r2.powi(self.r2_power as i32) * mono * (-0.5 * r2).exp()
    }
}

/// `sum_(key, A) c * channel(key) e_A`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGaussian {
    pub m: usize,
    pub terms: BTreeMap<(ChannelKey, usize), Complex64>,
}

/// Coefficients of `L_j^alpha(t) = sum_i c_i t^i`.
fn laguerre_coeffs(j: usize, alpha: f64) -> Vec<f64> {
    (0..=j)
        .map(|i| {
            // (-1)^i binom(j + alpha, j - i) / i!
            let mut c = 1.0;
            for s in 1..=(j - i) {
                c *= (alpha + i as f64 + s as f64) / s as f64;
            }
            for s in 1..=i {
                c /= s as f64;
            }
            if i % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

impl PolyGaussian {
    pub fn zero(m: usize) -> Self {
        PolyGaussian {
            m,
            terms: BTreeMap::new(),
        }
    }

    fn add(&mut self, key: ChannelKey, blade: usize, c: Complex64) {
        *self.terms.entry((key, blade)).or_default() += c;
    }

    /// Expansion of `psi_idx`.
    pub fn from_eigen(idx: &EigenIndex, m: usize) -> Result<Self> {
        idx.validate(m)?;
        let basis = numeric_basis(m, idx.k)?;
        let lag = laguerre_coeffs(idx.j, idx.alpha(m));
        let mut out = Self::zero(m);
        for &(mono, blade, c) in basis.entries(idx.l - 1) {
            let exps = basis.monomials()[mono].exponents();
            for (i, li) in lag.iter().enumerate() {
                match idx.parity {
                    Parity::Even => {
                        let key = ChannelKey {
                            r2_power: i,
                            exponents: exps.to_vec(),
                        };
                        out.add(key, blade, Complex64::new(li * c, 0.0));
                    }
                    Parity::Odd => {
                        // x_d e_d (mono e_B) = x_d mono sign(d, B) e_{d xor B}
                        for d in 0..m {
                            let g = 1usize << d;
                            let mut e = exps.to_vec();
                            e[d] += 1;
                            let key = ChannelKey {
                                r2_power: i,
                                exponents: e,
                            };
                            let s = blade_product_sign(g, blade) as f64;
                            out.add(key, g ^ blade, Complex64::new(s * li * c, 0.0));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn from_coeffs(c: &SpectralCoeffs) -> Result<Self> {
        let mut out = Self::zero(c.m);
        for (idx, a) in &c.coeffs {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for ((key, blade), v) in Self::from_eigen(idx, c.m)?.terms {
                out.add(key, blade, v * a);
            }
        }
        Ok(out)
    }

    /// The Gaussian `e^{-|x|^2/2}`.
    pub fn gaussian(m: usize) -> Self {
        let mut out = Self::zero(m);
        out.add(
            ChannelKey {
                r2_power: 0,
                exponents: vec![0; m],
            },
            0,
            Complex64::new(1.0, 0.0),
        );
        out
    }

    pub fn eval(&self, x: &[f64]) -> Multivector {
        let mut acc = vec![Complex64::new(0.0, 0.0); 1 << self.m];
        for ((key, blade), c) in &self.terms {
            acc[*blade] += c * key.eval(x);
        }
        Multivector::from_coeffs(self.m, acc).expect("dimension")
    }
}

/// Quadrature transforms of a fixed set of channels at fixed targets.
#[derive(Debug, Clone)]
pub struct ChannelBatch {
    keys: BTreeMap<ChannelKey, usize>,
    sums: ChannelSums,
}

impl ChannelBatch {
    /// Transforms every channel used by `funcs`.
    pub fn new(funcs: &[PolyGaussian], rule: &QuadratureRule, targets: &[Vec<f64>], params: &KernelParams) -> Result<Self> {
        let m = rule.dim();
        let mut keys = BTreeMap::new();
        for f in funcs {
            if f.m != m {
                return Err(Error::DimensionMismatch { expected: m, found: f.m });
            }
            for (key, _) in f.terms.keys() {
                let n = keys.len();
                keys.entry(key.clone()).or_insert(n);
            }
        }
        let nch = keys.len();
        let keyed: Vec<(&ChannelKey, &usize)> = keys.iter().collect();
        let mut flat = vec![0.0; rule.len() * nch];
        flat.par_chunks_mut(nch.max(1)).enumerate().for_each(|(i, row)| {
            let x = rule.point(i);
            for (key, col) in &keyed {
                row[**col] = key.eval(x);
            }
        });
        let ch = Array2::from_shape_vec((rule.len(), nch), flat).expect("channel matrix shape");
        let sums = kernel_channel_sums(rule, ch.view(), targets, params)?;
        Ok(ChannelBatch { keys, sums })
    }

    pub fn num_channels(&self) -> usize {
        self.keys.len()
    }

    pub fn targets(&self) -> &[Vec<f64>] {
        &self.sums.targets
    }

    pub fn max_truncation_estimate(&self) -> f64 {
        self.sums.max_truncation_estimate
    }

    /// `F_-(f)` at target `t`; every channel of `f` must be in the batch.
    pub fn transform_at(&self, f: &PolyGaussian, t: usize) -> Result<Multivector> {
        let m = self.sums.m;
        let nb = 1usize << m;
        let mut acc = vec![Complex64::new(0.0, 0.0); nb];
        let mut buf = vec![0.0; nb];
        for ((key, a), c) in &f.terms {
            let col = *self
                .keys
                .get(key)
                .ok_or_else(|| Error::InvalidArgument("channel missing from the batch".into()))?;
            self.sums.transform_real(col, t, &mut buf);
            for (b, v) in buf.iter().enumerate() {
                if *v != 0.0 {
                    acc[b ^ a] += c * (blade_product_sign(b, *a) as f64 * v);
                }
            }
        }
        Multivector::from_coeffs(m, acc)
    }

    pub fn transform(&self, f: &PolyGaussian) -> Result<Vec<Multivector>> {
        (0..self.sums.targets.len()).map(|t| self.transform_at(f, t)).collect()
    }
}
