//! The Laguerre–monogenic basis
//! `psi_{2j,k,l} = L_j^{m/2+k-1}(r^2) M_k^(l)(x) e^{-r^2/2}` and
//! `psi_{2j+1,k,l} = L_j^{m/2+k}(r^2) x M_k^(l)(x) e^{-r^2/2}`,
//! which diagonalizes both transforms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::SampledField;
use super::quadrature::QuadratureRule;
use crate::clifford::{blade_product_sign, Multivector};
use crate::error::{Error, Result};
use crate::poly::{build_monogenic_basis, sphere_area, NumericBasis};
use crate::special::RecurrenceRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Which transform: `F_+` or `F_-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(Error::InvalidArgument(format!("sign must be + or -, got '{s}'"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Index `(parity, j, k, l)` with `l` counted from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EigenIndex {
    pub parity: Parity,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl EigenIndex {
    pub fn new(parity: Parity, j: usize, k: usize, l: usize) -> Self {
        EigenIndex { parity, j, k, l }
    }

    pub fn even(j: usize, k: usize, l: usize) -> Self {
        Self::new(Parity::Even, j, k, l)
    }

    pub fn odd(j: usize, k: usize, l: usize) -> Self {
        Self::new(Parity::Odd, j, k, l)
    }

    /// The first subscript: `2j` or `2j + 1`.
    pub fn n(&self) -> usize {
        match self.parity {
            Parity::Even => 2 * self.j,
            Parity::Odd => 2 * self.j + 1,
        }
    }

    /// Laguerre parameter of the radial factor.
    pub fn alpha(&self, m: usize) -> f64 {
        let base = m as f64 / 2.0 + self.k as f64 - 1.0;
        match self.parity {
            Parity::Even => base,
            Parity::Odd => base + 1.0,
        }
    }

    /// Total polynomial degree of the non-Gaussian factor.
    pub fn degree(&self) -> usize {
        2 * self.j + self.k + usize::from(self.parity == Parity::Odd)
    }

    /// Checks `l` against the basis size of `M_k`.
    pub fn validate(&self, m: usize) -> Result<()> {
        let dim = monogenic_dim(m, self.k)?;
        if self.l == 0 || self.l > dim {
            return Err(Error::IndexOutOfRange(format!(
                "l = {} for m = {m}, k = {}: valid range is 1..={dim}",
                self.l, self.k
            )));
        }
        Ok(())
    }
}

impl fmt::Display for EigenIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi[{},{},{}]", self.n(), self.k, self.l)
    }
}

/// Real dimension of `M_k` in dimension `m`.
pub fn monogenic_dim(m: usize, k: usize) -> Result<usize> {
    Ok(numeric_basis(m, k)?.len())
}

/// Floating-point basis of `M_k`, shared process-wide.
pub fn numeric_basis(m: usize, k: usize) -> Result<Arc<NumericBasis>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<NumericBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().expect("numeric basis cache").get(&(m, k)) {
        return Ok(b.clone());
    }
    let nb = Arc::new(build_monogenic_basis(m, k)?.numeric());
    cache.lock().expect("numeric basis cache").insert((m, k), nb.clone());
    Ok(nb)
}

/// Eigenvalue of `psi_idx` under `F_+` (`Sign::Plus`) or `F_-`.
///
/// Even: `(-1)^{j+k} (-+1)^k`; odd: `i^m (-1)^{j+1} (-+1)^{k+m-1}`.
pub fn eigenvalue(idx: &EigenIndex, m: usize, sign: Sign) -> Complex64 {
    let neg = |e: usize| if e % 2 == 0 { 1.0 } else { -1.0 };
    // (-+1)^e: -1 for F_+, +1 for F_-
    let mp = |e: usize| match sign {
        Sign::Plus => neg(e),
        Sign::Minus => 1.0,
    };
    match idx.parity {
        Parity::Even => Complex64::new(neg(idx.j + idx.k) * mp(idx.k), 0.0),
        Parity::Odd => {
            let im = Complex64::i().powu(m as u32);
            im * (neg(idx.j + 1) * mp(idx.k + m - 1))
        }
    }
}

/// `Gamma(j + alpha + 1) / j!` by a running product from `Gamma(alpha + 1)`.
fn laguerre_mass(j: usize, alpha: f64) -> f64 {
    let mut v = statrs::function::gamma::gamma(alpha + 1.0);
    if alpha.fract() == 0.0 {
        v = (1..=alpha as usize).fold(1.0, |acc, i| acc * i as f64);
    }
    for i in 1..=j {
        v *= (i as f64 + alpha) / i as f64;
    }
    v
}

/// `||psi_idx||^2 = |S^{m-1}| <M, M>_S  Gamma(j + alpha + 1) / (2 j!)`.
pub fn closed_form_norm_sq(idx: &EigenIndex, m: usize) -> Result<f64> {
    idx.validate(m)?;
    let basis = numeric_basis(m, idx.k)?;
    let mu = basis.sphere_norms()[idx.l - 1];
    Ok(sphere_area(m) * mu * 0.5 * laguerre_mass(idx.j, idx.alpha(m)))
}

/// A single basis function, evaluable pointwise.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    pub idx: EigenIndex,
    m: usize,
    basis: Arc<NumericBasis>,
    row: RecurrenceRow,
}

/// Writes `x M` into `out` given the coefficients of `M`.
fn left_mul_vector(x: &[f64], mv: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0.0 {
            continue;
        }
        let g = 1usize << i;
        for (b, c) in mv.iter().enumerate() {
            if *c != 0.0 {
                out[g ^ b] += blade_product_sign(g, b) as f64 * xi * c;
            }
        }
    }
}

impl Eigenfunction {
    pub fn new(idx: EigenIndex, m: usize) -> Result<Self> {
        idx.validate(m)?;
        Ok(Eigenfunction {
            idx,
            m,
            basis: numeric_basis(m, idx.k)?,
            row: RecurrenceRow::laguerre(idx.alpha(m), idx.j)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Real blade coefficients of `psi(x)`.
    pub fn eval_real(&self, x: &[f64], out: &mut [f64]) {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let lag = self.row.values(r2, self.idx.j + 1)[self.idx.j];
        let scale = lag * (-0.5 * r2).exp();
        let mono = self.basis.monomial_values(x);
        let mut mv = vec![0.0; 1 << self.m];
        self.basis.eval_with(self.idx.l - 1, &mono, &mut mv);
        match self.idx.parity {
            Parity::Even => out.copy_from_slice(&mv),
            Parity::Odd => left_mul_vector(x, &mv, out),
        }
        out.iter_mut().for_each(|v| *v *= scale);
    }

    pub fn eval(&self, x: &[f64]) -> Multivector {
        let mut out = vec![0.0; 1 << self.m];
        self.eval_real(x, &mut out);
        Multivector::from_coeffs(self.m, out.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
            .expect("dimension")
    }

    pub fn norm_sq(&self) -> f64 {
        closed_form_norm_sq(&self.idx, self.m).expect("validated index")
    }

    pub fn sample(&self, rule: Arc<QuadratureRule>) -> Result<SampledField> {
        SampledField::from_fn(rule, self.idx.to_string(), |x| self.eval(x))
    }
}

/// Constructs `psi_idx` for dimension `m`.
pub fn eigenfunction(idx: EigenIndex, m: usize) -> Result<Eigenfunction> {
    Eigenfunction::new(idx, m)
}

/// Every index with `j <= max_j`, `k <= max_k` (both parities, all `l`), in index order.
pub fn indices_up_to(m: usize, max_j: usize, max_k: usize) -> Result<Vec<EigenIndex>> {
    let mut out = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        for j in 0..=max_j {
            for k in 0..=max_k {
                for l in 1..=monogenic_dim(m, k)? {
                    out.push(EigenIndex::new(parity, j, k, l));
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Finite expansion `f = sum psi_idx a_idx` with complex scalar coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCoeffs {
    pub m: usize,
    pub coeffs: BTreeMap<EigenIndex, Complex64>,
    /// `||f - sum psi a||_2` on the analysis rule (zero for synthetic expansions).
    pub residual_norm: f64,
}

impl SpectralCoeffs {
    pub fn new(m: usize) -> Self {
        SpectralCoeffs {
            m,
            coeffs: BTreeMap::new(),
            residual_norm: 0.0,
        }
    }

    pub fn from_pairs(m: usize, pairs: impl IntoIterator<Item = (EigenIndex, Complex64)>) -> Result<Self> {
        let mut c = Self::new(m);
        for (idx, a) in pairs {
            idx.validate(m)?;
            *c.coeffs.entry(idx).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        Ok(c)
    }

    pub fn get(&self, idx: &EigenIndex) -> Complex64 {
        self.coeffs.get(idx).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|a| a.norm_sqr() == 0.0)
    }

    /// `||f||^2 = sum |a|^2 ||psi||^2` with closed-form basis norms.
    pub fn norm_sq(&self) -> Result<f64> {
        let mut total = 0.0;
        for (idx, a) in &self.coeffs {
            total += a.norm_sqr() * closed_form_norm_sq(idx, self.m)?;
        }
        Ok(total)
    }

    /// Value of the expansion at `x`.
    pub fn eval(&self, x: &[f64]) -> Result<Multivector> {
        let evaluator = ExpansionEvaluator::new(self)?;
        Ok(evaluator.eval(x))
    }
}

/// Precomputed evaluator for an expansion.
pub struct ExpansionEvaluator {
    m: usize,
    terms: Vec<(Eigenfunction, Complex64)>,
}

impl ExpansionEvaluator {
    pub fn new(c: &SpectralCoeffs) -> Result<Self> {
        let terms = c
            .coeffs
            .iter()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(idx, a)| Ok((Eigenfunction::new(*idx, c.m)?, *a)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExpansionEvaluator { m: c.m, terms })
    }

    pub fn eval(&self, x: &[f64]) -> Multivector {
        let nb = 1 << self.m;
        let mut buf = vec![0.0; nb];
        let mut acc = vec![Complex64::new(0.0, 0.0); nb];
        for (psi, a) in &self.terms {
            psi.eval_real(x, &mut buf);
            for (s, v) in acc.iter_mut().zip(&buf) {
                *s += a * v;
            }
        }
        Multivector::from_coeffs(self.m, acc).expect("dimension")
    }
}

/// Fixed-size chunked reduction: partial results are combined in chunk
/// order, so the sum does not depend on the number of worker threads.
pub(crate) fn deterministic_reduce<T: Send>(
    len: usize,
    chunk: usize,
    map: impl Fn(std::ops::Range<usize>) -> T + Sync + Send,
    mut fold: impl FnMut(&mut T, T),
) -> Option<T> {
    let ranges: Vec<_> = (0..len).step_by(chunk.max(1)).map(|s| s..(s + chunk).min(len)).collect();
    let parts: Vec<T> = ranges.into_par_iter().map(map).collect();
    let mut iter = parts.into_iter();
    let mut acc = iter.next()?;
    for p in iter {
        fold(&mut acc, p);
    }
    Some(acc)
}

/// Projects a sampled field onto `psi_idx` for `j <= max_j`, `k <= max_k`.
///
/// Coefficients are `<psi, f> / <psi, psi>` with both pairings taken by the
/// field's quadrature rule.
pub fn analyze(f: &SampledField, max_j: usize, max_k: usize) -> Result<SpectralCoeffs> {
    let m = f.dim();
    let indices = indices_up_to(m, max_j, max_k)?;
    let psis = indices
        .iter()
        .map(|i| Eigenfunction::new(*i, m))
        .collect::<Result<Vec<_>>>()?;
    let rule = f.rule().clone();
    let nb = 1usize << m;
    let n_idx = indices.len();
    let (proj, norms) = deterministic_reduce(
        rule.len(),
        2048,
        |range| {
            let mut proj = vec![Complex64::new(0.0, 0.0); n_idx];
            let mut norms = vec![0.0; n_idx];
            let mut buf = vec![0.0; nb];
            for i in range {
                let x = rule.point(i);
                let w = rule.weights()[i];
                let fv = f.values()[i].coeffs();
                for (t, psi) in psis.iter().enumerate() {
                    psi.eval_real(x, &mut buf);
                    let mut p = Complex64::new(0.0, 0.0);
                    let mut n = 0.0;
                    for (b, v) in buf.iter().enumerate() {
                        p += fv[b] * *v;
                        n += v * v;
                    }
                    proj[t] += p * w;
                    norms[t] += n * w;
                }
            }
            (proj, norms)
        },
        |acc, part| {
            for (a, b) in acc.0.iter_mut().zip(part.0) {
                *a += b;
            }
            for (a, b) in acc.1.iter_mut().zip(part.1) {
                *a += b;
            }
        },
    )
    .unwrap_or_else(|| (vec![Complex64::new(0.0, 0.0); n_idx], vec![0.0; n_idx]));

    let mut out = SpectralCoeffs::new(m);
    for (t, idx) in indices.iter().enumerate() {
        let exact = closed_form_norm_sq(idx, m)?;
        if !(norms[t] > 1e-8 * exact) {
            return Err(Error::IllConditioned {
                index: idx.to_string(),
                norm_sq: norms[t],
            });
        }
        out.coeffs.insert(*idx, proj[t] / norms[t]);
    }
    let synth = synthesize(&out, rule.clone())?;
    let diff = f.values().iter().zip(synth.values()).zip(rule.weights());
    out.residual_norm = diff.map(|((a, b), w)| w * (a - b).norm_sq()).sum::<f64>().sqrt();
    Ok(out)
}

/// Samples an expansion on the nodes of `rule`.
pub fn synthesize(c: &SpectralCoeffs, rule: Arc<QuadratureRule>) -> Result<SampledField> {
    if rule.dim() != c.m {
        return Err(Error::DimensionMismatch {
            expected: c.m,
            found: rule.dim(),
        });
    }
    let ev = ExpansionEvaluator::new(c)?;
    SampledField::from_fn(rule, "synthesized", |x| ev.eval(x))
}

/// Coefficients of `c e^{-p |x|^2}` on the track `psi_{2j,0,1}`, from
/// `e^{-p r^2} = e^{-r^2/2} sum_j (1 - s)^{alpha+1} s^j L_j^alpha(r^2)` with
/// `s = (p - 1/2) / (p + 1/2)` and `alpha = m/2 - 1`.
///
/// Terms are added until their share of `||f||^2` drops below `tol^2`.
pub fn gaussian_coeffs(m: usize, p: f64, c: Complex64, tol: f64) -> Result<SpectralCoeffs> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("Gaussian rate must be positive, got {p}")));
    }
    let basis = numeric_basis(m, 0)?;
    if basis.entries(0) != [(0, 0, 1.0)] {
        return Err(Error::InvalidArgument("first degree-0 basis element is not the constant 1".into()));
    }
    let total = c.norm_sqr() * (std::f64::consts::PI / (2.0 * p)).powf(m as f64 / 2.0);
    let s = (p - 0.5) / (p + 0.5);
    let alpha = m as f64 / 2.0 - 1.0;
    let mut out = SpectralCoeffs::new(m);
    let mut a = c * (1.0 - s).powf(alpha + 1.0);
    let mut last = 0.0;
    for j in 0..5000 {
        let idx = EigenIndex::even(j, 0, 1);
        let share = a.norm_sqr() * closed_form_norm_sq(&idx, m)?;
        if a.norm_sqr() > 0.0 {
            out.coeffs.insert(idx, a);
        }
        last = share;
        if s == 0.0 || (j > 0 && share <= tol * tol * total) {
            break;
        }
        a *= s;
    }
    // the shares decay roughly like s^{2j}
    out.residual_norm = (last * s * s / (1.0 - s * s)).sqrt();
    Ok(out)
}

/// Applies `F_+` or `F_-` in coefficient space.
pub fn cft_spectral(c: &SpectralCoeffs, sign: Sign) -> SpectralCoeffs {
    SpectralCoeffs {
        m: c.m,
        coeffs: c
            .coeffs
            .iter()
            .map(|(idx, a)| (*idx, a * eigenvalue(idx, c.m, sign)))
            .collect(),
        residual_norm: c.residual_norm,
    }
}

/// Spectral transform of a sampled field: analyze, multiply, resynthesize.
pub fn cft_spectral_field(f: &SampledField, sign: Sign, max_j: usize, max_k: usize) -> Result<SampledField> {
    let c = analyze(f, max_j, max_k)?;
    let mut out = synthesize(&cft_spectral(&c, sign), f.rule().clone())?;
    out.name = format!("F{sign}({})", f.name);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn documented_eigenvalues() {
        // m = 4, even j=1 k=1: (-1)^2 (-+1)^1
        assert_eq!(eigenvalue(&EigenIndex::even(1, 1, 1), 4, Sign::Plus), c(-1.0));
        assert_eq!(eigenvalue(&EigenIndex::even(1, 1, 1), 4, Sign::Minus), c(1.0));
        // m = 4, odd j=0 k=0: i^4 (-1)^1 (-+1)^3
        assert_eq!(eigenvalue(&EigenIndex::odd(0, 0, 1), 4, Sign::Plus), c(1.0));
        assert_eq!(eigenvalue(&EigenIndex::odd(0, 0, 1), 4, Sign::Minus), c(-1.0));
    }

    #[test]
    fn eigenvalues_are_unimodular_and_real_for_even_m() {
        for m in [2, 4, 6] {
            for idx in indices_up_to(m, 2, 2).unwrap().iter().step_by(7) {
                for s in [Sign::Plus, Sign::Minus] {
                    let e = eigenvalue(idx, m, s);
                    assert!((e.norm() - 1.0).abs() < 1e-15);
                    assert!(e.im.abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn basic_eigenfunctions() {
        let x = [0.3, -0.4, 0.1, 0.7];
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let g = (-0.5 * r2).exp();
        let psi0 = eigenfunction(EigenIndex::even(0, 0, 1), 4).unwrap().eval(&x);
        assert!(psi0.max_abs_diff(&Multivector::scalar(4, c(g))) < 1e-15);
        let psi1 = eigenfunction(EigenIndex::odd(0, 0, 1), 4).unwrap().eval(&x);
        let want = crate::clifford::VectorM::new(x.to_vec()).unwrap().to_multivector().scale(&c(g));
        assert!(psi1.max_abs_diff(&want) < 1e-15);
        // psi_{2,0,1}(0) = L_1^1(0) = 2
        let psi2 = eigenfunction(EigenIndex::even(1, 0, 1), 4).unwrap().eval(&[0.0; 4]);
        assert!((psi2.scalar_part() - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn index_validation() {
        assert!(EigenIndex::even(0, 0, 0).validate(4).is_err());
        assert!(EigenIndex::even(0, 1, 48).validate(4).is_ok());
        assert!(matches!(EigenIndex::even(0, 1, 49).validate(4), Err(Error::IndexOutOfRange(_))));
        assert_eq!(EigenIndex::odd(1, 1, 1).to_string(), "psi[3,1,1]");
    }

    #[test]
    fn closed_form_norms_match_quadrature() {
        let rule = Arc::new(QuadratureRule::gauss_hermite(4, 12, 1.0).unwrap());
        for idx in [EigenIndex::even(0, 0, 1), EigenIndex::odd(1, 1, 3), EigenIndex::even(2, 2, 10), EigenIndex::odd(0, 3, 100)] {
            let psi = eigenfunction(idx, 4).unwrap();
            let q = psi.sample(rule.clone()).unwrap().norm_sq();
            assert!((q - psi.norm_sq()).abs() < 1e-10 * q, "{idx}: {q} vs {}", psi.norm_sq());
        }
    }

    #[test]
    fn analyze_single_and_combined() {
        let m = 2;
        let rule = Arc::new(QuadratureRule::gauss_hermite(m, 14, 1.0).unwrap());
        let psi = eigenfunction(EigenIndex::odd(1, 1, 1), m).unwrap().sample(rule.clone()).unwrap();
        let a = analyze(&psi, 2, 2).unwrap();
        for (idx, v) in &a.coeffs {
            let want = if *idx == EigenIndex::odd(1, 1, 1) { 1.0 } else { 0.0 };
            assert!((v - c(want)).norm() < 1e-8, "{idx}: {v}");
        }
        let zero = SampledField::new(rule.clone(), vec![Multivector::zero(m); rule.len()], "0").unwrap();
        assert!(analyze(&zero, 1, 1).unwrap().is_zero());
        let combo = SpectralCoeffs::from_pairs(m, [(EigenIndex::even(0, 0, 1), c(1.0)), (EigenIndex::odd(0, 0, 1), c(2.0))]).unwrap();
        let f = synthesize(&combo, rule).unwrap();
        let a = analyze(&f, 1, 1).unwrap();
        assert!((a.get(&EigenIndex::even(0, 0, 1)) - c(1.0)).norm() < 1e-10);
        assert!((a.get(&EigenIndex::odd(0, 0, 1)) - c(2.0)).norm() < 1e-10);
        assert!(a.residual_norm < 1e-8);
    }

    #[test]
    fn spectral_transform_round_trip_product() {
        // F_+ F_- multiplies psi_idx by the product of the two eigenvalues;
        // F_- is an involution for even m.
        let m = 4;
        let idx: Vec<_> = indices_up_to(m, 2, 1).unwrap();
        let c0 = SpectralCoeffs::from_pairs(m, idx.iter().map(|i| (*i, c(1.0)))).unwrap();
        let twice = cft_spectral(&cft_spectral(&c0, Sign::Minus), Sign::Plus);
        for i in &idx {
            let prod = eigenvalue(i, m, Sign::Minus) * eigenvalue(i, m, Sign::Plus);
            assert_eq!(twice.get(i), prod);
        }
        let inv = cft_spectral(&cft_spectral(&c0, Sign::Minus), Sign::Minus);
        assert_eq!(inv, c0);
    }

    #[test]
    fn gaussian_expansion_reproduces_gaussian() {
        for (m, p) in [(2usize, 0.25), (4, 0.8), (4, 2.0), (6, 0.5)] {
            let g = gaussian_coeffs(m, p, c(1.5), 1e-15).unwrap();
            let ev = ExpansionEvaluator::new(&g).unwrap();
            for r in [0.0, 0.7, 1.9] {
                let mut x = vec![0.0; m];
                x[0] = r * 0.6;
                x[1] = r * 0.8;
                let want = 1.5 * (-p * r * r).exp();
                assert!((ev.eval(&x).scalar_part() - c(want)).norm() < 1e-12, "m={m} p={p} r={r}");
            }
            assert!(g.residual_norm < 1e-7);
        }
        assert_eq!(gaussian_coeffs(4, 0.5, c(1.0), 1e-12).unwrap().coeffs.len(), 1);
        assert!(gaussian_coeffs(4, 0.0, c(1.0), 1e-12).is_err());
    }

    #[test]
    fn radial_square_recurrences_pointwise() {
        // r^2 psi_n = -(j+1) psi_{n+2} + (m/2 + k + n) psi_n - (alpha + j) psi_{n-2}
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for m in [2usize, 4] {
            for k in 0..=2 {
                for parity in [Parity::Even, Parity::Odd] {
                    for j in 0..=3 {
                        let idx = EigenIndex::new(parity, j, k, 1);
                        let alpha = idx.alpha(m);
                        let psi = |jj: usize| eigenfunction(EigenIndex::new(parity, jj, k, 1), m).unwrap();
                        let (up, mid) = (psi(j + 1), psi(j));
                        for _ in 0..20 {
                            let x: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
                            let r2: f64 = x.iter().map(|v| v * v).sum();
                            let mut rhs = up.eval(&x).scale(&c(-(j as f64 + 1.0)));
                            rhs = rhs.checked_add(&mid.eval(&x).scale(&c(m as f64 / 2.0 + (k + idx.n()) as f64))).unwrap();
                            if j > 0 {
                                rhs = rhs.checked_add(&psi(j - 1).eval(&x).scale(&c(-(alpha + j as f64)))).unwrap();
                            }
                            let lhs = mid.eval(&x).scale(&c(r2));
                            assert!(lhs.max_abs_diff(&rhs) < 1e-10, "m={m} {idx} x={x:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn deterministic_reduce_is_chunk_ordered() {
        let s = deterministic_reduce(10, 3, |r| r.map(|i| i as f64).sum::<f64>(), |a, b| *a += b);
        assert_eq!(s, Some(45.0));
        assert_eq!(deterministic_reduce(0, 3, |_| 0.0, |a: &mut f64, b| *a += b), None);
    }
}
