//! Orthogonal bases of the spherical monogenics `M_k = ker(dirac) ∩ P_k`.
//!
//! Coordinates of `P_k` are pairs `(monomial, blade)`, ordered by monomial
//! exponent vector and then by blade mask. The Dirac operator maps
//! `x^a e_A` to terms `x^(a - 1_i) e_i e_A`, which preserves the parity vector
//! `s_i = (a_i + [i in A]) mod 2`. The sphere pairing of two coordinates is
//! nonzero only when the blades agree and `a + b` is even, so it preserves the
//! same vector. Both the null space and the Gram–Schmidt pass can therefore be
//! carried out independently on each of the `2^m` parity blocks. Ordering the
//! merged result by the free-column coordinate gives the same basis as one
//! global Gram–Schmidt pass in that order.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::sphere::{normalized_sphere_moment, sphere_pairing};
use super::{Monomial, MvPolynomial};
use crate::clifford::{blade_product_sign, check_dim, Blade, Multivector, Scalar};
use crate::error::{Error, Result};

type Q = BigRational;

/// Orthogonal basis `M_k^(1), .., M_k^(d)` of the real vector space `M_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonogenicBasis {
    m: usize,
    k: usize,
    elements: Vec<MvPolynomial<Q>>,
    /// Sphere-mean squared norms `<M_l, M_l>`.
    norms: Vec<Q>,
}

#[derive(Debug, Clone)]
struct SparseVec {
    key: usize,
    entries: Vec<(usize, Q)>,
}

fn parity_signature(mono: &Monomial, blade: usize) -> usize {
    mono.exponents()
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &a)| {
            let bit = ((a as usize) + ((blade >> i) & 1)) & 1;
            acc | (bit << i)
        })
}

fn rref(mat: &mut [Vec<Q>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == mat.len() {
            break;
        }
        let Some(p) = (row..mat.len()).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let inv = mat[row][col].recip();
        for v in mat[row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..mat.len() {
            if r != row && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                let (src, dst) = if r < row {
                    let (a, b) = mat.split_at_mut(row);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = mat.split_at_mut(r);
                    (&a[row], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d = &*d - &(&f * s);
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

fn primitive(entries: &mut [(usize, Q)]) {
    let mut lcm = BigInt::one();
    for (_, v) in entries.iter() {
        lcm = lcm.lcm(v.denom());
    }
    let mut gcd = BigInt::zero();
    for (_, v) in entries.iter() {
        let scaled = (v * Q::from_integer(lcm.clone())).to_integer();
        gcd = gcd.gcd(&scaled);
    }
    if gcd.is_zero() {
        return;
    }
    let factor = Q::new(lcm, gcd.abs());
    for (_, v) in entries.iter_mut() {
        *v = &*v * &factor;
    }
}

impl MonogenicBasis {
    /// Builds the basis; see the module documentation for the construction.
    pub fn build(m: usize, k: usize) -> Result<Self> {
        check_dim(m)?;
        let nb = 1usize << m;
        let monos = Monomial::all_of_degree(m, k);
        let lower: HashMap<Monomial, usize> = if k == 0 {
            HashMap::new()
        } else {
            Monomial::all_of_degree(m, k - 1)
                .into_iter()
                .enumerate()
                .map(|(i, mono)| (mono, i))
                .collect()
        };

        // Sphere moments between degree-k monomials.
        let nm = monos.len();
        let mut moments = vec![Q::zero(); nm * nm];
        for a in 0..nm {
            for b in a..nm {
                let v = normalized_sphere_moment(m, monos[a].times(&monos[b]).exponents());
                moments[a * nm + b] = v.clone();
                moments[b * nm + a] = v;
            }
        }

        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); nb];
        for (mi, mono) in monos.iter().enumerate() {
            for blade in 0..nb {
                blocks[parity_signature(mono, blade)].push(mi * nb + blade);
            }
        }

        let mut collected: Vec<(SparseVec, Q)> = Vec::new();
        for cols in blocks.iter().filter(|c| !c.is_empty()) {
            // Dirac restricted to this block: rows are image coordinates.
            let mut row_index: HashMap<usize, usize> = HashMap::new();
            let mut entries: Vec<(usize, usize, i64)> = Vec::new();
            for (ci, &coord) in cols.iter().enumerate() {
                let (mi, blade) = (coord / nb, coord % nb);
                let exps = monos[mi].exponents();
                for i in 0..m {
                    let a = exps[i];
                    if a == 0 {
                        continue;
                    }
                    let mut e = exps.to_vec();
                    e[i] -= 1;
                    let target_mono = lower[&Monomial::new(e)];
                    let target = target_mono * nb + (blade ^ (1 << i));
                    let sign = blade_product_sign(1 << i, blade) as i64;
                    let next = row_index.len();
                    let r = *row_index.entry(target).or_insert(next);
                    entries.push((r, ci, sign * a as i64));
                }
            }
            let ncols = cols.len();
            let mut mat = vec![vec![Q::zero(); ncols]; row_index.len()];
            for (r, c, v) in entries {
                mat[r][c] += Q::from_integer(BigInt::from(v));
            }
            let pivots = rref(&mut mat, ncols);
            let pivot_row: HashMap<usize, usize> =
                pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();

            let mut null_vecs = Vec::new();
            for free in (0..ncols).filter(|c| !pivot_row.contains_key(c)) {
                let mut v = vec![Q::zero(); ncols];
                v[free] = Q::one();
                for (&pc, &r) in &pivot_row {
                    v[pc] = -mat[r][free].clone();
                }
                null_vecs.push((cols[free], v));
            }
            null_vecs.sort_by_key(|(key, _)| *key);

            let inner = |u: &[Q], v: &[Q]| -> Q {
                let mut acc = Q::zero();
                for (i, ui) in u.iter().enumerate() {
                    if ui.is_zero() {
                        continue;
                    }
                    let (ma, ba) = (cols[i] / nb, cols[i] % nb);
                    for (j, vj) in v.iter().enumerate() {
                        if vj.is_zero() || cols[j] % nb != ba {
                            continue;
                        }
                        let mom = &moments[ma * nm + cols[j] / nb];
                        if !mom.is_zero() {
                            acc += ui * vj * mom;
                        }
                    }
                }
                acc
            };

            let mut ortho: Vec<(usize, Vec<Q>, Q)> = Vec::new();
            for (key, v) in null_vecs {
                let mut w = v.clone();
                for (_, u, nu) in &ortho {
                    let c = inner(u, &v) / nu;
                    if c.is_zero() {
                        continue;
                    }
                    for (wi, ui) in w.iter_mut().zip(u) {
                        if !ui.is_zero() {
                            *wi = &*wi - &(&c * ui);
                        }
                    }
                }
                let nw = inner(&w, &w);
                ortho.push((key, w, nw));
            }
            for (key, w, _) in ortho {
                let mut entries: Vec<(usize, Q)> = w
                    .into_iter()
                    .enumerate()
                    .filter(|(_, q)| !q.is_zero())
                    .map(|(i, q)| (cols[i], q))
                    .collect();
                primitive(&mut entries);
                let sv = SparseVec { key, entries };
                let norm = {
                    let dense: HashMap<usize, &Q> = sv.entries.iter().map(|(c, q)| (*c, q)).collect();
                    let mut acc = Q::zero();
                    for (ca, qa) in &sv.entries {
                        for (cb, qb) in &dense {
                            if ca % nb == cb % nb {
                                acc += qa * *qb * &moments[(ca / nb) * nm + cb / nb];
                            }
                        }
                    }
                    acc
                };
                collected.push((sv, norm));
            }
        }
        collected.sort_by_key(|(sv, _)| sv.key);

        let mut elements = Vec::with_capacity(collected.len());
        let mut norms = Vec::with_capacity(collected.len());
        for (sv, norm) in collected {
            let mut p = MvPolynomial::<Q>::zero(m);
            for (coord, q) in sv.entries {
                p.add_term(
                    monos[coord / nb].clone(),
                    Multivector::blade(m, Blade((coord % nb) as u8), q),
                );
            }
            elements.push(p);
            norms.push(norm);
        }
        Ok(MonogenicBasis { m, k, elements, norms })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[MvPolynomial<Q>] {
        &self.elements
    }

    /// Sphere-mean squared norms of the elements.
    pub fn norms(&self) -> &[Q] {
        &self.norms
    }

    /// Full matrix of sphere-mean pairings, recomputed from the elements.
    pub fn gram_matrix(&self) -> Vec<Vec<Q>> {
        self.elements
            .iter()
            .map(|a| self.elements.iter().map(|b| sphere_pairing(a, b)).collect())
            .collect()
    }

    pub fn numeric(&self) -> NumericBasis {
        NumericBasis::from_exact(self)
    }

    pub fn to_json(&self) -> BasisJson {
        let nb = 1usize << self.m;
        BasisJson {
            schema: 1,
            m: self.m,
            k: self.k,
            elements: self
                .elements
                .iter()
                .zip(&self.norms)
                .map(|(p, n)| ElementJson {
                    norm: n.to_f64().unwrap_or(f64::NAN),
                    norm_exact: n.to_string(),
                    terms: p
                        .terms()
                        .map(|(mono, c)| TermJson {
                            exponents: mono.exponents().to_vec(),
                            coeffs: (0..nb)
                                .map(|b| c.coeffs()[b].to_f64().unwrap_or(f64::NAN))
                                .collect(),
                            exact: (0..nb).map(|b| c.coeffs()[b].to_string()).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &BasisJson) -> Result<Self> {
        check_dim(json.m)?;
        let nb = 1usize << json.m;
        let parse_q = |s: &str| -> Result<Q> {
            s.parse::<Q>()
                .map_err(|e| Error::Serde(format!("bad rational '{s}': {e}")))
        };
        let mut elements = Vec::new();
        let mut norms = Vec::new();
        for el in &json.elements {
            let mut p = MvPolynomial::<Q>::zero(json.m);
            for t in &el.terms {
                if t.exponents.len() != json.m || t.exact.len() != nb {
                    return Err(Error::Serde("term shape does not match m".into()));
                }
                let coeffs = t.exact.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
                p.add_term(
                    Monomial::new(t.exponents.clone()),
                    Multivector::from_coeffs(json.m, coeffs)?,
                );
            }
            elements.push(p);
            norms.push(parse_q(&el.norm_exact)?);
        }
        Ok(MonogenicBasis {
            m: json.m,
            k: json.k,
            elements,
            norms,
        })
    }
}

/// JSON form of a basis: exponent vectors plus coefficient arrays indexed by
/// blade mask, both as floats and as exact rational strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisJson {
    pub schema: u32,
    pub m: usize,
    pub k: usize,
    pub elements: Vec<ElementJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementJson {
    pub norm: f64,
    pub norm_exact: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coeffs: Vec<f64>,
    pub exact: Vec<String>,
}

/// Floating-point copy of a basis arranged for fast pointwise evaluation.
#[derive(Debug, Clone)]
pub struct NumericBasis {
    m: usize,
    k: usize,
    monomials: Vec<Monomial>,
    /// Per element: `(monomial index, blade mask, coefficient)`.
    entries: Vec<Vec<(usize, usize, f64)>>,
    norms: Vec<f64>,
}

impl NumericBasis {
    fn from_exact(basis: &MonogenicBasis) -> Self {
        let monomials = Monomial::all_of_degree(basis.m, basis.k);
        let index: HashMap<&Monomial, usize> =
            monomials.iter().enumerate().map(|(i, mm)| (mm, i)).collect();
        let entries = basis
            .elements
            .iter()
            .map(|p| {
                let mut v = Vec::new();
                for (mono, c) in p.terms() {
                    for (b, q) in c.coeffs().iter().enumerate() {
                        if !q.is_zero() {
                            v.push((index[mono], b, q.to_f64().unwrap_or(f64::NAN)));
                        }
                    }
                }
                v
            })
            .collect();
        NumericBasis {
            m: basis.m,
            k: basis.k,
            entries,
            norms: basis.norms.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect(),
            monomials,
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sphere_norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Sparse `(monomial index, blade, coefficient)` list of element `l` (0-based).
    pub fn entries(&self, l: usize) -> &[(usize, usize, f64)] {
        &self.entries[l]
    }

    /// Values of the degree-k monomials at `x`, in [`Self::monomials`] order.
    pub fn monomial_values(&self, x: &[f64]) -> Vec<f64> {
        self.monomials.iter().map(|mm| mm.eval(x)).collect()
    }

    /// Element `l` (0-based) at a point, given precomputed monomial values.
    pub fn eval_with(&self, l: usize, mono_vals: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for &(mi, b, c) in &self.entries[l] {
            out[b] += c * mono_vals[mi];
        }
    }

    pub fn eval(&self, l: usize, x: &[f64]) -> Multivector {
        let vals = self.monomial_values(x);
        let mut buf = vec![0.0; 1 << self.m];
        self.eval_with(l, &vals, &mut buf);
        Multivector::from_coeffs(self.m, buf.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
            .expect("basis dimension")
    }

    pub fn polynomial(&self, l: usize) -> MvPolynomial<Complex64> {
        let mut p = MvPolynomial::zero(self.m);
        for &(mi, b, c) in &self.entries[l] {
            p.add_term(
                self.monomials[mi].clone(),
                Multivector::blade(self.m, Blade(b as u8), Complex64::new(c, 0.0)),
            );
        }
        p
    }
}

/// Builds (or fetches from a process-wide cache) the basis of `M_k` in dimension `m`.
pub fn build_monogenic_basis(m: usize, k: usize) -> Result<Arc<MonogenicBasis>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<MonogenicBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().expect("basis cache").get(&(m, k)) {
        return Ok(b.clone());
    }
    let basis = Arc::new(MonogenicBasis::build(m, k)?);
    cache
        .lock()
        .expect("basis cache")
        .insert((m, k), basis.clone());
    Ok(basis)
}

/// Orthogonal projection of a degree-`k` homogeneous polynomial onto `M_k`
/// with respect to the sphere pairing.
///
/// The sphere-orthogonal complement of `M_k` in `P_k` is `x P_{k-1}`, so this
/// coincides with the monogenic component of the Fischer decomposition.
pub fn monogenic_projection<T>(h: &MvPolynomial<T>, k: usize) -> Result<MvPolynomial<T>>
where
    T: Scalar + std::ops::Div<Output = T>,
{
    if !h.is_homogeneous_of(k) {
        return Err(Error::NotHomogeneous { expected: k });
    }
    let basis = build_monogenic_basis(h.dim(), k)?;
    let mut out = MvPolynomial::zero(h.dim());
    for (el, norm) in basis.elements.iter().zip(&basis.norms) {
        let el_t = el.map(T::from_rational);
        let c = sphere_pairing(&el_t, h) / T::from_rational(norm);
        if !c.is_zero() {
            out = out.checked_add(&el_t.scale(&c))?;
        }
    }
    Ok(out)
}
