//! Arithmetic in the Clifford algebra `Cl(0, m)`: generators `e_1..e_m` with
//! `e_i^2 = -1` and `e_i e_j = -e_j e_i` for `i != j`.
//!
//! A multivector is stored densely as `2^m` coefficients indexed by a blade
//! bitmask (bit `i - 1` set means `e_i` is a factor). Coefficients are generic
//! over [`Scalar`] so the same code runs in complex floating point and in
//! exact rational arithmetic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 6;

/// Coefficient field for multivectors and polynomials.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn conj(&self) -> Self;
    fn abs_sq(&self) -> f64;
    fn from_rational(r: &BigRational) -> Self;
    fn from_f64(x: f64) -> Self;
}

impl Scalar for f64 {
    fn conj(&self) -> Self {
        *self
    }
    fn abs_sq(&self) -> f64 {
        self * self
    }
    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn from_f64(x: f64) -> Self {
        x
    }
}

impl Scalar for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn abs_sq(&self) -> f64 {
        self.norm_sqr()
    }
    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
}

impl Scalar for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }
    fn abs_sq(&self) -> f64 {
        let v = self.to_f64().unwrap_or(f64::NAN);
        v * v
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(BigRational::zero)
    }
}

const fn reorder_sign(a: usize, b: usize) -> i8 {
    // Count transpositions needed to merge the generator lists of a and b into
    // ascending order, then one factor -1 per repeated generator (e_i^2 = -1).
    let mut swaps = 0u32;
    let mut shifted = a >> 1;
    while shifted != 0 {
        swaps += (shifted & b).count_ones();
        shifted >>= 1;
    }
    let squares = (a & b).count_ones();
    if (swaps + squares) % 2 == 0 {
        1
    } else {
        -1
    }
}

const fn build_sign_table() -> [[i8; 1 << MAX_DIM]; 1 << MAX_DIM] {
    let mut table = [[0i8; 1 << MAX_DIM]; 1 << MAX_DIM];
    let mut a = 0;
    while a < (1 << MAX_DIM) {
        let mut b = 0;
        while b < (1 << MAX_DIM) {
            table[a][b] = reorder_sign(a, b);
            b += 1;
        }
        a += 1;
    }
    table
}

/// `SIGN_TABLE[a][b]` is the sign of `e_a e_b = ±e_(a xor b)`. Independent of m.
static SIGN_TABLE: [[i8; 1 << MAX_DIM]; 1 << MAX_DIM] = build_sign_table();

/// Sign of the blade product `e_a e_b`; the resulting blade is `a ^ b`.
#[inline]
pub fn blade_product_sign(a: usize, b: usize) -> i8 {
    SIGN_TABLE[a][b]
}

pub(crate) fn check_dim(m: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&m) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension {
            m,
            reason: "Clifford dimension must satisfy 2 <= m <= 6",
        })
    }
}

/// Canonical blade `e_{i1} e_{i2} ... e_{ik}` with `i1 < i2 < ... < ik`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade(pub u8);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// Builds a blade from 1-based generator indices, which must be strictly increasing.
    pub fn from_indices(m: usize, indices: &[usize]) -> Result<Blade> {
        let mut mask = 0u8;
        let mut last = 0usize;
        for &i in indices {
            if i == 0 || i > m {
                return Err(Error::InvalidArgument(format!(
                    "generator index {i} outside 1..={m}"
                )));
            }
            if i <= last {
                return Err(Error::InvalidArgument(
                    "blade indices must be strictly increasing".into(),
                ));
            }
            mask |= 1 << (i - 1);
            last = i;
        }
        Ok(Blade(mask))
    }

    pub fn generator(i: usize) -> Blade {
        Blade(1 << (i - 1))
    }

    pub fn mask(self) -> usize {
        self.0 as usize
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (0..8).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// `"1"` for the scalar blade, otherwise `"e"` followed by the indices.
    pub fn name(self) -> String {
        if self.0 == 0 {
            return "1".to_string();
        }
        let mut s = String::from("e");
        for i in self.indices() {
            s.push_str(&i.to_string());
        }
        s
    }
}

/// Blades of `Cl(0, m)` ordered by grade, then lexicographically by index list.
pub fn blades_in_display_order(m: usize) -> Vec<Blade> {
    let mut v: Vec<Blade> = (0..(1usize << m)).map(|b| Blade(b as u8)).collect();
    v.sort_by_key(|b| (b.grade(), b.indices()));
    v
}

/// Element `sum_A x_A e_A` of `Cl(0, m)` with coefficients in `T`.
#[derive(Clone, PartialEq)]
pub struct Multivector<T: Scalar = Complex64> {
    m: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> fmt::Debug for Multivector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (b, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                map.entry(&Blade(b as u8).name(), c);
            }
        }
        map.finish()
    }
}

impl<T: Scalar> Multivector<T> {
    pub fn zero(m: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&m), "dimension {m} outside 1..=6");
        Multivector {
            m,
            coeffs: vec![T::zero(); 1 << m],
        }
    }

    pub fn try_zero(m: usize) -> Result<Self> {
        check_dim(m)?;
        Ok(Self::zero(m))
    }

    pub fn scalar(m: usize, s: T) -> Self {
        let mut mv = Self::zero(m);
        mv.coeffs[0] = s;
        mv
    }

    pub fn one(m: usize) -> Self {
        Self::scalar(m, T::one())
    }

    pub fn blade(m: usize, blade: Blade, coeff: T) -> Self {
        assert!(blade.mask() < (1 << m), "blade {} outside Cl(0,{m})", blade.name());
        let mut mv = Self::zero(m);
        mv.coeffs[blade.mask()] = coeff;
        mv
    }

    /// The generator `e_i` (1-based).
    pub fn generator(m: usize, i: usize) -> Self {
        Self::blade(m, Blade::generator(i), T::one())
    }

    pub fn from_coeffs(m: usize, coeffs: Vec<T>) -> Result<Self> {
        check_dim(m)?;
        if coeffs.len() != 1 << m {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                1 << m,
                coeffs.len()
            )));
        }
        Ok(Multivector { m, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [T] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, blade: Blade) -> &T {
        &self.coeffs[blade.mask()]
    }

    pub fn set_coeff(&mut self, blade: Blade, value: T) {
        self.coeffs[blade.mask()] = value;
    }

    pub fn scalar_part(&self) -> T {
        self.coeffs[0].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: other.m,
            });
        }
        Ok(())
    }

    /// Geometric (Clifford) product `self * other`.
    pub fn geometric_product(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = vec![T::zero(); self.coeffs.len()];
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let term = ca.clone() * cb.clone();
                let slot = &mut out[a ^ b];
                if blade_product_sign(a, b) > 0 {
                    *slot = slot.clone() + term;
                } else {
                    *slot = slot.clone() - term;
                }
            }
        }
        Ok(Multivector {
            m: self.m,
            coeffs: out,
        })
    }

    /// `e_blade * self` without building the blade as a multivector.
    pub fn left_mul_blade(&self, blade: Blade) -> Self {
        let a = blade.mask();
        let mut out = vec![T::zero(); self.coeffs.len()];
        for (b, cb) in self.coeffs.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            out[a ^ b] = if blade_product_sign(a, b) > 0 {
                cb.clone()
            } else {
                -cb.clone()
            };
        }
        Multivector {
            m: self.m,
            coeffs: out,
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Multivector {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Multivector {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    /// Projection onto the span of grade-`k` blades.
    pub fn grade_part(&self, k: usize) -> Result<Self> {
        if k > self.m {
            return Err(Error::GradeOutOfRange { grade: k, m: self.m });
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(b, c)| {
                if (b as u32).count_ones() as usize == k {
                    c.clone()
                } else {
                    T::zero()
                }
            })
            .collect();
        Ok(Multivector { m: self.m, coeffs })
    }

    /// True when every nonzero coefficient sits on a blade of one of `grades`.
    pub fn has_only_grades(&self, grades: &[usize]) -> bool {
        self.coeffs.iter().enumerate().all(|(b, c)| {
            c.is_zero() || grades.contains(&((b as u32).count_ones() as usize))
        })
    }

    /// `sum_A |x_A|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs_sq).sum()
    }

    /// `||x||_c = (sum_A |x_A|^2)^(1/2)`.
    pub fn clifford_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Scalar pairing `sum_A conj(self_A) other_A`.
    pub fn scalar_pairing(&self, other: &Self) -> T {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(T::zero(), |acc, (a, b)| acc + a.conj() * b.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Multivector<U> {
        Multivector {
            m: self.m,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl Multivector<Complex64> {
    /// Maximum componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Parses a literal such as `3 + 2*e1 - 1.5*e12` or `(1+2i)*e23`.
    pub fn parse(m: usize, text: &str) -> Result<Self> {
        crate::literal::parse_multivector(m, text)
    }
}

impl fmt::Display for Multivector<Complex64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::literal::format_multivector(self))
    }
}

impl<T: Scalar> Neg for &Multivector<T> {
    type Output = Multivector<T>;
    fn neg(self) -> Multivector<T> {
        Multivector {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<T: Scalar> Neg for Multivector<T> {
    type Output = Multivector<T>;
    fn neg(self) -> Multivector<T> {
        -&self
    }
}

/// Panics on dimension mismatch; use [`Multivector::checked_add`] for a `Result`.
impl<T: Scalar> Add for &Multivector<T> {
    type Output = Multivector<T>;
    fn add(self, rhs: &Multivector<T>) -> Multivector<T> {
        self.checked_add(rhs).expect("multivector dimension mismatch")
    }
}

impl<T: Scalar> Add for Multivector<T> {
    type Output = Multivector<T>;
    fn add(self, rhs: Multivector<T>) -> Multivector<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for &Multivector<T> {
    type Output = Multivector<T>;
    fn sub(self, rhs: &Multivector<T>) -> Multivector<T> {
        self.checked_sub(rhs).expect("multivector dimension mismatch")
    }
}

impl<T: Scalar> Sub for Multivector<T> {
    type Output = Multivector<T>;
    fn sub(self, rhs: Multivector<T>) -> Multivector<T> {
        &self - &rhs
    }
}

/// Panics on dimension mismatch; use [`Multivector::geometric_product`] for a `Result`.
impl<T: Scalar> Mul for &Multivector<T> {
    type Output = Multivector<T>;
    fn mul(self, rhs: &Multivector<T>) -> Multivector<T> {
        self.geometric_product(rhs)
            .expect("multivector dimension mismatch")
    }
}

impl<T: Scalar> Mul for Multivector<T> {
    type Output = Multivector<T>;
    fn mul(self, rhs: Multivector<T>) -> Multivector<T> {
        &self * &rhs
    }
}

/// Real vector `x = sum_i x_i e_i` of `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorM {
    comps: Vec<f64>,
}

impl VectorM {
    pub fn new(comps: Vec<f64>) -> Result<Self> {
        check_dim(comps.len())?;
        Ok(VectorM { comps })
    }

    pub fn zeros(m: usize) -> Self {
        VectorM {
            comps: vec![0.0; m],
        }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[f64] {
        &self.comps
    }

    pub fn scaled(&self, c: f64) -> Self {
        VectorM {
            comps: self.comps.iter().map(|x| x * c).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.comps.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// `<x, y> = sum_j x_j y_j`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(self.comps.iter().zip(&other.comps).map(|(a, b)| a * b).sum())
    }

    /// `x ^ y = sum_{j<k} e_j e_k (x_j y_k - x_k y_j)`.
    pub fn wedge(&self, other: &Self) -> Result<Multivector> {
        self.check_same(other)?;
        let m = self.dim();
        let mut out = Multivector::zero(m);
        for j in 0..m {
            for k in (j + 1)..m {
                let v = self.comps[j] * other.comps[k] - self.comps[k] * other.comps[j];
                out.coeffs[(1 << j) | (1 << k)] = Complex64::new(v, 0.0);
            }
        }
        Ok(out)
    }

    pub fn to_multivector(&self) -> Multivector {
        let mut out = Multivector::zero(self.dim());
        for (i, &x) in self.comps.iter().enumerate() {
            out.coeffs[1 << i] = Complex64::new(x, 0.0);
        }
        out
    }
}
