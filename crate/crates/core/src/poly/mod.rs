//! Polynomials in `x_1..x_m` with multivector coefficients, the Dirac operator
//! `sum_i e_i d/dx_i` and the angular Gamma operator.

mod monogenic;
mod sphere;

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::clifford::{Blade, Multivector, Scalar};
use crate::error::{Error, Result};

pub use monogenic::{
    build_monogenic_basis, monogenic_projection, BasisJson, MonogenicBasis, NumericBasis,
};
pub use sphere::{normalized_sphere_moment, sphere_area, sphere_pairing};

/// Exponent vector `(a_1, .., a_m)` of `x_1^a_1 ... x_m^a_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(m: usize) -> Self {
        Monomial(vec![0; m])
    }

    pub fn variable(m: usize, i: usize) -> Self {
        let mut e = vec![0; m];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn bumped(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }

    /// `d/dx_i` as `(factor, monomial)`, or `None` when the exponent is zero.
    fn derivative(&self, i: usize) -> Option<(u32, Monomial)> {
        let a = self.0[i];
        if a == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some((a, Monomial(e)))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }

    /// All exponent vectors of total degree `k` in `m` variables, ascending.
    pub fn all_of_degree(m: usize, k: usize) -> Vec<Monomial> {
        fn rec(m: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if cur.len() == m - 1 {
                cur.push(left);
                out.push(Monomial(cur.clone()));
                cur.pop();
                return;
            }
            for a in 0..=left {
                cur.push(a);
                rec(m, left - a, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, k as u32, &mut Vec::with_capacity(m), &mut out);
        out.sort();
        out
    }
}

/// `sum_alpha x^alpha c_alpha`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct MvPolynomial<T: Scalar = Complex64> {
    m: usize,
    terms: BTreeMap<Monomial, Multivector<T>>,
}

impl<T: Scalar> MvPolynomial<T> {
    pub fn zero(m: usize) -> Self {
        MvPolynomial {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Multivector<T>) -> Self {
        let mut p = Self::zero(c.dim());
        p.add_term(Monomial::one(c.dim()), c);
        p
    }

    pub fn term(mono: Monomial, c: Multivector<T>) -> Self {
        let mut p = Self::zero(c.dim());
        p.add_term(mono, c);
        p
    }

    /// The vector variable `x = sum_i x_i e_i`.
    pub fn vector_variable(m: usize) -> Self {
        let mut p = Self::zero(m);
        for i in 0..m {
            p.add_term(
                Monomial::variable(m, i),
                Multivector::blade(m, Blade::generator(i + 1), T::one()),
            );
        }
        p
    }

    /// `||x||^2 = sum_i x_i^2` as a scalar polynomial.
    pub fn radial_square(m: usize) -> Self {
        let mut p = Self::zero(m);
        for i in 0..m {
            let mut e = vec![0; m];
            e[i] = 2;
            p.add_term(Monomial(e), Multivector::one(m));
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Multivector<T>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: &Monomial) -> Option<&Multivector<T>> {
        self.terms.get(mono)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, c: Multivector<T>) {
        assert_eq!(mono.0.len(), self.m, "monomial arity");
        assert_eq!(c.dim(), self.m, "coefficient dimension");
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&mono) {
            Some(prev) => {
                let sum = &prev + &c;
                if !sum.is_zero() {
                    self.terms.insert(mono, sum);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    /// Maximum total degree of a stored term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// True when every term has total degree `k` (the zero polynomial qualifies).
    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|mono| mono.degree() == k)
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

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(mono.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            out.add_term(mono.clone(), c.scale(s));
        }
        out
    }

    /// `a * p` with `a` multiplying every coefficient from the left.
    pub fn left_mul(&self, a: &Multivector<T>) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            out.add_term(mono.clone(), a * c);
        }
        out
    }

    /// `p * a` with `a` multiplying every coefficient from the right.
    pub fn right_mul(&self, a: &Multivector<T>) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            out.add_term(mono.clone(), c * a);
        }
        out
    }

    /// Product of polynomials; coefficients multiply with the geometric product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.m);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// `x * p` for the vector variable `x`.
    pub fn vector_times(&self) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            for i in 0..self.m {
                out.add_term(mono.bumped(i), c.left_mul_blade(Blade::generator(i + 1)));
            }
        }
        out
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            if let Some((a, d)) = mono.derivative(i) {
                out.add_term(d, c.scale(&int_scalar::<T>(a as i64)));
            }
        }
        out
    }

    /// Dirac operator `sum_i e_i d/dx_i`, generators acting from the left.
    pub fn dirac(&self) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            for i in 0..self.m {
                if let Some((a, d)) = mono.derivative(i) {
                    let t = c
                        .left_mul_blade(Blade::generator(i + 1))
                        .scale(&int_scalar::<T>(a as i64));
                    out.add_term(d, t);
                }
            }
        }
        out
    }

    /// Gamma operator `-sum_{j<k} e_j e_k (x_j d/dx_k - x_k d/dx_j)`.
    pub fn gamma(&self) -> Self {
        let m = self.m;
        let mut out = Self::zero(m);
        for (mono, c) in &self.terms {
            for j in 0..m {
                for k in (j + 1)..m {
                    let ejk = c.left_mul_blade(Blade((1 << j | 1 << k) as u8));
                    // -e_j e_k x_j d/dx_k
                    if let Some((a, d)) = mono.derivative(k) {
                        out.add_term(d.bumped(j), ejk.scale(&int_scalar::<T>(-(a as i64))));
                    }
                    // +e_j e_k x_k d/dx_j
                    if let Some((a, d)) = mono.derivative(j) {
                        out.add_term(d.bumped(k), ejk.scale(&int_scalar::<T>(a as i64)));
                    }
                }
            }
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MvPolynomial<U> {
        let mut out = MvPolynomial::<U>::zero(self.m);
        for (mono, c) in &self.terms {
            out.add_term(mono.clone(), c.map(&f));
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> Multivector<T> {
        assert_eq!(x.len(), self.m, "evaluation point dimension");
        let mut acc = Multivector::zero(self.m);
        for (mono, c) in &self.terms {
            acc = &acc + &c.scale(&T::from_f64(mono.eval(x)));
        }
        acc
    }
}

impl MvPolynomial<Complex64> {
    pub fn parse(m: usize, text: &str) -> Result<Self> {
        crate::literal::parse_polynomial(m, text)
    }
}

impl std::fmt::Display for MvPolynomial<Complex64> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::literal::format_polynomial(self))
    }
}

pub(crate) fn int_scalar<T: Scalar>(n: i64) -> T {
    use num_bigint::BigInt;
    T::from_rational(&num_rational::BigRational::from_integer(BigInt::from(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        int_scalar(n)
    }

    #[test]
    fn dirac_of_vector_variable_is_minus_m() {
        for m in 2..=6 {
            let x = MvPolynomial::<Q>::vector_variable(m);
            assert_eq!(x.dirac(), MvPolynomial::constant(Multivector::scalar(m, q(-(m as i64)))));
        }
    }

    #[test]
    fn dirac_kills_constants_and_hand_example() {
        let c = MvPolynomial::<Q>::constant(Multivector::scalar(3, q(5)));
        assert!(c.dirac().is_zero());
        // x1 - e12 x2 in m = 2: e1 * 1 + e2 * (-e12) = e1 - e1 = 0
        let mut p = MvPolynomial::<Q>::zero(2);
        p.add_term(Monomial::variable(2, 0), Multivector::one(2));
        p.add_term(Monomial::variable(2, 1), Multivector::blade(2, Blade(0b11), q(-1)));
        assert!(p.dirac().is_zero());
    }

    #[test]
    fn gamma_hand_examples() {
        // Gamma x1 = -e1e2 (x1 * 0 - x2 * 1) = x2 e12
        let x1 = MvPolynomial::<Q>::term(Monomial::variable(2, 0), Multivector::one(2));
        let expected = MvPolynomial::term(Monomial::variable(2, 1), Multivector::blade(2, Blade(0b11), q(1)));
        assert_eq!(x1.gamma(), expected);
        for m in 2..=5 {
            assert!(MvPolynomial::<Q>::radial_square(m).gamma().is_zero());
        }
    }

    #[test]
    fn degree_bookkeeping() {
        let p = MvPolynomial::<Q>::radial_square(3)
            .mul(&MvPolynomial::vector_variable(3))
            .unwrap();
        assert!(p.is_homogeneous_of(3));
        assert!(p.dirac().is_homogeneous_of(2));
        assert!(p.gamma().is_homogeneous_of(3));
        assert_eq!(MvPolynomial::<Q>::zero(3).degree(), None);
    }

    #[test]
    fn euler_identity_x_dirac() {
        // x d_x = -E - Gamma on homogeneous polynomials of degree k.
        let p = MvPolynomial::<Complex64>::parse(3, "(1 + e2)*x1^2*x3 + (e13 - 3)*x2^3 + (e123)*x1*x2*x3").unwrap();
        let lhs = MvPolynomial::vector_variable(3).mul(&p.dirac()).unwrap();
        let rhs = p.scale(&Complex64::new(-3.0, 0.0)).checked_sub(&p.gamma()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomials_of_degree_count() {
        assert_eq!(Monomial::all_of_degree(4, 3).len(), 20);
        assert_eq!(Monomial::all_of_degree(2, 0), vec![Monomial::one(2)]);
    }
}
