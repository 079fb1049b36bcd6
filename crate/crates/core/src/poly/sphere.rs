use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Monomial, MvPolynomial};
use crate::clifford::Scalar;

/// Mean of `x^alpha` over the unit sphere `S^{m-1}`, exactly.
///
/// Zero unless every exponent is even; for `alpha = 2 beta` it equals
/// `prod_i prod_{s < beta_i} (2s + 1) / prod_{t < |beta|} (m + 2t)`.
pub fn normalized_sphere_moment(m: usize, exponents: &[u32]) -> BigRational {
    if exponents.iter().any(|e| e % 2 == 1) {
        return BigRational::zero();
    }
    let mut num = BigInt::one();
    let mut total = 0u64;
    for &e in exponents {
        let beta = (e / 2) as u64;
        for s in 0..beta {
            num *= BigInt::from(2 * s + 1);
        }
        total += beta;
    }
    let mut den = BigInt::one();
    for t in 0..total {
        den *= BigInt::from(m as u64 + 2 * t);
    }
    BigRational::new(num, den)
}

/// Surface area `2 pi^{m/2} / Gamma(m/2)` of `S^{m-1}`.
pub fn sphere_area(m: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(m as f64 / 2.0) / statrs::function::gamma::gamma(m as f64 / 2.0)
}

/// Sphere mean of the scalar pairing, `(1/|S|) int_S sum_A conj(f_A) g_A`.
pub fn sphere_pairing<T: Scalar>(f: &MvPolynomial<T>, g: &MvPolynomial<T>) -> T {
    let m = f.dim();
    let mut cache: HashMap<Monomial, T> = HashMap::new();
    let mut acc = T::zero();
    for (ma, ca) in f.terms() {
        for (mb, cb) in g.terms() {
            let sum = ma.times(mb);
            if sum.exponents().iter().any(|e| e % 2 == 1) {
                continue;
            }
            let moment = cache
                .entry(sum.clone())
                .or_insert_with(|| T::from_rational(&normalized_sphere_moment(m, sum.exponents())))
                .clone();
            acc = acc + moment * ca.scalar_pairing(cb);
        }
    }
    acc
}
