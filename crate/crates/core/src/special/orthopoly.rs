//! Gegenbauer and Laguerre polynomials by forward three-term recurrence.

use crate::error::{Error, Result};

/// Coefficients of `p_{n+1} = (a_n + b_n x) p_n - c_n p_{n-1}` for `n < len`,
/// with `p_0 = 1` and `p_{-1} = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceRow {
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl RecurrenceRow {
    pub fn gegenbauer(lambda: f64, max_degree: usize) -> Result<Self> {
        check_lambda(lambda)?;
        let mut row = RecurrenceRow {
            a: Vec::with_capacity(max_degree),
            b: Vec::with_capacity(max_degree),
            c: Vec::with_capacity(max_degree),
        };
        for n in 0..max_degree {
            let n1 = (n + 1) as f64;
            let nf = n as f64;
            row.a.push(0.0);
            row.b.push(2.0 * (nf + lambda) / n1);
            row.c.push((nf + 2.0 * lambda - 1.0) / n1);
        }
        Ok(row)
    }

    pub fn laguerre(alpha: f64, max_degree: usize) -> Result<Self> {
        check_alpha(alpha)?;
        let mut row = RecurrenceRow {
            a: Vec::with_capacity(max_degree),
            b: Vec::with_capacity(max_degree),
            c: Vec::with_capacity(max_degree),
        };
        for n in 0..max_degree {
            let n1 = (n + 1) as f64;
            let nf = n as f64;
            row.a.push((2.0 * nf + 1.0 + alpha) / n1);
            row.b.push(-1.0 / n1);
            row.c.push((nf + alpha) / n1);
        }
        Ok(row)
    }

    pub fn max_degree(&self) -> usize {
        self.a.len()
    }

    /// Writes `p_0(x) .. p_{out.len()-1}(x)`; `out.len()` must not exceed `max_degree + 1`.
    pub fn fill(&self, x: f64, out: &mut [f64]) {
        assert!(out.len() <= self.a.len() + 1, "recurrence row too short");
        if out.is_empty() {
            return;
        }
        out[0] = 1.0;
        let (mut prev, mut cur) = (0.0, 1.0);
        for n in 0..out.len() - 1 {
            let next = (self.a[n] + self.b[n] * x) * cur - self.c[n] * prev;
            out[n + 1] = next;
            prev = cur;
            cur = next;
        }
    }

    /// `sum_n coeffs[n] p_n(x)` by Clenshaw's backward recurrence.
    pub fn clenshaw(&self, coeffs: &[f64], x: f64) -> f64 {
        let n = coeffs.len();
        if n == 0 {
            return 0.0;
        }
        assert!(n <= self.a.len() + 1, "recurrence row too short");
        let (mut y1, mut y2) = (0.0, 0.0);
        for k in (0..n).rev() {
            let alpha = if k + 1 < n { self.a[k] + self.b[k] * x } else { 0.0 };
            let beta = if k + 2 < n { self.c[k + 1] } else { 0.0 };
            let y = coeffs[k] + alpha * y1 - beta * y2;
            y2 = y1;
            y1 = y;
        }
        y1
    }

    pub fn values(&self, x: f64, len: usize) -> Vec<f64> {
        let mut v = vec![0.0; len];
        self.fill(x, &mut v);
        v
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Gegenbauer parameter must be positive, got {lambda}"
        )));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > -1.0) {
        return Err(Error::InvalidArgument(format!(
            "Laguerre parameter must exceed -1, got {alpha}"
        )));
    }
    Ok(())
}

/// Gegenbauer polynomial `C_k^lambda(w)`.
pub fn gegenbauer(k: usize, lambda: f64, w: f64) -> Result<f64> {
    Ok(RecurrenceRow::gegenbauer(lambda, k)?.values(w, k + 1)[k])
}

/// `d/dw C_k^lambda(w) = 2 lambda C_{k-1}^{lambda+1}(w)`, zero for `k = 0`.
pub fn gegenbauer_derivative(k: usize, lambda: f64, w: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if k == 0 {
        return Ok(0.0);
    }
    Ok(2.0 * lambda * gegenbauer(k - 1, lambda + 1.0, w)?)
}

/// Generalized Laguerre polynomial `L_j^alpha(t)`.
pub fn laguerre(j: usize, alpha: f64, t: f64) -> Result<f64> {
    Ok(RecurrenceRow::laguerre(alpha, j)?.values(t, j + 1)[j])
}
