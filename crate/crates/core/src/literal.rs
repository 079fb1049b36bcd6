//! Text literals for multivectors (`3 + 2*e1 - 1.5*e12`) and polynomials
//! (`(1)*x1 + (-1*e12)*x2`).
//!
//! Coefficients are printed with the shortest representation that parses back
//! to the same `f64`, so `parse(format(x)) == x` bit for bit.

use num_complex::Complex64;

use crate::clifford::{blades_in_display_order, check_dim, Blade, Multivector};
use crate::error::{Error, Result};
use crate::poly::{Monomial, MvPolynomial};

fn fmt_real(x: f64) -> String {
    let s = format!("{x:?}");
    match s.strip_suffix(".0") {
        Some(t) => t.to_string(),
        None => s,
    }
}

fn fmt_complex_abs(c: Complex64) -> (bool, String) {
    if c.im == 0.0 {
        let neg = c.re.is_sign_negative();
        (neg, fmt_real(c.re.abs()))
    } else {
        let sign = if c.im.is_sign_negative() { '-' } else { '+' };
        (
            false,
            format!("({}{}{}i)", fmt_real(c.re), sign, fmt_real(c.im.abs())),
        )
    }
}

pub fn format_multivector(mv: &Multivector<Complex64>) -> String {
    let mut out = String::new();
    for blade in blades_in_display_order(mv.dim()) {
        let c = *mv.coeff(blade);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let (neg, mag) = fmt_complex_abs(c);
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if blade == Blade::SCALAR {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&blade.name());
        } else {
            out.push_str(&mag);
            out.push('*');
            out.push_str(&blade.name());
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn format_polynomial(p: &MvPolynomial<Complex64>) -> String {
    let mut parts = Vec::new();
    for (mono, coeff) in p.terms() {
        let mut s = format!("({})", format_multivector(coeff));
        for (i, &e) in mono.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => s.push_str(&format!("*x{}", i + 1)),
                _ => s.push_str(&format!("*x{}^{}", i + 1, e)),
            }
        }
        parts.push(s);
    }
    if parts.is_empty() {
        "(0)".to_string()
    } else {
        parts.join(" + ")
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
            base: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.base + self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let mut p = self.pos;
        while p < s.len() && (s[p].is_ascii_digit() || s[p] == b'.') {
            p += 1;
        }
        if p == start {
            return self.err("expected a number");
        }
        if p < s.len() && (s[p] == b'e' || s[p] == b'E') {
            let mut q = p + 1;
            if q < s.len() && (s[q] == b'+' || s[q] == b'-') {
                q += 1;
            }
            if q < s.len() && s[q].is_ascii_digit() {
                while q < s.len() && s[q].is_ascii_digit() {
                    q += 1;
                }
                p = q;
            }
        }
        let text = std::str::from_utf8(&s[start..p]).expect("ascii slice");
        self.pos = p;
        match text.parse::<f64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err(format!("invalid number '{text}'"))
            }
        }
    }

    /// `(re)`, `(re+imi)`, `(imi)`. The opening parenthesis is already consumed.
    fn complex_body(&mut self) -> Result<Complex64> {
        let neg_first = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let a = self.number()?;
        let a = if neg_first { -a } else { a };
        if self.eat(b'i') {
            if !self.eat(b')') {
                return self.err("expected ')'");
            }
            return Ok(Complex64::new(0.0, a));
        }
        if self.eat(b')') {
            return Ok(Complex64::new(a, 0.0));
        }
        let neg = if self.eat(b'-') {
            true
        } else if self.eat(b'+') {
            false
        } else {
            return self.err("expected '+', '-' or ')' in complex coefficient");
        };
        let b = self.number()?;
        if !self.eat(b'i') {
            return self.err("expected 'i' after imaginary part");
        }
        if !self.eat(b')') {
            return self.err("expected ')'");
        }
        Ok(Complex64::new(a, if neg { -b } else { b }))
    }

    fn blade(&mut self, m: usize) -> Result<Blade> {
        self.skip_ws();
        if self.src.get(self.pos) != Some(&b'e') {
            return self.err("expected a blade name like e12");
        }
        self.pos += 1;
        let mut idx = Vec::new();
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                idx.push((c - b'0') as usize);
                self.pos += 1;
            } else {
                break;
            }
        }
        if idx.is_empty() {
            return self.err("blade name needs at least one index");
        }
        Blade::from_indices(m, &idx).or_else(|e| self.err(e.to_string()))
    }
}

fn parse_mv_terms(cur: &mut Cursor<'_>, m: usize, stop: Option<u8>) -> Result<Multivector> {
    let mut out = Multivector::zero(m);
    let mut first = true;
    loop {
        let next = cur.peek();
        if next.is_none() || next == stop {
            if first {
                return cur.err("empty multivector literal");
            }
            break;
        }
        let mut sign = 1.0;
        if cur.eat(b'-') {
            sign = -1.0;
        } else if !cur.eat(b'+') && !first {
            return cur.err("expected '+' or '-' between terms");
        }
        first = false;
        let (coeff, blade) = match cur.peek() {
            Some(b'e') => (Complex64::new(1.0, 0.0), cur.blade(m)?),
            Some(b'(') => {
                cur.pos += 1;
                let c = cur.complex_body()?;
                let b = if cur.eat(b'*') { cur.blade(m)? } else { Blade::SCALAR };
                (c, b)
            }
            Some(_) => {
                let c = Complex64::new(cur.number()?, 0.0);
                let b = if cur.eat(b'*') { cur.blade(m)? } else { Blade::SCALAR };
                (c, b)
            }
            None => return cur.err("dangling sign"),
        };
        let slot = out.coeffs_mut();
        slot[blade.mask()] += coeff * sign;
    }
    Ok(out)
}

pub fn parse_multivector(m: usize, text: &str) -> Result<Multivector> {
    check_dim(m)?;
    let mut cur = Cursor::new(text);
    let mv = parse_mv_terms(&mut cur, m, None)?;
    if !cur.at_end() {
        return cur.err("trailing input");
    }
    Ok(mv)
}

fn matching_paren(src: &[u8], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (i, &c) in src.iter().enumerate().skip(open) {
        match c {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn parse_variable(cur: &mut Cursor<'_>, m: usize, exps: &mut [u32]) -> Result<()> {
    cur.skip_ws();
    if cur.src.get(cur.pos) != Some(&b'x') {
        return cur.err("expected a variable like x2");
    }
    cur.pos += 1;
    let start = cur.pos;
    while cur.src.get(cur.pos).is_some_and(u8::is_ascii_digit) {
        cur.pos += 1;
    }
    let i: usize = std::str::from_utf8(&cur.src[start..cur.pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&i| (1..=m).contains(&i))
        .map_or_else(|| cur.err(format!("variable index outside 1..={m}")), Ok)?;
    let mut power = 1u32;
    if cur.eat(b'^') {
        let p = cur.number()?;
        if p.fract() != 0.0 || p < 0.0 {
            return cur.err("exponent must be a nonnegative integer");
        }
        power = p as u32;
    }
    exps[i - 1] += power;
    Ok(())
}

pub fn parse_polynomial(m: usize, text: &str) -> Result<MvPolynomial<Complex64>> {
    check_dim(m)?;
    let mut cur = Cursor::new(text);
    let mut out = MvPolynomial::zero(m);
    let mut first = true;
    while !cur.at_end() {
        let mut sign = 1.0;
        if cur.eat(b'-') {
            sign = -1.0;
        } else if !cur.eat(b'+') && !first {
            return cur.err("expected '+' or '-' between terms");
        }
        first = false;
        let mut exps = vec![0u32; m];
        let coeff = if cur.peek() == Some(b'(') {
            let open = cur.pos;
            let close = match matching_paren(cur.src, open) {
                Some(c) => c,
                None => return cur.err("unbalanced parenthesis"),
            };
            let inner = std::str::from_utf8(&cur.src[open + 1..close]).expect("ascii");
            let mut sub = Cursor::new(inner);
            sub.base = cur.base + open + 1;
            let mv = parse_mv_terms(&mut sub, m, None)?;
            cur.pos = close + 1;
            if cur.eat(b'*') {
                parse_variable(&mut cur, m, &mut exps)?;
                while cur.eat(b'*') {
                    parse_variable(&mut cur, m, &mut exps)?;
                }
            }
            mv
        } else {
            parse_variable(&mut cur, m, &mut exps)?;
            while cur.eat(b'*') {
                parse_variable(&mut cur, m, &mut exps)?;
            }
            Multivector::one(m)
        };
        out.add_term(Monomial::new(exps), coeff.scale(&Complex64::new(sign, 0.0)));
    }
    if first {
        return cur.err("empty polynomial literal");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_the_documented_example() {
        let mv = parse_multivector(2, "3 + 2*e1 - 1.5*e12").unwrap();
        assert_eq!(mv.coeffs()[0], Complex64::new(3.0, 0.0));
        assert_eq!(mv.coeffs()[1], Complex64::new(2.0, 0.0));
        assert_eq!(mv.coeffs()[3], Complex64::new(-1.5, 0.0));
        assert_eq!(format_multivector(&mv), "3 + 2*e1 - 1.5*e12");
    }

    #[test]
    fn rejects_bad_blades() {
        assert!(parse_multivector(3, "e21").is_err());
        assert!(parse_multivector(3, "e14").is_err());
        assert!(parse_multivector(3, "2*").is_err());
        assert!(parse_multivector(3, "").is_err());
        assert!(parse_multivector(3, "1 2").is_err());
    }

    #[test]
    fn complex_coefficients() {
        let mv = parse_multivector(3, "(1-2.5i)*e23 - (3i)").unwrap();
        assert_eq!(mv.coeffs()[0b110], Complex64::new(1.0, -2.5));
        assert_eq!(mv.coeffs()[0], Complex64::new(0.0, -3.0));
        let back = parse_multivector(3, &format_multivector(&mv)).unwrap();
        assert_eq!(back, mv);
    }

    #[test]
    fn polynomial_literal() {
        let p = parse_polynomial(2, "(1)*x1 - (e12)*x2").unwrap();
        let text = format_polynomial(&p);
        assert_eq!(parse_polynomial(2, &text).unwrap(), p);
        let q = parse_polynomial(3, "x1^2*x3 + (2 + e13)").unwrap();
        assert_eq!(q.degree(), Some(3));
    }

    proptest! {
        #[test]
        fn multivector_literal_round_trips(coeffs in proptest::collection::vec(
            prop_oneof![Just(0.0), -1e6f64..1e6, -1e-8f64..1e-8], 16)) {
            let mv = Multivector::from_coeffs(
                4, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect()).unwrap();
            let back = parse_multivector(4, &format_multivector(&mv)).unwrap();
            prop_assert_eq!(back, mv);
        }
    }
}
