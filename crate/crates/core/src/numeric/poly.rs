//! Real polynomials in `(x, y, v_x, v_y)` with exact differentiation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Exponents of `x, y, v_x, v_y`.
pub type Exponents = [u32; 4];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RealPoly {
    terms: BTreeMap<Exponents, f64>,
}

impl RealPoly {
    pub fn zero() -> Self {
        RealPoly::default()
    }

    pub fn constant(c: f64) -> Self {
        RealPoly::monomial([0; 4], c)
    }

    pub fn monomial(e: Exponents, c: f64) -> Self {
        let mut p = RealPoly::zero();
        p.push(e, c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        RealPoly::monomial(e, 1.0)
    }

    fn push(&mut self, e: Exponents, c: f64) {
        if c == 0.0 {
            return;
        }
        let v = self.terms.entry(e).or_insert(0.0);
        *v += c;
        if *v == 0.0 {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &f64)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn depends_on_velocity(&self) -> bool {
        self.terms.keys().any(|e| e[2] + e[3] > 0)
    }

    pub fn add(&self, o: &RealPoly) -> RealPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.push(*e, *c);
        }
        out
    }

    pub fn scale(&self, s: f64) -> RealPoly {
        let mut out = RealPoly::zero();
        for (e, c) in &self.terms {
            out.push(*e, c * s);
        }
        out
    }

    pub fn mul(&self, o: &RealPoly) -> RealPoly {
        let mut out = RealPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                out.push(
                    [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]],
                    ca * cb,
                );
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> RealPoly {
        (0..k).fold(RealPoly::constant(1.0), |acc, _| acc.mul(self))
    }

    /// `d^order / d var^order`.
    pub fn derivative(&self, var: usize, order: u32) -> RealPoly {
        let mut out = RealPoly::zero();
        for (e, c) in &self.terms {
            if e[var] < order {
                continue;
            }
            let f: f64 = (0..order).map(|k| (e[var] - k) as f64).product();
            let mut d = *e;
            d[var] -= order;
            out.push(d, c * f);
        }
        out
    }

    /// Mixed derivative with orders for `(x, y, v_x, v_y)`.
    pub fn mixed(&self, orders: Exponents) -> RealPoly {
        (0..4).fold(self.clone(), |p, i| p.derivative(i, orders[i]))
    }

    pub fn eval(&self, p: [f64; 4]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * (0..4).map(|i| p[i].powi(e[i] as i32)).product::<f64>())
            .sum()
    }

    /// Parse a polynomial written with `+ - * ^`, parentheses, decimal
    /// numbers and the variables `x y v_x v_y`.
    pub fn parse(src: &str) -> Result<RealPoly> {
        let toks = tokenize(src)?;
        let mut p = PolyParser { toks, at: 0 };
        let out = p.sum()?;
        if p.at != p.toks.len() {
            return Err(Error::Model(format!("trailing input in '{src}'")));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum T {
    Num(f64),
    Var(usize),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<T>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(T::Op(c));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                i += 1;
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse()
                .map_err(|_| Error::Model(format!("bad number '{text}'")))?;
            out.push(T::Num(v));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let v = match word.as_str() {
                "x" => 0,
                "y" => 1,
                "v_x" => 2,
                "v_y" => 3,
                _ => return Err(Error::Model(format!("unknown variable '{word}'"))),
            };
            out.push(T::Var(v));
        } else {
            return Err(Error::Model(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct PolyParser {
    toks: Vec<T>,
    at: usize,
}

impl PolyParser {
    fn peek(&self) -> Option<&T> {
        self.toks.get(self.at)
    }

    fn sum(&mut self) -> Result<RealPoly> {
        let mut sign = 1.0;
        if let Some(T::Op(c @ ('+' | '-'))) = self.peek() {
            if *c == '-' {
                sign = -1.0;
            }
            self.at += 1;
        }
        let mut acc = self.product()?.scale(sign);
        while let Some(T::Op(c @ ('+' | '-'))) = self.peek() {
            let s = if *c == '-' { -1.0 } else { 1.0 };
            self.at += 1;
            acc = acc.add(&self.product()?.scale(s));
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<RealPoly> {
        let mut acc = self.power()?;
        while let Some(T::Op(c @ ('*' | '/'))) = self.peek() {
            let divide = *c == '/';
            self.at += 1;
            let rhs = self.power()?;
            acc = if divide {
                // only division by a nonzero constant keeps this a polynomial
                match (rhs.degree(), rhs.eval([0.0; 4])) {
                    (0, d) if d != 0.0 => acc.scale(1.0 / d),
                    _ => return Err(Error::Model("can only divide by a nonzero constant".into())),
                }
            } else {
                acc.mul(&rhs)
            };
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<RealPoly> {
        let base = match self.toks.get(self.at).cloned() {
            Some(T::Num(v)) => {
                self.at += 1;
                RealPoly::constant(v)
            }
            Some(T::Var(i)) => {
                self.at += 1;
                RealPoly::var(i)
            }
            Some(T::Op('(')) => {
                self.at += 1;
                let inner = self.sum()?;
                if self.peek() != Some(&T::Op(')')) {
                    return Err(Error::Model("expected ')'".into()));
                }
                self.at += 1;
                inner
            }
            other => return Err(Error::Model(format!("unexpected token {other:?}"))),
        };
        if let Some(T::Op('^')) = self.peek() {
            self.at += 1;
            match self.toks.get(self.at).cloned() {
                Some(T::Num(k)) if k >= 0.0 && k.fract() == 0.0 => {
                    self.at += 1;
                    Ok(base.pow(k as u32))
                }
                _ => Err(Error::Model(
                    "exponent must be a non-negative integer".into(),
                )),
            }
        } else {
            Ok(base)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_differentiate() {
        let p = RealPoly::parse("2 + 0.1*x + 0.02*y^2").unwrap();
        assert_eq!(p.degree(), 2);
        assert!((p.eval([1.0, 2.0, 0.0, 0.0]) - 2.18).abs() < 1e-15);
        let d = p.derivative(1, 1);
        assert!((d.eval([0.0, 3.0, 0.0, 0.0]) - 0.12).abs() < 1e-15);
        assert_eq!(p.derivative(1, 3), RealPoly::zero());
    }

    #[test]
    fn velocity_variables_and_groups() {
        let p = RealPoly::parse("-(x - v_x)^2").unwrap();
        assert_eq!(p.eval([1.0, 0.0, 3.0, 0.0]), -4.0);
        assert!(p.depends_on_velocity());
        assert!(RealPoly::parse("x^-1").is_err());
    }

    #[test]
    fn division_by_constants() {
        let p = RealPoly::parse("2 + x/10 + y^2/50 + x*y/(4*5)").unwrap();
        assert!((p.eval([1.0, 5.0, 0.0, 0.0]) - 2.85).abs() < 1e-15);
        assert!(RealPoly::parse("1/x").is_err());
        assert!(RealPoly::parse("x/(2 - 2)").is_err());
    }
}
