//! Concrete polynomial field models.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::monomial::{Generator, MultiIndex};
use crate::numeric::poly::RealPoly;

/// Smallest value of `B` accepted anywhere on the domain.
pub const B_MARGIN: f64 = 0.1;

const MAX_DEGREE: u32 = 4;
const GRID: usize = 41;

/// Phase-space point with numeric values of `hbar` and `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub hbar: f64,
    pub eps: f64,
}

impl EvalPoint {
    pub fn phase(&self) -> [f64; 4] {
        [self.x, self.y, self.vx, self.vy]
    }
}

/// Polynomial `B(x, y)` and `phi(x, y)` on a rectangle, plus values for the
/// constants `c1`, `c2`, `mu_z`.
#[derive(Debug, Clone)]
pub struct FieldModel {
    b: RealPoly,
    phi: RealPoly,
    /// `[x_min, x_max, y_min, y_max]`
    domain: [f64; 4],
    pub c1: f64,
    pub c2: f64,
    pub mu_z: f64,
    derivs: RefCell<HashMap<(bool, MultiIndex), RealPoly>>,
}

impl FieldModel {
    pub fn new(b: RealPoly, phi: RealPoly, domain: [f64; 4]) -> Result<Self> {
        for (name, p) in [("B", &b), ("phi", &phi)] {
            if p.depends_on_velocity() {
                return Err(Error::Model(format!("{name} must depend on x and y only")));
            }
            if p.degree() > MAX_DEGREE {
                return Err(Error::Model(format!(
                    "{name} has degree {} above {MAX_DEGREE}",
                    p.degree()
                )));
            }
        }
        if !(domain[0] < domain[1] && domain[2] < domain[3])
            || domain.iter().any(|d| !d.is_finite())
        {
            return Err(Error::Model(format!("empty or invalid domain {domain:?}")));
        }
        let m = FieldModel {
            b,
            phi,
            domain,
            c1: 0.0,
            c2: 0.0,
            mu_z: 0.0,
            derivs: RefCell::new(HashMap::new()),
        };
        m.check_positive()?;
        Ok(m)
    }

    /// Uniform field `B = b0` without potential.
    pub fn uniform(b0: f64, domain: [f64; 4]) -> Result<Self> {
        FieldModel::new(RealPoly::constant(b0), RealPoly::zero(), domain)
    }

    fn check_positive(&self) -> Result<()> {
        let [x0, x1, y0, y1] = self.domain;
        for i in 0..GRID {
            for j in 0..GRID {
                let x = x0 + (x1 - x0) * i as f64 / (GRID - 1) as f64;
                let y = y0 + (y1 - y0) * j as f64 / (GRID - 1) as f64;
                let v = self.b.eval([x, y, 0.0, 0.0]);
                if v < B_MARGIN {
                    return Err(Error::Model(format!(
                        "B = {v} at ({x}, {y}) is below {B_MARGIN}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> [f64; 4] {
        self.domain
    }

    pub fn b_poly(&self) -> &RealPoly {
        &self.b
    }

    pub fn phi_poly(&self) -> &RealPoly {
        &self.phi
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let [x0, x1, y0, y1] = self.domain;
        (x0..=x1).contains(&x) && (y0..=y1).contains(&y)
    }

    pub fn check_point(&self, p: &EvalPoint) -> Result<()> {
        if !self.contains(p.x, p.y) {
            return Err(Error::DomainViolation(format!(
                "({}, {}) lies outside {:?}",
                p.x, p.y, self.domain
            )));
        }
        if !(p.hbar > 0.0 && p.eps > 0.0) {
            return Err(Error::DomainViolation(format!(
                "hbar = {}, eps = {} must be positive",
                p.hbar, p.eps
            )));
        }
        let b = self.b_at(p.x, p.y);
        if b <= 0.0 {
            return Err(Error::DomainViolation(format!(
                "B = {b} at ({}, {})",
                p.x, p.y
            )));
        }
        Ok(())
    }

    pub fn b_at(&self, x: f64, y: f64) -> f64 {
        self.b.eval([x, y, 0.0, 0.0])
    }

    fn derivative(&self, of_b: bool, a: MultiIndex, x: f64, y: f64) -> f64 {
        let mut cache = self.derivs.borrow_mut();
        let p = cache.entry((of_b, a)).or_insert_with(|| {
            let base = if of_b { &self.b } else { &self.phi };
            base.mixed([a.x as u32, a.y as u32, 0, 0])
        });
        p.eval([x, y, 0.0, 0.0])
    }

    /// Numeric value of a generator at `(x, y)`.
    pub fn generator(&self, g: Generator, x: f64, y: f64) -> f64 {
        match g {
            Generator::DB(a) => self.derivative(true, a, x, y),
            Generator::Dphi(a) => self.derivative(false, a, x, y),
            Generator::C1 => self.c1,
            Generator::C2 => self.c2,
            Generator::MuZ => self.mu_z,
        }
    }

    /// Parse the `key = value` format. Keys are `B`, `phi`, `domain`
    /// (four numbers), `c1`, `c2`, `mu_z`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut b = None;
        let mut phi = RealPoly::zero();
        let mut domain = None;
        let mut consts = [0.0; 3];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Model(format!("line {}: expected key = value", lineno + 1))
            })?;
            let value = value.trim();
            let number = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| Error::Model(format!("line {}: bad number '{v}'", lineno + 1)))
            };
            match key.trim() {
                "B" => b = Some(RealPoly::parse(value)?),
                "phi" => phi = RealPoly::parse(value)?,
                "domain" => {
                    let v: Vec<f64> = value
                        .split_whitespace()
                        .map(number)
                        .collect::<Result<_>>()?;
                    let d: [f64; 4] = v.try_into().map_err(|_| {
                        Error::Model(format!("line {}: domain needs four numbers", lineno + 1))
                    })?;
                    domain = Some(d);
                }
                "c1" => consts[0] = number(value)?,
                "c2" => consts[1] = number(value)?,
                "mu_z" => consts[2] = number(value)?,
                other => {
                    return Err(Error::Model(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }
        let b = b.ok_or_else(|| Error::Model("missing B".into()))?;
        let domain = domain.ok_or_else(|| Error::Model("missing domain".into()))?;
        let mut m = FieldModel::new(b, phi, domain)?;
        [m.c1, m.c2, m.mu_z] = consts;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_model_file() {
        let m = FieldModel::parse(
            "# test model\nB = 2 + 0.1*x + 0.02*y^2\nphi = 0.05*x*y\ndomain = -1 1 -1 1\nmu_z = 0.5\n",
        )
        .unwrap();
        assert!((m.b_at(1.0, 1.0) - 2.12).abs() < 1e-15);
        assert!((m.generator(Generator::dphi(1, 1), 0.3, 0.4) - 0.05).abs() < 1e-15);
        assert!((m.generator(Generator::db(0, 2), 0.0, 0.0) - 0.04).abs() < 1e-15);
        assert_eq!(m.mu_z, 0.5);
    }

    #[test]
    fn rejects_bad_models() {
        assert!(FieldModel::parse("B = x\ndomain = -1 1 -1 1").is_err());
        assert!(FieldModel::parse("B = 1 + x^5\ndomain = 0 0.1 0 0.1").is_err());
        assert!(FieldModel::parse("B = 1\n").is_err());
        assert!(FieldModel::parse("B = 1\ndomain = 0 1\n").is_err());
        assert!(FieldModel::parse("B = 1 + v_x\ndomain = 0 1 0 1\n").is_err());
    }
}
