//! Truncated graded series of commutative phase-space symbols.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::monomial::{Axis, FieldFactor, Generator, Monomial};

/// Which set of phase-space variables a series is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    /// `(x, y, v_x, v_y)`
    Particle,
    /// `(X, Y, V_x, V_y)`
    GuidingCenter,
}

/// Order window kept by every series.
///
/// Terms above `max_hbar` or `max_eps` are dropped silently; a term below
/// `min_eps` is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    pub max_hbar: u32,
    pub min_eps: i32,
    pub max_eps: i32,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            max_hbar: 2,
            min_eps: -2,
            max_eps: 3,
        }
    }
}

impl Truncation {
    pub fn new(max_hbar: u32, min_eps: i32, max_eps: i32) -> Self {
        Truncation {
            max_hbar,
            min_eps,
            max_eps,
        }
    }

    pub fn intersect(self, o: Truncation) -> Truncation {
        Truncation {
            max_hbar: self.max_hbar.min(o.max_hbar),
            min_eps: self.min_eps.max(o.min_eps),
            max_eps: self.max_eps.min(o.max_eps),
        }
    }

    /// `Ok(true)` if a term of this order is kept, `Ok(false)` if dropped.
    pub fn admits(&self, hbar: u32, eps: i32) -> Result<bool> {
        if hbar > self.max_hbar || eps > self.max_eps {
            return Ok(false);
        }
        if eps < self.min_eps {
            return Err(Error::EpsUnderflow {
                eps,
                min: self.min_eps,
            });
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    chart: Chart,
    trunc: Truncation,
    terms: BTreeMap<Monomial, Coefficient>,
}

impl GradedSeries {
    pub fn zero(chart: Chart, trunc: Truncation) -> Self {
        GradedSeries {
            chart,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(chart: Chart, trunc: Truncation, c: Coefficient) -> Self {
        let mut s = GradedSeries::zero(chart, trunc);
        s.push(Monomial::one(), c)
            .expect("order zero is always admitted");
        s
    }

    pub fn one(chart: Chart, trunc: Truncation) -> Self {
        GradedSeries::constant(chart, trunc, Coefficient::one())
    }

    pub fn monomial(chart: Chart, trunc: Truncation, m: Monomial, c: Coefficient) -> Result<Self> {
        let mut s = GradedSeries::zero(chart, trunc);
        s.push(m, c)?;
        Ok(s)
    }

    /// The position coordinate along `axis`.
    pub fn position(chart: Chart, trunc: Truncation, axis: Axis) -> Self {
        let m = match axis {
            Axis::X => Monomial::pos(1, 0),
            Axis::Y => Monomial::pos(0, 1),
        };
        GradedSeries::monomial(chart, trunc, m, Coefficient::one()).unwrap()
    }

    /// The velocity coordinate along `axis`.
    pub fn velocity(chart: Chart, trunc: Truncation, axis: Axis) -> Self {
        let m = match axis {
            Axis::X => Monomial::vel(1, 0),
            Axis::Y => Monomial::vel(0, 1),
        };
        GradedSeries::monomial(chart, trunc, m, Coefficient::one()).unwrap()
    }

    /// `B^(b_half/2)` at the chart position.
    pub fn b_power(chart: Chart, trunc: Truncation, b_half: i32) -> Self {
        let m = Monomial::with_field(FieldFactor::b_pow(b_half));
        GradedSeries::monomial(chart, trunc, m, Coefficient::one()).unwrap()
    }

    pub fn generator(chart: Chart, trunc: Truncation, g: Generator) -> Self {
        let m = Monomial::with_field(FieldFactor::gen(g));
        GradedSeries::monomial(chart, trunc, m, Coefficient::one()).unwrap()
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_else(Coefficient::zero)
    }

    /// Add `c * m` respecting the truncation window.
    pub fn push(&mut self, m: Monomial, c: Coefficient) -> Result<()> {
        if c.is_zero() || !self.trunc.admits(m.hbar, m.eps)? {
            return Ok(());
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
        Ok(())
    }

    fn check_chart(&self, o: &GradedSeries) -> Result<()> {
        if self.chart != o.chart {
            return Err(Error::ChartMismatch {
                left: self.chart,
                right: o.chart,
            });
        }
        Ok(())
    }

    /// Re-window the series; fails if a kept term falls below the new floor.
    pub fn with_truncation(&self, trunc: Truncation) -> Result<GradedSeries> {
        let mut out = GradedSeries::zero(self.chart, trunc);
        for (m, c) in &self.terms {
            out.push(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// Relabel the chart without touching the terms.
    pub fn in_chart(&self, chart: Chart) -> GradedSeries {
        GradedSeries {
            chart,
            ..self.clone()
        }
    }

    pub fn add(&self, o: &GradedSeries) -> Result<GradedSeries> {
        self.check_chart(o)?;
        let trunc = self.trunc.intersect(o.trunc);
        let mut out = if trunc == self.trunc {
            self.clone()
        } else {
            self.with_truncation(trunc)?
        };
        for (m, c) in &o.terms {
            out.push(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &GradedSeries) -> Result<GradedSeries> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> GradedSeries {
        GradedSeries {
            chart: self.chart,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> GradedSeries {
        if c.is_zero() {
            return GradedSeries::zero(self.chart, self.trunc);
        }
        GradedSeries {
            chart: self.chart,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Multiply every term by `c * m`.
    pub fn mul_monomial(&self, m: &Monomial, c: &Coefficient) -> Result<GradedSeries> {
        let mut out = GradedSeries::zero(self.chart, self.trunc);
        for (k, v) in &self.terms {
            out.push(k.mul(m), v * c)?;
        }
        Ok(out)
    }

    /// Commutative (pointwise) product.
    pub fn mul_pointwise(&self, o: &GradedSeries) -> Result<GradedSeries> {
        self.check_chart(o)?;
        let trunc = self.trunc.intersect(o.trunc);
        let mut out = GradedSeries::zero(self.chart, trunc);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                if ma.hbar + mb.hbar > trunc.max_hbar || ma.eps + mb.eps > trunc.max_eps {
                    continue;
                }
                out.push(ma.mul(mb), ca * cb)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<GradedSeries> {
        let mut out = GradedSeries::one(self.chart, self.trunc);
        for _ in 0..k {
            out = out.mul_pointwise(self)?;
        }
        Ok(out)
    }

    /// Derivative with respect to the position coordinate; field generators
    /// and half-integer powers of `B` follow the chain rule.
    pub fn partial_x(&self, axis: Axis) -> GradedSeries {
        let mut out = GradedSeries::zero(self.chart, self.trunc);
        for (m, c) in &self.terms {
            for (r, dm) in m.partial_x(axis) {
                out.push(dm, c.scale(&r))
                    .expect("differentiation preserves orders");
            }
        }
        out
    }

    /// Derivative with respect to the velocity coordinate.
    pub fn partial_v(&self, axis: Axis) -> GradedSeries {
        let mut out = GradedSeries::zero(self.chart, self.trunc);
        for (m, c) in &self.terms {
            if let Some((k, dm)) = m.partial_v(axis) {
                let r = BigRational::from_integer(BigInt::from(k));
                out.push(dm, c.scale(&r))
                    .expect("differentiation preserves orders");
            }
        }
        out
    }

    /// Mixed derivative `d_x^px d_y^py d_vx^kx d_vy^ky`.
    pub fn derivative(&self, x: [u32; 2], v: [u32; 2]) -> GradedSeries {
        let mut out = self.clone();
        for _ in 0..v[0] {
            out = out.partial_v(Axis::X);
        }
        for _ in 0..v[1] {
            out = out.partial_v(Axis::Y);
        }
        for _ in 0..x[0] {
            out = out.partial_x(Axis::X);
        }
        for _ in 0..x[1] {
            out = out.partial_x(Axis::Y);
        }
        out
    }

    /// Keep only the terms satisfying `pred`.
    pub fn filter(&self, pred: impl Fn(&Monomial) -> bool) -> GradedSeries {
        GradedSeries {
            chart: self.chart,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Part of the series at exactly `hbar^n eps^m`, with the order stripped.
    pub fn order_part(&self, hbar: u32, eps: i32) -> GradedSeries {
        let mut out = GradedSeries::zero(self.chart, self.trunc);
        for (m, c) in &self.terms {
            if m.hbar == hbar && m.eps == eps {
                let mut k = m.clone();
                k.hbar = 0;
                k.eps = 0;
                out.terms.insert(k, c.clone());
            }
        }
        out
    }

    /// Distinct `(hbar, eps)` orders present.
    pub fn orders(&self) -> Vec<(u32, i32)> {
        let mut v: Vec<(u32, i32)> = self.terms.keys().map(|m| (m.hbar, m.eps)).collect();
        v.dedup();
        v
    }

    pub fn min_eps(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.eps).min()
    }

    /// Apply `f` to every monomial, summing collisions.
    pub fn map_monomials(
        &self,
        trunc: Truncation,
        f: impl Fn(&Monomial) -> Monomial,
    ) -> Result<GradedSeries> {
        let mut out = GradedSeries::zero(self.chart, trunc);
        for (m, c) in &self.terms {
            out.push(f(m), c.clone())?;
        }
        Ok(out)
    }

    /// True if any term contains a generator matching `pred`.
    pub fn has_generator(&self, pred: impl Fn(Generator) -> bool) -> bool {
        self.terms.keys().any(|m| m.field.has(&pred))
    }

    /// Structural equality ignoring the truncation window.
    pub fn same_terms(&self, o: &GradedSeries) -> bool {
        self.chart == o.chart && self.terms == o.terms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Truncation {
        Truncation::default()
    }

    fn vx() -> GradedSeries {
        GradedSeries::velocity(Chart::Particle, t(), Axis::X)
    }

    fn vy() -> GradedSeries {
        GradedSeries::velocity(Chart::Particle, t(), Axis::Y)
    }

    #[test]
    fn add_collects_like_terms() {
        let s = vx().mul_pointwise(&vy()).unwrap();
        let d = s.add(&s).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(
            d.coefficient(&Monomial::vel(1, 1)),
            Coefficient::from_int(2)
        );
        assert!(s.sub(&s).unwrap().is_zero());
    }

    #[test]
    fn partial_x_of_inverse_b() {
        let s = GradedSeries::b_power(Chart::Particle, t(), -2);
        let d = s.partial_x(Axis::X);
        let mut m = Monomial::with_field(
            FieldFactor::b_pow(-4).mul(&FieldFactor::gen(Generator::db(1, 0))),
        );
        m.hbar = 0;
        assert_eq!(d.len(), 1);
        assert_eq!(d.coefficient(&m), Coefficient::from_int(-1));
    }

    #[test]
    fn partial_v_of_square() {
        let s = vx().mul_pointwise(&vx()).unwrap();
        let d = s.partial_v(Axis::X);
        assert_eq!(
            d.coefficient(&Monomial::vel(1, 0)),
            Coefficient::from_int(2)
        );
        assert!(s.partial_v(Axis::Y).is_zero());
    }

    #[test]
    fn truncation_drops_and_underflows() {
        let tr = Truncation::new(2, -2, 3);
        let mut s = GradedSeries::zero(Chart::Particle, tr);
        s.push(
            Monomial {
                eps: 4,
                ..Monomial::one()
            },
            Coefficient::one(),
        )
        .unwrap();
        s.push(
            Monomial {
                hbar: 3,
                ..Monomial::one()
            },
            Coefficient::one(),
        )
        .unwrap();
        assert!(s.is_zero());
        let e = s.push(
            Monomial {
                eps: -3,
                ..Monomial::one()
            },
            Coefficient::one(),
        );
        assert_eq!(e, Err(Error::EpsUnderflow { eps: -3, min: -2 }));
    }

    #[test]
    fn chart_mismatch_is_an_error() {
        let a = vx();
        let b = GradedSeries::velocity(Chart::GuidingCenter, t(), Axis::X);
        assert!(matches!(a.add(&b), Err(Error::ChartMismatch { .. })));
    }
}
