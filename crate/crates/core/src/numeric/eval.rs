//! Numeric evaluation of symbols and direct application of the star-product
//! operator to closed-form polynomials.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gc::WordSeries;
use crate::monomial::{FieldFactor, Generator, Monomial};
use crate::numeric::model::{EvalPoint, FieldModel};
use crate::numeric::poly::RealPoly;
use crate::series::{GradedSeries, Truncation};
use crate::star::StarProduct;

struct FieldValues<'a> {
    model: &'a FieldModel,
    x: f64,
    y: f64,
    b: f64,
    gens: HashMap<Generator, f64>,
}

impl<'a> FieldValues<'a> {
    fn new(model: &'a FieldModel, x: f64, y: f64) -> Self {
        FieldValues {
            model,
            x,
            y,
            b: model.b_at(x, y),
            gens: HashMap::new(),
        }
    }

    fn factor(&mut self, f: &FieldFactor) -> f64 {
        let mut v = self.b.powf(f.b_half as f64 / 2.0);
        for &(g, p) in &f.gens {
            let (model, x, y) = (self.model, self.x, self.y);
            let gv = *self
                .gens
                .entry(g)
                .or_insert_with(|| model.generator(g, x, y));
            v *= gv.powi(p as i32);
        }
        v
    }
}

fn monomial_value(m: &Monomial, fv: &mut FieldValues, p: &EvalPoint) -> f64 {
    fv.factor(&m.field)
        * p.hbar.powi(m.hbar as i32)
        * p.eps.powi(m.eps)
        * p.x.powi(m.pos[0] as i32)
        * p.y.powi(m.pos[1] as i32)
        * p.vx.powi(m.vel[0] as i32)
        * p.vy.powi(m.vel[1] as i32)
}

/// Value of a scalar series at a point. Field quantities are evaluated at
/// the position variables of the point, whichever chart the series is in.
pub fn eval_series(s: &GradedSeries, model: &FieldModel, p: &EvalPoint) -> Result<Complex64> {
    model.check_point(p)?;
    let mut fv = FieldValues::new(model, p.x, p.y);
    Ok(s.terms()
        .map(|(m, c)| c.to_complex() * monomial_value(m, &mut fv, p))
        .sum())
}

/// Value of a word series that has only a scalar part.
pub fn eval_words(ws: &WordSeries, model: &FieldModel, p: &EvalPoint) -> Result<Complex64> {
    if ws.words().any(|(w, c)| !w.is_empty() && !c.is_zero()) {
        return Err(Error::WordPresent);
    }
    eval_series(&ws.coefficient(&[]), model, p)
}

/// `f_a * f_b` at a point, by summing the blocks of the star-product operator
/// with exact polynomial derivatives and prefactors evaluated from the model.
/// Blocks outside the truncation window are dropped exactly as the symbolic
/// product drops them.
pub fn numeric_star(
    fa: &RealPoly,
    fb: &RealPoly,
    model: &FieldModel,
    p: &EvalPoint,
    trunc: Truncation,
) -> Result<Complex64> {
    model.check_point(p)?;
    let engine = StarProduct::new(trunc)?;
    let mut fv = FieldValues::new(model, p.x, p.y);
    let phase = p.phase();
    let mut da: HashMap<[u32; 4], f64> = HashMap::new();
    let mut db: HashMap<[u32; 4], f64> = HashMap::new();
    let mut total = Complex64::new(0.0, 0.0);
    for (&(n, e), op) in engine.operator().blocks() {
        if n > trunc.max_hbar || e > trunc.max_eps {
            continue;
        }
        let mut block = Complex64::new(0.0, 0.0);
        let mut touched = false;
        for t in op.terms() {
            let lo = [t.left.x[0], t.left.x[1], t.left.v[0], t.left.v[1]];
            let ro = [t.right.x[0], t.right.x[1], t.right.v[0], t.right.v[1]];
            let va = *da.entry(lo).or_insert_with(|| fa.mixed(lo).eval(phase));
            if va == 0.0 {
                continue;
            }
            let vb = *db.entry(ro).or_insert_with(|| fb.mixed(ro).eval(phase));
            if vb == 0.0 {
                continue;
            }
            touched = true;
            block += t.coeff.to_complex() * fv.factor(&t.prefactor) * va * vb;
        }
        if touched {
            if e < trunc.min_eps {
                return Err(Error::EpsUnderflow {
                    eps: e,
                    min: trunc.min_eps,
                });
            }
            total += block * p.hbar.powi(n as i32) * p.eps.powi(e);
        }
    }
    Ok(total)
}
