//! Symbolic versus numeric star products on random points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeff::Coefficient;
use crate::error::Result;
use crate::monomial::Monomial;
use crate::numeric::eval::{eval_series, numeric_star};
use crate::numeric::model::{EvalPoint, FieldModel};
use crate::numeric::poly::{Exponents, RealPoly};
use crate::series::{Chart, GradedSeries, Truncation};
use crate::star::StarProduct;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const ABS_FLOOR: f64 = 1e-12;

/// A phase-space polynomial in both representations.
#[derive(Debug, Clone)]
pub struct Symbol {
    pub exact: GradedSeries,
    pub numeric: RealPoly,
}

impl Symbol {
    /// `x^i y^j v_x^k v_y^l`.
    pub fn monomial(e: Exponents, trunc: Truncation) -> Result<Self> {
        let m = Monomial {
            pos: [e[0], e[1]],
            vel: [e[2], e[3]],
            ..Monomial::one()
        };
        Ok(Symbol {
            exact: GradedSeries::monomial(Chart::Particle, trunc, m, Coefficient::one())?,
            numeric: RealPoly::monomial(e, 1.0),
        })
    }
}

/// All exponent vectors of total degree at most `max_degree`.
pub fn monomials_up_to(max_degree: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        for i in 0..=d {
            for j in 0..=d - i {
                for k in 0..=d - i - j {
                    out.push([i, j, k, d - i - j - k]);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    pub trunc: Truncation,
    pub hbar_range: (f64, f64),
    pub eps_range: (f64, f64),
    pub velocity_range: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            points: 100,
            seed: 42,
            tol: DEFAULT_TOL,
            trunc: Truncation::default(),
            hbar_range: (0.05, 0.5),
            eps_range: (0.2, 1.0),
            velocity_range: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub seed: u64,
    pub points: usize,
    pub pairs: usize,
    pub tol: f64,
    pub max_discrepancy: f64,
    /// Pair index and point index of the largest discrepancy.
    pub worst: Option<(usize, usize)>,
    pub passed: bool,
}

/// `|a - b| / max(|a|, |b|)`, or zero when `|a - b|` is below the absolute floor.
pub fn discrepancy(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    let diff = (a - b).norm();
    if diff <= ABS_FLOOR {
        0.0
    } else {
        diff / a.norm().max(b.norm())
    }
}

/// Seeded sample points inside the model domain.
pub fn sample_points(model: &FieldModel, opts: &CompareOptions) -> Vec<EvalPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let [x0, x1, y0, y1] = model.domain();
    let v = opts.velocity_range;
    (0..opts.points)
        .map(|_| EvalPoint {
            x: rng.gen_range(x0..=x1),
            y: rng.gen_range(y0..=y1),
            vx: rng.gen_range(-v..=v),
            vy: rng.gen_range(-v..=v),
            hbar: rng.gen_range(opts.hbar_range.0..=opts.hbar_range.1),
            eps: rng.gen_range(opts.eps_range.0..=opts.eps_range.1),
        })
        .collect()
}

/// Largest discrepancy between the evaluated symbolic product and the
/// numeric product over all pairs and sample points.
pub fn compare_symbolic_numeric(
    pairs: &[(Symbol, Symbol)],
    model: &FieldModel,
    opts: &CompareOptions,
) -> Result<CompareReport> {
    let engine = StarProduct::new(opts.trunc)?;
    let points = sample_points(model, opts);
    let mut max = 0.0f64;
    let mut worst = None;
    for (pi, (a, b)) in pairs.iter().enumerate() {
        let exact = engine.star(&a.exact, &b.exact)?;
        for (qi, p) in points.iter().enumerate() {
            let s = eval_series(&exact, model, p)?;
            let n = numeric_star(&a.numeric, &b.numeric, model, p, opts.trunc)?;
            let d = discrepancy(s, n);
            if d > max || worst.is_none() {
                max = max.max(d);
                worst = Some((pi, qi));
            }
        }
    }
    Ok(CompareReport {
        seed: opts.seed,
        points: points.len(),
        pairs: pairs.len(),
        tol: opts.tol,
        max_discrepancy: max,
        worst,
        passed: max <= opts.tol,
    })
}

/// Every ordered pair of monomials of degree at most `max_degree`.
pub fn monomial_pairs(max_degree: u32, trunc: Truncation) -> Result<Vec<(Symbol, Symbol)>> {
    let ms: Vec<Symbol> = monomials_up_to(max_degree)
        .into_iter()
        .map(|e| Symbol::monomial(e, trunc))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(ms.len() * ms.len());
    for a in &ms {
        for b in &ms {
            out.push((a.clone(), b.clone()));
        }
    }
    Ok(out)
}
