//! The gauge-invariant star product and the brackets derived from it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::bidiff::{BiDiffOperator, DerivOrders, POperator, Weights, MAX_HBAR_CAP};
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::monomial::{Axis, FieldFactor, Monomial};
use crate::series::{GradedSeries, Truncation};

type CacheKey = (u32, bool);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<POperator>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<POperator>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached_operator(max_hbar: u32, magnetic: bool) -> Arc<POperator> {
    let mut c = cache().lock().unwrap();
    c.entry((max_hbar, magnetic))
        .or_insert_with(|| Arc::new(POperator::build(max_hbar, magnetic, &Weights::standard())))
        .clone()
}

/// Star-product engine bound to one truncation window.
#[derive(Debug, Clone)]
pub struct StarProduct {
    p: Arc<POperator>,
    trunc: Truncation,
}

impl StarProduct {
    /// Engine for a nonuniform magnetic field.
    pub fn new(trunc: Truncation) -> Result<Self> {
        Self::check_cap(trunc)?;
        Ok(StarProduct {
            p: cached_operator(trunc.max_hbar, true),
            trunc,
        })
    }

    /// Engine for `B = 0`: the ordinary Moyal product.
    pub fn field_free(trunc: Truncation) -> Result<Self> {
        Self::check_cap(trunc)?;
        Ok(StarProduct {
            p: cached_operator(trunc.max_hbar, false),
            trunc,
        })
    }

    /// Uncached engine with modified weights, for fault-injection checks.
    pub fn with_weights(trunc: Truncation, weights: Weights) -> Result<Self> {
        Self::check_cap(trunc)?;
        Ok(StarProduct {
            p: Arc::new(POperator::build(trunc.max_hbar, true, &weights)),
            trunc,
        })
    }

    fn check_cap(trunc: Truncation) -> Result<()> {
        if trunc.max_hbar > MAX_HBAR_CAP {
            return Err(Error::Domain(format!(
                "hbar order {} exceeds the supported maximum {MAX_HBAR_CAP}",
                trunc.max_hbar
            )));
        }
        Ok(())
    }

    pub fn operator(&self) -> &POperator {
        &self.p
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    fn apply(
        &self,
        a: &GradedSeries,
        b: &GradedSeries,
        keep: impl Fn(u32) -> bool,
        factor: &Coefficient,
    ) -> Result<GradedSeries> {
        if a.chart() != b.chart() {
            return Err(Error::ChartMismatch {
                left: a.chart(),
                right: b.chart(),
            });
        }
        let trunc = self
            .trunc
            .intersect(a.truncation())
            .intersect(b.truncation());
        let mut out = GradedSeries::zero(a.chart(), trunc);
        let lo_a = a.terms().map(|(m, _)| m.hbar).min();
        let lo_b = b.terms().map(|(m, _)| m.hbar).min();
        let (Some(lo_a), Some(lo_b)) = (lo_a, lo_b) else {
            return Ok(out);
        };
        let mut da: HashMap<DerivOrders, GradedSeries> = HashMap::new();
        let mut db: HashMap<DerivOrders, GradedSeries> = HashMap::new();
        for (&(n, e), op) in self.p.blocks() {
            if !keep(n) || n + lo_a + lo_b > trunc.max_hbar {
                continue;
            }
            for t in op.terms() {
                let fa = da
                    .entry(t.left)
                    .or_insert_with(|| a.derivative(t.left.x, t.left.v));
                if fa.is_zero() {
                    continue;
                }
                let fa = fa.clone();
                let fb = db
                    .entry(t.right)
                    .or_insert_with(|| b.derivative(t.right.x, t.right.v));
                if fb.is_zero() {
                    continue;
                }
                let shift = Monomial {
                    hbar: n,
                    eps: e,
                    field: t.prefactor.clone(),
                    ..Monomial::one()
                };
                let c = &t.coeff * factor;
                for (ma, ca) in fa.terms() {
                    if ma.hbar + n + lo_b > trunc.max_hbar {
                        continue;
                    }
                    let m1 = ma.mul(&shift);
                    let c1 = ca * &c;
                    for (mb, cb) in fb.terms() {
                        if m1.hbar + mb.hbar > trunc.max_hbar || m1.eps + mb.eps > trunc.max_eps {
                            continue;
                        }
                        out.push(m1.mul(mb), &c1 * cb)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `a * b` to the engine's truncation.
    pub fn star(&self, a: &GradedSeries, b: &GradedSeries) -> Result<GradedSeries> {
        self.apply(a, b, |_| true, &Coefficient::one())
    }

    /// Moyal bracket `a * b - b * a`, assembled from the odd `hbar` blocks.
    pub fn moyal(&self, a: &GradedSeries, b: &GradedSeries) -> Result<GradedSeries> {
        self.apply(a, b, |n| n % 2 == 1, &Coefficient::from_int(2))
    }

    /// Average of the star products over all orderings of the factors.
    pub fn symmetrized(&self, fs: &[GradedSeries]) -> Result<GradedSeries> {
        let Some(first) = fs.first() else {
            return Err(Error::Domain("symmetrized product of no factors".into()));
        };
        let mut idx: Vec<usize> = (0..fs.len()).collect();
        let mut acc = GradedSeries::zero(first.chart(), self.trunc.intersect(first.truncation()));
        let mut count = 0i64;
        loop {
            let mut prod = fs[idx[0]].clone();
            for &k in &idx[1..] {
                prod = self.star(&prod, &fs[k])?;
            }
            acc = acc.add(&prod)?;
            count += 1;
            if !next_permutation(&mut idx) {
                break;
            }
        }
        Ok(acc.scale(&Coefficient::from_ratio(1, count)))
    }

    /// The block of the operator at `hbar^n eps^m`.
    pub fn block(&self, hbar: u32, eps: i32) -> BiDiffOperator {
        self.p.block(hbar, eps)
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Gauge-invariant Poisson bracket
/// `{f,g} = sum_i (f_x_i g_v_i - f_v_i g_x_i) + (B/eps)(f_vx g_vy - f_vy g_vx)`.
pub fn poisson(f: &GradedSeries, g: &GradedSeries) -> Result<GradedSeries> {
    let mut acc = GradedSeries::zero(f.chart(), f.truncation().intersect(g.truncation()));
    for i in Axis::BOTH {
        acc = acc.add(&f.partial_x(i).mul_pointwise(&g.partial_v(i))?)?;
        acc = acc.sub(&f.partial_v(i).mul_pointwise(&g.partial_x(i))?)?;
    }
    let mag = f
        .partial_v(Axis::X)
        .mul_pointwise(&g.partial_v(Axis::Y))?
        .sub(&f.partial_v(Axis::Y).mul_pointwise(&g.partial_v(Axis::X))?)?;
    let b_over_eps = Monomial {
        eps: -1,
        field: FieldFactor::b_pow(2),
        ..Monomial::one()
    };
    acc.add(&mag.mul_monomial(&b_over_eps, &Coefficient::one())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_series;

    fn p(s: &str) -> GradedSeries {
        parse_series(s, Truncation::default()).unwrap()
    }

    fn engine() -> StarProduct {
        StarProduct::new(Truncation::default()).unwrap()
    }

    #[test]
    fn velocity_product() {
        let r = engine().star(&p("v_x"), &p("v_y")).unwrap();
        assert_eq!(r, p("v_x*v_y + (1/2)*i*hbar*eps^-1*B"));
    }

    #[test]
    fn position_velocity_product() {
        let r = engine().star(&p("x"), &p("v_x")).unwrap();
        assert_eq!(r, p("x*v_x + (1/2)*i*hbar"));
    }

    #[test]
    fn field_free_quadratics() {
        let e = StarProduct::field_free(Truncation::default()).unwrap();
        let r = e.star(&p("x^2"), &p("v_x^2")).unwrap();
        assert_eq!(r, p("x^2*v_x^2 + 2*i*hbar*x*v_x - (1/2)*hbar^2"));
    }

    #[test]
    fn brackets_of_velocities() {
        assert_eq!(
            engine().moyal(&p("v_x"), &p("v_y")).unwrap(),
            p("i*hbar*eps^-1*B")
        );
        assert_eq!(poisson(&p("v_x"), &p("v_y")).unwrap(), p("eps^-1*B"));
        assert_eq!(poisson(&p("x"), &p("v_x")).unwrap(), p("1"));
    }

    #[test]
    fn constants_are_central() {
        let c = p("3/2 - i");
        let f = p("B*v_x*v_y + x*d[x]B");
        assert_eq!(
            engine().star(&c, &f).unwrap(),
            f.scale(&c.coefficient(&Monomial::one()))
        );
    }

    #[test]
    fn symmetrized_monomial() {
        let r = engine()
            .symmetrized(&[p("v_x"), p("v_x"), p("v_y")])
            .unwrap();
        assert_eq!(r, p("v_x^2*v_y"));
    }

    #[test]
    fn hbar_cap_is_enforced() {
        assert!(matches!(
            StarProduct::new(Truncation::new(5, -5, 3)),
            Err(Error::Domain(_))
        ));
    }
}
