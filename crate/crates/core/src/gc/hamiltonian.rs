//! Guiding-center Weyl symbol of the Hamiltonian.
//!
//! The particle Hamiltonian `1/2 (v_x^2 + v_y^2) + phi(x, y)` is rewritten in
//! guiding-center variables through the backward map. Velocity products are
//! taken as star products (`v_x * v_x`), so the backward velocity symbols are
//! first Weyl symmetrised into words; the potential is Taylor expanded about
//! the guiding center with symmetrised displacement products. The result is
//! normal ordered and expressed as a polynomial in the star powers of
//! `J = V_x * V_x + V_y * V_y`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::gc::maps::backward_map;
use crate::gc::words::{arrangements, Letter, WordSeries};
use crate::monomial::{Axis, FieldFactor, Generator, Monomial};
use crate::series::{Chart, GradedSeries, Truncation};
use crate::text::{render, to_structured, RenderStyle, TermJson};

/// Window used for all intermediate products of the reduction.
pub fn pipeline_truncation() -> Truncation {
    Truncation::new(2, -2, 2)
}

/// Highest combined order `hbar^n eps^m` (`n + m`) kept in the result.
pub const TOTAL_ORDER: i32 = 2;

/// Scalar potential added to the kinetic energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Potential {
    /// A general electrostatic potential `phi(x, y)`.
    Electrostatic,
    /// The spin coupling `-mu_z B(x, y)`.
    Spin,
    /// No potential.
    None,
}

/// `sum_k coeff_k J^{*k}` with guiding-center scalar coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct JPolynomial {
    coeffs: Vec<GradedSeries>,
}

#[derive(Debug, Clone, Serialize)]
pub struct JCoeffJson {
    pub j: usize,
    pub terms: Vec<TermJson>,
}

impl JPolynomial {
    pub fn new(coeffs: Vec<GradedSeries>) -> Self {
        let mut p = JPolynomial { coeffs };
        while p.coeffs.last().is_some_and(|c| c.is_zero()) {
            p.coeffs.pop();
        }
        p
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> GradedSeries {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| GradedSeries::zero(Chart::GuidingCenter, pipeline_truncation()))
    }

    pub fn coeffs(&self) -> &[GradedSeries] {
        &self.coeffs
    }

    pub fn map(&self, f: impl Fn(&GradedSeries) -> GradedSeries) -> JPolynomial {
        JPolynomial::new(self.coeffs.iter().map(f).collect())
    }

    pub fn has_generator(&self, pred: impl Fn(Generator) -> bool + Copy) -> bool {
        self.coeffs.iter().any(|c| c.has_generator(pred))
    }

    /// Structural equality of all coefficients.
    pub fn same_as(&self, o: &JPolynomial) -> bool {
        let n = self.coeffs.len().max(o.coeffs.len());
        (0..n).all(|k| self.coeff(k).same_terms(&o.coeff(k)))
    }

    /// One line per power of `J`: `J^k: <coefficient>`.
    pub fn render(&self, style: RenderStyle) -> String {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| format!("J^{k}: {}", render(c, style)))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn to_structured(&self) -> Vec<JCoeffJson> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| JCoeffJson {
                j,
                terms: to_structured(c),
            })
            .collect()
    }
}

/// Symmetrised product of `a` copies of `dx` and `b` copies of `dy`.
fn symmetric_product(dx: &WordSeries, dy: &WordSeries, a: usize, b: usize) -> Result<WordSeries> {
    let orders = arrangements(a, b);
    let mut acc = WordSeries::zero(dx.truncation().intersect(dy.truncation()));
    let one = WordSeries::scalar(&GradedSeries::one(Chart::GuidingCenter, acc.truncation()))?;
    for w in &orders {
        let mut prod = one.clone();
        for l in w {
            prod = prod.mul(if *l == Letter::Vx { dx } else { dy })?;
        }
        acc = acc.add(&prod)?;
    }
    Ok(acc.scale(&Coefficient::from_ratio(1, orders.len() as i64)))
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Weyl-ordered Taylor expansion of a guiding-center scalar `g` about
/// `(X, Y)`: `sum_beta g_{,beta}(X,Y) Sym(dx^beta_x dy^beta_y) / beta!`.
/// The displacements must start at order `eps`; the sum stops once every
/// product of a given total degree vanishes under the truncation.
pub fn taylor_shift(g: &GradedSeries, dx: &WordSeries, dy: &WordSeries) -> Result<WordSeries> {
    let mut out = WordSeries::zero(
        g.truncation()
            .intersect(dx.truncation())
            .intersect(dy.truncation()),
    );
    for total in 0usize.. {
        let mut any = false;
        for a in 0..=total {
            let b = total - a;
            let prod = symmetric_product(dx, dy, a, b)?;
            if prod.is_zero() {
                continue;
            }
            any = true;
            let dg = g.derivative([a as u32, b as u32], [0, 0]);
            let c = Coefficient::real(BigRational::new(
                1.into(),
                BigInt::from(factorial(a) * factorial(b)),
            ));
            out = out.add(&prod.scale_by(&dg.scale(&c))?)?;
        }
        if !any {
            break;
        }
        if total > 16 {
            return Err(Error::Domain(
                "Taylor shift does not terminate; displacement not small".into(),
            ));
        }
    }
    Ok(out)
}

/// `J = V_x * V_x + V_y * V_y` as words.
pub fn j_words(trunc: Truncation) -> Result<WordSeries> {
    let vx = WordSeries::letter(Letter::Vx, trunc);
    let vy = WordSeries::letter(Letter::Vy, trunc);
    vx.mul(&vx)?.add(&vy.mul(&vy)?)
}

/// Expand a normal-ordered word series in star powers of `J`, peeling off
/// the highest degree first. Fails with the residual if the series is not a
/// polynomial in `J`.
pub fn express_in_j(ws: &WordSeries) -> Result<JPolynomial> {
    let trunc = ws.truncation();
    let mut rest = ws.normal_ordered()?;
    let mut coeffs: Vec<GradedSeries> = Vec::new();
    let j = j_words(trunc)?;
    while let Some(len) = rest.max_len() {
        if len % 2 == 1 {
            return Err(Error::NotReducibleToJ {
                residual: rest.render(),
            });
        }
        let k = len / 2;
        let lead = vec![Letter::Vx; len];
        let c = rest.coefficient(&lead);
        if coeffs.len() <= k {
            coeffs.resize(k + 1, GradedSeries::zero(Chart::GuidingCenter, trunc));
        }
        if !c.is_zero() {
            let jk = j.pow(k as u32)?.normal_ordered()?.scale_by(&c)?;
            rest = rest.sub(&jk)?;
            coeffs[k] = coeffs[k].add(&c)?;
        }
        if rest.max_len() == Some(len) {
            return Err(Error::NotReducibleToJ {
                residual: rest.of_length(len).render(),
            });
        }
    }
    Ok(JPolynomial::new(coeffs))
}

/// Replace the potential by the spin coupling, `phi -> -mu_z B`, in every
/// field generator (derivatives of `phi` become derivatives of `B`).
pub fn spin_potential(s: &GradedSeries) -> Result<GradedSeries> {
    let mut out = GradedSeries::zero(s.chart(), s.truncation());
    for (m, c) in s.terms() {
        let mut field = FieldFactor::b_pow(m.field.b_half);
        let mut sign = 1;
        for &(g, p) in &m.field.gens {
            let f = match g {
                Generator::Dphi(a) => {
                    if p % 2 == 1 {
                        sign = -sign;
                    }
                    let b = if a.order() == 0 {
                        FieldFactor::b_pow(2)
                    } else {
                        FieldFactor::gen(Generator::DB(a))
                    };
                    b.mul(&FieldFactor::gen(Generator::MuZ)).pow(p)
                }
                g => FieldFactor::gen(g).pow(p),
            };
            field = field.mul(&f);
        }
        let term = Monomial { field, ..m.clone() };
        out = out.add(&GradedSeries::monomial(
            s.chart(),
            s.truncation(),
            term,
            c * &Coefficient::from_int(sign),
        )?)?;
    }
    Ok(out)
}

/// The guiding-center Hamiltonian as a normal-ordered word series, restricted
/// to combined order `hbar^n eps^m` with `n + m <= 2`.
pub fn hamiltonian_words(potential: Potential) -> Result<WordSeries> {
    let t = pipeline_truncation();
    let [x, y, vx, vy] = backward_map(t)?.map(|s| match potential {
        Potential::Electrostatic => Ok(s),
        Potential::Spin => spin_potential(&s),
        Potential::None => Ok(s.filter(|m| !m.field.has(Generator::is_potential))),
    });
    let (x, y, vx, vy) = (x?, y?, vx?, vy?);
    let vx_w = WordSeries::from_pointwise(&vx)?;
    let vy_w = WordSeries::from_pointwise(&vy)?;
    let kinetic = vx_w
        .mul(&vx_w)?
        .add(&vy_w.mul(&vy_w)?)?
        .scale(&Coefficient::from_ratio(1, 2));
    let mut h = kinetic;
    let g = match potential {
        Potential::Electrostatic => Some(GradedSeries::generator(
            Chart::GuidingCenter,
            t,
            Generator::dphi(0, 0),
        )),
        Potential::Spin => Some(spin_potential(&GradedSeries::generator(
            Chart::GuidingCenter,
            t,
            Generator::dphi(0, 0),
        ))?),
        Potential::None => None,
    };
    if let Some(g) = g {
        let dx = WordSeries::from_pointwise(&x.sub(&GradedSeries::position(
            Chart::GuidingCenter,
            t,
            Axis::X,
        ))?)?;
        let dy = WordSeries::from_pointwise(&y.sub(&GradedSeries::position(
            Chart::GuidingCenter,
            t,
            Axis::Y,
        ))?)?;
        h = h.add(&taylor_shift(&g, &dx, &dy)?)?;
    }
    Ok(h.normal_ordered()?
        .filter(|m| m.hbar as i32 + m.eps <= TOTAL_ORDER))
}

/// Guiding-center Hamiltonian as a polynomial in `J`, for a general
/// potential (`spin = false`) or for the spin coupling `-mu_z B`.
pub fn derive_hamiltonian(spin: bool) -> Result<JPolynomial> {
    derive_hamiltonian_with(if spin {
        Potential::Spin
    } else {
        Potential::Electrostatic
    })
}

pub fn derive_hamiltonian_with(potential: Potential) -> Result<JPolynomial> {
    let h = express_in_j(&hamiltonian_words(potential)?)?;
    if h.coeffs.iter().any(|c| c.terms().any(|(m, _)| m.hbar == 1)) {
        return Err(Error::Domain(
            "nonvanishing first-order hbar correction".into(),
        ));
    }
    Ok(h)
}

/// The `hbar^0` part of the guiding-center Hamiltonian.
pub fn classical_hamiltonian() -> Result<JPolynomial> {
    Ok(derive_hamiltonian(false)?.map(|c| c.filter(|m| m.hbar == 0)))
}

/// Coefficients `a_k` of `H_n = sum_k a_k (n + 1/2)^k`, obtained from
/// `J -> (2n+1) hbar` and `eps -> 1`. The potential must be absent.
pub fn level_formula(h: &JPolynomial) -> Result<Vec<GradedSeries>> {
    if h.has_generator(Generator::is_potential) {
        return Err(Error::FieldPresent);
    }
    let wide = Truncation::new(4, -8, 8);
    h.coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let two_hbar = Monomial {
                hbar: k as u32,
                ..Monomial::one()
            };
            c.with_truncation(wide)?
                .map_monomials(wide, |m| Monomial {
                    eps: 0,
                    ..m.clone()
                })?
                .mul_monomial(&two_hbar, &Coefficient::from_int(1 << k))
        })
        .collect()
}

/// Energy of the `n`-th Landau level including the adiabatic corrections.
pub fn quantized_levels(h: &JPolynomial, n: u32) -> Result<GradedSeries> {
    let a = level_formula(h)?;
    let nu = BigRational::new(BigInt::from(2 * n as i64 + 1), BigInt::from(2));
    let mut out = GradedSeries::zero(Chart::GuidingCenter, Truncation::new(4, -8, 8));
    let mut p = BigRational::from_integer(1.into());
    for ak in &a {
        out = out.add(&ak.scale(&Coefficient::real(p.clone())))?;
        p *= &nu;
    }
    Ok(out)
}

/// Levels for a magnetic field without electric potential.
pub fn landau_levels(n: u32) -> Result<GradedSeries> {
    quantized_levels(&derive_hamiltonian_with(Potential::None)?, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_series_in;

    fn gc(s: &str) -> GradedSeries {
        parse_series_in(s, pipeline_truncation(), Chart::GuidingCenter).unwrap()
    }

    #[test]
    fn ordering_lemma_for_quartic() {
        let q = WordSeries::from_pointwise(&gc("(V_x^2 + V_y^2)^2")).unwrap();
        let j = express_in_j(&q).unwrap();
        assert!(j.coeff(2).same_terms(&gc("1")));
        assert!(j.coeff(1).is_zero());
        assert!(j.coeff(0).same_terms(&gc("hbar^2*eps^-2")));
    }

    #[test]
    fn odd_symbols_are_not_reducible() {
        let w = WordSeries::from_pointwise(&gc("V_x*V_y^2")).unwrap();
        assert!(matches!(
            express_in_j(&w),
            Err(Error::NotReducibleToJ { .. })
        ));
    }

    #[test]
    fn taylor_shift_of_potential() {
        let t = pipeline_truncation();
        let dx = WordSeries::from_pointwise(&gc("eps*V_y")).unwrap();
        let dy = WordSeries::zero(t);
        let s = taylor_shift(&gc("phi"), &dx, &dy).unwrap();
        let want =
            WordSeries::from_pointwise(&gc("phi + eps*d[x]phi*V_y + (1/2)*eps^2*d[x,x]phi*V_y^2"))
                .unwrap();
        assert_eq!(s.to_pointwise().unwrap(), want.to_pointwise().unwrap());
    }

    #[test]
    fn levels_reject_potential() {
        let h = derive_hamiltonian(false).unwrap();
        assert_eq!(quantized_levels(&h, 0), Err(Error::FieldPresent));
    }
}
