//! Consistency checks of the coordinate maps.

use crate::error::Result;
use crate::gc::maps::{backward_map, forward_map};
use crate::gc::subst::{coordinates, substitute};
use crate::monomial::{FieldFactor, Monomial};
use crate::series::{Chart, GradedSeries, Truncation};
use crate::star::poisson;
use crate::text::{render, RenderStyle};
use crate::Coefficient;

/// Highest `eps` order carried by the maps.
pub const MAP_ORDER: i32 = 2;

fn map_truncation() -> Truncation {
    Truncation::new(0, -2, MAP_ORDER)
}

/// Forward map composed with the backward map, minus the identity, as
/// four guiding-center series. All four vanish through `eps^2` when the maps
/// are mutually inverse.
pub fn compose_identity_check() -> Result<[GradedSeries; 4]> {
    let t = map_truncation();
    let fwd = forward_map(t)?;
    let [x, y, vx, vy] = backward_map(t)?;
    let id = coordinates(Chart::GuidingCenter, t);
    let pos = [x, y];
    let vel = [vx, vy];
    let mut out = Vec::with_capacity(4);
    for (f, i) in fwd.iter().zip(id.iter()) {
        out.push(substitute(f, Chart::GuidingCenter, &pos, &vel)?.sub(i)?);
    }
    Ok(out.try_into().expect("four components"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderCheck {
    pub eps: i32,
    pub expected: String,
    pub actual: String,
    pub matches: bool,
    /// Whether this order counts towards the pass/fail verdict.
    pub asserted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub name: String,
    pub orders: Vec<OrderCheck>,
    /// Lowest `eps` order not fixed by the truncated maps.
    pub first_undetermined: i32,
}

impl PairReport {
    pub fn passed(&self) -> bool {
        self.orders.iter().filter(|o| o.asserted).all(|o| o.matches)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketReport {
    pub pairs: Vec<PairReport>,
}

impl BracketReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(PairReport::passed)
    }

    pub fn pair(&self, name: &str) -> Option<&PairReport> {
        self.pairs.iter().find(|p| p.name == name)
    }
}

fn lowest_order(s: &GradedSeries, pred: impl Fn(&Monomial) -> bool) -> Option<i32> {
    s.terms().filter(|(m, _)| pred(m)).map(|(m, _)| m.eps).min()
}

/// First `eps` order of `{f, g}` that depends on the unknown `eps^3` terms
/// of the maps, and the lowest order at which the bracket can be nonzero.
fn order_window(f: &GradedSeries, g: &GradedSeries) -> (i32, i32) {
    let nonconst = |m: &Monomial| m.has_phase_space() || !m.field.is_one();
    let velocity = |m: &Monomial| m.vel != [0, 0];
    let big = i32::MAX / 4;
    let lf = lowest_order(f, nonconst).unwrap_or(big);
    let lg = lowest_order(g, nonconst).unwrap_or(big);
    let vf = lowest_order(f, velocity).unwrap_or(big);
    let vg = lowest_order(g, velocity).unwrap_or(big);
    let k = MAP_ORDER;
    let undetermined = (k + vg).min(k + 1 + lg).min(k + vf).min(k + 1 + lf);
    let lowest = (vf + vg - 1).min(lf + lg);
    (lowest, undetermined)
}

/// Check the gauge-invariant Poisson brackets of the forward map:
/// `{V_x, V_y} = 1/eps`, `{X, Y} = eps / B(X, Y)` and `{X_i, V_j} = 0`.
///
/// Each pair is compared at every `eps` order the truncated maps determine.
/// The two lowest such orders decide the verdict; later ones are reported.
pub fn verify_classical_brackets() -> Result<BracketReport> {
    let t = map_truncation();
    let bracket_t = Truncation::new(0, -2, MAP_ORDER + 1);
    let fwd = forward_map(t)?;
    let fwd_b: Vec<GradedSeries> = fwd
        .iter()
        .map(|s| s.with_truncation(bracket_t))
        .collect::<Result<_>>()?;
    let [_, _, vx, vy] = coordinates(Chart::Particle, bracket_t);
    let names = ["X", "Y", "V_x", "V_y"];

    let inv_eps = GradedSeries::monomial(
        Chart::Particle,
        bracket_t,
        Monomial {
            eps: -1,
            ..Monomial::one()
        },
        Coefficient::one(),
    )?;
    let inv_b = GradedSeries::monomial(
        Chart::Particle,
        bracket_t,
        Monomial::with_field(FieldFactor::b_pow(-2)),
        Coefficient::one(),
    )?;
    let inv_b_at_gc = substitute(
        &inv_b,
        Chart::Particle,
        &[fwd_b[0].clone(), fwd_b[1].clone()],
        &[vx, vy],
    )?;
    let eps_over_b = inv_b_at_gc.mul_monomial(
        &Monomial {
            eps: 1,
            ..Monomial::one()
        },
        &Coefficient::one(),
    )?;
    let zero = GradedSeries::zero(Chart::Particle, bracket_t);

    let pairs: [(usize, usize, &GradedSeries); 6] = [
        (2, 3, &inv_eps),
        (0, 1, &eps_over_b),
        (0, 2, &zero),
        (0, 3, &zero),
        (1, 2, &zero),
        (1, 3, &zero),
    ];
    let mut reports = Vec::new();
    for (i, j, expected) in pairs {
        let b = poisson(&fwd_b[i], &fwd_b[j])?;
        let (lowest, undetermined) = order_window(&fwd_b[i], &fwd_b[j]);
        let mut orders = Vec::new();
        for (k, e) in (lowest..undetermined).enumerate() {
            let want = expected.order_part(0, e);
            let got = b.order_part(0, e);
            orders.push(OrderCheck {
                eps: e,
                expected: render(&want, RenderStyle::Canonical),
                actual: render(&got, RenderStyle::Canonical),
                matches: want.same_terms(&got),
                asserted: k < 2,
            });
        }
        reports.push(PairReport {
            name: format!("{{{},{}}}", names[i], names[j]),
            orders,
            first_undetermined: undetermined,
        });
    }
    Ok(BracketReport { pairs: reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_are_mutually_inverse() {
        for r in compose_identity_check().unwrap() {
            assert!(
                r.is_zero(),
                "residual {}",
                render(&r, RenderStyle::Canonical)
            );
        }
    }

    #[test]
    fn velocity_bracket_and_mixed_brackets() {
        let rep = verify_classical_brackets().unwrap();
        let v = rep.pair("{V_x,V_y}").unwrap();
        assert!(v.passed());
        assert_eq!(v.orders[0].eps, -1);
        assert_eq!(v.first_undetermined, 2);
        for name in ["{X,V_x}", "{X,V_y}", "{Y,V_x}", "{Y,V_y}"] {
            assert!(rep.pair(name).unwrap().passed(), "{name}");
        }
    }
}
