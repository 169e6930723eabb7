//! Substitution of one coordinate system into a symbol, pointwise.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::monomial::{Axis, Monomial};
use crate::series::{Chart, GradedSeries, Truncation};

/// Rewrite `s` (any chart) in the chart `target`, given the old position and
/// velocity coordinates as series in `target`.
///
/// Field quantities at the old position are Taylor expanded about the new
/// position: `F(p + d) = sum_beta d^beta F_{,beta}(p) / beta!` with
/// `d = pos - p`. Every component of `d` must be at least of order `eps`,
/// and the expansion is carried until `d^beta` falls outside the window.
pub fn substitute(
    s: &GradedSeries,
    target: Chart,
    pos: &[GradedSeries; 2],
    vel: &[GradedSeries; 2],
) -> Result<GradedSeries> {
    let trunc = s
        .truncation()
        .intersect(pos[0].truncation())
        .intersect(pos[1].truncation())
        .intersect(vel[0].truncation())
        .intersect(vel[1].truncation());
    let base = [
        GradedSeries::position(target, trunc, Axis::X),
        GradedSeries::position(target, trunc, Axis::Y),
    ];
    let delta = [pos[0].sub(&base[0])?, pos[1].sub(&base[1])?];
    for d in &delta {
        if d.min_eps().is_some_and(|e| e < 1) {
            return Err(Error::Domain(
                "Taylor shift needs a displacement of order eps".into(),
            ));
        }
    }
    // d^beta / beta! for all beta that survive the truncation
    let mut shifts: Vec<(u32, u32, GradedSeries)> = Vec::new();
    let mut dx_pow = GradedSeries::one(target, trunc);
    for px in 0u32.. {
        if dx_pow.is_zero() {
            break;
        }
        let mut dxy = dx_pow.clone();
        for py in 0u32.. {
            if dxy.is_zero() {
                break;
            }
            let fact = BigRational::new(1.into(), BigInt::from(factorial(px) * factorial(py)));
            shifts.push((px, py, dxy.scale(&Coefficient::real(fact))));
            dxy = dxy.mul_pointwise(&delta[1])?;
        }
        dx_pow = dx_pow.mul_pointwise(&delta[0])?;
    }

    let mut pos_pows: [Vec<GradedSeries>; 2] = [
        vec![GradedSeries::one(target, trunc)],
        vec![GradedSeries::one(target, trunc)],
    ];
    let mut vel_pows: [Vec<GradedSeries>; 2] = [
        vec![GradedSeries::one(target, trunc)],
        vec![GradedSeries::one(target, trunc)],
    ];
    let mut out = GradedSeries::zero(target, trunc);
    for (m, c) in s.terms() {
        for i in 0..2 {
            while pos_pows[i].len() <= m.pos[i] as usize {
                let next = pos_pows[i].last().unwrap().mul_pointwise(&pos[i])?;
                pos_pows[i].push(next);
            }
            while vel_pows[i].len() <= m.vel[i] as usize {
                let next = vel_pows[i].last().unwrap().mul_pointwise(&vel[i])?;
                vel_pows[i].push(next);
            }
        }
        let field = GradedSeries::monomial(
            target,
            trunc,
            Monomial {
                hbar: m.hbar,
                eps: m.eps,
                field: m.field.clone(),
                ..Monomial::one()
            },
            c.clone(),
        )?;
        let mut shifted = GradedSeries::zero(target, trunc);
        for (px, py, d) in &shifts {
            let df = field.derivative([*px, *py], [0, 0]);
            if df.is_zero() {
                continue;
            }
            shifted = shifted.add(&df.mul_pointwise(d)?)?;
        }
        let mut term = shifted;
        for i in 0..2 {
            term = term.mul_pointwise(&pos_pows[i][m.pos[i] as usize])?;
            term = term.mul_pointwise(&vel_pows[i][m.vel[i] as usize])?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// The identity coordinates of a chart.
pub fn coordinates(chart: Chart, trunc: Truncation) -> [GradedSeries; 4] {
    [
        GradedSeries::position(chart, trunc, Axis::X),
        GradedSeries::position(chart, trunc, Axis::Y),
        GradedSeries::velocity(chart, trunc, Axis::X),
        GradedSeries::velocity(chart, trunc, Axis::Y),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{parse_series, parse_series_in};

    #[test]
    fn shift_of_inverse_field() {
        let t = Truncation::new(0, -2, 2);
        let s = parse_series("B^-1", t).unwrap();
        let pos = [
            parse_series("x + eps*v_y", t).unwrap(),
            parse_series("y", t).unwrap(),
        ];
        let [_, _, vx, vy] = coordinates(Chart::Particle, t);
        let r = substitute(&s, Chart::Particle, &pos, &[vx, vy]).unwrap();
        let want = parse_series(
            "B^-1 - eps*B^-2*d[x]B*v_y + eps^2*(B^-3*d[x]B^2 - (1/2)*B^-2*d[x,x]B)*v_y^2",
            t,
        )
        .unwrap();
        assert_eq!(r, want);
    }

    #[test]
    fn identity_substitution_is_trivial() {
        let t = Truncation::new(0, -2, 2);
        let s =
            parse_series_in("B^(1/2)*V_x + eps*d[x]B*X*V_y^2", t, Chart::GuidingCenter).unwrap();
        let [x, y, vx, vy] = coordinates(Chart::GuidingCenter, t);
        assert_eq!(
            substitute(&s, Chart::GuidingCenter, &[x, y], &[vx, vy]).unwrap(),
            s
        );
    }
}
