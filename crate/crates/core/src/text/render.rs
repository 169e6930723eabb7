use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coeff::Coefficient;
use crate::monomial::{Axis, Generator, Monomial, MultiIndex};
use crate::series::{Chart, GradedSeries};

/// How field quantities are spelled in rendered text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderStyle {
    /// Everything in terms of `B`, `phi` and their derivatives.
    #[default]
    Canonical,
    /// First derivatives of `phi` shown as `E_x = -d[x]phi`, `E_y = -d[y]phi`.
    EField,
}

fn rat_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Coefficient text for a positive-leading coefficient, `None` if it is one.
fn coeff_text(c: &Coefficient) -> Option<String> {
    let wrap = |r: &BigRational| {
        if r.is_integer() {
            rat_text(r)
        } else {
            format!("({})", rat_text(r))
        }
    };
    if c.im.is_zero() {
        if c.re.is_one() {
            None
        } else {
            Some(wrap(&c.re))
        }
    } else if c.re.is_zero() {
        if c.im.is_one() {
            Some("i".into())
        } else {
            Some(format!("{}*i", wrap(&c.im)))
        }
    } else {
        let sign = if c.im.is_negative() { '-' } else { '+' };
        Some(format!(
            "({} {} {}*i)",
            rat_text(&c.re),
            sign,
            rat_text(&c.im.abs())
        ))
    }
}

fn power(name: &str, k: i64) -> String {
    if k == 1 {
        name.to_string()
    } else {
        format!("{name}^{k}")
    }
}

fn b_text(b_half: i32) -> Option<String> {
    match b_half {
        0 => None,
        h if h % 2 == 0 => Some(power("B", (h / 2) as i64)),
        h => Some(format!("B^({h}/2)")),
    }
}

fn monomial_factors(
    m: &Monomial,
    chart: Chart,
    style: RenderStyle,
    sign: &mut bool,
) -> Vec<String> {
    let mut out = Vec::new();
    if m.hbar > 0 {
        out.push(power("hbar", m.hbar as i64));
    }
    if m.eps != 0 {
        out.push(power("eps", m.eps as i64));
    }
    if let Some(b) = b_text(m.field.b_half) {
        out.push(b);
    }
    for &(g, p) in &m.field.gens {
        let e_axis = match g {
            Generator::Dphi(a)
                if style == RenderStyle::EField && a == MultiIndex::ZERO.bump(Axis::X) =>
            {
                Some(Axis::X)
            }
            Generator::Dphi(a)
                if style == RenderStyle::EField && a == MultiIndex::ZERO.bump(Axis::Y) =>
            {
                Some(Axis::Y)
            }
            _ => None,
        };
        match e_axis {
            Some(a) => {
                if p % 2 == 1 {
                    *sign = !*sign;
                }
                out.push(power(if a == Axis::X { "E_x" } else { "E_y" }, p as i64));
            }
            None => out.push(power(&g.to_string(), p as i64)),
        }
    }
    let (px, py, vx, vy) = match chart {
        Chart::Particle => ("x", "y", "v_x", "v_y"),
        Chart::GuidingCenter => ("X", "Y", "V_x", "V_y"),
    };
    for (name, k) in [
        (px, m.pos[0]),
        (py, m.pos[1]),
        (vx, m.vel[0]),
        (vy, m.vel[1]),
    ] {
        if k > 0 {
            out.push(power(name, k as i64));
        }
    }
    out
}

/// Render a single coefficient-monomial pair; returns `(negative, body)`.
pub(crate) fn render_term(
    m: &Monomial,
    c: &Coefficient,
    chart: Chart,
    style: RenderStyle,
) -> (bool, String) {
    let mut neg = c.leading_negative();
    let c = if neg { -c } else { c.clone() };
    let factors = monomial_factors(m, chart, style, &mut neg);
    let mut parts = Vec::new();
    if let Some(t) = coeff_text(&c) {
        parts.push(t);
    }
    parts.extend(factors);
    if parts.is_empty() {
        parts.push("1".into());
    }
    (neg, parts.join("*"))
}

/// Canonical text of a series; the zero series renders as `0`.
pub fn render(s: &GradedSeries, style: RenderStyle) -> String {
    let mut out = String::new();
    for (k, (m, c)) in s.terms().enumerate() {
        let (neg, body) = render_term(m, c, s.chart(), style);
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Truncation;
    use crate::text::parse_series;

    fn rt(s: &str) -> String {
        render(
            &parse_series(s, Truncation::default()).unwrap(),
            RenderStyle::Canonical,
        )
    }

    #[test]
    fn canonical_order_and_coefficients() {
        assert_eq!(
            rt("(1/2)*i*hbar*eps^-1*B + v_y*v_x"),
            "v_x*v_y + (1/2)*i*hbar*eps^-1*B"
        );
        assert_eq!(rt("v_x - v_x"), "0");
        assert_eq!(rt("-x"), "-x");
        assert_eq!(rt("B^(1/2)*V_x"), "B^(1/2)*V_x");
        assert_eq!(rt("2 + 3*i"), "(2 + 3*i)");
        assert_eq!(rt("2 - 3*i"), "(2 - 3*i)");
        assert_eq!(rt("-2 - 3*i"), "-(2 + 3*i)");
    }

    #[test]
    fn efield_style_reads_back() {
        let s = parse_series("E_x*v_y - 2*E_y^2", Truncation::default()).unwrap();
        let text = render(&s, RenderStyle::EField);
        assert_eq!(text, "-2*E_y^2 + E_x*v_y");
        assert_eq!(parse_series(&text, Truncation::default()).unwrap(), s);
        assert_eq!(
            render(&s, RenderStyle::Canonical),
            "-2*d[y]phi^2 - d[x]phi*v_y"
        );
    }
}
