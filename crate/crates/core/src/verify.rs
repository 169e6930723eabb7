//! Self-verification battery: each check compares an engine result against
//! an independently written reference.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::bidiff::{BiDiffOperator, DerivOrders, POperator, Weights};
use crate::coeff::Coefficient;
use crate::error::Result;
use crate::gc::hamiltonian::{
    derive_hamiltonian, derive_hamiltonian_with, level_formula, pipeline_truncation,
    spin_potential, Potential,
};
use crate::gc::{backward_map, compose_identity_check, verify_classical_brackets, JPolynomial};
use crate::monomial::{Axis, FieldFactor, Generator, Monomial};
use crate::numeric::monomials_up_to;
use crate::series::{Chart, GradedSeries, Truncation};
use crate::star::StarProduct;
use crate::text::{parse_series, parse_series_in, render, RenderStyle};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Residuals or mismatch descriptions; empty on success.
    pub detail: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str, detail: Vec<String>) -> Self {
        CheckOutcome {
            name,
            passed: detail.is_empty(),
            detail,
        }
    }
}

fn q(n: i64, d: i64) -> Coefficient {
    Coefficient::from_ratio(n, d)
}

fn qi(n: i64, d: i64) -> Coefficient {
    Coefficient::imag(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

// Derivative handles in the two-factor notation: `a`, `z` act on the left
// factor (velocity, position), `b`, `y` on the right factor.
fn a(i: Axis) -> (DerivOrders, DerivOrders) {
    (DerivOrders::vel(i), DerivOrders::default())
}
fn b(i: Axis) -> (DerivOrders, DerivOrders) {
    (DerivOrders::default(), DerivOrders::vel(i))
}
fn y(i: Axis) -> (DerivOrders, DerivOrders) {
    (DerivOrders::default(), DerivOrders::pos(i))
}
fn z(i: Axis) -> (DerivOrders, DerivOrders) {
    (DerivOrders::pos(i), DerivOrders::default())
}

fn push(
    op: &mut BiDiffOperator,
    c: Coefficient,
    pf: FieldFactor,
    ds: &[(DerivOrders, DerivOrders)],
) {
    let (l, r) = ds.iter().fold(
        (DerivOrders::default(), DerivOrders::default()),
        |(l, r), (dl, dr)| (l.add(*dl), r.add(*dr)),
    );
    op.push(c, pf, l, r);
}

fn eps2(j: Axis, l: Axis) -> i64 {
    match (j, l) {
        (Axis::X, Axis::Y) => 1,
        (Axis::Y, Axis::X) => -1,
        _ => 0,
    }
}

/// Transcription of the second-order expansion of the product operator, in
/// the plane with `B = B(x, y) e_z`.
pub fn reference_p_blocks() -> Vec<((u32, i32), BiDiffOperator)> {
    use Axis::{X, Y};
    let ax = [X, Y];
    let bb = FieldFactor::b_pow(2);
    let one = FieldFactor::one();
    let grad = |i: Axis| FieldFactor::gen(Generator::DB(crate::MultiIndex::ZERO.bump(i)));

    let mut h1 = BiDiffOperator::zero();
    let mut h1e = BiDiffOperator::zero();
    let mut h2 = BiDiffOperator::zero();
    let mut h2e = BiDiffOperator::zero();
    let mut h2ee = BiDiffOperator::zero();
    for &i in &ax {
        // -(i/2) (a_i y_i - b_i z_i)
        push(&mut h1, qi(-1, 2), one.clone(), &[a(i), y(i)]);
        push(&mut h1, qi(1, 2), one.clone(), &[b(i), z(i)]);
    }
    for &j in &ax {
        for &l in &ax {
            let e = eps2(j, l);
            if e == 0 {
                continue;
            }
            // (i/2) (1/eps) eps_jl B a_j b_l
            push(&mut h1e, qi(e, 2), bb.clone(), &[a(j), b(l)]);
        }
    }
    for &i in &ax {
        for &j in &ax {
            // -(1/8) (a_i a_j y_i y_j - 2 a_i b_j y_i z_j + b_i b_j z_i z_j)
            push(&mut h2, q(-1, 8), one.clone(), &[a(i), a(j), y(i), y(j)]);
            push(&mut h2, q(2, 8), one.clone(), &[a(i), b(j), y(i), z(j)]);
            push(&mut h2, q(-1, 8), one.clone(), &[b(i), b(j), z(i), z(j)]);
        }
    }
    for &i in &ax {
        for &j in &ax {
            for &l in &ax {
                let e = eps2(j, l);
                if e == 0 {
                    continue;
                }
                // (1/4)(1/eps) eps_jl [B (a_i a_j b_l y_i - a_j b_i b_l z_i)
                //                      + (1/3) B_,i (a_j a_i b_l - a_j b_l b_i)]
                push(&mut h2e, q(e, 4), bb.clone(), &[a(i), a(j), b(l), y(i)]);
                push(&mut h2e, q(-e, 4), bb.clone(), &[a(j), b(i), b(l), z(i)]);
                push(&mut h2e, q(e, 12), grad(i), &[a(j), a(i), b(l)]);
                push(&mut h2e, q(-e, 12), grad(i), &[a(j), b(l), b(i)]);
            }
        }
    }
    for &j in &ax {
        for &l in &ax {
            for &k in &ax {
                for &m in &ax {
                    let e = eps2(j, l) * eps2(k, m);
                    if e == 0 {
                        continue;
                    }
                    // -(1/8)(1/eps^2) eps_jl eps_km B^2 a_j a_k b_l b_m
                    push(
                        &mut h2ee,
                        q(-e, 8),
                        FieldFactor::b_pow(4),
                        &[a(j), a(k), b(l), b(m)],
                    );
                }
            }
        }
    }
    vec![
        ((0, 0), BiDiffOperator::identity()),
        ((1, 0), h1),
        ((1, -1), h1e),
        ((2, 0), h2),
        ((2, -1), h2e),
        ((2, -2), h2ee),
    ]
}

/// The built operator through `hbar^2` against the transcribed expansion.
pub fn check_operator_expansion(weights: &Weights) -> CheckOutcome {
    let p = POperator::build(2, true, weights);
    let reference = reference_p_blocks();
    let mut detail = Vec::new();
    for ((h, e), want) in &reference {
        let got = p.block(*h, *e);
        if &got != want {
            let diff = got.sub(want);
            detail.push(format!(
                "block hbar^{h} eps^{e}: {} differing terms",
                diff.len()
            ));
        }
    }
    for ((h, e), op) in p.blocks() {
        if !reference.iter().any(|(k, _)| k == &(*h, *e)) && !op.is_zero() {
            detail.push(format!("unexpected block hbar^{h} eps^{e}"));
        }
    }
    CheckOutcome::new("operator expansion through hbar^2", detail)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn falling(e: u32, k: u32) -> Option<BigInt> {
    (k <= e).then(|| (0..k).map(|t| BigInt::from(e - t)).product())
}

/// Ordinary Moyal product of `x^i y^j v_x^k v_y^l` monomials through
/// `hbar^max_hbar`, by direct expansion of
/// `exp[(i hbar / 2)(d_x^L d_v^R - d_v^L d_x^R)]`.
pub fn moyal_oracle(f: [u32; 4], g: [u32; 4], trunc: Truncation) -> Result<GradedSeries> {
    let mut out = GradedSeries::zero(Chart::Particle, trunc);
    for n in 0..=trunc.max_hbar {
        let half_i = Coefficient::i()
            .scale(&BigRational::new(1.into(), 2.into()))
            .pow(n);
        for p1 in 0..=n {
            for p2 in 0..=n - p1 {
                for q1 in 0..=n - p1 - p2 {
                    let q2 = n - p1 - p2 - q1;
                    // f gets d_x^p1 d_y^p2 d_vx^q1 d_vy^q2, g the conjugate orders
                    let fo = [p1, p2, q1, q2];
                    let go = [q1, q2, p1, p2];
                    let mut c = BigInt::from(1);
                    let mut ok = true;
                    for t in 0..4 {
                        match (falling(f[t], fo[t]), falling(g[t], go[t])) {
                            (Some(x), Some(y)) => c *= x * y,
                            _ => ok = false,
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let denom = factorial(p1) * factorial(p2) * factorial(q1) * factorial(q2);
                    let sign = if (q1 + q2) % 2 == 1 { -1 } else { 1 };
                    let coeff = half_i.scale(&BigRational::new(c * sign, denom));
                    let m = Monomial {
                        hbar: n,
                        pos: [f[0] + g[0] - p1 - q1, f[1] + g[1] - p2 - q2],
                        vel: [f[2] + g[2] - q1 - p1, f[3] + g[3] - q2 - p2],
                        ..Monomial::one()
                    };
                    out.push(m, coeff)?;
                }
            }
        }
    }
    Ok(out)
}

/// Field-free engine against the direct Moyal expansion on all monomial
/// pairs of degree at most `max_degree`.
pub fn check_moyal_reduction(max_degree: u32, max_hbar: u32) -> Result<CheckOutcome> {
    let t = Truncation::new(max_hbar, -(max_hbar as i32), max_hbar as i32);
    let engine = StarProduct::field_free(t)?;
    let ms = monomials_up_to(max_degree);
    let mono = |e: [u32; 4]| {
        GradedSeries::monomial(
            Chart::Particle,
            t,
            Monomial {
                pos: [e[0], e[1]],
                vel: [e[2], e[3]],
                ..Monomial::one()
            },
            Coefficient::one(),
        )
    };
    let series: Vec<GradedSeries> = ms.iter().map(|&e| mono(e)).collect::<Result<_>>()?;
    let mut detail = Vec::new();
    for (i, f) in ms.iter().enumerate() {
        for (j, g) in ms.iter().enumerate() {
            let got = engine.star(&series[i], &series[j])?;
            let want = moyal_oracle(*f, *g, t)?;
            if !got.same_terms(&want) {
                detail.push(format!(
                    "{} * {}: residual {}",
                    render(&series[i], RenderStyle::Canonical),
                    render(&series[j], RenderStyle::Canonical),
                    render(&got.sub(&want)?, RenderStyle::Canonical)
                ));
            }
        }
    }
    Ok(CheckOutcome::new("field-free Moyal reduction", detail))
}

pub fn check_composition() -> Result<CheckOutcome> {
    let names = ["X", "Y", "V_x", "V_y"];
    let detail = compose_identity_check()?
        .iter()
        .zip(names)
        .filter(|(r, _)| !r.is_zero())
        .map(|(r, n)| format!("{n}: residual {}", render(r, RenderStyle::Canonical)))
        .collect();
    Ok(CheckOutcome::new(
        "forward/backward map composition",
        detail,
    ))
}

pub fn check_classical_brackets() -> Result<CheckOutcome> {
    let rep = verify_classical_brackets()?;
    let mut detail = Vec::new();
    for p in &rep.pairs {
        for o in p.orders.iter().filter(|o| o.asserted && !o.matches) {
            detail.push(format!(
                "{} at eps^{}: expected {}, got {}",
                p.name, o.eps, o.expected, o.actual
            ));
        }
    }
    Ok(CheckOutcome::new(
        "gauge-invariant Poisson brackets of the maps",
        detail,
    ))
}

fn gc(s: &str) -> Result<GradedSeries> {
    parse_series_in(s, pipeline_truncation(), Chart::GuidingCenter)
}

const HBAR2: &str = "(1/16)*hbar^2*B^-2*(B*d[x,x]B + B*d[y,y]B - d[x]B^2 - d[y]B^2)";
const ADIABATIC_J2: &str = "(1/16)*eps^2*B^-2*(B*d[x,x]B + B*d[y,y]B - 3*d[x]B^2 - 3*d[y]B^2)";

/// Expected guiding-center Hamiltonian for a general electrostatic potential.
pub fn expected_hamiltonian() -> Result<JPolynomial> {
    Ok(JPolynomial::new(vec![
        gc(&format!("phi - (1/2)*eps^2*B^-2*(E_x^2 + E_y^2) + {HBAR2}"))?,
        gc("(1/2)*B + (1/4)*eps^2*B^-2*(3*E_x*d[x]B + 3*E_y*d[y]B + B*d[x,x]phi + B*d[y,y]phi)")?,
        gc(ADIABATIC_J2)?,
    ]))
}

/// Expected Hamiltonian for the spin coupling `-mu_z B` in its literal closed
/// form, where the `mu_z^2` term carries an extra `B^-2` (`B^-4` overall).
pub fn expected_spin_hamiltonian_literal() -> Result<JPolynomial> {
    Ok(JPolynomial::new(vec![
        gc(&format!(
            "-mu_z*B - (1/2)*eps^2*mu_z^2*B^-4*(d[x]B^2 + d[y]B^2) + {HBAR2}"
        ))?,
        gc("(1/2)*B - (1/4)*eps^2*mu_z*B^-2*(B*d[x,x]B + B*d[y,y]B - 3*d[x]B^2 - 3*d[y]B^2)")?,
        gc(ADIABATIC_J2)?,
    ]))
}

fn compare_j(got: &JPolynomial, want: &JPolynomial) -> Result<Vec<String>> {
    let n = got.coeffs().len().max(want.coeffs().len());
    let mut detail = Vec::new();
    for k in 0..n {
        let (g, w) = (got.coeff(k), want.coeff(k));
        if !g.same_terms(&w) {
            detail.push(format!(
                "J^{k}: residual {}",
                render(&g.sub(&w)?, RenderStyle::EField)
            ));
        }
    }
    Ok(detail)
}

pub fn check_hamiltonian() -> Result<CheckOutcome> {
    let h = derive_hamiltonian(false)?;
    let mut detail = compare_j(&h, &expected_hamiltonian()?)?;
    let quantum = h.map(|c| c.filter(|m| m.hbar == 2));
    if quantum.has_generator(Generator::is_potential) {
        detail.push("hbar^2 block depends on the potential".into());
    }
    if h.has_generator(|g| matches!(g, Generator::C1 | Generator::C2)) {
        detail.push("free constants c1, c2 survive".into());
    }
    Ok(CheckOutcome::new("guiding-center Hamiltonian", detail))
}

/// Spin Hamiltonian against its closed form.
pub fn check_spin_hamiltonian_literal() -> Result<CheckOutcome> {
    let h = derive_hamiltonian(true)?;
    Ok(CheckOutcome::new(
        "spin Hamiltonian (closed form)",
        compare_j(&h, &expected_spin_hamiltonian_literal()?)?,
    ))
}

/// Spin Hamiltonian against the general result with `phi = -mu_z B`.
pub fn check_spin_hamiltonian_substituted() -> Result<CheckOutcome> {
    let h = derive_hamiltonian(true)?;
    let want = expected_hamiltonian()?;
    let want = JPolynomial::new(
        want.coeffs()
            .iter()
            .map(spin_potential)
            .collect::<Result<_>>()?,
    );
    Ok(CheckOutcome::new(
        "spin Hamiltonian (phi = -mu_z B)",
        compare_j(&h, &want)?,
    ))
}

/// Level formula coefficients in `nu = n + 1/2`.
pub fn expected_level_coefficients() -> Result<Vec<GradedSeries>> {
    let t = Truncation::new(4, -8, 8);
    let p = |s: &str| parse_series_in(s, t, Chart::GuidingCenter);
    Ok(vec![
        p(HBAR2)?,
        p("hbar*B")?,
        p("(1/4)*hbar^2*B^-2*(B*d[x,x]B + B*d[y,y]B - 3*d[x]B^2 - 3*d[y]B^2)")?,
    ])
}

pub fn check_landau_levels() -> Result<CheckOutcome> {
    let got = level_formula(&derive_hamiltonian_with(Potential::None)?)?;
    let want = expected_level_coefficients()?;
    let mut detail = Vec::new();
    for k in 0..got.len().max(want.len()) {
        let zero = GradedSeries::zero(Chart::GuidingCenter, Truncation::new(4, -8, 8));
        let g = got.get(k).unwrap_or(&zero);
        let w = want.get(k).unwrap_or(&zero);
        if !g.same_terms(w) {
            detail.push(format!(
                "(n+1/2)^{k}: residual {}",
                render(&g.sub(w)?, RenderStyle::Canonical)
            ));
        }
    }
    Ok(CheckOutcome::new("quantized levels", detail))
}

pub fn check_free_constants() -> Result<CheckOutcome> {
    let free = |g: Generator| matches!(g, Generator::C1 | Generator::C2);
    let mut detail = Vec::new();
    if !backward_map(pipeline_truncation())?
        .iter()
        .any(|s| s.has_generator(free))
    {
        detail.push("maps carry no free constants to cancel".into());
    }
    for spin in [false, true] {
        if derive_hamiltonian(spin)?.has_generator(free) {
            detail.push(format!(
                "c1 or c2 present in the Hamiltonian (spin = {spin})"
            ));
        }
    }
    Ok(CheckOutcome::new("cancellation of c1, c2", detail))
}

/// Triples probing every `L_n` up to the operator cap.
fn associativity_triples() -> [[&'static str; 3]; 4] {
    [
        ["v_x^2*v_y", "x*v_y^2", "v_x*y"],
        ["v_x^3", "v_y^2*x", "v_y*v_x"],
        ["v_y^3", "v_x^2", "y*v_x^2"],
        ["x*v_x*v_y", "v_y^3", "v_x^2*y"],
    ]
}

/// `(a*b)*c = a*(b*c)` at high `hbar` order for a few probing triples.
pub fn check_high_order_associativity(weights: &Weights, max_hbar: u32) -> Result<CheckOutcome> {
    let t = Truncation::new(max_hbar, -2 * max_hbar as i32, 2);
    let engine = StarProduct::with_weights(t, *weights)?;
    let mut detail = Vec::new();
    for [sa, sb, sc] in associativity_triples() {
        let (fa, fb, fc) = (
            parse_series(sa, t)?,
            parse_series(sb, t)?,
            parse_series(sc, t)?,
        );
        let left = engine.star(&engine.star(&fa, &fb)?, &fc)?;
        let right = engine.star(&fa, &engine.star(&fb, &fc)?)?;
        let diff = left.sub(&right)?;
        if !diff.is_zero() {
            detail.push(format!(
                "({sa})*({sb})*({sc}): {} nonzero residual terms",
                diff.len()
            ));
        }
    }
    Ok(CheckOutcome::new(
        "associativity at high hbar order",
        detail,
    ))
}

/// The full battery behind `verify appendix`.
pub fn run_all(weights: &Weights) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        check_operator_expansion(weights),
        check_moyal_reduction(4, 3)?,
        check_composition()?,
        check_classical_brackets()?,
        check_hamiltonian()?,
        check_spin_hamiltonian_literal()?,
        check_spin_hamiltonian_substituted()?,
        check_landau_levels()?,
        check_free_constants()?,
        check_high_order_associativity(weights, 4)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_reproduces_small_moyal_products() {
        let t = Truncation::new(3, -3, 3);
        let got = moyal_oracle([2, 0, 0, 0], [0, 0, 2, 0], t).unwrap();
        let want = parse_series("x^2*v_x^2 + 2*i*hbar*x*v_x - (1/2)*hbar^2", t).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn operator_expansion_matches() {
        let r = check_operator_expansion(&Weights::standard());
        assert!(r.passed, "{:?}", r.detail);
        assert!(!check_operator_expansion(&Weights::with_flip(2, 1)).passed);
    }
}
