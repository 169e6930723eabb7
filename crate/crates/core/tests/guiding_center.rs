mod common;

use common::oscillator::{relative_block_difference, Oscillator};
use common::{series_in, Shape};
use gcstar::gc::hamiltonian::{j_words, pipeline_truncation, spin_potential};
use gcstar::gc::{
    classical_hamiltonian, compose_identity_check, derive_hamiltonian, express_in_j, forward_map,
    landau_levels, level_formula, quantized_levels, JPolynomial, Letter, WordSeries,
};
use gcstar::numeric::{eval_series, EvalPoint, FieldModel};
use gcstar::text::parse_series_in;
use gcstar::{Chart, Error, Generator, GradedSeries, Truncation};
use num_complex::Complex64;
use proptest::prelude::*;

fn gc(s: &str) -> GradedSeries {
    parse_series_in(s, pipeline_truncation(), Chart::GuidingCenter).unwrap()
}

/// The reduced Hamiltonian in component notation, with `J = V_x^2 + V_y^2`.
fn reference_hamiltonian() -> JPolynomial {
    JPolynomial::new(vec![
        gc("phi - (8/16)*eps^2*B^-2*(E_x^2 + E_y^2)
            + (1/16)*hbar^2*B^-2*(-d[x]B^2 + B*d[x,x]B - d[y]B^2 + B*d[y,y]B)"),
        gc("(1/2)*B + (4/16)*eps^2*B^-2*(3*E_x*d[x]B + B*d[x,x]phi + 3*E_y*d[y]B + B*d[y,y]phi)"),
        gc("(1/16)*eps^2*B^-2*(-3*d[x]B^2 + B*d[x,x]B - 3*d[y]B^2 + B*d[y,y]B)"),
    ])
}

#[test]
fn maps_compose_to_the_identity() {
    for r in compose_identity_check().unwrap() {
        assert!(r.is_zero());
    }
}

#[test]
fn hamiltonian_matches_the_reference_form() {
    let h = derive_hamiltonian(false).unwrap();
    assert!(
        h.same_as(&reference_hamiltonian()),
        "{}",
        h.render(gcstar::text::RenderStyle::EField)
    );
}

#[test]
fn quantum_correction_ignores_the_potential_and_free_constants() {
    let h = derive_hamiltonian(false).unwrap();
    let quantum = h.map(|c| c.filter(|m| m.hbar > 0));
    assert!(!quantum.has_generator(Generator::is_potential));
    assert!(!h.has_generator(|g| matches!(g, Generator::C1 | Generator::C2)));
    assert!(h
        .coeffs()
        .iter()
        .all(|c| c.terms().all(|(m, _)| m.hbar != 1)));
}

#[test]
fn classical_part_is_the_hbar_free_restriction() {
    let h = derive_hamiltonian(false).unwrap();
    let c = classical_hamiltonian().unwrap();
    assert!(c.same_as(&h.map(|s| s.filter(|m| m.hbar == 0))));
}

#[test]
fn spin_hamiltonian_is_the_general_result_with_phi_replaced() {
    let h = derive_hamiltonian(true).unwrap();
    let want = reference_hamiltonian();
    let want = JPolynomial::new(
        want.coeffs()
            .iter()
            .map(|c| spin_potential(c).unwrap())
            .collect(),
    );
    assert!(h.same_as(&want));
    // the mu_z^2 term carries B^-2 overall
    assert_eq!(
        h.coeff(0).order_part(0, 2),
        parse_series_in(
            "-(1/2)*mu_z^2*B^-2*(d[x]B^2 + d[y]B^2)",
            pipeline_truncation(),
            Chart::GuidingCenter
        )
        .unwrap()
    );
    assert_eq!(
        h.coeff(1).order_part(0, 2),
        parse_series_in(
            "-(1/4)*mu_z*B^-2*(B*d[x,x]B + B*d[y,y]B - 3*d[x]B^2 - 3*d[y]B^2)",
            pipeline_truncation(),
            Chart::GuidingCenter
        )
        .unwrap()
    );
}

#[test]
fn landau_levels_in_n() {
    let wide = Truncation::new(4, -8, 8);
    let p = |s: &str| parse_series_in(s, wide, Chart::GuidingCenter).unwrap();
    for n in 0..4i64 {
        let nu = format!("({}/2)", 2 * n + 1);
        let want = p(&format!(
            "{nu}*hbar*B + {nu}^2*(1/4)*hbar^2*B^-2*(B*d[x,x]B + B*d[y,y]B - 3*d[x]B^2 - 3*d[y]B^2)
             + (1/16)*hbar^2*B^-2*(B*d[x,x]B + B*d[y,y]B - d[x]B^2 - d[y]B^2)"
        ));
        assert!(
            landau_levels(n as u32).unwrap().same_terms(&want),
            "n = {n}"
        );
    }
}

#[test]
fn levels_need_a_potential_free_hamiltonian() {
    let h = derive_hamiltonian(false).unwrap();
    assert_eq!(level_formula(&h), Err(Error::FieldPresent));
    assert_eq!(quantized_levels(&h, 1), Err(Error::FieldPresent));
}

#[test]
fn uniform_field_limit_of_the_forward_map() {
    let t = Truncation::new(0, -2, 2);
    let f = forward_map(t).unwrap();
    let uniform = |s: &GradedSeries| s.filter(|m| !m.field.has(|g| g != Generator::MuZ));
    let p = |s: &str| parse_series_in(s, t, Chart::Particle).unwrap();
    assert_eq!(uniform(&f[0]), p("x + eps*B^-1*v_y"));
    assert_eq!(uniform(&f[1]), p("y - eps*B^-1*v_x"));
    assert_eq!(uniform(&f[2]), p("B^(-1/2)*v_x"));
    assert_eq!(uniform(&f[3]), p("B^(-1/2)*v_y"));
}

#[test]
fn ordering_lemma_against_oscillator_matrices() {
    let q = WordSeries::from_pointwise(&gc("(V_x^2 + V_y^2)^2")).unwrap();
    let j = express_in_j(&q).unwrap();
    assert!(j.coeff(2).same_terms(&gc("1")));
    assert!(j.coeff(1).is_zero());
    assert!(j.coeff(0).same_terms(&gc("hbar^2*eps^-2")));

    let (hbar, eps) = (0.3, 0.7);
    let osc = Oscillator::new(12, hbar, eps);
    let quartic = osc.weyl_monomial(4, 0)
        + osc.weyl_monomial(0, 4)
        + osc.weyl_monomial(2, 2).mapv(|z| z * 2.0);
    let jm = osc.weyl_monomial(2, 0) + osc.weyl_monomial(0, 2);
    let c0 = hbar * hbar / (eps * eps);
    let symbolic = jm.dot(&jm) + osc.identity().mapv(|z| z * Complex64::new(c0, 0.0));
    assert!(relative_block_difference(&quartic, &symbolic, 8) < 1e-10);
}

fn word_matrix(
    osc: &Oscillator,
    ws: &WordSeries,
    hbar: f64,
    eps: f64,
) -> common::oscillator::Matrix {
    let model = FieldModel::uniform(1.0, [-1.0, 1.0, -1.0, 1.0]).unwrap();
    let p = EvalPoint {
        x: 0.0,
        y: 0.0,
        vx: 0.0,
        vy: 0.0,
        hbar,
        eps,
    };
    let mut m = common::oscillator::Matrix::zeros((osc.levels, osc.levels));
    for (w, c) in ws.words() {
        let letters: Vec<bool> = w.iter().map(|l| *l == Letter::Vx).collect();
        let z = eval_series(c, &model, &p).unwrap();
        m = m + osc.word(&letters).mapv(|e| e * z);
    }
    m
}

#[test]
fn normal_ordering_is_idempotent_and_preserves_the_operator() {
    let t = pipeline_truncation();
    let (vx, vy) = (
        WordSeries::letter(Letter::Vx, t),
        WordSeries::letter(Letter::Vy, t),
    );
    let w = vy
        .mul(&vx)
        .unwrap()
        .mul(&vy)
        .unwrap()
        .mul(&vx)
        .unwrap()
        .add(&WordSeries::from_pointwise(&gc("V_y*V_x^3 + 2*V_x*V_y + V_y^2*V_x^2")).unwrap())
        .unwrap();
    let once = w.normal_ordered().unwrap();
    assert!(once.is_normal_ordered());
    assert_eq!(once.normal_ordered().unwrap(), once);

    let (hbar, eps) = (0.4, 0.9);
    let osc = Oscillator::new(12, hbar, eps);
    let d = relative_block_difference(
        &word_matrix(&osc, &w, hbar, eps),
        &word_matrix(&osc, &once, hbar, eps),
        8,
    );
    assert!(d < 1e-12, "{d}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn j_polynomials_round_trip(cs in prop::collection::vec(
        series_in(Chart::GuidingCenter, pipeline_truncation(), Shape { hbar: 2, eps: (0, 2), max_b: 2, with_fields: true, max_degree: 0 }, 3),
        1..=4,
    )) {
        let t = pipeline_truncation();
        let j = j_words(t).unwrap();
        let mut ws = WordSeries::zero(t);
        for (k, c) in cs.iter().enumerate() {
            ws = ws.add(&j.pow(k as u32).unwrap().scale_by(c).unwrap()).unwrap();
        }
        let back = express_in_j(&ws).unwrap();
        prop_assert!(back.same_as(&JPolynomial::new(cs)));
    }
}
