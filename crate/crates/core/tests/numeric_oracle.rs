mod common;

use common::{series, Shape};
use gcstar::numeric::{
    compare_symbolic_numeric, eval_series, monomial_pairs, numeric_star, CompareOptions, EvalPoint,
    FieldModel, RealPoly, Symbol,
};
use gcstar::{Axis, Chart, Generator, GradedSeries, Truncation};
use num_complex::Complex64;
use proptest::prelude::*;

const SMOOTH: &str = "B = 2 + 0.3*x - 0.2*y + 0.1*x*y + 0.05*x^2*y^2 + 0.04*y^4
phi = 0.3*x*y - 0.2*x^3 + 0.1*y^2 + 0.05*x^2*y^2
domain = -1 1 -1 1
c1 = 0.7
c2 = -0.4
mu_z = 0.25";

fn model() -> FieldModel {
    FieldModel::parse(SMOOTH).unwrap()
}

fn point(x: f64, y: f64) -> EvalPoint {
    EvalPoint {
        x,
        y,
        vx: 0.8,
        vy: -1.1,
        hbar: 0.2,
        eps: 0.6,
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

#[test]
fn finite_differences_agree_with_symbolic_derivatives() {
    let m = model();
    let t = Truncation::default();
    let mut gens: Vec<Generator> = vec![Generator::C1, Generator::C2, Generator::MuZ];
    for (i, j) in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (2, 1)] {
        gens.push(Generator::db(i, j));
    }
    for (i, j) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
        gens.push(Generator::dphi(i, j));
    }
    let mut symbols: Vec<GradedSeries> = gens
        .iter()
        .map(|&g| GradedSeries::generator(Chart::Particle, t, g))
        .collect();
    for h in [-3, -1, 1, 2] {
        symbols.push(GradedSeries::b_power(Chart::Particle, t, h));
    }
    let step = 1e-4;
    for s in &symbols {
        for axis in Axis::BOTH {
            let (x, y) = (0.31, -0.27);
            let (dx, dy) = if axis == Axis::X {
                (step, 0.0)
            } else {
                (0.0, step)
            };
            let plus = eval_series(s, &m, &point(x + dx, y + dy)).unwrap();
            let minus = eval_series(s, &m, &point(x - dx, y - dy)).unwrap();
            let fd = (plus - minus) / (2.0 * step);
            let exact = eval_series(&s.partial_x(axis), &m, &point(x, y)).unwrap();
            let ok = (fd - exact).norm() <= 1e-6 * exact.norm().max(1e-6);
            assert!(ok, "{s:?} along {axis:?}: {fd} vs {exact}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_linear(a in series(Shape::algebra(), 10), b in series(Shape::algebra(), 10)) {
        let m = model();
        let p = point(0.1, 0.4);
        let sum = eval_series(&a.add(&b).unwrap(), &m, &p).unwrap();
        let parts = eval_series(&a, &m, &p).unwrap() + eval_series(&b, &m, &p).unwrap();
        prop_assert!((sum - parts).norm() <= 1e-12 * sum.norm().max(parts.norm()).max(1.0));
    }
}

#[test]
fn constant_field_oracle_agrees_on_cubic_monomials() {
    let m = FieldModel::uniform(1.7, [-1.0, 1.0, -1.0, 1.0]).unwrap();
    let opts = CompareOptions::default();
    let r = compare_symbolic_numeric(&monomial_pairs(3, opts.trunc).unwrap(), &m, &opts).unwrap();
    assert_eq!(r.pairs, 35 * 35);
    assert_eq!(r.points, 100);
    assert!(r.passed, "{r:?}");
}

#[test]
fn nonuniform_field_oracle_agrees_on_cubic_monomials() {
    let opts = CompareOptions {
        seed: 7,
        ..CompareOptions::default()
    };
    let r =
        compare_symbolic_numeric(&monomial_pairs(3, opts.trunc).unwrap(), &model(), &opts).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn reports_are_reproducible() {
    let t = Truncation::default();
    let pairs = vec![(
        Symbol::monomial([1, 0, 1, 1], t).unwrap(),
        Symbol::monomial([0, 1, 2, 0], t).unwrap(),
    )];
    let opts = CompareOptions::default();
    let a = compare_symbolic_numeric(&pairs, &model(), &opts).unwrap();
    let b = compare_symbolic_numeric(&pairs, &model(), &opts).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.seed, 42);
}

#[test]
fn numeric_star_examples() {
    let m = model();
    let p = point(0.2, -0.5);
    let t = Truncation::default();
    let f = RealPoly::parse("x*v_x^2 - 3*y*v_y").unwrap();
    let one = numeric_star(&RealPoly::constant(1.0), &f, &m, &p, t).unwrap();
    assert!(rel(one, Complex64::new(f.eval(p.phase()), 0.0)) < 1e-15);
    let vxvy = numeric_star(&RealPoly::var(2), &RealPoly::var(3), &m, &p, t).unwrap();
    let want = Complex64::new(0.0, p.hbar * m.b_at(p.x, p.y) / (2.0 * p.eps));
    assert!(rel(vxvy - Complex64::new(p.vx * p.vy, 0.0), want) < 1e-13);
}

#[test]
fn model_checks_positivity_with_margin() {
    assert!(FieldModel::parse("B = 0.05 + x^2\ndomain = -1 1 -1 1").is_err());
    assert!(FieldModel::parse("B = 0.2 + x^2\ndomain = -1 1 -1 1").is_ok());
}
