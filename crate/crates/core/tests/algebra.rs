mod common;

use common::{series, Shape};
use gcstar::{Axis, Chart, Error, FieldFactor, GradedSeries, Monomial, Truncation};
use proptest::prelude::*;

fn ring() -> Shape {
    Shape {
        eps: (0, 3),
        ..Shape::algebra()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_is_commutative_and_associative(a in series(ring(), 20), b in series(ring(), 20), c in series(ring(), 20)) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn pointwise_product_is_a_commutative_ring(a in series(ring(), 8), b in series(ring(), 8), c in series(ring(), 8)) {
        let ab = a.mul_pointwise(&b).unwrap();
        prop_assert_eq!(&ab, &b.mul_pointwise(&a).unwrap());
        prop_assert_eq!(ab.mul_pointwise(&c).unwrap(), a.mul_pointwise(&b.mul_pointwise(&c).unwrap()).unwrap());
        let lhs = a.mul_pointwise(&b.add(&c).unwrap()).unwrap();
        let rhs = ab.add(&a.mul_pointwise(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let one = GradedSeries::one(Chart::Particle, Truncation::default());
        prop_assert_eq!(a.mul_pointwise(&one).unwrap(), a);
    }

    #[test]
    fn position_derivative_is_a_derivation(a in series(ring(), 8), b in series(ring(), 8)) {
        for axis in Axis::BOTH {
            let lhs = a.mul_pointwise(&b).unwrap().partial_x(axis);
            let rhs = a.partial_x(axis).mul_pointwise(&b).unwrap()
                .add(&a.mul_pointwise(&b.partial_x(axis)).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = a.mul_pointwise(&b).unwrap().partial_v(axis);
            let rhs = a.partial_v(axis).mul_pointwise(&b).unwrap()
                .add(&a.mul_pointwise(&b.partial_v(axis)).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn mixed_partials_commute(a in series(Shape::algebra(), 20)) {
        prop_assert_eq!(a.partial_x(Axis::X).partial_x(Axis::Y), a.partial_x(Axis::Y).partial_x(Axis::X));
        prop_assert_eq!(a.partial_x(Axis::X).partial_v(Axis::Y), a.partial_v(Axis::Y).partial_x(Axis::X));
    }
}

#[test]
fn half_powers_of_b_add() {
    let t = Truncation::default();
    for m in -8..=8 {
        for n in -8..=8 {
            let p = GradedSeries::b_power(Chart::Particle, t, m)
                .mul_pointwise(&GradedSeries::b_power(Chart::Particle, t, n))
                .unwrap();
            let (mono, _) = p.terms().next().unwrap();
            assert_eq!(mono.field, FieldFactor::b_pow(m + n));
        }
    }
}

#[test]
fn truncation_drops_high_orders_and_rejects_low_eps() {
    let t = Truncation::new(1, -1, 1);
    let mut s = GradedSeries::zero(Chart::Particle, t);
    s.push(
        Monomial {
            hbar: 2,
            ..Monomial::one()
        },
        gcstar::Coefficient::one(),
    )
    .unwrap();
    s.push(
        Monomial {
            eps: 2,
            ..Monomial::one()
        },
        gcstar::Coefficient::one(),
    )
    .unwrap();
    assert!(s.is_zero());
    let err = s.push(
        Monomial {
            eps: -2,
            ..Monomial::one()
        },
        gcstar::Coefficient::one(),
    );
    assert_eq!(err, Err(Error::EpsUnderflow { eps: -2, min: -1 }));
}

#[test]
fn combining_series_intersects_windows() {
    let a = GradedSeries::one(Chart::Particle, Truncation::new(2, -2, 3));
    let b = GradedSeries::one(Chart::Particle, Truncation::new(1, -1, 4));
    assert_eq!(a.add(&b).unwrap().truncation(), Truncation::new(1, -1, 3));
}

#[test]
fn charts_do_not_mix() {
    let t = Truncation::default();
    let a = GradedSeries::one(Chart::Particle, t);
    let b = GradedSeries::one(Chart::GuidingCenter, t);
    assert!(matches!(a.add(&b), Err(Error::ChartMismatch { .. })));
}

#[test]
fn derivative_of_b_power_uses_the_chain_rule() {
    let t = Truncation::default();
    let s = gcstar::text::parse_series("B^(-3/2)", t).unwrap();
    let want = gcstar::text::parse_series("-(3/2)*B^(-5/2)*d[x]B", t).unwrap();
    assert_eq!(s.partial_x(Axis::X), want);
}
