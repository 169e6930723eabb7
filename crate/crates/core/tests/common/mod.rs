#![allow(dead_code)]

pub mod oscillator;

use gcstar::{Chart, Coefficient, FieldFactor, Generator, GradedSeries, Monomial, Truncation};
use proptest::prelude::*;

pub fn coefficient() -> impl Strategy<Value = Coefficient> {
    (-6i64..=6, 1i64..=4, -3i64..=3, 1i64..=3).prop_filter_map("nonzero", |(a, b, c, d)| {
        let z = Coefficient::from_ratio(a, b) + Coefficient::i() * Coefficient::from_ratio(c, d);
        (!z.is_zero()).then_some(z)
    })
}

fn generator() -> impl Strategy<Value = Generator> {
    prop_oneof![
        Just(Generator::db(1, 0)),
        Just(Generator::db(0, 1)),
        Just(Generator::db(1, 1)),
        Just(Generator::db(0, 2)),
        Just(Generator::dphi(0, 0)),
        Just(Generator::dphi(1, 0)),
        Just(Generator::dphi(0, 2)),
        Just(Generator::C1),
        Just(Generator::C2),
        Just(Generator::MuZ),
    ]
}

pub fn field_factor(max_b: i32) -> impl Strategy<Value = FieldFactor> {
    (
        -max_b..=max_b,
        prop::collection::vec((generator(), 1u32..=2), 0..=2),
    )
        .prop_map(|(h, gens)| {
            gens.into_iter().fold(FieldFactor::b_pow(h), |f, (g, p)| {
                f.mul(&FieldFactor::gen(g).pow(p))
            })
        })
}

/// Shape of the random monomials.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub hbar: u32,
    pub eps: (i32, i32),
    pub max_b: i32,
    pub with_fields: bool,
    pub max_degree: u32,
}

impl Shape {
    pub fn algebra() -> Self {
        Shape {
            hbar: 2,
            eps: (-2, 3),
            max_b: 4,
            with_fields: true,
            max_degree: 4,
        }
    }

    /// Small symbols for star products inside the default window.
    pub fn star() -> Self {
        Shape {
            hbar: 0,
            eps: (0, 1),
            max_b: 2,
            with_fields: true,
            max_degree: 3,
        }
    }
}

pub fn monomial(shape: Shape) -> impl Strategy<Value = Monomial> {
    let field = if shape.with_fields {
        field_factor(shape.max_b).boxed()
    } else {
        Just(FieldFactor::one()).boxed()
    };
    (
        0..=shape.hbar,
        shape.eps.0..=shape.eps.1,
        field,
        prop::array::uniform4(0u32..=shape.max_degree),
    )
        .prop_filter_map("degree", move |(hbar, eps, field, e)| {
            (e.iter().sum::<u32>() <= shape.max_degree).then(|| Monomial {
                hbar,
                eps,
                field,
                pos: [e[0], e[1]],
                vel: [e[2], e[3]],
            })
        })
}

pub fn series_in(
    chart: Chart,
    trunc: Truncation,
    shape: Shape,
    max_terms: usize,
) -> impl Strategy<Value = GradedSeries> {
    prop::collection::vec((monomial(shape), coefficient()), 0..=max_terms).prop_map(move |terms| {
        let mut s = GradedSeries::zero(chart, trunc);
        for (m, c) in terms {
            s.push(m, c).expect("monomials lie inside the window");
        }
        s
    })
}

pub fn series(shape: Shape, max_terms: usize) -> impl Strategy<Value = GradedSeries> {
    series_in(Chart::Particle, Truncation::default(), shape, max_terms)
}
