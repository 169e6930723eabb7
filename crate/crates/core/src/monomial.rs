//! Monomials of the graded symbol algebra.
//!
//! A monomial is `hbar^n eps^m B^(h/2) * prod(gen^p) * x^i y^j * v_x^k v_y^l`
//! where the generators are derivatives of the field `B`, derivatives of the
//! potential `phi`, and the external constants `c1`, `c2`, `mu_z`. Field
//! quantities are evaluated at the position variables of the chart.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X, Axis::Y];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }

    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
        }
    }
}

/// Derivative multi-index stored as counts per axis, so that mixed partials
/// commute by construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    pub x: u8,
    pub y: u8,
}

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex { x: 0, y: 0 };

    pub fn new(x: u8, y: u8) -> Self {
        MultiIndex { x, y }
    }

    pub fn order(self) -> u32 {
        self.x as u32 + self.y as u32
    }

    pub fn bump(self, axis: Axis) -> Self {
        match axis {
            Axis::X => MultiIndex::new(self.x + 1, self.y),
            Axis::Y => MultiIndex::new(self.x, self.y + 1),
        }
    }

    pub fn from_axes(axes: &[Axis]) -> Self {
        axes.iter().fold(MultiIndex::ZERO, |m, &a| m.bump(a))
    }

    /// Axis list with all `x` entries first.
    pub fn axes(self) -> Vec<Axis> {
        let mut v = vec![Axis::X; self.x as usize];
        v.extend(std::iter::repeat_n(Axis::Y, self.y as usize));
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// A derivative of B of order at least one.
    DB(MultiIndex),
    /// A derivative of phi of any order (order zero is phi itself).
    Dphi(MultiIndex),
    C1,
    C2,
    MuZ,
}

impl Generator {
    pub fn db(x: u8, y: u8) -> Self {
        debug_assert!(x + y >= 1);
        Generator::DB(MultiIndex::new(x, y))
    }

    pub fn dphi(x: u8, y: u8) -> Self {
        Generator::Dphi(MultiIndex::new(x, y))
    }

    /// Derivative along `axis`, or `None` for constants.
    pub fn derivative(self, axis: Axis) -> Option<Generator> {
        match self {
            Generator::DB(a) => Some(Generator::DB(a.bump(axis))),
            Generator::Dphi(a) => Some(Generator::Dphi(a.bump(axis))),
            _ => None,
        }
    }

    pub fn is_potential(self) -> bool {
        matches!(self, Generator::Dphi(_))
    }

    pub fn is_field_gradient(self) -> bool {
        matches!(self, Generator::DB(_))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axes = |a: MultiIndex| {
            a.axes()
                .iter()
                .map(|x| x.name())
                .collect::<Vec<_>>()
                .join(",")
        };
        match *self {
            Generator::DB(a) => write!(f, "d[{}]B", axes(a)),
            Generator::Dphi(a) if a.order() == 0 => write!(f, "phi"),
            Generator::Dphi(a) => write!(f, "d[{}]phi", axes(a)),
            Generator::C1 => write!(f, "c1"),
            Generator::C2 => write!(f, "c2"),
            Generator::MuZ => write!(f, "mu_z"),
        }
    }
}

/// The field-dependent part of a monomial: `B^(b_half/2) * prod(gen^pow)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldFactor {
    pub b_half: i32,
    /// Sorted by generator, powers strictly positive.
    pub gens: Vec<(Generator, u32)>,
}

impl FieldFactor {
    pub fn one() -> Self {
        FieldFactor::default()
    }

    pub fn b_pow(b_half: i32) -> Self {
        FieldFactor {
            b_half,
            gens: Vec::new(),
        }
    }

    pub fn gen(g: Generator) -> Self {
        FieldFactor {
            b_half: 0,
            gens: vec![(g, 1)],
        }
    }

    pub fn is_one(&self) -> bool {
        self.b_half == 0 && self.gens.is_empty()
    }

    pub fn mul(&self, o: &FieldFactor) -> FieldFactor {
        let mut gens = Vec::with_capacity(self.gens.len() + o.gens.len());
        let (mut i, mut j) = (0, 0);
        while i < self.gens.len() || j < o.gens.len() {
            if j == o.gens.len() || (i < self.gens.len() && self.gens[i].0 < o.gens[j].0) {
                gens.push(self.gens[i]);
                i += 1;
            } else if i == self.gens.len() || o.gens[j].0 < self.gens[i].0 {
                gens.push(o.gens[j]);
                j += 1;
            } else {
                gens.push((self.gens[i].0, self.gens[i].1 + o.gens[j].1));
                i += 1;
                j += 1;
            }
        }
        FieldFactor {
            b_half: self.b_half + o.b_half,
            gens,
        }
    }

    pub fn pow(&self, k: u32) -> FieldFactor {
        FieldFactor {
            b_half: self.b_half * k as i32,
            gens: if k == 0 {
                Vec::new()
            } else {
                self.gens.iter().map(|&(g, p)| (g, p * k)).collect()
            },
        }
    }

    pub fn power_of(&self, g: Generator) -> u32 {
        self.gens
            .iter()
            .find(|(h, _)| *h == g)
            .map_or(0, |&(_, p)| p)
    }

    pub fn has(&self, pred: impl Fn(Generator) -> bool) -> bool {
        self.gens.iter().any(|&(g, _)| pred(g))
    }

    /// Product-rule derivative along `axis`.
    pub fn derivative(&self, axis: Axis) -> Vec<(BigRational, FieldFactor)> {
        let mut out = Vec::new();
        if self.b_half != 0 {
            let f = FieldFactor::b_pow(-2).mul(&FieldFactor::gen(Generator::DB(
                MultiIndex::ZERO.bump(axis),
            )));
            out.push((
                BigRational::new(BigInt::from(self.b_half), BigInt::from(2)),
                self.mul(&f),
            ));
        }
        for (idx, &(g, p)) in self.gens.iter().enumerate() {
            let Some(dg) = g.derivative(axis) else {
                continue;
            };
            let mut rest = self.clone();
            if p == 1 {
                rest.gens.remove(idx);
            } else {
                rest.gens[idx].1 -= 1;
            }
            out.push((
                BigRational::from_integer(BigInt::from(p)),
                rest.mul(&FieldFactor::gen(dg)),
            ));
        }
        out
    }
}

/// Full monomial key. The derived order sorts by `hbar`, then `eps`, then the
/// field factor, then velocities, then positions.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub hbar: u32,
    pub eps: i32,
    pub field: FieldFactor,
    pub vel: [u32; 2],
    pub pos: [u32; 2],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn with_field(field: FieldFactor) -> Self {
        Monomial {
            field,
            ..Monomial::default()
        }
    }

    pub fn vel(k1: u32, k2: u32) -> Self {
        Monomial {
            vel: [k1, k2],
            ..Monomial::default()
        }
    }

    pub fn pos(p1: u32, p2: u32) -> Self {
        Monomial {
            pos: [p1, p2],
            ..Monomial::default()
        }
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial {
            hbar: self.hbar + o.hbar,
            eps: self.eps + o.eps,
            field: self.field.mul(&o.field),
            vel: [self.vel[0] + o.vel[0], self.vel[1] + o.vel[1]],
            pos: [self.pos[0] + o.pos[0], self.pos[1] + o.pos[1]],
        }
    }

    pub fn has_phase_space(&self) -> bool {
        self.vel != [0, 0] || self.pos != [0, 0]
    }

    /// Derivative with respect to the position variable along `axis`.
    pub fn partial_x(&self, axis: Axis) -> Vec<(BigRational, Monomial)> {
        let mut out: Vec<(BigRational, Monomial)> = self
            .field
            .derivative(axis)
            .into_iter()
            .map(|(c, field)| {
                (
                    c,
                    Monomial {
                        field,
                        ..self.clone()
                    },
                )
            })
            .collect();
        let i = axis.index();
        if self.pos[i] > 0 {
            let mut m = self.clone();
            m.pos[i] -= 1;
            out.push((BigRational::from_integer(BigInt::from(self.pos[i])), m));
        }
        out
    }

    /// Derivative with respect to the velocity variable along `axis`.
    pub fn partial_v(&self, axis: Axis) -> Option<(u32, Monomial)> {
        let i = axis.index();
        if self.vel[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.vel[i] -= 1;
        Some((self.vel[i], m))
    }
}
