//! Bidifferential operators acting on a pair of symbols `(f, g)`.
//!
//! Derivatives on the left factor are written `d_z` (position) and `d_a`
//! (velocity); on the right factor `d_y` and `d_b`. Prefactors are field
//! monomials evaluated at the common base point and are never differentiated
//! by these derivatives, so all operators here commute with each other.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeff::Coefficient;
use crate::monomial::{Axis, FieldFactor, Generator, MultiIndex};

/// Derivative orders applied to one factor.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivOrders {
    pub x: [u32; 2],
    pub v: [u32; 2],
}

impl DerivOrders {
    pub fn pos(axis: Axis) -> Self {
        let mut d = DerivOrders::default();
        d.x[axis.index()] = 1;
        d
    }

    pub fn vel(axis: Axis) -> Self {
        let mut d = DerivOrders::default();
        d.v[axis.index()] = 1;
        d
    }

    pub fn add(self, o: DerivOrders) -> Self {
        DerivOrders {
            x: [self.x[0] + o.x[0], self.x[1] + o.x[1]],
            v: [self.v[0] + o.v[0], self.v[1] + o.v[1]],
        }
    }

    pub fn total(self) -> u32 {
        self.x.iter().chain(self.v.iter()).sum()
    }
}

/// One term `coeff * prefactor * D_left(f) * D_right(g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiDiffTerm {
    pub coeff: Coefficient,
    pub prefactor: FieldFactor,
    pub left: DerivOrders,
    pub right: DerivOrders,
}

type Key = (FieldFactor, DerivOrders, DerivOrders);

/// A finite sum of [`BiDiffTerm`]s with like terms collected.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BiDiffOperator {
    terms: BTreeMap<Key, Coefficient>,
}

impl BiDiffOperator {
    pub fn zero() -> Self {
        BiDiffOperator::default()
    }

    pub fn identity() -> Self {
        let mut op = BiDiffOperator::zero();
        op.push(
            Coefficient::one(),
            FieldFactor::one(),
            DerivOrders::default(),
            DerivOrders::default(),
        );
        op
    }

    pub fn push(
        &mut self,
        c: Coefficient,
        prefactor: FieldFactor,
        left: DerivOrders,
        right: DerivOrders,
    ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((prefactor, left, right)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = BiDiffTerm> + '_ {
        self.terms.iter().map(|((p, l, r), c)| BiDiffTerm {
            coeff: c.clone(),
            prefactor: p.clone(),
            left: *l,
            right: *r,
        })
    }

    pub fn add(&self, o: &BiDiffOperator) -> BiDiffOperator {
        let mut out = self.clone();
        for ((p, l, r), c) in &o.terms {
            out.push(c.clone(), p.clone(), *l, *r);
        }
        out
    }

    pub fn sub(&self, o: &BiDiffOperator) -> BiDiffOperator {
        self.add(&o.scale(&Coefficient::from_int(-1)))
    }

    pub fn scale(&self, c: &Coefficient) -> BiDiffOperator {
        let mut out = BiDiffOperator::zero();
        for ((p, l, r), k) in &self.terms {
            out.push(k * c, p.clone(), *l, *r);
        }
        out
    }

    /// Composition; all operators commute, so this is a plain product.
    pub fn compose(&self, o: &BiDiffOperator) -> BiDiffOperator {
        let mut out = BiDiffOperator::zero();
        for ((pa, la, ra), ca) in &self.terms {
            for ((pb, lb, rb), cb) in &o.terms {
                out.push(ca * cb, pa.mul(pb), la.add(*lb), ra.add(*rb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> BiDiffOperator {
        (0..k).fold(BiDiffOperator::identity(), |acc, _| acc.compose(self))
    }

    /// Exchange the roles of the two factors.
    pub fn swapped(&self) -> BiDiffOperator {
        let mut out = BiDiffOperator::zero();
        for ((p, l, r), c) in &self.terms {
            out.push(c.clone(), p.clone(), *r, *l);
        }
        out
    }
}

/// Sign-flip injection for the weights `W(n, k)`; used to check that the
/// verification battery notices a corrupted operator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Weights {
    pub flipped: Option<(u32, u32)>,
}

impl Weights {
    pub fn standard() -> Self {
        Weights::default()
    }

    pub fn with_flip(n: u32, k: u32) -> Self {
        Weights {
            flipped: Some((n, k)),
        }
    }

    /// `W(n,k) = C(n+1,k) [ (1-(-1)^k)(n+1) - (1-(-1)^(n+1)) k ]`.
    pub fn get(&self, n: u32, k: u32) -> i64 {
        let w = weight(n, k);
        if self.flipped == Some((n, k)) {
            -w
        } else {
            w
        }
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

pub fn weight(n: u32, k: u32) -> i64 {
    let a = if k % 2 == 1 { 2 } else { 0 };
    let b = if (n + 1) % 2 == 1 { 2 } else { 0 };
    binomial(n + 1, k) * (a * (n as i64 + 1) - b * k as i64)
}

fn levi_civita(j: Axis, l: Axis) -> i64 {
    match (j, l) {
        (Axis::X, Axis::Y) => 1,
        (Axis::Y, Axis::X) => -1,
        _ => 0,
    }
}

/// `L = 1/2 sum_i (d_a_i d_y_i - d_b_i d_z_i)`, the field-independent part.
pub fn l_operator() -> BiDiffOperator {
    let half = Coefficient::from_ratio(1, 2);
    let mut op = BiDiffOperator::zero();
    for i in Axis::BOTH {
        op.push(
            half.clone(),
            FieldFactor::one(),
            DerivOrders::vel(i),
            DerivOrders::pos(i),
        );
        op.push(
            -&half,
            FieldFactor::one(),
            DerivOrders::pos(i),
            DerivOrders::vel(i),
        );
    }
    op
}

/// The field-dependent operator `L_n` for `n >= 1`.
///
/// `L_n = (i/2)^(n+1) / ((n+1)^2 n!) * eps_{jlz} d^(n-1)B d_a_j d_b_l
///        * sum_{k=1}^{n} W(n,k) d_a^(k-1) d_b^(n-k)`
///
/// with the `n-1` derivative indices on `B` contracted against the extra
/// velocity derivatives. For `n = 1` the prefactor is `B` itself.
pub fn l_n_operator(n: u32, weights: &Weights) -> BiDiffOperator {
    assert!(n >= 1);
    let i_pow = Coefficient::i_pow(n as i64 + 1);
    let scale = BigRational::new(
        BigInt::from(1),
        BigInt::from(2i64.pow(n + 1) * (n as i64 + 1).pow(2) * factorial(n)),
    );
    let base = i_pow.scale(&scale);
    let mut op = BiDiffOperator::zero();
    let m = (n - 1) as usize;
    for mask in 0..(1u32 << m) {
        let idx: Vec<Axis> = (0..m)
            .map(|t| if mask >> t & 1 == 1 { Axis::Y } else { Axis::X })
            .collect();
        let prefactor = if m == 0 {
            FieldFactor::b_pow(2)
        } else {
            FieldFactor::gen(Generator::DB(MultiIndex::from_axes(&idx)))
        };
        for j in Axis::BOTH {
            for l in Axis::BOTH {
                let lc = levi_civita(j, l);
                if lc == 0 {
                    continue;
                }
                for k in 1..=n {
                    let w = weights.get(n, k);
                    if w == 0 {
                        continue;
                    }
                    let mut left = DerivOrders::vel(j);
                    let mut right = DerivOrders::vel(l);
                    for (t, &a) in idx.iter().enumerate() {
                        if (t as u32) < k - 1 {
                            left = left.add(DerivOrders::vel(a));
                        } else {
                            right = right.add(DerivOrders::vel(a));
                        }
                    }
                    op.push(
                        base.scale(&BigRational::from_integer(BigInt::from(lc * w))),
                        prefactor.clone(),
                        left,
                        right,
                    );
                }
            }
        }
    }
    op
}

/// Highest `hbar` order the operator expansion supports.
pub const MAX_HBAR_CAP: u32 = 4;

/// The truncated operator `P = exp[-i hbar L - (i/eps) sum_n hbar^n L_n]`
/// split into blocks of fixed `(hbar, eps)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct POperator {
    pub max_hbar: u32,
    pub magnetic: bool,
    blocks: BTreeMap<(u32, i32), BiDiffOperator>,
}

impl POperator {
    /// Build through `hbar^max_hbar`. With `magnetic == false` all `L_n`
    /// are omitted, which is the operator for `B = 0`.
    pub fn build(max_hbar: u32, magnetic: bool, weights: &Weights) -> POperator {
        assert!(
            max_hbar <= MAX_HBAR_CAP,
            "hbar order above the supported cap"
        );
        let l = l_operator();
        let ln: Vec<BiDiffOperator> = (1..=max_hbar).map(|n| l_n_operator(n, weights)).collect();
        let mut blocks: BTreeMap<(u32, i32), BiDiffOperator> = BTreeMap::new();
        // multiplicities j[0] for L and j[n] for L_n
        let mut js = vec![0u32; max_hbar as usize + 1];
        fn rec(
            pos: usize,
            budget: u32,
            js: &mut Vec<u32>,
            max: u32,
            magnetic: bool,
            l: &BiDiffOperator,
            ln: &[BiDiffOperator],
            blocks: &mut BTreeMap<(u32, i32), BiDiffOperator>,
        ) {
            if pos == js.len() {
                let hbar = max - budget;
                let eps = -(js[1..].iter().sum::<u32>() as i32);
                let mut op = l.pow(js[0]).scale(
                    &Coefficient::i_pow(-(js[0] as i64))
                        .scale(&BigRational::new(1.into(), factorial(js[0]).into())),
                );
                for n in 1..js.len() {
                    if js[n] > 0 {
                        let c = Coefficient::i_pow(-(js[n] as i64))
                            .scale(&BigRational::new(1.into(), factorial(js[n]).into()));
                        op = op.compose(&ln[n - 1].pow(js[n]).scale(&c));
                    }
                }
                let e = blocks.entry((hbar, eps)).or_default();
                *e = e.add(&op);
                return;
            }
            let weight = if pos == 0 { 1 } else { pos as u32 };
            let top = if pos > 0 && !magnetic {
                0
            } else {
                budget / weight
            };
            for j in 0..=top {
                js[pos] = j;
                rec(
                    pos + 1,
                    budget - j * weight,
                    js,
                    max,
                    magnetic,
                    l,
                    ln,
                    blocks,
                );
            }
            js[pos] = 0;
        }
        rec(
            0,
            max_hbar,
            &mut js,
            max_hbar,
            magnetic,
            &l,
            &ln,
            &mut blocks,
        );
        blocks.retain(|_, op| !op.is_zero());
        POperator {
            max_hbar,
            magnetic,
            blocks,
        }
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(u32, i32), &BiDiffOperator)> {
        self.blocks.iter()
    }

    pub fn block(&self, hbar: u32, eps: i32) -> BiDiffOperator {
        self.blocks.get(&(hbar, eps)).cloned().unwrap_or_default()
    }
}
