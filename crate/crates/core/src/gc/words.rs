//! Noncommutative words in the guiding-center velocities.
//!
//! Under the star product the gyration velocities obey
//! `V_x * V_y - V_y * V_x = i hbar / eps` while functions of the guiding
//! center position are treated as central scalars. A [`WordSeries`] is a sum
//! of words in `V_x, V_y` with scalar coefficients (guiding-center series
//! free of velocities).

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::monomial::{Axis, Monomial};
use crate::series::{Chart, GradedSeries, Truncation};
use crate::text::render;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Vx,
    Vy,
}

pub type Word = Vec<Letter>;

#[derive(Debug, Clone, PartialEq)]
pub struct WordSeries {
    trunc: Truncation,
    words: BTreeMap<Word, GradedSeries>,
}

/// All distinct arrangements of `a` copies of `V_x` and `b` copies of `V_y`.
pub fn arrangements(a: usize, b: usize) -> Vec<Word> {
    let mut out = Vec::new();
    fn rec(a: usize, b: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if a == 0 && b == 0 {
            out.push(cur.clone());
            return;
        }
        if a > 0 {
            cur.push(Letter::Vx);
            rec(a - 1, b, cur, out);
            cur.pop();
        }
        if b > 0 {
            cur.push(Letter::Vy);
            rec(a, b - 1, cur, out);
            cur.pop();
        }
    }
    rec(a, b, &mut Vec::new(), &mut out);
    out
}

fn normal_word(a: usize, b: usize) -> Word {
    let mut w = vec![Letter::Vx; a];
    w.extend(std::iter::repeat_n(Letter::Vy, b));
    w
}

/// Normal form of a word: `w = sum_j c_j (-i hbar/eps)^j V_x^(a-j) V_y^(b-j)`,
/// returned as the integer counts `c_j`.
fn contraction_counts(w: &[Letter]) -> BTreeMap<u32, i64> {
    static MEMO: OnceLock<Mutex<HashMap<Word, BTreeMap<u32, i64>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = memo.lock().unwrap().get(w) {
        return v.clone();
    }
    let out = match w.windows(2).position(|p| p == [Letter::Vy, Letter::Vx]) {
        None => BTreeMap::from([(0, 1)]),
        Some(i) => {
            let mut swapped = w.to_vec();
            swapped.swap(i, i + 1);
            let mut out = contraction_counts(&swapped);
            let mut shorter = w[..i].to_vec();
            shorter.extend_from_slice(&w[i + 2..]);
            for (j, c) in contraction_counts(&shorter) {
                *out.entry(j + 1).or_insert(0) += c;
            }
            out
        }
    };
    memo.lock().unwrap().insert(w.to_vec(), out.clone());
    out
}

impl WordSeries {
    pub fn zero(trunc: Truncation) -> Self {
        WordSeries {
            trunc,
            words: BTreeMap::new(),
        }
    }

    /// A scalar (the empty word).
    pub fn scalar(s: &GradedSeries) -> Result<Self> {
        let mut out = WordSeries::zero(s.truncation());
        out.push(Vec::new(), s)?;
        Ok(out)
    }

    pub fn letter(l: Letter, trunc: Truncation) -> Self {
        let mut out = WordSeries::zero(trunc);
        out.words
            .insert(vec![l], GradedSeries::one(Chart::GuidingCenter, trunc));
        out
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = (&Word, &GradedSeries)> {
        self.words.iter()
    }

    pub fn coefficient(&self, w: &[Letter]) -> GradedSeries {
        self.words
            .get(w)
            .cloned()
            .unwrap_or_else(|| GradedSeries::zero(Chart::GuidingCenter, self.trunc))
    }

    pub fn max_len(&self) -> Option<usize> {
        self.words.keys().map(|w| w.len()).max()
    }

    fn push(&mut self, w: Word, s: &GradedSeries) -> Result<()> {
        if s.chart() != Chart::GuidingCenter {
            return Err(Error::ChartMismatch {
                left: Chart::GuidingCenter,
                right: s.chart(),
            });
        }
        if s.terms().any(|(m, _)| m.vel != [0, 0]) {
            return Err(Error::Domain(
                "word coefficients must be free of velocities".into(),
            ));
        }
        let cur = self.coefficient(&w);
        let next = cur.add(&s.with_truncation(self.trunc.intersect(s.truncation()))?)?;
        if next.is_zero() {
            self.words.remove(&w);
        } else {
            self.words.insert(w, next);
        }
        Ok(())
    }

    pub fn add(&self, o: &WordSeries) -> Result<WordSeries> {
        let mut out = self.clone();
        out.trunc = self.trunc.intersect(o.trunc);
        for (w, s) in &o.words {
            out.push(w.clone(), s)?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &WordSeries) -> Result<WordSeries> {
        self.add(&o.scale(&Coefficient::from_int(-1)))
    }

    pub fn scale(&self, c: &Coefficient) -> WordSeries {
        WordSeries {
            trunc: self.trunc,
            words: self
                .words
                .iter()
                .map(|(w, s)| (w.clone(), s.scale(c)))
                .filter(|(_, s)| !s.is_zero())
                .collect(),
        }
    }

    /// Multiply every coefficient by a central scalar.
    pub fn scale_by(&self, s: &GradedSeries) -> Result<WordSeries> {
        let mut out = WordSeries::zero(self.trunc.intersect(s.truncation()));
        for (w, c) in &self.words {
            out.push(w.clone(), &c.mul_pointwise(s)?)?;
        }
        Ok(out)
    }

    /// Star product: words concatenate, scalars multiply pointwise.
    pub fn mul(&self, o: &WordSeries) -> Result<WordSeries> {
        let mut out = WordSeries::zero(self.trunc.intersect(o.trunc));
        for (wa, sa) in &self.words {
            for (wb, sb) in &o.words {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.push(w, &sa.mul_pointwise(sb)?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<WordSeries> {
        let mut out = WordSeries::scalar(&GradedSeries::one(Chart::GuidingCenter, self.trunc))?;
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Weyl symmetrisation of a pointwise guiding-center symbol: every
    /// velocity monomial becomes the average of its distinct orderings.
    pub fn from_pointwise(s: &GradedSeries) -> Result<WordSeries> {
        if s.chart() != Chart::GuidingCenter {
            return Err(Error::ChartMismatch {
                left: Chart::GuidingCenter,
                right: s.chart(),
            });
        }
        let trunc = s.truncation();
        let mut out = WordSeries::zero(trunc);
        for (m, c) in s.terms() {
            let scalar_m = Monomial {
                vel: [0, 0],
                ..m.clone()
            };
            let words = arrangements(m.vel[0] as usize, m.vel[1] as usize);
            let share = c.scale(&num_rational::BigRational::new(
                1.into(),
                (words.len() as i64).into(),
            ));
            let scalar = GradedSeries::monomial(Chart::GuidingCenter, trunc, scalar_m, share)?;
            for w in words {
                out.push(w, &scalar)?;
            }
        }
        Ok(out)
    }

    /// Rewrite every `V_y V_x` as `V_x V_y - i hbar/eps` until all words are
    /// of the form `V_x^a V_y^b`.
    pub fn normal_ordered(&self) -> Result<WordSeries> {
        let mut out = WordSeries::zero(self.trunc);
        for (w, s) in &self.words {
            let a = w.iter().filter(|&&l| l == Letter::Vx).count();
            let b = w.len() - a;
            for (j, c) in contraction_counts(w) {
                let k = Coefficient::i_pow(-(j as i64))
                    .scale(&num_rational::BigRational::from_integer(c.into()));
                let m = Monomial {
                    hbar: j,
                    eps: -(j as i32),
                    ..Monomial::one()
                };
                let shifted = s.mul_monomial(&m, &k)?;
                out.push(normal_word(a - j as usize, b - j as usize), &shifted)?;
            }
        }
        Ok(out)
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.words
            .keys()
            .all(|w| !w.windows(2).any(|p| p == [Letter::Vy, Letter::Vx]))
    }

    /// Keep the coefficient terms satisfying `pred`.
    pub fn filter(&self, pred: impl Fn(&Monomial) -> bool) -> WordSeries {
        WordSeries {
            trunc: self.trunc,
            words: self
                .words
                .iter()
                .map(|(w, s)| (w.clone(), s.filter(&pred)))
                .filter(|(_, s)| !s.is_zero())
                .collect(),
        }
    }

    /// The part made of words of exactly `len` letters.
    pub fn of_length(&self, len: usize) -> WordSeries {
        WordSeries {
            trunc: self.trunc,
            words: self
                .words
                .iter()
                .filter(|(w, _)| w.len() == len)
                .map(|(w, s)| (w.clone(), s.clone()))
                .collect(),
        }
    }

    /// Pointwise symbol of a normal-ordered series, reading `V_x^a V_y^b` as
    /// a commutative monomial. Useful for display and comparison only.
    pub fn to_pointwise(&self) -> Result<GradedSeries> {
        let mut out = GradedSeries::zero(Chart::GuidingCenter, self.trunc);
        for (w, s) in &self.words {
            let a = w.iter().filter(|&&l| l == Letter::Vx).count() as u32;
            let b = w.len() as u32 - a;
            out = out.add(&s.mul_monomial(&Monomial::vel(a, b), &Coefficient::one())?)?;
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        if self.words.is_empty() {
            return "0".into();
        }
        self.words
            .iter()
            .map(|(w, s)| {
                let word: Vec<&str> = w
                    .iter()
                    .map(|l| if *l == Letter::Vx { "V_x" } else { "V_y" })
                    .collect();
                if word.is_empty() {
                    format!("({})", render(s, Default::default()))
                } else {
                    format!("({})*{}", render(s, Default::default()), word.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The gyration velocity letter along `axis`.
pub fn velocity_letter(axis: Axis) -> Letter {
    match axis {
        Axis::X => Letter::Vx,
        Axis::Y => Letter::Vy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_series_in;

    fn t() -> Truncation {
        Truncation::new(2, -2, 2)
    }

    fn gc(s: &str) -> GradedSeries {
        parse_series_in(s, t(), Chart::GuidingCenter).unwrap()
    }

    #[test]
    fn symmetrisation_of_mixed_square() {
        let w = WordSeries::from_pointwise(&gc("V_x*V_y")).unwrap();
        let half = gc("1/2");
        assert_eq!(w.coefficient(&[Letter::Vx, Letter::Vy]), half);
        assert_eq!(w.coefficient(&[Letter::Vy, Letter::Vx]), half);
    }

    #[test]
    fn normal_order_of_reversed_pair() {
        let vy = WordSeries::letter(Letter::Vy, t());
        let vx = WordSeries::letter(Letter::Vx, t());
        let n = vy.mul(&vx).unwrap().normal_ordered().unwrap();
        assert_eq!(n.coefficient(&[Letter::Vx, Letter::Vy]), gc("1"));
        assert_eq!(n.coefficient(&[]), gc("-i*hbar*eps^-1"));
    }

    #[test]
    fn contraction_counts_match_wick() {
        // four single contractions and two complete pairings
        let c = contraction_counts(&[Letter::Vy, Letter::Vy, Letter::Vx, Letter::Vx]);
        assert_eq!(c, BTreeMap::from([(0, 1), (1, 4), (2, 2)]));
    }

    #[test]
    fn weyl_ordered_product_normal_form() {
        let w = WordSeries::from_pointwise(&gc("V_x*V_y"))
            .unwrap()
            .normal_ordered()
            .unwrap();
        assert_eq!(w.coefficient(&[]), gc("-(1/2)*i*hbar*eps^-1"));
    }
}
