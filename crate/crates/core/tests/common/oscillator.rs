//! Velocity operators on a truncated oscillator basis, with
//! `[V_x, V_y] = i hbar / eps` on the low-lying block.

use ndarray::Array2;
use num_complex::Complex64;

pub type Matrix = Array2<Complex64>;

pub struct Oscillator {
    pub vx: Matrix,
    pub vy: Matrix,
    pub levels: usize,
}

impl Oscillator {
    pub fn new(levels: usize, hbar: f64, eps: f64) -> Self {
        let s = (hbar / (2.0 * eps)).sqrt();
        let mut a = Matrix::zeros((levels, levels));
        for n in 1..levels {
            a[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        let ad = a.t().mapv(|z| z.conj());
        let vx = (&a + &ad).mapv(|z| z * s);
        let vy = (&a - &ad).mapv(|z| z * Complex64::new(0.0, -s));
        Oscillator { vx, vy, levels }
    }

    pub fn identity(&self) -> Matrix {
        Matrix::eye(self.levels)
    }

    /// Product of the letters of `word` (`true` for `V_x`).
    pub fn word(&self, word: &[bool]) -> Matrix {
        word.iter().fold(self.identity(), |acc, &x| {
            acc.dot(if x { &self.vx } else { &self.vy })
        })
    }

    /// Weyl-ordered operator of the monomial `v_x^a v_y^b`: the average over
    /// all distinct orderings of the letters.
    pub fn weyl_monomial(&self, a: usize, b: usize) -> Matrix {
        let mut sum = Matrix::zeros((self.levels, self.levels));
        let mut count = 0.0;
        for mask in 0u32..(1 << (a + b)) {
            if mask.count_ones() as usize != a {
                continue;
            }
            let w: Vec<bool> = (0..a + b).map(|i| mask >> i & 1 == 1).collect();
            sum = sum + self.word(&w);
            count += 1.0;
        }
        sum.mapv(|z| z / count)
    }
}

/// Largest entry of `|m1 - m2|` over the leading `block x block` corner,
/// relative to the largest entry of `m1` there.
pub fn relative_block_difference(m1: &Matrix, m2: &Matrix, block: usize) -> f64 {
    let mut diff = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..block {
        for j in 0..block {
            diff = diff.max((m1[[i, j]] - m2[[i, j]]).norm());
            scale = scale.max(m1[[i, j]].norm());
        }
    }
    diff / scale
}
