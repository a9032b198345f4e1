//! Small dense complex linear algebra over the generic scalar type:
//! LU factorization with partial pivoting, determinants, and linear solves.
//!
//! The systems here are tiny (one row per Bethe variable), so a
//! straightforward O(n^3) factorization is the right tool.

use crate::scalar::{ScaledComplex, Scalar};

/// Row-major square matrix.
#[derive(Clone, Debug)]
pub struct Matrix<S: Scalar> {
    pub n: usize,
    pub a: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            a: vec![S::zero(); n * n],
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> S {
        self.a[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.a[r * self.n + c] = v;
    }
}

/// LU factorization (in place) with partial pivoting.
pub struct Lu<S: Scalar> {
    pub lu: Matrix<S>,
    pub perm: Vec<usize>,
    pub sign: i32,
    pub singular: bool,
    /// Ratio of extreme pivot magnitudes; a cheap condition estimate.
    pub pivot_ratio: f64,
}

pub fn lu_factor<S: Scalar>(mut m: Matrix<S>) -> Lu<S> {
    let n = m.n;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1;
    let mut singular = false;
    let mut max_piv = 0.0f64;
    let mut min_piv = f64::INFINITY;

    for col in 0..n {
        let mut best = col;
        let mut best_mag = m.at(col, col).abs_f64();
        for r in col + 1..n {
            let mag = m.at(r, col).abs_f64();
            if mag > best_mag {
                best = r;
                best_mag = mag;
            }
        }
        if best_mag == 0.0 || !best_mag.is_finite() {
            singular = true;
            min_piv = 0.0;
            continue;
        }
        if best != col {
            for c in 0..n {
                let t = m.at(col, c);
                m.set(col, c, m.at(best, c));
                m.set(best, c, t);
            }
            perm.swap(col, best);
            sign = -sign;
        }
        max_piv = max_piv.max(best_mag);
        min_piv = min_piv.min(best_mag);
        let inv = S::one() / m.at(col, col);
        for r in col + 1..n {
            let factor = m.at(r, col) * inv;
            m.set(r, col, factor);
            if factor.abs_f64() != 0.0 {
                for c in col + 1..n {
                    let v = m.at(r, c) - factor * m.at(col, c);
                    m.set(r, c, v);
                }
            }
        }
    }

    let pivot_ratio = if min_piv > 0.0 && max_piv.is_finite() {
        max_piv / min_piv
    } else {
        f64::INFINITY
    };
    Lu {
        lu: m,
        perm,
        sign,
        singular,
        pivot_ratio,
    }
}

impl<S: Scalar> Lu<S> {
    /// Determinant in exponent-carrying form (safe for large dimensions).
    pub fn det_scaled(&self) -> ScaledComplex<S> {
        if self.singular {
            return ScaledComplex::from_value(S::zero());
        }
        let mut d = ScaledComplex::one();
        for i in 0..self.lu.n {
            d.mul_value(self.lu.at(i, i));
        }
        if self.sign < 0 {
            d.mul_value(-S::one());
        }
        d
    }

    /// Solves `A x = b`, consuming `b` as the initial right-hand side.
    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let n = self.lu.n;
        debug_assert_eq!(b.len(), n);
        let mut x: Vec<S> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 1..n {
            let mut acc = x[r];
            for c in 0..r {
                acc = acc - self.lu.at(r, c) * x[c];
            }
            x[r] = acc;
        }
        for r in (0..n).rev() {
            let mut acc = x[r];
            for c in r + 1..n {
                acc = acc - self.lu.at(r, c) * x[c];
            }
            x[r] = acc / self.lu.at(r, r);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_a_known_system() {
        let mut m = Matrix::zeros(2);
        m.set(0, 0, c(2.0, 0.0));
        m.set(0, 1, c(1.0, 1.0));
        m.set(1, 0, c(0.0, -1.0));
        m.set(1, 1, c(3.0, 0.0));
        let lu = lu_factor(m.clone());
        let b = vec![c(1.0, 0.0), c(0.0, 2.0)];
        let x = lu.solve(&b);
        for r in 0..2 {
            let mut acc = c(0.0, 0.0);
            for cidx in 0..2 {
                acc += m.at(r, cidx) * x[cidx];
            }
            assert!((acc - b[r]).norm() < 1e-13);
        }
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let mut m = Matrix::zeros(3);
        let vals = [
            [c(1.0, 0.5), c(-2.0, 0.0), c(0.0, 1.0)],
            [c(3.0, 0.0), c(0.5, -1.0), c(1.0, 0.0)],
            [c(0.0, 0.0), c(2.0, 2.0), c(-1.0, 0.3)],
        ];
        for r in 0..3 {
            for cc in 0..3 {
                m.set(r, cc, vals[r][cc]);
            }
        }
        let det = lu_factor(m).det_scaled().to_value();
        let a = vals;
        let expect = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        assert!((det - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn singular_matrix_reports_zero_det() {
        let mut m = Matrix::zeros(2);
        m.set(0, 0, c(1.0, 0.0));
        m.set(0, 1, c(2.0, 0.0));
        m.set(1, 0, c(2.0, 0.0));
        m.set(1, 1, c(4.0, 0.0));
        let lu = lu_factor(m);
        assert!(lu.singular);
        assert_eq!(lu.det_scaled().to_value(), c(0.0, 0.0));
    }
}
