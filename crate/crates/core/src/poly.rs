//! Sparse integer polynomials in the formal parameters `q_1..q_k`, used for
//! the generating functions assembled by interpolation and by the exact
//! closed-form evaluators.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use crate::scalar::Scalar;

/// A polynomial (Laurent when bundle degrees are negative) with exact
/// integer coefficients, keyed by multidegree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GeneratingPolynomial {
    pub num_vars: usize,
    /// Nonzero coefficients only, keyed by multidegree.
    pub coeffs: BTreeMap<Vec<i64>, BigInt>,
}

impl GeneratingPolynomial {
    pub fn zero(num_vars: usize) -> Self {
        GeneratingPolynomial {
            num_vars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, value: BigInt) -> Self {
        let mut p = Self::zero(num_vars);
        p.insert(vec![0; num_vars], value);
        p
    }

    /// Single monomial `value * q^degree`.
    pub fn monomial(degree: Vec<i64>, value: BigInt) -> Self {
        let mut p = Self::zero(degree.len());
        p.insert(degree, value);
        p
    }

    pub fn insert(&mut self, degree: Vec<i64>, value: BigInt) {
        assert_eq!(degree.len(), self.num_vars);
        if value.is_zero() {
            self.coeffs.remove(&degree);
        } else {
            self.coeffs.insert(degree, value);
        }
    }

    pub fn add_assign(&mut self, degree: Vec<i64>, value: &BigInt) {
        assert_eq!(degree.len(), self.num_vars);
        let entry = self.coeffs.entry(degree.clone()).or_insert_with(BigInt::zero);
        *entry += value;
        if entry.is_zero() {
            self.coeffs.remove(&degree);
        }
    }

    pub fn coefficient(&self, degree: &[i64]) -> BigInt {
        self.coeffs.get(degree).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplies by the monomial `q^shift` (a pure degree translation).
    pub fn shift(&self, shift: &[i64]) -> Self {
        assert_eq!(shift.len(), self.num_vars);
        let mut out = Self::zero(self.num_vars);
        for (d, c) in &self.coeffs {
            let nd: Vec<i64> = d.iter().zip(shift).map(|(a, b)| a + b).collect();
            out.insert(nd, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = Self::zero(self.num_vars);
        for (da, ca) in &self.coeffs {
            for (db, cb) in &other.coeffs {
                let nd: Vec<i64> = da.iter().zip(db).map(|(a, b)| a + b).collect();
                out.add_assign(nd, &(ca * cb));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            out.add_assign(d.clone(), c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.num_vars, BigInt::from(1));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluates at a complex parameter point (for held-out residual checks
    /// and cross-validation against numeric values).
    pub fn eval<S: Scalar>(&self, q: &[S]) -> S {
        assert_eq!(q.len(), self.num_vars);
        let mut acc = S::zero();
        for (d, c) in &self.coeffs {
            let mut term = S::from_f64(bigint_to_f64(c));
            for (j, &dj) in d.iter().enumerate() {
                if dj >= 0 {
                    term = term * q[j].powi(dj as u32);
                } else {
                    term = term / q[j].powi((-dj) as u32);
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Degrees carrying a negative coefficient (reported, never an error).
    pub fn negative_coefficients(&self) -> Vec<Vec<i64>> {
        use num_traits::Signed;
        self.coeffs
            .iter()
            .filter(|(_, c)| c.is_negative())
            .map(|(d, _)| d.clone())
            .collect()
    }
}

/// Lossy conversion for numeric evaluation; exact when the integer fits in
/// the 53-bit significand.
pub fn bigint_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite `f64` to an integer (truncating toward zero
/// is never needed: the input is produced by `round()` and is integral).
pub fn f64_to_bigint_exact(x: f64) -> BigInt {
    debug_assert!(x.is_finite() && x == x.trunc());
    if x.abs() < 9.0e15 {
        return BigInt::from(x as i64);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exponent = ((bits >> 52) & 0x7ff) as i64 - 1075;
    let mantissa = (bits & ((1u64 << 52) - 1)) | (1u64 << 52);
    let mut v = BigInt::from(mantissa);
    if exponent >= 0 {
        v <<= exponent as usize;
    } else {
        v >>= (-exponent) as usize;
    }
    v * sign
}

impl fmt::Display for GeneratingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (j, &dj) in d.iter().enumerate() {
                if dj != 0 {
                    write!(f, "*q{}^{}", j + 1, dj)?;
                }
            }
        }
        Ok(())
    }
}

/// Helper for building expected values in tests and oracles.
pub fn poly_from_terms(num_vars: usize, terms: &[(&[i64], i64)]) -> GeneratingPolynomial {
    let mut p = GeneratingPolynomial::zero(num_vars);
    for (d, c) in terms {
        p.add_assign(d.to_vec(), &BigInt::from(*c));
    }
    p
}

#[allow(unused)]
fn _complex_eval_is_object_safe(p: &GeneratingPolynomial, q: &[Complex64]) -> Complex64 {
    p.eval(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_shifts() {
        let a = poly_from_terms(2, &[(&[1, 0], 1), (&[1, 1], 1)]);
        let b = a.shift(&[2, 0]);
        assert_eq!(b, poly_from_terms(2, &[(&[3, 0], 1), (&[3, 1], 1)]));
        let sq = a.mul(&a);
        assert_eq!(
            sq,
            poly_from_terms(2, &[(&[2, 0], 1), (&[2, 1], 2), (&[2, 2], 1)])
        );
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut p = GeneratingPolynomial::zero(1);
        p.add_assign(vec![2], &BigInt::from(5));
        p.add_assign(vec![2], &BigInt::from(-5));
        assert!(p.is_zero());
    }

    #[test]
    fn eval_matches_horner_by_hand() {
        let p = poly_from_terms(1, &[(&[0], 3), (&[2], -1)]);
        let q = [Complex64::new(2.0, 0.0)];
        assert!((p.eval(&q) - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn laurent_eval_divides() {
        let p = poly_from_terms(1, &[(&[-1], 4)]);
        let q = [Complex64::new(2.0, 0.0)];
        assert!((p.eval(&q) - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn exact_f64_conversion_handles_wide_values() {
        let v = 6.0f64.powi(13) * 20.0;
        assert_eq!(
            f64_to_bigint_exact(v),
            BigInt::from(6i64.pow(13) * 20)
        );
        let big = 2.0f64.powi(80);
        assert_eq!(f64_to_bigint_exact(big), BigInt::from(1u128 << 80));
        assert_eq!(f64_to_bigint_exact(-3.0), BigInt::from(-3));
    }
}
