//! Complex scalar abstraction used to run the evaluation pipeline at either
//! plain `f64` precision or double-double precision, plus an
//! exponent-carrying complex type for products that would overflow.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::dd::{CDd, Dd};

/// Requested working precision for a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F64,
    Dd,
}

impl Default for Precision {
    fn default() -> Self {
        Precision::F64
    }
}

/// Complex field operations required by the solver and evaluator.
///
/// Implemented for `Complex64` and for the double-double complex type. All
/// tolerance bookkeeping happens through `f64` approximations, so the trait
/// only needs exact arithmetic plus conversions.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_c64(z: Complex64) -> Self;
    /// Nearest `f64` complex approximation (used for sorting and tolerances).
    fn to_c64(self) -> Complex64;
    fn conj(self) -> Self;
    /// Exact multiplication by a power of two.
    fn ldexp(self, e: i32) -> Self;

    #[inline]
    fn abs_f64(self) -> f64 {
        self.to_c64().norm()
    }

    #[inline]
    fn is_finite(self) -> bool {
        let z = self.to_c64();
        z.re.is_finite() && z.im.is_finite()
    }

    #[inline]
    fn scale(self, x: f64) -> Self {
        self * Self::from_f64(x)
    }

    #[inline]
    fn powi(self, mut n: u32) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn from_c64(z: Complex64) -> Self {
        z
    }
    #[inline]
    fn to_c64(self) -> Complex64 {
        self
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    #[inline]
    fn ldexp(self, e: i32) -> Self {
        let f = pow2(e);
        Complex64::new(self.re * f, self.im * f)
    }
}

impl Scalar for CDd {
    #[inline]
    fn zero() -> Self {
        CDd::ZERO
    }
    #[inline]
    fn one() -> Self {
        CDd::ONE
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        CDd::from_f64(x, 0.0)
    }
    #[inline]
    fn from_c64(z: Complex64) -> Self {
        CDd::from_f64(z.re, z.im)
    }
    #[inline]
    fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
    #[inline]
    fn conj(self) -> Self {
        CDd::conj(self)
    }
    #[inline]
    fn ldexp(self, e: i32) -> Self {
        CDd::ldexp(self, e)
    }
}

#[inline]
fn pow2(e: i32) -> f64 {
    if (-1022..=1023).contains(&e) {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        (2.0f64).powi(e)
    }
}

/// A complex value `m * 2^exp` with the mantissa kept near unit magnitude.
///
/// Long products (Vandermonde-type factors, powers of the Jacobian factor
/// for large genus) accumulate here so magnitude never leaves the `f64`
/// exponent range; the phase stays in the mantissa.
#[derive(Clone, Copy, Debug)]
pub struct ScaledComplex<S: Scalar> {
    pub mantissa: S,
    pub exp: i64,
}

impl<S: Scalar> ScaledComplex<S> {
    pub fn one() -> Self {
        ScaledComplex {
            mantissa: S::one(),
            exp: 0,
        }
    }

    pub fn from_value(v: S) -> Self {
        let mut s = ScaledComplex {
            mantissa: v,
            exp: 0,
        };
        s.normalize();
        s
    }

    /// Keeps the mantissa magnitude within `[2^-16, 2^16]`.
    fn normalize(&mut self) {
        let a = self.mantissa.abs_f64();
        if a == 0.0 || !a.is_finite() {
            self.exp = 0;
            return;
        }
        let e = a.log2().floor() as i32;
        if e.abs() > 16 {
            self.mantissa = self.mantissa.ldexp(-e);
            self.exp += e as i64;
        }
    }

    pub fn mul_value(&mut self, v: S) {
        self.mantissa = self.mantissa * v;
        self.normalize();
    }

    pub fn mul(&mut self, other: ScaledComplex<S>) {
        self.mantissa = self.mantissa * other.mantissa;
        self.exp += other.exp;
        self.normalize();
    }

    pub fn div(&mut self, other: ScaledComplex<S>) {
        self.mantissa = self.mantissa / other.mantissa;
        self.exp -= other.exp;
        self.normalize();
    }

    pub fn recip(mut self) -> Self {
        self.mantissa = S::one() / self.mantissa;
        self.exp = -self.exp;
        self.normalize();
        self
    }

    /// Integer power by repeated squaring, renormalizing at every step.
    pub fn powi(self, n: u32) -> Self {
        let mut base = self;
        let mut acc = ScaledComplex::one();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc.mul(base);
            }
            base.mul(base);
            n >>= 1;
        }
        acc
    }

    pub fn add(&mut self, other: ScaledComplex<S>) {
        // Align the smaller exponent onto the larger one.
        let (big, small) = if self.exp >= other.exp {
            (*self, other)
        } else {
            (other, *self)
        };
        let shift = small.exp - big.exp;
        let shifted = if shift < -200 {
            S::zero()
        } else {
            small.mantissa.ldexp(shift as i32)
        };
        self.mantissa = big.mantissa + shifted;
        self.exp = big.exp;
        self.normalize();
    }

    /// Collapses to a plain scalar; saturates to infinity when out of range.
    pub fn to_value(self) -> S {
        if self.exp.abs() > 4000 {
            return if self.exp > 0 {
                S::from_f64(f64::INFINITY)
            } else {
                S::zero()
            };
        }
        self.mantissa.ldexp(self.exp as i32)
    }

    pub fn log2_abs(self) -> f64 {
        let a = self.mantissa.abs_f64();
        if a == 0.0 {
            f64::NEG_INFINITY
        } else {
            a.log2() + self.exp as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_product_survives_overflow_range() {
        // 2^600 squared overflows f64 but not the scaled form.
        let v = ScaledComplex::from_value(Complex64::new(2.0, 0.0)).powi(600);
        let sq = v.powi(2);
        assert!((sq.log2_abs() - 1200.0).abs() < 1e-9);
        let back = sq.powi(1);
        assert_eq!(back.log2_abs(), sq.log2_abs());
    }

    #[test]
    fn scaled_add_aligns_exponents() {
        let mut a = ScaledComplex::from_value(Complex64::new(1.0, 0.0));
        let b = ScaledComplex::from_value(Complex64::new(3.0, 0.0));
        a.add(b);
        assert!((a.to_value() - Complex64::new(4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn scaled_powi_matches_direct_for_small_values() {
        let z = Complex64::new(1.1, -0.3);
        let direct = z.powi(7);
        let scaled = ScaledComplex::from_value(z).powi(7).to_value();
        assert!((direct - scaled).norm() < 1e-12 * direct.norm());
    }

    #[test]
    fn dd_scalar_roundtrip() {
        let z = CDd::from_f64(1.5, -0.25);
        assert_eq!(z.to_c64(), Complex64::new(1.5, -0.25));
        let w = <CDd as Scalar>::powi(z, 3);
        let expect = Complex64::new(1.5, -0.25).powi(3);
        assert!((w.to_c64() - expect).norm() < 1e-14);
    }
}
