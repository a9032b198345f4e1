//! Double-double arithmetic: unevaluated sums of two `f64` values giving
//! roughly 106 bits of significand.
//!
//! The error-free transformations (`two_sum`, `two_prod`) and the
//! add/mul/div kernels follow the classical Dekker/Knuth constructions, with
//! `two_prod` using a fused multiply-add. Only the operations needed by the
//! solver and interpolation layers are provided.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Error-free sum: returns `(s, e)` with `s = fl(a + b)` and `a + b = s + e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free sum assuming `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product via FMA: `a * b = p + e` exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// A double-double real number `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Renormalizes a raw `(hi, lo)` pair into canonical form.
    #[inline]
    fn renorm(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub fn ldexp(self, e: i32) -> Dd {
        Dd {
            hi: libm_ldexp(self.hi, e),
            lo: libm_ldexp(self.lo, e),
        }
    }

    /// Square root via one Newton step on an `f64` seed (Karp's trick).
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let ax_dd = Dd::from_f64(ax);
        let err = (self - ax_dd * ax_dd).hi;
        Dd::renorm(ax, err * (x * 0.5))
    }
}

/// `x * 2^e` without resorting to the libm symbol (kept dependency-free).
#[inline]
fn libm_ldexp(x: f64, e: i32) -> f64 {
    // Splitting the exponent keeps each factor finite and exact.
    if e >= -1000 && e <= 1000 {
        x * f64_pow2(e)
    } else {
        let half = e / 2;
        x * f64_pow2(half) * f64_pow2(e - half)
    }
}

#[inline]
fn f64_pow2(e: i32) -> f64 {
    f64::from_bits(((e + 1023) as u64) << 52)
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        Dd::renorm(s1, s2)
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        Dd::renorm(p1, p2)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Dd::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let d = Dd::renorm(q1, q2);
        d + Dd::from_f64(q3)
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

/// A complex number with double-double components.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: CDd = CDd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    #[inline]
    pub fn new(re: Dd, im: Dd) -> CDd {
        CDd { re, im }
    }

    #[inline]
    pub fn from_f64(re: f64, im: f64) -> CDd {
        CDd {
            re: Dd::from_f64(re),
            im: Dd::from_f64(im),
        }
    }

    #[inline]
    pub fn conj(self) -> CDd {
        CDd {
            re: self.re,
            im: -self.im,
        }
    }

    #[inline]
    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    #[inline]
    pub fn abs(self) -> Dd {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn ldexp(self, e: i32) -> CDd {
        CDd {
            re: self.re.ldexp(e),
            im: self.im.ldexp(e),
        }
    }
}

impl Add for CDd {
    type Output = CDd;
    #[inline]
    fn add(self, rhs: CDd) -> CDd {
        CDd {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for CDd {
    type Output = CDd;
    #[inline]
    fn sub(self, rhs: CDd) -> CDd {
        CDd {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for CDd {
    type Output = CDd;
    #[inline]
    fn neg(self) -> CDd {
        CDd {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for CDd {
    type Output = CDd;
    #[inline]
    fn mul(self, rhs: CDd) -> CDd {
        CDd {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, rhs: CDd) -> CDd {
        // Smith's algorithm avoids overflow in the intermediate squares.
        if rhs.re.hi.abs() >= rhs.im.hi.abs() {
            let r = rhs.im / rhs.re;
            let den = rhs.re + rhs.im * r;
            CDd {
                re: (self.re + self.im * r) / den,
                im: (self.im - self.re * r) / den,
            }
        } else {
            let r = rhs.re / rhs.im;
            let den = rhs.re * r + rhs.im;
            CDd {
                re: (self.re * r + self.im) / den,
                im: (self.im * r - self.re) / den,
            }
        }
    }
}
