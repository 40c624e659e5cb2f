//! Double-double arithmetic.
//!
//! Pulse areas such as `2·l·π·√2` reach tens of thousands of radians for the
//! approximate-swap family, where a plain `f64` loses the 1e-12 budget during
//! argument reduction. Angles therefore carry an unevaluated sum `hi + lo`
//! (about 32 significant digits) and are reduced modulo 2π before any
//! trigonometric call.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    pub const TWO_PI: Dd = Dd {
        hi: std::f64::consts::TAU,
        lo: 2.449_293_598_294_706_4e-16,
    };
    pub const SQRT_2: Dd = Dd {
        hi: std::f64::consts::SQRT_2,
        lo: -9.667_293_313_452_913e-17,
    };

    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact conversion of an integer below 2^106.
    pub fn from_u128(n: u128) -> Dd {
        let hi = n as f64;
        // `hi` is within half an ulp of n, so the remainder fits an i128 and is exact in f64
        let rem = n as i128 - hi as i128;
        let (hi, lo) = quick_two_sum(hi, rem as f64);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn scale(self, k: f64) -> Dd {
        self * Dd::from_f64(k)
    }

    pub fn sqrt(self) -> Option<Dd> {
        if self.hi < 0.0 {
            return None;
        }
        if self.hi == 0.0 {
            return Some(Dd::ZERO);
        }
        let r = Dd::from_f64(self.hi.sqrt());
        // one Newton step doubles the number of correct digits
        let corr = (self - r * r) / (r + r);
        Some(r + corr)
    }

    /// Nearest integer to `self` as a double-double with `lo` folded in.
    pub fn round(self) -> Dd {
        let hi = self.hi.round();
        if hi == self.hi {
            // hi already integral; the fractional part lives in lo
            let lo = self.lo.round();
            let (h, l) = quick_two_sum(hi, lo);
            Dd { hi: h, lo: l }
        } else if (hi - self.hi).abs() == 0.5 && self.lo != 0.0 {
            // tie on hi, broken by the sign of lo
            let adj = if self.lo > 0.0 { self.hi.ceil() } else { self.hi.floor() };
            Dd::from_f64(adj)
        } else {
            Dd::from_f64(hi)
        }
    }

    /// Reduce into roughly [-π, π].
    pub fn rem_two_pi(self) -> Dd {
        let k = (self.hi / Dd::TWO_PI.hi).round();
        if k == 0.0 {
            return self;
        }
        self - Dd::TWO_PI.scale(k)
    }

    /// `(sin x, cos x)` with the argument reduced in double-double precision.
    pub fn sin_cos(self) -> (f64, f64) {
        let r = self.rem_two_pi();
        let (s, c) = r.hi.sin_cos();
        (s + r.lo * c, c - r.lo * s)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::from_f64(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs.scale(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs.scale(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two_squares_to_two() {
        let s = Dd::from_f64(2.0).sqrt().unwrap();
        let d = s * s - Dd::from_f64(2.0);
        assert!(d.to_f64().abs() < 1e-30);
        assert_eq!(s.hi, Dd::SQRT_2.hi);
        assert!((s.lo - Dd::SQRT_2.lo).abs() < 1e-31);
    }

    #[test]
    fn pi_reduction_is_tight() {
        let (s, c) = Dd::PI.sin_cos();
        assert!(s.abs() < 1e-30);
        assert_eq!(c, -1.0);
        // 2·2378·π·√2 scaled by √2/2 is exactly 2378·2π
        let theta = Dd::from_f64(2.0 * 2378.0) * Dd::PI * Dd::SQRT_2;
        let half = Dd::SQRT_2 * theta.scale(0.5);
        let (s, c) = half.sin_cos();
        assert!(s.abs() < 1e-20, "{s}");
        assert!((c - 1.0).abs() < 1e-20);
    }

    #[test]
    fn division_is_sign_symmetric() {
        let a = Dd::PI;
        let b = Dd::from_f64(3.0).sqrt().unwrap();
        assert_eq!((-a) / b, -(a / b));
        assert_eq!((-a) * b, -(a * b));
    }

    #[test]
    fn round_handles_lo() {
        let x = Dd { hi: 4.0, lo: -1e-20 };
        assert_eq!(x.round().to_f64(), 4.0);
        let y = Dd::from_f64(2.5) + Dd { hi: 0.0, lo: 1e-20 };
        assert_eq!(y.round().to_f64(), 3.0);
    }

    #[test]
    fn u128_conversion_is_exact() {
        let n: u128 = (1u128 << 80) + 12345;
        let d = Dd::from_u128(n);
        assert_eq!(d.hi as u128 as i128 + d.lo as i128, n as i128);
    }
}
