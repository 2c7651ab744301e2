//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`s with
//! about 106 bits of significand.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unit roundoff of double-double arithmetic, `2^-104`, with slack for the
/// sloppy addition used here.
pub const DD_EPS: f64 = 4.930380657631324e-32;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    fn mul_pow2(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    /// `exp(self)` to roughly `1e-30` relative accuracy.
    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2 * Dd::new(k)).mul_pow2(-10);
        // Taylor series of exp(r) - 1; |r| < 3.4e-4
        let mut term = r;
        let mut sum = r;
        for n in 2..=12 {
            term = term * r / Dd::new(n as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        // (1 + s)^2 - 1 = s (2 + s), keeps precision near 1
        for _ in 0..10 {
            sum = sum * (sum + Dd::new(2.0));
        }
        let e = sum + Dd::ONE;
        let k = k as i32;
        // split the scaling to avoid overflow of 2^k near the range limits
        e.mul_pow2(k / 2).mul_pow2(k - k / 2)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
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
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// A double-double value with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounded {
    pub value: Dd,
    pub err: f64,
}

impl Bounded {
    pub fn exact(x: f64) -> Self {
        Bounded {
            value: Dd::new(x),
            err: 0.0,
        }
    }

    pub fn new(value: Dd, err: f64) -> Self {
        Bounded { value, err }
    }

    /// Whether the value is resolved as strictly positive.
    pub fn is_positive(self) -> bool {
        self.value.hi > 0.0 && self.value.to_f64() > self.err
    }

    fn rounding(v: Dd) -> f64 {
        4.0 * DD_EPS * v.hi.abs()
    }
}

impl Add for Bounded {
    type Output = Bounded;
    fn add(self, b: Bounded) -> Bounded {
        let v = self.value + b.value;
        let err = self.err + b.err + Bounded::rounding(self.value.abs() + b.value.abs());
        Bounded::new(v, err)
    }
}

impl Sub for Bounded {
    type Output = Bounded;
    fn sub(self, b: Bounded) -> Bounded {
        self + Bounded::new(-b.value, b.err)
    }
}

impl Mul for Bounded {
    type Output = Bounded;
    fn mul(self, b: Bounded) -> Bounded {
        let v = self.value * b.value;
        let (x, y) = (self.value.hi.abs(), b.value.hi.abs());
        let err = x * b.err + y * self.err + self.err * b.err + Bounded::rounding(v);
        // hi parts differ from the full values by a relative 2^-52 at most
        Bounded::new(v, err * (1.0 + 4.0 * f64::EPSILON))
    }
}
