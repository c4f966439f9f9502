//! Double-double arithmetic: an unevaluated sum `hi + lo` with
//! `|lo| <= ulp(hi) / 2`, about 106 bits of significand.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoubleDouble {
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

pub const LN2: DoubleDouble = DoubleDouble::new(0.6931471805599453, 2.3190468138462996e-17);
pub const HALF_LN_2PI: DoubleDouble = DoubleDouble::new(0.9189385332046728, -3.8782941580672414e-17);
pub const LN_28: DoubleDouble = DoubleDouble::new(3.332204510175204, 1.1961679835597506e-16);
/// `ln(8 pi / 5)`
pub const LN_8PI_OVER_5: DoubleDouble = DoubleDouble::new(1.6147335150951356, 9.805884112975345e-17);

/// `B_{2j} / (2j (2j - 1))` for `j = 1..=15`.
const STIRLING: [DoubleDouble; 15] = [
    DoubleDouble::new(0.08333333333333333, 4.625929269271485e-18),
    DoubleDouble::new(-0.002777777777777778, 1.0601087908747154e-19),
    DoubleDouble::new(0.0007936507936507937, 6.883823317368282e-22),
    DoubleDouble::new(-0.0005952380952380953, 5.36938218754726e-20),
    DoubleDouble::new(0.0008417508417508417, 3.6870174889237694e-20),
    DoubleDouble::new(-0.0019175269175269176, 1.0675702776872475e-19),
    DoubleDouble::new(0.00641025641025641, 2.2240044563805217e-19),
    DoubleDouble::new(-0.029550653594771242, 4.861760957508855e-19),
    DoubleDouble::new(0.17964437236883057, -6.401600482710946e-19),
    DoubleDouble::new(-1.3924322169059011, 1.5837056989230303e-17),
    DoubleDouble::new(13.402864044168393, -6.154114101993966e-16),
    DoubleDouble::new(-156.84828462600203, 9.391823141715389e-15),
    DoubleDouble::new(2193.1033333333335, -1.3339255626002948e-13),
    DoubleDouble::new(-36108.77125372499, 5.897583353514365e-13),
    DoubleDouble::new(691472.268851313, 2.5585296305158e-11),
];

impl DoubleDouble {
    pub const ZERO: Self = Self::new(0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0);

    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x, 0.0)
    }

    /// Exact for integers below `2^106`.
    pub fn from_u64(n: u64) -> Self {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Self::new(hi, lo)
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

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self::new(hi, lo)
    }

    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Self::new(self.hi * s, self.lo * s)
    }

    /// `e^x`. Reduction `x = k ln 2 + r`, then `expm1(r / 1024)` by Taylor
    /// series and ten doublings `s <- 2s + s^2`.
    pub fn exp(self) -> Self {
        if self.hi > 709.8 {
            return Self::new(f64::INFINITY, 0.0);
        }
        if self.hi < -745.2 {
            return Self::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2.mul_f64(k)).ldexp(-10);
        let mut term = r;
        let mut s = r;
        for i in 2..=30 {
            term = (term * r) / Self::from_f64(i as f64);
            s = s + term;
            if term.hi.abs() < 1e-36 * s.hi.abs().max(1e-300) {
                break;
            }
        }
        for _ in 0..10 {
            s = s.mul_f64(2.0) + s * s;
        }
        (s + Self::ONE).ldexp(k as i32)
    }

    /// Natural logarithm; one Newton step `y + a e^{-y} - 1` from the `f64` value.
    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::new(f64::NAN, 0.0);
        }
        let y = Self::from_f64(self.hi.ln());
        y + self * (-y).exp() - Self::ONE
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self::new(hi, lo)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.hi, -self.lo)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self::new(hi, lo)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self::new(hi, lo) + Self::from_f64(q3)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

/// `ln(k!)`: the exact product for `k < 20`, otherwise the Stirling series
/// for `ln Gamma(k + 1)` with 15 correction terms.
pub fn ln_factorial(k: u64) -> DoubleDouble {
    if k < 20 {
        let mut p = DoubleDouble::ONE;
        for j in 2..=k {
            p = p.mul_f64(j as f64);
        }
        return p.ln();
    }
    let z = DoubleDouble::from_u64(k + 1);
    let ln_z = z.ln();
    let mut out = (z - DoubleDouble::from_f64(0.5)) * ln_z - z + HALF_LN_2PI;
    let inv = DoubleDouble::ONE / z;
    let inv2 = inv * inv;
    let mut pow = inv;
    for c in STIRLING {
        out = out + c * pow;
        pow = pow * inv2;
    }
    out
}

/// `ln(n^k / k!)`.
pub fn log_poisson_term(n: u64, k: u64) -> DoubleDouble {
    if k == 0 {
        return DoubleDouble::ZERO;
    }
    DoubleDouble::from_u64(n).ln().mul_f64(k as f64) - ln_factorial(k)
}
