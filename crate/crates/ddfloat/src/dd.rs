//! Double-double arithmetic: an unevaluated sum of two f64 giving ~31
//! significant decimal digits. Algorithms follow Dekker/Knuth error-free
//! transformations; `two_prod` relies on fused multiply-add.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, f64::mul_add(a, b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: 3.141592653589793116e0,
        lo: 1.224646799147353207e-16,
    };
    pub const FRAC_PI_2: Dd = Dd {
        hi: 1.570796326794896558e0,
        lo: 6.123233995736766036e-17,
    };
    pub const SQRT_2: Dd = Dd {
        hi: 1.414213562373095049e0,
        lo: -9.667293313452913451e-17,
    };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn from_i64(x: i64) -> Dd {
        // i64 may exceed 2^53; split exactly.
        let hi = x as f64;
        let lo = (x - hi as i64) as f64;
        Dd::new(hi, lo)
    }

    pub fn from_bigint(x: &BigInt) -> Dd {
        let hi = x.to_f64().unwrap_or(f64::INFINITY);
        if !hi.is_finite() {
            return Dd::from_f64(hi);
        }
        let hi_big = f64_to_bigint_exact(hi);
        let rem = x - hi_big;
        let lo = rem.to_f64().unwrap_or(0.0);
        Dd::new(hi, lo)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    pub fn sqr(self) -> Dd {
        let (p, mut e) = two_prod(self.hi, self.hi);
        e += 2.0 * self.hi * self.lo;
        e += self.lo * self.lo;
        Dd::new(p, e)
    }

    pub fn sqrt(self) -> Dd {
        if self.is_zero() {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of negative dd");
        let x = 1.0 / self.hi.sqrt();
        let ax = Dd::from_f64(self.hi.sqrt());
        // One Newton step in dd: y + (a - y^2) * (0.5/ sqrt(a))
        let err = self - ax.sqr();
        ax + err * Dd::from_f64(0.5 * x)
    }

    pub fn floor(self) -> Dd {
        let f = self.hi.floor();
        if f < self.hi {
            Dd::from_f64(f)
        } else {
            Dd::new(f, self.lo.floor())
        }
    }

    pub fn ceil(self) -> Dd {
        -((-self).floor())
    }

    pub fn round(self) -> Dd {
        (self + Dd::from_f64(0.5)).floor()
    }

    /// Exact conversion of an integral dd to BigInt.
    pub fn to_bigint(self) -> BigInt {
        let x = self.floor();
        f64_to_bigint_exact(x.hi) + f64_to_bigint_exact(x.lo)
    }

    pub fn powi(self, n: i32) -> Dd {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            e >>= 1;
        }
        acc
    }

    pub fn exp10i(n: i32) -> Dd {
        Dd::from_f64(10.0).powi(n)
    }

    pub fn ldexp(self, n: i32) -> Dd {
        let s = libm_scalbn(1.0, n);
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    /// sin and cos, valid for |x| up to a few hundred.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let n = (self.to_f64() / Dd::FRAC_PI_2.to_f64()).round() as i64;
        let r = self - Dd::from_i64(n) * Dd::FRAC_PI_2;
        let (s, c) = (taylor_sin(r), taylor_cos(r));
        match n.rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn cos(self) -> Dd {
        self.sin_cos().1
    }

    pub fn sin(self) -> Dd {
        self.sin_cos().0
    }
}

fn libm_scalbn(x: f64, n: i32) -> f64 {
    x * 2f64.powi(n)
}

fn f64_to_bigint_exact(x: f64) -> BigInt {
    debug_assert!(x.fract() == 0.0);
    if x.abs() < 9.0e15 {
        return BigInt::from(x as i64);
    }
    let (mantissa, exp, sign) = integer_decode(x);
    let mut v = BigInt::from(mantissa);
    if exp >= 0 {
        v <<= exp as usize;
    } else {
        v >>= (-exp) as usize;
    }
    if sign < 0 {
        v = -v;
    }
    v
}

fn integer_decode(x: f64) -> (u64, i16, i8) {
    let bits = x.to_bits();
    let sign: i8 = if bits >> 63 == 0 { 1 } else { -1 };
    let mut exponent = ((bits >> 52) & 0x7ff) as i16;
    let mantissa = if exponent == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    exponent -= 1075;
    (mantissa, exponent, sign)
}

fn taylor_sin(r: Dd) -> Dd {
    if r.is_zero() {
        return Dd::ZERO;
    }
    let r2 = r.sqr();
    let mut term = r;
    let mut sum = r;
    let mut i = 1i64;
    loop {
        term = term * r2 / Dd::from_i64((2 * i) * (2 * i + 1));
        term = -term;
        sum += term;
        if term.hi.abs() < 1e-35 {
            break;
        }
        i += 1;
    }
    sum
}

fn taylor_cos(r: Dd) -> Dd {
    let r2 = r.sqr();
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut i = 1i64;
    loop {
        term = term * r2 / Dd::from_i64((2 * i - 1) * (2 * i));
        term = -term;
        sum += term;
        if term.hi.abs() < 1e-35 {
            break;
        }
        i += 1;
    }
    sum
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd { hi: s1, lo: s2 }
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
        let (p, mut e) = two_prod(self.hi, rhs.hi);
        e += self.hi * rhs.lo + self.lo * rhs.hi;
        Dd::new(p, e)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - Dd::from_f64(q1) * rhs;
        let q2 = r.hi / rhs.hi;
        let r2 = r - Dd::from_f64(q2) * rhs;
        let q3 = r2.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e + q3)
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, rhs: Dd) {
        *self = *self + rhs;
    }
}
impl SubAssign for Dd {
    fn sub_assign(&mut self, rhs: Dd) {
        *self = *self - rhs;
    }
}
impl MulAssign for Dd {
    fn mul_assign(&mut self, rhs: Dd) {
        *self = *self * rhs;
    }
}
impl DivAssign for Dd {
    fn div_assign(&mut self, rhs: Dd) {
        *self = *self / rhs;
    }
}

impl PartialEq for Dd {
    fn eq(&self, other: &Dd) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::from_f64(x)
    }
}

impl From<i64> for Dd {
    fn from(x: i64) -> Dd {
        Dd::from_i64(x)
    }
}

impl Zero for Dd {
    fn zero() -> Dd {
        Dd::ZERO
    }
    fn is_zero(&self) -> bool {
        Dd::is_zero(*self)
    }
}

impl Signed for Dd {
    fn abs(&self) -> Dd {
        Dd::abs(*self)
    }
    fn abs_sub(&self, other: &Dd) -> Dd {
        if self <= other {
            Dd::ZERO
        } else {
            *self - *other
        }
    }
    fn signum(&self) -> Dd {
        if self.hi > 0.0 || (self.hi == 0.0 && self.lo > 0.0) {
            Dd::ONE
        } else if self.is_zero() {
            Dd::ZERO
        } else {
            -Dd::ONE
        }
    }
    fn is_positive(&self) -> bool {
        self.signum() == Dd::ONE
    }
    fn is_negative(&self) -> bool {
        self.signum() == -Dd::ONE
    }
}

impl num_traits::One for Dd {
    fn one() -> Dd {
        Dd::ONE
    }
}

impl Add for &Dd {
    type Output = Dd;
    fn add(self, rhs: &Dd) -> Dd {
        *self + *rhs
    }
}

impl num_traits::Num for Dd {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Dd, Self::FromStrRadixErr> {
        assert_eq!(radix, 10);
        s.parse::<f64>().map(Dd::from_f64)
    }
}

impl std::ops::Rem for Dd {
    type Output = Dd;
    fn rem(self, rhs: Dd) -> Dd {
        self - (self / rhs).floor() * rhs
    }
}
