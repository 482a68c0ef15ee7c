//! Digit-limited floating point: every arithmetic result is rounded to `p`
//! significant decimal digits, emulating a backend with configurable
//! numerical precision. Values are carried in double-double, so quantization
//! (not carrier roundoff) dominates for p <= 25.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::{Dd, RealScalar};

thread_local! {
    static DIGITS: std::cell::Cell<u32> = const { std::cell::Cell::new(16) };
}

/// Sets the emulated precision (significant decimal digits) for the current
/// thread. Applies to all subsequent `PFloat` operations on this thread.
pub fn set_thread_digits(p: u32) {
    assert!(p >= 4, "precision must be at least 4 digits");
    DIGITS.with(|d| d.set(p));
}

pub fn thread_digits() -> u32 {
    DIGITS.with(|d| d.get())
}

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct PFloat(Dd);

impl PFloat {
    pub fn raw(self) -> Dd {
        self.0
    }

    fn quantize(v: Dd) -> PFloat {
        PFloat::quantize_at(v, thread_digits() as i32)
    }

    fn quantize_at(v: Dd, p: i32) -> PFloat {
        if v.is_zero() || !v.hi.is_finite() {
            return PFloat(v);
        }
        let e = v.to_f64().abs().log10().floor() as i32;
        let scale = Dd::exp10i(p - 1 - e);
        PFloat((v * scale).round() / scale)
    }
}

impl Add for PFloat {
    type Output = PFloat;
    fn add(self, rhs: PFloat) -> PFloat {
        PFloat::quantize(self.0 + rhs.0)
    }
}
impl Sub for PFloat {
    type Output = PFloat;
    fn sub(self, rhs: PFloat) -> PFloat {
        PFloat::quantize(self.0 - rhs.0)
    }
}
impl Mul for PFloat {
    type Output = PFloat;
    fn mul(self, rhs: PFloat) -> PFloat {
        PFloat::quantize(self.0 * rhs.0)
    }
}
impl Div for PFloat {
    type Output = PFloat;
    fn div(self, rhs: PFloat) -> PFloat {
        PFloat::quantize(self.0 / rhs.0)
    }
}
impl Neg for PFloat {
    type Output = PFloat;
    fn neg(self) -> PFloat {
        PFloat(-self.0)
    }
}

impl RealScalar for PFloat {
    fn zero() -> PFloat {
        PFloat(Dd::ZERO)
    }
    fn one() -> PFloat {
        PFloat(Dd::ONE)
    }
    fn from_f64(x: f64) -> PFloat {
        PFloat::quantize(Dd::from_f64(x))
    }
    fn to_f64(self) -> f64 {
        self.0.to_f64()
    }
    fn sqrt(self) -> PFloat {
        PFloat::quantize(self.0.sqrt())
    }
    fn cos_sin_of(angle: f64) -> (PFloat, PFloat) {
        // Gate constants carry 5 guard digits. Rounding them to p would bake
        // the same biased value into every gate and the bias would add up
        // coherently; with guard digits only the per-step arithmetic rounding
        // remains, which random-walks instead.
        let p = thread_digits() as i32 + 5;
        let (s, c) = Dd::from_f64(angle).sin_cos();
        (PFloat::quantize_at(c, p), PFloat::quantize_at(s, p))
    }
    fn inv_sqrt2() -> PFloat {
        PFloat::quantize_at(Dd::from_f64(0.5).sqrt(), thread_digits() as i32 + 5)
    }
    fn unit_roundoff() -> f64 {
        0.5 * 10f64.powi(1 - thread_digits() as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantizes_to_p_digits() {
        set_thread_digits(7);
        let x = PFloat::from_f64(1.0) / PFloat::from_f64(3.0);
        let err = (x.to_f64() - 1.0 / 3.0).abs();
        assert!(err > 1e-10 && err < 1e-7, "err {err}");
        set_thread_digits(20);
        let y = PFloat::from_f64(1.0) / PFloat::from_f64(3.0);
        let err = (y.to_f64() - 1.0 / 3.0).abs();
        assert!(err < 1e-16);
    }
}
