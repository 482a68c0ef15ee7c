use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use ddfloat::{Cdd, Dd};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{RingError, ZRootTwo};

/// Element a + b*omega + c*omega^2 + d*omega^3 of Z[omega], omega = exp(i pi/4).
/// Multiplication reduces with omega^4 = -1.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZOmega {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl ZOmega {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        ZOmega { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn zero() -> Self {
        ZOmega::default()
    }

    pub fn one() -> Self {
        ZOmega::new(1, 0, 0, 0)
    }

    /// omega^j for any j (reduced mod 8, omega^4 = -1).
    pub fn omega_pow(j: i64) -> Self {
        let j = j.rem_euclid(8);
        let (idx, sign) = if j < 4 { (j, 1) } else { (j - 4, -1) };
        let mut z = ZOmega::zero();
        let coeff = BigInt::from(sign);
        match idx {
            0 => z.a = coeff,
            1 => z.b = coeff,
            2 => z.c = coeff,
            _ => z.d = coeff,
        }
        z
    }

    /// sqrt2 = omega - omega^3.
    pub fn sqrt2() -> Self {
        ZOmega::new(0, 1, 0, -1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Complex conjugate: omega -> omega^-1.
    pub fn conj(&self) -> Self {
        ZOmega::new(self.a.clone(), -self.d.clone(), -self.c.clone(), -self.b.clone())
    }

    /// sqrt2-conjugate: omega -> -omega.
    pub fn conj2(&self) -> Self {
        ZOmega::new(self.a.clone(), -self.b.clone(), self.c.clone(), -self.d.clone())
    }

    /// Rational norm N(z) = z * conj(z) * conj2(z) * conj(conj2(z)) >= 0.
    pub fn norm(&self) -> BigInt {
        let zz = self * &self.conj();
        let r = zz.to_zroottwo().expect("z * conj(z) is real");
        let n = r.norm();
        debug_assert!(!n.is_negative());
        n
    }

    /// Interprets a real element (c = 0, b = -d) as p + q*sqrt2.
    pub fn to_zroottwo(&self) -> Option<ZRootTwo> {
        if self.c.is_zero() && self.b == -self.d.clone() {
            Some(ZRootTwo::new(self.a.clone(), self.b.clone()))
        } else {
            None
        }
    }

    pub fn from_zroottwo(x: &ZRootTwo) -> Self {
        ZOmega::new(x.p.clone(), x.q.clone(), 0, -x.q.clone())
    }

    /// True iff sqrt2 divides self.
    pub fn divisible_by_sqrt2(&self) -> bool {
        (&self.a - &self.c).is_even() && (&self.b - &self.d).is_even()
    }

    /// Exact division by sqrt2; caller must check divisibility.
    pub fn div_sqrt2(&self) -> Self {
        debug_assert!(self.divisible_by_sqrt2());
        ZOmega::new(
            (&self.b - &self.d) / 2,
            (&self.a + &self.c) / 2,
            (&self.b + &self.d) / 2,
            (&self.c - &self.a) / 2,
        )
    }

    /// Exact division, if the quotient lies in Z[omega].
    pub fn div_exact(&self, rhs: &ZOmega) -> Option<ZOmega> {
        if rhs.is_zero() {
            return None;
        }
        let n = rhs.norm();
        let cof = &(&rhs.conj() * &rhs.conj2()) * &rhs.conj().conj2();
        let num = self * &cof;
        let div = |x: &BigInt| -> Option<BigInt> {
            let (q, r) = x.div_rem(&n);
            if r.is_zero() {
                Some(q)
            } else {
                None
            }
        };
        Some(ZOmega {
            a: div(&num.a)?,
            b: div(&num.b)?,
            c: div(&num.c)?,
            d: div(&num.d)?,
        })
    }

    /// Euclidean division: q minimizing-ish N(self - q*rhs) via coefficient
    /// rounding; falls back to a floor/ceil search when rounding fails.
    pub fn div_round(&self, rhs: &ZOmega) -> Result<ZOmega, RingError> {
        let n = rhs.norm();
        if n.is_zero() {
            return Err(RingError::EuclidStuck);
        }
        let cof = &(&rhs.conj() * &rhs.conj2()) * &rhs.conj().conj2();
        let num = self * &cof;
        let q = ZOmega {
            a: round_div(&num.a, &n),
            b: round_div(&num.b, &n),
            c: round_div(&num.c, &n),
            d: round_div(&num.d, &n),
        };
        let r = self - &(&q * rhs);
        if r.norm() < n {
            return Ok(q);
        }
        // Search the floor/ceil box around the rational quotient.
        let mut best: Option<(BigInt, ZOmega)> = None;
        let fa = num.a.div_floor(&n);
        let fb = num.b.div_floor(&n);
        let fc = num.c.div_floor(&n);
        let fd = num.d.div_floor(&n);
        for da in 0..2 {
            for db in 0..2 {
                for dc in 0..2 {
                    for dd in 0..2 {
                        let cand = ZOmega {
                            a: &fa + da,
                            b: &fb + db,
                            c: &fc + dc,
                            d: &fd + dd,
                        };
                        let r = self - &(&cand * rhs);
                        let rn = r.norm();
                        if best.as_ref().map_or(true, |(bn, _)| &rn < bn) {
                            best = Some((rn, cand));
                        }
                    }
                }
            }
        }
        let (rn, q) = best.unwrap();
        if rn < n {
            Ok(q)
        } else {
            Err(RingError::EuclidStuck)
        }
    }

    /// Greatest common divisor, defined up to a unit.
    pub fn gcd(&self, rhs: &ZOmega) -> Result<ZOmega, RingError> {
        if self.is_zero() && rhs.is_zero() {
            return Err(RingError::GcdOfZeros);
        }
        let mut x = self.clone();
        let mut y = rhs.clone();
        while !y.is_zero() {
            let q = x.div_round(&y)?;
            let r = &x - &(&q * &y);
            x = y;
            y = r;
        }
        Ok(x)
    }

    /// Complex embedding at double-double precision.
    pub fn to_cdd(&self) -> Cdd {
        let inv_sqrt2 = Dd::ONE / Dd::SQRT_2;
        let a = Dd::from_bigint(&self.a);
        let b = Dd::from_bigint(&self.b);
        let c = Dd::from_bigint(&self.c);
        let d = Dd::from_bigint(&self.d);
        Cdd {
            re: a + (b - d) * inv_sqrt2,
            im: c + (b + d) * inv_sqrt2,
        }
    }
}

fn round_div(x: &BigInt, n: &BigInt) -> BigInt {
    // Round-to-nearest (half up); n > 0.
    debug_assert!(n.is_positive());
    let two_x: BigInt = x * 2;
    let two_n: BigInt = n * 2;
    (two_x + n).div_floor(&two_n)
}

impl Add for &ZOmega {
    type Output = ZOmega;
    fn add(self, rhs: &ZOmega) -> ZOmega {
        ZOmega {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            c: &self.c + &rhs.c,
            d: &self.d + &rhs.d,
        }
    }
}

impl Sub for &ZOmega {
    type Output = ZOmega;
    fn sub(self, rhs: &ZOmega) -> ZOmega {
        ZOmega {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            c: &self.c - &rhs.c,
            d: &self.d - &rhs.d,
        }
    }
}

impl Neg for &ZOmega {
    type Output = ZOmega;
    fn neg(self) -> ZOmega {
        ZOmega {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

impl Mul for &ZOmega {
    type Output = ZOmega;
    fn mul(self, rhs: &ZOmega) -> ZOmega {
        let (xa, xb, xc, xd) = (&self.a, &self.b, &self.c, &self.d);
        let (ya, yb, yc, yd) = (&rhs.a, &rhs.b, &rhs.c, &rhs.d);
        ZOmega {
            a: xa * ya - xb * yd - xc * yc - xd * yb,
            b: xa * yb + xb * ya - xc * yd - xd * yc,
            c: xa * yc + xb * yb + xc * ya - xd * yd,
            d: xa * yd + xb * yc + xc * yb + xd * ya,
        }
    }
}

macro_rules! forward_owned {
    ($t:ident, $trait:ident, $m:ident, $at:ident, $am:ident) => {
        impl $trait for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl $at for $t {
            fn $am(&mut self, rhs: $t) {
                *self = (&*self).$m(&rhs);
            }
        }
    };
}
forward_owned!(ZOmega, Add, add, AddAssign, add_assign);
forward_owned!(ZOmega, Sub, sub, SubAssign, sub_assign);
forward_owned!(ZOmega, Mul, mul, MulAssign, mul_assign);

impl Neg for ZOmega {
    type Output = ZOmega;
    fn neg(self) -> ZOmega {
        -&self
    }
}

impl fmt::Debug for ZOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}w + {}w2 + {}w3)", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for ZOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}w + {}w2 + {}w3)", self.a, self.b, self.c, self.d)
    }
}
