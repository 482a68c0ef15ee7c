use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use ddfloat::Dd;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::RingError;

/// Element p + q*sqrt2 of Z[sqrt2].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZRootTwo {
    pub p: BigInt,
    pub q: BigInt,
}

impl ZRootTwo {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        ZRootTwo { p: p.into(), q: q.into() }
    }

    pub fn zero() -> Self {
        ZRootTwo::default()
    }

    pub fn one() -> Self {
        ZRootTwo::new(1, 0)
    }

    /// lambda = 1 + sqrt2, the fundamental unit.
    pub fn lambda() -> Self {
        ZRootTwo::new(1, 1)
    }

    /// lambda^-1 = -1 + sqrt2.
    pub fn lambda_inv() -> Self {
        ZRootTwo::new(-1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.p.is_one() && self.q.is_zero()
    }

    /// Conjugate sqrt2 -> -sqrt2.
    pub fn conj(&self) -> Self {
        ZRootTwo::new(self.p.clone(), -self.q.clone())
    }

    /// Signed norm p^2 - 2 q^2.
    pub fn norm(&self) -> BigInt {
        &self.p * &self.p - 2 * (&self.q * &self.q)
    }

    /// Sign of the real embedding, computed exactly.
    pub fn signum(&self) -> i32 {
        let sp = bigint_sign(&self.p);
        let sq = bigint_sign(&self.q);
        if sp == sq || sq == 0 {
            return sp;
        }
        if sp == 0 {
            return sq;
        }
        // Mixed signs: sign(p + q sqrt2) = sign(p) * sign(p^2 - 2 q^2).
        sp * bigint_sign(&self.norm())
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    /// Exact division, if the quotient lies in Z[sqrt2].
    pub fn div_exact(&self, rhs: &ZRootTwo) -> Option<ZRootTwo> {
        if rhs.is_zero() {
            return None;
        }
        let n = rhs.norm();
        let num = self * &rhs.conj();
        let div = |x: &BigInt| -> Option<BigInt> {
            let (q, r) = x.div_rem(&n);
            if r.is_zero() {
                Some(q)
            } else {
                None
            }
        };
        Some(ZRootTwo { p: div(&num.p)?, q: div(&num.q)? })
    }

    /// Euclidean division with |N(r)| < |N(rhs)|.
    pub fn div_round(&self, rhs: &ZRootTwo) -> Result<ZRootTwo, RingError> {
        let n = rhs.norm();
        if n.is_zero() {
            return Err(RingError::EuclidStuck);
        }
        let num = self * &rhs.conj();
        let q = ZRootTwo {
            p: round_div_signed(&num.p, &n),
            q: round_div_signed(&num.q, &n),
        };
        let r = self - &(&q * rhs);
        if r.norm().abs() < n.abs() {
            Ok(q)
        } else {
            Err(RingError::EuclidStuck)
        }
    }

    pub fn gcd(&self, rhs: &ZRootTwo) -> Result<ZRootTwo, RingError> {
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

    pub fn pow(&self, mut e: u32) -> ZRootTwo {
        let mut base = self.clone();
        let mut acc = ZRootTwo::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_dd(&self) -> Dd {
        Dd::from_bigint(&self.p) + Dd::from_bigint(&self.q) * Dd::SQRT_2
    }
}

fn bigint_sign(x: &BigInt) -> i32 {
    match x.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

fn round_div_signed(x: &BigInt, n: &BigInt) -> BigInt {
    let (x, n) = if n.is_negative() {
        (-x.clone(), -n.clone())
    } else {
        (x.clone(), n.clone())
    };
    let two_x: BigInt = &x * 2;
    let two_n: BigInt = &n * 2;
    (two_x + &n).div_floor(&two_n)
}

impl Add for &ZRootTwo {
    type Output = ZRootTwo;
    fn add(self, rhs: &ZRootTwo) -> ZRootTwo {
        ZRootTwo { p: &self.p + &rhs.p, q: &self.q + &rhs.q }
    }
}

impl Sub for &ZRootTwo {
    type Output = ZRootTwo;
    fn sub(self, rhs: &ZRootTwo) -> ZRootTwo {
        ZRootTwo { p: &self.p - &rhs.p, q: &self.q - &rhs.q }
    }
}

impl Mul for &ZRootTwo {
    type Output = ZRootTwo;
    fn mul(self, rhs: &ZRootTwo) -> ZRootTwo {
        ZRootTwo {
            p: &self.p * &rhs.p + 2 * (&self.q * &rhs.q),
            q: &self.p * &rhs.q + &self.q * &rhs.p,
        }
    }
}

impl Neg for &ZRootTwo {
    type Output = ZRootTwo;
    fn neg(self) -> ZRootTwo {
        ZRootTwo { p: -&self.p, q: -&self.q }
    }
}

impl Neg for ZRootTwo {
    type Output = ZRootTwo;
    fn neg(self) -> ZRootTwo {
        -&self
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
forward_owned!(ZRootTwo, Add, add, AddAssign, add_assign);
forward_owned!(ZRootTwo, Sub, sub, SubAssign, sub_assign);
forward_owned!(ZRootTwo, Mul, mul, MulAssign, mul_assign);

impl PartialOrd for ZRootTwo {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ZRootTwo {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl fmt::Debug for ZRootTwo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}r2)", self.p, self.q)
    }
}

impl fmt::Display for ZRootTwo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}r2)", self.p, self.q)
    }
}
