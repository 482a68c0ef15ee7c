use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use ddfloat::{Cdd, Dd};

use crate::ZOmega;

/// Element z / sqrt2^k of D[omega]. Canonical form has minimal k, so k is
/// the smallest denominator exponent (sde) of the value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DOmega {
    z: ZOmega,
    k: u32,
}

impl DOmega {
    /// Builds z / sqrt2^k and reduces to canonical form.
    pub fn new(z: ZOmega, k: u32) -> Self {
        let mut v = DOmega { z, k };
        v.canonicalize();
        v
    }

    pub fn zero() -> Self {
        DOmega { z: ZOmega::zero(), k: 0 }
    }

    pub fn one() -> Self {
        DOmega { z: ZOmega::one(), k: 0 }
    }

    pub fn from_zomega(z: ZOmega) -> Self {
        DOmega::new(z, 0)
    }

    pub fn numer(&self) -> &ZOmega {
        &self.z
    }

    /// Smallest denominator exponent: min k with sqrt2^k * self in Z[omega].
    pub fn sde(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.z.is_zero()
    }

    /// Numerator at a fixed level k >= sde.
    pub fn numer_at(&self, k: u32) -> ZOmega {
        assert!(k >= self.k);
        let mut z = self.z.clone();
        for _ in self.k..k {
            z = &z * &ZOmega::sqrt2();
        }
        z
    }

    fn canonicalize(&mut self) {
        if self.z.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 && self.z.divisible_by_sqrt2() {
            self.z = self.z.div_sqrt2();
            self.k -= 1;
        }
    }

    pub fn conj(&self) -> Self {
        DOmega { z: self.z.conj(), k: self.k }
    }

    /// sqrt2-conjugate; the denominator picks up a sign on odd k, folded
    /// into the numerator.
    pub fn conj2(&self) -> Self {
        let z = self.z.conj2();
        let z = if self.k % 2 == 1 { -&z } else { z };
        DOmega { z, k: self.k }
    }

    pub fn mul_omega_pow(&self, j: i64) -> Self {
        DOmega { z: &self.z * &ZOmega::omega_pow(j), k: self.k }
    }

    pub fn to_cdd(&self) -> Cdd {
        let c = self.z.to_cdd();
        let scale = (Dd::ONE / Dd::SQRT_2).powi(self.k as i32);
        Cdd { re: c.re * scale, im: c.im * scale }
    }
}

impl Add for &DOmega {
    type Output = DOmega;
    fn add(self, rhs: &DOmega) -> DOmega {
        let k = self.k.max(rhs.k);
        DOmega::new(&self.numer_at(k) + &rhs.numer_at(k), k)
    }
}

impl Sub for &DOmega {
    type Output = DOmega;
    fn sub(self, rhs: &DOmega) -> DOmega {
        let k = self.k.max(rhs.k);
        DOmega::new(&self.numer_at(k) - &rhs.numer_at(k), k)
    }
}

impl Mul for &DOmega {
    type Output = DOmega;
    fn mul(self, rhs: &DOmega) -> DOmega {
        DOmega::new(&self.z * &rhs.z, self.k + rhs.k)
    }
}

impl Neg for &DOmega {
    type Output = DOmega;
    fn neg(self) -> DOmega {
        DOmega { z: -&self.z, k: self.k }
    }
}

impl Neg for DOmega {
    type Output = DOmega;
    fn neg(self) -> DOmega {
        -&self
    }
}

impl fmt::Debug for DOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/r2^{}", self.z, self.k)
    }
}
