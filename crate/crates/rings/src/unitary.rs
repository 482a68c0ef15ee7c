use std::fmt;
use std::ops::Mul;

use ddfloat::Cdd;

use crate::DOmega;

/// 2x2 matrix over D[omega] with a global phase omega^w, w in 0..8.
/// Products of H, S, T, X and the scalar omega all live here exactly.
/// Equality folds the phase into the entries, so the same matrix value
/// compares equal however the phase is split.
#[derive(Clone)]
pub struct UnitaryDOmega {
    pub e00: DOmega,
    pub e01: DOmega,
    pub e10: DOmega,
    pub e11: DOmega,
    pub w: u8,
}

impl UnitaryDOmega {
    pub fn new(e00: DOmega, e01: DOmega, e10: DOmega, e11: DOmega, w: u8) -> Self {
        UnitaryDOmega { e00, e01, e10, e11, w: w % 8 }
    }

    pub fn identity() -> Self {
        UnitaryDOmega::new(DOmega::one(), DOmega::zero(), DOmega::zero(), DOmega::one(), 0)
    }

    /// Conjugate transpose; inverts the matrix when it is unitary.
    pub fn dagger(&self) -> Self {
        UnitaryDOmega {
            e00: self.e00.conj(),
            e01: self.e10.conj(),
            e10: self.e01.conj(),
            e11: self.e11.conj(),
            w: (8 - self.w) % 8,
        }
    }

    /// Exact check of U_mat^dagger * U_mat = I (phase is always unimodular).
    pub fn is_unitary(&self) -> bool {
        let d = self.dagger();
        let p = &d * self;
        p.e00 == DOmega::one()
            && p.e11 == DOmega::one()
            && p.e01.is_zero()
            && p.e10.is_zero()
    }

    /// Maximum sde over the entries.
    pub fn sde(&self) -> u32 {
        self.e00
            .sde()
            .max(self.e01.sde())
            .max(self.e10.sde())
            .max(self.e11.sde())
    }

    /// Entries with the global phase multiplied in.
    pub fn folded(&self) -> [DOmega; 4] {
        let j = self.w as i64;
        [
            self.e00.mul_omega_pow(j),
            self.e01.mul_omega_pow(j),
            self.e10.mul_omega_pow(j),
            self.e11.mul_omega_pow(j),
        ]
    }

    pub fn mul_phase(&self, j: u8) -> Self {
        let mut m = self.clone();
        m.w = (m.w + j) % 8;
        m
    }

    pub fn to_cdd(&self) -> [[Cdd; 2]; 2] {
        let phase = DOmega::from_zomega(crate::ZOmega::omega_pow(self.w as i64)).to_cdd();
        [
            [phase * self.e00.to_cdd(), phase * self.e01.to_cdd()],
            [phase * self.e10.to_cdd(), phase * self.e11.to_cdd()],
        ]
    }
}

impl PartialEq for UnitaryDOmega {
    fn eq(&self, other: &Self) -> bool {
        self.folded() == other.folded()
    }
}

impl Eq for UnitaryDOmega {}

impl std::hash::Hash for UnitaryDOmega {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.folded().hash(state);
    }
}

impl Mul for &UnitaryDOmega {
    type Output = UnitaryDOmega;
    fn mul(self, rhs: &UnitaryDOmega) -> UnitaryDOmega {
        UnitaryDOmega {
            e00: &(&self.e00 * &rhs.e00) + &(&self.e01 * &rhs.e10),
            e01: &(&self.e00 * &rhs.e01) + &(&self.e01 * &rhs.e11),
            e10: &(&self.e10 * &rhs.e00) + &(&self.e11 * &rhs.e10),
            e11: &(&self.e10 * &rhs.e01) + &(&self.e11 * &rhs.e11),
            w: (self.w + rhs.w) % 8,
        }
    }
}

impl fmt::Debug for UnitaryDOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "w^{} [[{:?}, {:?}], [{:?}, {:?}]]",
            self.w, self.e00, self.e01, self.e10, self.e11
        )
    }
}
