use std::fmt;
use std::str::FromStr;

use zrings::{DOmega, UnitaryDOmega, ZOmega};

use crate::SynthError;

/// Single-qubit gate letters. W is the scalar global phase omega = e^(i pi/4).
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Gate {
    H,
    S,
    T,
    X,
    W,
}

impl Gate {
    pub fn matrix(self) -> UnitaryDOmega {
        let one = DOmega::one();
        let zero = DOmega::zero();
        let h = DOmega::new(ZOmega::one(), 1);
        match self {
            Gate::H => UnitaryDOmega::new(h.clone(), h.clone(), h.clone(), -&h, 0),
            Gate::S => UnitaryDOmega::new(
                one.clone(),
                zero.clone(),
                zero,
                DOmega::from_zomega(ZOmega::omega_pow(2)),
                0,
            ),
            Gate::T => UnitaryDOmega::new(
                one.clone(),
                zero.clone(),
                zero,
                DOmega::from_zomega(ZOmega::omega_pow(1)),
                0,
            ),
            Gate::X => UnitaryDOmega::new(zero.clone(), one.clone(), one, zero.clone(), 0),
            Gate::W => UnitaryDOmega::identity().mul_phase(1),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Gate::H => 'H',
            Gate::S => 'S',
            Gate::T => 'T',
            Gate::X => 'X',
            Gate::W => 'W',
        }
    }
}

/// Gate word; leftmost letter is applied first, so as matrices the word
/// "AB" denotes B * A.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GateWord(pub Vec<Gate>);

impl GateWord {
    pub fn empty() -> Self {
        GateWord(Vec::new())
    }

    pub fn t_count(&self) -> usize {
        self.0.iter().filter(|g| **g == Gate::T).count()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, g: Gate) {
        self.0.push(g);
    }

    pub fn extend(&mut self, other: &GateWord) {
        self.0.extend_from_slice(&other.0);
    }

    /// T^m as a word, m in 0..8, using S for the even part.
    pub fn t_power(m: u8) -> GateWord {
        let m = m % 8;
        let mut w = GateWord::empty();
        if m % 2 == 1 {
            w.push(Gate::T);
        }
        for _ in 0..m / 2 {
            w.push(Gate::S);
        }
        w
    }

    /// omega^j as a word.
    pub fn phase(j: u8) -> GateWord {
        GateWord(vec![Gate::W; (j % 8) as usize])
    }
}

pub fn word_to_matrix(w: &GateWord) -> UnitaryDOmega {
    let mut m = UnitaryDOmega::identity();
    for g in &w.0 {
        m = &g.matrix() * &m;
    }
    m
}

impl fmt::Display for GateWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.0 {
            write!(f, "{}", g.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for GateWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl FromStr for GateWord {
    type Err = SynthError;

    fn from_str(s: &str) -> Result<Self, SynthError> {
        let mut w = GateWord::empty();
        for ch in s.chars() {
            w.push(match ch {
                'H' => Gate::H,
                'S' => Gate::S,
                'T' => Gate::T,
                'X' => Gate::X,
                'W' => Gate::W,
                _ => return Err(SynthError::BadGateLetter(ch)),
            });
        }
        Ok(w)
    }
}
