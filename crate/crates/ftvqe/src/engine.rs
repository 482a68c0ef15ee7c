//! Statevector simulation generic over the amplitude scalar: plain f64,
//! double-double, or the digit-limited type that rounds every operation,
//! which is what makes the roundoff-accumulation study possible.

use ddfloat::{Complex, RealScalar};

use crate::circuit::{CliffordTCircuit, CtGate, GateKind, ParamCircuit};
use crate::FtvqeError;

/// Qubit 0 owns the most significant bit of the basis index, so the
/// amplitude order matches the tensor-product reading |q0 q1 ...>.
#[derive(Clone, Debug)]
pub struct StateVector<T: RealScalar> {
    pub n: usize,
    pub amps: Vec<Complex<T>>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Hermitian operator as a real combination of Pauli words.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    pub n: usize,
    pub terms: Vec<(f64, Vec<Pauli>)>,
}

impl PauliSum {
    pub fn new(n: usize, terms: Vec<(f64, Vec<Pauli>)>) -> Result<Self, FtvqeError> {
        for (_, w) in &terms {
            if w.len() != n {
                return Err(FtvqeError::BadCircuit(format!(
                    "pauli word length {} != {n} qubits",
                    w.len()
                )));
            }
        }
        Ok(PauliSum { n, terms })
    }

    pub fn coeff_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }
}

impl<T: RealScalar> StateVector<T> {
    pub fn zero_state(n: usize) -> Self {
        assert!(n >= 1 && n <= 24, "qubit count out of range");
        let mut amps = vec![Complex::zero(); 1 << n];
        amps[0] = Complex::one();
        StateVector { n, amps }
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    pub fn norm_sqr(&self) -> T {
        let mut s = T::zero();
        for a in &self.amps {
            s = s + a.norm_sqr();
        }
        s
    }

    fn apply_h(&mut self, q: usize) {
        let c = T::inv_sqrt2();
        let bit = self.bit(q);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a = self.amps[i];
                let b = self.amps[i | bit];
                self.amps[i] = (a + b).scale(c);
                self.amps[i | bit] = (a - b).scale(c);
            }
        }
    }

    fn apply_x(&mut self, q: usize) {
        let bit = self.bit(q);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }

    /// diag(1, phase) on one qubit.
    fn apply_diag(&mut self, q: usize, phase: Complex<T>) {
        let bit = self.bit(q);
        for i in 0..self.amps.len() {
            if i & bit != 0 {
                self.amps[i] = self.amps[i] * phase;
            }
        }
    }

    fn apply_s(&mut self, q: usize) {
        self.apply_diag(q, Complex::i());
    }

    fn apply_t(&mut self, q: usize) {
        let c = T::inv_sqrt2();
        self.apply_diag(q, Complex::new(c, c));
    }

    fn apply_cnot(&mut self, ctrl: usize, tgt: usize) {
        let cb = self.bit(ctrl);
        let tb = self.bit(tgt);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    fn apply_rz(&mut self, q: usize, angle: f64) {
        let (c, s) = T::cos_sin_of(angle / 2.0);
        let lo = Complex::new(c, -s);
        let hi = Complex::new(c, s);
        let bit = self.bit(q);
        for i in 0..self.amps.len() {
            let f = if i & bit == 0 { lo } else { hi };
            self.amps[i] = self.amps[i] * f;
        }
    }

    fn apply_rx(&mut self, q: usize, angle: f64) {
        let (c, s) = T::cos_sin_of(angle / 2.0);
        let mis = Complex::new(T::zero(), -s);
        let bit = self.bit(q);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a = self.amps[i];
                let b = self.amps[i | bit];
                self.amps[i] = a.scale(c) + b * mis;
                self.amps[i | bit] = b.scale(c) + a * mis;
            }
        }
    }

    fn apply_ry(&mut self, q: usize, angle: f64) {
        let (c, s) = T::cos_sin_of(angle / 2.0);
        let bit = self.bit(q);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a = self.amps[i];
                let b = self.amps[i | bit];
                self.amps[i] = a.scale(c) - b.scale(s);
                self.amps[i | bit] = a.scale(s) + b.scale(c);
            }
        }
    }

    /// e^(i angle/2 Z Z): diagonal phase by the parity of the two bits.
    fn apply_zz(&mut self, qa: usize, qb: usize, angle: f64) {
        let (c, s) = T::cos_sin_of(angle / 2.0);
        let even = Complex::new(c, s);
        let odd = Complex::new(c, -s);
        let (ba, bb) = (self.bit(qa), self.bit(qb));
        for i in 0..self.amps.len() {
            let parity = ((i & ba != 0) as u8) ^ ((i & bb != 0) as u8);
            let f = if parity == 0 { even } else { odd };
            self.amps[i] = self.amps[i] * f;
        }
    }

    /// e^(i angle/2 X X) = cos I + i sin (X X): mixes bit-flipped pairs.
    fn apply_xx(&mut self, qa: usize, qb: usize, angle: f64) {
        let (c, s) = T::cos_sin_of(angle / 2.0);
        let is = Complex::new(T::zero(), s);
        let mask = self.bit(qa) | self.bit(qb);
        for i in 0..self.amps.len() {
            if i < i ^ mask {
                let a = self.amps[i];
                let b = self.amps[i ^ mask];
                self.amps[i] = a.scale(c) + b * is;
                self.amps[i ^ mask] = b.scale(c) + a * is;
            }
        }
    }

    /// e^(i angle/2 Y Y); (Y Y)|ab> = -(-1)^(a+b)|!a !b>.
    fn apply_yy(&mut self, qa: usize, qb: usize, angle: f64) {
        let (c, s) = T::cos_sin_of(angle / 2.0);
        let is = Complex::new(T::zero(), s);
        let (ba, bb) = (self.bit(qa), self.bit(qb));
        let mask = ba | bb;
        for i in 0..self.amps.len() {
            if i < i ^ mask {
                // i has both bits equal 0 or both 1 => (-1)^(a+b) = +1.
                let same = (i & ba != 0) == (i & bb != 0);
                let f = if same { -is } else { is };
                let a = self.amps[i];
                let b = self.amps[i ^ mask];
                self.amps[i] = a.scale(c) + b * f;
                self.amps[i ^ mask] = b.scale(c) + a * f;
            }
        }
    }

    fn apply_phase_w(&mut self, w: u8) {
        if w % 8 == 0 {
            return;
        }
        // Exact 8th root of unity: components are 0, +-1, +-sqrt(1/2).
        let r = T::inv_sqrt2();
        let k = w % 8;
        let c = match k {
            0 => T::one(),
            1 | 7 => r,
            2 | 6 => T::zero(),
            3 | 5 => -r,
            _ => -T::one(),
        };
        let s = match k {
            0 | 4 => T::zero(),
            1 | 3 => r,
            2 => T::one(),
            5 | 7 => -r,
            _ => -T::one(),
        };
        let f = Complex::new(c, s);
        for a in &mut self.amps {
            *a = *a * f;
        }
    }

    pub fn apply_clifford_t(&mut self, c: &CliffordTCircuit) -> Result<(), FtvqeError> {
        if c.n != self.n {
            return Err(FtvqeError::BadCircuit(format!(
                "circuit on {} qubits applied to {}-qubit state",
                c.n, self.n
            )));
        }
        for g in &c.gates {
            match *g {
                CtGate::H(q) => self.apply_h(q),
                CtGate::S(q) => self.apply_s(q),
                CtGate::T(q) => self.apply_t(q),
                CtGate::X(q) => self.apply_x(q),
                CtGate::Cnot(a, b) => self.apply_cnot(a, b),
            }
        }
        self.apply_phase_w(c.phase_w);
        Ok(())
    }

    /// Applies a parameterized circuit directly (no synthesis); rotations
    /// use exact trigonometric kernels.
    pub fn apply_param(&mut self, c: &ParamCircuit, theta: &[f64]) -> Result<(), FtvqeError> {
        self.apply_param_shifted(c, theta, None)
    }

    /// Same, with one gate's own angle offset by `shift` - the evaluation
    /// primitive behind per-gate parameter-shift gradients.
    pub fn apply_param_shifted(
        &mut self,
        c: &ParamCircuit,
        theta: &[f64],
        shift: Option<(usize, f64)>,
    ) -> Result<(), FtvqeError> {
        if c.n != self.n {
            return Err(FtvqeError::BadCircuit(format!(
                "circuit on {} qubits applied to {}-qubit state",
                c.n, self.n
            )));
        }
        if theta.len() != c.param_count {
            return Err(FtvqeError::BadCircuit("parameter count mismatch".into()));
        }
        for (idx, g) in c.gates.iter().enumerate() {
            let angle = |g: &crate::circuit::ParamGate| {
                let mut a = g.angle(theta);
                if let Some((i, da)) = shift {
                    if i == idx {
                        a += da;
                    }
                }
                a
            };
            match g.kind {
                GateKind::H => self.apply_h(g.q0),
                GateKind::S => self.apply_s(g.q0),
                GateKind::X => self.apply_x(g.q0),
                GateKind::Cnot => self.apply_cnot(g.q0, g.q1.unwrap()),
                GateKind::PhaseW => self.apply_phase_w(1),
                GateKind::Rz => self.apply_rz(g.q0, angle(g)),
                GateKind::Rx => self.apply_rx(g.q0, angle(g)),
                GateKind::Ry => self.apply_ry(g.q0, angle(g)),
                GateKind::Zz => self.apply_zz(g.q0, g.q1.unwrap(), angle(g)),
                GateKind::Xx => self.apply_xx(g.q0, g.q1.unwrap(), angle(g)),
                GateKind::Yy => self.apply_yy(g.q0, g.q1.unwrap(), angle(g)),
            }
        }
        Ok(())
    }

    /// <s|P|s> real part; errors if the imaginary residue exceeds the
    /// roundoff allowance 10^6 * u * terms * coefficient scale.
    pub fn expectation(&self, h: &PauliSum) -> Result<T, FtvqeError> {
        if h.n != self.n {
            return Err(FtvqeError::BadCircuit("operator/state qubit mismatch".into()));
        }
        let mut total = Complex::<T>::zero();
        for (coeff, word) in &h.terms {
            let mut flip = 0usize;
            for (q, p) in word.iter().enumerate() {
                if matches!(p, Pauli::X | Pauli::Y) {
                    flip |= self.bit(q);
                }
            }
            let mut acc = Complex::<T>::zero();
            for i in 0..self.amps.len() {
                // phase of P|i> = prod over qubits: Z -> (-1)^bit,
                // Y -> i * (-1)^bit, X -> 1.
                let mut neg = false;
                let mut ypow = 0usize;
                for (q, p) in word.iter().enumerate() {
                    let b = i & self.bit(q) != 0;
                    match p {
                        Pauli::Z => neg ^= b,
                        Pauli::Y => {
                            ypow += 1;
                            neg ^= b;
                        }
                        _ => {}
                    }
                }
                let mut ph = match ypow % 4 {
                    0 => Complex::one(),
                    1 => Complex::i(),
                    2 => -Complex::one(),
                    _ => -Complex::i(),
                };
                if neg {
                    ph = -ph;
                }
                acc = acc + self.amps[i ^ flip].conj() * ph * self.amps[i];
            }
            total = total + acc.scale(T::from_f64(*coeff));
        }
        let scale = h.coeff_norm().max(1.0);
        let thr = 1e6 * T::unit_roundoff() * h.terms.len() as f64 * scale;
        if total.im.to_f64().abs() > thr {
            return Err(FtvqeError::NonHermitian {
                imag: total.im.to_f64(),
                threshold: thr,
            });
        }
        Ok(total.re)
    }
}
