//! The two benchmark spin chains: transverse-field Ising and the XXZ
//! Heisenberg model, both periodic, with their variational layer circuits,
//! initial-state preparations, and ground-energy oracles.

use ddfloat::RealScalar;
use nalgebra::DMatrix;

use crate::circuit::{GateKind, ParamCircuit, ParamGate};
use crate::engine::{Pauli, PauliSum, StateVector};
use crate::FtvqeError;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Tfim,
    Xxz,
}

/// `coupling` is the transverse field g for TFIM and the anisotropy for XXZ.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub model: ModelKind,
    pub n: usize,
    pub coupling: f64,
    pub layers: usize,
}

impl ModelSpec {
    pub fn validate(&self) -> Result<(), FtvqeError> {
        if self.n < 2 {
            return Err(FtvqeError::BadModel("need at least 2 sites".into()));
        }
        if self.model == ModelKind::Xxz && self.n % 2 != 0 {
            return Err(FtvqeError::BadModel(
                "singlet-pair initial state needs an even site count".into(),
            ));
        }
        Ok(())
    }

    pub fn param_count(&self) -> usize {
        match self.model {
            ModelKind::Tfim => 2 * self.layers,
            ModelKind::Xxz => 4 * self.layers,
        }
    }
}

fn word(n: usize, entries: &[(usize, Pauli)]) -> Vec<Pauli> {
    let mut w = vec![Pauli::I; n];
    for &(q, p) in entries {
        w[q] = p;
    }
    w
}

/// TFIM: -sum_i [Z_i Z_{i+1} + g X_i]; XXZ: sum_i [X X + Y Y + delta Z Z],
/// both with the periodic bond (N-1, 0).
pub fn build_hamiltonian(spec: &ModelSpec) -> Result<PauliSum, FtvqeError> {
    spec.validate()?;
    let n = spec.n;
    let mut terms = Vec::new();
    match spec.model {
        ModelKind::Tfim => {
            for i in 0..n {
                let j = (i + 1) % n;
                terms.push((-1.0, word(n, &[(i, Pauli::Z), (j, Pauli::Z)])));
            }
            for i in 0..n {
                terms.push((-spec.coupling, word(n, &[(i, Pauli::X)])));
            }
        }
        ModelKind::Xxz => {
            for i in 0..n {
                let j = (i + 1) % n;
                terms.push((1.0, word(n, &[(i, Pauli::X), (j, Pauli::X)])));
                terms.push((1.0, word(n, &[(i, Pauli::Y), (j, Pauli::Y)])));
                terms.push((spec.coupling, word(n, &[(i, Pauli::Z), (j, Pauli::Z)])));
            }
        }
    }
    PauliSum::new(n, terms)
}

/// Bonds (i, i+1 mod N) with even i; these are disjoint, so their rotations
/// schedule in parallel. For XXZ they are the singlet-pair bonds.
fn even_bonds(n: usize) -> Vec<(usize, usize)> {
    (0..n).step_by(2).map(|i| (i, (i + 1) % n)).filter(|(a, b)| a != b).collect()
}

fn odd_bonds(n: usize) -> Vec<(usize, usize)> {
    (1..n).step_by(2).map(|i| (i, (i + 1) % n)).filter(|(a, b)| a != b).collect()
}

/// Layered variational circuit. TFIM layer l: ZZ(beta_l) on every bond
/// (even-index bonds first, then odd - the two halves commute, and grouping
/// disjoint bonds keeps the T-schedule parallel), then RX(gamma_l) on every
/// qubit; 2 parameters per layer. XXZ layer l: ZZ(t_l) then XX(p_l), YY(p_l)
/// on odd bonds, then ZZ(b_l), XX(g_l), YY(g_l) on even (pair) bonds;
/// 4 parameters and 3N rotations per layer.
pub fn build_ansatz(spec: &ModelSpec) -> Result<ParamCircuit, FtvqeError> {
    spec.validate()?;
    let n = spec.n;
    let mut gates = Vec::new();
    match spec.model {
        ModelKind::Tfim => {
            for l in 0..spec.layers {
                let beta = 2 * l;
                let gamma = 2 * l + 1;
                for (a, b) in even_bonds(n).into_iter().chain(odd_bonds(n)) {
                    gates.push(ParamGate::rot2(GateKind::Zz, a, b, beta));
                }
                for q in 0..n {
                    gates.push(ParamGate::rot1(GateKind::Rx, q, gamma));
                }
            }
        }
        ModelKind::Xxz => {
            for l in 0..spec.layers {
                let ids = [4 * l, 4 * l + 1, 4 * l + 2, 4 * l + 3];
                for (bonds, zz_id, xy_id) in
                    [(odd_bonds(n), ids[0], ids[1]), (even_bonds(n), ids[2], ids[3])]
                {
                    for &(a, b) in &bonds {
                        gates.push(ParamGate::rot2(GateKind::Zz, a, b, zz_id));
                    }
                    for &(a, b) in &bonds {
                        gates.push(ParamGate::rot2(GateKind::Xx, a, b, xy_id));
                        gates.push(ParamGate::rot2(GateKind::Yy, a, b, xy_id));
                    }
                }
            }
        }
    }
    ParamCircuit::new(n, gates, spec.param_count())
}

/// Clifford preparation: TFIM gets |+>^N; XXZ gets a singlet |Psi-> on each
/// pair (2i, 2i+1) via H, CNOT, X, Z on the first qubit of the pair.
pub fn preparation_circuit(spec: &ModelSpec) -> Result<ParamCircuit, FtvqeError> {
    spec.validate()?;
    let n = spec.n;
    let mut gates = Vec::new();
    match spec.model {
        ModelKind::Tfim => {
            for q in 0..n {
                gates.push(ParamGate::clifford(GateKind::H, q));
            }
        }
        ModelKind::Xxz => {
            for i in (0..n).step_by(2) {
                gates.push(ParamGate::clifford(GateKind::H, i));
                gates.push(ParamGate::cnot(i, i + 1));
                gates.push(ParamGate::clifford(GateKind::X, i));
                // Z = S S in the available gate set.
                gates.push(ParamGate::clifford(GateKind::S, i));
                gates.push(ParamGate::clifford(GateKind::S, i));
            }
        }
    }
    ParamCircuit::new(n, gates, 0)
}

pub fn initial_state<T: RealScalar>(spec: &ModelSpec) -> Result<StateVector<T>, FtvqeError> {
    let prep = preparation_circuit(spec)?;
    let mut s = StateVector::zero_state(spec.n);
    s.apply_param(&prep, &[])?;
    Ok(s)
}

/// Dense real-symmetric matrix of a Pauli sum; valid because every term
/// here has an even Y count.
pub fn dense_matrix(h: &PauliSum) -> DMatrix<f64> {
    let dim = 1usize << h.n;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for (coeff, w) in &h.terms {
        let mut flip = 0usize;
        for (q, p) in w.iter().enumerate() {
            if matches!(p, Pauli::X | Pauli::Y) {
                flip |= 1 << (h.n - 1 - q);
            }
        }
        for i in 0..dim {
            let mut neg = false;
            let mut ypow = 0usize;
            for (q, p) in w.iter().enumerate() {
                let b = i & (1 << (h.n - 1 - q)) != 0;
                match p {
                    Pauli::Z => neg ^= b,
                    Pauli::Y => {
                        ypow += 1;
                        neg ^= b;
                    }
                    _ => {}
                }
            }
            assert!(ypow % 2 == 0, "odd Y count gives a complex matrix");
            let mut v = *coeff;
            if ypow % 4 == 2 {
                v = -v;
            }
            if neg {
                v = -v;
            }
            m[(i ^ flip, i)] += v;
        }
    }
    m
}

/// y += H x without materializing H (real-symmetric Pauli action).
fn pauli_matvec(h: &PauliSum, x: &[f64], y: &mut [f64]) {
    let n = h.n;
    for (coeff, w) in &h.terms {
        let mut flip = 0usize;
        for (q, p) in w.iter().enumerate() {
            if matches!(p, Pauli::X | Pauli::Y) {
                flip |= 1 << (n - 1 - q);
            }
        }
        for i in 0..x.len() {
            let mut neg = false;
            let mut ypow = 0usize;
            for (q, p) in w.iter().enumerate() {
                let b = i & (1 << (n - 1 - q)) != 0;
                match p {
                    Pauli::Z => neg ^= b,
                    Pauli::Y => {
                        ypow += 1;
                        neg ^= b;
                    }
                    _ => {}
                }
            }
            debug_assert!(ypow % 2 == 0);
            let mut v = *coeff;
            if ypow % 4 == 2 {
                v = -v;
            }
            if neg {
                v = -v;
            }
            y[i ^ flip] += v * x[i];
        }
    }
}

/// Lowest eigenvalue by dense diagonalization.
pub fn dense_ground_energy(h: &PauliSum) -> f64 {
    let m = dense_matrix(h);
    let eig = m.symmetric_eigen();
    eig.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b))
}

const LANCZOS_RESIDUAL_TOL: f64 = 1e-10;

/// Lowest eigenvalue by Lanczos with full reorthogonalization; restarts from
/// the current Ritz vector until the residual ||Hv - Ev|| drops below
/// 1e-10 or the restart budget runs out.
pub fn lanczos_ground_energy(h: &PauliSum, seed: u64) -> Result<f64, FtvqeError> {
    use rand::{Rng, SeedableRng};
    let dim = 1usize << h.n;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut v0: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut last_residual = f64::INFINITY;
    for _restart in 0..8 {
        let m = 200.min(dim);
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        let norm = v0.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut v: Vec<f64> = v0.iter().map(|x| x / norm).collect();
        for j in 0..m {
            let mut w = vec![0.0; dim];
            pauli_matvec(h, &v, &mut w);
            let alpha: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
            alphas.push(alpha);
            basis.push(v.clone());
            // Full reorthogonalization keeps Ritz values honest.
            for u in &basis {
                let c: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= c * ui;
                }
            }
            for u in &basis {
                let c: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= c * ui;
                }
            }
            let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if beta < 1e-13 || j == m - 1 {
                break;
            }
            betas.push(beta);
            v = w.into_iter().map(|x| x / beta).collect();
        }
        let k = alphas.len();
        let mut tri = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            tri[(i, i)] = alphas[i];
            if i + 1 < k {
                tri[(i, i + 1)] = betas[i];
                tri[(i + 1, i)] = betas[i];
            }
        }
        let eig = tri.symmetric_eigen();
        let (mut best, mut energy) = (0, f64::INFINITY);
        for (i, &e) in eig.eigenvalues.iter().enumerate() {
            if e < energy {
                energy = e;
                best = i;
            }
        }
        // Ritz vector in the original space.
        let mut ritz = vec![0.0; dim];
        for (j, u) in basis.iter().enumerate() {
            let c = eig.eigenvectors[(j, best)];
            for (r, ui) in ritz.iter_mut().zip(u) {
                *r += c * ui;
            }
        }
        let rn = ritz.iter().map(|x| x * x).sum::<f64>().sqrt();
        for r in &mut ritz {
            *r /= rn;
        }
        let mut hv = vec![0.0; dim];
        pauli_matvec(h, &ritz, &mut hv);
        last_residual = hv
            .iter()
            .zip(&ritz)
            .map(|(a, b)| (a - energy * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if last_residual <= LANCZOS_RESIDUAL_TOL {
            return Ok(energy);
        }
        v0 = ritz;
    }
    Err(FtvqeError::EigensolverStalled { residual: last_residual })
}

/// Ground energy: dense diagonalization up to 12 qubits, Lanczos above.
pub fn exact_ground_energy(spec: &ModelSpec) -> Result<f64, FtvqeError> {
    let h = build_hamiltonian(spec)?;
    if spec.n <= 12 {
        Ok(dense_ground_energy(&h))
    } else {
        lanczos_ground_energy(&h, 7)
    }
}

/// Closed-form TFIM ground energy for the periodic chain via the
/// free-fermion picture: E0 = -sum_k sqrt(1 + g^2 - 2 g cos k) over the
/// antiperiodic momenta k = 2 pi (m + 1/2) / N of the even-parity sector.
pub fn tfim_free_fermion_energy(n: usize, g: f64) -> f64 {
    let mut e = 0.0;
    for m in 0..n {
        let k = std::f64::consts::TAU * (m as f64 + 0.5) / n as f64;
        e -= (1.0 + g * g - 2.0 * g * k.cos()).sqrt();
    }
    e
}
