//! Statevector engine: gate kernels, norm preservation, expectations
//! against dense oracles, and the extended-precision backend.

use ddfloat::{Dd, PFloat, RealScalar};
use ftvqe::models::{build_hamiltonian, dense_matrix};
use ftvqe::{transpile, GateKind, ModelKind, ModelSpec, ParamCircuit, ParamGate, Pauli, PauliSum, StateVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rssynth::SynthCache;

#[test]
fn x_flips_the_computational_basis() {
    let c = ParamCircuit::new(1, vec![ParamGate::clifford(GateKind::X, 0)], 0).unwrap();
    let mut s = StateVector::<f64>::zero_state(1);
    s.apply_param(&c, &[]).unwrap();
    assert!((s.amps[0].re.powi(2) + s.amps[0].im.powi(2)).abs() < 1e-30);
    assert!((s.amps[1].re - 1.0).abs() < 1e-15);
}

#[test]
fn double_hadamard_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 3;
    let mut s = StateVector::<f64>::zero_state(n);
    for a in s.amps.iter_mut() {
        *a = ddfloat::Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let norm = s.norm_sqr().sqrt();
    for a in s.amps.iter_mut() {
        *a = a.scale(1.0 / norm);
    }
    let before = s.clone();
    let c = ParamCircuit::new(
        n,
        vec![ParamGate::clifford(GateKind::H, 1), ParamGate::clifford(GateKind::H, 1)],
        0,
    )
    .unwrap();
    s.apply_param(&c, &[]).unwrap();
    for (a, b) in s.amps.iter().zip(&before.amps) {
        assert!((a.re - b.re).abs() < 1e-15 && (a.im - b.im).abs() < 1e-15);
    }
}

#[test]
fn transpiled_rotation_tracks_the_exact_rotation() {
    // R_z(0.3) at six digits on |+>.
    let cache = SynthCache::in_memory();
    let c = ParamCircuit::new(
        1,
        vec![ParamGate::clifford(GateKind::H, 0), ParamGate::fixed1(GateKind::Rz, 0, 0.3)],
        0,
    )
    .unwrap();
    let mut exact = StateVector::<f64>::zero_state(1);
    exact.apply_param(&c, &[]).unwrap();
    let tr = transpile(&c, &[], 6, 1, &cache).unwrap();
    let mut approx = StateVector::<f64>::zero_state(1);
    approx.apply_clifford_t(&tr.circuit).unwrap();
    for (a, b) in approx.amps.iter().zip(&exact.amps) {
        let d = ((a.re - b.re).powi(2) + (a.im - b.im).powi(2)).sqrt();
        assert!(d <= 1e-6);
    }
}

#[test]
fn basic_expectations() {
    let s = StateVector::<f64>::zero_state(1);
    let z = PauliSum::new(1, vec![(1.0, vec![Pauli::Z])]).unwrap();
    assert!((s.expectation(&z).unwrap() - 1.0).abs() < 1e-15);

    let mut plus = StateVector::<f64>::zero_state(1);
    let h = ParamCircuit::new(1, vec![ParamGate::clifford(GateKind::H, 0)], 0).unwrap();
    plus.apply_param(&h, &[]).unwrap();
    let x = PauliSum::new(1, vec![(1.0, vec![Pauli::X])]).unwrap();
    assert!((plus.expectation(&x).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn expectation_matches_dense_quadratic_form() {
    let spec = ModelSpec { model: ModelKind::Tfim, n: 4, coupling: 1.0, layers: 1 };
    let h = build_hamiltonian(&spec).unwrap();
    let m = dense_matrix(&h);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        // Random product state via single-qubit rotations.
        let mut gates = Vec::new();
        for q in 0..4 {
            gates.push(ParamGate::fixed1(GateKind::Ry, q, rng.gen_range(0.0..std::f64::consts::TAU)));
            gates.push(ParamGate::fixed1(GateKind::Rz, q, rng.gen_range(0.0..std::f64::consts::TAU)));
        }
        let c = ParamCircuit::new(4, gates, 0).unwrap();
        let mut s = StateVector::<f64>::zero_state(4);
        s.apply_param(&c, &[]).unwrap();
        let e = s.expectation(&h).unwrap();
        // <s|M|s> with real M and complex s.
        let mut quad = 0.0;
        for i in 0..16 {
            for j in 0..16 {
                let a = s.amps[i];
                let b = s.amps[j];
                quad += m[(i, j)] * (a.re * b.re + a.im * b.im);
            }
        }
        assert!((e - quad).abs() < 1e-12);
    }
}

#[test]
fn energy_matches_dense_matrix_to_twelve_digits_up_to_six_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in [2, 4, 6] {
        let spec = ModelSpec { model: ModelKind::Xxz, n, coupling: 0.7, layers: 1 };
        let h = build_hamiltonian(&spec).unwrap();
        let m = dense_matrix(&h);
        let mut gates = Vec::new();
        for q in 0..n {
            gates.push(ParamGate::fixed1(GateKind::Ry, q, rng.gen_range(0.0..6.28)));
        }
        for q in 0..n - 1 {
            gates.push(ParamGate::cnot(q, q + 1));
        }
        let c = ParamCircuit::new(n, gates, 0).unwrap();
        let mut s = StateVector::<f64>::zero_state(n);
        s.apply_param(&c, &[]).unwrap();
        let e = s.expectation(&h).unwrap();
        let dim = 1 << n;
        let mut quad = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                quad += m[(i, j)] * (s.amps[i].re * s.amps[j].re + s.amps[i].im * s.amps[j].im);
            }
        }
        assert!((e - quad).abs() < 1e-12);
    }
}

#[test]
fn clifford_circuit_amplitudes_are_dyadic_at_extended_precision() {
    // H / CNOT / S words on basis states give magnitudes 0 or 2^(-k/2).
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let n = 3;
        let gates: Vec<ParamGate> = (0..12)
            .map(|_| match rng.gen_range(0..3) {
                0 => ParamGate::clifford(GateKind::H, rng.gen_range(0..n)),
                1 => ParamGate::clifford(GateKind::S, rng.gen_range(0..n)),
                _ => {
                    let a = rng.gen_range(0..n);
                    let b = (a + 1 + rng.gen_range(0..n - 1)) % n;
                    ParamGate::cnot(a, b)
                }
            })
            .collect();
        let c = ParamCircuit::new(n, gates, 0).unwrap();
        let mut s = StateVector::<Dd>::zero_state(n);
        s.apply_param(&c, &[]).unwrap();
        for a in &s.amps {
            let m2 = a.norm_sqr().to_f64();
            if m2 < 1e-28 {
                continue;
            }
            // |amp|^2 must be 2^-k for integer k.
            let k = -m2.log2();
            assert!(
                (k - k.round()).abs() < 1e-10 && k >= -1e-9,
                "non-dyadic Clifford amplitude magnitude^2 {m2}"
            );
        }
    }
}

#[test]
fn sixteen_digit_backend_matches_double() {
    let spec = ModelSpec { model: ModelKind::Tfim, n: 4, coupling: 1.0, layers: 2 };
    let h = build_hamiltonian(&spec).unwrap();
    let circuit = ftvqe::vqe::full_circuit(&spec).unwrap();
    let theta: Vec<f64> = vec![0.31, 1.7, 2.2, 0.05];

    let mut s64 = StateVector::<f64>::zero_state(4);
    s64.apply_param(&circuit, &theta).unwrap();
    let e64 = s64.expectation(&h).unwrap();

    ddfloat::set_thread_digits(16);
    let mut sp = StateVector::<PFloat>::zero_state(4);
    sp.apply_param(&circuit, &theta).unwrap();
    let ep = sp.expectation(&h).unwrap().to_f64();

    assert!((e64 - ep).abs() <= 1e-13 * e64.abs().max(1.0), "{e64} vs {ep}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn circuits_preserve_the_norm(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 3usize;
        let gates: Vec<ParamGate> = (0..20)
            .map(|_| {
                let angle = rng.gen_range(-6.3..6.3);
                match rng.gen_range(0..8) {
                    0 => ParamGate::fixed1(GateKind::Rz, rng.gen_range(0..n), angle),
                    1 => ParamGate::fixed1(GateKind::Rx, rng.gen_range(0..n), angle),
                    2 => ParamGate::fixed1(GateKind::Ry, rng.gen_range(0..n), angle),
                    3 => ParamGate::fixed2(GateKind::Zz, 0, 1, angle),
                    4 => ParamGate::fixed2(GateKind::Xx, 1, 2, angle),
                    5 => ParamGate::fixed2(GateKind::Yy, 0, 2, angle),
                    6 => ParamGate::clifford(GateKind::H, rng.gen_range(0..n)),
                    _ => ParamGate::cnot(0, rng.gen_range(1..n)),
                }
            })
            .collect();
        let c = ParamCircuit::new(n, gates, 0).unwrap();
        let mut s = StateVector::<f64>::zero_state(n);
        s.apply_param(&c, &[]).unwrap();
        let bound = 8.0 * f64::unit_roundoff() * 20.0 * 1e3;
        prop_assert!((s.norm_sqr() - 1.0).abs() < bound);
    }
}
