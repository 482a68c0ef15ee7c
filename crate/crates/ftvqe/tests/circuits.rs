//! Circuit IR: serialization, validation, cost metrics, lowering and
//! transpilation checked against dense matrices.

use ftvqe::{
    lower_two_qubit, transpile, CliffordTCircuit, CtGate, GateKind, ParamCircuit, ParamGate,
    StateVector,
};
use nalgebra::{Complex, DMatrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rssynth::SynthCache;

fn basis_state(n: usize, j: usize) -> StateVector<f64> {
    let mut s = StateVector::<f64>::zero_state(n);
    s.amps[0] = ddfloat::Complex::zero();
    s.amps[j] = ddfloat::Complex::one();
    s
}

fn param_matrix(c: &ParamCircuit, theta: &[f64]) -> DMatrix<Complex<f64>> {
    let dim = 1 << c.n;
    DMatrix::from_fn(dim, dim, |i, j| {
        let mut s = basis_state(c.n, j);
        s.apply_param(c, theta).unwrap();
        Complex::new(s.amps[i].re, s.amps[i].im)
    })
}

fn ct_matrix(c: &CliffordTCircuit) -> DMatrix<Complex<f64>> {
    let dim = 1 << c.n;
    DMatrix::from_fn(dim, dim, |i, j| {
        let mut s = basis_state(c.n, j);
        s.apply_clifford_t(c).unwrap();
        Complex::new(s.amps[i].re, s.amps[i].im)
    })
}

fn opnorm(m: &DMatrix<Complex<f64>>) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

#[test]
fn param_circuit_text_round_trip() {
    let gates = vec![
        ParamGate::clifford(GateKind::H, 0),
        ParamGate::cnot(0, 1),
        ParamGate::rot2(GateKind::Zz, 0, 1, 0),
        ParamGate::rot1(GateKind::Rx, 1, 1),
        ParamGate::fixed1(GateKind::Rz, 0, -0.75),
    ];
    let c = ParamCircuit::new(2, gates, 2).unwrap();
    let back = ParamCircuit::from_text(&c.to_text()).unwrap();
    assert_eq!(c, back);
}

#[test]
fn clifford_t_text_round_trip() {
    let c = CliffordTCircuit {
        n: 2,
        gates: vec![CtGate::H(0), CtGate::T(1), CtGate::Cnot(0, 1), CtGate::S(1), CtGate::X(0)],
        phase_w: 5,
    };
    let back = CliffordTCircuit::from_text(&c.to_text()).unwrap();
    assert_eq!(c, back);
}

#[test]
fn validation_rejects_bad_circuits() {
    // Qubit out of range.
    assert!(ParamCircuit::new(1, vec![ParamGate::clifford(GateKind::H, 1)], 0).is_err());
    // Unused parameter.
    assert!(ParamCircuit::new(1, vec![ParamGate::rot1(GateKind::Rz, 0, 0)], 2).is_err());
    // Clifford with a parameter.
    assert!(ParamCircuit::new(1, vec![ParamGate::rot1(GateKind::H, 0, 0)], 1).is_err());
    // Rotation with neither parameter nor angle.
    let bare = ParamGate { kind: GateKind::Rz, q0: 0, q1: None, param_id: None, fixed_angle: None };
    assert!(ParamCircuit::new(1, vec![bare], 0).is_err());
    // Coincident CNOT qubits.
    assert!(ParamCircuit::new(2, vec![ParamGate::cnot(1, 1)], 0).is_err());
}

#[test]
fn t_count_counts_t_symbols() {
    let empty = CliffordTCircuit { n: 2, gates: vec![], phase_w: 0 };
    assert_eq!(empty.t_count(), 0);
    let c = CliffordTCircuit {
        n: 2,
        gates: vec![CtGate::T(0), CtGate::T(1), CtGate::S(0)],
        phase_w: 0,
    };
    assert_eq!(c.t_count(), 2);
}

#[test]
fn t_depth_schedules_as_soon_as_possible() {
    let mk = |gates| CliffordTCircuit { n: 2, gates, phase_w: 0 };
    assert_eq!(mk(vec![CtGate::T(0), CtGate::T(1)]).t_depth(), 1);
    assert_eq!(mk(vec![CtGate::T(0), CtGate::T(0)]).t_depth(), 2);
    // The CNOT synchronizes the qubit clocks, serializing the two T gates.
    assert_eq!(mk(vec![CtGate::T(0), CtGate::Cnot(0, 1), CtGate::T(1)]).t_depth(), 2);
}

#[test]
fn t_depth_bounded_by_t_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let gates: Vec<CtGate> = (0..30)
            .map(|_| match rng.gen_range(0..4) {
                0 => CtGate::T(rng.gen_range(0..3)),
                1 => CtGate::H(rng.gen_range(0..3)),
                2 => CtGate::S(rng.gen_range(0..3)),
                _ => {
                    let a = rng.gen_range(0..3);
                    let b = (a + 1 + rng.gen_range(0..2)) % 3;
                    CtGate::Cnot(a, b)
                }
            })
            .collect();
        let c = CliffordTCircuit { n: 3, gates, phase_w: 0 };
        assert!(c.t_depth() <= c.t_count());
    }
    // All T gates on one line: equality.
    let serial = CliffordTCircuit { n: 2, gates: vec![CtGate::T(0); 7], phase_w: 0 };
    assert_eq!(serial.t_depth(), serial.t_count());
}

fn lowered_matrix(g: &ParamGate, theta: &[f64]) -> DMatrix<Complex<f64>> {
    let lowered = lower_two_qubit(g, theta).unwrap();
    let c = ParamCircuit::new(2, lowered, 0).unwrap();
    param_matrix(&c, &[])
}

#[test]
fn two_qubit_lowering_matches_exponential_kernels() {
    // The engine kernels implement e^(i angle/2 P tensor P) directly, so
    // matrix equality pins the lowering to the same sign convention.
    for (kind, angle) in [
        (GateKind::Zz, 0.0),
        (GateKind::Zz, 0.4),
        (GateKind::Xx, 1.0),
        (GateKind::Yy, 0.7),
        (GateKind::Zz, -2.3),
        (GateKind::Xx, -0.9),
        (GateKind::Yy, 5.1),
    ] {
        let g = ParamGate::fixed2(kind, 0, 1, angle);
        let direct = param_matrix(&ParamCircuit::new(2, vec![g], 0).unwrap(), &[]);
        let lowered = lowered_matrix(&g, &[]);
        assert!(
            opnorm(&(direct.clone() - lowered.clone())) < 1e-14,
            "{kind:?}({angle}) lowering mismatch"
        );
    }
}

#[test]
fn zz_lowering_at_zero_is_identity() {
    let g = ParamGate::fixed2(GateKind::Zz, 0, 1, 0.0);
    let m = lowered_matrix(&g, &[]);
    let id = DMatrix::<Complex<f64>>::identity(4, 4);
    assert!(opnorm(&(m - id)) < 1e-15);
}

#[test]
fn lowering_rejects_single_qubit_kinds() {
    let g = ParamGate::fixed1(GateKind::Rz, 0, 0.3);
    assert!(lower_two_qubit(&g, &[]).is_err());
}

#[test]
fn transpile_passes_cliffords_through() {
    let gates = vec![
        ParamGate::clifford(GateKind::H, 0),
        ParamGate::cnot(0, 1),
        ParamGate::clifford(GateKind::S, 1),
        ParamGate::clifford(GateKind::X, 0),
    ];
    let c = ParamCircuit::new(2, gates, 0).unwrap();
    let cache = SynthCache::in_memory();
    let tr = transpile(&c, &[], 4, 1, &cache).unwrap();
    assert_eq!(tr.circuit.t_count(), 0);
    assert_eq!(
        tr.circuit.gates,
        vec![CtGate::H(0), CtGate::Cnot(0, 1), CtGate::S(1), CtGate::X(0)]
    );
    assert!(tr.sites.is_empty());
}

#[test]
fn transpiled_quarter_turn_needs_no_t_gates() {
    let c = ParamCircuit::new(
        1,
        vec![ParamGate::fixed1(GateKind::Rz, 0, std::f64::consts::FRAC_PI_2)],
        0,
    )
    .unwrap();
    let cache = SynthCache::in_memory();
    let tr = transpile(&c, &[], 8, 1, &cache).unwrap();
    assert_eq!(tr.circuit.t_count(), 0);
}

#[test]
fn transpiled_rotation_t_count_matches_site_record() {
    let c = ParamCircuit::new(1, vec![ParamGate::fixed1(GateKind::Rz, 0, 0.5)], 0).unwrap();
    let cache = SynthCache::in_memory();
    let tr = transpile(&c, &[], 4, 1, &cache).unwrap();
    assert_eq!(tr.sites.len(), 1);
    assert_eq!(tr.circuit.t_count(), tr.sites[0].t_count);
    assert!(tr.sites[0].achieved_error <= 1e-4);
}

fn random_two_qubit_circuit(rng: &mut ChaCha8Rng) -> (ParamCircuit, Vec<f64>) {
    let rotations = rng.gen_range(1..=6);
    let mut gates = Vec::new();
    for _ in 0..rotations {
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        gates.push(match rng.gen_range(0..6) {
            0 => ParamGate::fixed1(GateKind::Rz, rng.gen_range(0..2), angle),
            1 => ParamGate::fixed1(GateKind::Rx, rng.gen_range(0..2), angle),
            2 => ParamGate::fixed1(GateKind::Ry, rng.gen_range(0..2), angle),
            3 => ParamGate::fixed2(GateKind::Zz, 0, 1, angle),
            4 => ParamGate::fixed2(GateKind::Xx, 0, 1, angle),
            _ => ParamGate::fixed2(GateKind::Yy, 0, 1, angle),
        });
        if rng.gen_bool(0.5) {
            gates.push(match rng.gen_range(0..3) {
                0 => ParamGate::clifford(GateKind::H, rng.gen_range(0..2)),
                1 => ParamGate::clifford(GateKind::S, rng.gen_range(0..2)),
                _ => ParamGate::cnot(0, 1),
            });
        }
    }
    (ParamCircuit::new(2, gates, 0).unwrap(), vec![])
}

#[test]
fn transpile_error_bounded_by_rotation_budget() {
    let cache = SynthCache::in_memory();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..12 {
        let (c, theta) = random_two_qubit_circuit(&mut rng);
        let d = 3 + (trial % 3) as u32;
        let exact = param_matrix(&c, &theta);
        let tr = transpile(&c, &theta, d, 1, &cache).unwrap();
        let approx = ct_matrix(&tr.circuit);
        let rotations = tr.sites.len() as f64;
        let bound = rotations * 10f64.powi(-(d as i32));
        assert!(
            opnorm(&(exact - approx)) <= bound,
            "trial {trial}: transpile error exceeds {bound:e}"
        );
    }
}

#[test]
fn refining_digits_never_worsens_per_gate_error() {
    let cache = SynthCache::in_memory();
    let c = ParamCircuit::new(1, vec![ParamGate::rot1(GateKind::Rz, 0, 0)], 1).unwrap();
    for angle in [0.3, 1.1, 2.537061, 4.6] {
        let mut prev = f64::INFINITY;
        for d in 1..=8 {
            let tr = transpile(&c, &[angle], d, 1, &cache).unwrap();
            let err = tr.sites[0].achieved_error;
            assert!(err <= prev, "angle {angle}, d {d}: {err:e} > {prev:e}");
            prev = err;
        }
    }
}

#[test]
fn quarter_shift_is_exact_and_free() {
    let cache = SynthCache::in_memory();
    let theta = 0.813;
    let c = ParamCircuit::new(1, vec![ParamGate::rot1(GateKind::Rz, 0, 0)], 1).unwrap();
    let tr = transpile(&c, &[theta], 6, 1, &cache).unwrap();
    let base_t = tr.circuit.t_count();
    for (quarter, shift) in [(1i8, std::f64::consts::FRAC_PI_2), (-1, -std::f64::consts::FRAC_PI_2)]
    {
        let shifted = tr.with_quarter_shift(0, quarter);
        assert_eq!(shifted.t_count(), base_t);
        let want = param_matrix(
            &ParamCircuit::new(1, vec![ParamGate::fixed1(GateKind::Rz, 0, theta + shift)], 0)
                .unwrap(),
            &[],
        );
        let got = ct_matrix(&shifted);
        assert!(opnorm(&(want - got)) <= 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuit_text_round_trips(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, _) = random_two_qubit_circuit(&mut rng);
        let back = ParamCircuit::from_text(&c.to_text()).unwrap();
        prop_assert_eq!(c, back);
    }
}
