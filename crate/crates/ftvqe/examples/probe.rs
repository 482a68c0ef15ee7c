use ddfloat::{Complex, Dd, RealScalar};
use ftvqe::models::build_hamiltonian;
use ftvqe::vqe::full_circuit;
use ftvqe::{transpile, ModelKind, ModelSpec, StateVector};
use rssynth::SynthCache;

// Columns of the circuit unitary via basis states, Dd engine.
fn cols_param(c: &ftvqe::ParamCircuit, theta: &[f64]) -> Vec<Vec<Complex<Dd>>> {
    (0..16)
        .map(|b| {
            let mut s = StateVector::<Dd>::zero_state(4);
            for a in s.amps.iter_mut() {
                *a = Complex::zero();
            }
            s.amps[b] = Complex::one();
            s.apply_param(c, theta).unwrap();
            s.amps.clone()
        })
        .collect()
}

fn cols_ct(c: &ftvqe::CliffordTCircuit) -> Vec<Vec<Complex<Dd>>> {
    (0..16)
        .map(|b| {
            let mut s = StateVector::<Dd>::zero_state(4);
            for a in s.amps.iter_mut() {
                *a = Complex::zero();
            }
            s.amps[b] = Complex::one();
            s.apply_clifford_t(c).unwrap();
            s.amps.clone()
        })
        .collect()
}

fn main() {
    let spec = ModelSpec { model: ModelKind::Tfim, n: 4, coupling: 1.0, layers: 2 };
    let theta = vec![
        1.8012241878437347f64,
        2.8450813143481,
        10.28078787133181,
        10.586263860025158,
    ];
    let c = full_circuit(&spec).unwrap();
    let h = build_hamiltonian(&spec).unwrap();
    let rz = cols_param(&c, &theta);
    let cache = SynthCache::in_memory();
    for d in [8u32, 10] {
        let tr = transpile(&c, &theta, d, 1, &cache).unwrap();
        let ft = cols_ct(&tr.circuit);
        // max entry |diff|, ignoring global phase: align via first big entry.
        let mut num = Complex::<Dd>::zero();
        let mut den = Dd::ZERO;
        for b in 0..16 {
            for i in 0..16 {
                num = num + rz[b][i].conj() * ft[b][i];
                den = den + rz[b][i].norm_sqr();
            }
        }
        let ph = Complex::new(num.re / num.norm_sqr().sqrt(), num.im / num.norm_sqr().sqrt());
        let _ = den;
        let mut maxd = 0f64;
        for b in 0..16 {
            for i in 0..16 {
                let dv = ft[b][i] * ph.conj() - rz[b][i];
                maxd = maxd.max(dv.norm_sqr().to_f64().sqrt());
            }
        }
        let mut raw = 0f64;
        for b in 0..16 {
            for i in 0..16 {
                let dv = ft[b][i] - rz[b][i];
                raw = raw.max(dv.norm_sqr().to_f64().sqrt());
            }
        }
        let mut s = StateVector::<Dd>::zero_state(4);
        s.apply_clifford_t(&tr.circuit).unwrap();
        let e_ft = s.expectation(&h).unwrap();
        let mut s2 = StateVector::<Dd>::zero_state(4);
        s2.apply_param(&c, &theta).unwrap();
        let e_rz = s2.expectation(&h).unwrap();
        println!(
            "d={d} raw_max={raw:.3e} phase_aligned_max={maxd:.3e} ediff={:e} phase={:?}",
            (e_ft - e_rz).to_f64(),
            (ph.re.to_f64(), ph.im.to_f64())
        );
    }
}
