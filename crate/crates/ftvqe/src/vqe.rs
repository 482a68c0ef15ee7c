//! Variational ground-state search: BFGS over the ansatz parameters with
//! either direct rotation gates or their Clifford+T words, finite-difference
//! or parameter-shift gradients, and an optional digit-accuracy schedule
//! that starts coarse and refines as the optimizer converges.

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rssynth::SynthCache;

use crate::circuit::{transpile, ParamCircuit, ParamGate};
use crate::engine::{PauliSum, StateVector};
use crate::models::{build_ansatz, build_hamiltonian, exact_ground_energy, preparation_circuit, ModelSpec};
use crate::FtvqeError;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Rotations applied with exact trigonometric kernels.
    Rz,
    /// Rotations replaced by synthesized Clifford+T words.
    Ft,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GradientRule {
    FiniteDiff,
    ParamShift,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DigitSchedule {
    Fixed(u32),
    /// Start coarse; bump the accuracy by one digit every time the stop
    /// tolerance is met, until `max`.
    Adaptive { start: u32, max: u32 },
}

impl DigitSchedule {
    pub fn initial(self) -> u32 {
        match self {
            DigitSchedule::Fixed(d) => d,
            DigitSchedule::Adaptive { start, .. } => start,
        }
    }

    fn next(self, d: u32) -> Option<u32> {
        match self {
            DigitSchedule::Fixed(_) => None,
            DigitSchedule::Adaptive { max, .. } => (d < max).then_some(d + 1),
        }
    }
}

#[derive(Copy, Clone, Debug)]
pub struct VqeConfig {
    pub mode: Mode,
    pub gradient: GradientRule,
    pub digits: DigitSchedule,
    pub fd_step: f64,
    pub stop_tol: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl VqeConfig {
    pub fn new(mode: Mode, gradient: GradientRule, digits: DigitSchedule) -> Self {
        VqeConfig {
            mode,
            gradient,
            digits,
            fd_step: 0.1,
            stop_tol: 1e-14,
            max_iterations: 1000,
            seed: 1,
        }
    }
}

#[derive(Copy, Clone, Debug)]
pub struct TraceRow {
    pub step: usize,
    pub energy: f64,
    pub energy_error: f64,
    pub d: u32,
    pub t_count_step: usize,
    pub t_count_cumulative: usize,
    pub grad_norm: f64,
    pub d_incremented: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum VqeStatus {
    Converged,
    MaxIterations,
    Stalled,
}

#[derive(Clone, Debug)]
pub struct VqeTrace {
    pub rows: Vec<TraceRow>,
    pub final_params: Vec<f64>,
    pub final_energy: f64,
    pub exact_energy: f64,
    pub status: VqeStatus,
}

impl VqeTrace {
    pub fn final_error(&self) -> f64 {
        (self.final_energy - self.exact_energy).abs()
    }
}

/// Energy and gradient evaluation for one model instance. Keeps a running
/// total of T gates consumed across every circuit it executes.
pub struct Evaluator<'a> {
    pub h: &'a PauliSum,
    pub circuit: &'a ParamCircuit,
    pub mode: Mode,
    pub seed: u64,
    pub cache: &'a SynthCache,
    t_cumulative: AtomicUsize,
}

impl<'a> Evaluator<'a> {
    pub fn new(
        h: &'a PauliSum,
        circuit: &'a ParamCircuit,
        mode: Mode,
        seed: u64,
        cache: &'a SynthCache,
    ) -> Self {
        Evaluator { h, circuit, mode, seed, cache, t_cumulative: AtomicUsize::new(0) }
    }

    pub fn t_cumulative(&self) -> usize {
        self.t_cumulative.load(Ordering::Relaxed)
    }

    /// Returns (energy, T-count of the executed circuit).
    pub fn energy(&self, theta: &[f64], d: u32) -> Result<(f64, usize), FtvqeError> {
        match self.mode {
            Mode::Rz => {
                let mut s = StateVector::<f64>::zero_state(self.circuit.n);
                s.apply_param(self.circuit, theta)?;
                Ok((s.expectation(self.h)?, 0))
            }
            Mode::Ft => {
                let tr = transpile(self.circuit, theta, d, self.seed, self.cache)?;
                let tc = tr.circuit.t_count();
                self.t_cumulative.fetch_add(tc, Ordering::Relaxed);
                let mut s = StateVector::<f64>::zero_state(self.circuit.n);
                s.apply_clifford_t(&tr.circuit)?;
                Ok((s.expectation(self.h)?, tc))
            }
        }
    }

    pub fn gradient(
        &self,
        theta: &[f64],
        d: u32,
        rule: GradientRule,
        fd_step: f64,
    ) -> Result<Vec<f64>, FtvqeError> {
        match rule {
            GradientRule::FiniteDiff => self.grad_finite_difference(theta, d, fd_step),
            GradientRule::ParamShift => self.grad_parameter_shift(theta, d),
        }
    }

    /// Central difference [E(theta + s/2) - E(theta - s/2)] / s per
    /// parameter; in the Clifford+T mode every shifted angle is synthesized
    /// on its own.
    pub fn grad_finite_difference(
        &self,
        theta: &[f64],
        d: u32,
        step: f64,
    ) -> Result<Vec<f64>, FtvqeError> {
        (0..theta.len())
            .into_par_iter()
            .map(|p| {
                let mut plus = theta.to_vec();
                plus[p] += step / 2.0;
                let mut minus = theta.to_vec();
                minus[p] -= step / 2.0;
                Ok((self.energy(&plus, d)?.0 - self.energy(&minus, d)?.0) / step)
            })
            .collect()
    }

    /// dE/dtheta_p = sum over gates carrying p of sign * [E(+pi/2 shift) -
    /// E(-pi/2 shift)] / 2, each gate shifted individually in its own frame.
    /// In the Clifford+T mode the shifts are spliced in as exact S words, so
    /// the shifted circuits cost exactly as many T gates as the base one.
    pub fn grad_parameter_shift(&self, theta: &[f64], d: u32) -> Result<Vec<f64>, FtvqeError> {
        let pcount = theta.len();
        match self.mode {
            Mode::Rz => {
                let param_gates: Vec<usize> = self
                    .circuit
                    .gates
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| g.param_id.is_some())
                    .map(|(i, _)| i)
                    .collect();
                let parts: Vec<(usize, f64)> = param_gates
                    .par_iter()
                    .map(|&idx| {
                        let pid = self.circuit.gates[idx].param_id.unwrap();
                        let half = std::f64::consts::FRAC_PI_2;
                        let ep = self.shifted_energy_rz(theta, idx, half)?;
                        let em = self.shifted_energy_rz(theta, idx, -half)?;
                        Ok((pid, 0.5 * (ep - em)))
                    })
                    .collect::<Result<_, FtvqeError>>()?;
                let mut grad = vec![0.0; pcount];
                for (pid, v) in parts {
                    grad[pid] += v;
                }
                Ok(grad)
            }
            Mode::Ft => {
                let tr = transpile(self.circuit, theta, d, self.seed, self.cache)?;
                let base_t = tr.circuit.t_count();
                let shift_sites: Vec<usize> = tr
                    .sites
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.param_id.is_some())
                    .map(|(i, _)| i)
                    .collect();
                let parts: Vec<(usize, f64)> = shift_sites
                    .par_iter()
                    .map(|&si| {
                        let site = tr.sites[si];
                        let cp = tr.with_quarter_shift(si, 1);
                        let cm = tr.with_quarter_shift(si, -1);
                        // The quarter shifts are pure Clifford splices.
                        assert_eq!(cp.t_count(), base_t);
                        assert_eq!(cm.t_count(), base_t);
                        self.t_cumulative.fetch_add(2 * base_t, Ordering::Relaxed);
                        let mut sp = StateVector::<f64>::zero_state(self.circuit.n);
                        sp.apply_clifford_t(&cp)?;
                        let mut sm = StateVector::<f64>::zero_state(self.circuit.n);
                        sm.apply_clifford_t(&cm)?;
                        let ep = sp.expectation(self.h)?;
                        let em = sm.expectation(self.h)?;
                        Ok((site.param_id.unwrap(), site.sign * 0.5 * (ep - em)))
                    })
                    .collect::<Result<_, FtvqeError>>()?;
                let mut grad = vec![0.0; pcount];
                for (pid, v) in parts {
                    grad[pid] += v;
                }
                Ok(grad)
            }
        }
    }

    fn shifted_energy_rz(&self, theta: &[f64], idx: usize, da: f64) -> Result<f64, FtvqeError> {
        let mut s = StateVector::<f64>::zero_state(self.circuit.n);
        s.apply_param_shifted(self.circuit, theta, Some((idx, da)))?;
        s.expectation(self.h)
    }
}

/// Initial-state preparation followed by the ansatz, as one circuit.
pub fn full_circuit(spec: &ModelSpec) -> Result<ParamCircuit, FtvqeError> {
    let prep = preparation_circuit(spec)?;
    let ansatz = build_ansatz(spec)?;
    let gates: Vec<ParamGate> =
        prep.gates.into_iter().chain(ansatz.gates.into_iter()).collect();
    ParamCircuit::new(spec.n, gates, ansatz.param_count)
}

pub fn initial_params(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect()
}

const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 40;
const MAX_STALLS: usize = 3;

/// Backtracking line search with the sufficient-decrease condition.
/// Returns (step, energy, circuit T-count) at the accepted point.
fn line_search(
    ev: &Evaluator,
    theta: &[f64],
    dir: &[f64],
    e0: f64,
    g_dot_dir: f64,
    d: u32,
) -> Result<Option<(f64, f64, usize)>, FtvqeError> {
    let mut t = 1.0;
    for _ in 0..MAX_BACKTRACKS {
        let trial: Vec<f64> =
            theta.iter().zip(dir).map(|(x, p)| x + t * p).collect();
        let (e, tc) = ev.energy(&trial, d)?;
        if e <= e0 + ARMIJO_C1 * t * g_dot_dir {
            return Ok(Some((t, e, tc)));
        }
        t *= 0.5;
    }
    Ok(None)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Inverse-Hessian BFGS update H <- (I - r s y^T) H (I - r y s^T) + r s s^T,
/// applied only when the curvature s.y is safely positive.
fn bfgs_update(hinv: &mut Vec<Vec<f64>>, s: &[f64], y: &[f64]) {
    let sy = dot(s, y);
    if sy <= 1e-12 * norm(s) * norm(y) {
        return;
    }
    let rho = 1.0 / sy;
    let p = s.len();
    let hy: Vec<f64> = (0..p).map(|i| dot(&hinv[i], y)).collect();
    let yhy = dot(y, &hy);
    // Expanded form: H' = H - r (s (Hy)^T + (Hy) s^T) + r^2 (y.Hy) s s^T
    //                 + r s s^T.
    for i in 0..p {
        for j in 0..p {
            hinv[i][j] += -rho * (s[i] * hy[j] + hy[i] * s[j])
                + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}

/// BFGS minimization of the model energy. Initial parameters are uniform on
/// [0, 2pi) from the seed. Convergence means two consecutive accepted
/// energies within `stop_tol`; under an adaptive schedule that event raises
/// the digit accuracy instead, until the ceiling is reached. The
/// inverse-Hessian estimate is kept across accuracy bumps (the objective
/// only moves by the synthesis error). Line-search failure falls back to a
/// steepest-descent step; repeated failure stalls the run.
pub fn minimize(spec: &ModelSpec, cfg: &VqeConfig, cache: &SynthCache) -> Result<VqeTrace, FtvqeError> {
    let h = build_hamiltonian(spec)?;
    let circuit = full_circuit(spec)?;
    let e_exact = exact_ground_energy(spec)?;
    let ev = Evaluator::new(&h, &circuit, cfg.mode, cfg.seed, cache);

    let mut theta = initial_params(circuit.param_count, cfg.seed);
    let mut d = cfg.digits.initial();
    let (mut e, mut t_step) = ev.energy(&theta, d)?;
    let mut g = ev.gradient(&theta, d, cfg.gradient, cfg.fd_step)?;

    let p = theta.len();
    let mut hinv: Vec<Vec<f64>> =
        (0..p).map(|i| (0..p).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();

    let mut rows: Vec<TraceRow> = Vec::new();
    let mut status = VqeStatus::MaxIterations;
    let mut stalls = 0usize;
    let mut d_incremented = false;

    for step in 0..cfg.max_iterations {
        rows.push(TraceRow {
            step,
            energy: e,
            energy_error: (e - e_exact).abs(),
            d,
            t_count_step: t_step,
            t_count_cumulative: ev.t_cumulative(),
            grad_norm: norm(&g),
            d_incremented,
        });
        d_incremented = false;

        let mut dir: Vec<f64> = (0..p).map(|i| -dot(&hinv[i], &g)).collect();
        let mut gd = dot(&g, &dir);
        if !(gd < 0.0) {
            dir = g.iter().map(|x| -x).collect();
            gd = dot(&g, &dir);
        }
        let mut accepted = line_search(&ev, &theta, &dir, e, gd, d)?;
        if accepted.is_none() && dir.iter().zip(&g).any(|(a, b)| a != &-b) {
            dir = g.iter().map(|x| -x).collect();
            gd = dot(&g, &dir);
            accepted = line_search(&ev, &theta, &dir, e, gd, d)?;
        }

        let (t, e_new, tc_new) = match accepted {
            Some(pair) => pair,
            None => {
                // No descent at this accuracy. Treat it like hitting the
                // stop tolerance: refine if we can, otherwise stall out.
                if let Some(next) = cfg.digits.next(d) {
                    d = next;
                    d_incremented = true;
                    let en = ev.energy(&theta, d)?;
                    e = en.0;
                    t_step = en.1;
                    g = ev.gradient(&theta, d, cfg.gradient, cfg.fd_step)?;
                    stalls = 0;
                    continue;
                }
                stalls += 1;
                if stalls >= MAX_STALLS {
                    status = VqeStatus::Stalled;
                    break;
                }
                continue;
            }
        };
        stalls = 0;

        let theta_new: Vec<f64> =
            theta.iter().zip(&dir).map(|(x, pd)| x + t * pd).collect();

        if (e - e_new).abs() < cfg.stop_tol {
            theta = theta_new;
            e = e_new;
            if let Some(next) = cfg.digits.next(d) {
                d = next;
                d_incremented = true;
                let en = ev.energy(&theta, d)?;
                e = en.0;
                t_step = en.1;
                g = ev.gradient(&theta, d, cfg.gradient, cfg.fd_step)?;
                continue;
            }
            status = VqeStatus::Converged;
            break;
        }

        let g_new = ev.gradient(&theta_new, d, cfg.gradient, cfg.fd_step)?;
        let s: Vec<f64> = theta_new.iter().zip(&theta).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        bfgs_update(&mut hinv, &s, &y);
        theta = theta_new;
        e = e_new;
        g = g_new;
        t_step = tc_new;
    }

    Ok(VqeTrace {
        rows,
        final_params: theta,
        final_energy: e,
        exact_energy: e_exact,
        status,
    })
}
