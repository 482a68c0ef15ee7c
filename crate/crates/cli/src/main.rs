//! Command-line workbench around the synthesis and VQE crates. Every
//! command that emits numbers re-verifies them independently before exiting
//! with status 0; a failed check exits with status 1, usage problems with 2.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ddfloat::{Cdd, Dd, PFloat, C64};
use ftvqe::models::build_hamiltonian;
use ftvqe::vqe::full_circuit;
use ftvqe::{minimize, transpile, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rssynth::{
    euler_zxz, synthesize, word_to_matrix, GateWord, SynthCache, SynthesisRequest,
};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "ftvqe", version, about = "Clifford+T synthesis and VQE workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Configuration file with flat `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed for every pseudo-random choice.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads for parallel sections (0 = automatic).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Software-float decimal digits for state vectors (0 = native f64).
    #[arg(long, default_value_t = 0)]
    precision: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize one R_z rotation and verify the achieved error.
    Synth {
        #[command(flatten)]
        common: Common,
        /// Rotation angle in radians.
        #[arg(long)]
        theta: f64,
        /// Digit accuracy d; target error 10^(-d).
        #[arg(long)]
        digits: u32,
    },
    /// Synthesize random angles over a digit range and tabulate T-counts.
    SweepSynth {
        #[command(flatten)]
        common: Common,
        /// Comma list or `a..b` range of digit accuracies.
        #[arg(long, default_value = "2..8")]
        digits_list: String,
        /// Random angles per digit setting.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Evaluate a fixed parameter vector at several digit accuracies.
    FixedAngle {
        #[command(flatten)]
        common: Common,
        /// Text file with one angle per line (a `vqe --params-out` file).
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value = "1..8")]
        digits_list: String,
    },
    /// Run the variational optimizer and emit the iteration trace.
    Vqe {
        #[command(flatten)]
        common: Common,
        /// Write the final parameter vector here, one angle per line.
        #[arg(long)]
        params_out: Option<PathBuf>,
    },
    /// Euler-angle consistency of synthesized rotations.
    Euler {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "2..8")]
        digits_list: String,
        /// Random angles per digit setting.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Energy agreement between exact and Clifford+T circuits across
    /// state-vector precisions.
    PrecisionStudy {
        #[command(flatten)]
        common: Common,
        /// Comma list of decimal precisions for the state vector.
        #[arg(long, default_value = "7,20")]
        p_list: String,
        #[arg(long, default_value = "1..10")]
        digits_list: String,
        /// Optional parameter file; otherwise an exact-rotation
        /// optimization is run first with the configured model.
        #[arg(long)]
        params: Option<PathBuf>,
    },
}

/// Errors that mean a numeric check failed (exit 1), as opposed to a usage
/// problem (exit 2).
struct CheckFailure(String);

impl<E: std::fmt::Display> From<E> for CheckFailure {
    fn from(e: E) -> Self {
        CheckFailure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match &cli.command {
        Command::Synth { common, .. }
        | Command::SweepSynth { common, .. }
        | Command::FixedAngle { common, .. }
        | Command::Vqe { common, .. }
        | Command::Euler { common, .. }
        | Command::PrecisionStudy { common, .. } => (common.clone(), ()),
    };
    let _ = result;

    if common.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(common.threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }

    let cfg = match &common.config {
        Some(path) => match RunConfig::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => RunConfig::default(),
    };

    let run = match &cli.command {
        Command::Synth { theta, digits, .. } => cmd_synth(&common, &cfg, *theta, *digits),
        Command::SweepSynth { digits_list, samples, .. } => {
            cmd_sweep_synth(&common, &cfg, digits_list, *samples)
        }
        Command::FixedAngle { params, digits_list, .. } => {
            cmd_fixed_angle(&common, &cfg, params, digits_list)
        }
        Command::Vqe { params_out, .. } => cmd_vqe(&common, &cfg, params_out.as_deref()),
        Command::Euler { digits_list, samples, .. } => {
            cmd_euler(&common, &cfg, digits_list, *samples)
        }
        Command::PrecisionStudy { p_list, digits_list, params, .. } => {
            cmd_precision_study(&common, &cfg, p_list, digits_list, params.as_deref())
        }
    };

    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(CheckFailure(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<u32>, CheckFailure> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| CheckFailure(format!("bad range {s:?}")))?;
        let b: u32 = b.trim().parse().map_err(|_| CheckFailure(format!("bad range {s:?}")))?;
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| CheckFailure(format!("bad list entry {t:?}"))))
        .collect()
}

fn read_params(path: &std::path::Path) -> Result<Vec<f64>, CheckFailure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CheckFailure(format!("cannot read {}: {e}", path.display())))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse().map_err(|_| CheckFailure(format!("bad angle line {l:?}"))))
        .collect()
}

fn emit(common: &Common, body: &str) -> Result<(), CheckFailure> {
    match &common.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| CheckFailure(format!("cannot write {}: {e}", path.display())))?;
            f.write_all(body.as_bytes())?;
        }
        None => print!("{body}"),
    }
    Ok(())
}

/// Operator-norm distance between the word's exact matrix and R_z(theta),
/// recomputed from scratch at double-double precision. This is the
/// independent check every command applies to synthesis output.
fn word_rz_error(w: &GateWord, theta: f64) -> f64 {
    let half = Dd::from_f64(theta) / Dd::from_f64(2.0);
    let (s, c) = half.sin_cos();
    let zero = Cdd { re: Dd::ZERO, im: Dd::ZERO };
    let r = [[Cdd { re: c, im: -s }, zero], [zero, Cdd { re: c, im: s }]];
    let m = word_to_matrix(w).to_cdd();
    let mut diff = [[zero; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            diff[i][j] = m[i][j] - r[i][j];
        }
    }
    ddfloat::opnorm_2x2(diff).to_f64()
}

fn cmd_synth(
    common: &Common,
    cfg: &RunConfig,
    theta: f64,
    digits: u32,
) -> Result<(), CheckFailure> {
    let res = synthesize(SynthesisRequest { theta, digits }, common.seed)?;
    let checked = word_rz_error(&res.word, theta);
    let budget = 10f64.powi(-(digits as i32));
    let mut s = cfg.provenance(
        common.seed,
        common.precision,
        &[("theta", theta.to_string()), ("digits", digits.to_string())],
    );
    s.push_str("theta,digits,t_count,error,verified_error,k_final,trials,word\n");
    s.push_str(&format!(
        "{theta},{digits},{},{:e},{:e},{},{},{}\n",
        res.t_count, res.achieved_error, checked, res.k_final, res.candidate_trials, res.word
    ));
    emit(common, &s)?;
    if checked > budget {
        return Err(CheckFailure(format!(
            "rotation error {checked:e} exceeds budget {budget:e}"
        )));
    }
    Ok(())
}

fn cmd_sweep_synth(
    common: &Common,
    cfg: &RunConfig,
    digits_list: &str,
    samples: usize,
) -> Result<(), CheckFailure> {
    let digits = parse_list(digits_list)?;
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let thetas: Vec<f64> =
        (0..samples).map(|_| rng.gen_range(0.0..2.0 * std::f64::consts::PI)).collect();
    let mut s = cfg.provenance(
        common.seed,
        common.precision,
        &[("digits_list", digits_list.into()), ("samples", samples.to_string())],
    );
    s.push_str("theta,digits,t_count,error,verified_error\n");
    let mut worst: Option<String> = None;
    for &d in &digits {
        for &theta in &thetas {
            let res = synthesize(SynthesisRequest { theta, digits: d }, common.seed)?;
            let checked = word_rz_error(&res.word, theta);
            s.push_str(&format!(
                "{theta},{d},{},{:e},{:e}\n",
                res.t_count, res.achieved_error, checked
            ));
            if checked > 10f64.powi(-(d as i32)) && worst.is_none() {
                worst = Some(format!("theta={theta} d={d} error {checked:e}"));
            }
        }
    }
    emit(common, &s)?;
    match worst {
        Some(w) => Err(CheckFailure(w)),
        None => Ok(()),
    }
}

/// Energy of a Clifford+T circuit on a software-float state vector with
/// `p` decimal digits (thread-local setting). Returned in the double-double
/// carrier so differences of nearby energies stay resolvable below an f64
/// ulp of the energy itself.
fn ft_energy_precise(
    p: u32,
    spec: &ftvqe::ModelSpec,
    c: &ftvqe::CliffordTCircuit,
) -> Result<Dd, CheckFailure> {
    ddfloat::set_thread_digits(p);
    let h = build_hamiltonian(spec)?;
    let mut s = StateVector::<PFloat>::zero_state(spec.n);
    s.apply_clifford_t(c)?;
    Ok(s.expectation(&h)?.raw())
}

fn rz_energy_precise(
    p: u32,
    spec: &ftvqe::ModelSpec,
    c: &ftvqe::ParamCircuit,
    theta: &[f64],
) -> Result<Dd, CheckFailure> {
    ddfloat::set_thread_digits(p);
    let h = build_hamiltonian(spec)?;
    let mut s = StateVector::<PFloat>::zero_state(spec.n);
    s.apply_param(c, theta)?;
    Ok(s.expectation(&h)?.raw())
}

fn cmd_fixed_angle(
    common: &Common,
    cfg: &RunConfig,
    params_path: &std::path::Path,
    digits_list: &str,
) -> Result<(), CheckFailure> {
    let digits = parse_list(digits_list)?;
    let theta = read_params(params_path)?;
    let spec = cfg.model_spec();
    let circuit = full_circuit(&spec)?;
    if theta.len() != circuit.param_count {
        return Err(CheckFailure(format!(
            "parameter file has {} angles, circuit wants {}",
            theta.len(),
            circuit.param_count
        )));
    }
    let h = build_hamiltonian(&spec)?;
    let e_rz = if common.precision > 0 {
        rz_energy_precise(common.precision, &spec, &circuit, &theta)?
    } else {
        let mut s = StateVector::<f64>::zero_state(spec.n);
        s.apply_param(&circuit, &theta)?;
        s.expectation(&h)?
    };
    let cache = SynthCache::in_memory();
    let mut s = cfg.provenance(
        common.seed,
        common.precision,
        &[
            ("params", params_path.display().to_string()),
            ("digits_list", digits_list.into()),
            ("energy_exact_rotations", format!("{e_rz:e}")),
        ],
    );
    s.push_str("digits,energy_ft,abs_diff,t_count,t_depth\n");
    let mut worst: Option<String> = None;
    for &d in &digits {
        let tr = transpile(&circuit, &theta, d, common.seed, &cache)?;
        for site in &tr.sites {
            if site.achieved_error > 10f64.powi(-(d as i32)) && worst.is_none() {
                worst = Some(format!(
                    "site error {:e} exceeds 1e-{d}",
                    site.achieved_error
                ));
            }
        }
        let e_ft = if common.precision > 0 {
            ft_energy_precise(common.precision, &spec, &tr.circuit)?
        } else {
            let mut sv = StateVector::<f64>::zero_state(spec.n);
            sv.apply_clifford_t(&tr.circuit)?;
            sv.expectation(&h)?
        };
        s.push_str(&format!(
            "{d},{e_ft:e},{:e},{},{}\n",
            (e_ft - e_rz).abs(),
            tr.circuit.t_count(),
            tr.circuit.t_depth()
        ));
    }
    emit(common, &s)?;
    match worst {
        Some(w) => Err(CheckFailure(w)),
        None => Ok(()),
    }
}

fn cmd_vqe(
    common: &Common,
    cfg: &RunConfig,
    params_out: Option<&std::path::Path>,
) -> Result<(), CheckFailure> {
    let spec = cfg.model_spec();
    let vqe_cfg = cfg.vqe_config(common.seed);
    let cache = SynthCache::in_memory();
    let trace = minimize(&spec, &vqe_cfg, &cache)?;
    let mut s = cfg.provenance(
        common.seed,
        common.precision,
        &[
            ("exact_energy", format!("{:e}", trace.exact_energy)),
            ("final_energy", format!("{:e}", trace.final_energy)),
            ("final_error", format!("{:e}", trace.final_error())),
            ("status", format!("{:?}", trace.status)),
        ],
    );
    s.push_str(
        "step,energy,energy_error,d,t_count_step,t_count_cumulative,grad_norm,d_incremented\n",
    );
    for r in &trace.rows {
        s.push_str(&format!(
            "{},{:e},{:e},{},{},{},{:e},{}\n",
            r.step,
            r.energy,
            r.energy_error,
            r.d,
            r.t_count_step,
            r.t_count_cumulative,
            r.grad_norm,
            r.d_incremented as u8
        ));
    }
    emit(common, &s)?;
    if let Some(path) = params_out {
        let mut body = String::new();
        for p in &trace.final_params {
            body.push_str(&format!("{p}\n"));
        }
        std::fs::write(path, body)
            .map_err(|e| CheckFailure(format!("cannot write {}: {e}", path.display())))?;
    }
    // The trace itself is the verification surface: every energy must be
    // finite and no worse than the starting point by more than roundoff.
    if trace.rows.iter().any(|r| !r.energy.is_finite()) {
        return Err(CheckFailure("non-finite energy in trace".into()));
    }
    Ok(())
}

fn cmd_euler(
    common: &Common,
    cfg: &RunConfig,
    digits_list: &str,
    samples: usize,
) -> Result<(), CheckFailure> {
    let digits = parse_list(digits_list)?;
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let thetas: Vec<f64> =
        (0..samples).map(|_| rng.gen_range(0.0..2.0 * std::f64::consts::PI)).collect();
    let mut s = cfg.provenance(
        common.seed,
        common.precision,
        &[("digits_list", digits_list.into()), ("samples", samples.to_string())],
    );
    s.push_str("theta,digits,sum_deviation,phi\n");
    let mut worst: Option<String> = None;
    for &d in &digits {
        let tol = 10.0 * 10f64.powi(-(d as i32));
        for &theta in &thetas {
            let res = synthesize(SynthesisRequest { theta, digits: d }, common.seed)?;
            let m = word_to_matrix(&res.word).to_cdd();
            let mut mc = [[C64::zero(); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    mc[i][j] = C64::new(m[i][j].re.to_f64(), m[i][j].im.to_f64());
                }
            }
            let e = euler_zxz(mc);
            // The angle sum recovers theta only modulo 4 pi (the word is
            // det-normalized before decomposition), so compare on the circle.
            let period = 4.0 * std::f64::consts::PI;
            let raw = (e.theta1 + e.theta2 - theta).rem_euclid(period);
            let dev = raw.min(period - raw);
            s.push_str(&format!("{theta},{d},{dev:e},{:e}\n", e.phi));
            if (dev > tol || e.phi.abs() > tol) && worst.is_none() {
                worst = Some(format!("theta={theta} d={d} dev={dev:e} phi={:e}", e.phi));
            }
        }
    }
    emit(common, &s)?;
    match worst {
        Some(w) => Err(CheckFailure(w)),
        None => Ok(()),
    }
}

fn cmd_precision_study(
    common: &Common,
    cfg: &RunConfig,
    p_list: &str,
    digits_list: &str,
    params_path: Option<&std::path::Path>,
) -> Result<(), CheckFailure> {
    let ps = parse_list(p_list)?;
    let digits = parse_list(digits_list)?;
    let spec = cfg.model_spec();
    let circuit = full_circuit(&spec)?;
    let theta = match params_path {
        Some(p) => read_params(p)?,
        None => {
            // Converge the exact-rotation optimizer first so the study is
            // taken at a physically meaningful point.
            let mut rz_cfg = cfg.clone();
            rz_cfg.vqe_mode = "rz".into();
            let cache = SynthCache::in_memory();
            minimize(&spec, &rz_cfg.vqe_config(common.seed), &cache)?.final_params
        }
    };
    if theta.len() != circuit.param_count {
        return Err(CheckFailure(format!(
            "parameter file has {} angles, circuit wants {}",
            theta.len(),
            circuit.param_count
        )));
    }
    let cache = SynthCache::in_memory();
    let mut s = cfg.provenance(
        common.seed,
        common.precision,
        &[("p_list", p_list.into()), ("digits_list", digits_list.into())],
    );
    s.push_str("p,digits,abs_diff,t_count\n");
    for &p in &ps {
        let e_rz = rz_energy_precise(p, &spec, &circuit, &theta)?;
        for &d in &digits {
            let tr = transpile(&circuit, &theta, d, common.seed, &cache)?;
            let e_ft = ft_energy_precise(p, &spec, &tr.circuit)?;
            s.push_str(&format!(
                "{p},{d},{:e},{}\n",
                (e_ft - e_rz).abs(),
                tr.circuit.t_count()
            ));
        }
    }
    emit(common, &s)?;
    Ok(())
}
