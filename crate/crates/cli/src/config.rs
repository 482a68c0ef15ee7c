//! Flat dotted-key run configuration. Every key has a default; a config
//! file overrides defaults and command-line flags override the file.
//! Unknown keys are rejected so typos cannot silently fall back.

use std::fmt::Write as _;
use std::path::Path;

use ftvqe::{DigitSchedule, GradientRule, Mode, ModelKind, ModelSpec, VqeConfig};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub model_name: String,
    pub model_sites: usize,
    pub model_coupling: f64,
    pub model_layers: usize,
    pub vqe_mode: String,
    pub vqe_gradient: String,
    pub vqe_digits: String,
    pub vqe_digits_start: u32,
    pub vqe_digits_max: u32,
    pub vqe_fd_step: f64,
    pub vqe_stop_tol: f64,
    pub vqe_max_iterations: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model_name: "tfim".into(),
            model_sites: 4,
            model_coupling: 1.0,
            model_layers: 2,
            vqe_mode: "ft".into(),
            vqe_gradient: "param-shift".into(),
            vqe_digits: "adaptive".into(),
            vqe_digits_start: 3,
            vqe_digits_max: 8,
            vqe_fd_step: 0.1,
            vqe_stop_tol: 1e-14,
            vqe_max_iterations: 1000,
        }
    }
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let bad = |what: &str| format!("bad value {value:?} for {what}");
        match key {
            "model.name" => match value {
                "tfim" | "xxz" => self.model_name = value.into(),
                _ => return Err(bad("model.name (tfim|xxz)")),
            },
            "model.sites" => self.model_sites = value.parse().map_err(|_| bad(key))?,
            "model.coupling" => self.model_coupling = value.parse().map_err(|_| bad(key))?,
            "model.layers" => self.model_layers = value.parse().map_err(|_| bad(key))?,
            "vqe.mode" => match value {
                "rz" | "ft" => self.vqe_mode = value.into(),
                _ => return Err(bad("vqe.mode (rz|ft)")),
            },
            "vqe.gradient" => match value {
                "param-shift" | "finite-diff" => self.vqe_gradient = value.into(),
                _ => return Err(bad("vqe.gradient (param-shift|finite-diff)")),
            },
            "vqe.digits" => {
                if value != "adaptive" && value.parse::<u32>().is_err() {
                    return Err(bad("vqe.digits (integer|adaptive)"));
                }
                self.vqe_digits = value.into();
            }
            "vqe.digits_start" => self.vqe_digits_start = value.parse().map_err(|_| bad(key))?,
            "vqe.digits_max" => self.vqe_digits_max = value.parse().map_err(|_| bad(key))?,
            "vqe.fd_step" => self.vqe_fd_step = value.parse().map_err(|_| bad(key))?,
            "vqe.stop_tol" => self.vqe_stop_tol = value.parse().map_err(|_| bad(key))?,
            "vqe.max_iterations" => {
                self.vqe_max_iterations = value.parse().map_err(|_| bad(key))?
            }
            other => return Err(format!("unknown configuration key {other:?}")),
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        }
        Ok(cfg)
    }

    pub fn model_spec(&self) -> ModelSpec {
        ModelSpec {
            model: if self.model_name == "xxz" { ModelKind::Xxz } else { ModelKind::Tfim },
            n: self.model_sites,
            coupling: self.model_coupling,
            layers: self.model_layers,
        }
    }

    pub fn vqe_config(&self, seed: u64) -> VqeConfig {
        let digits = if self.vqe_digits == "adaptive" {
            DigitSchedule::Adaptive { start: self.vqe_digits_start, max: self.vqe_digits_max }
        } else {
            DigitSchedule::Fixed(self.vqe_digits.parse().unwrap())
        };
        let mode = if self.vqe_mode == "rz" { Mode::Rz } else { Mode::Ft };
        let gradient = if self.vqe_gradient == "finite-diff" {
            GradientRule::FiniteDiff
        } else {
            GradientRule::ParamShift
        };
        let mut cfg = VqeConfig::new(mode, gradient, digits);
        cfg.fd_step = self.vqe_fd_step;
        cfg.stop_tol = self.vqe_stop_tol;
        cfg.max_iterations = self.vqe_max_iterations;
        cfg.seed = seed;
        cfg
    }

    /// All resolved keys, for the CSV provenance header.
    pub fn provenance(&self, seed: u64, precision: u32, extra: &[(&str, String)]) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# version={}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "# seed={seed}");
        let _ = writeln!(s, "# precision={precision}");
        let _ = writeln!(s, "# model.name={}", self.model_name);
        let _ = writeln!(s, "# model.sites={}", self.model_sites);
        let _ = writeln!(s, "# model.coupling={}", self.model_coupling);
        let _ = writeln!(s, "# model.layers={}", self.model_layers);
        let _ = writeln!(s, "# vqe.mode={}", self.vqe_mode);
        let _ = writeln!(s, "# vqe.gradient={}", self.vqe_gradient);
        let _ = writeln!(s, "# vqe.digits={}", self.vqe_digits);
        let _ = writeln!(s, "# vqe.digits_start={}", self.vqe_digits_start);
        let _ = writeln!(s, "# vqe.digits_max={}", self.vqe_digits_max);
        let _ = writeln!(s, "# vqe.fd_step={}", self.vqe_fd_step);
        let _ = writeln!(s, "# vqe.stop_tol={:e}", self.vqe_stop_tol);
        let _ = writeln!(s, "# vqe.max_iterations={}", self.vqe_max_iterations);
        for (k, v) in extra {
            let _ = writeln!(s, "# {k}={v}");
        }
        s
    }
}
