//! Parameterized circuits, their Clifford+T form after rotation synthesis,
//! and the T-count / T-depth cost metrics.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use rssynth::{synthesize, Gate, SynthCache, SynthesisRequest};

use crate::FtvqeError;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GateKind {
    Rz,
    Rx,
    Ry,
    Zz,
    Xx,
    Yy,
    H,
    S,
    X,
    Cnot,
    PhaseW,
}

impl GateKind {
    pub fn is_rotation(self) -> bool {
        matches!(
            self,
            GateKind::Rz | GateKind::Rx | GateKind::Ry | GateKind::Zz | GateKind::Xx | GateKind::Yy
        )
    }

    pub fn is_two_qubit(self) -> bool {
        matches!(self, GateKind::Zz | GateKind::Xx | GateKind::Yy | GateKind::Cnot)
    }

    fn name(self) -> &'static str {
        match self {
            GateKind::Rz => "RZ",
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Zz => "ZZ",
            GateKind::Xx => "XX",
            GateKind::Yy => "YY",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::X => "X",
            GateKind::Cnot => "CNOT",
            GateKind::PhaseW => "PHASE_W",
        }
    }
}

impl FromStr for GateKind {
    type Err = FtvqeError;
    fn from_str(s: &str) -> Result<Self, FtvqeError> {
        Ok(match s {
            "RZ" => GateKind::Rz,
            "RX" => GateKind::Rx,
            "RY" => GateKind::Ry,
            "ZZ" => GateKind::Zz,
            "XX" => GateKind::Xx,
            "YY" => GateKind::Yy,
            "H" => GateKind::H,
            "S" => GateKind::S,
            "X" => GateKind::X,
            "CNOT" => GateKind::Cnot,
            "PHASE_W" => GateKind::PhaseW,
            other => return Err(FtvqeError::Parse(format!("unknown gate kind {other:?}"))),
        })
    }
}

/// One gate of a parameterized circuit. Rotations carry exactly one of
/// `param_id` / `fixed_angle`; Clifford kinds carry neither.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ParamGate {
    pub kind: GateKind,
    pub q0: usize,
    pub q1: Option<usize>,
    pub param_id: Option<usize>,
    pub fixed_angle: Option<f64>,
}

impl ParamGate {
    pub fn clifford(kind: GateKind, q0: usize) -> Self {
        ParamGate { kind, q0, q1: None, param_id: None, fixed_angle: None }
    }

    pub fn cnot(a: usize, b: usize) -> Self {
        ParamGate { kind: GateKind::Cnot, q0: a, q1: Some(b), param_id: None, fixed_angle: None }
    }

    pub fn rot1(kind: GateKind, q0: usize, param_id: usize) -> Self {
        ParamGate { kind, q0, q1: None, param_id: Some(param_id), fixed_angle: None }
    }

    pub fn rot2(kind: GateKind, a: usize, b: usize, param_id: usize) -> Self {
        ParamGate { kind, q0: a, q1: Some(b), param_id: Some(param_id), fixed_angle: None }
    }

    pub fn fixed1(kind: GateKind, q0: usize, angle: f64) -> Self {
        ParamGate { kind, q0, q1: None, param_id: None, fixed_angle: Some(angle) }
    }

    pub fn fixed2(kind: GateKind, a: usize, b: usize, angle: f64) -> Self {
        ParamGate { kind, q0: a, q1: Some(b), param_id: None, fixed_angle: Some(angle) }
    }

    /// Resolved rotation angle under the given parameter vector.
    pub fn angle(&self, theta: &[f64]) -> f64 {
        match (self.param_id, self.fixed_angle) {
            (Some(p), None) => theta[p],
            (None, Some(a)) => a,
            _ => panic!("not a resolved rotation: {:?}", self),
        }
    }
}

impl fmt::Display for ParamGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.name(), self.q0)?;
        if let Some(q1) = self.q1 {
            write!(f, " {q1}")?;
        }
        if let Some(p) = self.param_id {
            write!(f, " @{p}")?;
        }
        if let Some(a) = self.fixed_angle {
            write!(f, " ={a}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamCircuit {
    pub n: usize,
    pub gates: Vec<ParamGate>,
    pub param_count: usize,
}

impl ParamCircuit {
    /// Validates index ranges, the one-of param/angle rule, and that every
    /// parameter id is used at least once.
    pub fn new(n: usize, gates: Vec<ParamGate>, param_count: usize) -> Result<Self, FtvqeError> {
        let mut used = vec![false; param_count];
        for g in &gates {
            if g.q0 >= n || g.q1.is_some_and(|q| q >= n) {
                return Err(FtvqeError::BadCircuit(format!("qubit index out of range in {g}")));
            }
            if g.kind.is_two_qubit() != g.q1.is_some() {
                return Err(FtvqeError::BadCircuit(format!("wrong arity in {g}")));
            }
            if g.q1 == Some(g.q0) {
                return Err(FtvqeError::BadCircuit(format!("coincident qubits in {g}")));
            }
            if g.kind.is_rotation() {
                if g.param_id.is_some() == g.fixed_angle.is_some() {
                    return Err(FtvqeError::BadCircuit(format!(
                        "rotation needs exactly one of @param / =angle: {g}"
                    )));
                }
                if let Some(p) = g.param_id {
                    if p >= param_count {
                        return Err(FtvqeError::BadCircuit(format!("param id out of range in {g}")));
                    }
                    used[p] = true;
                }
            } else if g.param_id.is_some() || g.fixed_angle.is_some() {
                return Err(FtvqeError::BadCircuit(format!("clifford gate carries a parameter: {g}")));
            }
        }
        if let Some(p) = used.iter().position(|u| !u) {
            return Err(FtvqeError::BadCircuit(format!("parameter {p} is never used")));
        }
        Ok(ParamCircuit { n, gates, param_count })
    }

    pub fn rotation_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.is_rotation()).count()
    }

    /// One gate per line, "KIND q0 [q1] [@param | =angle]".
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits={} params={}\n", self.n, self.param_count);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, FtvqeError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| FtvqeError::Parse("empty circuit".into()))?;
        let (n, p) = parse_header(header, "params")?;
        let mut gates = Vec::new();
        for line in lines {
            gates.push(parse_gate_line(line)?);
        }
        ParamCircuit::new(n, gates, p)
    }
}

fn parse_header(line: &str, second: &str) -> Result<(usize, usize), FtvqeError> {
    let mut n = None;
    let mut v = None;
    for tok in line.split_whitespace() {
        if let Some(x) = tok.strip_prefix("qubits=") {
            n = x.parse().ok();
        } else if let Some(x) = tok.strip_prefix(&format!("{second}=")) {
            v = x.parse().ok();
        } else {
            return Err(FtvqeError::Parse(format!("bad header token {tok:?}")));
        }
    }
    match (n, v) {
        (Some(n), Some(v)) => Ok((n, v)),
        _ => Err(FtvqeError::Parse(format!("bad header {line:?}"))),
    }
}

fn parse_gate_line(line: &str) -> Result<ParamGate, FtvqeError> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.is_empty() {
        return Err(FtvqeError::Parse("empty gate line".into()));
    }
    let kind: GateKind = toks[0].parse()?;
    let mut qubits = Vec::new();
    let mut param_id = None;
    let mut fixed_angle = None;
    for tok in &toks[1..] {
        if let Some(p) = tok.strip_prefix('@') {
            param_id =
                Some(p.parse().map_err(|_| FtvqeError::Parse(format!("bad param {tok:?}")))?);
        } else if let Some(a) = tok.strip_prefix('=') {
            fixed_angle =
                Some(a.parse().map_err(|_| FtvqeError::Parse(format!("bad angle {tok:?}")))?);
        } else {
            qubits
                .push(tok.parse().map_err(|_| FtvqeError::Parse(format!("bad qubit {tok:?}")))?);
        }
    }
    let (q0, q1) = match qubits.as_slice() {
        [a] => (*a, None),
        [a, b] => (*a, Some(*b)),
        _ => return Err(FtvqeError::Parse(format!("bad qubit list in {line:?}"))),
    };
    Ok(ParamGate { kind, q0, q1, param_id, fixed_angle })
}

/// Clifford+T gate acting on concrete qubits.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CtGate {
    H(usize),
    S(usize),
    T(usize),
    X(usize),
    Cnot(usize, usize),
}

impl CtGate {
    fn name_and_qubits(self) -> (&'static str, usize, Option<usize>) {
        match self {
            CtGate::H(q) => ("H", q, None),
            CtGate::S(q) => ("S", q, None),
            CtGate::T(q) => ("T", q, None),
            CtGate::X(q) => ("X", q, None),
            CtGate::Cnot(a, b) => ("CNOT", a, Some(b)),
        }
    }
}

/// A fully synthesized circuit over {H, S, T, X, CNOT} with a global phase
/// exponent w in 0..8 (units of e^(i pi/4)).
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordTCircuit {
    pub n: usize,
    pub gates: Vec<CtGate>,
    pub phase_w: u8,
}

impl CliffordTCircuit {
    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, CtGate::T(_))).count()
    }

    /// As-soon-as-possible T-layer makespan: T costs one time unit, every
    /// Clifford costs zero, and CNOT synchronizes its two qubit clocks.
    pub fn t_depth(&self) -> usize {
        let mut clock = vec![0usize; self.n];
        for g in &self.gates {
            match *g {
                CtGate::T(q) => clock[q] += 1,
                CtGate::Cnot(a, b) => {
                    let m = clock[a].max(clock[b]);
                    clock[a] = m;
                    clock[b] = m;
                }
                _ => {}
            }
        }
        clock.into_iter().max().unwrap_or(0)
    }

    /// Serializes with a "phase_w=<0..7>" header line.
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits={} phase_w={}\n", self.n, self.phase_w);
        for g in &self.gates {
            let (name, q0, q1) = g.name_and_qubits();
            s.push_str(name);
            s.push(' ');
            s.push_str(&q0.to_string());
            if let Some(q1) = q1 {
                s.push(' ');
                s.push_str(&q1.to_string());
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, FtvqeError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| FtvqeError::Parse("empty circuit".into()))?;
        let (n, w) = parse_header(header, "phase_w")?;
        let mut gates = Vec::new();
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let parse_q = |t: &str| {
                t.parse::<usize>().map_err(|_| FtvqeError::Parse(format!("bad qubit {t:?}")))
            };
            let g = match toks.as_slice() {
                ["H", q] => CtGate::H(parse_q(q)?),
                ["S", q] => CtGate::S(parse_q(q)?),
                ["T", q] => CtGate::T(parse_q(q)?),
                ["X", q] => CtGate::X(parse_q(q)?),
                ["CNOT", a, b] => CtGate::Cnot(parse_q(a)?, parse_q(b)?),
                _ => return Err(FtvqeError::Parse(format!("bad gate line {line:?}"))),
            };
            if let CtGate::Cnot(a, b) = g {
                if a >= n || b >= n || a == b {
                    return Err(FtvqeError::Parse(format!("bad qubits in {line:?}")));
                }
            }
            gates.push(g);
        }
        Ok(CliffordTCircuit { n, gates, phase_w: (w as u8) % 8 })
    }
}

/// Lowering of a two-qubit rotation with a resolved angle. The middle
/// rotation of ZZ(theta) is R_z(-theta): conjugating R_z on the target by
/// CNOTs copies the diagonal phase pattern of e^(i theta/2 Z tensor Z).
pub fn lower_two_qubit(g: &ParamGate, theta: &[f64]) -> Result<Vec<ParamGate>, FtvqeError> {
    if !matches!(g.kind, GateKind::Zz | GateKind::Xx | GateKind::Yy) {
        return Err(FtvqeError::BadCircuit(format!("lower_two_qubit on {}", g.kind.name())));
    }
    let angle = g.angle(theta);
    let (a, b) = (g.q0, g.q1.expect("two-qubit rotation"));
    let zz = |out: &mut Vec<ParamGate>| {
        out.push(ParamGate::cnot(a, b));
        out.push(ParamGate::fixed1(GateKind::Rz, b, -angle));
        out.push(ParamGate::cnot(a, b));
    };
    let mut out = Vec::new();
    match g.kind {
        GateKind::Zz => zz(&mut out),
        GateKind::Xx => {
            out.push(ParamGate::clifford(GateKind::H, a));
            out.push(ParamGate::clifford(GateKind::H, b));
            zz(&mut out);
            out.push(ParamGate::clifford(GateKind::H, a));
            out.push(ParamGate::clifford(GateKind::H, b));
        }
        GateKind::Yy => {
            // Y = (SH) Z (SH)^dagger, so conjugate each qubit by S^dagger
            // then H going in, and H then S coming out; S^dagger = SSS.
            for q in [a, b] {
                out.push(ParamGate::clifford(GateKind::S, q));
                out.push(ParamGate::clifford(GateKind::S, q));
                out.push(ParamGate::clifford(GateKind::S, q));
                out.push(ParamGate::clifford(GateKind::H, q));
            }
            zz(&mut out);
            for q in [a, b] {
                out.push(ParamGate::clifford(GateKind::H, q));
                out.push(ParamGate::clifford(GateKind::S, q));
            }
        }
        other => {
            return Err(FtvqeError::BadCircuit(format!("lower_two_qubit on {}", other.name())))
        }
    }
    Ok(out)
}

/// Where one synthesized rotation landed inside a CliffordTCircuit.
/// `insert_at` is the gate index just past the z-rotation word, the legal
/// splice point for exact parameter-shift words. `sign` is d(alpha)/d(theta)
/// for the word's internal R_z angle alpha: -1 for lowered two-qubit
/// rotations, +1 otherwise.
#[derive(Copy, Clone, Debug)]
pub struct RotationSite {
    pub qubit: usize,
    pub insert_at: usize,
    pub param_id: Option<usize>,
    pub sign: f64,
    pub t_count: usize,
    pub achieved_error: f64,
}

#[derive(Clone, Debug)]
pub struct Transpiled {
    pub circuit: CliffordTCircuit,
    pub sites: Vec<RotationSite>,
}

impl Transpiled {
    pub fn rotation_count(&self) -> usize {
        self.sites.len()
    }

    pub fn max_rotation_error(&self) -> f64 {
        self.sites.iter().map(|s| s.achieved_error).fold(0.0, f64::max)
    }

    /// Copy with the site's internal R_z angle shifted by quarter*pi/2,
    /// realized exactly by S and phase gates: R_z(pi/2) = w^7 S and
    /// R_z(-pi/2) = w S^3. Adds zero T gates.
    pub fn with_quarter_shift(&self, site: usize, quarter: i8) -> CliffordTCircuit {
        let s = &self.sites[site];
        let mut ct = self.circuit.clone();
        let q = s.qubit;
        match quarter {
            1 => {
                ct.gates.insert(s.insert_at, CtGate::S(q));
                ct.phase_w = (ct.phase_w + 7) % 8;
            }
            -1 => {
                for _ in 0..3 {
                    ct.gates.insert(s.insert_at, CtGate::S(q));
                }
                ct.phase_w = (ct.phase_w + 1) % 8;
            }
            other => panic!("unsupported shift {other}"),
        }
        ct
    }
}

fn rotation_seed(seed: u64, angle: f64, digits: u32) -> u64 {
    let mut h = DefaultHasher::new();
    (seed, angle.to_bits(), digits).hash(&mut h);
    h.finish()
}

fn synth_word(
    angle: f64,
    digits: u32,
    seed: u64,
    cache: &SynthCache,
) -> Result<(rssynth::GateWord, f64, usize), FtvqeError> {
    if let Some(e) = cache.get(angle, digits) {
        return Ok((e.word, e.achieved_error, e.t_count));
    }
    let res = synthesize(
        SynthesisRequest { theta: angle, digits },
        rotation_seed(seed, angle, digits),
    )?;
    cache.insert(
        angle,
        digits,
        rssynth::CacheEntry {
            word: res.word.clone(),
            achieved_error: res.achieved_error,
            t_count: res.t_count,
        },
    );
    Ok((res.word, res.achieved_error, res.t_count))
}

/// Pushes a z-rotation word as gates on one qubit; W letters fold into the
/// global phase. Returns the gate index just past the word.
fn push_word(ct: &mut CliffordTCircuit, q: usize, word: &rssynth::GateWord) -> usize {
    for g in &word.0 {
        match g {
            Gate::H => ct.gates.push(CtGate::H(q)),
            Gate::S => ct.gates.push(CtGate::S(q)),
            Gate::T => ct.gates.push(CtGate::T(q)),
            Gate::X => ct.gates.push(CtGate::X(q)),
            Gate::W => ct.phase_w = (ct.phase_w + 1) % 8,
        }
    }
    ct.gates.len()
}

/// Replaces every rotation by a Clifford+T word at digit accuracy d.
/// Deterministic given the cache contents and `seed`; repeated angles reuse
/// cached words within and across calls.
pub fn transpile(
    c: &ParamCircuit,
    theta: &[f64],
    digits: u32,
    seed: u64,
    cache: &SynthCache,
) -> Result<Transpiled, FtvqeError> {
    if theta.len() != c.param_count {
        return Err(FtvqeError::BadCircuit(format!(
            "expected {} parameters, got {}",
            c.param_count,
            theta.len()
        )));
    }
    let mut ct = CliffordTCircuit { n: c.n, gates: Vec::new(), phase_w: 0 };
    let mut sites = Vec::new();
    let push_rz = |ct: &mut CliffordTCircuit,
                       q: usize,
                       angle: f64,
                       param_id: Option<usize>,
                       sign: f64,
                       sites: &mut Vec<RotationSite>|
     -> Result<(), FtvqeError> {
        let (word, err, tc) = synth_word(angle, digits, seed, cache)?;
        let insert_at = push_word(ct, q, &word);
        sites.push(RotationSite {
            qubit: q,
            insert_at,
            param_id,
            sign,
            t_count: tc,
            achieved_error: err,
        });
        Ok(())
    };
    for g in &c.gates {
        match g.kind {
            GateKind::H => ct.gates.push(CtGate::H(g.q0)),
            GateKind::S => ct.gates.push(CtGate::S(g.q0)),
            GateKind::X => ct.gates.push(CtGate::X(g.q0)),
            GateKind::Cnot => ct.gates.push(CtGate::Cnot(g.q0, g.q1.unwrap())),
            GateKind::PhaseW => ct.phase_w = (ct.phase_w + 1) % 8,
            GateKind::Rz => {
                push_rz(&mut ct, g.q0, g.angle(theta), g.param_id, 1.0, &mut sites)?
            }
            GateKind::Rx => {
                ct.gates.push(CtGate::H(g.q0));
                push_rz(&mut ct, g.q0, g.angle(theta), g.param_id, 1.0, &mut sites)?;
                ct.gates.push(CtGate::H(g.q0));
            }
            GateKind::Ry => {
                // R_y = S H R_z H S^dagger with S^dagger = SSS.
                for _ in 0..3 {
                    ct.gates.push(CtGate::S(g.q0));
                }
                ct.gates.push(CtGate::H(g.q0));
                push_rz(&mut ct, g.q0, g.angle(theta), g.param_id, 1.0, &mut sites)?;
                ct.gates.push(CtGate::H(g.q0));
                ct.gates.push(CtGate::S(g.q0));
            }
            GateKind::Zz | GateKind::Xx | GateKind::Yy => {
                let (a, b) = (g.q0, g.q1.unwrap());
                let wrap: &[CtGate] = match g.kind {
                    GateKind::Xx => &[CtGate::H(a), CtGate::H(b)],
                    GateKind::Yy => &[
                        CtGate::S(a),
                        CtGate::S(a),
                        CtGate::S(a),
                        CtGate::H(a),
                        CtGate::S(b),
                        CtGate::S(b),
                        CtGate::S(b),
                        CtGate::H(b),
                    ],
                    _ => &[],
                };
                ct.gates.extend_from_slice(wrap);
                ct.gates.push(CtGate::Cnot(a, b));
                push_rz(&mut ct, b, -g.angle(theta), g.param_id, -1.0, &mut sites)?;
                ct.gates.push(CtGate::Cnot(a, b));
                let unwrap: &[CtGate] = match g.kind {
                    GateKind::Xx => &[CtGate::H(a), CtGate::H(b)],
                    GateKind::Yy => &[CtGate::H(a), CtGate::S(a), CtGate::H(b), CtGate::S(b)],
                    _ => &[],
                };
                ct.gates.extend_from_slice(unwrap);
            }
        }
    }
    Ok(Transpiled { circuit: ct, sites })
}
