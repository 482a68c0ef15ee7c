use std::collections::HashMap;
use std::sync::OnceLock;

use zrings::UnitaryDOmega;

use crate::word::{word_to_matrix, Gate, GateWord};
use crate::SynthError;

/// The 192 single-qubit Clifford-group elements (24 classes times 8 phases)
/// mapped to words over {H, S, X, W}. Built once by breadth-first closure.
fn clifford_table() -> &'static HashMap<UnitaryDOmega, GateWord> {
    static TABLE: OnceLock<HashMap<UnitaryDOmega, GateWord>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let gens = [Gate::H, Gate::S, Gate::X, Gate::W];
        let mut table = HashMap::new();
        table.insert(UnitaryDOmega::identity(), GateWord::empty());
        let mut frontier = vec![UnitaryDOmega::identity()];
        while let Some(m) = frontier.pop() {
            let word = table[&m].clone();
            for g in gens {
                let next = &g.matrix() * &m;
                if !table.contains_key(&next) {
                    let mut w = word.clone();
                    w.push(g);
                    table.insert(next.clone(), w);
                    frontier.push(next);
                }
            }
        }
        assert_eq!(table.len(), 192);
        table
    })
}

fn t_inverse_steps() -> [UnitaryDOmega; 4] {
    let h = Gate::H.matrix();
    let t = Gate::T.matrix();
    let mut out = Vec::with_capacity(4);
    for m in 0..4u8 {
        // H * T^(-m); T^(-m) = T^(8-m) exactly.
        let mut inv = UnitaryDOmega::identity();
        for _ in 0..(8 - m) % 8 {
            inv = &t * &inv;
        }
        out.push(&h * &inv);
    }
    out.try_into().unwrap()
}

fn column_sde(u: &UnitaryDOmega) -> u32 {
    u.e00.sde().max(u.e10.sde())
}

/// Looks up U as Clifford * T^j; returns the word on a hit.
fn clifford_t_lookup(u: &UnitaryDOmega) -> Option<GateWord> {
    let t = Gate::T.matrix();
    let mut t_inv_pow = UnitaryDOmega::identity();
    for j in 0..8u8 {
        let cand = u * &t_inv_pow;
        if let Some(cw) = clifford_table().get(&cand) {
            let mut w = GateWord::t_power(j);
            w.extend(cw);
            return Some(w);
        }
        // Next power of T^(-1) = T^7.
        for _ in 0..7 {
            t_inv_pow = &t * &t_inv_pow;
        }
    }
    None
}

/// Finds a sequence of H*T^(-m) left-multiplications that strictly lowers
/// the first column's sde. Usually a single step works; occasionally the
/// residues force one or two sde-preserving steps first, so this searches
/// breadth-first through the plateau (staying at the current sde) until the
/// drop appears.
fn reduction_sequence(
    cur: &UnitaryDOmega,
    steps: &[UnitaryDOmega; 4],
) -> Option<(Vec<u8>, UnitaryDOmega)> {
    let sde = column_sde(cur);
    let mut visited = std::collections::HashSet::new();
    visited.insert(cur.clone());
    let mut queue = std::collections::VecDeque::new();
    queue.push_back((Vec::new(), cur.clone()));
    while let Some((ms, mat)) = queue.pop_front() {
        for (m, step) in steps.iter().enumerate() {
            let next = step * &mat;
            let next_sde = column_sde(&next);
            let mut ms2 = ms.clone();
            ms2.push(m as u8);
            if next_sde < sde {
                return Some((ms2, next));
            }
            if next_sde == sde && visited.len() < 4096 && visited.insert(next.clone()) {
                queue.push_back((ms2, next));
            }
        }
    }
    None
}

/// Converts an exactly-unitary matrix over D[omega] back into a gate word.
/// The first column's sde drops each round; the residual is resolved
/// through the Clifford * T^j table.
pub fn exact_synthesize(u: &UnitaryDOmega) -> Result<GateWord, SynthError> {
    if !u.is_unitary() {
        return Err(SynthError::NotUnitary);
    }
    let steps = t_inverse_steps();
    let mut cur = u.clone();
    let mut ms: Vec<u8> = Vec::new();
    let residual_word = loop {
        if cur.sde() <= 3 {
            if let Some(w) = clifford_t_lookup(&cur) {
                break w;
            }
        }
        let (seq, next) = reduction_sequence(&cur, &steps).ok_or(SynthError::ReductionStuck)?;
        ms.extend(seq);
        cur = next;
    };
    let mut word = residual_word;
    for &m in ms.iter().rev() {
        word.push(Gate::H);
        word.extend(&GateWord::t_power(m));
    }
    debug_assert_eq!(&word_to_matrix(&word), u);
    Ok(word)
}
