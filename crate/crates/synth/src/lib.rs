//! Single-qubit Clifford+T synthesis: exact word/matrix conversion, grid
//! candidate enumeration, the norm-equation stage, and the approximation
//! driver producing words within 10^(-d) of R_z(theta).

mod cache;
mod euler;
mod exact;
mod grid;
mod norm_eq;
mod synth;
mod word;

pub use cache::{CacheEntry, SynthCache};
pub use euler::{euler_matrix, euler_zxz, mat_mul, EulerZXZ};
pub use exact::exact_synthesize;
pub use grid::{enumerate_u_candidates, grid_points_1d, Interval};
pub use norm_eq::solve_norm_equation;
pub use synth::{
    synthesize, synthesize_axis, wrap_axis, Axis, SynthesisRequest, SynthesisResult,
    QUARTER_TURN_TOL,
};
pub use word::{word_to_matrix, Gate, GateWord};

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("unknown gate letter '{0}'")]
    BadGateLetter(char),
    #[error("not exactly unitary")]
    NotUnitary,
    #[error("sde reduction made no progress")]
    ReductionStuck,
    #[error("norm equation called on a negative element")]
    NormEqPrecondition,
    #[error("norm equation unsolved within budget")]
    NormEqFailure,
    #[error("synthesis budget exceeded")]
    BudgetExceeded,
}
