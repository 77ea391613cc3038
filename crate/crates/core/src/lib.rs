//! Qudit Bell operators built from Gross's discrete Wigner function.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: arithmetic in `Z_d` and the number-theoretic constants
//!   (Legendre symbol, quadratic Gauss-sum phase, rational powers of `ω`).
//! * [`operators`]: dense operators on `(C^d)^{⊗n}`: Heisenberg-Weyl
//!   displacements, unitary cube operators, rational-phase diagonals,
//!   stabilizer and rotated Bell states.
//! * [`phase_space`]: characteristic and Wigner functions, negativity volume,
//!   closed-form Wigner tables of cube-rotated Bell states and character scans.
//! * [`bell`]: Bell operator families and their quantum expectation values.
//! * [`bounds`]: non-contextual bounds, exact local-hidden-variable bounds and
//!   the simulated-annealing solver for larger dimensions.
//! * [`table`]: assembly of the extremal-value table reported by the CLI.

pub mod bell;
pub mod bounds;
mod error;
pub mod field;
pub mod operators;
pub mod phase_space;
pub mod sampling;
pub mod table;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Rounds to `digits` significant decimal digits; used for all serialized output.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}
