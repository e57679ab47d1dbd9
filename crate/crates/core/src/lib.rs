//! Constructive solvers for the Erdős–Ginzburg–Ziv theorem.
//!
//! Two problems are solved with explicit certificates:
//!
//! * given `2n - 1` integers, pick `n` of them whose sum is divisible by `n`
//!   ([`egz::solve_general`]);
//! * given `p - 1` nonzero residues modulo a prime `p`, pick a subset summing
//!   to any requested target ([`solver::solve_lemma2`]).
//!
//! The prime-modulus subset problem is solved by rewriting the sumset of the
//! input as a sum of arithmetic progressions ([`state`], [`transform`]),
//! covering `Z_p` with those progressions ([`packing`]) and replaying the
//! journal of rewrites backwards to turn a covering chain into input
//! positions ([`solver`]).

pub mod egz;
pub mod error;
pub mod instance;
pub mod modmath;
pub mod oracle;
pub mod packing;
pub mod probe;
pub mod solver;
pub mod state;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use solver::{Algorithm, ConstructionResult, Method};
