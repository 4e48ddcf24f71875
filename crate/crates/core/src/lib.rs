//! High-precision Euler T-sums and S-sums: direct evaluation, linear closed forms,
//! and numeric checks of the residue identities behind them.

pub mod accel;
pub mod closedform;
pub mod constants;
pub mod error;
pub mod harmonics;
pub mod precision;
pub mod seqkit;
pub mod summator;
pub mod verifier;

pub use constants::{eval_atom, ConstAtom};
pub use error::{Error, Result};
pub use precision::{Budget, EvalResult, Precision};
pub use rug::Float;
pub use summator::{eval_direct, partial_sum, SumKind, SumSpec};
