//! Summation machinery shared by every evaluator: Bernoulli numbers,
//! Euler–Maclaurin tails, alternating-series acceleration and log-power
//! Richardson extrapolation.

pub mod alternating;
pub mod bernoulli;
pub mod euler_maclaurin;
pub mod extrapolate;

pub use alternating::{alternating_hurwitz, cvz_sum};
pub use euler_maclaurin::{digamma, hurwitz_zeta, Tail};
pub use extrapolate::{extrapolate_best, extrapolate_series, working_bits, Extrapolation, TailShape};
