//! Sequences over all integers, the combinators built from them, and the kernel
//! functions whose Laurent expansions those combinators describe.

pub mod combinator;
pub mod kernel;
pub mod sequence;
pub mod series;

pub use combinator::{
    combinator, combinator_closed, combinator_with_budget, specialize, CombinatorKind,
    SpecializedForm,
};
pub use kernel::{cot_param, cot_param_derivative, digamma_param, digamma_param_scaled, Centering};
pub use sequence::{seq_value, sign, CustomSequence, SequenceId};
pub use series::{series_strategies, series_strategy, sum_series, SeriesStrategy, WeightedSeries};
