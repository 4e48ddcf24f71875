//! Exact constant expressions and the linear closed forms.

pub mod expr;
pub mod linear;

pub use expr::{binomial, ConstExpr, Monomial};
pub use linear::{
    linear_closed, linear_s_closed, linear_spec, linear_t_closed, ClosedFormOutcome, LinearVariant,
};
