//! Precision, budgets and the common evaluation result.

use std::fmt;

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

/// Target output digits plus internal guard digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    decimal_digits: u32,
    guard_digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 10;
    pub const DEFAULT_GUARD: u32 = 20;

    pub fn new(decimal_digits: u32) -> Result<Self> {
        Self::with_guard(decimal_digits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(decimal_digits: u32, guard_digits: u32) -> Result<Self> {
        if decimal_digits < Self::MIN_DIGITS {
            return Err(Error::param(format!(
                "decimal_digits must be at least {}, got {decimal_digits}",
                Self::MIN_DIGITS
            )));
        }
        if guard_digits < 10 {
            return Err(Error::param(format!(
                "guard_digits must be at least 10, got {guard_digits}"
            )));
        }
        Ok(Precision {
            decimal_digits,
            guard_digits,
        })
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Working precision in bits, covering target and guard digits.
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.decimal_digits + self.guard_digits)
    }

    /// `10^-decimal_digits`: the bound every evaluation must reach.
    pub fn target(&self) -> Float {
        pow10(self.bits(), -(self.decimal_digits as i32))
    }

    /// `10^-(decimal_digits + guard_digits)`: internal truncation goal.
    pub fn working_epsilon(&self) -> Float {
        pow10(
            self.bits(),
            -((self.decimal_digits + self.guard_digits) as i32),
        )
    }

    /// Same guard, `extra` more output digits.
    pub fn refined(&self, extra: u32) -> Precision {
        Precision {
            decimal_digits: self.decimal_digits + extra,
            guard_digits: self.guard_digits,
        }
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            decimal_digits: 30,
            guard_digits: Self::DEFAULT_GUARD,
        }
    }
}

/// Limits for truncated and extrapolated summation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_terms: u64,
    /// Highest extrapolation order tried before giving up.
    pub extrapolation_depth: u32,
}

impl Budget {
    pub const DEFAULT_MAX_TERMS: u64 = 1_000_000;
    pub const DEFAULT_DEPTH: u32 = 24;

    pub fn new(max_terms: u64, extrapolation_depth: u32) -> Result<Self> {
        if max_terms < 100 {
            return Err(Error::param(format!(
                "max_terms must be at least 100, got {max_terms}"
            )));
        }
        Ok(Budget {
            max_terms,
            extrapolation_depth,
        })
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_terms: Self::DEFAULT_MAX_TERMS,
            extrapolation_depth: Self::DEFAULT_DEPTH,
        }
    }
}

/// A high-precision value with an upper bound on its absolute error.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: Float,
    pub error_bound: Float,
    pub method: String,
    pub terms_used: u64,
}

impl EvalResult {
    pub fn new(value: Float, error_bound: Float, method: impl Into<String>, terms_used: u64) -> Self {
        EvalResult {
            value,
            error_bound,
            method: method.into(),
            terms_used,
        }
    }

    /// A value known exactly (up to the final rounding).
    pub fn exact(value: Float, method: impl Into<String>) -> Self {
        let bound = rounding_bound(&value);
        EvalResult::new(value, bound, method, 0)
    }

    pub fn zero(bits: u32, method: impl Into<String>) -> Self {
        EvalResult::new(Float::new(bits), Float::new(bits), method, 0)
    }

    pub fn scaled(&self, factor: &Float) -> EvalResult {
        let bits = self.value.prec();
        let value = Float::with_val(bits, &self.value * factor);
        let error_bound = Float::with_val(bits, &self.error_bound * factor.clone().abs());
        EvalResult::new(value, error_bound, self.method.clone(), self.terms_used)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

impl fmt::Display for EvalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (± {}, {})",
            format_float(&self.value, 20),
            format_float(&self.error_bound, 3),
            self.method
        )
    }
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * BITS_PER_DIGIT).ceil() as u32 + 8
}

pub fn bits_to_digits(bits: u32) -> u32 {
    (bits as f64 / BITS_PER_DIGIT).floor() as u32
}

/// `10^e` at the given precision.
pub fn pow10(bits: u32, e: i32) -> Float {
    Float::with_val(bits, 10).pow(e)
}

/// A few ulps of `x` at its own precision.
pub fn rounding_bound(x: &Float) -> Float {
    let bits = x.prec();
    let mut b = Float::with_val(bits, x.abs_ref());
    b >>= bits.saturating_sub(4);
    b
}

pub fn float(bits: u32, x: impl Into<f64>) -> Float {
    Float::with_val(bits, x.into())
}

/// Decimal text to a float of `bits` precision.
pub fn parse_float(text: &str, bits: u32) -> Result<Float> {
    let parsed = Float::parse(text.trim()).map_err(|_| Error::param(format!("not a number: `{text}`")))?;
    let x = Float::with_val(bits, parsed);
    if !x.is_finite() {
        return Err(Error::param(format!("not a finite number: `{text}`")));
    }
    Ok(x)
}

/// Scientific rendering with `digits` significant digits, rounded half-to-even.
pub fn format_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let (neg, mantissa, exp) = x.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
    let exp = exp.unwrap_or(0) - 1;
    let mut out = String::with_capacity(digits + 8);
    if neg {
        out.push('-');
    }
    let (head, tail) = mantissa.split_at(1);
    out.push_str(head);
    let tail = tail.trim_end_matches('0');
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    if exp != 0 {
        out.push('e');
        out.push_str(&exp.to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_rejects_too_few_digits() {
        assert!(Precision::new(9).is_err());
        assert!(Precision::with_guard(30, 9).is_err());
        assert!(Precision::new(10).is_ok());
    }

    #[test]
    fn budget_requires_hundred_terms() {
        assert!(Budget::new(99, 4).is_err());
        assert!(Budget::new(100, 0).is_ok());
    }

    #[test]
    fn formatting_rounds_half_even() {
        let bits = 200;
        assert_eq!(format_float(&float(bits, 2.5), 1), "2");
        assert_eq!(format_float(&float(bits, 3.5), 1), "4");
        assert_eq!(format_float(&float(bits, -0.375), 2), "-3.8e-1");
        assert_eq!(format_float(&float(bits, 0.125), 2), "1.2e-1");
        assert_eq!(format_float(&float(bits, 1234.0), 10), "1.234e3");
        assert_eq!(format_float(&Float::new(bits), 10), "0");
    }
}
