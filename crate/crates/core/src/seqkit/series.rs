//! Sequence-weighted power series `sum_{k>=start} sum_t c_t a_{k+s_t} (k+o_t)^-p_t`
//! and the strategies that sum them.
//!
//! Every infinite combinator and kernel value reduces to one of these. A strategy is
//! picked per sequence: Euler–Maclaurin for `A1`, alternating acceleration for `A2`,
//! truncation with a heuristic tail for custom sequences.

use rug::ops::Pow;
use rug::Float;

use super::sequence::SequenceId;
use crate::accel::{alternating_hurwitz, digamma, hurwitz_zeta};
use crate::error::{Error, Result};
use crate::precision::{format_float, rounding_bound, Budget, EvalResult, Precision};

#[derive(Debug, Clone)]
pub struct Part {
    pub coef: i64,
    pub shift: i64,
    pub offset: Float,
    pub power: u32,
}

impl Part {
    pub fn new(coef: i64, shift: i64, offset: Float, power: u32) -> Self {
        Part {
            coef,
            shift,
            offset,
            power,
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeightedSeries {
    pub start: i64,
    pub parts: Vec<Part>,
}

impl WeightedSeries {
    pub fn new(start: i64) -> Self {
        WeightedSeries {
            start,
            parts: Vec::new(),
        }
    }

    pub fn part(mut self, coef: i64, shift: i64, offset: Float, power: u32) -> Self {
        self.parts.push(Part::new(coef, shift, offset, power));
        self
    }

    /// First index where every `k + o_t >= 1/2`; terms before it are summed directly.
    fn split(&self) -> i64 {
        self.parts
            .iter()
            .map(|p| (0.5 - p.offset.to_f64()).ceil() as i64)
            .fold(self.start, i64::max)
    }

    fn term(&self, seq: &SequenceId, k: i64, bits: u32) -> Result<Float> {
        let mut acc = Float::new(bits);
        for part in &self.parts {
            let base = Float::with_val(bits, &part.offset + k);
            if base.is_zero() {
                return Err(Error::param(format!("series term at k={k} hits a pole")));
            }
            let mut t = base.pow(-(part.power as i32));
            t *= seq.value(k + part.shift, bits);
            t *= part.coef;
            acc += t;
        }
        Ok(acc)
    }

    fn head(&self, seq: &SequenceId, end: i64, bits: u32) -> Result<Float> {
        let mut acc = Float::new(bits);
        for k in self.start..end {
            acc += self.term(seq, k, bits)?;
        }
        Ok(acc)
    }

    fn has_power_one(&self) -> bool {
        self.parts.iter().any(|p| p.power == 1)
    }
}

pub trait SeriesStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn supports(&self, seq: &SequenceId) -> bool;
    fn sum(
        &self,
        series: &WeightedSeries,
        seq: &SequenceId,
        prec: &Precision,
        budget: &Budget,
    ) -> Result<EvalResult>;
}

struct EulerMaclaurin;
struct Alternating;
struct Truncated;

static STRATEGIES: [&dyn SeriesStrategy; 3] = [&EulerMaclaurin, &Alternating, &Truncated];

pub fn series_strategies() -> &'static [&'static dyn SeriesStrategy] {
    &STRATEGIES
}

pub fn series_strategy(name: &str) -> Result<&'static dyn SeriesStrategy> {
    STRATEGIES
        .iter()
        .copied()
        .find(|s| s.name() == name)
        .ok_or_else(|| Error::Unknown {
            what: "series strategy",
            name: name.to_string(),
        })
}

/// The first registered strategy supporting `seq`.
pub fn default_strategy(seq: &SequenceId) -> &'static dyn SeriesStrategy {
    STRATEGIES
        .iter()
        .copied()
        .find(|s| s.supports(seq))
        .expect("truncated summation supports every sequence")
}

pub fn sum_series(
    series: &WeightedSeries,
    seq: &SequenceId,
    prec: &Precision,
    budget: &Budget,
) -> Result<EvalResult> {
    default_strategy(seq).sum(series, seq, prec, budget)
}

impl SeriesStrategy for EulerMaclaurin {
    fn name(&self) -> &'static str {
        "euler-maclaurin"
    }

    fn supports(&self, seq: &SequenceId) -> bool {
        matches!(seq, SequenceId::A1)
    }

    fn sum(
        &self,
        series: &WeightedSeries,
        seq: &SequenceId,
        prec: &Precision,
        _budget: &Budget,
    ) -> Result<EvalResult> {
        let bits = prec.bits();
        let k1 = series.split();
        let mut value = series.head(seq, k1, bits)?;
        let mut error = Float::new(bits);
        let mut harmonic_coef = 0i64;
        for part in &series.parts {
            let a = Float::with_val(bits, &part.offset + k1);
            let tail = if part.power == 1 {
                harmonic_coef += part.coef;
                // sum_{k>=k1} c/(k+o) = -c psi(k1+o) once the c's cancel
                let t = digamma(&a, bits);
                error += Float::with_val(bits, &t.error * part.coef.unsigned_abs());
                Float::with_val(bits, &t.value * -part.coef)
            } else {
                let t = hurwitz_zeta(part.power, &a, bits);
                error += Float::with_val(bits, &t.error * part.coef.unsigned_abs());
                Float::with_val(bits, &t.value * part.coef)
            };
            value += tail;
        }
        if harmonic_coef != 0 {
            return Err(Error::Divergent(format!(
                "weight-one terms of a constant sequence need coefficients summing to 0, got {harmonic_coef}"
            )));
        }
        error += rounding_bound(&value);
        Ok(EvalResult::new(value, error, self.name(), (k1 - series.start).max(0) as u64))
    }
}

impl SeriesStrategy for Alternating {
    fn name(&self) -> &'static str {
        "cvz-alternating"
    }

    fn supports(&self, seq: &SequenceId) -> bool {
        matches!(seq, SequenceId::A2)
    }

    fn sum(
        &self,
        series: &WeightedSeries,
        seq: &SequenceId,
        prec: &Precision,
        _budget: &Budget,
    ) -> Result<EvalResult> {
        let bits = prec.bits();
        let k1 = series.split();
        let mut value = series.head(seq, k1, bits)?;
        let mut error = Float::new(bits);
        let mut terms = 0;
        for part in &series.parts {
            let a = Float::with_val(bits, &part.offset + k1);
            let t = alternating_hurwitz(part.power, &a, bits);
            terms += t.terms;
            let sign = seq.unit(k1 + part.shift).unwrap_or(1) as i64;
            value += Float::with_val(bits, &t.value * (sign * part.coef));
            error += Float::with_val(bits, &t.error * part.coef.unsigned_abs());
        }
        error += rounding_bound(&value);
        Ok(EvalResult::new(value, error, self.name(), terms))
    }
}

impl Truncated {
    const MAX_CUTOFF: u64 = 50_000;
}

impl SeriesStrategy for Truncated {
    fn name(&self) -> &'static str {
        "truncated"
    }

    fn supports(&self, _seq: &SequenceId) -> bool {
        true
    }

    fn sum(
        &self,
        series: &WeightedSeries,
        seq: &SequenceId,
        prec: &Precision,
        budget: &Budget,
    ) -> Result<EvalResult> {
        let bits = prec.bits();
        let cutoff = budget.max_terms.min(Self::MAX_CUTOFF) as i64;
        let k1 = series.split();
        let end = k1 + cutoff;
        let quarter = k1 + cutoff / 4;
        let half = k1 + cutoff / 2;
        let mut value = series.head(seq, k1, bits)?;
        let ones = WeightedSeries {
            start: series.start,
            parts: series.parts.iter().filter(|p| p.power == 1).cloned().collect(),
        };
        let mut early = Float::new(bits);
        let mut late = Float::new(bits);
        let mut amax = Float::new(bits);
        for k in k1..end {
            value += series.term(seq, k, bits)?;
            if ones.parts.is_empty() {
                continue;
            }
            if k >= quarter && k < half {
                early += ones.term(seq, k, bits)?;
            } else if k >= half {
                late += ones.term(seq, k, bits)?;
            }
        }
        for k in end - 64.min(cutoff)..end {
            for part in &series.parts {
                let a = seq.value(k + part.shift, bits).abs();
                if a > amax {
                    amax = a;
                }
            }
        }
        let mut error = Float::new(bits);
        let kf = Float::with_val(bits, end);
        for part in series.parts.iter().filter(|p| p.power >= 2) {
            let base = Float::with_val(bits, &part.offset + &kf);
            let mut t = base.pow(1 - part.power as i32) / (part.power - 1);
            t *= &amax;
            t *= part.coef.unsigned_abs() * 2;
            error += t;
        }
        if series.has_power_one() {
            let late_abs = Float::with_val(bits, late.abs_ref());
            let early_abs = Float::with_val(bits, early.abs_ref());
            let floor = Float::with_val(bits, 10) / cutoff;
            if late_abs > Float::with_val(bits, &early_abs * 0.75f64) && late_abs > floor {
                return Err(Error::Divergent(format!(
                    "weight-one terms of sequence {} do not settle: block sums {} then {}",
                    seq,
                    format_float(&early, 6),
                    format_float(&late, 6)
                )));
            }
            error += late_abs * 2u32;
            error += Float::with_val(bits, &amax * ones.parts.len() as u64) / &kf;
        }
        error += rounding_bound(&value);
        Ok(EvalResult::new(value, error, self.name(), (end - series.start) as u64))
    }
}
