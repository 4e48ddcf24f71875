//! Direct evaluation of (alternating) Euler T-sums and S-sums.
//!
//! ```text
//! T_{p1..pr, q} = sum_{n>=1} h_{n-1}^(p1) ... h_{n-1}^(pr) / (n - 1/2)^q
//! S_{p1..pr, q} = sum_{n>=1} h_n^(p1)     ... h_n^(pr)     / n^q
//! ```
//!
//! A barred exponent swaps `h` for `hbar`; a barred `q` multiplies the summand by
//! `(-1)^(n-1)`.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::Float;

use crate::accel::alternating::{cvz_sum, terms_for};
use crate::accel::extrapolate::SAFETY_FACTOR;
use crate::accel::{extrapolate_series, working_bits, TailShape};
use crate::error::{Error, Result};
use crate::harmonics::{HarmonicCache, HarmonicFamily, HarmonicKind};
use crate::precision::{format_float, rounding_bound, Budget, EvalResult, Precision};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SumKind {
    T,
    S,
}

impl fmt::Display for SumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumKind::T => "T",
            SumKind::S => "S",
        })
    }
}

impl FromStr for SumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(SumKind::T),
            "S" | "s" => Ok(SumKind::S),
            _ => Err(Error::Unknown {
                what: "sum kind",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exponent {
    pub order: u32,
    pub barred: bool,
}

impl Exponent {
    pub fn new(order: i64, barred: bool) -> Result<Self> {
        if order < 1 || order > u32::MAX as i64 {
            return Err(Error::InvalidSpec(format!("exponent {order} must be positive")));
        }
        Ok(Exponent {
            order: order as u32,
            barred,
        })
    }

    pub fn plain(order: u32) -> Self {
        Exponent {
            order,
            barred: false,
        }
    }

    pub fn bar(order: u32) -> Self {
        Exponent {
            order,
            barred: true,
        }
    }

    fn harmonic(&self) -> HarmonicKind {
        HarmonicKind {
            family: if self.barred {
                HarmonicFamily::OddAlternating
            } else {
                HarmonicFamily::Odd
            },
            order: self.order,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SumSpec {
    pub kind: SumKind,
    pub exponents: Vec<Exponent>,
    pub q: u32,
    pub q_barred: bool,
}

impl SumSpec {
    pub fn new(kind: SumKind, exponents: Vec<Exponent>, q: i64, q_barred: bool) -> Result<Self> {
        if q < 1 || q > u32::MAX as i64 {
            return Err(Error::InvalidSpec(format!("q must be positive, got {q}")));
        }
        let spec = SumSpec {
            kind,
            exponents,
            q: q as u32,
            q_barred,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// From parallel exponent and bar lists.
    pub fn from_lists(kind: SumKind, exps: &[i64], bars: &[bool], q: i64, q_barred: bool) -> Result<Self> {
        if !bars.is_empty() && bars.len() != exps.len() {
            return Err(Error::InvalidSpec(format!(
                "{} bar flags for {} exponents",
                bars.len(),
                exps.len()
            )));
        }
        let exponents = exps
            .iter()
            .enumerate()
            .map(|(i, &p)| Exponent::new(p, bars.get(i).copied().unwrap_or(false)))
            .collect::<Result<Vec<_>>>()?;
        SumSpec::new(kind, exponents, q, q_barred)
    }

    pub fn validate(&self) -> Result<()> {
        if self.exponents.iter().any(|e| e.order == 0) {
            return Err(Error::InvalidSpec("exponents must be positive".into()));
        }
        match self.q {
            0 => Err(Error::InvalidSpec("q must be positive".into())),
            1 if !self.q_barred => Err(Error::InvalidSpec(
                "q = 1 diverges without the alternating outer sign".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn weight(&self) -> u32 {
        self.exponents.iter().map(|e| e.order).sum::<u32>() + self.q
    }

    pub fn degree(&self) -> usize {
        self.exponents.len()
    }

    /// Power of `log n` in the summand envelope: one per unbarred order-1 factor.
    pub fn log_degree(&self) -> u32 {
        self.exponents
            .iter()
            .filter(|e| e.order == 1 && !e.barred)
            .count() as u32
    }

    pub fn tail_shape(&self) -> TailShape {
        TailShape::new(self.q.saturating_sub(1).max(1), self.log_degree())
    }
}

impl fmt::Display for SumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = |b: bool| if b { "bar" } else { "" };
        let exps: Vec<String> = self
            .exponents
            .iter()
            .map(|e| format!("{}{}", e.order, bar(e.barred)))
            .collect();
        write!(f, "{}({}; {}{})", self.kind, exps.join(","), self.q, bar(self.q_barred))
    }
}

/// Summands of a spec in order, with running harmonic numbers.
pub struct TermStream<'a> {
    spec: &'a SumSpec,
    cache: HarmonicCache,
}

impl<'a> TermStream<'a> {
    pub fn new(spec: &'a SumSpec, bits: u32) -> Self {
        TermStream {
            spec,
            cache: HarmonicCache::new(bits),
        }
    }

    /// Summand `n >= 1` without the outer sign.
    pub fn magnitude(&mut self, n: u64) -> Float {
        let bits = self.cache.bits();
        let (index, base) = match self.spec.kind {
            SumKind::T => (n - 1, Float::with_val(bits, n) - 0.5f64),
            SumKind::S => (n, Float::with_val(bits, n)),
        };
        let mut t = base.pow(-(self.spec.q as i32));
        for e in &self.spec.exponents {
            t *= self.cache.get(e.harmonic(), index);
        }
        t
    }

    pub fn term(&mut self, n: u64) -> Float {
        let t = self.magnitude(n);
        if self.spec.q_barred && n.is_multiple_of(2) {
            -t
        } else {
            t
        }
    }
}

/// Sum of the first `count` summands.
pub fn partial_sum(spec: &SumSpec, count: u64, prec: &Precision) -> Float {
    let bits = prec.bits();
    let mut stream = TermStream::new(spec, bits);
    let mut acc = Float::new(bits);
    for n in 1..=count {
        acc += stream.term(n);
    }
    acc
}

pub trait SummationMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn evaluate(&self, spec: &SumSpec, prec: &Precision, budget: &Budget) -> Result<EvalResult>;
}

struct Extrapolate;
struct Cvz;
struct Plain;

static METHODS: [&dyn SummationMethod; 3] = [&Extrapolate, &Cvz, &Plain];

pub fn summation_methods() -> &'static [&'static dyn SummationMethod] {
    &METHODS
}

pub fn summation_method(name: &str) -> Result<&'static dyn SummationMethod> {
    METHODS
        .iter()
        .copied()
        .find(|m| m.name() == name)
        .ok_or_else(|| Error::Unknown {
            what: "summation method",
            name: name.to_string(),
        })
}

pub const DEFAULT_METHOD: &str = "extrapolate";

/// Value of `spec` to `prec.target()` with the default method.
pub fn eval_direct(spec: &SumSpec, prec: &Precision, budget: &Budget) -> Result<EvalResult> {
    eval_with(spec, DEFAULT_METHOD, prec, budget)
}

pub fn eval_with(spec: &SumSpec, method: &str, prec: &Precision, budget: &Budget) -> Result<EvalResult> {
    spec.validate()?;
    summation_method(method)?.evaluate(spec, prec, budget)
}

impl SummationMethod for Extrapolate {
    fn name(&self) -> &'static str {
        "extrapolate"
    }

    fn evaluate(&self, spec: &SumSpec, prec: &Precision, budget: &Budget) -> Result<EvalResult> {
        let bits = prec.bits();
        let mut stream = TermStream::new(spec, working_bits(bits));
        extrapolate_series(
            |n| Ok(stream.term(n)),
            spec.tail_shape(),
            bits,
            budget,
            &prec.target(),
        )
    }
}

impl Cvz {
    fn run(spec: &SumSpec, terms: u64, bits: u32) -> (Float, Float) {
        let mut stream = TermStream::new(spec, bits + 32);
        let tail = cvz_sum(terms, bits, |k| stream.magnitude(k + 1));
        (tail.value, tail.error)
    }
}

impl SummationMethod for Cvz {
    fn name(&self) -> &'static str {
        "cvz"
    }

    /// Polynomial acceleration of the alternating outer sum. The nominal bound assumes
    /// a moment sequence; it is widened by the change against a shorter run.
    fn evaluate(&self, spec: &SumSpec, prec: &Precision, budget: &Budget) -> Result<EvalResult> {
        if !spec.q_barred {
            return Err(Error::param("cvz needs an alternating outer sign"));
        }
        let bits = prec.bits();
        let short = terms_for(bits + 8);
        let long = short + short / 8 + 4;
        if long > budget.max_terms {
            return Err(Error::BudgetExhausted(format!(
                "cvz needs {long} terms, max_terms is {}",
                budget.max_terms
            )));
        }
        let (coarse, _) = Cvz::run(spec, short, bits);
        let (value, nominal) = Cvz::run(spec, long, bits);
        let mut spread = Float::with_val(bits, &value - &coarse).abs();
        spread *= SAFETY_FACTOR;
        let bound = spread.max(&nominal);
        if bound > prec.target() {
            return Err(Error::BudgetExhausted(format!(
                "cvz estimate {} has bound {}",
                format_float(&value, 25),
                format_float(&bound, 3)
            )));
        }
        Ok(EvalResult::new(value, bound, self.name(), long))
    }
}

impl SummationMethod for Plain {
    fn name(&self) -> &'static str {
        "plain"
    }

    /// Truncated sum; the tail bound is heuristic and assumes a monotone envelope.
    fn evaluate(&self, spec: &SumSpec, prec: &Precision, budget: &Budget) -> Result<EvalResult> {
        let bits = prec.bits();
        let count = budget.max_terms;
        let mut stream = TermStream::new(spec, bits + 16);
        let mut acc = Float::new(bits + 16);
        for n in 1..=count {
            acc += stream.term(n);
        }
        let next = stream.magnitude(count + 1);
        let bound = if spec.q_barred {
            next
        } else {
            let factor = Float::with_val(bits, count + 1) / spec.q.saturating_sub(1).max(1);
            next * factor * 2u32
        };
        let value = Float::with_val(bits, &acc);
        let bound = Float::with_val(bits, &bound) + rounding_bound(&value);
        if bound > prec.target() {
            return Err(Error::BudgetExhausted(format!(
                "truncated sum {} after {count} terms has tail bound {}",
                format_float(&value, 25),
                format_float(&bound, 3)
            )));
        }
        Ok(EvalResult::new(value, bound, self.name(), count))
    }
}
