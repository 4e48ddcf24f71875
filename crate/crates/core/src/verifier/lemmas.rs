//! Truncated power-series expansions of the kernels, checked against direct evaluation.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::closedform::binomial;
use crate::error::{Error, Result};
use crate::precision::{EvalResult, Precision};
use crate::seqkit::CombinatorKind::{self, MBar, NBar, D, M, N, R, S};
use crate::seqkit::{
    combinator, combinator_closed, cot_param_derivative, digamma_param_scaled, sign, Centering,
    SequenceId,
};

/// Expansions hold for `|s - center| < STATED_RADIUS`.
pub const STATED_RADIUS: f64 = 1.0;
pub const MIN_TERMS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[allow(non_camel_case_types)]
pub enum LemmaId {
    /// Integer-centred digamma derivative around `s = -n`, coefficients `Mbar_n`.
    B1,
    /// Cotangent around an integer `n`, coefficients `R_|n|`.
    B2,
    /// Half-centred digamma derivative around an integer: `N_n` for `n >= 0`,
    /// `Nbar_{|n|+1}` for `n < 0`.
    L2_1,
    /// Cotangent derivatives around `n - 1/2`, coefficients `S_n`.
    L2_2,
    /// Half-centred digamma derivative around its pole `n - 1/2`, coefficients `M_{n-1}`.
    L2_3,
    /// The `n = 1` case of `L2_3`, coefficients `D`.
    HalfPoleExp,
}

impl LemmaId {
    pub const ALL: [LemmaId; 6] = [
        LemmaId::B1,
        LemmaId::B2,
        LemmaId::L2_1,
        LemmaId::L2_2,
        LemmaId::L2_3,
        LemmaId::HalfPoleExp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::B1 => "B1",
            LemmaId::B2 => "B2",
            LemmaId::L2_1 => "L2_1",
            LemmaId::L2_2 => "L2_2",
            LemmaId::L2_3 => "L2_3",
            LemmaId::HalfPoleExp => "HalfPoleExp",
        }
    }

    /// Equation label accepted as an alias.
    pub fn alias(self) -> &'static str {
        match self {
            LemmaId::B1 => "b1",
            LemmaId::B2 => "b2",
            LemmaId::L2_1 => "2.1",
            LemmaId::L2_2 => "2.4",
            LemmaId::L2_3 => "2.7",
            LemmaId::HalfPoleExp => "2.8",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s) || l.alias() == s)
            .ok_or_else(|| Error::Unknown {
                what: "lemma",
                name: s.to_string(),
            })
    }
}

/// One expansion `lhs(s) = sum_{j>=1} c_j (s - center)^(j-1)` with its singular part
/// already moved to the left.
pub trait LemmaExpansion: Send + Sync {
    fn id(&self) -> LemmaId;
    /// Accepts `(order, n)` or explains why not.
    fn validate(&self, order: i64, n: i64) -> Result<()>;
    fn center(&self, n: i64, bits: u32) -> Float;
    fn lhs(&self, seq: &SequenceId, order: i64, n: i64, s: &Float, prec: &Precision) -> Result<EvalResult>;
    fn coefficient(&self, seq: &SequenceId, order: i64, n: i64, j: i64, prec: &Precision) -> Result<EvalResult>;
}

struct IntegerDigamma;
struct Cotangent;
struct HalfDigamma;
struct CotangentDerivative;
struct HalfPole;
struct FirstHalfPole;

static EXPANSIONS: [&dyn LemmaExpansion; 6] = [
    &IntegerDigamma,
    &Cotangent,
    &HalfDigamma,
    &CotangentDerivative,
    &HalfPole,
    &FirstHalfPole,
];

pub fn lemma_expansion(id: LemmaId) -> &'static dyn LemmaExpansion {
    EXPANSIONS.iter().copied().find(|e| e.id() == id).unwrap()
}

#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub center: Float,
    pub radius: Float,
    pub terms: u32,
    /// `|lhs - truncated expansion|`.
    pub residual: Float,
    /// `max_{j <= terms + 1} |c_j|`.
    pub scale: Float,
    /// `10 * radius^terms * scale` plus evaluation error.
    pub bound: Float,
    pub pass: bool,
}

/// Compares the kernel at `s` with its expansion truncated after `terms` coefficients.
pub fn lemma_expansion_residual(
    lemma: LemmaId,
    seq: &SequenceId,
    order: i64,
    n: i64,
    s: &Float,
    terms: u32,
    prec: &Precision,
) -> Result<LemmaReport> {
    if terms < MIN_TERMS {
        return Err(Error::param(format!("need at least {MIN_TERMS} expansion terms, got {terms}")));
    }
    let e = lemma_expansion(lemma);
    e.validate(order, n)?;
    let bits = prec.bits();
    let center = e.center(n, bits);
    let offset = Float::with_val(bits, s - &center);
    let radius = Float::with_val(bits, offset.abs_ref());
    if radius >= STATED_RADIUS {
        return Err(Error::OutsideDisk(format!(
            "|s - {}| = {} is not below {STATED_RADIUS}",
            center.to_f64(),
            radius.to_f64()
        )));
    }
    let lhs = e.lhs(seq, order, n, s, prec)?;
    let mut series = Float::new(bits);
    let mut slack = lhs.error_bound.clone();
    let mut scale = Float::new(bits);
    let mut power = Float::with_val(bits, 1);
    for j in 1..=terms as i64 + 1 {
        let c = e.coefficient(seq, order, n, j, prec)?;
        scale = scale.max(&Float::with_val(bits, c.value.abs_ref()));
        if j <= terms as i64 {
            series += Float::with_val(bits, &c.value * &power);
            slack += Float::with_val(bits, &c.error_bound * &power);
            power *= &offset;
        }
    }
    let residual = Float::with_val(bits, &lhs.value - &series).abs();
    let tail = Float::with_val(bits, radius.clone().pow(terms)) * &scale * 10u32;
    let bound = tail + slack;
    Ok(LemmaReport {
        lemma,
        pass: residual <= bound,
        center,
        radius,
        terms,
        residual,
        scale,
        bound,
    })
}

/// `center + radius`, the sample point used by the suites.
pub fn sample_point(lemma: LemmaId, n: i64, radius: f64, bits: u32) -> Float {
    lemma_expansion(lemma).center(n, bits) + radius
}

fn value(kind: CombinatorKind, seq: &SequenceId, n: i64, j: i64, prec: &Precision) -> Result<EvalResult> {
    if seq.is_builtin() {
        combinator_closed(kind, seq, n, j, prec)
    } else {
        combinator(kind, seq, n, j, prec)
    }
}

fn scaled(r: EvalResult, factor: Integer, bits: u32) -> EvalResult {
    r.scaled(&Float::with_val(bits, factor))
}

fn positive(name: &str, v: i64) -> Result<()> {
    if v < 1 {
        return Err(Error::param(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// `lhs - a / (s - center)^power`.
fn remove_pole(
    mut lhs: EvalResult,
    seq: &SequenceId,
    k: i64,
    s: &Float,
    center: &Float,
    power: i64,
) -> EvalResult {
    let bits = lhs.value.prec();
    let d = Float::with_val(bits, s - center).pow(-(power as i32));
    lhs.value -= seq.value(k, bits) * d;
    lhs
}

impl LemmaExpansion for IntegerDigamma {
    fn id(&self) -> LemmaId {
        LemmaId::B1
    }

    fn validate(&self, order: i64, n: i64) -> Result<()> {
        positive("p", order)?;
        positive("n", n)
    }

    fn center(&self, n: i64, bits: u32) -> Float {
        Float::with_val(bits, -n)
    }

    fn lhs(&self, seq: &SequenceId, p: i64, _n: i64, s: &Float, prec: &Precision) -> Result<EvalResult> {
        digamma_param_scaled(seq, (p - 1) as u32, Centering::Integer, s, prec)
    }

    fn coefficient(&self, seq: &SequenceId, p: i64, n: i64, j: i64, prec: &Precision) -> Result<EvalResult> {
        let c = binomial(j + p - 2, p - 1) * sign(p);
        Ok(scaled(value(MBar, seq, n, j + p - 1, prec)?, c, prec.bits()))
    }
}

impl LemmaExpansion for Cotangent {
    fn id(&self) -> LemmaId {
        LemmaId::B2
    }

    fn validate(&self, _order: i64, _n: i64) -> Result<()> {
        Ok(())
    }

    fn center(&self, n: i64, bits: u32) -> Float {
        Float::with_val(bits, n)
    }

    fn lhs(&self, seq: &SequenceId, _order: i64, n: i64, s: &Float, prec: &Precision) -> Result<EvalResult> {
        let r = cot_param_derivative(seq, 0, s, prec)?;
        Ok(remove_pole(r, seq, n.abs(), s, &self.center(n, prec.bits()), 1))
    }

    fn coefficient(&self, seq: &SequenceId, _order: i64, n: i64, j: i64, prec: &Precision) -> Result<EvalResult> {
        // -(-sigma_n)^j
        let c = if n >= 0 { -sign(j) } else { -1 };
        Ok(scaled(value(R, seq, n.abs(), j, prec)?, Integer::from(c), prec.bits()))
    }
}

impl LemmaExpansion for HalfDigamma {
    fn id(&self) -> LemmaId {
        LemmaId::L2_1
    }

    fn validate(&self, order: i64, _n: i64) -> Result<()> {
        positive("p", order)
    }

    fn center(&self, n: i64, bits: u32) -> Float {
        Float::with_val(bits, n)
    }

    fn lhs(&self, seq: &SequenceId, p: i64, _n: i64, s: &Float, prec: &Precision) -> Result<EvalResult> {
        digamma_param_scaled(seq, (p - 1) as u32, Centering::Half, s, prec)
    }

    fn coefficient(&self, seq: &SequenceId, p: i64, n: i64, j: i64, prec: &Precision) -> Result<EvalResult> {
        let b = binomial(j + p - 2, p - 1);
        let r = if n >= 0 {
            scaled(value(N, seq, n, j + p - 1, prec)?, b * sign(j - 1), prec.bits())
        } else {
            scaled(value(NBar, seq, -n + 1, j + p - 1, prec)?, b * sign(p), prec.bits())
        };
        Ok(r)
    }
}

impl LemmaExpansion for CotangentDerivative {
    fn id(&self) -> LemmaId {
        LemmaId::L2_2
    }

    fn validate(&self, order: i64, n: i64) -> Result<()> {
        positive("m", order)?;
        positive("n", n)
    }

    fn center(&self, n: i64, bits: u32) -> Float {
        Float::with_val(bits, n) - 0.5f64
    }

    fn lhs(&self, seq: &SequenceId, m: i64, _n: i64, s: &Float, prec: &Precision) -> Result<EvalResult> {
        cot_param_derivative(seq, m as u32, s, prec)
    }

    fn coefficient(&self, seq: &SequenceId, m: i64, n: i64, j: i64, prec: &Precision) -> Result<EvalResult> {
        let factorial = Integer::from(Integer::factorial(m as u32));
        let c = binomial(j + m - 1, m) * factorial * (sign(m) * sign(j - 1));
        Ok(scaled(value(S, seq, n, j + m, prec)?, c, prec.bits()))
    }
}

impl LemmaExpansion for HalfPole {
    fn id(&self) -> LemmaId {
        LemmaId::L2_3
    }

    fn validate(&self, order: i64, n: i64) -> Result<()> {
        positive("p", order)?;
        positive("n", n)
    }

    fn center(&self, n: i64, bits: u32) -> Float {
        Float::with_val(bits, n) - 0.5f64
    }

    fn lhs(&self, seq: &SequenceId, p: i64, n: i64, s: &Float, prec: &Precision) -> Result<EvalResult> {
        let r = digamma_param_scaled(seq, (p - 1) as u32, Centering::Half, s, prec)?;
        Ok(remove_pole(r, seq, n - 1, s, &self.center(n, prec.bits()), p))
    }

    fn coefficient(&self, seq: &SequenceId, p: i64, n: i64, j: i64, prec: &Precision) -> Result<EvalResult> {
        let c = binomial(j + p - 2, p - 1) * -sign(j);
        Ok(scaled(value(M, seq, n - 1, j + p - 1, prec)?, c, prec.bits()))
    }
}

impl LemmaExpansion for FirstHalfPole {
    fn id(&self) -> LemmaId {
        LemmaId::HalfPoleExp
    }

    fn validate(&self, order: i64, _n: i64) -> Result<()> {
        positive("p", order)
    }

    fn center(&self, _n: i64, bits: u32) -> Float {
        Float::with_val(bits, 0.5f64)
    }

    fn lhs(&self, seq: &SequenceId, p: i64, _n: i64, s: &Float, prec: &Precision) -> Result<EvalResult> {
        let r = digamma_param_scaled(seq, (p - 1) as u32, Centering::Half, s, prec)?;
        Ok(remove_pole(r, seq, 0, s, &self.center(1, prec.bits()), p))
    }

    fn coefficient(&self, seq: &SequenceId, p: i64, _n: i64, j: i64, prec: &Precision) -> Result<EvalResult> {
        let c = binomial(j + p - 2, p - 1) * sign(p);
        Ok(scaled(value(D, seq, 0, j + p - 1, prec)?, c, prec.bits()))
    }
}
