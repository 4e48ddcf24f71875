//! Closed forms of the linear sums against direct summation.

use rug::Float;

use crate::closedform::{linear_closed, linear_spec, ClosedFormOutcome, LinearVariant};
use crate::error::Result;
use crate::precision::{Budget, EvalResult, Precision};
use crate::summator::{eval_direct, SumKind};

pub const CROSSCHECK_TOLERANCE: f64 = 1e-8;
pub const VANISHING_TOLERANCE: f64 = 1e-20;

#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    pub kind: SumKind,
    pub variant: LinearVariant,
    pub p: i64,
    pub q: i64,
    pub outcome: ClosedFormOutcome,
    /// Direct summation; absent when the identity only asserts a vanishing sum.
    pub direct: Option<EvalResult>,
    pub closed: EvalResult,
    /// `|direct - closed|`, or `|closed|` for a vanishing identity.
    pub difference: Float,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn corollary_crosscheck(
    kind: SumKind,
    variant: LinearVariant,
    p: i64,
    q: i64,
    prec: &Precision,
    budget: &Budget,
) -> Result<CrosscheckReport> {
    let outcome = linear_closed(kind, p, q, variant)?;
    let closed = outcome.expr().eval(prec)?;
    let (direct, difference, tolerance) = if outcome.is_determined() {
        let direct = eval_direct(&linear_spec(kind, p, q, variant)?, prec, budget)?;
        let d = Float::with_val(prec.bits(), &direct.value - &closed.value).abs();
        (Some(direct), d, CROSSCHECK_TOLERANCE)
    } else {
        let d = Float::with_val(prec.bits(), closed.value.abs_ref());
        (None, d, VANISHING_TOLERANCE)
    };
    Ok(CrosscheckReport {
        kind,
        variant,
        p,
        q,
        pass: difference < tolerance,
        outcome,
        direct,
        closed,
        difference,
        tolerance,
    })
}

/// Every valid `(kind, variant, p, q)` with `2 <= p + q <= max_weight`.
pub fn corollary_cases(max_weight: i64) -> Vec<(SumKind, LinearVariant, i64, i64)> {
    let mut out = Vec::new();
    for kind in [SumKind::T, SumKind::S] {
        for variant in LinearVariant::ALL {
            let q_min = if variant.bar_q() { 1 } else { 2 };
            for w in 2..=max_weight {
                for q in q_min..w {
                    out.push((kind, variant, w - q, q));
                }
            }
        }
    }
    out
}

/// Cases whose identity determines the sum.
pub fn determined_cases(max_weight: i64) -> Vec<(SumKind, LinearVariant, i64, i64)> {
    corollary_cases(max_weight)
        .into_iter()
        .filter(|&(kind, v, p, q)| linear_closed(kind, p, q, v).is_ok_and(|o| o.is_determined()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_crosschecks() {
        let prec = Precision::new(30).unwrap();
        let b = Budget::default();
        let r = corollary_crosscheck(SumKind::T, LinearVariant::Plain, 1, 2, &prec, &b).unwrap();
        assert!(r.pass && r.direct.is_some());
        let r = corollary_crosscheck(SumKind::T, LinearVariant::Plain, 1, 3, &prec, &b).unwrap();
        assert!(r.pass && r.direct.is_none());
        assert_eq!(r.tolerance, VANISHING_TOLERANCE);
        let r = corollary_crosscheck(SumKind::S, LinearVariant::BarQ, 1, 1, &prec, &b).unwrap();
        assert!(r.pass, "{}", r.difference);
    }

    #[test]
    fn case_enumeration() {
        let all = corollary_cases(3);
        // plain/bar_p: (1,2); bar-q variants: (1,1), (2,1), (1,2); for both kinds
        assert_eq!(all.len(), 2 * (1 + 1 + 3 + 3));
        let det = determined_cases(3);
        assert!(det.contains(&(SumKind::T, LinearVariant::Plain, 1, 2)));
        assert!(!det.contains(&(SumKind::T, LinearVariant::BarP, 1, 2)));
    }
}
