//! The parametric digamma function `Psi(x; A)` and cotangent `pi cot(pi s; A)`.
//!
//! ```text
//! Psi(x; A)             = -a_0/x + sum_{k>=1} (a_k/k - a_k/(k+x))
//! Psi^(p-1)(x; A)/(p-1)! = (-1)^p sum_{k>=0} a_k/(k+x)^p          (p >= 2)
//! pi cot(pi s; A)       = a_0/s + sum_{k>=1} a_k (1/(s-k) + 1/(s+k))
//! ```

use rug::ops::Pow;
use rug::{Float, Integer};

use super::sequence::{sign, SequenceId};
use super::series::{sum_series, WeightedSeries};
use crate::error::{Error, Result};
use crate::precision::{Budget, EvalResult, Precision};

pub const POLE_EPSILON: f64 = 1e-3;

/// Where the digamma argument sits relative to `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centering {
    /// `Psi(-s; A)`: poles at `s = 0, 1, 2, ...`
    Integer,
    /// `Psi(1/2 - s; A)`: poles at `s = 1/2, 3/2, ...`
    Half,
}

impl Centering {
    fn argument(self, s: &Float) -> Float {
        match self {
            Centering::Integer => Float::with_val(s.prec(), -s),
            Centering::Half => Float::with_val(s.prec(), 0.5f64 - s),
        }
    }
}

/// Distance from `x` to the nearest of `0, -1, -2, ...`.
fn check_digamma_pole(x: &Float, s: &Float) -> Result<()> {
    let nearest = Float::with_val(x.prec(), x.round_ref());
    if nearest <= 0 {
        let d = Float::with_val(x.prec(), x - &nearest).abs();
        if d < POLE_EPSILON {
            return Err(Error::PoleProximity {
                point: s.to_f64(),
                epsilon: POLE_EPSILON,
            });
        }
    }
    Ok(())
}

fn check_integer_pole(s: &Float) -> Result<()> {
    let nearest = Float::with_val(s.prec(), s.round_ref());
    if Float::with_val(s.prec(), s - &nearest).abs() < POLE_EPSILON {
        return Err(Error::PoleProximity {
            point: s.to_f64(),
            epsilon: POLE_EPSILON,
        });
    }
    Ok(())
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `Psi^(p-1)(x; A) / (p-1)!` with `x = -s` or `x = 1/2 - s`.
pub fn digamma_param_scaled(
    seq: &SequenceId,
    derivative: u32,
    centering: Centering,
    s: &Float,
    prec: &Precision,
) -> Result<EvalResult> {
    let bits = prec.bits();
    let s = Float::with_val(bits, s);
    let x = centering.argument(&s);
    check_digamma_pole(&x, &s)?;
    let p = derivative + 1;
    let budget = Budget::default();
    if p == 1 {
        let series = WeightedSeries::new(1)
            .part(1, 0, Float::new(bits), 1)
            .part(-1, 0, x.clone(), 1);
        let mut r = sum_series(&series, seq, prec, &budget)?;
        r.value -= Float::with_val(bits, seq.value(0, bits) / &x);
        Ok(r)
    } else {
        let series = WeightedSeries::new(0).part(1, 0, x, p);
        let r = sum_series(&series, seq, prec, &budget)?;
        Ok(r.scaled(&Float::with_val(bits, sign(p as i64))))
    }
}

/// `Psi^(derivative)(x; A)` with `x = -s` or `x = 1/2 - s`.
pub fn digamma_param(
    seq: &SequenceId,
    derivative: u32,
    centering: Centering,
    s: &Float,
    prec: &Precision,
) -> Result<EvalResult> {
    let r = digamma_param_scaled(seq, derivative, centering, s, prec)?;
    Ok(r.scaled(&Float::with_val(prec.bits(), factorial(derivative))))
}

/// `pi cot(pi s; A)` for non-integer `s`.
pub fn cot_param(seq: &SequenceId, s: &Float, prec: &Precision) -> Result<EvalResult> {
    cot_param_derivative(seq, 0, s, prec)
}

/// `d^m/ds^m pi cot(pi s; A)`.
pub fn cot_param_derivative(
    seq: &SequenceId,
    m: u32,
    s: &Float,
    prec: &Precision,
) -> Result<EvalResult> {
    let bits = prec.bits();
    let s = Float::with_val(bits, s);
    check_integer_pole(&s)?;
    let power = m + 1;
    let neg_s = Float::with_val(bits, -&s);
    // (s-k)^-power = (-1)^power (k-s)^-power
    let series = WeightedSeries::new(1)
        .part(1, 0, s.clone(), power)
        .part(sign(power as i64) as i64, 0, neg_s, power);
    let mut r = sum_series(&series, seq, prec, &Budget::default())?;
    r.value += seq.value(0, bits) * s.clone().pow(-(power as i32));
    let scale = Float::with_val(bits, factorial(m)) * sign(m as i64);
    Ok(r.scaled(&scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn prec() -> Precision {
        Precision::new(30).unwrap()
    }

    fn f(x: f64) -> Float {
        Float::with_val(prec().bits(), x)
    }

    fn near(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs() < tol
    }

    #[test]
    fn classical_digamma() {
        let p = prec();
        let bits = p.bits();
        let r = digamma_param(&SequenceId::A1, 0, Centering::Integer, &f(-0.3), &p).unwrap();
        let want = f(0.3).digamma() + Float::with_val(bits, Constant::Euler);
        assert!(near(&r.value, &want, 1e-35));
        // trigamma at 3/2 from the half-centred form at s = -1: pi^2/2 - 4
        let r = digamma_param(&SequenceId::A1, 1, Centering::Half, &f(-1.0), &p).unwrap();
        let pi = Float::with_val(bits, Constant::Pi);
        let want = Float::with_val(bits, &pi * &pi) / 2u32 - 4u32;
        assert!(near(&r.value, &want, 1e-35));
    }

    #[test]
    fn leading_pole_term() {
        let p = prec();
        let s = f(1e-2);
        let r = digamma_param(&SequenceId::A2, 0, Centering::Integer, &s, &p).unwrap();
        let scaled = Float::with_val(p.bits(), &r.value * &s);
        assert!(near(&scaled, &f(1.0), 0.05));
    }

    #[test]
    fn cotangent_reduces_to_cot_and_csc() {
        let p = prec();
        let bits = p.bits();
        let pi = Float::with_val(bits, Constant::Pi);
        let x = Float::with_val(bits, &pi * 0.3f64);
        let cot = cot_param(&SequenceId::A1, &f(0.3), &p).unwrap();
        let want = Float::with_val(bits, x.tan_ref()).recip() * &pi;
        assert!(near(&cot.value, &want, 1e-35));
        let csc = cot_param(&SequenceId::A2, &f(0.3), &p).unwrap();
        let want = Float::with_val(bits, x.sin_ref()).recip() * &pi;
        assert!(near(&csc.value, &want, 1e-35));
        let mid = cot_param(&SequenceId::A1, &f(0.5), &p).unwrap();
        assert!(mid.value.abs() < 1e-35);
    }

    #[test]
    fn cotangent_derivative() {
        // d/ds pi cot(pi s) = -pi^2 / sin^2(pi s)
        let p = prec();
        let bits = p.bits();
        let pi = Float::with_val(bits, Constant::Pi);
        let s = f(1.3);
        let r = cot_param_derivative(&SequenceId::A1, 1, &s, &p).unwrap();
        let sin = Float::with_val(bits, &pi * &s).sin();
        let want = -Float::with_val(bits, &pi * &pi) / sin.square();
        assert!(near(&r.value, &want, 1e-33));
    }

    #[test]
    fn cotangent_from_digamma() {
        // pi cot(pi s; A) = -a0/s + Psi(-s; A) - Psi(s; A)
        let p = prec();
        for seq in [SequenceId::A1, SequenceId::A2] {
            for s in [0.3, 1.7, -2.4, 3.55] {
                let s = f(s);
                let lhs = cot_param(&seq, &s, &p).unwrap().value;
                let neg = Float::with_val(p.bits(), -&s);
                let plus = digamma_param(&seq, 0, Centering::Integer, &s, &p).unwrap().value;
                let minus = digamma_param(&seq, 0, Centering::Integer, &neg, &p).unwrap().value;
                let rhs = Float::with_val(p.bits(), &plus - &minus) - Float::with_val(p.bits(), s.recip_ref());
                assert!(near(&lhs, &rhs, 1e-33), "{seq} s={s}");
            }
        }
    }

    #[test]
    fn poles_are_rejected() {
        let p = prec();
        let err = cot_param(&SequenceId::A1, &f(2.0005), &p).unwrap_err();
        assert!(matches!(err, Error::PoleProximity { .. }));
        assert!(digamma_param(&SequenceId::A1, 0, Centering::Integer, &f(3.0), &p).is_err());
        assert!(digamma_param(&SequenceId::A1, 0, Centering::Half, &f(1.5), &p).is_err());
        assert!(digamma_param(&SequenceId::A1, 0, Centering::Integer, &f(-3.0), &p).is_ok());
        assert!(digamma_param(&SequenceId::A1, 0, Centering::Half, &f(-0.5), &p).is_ok());
    }
}
