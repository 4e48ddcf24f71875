//! Residue-sum identities among linear and quadratic sums built from combinators.
//!
//! Each identity is `sum_{n>=1} f(n) + residue = 0`, where `f` collects every
//! n-indexed series of the statement. The series is summed as one by
//! extrapolation; the residue block is a finite polynomial in constants.

use std::fmt;

use rug::ops::Pow;
use rug::Float;

use super::source::{require_builtin, unit, Accumulator, CombinatorSource};
use crate::accel::{extrapolate_best, working_bits, TailShape};
use crate::error::{Error, Result};
use crate::precision::{rounding_bound, Budget, EvalResult, Precision};
use crate::seqkit::CombinatorKind::{self, MBar, NBar, THat, D, M, N, R, S};
use crate::seqkit::{sign, SequenceId};

pub const LINEAR_TOLERANCE: f64 = 1e-6;
pub const QUADRATIC_TOLERANCE: f64 = 1e-5;

/// Extra digits for the constants inside summands and residues.
const ATOM_EXTRA_DIGITS: u32 = 50;

#[derive(Debug, Clone)]
pub struct TheoremInstance {
    pub theorem: String,
    pub p: u32,
    pub q: u32,
    /// Second exponent; unused by linear identities.
    pub m: u32,
    pub a: SequenceId,
    pub b: SequenceId,
    /// Third sequence; unused by linear identities.
    pub c: SequenceId,
}

impl TheoremInstance {
    pub fn linear(theorem: &str, p: i64, q: i64, a: SequenceId, b: SequenceId) -> Result<Self> {
        Self::new(theorem, p, q, 1, a, b.clone(), b)
    }

    pub fn quadratic(
        theorem: &str,
        p: i64,
        m: i64,
        q: i64,
        a: SequenceId,
        b: SequenceId,
        c: SequenceId,
    ) -> Result<Self> {
        Self::new(theorem, p, q, m, a, b, c)
    }

    fn new(theorem: &str, p: i64, q: i64, m: i64, a: SequenceId, b: SequenceId, c: SequenceId) -> Result<Self> {
        residue_identity(theorem)?;
        let small = |name: &str, v: i64, min: i64| -> Result<u32> {
            if v < min || v > 64 {
                return Err(Error::param(format!("{name} must lie in {min}..=64, got {v}")));
            }
            Ok(v as u32)
        };
        Ok(TheoremInstance {
            theorem: theorem.to_string(),
            p: small("p", p, 1)?,
            q: small("q", q, 2)?,
            m: small("m", m, 1)?,
            a,
            b,
            c,
        })
    }

    fn pqm(&self) -> (i64, i64, i64) {
        (self.p as i64, self.q as i64, self.m as i64)
    }
}

impl fmt::Display for TheoremInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let quadratic = residue_identity(&self.theorem).is_ok_and(|t| t.is_quadratic());
        if quadratic {
            write!(
                f,
                "{} p={} m={} q={} A={} B={} C={}",
                self.theorem, self.p, self.m, self.q, self.a, self.b, self.c
            )
        } else {
            write!(f, "{} p={} q={} A={} B={}", self.theorem, self.p, self.q, self.a, self.b)
        }
    }
}

pub trait ResidueIdentity: Send + Sync {
    fn name(&self) -> &'static str;
    fn is_quadratic(&self) -> bool;
    /// Every n-indexed series of the identity, combined into one summand.
    fn summand(&self, inst: &TheoremInstance, src: &mut CombinatorSource, n: i64) -> Result<Float>;
    /// The finite residue block.
    fn residue(&self, inst: &TheoremInstance, src: &mut CombinatorSource) -> Result<Accumulator>;
}

struct LinearHalf;
struct LinearInteger;
struct QuadraticHalf;
struct QuadraticInteger;
struct QuadraticMixed {
    name: &'static str,
    last_block: CombinatorKind,
}

static IDENTITIES: [&dyn ResidueIdentity; 6] = [
    &LinearHalf,
    &LinearInteger,
    &QuadraticHalf,
    &QuadraticInteger,
    &QuadraticMixed {
        name: "3.7",
        last_block: THat,
    },
    &QuadraticMixed {
        name: "3.7-printed",
        last_block: CombinatorKind::Tau,
    },
];

pub fn residue_identities() -> &'static [&'static dyn ResidueIdentity] {
    &IDENTITIES
}

pub fn residue_identity(name: &str) -> Result<&'static dyn ResidueIdentity> {
    IDENTITIES
        .iter()
        .copied()
        .find(|t| t.name() == name)
        .ok_or_else(|| Error::Unknown {
            what: "theorem",
            name: name.to_string(),
        })
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub instance: String,
    pub residual: EvalResult,
    pub tolerance: f64,
    /// The bound is below the tolerance, so pass/fail means something.
    pub conclusive: bool,
    pub pass: bool,
}

/// Total of all terms of the identity, which should vanish.
pub fn theorem_residual(inst: &TheoremInstance, prec: &Precision, budget: &Budget) -> Result<EvalResult> {
    let identity = residue_identity(&inst.theorem)?;
    require_builtin(&[&inst.a, &inst.b, &inst.c])?;
    let bits = prec.bits();
    let wp = working_bits(bits);
    let shape = TailShape::new(inst.q - 1, if identity.is_quadratic() { 2 } else { 1 });

    let mut src = CombinatorSource::new(prec, wp, ATOM_EXTRA_DIGITS);
    let residue = identity.residue(inst, &mut src)?;
    let accuracy = src.atom_accuracy();
    let series = extrapolate_best(
        |n| identity.summand(inst, &mut src, n as i64),
        shape,
        bits,
        budget,
        &prec.target(),
    )?
    .result;

    let value = Float::with_val(bits, &series.value + &residue.value);
    let size = Float::with_val(bits, series.value.abs_ref());
    let mut bound = Float::with_val(bits, &residue.magnitude + &size) * &accuracy * 100u32;
    bound += &series.error_bound;
    bound += rounding_bound(&value);
    Ok(EvalResult::new(
        value,
        bound,
        format!("residue-sum/{}", series.method),
        series.terms_used,
    ))
}

/// Residual with the pass rule `|r| < max(10 * bound, tolerance)`, required to be conclusive.
pub fn verify_theorem(inst: &TheoremInstance, prec: &Precision, budget: &Budget) -> Result<TheoremReport> {
    let identity = residue_identity(&inst.theorem)?;
    let tolerance = if identity.is_quadratic() {
        QUADRATIC_TOLERANCE
    } else {
        LINEAR_TOLERANCE
    };
    let residual = theorem_residual(inst, prec, budget)?;
    let bound = residual.error_bound.to_f64();
    let size = residual.value.to_f64().abs();
    let conclusive = bound < tolerance;
    Ok(TheoremReport {
        instance: inst.to_string(),
        pass: conclusive && size < (10.0 * bound).max(tolerance),
        residual,
        tolerance,
        conclusive,
    })
}

fn sg(e: i64) -> i32 {
    sign(e)
}

fn inv_pow(x: &Float, e: i64) -> Float {
    x.clone().pow(-(e as i32))
}

/// `(n, n - 1/2)` at the source precision.
fn nodes(src: &CombinatorSource, n: i64) -> (Float, Float) {
    let nf = Float::with_val(src.bits(), n);
    let half = Float::with_val(src.bits(), &nf - 0.5f64);
    (nf, half)
}

/// `sg(e) * that(A, w) - tau(A, w)`.
fn signed_pair(src: &mut CombinatorSource, seq: &SequenceId, e: i64, w: i64) -> Result<Float> {
    Ok(src.get(THat, seq, 0, w)? * sg(e) - src.get(CombinatorKind::Tau, seq, 0, w)?)
}

/// `sg(e) * that(A, w) + tau(A, w)`.
fn signed_pair_plus(src: &mut CombinatorSource, seq: &SequenceId, e: i64, w: i64) -> Result<Float> {
    Ok(src.get(THat, seq, 0, w)? * sg(e) + src.get(CombinatorKind::Tau, seq, 0, w)?)
}

impl ResidueIdentity for LinearHalf {
    fn name(&self) -> &'static str {
        "3.1"
    }

    fn is_quadratic(&self) -> bool {
        false
    }

    fn summand(&self, i: &TheoremInstance, src: &mut CombinatorSource, n: i64) -> Result<Float> {
        let (p, q, _) = i.pqm();
        let (nf, half) = nodes(src, n);
        let hq = inv_pow(&half, q);
        let mut v = src.get(NBar, &i.b, n, p)? * unit(&i.a, n - 1)? * sg(p + q) * &hq;
        v += src.get(N, &i.b, n, p)? * unit(&i.a, n)? * &hq;
        for k in 0..p {
            let e = p + q - k - 1;
            let c = src.binom(p + q - k - 2, q - 1) * sg(p) * unit(&i.b, n)?;
            v -= c * src.get(S, &i.a, n + 1, k + 1)? * inv_pow(&nf, e);
        }
        Ok(v)
    }

    fn residue(&self, i: &TheoremInstance, src: &mut CombinatorSource) -> Result<Accumulator> {
        let (p, q, _) = i.pqm();
        let mut acc = Accumulator::new(src.bits());
        let b0 = unit(&i.b, 0)?;
        acc.sub(signed_pair_plus(src, &i.a, p + q, p + q)? * b0);
        for k in 1..=q {
            let c = src.binom(k + p - 2, p - 1) * sg(p);
            acc.add(c * src.get(D, &i.b, 0, k + p - 1)? * signed_pair(src, &i.a, q - k, q - k + 1)?);
        }
        Ok(acc)
    }
}

impl ResidueIdentity for LinearInteger {
    fn name(&self) -> &'static str {
        "3.2"
    }

    fn is_quadratic(&self) -> bool {
        false
    }

    fn summand(&self, i: &TheoremInstance, src: &mut CombinatorSource, n: i64) -> Result<Float> {
        let (p, q, _) = i.pqm();
        let (nf, half) = nodes(src, n);
        let nq = inv_pow(&nf, q);
        let an = unit(&i.a, n)?;
        let mut v = src.get(NBar, &i.b, n + 1, p)? * an * sg(p + q) * &nq;
        v += src.get(N, &i.b, n, p)? * an * &nq;
        for k in 0..p {
            let e = p + q - k - 1;
            let c = src.binom(p + q - k - 2, q - 1) * sg(p) * unit(&i.b, n - 1)?;
            v -= c * src.get(S, &i.a, n, k + 1)? * inv_pow(&half, e);
        }
        Ok(v)
    }

    fn residue(&self, i: &TheoremInstance, src: &mut CombinatorSource) -> Result<Accumulator> {
        let (p, q, _) = i.pqm();
        let mut acc = Accumulator::new(src.bits());
        let c = src.binom(p + q - 1, q) * sg(p) * unit(&i.a, 0)?;
        acc.add(c * src.get(THat, &i.b, 0, p + q)?);
        for j in 1..=q / 2 {
            let c = src.binom(p + q - 2 * j - 1, p - 1) * (2 * sg(p));
            acc.sub(c * src.get(D, &i.a, 0, 2 * j)? * src.get(THat, &i.b, 0, p + q - 2 * j)?);
        }
        Ok(acc)
    }
}

impl ResidueIdentity for QuadraticHalf {
    fn name(&self) -> &'static str {
        "3.5"
    }

    fn is_quadratic(&self) -> bool {
        true
    }

    fn summand(&self, i: &TheoremInstance, src: &mut CombinatorSource, n: i64) -> Result<Float> {
        let (p, q, m) = i.pqm();
        let (nf, half) = nodes(src, n);
        let hq = inv_pow(&half, q);
        let (bn, cn) = (unit(&i.b, n)?, unit(&i.c, n)?);
        let mut v = src.get(NBar, &i.b, n, m)? * src.get(NBar, &i.c, n, p)? * &hq * unit(&i.a, n - 1)? * sg(p + q + m);
        v += src.get(N, &i.b, n, m)? * src.get(N, &i.c, n, p)? * &hq * unit(&i.a, n)?;
        for k in 0..p + m {
            let e = p + q + m - k - 1;
            let c = src.binom(p + q + m - k - 2, q - 1) * (sg(p + m) * bn * cn);
            v -= c * src.get(S, &i.a, n + 1, k + 1)? * inv_pow(&nf, e);
        }
        for j in 1..=m {
            for k in 0..=m - j {
                let e = m + q - j - k;
                let c = src.binom(j + p - 2, p - 1) * src.binom(m + q - k - j - 1, q - 1) * (sg(m) * bn);
                v -= c * src.get(M, &i.c, n, j + p - 1)? * src.get(S, &i.a, n + 1, k + 1)? * inv_pow(&nf, e);
            }
        }
        for j in 1..=p {
            for k in 0..=p - j {
                let e = p + q - j - k;
                let c = src.binom(j + m - 2, m - 1) * src.binom(p + q - k - j - 1, q - 1) * (sg(p) * cn);
                v -= c * src.get(M, &i.b, n, j + m - 1)? * src.get(S, &i.a, n + 1, k + 1)? * inv_pow(&nf, e);
            }
        }
        Ok(v)
    }

    fn residue(&self, i: &TheoremInstance, src: &mut CombinatorSource) -> Result<Accumulator> {
        let (p, q, m) = i.pqm();
        let (b0, c0) = (unit(&i.b, 0)?, unit(&i.c, 0)?);
        let w = p + q + m;
        let mut acc = Accumulator::new(src.bits());
        acc.sub(signed_pair_plus(src, &i.a, w, w)? * (b0 * c0));
        for j in 1..=m + q {
            let c = src.binom(j + p - 2, j - 1) * (b0 * sg(p));
            acc.add(c * src.get(D, &i.c, 0, j + p - 1)? * signed_pair(src, &i.a, m + q - j, m + q - j + 1)?);
        }
        for j in 1..=p + q {
            let c = src.binom(j + m - 2, j - 1) * (c0 * sg(m));
            acc.add(c * src.get(D, &i.b, 0, j + m - 1)? * signed_pair(src, &i.a, p + q - j, p + q - j + 1)?);
        }
        for j1 in 1..=q {
            for j2 in 1..=q + 1 - j1 {
                let c = src.binom(j1 + m - 2, j1 - 1) * src.binom(j2 + p - 2, j2 - 1) * sg(p + m);
                let d = src.get(D, &i.b, 0, j1 + m - 1)? * src.get(D, &i.c, 0, j2 + p - 1)?;
                acc.add(c * d * signed_pair(src, &i.a, q + 1 - j1 - j2, q + 2 - j1 - j2)?);
            }
        }
        Ok(acc)
    }
}

impl ResidueIdentity for QuadraticInteger {
    fn name(&self) -> &'static str {
        "3.6"
    }

    fn is_quadratic(&self) -> bool {
        true
    }

    fn summand(&self, i: &TheoremInstance, src: &mut CombinatorSource, n: i64) -> Result<Float> {
        let (p, q, m) = i.pqm();
        let (nf, half) = nodes(src, n);
        let nq = inv_pow(&nf, q);
        let an = unit(&i.a, n)?;
        let (bp, cp) = (unit(&i.b, n - 1)?, unit(&i.c, n - 1)?);
        let mut v = src.get(NBar, &i.b, n + 1, m)? * src.get(NBar, &i.c, n + 1, p)? * &nq * an * sg(p + q + m);
        v += src.get(N, &i.b, n, m)? * src.get(N, &i.c, n, p)? * &nq * an;
        for k in 0..p + m {
            let e = p + q + m - k - 1;
            let c = src.binom(p + q + m - k - 2, q - 1) * (sg(p + m) * bp * cp);
            v -= c * src.get(S, &i.a, n, k + 1)? * inv_pow(&half, e);
        }
        for j in 1..=m {
            for k in 0..=m - j {
                let e = m + q - j - k;
                let c = src.binom(j + p - 2, p - 1) * src.binom(m + q - k - j - 1, q - 1) * (sg(m) * bp);
                v -= c * src.get(M, &i.c, n - 1, j + p - 1)? * src.get(S, &i.a, n, k + 1)? * inv_pow(&half, e);
            }
        }
        for j in 1..=p {
            for k in 0..=p - j {
                let e = p + q - j - k;
                let c = src.binom(j + m - 2, m - 1) * src.binom(p + q - k - j - 1, q - 1) * (sg(p) * cp);
                v -= c * src.get(M, &i.b, n - 1, j + m - 1)? * src.get(S, &i.a, n, k + 1)? * inv_pow(&half, e);
            }
        }
        Ok(v)
    }

    fn residue(&self, i: &TheoremInstance, src: &mut CombinatorSource) -> Result<Accumulator> {
        let (p, q, m) = i.pqm();
        let a0 = unit(&i.a, 0)?;
        let mut acc = Accumulator::new(src.bits());
        for k1 in 0..=q {
            let c = src.binom(m + k1 - 1, k1) * src.binom(p + q - k1 - 1, q - k1) * (a0 * sg(p + m));
            acc.add(c * src.get(THat, &i.b, 0, m + k1)? * src.get(THat, &i.c, 0, p + q - k1)?);
        }
        for j in 1..=q / 2 {
            for k1 in 0..=q - 2 * j {
                let c = src.binom(m + k1 - 1, k1)
                    * src.binom(p + q - 2 * j - k1 - 1, q - 2 * j - k1)
                    * (2 * sg(p + m));
                let t = src.get(THat, &i.b, 0, m + k1)? * src.get(THat, &i.c, 0, p + q - 2 * j - k1)?;
                acc.sub(c * src.get(D, &i.a, 0, 2 * j)? * t);
            }
        }
        Ok(acc)
    }
}

impl ResidueIdentity for QuadraticMixed {
    fn name(&self) -> &'static str {
        self.name
    }

    fn is_quadratic(&self) -> bool {
        true
    }

    fn summand(&self, i: &TheoremInstance, src: &mut CombinatorSource, n: i64) -> Result<Float> {
        let (p, q, m) = i.pqm();
        let (nf, half) = nodes(src, n);
        let nq = inv_pow(&nf, q);
        let (an, bn) = (unit(&i.a, n)?, unit(&i.b, n)?);
        let mut v = src.get(MBar, &i.b, n, m)? * src.get(NBar, &i.c, n + 1, p)? * &nq * an * sg(p + q + m);
        v += src.get(M, &i.b, n, m)? * src.get(N, &i.c, n, p)? * &nq * an;
        for k in 0..=m {
            let e = m + q - k;
            let c = src.binom(m + q - k - 1, q - 1) * src.binom(p + k - 1, p - 1) * (sg(m) * an * bn);
            v += c * src.get(N, &i.c, n, p + k)? * inv_pow(&nf, e);
        }
        for k in 1..=m {
            for j in 1..=m + 1 - k {
                let e = m + q + 1 - k - j;
                let c = src.binom(m + q - k - j, q - 1) * src.binom(p + k - 2, p - 1) * (sg(m) * bn);
                v -= c * src.get(R, &i.a, n, j)? * src.get(N, &i.c, n, p + k - 1)? * inv_pow(&nf, e);
            }
        }
        let cp = unit(&i.c, n - 1)?;
        for k1 in 0..p {
            for k2 in 0..p - k1 {
                let k3 = p - 1 - k1 - k2;
                let c = src.binom(m + k2 - 1, m - 1) * src.binom(q + k3 - 1, q - 1) * (sg(p) * cp);
                v -= c * src.get(S, &i.a, n, k1 + 1)? * src.get(N, &i.b, n, m + k2)? * inv_pow(&half, k3 + q);
            }
        }
        Ok(v)
    }

    fn residue(&self, i: &TheoremInstance, src: &mut CombinatorSource) -> Result<Accumulator> {
        let (p, q, m) = i.pqm();
        let (a0, b0) = (unit(&i.a, 0)?, unit(&i.b, 0)?);
        let mut acc = Accumulator::new(src.bits());
        let c = src.binom(p + q + m - 1, p - 1) * (a0 * b0 * sg(p));
        acc.add(c * src.get(THat, &i.c, 0, p + q + m)?);
        for j in 1..=q + 1 {
            let c = src.binom(j + m - 2, m - 1) * src.binom(p + q - j, p - 1) * (a0 * sg(p + m));
            acc.add(c * src.get(D, &i.b, 0, j + m - 1)? * src.get(THat, &i.c, 0, p + q + 1 - j)?);
        }
        for j in 1..=(m + q) / 2 {
            let c = src.binom(p + q + m - 2 * j - 1, p - 1) * (2 * b0 * sg(p));
            acc.sub(c * src.get(D, &i.a, 0, 2 * j)? * src.get(THat, &i.c, 0, p + q + m - 2 * j)?);
        }
        for j1 in 1..=q {
            for j2 in 1..=q + 1 - 2 * j1 {
                let c = src.binom(j2 + m - 2, m - 1) * src.binom(p + q - 2 * j1 - j2, p - 1) * (2 * sg(p + m));
                let d = src.get(D, &i.a, 0, 2 * j1)? * src.get(D, &i.b, 0, j2 + m - 1)?;
                acc.sub(c * d * src.get(self.last_block, &i.c, 0, p + q + 1 - 2 * j1 - j2)?);
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqkit::CustomSequence;
    use SequenceId::{A1, A2};

    fn prec() -> Precision {
        Precision::new(30).unwrap()
    }

    #[test]
    fn listed_instances_vanish() {
        let b = Budget::default();
        let cases = [
            TheoremInstance::linear("3.1", 1, 2, A1, A1).unwrap(),
            TheoremInstance::linear("3.2", 2, 2, A2, A1).unwrap(),
            TheoremInstance::quadratic("3.5", 1, 1, 2, A1, A2, A2).unwrap(),
            TheoremInstance::quadratic("3.6", 2, 1, 3, A2, A1, A2).unwrap(),
            TheoremInstance::quadratic("3.7", 1, 2, 2, A2, A2, A2).unwrap(),
        ];
        for inst in cases {
            let r = verify_theorem(&inst, &prec(), &b).unwrap();
            assert!(r.pass, "{}: {:?}", r.instance, r.residual);
            assert!(r.residual.value.to_f64().abs() < 1e-10, "{}", r.instance);
        }
    }

    #[test]
    fn printed_mixed_block_fails_for_alternating_c() {
        let b = Budget::default();
        let inst = TheoremInstance::quadratic("3.7-printed", 1, 2, 2, A1, A1, A2).unwrap();
        let r = verify_theorem(&inst, &prec(), &b).unwrap();
        assert!(r.conclusive && !r.pass, "{:?}", r.residual);
        let inst = TheoremInstance::quadratic("3.7-printed", 1, 2, 2, A1, A1, A1).unwrap();
        assert!(verify_theorem(&inst, &prec(), &b).unwrap().pass);
    }

    #[test]
    fn invalid_instances() {
        assert!(TheoremInstance::linear("3.1", 1, 1, A1, A1).is_err());
        assert!(TheoremInstance::linear("3.1", 0, 2, A1, A1).is_err());
        assert!(TheoremInstance::linear("3.9", 1, 2, A1, A1).is_err());
        let custom = CustomSequence::new("ones", 0.0, |_, bits| Float::with_val(bits, 1)).unwrap();
        let inst = TheoremInstance::linear("3.1", 1, 2, SequenceId::Custom(custom), A1).unwrap();
        assert!(matches!(
            theorem_residual(&inst, &prec(), &Budget::default()),
            Err(Error::UnsupportedSequence(_))
        ));
    }

    #[test]
    fn registry_names() {
        let names: Vec<&str> = residue_identities().iter().map(|t| t.name()).collect();
        assert_eq!(names, ["3.1", "3.2", "3.5", "3.6", "3.7", "3.7-printed"]);
    }
}
