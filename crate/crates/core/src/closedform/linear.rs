//! Closed forms of the linear sums `T_{p,q}` and `S_{p,q}` with optional bars on `p` and `q`.
//!
//! Each identity has the shape `(1 ± (-1)^(p+q)) * sum = rhs`. When the prefactor is 2 the
//! sum is `rhs / 2`; when it is 0 the identity only says that `rhs` vanishes.

use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};

use super::expr::{binomial, ConstExpr, Monomial};
use crate::constants::ConstAtom::{self, TBar, Tau, Zeta, ZetaBar};
use crate::error::{Error, Result};
use crate::summator::{Exponent, SumKind, SumSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinearVariant {
    Plain,
    BarP,
    BarPBarQ,
    BarQ,
}

impl LinearVariant {
    pub const ALL: [LinearVariant; 4] = [
        LinearVariant::Plain,
        LinearVariant::BarP,
        LinearVariant::BarPBarQ,
        LinearVariant::BarQ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LinearVariant::Plain => "plain",
            LinearVariant::BarP => "bar_p",
            LinearVariant::BarPBarQ => "bar_p_bar_q",
            LinearVariant::BarQ => "bar_q",
        }
    }

    /// Position 1..=4 in the order plain, bar_p, bar_p_bar_q, bar_q.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: i64) -> Result<Self> {
        match n {
            1..=4 => Ok(Self::ALL[n as usize - 1]),
            _ => Err(Error::Unknown {
                what: "variant",
                name: n.to_string(),
            }),
        }
    }

    pub fn bar_p(self) -> bool {
        matches!(self, LinearVariant::BarP | LinearVariant::BarPBarQ)
    }

    pub fn bar_q(self) -> bool {
        matches!(self, LinearVariant::BarPBarQ | LinearVariant::BarQ)
    }
}

impl fmt::Display for LinearVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LinearVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(n) = s.parse::<i64>() {
            return LinearVariant::from_number(n);
        }
        LinearVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Unknown {
                what: "variant",
                name: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedFormOutcome {
    /// The sum itself.
    Determined(ConstExpr),
    /// The prefactor vanishes; the expression is asserted to equal zero.
    ParityUndetermined(ConstExpr),
}

impl ClosedFormOutcome {
    pub fn expr(&self) -> &ConstExpr {
        match self {
            ClosedFormOutcome::Determined(e) | ClosedFormOutcome::ParityUndetermined(e) => e,
        }
    }

    pub fn is_determined(&self) -> bool {
        matches!(self, ClosedFormOutcome::Determined(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            ClosedFormOutcome::Determined(_) => "determined",
            ClosedFormOutcome::ParityUndetermined(_) => "parity_undetermined",
        }
    }
}

/// The sum a closed form describes.
pub fn linear_spec(kind: SumKind, p: i64, q: i64, variant: LinearVariant) -> Result<SumSpec> {
    check(p, q, variant)?;
    SumSpec::new(kind, vec![Exponent::new(p, variant.bar_p())?], q, variant.bar_q())
}

pub fn linear_closed(kind: SumKind, p: i64, q: i64, variant: LinearVariant) -> Result<ClosedFormOutcome> {
    match kind {
        SumKind::T => linear_t_closed(p, q, variant),
        SumKind::S => linear_s_closed(p, q, variant),
    }
}

fn check(p: i64, q: i64, variant: LinearVariant) -> Result<()> {
    if p < 1 || p > u32::MAX as i64 / 4 {
        return Err(Error::InvalidSpec(format!("p must be positive, got {p}")));
    }
    let q_min = if variant.bar_q() { 1 } else { 2 };
    if q < q_min || q > u32::MAX as i64 / 4 {
        return Err(Error::InvalidSpec(format!(
            "q must be at least {q_min} for variant {variant}, got {q}"
        )));
    }
    Ok(())
}

fn sg(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Accumulates `coefficient * atom * atom` terms.
struct Builder(ConstExpr);

impl Builder {
    fn push(&mut self, c: Integer, atoms: &[ConstAtom]) {
        self.0.add_term(c, Monomial::new(atoms.to_vec()));
    }

    fn finish(self, prefactor: i64) -> ClosedFormOutcome {
        if prefactor == 0 {
            ClosedFormOutcome::ParityUndetermined(self.0)
        } else {
            ClosedFormOutcome::Determined(self.0.scale(&Rational::from((1, prefactor))))
        }
    }
}

fn k(n: i64) -> u32 {
    n as u32
}

pub fn linear_t_closed(p: i64, q: i64, variant: LinearVariant) -> Result<ClosedFormOutcome> {
    check(p, q, variant)?;
    let w = p + q;
    let sp = sg(p);
    let mut b = Builder(ConstExpr::zero());
    let prefactor;
    match variant {
        LinearVariant::Plain => {
            prefactor = 1 - sg(w);
            b.push(Integer::from(sg(w)), &[Tau(k(w))]);
            b.push(Integer::from(-sp * (1 + sg(q))), &[Tau(k(p)), Tau(k(q))]);
            for i in 0..p {
                let c = binomial(w - i - 2, q - 1) * (-sp * (sg(i) - 1));
                b.push(c, &[Tau(k(i + 1)), Zeta(k(w - i - 1))]);
            }
            for i in 1..=q {
                let c = binomial(i + p - 2, p - 1) * (sp * (1 - sg(q - i)));
                b.push(c, &[Tau(k(q - i + 1)), Zeta(k(i + p - 1))]);
            }
        }
        LinearVariant::BarP => {
            prefactor = 1 + sg(w);
            b.push(Integer::from(-sg(w)), &[TBar(k(w))]);
            b.push(Integer::from(sp * (1 + sg(q))), &[TBar(k(p)), Tau(k(q))]);
            for i in 0..p {
                let c = binomial(w - i - 2, q - 1) * (-sp * (sg(i) + 1));
                b.push(c, &[TBar(k(i + 1)), Zeta(k(w - i - 1))]);
            }
            for i in 1..=q {
                let c = binomial(i + p - 2, p - 1) * (-sp * (1 + sg(q - i)));
                b.push(c, &[TBar(k(q - i + 1)), ZetaBar(k(i + p - 1))]);
            }
        }
        LinearVariant::BarPBarQ => {
            prefactor = 1 - sg(w);
            b.push(Integer::from(sg(w)), &[Tau(k(w))]);
            b.push(Integer::from(sp * (1 - sg(q))), &[TBar(k(p)), TBar(k(q))]);
            for i in 0..p {
                let c = binomial(w - i - 2, q - 1) * (sp * (sg(i) - 1));
                b.push(c, &[Tau(k(i + 1)), ZetaBar(k(w - i - 1))]);
            }
            for i in 1..=q {
                let c = binomial(i + p - 2, p - 1) * (-sp * (1 - sg(q - i)));
                b.push(c, &[Tau(k(q - i + 1)), ZetaBar(k(i + p - 1))]);
            }
        }
        LinearVariant::BarQ => {
            prefactor = 1 + sg(w);
            b.push(Integer::from(-sg(w)), &[TBar(k(w))]);
            b.push(Integer::from(-sp * (1 - sg(q))), &[Tau(k(p)), TBar(k(q))]);
            for i in 0..p {
                let c = binomial(w - i - 2, q - 1) * (sp * (sg(i) + 1));
                b.push(c, &[TBar(k(i + 1)), ZetaBar(k(w - i - 1))]);
            }
            for i in 1..=q {
                let c = binomial(i + p - 2, p - 1) * (sp * (1 + sg(q - i)));
                b.push(c, &[TBar(k(q - i + 1)), Zeta(k(i + p - 1))]);
            }
        }
    }
    Ok(b.finish(prefactor))
}

pub fn linear_s_closed(p: i64, q: i64, variant: LinearVariant) -> Result<ClosedFormOutcome> {
    check(p, q, variant)?;
    let w = p + q;
    let sp = sg(p);
    let lead = binomial(w - 1, p - 1);
    let mut b = Builder(ConstExpr::zero());
    let prefactor;
    match variant {
        LinearVariant::Plain => {
            prefactor = 1 - sg(w);
            b.push(Integer::from(-sp * (1 + sg(q))), &[Tau(k(p)), Zeta(k(q))]);
            b.push(lead * -sp, &[Tau(k(w))]);
            for i in 0..p {
                let c = binomial(w - i - 2, q - 1) * (-sp * (sg(i) - 1));
                b.push(c, &[Tau(k(i + 1)), Tau(k(w - i - 1))]);
            }
            for j in 1..=q / 2 {
                let c = binomial(w - 2 * j - 1, p - 1) * (2 * sp);
                b.push(c, &[Zeta(k(2 * j)), Tau(k(w - 2 * j))]);
            }
        }
        LinearVariant::BarP => {
            prefactor = 1 + sg(w);
            b.push(Integer::from(sp * (1 + sg(q))), &[TBar(k(p)), Zeta(k(q))]);
            b.push(lead * sp, &[TBar(k(w))]);
            for i in 0..p {
                let c = binomial(w - i - 2, q - 1) * (-sp * (sg(i) + 1));
                b.push(c, &[TBar(k(i + 1)), Tau(k(w - i - 1))]);
            }
            for j in 1..=q / 2 {
                let c = binomial(w - 2 * j - 1, p - 1) * (2 * sp);
                b.push(c, &[ZetaBar(k(2 * j)), TBar(k(w - 2 * j))]);
            }
        }
        LinearVariant::BarPBarQ => {
            prefactor = 1 + sg(w);
            b.push(Integer::from(sp * (1 + sg(q))), &[TBar(k(p)), ZetaBar(k(q))]);
            b.push(lead * -sp, &[TBar(k(w))]);
            for i in 0..p {
                let c = binomial(w - i - 2, q - 1) * (-sp * (sg(i) - 1));
                b.push(c, &[Tau(k(i + 1)), TBar(k(w - i - 1))]);
            }
            for j in 1..=q / 2 {
                let c = binomial(w - 2 * j - 1, p - 1) * (2 * sp);
                b.push(c, &[Zeta(k(2 * j)), TBar(k(w - 2 * j))]);
            }
        }
        LinearVariant::BarQ => {
            prefactor = 1 - sg(w);
            b.push(Integer::from(-sp * (1 + sg(q))), &[Tau(k(p)), ZetaBar(k(q))]);
            b.push(lead * sp, &[Tau(k(w))]);
            for i in 0..p {
                let c = binomial(w - i - 2, q - 1) * (-sp * (sg(i) + 1));
                b.push(c, &[TBar(k(i + 1)), TBar(k(w - i - 1))]);
            }
            for j in 1..=q / 2 {
                let c = binomial(w - 2 * j - 1, p - 1) * (2 * sp);
                b.push(c, &[ZetaBar(k(2 * j)), Tau(k(w - 2 * j))]);
            }
        }
    }
    Ok(b.finish(prefactor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{Budget, Precision};
    use crate::summator::eval_direct;
    use rug::Float;

    fn determined(o: ClosedFormOutcome) -> ConstExpr {
        match o {
            ClosedFormOutcome::Determined(e) => e,
            other => panic!("expected a determined outcome, got {other:?}"),
        }
    }

    #[test]
    fn weight_three_forms() {
        let t = determined(linear_t_closed(1, 2, LinearVariant::Plain).unwrap());
        assert_eq!(t.to_string(), "(-1/2)*tau(3) + 1*tau(1)*tau(2)");
        let s = determined(linear_s_closed(1, 2, LinearVariant::Plain).unwrap());
        assert_eq!(s.to_string(), "(1/2)*tau(3)");
    }

    #[test]
    fn parity_classes() {
        let o = linear_t_closed(1, 3, LinearVariant::Plain).unwrap();
        assert_eq!(o.label(), "parity_undetermined");
        assert!(!linear_s_closed(2, 2, LinearVariant::Plain).unwrap().is_determined());
        assert!(linear_s_closed(2, 3, LinearVariant::Plain).unwrap().is_determined());
        assert!(linear_t_closed(2, 2, LinearVariant::BarP).unwrap().is_determined());
    }

    #[test]
    fn preconditions() {
        assert!(linear_t_closed(1, 1, LinearVariant::Plain).is_err());
        assert!(linear_t_closed(1, 1, LinearVariant::BarP).is_err());
        assert!(linear_t_closed(1, 1, LinearVariant::BarQ).is_ok());
        assert!(linear_s_closed(0, 2, LinearVariant::Plain).is_err());
        assert_eq!("bar_p_bar_q".parse::<LinearVariant>().unwrap(), LinearVariant::BarPBarQ);
        assert_eq!("4".parse::<LinearVariant>().unwrap(), LinearVariant::BarQ);
        assert!("5".parse::<LinearVariant>().is_err());
        let spec = linear_spec(SumKind::S, 2, 1, LinearVariant::BarPBarQ).unwrap();
        assert!(spec.q_barred && spec.exponents[0].barred);
    }

    #[test]
    fn matches_direct_summation() {
        let prec = Precision::new(30).unwrap();
        let budget = Budget::default();
        let cases = [
            (SumKind::T, 2, 2, LinearVariant::BarP),
            (SumKind::S, 1, 2, LinearVariant::BarQ),
            (SumKind::S, 1, 1, LinearVariant::BarPBarQ),
            (SumKind::T, 1, 1, LinearVariant::BarQ),
        ];
        for (kind, p, q, v) in cases {
            let e = determined(linear_closed(kind, p, q, v).unwrap());
            let closed = e.eval(&prec).unwrap();
            let direct = eval_direct(&linear_spec(kind, p, q, v).unwrap(), &prec, &budget).unwrap();
            let d = Float::with_val(prec.bits(), &closed.value - &direct.value).abs();
            assert!(d < 1e-20, "{kind} {p} {q} {v}: {d}");
        }
    }

    #[test]
    fn vanishing_identities() {
        let prec = Precision::new(30).unwrap();
        for (p, q) in [(1, 3), (2, 2), (3, 3)] {
            for kind in [SumKind::T, SumKind::S] {
                let o = linear_closed(kind, p, q, LinearVariant::Plain).unwrap();
                assert!(!o.is_determined());
                assert!(o.expr().eval(&prec).unwrap().value.abs() < 1e-25);
            }
        }
    }
}
