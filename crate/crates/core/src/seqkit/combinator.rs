//! The auxiliary sums built from a sequence `A` that appear as Laurent coefficients of
//! the kernels: `D, E, Ebar, Ehat, Etilde, that, tau, F, Fbar, Fhat, Ftilde, G, L, M,
//! Mbar, R, N, Nbar, S`.
//!
//! `combinator` evaluates from the defining sums; `specialize` gives the closed form for
//! `A1` and `A2` in terms of one harmonic number and depth-one constants.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::Float;

use super::sequence::{sign, SequenceId};
use super::series::{sum_series, WeightedSeries};
use crate::constants::{eval_atom, ConstAtom};
use crate::error::{Error, Result};
use crate::harmonics::{harmonic, HarmonicFamily, HarmonicKind};
use crate::precision::{rounding_bound, Budget, EvalResult, Precision};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CombinatorKind {
    D,
    E,
    EBar,
    EHat,
    ETilde,
    THat,
    Tau,
    F,
    FBar,
    FHat,
    FTilde,
    G,
    L,
    M,
    MBar,
    R,
    N,
    NBar,
    S,
}

impl CombinatorKind {
    pub const ALL: [CombinatorKind; 19] = [
        CombinatorKind::D,
        CombinatorKind::E,
        CombinatorKind::EBar,
        CombinatorKind::EHat,
        CombinatorKind::ETilde,
        CombinatorKind::THat,
        CombinatorKind::Tau,
        CombinatorKind::F,
        CombinatorKind::FBar,
        CombinatorKind::FHat,
        CombinatorKind::FTilde,
        CombinatorKind::G,
        CombinatorKind::L,
        CombinatorKind::M,
        CombinatorKind::MBar,
        CombinatorKind::R,
        CombinatorKind::N,
        CombinatorKind::NBar,
        CombinatorKind::S,
    ];

    /// Kinds with an `A1`/`A2` closed form.
    pub const SPECIALIZED: [CombinatorKind; 9] = [
        CombinatorKind::D,
        CombinatorKind::THat,
        CombinatorKind::Tau,
        CombinatorKind::M,
        CombinatorKind::MBar,
        CombinatorKind::R,
        CombinatorKind::N,
        CombinatorKind::NBar,
        CombinatorKind::S,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CombinatorKind::D => "D",
            CombinatorKind::E => "E",
            CombinatorKind::EBar => "Ebar",
            CombinatorKind::EHat => "Ehat",
            CombinatorKind::ETilde => "Etilde",
            CombinatorKind::THat => "that",
            CombinatorKind::Tau => "tau",
            CombinatorKind::F => "F",
            CombinatorKind::FBar => "Fbar",
            CombinatorKind::FHat => "Fhat",
            CombinatorKind::FTilde => "Ftilde",
            CombinatorKind::G => "G",
            CombinatorKind::L => "L",
            CombinatorKind::M => "M",
            CombinatorKind::MBar => "Mbar",
            CombinatorKind::R => "R",
            CombinatorKind::N => "N",
            CombinatorKind::NBar => "Nbar",
            CombinatorKind::S => "S",
        }
    }

    /// `D`, `that` and `tau` take no index.
    pub fn takes_index(self) -> bool {
        !matches!(self, CombinatorKind::D | CombinatorKind::THat | CombinatorKind::Tau)
    }

    pub fn min_index(self) -> i64 {
        match self {
            CombinatorKind::MBar | CombinatorKind::NBar | CombinatorKind::S => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for CombinatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CombinatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CombinatorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unknown {
                what: "combinator",
                name: s.to_string(),
            })
    }
}

fn check(kind: CombinatorKind, n: i64, j: i64) -> Result<u32> {
    if j < 1 || j > u32::MAX as i64 {
        return Err(Error::InvalidOrder(j));
    }
    if kind.takes_index() && n < kind.min_index() {
        return Err(Error::param(format!(
            "{kind} needs n >= {}, got {n}",
            kind.min_index()
        )));
    }
    Ok(j as u32)
}

/// `kind` of `seq` at index `n` and order `j`, from its definition.
///
/// `n` is ignored for `D`, `that` and `tau`.
pub fn combinator(
    kind: CombinatorKind,
    seq: &SequenceId,
    n: i64,
    j: i64,
    prec: &Precision,
) -> Result<EvalResult> {
    combinator_with_budget(kind, seq, n, j, prec, &Budget::default())
}

pub fn combinator_with_budget(
    kind: CombinatorKind,
    seq: &SequenceId,
    n: i64,
    j: i64,
    prec: &Precision,
    budget: &Budget,
) -> Result<EvalResult> {
    let j = check(kind, n, j)?;
    let mut r = Definitional { seq, prec, budget }.eval(kind, n, j)?;
    r.method = format!("definition/{}", r.method);
    Ok(r)
}

struct Definitional<'a> {
    seq: &'a SequenceId,
    prec: &'a Precision,
    budget: &'a Budget,
}

fn zero(bits: u32) -> Float {
    Float::new(bits)
}

fn half(bits: u32) -> Float {
    Float::with_val(bits, -0.5)
}

impl Definitional<'_> {
    fn bits(&self) -> u32 {
        self.prec.bits()
    }

    fn eval(&self, kind: CombinatorKind, n: i64, j: u32) -> Result<EvalResult> {
        use CombinatorKind::*;
        let bits = self.bits();
        let sj = sign(j as i64);
        Ok(match kind {
            D if j == 1 => EvalResult::zero(bits, "convention"),
            D => self.infinite(0, zero(bits), j, false)?,
            E => self.finite(n, |k| n - k, zero(bits), j),
            EBar => self.finite(n, |k| k - n - 1, zero(bits), j),
            EHat => self.finite(n, |k| n - k, half(bits), j),
            ETilde => self.finite(n, |k| k - n - 1, half(bits), j),
            THat => self.infinite(-1, half(bits), j, true)?,
            Tau => self.infinite(0, half(bits), j, true)?,
            F => self.infinite(n, zero(bits), j, true)?,
            FBar => self.infinite(-n, zero(bits), j, true)?,
            FHat => self.infinite(n, half(bits), j, true)?,
            FTilde => self.infinite(-n, half(bits), j, true)?,
            G if n == 0 => EvalResult::zero(bits, "convention"),
            G => {
                let a0 = self.a0_over(Float::with_val(bits, n), j);
                combine([
                    (1, self.eval(E, n, j)?),
                    (-1, self.eval(EBar, n - 1, j)?),
                    (-1, a0),
                ])
            }
            L => combine([(1, self.eval(F, n, j)?), (sj, self.eval(FBar, n, j)?)]),
            M => combine([(1, self.eval(E, n, j)?), (sj, self.eval(F, n, j)?)]),
            MBar => combine([(1, self.eval(FBar, n, j)?), (-1, self.eval(EBar, n - 1, j)?)]),
            R => combine([(1, self.eval(G, n, j)?), (sj, self.eval(L, n, j)?)]),
            N => combine([(1, self.eval(EHat, n, j)?), (sj, self.eval(FHat, n - 1, j)?)]),
            NBar => combine([(1, self.eval(FTilde, n, j)?), (-1, self.eval(ETilde, n - 1, j)?)]),
            S => {
                let a0 = self.a0_over(Float::with_val(bits, n) - 0.5f64, j);
                combine([(1, self.eval(N, n, j)?), (1, self.eval(NBar, n, j)?), (-1, a0)])
            }
        })
    }

    /// `sum_{k=1}^n a_{index(k)} / (k + offset)^j`; empty for `n <= 0`.
    fn finite(&self, n: i64, index: impl Fn(i64) -> i64, offset: Float, j: u32) -> EvalResult {
        let bits = self.bits();
        let mut acc = Float::new(bits);
        for k in 1..=n.max(0) {
            let base = Float::with_val(bits, &offset + k);
            acc += base.pow(-(j as i32)) * self.seq.value(index(k), bits);
        }
        let bound = rounding_bound(&acc) * (n.max(1) as u32);
        EvalResult::new(acc, bound, "finite", n.max(0) as u64)
    }

    /// `sum_{k>=1} a_{k+shift}/(k+offset)^j`, with `- a_k/k` subtracted termwise at
    /// `j = 1` when `regularize` is set.
    fn infinite(&self, shift: i64, offset: Float, j: u32, regularize: bool) -> Result<EvalResult> {
        let bits = self.bits();
        let mut series = WeightedSeries::new(1).part(1, shift, offset, j);
        if j == 1 && regularize {
            series = series.part(-1, 0, zero(bits), 1);
        }
        sum_series(&series, self.seq, self.prec, self.budget)
    }

    fn a0_over(&self, base: Float, j: u32) -> EvalResult {
        let bits = self.bits();
        let v = base.pow(-(j as i32)) * self.seq.value(0, bits);
        EvalResult::exact(v, "finite")
    }
}

/// Signed sum of results with summed bounds.
pub fn combine<const K: usize>(parts: [(i32, EvalResult); K]) -> EvalResult {
    let bits = parts[0].1.value.prec();
    let mut value = Float::new(bits);
    let mut bound = Float::new(bits);
    let mut terms = 0;
    let mut methods: Vec<String> = Vec::new();
    for (s, r) in parts {
        value += Float::with_val(bits, &r.value * s);
        bound += &r.error_bound;
        terms += r.terms_used;
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
    }
    bound += rounding_bound(&value);
    EvalResult::new(value, bound, methods.join("+"), terms)
}

/// `coef * h` with `h` a harmonic number at `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarmonicTerm {
    pub coef: i32,
    pub kind: HarmonicKind,
    pub index: u64,
}

/// Closed form `harmonic + sum coef * atom` of a specialized combinator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializedForm {
    pub harmonic: Option<HarmonicTerm>,
    pub constants: Vec<(i32, ConstAtom)>,
}

impl SpecializedForm {
    fn constant(constants: Vec<(i32, ConstAtom)>) -> Self {
        SpecializedForm {
            harmonic: None,
            constants: constants.into_iter().filter(|(c, _)| *c != 0).collect(),
        }
    }

    fn with(coef: i32, family: HarmonicFamily, j: u32, index: i64, constants: Vec<(i32, ConstAtom)>) -> Self {
        let mut form = SpecializedForm::constant(constants);
        if coef != 0 && index > 0 {
            form.harmonic = Some(HarmonicTerm {
                coef,
                kind: HarmonicKind { family, order: j },
                index: index as u64,
            });
        }
        form
    }

    /// Evaluate with caller-supplied harmonic numbers and constants.
    pub fn eval_with(
        &self,
        bits: u32,
        mut harmonic: impl FnMut(HarmonicKind, u64) -> Float,
        mut atom: impl FnMut(ConstAtom) -> Float,
    ) -> Float {
        let mut acc = Float::new(bits);
        if let Some(h) = &self.harmonic {
            acc += harmonic(h.kind, h.index) * h.coef;
        }
        for (c, a) in &self.constants {
            acc += atom(*a) * *c;
        }
        acc
    }
}

/// Closed form of `kind` for `A1` or `A2`.
pub fn specialize(kind: CombinatorKind, seq: &SequenceId, n: i64, j: i64) -> Result<SpecializedForm> {
    use CombinatorKind::{MBar, NBar, THat, D, M, N, R, S};
    use ConstAtom::{Log2, TBar, Zeta, ZetaBar};
    use HarmonicFamily::*;
    let not_specialized = || Error::NotSpecialized {
        kind: kind.name().to_string(),
        sequence: seq.name().to_string(),
    };
    if !CombinatorKind::SPECIALIZED.contains(&kind) || !seq.is_builtin() {
        return Err(not_specialized());
    }
    let j = check(kind, n, j)?;
    let sj = sign(j as i64);
    let sn = sign(n);
    let one = j == 1;
    let a1 = matches!(seq, SequenceId::A1);
    Ok(match (kind, a1) {
        (D, true) => SpecializedForm::constant(vec![(1, Zeta(j))]),
        (D, false) if one => SpecializedForm::constant(vec![]),
        (D, false) => SpecializedForm::constant(vec![(-1, ZetaBar(j))]),
        (THat, true) | (CombinatorKind::Tau, true) => SpecializedForm::constant(vec![(1, ConstAtom::Tau(j))]),
        (THat, false) => SpecializedForm::constant(vec![(1, TBar(j)), (one as i32, Log2)]),
        (CombinatorKind::Tau, false) => SpecializedForm::constant(vec![(-1, TBar(j)), (one as i32, Log2)]),
        (M, true) => SpecializedForm::with(1, Plain, j, n, vec![(sj, Zeta(j))]),
        (M, false) if one => SpecializedForm::with(-sn, Alternating, j, n, vec![(sj * (1 - sn), Log2)]),
        (M, false) => SpecializedForm::with(-sn, Alternating, j, n, vec![(-sj * sn, ZetaBar(j))]),
        (MBar, true) => SpecializedForm::with(-1, Plain, j, n - 1, vec![(1, Zeta(j))]),
        (MBar, false) if one => SpecializedForm::with(sn, Alternating, j, n - 1, vec![(1 - sn, Log2)]),
        (MBar, false) => SpecializedForm::with(sn, Alternating, j, n - 1, vec![(-sn, ZetaBar(j))]),
        (R, true) => SpecializedForm::constant(vec![(1 + sj, Zeta(j))]),
        (R, false) => SpecializedForm::constant(vec![(-sn * (1 + sj), ZetaBar(j))]),
        (N, true) => SpecializedForm::with(1, Odd, j, n, vec![(sj, ConstAtom::Tau(j))]),
        (N, false) if one => {
            SpecializedForm::with(-sn, OddAlternating, j, n, vec![(sj * sn, TBar(1)), (sj, Log2)])
        }
        (N, false) => SpecializedForm::with(-sn, OddAlternating, j, n, vec![(sj * sn, TBar(j))]),
        (NBar, true) => SpecializedForm::with(-1, Odd, j, n - 1, vec![(1, ConstAtom::Tau(j))]),
        (NBar, false) if one => {
            SpecializedForm::with(sn, OddAlternating, j, n - 1, vec![(-sn, TBar(1)), (1, Log2)])
        }
        (NBar, false) => SpecializedForm::with(sn, OddAlternating, j, n - 1, vec![(-sn, TBar(j))]),
        (S, true) => SpecializedForm::constant(vec![(1 + sj, ConstAtom::Tau(j))]),
        (S, false) => SpecializedForm::constant(vec![(-sn * (1 - sj), TBar(j))]),
        _ => return Err(not_specialized()),
    })
}

/// Closed-form value of `kind` for `A1`/`A2`.
pub fn combinator_closed(
    kind: CombinatorKind,
    seq: &SequenceId,
    n: i64,
    j: i64,
    prec: &Precision,
) -> Result<EvalResult> {
    let form = specialize(kind, seq, n, j)?;
    let bits = prec.bits();
    let mut bound = Float::new(bits);
    let mut failure = None;
    let value = form.eval_with(
        bits,
        |k, idx| harmonic(k, idx, prec),
        |a| match eval_atom(a, prec) {
            Ok(r) => {
                bound += &r.error_bound * Float::with_val(bits, 2);
                r.value
            }
            Err(e) => {
                failure = Some(e);
                Float::new(bits)
            }
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    bound += rounding_bound(&value) * 4u32;
    Ok(EvalResult::new(value, bound, "closed-form", 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqkit::sequence::CustomSequence;

    fn prec() -> Precision {
        Precision::new(30).unwrap()
    }

    fn val(kind: CombinatorKind, seq: &SequenceId, n: i64, j: i64) -> Float {
        combinator(kind, seq, n, j, &prec()).unwrap().value
    }

    fn atom(a: ConstAtom) -> Float {
        eval_atom(a, &prec()).unwrap().value
    }

    fn near(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs() < tol
    }

    #[test]
    fn listed_values() {
        let p = prec();
        assert!(val(CombinatorKind::E, &SequenceId::A2, 0, 3).is_zero());
        assert!(val(CombinatorKind::D, &SequenceId::A2, 7, 1).is_zero());
        assert!(near(&val(CombinatorKind::D, &SequenceId::A1, 0, 2), &atom(ConstAtom::Zeta(2)), 1e-35));
        assert!(val(CombinatorKind::S, &SequenceId::A1, 5, 3).abs() < 1e-35);
        let r = combinator_closed(CombinatorKind::R, &SequenceId::A1, 4, 2, &p).unwrap();
        assert!(near(&r.value, &(atom(ConstAtom::Zeta(2)) * 2u32), 1e-35));
        let n = combinator_closed(CombinatorKind::N, &SequenceId::A1, 2, 1, &p).unwrap();
        let want = Float::with_val(p.bits(), 8) / 3u32 - atom(ConstAtom::Log2) * 2u32;
        assert!(near(&n.value, &want, 1e-35));
        let s = combinator_closed(CombinatorKind::S, &SequenceId::A2, 3, 2, &p).unwrap();
        assert!(s.value.is_zero());
    }

    #[test]
    fn index_and_order_checks() {
        let p = prec();
        assert_eq!(
            combinator(CombinatorKind::M, &SequenceId::A1, 1, 0, &p).unwrap_err(),
            Error::InvalidOrder(0)
        );
        assert!(combinator(CombinatorKind::NBar, &SequenceId::A1, 0, 2, &p).is_err());
        assert!(combinator(CombinatorKind::E, &SequenceId::A1, -1, 2, &p).is_err());
        assert!(matches!(
            combinator_closed(CombinatorKind::E, &SequenceId::A1, 1, 2, &p),
            Err(Error::NotSpecialized { .. })
        ));
        assert_eq!("Nbar".parse::<CombinatorKind>().unwrap(), CombinatorKind::NBar);
    }

    #[test]
    fn closed_forms_match_definitions() {
        let p = prec();
        for seq in [SequenceId::A1, SequenceId::A2] {
            for kind in CombinatorKind::SPECIALIZED {
                for n in [1i64, 2, 5, 8] {
                    for j in 1..=4 {
                        let d = combinator(kind, &seq, n, j, &p).unwrap();
                        let c = combinator_closed(kind, &seq, n, j, &p).unwrap();
                        assert!(
                            near(&d.value, &c.value, 1e-25),
                            "{kind} {seq} n={n} j={j}: {} vs {}",
                            d.value,
                            c.value
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn composite_identities() {
        let p = prec();
        let bits = p.bits();
        for seq in [SequenceId::A1, SequenceId::A2] {
            for n in 1..6i64 {
                for j in 1..5i64 {
                    let s = val(CombinatorKind::S, &seq, n, j);
                    let a0 = Float::with_val(bits, n as f64 - 0.5).pow(-(j as i32));
                    let rhs = val(CombinatorKind::N, &seq, n, j) + val(CombinatorKind::NBar, &seq, n, j) - a0;
                    assert!(near(&s, &rhs, 1e-30));
                    let sj = sign(j);
                    let r = val(CombinatorKind::R, &seq, n, j);
                    let rhs = val(CombinatorKind::G, &seq, n, j) + val(CombinatorKind::L, &seq, n, j) * sj;
                    assert!(near(&r, &rhs, 1e-30));
                    let m = val(CombinatorKind::M, &seq, n, j);
                    let rhs = val(CombinatorKind::E, &seq, n, j) + val(CombinatorKind::F, &seq, n, j) * sj;
                    assert!(near(&m, &rhs, 1e-30));
                }
            }
        }
    }

    #[test]
    fn index_zero_reductions() {
        // N_0(j) = (-1)^j that(j), M_0(j) = (-1)^j D(j)
        let p = prec();
        for seq in [SequenceId::A1, SequenceId::A2] {
            for j in 1..5i64 {
                let sj = sign(j);
                let n0 = val(CombinatorKind::N, &seq, 0, j);
                let that = val(CombinatorKind::THat, &seq, 0, j) * sj;
                assert!(near(&n0, &that, 1e-30));
                let m0 = val(CombinatorKind::M, &seq, 0, j);
                let d = val(CombinatorKind::D, &seq, 0, j) * sj;
                assert!(near(&m0, &d, 1e-30));
                let c = combinator_closed(CombinatorKind::N, &seq, 0, j, &p).unwrap();
                assert!(near(&c.value, &n0, 1e-30));
            }
        }
    }

    #[test]
    fn custom_constant_sequence_agrees_with_a1() {
        let p = prec();
        let one = CustomSequence::new("ones", 0.0, |_, b| Float::with_val(b, 1)).unwrap();
        let seq = SequenceId::Custom(one);
        for kind in [CombinatorKind::Tau, CombinatorKind::FHat, CombinatorKind::M] {
            let c = combinator(kind, &seq, 2, 2, &p).unwrap();
            let a = val(kind, &SequenceId::A1, 2, 2);
            let diff = Float::with_val(p.bits(), &c.value - &a).abs();
            assert!(diff <= c.error_bound, "{kind}: {diff} > {}", c.error_bound);
        }
        let c = combinator(CombinatorKind::THat, &seq, 0, 1, &p).unwrap();
        let diff = Float::with_val(p.bits(), &c.value - atom(ConstAtom::Tau(1))).abs();
        assert!(diff <= c.error_bound);
    }
}
