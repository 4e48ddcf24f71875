//! Depth-one constants the closed forms are written in.
//!
//! | atom         | series                                   | evaluated by            |
//! |--------------|------------------------------------------|-------------------------|
//! | `zeta(k)`    | `sum 1/n^k`, with `zeta(1) := 0`         | Euler–Maclaurin         |
//! | `zetabar(k)` | `sum (-1)^(n-1)/n^k`, `zetabar(1)=log 2` | alternating acceleration|
//! | `tau(k)`     | `sum 1/(n-1/2)^k`, with `tau(1) := 2 log 2` | Euler–Maclaurin      |
//! | `tbar(k)`    | `sum (-1)^(n-1)/(n-1/2)^k`               | alternating acceleration|
//! | `log2`       | `log 2`                                  | alternating acceleration|
//!
//! `tau` and `tbar` are kept atomic; their reductions to `zeta` and Dirichlet beta
//! values only appear in tests.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use rug::Float;

use crate::accel::{alternating_hurwitz, hurwitz_zeta, Tail};
use crate::error::{Error, Result};
use crate::precision::{format_float, pow10, EvalResult, Precision};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstAtom {
    Zeta(u32),
    ZetaBar(u32),
    Tau(u32),
    TBar(u32),
    Log2,
}

impl ConstAtom {
    /// Validating constructor for the ordered atoms.
    pub fn new(kind: AtomKind, order: i64) -> Result<Self> {
        if order <= 0 {
            return Err(Error::InvalidOrder(order));
        }
        let k = u32::try_from(order).map_err(|_| Error::InvalidOrder(order))?;
        Ok(match kind {
            AtomKind::Zeta => ConstAtom::Zeta(k),
            AtomKind::ZetaBar => ConstAtom::ZetaBar(k),
            AtomKind::Tau => ConstAtom::Tau(k),
            AtomKind::TBar => ConstAtom::TBar(k),
        })
    }

    pub fn order(&self) -> u32 {
        match *self {
            ConstAtom::Zeta(k) | ConstAtom::ZetaBar(k) | ConstAtom::Tau(k) | ConstAtom::TBar(k) => k,
            ConstAtom::Log2 => 1,
        }
    }

    /// `zeta(1)` is the zero convention.
    pub fn is_zero(&self) -> bool {
        matches!(self, ConstAtom::Zeta(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    Zeta,
    ZetaBar,
    Tau,
    TBar,
}

impl fmt::Display for ConstAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstAtom::Zeta(k) => write!(f, "zeta({k})"),
            ConstAtom::ZetaBar(k) => write!(f, "zetabar({k})"),
            ConstAtom::Tau(k) => write!(f, "tau({k})"),
            ConstAtom::TBar(k) => write!(f, "tbar({k})"),
            ConstAtom::Log2 => f.write_str("log2"),
        }
    }
}

impl FromStr for ConstAtom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "log2" {
            return Ok(ConstAtom::Log2);
        }
        let bad = || Error::Unknown {
            what: "constant atom",
            name: s.to_string(),
        };
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let order: i64 = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        let kind = match name {
            "zeta" => AtomKind::Zeta,
            "zetabar" => AtomKind::ZetaBar,
            "tau" => AtomKind::Tau,
            "tbar" => AtomKind::TBar,
            _ => return Err(bad()),
        };
        ConstAtom::new(kind, order)
    }
}

type MemoKey = (ConstAtom, u32, u32);

fn memo() -> &'static RwLock<HashMap<MemoKey, EvalResult>> {
    static MEMO: OnceLock<RwLock<HashMap<MemoKey, EvalResult>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Evaluate an atom to `prec`, memoized per `(atom, digits, guard)`.
pub fn eval_atom(atom: ConstAtom, prec: &Precision) -> Result<EvalResult> {
    if atom.order() == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let key = (atom, prec.decimal_digits(), prec.guard_digits());
    if let Some(hit) = memo().read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(hit.clone());
    }
    let result = compute_atom(atom, prec);
    memo()
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, result.clone());
    Ok(result)
}

fn from_tail(tail: Tail, method: &str) -> EvalResult {
    EvalResult::new(tail.value, tail.error, method, tail.terms)
}

fn compute_atom(atom: ConstAtom, prec: &Precision) -> EvalResult {
    let bits = prec.bits();
    let one = Float::with_val(bits, 1);
    let half = Float::with_val(bits, 0.5);
    match atom {
        ConstAtom::Zeta(1) => EvalResult::zero(bits, "convention"),
        ConstAtom::Zeta(k) => from_tail(hurwitz_zeta(k, &one, bits), "euler-maclaurin"),
        ConstAtom::Tau(1) => {
            let log2 = from_tail(alternating_hurwitz(1, &one, bits), "cvz-alternating");
            log2.scaled(&Float::with_val(bits, 2))
        }
        ConstAtom::Tau(k) => from_tail(hurwitz_zeta(k, &half, bits), "euler-maclaurin"),
        ConstAtom::ZetaBar(k) => from_tail(alternating_hurwitz(k, &one, bits), "cvz-alternating"),
        ConstAtom::TBar(k) => from_tail(alternating_hurwitz(k, &half, bits), "cvz-alternating"),
        ConstAtom::Log2 => from_tail(alternating_hurwitz(1, &one, bits), "cvz-alternating"),
    }
}

/// Memo contents as `atom digits value` lines, sorted.
pub fn memo_snapshot() -> Vec<String> {
    let memo = memo().read().unwrap_or_else(|e| e.into_inner());
    let mut lines: Vec<(MemoKey, String)> = memo
        .iter()
        .map(|(key, r)| {
            let (atom, digits, guard) = *key;
            let shown = (digits + guard) as usize;
            (*key, format!("{atom} {digits} {}", format_float(&r.value, shown)))
        })
        .collect();
    lines.sort_by_key(|a| a.0);
    lines.into_iter().map(|(_, l)| l).collect()
}

/// Seed the memo from snapshot lines; returns the number of entries loaded.
///
/// Loaded values are trusted to the digits they were written with.
pub fn memo_load<'a>(lines: impl IntoIterator<Item = &'a str>) -> Result<usize> {
    let mut count = 0;
    let mut memo = memo().write().unwrap_or_else(|e| e.into_inner());
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(atom), Some(digits), Some(value), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(Error::param(format!("malformed cache line `{line}`")));
        };
        let atom: ConstAtom = atom.parse()?;
        let digits: u32 = digits
            .parse()
            .map_err(|_| Error::param(format!("bad digits in `{line}`")))?;
        let prec = Precision::new(digits)?;
        let bits = prec.bits();
        let parsed = Float::parse(value).map_err(|_| Error::param(format!("bad value in `{line}`")))?;
        let value = Float::with_val(bits, parsed);
        let written = (digits + prec.guard_digits()) as i32;
        let mut bound = pow10(bits, 1 - written);
        bound *= Float::with_val(bits, value.abs_ref()).max(&Float::with_val(bits, 1));
        memo.insert(
            (atom, digits, prec.guard_digits()),
            EvalResult::new(value, bound, "cache", 0),
        );
        count += 1;
    }
    Ok(count)
}
