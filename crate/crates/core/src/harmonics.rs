//! Odd, alternating and plain harmonic numbers.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{Budget, Precision};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HarmonicFamily {
    /// `h_n^(p) = sum_{k<=n} 1/(k-1/2)^p`
    Odd,
    /// `hbar_n^(p) = sum_{k<=n} (-1)^(k-1)/(k-1/2)^p`
    OddAlternating,
    /// `H_n^(p) = sum_{k<=n} 1/k^p`
    Plain,
    /// `Hbar_n^(p) = sum_{k<=n} (-1)^(k-1)/k^p`
    Alternating,
}

impl HarmonicFamily {
    pub fn is_alternating(self) -> bool {
        matches!(self, HarmonicFamily::OddAlternating | HarmonicFamily::Alternating)
    }

    pub fn is_odd(self) -> bool {
        matches!(self, HarmonicFamily::Odd | HarmonicFamily::OddAlternating)
    }

    fn symbol(self) -> &'static str {
        match self {
            HarmonicFamily::Odd => "h",
            HarmonicFamily::OddAlternating => "hbar",
            HarmonicFamily::Plain => "H",
            HarmonicFamily::Alternating => "Hbar",
        }
    }
}

impl FromStr for HarmonicFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h" => Ok(HarmonicFamily::Odd),
            "hbar" => Ok(HarmonicFamily::OddAlternating),
            "H" => Ok(HarmonicFamily::Plain),
            "Hbar" => Ok(HarmonicFamily::Alternating),
            _ => Err(Error::Unknown {
                what: "harmonic family",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HarmonicKind {
    pub family: HarmonicFamily,
    pub order: u32,
}

impl HarmonicKind {
    pub fn new(family: HarmonicFamily, order: i64) -> Result<Self> {
        if order < 1 || order > u32::MAX as i64 {
            return Err(Error::InvalidOrder(order));
        }
        Ok(HarmonicKind {
            family,
            order: order as u32,
        })
    }

    /// The `k`-th summand, `k >= 1`.
    pub fn term(&self, k: u64, bits: u32) -> Float {
        let base = if self.family.is_odd() {
            Float::with_val(bits, k) - 0.5f64
        } else {
            Float::with_val(bits, k)
        };
        let t = base.pow(-(self.order as i32));
        if self.family.is_alternating() && k.is_multiple_of(2) {
            -t
        } else {
            t
        }
    }
}

impl fmt::Display for HarmonicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^({})", self.family.symbol(), self.order)
    }
}

/// `kind` at index `n`; the empty sum at `n = 0` is 0.
pub fn harmonic(kind: HarmonicKind, n: u64, prec: &Precision) -> Float {
    let bits = prec.bits();
    let mut acc = Float::new(bits);
    for k in 1..=n {
        acc += kind.term(k, bits);
    }
    acc
}

/// `[H_0, H_1, ..., H_{n_max}]` by forward recurrence.
pub fn prefix_table(
    kind: HarmonicKind,
    n_max: u64,
    prec: &Precision,
    budget: &Budget,
) -> Result<Vec<Float>> {
    if n_max < 1 {
        return Err(Error::param("prefix_table needs n_max >= 1"));
    }
    if n_max > budget.max_terms {
        return Err(Error::ResourceLimit(format!(
            "table of {n_max} entries exceeds max_terms {}",
            budget.max_terms
        )));
    }
    let bits = prec.bits();
    let mut table = Vec::with_capacity(n_max as usize + 1);
    table.push(Float::new(bits));
    for k in 1..=n_max {
        let next = Float::with_val(bits, &table[k as usize - 1] + kind.term(k, bits));
        table.push(next);
    }
    Ok(table)
}

/// Lazily grown prefix tables for several kinds at one precision.
#[derive(Debug, Clone)]
pub struct HarmonicCache {
    bits: u32,
    tables: HashMap<HarmonicKind, Vec<Float>>,
}

impl HarmonicCache {
    pub fn new(bits: u32) -> Self {
        HarmonicCache {
            bits,
            tables: HashMap::new(),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn get(&mut self, kind: HarmonicKind, n: u64) -> &Float {
        let bits = self.bits;
        let table = self
            .tables
            .entry(kind)
            .or_insert_with(|| vec![Float::new(bits)]);
        while (table.len() as u64) <= n {
            let k = table.len() as u64;
            let next = Float::with_val(bits, table.last().unwrap() + kind.term(k, bits));
            table.push(next);
        }
        &table[n as usize]
    }
}
