//! Polynomials with exact rational coefficients in the constant atoms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rug::{Float, Integer, Rational};

use crate::constants::{eval_atom, ConstAtom};
use crate::error::Result;
use crate::precision::{rounding_bound, EvalResult, Precision};

/// A product of atoms, kept sorted. Shorter products order first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<ConstAtom>);

impl Monomial {
    pub fn new(mut atoms: Vec<ConstAtom>) -> Self {
        atoms.sort();
        Monomial(atoms)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atoms(&self) -> &[ConstAtom] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    fn vanishes(&self) -> bool {
        self.0.iter().any(ConstAtom::is_zero)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut atoms = self.0.clone();
        atoms.extend_from_slice(&other.0);
        Monomial::new(atoms)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("*"))
    }
}

/// Canonical sum of `coefficient * monomial`; zero coefficients and terms containing
/// `zeta(1)` are dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ConstExpr {
    terms: BTreeMap<Monomial, Rational>,
}

impl ConstExpr {
    pub fn zero() -> Self {
        ConstExpr::default()
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        ConstExpr::term(c, Vec::new())
    }

    pub fn atom(a: ConstAtom) -> Self {
        ConstExpr::term(1, vec![a])
    }

    pub fn term(c: impl Into<Rational>, atoms: Vec<ConstAtom>) -> Self {
        let mut e = ConstExpr::zero();
        e.add_term(c, Monomial::new(atoms));
        e
    }

    /// Accumulates one term in place.
    pub fn add_term(&mut self, c: impl Into<Rational>, m: Monomial) {
        let c: Rational = c.into();
        if c == 0 || m.vanishes() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_default();
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, atoms: Vec<ConstAtom>) -> Rational {
        self.terms
            .get(&Monomial::new(atoms))
            .cloned()
            .unwrap_or_default()
    }

    pub fn add(&self, other: &ConstExpr) -> ConstExpr {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }

    pub fn sub(&self, other: &ConstExpr) -> ConstExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ConstExpr {
        self.scale(&Rational::from(-1))
    }

    pub fn scale(&self, factor: &Rational) -> ConstExpr {
        let mut out = ConstExpr::zero();
        for (m, c) in &self.terms {
            out.add_term(Rational::from(c * factor), m.clone());
        }
        out
    }

    pub fn mul(&self, other: &ConstExpr) -> ConstExpr {
        let mut out = ConstExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(Rational::from(ca * cb), ma.times(mb));
            }
        }
        out
    }

    /// Value with an error bound from the atom bounds.
    ///
    /// A product of `x_i ± e_i` is off by at most `prod(|x_i| + e_i) - prod|x_i|`.
    pub fn eval(&self, prec: &Precision) -> Result<EvalResult> {
        let bits = prec.bits();
        let wp = bits + 32;
        let mut value = Float::new(wp);
        let mut error = Float::new(wp);
        for (m, c) in &self.terms {
            let mut product = Float::with_val(wp, 1);
            let mut upper = Float::with_val(wp, 1);
            let mut lower = Float::with_val(wp, 1);
            for &a in m.atoms() {
                let r = eval_atom(a, prec)?;
                let mag = Float::with_val(wp, r.value.abs_ref());
                product *= &r.value;
                lower *= &mag;
                upper *= Float::with_val(wp, &mag + &r.error_bound);
            }
            let coef = Float::with_val(wp, c);
            let coef_mag = Float::with_val(wp, coef.abs_ref());
            value += Float::with_val(wp, &product * &coef);
            error += Float::with_val(wp, &upper - &lower) * coef_mag;
        }
        let value = Float::with_val(bits, &value);
        let error = Float::with_val(bits, &error) + rounding_bound(&value);
        Ok(EvalResult::new(value, error, "closed-form", 0))
    }
}

fn format_coefficient(c: &Rational) -> String {
    if *c.denom() == 1 && *c.numer() >= 0 {
        c.numer().to_string()
    } else {
        format!("({c})")
    }
}

impl fmt::Display for ConstExpr {
    /// `(-1/2)*tau(3) + 1*tau(1)*tau(2)`; the empty expression is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.degree() == 0 {
                    format_coefficient(c)
                } else {
                    format!("{}*{}", format_coefficient(c), m)
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `binom(n, k)` as an exact integer; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> Integer {
    if k < 0 || n < 0 || k > n {
        return Integer::new();
    }
    Integer::from(n).binomial(k as u32)
}
