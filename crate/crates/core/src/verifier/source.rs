use std::collections::HashMap;

use rug::Float;

use crate::closedform::binomial;
use crate::constants::{eval_atom, ConstAtom};
use crate::error::{Error, Result};
use crate::harmonics::HarmonicCache;
use crate::precision::{pow10, Precision};
use crate::seqkit::{specialize, CombinatorKind, SequenceId};

/// Specialized combinator values for `A1`/`A2` at one working precision, with harmonic
/// numbers and constants cached across calls.
pub struct CombinatorSource {
    bits: u32,
    atom_prec: Precision,
    harmonics: HarmonicCache,
    atoms: HashMap<ConstAtom, Float>,
}

/// Running sum that also tracks the sum of magnitudes, for a relative error bound.
pub struct Accumulator {
    pub value: Float,
    pub magnitude: Float,
}

impl Accumulator {
    pub fn new(bits: u32) -> Self {
        Accumulator {
            value: Float::new(bits),
            magnitude: Float::new(bits),
        }
    }

    pub fn add(&mut self, x: Float) {
        self.magnitude += Float::with_val(self.magnitude.prec(), x.abs_ref());
        self.value += x;
    }

    pub fn sub(&mut self, x: Float) {
        self.add(-x);
    }
}

impl CombinatorSource {
    /// Constants are taken `extra_digits` beyond `prec`.
    pub fn new(prec: &Precision, bits: u32, extra_digits: u32) -> Self {
        CombinatorSource {
            bits,
            atom_prec: prec.refined(extra_digits),
            harmonics: HarmonicCache::new(bits),
            atoms: HashMap::new(),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Relative accuracy of the cached constants.
    pub fn atom_accuracy(&self) -> Float {
        pow10(self.bits, -(self.atom_prec.decimal_digits() as i32))
    }

    pub fn atom(&mut self, a: ConstAtom) -> Result<Float> {
        if let Some(v) = self.atoms.get(&a) {
            return Ok(v.clone());
        }
        let v = Float::with_val(self.bits, &eval_atom(a, &self.atom_prec)?.value);
        self.atoms.insert(a, v.clone());
        Ok(v)
    }

    pub fn get(&mut self, kind: CombinatorKind, seq: &SequenceId, n: i64, j: i64) -> Result<Float> {
        let form = specialize(kind, seq, n, j)?;
        let mut acc = Float::new(self.bits);
        if let Some(h) = &form.harmonic {
            acc += Float::with_val(self.bits, self.harmonics.get(h.kind, h.index) * h.coef);
        }
        for (c, a) in &form.constants {
            acc += self.atom(*a)? * *c;
        }
        Ok(acc)
    }

    pub fn float(&self, x: impl Into<f64>) -> Float {
        Float::with_val(self.bits, x.into())
    }

    pub fn binom(&self, n: i64, k: i64) -> Float {
        Float::with_val(self.bits, binomial(n, k))
    }
}

/// `a_k` for a built-in sequence.
pub fn unit(seq: &SequenceId, k: i64) -> Result<i32> {
    seq.unit(k)
        .ok_or_else(|| Error::UnsupportedSequence(seq.name().to_string()))
}

pub fn require_builtin(seqs: &[&SequenceId]) -> Result<()> {
    for s in seqs {
        if !s.is_builtin() {
            return Err(Error::UnsupportedSequence(format!(
                "{} has no closed-form combinators; theorem sums need them at every index",
                s.name()
            )));
        }
    }
    Ok(())
}
