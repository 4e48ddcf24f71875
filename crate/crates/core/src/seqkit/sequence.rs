use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rug::Float;

use crate::error::{Error, Result};

type Evaluator = dyn Fn(i64, u32) -> Float + Send + Sync;

/// A user-supplied sequence `a_k`, total on all integers.
///
/// `growth` is the declared exponent `alpha < 1` with `a_k = o(k^alpha)`; it is not checked
/// against the evaluator.
#[derive(Clone)]
pub struct CustomSequence {
    name: String,
    growth: f64,
    eval: Arc<Evaluator>,
}

impl CustomSequence {
    pub fn new<F>(name: impl Into<String>, growth: f64, eval: F) -> Result<Self>
    where
        F: Fn(i64, u32) -> Float + Send + Sync + 'static,
    {
        if growth.is_nan() || growth >= 1.0 {
            return Err(Error::param(format!(
                "growth exponent must be below 1, got {growth}"
            )));
        }
        Ok(CustomSequence {
            name: name.into(),
            growth,
            eval: Arc::new(eval),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn growth(&self) -> f64 {
        self.growth
    }
}

impl fmt::Debug for CustomSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomSequence")
            .field("name", &self.name)
            .field("growth", &self.growth)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum SequenceId {
    /// `a_k = 1`
    A1,
    /// `a_k = (-1)^k`
    A2,
    Custom(CustomSequence),
}

impl SequenceId {
    pub fn value(&self, k: i64, bits: u32) -> Float {
        match self {
            SequenceId::A1 => Float::with_val(bits, 1),
            SequenceId::A2 => Float::with_val(bits, sign(k)),
            SequenceId::Custom(c) => Float::with_val(bits, (c.eval)(k, bits)),
        }
    }

    /// `a_k` as a small integer when it is one, which holds for `A1` and `A2`.
    pub fn unit(&self, k: i64) -> Option<i32> {
        match self {
            SequenceId::A1 => Some(1),
            SequenceId::A2 => Some(sign(k)),
            SequenceId::Custom(_) => None,
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, SequenceId::Custom(_))
    }

    pub fn name(&self) -> &str {
        match self {
            SequenceId::A1 => "a1",
            SequenceId::A2 => "a2",
            SequenceId::Custom(c) => c.name(),
        }
    }
}

impl PartialEq for SequenceId {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (SequenceId::A1, SequenceId::A1) | (SequenceId::A2, SequenceId::A2) => true,
            (SequenceId::Custom(a), SequenceId::Custom(b)) => Arc::ptr_eq(&a.eval, &b.eval),
            _ => false,
        }
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a1" => Ok(SequenceId::A1),
            "a2" => Ok(SequenceId::A2),
            _ => Err(Error::Unknown {
                what: "sequence",
                name: s.to_string(),
            }),
        }
    }
}

/// `a_k` of `seq`.
pub fn seq_value(seq: &SequenceId, k: i64, bits: u32) -> Float {
    seq.value(k, bits)
}

/// `(-1)^e`
pub fn sign(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_values() {
        assert_eq!(seq_value(&SequenceId::A2, 0, 64), 1);
        assert_eq!(seq_value(&SequenceId::A2, -3, 64), -1);
        assert_eq!(seq_value(&SequenceId::A1, 7, 64), 1);
        assert_eq!(seq_value(&SequenceId::A1, -7, 64), 1);
        assert_eq!(sign(-4), 1);
    }

    #[test]
    fn custom_sequences() {
        let c = CustomSequence::new("period3", 0.0, |k, bits| {
            Float::with_val(bits, [1, 0, -1][k.rem_euclid(3) as usize])
        })
        .unwrap();
        let s = SequenceId::Custom(c.clone());
        assert_eq!(s.value(-1, 64), -1);
        assert_eq!(s.unit(4), None);
        assert_eq!(s, SequenceId::Custom(c));
        assert!(CustomSequence::new("bad", 1.0, |_, b| Float::new(b)).is_err());
        assert!("A2".parse::<SequenceId>().unwrap() == SequenceId::A2);
        assert!("a3".parse::<SequenceId>().is_err());
    }
}
