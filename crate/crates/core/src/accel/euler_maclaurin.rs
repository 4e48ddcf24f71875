//! Euler–Maclaurin tails for the Hurwitz zeta function and the digamma function.
//!
//! Both summands are completely monotone, so the remainder after truncating the
//! Bernoulli correction is bounded by the first omitted correction term.

use rug::ops::Pow;
use rug::{Float, Integer};

use super::bernoulli::bernoulli;

/// Value, truncation bound and number of direct terms.
#[derive(Debug, Clone)]
pub struct Tail {
    pub value: Float,
    pub error: Float,
    pub terms: u64,
}

fn shift_for(bits: u32) -> u64 {
    // the smallest Bernoulli correction is about exp(-2 pi x); x ~ bits/7 clears 2^-bits
    (bits as u64) / 7 + 12
}

/// `sum_{k>=0} (k + a)^-s` for integer `s >= 2` and `a > 0`.
pub fn hurwitz_zeta(s: u32, a: &Float, bits: u32) -> Tail {
    assert!(s >= 2, "hurwitz_zeta needs s >= 2");
    assert!(*a > 0, "hurwitz_zeta needs a positive offset");
    let wp = bits + 32;
    let n = shift_for(bits);
    let mut direct = Float::new(wp);
    let a = Float::with_val(wp, a);
    for k in (0..n).rev() {
        let base = Float::with_val(wp, &a + k);
        direct += base.pow(-(s as i32));
    }
    let x = Float::with_val(wp, &a + n);
    let x_pow = Float::with_val(wp, x.clone().pow(1 - s as i32));
    let mut tail = Float::with_val(wp, &x_pow / (s - 1));
    let x_s = Float::with_val(wp, x.clone().pow(-(s as i32)));
    tail += Float::with_val(wp, &x_s / 2u32);

    // term_j = B_2j/(2j)! * s(s+1)...(s+2j-2) * x^(-s-2j+1)
    let eps = Float::with_val(wp, 1) >> (bits + 4);
    let x2_inv = Float::with_val(wp, x.clone().pow(-2));
    let mut power = Float::with_val(wp, &x_s / &x); // x^(-s-1)
    let mut rising = Integer::from(s); // s(s+1)...(s+2j-2)
    let mut fact = Integer::from(2); // (2j)!
    let error;
    let scale = Float::with_val(wp, &direct + &tail);
    let mut j = 1usize;
    loop {
        let b = bernoulli(2 * j);
        let coeff = Float::with_val(wp, rug::Rational::from(&b * &rising)) / Float::with_val(wp, &fact);
        let term = Float::with_val(wp, &coeff * &power);
        let mag = Float::with_val(wp, term.abs_ref());
        if mag < Float::with_val(wp, &eps * &scale) || j > 4 * bits as usize {
            error = mag;
            break;
        }
        tail += &term;
        let k = 2 * j as u64;
        rising *= (s as u64 + k - 1) * (s as u64 + k);
        fact *= (k + 1) * (k + 2);
        power *= &x2_inv;
        j += 1;
    }
    let value = Float::with_val(bits, &direct + &tail);
    let error = Float::with_val(bits, &error) + crate::precision::rounding_bound(&value);
    Tail {
        value,
        error,
        terms: n,
    }
}

/// `psi(a)` for `a > 0`.
pub fn digamma(a: &Float, bits: u32) -> Tail {
    assert!(*a > 0, "digamma needs a positive argument");
    let wp = bits + 32;
    let n = shift_for(bits);
    let a = Float::with_val(wp, a);
    let mut direct = Float::new(wp);
    for k in (0..n).rev() {
        let base = Float::with_val(wp, &a + k);
        direct += base.recip();
    }
    // psi(x) ~ ln x - 1/(2x) - sum B_2j / (2j x^2j)
    let x = Float::with_val(wp, &a + n);
    let mut asym = Float::with_val(wp, x.ln_ref());
    asym -= Float::with_val(wp, x.clone().recip()) / 2u32;
    let x2_inv = Float::with_val(wp, x.clone().pow(-2));
    let mut power = x2_inv.clone();
    let eps = Float::with_val(wp, 1) >> (bits + 4);
    let scale = Float::with_val(wp, asym.abs_ref()) + 1u32;
    let error;
    let mut j = 1usize;
    loop {
        let b = bernoulli(2 * j);
        let term = Float::with_val(wp, &b * &power) / (2 * j as u32);
        let mag = Float::with_val(wp, term.abs_ref());
        if mag < Float::with_val(wp, &eps * &scale) || j > 4 * bits as usize {
            error = mag;
            break;
        }
        asym -= &term;
        power *= &x2_inv;
        j += 1;
    }
    let value = Float::with_val(bits, &asym - &direct);
    let error = Float::with_val(bits, &error) + crate::precision::rounding_bound(&value);
    Tail {
        value,
        error,
        terms: n,
    }
}
