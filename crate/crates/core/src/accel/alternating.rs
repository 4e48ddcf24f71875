//! Polynomial acceleration of alternating series (Cohen, Rodriguez Villegas, Zagier).

use rug::ops::Pow;
use rug::Float;

use super::euler_maclaurin::Tail;

/// `(3 + sqrt 8)`: error reduction per term.
const RATE_LOG10: f64 = 0.765_551_370_285_547_4;

/// Number of terms for an error factor below `2^-bits`.
pub fn terms_for(bits: u32) -> u64 {
    ((bits as f64 * std::f64::consts::LOG10_2) / RATE_LOG10).ceil() as u64 + 3
}

/// `sum_{k>=0} (-1)^k u_k` with `n` terms of `u`.
///
/// When `u_k` is a moment sequence of a positive measure on `[0, 1]` the error is at
/// most `2 u_0 / (3 + sqrt 8)^n`; that bound is what `error` reports.
pub fn cvz_sum<F>(n: u64, bits: u32, mut u: F) -> Tail
where
    F: FnMut(u64) -> Float,
{
    let wp = bits + 32;
    let rate = Float::with_val(wp, 8).sqrt() + 3u32;
    let d_pow = Float::with_val(wp, rate.pow(n as u32));
    let d = Float::with_val(wp, &d_pow + Float::with_val(wp, d_pow.recip_ref())) / 2u32;
    let mut b = Float::with_val(wp, -1);
    let mut c = Float::with_val(wp, -&d);
    let mut s = Float::new(wp);
    let mut u0 = Float::new(wp);
    for k in 0..n {
        c = Float::with_val(wp, &b - &c);
        let uk = u(k);
        if k == 0 {
            u0 = Float::with_val(wp, uk.abs_ref());
        }
        s += Float::with_val(wp, &c * &uk);
        let num = (k as i128 + n as i128) * (k as i128 - n as i128);
        let den = (2 * k as i128 + 1) * (k as i128 + 1);
        b *= Float::with_val(wp, num) * 2u32;
        b /= Float::with_val(wp, den);
    }
    let value = Float::with_val(bits, &s / &d);
    let error = Float::with_val(bits, u0 * 2u32 / d);
    let error = error + crate::precision::rounding_bound(&value);
    Tail {
        value,
        error,
        terms: n,
    }
}

/// `sum_{k>=0} (-1)^k (k + a)^-s` for `a > 0`, `s >= 1`.
pub fn alternating_hurwitz(s: u32, a: &Float, bits: u32) -> Tail {
    assert!(s >= 1);
    assert!(*a > 0, "alternating_hurwitz needs a positive offset");
    let wp = bits + 32;
    let a = Float::with_val(wp, a);
    let n = terms_for(bits + 8);
    cvz_sum(n, bits, |k| {
        let base = Float::with_val(wp, &a + k);
        base.pow(-(s as i32))
    })
}
