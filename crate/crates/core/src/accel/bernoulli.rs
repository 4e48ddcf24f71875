use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

fn table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// Bernoulli number `B_m` (with `B_1 = -1/2`), exact.
pub fn bernoulli(m: usize) -> Rational {
    let mut cache = table().lock().unwrap_or_else(|e| e.into_inner());
    while cache.len() <= m {
        // B_n = -1/(n+1) * sum_{k<n} C(n+1, k) B_k
        let n = cache.len();
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, b) in cache.iter().enumerate() {
            acc += Rational::from(&binom * b.numer()) / b.denom();
            binom *= (n + 1 - k) as u64;
            binom /= (k + 1) as u64;
        }
        let next = -acc / Rational::from(n as u64 + 1);
        cache.push(next);
    }
    cache[m].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        assert_eq!(bernoulli(0), Rational::from(1));
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(3), Rational::from(0));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(20), Rational::from((-174611, 330)));
    }
}
