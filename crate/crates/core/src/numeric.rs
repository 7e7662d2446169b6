//! Exact combinatorial quantities and their base-2 logarithms.
//!
//! Factorials and binomials are formed as exact big integers and only then
//! converted to a logarithm, so that differences of large logs stay accurate.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// log₂ of an exact integer from its bit length plus the leading 64 bits.
///
/// Returns `-inf` for zero.
pub fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().expect("fits in u64").to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 leading bits");
    (top as f64).log2() + shift as f64
}

pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

thread_local! {
    static LOG2_FACTORIAL: RefCell<HashMap<u64, f64>> = RefCell::new(HashMap::new());
}

/// log₂(n!), cached per thread.
pub fn log2_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if let Some(v) = LOG2_FACTORIAL.with(|c| c.borrow().get(&n).copied()) {
        return v;
    }
    let v = log2_biguint(&factorial(n));
    LOG2_FACTORIAL.with(|c| c.borrow_mut().insert(n, v));
    v
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `⌈log₂ x⌉` for integers, taken as 0 for `x <= 1`.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// `⌈log₂ x⌉` of an exact integer, 0 for `x <= 1`.
pub fn ceil_log2_biguint(x: &BigUint) -> u64 {
    if x <= &BigUint::one() {
        0
    } else {
        (x - 1u32).bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_small_values() {
        let expect = [(0, 0), (1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4), (28, 5)];
        for (x, e) in expect {
            assert_eq!(ceil_log2(x), e, "x = {x}");
            assert_eq!(ceil_log2_biguint(&BigUint::from(x)), e as u64, "x = {x}");
        }
    }

    #[test]
    fn ceil_log2_matches_float_reference() {
        for x in 2u64..5000 {
            assert_eq!(ceil_log2(x), (x as f64).log2().ceil() as u32, "x = {x}");
        }
    }

    #[test]
    fn binomials_are_exact() {
        assert_eq!(binomial(28, 0), BigUint::one());
        assert_eq!(binomial(28, 28), BigUint::one());
        assert_eq!(binomial(28, 1), BigUint::from(28u32));
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 4), BigUint::zero());
        // Pascal's rule on a row large enough to need several limbs.
        for k in 1..200u64 {
            assert_eq!(binomial(400, k), binomial(399, k - 1) + binomial(399, k));
        }
    }

    #[test]
    fn log2_of_big_integers() {
        assert_eq!(log2_biguint(&BigUint::from(1u32)), 0.0);
        assert_eq!(log2_biguint(&BigUint::from(1024u32)), 10.0);
        let big = BigUint::one() << 300u32;
        assert_eq!(log2_biguint(&big), 300.0);
        // 3 · 2^200: compare against log₂3 + 200.
        let x = BigUint::from(3u32) << 200u32;
        let expect = 3f64.log2() + 200.0;
        assert!(((log2_biguint(&x) - expect) / expect).abs() < 1e-15);
    }

    #[test]
    fn log2_factorial_matches_summed_logs() {
        for n in [0u64, 1, 2, 5, 20, 100, 500] {
            let direct: f64 = (2..=n).map(|k| (k as f64).log2()).sum();
            let exact = log2_factorial(n);
            assert!((exact - direct).abs() <= 1e-12 * direct.max(1.0), "n = {n}");
        }
        assert!((log2_factorial(8) - 40320f64.log2()).abs() < 1e-12);
    }
}
