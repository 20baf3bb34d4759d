//! Log-domain factorials and binomials.

use alloc::vec::Vec;

pub(crate) const LN_2: f64 = core::f64::consts::LN_2;

/// `ln(n!)`. Exact products below 23 (all representable), `lgamma` above.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 23 {
        let mut f = 1.0f64;
        for k in 2..=n {
            f *= k as f64;
        }
        libm::log(f)
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

/// Table of `ln(k!)` for `k = 0..=n`.
pub fn ln_factorials(n: usize) -> Vec<f64> {
    (0..=n).map(ln_factorial).collect()
}

/// `ln C(n, k)`, `k <= n`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorials_are_exact() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((libm::exp(ln_factorial(5)) - 120.0).abs() < 1e-12);
    }

    #[test]
    fn lgamma_branch_is_continuous() {
        // ln 23! = ln 22! + ln 23
        let step = ln_factorial(23) - ln_factorial(22);
        assert!((step - libm::log(23.0)).abs() < 1e-13);
    }

    #[test]
    fn binomial_matches_pascal() {
        assert!((libm::exp(ln_binomial(10, 3)) - 120.0).abs() < 1e-10);
        assert_eq!(ln_binomial(7, 0), 0.0);
    }
}
