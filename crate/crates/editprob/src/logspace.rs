//! Log-domain helpers.
//!
//! All dynamic-programming accumulation in this crate happens in log space;
//! zero probability is represented by negative infinity and must survive
//! every helper here without producing NaN.

use crate::scalar::Scalar;

/// `ln(exp(a) + exp(b))` without overflow.
///
/// Either argument may be negative infinity (probability zero); the result is
/// then exactly the other argument.
pub fn log_sum_exp2<F: Scalar>(a: F, b: F) -> F {
    if a == F::neg_infinity() {
        return b;
    }
    if b == F::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(exp(a) + exp(b) + exp(c))`.
pub fn log_sum_exp3<F: Scalar>(a: F, b: F, c: F) -> F {
    log_sum_exp2(log_sum_exp2(a, b), c)
}

/// `ln(Σ exp(v))` over a slice; negative infinity for an empty slice.
pub fn log_sum_exp<F: Scalar>(values: &[F]) -> F {
    let mut acc = F::neg_infinity();
    for &v in values {
        acc = log_sum_exp2(acc, v);
    }
    acc
}

/// `ln(p)` where `p` may be exactly zero.
pub fn ln_prob<F: Scalar>(p: F) -> F {
    if p == F::zero() {
        F::neg_infinity()
    } else {
        p.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_sum() {
        let a = 0.21f64.ln();
        let b = 0.1f64.ln();
        let c = 0.04f64.ln();
        let got = log_sum_exp3(a, b, c);
        assert!((got.exp() - 0.35).abs() < 1e-15);
    }

    #[test]
    fn neg_infinity_is_identity() {
        let x = -1.25f64;
        assert_eq!(log_sum_exp2(f64::NEG_INFINITY, x), x);
        assert_eq!(log_sum_exp2(x, f64::NEG_INFINITY), x);
        assert_eq!(
            log_sum_exp2(f64::NEG_INFINITY, f64::NEG_INFINITY),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn single_finite_term_is_exact() {
        let x = -3.725f64;
        assert_eq!(log_sum_exp3(f64::NEG_INFINITY, x, f64::NEG_INFINITY), x);
        assert_eq!(log_sum_exp(&[x]), x);
    }

    #[test]
    fn huge_magnitudes_do_not_overflow() {
        let got: f64 = log_sum_exp2(-1e308, -1e308 + 1.0);
        assert!(got.is_finite());
        let got: f64 = log_sum_exp2(1e3, 1e3);
        assert!((got - (1e3 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn ln_prob_of_zero_is_neg_infinity() {
        assert_eq!(ln_prob(0.0f64), f64::NEG_INFINITY);
        assert!((ln_prob(0.5f64) - 0.5f64.ln()).abs() < 1e-16);
    }
}
