//! Rational approximation of `t = e^ε` by continued fractions.
//!
//! `e^ε` is computed in `f64` and expanded into a continued fraction; the
//! last convergent whose denominator stays within the limit is returned.
//! The reported bound adds the convergent error to one ulp of the `f64`
//! exponential, so `|e^ε - t| ≤ t_error_bound` holds for the true value.

use ldpput_core::rational::{to_f64, Rational};
use num_bigint::BigInt;

/// Default largest denominator of the approximation.
pub const DEFAULT_MAX_DENOMINATOR: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Approximation {
    pub epsilon: f64,
    pub t: Rational,
    /// Upper bound on `|e^ε - t|`.
    pub t_error_bound: f64,
    /// `|ln t - ε|`, evaluated in `f64`.
    pub epsilon_error: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EpsilonError {
    #[error("epsilon must be finite and nonnegative, got {0}")]
    OutOfRange(f64),
    #[error("e^epsilon is too large to approximate for epsilon = {0}")]
    Overflow(f64),
}

pub fn approximate(epsilon: f64, max_denominator: u64) -> Result<Approximation, EpsilonError> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(EpsilonError::OutOfRange(epsilon));
    }
    let x = epsilon.exp();
    if !x.is_finite() || x >= u64::MAX as f64 {
        return Err(EpsilonError::Overflow(epsilon));
    }
    let t = best_convergent(x, max_denominator.max(1));
    let tf = to_f64(&t);
    Ok(Approximation {
        epsilon,
        t_error_bound: (x - tf).abs() + x * f64::EPSILON,
        epsilon_error: (tf.ln() - epsilon).abs(),
        t,
    })
}

/// Last convergent `p/q` of `x ≥ 1` with `q ≤ max_denominator`, never below 1.
fn best_convergent(x: f64, max_denominator: u64) -> Rational {
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor() as u128;
        let next = |u: u128, v: u128| a.checked_mul(u).and_then(|w| w.checked_add(v));
        let (Some(p2), Some(q2)) = (next(p1, p0), next(q1, q0)) else { break };
        if q2 > max_denominator as u128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - r.floor();
        if frac < 1e-15 || (x - p1 as f64 / q1 as f64).abs() <= x * f64::EPSILON {
            break;
        }
        r = 1.0 / frac;
    }
    let t = Rational::new(BigInt::from(p1), BigInt::from(q1));
    if t < Rational::from_integer(1.into()) {
        Rational::from_integer(1.into())
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ldpput_core::rational::int;

    #[test]
    fn zero_gives_one() {
        let a = approximate(0.0, DEFAULT_MAX_DENOMINATOR).unwrap();
        assert_eq!(a.t, int(1));
        assert!(a.t_error_bound < 1e-15);
    }

    #[test]
    fn ln_of_integer_recovers_integer() {
        let a = approximate(3f64.ln(), DEFAULT_MAX_DENOMINATOR).unwrap();
        assert_eq!(a.t, int(3));
    }

    #[test]
    fn bound_holds_and_shrinks_with_denominator() {
        for eps in [0.1, 0.5, 1.0, 2.3, 5.0] {
            let coarse = approximate(eps, 10).unwrap();
            let fine = approximate(eps, DEFAULT_MAX_DENOMINATOR).unwrap();
            let exact = eps.exp();
            assert!((exact - to_f64(&fine.t)).abs() <= fine.t_error_bound);
            assert!(fine.t_error_bound <= coarse.t_error_bound);
            assert!(*fine.t.denom() <= BigInt::from(DEFAULT_MAX_DENOMINATOR));
            assert!(fine.epsilon_error < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(approximate(-0.1, 10).is_err());
        assert!(approximate(f64::NAN, 10).is_err());
        assert!(approximate(1e6, 10).is_err());
    }
}
