//! Triangular norms and conorms on `[0, 1]`.
//!
//! Each [`TNormFamily`] pairs a t-norm (conjunction) with its dual s-conorm
//! (disjunction). Justifications combine their antecedents with the t-norm;
//! literals combine their supports with the s-conorm.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TNormError {
    #[error("certainty value outside [0, 1] at position {index}")]
    OutOfDomain { index: usize },
}

/// A t-norm / s-conorm pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TNormFamily {
    /// Gödel: `min` / `max`.
    MinMax,
    /// Product / probabilistic sum `a + b - ab`.
    #[default]
    ProductProbSum,
    /// Łukasiewicz: `max(0, a + b - 1)` / `min(1, a + b)`.
    Lukasiewicz,
}

impl TNormFamily {
    pub const ALL: [TNormFamily; 3] = [
        TNormFamily::MinMax,
        TNormFamily::ProductProbSum,
        TNormFamily::Lukasiewicz,
    ];

    /// Binary t-norm. Arguments are assumed to lie in `[0, 1]`.
    pub fn and<S: Scalar>(self, a: S, b: S) -> S {
        match self {
            TNormFamily::MinMax => a.min(b),
            TNormFamily::ProductProbSum => a * b,
            TNormFamily::Lukasiewicz => (a + b - S::one()).max(S::zero()),
        }
    }

    /// Binary s-conorm. Arguments are assumed to lie in `[0, 1]`.
    pub fn or<S: Scalar>(self, a: S, b: S) -> S {
        match self {
            TNormFamily::MinMax => a.max(b),
            TNormFamily::ProductProbSum => a + b - a * b,
            TNormFamily::Lukasiewicz => (a + b).min(S::one()),
        }
    }

    pub fn and_all<S: Scalar>(self, values: impl IntoIterator<Item = S>) -> S {
        values.into_iter().fold(S::one(), |acc, v| self.and(acc, v))
    }

    pub fn or_all<S: Scalar>(self, values: impl IntoIterator<Item = S>) -> S {
        values.into_iter().fold(S::zero(), |acc, v| self.or(acc, v))
    }

    pub fn keyword(self) -> &'static str {
        match self {
            TNormFamily::MinMax => "min",
            TNormFamily::ProductProbSum => "product",
            TNormFamily::Lukasiewicz => "luka",
        }
    }
}

impl fmt::Display for TNormFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for TNormFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min" | "minmax" => Ok(TNormFamily::MinMax),
            "product" | "prod" => Ok(TNormFamily::ProductProbSum),
            "luka" | "lukasiewicz" => Ok(TNormFamily::Lukasiewicz),
            other => Err(format!("unknown t-norm family `{other}`")),
        }
    }
}

fn check_domain<S: Scalar>(values: &[S]) -> Result<(), TNormError> {
    match values.iter().position(|v| !v.in_unit_interval()) {
        Some(index) => Err(TNormError::OutOfDomain { index }),
        None => Ok(()),
    }
}

/// Folds the family's t-norm over `values`; the empty fold is 1.
pub fn tnorm<S: Scalar>(family: TNormFamily, values: &[S]) -> Result<S, TNormError> {
    check_domain(values)?;
    Ok(family.and_all(values.iter().copied()))
}

/// Folds the family's s-conorm over `values`; the empty fold is 0.
pub fn snorm<S: Scalar>(family: TNormFamily, values: &[S]) -> Result<S, TNormError> {
    check_domain(values)?;
    Ok(family.or_all(values.iter().copied()))
}

/// Value of the nonmonotonic antecedent "fail to prove the target to degree
/// `alpha`": 0 once the target's certainty reaches `alpha`, 1 otherwise.
///
/// The comparison is exact; no tolerance is applied at the threshold.
pub fn eval_nonmon<S: Scalar>(alpha: S, target_certainty: S) -> S {
    if target_certainty >= alpha {
        S::zero()
    } else {
        S::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn product_examples() {
        let p = TNormFamily::ProductProbSum;
        assert_eq!(tnorm(p, &[0.8, 1.0]).unwrap(), 0.8);
        assert!((tnorm::<f64>(p, &[0.9, 0.8]).unwrap() - 0.72).abs() < EPS);
        assert_eq!(snorm(p, &[0.5, 0.5]).unwrap(), 0.75);
    }

    #[test]
    fn max_support_with_dead_justification() {
        assert_eq!(snorm(TNormFamily::MinMax, &[0.8, 0.0]).unwrap(), 0.8);
    }

    #[test]
    fn empty_folds_are_identities() {
        for f in TNormFamily::ALL {
            assert_eq!(tnorm::<f64>(f, &[]).unwrap(), 1.0);
            assert_eq!(snorm::<f64>(f, &[]).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_out_of_domain() {
        let err = tnorm(TNormFamily::MinMax, &[0.5, 1.5]).unwrap_err();
        assert_eq!(err, TNormError::OutOfDomain { index: 1 });
        assert!(snorm(TNormFamily::Lukasiewicz, &[-0.1]).is_err());
        assert!(snorm(TNormFamily::Lukasiewicz, &[f64::NAN]).is_err());
    }

    #[test]
    fn nonmonotonic_threshold() {
        assert_eq!(eval_nonmon(0.2, 0.9), 0.0);
        assert_eq!(eval_nonmon(0.2, 0.0), 1.0);
        assert_eq!(eval_nonmon(0.2, 0.2), 0.0);
        assert_eq!(eval_nonmon(1.0_f32, 0.999), 1.0);
    }

    #[test]
    fn parse_keywords() {
        for f in TNormFamily::ALL {
            assert_eq!(f.keyword().parse::<TNormFamily>().unwrap(), f);
        }
        assert!("sum".parse::<TNormFamily>().is_err());
    }

    fn family() -> impl Strategy<Value = TNormFamily> {
        prop_oneof![
            Just(TNormFamily::MinMax),
            Just(TNormFamily::ProductProbSum),
            Just(TNormFamily::Lukasiewicz)
        ]
    }

    proptest! {
        #[test]
        fn tnorm_axioms(f in family(), a in 0.0..=1.0f64, b in 0.0..=1.0f64, c in 0.0..=1.0f64, d in 0.0..=1.0f64) {
            prop_assert!((f.and(a, b) - f.and(b, a)).abs() <= EPS);
            prop_assert!((f.and(f.and(a, b), c) - f.and(a, f.and(b, c))).abs() <= EPS);
            prop_assert!((f.and(a, 1.0) - a).abs() <= EPS);
            let (lo, hi) = if c <= d { (c, d) } else { (d, c) };
            prop_assert!(f.and(a, lo) <= f.and(a, hi) + EPS);
            prop_assert!(f.and(a, b) <= a.min(b) + EPS);
        }

        #[test]
        fn snorm_axioms(f in family(), a in 0.0..=1.0f64, b in 0.0..=1.0f64, c in 0.0..=1.0f64, d in 0.0..=1.0f64) {
            prop_assert!((f.or(a, b) - f.or(b, a)).abs() <= EPS);
            prop_assert!((f.or(f.or(a, b), c) - f.or(a, f.or(b, c))).abs() <= EPS);
            prop_assert!((f.or(a, 0.0) - a).abs() <= EPS);
            let (lo, hi) = if c <= d { (c, d) } else { (d, c) };
            prop_assert!(f.or(a, lo) <= f.or(a, hi) + EPS);
            prop_assert!(f.or(a, b) + EPS >= a.max(b));
        }

        #[test]
        fn folds_stay_in_unit_interval(f in family(), xs in proptest::collection::vec(0.0..=1.0f64, 0..8)) {
            let t = tnorm(f, &xs).unwrap();
            let s = snorm(f, &xs).unwrap();
            prop_assert!((0.0..=1.0).contains(&t));
            prop_assert!((0.0..=1.0 + EPS).contains(&s));
        }
    }
}
