use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Real-valued certainty type used throughout the engine: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Tolerance applied to fixpoint termination and equality assertions.
    fn tolerance() -> Self;

    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("finite constant")
    }

    fn approx_eq(self, other: Self) -> bool {
        (self - other).abs() <= Self::tolerance()
    }

    fn in_unit_interval(self) -> bool {
        self >= Self::zero() && self <= Self::one()
    }
}

impl Scalar for f64 {
    fn tolerance() -> f64 {
        1e-9
    }
}

impl Scalar for f32 {
    fn tolerance() -> f32 {
        1e-5
    }
}

/// Formats a certainty with six decimals, folding negative zero into zero.
pub fn fixed6<S: Scalar>(value: S) -> String {
    let v = if value == S::zero() { S::zero() } else { value };
    format!("{v:.6}")
}
