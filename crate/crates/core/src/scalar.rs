//! Scalar abstraction for every real-valued quantity the toolkit reports.
//!
//! Estimators are generic over [`Scalar`] so callers can work in `f32` or
//! `f64`. Quantities with an exact closed form (cylinder masses, Cantor
//! distances) are generic over [`num_traits::Num`] instead, which admits
//! rational types such as `num_rational::Ratio<i64>`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::Serializer;

pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// `num / den` computed in the scalar type.
    fn ratio(num: usize, den: usize) -> Self {
        Self::from_usize(num).expect("count fits scalar") / Self::from_usize(den).expect("count fits scalar")
    }

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal fits scalar")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Serializes a scalar as a JSON number with exactly six decimal places.
pub(crate) fn fixed6<T: Scalar, S: Serializer>(value: &T, serializer: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    let text = format!("{:.6}", value.to_f64().unwrap_or(f64::NAN));
    match text.parse::<serde_json::Number>() {
        Ok(number) => number.serialize(serializer),
        Err(_) => serializer.serialize_none(),
    }
}

pub(crate) fn fixed6_opt<T: Scalar, S: Serializer>(
    value: &Option<T>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => fixed6(v, serializer),
        None => serializer.serialize_none(),
    }
}

/// Wrapper used when a six-decimal scalar sits inside a container.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Fixed6<T>(pub T);

impl<T: Scalar> serde::Serialize for Fixed6<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        fixed6(&self.0, serializer)
    }
}
