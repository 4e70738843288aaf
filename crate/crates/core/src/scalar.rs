//! Numeric types scores can be computed in.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};

/// A ratio type: floating point, or exact rationals.
pub trait Scalar: Num + Copy + PartialOrd + fmt::Debug {
    fn from_count(n: usize) -> Self;
    fn to_f64(self) -> f64;
}

impl Scalar for f64 {
    fn from_count(n: usize) -> Self {
        n as f64
    }

    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn from_count(n: usize) -> Self {
        n as f32
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for Ratio<i64> {
    fn from_count(n: usize) -> Self {
        Ratio::from_integer(i64::try_from(n).expect("count fits in i64"))
    }

    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}
