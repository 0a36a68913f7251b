//! Scalar abstractions shared by every numeric module.
//!
//! Edge weights only need ring arithmetic and an order, so exact types such
//! as integers or `num_rational::Ratio` can be used for cut bookkeeping.
//! Everything that touches amplitudes, angles or optimizer steps needs a
//! floating-point [`Real`].

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Edge-weight scalar: anything that adds, multiplies and compares.
pub trait Weight:
    Num + Copy + PartialOrd + Debug + Display + FromStr + Send + Sync + 'static
{
}

impl<W> Weight for W where
    W: Num + Copy + PartialOrd + Debug + Display + FromStr + Send + Sync + 'static
{
}

/// Floating-point scalar (f32 or f64).
pub trait Real:
    Weight + Float + FloatConst + FromPrimitive + ToPrimitive + Sum + LowerExp + Default
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite real")
    }
}

impl Real for f32 {}
impl Real for f64 {}
