//! Scalar abstraction shared by every numeric module.
//!
//! All model math is written against [`Real`] so that the same code runs on
//! plain `f32`/`f64` and on the instrumented [`Counted`](crate::ops::Counted)
//! wrapper used for operation accounting.

use std::fmt::{Debug, Display};

use num_traits::{Num, NumCast};

/// Real-valued scalar usable by the model code.
pub trait Real:
    Num + NumCast + Copy + PartialOrd + Debug + Display + std::ops::Neg<Output = Self> + Send + Sync + 'static
{
    /// True for instrumented scalars whose arithmetic feeds the op counter.
    const COUNTS_OPS: bool = false;

    fn abs(self) -> Self;
    fn sin(self) -> Self;
    fn exp(self) -> Self;
    fn is_finite(self) -> bool;

    /// Converts an `f64` literal. Panics only if the target cannot represent it at all.
    #[inline]
    fn lit(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize(v: usize) -> Self {
        <Self as NumCast>::from(v).expect("index representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

macro_rules! impl_real_float {
    ($($t:ty),*) => {$(
        impl Real for $t {
            #[inline]
            fn abs(self) -> Self {
                <$t>::abs(self)
            }
            #[inline]
            fn sin(self) -> Self {
                <$t>::sin(self)
            }
            #[inline]
            fn exp(self) -> Self {
                <$t>::exp(self)
            }
            #[inline]
            fn is_finite(self) -> bool {
                <$t>::is_finite(self)
            }
        }
    )*};
}

impl_real_float!(f32, f64);
