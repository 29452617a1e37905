//! Arithmetic-operation accounting.
//!
//! [`Counted`] wraps a scalar and bumps a thread-local [`OpCounter`] on every
//! arithmetic operation. Because the model code is generic over
//! [`Real`], running it on `Counted<f64>` yields results bit-identical to the
//! `f64` run together with an exact operation count.
//!
//! Comparisons, negation, and constant construction are free. Additions,
//! subtractions and multiplications are the counted "+, -, x" set; divisions
//! and transcendental calls are tallied separately.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Rem, Sub};

use num_traits::{Num, NumCast, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Tally of arithmetic operations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounter {
    pub adds: u64,
    pub subs: u64,
    pub muls: u64,
    pub divs: u64,
    /// Transcendental calls (`sin`, `exp`).
    pub funcs: u64,
}

impl OpCounter {
    /// `adds + subs + muls`, the cost convention where all three weigh the same.
    pub fn total(&self) -> u64 {
        self.adds + self.subs + self.muls
    }

    fn saturating_diff(&self, earlier: &OpCounter) -> OpCounter {
        OpCounter {
            adds: self.adds - earlier.adds,
            subs: self.subs - earlier.subs,
            muls: self.muls - earlier.muls,
            divs: self.divs - earlier.divs,
            funcs: self.funcs - earlier.funcs,
        }
    }
}

impl Add for OpCounter {
    type Output = OpCounter;

    fn add(self, rhs: OpCounter) -> OpCounter {
        OpCounter {
            adds: self.adds + rhs.adds,
            subs: self.subs + rhs.subs,
            muls: self.muls + rhs.muls,
            divs: self.divs + rhs.divs,
            funcs: self.funcs + rhs.funcs,
        }
    }
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, rhs: OpCounter) {
        *self = *self + rhs;
    }
}

thread_local! {
    static COUNTER: Cell<OpCounter> = const { Cell::new(OpCounter { adds: 0, subs: 0, muls: 0, divs: 0, funcs: 0 }) };
}

#[derive(Clone, Copy)]
enum Kind {
    Add,
    Sub,
    Mul,
    Div,
    Func,
}

#[inline]
fn bump(kind: Kind) {
    COUNTER.with(|c| {
        let mut v = c.get();
        match kind {
            Kind::Add => v.adds += 1,
            Kind::Sub => v.subs += 1,
            Kind::Mul => v.muls += 1,
            Kind::Div => v.divs += 1,
            Kind::Func => v.funcs += 1,
        }
        c.set(v);
    });
}

/// Current thread's running tally.
pub fn snapshot() -> OpCounter {
    COUNTER.with(|c| c.get())
}

/// Runs `f` and returns its result along with the operations it performed on
/// this thread. Nested calls are fine; each sees only its own span.
pub fn measure<R>(f: impl FnOnce() -> R) -> (R, OpCounter) {
    let before = snapshot();
    let out = f();
    let after = snapshot();
    (out, after.saturating_diff(&before))
}

/// Scalar that records every arithmetic operation performed on it.
#[derive(Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Counted<T>(pub T);

impl<T> Counted<T> {
    pub fn into_inner(self) -> T {
        self.0
    }
}

impl<T: fmt::Debug> fmt::Debug for Counted<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<T: fmt::Display> fmt::Display for Counted<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

macro_rules! counted_binop {
    ($tr:ident, $method:ident, $kind:expr) => {
        impl<T: $tr<Output = T>> $tr for Counted<T> {
            type Output = Counted<T>;

            #[inline]
            fn $method(self, rhs: Counted<T>) -> Counted<T> {
                bump($kind);
                Counted(self.0.$method(rhs.0))
            }
        }
    };
}

counted_binop!(Add, add, Kind::Add);
counted_binop!(Sub, sub, Kind::Sub);
counted_binop!(Mul, mul, Kind::Mul);
counted_binop!(Div, div, Kind::Div);
counted_binop!(Rem, rem, Kind::Div);

impl<T: Neg<Output = T>> Neg for Counted<T> {
    type Output = Counted<T>;

    #[inline]
    fn neg(self) -> Counted<T> {
        Counted(-self.0)
    }
}

impl<T: Zero> Zero for Counted<T> {
    fn zero() -> Self {
        Counted(T::zero())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl<T: One> One for Counted<T> {
    fn one() -> Self {
        Counted(T::one())
    }
}

impl<T: Num> Num for Counted<T> {
    type FromStrRadixErr = T::FromStrRadixErr;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        T::from_str_radix(s, radix).map(Counted)
    }
}

impl<T: ToPrimitive> ToPrimitive for Counted<T> {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }

    fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }
}

impl<T: NumCast> NumCast for Counted<T> {
    fn from<N: ToPrimitive>(n: N) -> Option<Self> {
        T::from(n).map(Counted)
    }
}

impl<T: Real> Real for Counted<T> {
    const COUNTS_OPS: bool = true;

    #[inline]
    fn abs(self) -> Self {
        Counted(self.0.abs())
    }

    #[inline]
    fn sin(self) -> Self {
        bump(Kind::Func);
        Counted(self.0.sin())
    }

    #[inline]
    fn exp(self) -> Self {
        bump(Kind::Func);
        Counted(self.0.exp())
    }

    #[inline]
    fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_each_kind() {
        let a = Counted(2.0f64);
        let b = Counted(3.0f64);
        let (v, ops) = measure(|| (a * b + a - b) / b);
        assert_eq!(v.0, (2.0 * 3.0 + 2.0 - 3.0) / 3.0);
        assert_eq!(
            ops,
            OpCounter { adds: 1, subs: 1, muls: 1, divs: 1, funcs: 0 }
        );
        assert_eq!(ops.total(), 3);
    }

    #[test]
    fn negation_comparison_and_constants_are_free() {
        let a = Counted(2.0f64);
        let (_, ops) = measure(|| {
            let z = Counted::<f64>::zero();
            let _ = -a;
            a > z
        });
        assert_eq!(ops, OpCounter::default());
    }

    #[test]
    fn nested_measurements_partition_work() {
        let a = Counted(1.0f64);
        let ((_, inner), outer) = measure(|| {
            let _ = a + a;
            measure(|| a * a)
        });
        assert_eq!(inner.muls, 1);
        assert_eq!(inner.adds, 0);
        assert_eq!(outer.adds, 1);
        assert_eq!(outer.muls, 1);
    }

    #[test]
    fn transcendental_calls_are_tallied_separately() {
        let (_, ops) = measure(|| Counted(0.3f64).sin().exp());
        assert_eq!(ops.funcs, 2);
        assert_eq!(ops.total(), 0);
    }
}
