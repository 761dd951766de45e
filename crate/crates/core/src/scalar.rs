//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the solver can be instantiated with.
///
/// Implemented for `f32` and `f64`. All tolerances quoted in the tests assume `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Never fails for the built-in float types.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_index(i: usize) -> Self {
        Self::from_usize(i).expect("index representable in scalar type")
    }

    #[inline]
    fn from_offset(k: i64) -> Self {
        Self::from_i64(k).expect("offset representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `base^exponent` with the convention `0^exponent = 0` for every `exponent >= 0`.
///
/// The convention is the limit of the cell integrals the stencil weights come from,
/// including the `exponent -> 0` limit reached at order two.
#[inline]
pub fn pow0<T: Real>(base: T, exponent: T) -> T {
    if base == T::zero() {
        T::zero()
    } else {
        base.powf(exponent)
    }
}

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive arguments.
///
/// Arguments below one are shifted up with `Γ(x) = Γ(x + 1) / x` before the Lanczos sum,
/// which keeps the absolute error near machine precision on `(0, 3]`.
pub fn gamma<T: Real>(x: T) -> T {
    assert!(
        x > T::zero(),
        "gamma is only defined here for positive arguments"
    );
    if x < T::one() {
        return gamma(x + T::one()) / x;
    }
    let z = x - T::one();
    let mut acc = T::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (z + T::from_index(i));
    }
    let t = z + T::lit(LANCZOS_G + 0.5);
    let sqrt_two_pi = (T::lit(2.0) * T::PI()).sqrt();
    sqrt_two_pi * t.powf(z + T::lit(0.5)) * (-t).exp() * acc
}
