//! Precision-controlled scalar arithmetic.
//!
//! Everything in this crate is generic over a [`Scalar`]: a numeric type
//! that fixes both the representation of values and the rounding of each
//! multiply-accumulate. Five regimes are provided:
//!
//! * [`BigRational`]: exact rational arithmetic, the error-free reference
//!   against which every other regime is measured.
//! * `f64` / `f32`: plain IEEE-754 binary64 / binary32.
//! * [`MixedF16`]: multiplicands rounded to binary16, products exact,
//!   accumulation in binary32 (the usual tensor-core regime).
//! * [`StrictF16`]: every intermediate result rounded to binary16.
//!
//! All rounding is round-to-nearest, ties to even. Quantization happens on
//! construction: a value of type `S` is always exactly representable in
//! `S`'s format, so arithmetic never has to re-check its inputs.

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Numeric regime shared by all values flowing through one reduction.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    /// Report label for the regime, e.g. `"fp32"`.
    const MODE: &'static str;
    /// Report label for the multiply-accumulate rounding policy.
    const POLICY: &'static str;

    /// Round a raw value to the nearest representable value of the regime.
    ///
    /// Values beyond the format's range become infinite per IEEE-754;
    /// overflow is observable through [`Scalar::is_finite`], never an error.
    /// The exact regime panics on non-finite input, which it cannot hold.
    fn quantize(value: f64) -> Self;

    /// The multiply-accumulate element kernel: `a * b + acc` with the
    /// rounding the regime prescribes.
    fn fma(a: &Self, b: &Self, acc: &Self) -> Self;

    /// False once a value has overflowed to infinity (or become NaN).
    fn is_finite(&self) -> bool;

    /// Closest binary64 value, for display purposes.
    fn approx_f64(&self) -> f64;

    /// The exact rational value, or `None` for non-finite values.
    fn to_rational(&self) -> Option<BigRational>;
}

// ---------------------------------------------------------------------------
// binary16 rounding
// ---------------------------------------------------------------------------

/// Largest finite binary16 value.
pub const F16_MAX: f64 = 65504.0;
/// Smallest positive binary16 value (subnormal), 2^-24.
pub const F16_MIN_POSITIVE: f64 = 5.960_464_477_539_063e-8;

/// 2^k as f64 for exponents a normal f64 can carry.
fn exp2i(k: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&k));
    f64::from_bits(((1023 + k) as u64) << 52)
}

/// Round a binary64 value to the nearest binary16 value (ties to even),
/// returned as binary64. Results beyond ±[`F16_MAX`] round to infinity.
/// NaN and infinities pass through unchanged.
///
/// The conversion is a single rounding step straight from binary64;
/// rounding through binary32 first would double-round near ties.
pub fn round_to_f16(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    let exp = (((v.to_bits() >> 52) & 0x7ff) as i32) - 1023;
    // Grid spacing: 2^(exp-10) across the normal range, pinned at the
    // subnormal spacing 2^-24 below it. Rounding that lands on the next
    // power of two is still on the coarser grid, so one pass suffices.
    let unit = exp2i((exp - 10).max(-24));
    let rounded = (v / unit).round_ties_even() * unit;
    if rounded.abs() > F16_MAX {
        return f64::INFINITY.copysign(v);
    }
    rounded
}

// ---------------------------------------------------------------------------
// Exact rationals
// ---------------------------------------------------------------------------

impl Scalar for BigRational {
    const MODE: &'static str = "exact";
    const POLICY: &'static str = "none";

    fn quantize(value: f64) -> Self {
        BigRational::from_float(value).expect("exact scalars are built from finite values")
    }

    fn fma(a: &Self, b: &Self, acc: &Self) -> Self {
        // Exact arithmetic: skipping a multiplication by 0 or 1 cannot
        // change the result, and the reduction path multiplies against
        // all-ones and zero tiles almost exclusively.
        if a.is_zero() || b.is_zero() {
            return acc.clone();
        }
        if b.is_one() {
            return if acc.is_zero() { a.clone() } else { a + acc };
        }
        if a.is_one() {
            return if acc.is_zero() { b.clone() } else { b + acc };
        }
        a * b + acc
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn approx_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

// ---------------------------------------------------------------------------
// Native floats
// ---------------------------------------------------------------------------

impl Scalar for f64 {
    const MODE: &'static str = "fp64";
    const POLICY: &'static str = "none";

    fn quantize(value: f64) -> Self {
        value
    }

    fn fma(a: &Self, b: &Self, acc: &Self) -> Self {
        a * b + acc
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn approx_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }
}

impl Scalar for f32 {
    const MODE: &'static str = "fp32";
    const POLICY: &'static str = "none";

    fn quantize(value: f64) -> Self {
        value as f32
    }

    fn fma(a: &Self, b: &Self, acc: &Self) -> Self {
        a * b + acc
    }

    fn is_finite(&self) -> bool {
        f32::is_finite(*self)
    }

    fn approx_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }
}

// ---------------------------------------------------------------------------
// binary16-based regimes
// ---------------------------------------------------------------------------

/// Scalar regime mirroring tensor-core mixed precision: multiplicands are
/// rounded to binary16, their products are exact (a product of two
/// binary16 values always fits in binary32), and accumulation rounds in
/// binary32. Values store the binary32 accumulator representation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MixedF16(f32);

/// Scalar regime with every intermediate rounded to binary16: products,
/// sums and stored values alike. The narrow range (max 65504) makes
/// overflow to infinity an expected, observable outcome.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct StrictF16(f32);

fn f16_of_f32(v: f32) -> f32 {
    round_to_f16(f64::from(v)) as f32
}

impl MixedF16 {
    pub fn value(self) -> f32 {
        self.0
    }
}

impl StrictF16 {
    pub fn value(self) -> f32 {
        self.0
    }
}

impl Add for MixedF16 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for MixedF16 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul for MixedF16 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(f16_of_f32(self.0) * f16_of_f32(rhs.0))
    }
}

impl Zero for MixedF16 {
    fn zero() -> Self {
        Self(0.0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
}

impl One for MixedF16 {
    fn one() -> Self {
        Self(1.0)
    }
}

impl Scalar for MixedF16 {
    const MODE: &'static str = "mixed";
    const POLICY: &'static str = "fp32-acc";

    fn quantize(value: f64) -> Self {
        Self(round_to_f16(value) as f32)
    }

    fn fma(a: &Self, b: &Self, acc: &Self) -> Self {
        let qa = f16_of_f32(a.0);
        let qb = f16_of_f32(b.0);
        // qa * qb is exact in binary32; the accumulate is the one rounding.
        Self(qa * qb + acc.0)
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    fn approx_f64(&self) -> f64 {
        f64::from(self.0)
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(self.0)
    }
}

impl Add for StrictF16 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        // The sum of two binary16 values is exact in binary64, so rounding
        // it once lands on the correctly rounded binary16 result.
        Self(round_to_f16(f64::from(self.0) + f64::from(rhs.0)) as f32)
    }
}

impl Sub for StrictF16 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(round_to_f16(f64::from(self.0) - f64::from(rhs.0)) as f32)
    }
}

impl Mul for StrictF16 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(round_to_f16(f64::from(self.0) * f64::from(rhs.0)) as f32)
    }
}

impl Zero for StrictF16 {
    fn zero() -> Self {
        Self(0.0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
}

impl One for StrictF16 {
    fn one() -> Self {
        Self(1.0)
    }
}

impl Scalar for StrictF16 {
    const MODE: &'static str = "mixed";
    const POLICY: &'static str = "strict-fp16";

    fn quantize(value: f64) -> Self {
        Self(round_to_f16(value) as f32)
    }

    fn fma(a: &Self, b: &Self, acc: &Self) -> Self {
        let qa = f64::from(f16_of_f32(a.0));
        let qb = f64::from(f16_of_f32(b.0));
        // Products and sums of binary16 values are exact in binary64;
        // each intermediate then takes exactly one binary16 rounding.
        let product = round_to_f16(qa * qb);
        Self(round_to_f16(product + f64::from(acc.0)) as f32)
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    fn approx_f64(&self) -> f64 {
        f64::from(self.0)
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(self.0)
    }
}

// ---------------------------------------------------------------------------
// Summation baselines
// ---------------------------------------------------------------------------

/// Exact rational sum of raw input values; the oracle every regime's
/// reduction result is measured against. Every finite binary64 value is an
/// exact rational, so no error enters here.
pub fn exact_sum<'a, I>(values: I) -> BigRational
where
    I: IntoIterator<Item = &'a f64>,
{
    values
        .into_iter()
        .map(|&v| <BigRational as Scalar>::quantize(v))
        .sum()
}

/// Kahan-compensated running sum in the scalar's own regime. Used as a
/// precision baseline next to the naive fold.
pub fn compensated_sum<S: Scalar>(values: &[S]) -> S {
    let mut sum = S::zero();
    let mut compensation = S::zero();
    for x in values {
        let y = x.clone() - compensation.clone();
        let t = sum.clone() + y.clone();
        compensation = (t.clone() - sum) - y;
        sum = t;
    }
    sum
}
