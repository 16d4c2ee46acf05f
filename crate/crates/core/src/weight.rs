//! Exact rational arc weights.
//!
//! Weights live in `[0, 1]` and are stored as reduced fractions over a
//! primitive integer type. Sums of weights (indegrees, totals) may exceed 1
//! and are carried as [`WeightSum`]. All arithmetic is checked: an overflow of
//! the integer component surfaces as [`WeightError::Overflow`].

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, One, PrimInt, Zero};
use thiserror::Error;

/// Integer component of a rational weight.
///
/// Implemented for every primitive integer; the crate root fixes `i64` as the
/// default and `i128` as the wide variant.
pub trait WeightInt:
    PrimInt + Integer + Hash + fmt::Debug + fmt::Display + FromStr + Send + Sync + 'static
{
}

impl<T> WeightInt for T where
    T: PrimInt + Integer + Hash + fmt::Debug + fmt::Display + FromStr + Send + Sync + 'static
{
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("weight {0} is outside [0, 1]")]
    OutOfRange(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed weight `{0}`")]
    Malformed(String),
    #[error("integer overflow in exact weight arithmetic")]
    Overflow,
    #[error("cap of a zero weight is unbounded")]
    ZeroCap,
}

/// A weight in `[0, 1]`, always in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight<I: WeightInt>(Ratio<I>);

impl<I: WeightInt> Weight<I> {
    pub fn new(numer: I, denom: I) -> Result<Self, WeightError> {
        if denom.is_zero() {
            return Err(WeightError::ZeroDenominator);
        }
        let r = Ratio::new(numer, denom);
        Self::from_ratio(r)
    }

    pub fn from_ratio(r: Ratio<I>) -> Result<Self, WeightError> {
        if r < Ratio::zero() || r > Ratio::one() {
            return Err(WeightError::OutOfRange(format!("{}/{}", r.numer(), r.denom())));
        }
        // Ratio::new already reduces, but a negative denominator may survive
        // for signed types constructed through `new_raw`.
        Ok(Weight(Ratio::new(*r.numer(), *r.denom())))
    }

    pub fn zero() -> Self {
        Weight(Ratio::zero())
    }

    pub fn one() -> Self {
        Weight(Ratio::one())
    }

    /// `1 / m`, used by the defective-coloring reduction.
    pub fn reciprocal(m: usize) -> Result<Self, WeightError> {
        if m == 0 {
            return Err(WeightError::ZeroDenominator);
        }
        let d = I::from(m).ok_or(WeightError::Overflow)?;
        Self::new(I::one(), d)
    }

    pub fn numer(&self) -> I {
        *self.0.numer()
    }

    pub fn denom(&self) -> I {
        *self.0.denom()
    }

    pub fn as_ratio(&self) -> Ratio<I> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Units of `w` in `b`-bit fixed point, i.e. `w * 2^b`, when exact.
    pub fn dyadic_units(&self, bits: u32) -> Option<u64> {
        let den = self.denom().to_u64()?;
        let num = self.numer().to_u64()?;
        if bits >= 63 || !den.is_power_of_two() {
            return None;
        }
        let scale = 1u64 << bits;
        if !scale.is_multiple_of(den) {
            return None;
        }
        Some(num * (scale / den))
    }

    /// Smallest `b` such that the weight is a multiple of `2^-b`, if dyadic.
    pub fn dyadic_bits(&self) -> Option<u32> {
        let den = self.denom().to_u64()?;
        den.is_power_of_two().then(|| den.trailing_zeros())
    }
}

impl<I: WeightInt> fmt::Debug for Weight<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

/// Canonical text form `num/den`.
impl<I: WeightInt> fmt::Display for Weight<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl<I: WeightInt> FromStr for Weight<I> {
    type Err = WeightError;

    /// Accepts `num/den`, a decimal such as `0.7`, or an integer `0`/`1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r = parse_ratio::<I>(s)?;
        Self::from_ratio(r)
    }
}

fn parse_int<I: WeightInt>(s: &str) -> Result<I, WeightError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(WeightError::Malformed(s.to_string()));
    }
    // Digits-only input that fails to parse can only have overflowed.
    s.parse::<I>().map_err(|_| WeightError::Overflow)
}

fn parse_ratio<I: WeightInt>(s: &str) -> Result<Ratio<I>, WeightError> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_int::<I>(n)?;
        let d = parse_int::<I>(d)?;
        if d.is_zero() {
            return Err(WeightError::ZeroDenominator);
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int_part = if int.is_empty() { I::zero() } else { parse_int::<I>(int)? };
        if frac.is_empty() {
            return Ok(Ratio::from_integer(int_part));
        }
        let frac_part = parse_int::<I>(frac)?;
        let ten = I::from(10u8).ok_or(WeightError::Overflow)?;
        let mut den = I::one();
        for _ in 0..frac.len() {
            den = den.checked_mul(&ten).ok_or(WeightError::Overflow)?;
        }
        let num = int_part
            .checked_mul(&den)
            .and_then(|x| x.checked_add(&frac_part))
            .ok_or(WeightError::Overflow)?;
        return Ok(Ratio::new(num, den));
    }
    Ok(Ratio::from_integer(parse_int::<I>(s)?))
}

/// Sum of weights; unlike [`Weight`] it may exceed 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightSum<I: WeightInt>(Ratio<I>);

impl<I: WeightInt> WeightSum<I> {
    pub fn zero() -> Self {
        WeightSum(Ratio::zero())
    }

    pub fn from_ratio(r: Ratio<I>) -> Self {
        WeightSum(r)
    }

    pub fn as_ratio(&self) -> Ratio<I> {
        self.0
    }

    pub fn checked_add_weight(self, w: Weight<I>) -> Result<Self, WeightError> {
        self.0.checked_add(&w.0).map(WeightSum).ok_or(WeightError::Overflow)
    }

    pub fn checked_add(self, other: Self) -> Result<Self, WeightError> {
        self.0.checked_add(&other.0).map(WeightSum).ok_or(WeightError::Overflow)
    }

    pub fn is_below_one(&self) -> bool {
        self.0 < Ratio::one()
    }

    /// `floor(2 * self + 1)`.
    pub fn floor_twice_plus_one(&self) -> Result<u64, WeightError> {
        let two = Ratio::from_integer(I::one() + I::one());
        let v = two
            .checked_mul(&self.0)
            .and_then(|x| x.checked_add(&Ratio::one()))
            .ok_or(WeightError::Overflow)?;
        v.floor().to_integer().to_u64().ok_or(WeightError::Overflow)
    }
}

impl<I: WeightInt> fmt::Debug for WeightSum<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl<I: WeightInt> fmt::Display for WeightSum<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Largest `m >= 0` with `m * w < 1`.
///
/// Stands in for every `floor((1 - eps) / w)` term of the bounds, so no
/// concrete epsilon is ever needed.
pub fn cap<I: WeightInt>(w: Weight<I>) -> Result<u64, WeightError> {
    if w.is_zero() {
        return Err(WeightError::ZeroCap);
    }
    // w = p/q in lowest terms: m*p < q  <=>  m <= (q - 1) / p
    let m = (w.denom() - I::one()) / w.numer();
    m.to_u64().ok_or(WeightError::Overflow)
}

/// `max { s : s^2 <= r }` for a nonnegative rational `r`, by integer search on
/// `s^2 * den <= num`.
pub fn isqrt_floor<I: WeightInt>(r: Ratio<I>) -> Result<u64, WeightError> {
    if r < Ratio::zero() {
        return Err(WeightError::OutOfRange(format!("{}/{}", r.numer(), r.denom())));
    }
    let num = r.numer().to_u128().ok_or(WeightError::Overflow)?;
    let den = r.denom().to_u128().ok_or(WeightError::Overflow)?;
    let fits = |s: u128| -> bool {
        s.checked_mul(s).and_then(|sq| sq.checked_mul(den)).is_some_and(|lhs| lhs <= num)
    };
    let (mut lo, mut hi) = (0u128, 1u128);
    while fits(hi) {
        lo = hi;
        hi *= 2;
    }
    // invariant: fits(lo), !fits(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    u64::try_from(lo).map_err(|_| WeightError::Overflow)
}

/// Weights rescaled to integers over a common denominator.
///
/// A same-color indegree is below 1 exactly when its unit sum is below
/// `one`. Used by the search-based solvers to avoid rational arithmetic in
/// their inner loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitScale {
    pub one: u128,
}

impl UnitScale {
    pub fn for_weights<I: WeightInt>(
        weights: impl IntoIterator<Item = Weight<I>>,
    ) -> Result<Self, WeightError> {
        let mut l: u128 = 1;
        for w in weights {
            let d = w.denom().to_u128().ok_or(WeightError::Overflow)?;
            let g = l.gcd(&d);
            l = (l / g).checked_mul(d).ok_or(WeightError::Overflow)?;
        }
        Ok(UnitScale { one: l })
    }

    pub fn units<I: WeightInt>(&self, w: Weight<I>) -> Result<u128, WeightError> {
        let n = w.numer().to_u128().ok_or(WeightError::Overflow)?;
        let d = w.denom().to_u128().ok_or(WeightError::Overflow)?;
        n.checked_mul(self.one / d).ok_or(WeightError::Overflow)
    }
}
