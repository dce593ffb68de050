//! Number types used throughout the crate.
//!
//! Every algorithm is generic over [`Scalar`]. `f64` is the fast path and
//! compares with an absolute tolerance; [`Rational`] is exact and compares
//! with tolerance zero.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational.
pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// True for exact arithmetic.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `n / d`; panics on `d == 0`.
    fn ratio(n: i64, d: i64) -> Self;
    /// Exact binary value of `v` for rationals.
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    /// Parses `"3"`, `"-2.5"`, `"1e-3"` or `"p/q"`.
    fn parse_str(s: &str) -> Option<Self>;

    /// Absolute comparison tolerance (zero when exact).
    fn tol() -> Self;
    /// Threshold below which a pivot or residual counts as zero.
    fn eps() -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn two() -> Self {
        Self::from_i64(2)
    }

    /// `2^k` for any integer `k`.
    fn pow2(k: i32) -> Self {
        let mut r = Self::one();
        let f = if k >= 0 { Self::two() } else { Self::ratio(1, 2) };
        for _ in 0..k.unsigned_abs() {
            r *= f.clone();
        }
        r
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

/// `a <= b` up to tolerance.
pub fn le_tol<S: Scalar>(a: &S, b: &S) -> bool {
    a.clone() <= b.clone() + S::tol()
}

/// `|a - b| <= tol`.
pub fn approx_eq<S: Scalar>(a: &S, b: &S) -> bool {
    (a.clone() - b.clone()).abs() <= S::tol()
}

/// Treats values within `eps` of zero as zero.
pub fn near_zero<S: Scalar>(a: &S) -> bool {
    a.abs() <= S::eps()
}

pub fn sum<S: Scalar, I: IntoIterator<Item = S>>(it: I) -> S {
    let mut acc = S::zero();
    for v in it {
        acc += v;
    }
    acc
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        n as f64 / d as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn parse_str(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().ok()?;
            let q: f64 = q.trim().parse().ok()?;
            if q == 0.0 {
                return None;
            }
            return Some(p / q);
        }
        let v: f64 = s.parse().ok()?;
        v.is_finite().then_some(v)
    }
    fn tol() -> Self {
        1e-9
    }
    fn eps() -> Self {
        1e-12
    }
    fn pow2(k: i32) -> Self {
        2f64.powi(k)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn parse_str(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = parse_decimal(p.trim())?;
            let q = parse_decimal(q.trim())?;
            if Zero::is_zero(&q) {
                return None;
            }
            return Some(p / q);
        }
        parse_decimal(s)
    }
    fn tol() -> Self {
        Zero::zero()
    }
    fn eps() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn pow2(k: i32) -> Self {
        let p = BigInt::one() << k.unsigned_abs();
        if k >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        }
    }
}

/// Exact value of a decimal literal such as `-12.5e-3`.
fn parse_decimal(s: &str) -> Option<Rational> {
    if s.is_empty() {
        return None;
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(n);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}
