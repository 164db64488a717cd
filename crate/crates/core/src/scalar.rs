//! Numeric abstraction for sentiment values and fitness arithmetic.
//!
//! Everything that accumulates lexicon values or fitness terms is generic over
//! [`Scalar`], so the same code runs in `f64`, `f32` or exact
//! [`Rational64`](num_rational::Rational64) arithmetic.

use std::fmt::Debug;
use std::iter::Sum;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub trait Scalar:
    Signed + Copy + PartialOrd + FromPrimitive + ToPrimitive + Sum + Debug + Send + Sync + 'static
{
    /// Converts a configured weight such as `0.1`. Exact types recover the
    /// simplest fraction the float stands for.
    fn from_weight(w: f64) -> Option<Self>;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Parses a plain decimal literal (`-2`, `0.75`, `+3.5`) exactly as
    /// `digits / 10^scale`.
    fn parse_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        let (neg, body) = match s.as_bytes().first()? {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return None;
        }
        if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) || frac.len() > 12 {
            return None;
        }
        let digits: i64 = format!("{int}{frac}").parse().ok()?;
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let v = Self::from_i64(digits)? / Self::from_i64(scale)?;
        Some(if neg { -v } else { v })
    }
}

impl Scalar for f64 {
    fn from_weight(w: f64) -> Option<Self> {
        w.is_finite().then_some(w)
    }
}

impl Scalar for f32 {
    fn from_weight(w: f64) -> Option<Self> {
        w.is_finite().then_some(w as f32)
    }
}

impl Scalar for Ratio<i64> {
    fn from_weight(w: f64) -> Option<Self> {
        Ratio::approximate_float(w)
    }
}
