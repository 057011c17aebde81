//! Exact rational numbers.
//!
//! Every DoF and NDT value in this crate is a ratio of small integers, so the
//! closed forms are evaluated exactly and compared with `==`. Floating point
//! only appears in the channel-level checks and in the Monte-Carlo estimator.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// A rational number kept in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Panics if `den == 0`.
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Rational(Ratio::new(num, den))
    }

    pub fn checked_new(num: i128, den: i128) -> Option<Self> {
        (den != 0).then(|| Rational(Ratio::new(num, den)))
    }

    pub fn integer(n: i128) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<i128> {
        self.is_integer().then(|| self.numer())
    }

    /// The value as a non-negative count, if it is one.
    pub fn to_count(&self) -> Option<usize> {
        self.to_integer().and_then(|v| usize::try_from(v).ok())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn floor(&self) -> i128 {
        self.0.floor().to_integer()
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Rational(self.0.recip()))
    }

    pub fn pow(&self, exp: u32) -> Self {
        // 0^0 = 1, which the subfile-size law relies on at the endpoints.
        let mut acc = Rational::ONE;
        for _ in 0..exp {
            acc = acc * *self;
        }
        acc
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering rounded half away from zero to `digits` places.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = 10i128.checked_pow(digits);
        let scaled = scale.and_then(|s| self.numer().abs().checked_mul(s)?.checked_mul(2));
        let den2 = self.denom().checked_mul(2);
        let (Some(scale), Some(scaled), Some(den2)) = (scale, scaled, den2) else {
            return format!("{:.*}", digits as usize, self.to_f64());
        };
        let rounded = (scaled + self.denom()) / den2;
        let sign = if self.is_negative() && rounded != 0 { "-" } else { "" };
        let int_part = rounded / scale;
        let frac_part = rounded % scale;
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part:0width$}", width = digits as usize)
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<i128> for Rational {
    fn from(n: i128) -> Self {
        Rational::integer(n)
    }
}

impl From<usize> for Rational {
    fn from(n: usize) -> Self {
        Rational::integer(n as i128)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::integer(n as i128)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::integer(n as i128)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p/q`, integers and finite decimals such as `0.25`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            return Rational::checked_new(p, q).ok_or_else(bad);
        }
        if let Some((int, frac)) = s.split_once('.') {
            let negative = int.starts_with('-');
            let int_val: i128 = match int {
                "" | "-" | "+" => 0,
                _ => int.parse().map_err(|_| bad())?,
            };
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 30 {
                return Err(bad());
            }
            let scale = 10i128.pow(frac.len() as u32);
            let frac_val: i128 = frac.parse().map_err(|_| bad())?;
            let frac = Rational::new(frac_val, scale);
            let int = Rational::integer(int_val.abs());
            let magnitude = int + frac;
            return Ok(if negative { -magnitude } else { magnitude });
        }
        s.parse::<i128>().map(Rational::integer).map_err(|_| bad())
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 = self.0 + rhs.0;
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

/// Panics on division by zero, like integer division.
impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ONE, |a, b| a * b)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::ZERO
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::ONE
    }
}

impl PartialEq<i128> for Rational {
    fn eq(&self, other: &i128) -> bool {
        self.denom() == 1 && self.numer() == *other
    }
}

impl PartialOrd<i128> for Rational {
    fn partial_cmp(&self, other: &i128) -> Option<Ordering> {
        Some(self.cmp(&Rational::integer(*other)))
    }
}

/// Shorthand for `Rational::new`.
pub fn q(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = Rational::new(6, -8);
        assert_eq!(r.numer(), -3);
        assert_eq!(r.denom(), 4);
        assert_eq!(r.to_string(), "-3/4");
        assert_eq!(Rational::new(24, 7).to_string(), "24/7");
        assert_eq!(Rational::new(9, 3).to_string(), "3");
    }

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!("24/7".parse::<Rational>().unwrap(), q(24, 7));
        assert_eq!("3".parse::<Rational>().unwrap(), q(3, 1));
        assert_eq!("0.25".parse::<Rational>().unwrap(), q(1, 4));
        assert_eq!("-1.5".parse::<Rational>().unwrap(), q(-3, 2));
        assert_eq!("-0.5".parse::<Rational>().unwrap(), q(-1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!("1.".parse::<Rational>().is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q(24, 7).to_decimal(12), "3.428571428571");
        assert_eq!(q(62, 81).to_decimal(12), "0.765432098765");
        assert_eq!(q(2, 3).to_decimal(12), "0.666666666667");
        assert_eq!(q(-1, 3).to_decimal(3), "-0.333");
        assert_eq!(q(3, 1).to_decimal(12), "3.000000000000");
        assert_eq!(q(1, 2).to_decimal(0), "1");
    }

    #[test]
    fn pow_with_zero_base() {
        assert_eq!(Rational::ZERO.pow(0), Rational::ONE);
        assert_eq!(Rational::ZERO.pow(2), Rational::ZERO);
        assert_eq!(q(2, 3).pow(3), q(8, 27));
    }

    proptest! {
        #[test]
        fn add_then_subtract_round_trips(a in -1000i128..1000, b in 1i128..1000, c in -1000i128..1000, d in 1i128..1000) {
            let x = q(a, b);
            let y = q(c, d);
            prop_assert_eq!((x + y) - y, x);
            prop_assert!(x.denom() > 0);
            if !y.is_zero() {
                prop_assert_eq!((x * y) / y, x);
            }
        }

        #[test]
        fn decimal_agrees_with_float(a in -100_000i128..100_000, b in 1i128..100_000) {
            let x = q(a, b);
            let parsed: f64 = x.to_decimal(12).parse().unwrap();
            prop_assert!((parsed - x.to_f64()).abs() <= 6e-13);
        }
    }
}
