//! Bounded exact rationals.
//!
//! Numerator and denominator are `i64`, always reduced, denominator positive.
//! Every arithmetic operation is checked: intermediate products are formed in
//! `i128` and an [`ArithmeticError::Overflow`] is returned when the reduced
//! result does not fit back into `i64`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("rational arithmetic exceeded 64-bit capacity")]
    Overflow,
    #[error("rational with zero denominator")]
    ZeroDenominator,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational `{0}`")]
pub struct ParseRationalError(pub String);

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

pub(crate) fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Self, ArithmeticError> {
        Self::from_i128(num as i128, den as i128)
    }

    pub const fn integer(n: i64) -> Self {
        Rational { num: n, den: 1 }
    }

    fn from_i128(num: i128, den: i128) -> Result<Self, ArithmeticError> {
        if den == 0 {
            return Err(ArithmeticError::ZeroDenominator);
        }
        let g = gcd_i128(num, den).max(1);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let num = i64::try_from(n).map_err(|_| ArithmeticError::Overflow)?;
        let den = i64::try_from(d).map_err(|_| ArithmeticError::Overflow)?;
        Ok(Rational { num, den })
    }

    pub fn numer(self) -> i64 {
        self.num
    }

    pub fn denom(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    pub fn signum(self) -> i64 {
        self.num.signum()
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, ArithmeticError> {
        let (a, b, c, d) = (self.num as i128, self.den as i128, rhs.num as i128, rhs.den as i128);
        Self::from_i128(a * d + c * b, b * d)
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, ArithmeticError> {
        self.checked_add(rhs.checked_neg()?)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, ArithmeticError> {
        Self::from_i128(self.num as i128 * rhs.num as i128, self.den as i128 * rhs.den as i128)
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, ArithmeticError> {
        if rhs.num == 0 {
            return Err(ArithmeticError::ZeroDenominator);
        }
        Self::from_i128(self.num as i128 * rhs.den as i128, self.den as i128 * rhs.num as i128)
    }

    pub fn checked_neg(self) -> Result<Self, ArithmeticError> {
        Ok(Rational {
            num: self.num.checked_neg().ok_or(ArithmeticError::Overflow)?,
            den: self.den,
        })
    }

    pub fn recip(self) -> Result<Self, ArithmeticError> {
        Rational::ONE.checked_div(self)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `integer` or `integer/integer`, with an optional leading sign.
impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let parse_int = |t: &str| -> Result<i64, ParseRationalError> {
            let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            t.parse::<i64>().map_err(|_| err())
        };
        match s.split_once('/') {
            None => Ok(Rational::integer(parse_int(s)?)),
            Some((n, d)) => {
                if d.starts_with(['-', '+']) {
                    return Err(err());
                }
                Rational::new(parse_int(n)?, parse_int(d)?).map_err(|_| err())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn reduces_and_normalizes_sign() {
        let x = r(6, -4);
        assert_eq!((x.numer(), x.denom()), (-3, 2));
        assert_eq!(r(0, -7), Rational::ZERO);
    }

    #[test]
    fn arithmetic() {
        assert_eq!(r(1, 5).checked_add(r(2, 5)).unwrap(), r(3, 5));
        assert_eq!(r(1, 2).checked_sub(r(1, 3)).unwrap(), r(1, 6));
        assert_eq!(r(2, 3).checked_mul(r(3, 8)).unwrap(), r(1, 4));
        assert_eq!(r(1, 2).checked_div(r(1, 6)).unwrap(), r(3, 1));
        assert_eq!(r(7, 3).recip().unwrap(), r(3, 7));
    }

    #[test]
    fn overflow_is_reported() {
        let big = Rational::integer(i64::MAX);
        assert_eq!(big.checked_add(Rational::ONE), Err(ArithmeticError::Overflow));
        assert_eq!(
            Rational::integer(i64::MIN).checked_neg(),
            Err(ArithmeticError::Overflow)
        );
        let tiny = r(1, i64::MAX);
        assert_eq!(tiny.checked_mul(r(1, 3)), Err(ArithmeticError::Overflow));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(Rational::new(1, 0), Err(ArithmeticError::ZeroDenominator));
        assert_eq!(
            Rational::ONE.checked_div(Rational::ZERO),
            Err(ArithmeticError::ZeroDenominator)
        );
    }

    #[test]
    fn ordering_is_exact() {
        assert!(r(7, 3) < r(5, 2));
        assert!(r(8, 3) > r(5, 2));
        assert!(r(-1, 2) < Rational::ZERO);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("1/2".parse::<Rational>().unwrap(), r(1, 2));
        assert_eq!("-2".parse::<Rational>().unwrap(), r(-2, 1));
        assert_eq!("-3/6".parse::<Rational>().unwrap(), r(-1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("a".parse::<Rational>().is_err());
        assert!("1.5".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
        assert_eq!(r(-2, 5).to_string(), "-2/5");
        assert_eq!(r(4, 2).to_string(), "2");
    }
}
