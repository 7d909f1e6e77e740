//! Dimension vectors over a fixed set of base dimensions.

use std::fmt;

use crate::rational::{ArithmeticError, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseDim {
    Mass,
    Length,
    Time,
    Temperature,
    Currency,
}

impl BaseDim {
    pub const ALL: [BaseDim; 5] = [
        BaseDim::Mass,
        BaseDim::Length,
        BaseDim::Time,
        BaseDim::Temperature,
        BaseDim::Currency,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BaseDim::Mass => "M",
            BaseDim::Length => "L",
            BaseDim::Time => "T",
            BaseDim::Temperature => "Θ",
            BaseDim::Currency => "Cur",
        }
    }

    /// Symbol of the coherent unit the registry scales everything against.
    pub fn coherent_unit(self) -> &'static str {
        match self {
            BaseDim::Mass => "kg",
            BaseDim::Length => "m",
            BaseDim::Time => "s",
            BaseDim::Temperature => "K",
            BaseDim::Currency => "GBP",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

pub const BASE_COUNT: usize = BaseDim::ALL.len();

/// Exponent vector over [`BaseDim`]. The zero vector is the only
/// dimensionless value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Dimension {
    exponents: [Rational; BASE_COUNT],
}

impl Dimension {
    pub const DIMENSIONLESS: Dimension = Dimension {
        exponents: [Rational::ZERO; BASE_COUNT],
    };

    pub fn new(exponents: [Rational; BASE_COUNT]) -> Self {
        Dimension { exponents }
    }

    /// Integer exponents in `BaseDim::ALL` order, the common case.
    pub fn from_ints(m: i64, l: i64, t: i64, theta: i64, currency: i64) -> Self {
        Dimension {
            exponents: [m, l, t, theta, currency].map(Rational::integer),
        }
    }

    pub fn base(b: BaseDim) -> Self {
        let mut d = Self::DIMENSIONLESS;
        d.exponents[b.index()] = Rational::ONE;
        d
    }

    pub fn mass() -> Self {
        Self::base(BaseDim::Mass)
    }

    pub fn length() -> Self {
        Self::base(BaseDim::Length)
    }

    pub fn time() -> Self {
        Self::base(BaseDim::Time)
    }

    pub fn exponent(&self, b: BaseDim) -> Rational {
        self.exponents[b.index()]
    }

    pub fn exponents(&self) -> &[Rational; BASE_COUNT] {
        &self.exponents
    }

    pub fn is_dimensionless(&self) -> bool {
        self.exponents.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &Dimension) -> Result<Dimension, ArithmeticError> {
        dim_combine(self, other, Rational::ONE)
    }

    pub fn div(&self, other: &Dimension) -> Result<Dimension, ArithmeticError> {
        dim_combine(self, other, Rational::integer(-1))
    }

    pub fn pow(&self, exponent: Rational) -> Result<Dimension, ArithmeticError> {
        dim_combine(&Self::DIMENSIONLESS, self, exponent)
    }

    pub fn inverse(&self) -> Result<Dimension, ArithmeticError> {
        self.pow(Rational::integer(-1))
    }
}

/// Returns `a + exponent_on_b * b`, component-wise and exact.
///
/// `dim(E) = M L^2 T^-2` combined with `dim(rho) = M L^-3` at exponent `-1`
/// gives `L^5 T^-2`.
pub fn dim_combine(a: &Dimension, b: &Dimension, exponent_on_b: Rational) -> Result<Dimension, ArithmeticError> {
    let mut out = [Rational::ZERO; BASE_COUNT];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = a.exponents[i].checked_add(b.exponents[i].checked_mul(exponent_on_b)?)?;
    }
    Ok(Dimension { exponents: out })
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_dimensionless() {
            return f.write_str("1");
        }
        let mut first = true;
        for b in BaseDim::ALL {
            let e = self.exponent(b);
            if e.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str(b.symbol())?;
            if e != Rational::ONE {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}
