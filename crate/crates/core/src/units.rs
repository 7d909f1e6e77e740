//! Units, the unit registry, and quantities.
//!
//! A [`Unit`] is a symbol, a [`Dimension`], and a positive scale factor to the
//! coherent unit of that dimension (kg, m, s, K, GBP and their products).
//! Quantity arithmetic always lands in coherent units; use [`convert`] to get
//! back to a unit of choice.
//!
//! [`log_ratio`] is the only logarithm this crate exposes: a dimensionful
//! quantity has no number until it is divided by a reference.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::dimension::{BaseDim, Dimension};
use crate::rational::{ArithmeticError, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitError {
    #[error("unknown unit symbol `{0}`")]
    UnknownUnit(String),
    #[error("malformed number `{0}`")]
    MalformedNumber(String),
    #[error("malformed exponent `{0}`")]
    MalformedExponent(String),
    #[error("empty unit expression")]
    EmptyExpression,
    #[error("dimension mismatch: [{left}] vs [{right}]")]
    DimensionMismatch {
        left: Box<Dimension>,
        right: Box<Dimension>,
    },
    #[error("logarithm of non-positive ratio {0}")]
    NonPositiveRatio(f64),
    #[error("non-finite magnitude {0}")]
    NonFinite(f64),
    #[error("unit scale must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("unit symbol `{0}` already registered")]
    DuplicateSymbol(String),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Unit {
    symbol: String,
    dimension: Dimension,
    scale: f64,
}

impl Unit {
    pub fn new(symbol: impl Into<String>, dimension: Dimension, scale: f64) -> Result<Self, UnitError> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(UnitError::InvalidScale(scale));
        }
        Ok(Unit {
            symbol: symbol.into(),
            dimension,
            scale,
        })
    }

    /// The coherent unit of `dimension`, spelled with coherent base symbols.
    pub fn coherent(dimension: Dimension) -> Self {
        Unit {
            symbol: coherent_symbol(&dimension),
            dimension,
            scale: 1.0,
        }
    }

    pub fn dimensionless() -> Self {
        Unit::coherent(Dimension::DIMENSIONLESS)
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_commensurable(&self, other: &Unit) -> bool {
        self.dimension == other.dimension
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol)
    }
}

fn coherent_symbol(dimension: &Dimension) -> String {
    let parts: Vec<String> = BaseDim::ALL
        .iter()
        .filter_map(|&b| {
            let e = dimension.exponent(b);
            if e.is_zero() {
                None
            } else if e == Rational::ONE {
                Some(b.coherent_unit().to_string())
            } else {
                Some(format!("{}^{}", b.coherent_unit(), e))
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

/// Symbol table of named units. Built once, then read-only.
#[derive(Debug, Clone, Default)]
pub struct UnitRegistry {
    units: BTreeMap<String, Unit>,
}

impl UnitRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The standard table: SI coherent units plus the handful of customary
    /// units the casebook and the CLI need.
    pub fn standard() -> Self {
        let mass = Dimension::mass();
        let length = Dimension::length();
        let time = Dimension::time();
        let speed = Dimension::from_ints(0, 1, -1, 0, 0);
        let accel = Dimension::from_ints(0, 1, -2, 0, 0);
        let force = Dimension::from_ints(1, 1, -2, 0, 0);
        let energy = Dimension::from_ints(1, 2, -2, 0, 0);
        let power = Dimension::from_ints(1, 2, -3, 0, 0);

        let table: &[(&str, Dimension, f64)] = &[
            ("1", Dimension::DIMENSIONLESS, 1.0),
            ("kg", mass, 1.0),
            ("g", mass, 1e-3),
            ("mg", mass, 1e-6),
            ("t", mass, 1e3),
            ("lb", mass, 0.45359237),
            ("m", length, 1.0),
            ("cm", length, 1e-2),
            ("mm", length, 1e-3),
            ("km", length, 1e3),
            ("ft", length, 0.3048),
            ("in", length, 0.0254),
            ("mi", length, 1609.344),
            ("s", time, 1.0),
            ("min", time, 60.0),
            ("hr", time, 3600.0),
            ("day", time, 86400.0),
            ("yr", time, 3.1557e7),
            ("m/s", speed, 1.0),
            ("km/h", speed, 1000.0 / 3600.0),
            ("knot", speed, 1852.0 / 3600.0),
            ("mph", speed, 1609.344 / 3600.0),
            ("m/s^2", accel, 1.0),
            ("N", force, 1.0),
            ("J", energy, 1.0),
            ("kJ", energy, 1e3),
            ("W", power, 1.0),
            ("kW", power, 1e3),
            ("K", Dimension::base(BaseDim::Temperature), 1.0),
            ("GBP", Dimension::base(BaseDim::Currency), 1.0),
        ];
        let mut reg = UnitRegistry::empty();
        for &(sym, dim, scale) in table {
            reg = reg
                .with_unit(Unit::new(sym, dim, scale).expect("standard table scales are positive"))
                .expect("standard table symbols are unique");
        }
        reg
    }

    /// Adds a unit; symbols must be unique.
    pub fn with_unit(mut self, unit: Unit) -> Result<Self, UnitError> {
        if self.units.contains_key(&unit.symbol) {
            return Err(UnitError::DuplicateSymbol(unit.symbol));
        }
        self.units.insert(unit.symbol.clone(), unit);
        Ok(self)
    }

    pub fn get(&self, symbol: &str) -> Option<&Unit> {
        self.units.get(symbol)
    }

    pub fn unit(&self, symbol: &str) -> Result<Unit, UnitError> {
        self.get(symbol)
            .cloned()
            .ok_or_else(|| UnitError::UnknownUnit(symbol.to_string()))
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.units.keys().map(String::as_str)
    }

    /// Parses `unit := symbol ('^' rational)? (' ' unit)*`.
    ///
    /// A whole token is first looked up verbatim so that symbols such as
    /// `m/s^2` resolve; otherwise it is split at the first `^`.
    pub fn parse_unit(&self, expr: &str) -> Result<Unit, UnitError> {
        let tokens: Vec<&str> = expr.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(UnitError::EmptyExpression);
        }
        if tokens.len() == 1 {
            if let Some(u) = self.get(tokens[0]) {
                return Ok(u.clone());
            }
        }
        let mut dimension = Dimension::DIMENSIONLESS;
        let mut scale = 1.0;
        for tok in &tokens {
            let (base, exp) = match self.get(tok) {
                Some(u) => (u, Rational::ONE),
                None => {
                    let (sym, exp_text) = tok
                        .split_once('^')
                        .ok_or_else(|| UnitError::UnknownUnit(tok.to_string()))?;
                    let base = self.get(sym).ok_or_else(|| UnitError::UnknownUnit(sym.to_string()))?;
                    let exp: Rational = exp_text
                        .parse()
                        .map_err(|_| UnitError::MalformedExponent(exp_text.to_string()))?;
                    (base, exp)
                }
            };
            dimension = dimension.mul(&base.dimension.pow(exp)?)?;
            scale *= base.scale.powf(exp.to_f64());
        }
        Unit::new(tokens.join(" "), dimension, scale)
    }

    /// Parses `<number> <unit-expression>`; a bare number is dimensionless.
    pub fn parse_quantity(&self, text: &str) -> Result<Quantity, UnitError> {
        let text = text.trim();
        let (num, rest) = match text.split_once(char::is_whitespace) {
            Some((n, r)) => (n, r.trim()),
            None => (text, ""),
        };
        let magnitude: f64 = num.parse().map_err(|_| UnitError::MalformedNumber(num.to_string()))?;
        if !magnitude.is_finite() {
            return Err(UnitError::MalformedNumber(num.to_string()));
        }
        let unit = if rest.is_empty() {
            Unit::dimensionless()
        } else {
            self.parse_unit(rest)?
        };
        Quantity::new(magnitude, unit)
    }
}

/// Process-wide standard registry.
pub fn registry() -> &'static UnitRegistry {
    static REG: OnceLock<UnitRegistry> = OnceLock::new();
    REG.get_or_init(UnitRegistry::standard)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    magnitude: f64,
    unit: Unit,
}

impl Quantity {
    pub fn new(magnitude: f64, unit: Unit) -> Result<Self, UnitError> {
        if !magnitude.is_finite() {
            return Err(UnitError::NonFinite(magnitude));
        }
        Ok(Quantity { magnitude, unit })
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn unit(&self) -> &Unit {
        &self.unit
    }

    pub fn dimension(&self) -> Dimension {
        self.unit.dimension
    }

    /// Magnitude in the coherent unit of this quantity's dimension.
    pub fn coherent_magnitude(&self) -> f64 {
        self.magnitude * self.unit.scale
    }

    pub fn to_coherent(&self) -> Quantity {
        Quantity {
            magnitude: self.coherent_magnitude(),
            unit: Unit::coherent(self.unit.dimension),
        }
    }

    pub fn is_commensurable(&self, other: &Quantity) -> bool {
        self.unit.is_commensurable(&other.unit)
    }

    pub fn mul(&self, other: &Quantity) -> Result<Quantity, UnitError> {
        let dim = self.dimension().mul(&other.dimension())?;
        Quantity::new(
            self.coherent_magnitude() * other.coherent_magnitude(),
            Unit::coherent(dim),
        )
    }

    pub fn div(&self, other: &Quantity) -> Result<Quantity, UnitError> {
        let dim = self.dimension().div(&other.dimension())?;
        Quantity::new(
            self.coherent_magnitude() / other.coherent_magnitude(),
            Unit::coherent(dim),
        )
    }

    pub fn pow(&self, exponent: Rational) -> Result<Quantity, UnitError> {
        let dim = self.dimension().pow(exponent)?;
        Quantity::new(self.coherent_magnitude().powf(exponent.to_f64()), Unit::coherent(dim))
    }

    /// Multiplies by a pure number, keeping the unit.
    pub fn scaled(&self, factor: f64) -> Result<Quantity, UnitError> {
        Quantity::new(self.magnitude * factor, self.unit.clone())
    }

    /// Requires this quantity to carry `expected`.
    pub fn expect_dimension(&self, expected: Dimension) -> Result<(), UnitError> {
        if self.dimension() == expected {
            Ok(())
        } else {
            Err(UnitError::DimensionMismatch {
                left: Box::new(self.dimension()),
                right: Box::new(expected),
            })
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit.dimension.is_dimensionless() && self.unit.scale == 1.0 {
            write!(f, "{}", self.magnitude)
        } else {
            write!(f, "{} {}", self.magnitude, self.unit)
        }
    }
}

/// Re-expresses `q` in `target`.
pub fn convert(q: &Quantity, target: &Unit) -> Result<Quantity, UnitError> {
    if q.unit.dimension != target.dimension {
        return Err(UnitError::DimensionMismatch {
            left: Box::new(q.unit.dimension),
            right: Box::new(target.dimension),
        });
    }
    Quantity::new(q.magnitude * (q.unit.scale / target.scale), target.clone())
}

/// Natural log of the dimensionless ratio `q / reference`.
pub fn log_ratio(q: &Quantity, reference: &Quantity) -> Result<f64, UnitError> {
    ln_ratio(q.magnitude, &q.unit, reference.magnitude, &reference.unit)
}

pub(crate) fn ln_ratio(magnitude: f64, unit: &Unit, ref_magnitude: f64, ref_unit: &Unit) -> Result<f64, UnitError> {
    if unit.dimension != ref_unit.dimension {
        return Err(UnitError::DimensionMismatch {
            left: Box::new(unit.dimension),
            right: Box::new(ref_unit.dimension),
        });
    }
    let ratio = (magnitude / ref_magnitude) * (unit.scale / ref_unit.scale);
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(UnitError::NonPositiveRatio(ratio));
    }
    Ok(ratio.ln())
}
