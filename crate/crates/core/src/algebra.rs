//! Dimensional derivation: unique exponent solutions, dimensionless-group
//! bases, and monomial scaling relations.
//!
//! Everything here is exact. Dimension matrices are reduced with the
//! fraction-free elimination in [`crate::elimination`]; no floating point is
//! involved until a relation is evaluated on actual quantities.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dimension::{BaseDim, Dimension};
use crate::elimination::IntMatrix;
use crate::rational::{gcd_i128, ArithmeticError, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("no parameters given")]
    NoParameters,
    #[error("duplicate quantity name `{0}`")]
    DuplicateName(String),
    #[error("dimensionally impossible: [{target}] is not a product of powers of the parameters")]
    Inconsistent { target: Dimension },
    #[error(
        "underdetermined: {free_directions} free direction(s); the quantities admit that many surplus dimensionless groups"
    )]
    Underdetermined { free_directions: usize },
    #[error("`{0}` does not appear in the balance")]
    Absent(String),
    #[error("`{0}` has zero net exponent and cannot be isolated")]
    ZeroNetExponent(String),
    #[error("`{inner}` is not a term of the relation for `{outer}`")]
    NotATerm { outer: String, inner: String },
    #[error("substitution would put target `{0}` on its own right-hand side")]
    SelfReference(String),
    #[error("malformed relation `{0}`")]
    Parse(String),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
}

/// Dimension matrix: one column per named quantity, one row per base
/// dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DimMatrix {
    columns: Vec<(String, Dimension)>,
}

impl DimMatrix {
    pub fn new(columns: &[(&str, Dimension)]) -> Result<Self, AlgebraError> {
        let mut out: Vec<(String, Dimension)> = Vec::with_capacity(columns.len());
        for (name, dim) in columns {
            if out.iter().any(|(n, _)| n == name) {
                return Err(AlgebraError::DuplicateName(name.to_string()));
            }
            out.push((name.to_string(), *dim));
        }
        Ok(DimMatrix { columns: out })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn columns(&self) -> &[(String, Dimension)] {
        &self.columns
    }

    pub fn entry(&self, base: BaseDim, column: usize) -> Rational {
        self.columns[column].1.exponent(base)
    }

    fn rows_with(&self, extra: Option<&Dimension>) -> Vec<Vec<Rational>> {
        BaseDim::ALL
            .iter()
            .map(|&b| {
                self.columns
                    .iter()
                    .map(|(_, d)| d.exponent(b))
                    .chain(extra.map(|d| d.exponent(b)))
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> Result<usize, AlgebraError> {
        Ok(IntMatrix::from_rational_rows(&self.rows_with(None))?.echelon()?.rank())
    }
}

/// A dimensionless product of powers, exponents aligned with `names`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiGroup {
    names: Vec<String>,
    exponents: Vec<Rational>,
}

impl PiGroup {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn exponents(&self) -> &[Rational] {
        &self.exponents
    }

    /// Integer exponents; normalized groups are always integral.
    pub fn integer_exponents(&self) -> Vec<i64> {
        self.exponents.iter().map(|e| e.numer()).collect()
    }

    pub fn exponent_of(&self, name: &str) -> Option<Rational> {
        self.names.iter().position(|n| n == name).map(|i| self.exponents[i])
    }
}

impl fmt::Display for PiGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("pi:")?;
        for (name, e) in self.names.iter().zip(&self.exponents) {
            if e.is_zero() {
                continue;
            }
            write_power(f, name, *e)?;
        }
        Ok(())
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, name: &str, e: Rational) -> fmt::Result {
    if e == Rational::ONE {
        write!(f, " {name}")
    } else {
        write!(f, " {name}^{e}")
    }
}

/// Product of named powers. Order is preserved as given.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Monomial {
    terms: Vec<(String, Rational)>,
}

impl Monomial {
    pub fn new<S: Into<String>>(terms: impl IntoIterator<Item = (S, Rational)>) -> Self {
        let mut m = Monomial::default();
        for (name, e) in terms {
            m.accumulate(name.into(), e).expect("small exponents");
        }
        m
    }

    pub fn terms(&self) -> &[(String, Rational)] {
        &self.terms
    }

    pub fn exponent(&self, name: &str) -> Option<Rational> {
        self.terms.iter().find(|(n, _)| n == name).map(|(_, e)| *e)
    }

    fn accumulate(&mut self, name: String, e: Rational) -> Result<(), ArithmeticError> {
        match self.terms.iter_mut().find(|(n, _)| *n == name) {
            Some((_, acc)) => *acc = acc.checked_add(e)?,
            None => self.terms.push((name, e)),
        }
        Ok(())
    }

    fn drop_zeros(mut self) -> Self {
        self.terms.retain(|(_, e)| !e.is_zero());
        self
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("1");
        }
        for (i, (name, e)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(name)?;
            if *e != Rational::ONE {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// `name^rational name ...`; `1` denotes the empty product.
impl FromStr for Monomial {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut m = Monomial::default();
        if s == "1" {
            return Ok(m);
        }
        for tok in s.split_whitespace() {
            let (name, e) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<Rational>().map_err(|_| AlgebraError::Parse(s.to_string()))?,
                ),
                None => (tok, Rational::ONE),
            };
            if name.is_empty() {
                return Err(AlgebraError::Parse(s.to_string()));
            }
            m.accumulate(name.to_string(), e)?;
        }
        if m.terms.is_empty() {
            return Err(AlgebraError::Parse(s.to_string()));
        }
        Ok(m)
    }
}

/// `target ~ prod(term^exponent)`. Prefactors are never stored; only the
/// exponents survive a change of units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingRelation {
    target: String,
    terms: Monomial,
}

impl ScalingRelation {
    pub fn new(target: impl Into<String>, terms: Monomial) -> Result<Self, AlgebraError> {
        let target = target.into();
        if terms.exponent(&target).is_some() {
            return Err(AlgebraError::SelfReference(target));
        }
        Ok(ScalingRelation { target, terms })
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn terms(&self) -> &[(String, Rational)] {
        self.terms.terms()
    }

    pub fn monomial(&self) -> &Monomial {
        &self.terms
    }

    pub fn exponent(&self, name: &str) -> Option<Rational> {
        self.terms.exponent(name)
    }

    /// The literal `x ~ x`. It violates the no-self-reference rule on
    /// purpose and is only useful as the unit of [`chain`].
    pub fn identity(name: &str) -> Self {
        ScalingRelation {
            target: name.to_string(),
            terms: Monomial::new([(name, Rational::ONE)]),
        }
    }

    fn is_identity(&self) -> bool {
        self.terms.terms.len() == 1 && self.terms.terms[0].0 == self.target && self.terms.terms[0].1 == Rational::ONE
    }
}

impl fmt::Display for ScalingRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ {}", self.target, self.terms)
    }
}

impl FromStr for ScalingRelation {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lhs, rhs) = s.split_once('~').ok_or_else(|| AlgebraError::Parse(s.to_string()))?;
        let target = lhs.trim();
        if target.is_empty() || target.contains(char::is_whitespace) {
            return Err(AlgebraError::Parse(s.to_string()));
        }
        let terms: Monomial = rhs.parse()?;
        if terms.terms.len() == 1 && terms.terms[0] == (target.to_string(), Rational::ONE) {
            return Ok(ScalingRelation::identity(target));
        }
        ScalingRelation::new(target, terms)
    }
}

/// Dimension of `prod(dim_i^a_i)`.
pub fn monomial_dimension(params: &[(&str, Dimension)], exponents: &[Rational]) -> Result<Dimension, ArithmeticError> {
    params
        .iter()
        .zip(exponents)
        .try_fold(Dimension::DIMENSIONLESS, |acc, ((_, d), e)| {
            crate::dimension::dim_combine(&acc, d, *e)
        })
}

/// Finds the unique exponents `a` with `target = sum(a_i * dim(param_i))`.
///
/// Length from energy, density and time: `r ~ E^1/5 rho^-1/5 t^2/5`.
pub fn solve_target_exponents(
    target_name: &str,
    target: Dimension,
    params: &[(&str, Dimension)],
) -> Result<ScalingRelation, AlgebraError> {
    if params.is_empty() {
        return Err(AlgebraError::NoParameters);
    }
    let matrix = DimMatrix::new(params)?;
    let n = params.len();
    let echelon = IntMatrix::from_rational_rows(&matrix.rows_with(Some(&target)))?.echelon()?;
    if echelon.pivots.contains(&n) {
        return Err(AlgebraError::Inconsistent { target });
    }
    if echelon.rank() < n {
        return Err(AlgebraError::Underdetermined {
            free_directions: n - echelon.rank(),
        });
    }
    let mut exponents = vec![Rational::ZERO; n];
    for (i, &p) in echelon.pivots.iter().enumerate() {
        let num = i64::try_from(echelon.rows[i][n]).map_err(|_| ArithmeticError::Overflow)?;
        let den = i64::try_from(echelon.rows[i][p]).map_err(|_| ArithmeticError::Overflow)?;
        exponents[p] = Rational::new(num, den)?;
    }
    let terms = Monomial::new(params.iter().map(|(name, _)| *name).zip(exponents));
    ScalingRelation::new(target_name, terms)
}

/// Smallest integer vector with gcd 1 and first nonzero entry positive.
fn normalize(v: &[Rational]) -> Result<Vec<Rational>, ArithmeticError> {
    let lcm = v.iter().try_fold(1i128, |l, r| {
        let d = r.denom() as i128;
        l.checked_mul(d / gcd_i128(l, d)).ok_or(ArithmeticError::Overflow)
    })?;
    let ints: Vec<i128> = v
        .iter()
        .map(|r| r.numer() as i128 * (lcm / r.denom() as i128))
        .collect();
    let g = ints.iter().fold(0i128, |g, &x| gcd_i128(g, x)).max(1);
    let sign = match ints.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => -1,
        _ => 1,
    };
    ints.iter()
        .map(|&x| {
            i64::try_from(sign * x / g)
                .map(Rational::integer)
                .map_err(|_| ArithmeticError::Overflow)
        })
        .collect()
}

/// Basis of the dimensionless groups formed from `quantities`, one per free
/// column of the dimension matrix (free columns in input order).
pub fn pi_basis(quantities: &[(&str, Dimension)]) -> Result<Vec<PiGroup>, AlgebraError> {
    let matrix = DimMatrix::new(quantities)?;
    let echelon = IntMatrix::from_rational_rows(&matrix.rows_with(None))?.echelon()?;
    let names: Vec<String> = quantities.iter().map(|(n, _)| n.to_string()).collect();
    let mut groups = Vec::new();
    for v in echelon.null_space()? {
        let exponents = normalize(&v)?;
        debug_assert!(monomial_dimension(quantities, &exponents)?.is_dimensionless());
        groups.push(PiGroup {
            names: names.clone(),
            exponents,
        });
    }
    Ok(groups)
}

/// Solves the balance `lhs ~ rhs` for `solve_for`.
///
/// `l^2 v^2 ~ l^3` solved for `v` gives `v ~ l^1/2`.
pub fn solve_balance(lhs: &Monomial, rhs: &Monomial, solve_for: &str) -> Result<ScalingRelation, AlgebraError> {
    let mut net = lhs.clone();
    for (name, e) in rhs.terms() {
        net.accumulate(name.clone(), e.checked_neg()?)?;
    }
    let pivot = net
        .exponent(solve_for)
        .ok_or_else(|| AlgebraError::Absent(solve_for.to_string()))?;
    if pivot.is_zero() {
        return Err(AlgebraError::ZeroNetExponent(solve_for.to_string()));
    }
    let mut terms = Monomial::default();
    for (name, e) in net.terms() {
        if name != solve_for {
            terms.accumulate(name.clone(), e.checked_neg()?.checked_div(pivot)?)?;
        }
    }
    ScalingRelation::new(solve_for, terms.drop_zeros())
}

/// Substitutes `inner` into `outer`: `v ~ l^1/2` with `l ~ m^1/3` gives
/// `v ~ m^1/6`.
pub fn chain(outer: &ScalingRelation, inner: &ScalingRelation) -> Result<ScalingRelation, AlgebraError> {
    let Some(power) = outer.exponent(&inner.target) else {
        return Err(AlgebraError::NotATerm {
            outer: outer.target.clone(),
            inner: inner.target.clone(),
        });
    };
    if inner.is_identity() {
        return Ok(outer.clone());
    }
    if outer.is_identity() {
        return Ok(inner.clone());
    }
    let mut terms = Monomial::default();
    for (name, e) in outer.terms() {
        if *name == inner.target {
            for (iname, ie) in inner.terms() {
                terms.accumulate(iname.clone(), ie.checked_mul(power)?)?;
            }
        } else {
            terms.accumulate(name.clone(), *e)?;
        }
    }
    let terms = terms.drop_zeros();
    ScalingRelation::new(outer.target.clone(), terms)
}

/// An exponent that is either exact or measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Exact(Rational),
    Real(f64),
}

impl From<Rational> for Exponent {
    fn from(r: Rational) -> Self {
        Exponent::Exact(r)
    }
}

impl From<f64> for Exponent {
    fn from(x: f64) -> Self {
        Exponent::Real(x)
    }
}

/// Strict `lower < beta < upper`. An empty interval contains nothing.
pub fn check_exponent_bound(beta: impl Into<Exponent>, lower: Rational, upper: Rational) -> bool {
    match beta.into() {
        Exponent::Exact(b) => lower < b && b < upper,
        Exponent::Real(b) => lower.to_f64() < b && b < upper.to_f64(),
    }
}
