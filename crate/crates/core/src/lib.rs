//! Dimensional analysis and scaling-law workbench.
//!
//! * [`dimension`], [`units`]: exact dimension vectors, a unit registry, and
//!   quantities. Logarithms are taken only of quantity ratios ([`log_ratio`]).
//! * [`algebra`]: unique exponent solutions, dimensionless-group bases, and
//!   monomial scaling relations, all over exact rationals.
//! * [`regression`]: log-space least squares for power laws, with covariates,
//!   a quadratic-in-log term, and the unit-change and residual-weighting
//!   diagnostics.
//! * [`casebook`]: worked predictions built from the above.
//! * [`io`]: unit-annotated CSV, fit reports, SVG plots.
//!
//! ```
//! use scalewise::{registry, solve_target_exponents, Dimension};
//!
//! let reg = registry();
//! let g = reg.parse_unit("m s^-2").unwrap().dimension();
//! let rel = solve_target_exponents("v", Dimension::from_ints(0, 1, -1, 0, 0), &[("g", g), ("l", Dimension::length())])
//!     .unwrap();
//! assert_eq!(rel.to_string(), "v ~ g^1/2 l^1/2");
//! ```

pub mod algebra;
pub mod casebook;
pub mod dimension;
mod elimination;
pub mod io;
pub mod rational;
pub mod regression;
pub mod synth;
pub mod units;

pub use algebra::{
    chain, check_exponent_bound, pi_basis, solve_balance, solve_target_exponents, AlgebraError, DimMatrix, Monomial,
    PiGroup, ScalingRelation,
};
pub use dimension::{dim_combine, BaseDim, Dimension};
pub use rational::{ArithmeticError, Rational};
pub use regression::{
    fit_power_law, fit_quadratic_log, fit_with_covariates, residual_distance_ratio, transform_under_unit_change,
    Coefficient, Column, DataSet, FitError, FitResult, ModelSpec, Observation, ResidualSpace, Term,
};
pub use units::{convert, log_ratio, registry, Quantity, Unit, UnitError, UnitRegistry};
