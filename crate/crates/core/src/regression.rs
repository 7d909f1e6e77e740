//! Log-space least squares for power laws.
//!
//! The model is
//!
//! ```text
//! log(y/y0) = alpha + beta*log(x/x0) [+ gamma*log(x/x0)^2] [+ sum delta_k * z_k/z0_k]
//! ```
//!
//! where `y0`, `x0` and `z0_k` are the reference units carried by
//! [`ModelSpec`]. Every coefficient except `gamma` and the `delta_k` depends
//! on the choice of `x0`; [`transform_under_unit_change`] moves a fit between
//! references without refitting.
//!
//! The least-squares problem is solved through a Householder QR of the design
//! matrix. Standard errors are the classical homoskedastic ones,
//! `sqrt(sigma^2 * [(X'X)^-1]_jj)` with `sigma^2 = RSS / (n - p)`.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::units::{ln_ratio, Quantity, Unit, UnitError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("duplicate column `{0}`")]
    DuplicateColumn(String),
    #[error("column `{column}` has {len} values, expected {expected}")]
    LengthMismatch {
        column: String,
        len: usize,
        expected: usize,
    },
    /// `row` is a 0-based index; messages count data rows from 1.
    #[error("non-finite value in column `{column}` at data row {}", row + 1)]
    NonFinite { column: String, row: usize },
    #[error("non-positive value {value} in column `{column}` at data row {}", row + 1)]
    NonPositive { column: String, row: usize, value: f64 },
    #[error("insufficient degrees of freedom: {n} rows for {p} parameters (need at least {required})")]
    TooFewRows { n: usize, p: usize, required: usize },
    #[error("predictor `{0}` has zero variance in log space")]
    DegeneratePredictor(String),
    #[error("collinear design: `{dependent}` is a combination of {}", on.join(", "))]
    Collinear { dependent: String, on: Vec<String> },
    #[error("model mismatch: {0}")]
    WrongModel(&'static str),
    #[error("residual at the reference point is zero; ratio undefined")]
    ZeroResidual,
    #[error("column `{column}`: {source}")]
    Unit {
        column: String,
        #[source]
        source: UnitError,
    },
    #[error(transparent)]
    Quantity(#[from] UnitError),
}

/// One named column of magnitudes in a single unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: Unit,
    pub values: Vec<f64>,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: Unit, values: Vec<f64>) -> Self {
        Column {
            name: name.into(),
            unit,
            values,
        }
    }
}

/// Immutable table of unit-bound columns of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    columns: Vec<Column>,
    n: usize,
}

impl DataSet {
    pub fn new(columns: Vec<Column>) -> Result<Self, FitError> {
        let n = columns.first().map_or(0, |c| c.values.len());
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].iter().any(|o| o.name == c.name) {
                return Err(FitError::DuplicateColumn(c.name.clone()));
            }
            if c.values.len() != n {
                return Err(FitError::LengthMismatch {
                    column: c.name.clone(),
                    len: c.values.len(),
                    expected: n,
                });
            }
            if let Some(row) = c.values.iter().position(|v| !v.is_finite()) {
                return Err(FitError::NonFinite {
                    column: c.name.clone(),
                    row,
                });
            }
        }
        Ok(DataSet { columns, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Result<&Column, FitError> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| FitError::UnknownColumn(name.to_string()))
    }

    /// The value at `row` of `column` as a quantity.
    pub fn quantity(&self, column: &str, row: usize) -> Result<Quantity, FitError> {
        let c = self.column(column)?;
        let v = *c.values.get(row).ok_or(FitError::TooFewRows {
            n: self.n,
            p: 0,
            required: row + 1,
        })?;
        Ok(Quantity::new(v, c.unit.clone())?)
    }

    /// Natural logs of `column / reference`, rejecting non-positive rows.
    pub fn log_column(&self, column: &str, reference: &Unit) -> Result<Vec<f64>, FitError> {
        let c = self.column(column)?;
        c.values
            .iter()
            .enumerate()
            .map(|(row, &v)| {
                if v <= 0.0 {
                    return Err(FitError::NonPositive {
                        column: c.name.clone(),
                        row,
                        value: v,
                    });
                }
                ln_ratio(v, &c.unit, 1.0, reference).map_err(|source| FitError::Unit {
                    column: c.name.clone(),
                    source,
                })
            })
            .collect()
    }

    /// `column / reference` as pure numbers (no logarithm).
    pub fn ratio_column(&self, column: &str, reference: &Unit) -> Result<Vec<f64>, FitError> {
        let c = self.column(column)?;
        if !c.unit.is_commensurable(reference) {
            return Err(FitError::Unit {
                column: c.name.clone(),
                source: UnitError::DimensionMismatch {
                    left: Box::new(c.unit.dimension()),
                    right: Box::new(reference.dimension()),
                },
            });
        }
        let factor = c.unit.scale() / reference.scale();
        Ok(c.values.iter().map(|v| v * factor).collect())
    }
}

/// A column together with the unit that makes it a pure number.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub column: String,
    pub reference: Unit,
}

impl Term {
    pub fn new(column: impl Into<String>, reference: Unit) -> Self {
        Term {
            column: column.into(),
            reference,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub response: Term,
    pub log_predictor: Term,
    pub include_quadratic: bool,
    pub linear_covariates: Vec<Term>,
}

impl ModelSpec {
    pub fn power_law(response: Term, log_predictor: Term) -> Self {
        ModelSpec {
            response,
            log_predictor,
            include_quadratic: false,
            linear_covariates: Vec::new(),
        }
    }

    pub fn with_quadratic(mut self) -> Self {
        self.include_quadratic = true;
        self
    }

    pub fn with_covariate(mut self, covariate: Term) -> Self {
        self.linear_covariates.push(covariate);
        self
    }

    pub fn is_pure_power_law(&self) -> bool {
        !self.include_quadratic && self.linear_covariates.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficient {
    pub estimate: f64,
    pub std_error: f64,
}

/// Fitted `delta` for one covariate. `coefficient` is `None` when the column
/// was identically zero and carried no information, in which case it was left
/// out of the design.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariateFit {
    pub term: Term,
    pub coefficient: Option<Coefficient>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub alpha: Coefficient,
    pub beta: Coefficient,
    pub gamma: Option<Coefficient>,
    pub covariates: Vec<CovariateFit>,
    pub r_squared: f64,
    pub rss: f64,
    pub residuals_log: Vec<f64>,
    pub spec: ModelSpec,
    pub n: usize,
    pub p: usize,
    /// Parameter covariance, ordered alpha, beta, gamma (if fitted), then
    /// the non-dropped covariates.
    pub covariance: Vec<Vec<f64>>,
}

impl FitResult {
    pub fn sigma(&self) -> f64 {
        (self.rss / (self.n - self.p) as f64).sqrt()
    }

    /// Predicted `log(y/y0)` at `x` (covariates at zero).
    pub fn predict_log(&self, x: &Quantity) -> Result<f64, FitError> {
        let u = ln_ratio(x.magnitude(), x.unit(), 1.0, &self.spec.log_predictor.reference)?;
        let mut y = self.alpha.estimate + self.beta.estimate * u;
        if let Some(g) = self.gamma {
            y += g.estimate * u * u;
        }
        Ok(y)
    }

    /// Coefficient estimates in covariance order.
    pub fn estimates(&self) -> Vec<f64> {
        let mut v = vec![self.alpha.estimate, self.beta.estimate];
        v.extend(self.gamma.map(|g| g.estimate));
        v.extend(self.covariates.iter().filter_map(|c| c.coefficient.map(|c| c.estimate)));
        v
    }
}

fn design_names(spec: &ModelSpec, kept: &[usize]) -> Vec<String> {
    let x = &spec.log_predictor;
    let mut names = vec!["intercept".to_string(), format!("log({}/{})", x.column, x.reference)];
    if spec.include_quadratic {
        names.push(format!("log^2({}/{})", x.column, x.reference));
    }
    for &k in kept {
        let t = &spec.linear_covariates[k];
        names.push(format!("{}/{}", t.column, t.reference));
    }
    names
}

/// General entry point; the three named fits below check the model shape and
/// delegate here.
pub fn fit(ds: &DataSet, spec: &ModelSpec) -> Result<FitResult, FitError> {
    let y = ds.log_column(&spec.response.column, &spec.response.reference)?;
    let u = ds.log_column(&spec.log_predictor.column, &spec.log_predictor.reference)?;
    let n = ds.n();

    let mut covariate_values = Vec::new();
    let mut kept = Vec::new();
    for (k, t) in spec.linear_covariates.iter().enumerate() {
        let z = ds.ratio_column(&t.column, &t.reference)?;
        if z.iter().any(|&v| v != 0.0) {
            kept.push(k);
            covariate_values.push(z);
        }
    }
    let p = 2 + usize::from(spec.include_quadratic) + kept.len();
    if n <= p {
        return Err(FitError::TooFewRows { n, p, required: p + 1 });
    }
    let u_mean = u.iter().sum::<f64>() / n as f64;
    if u.iter().all(|&v| v == u[0]) || u.iter().map(|v| (v - u_mean).powi(2)).sum::<f64>() == 0.0 {
        return Err(FitError::DegeneratePredictor(spec.log_predictor.column.clone()));
    }

    let x = DMatrix::from_fn(n, p, |i, j| match j {
        0 => 1.0,
        1 => u[i],
        2 if spec.include_quadratic => u[i] * u[i],
        _ => covariate_values[j - 2 - usize::from(spec.include_quadratic)][i],
    });
    let yv = DVector::from_vec(y.clone());
    let names = design_names(spec, &kept);
    let ls = least_squares(&x, &yv, &names)?;

    let residuals: Vec<f64> = (0..n).map(|i| y[i] - (x.row(i) * &ls.coefficients)[0]).collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let y_mean = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - y_mean).powi(2)).sum();
    let r_squared = if tss > 0.0 {
        (1.0 - rss / tss).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let sigma2 = rss / (n - p) as f64;
    let covariance: Vec<Vec<f64>> = (0..p)
        .map(|i| (0..p).map(|j| sigma2 * ls.unscaled_cov[(i, j)]).collect())
        .collect();
    let coef = |j: usize| Coefficient {
        estimate: ls.coefficients[j],
        std_error: covariance[j][j].sqrt(),
    };

    let offset = 2 + usize::from(spec.include_quadratic);
    let covariates = spec
        .linear_covariates
        .iter()
        .enumerate()
        .map(|(k, t)| CovariateFit {
            term: t.clone(),
            coefficient: kept.iter().position(|&kk| kk == k).map(|i| coef(offset + i)),
        })
        .collect();

    Ok(FitResult {
        alpha: coef(0),
        beta: coef(1),
        gamma: spec.include_quadratic.then(|| coef(2)),
        covariates,
        r_squared,
        rss,
        residuals_log: residuals,
        spec: spec.clone(),
        n,
        p,
        covariance,
    })
}

struct LeastSquares {
    coefficients: DVector<f64>,
    /// `(X'X)^-1 = R^-1 R^-T`
    unscaled_cov: DMatrix<f64>,
}

const COLLINEAR_TOL: f64 = 1e-10;

fn least_squares(x: &DMatrix<f64>, y: &DVector<f64>, names: &[String]) -> Result<LeastSquares, FitError> {
    let p = x.ncols();
    let qr = x.clone().qr();
    let r = qr.r();
    for j in 0..p {
        let col_norm = x.column(j).norm();
        if r[(j, j)].abs() <= COLLINEAR_TOL * col_norm.max(f64::MIN_POSITIVE) {
            return Err(collinear(x, &r, j, names));
        }
    }
    let mut qty = y.clone();
    qr.q_tr_mul(&mut qty);
    let qty = qty.rows(0, p).into_owned();
    let coefficients = r
        .solve_upper_triangular(&qty)
        .ok_or(FitError::WrongModel("singular triangular factor"))?;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .ok_or(FitError::WrongModel("singular triangular factor"))?;
    Ok(LeastSquares {
        coefficients,
        unscaled_cov: &r_inv * r_inv.transpose(),
    })
}

/// Names the earlier columns that column `j` is (numerically) built from.
fn collinear(x: &DMatrix<f64>, r: &DMatrix<f64>, j: usize, names: &[String]) -> FitError {
    let lead = r.view((0, 0), (j, j)).into_owned();
    let rhs = r.view((0, j), (j, 1)).into_owned();
    let target = x.column(j).norm();
    let on = lead
        .solve_upper_triangular(&rhs)
        .map(|c| {
            (0..j)
                .filter(|&k| (c[k] * x.column(k).norm()).abs() > 1e-8 * target)
                .map(|k| names[k].clone())
                .collect()
        })
        .unwrap_or_else(|| names[..j].to_vec());
    FitError::Collinear {
        dependent: names[j].clone(),
        on,
    }
}

/// `log(y/y0) = alpha + beta*log(x/x0)`.
pub fn fit_power_law(ds: &DataSet, spec: &ModelSpec) -> Result<FitResult, FitError> {
    if !spec.is_pure_power_law() {
        return Err(FitError::WrongModel(
            "fit_power_law takes no quadratic term and no covariates",
        ));
    }
    fit(ds, spec)
}

/// Power law with covariates entering linearly in log space, so each
/// `delta` is an exponential rate per covariate unit.
pub fn fit_with_covariates(ds: &DataSet, spec: &ModelSpec) -> Result<FitResult, FitError> {
    if spec.linear_covariates.is_empty() {
        return Err(FitError::WrongModel("fit_with_covariates needs a covariate"));
    }
    fit(ds, spec)
}

/// Adds `gamma*log(x/x0)^2`.
pub fn fit_quadratic_log(ds: &DataSet, spec: &ModelSpec) -> Result<FitResult, FitError> {
    if !spec.include_quadratic {
        return Err(FitError::WrongModel("fit_quadratic_log needs the quadratic term"));
    }
    fit(ds, spec)
}

/// Re-expresses a fit against a new predictor reference `x0'`.
///
/// With `mu = ln(x0'/x0)`, `log(x/x0) = log(x/x0') + mu`, so
/// `alpha -> alpha + beta*mu + gamma*mu^2`, `beta -> beta + 2*gamma*mu`,
/// `gamma` unchanged. Without a quadratic term only `alpha` moves. The
/// covariance is carried through the same linear map; residuals and R^2 are
/// untouched.
pub fn transform_under_unit_change(fit: &FitResult, new_reference: &Unit) -> Result<FitResult, FitError> {
    let old = &fit.spec.log_predictor.reference;
    let mu = ln_ratio(1.0, new_reference, 1.0, old)?;
    let p = fit.p;
    let mut map = DMatrix::<f64>::identity(p, p);
    map[(0, 1)] = mu;
    if fit.gamma.is_some() {
        map[(0, 2)] = mu * mu;
        map[(1, 2)] = 2.0 * mu;
    }
    let old_est = DVector::from_vec(fit.estimates());
    let est = &map * old_est;
    let cov = DMatrix::from_fn(p, p, |i, j| fit.covariance[i][j]);
    let cov = &map * cov * map.transpose();

    let mut out = fit.clone();
    let coef = |j: usize| Coefficient {
        estimate: est[j],
        std_error: cov[(j, j)].sqrt(),
    };
    out.alpha = coef(0);
    out.beta = coef(1);
    if fit.gamma.is_some() {
        // unchanged by construction; keep the original bits
        out.gamma = fit.gamma;
    }
    out.covariance = (0..p).map(|i| (0..p).map(|j| cov[(i, j)]).collect()).collect();
    out.spec.log_predictor.reference = new_reference.clone();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualSpace {
    Log,
    Natural,
}

/// An observed point: predictor and response quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub x: Quantity,
    pub y: Quantity,
}

impl Observation {
    pub fn new(x: Quantity, y: Quantity) -> Self {
        Observation { x, y }
    }
}

fn residual(obs: &Observation, fit: &FitResult, space: ResidualSpace) -> Result<f64, FitError> {
    let pred_log = fit.predict_log(&obs.x)?;
    let y0 = &fit.spec.response.reference;
    match space {
        ResidualSpace::Log => Ok(ln_ratio(obs.y.magnitude(), obs.y.unit(), 1.0, y0)? - pred_log),
        ResidualSpace::Natural => {
            if !obs.y.unit().is_commensurable(y0) {
                return Err(UnitError::DimensionMismatch {
                    left: Box::new(obs.y.dimension()),
                    right: Box::new(y0.dimension()),
                }
                .into());
            }
            let observed = obs.y.magnitude() * obs.y.unit().scale() / y0.scale();
            Ok(observed - pred_log.exp())
        }
    }
}

/// `|residual(a)| / |residual(b)|` about a pure power-law fit.
///
/// A point at 10x its fitted value against one at 1.1x gives
/// `ln 10 / ln 1.1 ~ 24.16` in log space. In natural space the answer also
/// depends on where the points sit on the curve. Note the asymmetry the log
/// scale removes: `|ln 2| == |ln 1/2|` while `2 - 1 > 1 - 1/2`.
pub fn residual_distance_ratio(
    a: &Observation,
    b: &Observation,
    fit: &FitResult,
    space: ResidualSpace,
) -> Result<f64, FitError> {
    if !fit.spec.is_pure_power_law() {
        return Err(FitError::WrongModel(
            "residual_distance_ratio needs a pure power-law fit",
        ));
    }
    let ra = residual(a, fit, space)?;
    let rb = residual(b, fit, space)?;
    if rb == 0.0 {
        return Err(FitError::ZeroResidual);
    }
    Ok(ra.abs() / rb.abs())
}
