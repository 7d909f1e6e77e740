//! The `scalewise` command line. [`run`] takes the argument vector and two
//! sinks and returns the process exit code: 0 on success, 1 on a usage
//! error, 2 on a data or dimension error.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use scalewise::casebook::{self, BlastConfig};
use scalewise::io::{emit_svg_plot, fit_fields, fmt_num, load_csv, render_fit_report, Field, PlotSpec};
use scalewise::regression::fit;
use scalewise::{
    pi_basis, registry, residual_distance_ratio, solve_target_exponents, transform_under_unit_change, AlgebraError,
    DataSet, Dimension, FitResult, ModelSpec, Observation, Quantity, ResidualSpace, Term, Unit,
};

mod args;

use args::{AxisArgs, Cli, Command, Diagnose, ModelArgs, Predict, Space};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) => f.write_str(m),
        }
    }
}

fn data<E: fmt::Display>(e: E) -> Failure {
    Failure::Data(e.to_string())
}

type Outcome = Result<String, Failure>;

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = write!(out, "{text}");
            EXIT_OK
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Data(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_DATA
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Derive { target, params } => derive(&target, &params),
        Command::Pi { quantities } => pi(&quantities),
        Command::Fit { model, json } => fit_cmd(&model, json),
        Command::Diagnose(Diagnose::UnitChange { model, new_x0 }) => unit_change(&model, &new_x0),
        Command::Diagnose(Diagnose::Residuals { axes, row, space }) => residuals(&axes, &row, space),
        Command::Predict(p) => predict(p),
        Command::Plot {
            axes,
            out,
            fit,
            quadratic,
        } => plot(&axes, &out, fit, quadratic),
    }
}

/// `name:unit` or `name:value unit`; only the dimension is kept.
fn named_dimension(text: &str) -> Result<(String, Dimension), Failure> {
    let (name, rest) = text
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("`{text}` is not of the form name:unit")))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(Failure::Usage(format!("`{text}` has an empty name")));
    }
    let rest = rest.trim();
    let leading_number = rest.split_whitespace().next().is_some_and(|t| t.parse::<f64>().is_ok());
    let dim = if leading_number {
        registry().parse_quantity(rest).map_err(data)?.dimension()
    } else {
        registry().parse_unit(rest).map_err(data)?.dimension()
    };
    Ok((name.to_string(), dim))
}

fn named_list(text: &str) -> Result<Vec<(String, Dimension)>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(named_dimension)
        .collect()
}

fn borrowed(list: &[(String, Dimension)]) -> Vec<(&str, Dimension)> {
    list.iter().map(|(n, d)| (n.as_str(), *d)).collect()
}

fn render_basis(qs: &[(&str, Dimension)]) -> Outcome {
    let basis = pi_basis(qs).map_err(data)?;
    let mut s = String::new();
    if basis.is_empty() {
        s.push_str("no dimensionless groups\n");
    }
    for g in basis {
        s.push_str(&format!("{g}\n"));
    }
    Ok(s)
}

fn derive(target: &str, params: &str) -> Outcome {
    let (name, dim) = named_dimension(target)?;
    let params = named_list(params)?;
    match solve_target_exponents(&name, dim, &borrowed(&params)) {
        Ok(rel) => Ok(format!("{rel}\n")),
        Err(AlgebraError::Underdetermined { free_directions }) => {
            let mut all = vec![(name.as_str(), dim)];
            all.extend(borrowed(&params));
            let plural = if free_directions == 1 { "" } else { "s" };
            let mut s = format!(
                "underdetermined: {free_directions} free direction{plural}; dimensionless groups of {name} and the parameters:\n"
            );
            s.push_str(&render_basis(&all)?);
            Ok(s)
        }
        Err(e) => Err(data(e)),
    }
}

fn pi(quantities: &str) -> Outcome {
    let qs = named_list(quantities)?;
    if qs.is_empty() {
        return Err(Failure::Usage("no quantities given".into()));
    }
    render_basis(&borrowed(&qs))
}

fn load(axes: &AxisArgs) -> Result<DataSet, Failure> {
    load_csv(&axes.csv, registry()).map_err(data)
}

/// The reference unit: the one given, or the column's own.
fn reference(ds: &DataSet, column: &str, given: Option<&str>) -> Result<Unit, Failure> {
    let own = ds.column(column).map_err(data)?.unit.clone();
    let Some(text) = given else { return Ok(own) };
    let unit = registry().parse_unit(text).map_err(data)?;
    if !unit.is_commensurable(&own) {
        return Err(Failure::Data(format!(
            "reference `{text}` [{}] does not match column `{column}` [{}]",
            unit.dimension(),
            own.dimension()
        )));
    }
    Ok(unit)
}

fn axis_terms(ds: &DataSet, axes: &AxisArgs) -> Result<(Term, Term), Failure> {
    let x = Term::new(&axes.x, reference(ds, &axes.x, axes.x0.as_deref())?);
    let y = Term::new(&axes.y, reference(ds, &axes.y, axes.y0.as_deref())?);
    Ok((x, y))
}

fn model_spec(ds: &DataSet, model: &ModelArgs) -> Result<ModelSpec, Failure> {
    let (x, y) = axis_terms(ds, &model.axes)?;
    let mut spec = ModelSpec::power_law(y, x);
    if model.quadratic {
        spec = spec.with_quadratic();
    }
    for c in &model.covariate {
        let (col, unit) = match c.split_once(':') {
            Some((col, unit)) => (col.trim(), Some(unit.trim())),
            None => (c.trim(), None),
        };
        spec = spec.with_covariate(Term::new(col, reference(ds, col, unit)?));
    }
    Ok(spec)
}

fn fit_json(f: &FitResult) -> String {
    let mut map = serde_json::Map::new();
    for (k, v) in fit_fields(f) {
        let v = match v {
            Field::Text(t) => serde_json::Value::String(t),
            Field::Count(c) => serde_json::Value::from(c),
            Field::Number(x) => serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, Into::into),
        };
        map.insert(k, v);
    }
    let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("plain values serialize");
    s.push('\n');
    s
}

fn fit_cmd(model: &ModelArgs, json: bool) -> Outcome {
    let ds = load(&model.axes)?;
    let f = fit(&ds, &model_spec(&ds, model)?).map_err(data)?;
    Ok(if json { fit_json(&f) } else { render_fit_report(&f) })
}

fn coefficient_names(f: &FitResult) -> Vec<String> {
    let mut names = vec!["alpha".to_string(), "beta".to_string()];
    if f.gamma.is_some() {
        names.push("gamma".into());
    }
    for c in f.covariates.iter().filter(|c| c.coefficient.is_some()) {
        names.push(format!("delta[{}/{}]", c.term.column, c.term.reference.symbol()));
    }
    names
}

fn unit_change(model: &ModelArgs, new_x0: &str) -> Outcome {
    let ds = load(&model.axes)?;
    let spec = model_spec(&ds, model)?;
    let base = fit(&ds, &spec).map_err(data)?;
    let new_ref = reference(&ds, &model.axes.x, Some(new_x0))?;
    let moved = transform_under_unit_change(&base, &new_ref).map_err(data)?;
    let mut respec = spec.clone();
    respec.log_predictor.reference = new_ref.clone();
    let refit = fit(&ds, &respec).map_err(data)?;

    let old = spec.log_predictor.reference.symbol();
    let mut s = format!("x0: {old} -> {}\n", new_ref.symbol());
    s.push_str(&format!(
        "{:<16} {:>16} {:>16} {:>16} {:>12}\n",
        "coefficient", old, "transformed", "refit", "|diff|"
    ));
    let mut worst: f64 = 0.0;
    let rows = coefficient_names(&base)
        .into_iter()
        .zip(base.estimates())
        .zip(moved.estimates().into_iter().zip(refit.estimates()));
    for ((name, b), (m, r)) in rows {
        let diff = (m - r).abs();
        worst = worst.max(diff);
        s.push_str(&format!(
            "{name:<16} {:>16} {:>16} {:>16} {:>12.3e}\n",
            fmt_num(b),
            fmt_num(m),
            fmt_num(r),
            diff
        ));
    }
    s.push_str(&format!("r_squared={} (unchanged)\n", fmt_num(base.r_squared)));
    s.push_str(&format!("max_abs_diff={worst:e}\n"));
    Ok(s)
}

fn residuals(axes: &AxisArgs, rows: &[usize], space: Space) -> Outcome {
    let [a, b] = rows else {
        return Err(Failure::Usage(format!(
            "--row must be given exactly twice, got {}",
            rows.len()
        )));
    };
    let ds = load(axes)?;
    let (x, y) = axis_terms(&ds, axes)?;
    let f = fit(&ds, &ModelSpec::power_law(y, x)).map_err(data)?;
    let obs = |row: usize| -> Result<Observation, Failure> {
        if row == 0 || row > ds.n() {
            return Err(Failure::Data(format!("row {row} out of range 1..={}", ds.n())));
        }
        Ok(Observation::new(
            ds.quantity(&axes.x, row - 1).map_err(data)?,
            ds.quantity(&axes.y, row - 1).map_err(data)?,
        ))
    };
    let space = match space {
        Space::Log => ResidualSpace::Log,
        Space::Natural => ResidualSpace::Natural,
    };
    let ratio = residual_distance_ratio(&obs(*a)?, &obs(*b)?, &f, space).map_err(data)?;
    let label = if space == ResidualSpace::Log { "log" } else { "natural" };
    Ok(format!("space={label}\nrows={a},{b}\nratio={}\n", fmt_num(ratio)))
}

fn quantity(text: &str) -> Result<Quantity, Failure> {
    registry().parse_quantity(text).map_err(data)
}

fn predict(p: Predict) -> Outcome {
    let report = match p {
        Predict::Blast {
            energy,
            time,
            radius,
            c,
            rho,
        } => {
            let cfg = BlastConfig::new(c, quantity(&rho)?).map_err(data)?;
            match energy {
                Some(e) => {
                    let [t] = time.as_slice() else {
                        return Err(Failure::Usage("--energy takes exactly one --time".into()));
                    };
                    casebook::blast_radius_report(&cfg, &quantity(&e)?, &quantity(t)?)
                }
                None => {
                    if radius.is_empty() || radius.len() != time.len() {
                        return Err(Failure::Usage(
                            "give --energy, or matching --radius/--time pairs".into(),
                        ));
                    }
                    let obs = radius
                        .iter()
                        .zip(&time)
                        .map(|(r, t)| Ok((quantity(r)?, quantity(t)?)))
                        .collect::<Result<Vec<_>, Failure>>()?;
                    casebook::blast_yield_report(&cfg, &obs)
                }
            }
        }
        Predict::Roast {
            mass,
            ref_mass,
            ref_time,
        } => casebook::roast_report(&quantity(&mass)?, &quantity(&ref_mass)?, &quantity(&ref_time)?),
        Predict::Hull { length } => casebook::hull_report(&quantity(&length)?),
        Predict::Fall {
            mass,
            ref_mass,
            ref_speed,
        } => casebook::fall_report(&quantity(&ref_speed)?, &quantity(&ref_mass)?, &quantity(&mass)?),
    };
    Ok(report.map_err(data)?.to_string())
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| data(format!("{}: {e}", path.display())))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| data(format!("{}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| data(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

fn plot(axes: &AxisArgs, out: &Path, show_fit: bool, quadratic: bool) -> Outcome {
    let ds = load(axes)?;
    let (x, y) = axis_terms(&ds, axes)?;
    let fitted = if show_fit {
        let mut spec = ModelSpec::power_law(y.clone(), x.clone());
        if quadratic {
            spec = spec.with_quadratic();
        }
        Some(fit(&ds, &spec).map_err(data)?)
    } else {
        None
    };
    let mut spec = PlotSpec::new(x, y);
    spec.show_fit = show_fit;
    spec.out = Some(out.to_path_buf());
    let svg = emit_svg_plot(&ds, fitted.as_ref(), &spec).map_err(data)?;
    write_atomic(out, &svg)?;
    Ok(format!("wrote {} ({} points)\n", out.display(), ds.n()))
}
