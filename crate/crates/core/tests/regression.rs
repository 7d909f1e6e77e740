use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use scalewise::regression::fit;
use scalewise::synth::{self, DEFAULT_SEED};
use scalewise::{
    fit_power_law, fit_quadratic_log, fit_with_covariates, registry, residual_distance_ratio,
    transform_under_unit_change, Column, DataSet, FitResult, ModelSpec, Observation, Quantity, ResidualSpace, Term,
    Unit,
};

fn unit(s: &str) -> Unit {
    registry().parse_unit(s).unwrap()
}

fn q(s: &str) -> Quantity {
    registry().parse_quantity(s).unwrap()
}

fn mass_rate_spec(x0: &str) -> ModelSpec {
    ModelSpec::power_law(Term::new("rate", unit("W")), Term::new("mass", unit(x0)))
}

/// RSS evaluated from scratch for an arbitrary coefficient vector.
fn rss_at(ds: &DataSet, spec: &ModelSpec, coef: &[f64]) -> f64 {
    let y = ds.log_column(&spec.response.column, &spec.response.reference).unwrap();
    let u = ds
        .log_column(&spec.log_predictor.column, &spec.log_predictor.reference)
        .unwrap();
    let z: Vec<Vec<f64>> = spec
        .linear_covariates
        .iter()
        .map(|t| ds.ratio_column(&t.column, &t.reference).unwrap())
        .collect();
    (0..ds.n())
        .map(|i| {
            let mut pred = coef[0] + coef[1] * u[i];
            let mut k = 2;
            if spec.include_quadratic {
                pred += coef[2] * u[i] * u[i];
                k = 3;
            }
            for (j, col) in z.iter().enumerate() {
                pred += coef[k + j] * col[i];
            }
            (y[i] - pred).powi(2)
        })
        .sum()
}

fn assert_stationary(ds: &DataSet, f: &FitResult) {
    let b = f.estimates();
    let h = 1e-6;
    for k in 0..b.len() {
        let mut up = b.clone();
        let mut dn = b.clone();
        up[k] += h;
        dn[k] -= h;
        let grad = (rss_at(ds, &f.spec, &up) - rss_at(ds, &f.spec, &dn)) / (2.0 * h);
        assert!(grad.abs() < 1e-9 * ds.n() as f64 * 10.0, "d RSS / d b{k} = {grad}");
    }
}

#[test]
fn normal_equations_hold() {
    let ds = synth::kleiber(DEFAULT_SEED, 60, 0.75, 0.05);
    let f = fit_power_law(&ds, &mass_rate_spec("g")).unwrap();
    assert_stationary(&ds, &f);
    assert_abs_diff_eq!(f.residuals_log.iter().sum::<f64>(), 0.0, epsilon = 1e-9);

    let ds = synth::yacht(DEFAULT_SEED, 80, 3.5, -0.03, 0.3);
    let spec = ModelSpec::power_law(Term::new("price", unit("GBP")), Term::new("length", unit("ft")))
        .with_covariate(Term::new("age", unit("yr")));
    let f = fit_with_covariates(&ds, &spec).unwrap();
    assert_stationary(&ds, &f);
    assert_abs_diff_eq!(f.residuals_log.iter().sum::<f64>(), 0.0, epsilon = 1e-9);

    let ds = synth::quadratic_log(3, 50, [1.0, 0.7, 0.01], 0.1, (0.0, 12.0));
    let f = fit_quadratic_log(&ds, &mass_rate_spec("g").with_quadratic()).unwrap();
    assert_stationary(&ds, &f);
}

#[test]
fn kleiber_style_recovery() {
    let ds = synth::kleiber(DEFAULT_SEED, 60, 0.75, 0.05);
    let f = fit_power_law(&ds, &mass_rate_spec("g")).unwrap();
    assert!((f.beta.estimate - 0.75).abs() <= 2.0 * f.beta.std_error, "{:?}", f.beta);
    assert!(f.beta.std_error <= 0.02);
    assert!(f.r_squared > 0.99);
}

#[test]
fn yacht_style_recovery() {
    let ds = synth::yacht(DEFAULT_SEED, 80, 3.5, -0.03, 0.3);
    let spec = ModelSpec::power_law(Term::new("price", unit("GBP")), Term::new("length", unit("ft")))
        .with_covariate(Term::new("age", unit("yr")));
    let f = fit_with_covariates(&ds, &spec).unwrap();
    let delta = f.covariates[0].coefficient.unwrap();
    assert!((f.beta.estimate - 3.5).abs() <= 2.0 * f.beta.std_error, "{:?}", f.beta);
    assert!((delta.estimate + 0.03).abs() <= 2.0 * delta.std_error, "{delta:?}");
}

#[test]
fn zero_covariate_reduces_to_power_law() {
    let base = synth::kleiber(11, 30, 0.7, 0.1);
    let mut cols = base.columns().to_vec();
    cols.push(Column::new("age", unit("yr"), vec![0.0; base.n()]));
    let ds = DataSet::new(cols).unwrap();
    let plain = fit_power_law(&ds, &mass_rate_spec("g")).unwrap();
    let with = fit_with_covariates(&ds, &mass_rate_spec("g").with_covariate(Term::new("age", unit("yr")))).unwrap();
    assert_eq!(with.alpha, plain.alpha);
    assert_eq!(with.beta, plain.beta);
    assert_eq!(with.r_squared, plain.r_squared);
    assert_eq!(with.residuals_log, plain.residuals_log);
    assert_eq!(with.covariates[0].coefficient, None);
}

#[test]
fn noiseless_covariate_fit_is_exact() {
    let ds = synth::yacht(5, 40, 3.5, -0.03, 0.0);
    let spec = ModelSpec::power_law(Term::new("price", unit("GBP")), Term::new("length", unit("ft")))
        .with_covariate(Term::new("age", unit("yr")));
    let f = fit_with_covariates(&ds, &spec).unwrap();
    assert_abs_diff_eq!(f.r_squared, 1.0, epsilon = 1e-9);
    assert_abs_diff_eq!(f.alpha.estimate, 2f64.ln(), epsilon = 1e-9);
    assert_abs_diff_eq!(f.beta.estimate, 3.5, epsilon = 1e-9);
    assert_abs_diff_eq!(f.covariates[0].coefficient.unwrap().estimate, -0.03, epsilon = 1e-9);
}

#[test]
fn age_in_days_rescales_delta() {
    // the covariate reference pins delta's unit: per day is per year / 365.25-ish
    let ds = synth::yacht(5, 40, 3.5, -0.03, 0.0);
    let spec = ModelSpec::power_law(Term::new("price", unit("GBP")), Term::new("length", unit("ft")))
        .with_covariate(Term::new("age", unit("day")));
    let f = fit_with_covariates(&ds, &spec).unwrap();
    let per_day = f.covariates[0].coefficient.unwrap().estimate;
    assert_abs_diff_eq!(per_day, -0.03 * 86400.0 / 3.1557e7, epsilon = 1e-12);
}

#[test]
fn quadratic_examples() {
    let pure = synth::quadratic_log(1, 30, [0.3, 0.75, 0.0], 0.0, (0.0, 12.0));
    let f = fit_quadratic_log(&pure, &mass_rate_spec("g").with_quadratic()).unwrap();
    assert_abs_diff_eq!(f.gamma.unwrap().estimate, 0.0, epsilon = 1e-9);

    let curved = synth::quadratic_log(2, 30, [1.0, 0.7, 0.01], 0.0, (0.0, 12.0));
    let f = fit_quadratic_log(&curved, &mass_rate_spec("g").with_quadratic()).unwrap();
    assert_abs_diff_eq!(f.alpha.estimate, 1.0, epsilon = 1e-9);
    assert_abs_diff_eq!(f.beta.estimate, 0.7, epsilon = 1e-9);
    assert_abs_diff_eq!(f.gamma.unwrap().estimate, 0.01, epsilon = 1e-9);
}

#[test]
fn re_reference_grams_to_kilograms() {
    let ds = synth::quadratic_log(4, 40, [1.0, 0.7, 0.01], 0.05, (0.0, 12.0));
    let f = fit_quadratic_log(&ds, &mass_rate_spec("g").with_quadratic()).unwrap();
    let moved = transform_under_unit_change(&f, &unit("kg")).unwrap();
    let refit = fit_quadratic_log(&ds, &mass_rate_spec("kg").with_quadratic()).unwrap();
    assert_abs_diff_eq!(moved.alpha.estimate, refit.alpha.estimate, epsilon = 1e-9);
    assert_abs_diff_eq!(moved.beta.estimate, refit.beta.estimate, epsilon = 1e-9);
    assert_abs_diff_eq!(
        moved.gamma.unwrap().estimate,
        refit.gamma.unwrap().estimate,
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(moved.beta.std_error, refit.beta.std_error, epsilon = 1e-9);
    assert_abs_diff_eq!(moved.alpha.std_error, refit.alpha.std_error, epsilon = 1e-9);
    assert_eq!(moved.r_squared, f.r_squared);
    assert_eq!(moved.residuals_log, f.residuals_log);
    assert_eq!(moved.spec.log_predictor.reference.symbol(), "kg");
}

#[test]
fn same_unit_transform_is_identity() {
    let ds = synth::quadratic_log(4, 40, [1.0, 0.7, 0.01], 0.05, (0.0, 12.0));
    let f = fit_quadratic_log(&ds, &mass_rate_spec("g").with_quadratic()).unwrap();
    assert_eq!(transform_under_unit_change(&f, &unit("g")).unwrap(), f);
}

#[test]
fn linear_transform_keeps_beta() {
    let ds = synth::kleiber(9, 40, 0.75, 0.05);
    let f = fit_power_law(&ds, &mass_rate_spec("g")).unwrap();
    let moved = transform_under_unit_change(&f, &unit("kg")).unwrap();
    let mu = 1000f64.ln();
    assert_eq!(moved.beta.estimate, f.beta.estimate);
    assert_abs_diff_eq!(
        moved.alpha.estimate,
        f.alpha.estimate + f.beta.estimate * mu,
        epsilon = 1e-12
    );
    assert!(transform_under_unit_change(&f, &unit("m")).is_err());
}

#[test]
fn log_residual_ratio_ten_vs_eleven_tenths() {
    // exact fit s = (m/g)^(3/4) W, then perturb two observations
    let ds = synth::quadratic_log(1, 10, [0.0, 0.75, 0.0], 0.0, (0.0, 14.0));
    let f = fit_power_law(&ds, &mass_rate_spec("g")).unwrap();
    let fitted = |m: f64| f.predict_log(&Quantity::new(m, unit("g")).unwrap()).unwrap().exp();
    let mouse = Observation::new(q("20 g"), Quantity::new(10.0 * fitted(20.0), unit("W")).unwrap());
    let bear = Observation::new(q("200 kg"), Quantity::new(1.1 * fitted(2e5), unit("W")).unwrap());
    let log_ratio = residual_distance_ratio(&mouse, &bear, &f, ResidualSpace::Log).unwrap();
    assert_abs_diff_eq!(log_ratio, 24.15885792809679, epsilon = 1e-6);

    // natural space: 0.1 * s_bear vs 9 * s_mouse with s_bear / s_mouse = 10^3
    let natural = residual_distance_ratio(&bear, &mouse, &f, ResidualSpace::Natural).unwrap();
    assert_abs_diff_eq!(natural, 11.111111111111112, epsilon = 1e-6);

    let a = Observation::new(q("20 g"), Quantity::new(2.0 * fitted(20.0), unit("W")).unwrap());
    let b = Observation::new(q("200 kg"), Quantity::new(2.0 * fitted(2e5), unit("W")).unwrap());
    assert_abs_diff_eq!(
        residual_distance_ratio(&a, &b, &f, ResidualSpace::Log).unwrap(),
        1.0,
        epsilon = 1e-9
    );
}

#[test]
fn doubling_and_halving_are_symmetric_only_in_logs() {
    let ds = synth::quadratic_log(1, 10, [0.0, 0.75, 0.0], 0.0, (0.0, 14.0));
    let f = fit_power_law(&ds, &mass_rate_spec("g")).unwrap();
    let fitted = f.predict_log(&q("1 kg")).unwrap().exp();
    let double = Observation::new(q("1 kg"), Quantity::new(2.0 * fitted, unit("W")).unwrap());
    let half = Observation::new(q("1 kg"), Quantity::new(0.5 * fitted, unit("W")).unwrap());
    assert_abs_diff_eq!(
        residual_distance_ratio(&double, &half, &f, ResidualSpace::Log).unwrap(),
        1.0,
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(
        residual_distance_ratio(&double, &half, &f, ResidualSpace::Natural).unwrap(),
        2.0,
        epsilon = 1e-9
    );
}

#[test]
fn non_positive_observation_in_log_space() {
    let ds = synth::kleiber(9, 10, 0.75, 0.05);
    let f = fit_power_law(&ds, &mass_rate_spec("g")).unwrap();
    let bad = Observation::new(q("1 kg"), q("-1 W"));
    let ok = Observation::new(q("1 kg"), q("7 W"));
    assert!(residual_distance_ratio(&bad, &ok, &f, ResidualSpace::Log).is_err());
    assert!(residual_distance_ratio(&bad, &ok, &f, ResidualSpace::Natural).is_ok());
}

const MASS_UNITS: [&str; 4] = ["g", "kg", "mg", "lb"];
const RATE_UNITS: [&str; 3] = ["W", "kW", "J s^-1"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_change_commutes_with_refit(
        seed in 0u64..10_000,
        c in (-2.0f64..2.0, -1.0f64..1.5, -0.05f64..0.05),
        mu_target in -10.0f64..10.0,
    ) {
        let ds = synth::quadratic_log(seed, 30, [c.0, c.1, c.2], 0.1, (0.0, 10.0));
        let base = fit_quadratic_log(&ds, &mass_rate_spec("g").with_quadratic()).unwrap();
        // a fresh reference unit with ln(g / new) = mu_target
        let new_ref = Unit::new("ref", unit("g").dimension(), 1e-3 * (-mu_target).exp()).unwrap();
        let moved = transform_under_unit_change(&base, &new_ref).unwrap();
        let refit = fit(&ds, &ModelSpec::power_law(Term::new("rate", unit("W")), Term::new("mass", new_ref.clone())).with_quadratic()).unwrap();
        let pairs = [
            (moved.alpha.estimate, refit.alpha.estimate),
            (moved.beta.estimate, refit.beta.estimate),
            (moved.gamma.unwrap().estimate, refit.gamma.unwrap().estimate),
        ];
        for (a, b) in pairs {
            prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
        }
        prop_assert!((base.gamma.unwrap().estimate - refit.gamma.unwrap().estimate).abs() < 1e-9);
        prop_assert_eq!(moved.r_squared, base.r_squared);
    }

    #[test]
    fn beta_is_unit_invariant(seed in 0u64..10_000, xu in 0usize..4, yu in 0usize..3) {
        let ds = synth::kleiber(seed, 25, 0.75, 0.2);
        let base = fit_power_law(&ds, &mass_rate_spec("g")).unwrap();
        let spec = ModelSpec::power_law(Term::new("rate", unit(RATE_UNITS[yu])), Term::new("mass", unit(MASS_UNITS[xu])));
        let other = fit_power_law(&ds, &spec).unwrap();
        prop_assert!((base.beta.estimate - other.beta.estimate).abs() < 1e-12);
    }

    #[test]
    fn line_segments_never_need_curvature(offset in -20.0f64..20.0, width in 0.2f64..5.0, slope in -2.0f64..2.0) {
        let ds = synth::quadratic_log(1, 12, [0.5, slope, 0.0], 0.0, (offset, offset + width));
        let f = fit_quadratic_log(&ds, &mass_rate_spec("g").with_quadratic()).unwrap();
        prop_assert!(f.gamma.unwrap().estimate.abs() < 1e-9, "gamma = {}", f.gamma.unwrap().estimate);
    }
}
