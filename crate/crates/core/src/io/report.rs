//! Flat key/value rendering of a [`FitResult`]. Field order is fixed.

use crate::regression::FitResult;

use super::fmt_num;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Text(String),
    Count(usize),
    Number(f64),
}

pub fn fit_fields(fit: &FitResult) -> Vec<(String, Field)> {
    let spec = &fit.spec;
    let model = match (spec.include_quadratic, spec.linear_covariates.is_empty()) {
        (false, true) => "power-law",
        (true, true) => "quadratic-log",
        (false, false) => "power-law+covariates",
        (true, false) => "quadratic-log+covariates",
    };
    let mut out = vec![
        ("model".to_string(), Field::Text(model.into())),
        ("n".into(), Field::Count(fit.n)),
        ("p".into(), Field::Count(fit.p)),
        ("response".into(), Field::Text(spec.response.column.clone())),
        (
            "response_reference".into(),
            Field::Text(spec.response.reference.symbol().into()),
        ),
        ("predictor".into(), Field::Text(spec.log_predictor.column.clone())),
        (
            "predictor_reference".into(),
            Field::Text(spec.log_predictor.reference.symbol().into()),
        ),
        ("alpha".into(), Field::Number(fit.alpha.estimate)),
        ("alpha_se".into(), Field::Number(fit.alpha.std_error)),
        ("beta".into(), Field::Number(fit.beta.estimate)),
        ("beta_se".into(), Field::Number(fit.beta.std_error)),
    ];
    if let Some(g) = fit.gamma {
        out.push(("gamma".into(), Field::Number(g.estimate)));
        out.push(("gamma_se".into(), Field::Number(g.std_error)));
    }
    for c in &fit.covariates {
        let key = format!("delta[{}/{}]", c.term.column, c.term.reference.symbol());
        match c.coefficient {
            Some(coef) => {
                out.push((key.clone(), Field::Number(coef.estimate)));
                out.push((format!("{key}_se"), Field::Number(coef.std_error)));
            }
            None => out.push((key, Field::Text("dropped (identically zero)".into()))),
        }
    }
    out.push(("r_squared".into(), Field::Number(fit.r_squared)));
    out.push(("rss".into(), Field::Number(fit.rss)));
    out.push(("sigma".into(), Field::Number(fit.sigma())));
    out
}

/// `key=value` lines, numbers at six decimals.
pub fn render_fit_report(fit: &FitResult) -> String {
    let mut s = String::new();
    for (k, v) in fit_fields(fit) {
        let v = match v {
            Field::Text(t) => t,
            Field::Count(c) => c.to_string(),
            Field::Number(x) => fmt_num(x),
        };
        s.push_str(&k);
        s.push('=');
        s.push_str(&v);
        s.push('\n');
    }
    s
}
