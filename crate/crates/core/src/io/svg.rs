//! Deterministic log-log scatter plots.
//!
//! Points are drawn at `(log(x/x0), log(y/y0))`. The plot area group carries
//! its pixel box (`data-box="left top width height"`) and its data window
//! (`data-window="xmin xmax ymin ymax"`, shortest round-trip decimals) so that
//! the emitted coordinates can be mapped back to data space. Only data marks
//! use `<circle>`, `<line>` and `<polyline>`; axes and ticks are `<path>`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::regression::{DataSet, FitError, FitResult, Term};

use super::fmt_num;

pub const SVG_WIDTH: f64 = 640.0;
pub const SVG_HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const PARABOLA_SAMPLES: usize = 201;

#[derive(Debug, Error, PartialEq)]
pub enum PlotError {
    #[error(transparent)]
    Data(#[from] FitError),
    #[error("fit was made on {fit_x} vs {fit_y}, plot asks for {plot_x} vs {plot_y}")]
    FitMismatch {
        fit_x: String,
        fit_y: String,
        plot_x: String,
        plot_y: String,
    },
    #[error("fits with covariates cannot be drawn on a two-axis plot")]
    CovariateFit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub x: Term,
    pub y: Term,
    pub show_fit: bool,
    pub out: Option<std::path::PathBuf>,
}

impl PlotSpec {
    pub fn new(x: Term, y: Term) -> Self {
        PlotSpec {
            x,
            y,
            show_fit: false,
            out: None,
        }
    }

    pub fn axis_labels(&self) -> (String, String) {
        (
            format!("log({}/{})", self.x.column, self.x.reference.symbol()),
            format!("log({}/{})", self.y.column, self.y.reference.symbol()),
        )
    }
}

struct Window {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Window {
    fn width(&self) -> f64 {
        SVG_WIDTH - LEFT - RIGHT
    }

    fn height(&self) -> f64 {
        SVG_HEIGHT - TOP - BOTTOM
    }

    fn px(&self, u: f64) -> f64 {
        LEFT + (u - self.xmin) / (self.xmax - self.xmin) * self.width()
    }

    fn py(&self, v: f64) -> f64 {
        TOP + self.height() - (v - self.ymin) / (self.ymax - self.ymin) * self.height()
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi - lo > 0.0 {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac <= 1.0 {
        1.0
    } else if frac <= 2.0 {
        2.0
    } else if frac <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Renders the scatter plot, with the fitted line (or parabola) when `fit`
/// is given.
pub fn emit_svg_plot(ds: &DataSet, fit: Option<&FitResult>, spec: &PlotSpec) -> Result<String, PlotError> {
    let us = ds.log_column(&spec.x.column, &spec.x.reference)?;
    let vs = ds.log_column(&spec.y.column, &spec.y.reference)?;
    if let Some(f) = fit {
        let fx = &f.spec.log_predictor;
        let fy = &f.spec.response;
        if *fx != spec.x || *fy != spec.y {
            return Err(PlotError::FitMismatch {
                fit_x: format!("{}/{}", fx.column, fx.reference),
                fit_y: format!("{}/{}", fy.column, fy.reference),
                plot_x: format!("{}/{}", spec.x.column, spec.x.reference),
                plot_y: format!("{}/{}", spec.y.column, spec.y.reference),
            });
        }
        if f.covariates.iter().any(|c| c.coefficient.is_some()) {
            return Err(PlotError::CovariateFit);
        }
    }

    let fold = |v: &[f64]| {
        v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
    };
    let (ulo, uhi) = fold(&us);
    let (xmin, xmax) = padded(ulo, uhi);

    let curve: Option<Vec<(f64, f64)>> = fit.map(|f| {
        let a = f.alpha.estimate;
        let b = f.beta.estimate;
        match f.gamma {
            None => vec![(xmin, a + b * xmin), (xmax, a + b * xmax)],
            Some(g) => (0..PARABOLA_SAMPLES)
                .map(|i| {
                    let u = xmin + (xmax - xmin) * i as f64 / (PARABOLA_SAMPLES - 1) as f64;
                    (u, a + b * u + g.estimate * u * u)
                })
                .collect(),
        }
    });
    let mut all_v = vs.clone();
    if let Some(c) = &curve {
        all_v.extend(c.iter().map(|p| p.1));
    }
    let (vlo, vhi) = fold(&all_v);
    let (ymin, ymax) = padded(vlo, vhi);
    let w = Window { xmin, xmax, ymin, ymax };

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<rect class="frame" x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w.width(),
        w.height()
    );

    // ticks
    let mut d = String::new();
    for t in ticks(xmin, xmax) {
        let _ = write!(d, "M{:.3} {:.3}v5", w.px(t), TOP + w.height());
    }
    for t in ticks(ymin, ymax) {
        let _ = write!(d, "M{LEFT:.3} {:.3}h-5", w.py(t));
    }
    let _ = writeln!(s, r#"<path class="ticks" d="{d}" stroke="black"/>"#);
    let font = r#"font-family="sans-serif" font-size="11""#;
    for t in ticks(xmin, xmax) {
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle" {font}>{}</text>"#,
            w.px(t),
            TOP + w.height() + 18.0,
            tick_label(t)
        );
    }
    for t in ticks(ymin, ymax) {
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end" {font}>{}</text>"#,
            LEFT - 8.0,
            w.py(t) + 4.0,
            tick_label(t)
        );
    }
    let (xlabel, ylabel) = spec.axis_labels();
    let _ = writeln!(
        s,
        r#"<text class="xlabel" x="{:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        LEFT + w.width() / 2.0,
        SVG_HEIGHT - 10.0,
        escape(&xlabel)
    );
    let _ = writeln!(
        s,
        r#"<text class="ylabel" x="16" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {:.3})">{}</text>"#,
        TOP + w.height() / 2.0,
        TOP + w.height() / 2.0,
        escape(&ylabel)
    );

    let _ = writeln!(
        s,
        r#"<g id="plot-area" data-box="{LEFT} {TOP} {} {}" data-window="{xmin} {xmax} {ymin} {ymax}">"#,
        w.width(),
        w.height()
    );
    for (u, v) in us.iter().zip(&vs) {
        let _ = writeln!(
            s,
            r#"<circle class="point" cx="{:.6}" cy="{:.6}" r="3" fill="steelblue"/>"#,
            w.px(*u),
            w.py(*v)
        );
    }
    if let (Some(f), Some(c)) = (fit, &curve) {
        match f.gamma {
            None => {
                let _ = writeln!(
                    s,
                    r#"<line class="fit" x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="firebrick" stroke-width="1.5"/>"#,
                    w.px(c[0].0),
                    w.py(c[0].1),
                    w.px(c[1].0),
                    w.py(c[1].1)
                );
            }
            Some(g) => {
                let pts: Vec<String> = c
                    .iter()
                    .map(|(u, v)| format!("{:.6},{:.6}", w.px(*u), w.py(*v)))
                    .collect();
                let vertex = if g.estimate != 0.0 {
                    format!(r#" data-vertex-x="{}""#, -f.beta.estimate / (2.0 * g.estimate))
                } else {
                    String::new()
                };
                let _ = writeln!(
                    s,
                    r#"<polyline class="fit"{vertex} points="{}" fill="none" stroke="firebrick" stroke-width="1.5"/>"#,
                    pts.join(" ")
                );
            }
        }
        let _ = writeln!(
            s,
            r#"<text class="legend" x="{:.3}" y="{:.3}" text-anchor="end" {font}>beta = {}, R^2 = {}</text>"#,
            LEFT + w.width() - 6.0,
            TOP + 16.0,
            fmt_num(f.beta.estimate),
            fmt_num(f.r_squared)
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
