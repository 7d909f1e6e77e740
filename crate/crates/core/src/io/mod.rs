//! File formats: unit-annotated CSV, flat fit reports, and SVG plots.

mod csv;
mod report;
mod svg;

pub use self::csv::{load_csv, parse_csv, parse_header, write_csv, CsvError};
pub use self::report::{fit_fields, render_fit_report, Field};
pub use self::svg::{emit_svg_plot, PlotError, PlotSpec, SVG_HEIGHT, SVG_WIDTH};

/// Six decimals, switching to scientific notation outside `[1e-4, 1e6)`.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{x:.6}")
    } else if x.is_finite() {
        format!("{x:.6e}")
    } else {
        x.to_string()
    }
}
