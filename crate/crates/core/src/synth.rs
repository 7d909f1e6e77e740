//! Seeded synthetic data for exercising the fits.
//!
//! All generators draw from `ChaCha8Rng::seed_from_u64(seed)`; predictors are
//! drawn first (row by row), then the Gaussian noise terms (row by row), so a
//! given seed reproduces a table exactly on any platform this crate builds on.
//! Cross-language reproduction is statistical, not bit-exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::regression::{Column, DataSet};
use crate::units::registry;

/// Seed used by the shipped examples and the acceptance suite.
pub const DEFAULT_SEED: u64 = 1950;

/// Metabolic-rate style table: columns `mass[g]` and `rate[W]` with
/// `log(rate/W) = ln(0.02) + beta*log(mass/g) + N(0, sigma^2)`, masses
/// log-uniform on 10 g .. 1e6 g.
pub fn kleiber(seed: u64, n: usize, beta: f64, sigma: f64) -> DataSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_m: Vec<f64> = (0..n).map(|_| rng.random_range(10f64.ln()..1e6f64.ln())).collect();
    let noise = Normal::new(0.0, sigma).expect("sigma must be finite and non-negative");
    let rate: Vec<f64> = log_m
        .iter()
        .map(|u| (0.02f64.ln() + beta * u + noise.sample(&mut rng)).exp())
        .collect();
    let reg = registry();
    DataSet::new(vec![
        Column::new("mass", reg.unit("g").unwrap(), log_m.iter().map(|u| u.exp()).collect()),
        Column::new("rate", reg.unit("W").unwrap(), rate),
    ])
    .expect("generated columns are consistent")
}

/// Secondhand-yacht style table: `length[ft]` uniform on 20..60,
/// `age[yr]` uniform on 0..40, and
/// `log(price/GBP) = ln 2 + beta*log(length/ft) + delta*age/yr + N(0, sigma^2)`.
pub fn yacht(seed: u64, n: usize, beta: f64, delta: f64, sigma: f64) -> DataSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random_range(20.0..60.0), rng.random_range(0.0..40.0)))
        .collect();
    let noise = Normal::new(0.0, sigma).expect("sigma must be finite and non-negative");
    let price: Vec<f64> = rows
        .iter()
        .map(|&(l, age)| (2f64.ln() + beta * l.ln() + delta * age + noise.sample(&mut rng)).exp())
        .collect();
    let reg = registry();
    DataSet::new(vec![
        Column::new("length", reg.unit("ft").unwrap(), rows.iter().map(|r| r.0).collect()),
        Column::new("price", reg.unit("GBP").unwrap(), price),
        Column::new("age", reg.unit("yr").unwrap(), rows.iter().map(|r| r.1).collect()),
    ])
    .expect("generated columns are consistent")
}

/// Quadratic-in-log table: `u = log(mass/g)` uniform on `u_range`, and
/// `log(rate/W) = c0 + c1*u + c2*u^2 + N(0, sigma^2)`.
pub fn quadratic_log(seed: u64, n: usize, coefficients: [f64; 3], sigma: f64, u_range: (f64, f64)) -> DataSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let us: Vec<f64> = (0..n).map(|_| rng.random_range(u_range.0..u_range.1)).collect();
    let noise = Normal::new(0.0, sigma).expect("sigma must be finite and non-negative");
    let [c0, c1, c2] = coefficients;
    let rate: Vec<f64> = us
        .iter()
        .map(|u| {
            let eps = if sigma > 0.0 { noise.sample(&mut rng) } else { 0.0 };
            (c0 + c1 * u + c2 * u * u + eps).exp()
        })
        .collect();
    let reg = registry();
    DataSet::new(vec![
        Column::new("mass", reg.unit("g").unwrap(), us.iter().map(|u| u.exp()).collect()),
        Column::new("rate", reg.unit("W").unwrap(), rate),
    ])
    .expect("generated columns are consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_table() {
        assert_eq!(kleiber(7, 10, 0.75, 0.05), kleiber(7, 10, 0.75, 0.05));
        assert_ne!(kleiber(7, 10, 0.75, 0.05), kleiber(8, 10, 0.75, 0.05));
        assert_eq!(yacht(3, 5, 3.5, -0.03, 0.3), yacht(3, 5, 3.5, -0.03, 0.3));
    }

    #[test]
    fn shapes() {
        let y = yacht(DEFAULT_SEED, 80, 3.5, -0.03, 0.3);
        assert_eq!(y.n(), 80);
        assert_eq!(y.columns().len(), 3);
        assert!(y
            .column("age")
            .unwrap()
            .values
            .iter()
            .all(|&a| (0.0..40.0).contains(&a)));
        let k = kleiber(DEFAULT_SEED, 60, 0.75, 0.05);
        assert!(k
            .column("mass")
            .unwrap()
            .values
            .iter()
            .all(|&m| (10.0..1.0e6 + 1.0).contains(&m)));
    }
}
