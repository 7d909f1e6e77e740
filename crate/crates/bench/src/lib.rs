//! Shared inputs for the benchmarks.

use scalewise::synth::{self, DEFAULT_SEED};
use scalewise::{registry, DataSet, Dimension, ModelSpec, Term};

/// `(name, dimension)` for `k` quantities cycling through mechanical
/// dimensions, so the matrix has rank 3 and `k - 3` groups.
pub fn mechanical_quantities(k: usize) -> Vec<(String, Dimension)> {
    let dims = [
        Dimension::from_ints(1, 2, -2, 0, 0),
        Dimension::from_ints(1, -3, 0, 0, 0),
        Dimension::from_ints(0, 0, 1, 0, 0),
        Dimension::from_ints(0, 1, 0, 0, 0),
        Dimension::from_ints(0, 1, -1, 0, 0),
        Dimension::from_ints(1, -1, -1, 0, 0),
    ];
    (0..k).map(|i| (format!("q{i}"), dims[i % dims.len()])).collect()
}

pub fn borrowed(qs: &[(String, Dimension)]) -> Vec<(&str, Dimension)> {
    qs.iter().map(|(n, d)| (n.as_str(), *d)).collect()
}

pub fn kleiber(n: usize) -> (DataSet, ModelSpec) {
    let reg = registry();
    let spec = ModelSpec::power_law(
        Term::new("rate", reg.unit("W").unwrap()),
        Term::new("mass", reg.unit("g").unwrap()),
    );
    (synth::kleiber(DEFAULT_SEED, n, 0.75, 0.05), spec)
}

pub fn yacht(n: usize) -> (DataSet, ModelSpec) {
    let reg = registry();
    let spec = ModelSpec::power_law(
        Term::new("price", reg.unit("GBP").unwrap()),
        Term::new("length", reg.unit("ft").unwrap()),
    )
    .with_covariate(Term::new("age", reg.unit("yr").unwrap()));
    (synth::yacht(DEFAULT_SEED, n, 3.5, -0.03, 0.3), spec)
}
