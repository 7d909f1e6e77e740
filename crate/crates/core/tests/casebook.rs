use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scalewise::casebook::{self, BlastConfig, CaseError};
use scalewise::{registry, Quantity};

fn q(s: &str) -> Quantity {
    registry().parse_quantity(s).unwrap()
}

fn qty(x: f64, unit: &str) -> Quantity {
    Quantity::new(x, registry().unit(unit).unwrap()).unwrap()
}

#[test]
fn blast_radius_example() {
    // (8e13 / 1.2 * 0.025^2)^(1/5), computed independently
    let r = casebook::blast_radius(&BlastConfig::default(), &q("8e13 J"), &q("0.025 s")).unwrap();
    assert_relative_eq!(r.magnitude(), 133.03249971309862, max_relative = 1e-12);
    assert_eq!(r.unit().symbol(), "m");
}

#[test]
fn blast_rejects_swapped_arguments() {
    let err = casebook::blast_radius(&BlastConfig::default(), &q("0.025 s"), &q("8e13 J")).unwrap_err();
    assert!(matches!(err, CaseError::Dimension { what: "E", .. }), "{err}");
    assert!(BlastConfig::new(1.0, q("1.2 kg m^-2")).is_err());
    assert_eq!(
        casebook::blast_yield(&BlastConfig::default(), &[]),
        Err(CaseError::NoObservations)
    );
}

#[test]
fn blast_yield_with_bounded_noise() {
    // |noise| <= 1% on r bounds the energy error by 1.01^5 - 1 < 5.2%
    let cfg = BlastConfig::default();
    let e = 8e13;
    let mut rng = ChaCha8Rng::seed_from_u64(1945);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let obs: Vec<(Quantity, Quantity)> = (1..=5)
            .map(|k| {
                let t = qty(0.005 * k as f64, "s");
                let r = casebook::blast_radius(&cfg, &qty(e, "J"), &t).unwrap();
                let noisy = r.magnitude() * (1.0 + rng.random_range(-0.01..=0.01));
                (qty(noisy, "m"), t)
            })
            .collect();
        let got = casebook::blast_yield(&cfg, &obs).unwrap().magnitude();
        worst = worst.max((got / e - 1.0).abs());
    }
    assert!(worst <= 0.052, "worst relative error {worst}");
    assert!(worst > 0.001, "noise had no effect: {worst}");
}

#[test]
fn roast_and_fall_examples() {
    let t = casebook::roast_time(&q("5 kg"), &q("1 kg"), &q("1 hr")).unwrap();
    assert_relative_eq!(t.magnitude(), 2.924017738212866, max_relative = 1e-12);
    assert_eq!(t.unit().symbol(), "hr");
    let t = casebook::roast_time(&q("1 kg"), &q("1 kg"), &q("1 hr")).unwrap();
    assert_eq!(t.magnitude(), 1.0);

    let v = casebook::terminal_velocity_scale(&q("150 mph"), &q("200 kg"), &q("20 g")).unwrap();
    assert_relative_eq!(v.magnitude(), 32.31652035047826, max_relative = 1e-12);
    assert!(casebook::terminal_velocity_scale(&q("150 mph"), &q("200 kg"), &q("20 m")).is_err());
}

#[test]
fn hull_examples() {
    let knot = registry().unit("knot").unwrap();
    let v = casebook::hull_speed(&q("25 ft")).unwrap();
    assert_relative_eq!(v.magnitude(), 3.4486402231548703, max_relative = 1e-12);
    assert_relative_eq!(
        scalewise::convert(&v, &knot).unwrap().magnitude(),
        6.703620304188733,
        max_relative = 1e-12
    );
    let v = casebook::hull_speed(&q("600 ft")).unwrap();
    assert_relative_eq!(
        scalewise::convert(&v, &knot).unwrap().magnitude(),
        32.8408983492467,
        max_relative = 1e-12
    );
}

#[test]
fn derived_relations_print() {
    assert_eq!(
        casebook::blast_relation().unwrap().to_string(),
        "r ~ E^1/5 rho^-1/5 t^2/5"
    );
    assert_eq!(casebook::roast_relation().unwrap().to_string(), "t ~ kappa^-1 m^2/3");
    assert_eq!(casebook::fall_relation().unwrap().to_string(), "v ~ m^1/6");
    let (iso, allo) = casebook::kleiber_chain_demo().unwrap();
    assert_eq!(iso.to_string(), "s ~ m^2/3");
    assert_eq!(allo.to_string(), "s ~ m^3/4");
}

#[test]
fn reports_render() {
    let rep = casebook::hull_report(&q("25 ft")).unwrap();
    let text = rep.to_string();
    assert!(text.contains("prediction = 6.703620 knot"), "{text}");
    let rep = casebook::blast_radius_report(&BlastConfig::default(), &q("8e13 J"), &q("0.025 s")).unwrap();
    assert!(rep.to_string().contains("prediction = 133.032500 m"), "{rep}");
}

proptest! {
    #[test]
    fn blast_round_trip(log_e in 20.0f64..40.0, c in 0.5f64..2.0, rho in 0.1f64..10.0, ts in proptest::collection::vec(1e-4f64..1.0, 1..6)) {
        let cfg = BlastConfig::new(c, qty(rho, "kg").div(&q("1 m^3")).unwrap()).unwrap();
        let e = log_e.exp();
        let obs: Vec<(Quantity, Quantity)> = ts
            .iter()
            .map(|&t| {
                let t = qty(t, "s");
                (casebook::blast_radius(&cfg, &qty(e, "J"), &t).unwrap(), t)
            })
            .collect();
        let got = casebook::blast_yield(&cfg, &obs).unwrap().magnitude();
        prop_assert!((got / e - 1.0).abs() < 1e-9, "{} vs {}", got, e);
    }
}
