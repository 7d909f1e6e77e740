//! Worked scaling predictions.
//!
//! Each case derives its exponents at run time through [`crate::algebra`]
//! and checks them against the closed form before touching any numbers, so
//! a regression in the solver shows up as [`CaseError::FormulaDrift`] rather
//! than as a silently wrong prediction. Arithmetic goes through
//! [`Quantity`], so output dimensions are checked exactly.

use std::fmt;

use thiserror::Error;

use crate::algebra::{chain, solve_balance, solve_target_exponents, AlgebraError, Monomial, ScalingRelation};
use crate::dimension::Dimension;
use crate::rational::Rational;
use crate::units::{convert, log_ratio, registry, Quantity, Unit, UnitError};

/// Standard gravity, m/s^2.
pub const STANDARD_GRAVITY: f64 = 9.80665;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CaseError {
    #[error("{what}: expected [{expected}], got [{got}]")]
    Dimension {
        what: &'static str,
        expected: Box<Dimension>,
        got: Box<Dimension>,
    },
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("no observations")]
    NoObservations,
    #[error("derived relation `{derived}` disagrees with closed form `{expected}`")]
    FormulaDrift { derived: String, expected: String },
    #[error(transparent)]
    Unit(#[from] UnitError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero literal denominator")
}

fn energy() -> Dimension {
    Dimension::from_ints(1, 2, -2, 0, 0)
}

fn density() -> Dimension {
    Dimension::from_ints(1, -3, 0, 0, 0)
}

fn speed() -> Dimension {
    Dimension::from_ints(0, 1, -1, 0, 0)
}

fn check(q: &Quantity, what: &'static str, expected: Dimension) -> Result<(), CaseError> {
    if q.dimension() != expected {
        return Err(CaseError::Dimension {
            what,
            expected: Box::new(expected),
            got: Box::new(q.dimension()),
        });
    }
    if q.magnitude() <= 0.0 {
        return Err(CaseError::NonPositive(what));
    }
    Ok(())
}

fn expect_relation(derived: ScalingRelation, expected: &str) -> Result<ScalingRelation, CaseError> {
    let want: ScalingRelation = expected.parse()?;
    if derived != want {
        return Err(CaseError::FormulaDrift {
            derived: derived.to_string(),
            expected: want.to_string(),
        });
    }
    Ok(derived)
}

/// Prefactor and density for the blast-wave radius `r = C (E t^2/rho)^(1/5)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlastConfig {
    c: f64,
    rho: Quantity,
}

impl BlastConfig {
    pub fn new(c: f64, rho: Quantity) -> Result<Self, CaseError> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(CaseError::NonPositive("C"));
        }
        check(&rho, "rho", density())?;
        Ok(BlastConfig { c, rho })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn rho(&self) -> &Quantity {
        &self.rho
    }
}

impl Default for BlastConfig {
    /// `C = 1`, sea-level air at 1.2 kg/m^3.
    fn default() -> Self {
        let rho = registry().parse_quantity("1.2 kg m^-3").expect("valid literal");
        BlastConfig { c: 1.0, rho }
    }
}

/// `r ~ E^1/5 rho^-1/5 t^2/5`, derived from the dimension matrix.
pub fn blast_relation() -> Result<ScalingRelation, CaseError> {
    let derived = solve_target_exponents(
        "r",
        Dimension::length(),
        &[("E", energy()), ("rho", density()), ("t", Dimension::time())],
    )?;
    expect_relation(derived, "r ~ E^1/5 rho^-1/5 t^2/5")
}

/// Blast-wave radius at time `t` after releasing energy `E`.
pub fn blast_radius(cfg: &BlastConfig, energy_released: &Quantity, t: &Quantity) -> Result<Quantity, CaseError> {
    check(energy_released, "E", energy())?;
    check(t, "t", Dimension::time())?;
    let rel = blast_relation()?;
    let exp = |name| rel.exponent(name).expect("derived term present");
    let core = energy_released
        .pow(exp("E"))?
        .mul(&cfg.rho.pow(exp("rho"))?)?
        .mul(&t.pow(exp("t"))?)?;
    let radius = core.scaled(cfg.c)?;
    radius.expect_dimension(Dimension::length())?;
    Ok(convert(&radius, &registry().unit("m")?)?)
}

/// Energy from `(r, t)` observations: each gives `E = rho r^5 / (C^5 t^2)`;
/// the estimates are combined by geometric mean.
pub fn blast_yield(cfg: &BlastConfig, observations: &[(Quantity, Quantity)]) -> Result<Quantity, CaseError> {
    if observations.is_empty() {
        return Err(CaseError::NoObservations);
    }
    let rel = blast_relation()?;
    let joule = registry().unit("J")?;
    // invert r ~ E^a rho^b t^c for E
    let a = rel.exponent("E").expect("derived term present");
    let inv_a = a.recip().expect("nonzero exponent");
    let b = rel.exponent("rho").expect("derived term present");
    let c = rel.exponent("t").expect("derived term present");
    let neg = |x: Rational| x.checked_neg().expect("small exponent");
    let mut log_sum = 0.0;
    for (radius, t) in observations {
        check(radius, "r", Dimension::length())?;
        check(t, "t", Dimension::time())?;
        let e = radius
            .scaled(1.0 / cfg.c)?
            .pow(inv_a)?
            .mul(&cfg.rho.pow(neg(b.checked_mul(inv_a).expect("small")))?)?
            .mul(&t.pow(neg(c.checked_mul(inv_a).expect("small")))?)?;
        e.expect_dimension(energy())?;
        log_sum += log_ratio(&e, &Quantity::new(1.0, joule.clone())?)?;
    }
    let mean = log_sum / observations.len() as f64;
    Ok(Quantity::new(mean.exp(), joule)?)
}

/// `t ~ kappa^-1 l^2` chained with `l ~ m^1/3`.
pub fn roast_relation() -> Result<ScalingRelation, CaseError> {
    let diffusion = solve_target_exponents(
        "t",
        Dimension::time(),
        &[
            ("kappa", Dimension::from_ints(0, 2, -1, 0, 0)),
            ("l", Dimension::length()),
        ],
    )?;
    let diffusion = expect_relation(diffusion, "t ~ kappa^-1 l^2")?;
    let size = solve_balance(&"m".parse()?, &"l^3".parse()?, "l")?;
    expect_relation(chain(&diffusion, &size)?, "t ~ kappa^-1 m^2/3")
}

/// Cooking time for a similar bird of mass `m`, given a reference bird.
pub fn roast_time(m: &Quantity, m_ref: &Quantity, t_ref: &Quantity) -> Result<Quantity, CaseError> {
    check(m, "m", Dimension::mass())?;
    check(m_ref, "m_ref", Dimension::mass())?;
    check(t_ref, "t_ref", Dimension::time())?;
    let power = roast_relation()?.exponent("m").expect("derived term present");
    let ratio = log_ratio(m, m_ref)?;
    Ok(t_ref.scaled((power.to_f64() * ratio).exp())?)
}

/// `v ~ g^1/2 lambda^1/2`.
pub fn hull_relation() -> Result<ScalingRelation, CaseError> {
    let derived = solve_target_exponents(
        "v",
        speed(),
        &[
            ("g", Dimension::from_ints(0, 1, -2, 0, 0)),
            ("lambda", Dimension::length()),
        ],
    )?;
    expect_relation(derived, "v ~ g^1/2 lambda^1/2")
}

/// Deep-water wave speed for wavelength `l`, `sqrt(g l / 2 pi)`: the top
/// speed of a displacement hull of waterline length `l`.
pub fn hull_speed(l: &Quantity) -> Result<Quantity, CaseError> {
    check(l, "l", Dimension::length())?;
    let rel = hull_relation()?;
    let g = registry().parse_quantity(&format!("{STANDARD_GRAVITY} m s^-2"))?;
    let v = g
        .pow(rel.exponent("g").expect("derived term present"))?
        .mul(&l.pow(rel.exponent("lambda").expect("derived term present"))?)?
        .scaled(1.0 / (2.0 * std::f64::consts::PI).sqrt())?;
    v.expect_dimension(speed())?;
    Ok(convert(&v, &registry().unit("m/s")?)?)
}

/// Drag `l^2 v^2` balancing weight `l^3`, with `m ~ l^3`: `v ~ m^1/6`.
pub fn fall_relation() -> Result<ScalingRelation, CaseError> {
    let balance = solve_balance(&"l^2 v^2".parse()?, &"l^3".parse()?, "v")?;
    let balance = expect_relation(balance, "v ~ l^1/2")?;
    let size = solve_balance(&"m".parse()?, &"l^3".parse()?, "l")?;
    expect_relation(chain(&balance, &size)?, "v ~ m^1/6")
}

/// Terminal velocity of a similar animal of mass `m`, given a reference.
pub fn terminal_velocity_scale(v_ref: &Quantity, m_ref: &Quantity, m: &Quantity) -> Result<Quantity, CaseError> {
    check(v_ref, "v_ref", speed())?;
    check(m_ref, "m_ref", Dimension::mass())?;
    check(m, "m", Dimension::mass())?;
    let power = fall_relation()?.exponent("m").expect("derived term present");
    Ok(v_ref.scaled((power.to_f64() * log_ratio(m, m_ref)?).exp())?)
}

/// Surface-limited heat loss `s ~ l^2` under isometric (`m ~ l^3`) and
/// allometric (`m ~ l^8/3`) growth: `s ~ m^2/3` and `s ~ m^3/4`.
pub fn kleiber_chain_demo() -> Result<(ScalingRelation, ScalingRelation), CaseError> {
    kleiber_chain(r(3, 1), r(8, 3))
}

/// `s ~ l^2` chained through `m ~ l^k` for the two given `k`.
pub fn kleiber_chain(
    isometric: Rational,
    allometric: Rational,
) -> Result<(ScalingRelation, ScalingRelation), CaseError> {
    let surface: ScalingRelation = "s ~ l^2".parse()?;
    let through = |k: Rational| -> Result<ScalingRelation, CaseError> {
        let growth = Monomial::new([("l", k)]);
        let inverse = solve_balance(&Monomial::new([("m", Rational::ONE)]), &growth, "l")?;
        Ok(chain(&surface, &inverse)?)
    };
    Ok((through(isometric)?, through(allometric)?))
}

/// One worked prediction with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    title: String,
    inputs: Vec<(String, Quantity)>,
    relation: ScalingRelation,
    prefactor: (String, f64),
    prediction: Quantity,
    alternate: Option<Quantity>,
    notes: String,
}

impl CaseReport {
    /// Fails unless `prediction` carries `output_dimension`.
    pub fn new(
        title: impl Into<String>,
        inputs: Vec<(String, Quantity)>,
        relation: ScalingRelation,
        prefactor: (String, f64),
        prediction: Quantity,
        output_dimension: Dimension,
    ) -> Result<Self, CaseError> {
        if prediction.dimension() != output_dimension {
            return Err(CaseError::Dimension {
                what: "prediction",
                expected: Box::new(output_dimension),
                got: Box::new(prediction.dimension()),
            });
        }
        Ok(CaseReport {
            title: title.into(),
            inputs,
            relation,
            prefactor,
            prediction,
            alternate: None,
            notes: String::new(),
        })
    }

    /// Also show the prediction in `unit` (e.g. the input's unit family).
    pub fn with_alternate(mut self, unit: &Unit) -> Result<Self, CaseError> {
        self.alternate = Some(convert(&self.prediction, unit)?);
        Ok(self)
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn prediction(&self) -> &Quantity {
        &self.prediction
    }

    pub fn alternate(&self) -> Option<&Quantity> {
        self.alternate.as_ref()
    }

    pub fn relation(&self) -> &ScalingRelation {
        &self.relation
    }

    pub fn prefactor(&self) -> (&str, f64) {
        (&self.prefactor.0, self.prefactor.1)
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case: {}", self.title)?;
        for (name, q) in &self.inputs {
            writeln!(f, "input {name} = {} {}", crate::io::fmt_num(q.magnitude()), q.unit())?;
        }
        writeln!(f, "relation: {}", self.relation)?;
        writeln!(
            f,
            "prefactor {} = {}",
            self.prefactor.0,
            crate::io::fmt_num(self.prefactor.1)
        )?;
        let p = &self.prediction;
        writeln!(f, "prediction = {} {}", crate::io::fmt_num(p.magnitude()), p.unit())?;
        if let Some(a) = &self.alternate {
            writeln!(f, "prediction = {} {}", crate::io::fmt_num(a.magnitude()), a.unit())?;
        }
        if !self.notes.is_empty() {
            writeln!(f, "notes: {}", self.notes)?;
        }
        Ok(())
    }
}

pub fn blast_radius_report(cfg: &BlastConfig, e: &Quantity, t: &Quantity) -> Result<CaseReport, CaseError> {
    let radius = blast_radius(cfg, e, t)?;
    // K = C (E/rho)^(1/5), so that r = K t^(2/5)
    let k = e.div(&cfg.rho)?.pow(r(1, 5))?.scaled(cfg.c)?;
    CaseReport::new(
        "blast radius",
        vec![
            ("E".into(), e.clone()),
            ("t".into(), t.clone()),
            ("rho".into(), cfg.rho.clone()),
        ],
        blast_relation()?,
        ("C".into(), cfg.c),
        radius,
        Dimension::length(),
    )
    .map(|rep| {
        rep.with_notes(format!(
            "K = C (E/rho)^1/5 = {} {}",
            crate::io::fmt_num(k.magnitude()),
            k.unit()
        ))
    })
}

pub fn blast_yield_report(cfg: &BlastConfig, observations: &[(Quantity, Quantity)]) -> Result<CaseReport, CaseError> {
    let e = blast_yield(cfg, observations)?;
    let mut inputs = Vec::new();
    for (i, (radius, t)) in observations.iter().enumerate() {
        inputs.push((format!("r{}", i + 1), radius.clone()));
        inputs.push((format!("t{}", i + 1), t.clone()));
    }
    inputs.push(("rho".into(), cfg.rho.clone()));
    Ok(CaseReport::new(
        "blast yield",
        inputs,
        blast_relation()?,
        ("C".into(), cfg.c),
        e,
        energy(),
    )?
    .with_notes("geometric mean over observations"))
}

pub fn roast_report(m: &Quantity, m_ref: &Quantity, t_ref: &Quantity) -> Result<CaseReport, CaseError> {
    let t = roast_time(m, m_ref, t_ref)?;
    // C' folds kappa and the shape constant: t = C' m^(2/3) with C' from the reference bird
    let c_prime = t_ref.coherent_magnitude() / m_ref.coherent_magnitude().powf(2.0 / 3.0);
    let si = t.to_coherent();
    CaseReport::new(
        "roasting time",
        vec![
            ("m".into(), m.clone()),
            ("m_ref".into(), m_ref.clone()),
            ("t_ref".into(), t_ref.clone()),
        ],
        roast_relation()?,
        ("C'/kappa [s kg^-2/3]".into(), c_prime),
        si,
        Dimension::time(),
    )?
    .with_alternate(t_ref.unit())
}

pub fn hull_report(l: &Quantity) -> Result<CaseReport, CaseError> {
    let v = hull_speed(l)?;
    Ok(CaseReport::new(
        "hull speed",
        vec![("l".into(), l.clone())],
        hull_relation()?,
        ("1/sqrt(2 pi)".into(), 1.0 / (2.0 * std::f64::consts::PI).sqrt()),
        v,
        speed(),
    )?
    .with_alternate(&registry().unit("knot")?)?
    .with_notes(format!("g = {STANDARD_GRAVITY} m/s^2")))
}

pub fn fall_report(v_ref: &Quantity, m_ref: &Quantity, m: &Quantity) -> Result<CaseReport, CaseError> {
    let v = terminal_velocity_scale(v_ref, m_ref, m)?;
    let si = v.to_coherent();
    CaseReport::new(
        "terminal velocity",
        vec![
            ("v_ref".into(), v_ref.clone()),
            ("m_ref".into(), m_ref.clone()),
            ("m".into(), m.clone()),
        ],
        fall_relation()?,
        (
            "v_ref/m_ref^1/6 [m s^-1 kg^-1/6]".into(),
            v_ref.coherent_magnitude() / m_ref.coherent_magnitude().powf(1.0 / 6.0),
        ),
        si,
        speed(),
    )?
    .with_alternate(v_ref.unit())
}
