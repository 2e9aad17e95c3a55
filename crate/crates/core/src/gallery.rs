//! Built-in fixture gallery: parametrized immersions with closed-form
//! expected lambda and type regions, each tied to a registry structure.
//!
//! Three entries deviate from their printed sources and say so in their
//! `note` field:
//!
//! * G05/G06 carry first-power coefficients (cosh, cos) where their sources
//!   print squared ones; the squared forms contradict the G04 lambda formula
//!   those examples instantiate, and tests assert the mismatch.
//! * G07 is disabled: its radicand `1 - cosh^2(theta)` is negative for every
//!   `theta > 0`, so the printed surface does not exist over the reals. The
//!   entry evaluates the |.|-patched map for inspection only.
//! * G13 is registered under S3 = (J1, g2): under the printed (J, g2) pairing
//!   the map is totally real (P vanishes identically), while the printed
//!   lambda k^2/(k^2-1) and its type regions hold under (J1, g2).
//! * G14's first block is moonlight-shaped (a u, v, b u, u): with the printed
//!   comancheria-shaped first block the two R^4 blocks produce different
//!   P^2 scalars (no slant) and signature (3,1) (not neutral).
//! * G15 uses a = tanh(theta), b = 0, the unique b = 0 member of the G14
//!   family with slant angle exactly theta; the printed coefficients square
//!   to a negative radicand as in G07.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::immersion::Immersion;
use crate::slant::{slant_type_from_lambda, SlantType};
use crate::structure::{registry_get, CompatibleStructure, Provenance};
use crate::tolerances::CONSTRAINT_BAND;

type Constants = BTreeMap<String, f64>;
type EvalFn = fn(&[f64], &Constants) -> Vec<f64>;
type JacFn = fn(&[f64], &Constants) -> DMatrix<f64>;
type LambdaFn = fn(&Constants) -> f64;
type TypeFn = fn(&Constants) -> SlantType;
type AdmissibleFn = fn(&Constants) -> std::result::Result<(), String>;

/// One gallery fixture.
#[derive(Clone)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub summary: &'static str,
    /// Registry key of the ambient structure.
    pub structure: &'static str,
    pub variables: &'static [&'static str],
    /// The same components as DSL strings (used for parser cross-checks and
    /// as documentation of the map).
    pub component_exprs: &'static [&'static str],
    pub defaults: &'static [(&'static str, f64)],
    pub domain: &'static [(f64, f64)],
    pub expected_lambda: Option<LambdaFn>,
    pub expected_type: Option<TypeFn>,
    pub admissible: AdmissibleFn,
    /// Uniform sampling boxes for random admissible constants.
    pub sample_ranges: &'static [(&'static str, f64, f64)],
    pub map_provenance: Provenance,
    pub lambda_provenance: Provenance,
    pub type_provenance: Provenance,
    pub enabled: bool,
    pub note: Option<&'static str>,
    eval: EvalFn,
    jac: JacFn,
}

impl std::fmt::Debug for GalleryEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GalleryEntry")
            .field("name", &self.name)
            .field("structure", &self.structure)
            .field("enabled", &self.enabled)
            .finish()
    }
}

impl GalleryEntry {
    pub fn default_constants(&self) -> Constants {
        self.defaults
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect()
    }

    /// The entry's ambient structure, looked up in the registry.
    pub fn ambient(&self) -> Result<CompatibleStructure> {
        Ok(registry_get(self.structure)?.structure)
    }

    /// Immersion at an explicit constant table (must cover the defaults).
    pub fn immersion_from(&self, constants: &Constants) -> Result<Immersion> {
        for (name, _) in self.defaults {
            if !constants.contains_key(*name) {
                return Err(Error::InvalidInput(format!(
                    "gallery entry {} needs constant `{name}`",
                    self.name
                )));
            }
        }
        Immersion::analytic(
            self.name,
            self.variables.len(),
            self.component_exprs.len(),
            self.domain.to_vec(),
            constants.clone(),
            std::sync::Arc::new(self.eval),
            std::sync::Arc::new(self.jac),
        )
    }

    /// Immersion at the defaults with selected overrides.
    pub fn immersion_with(&self, overrides: &[(&str, f64)]) -> Result<Immersion> {
        let mut constants = self.default_constants();
        for (name, value) in overrides {
            if !constants.contains_key(*name) {
                return Err(Error::UnknownParameter(name.to_string()));
            }
            constants.insert(name.to_string(), *value);
        }
        self.immersion_from(&constants)
    }

    /// The same map built from its DSL component strings (finite-difference
    /// Jacobian), for parser agreement tests.
    pub fn dsl_immersion(&self, constants: &Constants) -> Result<Immersion> {
        Immersion::from_expressions(
            format!("{}-dsl", self.name),
            self.variables.iter().map(|s| s.to_string()).collect(),
            self.component_exprs,
            self.domain.to_vec(),
            constants.clone(),
            None,
        )
    }

    /// Draws random constants from the entry's sampling boxes, rejecting
    /// inadmissible draws and draws whose expected lambda sits too close to
    /// a type boundary for the classification to be unambiguous.
    pub fn sample_constants<R: Rng>(&self, rng: &mut R) -> Result<Constants> {
        let eps = self.ambient()?.epsilon();
        for _ in 0..500 {
            let mut constants = self.default_constants();
            for (name, lo, hi) in self.sample_ranges {
                constants.insert(name.to_string(), rng.random_range(*lo..*hi));
            }
            if (self.admissible)(&constants).is_err() {
                continue;
            }
            if let Some(lambda_fn) = self.expected_lambda {
                let lambda = lambda_fn(&constants);
                if !lambda.is_finite() || lambda.abs() > 1e3 {
                    continue;
                }
                let margin = 1e-3;
                let near = |x: f64| x.abs() > 1e-12 && x.abs() < margin;
                if near(lambda) || near(lambda - eps) {
                    continue;
                }
            }
            return Ok(constants);
        }
        Err(Error::InvalidInput(format!(
            "no admissible constants found for {} in 500 draws",
            self.name
        )))
    }
}

fn c(constants: &Constants, name: &str) -> f64 {
    constants[name]
}

fn ok(_: &Constants) -> std::result::Result<(), String> {
    Ok(())
}

const TINY: f64 = CONSTRAINT_BAND;

// --- G01: trig plane pair -------------------------------------------------

fn g01_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    vec![u[0] * a.sin(), u[1] * b.sin(), u[0] * a.cos(), u[1] * b.cos()]
}

fn g01_jac(_u: &[f64], k: &Constants) -> DMatrix<f64> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    DMatrix::from_row_slice(
        4,
        2,
        &[a.sin(), 0.0, 0.0, b.sin(), a.cos(), 0.0, 0.0, b.cos()],
    )
}

fn g01_lambda(k: &Constants) -> f64 {
    (c(k, "a") - c(k, "b")).cos().powi(2)
}

fn g01_type(k: &Constants) -> SlantType {
    let t = g01_lambda(k);
    if t <= TINY {
        SlantType::TotallyReal
    } else if (t - 1.0).abs() <= TINY {
        SlantType::Complex
    } else {
        SlantType::Type2
    }
}

// --- G02: hyperbolic plane pair --------------------------------------------

fn g02_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    vec![
        u[0] * a.sinh(),
        u[1] * b.sinh(),
        u[0] * a.cosh(),
        u[1] * b.cosh(),
    ]
}

fn g02_jac(_u: &[f64], k: &Constants) -> DMatrix<f64> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    DMatrix::from_row_slice(
        4,
        2,
        &[a.sinh(), 0.0, 0.0, b.sinh(), a.cosh(), 0.0, 0.0, b.cosh()],
    )
}

fn g02_lambda(k: &Constants) -> f64 {
    let (a, b) = (c(k, "a"), c(k, "b"));
    (a + b).cosh().powi(2) / ((2.0 * a).cosh() * (2.0 * b).cosh())
}

fn g02_type(k: &Constants) -> SlantType {
    if (c(k, "a") - c(k, "b")).abs() <= TINY {
        SlantType::Complex
    } else {
        SlantType::Type2
    }
}

// --- G03: shear plane -------------------------------------------------------

fn g03_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    vec![a * u[0], u[1], b * u[0], u[1]]
}

fn g03_jac(_u: &[f64], k: &Constants) -> DMatrix<f64> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    DMatrix::from_row_slice(4, 2, &[a, 0.0, 0.0, 1.0, b, 0.0, 0.0, 1.0])
}

fn g03_lambda(k: &Constants) -> f64 {
    let (a, b) = (c(k, "a"), c(k, "b"));
    (a + b).powi(2) / (2.0 * (a * a + b * b))
}

fn g03_type(k: &Constants) -> SlantType {
    let (a, b) = (c(k, "a"), c(k, "b"));
    if (a - b).abs() <= TINY {
        SlantType::Complex
    } else if (a + b).abs() <= TINY {
        SlantType::TotallyReal
    } else {
        SlantType::Type2
    }
}

fn g03_admissible(k: &Constants) -> std::result::Result<(), String> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    if a * a + b * b <= TINY {
        Err("a^2 + b^2 must be nonzero".into())
    } else {
        Ok(())
    }
}

// --- G04: moonlight plane ---------------------------------------------------

fn g04_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    vec![a * u[0], u[1], b * u[0], u[0]]
}

fn g04_jac(_u: &[f64], k: &Constants) -> DMatrix<f64> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    DMatrix::from_row_slice(4, 2, &[a, 0.0, 0.0, 1.0, b, 0.0, 1.0, 0.0])
}

fn g04_lambda(k: &Constants) -> f64 {
    let (a, b) = (c(k, "a"), c(k, "b"));
    a * a / (-1.0 + a * a + b * b)
}

fn g04_type(k: &Constants) -> SlantType {
    let (a, b) = (c(k, "a"), c(k, "b"));
    let s = a * a + b * b;
    if a.abs() <= TINY {
        SlantType::TotallyReal
    } else if s > 1.0 {
        if b * b < 1.0 - TINY {
            SlantType::Type1
        } else if b * b > 1.0 + TINY {
            SlantType::Type2
        } else {
            SlantType::Complex
        }
    } else {
        SlantType::Type3
    }
}

fn g04_admissible(k: &Constants) -> std::result::Result<(), String> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    if (a * a + b * b - 1.0).abs() <= TINY {
        Err("a^2 + b^2 = 1 degenerates the induced metric".into())
    } else {
        Ok(())
    }
}

// --- G05: type-1 angle family (corrected coefficient) -----------------------

fn g05_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let th = c(k, "theta");
    let w = (1.0 - th.sinh().powi(2)).max(0.0).sqrt();
    vec![u[0] * th.cosh(), u[1], u[0] * w, u[0]]
}

fn g05_jac(_u: &[f64], k: &Constants) -> DMatrix<f64> {
    let th = c(k, "theta");
    let w = (1.0 - th.sinh().powi(2)).max(0.0).sqrt();
    DMatrix::from_row_slice(4, 2, &[th.cosh(), 0.0, 0.0, 1.0, w, 0.0, 1.0, 0.0])
}

fn g05_lambda(k: &Constants) -> f64 {
    c(k, "theta").cosh().powi(2)
}

fn g05_type(k: &Constants) -> SlantType {
    if c(k, "theta").abs() <= TINY {
        SlantType::Complex
    } else {
        SlantType::Type1
    }
}

fn g05_admissible(k: &Constants) -> std::result::Result<(), String> {
    let th = c(k, "theta");
    if th.sinh().powi(2) > 1.0 {
        Err(format!(
            "sinh^2(theta) = {:.4} > 1 makes the third coefficient imaginary",
            th.sinh().powi(2)
        ))
    } else {
        Ok(())
    }
}

// --- G06: type-2 angle family (corrected coefficient) -----------------------

fn g06_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let th = c(k, "theta");
    let w = (th.sin().powi(2) + 1.0).sqrt();
    vec![u[0] * th.cos(), u[1], u[0] * w, u[0]]
}

fn g06_jac(_u: &[f64], k: &Constants) -> DMatrix<f64> {
    let th = c(k, "theta");
    let w = (th.sin().powi(2) + 1.0).sqrt();
    DMatrix::from_row_slice(4, 2, &[th.cos(), 0.0, 0.0, 1.0, w, 0.0, 1.0, 0.0])
}

fn g06_lambda(k: &Constants) -> f64 {
    c(k, "theta").cos().powi(2)
}

fn g06_type(k: &Constants) -> SlantType {
    let th = c(k, "theta");
    if th.cos().powi(2) <= TINY {
        SlantType::TotallyReal
    } else if (th.cos().powi(2) - 1.0).abs() <= TINY {
        SlantType::Complex
    } else {
        SlantType::Type2
    }
}

// --- G07: type-3 angle family as printed (not realizable) -------------------

fn g07_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let th = c(k, "theta");
    let w = (1.0 - th.cosh().powi(2)).abs().sqrt();
    vec![u[0] * th.sinh(), u[1], u[0] * w, u[0]]
}

fn g07_jac(_u: &[f64], k: &Constants) -> DMatrix<f64> {
    let th = c(k, "theta");
    let w = (1.0 - th.cosh().powi(2)).abs().sqrt();
    DMatrix::from_row_slice(4, 2, &[th.sinh(), 0.0, 0.0, 1.0, w, 0.0, 1.0, 0.0])
}

fn g07_lambda(k: &Constants) -> f64 {
    // Intended value; the |.|-patched map does not attain it (see note).
    -c(k, "theta").sinh().powi(2)
}

fn g07_admissible(k: &Constants) -> std::result::Result<(), String> {
    let th = c(k, "theta");
    if (2.0 * th.sinh().powi(2) - 1.0).abs() <= TINY {
        Err("2 sinh^2(theta) = 1 degenerates the patched map".into())
    } else {
        Ok(())
    }
}

// --- G08: catenary strip -----------------------------------------------------

fn g08_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let kk = c(k, "k");
    vec![u[0], kk * u[1].cosh(), u[1], kk * u[1].sinh()]
}

fn g08_jac(u: &[f64], k: &Constants) -> DMatrix<f64> {
    let kk = c(k, "k");
    DMatrix::from_row_slice(
        4,
        2,
        &[
            1.0,
            0.0,
            0.0,
            kk * u[1].sinh(),
            0.0,
            1.0,
            0.0,
            kk * u[1].cosh(),
        ],
    )
}

fn g08_lambda(k: &Constants) -> f64 {
    let kk = c(k, "k");
    1.0 / (kk * kk + 1.0)
}

fn g08_type(k: &Constants) -> SlantType {
    if c(k, "k").abs() <= TINY {
        SlantType::Complex
    } else {
        SlantType::Type2
    }
}

// --- G09: logarithmic trig spiral ---------------------------------------------

fn g09_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let kk = c(k, "k");
    let e = (kk * u[0]).exp();
    vec![
        e * u[0].cos() * u[1].cosh(),
        e * u[0].sin() * u[1].cosh(),
        e * u[0].cos() * u[1].sinh(),
        e * u[0].sin() * u[1].sinh(),
    ]
}

fn g09_jac(u: &[f64], k: &Constants) -> DMatrix<f64> {
    let kk = c(k, "k");
    let e = (kk * u[0]).exp();
    let (cu, su) = (u[0].cos(), u[0].sin());
    let (cv, sv) = (u[1].cosh(), u[1].sinh());
    let alpha = kk * cu - su;
    let beta = kk * su + cu;
    DMatrix::from_row_slice(
        4,
        2,
        &[
            e * alpha * cv,
            e * cu * sv,
            e * beta * cv,
            e * su * sv,
            e * alpha * sv,
            e * cu * cv,
            e * beta * sv,
            e * su * cv,
        ],
    )
}

fn g09_lambda(k: &Constants) -> f64 {
    let kk = c(k, "k");
    kk * kk / (1.0 + kk * kk)
}

fn g09_type(_: &Constants) -> SlantType {
    SlantType::Type2
}

fn g09_admissible(k: &Constants) -> std::result::Result<(), String> {
    if c(k, "k").abs() <= TINY {
        Err("k must be nonzero".into())
    } else {
        Ok(())
    }
}

// --- G10: logarithmic hyperbolic spiral (totally real) ------------------------

fn g10_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let kk = c(k, "k");
    let e = (kk * u[0]).exp();
    vec![
        e * u[0].cosh() * u[1].cos(),
        e * u[0].sinh() * u[1].cos(),
        e * u[0].cosh() * u[1].sin(),
        e * u[0].sinh() * u[1].sin(),
    ]
}

fn g10_jac(u: &[f64], k: &Constants) -> DMatrix<f64> {
    let kk = c(k, "k");
    let e = (kk * u[0]).exp();
    let (cu, su) = (u[0].cosh(), u[0].sinh());
    let (cv, sv) = (u[1].cos(), u[1].sin());
    let alpha = kk * cu + su;
    let beta = kk * su + cu;
    DMatrix::from_row_slice(
        4,
        2,
        &[
            e * alpha * cv,
            -e * cu * sv,
            e * beta * cv,
            -e * su * sv,
            e * alpha * sv,
            e * cu * cv,
            e * beta * sv,
            e * su * cv,
        ],
    )
}

fn g10_lambda(_: &Constants) -> f64 {
    0.0
}

fn g10_type(_: &Constants) -> SlantType {
    SlantType::TotallyReal
}

fn g10_admissible(k: &Constants) -> std::result::Result<(), String> {
    let kk = c(k, "k");
    if (kk * kk - 1.0).abs() <= TINY {
        Err("k^2 = 1 makes the u-direction light-like everywhere".into())
    } else {
        Ok(())
    }
}

// --- G11: ruled plane under both 4d structures --------------------------------

fn g11_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    vec![u[0], a * u[1], b * u[1], u[1]]
}

fn g11_jac(_u: &[f64], k: &Constants) -> DMatrix<f64> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 0.0, a, 0.0, b, 0.0, 1.0])
}

fn g11a_lambda(k: &Constants) -> f64 {
    let (a, b) = (c(k, "a"), c(k, "b"));
    b * b / (1.0 - a * a + b * b)
}

fn g11a_type(k: &Constants) -> SlantType {
    let (a, b) = (c(k, "a"), c(k, "b"));
    if b.abs() <= TINY {
        SlantType::TotallyReal
    } else if a * a - b * b < 1.0 {
        if a * a > 1.0 + TINY {
            SlantType::Type1
        } else if a * a < 1.0 - TINY {
            SlantType::Type2
        } else {
            SlantType::Complex
        }
    } else {
        SlantType::Type3
    }
}

fn g11a_admissible(k: &Constants) -> std::result::Result<(), String> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    if (a * a - b * b - 1.0).abs() <= TINY {
        Err("a^2 - b^2 = 1 degenerates the induced metric".into())
    } else {
        Ok(())
    }
}

fn g11b_lambda(k: &Constants) -> f64 {
    let (a, b) = (c(k, "a"), c(k, "b"));
    a * a / (1.0 + a * a - b * b)
}

/// Regions consistent with the printed lambda formula: the type-1/type-2
/// boundary is b^2 = 1 (the printed list repeats a^2 from the sibling
/// variant; tests assert the contradiction).
fn g11b_type(k: &Constants) -> SlantType {
    let (a, b) = (c(k, "a"), c(k, "b"));
    if a.abs() <= TINY {
        SlantType::TotallyReal
    } else if b * b - a * a < 1.0 {
        if b * b > 1.0 + TINY {
            SlantType::Type1
        } else if b * b < 1.0 - TINY {
            SlantType::Type2
        } else {
            SlantType::Complex
        }
    } else {
        SlantType::Type3
    }
}

fn g11b_admissible(k: &Constants) -> std::result::Result<(), String> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    if (b * b - a * a - 1.0).abs() <= TINY {
        Err("b^2 - a^2 = 1 degenerates the induced metric".into())
    } else {
        Ok(())
    }
}

// --- G12: catenary strip in the third structure --------------------------------

fn g12_lambda(k: &Constants) -> f64 {
    let kk = c(k, "k");
    1.0 / (1.0 - kk * kk)
}

fn g12_type(k: &Constants) -> SlantType {
    let kk = c(k, "k");
    if kk.abs() <= TINY {
        SlantType::Complex
    } else if kk * kk > 1.0 {
        SlantType::Type3
    } else {
        SlantType::Type1
    }
}

fn g12_admissible(k: &Constants) -> std::result::Result<(), String> {
    let kk = c(k, "k");
    if (kk * kk - 1.0).abs() <= TINY {
        Err("k^2 = 1 degenerates the induced metric".into())
    } else {
        Ok(())
    }
}

// --- G13: exponential hyperbolic sheet ------------------------------------------

fn g13_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let kk = c(k, "k");
    let e = (kk * u[0]).exp();
    vec![
        e * u[0].cosh() * u[1].cosh(),
        e * u[0].sinh() * u[1].cosh(),
        e * u[0].cosh() * u[1].sinh(),
        e * u[0].sinh() * u[1].sinh(),
    ]
}

fn g13_jac(u: &[f64], k: &Constants) -> DMatrix<f64> {
    let kk = c(k, "k");
    let e = (kk * u[0]).exp();
    let (cu, su) = (u[0].cosh(), u[0].sinh());
    let (cv, sv) = (u[1].cosh(), u[1].sinh());
    let alpha = kk * cu + su;
    let beta = kk * su + cu;
    DMatrix::from_row_slice(
        4,
        2,
        &[
            e * alpha * cv,
            e * cu * sv,
            e * beta * cv,
            e * su * sv,
            e * alpha * sv,
            e * cu * cv,
            e * beta * sv,
            e * su * cv,
        ],
    )
}

fn g13_lambda(k: &Constants) -> f64 {
    let kk = c(k, "k");
    kk * kk / (kk * kk - 1.0)
}

fn g13_type(k: &Constants) -> SlantType {
    let kk = c(k, "k");
    if kk.abs() <= TINY {
        SlantType::TotallyReal
    } else if kk * kk > 1.0 {
        SlantType::Type1
    } else {
        SlantType::Type3
    }
}

// --- G14: neutral type-3 block pair ----------------------------------------------

fn g14_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    let w = (2.0 - b * b).sqrt();
    vec![
        a * u[0],
        u[1],
        b * u[0],
        u[0],
        u[2],
        a * u[3],
        w * u[3],
        u[3],
    ]
}

fn g14_jac(_u: &[f64], k: &Constants) -> DMatrix<f64> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    let w = (2.0 - b * b).sqrt();
    let mut jac = DMatrix::zeros(8, 4);
    jac[(0, 0)] = a;
    jac[(2, 0)] = b;
    jac[(3, 0)] = 1.0;
    jac[(1, 1)] = 1.0;
    jac[(4, 2)] = 1.0;
    jac[(5, 3)] = a;
    jac[(6, 3)] = w;
    jac[(7, 3)] = 1.0;
    jac
}

fn g14_lambda(k: &Constants) -> f64 {
    g04_lambda(k)
}

fn g14_type(k: &Constants) -> SlantType {
    if c(k, "a").abs() <= TINY {
        SlantType::TotallyReal
    } else {
        SlantType::Type3
    }
}

fn g14_admissible(k: &Constants) -> std::result::Result<(), String> {
    let (a, b) = (c(k, "a"), c(k, "b"));
    if a * a + b * b >= 1.0 - TINY {
        Err("requires a^2 + b^2 < 1".into())
    } else {
        Ok(())
    }
}

// --- G15: neutral type-3 angle family ----------------------------------------------

fn g15_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let a = c(k, "theta").tanh();
    vec![
        a * u[0],
        u[1],
        0.0,
        u[0],
        u[2],
        a * u[3],
        2.0f64.sqrt() * u[3],
        u[3],
    ]
}

fn g15_jac(_u: &[f64], k: &Constants) -> DMatrix<f64> {
    let a = c(k, "theta").tanh();
    let mut jac = DMatrix::zeros(8, 4);
    jac[(0, 0)] = a;
    jac[(3, 0)] = 1.0;
    jac[(1, 1)] = 1.0;
    jac[(4, 2)] = 1.0;
    jac[(5, 3)] = a;
    jac[(6, 3)] = 2.0f64.sqrt();
    jac[(7, 3)] = 1.0;
    jac
}

fn g15_lambda(k: &Constants) -> f64 {
    -c(k, "theta").sinh().powi(2)
}

fn g15_type(k: &Constants) -> SlantType {
    if c(k, "theta").abs() <= TINY {
        SlantType::TotallyReal
    } else {
        SlantType::Type3
    }
}

fn g15_admissible(k: &Constants) -> std::result::Result<(), String> {
    if c(k, "theta") <= TINY {
        Err("theta must be positive".into())
    } else {
        Ok(())
    }
}

// --- G16: tilted plane in the genuine Norden structure ------------------------------

fn g16_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let beta = c(k, "beta");
    vec![u[0], u[1] * beta.cos(), u[1] * beta.sin(), 0.0]
}

fn g16_jac(_u: &[f64], k: &Constants) -> DMatrix<f64> {
    let beta = c(k, "beta");
    DMatrix::from_row_slice(
        4,
        2,
        &[1.0, 0.0, 0.0, beta.cos(), 0.0, beta.sin(), 0.0, 0.0],
    )
}

fn g16_lambda(k: &Constants) -> f64 {
    let csq = c(k, "beta").cos().powi(2);
    -csq / (2.0 * csq - 1.0)
}

fn g16_type(k: &Constants) -> SlantType {
    slant_type_from_lambda(-1.0, g16_lambda(k))
}

fn g16_admissible(k: &Constants) -> std::result::Result<(), String> {
    let csq = c(k, "beta").cos().powi(2);
    if (2.0 * csq - 1.0).abs() <= TINY {
        Err("cos^2(beta) = 1/2 degenerates the induced metric".into())
    } else {
        Ok(())
    }
}

// --- G17: hyperbolic tilted plane in the genuine Norden structure ---------------------

fn g17_eval(u: &[f64], k: &Constants) -> Vec<f64> {
    let alpha = c(k, "alpha");
    vec![u[0], u[1] * alpha.cosh(), 0.0, u[1] * alpha.sinh()]
}

fn g17_jac(_u: &[f64], k: &Constants) -> DMatrix<f64> {
    let alpha = c(k, "alpha");
    DMatrix::from_row_slice(
        4,
        2,
        &[1.0, 0.0, 0.0, alpha.cosh(), 0.0, 0.0, 0.0, alpha.sinh()],
    )
}

fn g17_lambda(k: &Constants) -> f64 {
    let csq = c(k, "alpha").cosh().powi(2);
    -csq / (2.0 * csq - 1.0)
}

fn g17_type(k: &Constants) -> SlantType {
    slant_type_from_lambda(-1.0, g17_lambda(k))
}

/// All built-in fixtures, G01 through G17 (G11 appears once per ambient).
pub fn gallery() -> Vec<GalleryEntry> {
    use Provenance::{Derived, Paper};
    vec![
        GalleryEntry {
            name: "G01",
            summary: "(u sin a, v sin b, u cos a, v cos b); lambda = cos^2(a-b)",
            structure: "S1",
            variables: &["u", "v"],
            component_exprs: &["u*sin(a)", "v*sin(b)", "u*cos(a)", "v*cos(b)"],
            defaults: &[("a", 1.2), ("b", 0.4)],
            domain: &[(-2.0, 2.0), (-2.0, 2.0)],
            expected_lambda: Some(g01_lambda),
            expected_type: Some(g01_type),
            admissible: ok,
            sample_ranges: &[("a", 0.2, 1.4), ("b", -0.5, 0.5)],
            map_provenance: Paper,
            lambda_provenance: Paper,
            type_provenance: Paper,
            enabled: true,
            note: None,
            eval: g01_eval,
            jac: g01_jac,
        },
        GalleryEntry {
            name: "G02",
            summary: "(u sinh a, v sinh b, u cosh a, v cosh b); lambda = cosh^2(a+b)/(cosh 2a cosh 2b)",
            structure: "S1",
            variables: &["u", "v"],
            component_exprs: &["u*sinh(a)", "v*sinh(b)", "u*cosh(a)", "v*cosh(b)"],
            defaults: &[("a", 0.8), ("b", 0.3)],
            domain: &[(-2.0, 2.0), (-2.0, 2.0)],
            expected_lambda: Some(g02_lambda),
            expected_type: Some(g02_type),
            admissible: ok,
            sample_ranges: &[("a", 0.2, 1.2), ("b", -0.8, 0.8)],
            map_provenance: Paper,
            lambda_provenance: Paper,
            type_provenance: Paper,
            enabled: true,
            note: None,
            eval: g02_eval,
            jac: g02_jac,
        },
        GalleryEntry {
            name: "G03",
            summary: "(a u, v, b u, v); lambda = (a+b)^2 / (2(a^2+b^2))",
            structure: "S1",
            variables: &["u", "v"],
            component_exprs: &["a*u", "v", "b*u", "v"],
            defaults: &[("a", 2.0), ("b", 0.5)],
            domain: &[(-2.0, 2.0), (-2.0, 2.0)],
            expected_lambda: Some(g03_lambda),
            expected_type: Some(g03_type),
            admissible: g03_admissible,
            sample_ranges: &[("a", 0.3, 2.0), ("b", 0.3, 2.0)],
            map_provenance: Paper,
            lambda_provenance: Paper,
            type_provenance: Paper,
            enabled: true,
            note: None,
            eval: g03_eval,
            jac: g03_jac,
        },
        GalleryEntry {
            name: "G04",
            summary: "(a u, v, b u, u); lambda = a^2/(-1+a^2+b^2), three type regions",
            structure: "S1",
            variables: &["u", "v"],
            component_exprs: &["a*u", "v", "b*u", "u"],
            defaults: &[("a", 2.0), ("b", 0.0)],
            domain: &[(-2.0, 2.0), (-2.0, 2.0)],
            expected_lambda: Some(g04_lambda),
            expected_type: Some(g04_type),
            admissible: g04_admissible,
            sample_ranges: &[("a", 0.2, 2.5), ("b", 0.0, 1.8)],
            map_provenance: Paper,
            lambda_provenance: Paper,
            type_provenance: Paper,
            enabled: true,
            note: None,
            eval: g04_eval,
            jac: g04_jac,
        },
        GalleryEntry {
            name: "G05",
            summary: "(u cosh t, v, u sqrt(1-sinh^2 t), u); lambda = cosh^2 t, type 1",
            structure: "S1",
            variables: &["u", "v"],
            component_exprs: &["u*cosh(theta)", "v", "u*sqrt(1 - sinh(theta)^2)", "u"],
            defaults: &[("theta", 0.5)],
            domain: &[(-2.0, 2.0), (-2.0, 2.0)],
            expected_lambda: Some(g05_lambda),
            expected_type: Some(g05_type),
            admissible: g05_admissible,
            sample_ranges: &[("theta", 0.1, 0.85)],
            map_provenance: Derived,
            lambda_provenance: Derived,
            type_provenance: Derived,
            enabled: true,
            note: Some(
                "coefficient corrected from cosh^2(theta) to cosh(theta); the squared \
                 form contradicts the G04 lambda formula this family instantiates",
            ),
            eval: g05_eval,
            jac: g05_jac,
        },
        GalleryEntry {
            name: "G06",
            summary: "(u cos t, v, u sqrt(sin^2 t + 1), u); lambda = cos^2 t, type 2",
            structure: "S1",
            variables: &["u", "v"],
            component_exprs: &["u*cos(theta)", "v", "u*sqrt(sin(theta)^2 + 1)", "u"],
            defaults: &[("theta", 0.6)],
            domain: &[(-2.0, 2.0), (-2.0, 2.0)],
            expected_lambda: Some(g06_lambda),
            expected_type: Some(g06_type),
            admissible: ok,
            sample_ranges: &[("theta", 0.15, 1.4)],
            map_provenance: Derived,
            lambda_provenance: Derived,
            type_provenance: Derived,
            enabled: true,
            note: Some("coefficient corrected from cos^2(theta) to cos(theta), as in G05"),
            eval: g06_eval,
            jac: g06_jac,
        },
        GalleryEntry {
            name: "G07",
            summary: "(u sinh t, v, u sqrt(1-cosh^2 t), u): radicand negative for t > 0",
            structure: "S1",
            variables: &["u", "v"],
            component_exprs: &["u*sinh(theta)", "v", "u*sqrt(abs(1 - cosh(theta)^2))", "u"],
            defaults: &[("theta", 0.5)],
            domain: &[(-2.0, 2.0), (-2.0, 2.0)],
            expected_lambda: Some(g07_lambda),
            expected_type: None,
            admissible: g07_admissible,
            sample_ranges: &[("theta", 0.2, 0.55)],
            map_provenance: Derived,
            lambda_provenance: Derived,
            type_provenance: Derived,
            enabled: false,
            note: Some(
                "disabled: 1 - cosh^2(theta) < 0 for every theta > 0, so the printed \
                 surface does not exist over the reals; the |.|-patched map shipped here \
                 does not attain the intended lambda = -sinh^2(theta) (see G15 for a \
                 realizable neutral type-3 angle family)",
            ),
            eval: g07_eval,
            jac: g07_jac,
        },
        GalleryEntry {
            name: "G08",
            summary: "(u, k cosh v, v, k sinh v); lambda = 1/(k^2+1)",
            structure: "S2",
            variables: &["u", "v"],
            component_exprs: &["u", "k*cosh(v)", "v", "k*sinh(v)"],
            defaults: &[("k", 1.0)],
            domain: &[(-2.0, 2.0), (-2.0, 2.0)],
            expected_lambda: Some(g08_lambda),
            expected_type: Some(g08_type),
            admissible: ok,
            sample_ranges: &[("k", 0.4, 2.5)],
            map_provenance: Paper,
            lambda_provenance: Paper,
            type_provenance: Paper,
            enabled: true,
            note: None,
            eval: g08_eval,
            jac: g08_jac,
        },
        GalleryEntry {
            name: "G09",
            summary: "e^{ku} (cos u cosh v, sin u cosh v, cos u sinh v, sin u sinh v); lambda = k^2/(1+k^2)",
            structure: "S2",
            variables: &["u", "v"],
            component_exprs: &[
                "exp(k*u)*cos(u)*cosh(v)",
                "exp(k*u)*sin(u)*cosh(v)",
                "exp(k*u)*cos(u)*sinh(v)",
                "exp(k*u)*sin(u)*sinh(v)",
            ],
            defaults: &[("k", 1.0)],
            domain: &[(-0.75, 0.75), (-0.75, 0.75)],
            expected_lambda: Some(g09_lambda),
            expected_type: Some(g09_type),
            admissible: g09_admissible,
            sample_ranges: &[("k", 0.3, 2.0)],
            map_provenance: Paper,
            lambda_provenance: Paper,
            type_provenance: Paper,
            enabled: true,
            note: None,
            eval: g09_eval,
            jac: g09_jac,
        },
        GalleryEntry {
            name: "G10",
            summary: "e^{ku} (cosh u cos v, sinh u cos v, cosh u sin v, sinh u sin v); totally real",
            structure: "S1",
            variables: &["u", "v"],
            component_exprs: &[
                "exp(k*u)*cosh(u)*cos(v)",
                "exp(k*u)*sinh(u)*cos(v)",
                "exp(k*u)*cosh(u)*sin(v)",
                "exp(k*u)*sinh(u)*sin(v)",
            ],
            defaults: &[("k", 0.5)],
            domain: &[(-0.75, 0.75), (-0.75, 0.75)],
            expected_lambda: Some(g10_lambda),
            expected_type: Some(g10_type),
            admissible: g10_admissible,
            sample_ranges: &[("k", 0.3, 0.9)],
            map_provenance: Paper,
            lambda_provenance: Paper,
            type_provenance: Paper,
            enabled: true,
            note: Some(
                "registered under S1, where P vanishes identically; under S2 the same \
                 map is not totally real (tests record both)",
            ),
            eval: g10_eval,
            jac: g10_jac,
        },
        GalleryEntry {
            name: "G11a",
            summary: "(u, a v, b v, v) under S2; lambda = b^2/(1-a^2+b^2)",
            structure: "S2",
            variables: &["u", "v"],
            component_exprs: &["u", "a*v", "b*v", "v"],
            defaults: &[("a", 0.5), ("b", 0.7)],
            domain: &[(-2.0, 2.0), (-2.0, 2.0)],
            expected_lambda: Some(g11a_lambda),
            expected_type: Some(g11a_type),
            admissible: g11a_admissible,
            sample_ranges: &[("a", 0.2, 1.8), ("b", 0.2, 1.8)],
            map_provenance: Paper,
            lambda_provenance: Paper,
            type_provenance: Paper,
            enabled: true,
            note: None,
            eval: g11_eval,
            jac: g11_jac,
        },
        GalleryEntry {
            name: "G11b",
            summary: "(u, a v, b v, v) under S1; lambda = a^2/(1+a^2-b^2)",
            structure: "S1",
            variables: &["u", "v"],
            component_exprs: &["u", "a*v", "b*v", "v"],
            defaults: &[("a", 0.5), ("b", 0.7)],
            domain: &[(-2.0, 2.0), (-2.0, 2.0)],
            expected_lambda: Some(g11b_lambda),
            expected_type: Some(g11b_type),
            admissible: g11b_admissible,
            sample_ranges: &[("a", 0.2, 1.8), ("b", 0.2, 1.8)],
            map_provenance: Paper,
            lambda_provenance: Paper,
            type_provenance: Derived,
            enabled: true,
            note: Some(
                "type regions follow the printed lambda formula (boundary b^2 = 1); \
                 the printed region list reuses a^2 from the S2 variant and contradicts \
                 the formula, which tests assert",
            ),
            eval: g11_eval,
            jac: g11_jac,
        },
        GalleryEntry {
            name: "G12",
            summary: "(u, k cosh v, v, k sinh v) under S3; lambda = 1/(1-k^2), time-like type 3 for k > 1",
            structure: "S3",
            variables: &["u", "v"],
            component_exprs: &["u", "k*cosh(v)", "v", "k*sinh(v)"],
            defaults: &[("k", 1.5)],
            domain: &[(-2.0, 2.0), (-2.0, 2.0)],
            expected_lambda: Some(g12_lambda),
            expected_type: Some(g12_type),
            admissible: g12_admissible,
            sample_ranges: &[("k", 1.1, 3.0)],
            map_provenance: Paper,
            lambda_provenance: Paper,
            type_provenance: Paper,
            enabled: true,
            note: None,
            eval: g08_eval,
            jac: g08_jac,
        },
        GalleryEntry {
            name: "G13",
            summary: "e^{ku} (cosh u cosh v, ...); lambda = k^2/(k^2-1); type 1 for k > 1, space-like type 3 for k < 1",
            structure: "S3",
            variables: &["u", "v"],
            component_exprs: &[
                "exp(k*u)*cosh(u)*cosh(v)",
                "exp(k*u)*sinh(u)*cosh(v)",
                "exp(k*u)*cosh(u)*sinh(v)",
                "exp(k*u)*sinh(u)*sinh(v)",
            ],
            defaults: &[("k", 1.5)],
            domain: &[(-0.75, 0.75), (-0.75, 0.75)],
            expected_lambda: Some(g13_lambda),
            expected_type: Some(g13_type),
            admissible: g12_admissible,
            sample_ranges: &[("k", 0.15, 2.5)],
            map_provenance: Paper,
            lambda_provenance: Paper,
            type_provenance: Paper,
            enabled: true,
            note: Some(
                "registered under S3 = (J1, g2): under the printed (J, g2) pairing the \
                 map is totally real and never attains the printed lambda (a test \
                 records that)",
            ),
            eval: g13_eval,
            jac: g13_jac,
        },
        GalleryEntry {
            name: "G14",
            summary: "moonlight block (+) adjusted ruled block on R^8; neutral type 3, lambda = a^2/(-1+a^2+b^2)",
            structure: "S7",
            variables: &["u", "v", "z", "t"],
            component_exprs: &[
                "a*u", "v", "b*u", "u", "z", "a*t", "sqrt(2 - b^2)*t", "t",
            ],
            defaults: &[("a", 0.5), ("b", 0.5)],
            domain: &[(-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)],
            expected_lambda: Some(g14_lambda),
            expected_type: Some(g14_type),
            admissible: g14_admissible,
            sample_ranges: &[("a", 0.1, 0.9), ("b", 0.0, 0.9)],
            map_provenance: Derived,
            lambda_provenance: Paper,
            type_provenance: Paper,
            enabled: true,
            note: Some(
                "first block corrected to the moonlight shape (a u, v, b u, u): with the \
                 printed ruled-plane first block the two R^4 blocks give different P^2 \
                 scalars (not slant) and signature (3,1) (not neutral); tests assert both",
            ),
            eval: g14_eval,
            jac: g14_jac,
        },
        GalleryEntry {
            name: "G15",
            summary: "G14 family at a = tanh(theta), b = 0; neutral type 3 with slant angle theta",
            structure: "S7",
            variables: &["u", "v", "z", "t"],
            component_exprs: &[
                "tanh(theta)*u",
                "v",
                "0",
                "u",
                "z",
                "tanh(theta)*t",
                "sqrt(2)*t",
                "t",
            ],
            defaults: &[("theta", 0.8)],
            domain: &[(-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)],
            expected_lambda: Some(g15_lambda),
            expected_type: Some(g15_type),
            admissible: g15_admissible,
            sample_ranges: &[("theta", 0.3, 1.5)],
            map_provenance: Derived,
            lambda_provenance: Derived,
            type_provenance: Derived,
            enabled: true,
            note: Some(
                "printed coefficients (sinh^2 theta, sqrt(1-cosh^2 theta)) have a negative \
                 radicand as in G07; a = tanh(theta), b = 0 is the unique b = 0 member of \
                 the G14 family with lambda = -sinh^2(theta) exactly",
            ),
            eval: g15_eval,
            jac: g15_jac,
        },
        GalleryEntry {
            name: "G16",
            summary: "u e1 + v (cos b e2 + sin b e3) in the Norden structure S6; lambda = -cos^2 b/(2cos^2 b - 1)",
            structure: "S6",
            variables: &["u", "v"],
            component_exprs: &["u", "v*cos(beta)", "v*sin(beta)", "0"],
            defaults: &[("beta", 0.684719203002283)],
            domain: &[(-2.0, 2.0), (-2.0, 2.0)],
            expected_lambda: Some(g16_lambda),
            expected_type: Some(g16_type),
            admissible: g16_admissible,
            sample_ranges: &[("beta", 0.15, 1.4)],
            map_provenance: Derived,
            lambda_provenance: Derived,
            type_provenance: Derived,
            enabled: true,
            note: None,
            eval: g16_eval,
            jac: g16_jac,
        },
        GalleryEntry {
            name: "G17",
            summary: "u e1 + v (cosh a e2 + sinh a e4) in S6; lambda = -cosh^2 a / cosh 2a, type 2",
            structure: "S6",
            variables: &["u", "v"],
            component_exprs: &["u", "v*cosh(alpha)", "0", "v*sinh(alpha)"],
            defaults: &[("alpha", 0.881373587019543)],
            domain: &[(-2.0, 2.0), (-2.0, 2.0)],
            expected_lambda: Some(g17_lambda),
            expected_type: Some(g17_type),
            admissible: ok,
            sample_ranges: &[("alpha", 0.2, 1.5)],
            map_provenance: Derived,
            lambda_provenance: Derived,
            type_provenance: Derived,
            enabled: true,
            note: None,
            eval: g17_eval,
            jac: g17_jac,
        },
    ]
}

/// Looks a fixture up by name.
pub fn gallery_get(name: &str) -> Result<GalleryEntry> {
    gallery()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownGalleryEntry(name.to_string()))
}
