//! The tangential operator P and the slant classification.
//!
//! For a tangent frame B at a point of an immersed submanifold, applying the
//! ambient structure J to a tangent vector splits into a tangential part and
//! a normal part, `J X = P X + F X`, and applying it to a normal vector
//! splits as `J V = t V + f V`. In frame coordinates,
//!
//! ```text
//! P = G^-1 B^t g J B,        F = J B - B P,
//! ```
//!
//! with G the induced Gram matrix, and t, f obtained by projecting `J N`
//! onto the frame and the normal frame respectively.
//!
//! The submanifold is slant exactly when `P^2 = lambda * Id` for a constant
//! lambda; the sign and size of lambda against eps (the sign in
//! `J^2 = eps I`) decide the type:
//!
//! * eps = -1: complex at lambda = -1, type 2 on (-1, 0), totally real at 0,
//!   type 1 below -1, type 3 above 0;
//! * eps = +1: complex (invariant) at lambda = +1, type 2 on (0, 1), totally
//!   real at 0, type 1 above +1, type 3 below 0.
//!
//! Because `J^2 = eps I` splits over the tangent/normal decomposition, four
//! matrix identities hold for *every* immersion at every non-degenerate
//! point, slant or not:
//!
//! ```text
//! t F + P^2 = eps I          (tangent part of J^2)
//! f^2 + F t = eps I          (normal part of J^2)
//! F P + f F = 0              (mixed part)
//! (G P)^t  = sigma eps (G P) (signed g-self-adjointness of P)
//! ```
//!
//! where F in the last three lines is expressed in normal-frame coordinates
//! and sigma is the compatibility sign of the structure. These are the
//! runtime cross-checks behind `identity_checks`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::immersion::Immersion;
use crate::semiriemann::{normal_frame, tangential_projection, TangentFrame};
use crate::structure::{Compatibility, CompatibleStructure};
use crate::tolerances::{
    ETA_BOUNDARY, MAX_DEGENERATE_FRACTION, TAU_LIGHTLIKE, TOL_CONST, TOL_RES_BASE,
};

/// P, F, t, f at one parameter point.
#[derive(Debug, Clone)]
pub struct OperatorDecomposition {
    pub frame: TangentFrame,
    /// Tangential operator in frame coordinates (k x k).
    pub p: DMatrix<f64>,
    /// Normal-valued part of J on tangent vectors, ambient coordinates (n x k).
    pub f_ambient: DMatrix<f64>,
    /// The same F expressed in the normal frame ((n-k) x k).
    pub f_coords: DMatrix<f64>,
    /// Basis of the g-orthogonal complement (n x (n-k)).
    pub normal: DMatrix<f64>,
    /// Tangential part of J on normal vectors, frame coordinates (k x (n-k)).
    pub t: DMatrix<f64>,
    /// Normal part of J on normal vectors, normal-frame coordinates ((n-k) x (n-k)).
    pub f_perp: DMatrix<f64>,
}

/// Computes the full decomposition at `u`. Fails with `DegenerateFrame` when
/// the induced metric is singular there.
pub fn operators_at(
    imm: &Immersion,
    structure: &CompatibleStructure,
    u: &[f64],
) -> Result<OperatorDecomposition> {
    if imm.ambient_dim() != structure.dim() {
        return Err(Error::DimensionMismatch(format!(
            "immersion `{}` has ambient dimension {}, structure has {}",
            imm.name,
            imm.ambient_dim(),
            structure.dim()
        )));
    }
    let g = structure.metric();
    let basis = imm.jacobian(u)?;
    let frame = TangentFrame::new(g, u.to_vec(), basis)?;
    let k = frame.param_count();
    let n = frame.ambient_dim();

    let jb = structure.j() * &frame.basis;
    let mut p = DMatrix::zeros(k, k);
    let mut f_ambient = DMatrix::zeros(n, k);
    for col in 0..k {
        let w = DVector::from_column_slice(jb.column(col).as_slice());
        let (coeffs, residual) = tangential_projection(g, &frame, &w)?;
        p.set_column(col, &coeffs);
        f_ambient.set_column(col, &residual);
    }

    let normal = normal_frame(g, &frame)?;
    let normal_frame_t = TangentFrame::new(g, u.to_vec(), normal.clone())?;

    // F in normal coordinates: solve G_N F_coords = N^t g F.
    let mut f_coords = DMatrix::zeros(n - k, k);
    for col in 0..k {
        let w = DVector::from_column_slice(f_ambient.column(col).as_slice());
        let (coeffs, _) = tangential_projection(g, &normal_frame_t, &w)?;
        f_coords.set_column(col, &coeffs);
    }

    // J N splits as B t + N f.
    let jn = structure.j() * &normal;
    let mut t = DMatrix::zeros(k, n - k);
    let mut f_perp = DMatrix::zeros(n - k, n - k);
    for col in 0..(n - k) {
        let w = DVector::from_column_slice(jn.column(col).as_slice());
        let (tang, residual) = tangential_projection(g, &frame, &w)?;
        t.set_column(col, &tang);
        let (norm_coeffs, _) = tangential_projection(g, &normal_frame_t, &residual)?;
        f_perp.set_column(col, &norm_coeffs);
    }

    Ok(OperatorDecomposition {
        frame,
        p,
        f_ambient,
        f_coords,
        normal,
        t,
        f_perp,
    })
}

/// Scalarity estimate for P^2: the pair `(trace(P^2)/k, |P^2 - that * I|_max)`.
pub fn lambda_at(decomp: &OperatorDecomposition) -> (f64, f64) {
    let k = decomp.p.nrows();
    let p_sq = &decomp.p * &decomp.p;
    let lambda = p_sq.trace() / k as f64;
    let residual = (&p_sq - DMatrix::identity(k, k) * lambda).amax();
    (lambda, residual)
}

/// Residuals of the four exact operator identities, with the scale used for
/// relative comparison.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IdentityReport {
    /// `|t F + P^2 - eps I|_max` on the tangent space.
    pub tangent_square: f64,
    /// `|f^2 + F t - eps I|_max` on the normal space.
    pub normal_square: f64,
    /// `|F P + f F|_max` (mixed part of J^2).
    pub mixed: f64,
    /// `|(G P)^t - sigma eps (G P)|_max` (signed self-adjointness).
    pub self_adjointness: f64,
    /// `max(1, |P|, |t|, |f|, |F|, |G|)` in max norm.
    pub scale: f64,
}

impl IdentityReport {
    pub fn max_relative(&self) -> f64 {
        self.tangent_square
            .max(self.normal_square)
            .max(self.mixed)
            .max(self.self_adjointness)
            / self.scale
    }
}

/// Evaluates the four identities of the module docs at one decomposition.
pub fn identity_checks(
    decomp: &OperatorDecomposition,
    structure: &CompatibleStructure,
) -> IdentityReport {
    let eps = structure.epsilon();
    let sigma = match structure.compatibility() {
        Compatibility::Isometry => 1.0,
        Compatibility::AntiIsometry => -1.0,
    };
    let k = decomp.p.nrows();
    let m = decomp.f_perp.nrows();
    let eye_k = DMatrix::<f64>::identity(k, k);
    let eye_m = DMatrix::<f64>::identity(m, m);

    let tangent_square = (&decomp.t * &decomp.f_coords + &decomp.p * &decomp.p - &eye_k * eps).amax();
    let normal_square =
        (&decomp.f_perp * &decomp.f_perp + &decomp.f_coords * &decomp.t - &eye_m * eps).amax();
    let mixed = (&decomp.f_coords * &decomp.p + &decomp.f_perp * &decomp.f_coords).amax();
    let gp = &decomp.frame.gram * &decomp.p;
    let self_adjointness = (gp.transpose() - sigma * eps * &gp).amax();

    let scale = [
        1.0,
        decomp.p.amax(),
        decomp.t.amax(),
        decomp.f_perp.amax(),
        decomp.f_coords.amax(),
        decomp.frame.gram.amax(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    IdentityReport {
        tangent_square,
        normal_square,
        mixed,
        self_adjointness,
        scale,
    }
}

/// Slant taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlantType {
    /// `P^2 = eps I`: the tangent space is J-invariant.
    Complex,
    /// `P = 0`: J maps tangent vectors into the normal space.
    TotallyReal,
    Type1,
    Type2,
    Type3,
    /// `P^2` is not a constant scalar matrix over the sampled domain.
    NonSlant,
}

impl SlantType {
    pub fn label(self) -> &'static str {
        match self {
            SlantType::Complex => "complex",
            SlantType::TotallyReal => "totally-real",
            SlantType::Type1 => "type1",
            SlantType::Type2 => "type2",
            SlantType::Type3 => "type3",
            SlantType::NonSlant => "non-slant",
        }
    }
}

/// Maps a constant lambda to its slant type for the given eps sign, using
/// the boundary band around 0 and eps.
pub fn slant_type_from_lambda(eps: f64, lambda: f64) -> SlantType {
    let eta = ETA_BOUNDARY;
    if lambda.abs() <= eta {
        return SlantType::TotallyReal;
    }
    if (lambda - eps).abs() <= eta {
        return SlantType::Complex;
    }
    if eps < 0.0 {
        if lambda < -1.0 {
            SlantType::Type1
        } else if lambda < 0.0 {
            SlantType::Type2
        } else {
            SlantType::Type3
        }
    } else if lambda > 1.0 {
        SlantType::Type1
    } else if lambda > 0.0 {
        SlantType::Type2
    } else {
        SlantType::Type3
    }
}

/// The slant angle for a proper type, from the convention-matched maps:
/// type 1 -> arccosh sqrt(|lambda|), type 2 -> arccos sqrt(|lambda|),
/// type 3 -> arcsinh sqrt(|lambda|).
pub fn slant_angle(slant_type: SlantType, lambda: f64) -> Option<f64> {
    let r = lambda.abs().sqrt();
    match slant_type {
        SlantType::Type1 => Some(r.acosh()),
        SlantType::Type2 => Some(r.clamp(0.0, 1.0).acos()),
        SlantType::Type3 => Some(r.asinh()),
        _ => None,
    }
}

/// Sampling policy: a cell-centered grid filled up with seeded uniform
/// points so that exactly `samples` points are visited, in a fixed order.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SamplerConfig {
    pub samples: usize,
    pub seed: u64,
    /// Base for the scalarity residual test; the effective bound is
    /// `tol_residual * max(1, |lambda|)`.
    pub tol_residual: f64,
    /// Allowed spread of per-sample lambda values around the mean.
    pub tol_const: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            samples: 64,
            seed: 42,
            tol_residual: TOL_RES_BASE,
            tol_const: TOL_CONST,
        }
    }
}

/// Deterministic sample points for a domain box: the largest m^k
/// cell-centered grid that fits the budget, then seeded uniform points.
pub fn sample_points(domain: &[(f64, f64)], config: &SamplerConfig) -> Vec<Vec<f64>> {
    let k = domain.len();
    let samples = config.samples.max(1);
    let mut m = (samples as f64).powf(1.0 / k as f64).floor() as usize;
    m = m.max(1);
    while m.pow(k as u32) > samples {
        m -= 1;
    }
    let mut points = Vec::with_capacity(samples);
    let mut idx = vec![0usize; k];
    loop {
        let point: Vec<f64> = (0..k)
            .map(|i| {
                let (lo, hi) = domain[i];
                lo + (idx[i] as f64 + 0.5) * (hi - lo) / m as f64
            })
            .collect();
        points.push(point);
        // odometer increment
        let mut carry = true;
        for slot in (0..k).rev() {
            if carry {
                idx[slot] += 1;
                if idx[slot] == m {
                    idx[slot] = 0;
                } else {
                    carry = false;
                }
            }
        }
        if carry {
            break;
        }
    }
    let mut rng = StdRng::seed_from_u64(config.seed);
    while points.len() < samples {
        let point: Vec<f64> = domain
            .iter()
            .map(|(lo, hi)| rng.random_range(*lo..*hi))
            .collect();
        points.push(point);
    }
    points
}

/// Aggregated classification over the sampled domain.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SlantClassification {
    pub structure_class: crate::structure::StructureClass,
    pub epsilon: f64,
    pub lambda: f64,
    pub lambda_spread: f64,
    pub residual_p2: f64,
    #[serde(rename = "type")]
    pub slant_type: SlantType,
    pub theta: Option<f64>,
    pub causal_transfer_ok: bool,
    pub neutral_ok: Option<bool>,
    pub induced_signature: (usize, usize),
    pub samples_used: usize,
    pub samples_skipped: usize,
    pub seed: u64,
}

/// Samples the immersion, aggregates the per-point lambda estimates, and
/// classifies. Degenerate points are skipped and counted; more than half of
/// them degenerating is an error rather than a report.
pub fn classify(
    imm: &Immersion,
    structure: &CompatibleStructure,
    config: &SamplerConfig,
) -> Result<SlantClassification> {
    if config.tol_const < f64::EPSILON {
        return Err(Error::ToleranceConflict(format!(
            "tol_const = {:.3e} is below f64 resolution {:.3e}",
            config.tol_const,
            f64::EPSILON
        )));
    }
    let points = sample_points(imm.domain(), config);
    let total = points.len();
    let mut decomps: Vec<OperatorDecomposition> = Vec::with_capacity(total);
    let mut skipped = 0usize;
    for point in &points {
        match operators_at(imm, structure, point) {
            Ok(d) => decomps.push(d),
            Err(Error::DegenerateFrame(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if decomps.is_empty() || (skipped as f64) > MAX_DEGENERATE_FRACTION * total as f64 {
        return Err(Error::AllSamplesDegenerate(format!(
            "{skipped} of {total} sample points had degenerate frames"
        )));
    }

    let lambdas: Vec<f64> = decomps.iter().map(|d| lambda_at(d).0).collect();
    let lambda = lambdas.iter().sum::<f64>() / lambdas.len() as f64;
    let lambda_spread = lambdas
        .iter()
        .map(|l| (l - lambda).abs())
        .fold(0.0, f64::max);
    let k = decomps[0].p.nrows();
    let eye = DMatrix::<f64>::identity(k, k);
    let residual_p2 = decomps
        .iter()
        .map(|d| (&d.p * &d.p - &eye * lambda).amax())
        .fold(0.0, f64::max);

    let eps = structure.epsilon();
    let scalar_ok = residual_p2 <= config.tol_residual * lambda.abs().max(1.0)
        && lambda_spread <= config.tol_const;
    let slant_type = if scalar_ok {
        slant_type_from_lambda(eps, lambda)
    } else {
        SlantType::NonSlant
    };
    let theta = slant_angle(slant_type, lambda);

    let induced_signature = decomps[0].frame.signature;
    let neutral_ok = match slant_type {
        SlantType::Type1 | SlantType::Type2 => {
            Some(induced_signature == (k / 2, k / 2) && k.is_multiple_of(2))
        }
        _ => None,
    };

    let causal_transfer_ok =
        causal_transfer(&decomps, structure, lambda, slant_type, config.seed);

    Ok(SlantClassification {
        structure_class: structure.class(),
        epsilon: eps,
        lambda,
        lambda_spread,
        residual_p2,
        slant_type,
        theta,
        causal_transfer_ok,
        neutral_ok,
        induced_signature,
        samples_used: decomps.len(),
        samples_skipped: skipped,
        seed: config.seed,
    })
}

/// Checks how P moves causal characters: for proper slant types a tangent
/// vector with `eps * lambda > 0` must flip between space-like and time-like
/// under P (types 1 and 2), and keep its character when `eps * lambda < 0`
/// (type 3). 20 random non-light-like tangent vectors per sample point.
fn causal_transfer(
    decomps: &[OperatorDecomposition],
    structure: &CompatibleStructure,
    lambda: f64,
    slant_type: SlantType,
    seed: u64,
) -> bool {
    let expects_flip = match slant_type {
        SlantType::Type1 | SlantType::Type2 | SlantType::Complex => true,
        SlantType::Type3 => false,
        SlantType::TotallyReal | SlantType::NonSlant => return true,
    };
    debug_assert!(expects_flip == (structure.epsilon() * lambda > 0.0) || lambda == 0.0);
    let mut rng = StdRng::seed_from_u64(seed ^ 0x5CA1AB1E);
    for decomp in decomps {
        let k = decomp.p.nrows();
        let mut tried = 0;
        let mut checked = 0;
        while checked < 20 && tried < 200 {
            tried += 1;
            let coeffs = DVector::from_fn(k, |_, _| rng.random_range(-1.0..1.0));
            let q_v = (coeffs.transpose() * &decomp.frame.gram * &coeffs)[(0, 0)];
            let scale_v = (&decomp.frame.basis * &coeffs).norm_squared();
            if q_v.abs() <= TAU_LIGHTLIKE * scale_v {
                continue;
            }
            checked += 1;
            let image = &decomp.p * &coeffs;
            let q_p = (image.transpose() * &decomp.frame.gram * &image)[(0, 0)];
            let flipped = q_v * q_p < 0.0;
            if flipped != expects_flip {
                return false;
            }
        }
    }
    true
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepRow {
    pub param_value: f64,
    pub lambda: Option<f64>,
    #[serde(rename = "type")]
    pub slant_type: Option<SlantType>,
    pub theta: Option<f64>,
    pub residual_p2: Option<f64>,
    pub excluded_reason: Option<String>,
}

/// Classifies a gallery entry once per parameter value over `lo..=hi` in
/// `step` increments. Values violating the entry's admissibility constraint,
/// or degenerating every frame, produce excluded rows instead of failures.
pub fn sweep(
    entry: &crate::gallery::GalleryEntry,
    param: &str,
    lo: f64,
    hi: f64,
    step: f64,
    fixed: &BTreeMap<String, f64>,
    config: &SamplerConfig,
) -> Result<Vec<SweepRow>> {
    if !entry.defaults.iter().any(|(name, _)| *name == param) {
        return Err(Error::UnknownParameter(param.to_string()));
    }
    if step <= 0.0 || hi < lo {
        return Err(Error::InvalidInput(format!(
            "empty sweep range {lo}:{hi}:{step}"
        )));
    }
    for name in fixed.keys() {
        if !entry.defaults.iter().any(|(k, _)| k == name) {
            return Err(Error::UnknownParameter(name.clone()));
        }
    }
    let structure = entry.ambient()?;
    // The + 1e-9 absorbs accumulated rounding so an endpoint that is meant
    // to be hit (hi = lo + m * step) is not truncated away.
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let value = lo + i as f64 * step;
        if value > hi + step * 1e-9 {
            break;
        }
        let mut constants = entry.default_constants();
        for (k, v) in fixed {
            constants.insert(k.clone(), *v);
        }
        constants.insert(param.to_string(), value);

        if let Err(reason) = (entry.admissible)(&constants) {
            rows.push(SweepRow {
                param_value: value,
                lambda: None,
                slant_type: None,
                theta: None,
                residual_p2: None,
                excluded_reason: Some(reason),
            });
            continue;
        }
        let imm = entry.immersion_from(&constants)?;
        match classify(&imm, &structure, config) {
            Ok(report) => rows.push(SweepRow {
                param_value: value,
                lambda: Some(report.lambda),
                slant_type: Some(report.slant_type),
                theta: report.theta,
                residual_p2: Some(report.residual_p2),
                excluded_reason: None,
            }),
            Err(Error::AllSamplesDegenerate(msg)) => rows.push(SweepRow {
                param_value: value,
                lambda: None,
                slant_type: None,
                theta: None,
                residual_p2: None,
                excluded_reason: Some(msg),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{self, gallery_get};
    use crate::structure::registry_get;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn classify_entry(name: &str, overrides: &[(&str, f64)]) -> SlantClassification {
        let entry = gallery_get(name).unwrap();
        let imm = entry.immersion_with(overrides).unwrap();
        let s = entry.ambient().unwrap();
        classify(&imm, &s, &SamplerConfig::default()).unwrap()
    }

    #[test]
    fn moonlight_operator_matrix() {
        // Hand oracle: P x_u = 2 x_v and P x_v = (2/3) x_u, so in the frame
        // (x_u, x_v) the matrix is [[0, 2/3], [2, 0]] and P^2 = (4/3) I.
        let entry = gallery_get("G04").unwrap();
        let imm = entry.immersion_with(&[("a", 2.0), ("b", 0.0)]).unwrap();
        let s = entry.ambient().unwrap();
        let d = operators_at(&imm, &s, &[0.3, -0.4]).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.0, 2.0 / 3.0, 2.0, 0.0]);
        assert!((&d.p - &expected).amax() <= 1e-12);
        let (lambda, residual) = lambda_at(&d);
        assert_abs_diff_eq!(lambda, 4.0 / 3.0, epsilon = 1e-12);
        assert!(residual <= 1e-10);
    }

    #[test]
    fn reconstruction_invariants_hold() {
        let entry = gallery_get("G09").unwrap();
        let imm = entry.immersion_with(&[("k", 0.8)]).unwrap();
        let s = entry.ambient().unwrap();
        let d = operators_at(&imm, &s, &[0.2, -0.1]).unwrap();
        let g = s.metric();
        // J B = B P + F
        let lhs = s.j() * &d.frame.basis;
        let rhs = &d.frame.basis * &d.p + &d.f_ambient;
        assert!((lhs - rhs).amax() <= 1e-9 * d.frame.basis.amax().max(1.0));
        // J N = B t + N f
        let lhs = s.j() * &d.normal;
        let rhs = &d.frame.basis * &d.t + &d.normal * &d.f_perp;
        assert!((lhs - rhs).amax() <= 1e-9);
        // F columns are g-orthogonal to the frame.
        let cross = d.frame.basis.transpose() * g.entries() * &d.f_ambient;
        assert!(cross.amax() <= 1e-9);
        // B t columns are g-orthogonal to the normal frame.
        let bt = &d.frame.basis * &d.t;
        let cross = d.normal.transpose() * g.entries() * bt;
        assert!(cross.amax() <= 1e-9);
    }

    #[test]
    fn invariant_plane_in_norden_ambient_is_complex() {
        // span{e1, e2} is J-invariant for the rotation-block structure:
        // P is the restriction of J and P^2 = -I.
        let s = registry_get("S6").unwrap().structure;
        let imm = Immersion::from_expressions(
            "invariant-plane",
            vec!["u".into(), "v".into()],
            &["u", "v", "0", "0"],
            vec![(-1.0, 1.0), (-1.0, 1.0)],
            BTreeMap::new(),
            None,
        )
        .unwrap();
        let d = operators_at(&imm, &s, &[0.2, 0.4]).unwrap();
        let p_sq = &d.p * &d.p;
        assert!((p_sq + DMatrix::<f64>::identity(2, 2)).amax() <= 1e-9);
        let report = classify(&imm, &s, &SamplerConfig::default()).unwrap();
        assert_eq!(report.slant_type, SlantType::Complex);
    }

    #[test]
    fn orthogonal_trig_plane_is_totally_real() {
        let entry = gallery_get("G01").unwrap();
        let imm = entry
            .immersion_with(&[("a", FRAC_PI_2), ("b", 0.0)])
            .unwrap();
        let s = entry.ambient().unwrap();
        let mut d = operators_at(&imm, &s, &[0.5, 0.5]).unwrap();
        assert!(d.p.amax() <= 1e-12);
        // A literally zero P has lambda and residual exactly zero.
        d.p.fill(0.0);
        let (lambda, residual) = lambda_at(&d);
        assert_eq!((lambda, residual), (0.0, 0.0));
    }

    #[test]
    fn non_slant_probe_has_large_residual() {
        // (u, a v, b v, v) in the Norden ambient S6 with a = b = 1: P^2 has
        // a non-scalar part, so the residual is far from zero.
        let s = registry_get("S6").unwrap().structure;
        let mut constants = BTreeMap::new();
        constants.insert("a".to_string(), 1.0);
        constants.insert("b".to_string(), 1.0);
        let imm = Immersion::from_expressions(
            "probe",
            vec!["u".into(), "v".into()],
            &["u", "a*v", "b*v", "v"],
            vec![(-1.0, 1.0), (-1.0, 1.0)],
            constants,
            None,
        )
        .unwrap();
        let d = operators_at(&imm, &s, &[0.3, 0.3]).unwrap();
        let (_, residual) = lambda_at(&d);
        assert!(residual > 1e-3);
        let report = classify(&imm, &s, &SamplerConfig::default()).unwrap();
        assert_eq!(report.slant_type, SlantType::NonSlant);
    }

    #[test]
    fn catenary_strip_is_type2_at_quarter_turn() {
        let report = classify_entry("G08", &[("k", 1.0)]);
        assert_abs_diff_eq!(report.lambda, 0.5, epsilon = 1e-12);
        assert_eq!(report.slant_type, SlantType::Type2);
        assert_abs_diff_eq!(
            report.theta.unwrap(),
            std::f64::consts::FRAC_PI_4,
            epsilon = 1e-12
        );
        assert_eq!(report.induced_signature, (1, 1));
        assert_eq!(report.neutral_ok, Some(true));
        assert!(report.causal_transfer_ok);
    }

    #[test]
    fn norden_tilted_plane_types() {
        // cos^2(beta) = 0.6: lambda = -0.6/0.2 = -3, type 1, theta = arccosh sqrt(3).
        let beta = 0.6f64.sqrt().acos();
        let report = classify_entry("G16", &[("beta", beta)]);
        assert_abs_diff_eq!(report.lambda, -3.0, epsilon = 1e-10);
        assert_eq!(report.slant_type, SlantType::Type1);
        assert_abs_diff_eq!(report.theta.unwrap(), 3.0f64.sqrt().acosh(), epsilon = 1e-10);
        assert!(report.causal_transfer_ok);
        assert_eq!(report.neutral_ok, Some(true));
        assert_eq!(report.induced_signature, (1, 1));

        // cos^2(beta) = 0.25: lambda = -0.25/(-0.5) = 0.5, type 3, space-like frame.
        let beta = 0.25f64.sqrt().acos();
        let report = classify_entry("G16", &[("beta", beta)]);
        assert_abs_diff_eq!(report.lambda, 0.5, epsilon = 1e-10);
        assert_eq!(report.slant_type, SlantType::Type3);
        assert_abs_diff_eq!(report.theta.unwrap(), 0.5f64.sqrt().asinh(), epsilon = 1e-10);
        assert_eq!(report.induced_signature, (2, 0));
        assert_eq!(report.neutral_ok, None);
        assert!(report.causal_transfer_ok);
    }

    #[test]
    fn identity_suite_on_moonlight() {
        // tF = eps I - P^2 = I - (4/3) I = -(1/3) I for a = 2, b = 0.
        let entry = gallery_get("G04").unwrap();
        let imm = entry.immersion_with(&[("a", 2.0), ("b", 0.0)]).unwrap();
        let s = entry.ambient().unwrap();
        let d = operators_at(&imm, &s, &[0.7, 0.1]).unwrap();
        let report = identity_checks(&d, &s);
        assert!(report.max_relative() <= 1e-8, "{report:?}");
        let tf = &d.t * &d.f_coords;
        let expected = DMatrix::<f64>::identity(2, 2) * (-1.0 / 3.0);
        assert!((tf - expected).amax() <= 1e-10);
    }

    #[test]
    fn identity_suite_on_norden_type1() {
        // lambda = -3 = -cosh^2(theta) gives tF = -I - P^2 = 2 I = sinh^2(theta) I.
        let beta = 0.6f64.sqrt().acos();
        let entry = gallery_get("G16").unwrap();
        let imm = entry.immersion_with(&[("beta", beta)]).unwrap();
        let s = entry.ambient().unwrap();
        let d = operators_at(&imm, &s, &[0.4, -0.2]).unwrap();
        let report = identity_checks(&d, &s);
        assert!(report.max_relative() <= 1e-8, "{report:?}");
        let tf = &d.t * &d.f_coords;
        let expected = DMatrix::<f64>::identity(2, 2) * 2.0;
        assert!((tf - expected).amax() <= 1e-9);
    }

    #[test]
    fn totally_real_half_dimensional_split() {
        // At a - b = pi/2 the plane is totally real and J swaps the tangent
        // and normal spaces outright: f vanishes and t is invertible with
        // t F = eps I and F t = eps I.
        let entry = gallery_get("G01").unwrap();
        let imm = entry
            .immersion_with(&[("a", FRAC_PI_2), ("b", 0.0)])
            .unwrap();
        let s = entry.ambient().unwrap();
        let d = operators_at(&imm, &s, &[0.5, 0.5]).unwrap();
        assert!(d.f_perp.amax() <= 1e-10);
        let tf = &d.t * &d.f_coords;
        let ft = &d.f_coords * &d.t;
        let eye = DMatrix::<f64>::identity(2, 2);
        assert!((tf - &eye).amax() <= 1e-9);
        assert!((ft - &eye).amax() <= 1e-9);
        let report = identity_checks(&d, &s);
        assert!(report.max_relative() <= 1e-8);
    }

    #[test]
    fn definition_quotient_matches_eps_lambda() {
        // g(PX, PX) / g(JX, JX) = eps * lambda on non-light-like tangents.
        let mut rng = StdRng::seed_from_u64(99);
        for (name, overrides) in [
            ("G04", vec![("a", 2.0), ("b", 0.0)]),
            ("G08", vec![("k", 1.0)]),
            ("G16", vec![("beta", 0.6f64.sqrt().acos())]),
        ] {
            let entry = gallery_get(name).unwrap();
            let imm = entry.immersion_with(&overrides).unwrap();
            let s = entry.ambient().unwrap();
            let report = classify(&imm, &s, &SamplerConfig::default()).unwrap();
            let d = operators_at(&imm, &s, &[0.3, 0.2]).unwrap();
            let g = s.metric();
            let mut checked = 0;
            while checked < 50 {
                let coeffs = DVector::from_fn(2, |_, _| rng.random_range(-1.0..1.0));
                let v = &d.frame.basis * &coeffs;
                let qv = g.inner(&v, &v).unwrap();
                if qv.abs() < 1e-6 * v.norm_squared() {
                    continue;
                }
                checked += 1;
                let pv = &d.frame.basis * (&d.p * &coeffs);
                let jv = s.apply_j(&v);
                let quotient =
                    g.inner(&pv, &pv).unwrap() / g.inner(&jv, &jv).unwrap();
                let expected = s.epsilon() * report.lambda;
                assert!(
                    (quotient - expected).abs() <= 1e-7 * expected.abs().max(1.0),
                    "{name}: quotient {quotient} vs eps*lambda {expected}"
                );
            }
        }
    }

    #[test]
    fn sweep_moonlight_regions_and_boundary() {
        let entry = gallery_get("G04").unwrap();
        let mut fixed = BTreeMap::new();
        fixed.insert("b".to_string(), 0.0);
        let rows = sweep(
            &entry,
            "a",
            0.1,
            3.0,
            0.1,
            &fixed,
            &SamplerConfig::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 30);
        for row in &rows {
            let a = row.param_value;
            if (a - 1.0).abs() < 1e-9 {
                assert!(row.excluded_reason.is_some(), "a = 1 must be excluded");
            } else if a < 1.0 {
                assert_eq!(row.slant_type, Some(SlantType::Type3), "a = {a}");
            } else {
                assert_eq!(row.slant_type, Some(SlantType::Type1), "a = {a}");
            }
        }
    }

    #[test]
    fn sweep_hyperbolic_catenary_all_type3() {
        let entry = gallery_get("G12").unwrap();
        let rows = sweep(
            &entry,
            "k",
            1.1,
            3.0,
            0.1,
            &BTreeMap::new(),
            &SamplerConfig::default(),
        )
        .unwrap();
        for row in &rows {
            assert_eq!(row.slant_type, Some(SlantType::Type3), "k = {}", row.param_value);
            let lambda = row.lambda.unwrap();
            let k = row.param_value;
            assert_abs_diff_eq!(lambda, 1.0 / (1.0 - k * k), epsilon = 1e-9);
            assert!(lambda < 0.0);
        }
    }

    #[test]
    fn sweep_hyperbolic_plane_region() {
        // lambda = cosh^2(a) / cosh(2a) runs in (1/2, 1]: type 2 for a > 0,
        // complex at a = 0.
        let entry = gallery_get("G02").unwrap();
        let mut fixed = BTreeMap::new();
        fixed.insert("b".to_string(), 0.0);
        let rows = sweep(
            &entry,
            "a",
            0.0,
            1.0,
            0.125,
            &fixed,
            &SamplerConfig::default(),
        )
        .unwrap();
        for row in &rows {
            let a = row.param_value;
            let lambda = row.lambda.unwrap();
            let expected = a.cosh().powi(2) / (2.0 * a).cosh();
            assert_abs_diff_eq!(lambda, expected, epsilon = 1e-9);
            if a == 0.0 {
                assert_eq!(row.slant_type, Some(SlantType::Complex));
            } else {
                assert_eq!(row.slant_type, Some(SlantType::Type2));
                assert!(lambda > 0.5 && lambda < 1.0);
            }
        }
    }

    #[test]
    fn sweep_rejects_unknown_parameter() {
        let entry = gallery_get("G04").unwrap();
        let err = sweep(
            &entry,
            "zzz",
            0.0,
            1.0,
            0.1,
            &BTreeMap::new(),
            &SamplerConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownParameter(_)));
    }

    #[test]
    fn fully_degenerate_immersion_is_an_error() {
        // Moonlight at a = 1, b = 0 sits on its degeneracy locus: the
        // induced metric is singular at every point.
        let entry = gallery_get("G04").unwrap();
        let mut constants = entry.default_constants();
        constants.insert("a".to_string(), 1.0);
        constants.insert("b".to_string(), 0.0);
        let imm = entry.immersion_from(&constants).unwrap();
        let s = entry.ambient().unwrap();
        assert!(matches!(
            classify(&imm, &s, &SamplerConfig::default()),
            Err(Error::AllSamplesDegenerate(_))
        ));
    }

    #[test]
    fn tolerance_conflict_is_reported() {
        let entry = gallery_get("G04").unwrap();
        let imm = entry.immersion_with(&[]).unwrap();
        let s = entry.ambient().unwrap();
        let config = SamplerConfig {
            tol_const: 1e-18,
            ..Default::default()
        };
        assert!(matches!(
            classify(&imm, &s, &config),
            Err(Error::ToleranceConflict(_))
        ));
    }

    #[test]
    fn grid_sampling_is_deterministic_and_sized() {
        let domain = vec![(-1.0, 1.0), (0.0, 2.0)];
        let config = SamplerConfig::default();
        let a = sample_points(&domain, &config);
        let b = sample_points(&domain, &config);
        assert_eq!(a.len(), 64);
        assert_eq!(a, b);
        // 8x8 grid: no point on the boundary.
        for p in &a {
            assert!(p[0] > -1.0 && p[0] < 1.0);
            assert!(p[1] > 0.0 && p[1] < 2.0);
        }
        let domain4 = vec![(-1.0, 1.0); 4];
        let pts = sample_points(&domain4, &config);
        assert_eq!(pts.len(), 64);
    }

    #[test]
    fn linear_entries_have_point_independent_p() {
        for name in ["G01", "G02", "G03", "G04", "G11a", "G11b", "G14", "G16", "G17"] {
            let entry = gallery_get(name).unwrap();
            let imm = entry.immersion_with(&[]).unwrap();
            let s = entry.ambient().unwrap();
            let points = sample_points(imm.domain(), &SamplerConfig::default());
            let mut first: Option<DMatrix<f64>> = None;
            for point in points.iter().take(16) {
                let d = operators_at(&imm, &s, point).unwrap();
                match &first {
                    None => first = Some(d.p),
                    Some(p0) => assert!((&d.p - p0).amax() <= 1e-10, "{name}"),
                }
            }
        }
    }

    #[test]
    fn gallery_defaults_all_classify_as_expected() {
        for entry in gallery::gallery() {
            if !entry.enabled {
                continue;
            }
            let imm = entry.immersion_with(&[]).unwrap();
            let s = entry.ambient().unwrap();
            let report = classify(&imm, &s, &SamplerConfig::default()).unwrap();
            let constants = entry.default_constants();
            if let Some(lambda_fn) = entry.expected_lambda {
                let expected = lambda_fn(&constants);
                assert!(
                    (report.lambda - expected).abs() <= 1e-8 * expected.abs().max(1.0),
                    "{}: lambda {} vs expected {}",
                    entry.name,
                    report.lambda,
                    expected
                );
            }
            if let Some(type_fn) = entry.expected_type {
                assert_eq!(report.slant_type, type_fn(&constants), "{}", entry.name);
            }
        }
    }
}
