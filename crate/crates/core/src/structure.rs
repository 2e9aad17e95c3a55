//! Compatible almost-structures (J, g) and their four-class taxonomy.
//!
//! A constant endomorphism J with `J^2 = eps * I` (eps = +/-1) interacts with
//! a metric either as an isometry (`g(JX, JY) = g(X, Y)`) or an anti-isometry
//! (`g(JX, JY) = -g(X, Y)`). The four combinations:
//!
//! | | isometry | anti-isometry |
//! |----------------|-----------------|---------------|
//! | `J^2 = -I` | almost complex | Norden |
//! | `J^2 = +I` | almost product | para-complex |
//!
//! For anti-isometries the matrix `g J` is symmetric exactly when
//! `eps = -1` (the Norden case, where `g(JX, Y) = g(X, JY)`) and
//! antisymmetric when `eps = +1`; the general rule is
//! `(g J)^t = sigma * eps * (g J)` with sigma the compatibility sign. The
//! classifier checks the sign-correct identity rather than assuming the
//! Norden one.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::semiriemann::{block_diag, Metric};
use crate::tolerances::STRUCTURE_TOL;

/// The four cells of the compatibility table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureClass {
    AlmostComplex,
    Norden,
    AlmostProduct,
    ParaComplex,
}

impl StructureClass {
    pub fn label(self) -> &'static str {
        match self {
            StructureClass::AlmostComplex => "almost-complex",
            StructureClass::Norden => "norden",
            StructureClass::AlmostProduct => "almost-product",
            StructureClass::ParaComplex => "para-complex",
        }
    }
}

/// Whether J preserves or flips the metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Compatibility {
    Isometry,
    AntiIsometry,
}

/// A validated pair (J, g) with its derived classification.
#[derive(Debug, Clone)]
pub struct CompatibleStructure {
    j: DMatrix<f64>,
    g: Metric,
    epsilon: f64,
    compat: Compatibility,
    klass: StructureClass,
    /// Residual of `J^2 - eps I` in max norm.
    pub square_residual: f64,
    /// Residual of `J^t g J - sigma g` in max norm.
    pub compat_residual: f64,
}

impl CompatibleStructure {
    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn j(&self) -> &DMatrix<f64> {
        &self.j
    }

    pub fn metric(&self) -> &Metric {
        &self.g
    }

    /// The sign eps with `J^2 = eps * I`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn compatibility(&self) -> Compatibility {
        self.compat
    }

    pub fn class(&self) -> StructureClass {
        self.klass
    }

    /// Applies J to an ambient vector.
    pub fn apply_j(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.j * v
    }

    /// Block-diagonal direct sum with another structure.
    pub fn direct_sum(&self, other: &CompatibleStructure) -> Result<CompatibleStructure> {
        let j = block_diag(&self.j, &other.j);
        let g = self.g.direct_sum(&other.g);
        classify_structure(j, g)
    }

    /// Conjugated structure `(Q J Q^-1, Q^-t g Q^-1)`; composing an immersion
    /// with `Q` on the left moves it between the two isometrically.
    pub fn conjugate(&self, q: &DMatrix<f64>) -> Result<CompatibleStructure> {
        if q.nrows() != self.dim() || q.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "conjugation matrix is {}x{}, structure dimension is {}",
                q.nrows(),
                q.ncols(),
                self.dim()
            )));
        }
        let q_inv = q.clone().try_inverse().ok_or_else(|| {
            Error::InvalidInput("conjugation matrix is not invertible".into())
        })?;
        let j = q * &self.j * &q_inv;
        let g_entries = q_inv.transpose() * self.g.entries() * &q_inv;
        let g = Metric::new(0.5 * (&g_entries + g_entries.transpose()))?;
        classify_structure(j, g)
    }
}

/// Determines eps, the compatibility sign, and the table cell for a candidate
/// pair, or reports both residuals when the pair is not a structure.
pub fn classify_structure(j: DMatrix<f64>, g: Metric) -> Result<CompatibleStructure> {
    let n = g.dim();
    if j.nrows() != n || j.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "J is {}x{}, metric dimension is {n}",
            j.nrows(),
            j.ncols()
        )));
    }
    if !n.is_multiple_of(2) {
        return Err(Error::NotAStructure(format!(
            "dimension {n} is odd; a square root of +/-I pairing with g needs even dimension"
        )));
    }
    let eye = DMatrix::identity(n, n);
    let j_sq = &j * &j;
    let res_minus = (&j_sq + &eye).amax();
    let res_plus = (&j_sq - &eye).amax();
    let (epsilon, square_residual) = if res_minus <= res_plus {
        (-1.0, res_minus)
    } else {
        (1.0, res_plus)
    };

    let jt_g_j = j.transpose() * g.entries() * &j;
    let res_iso = (&jt_g_j - g.entries()).amax();
    let res_anti = (&jt_g_j + g.entries()).amax();
    let (compat, compat_residual) = if res_iso <= res_anti {
        (Compatibility::Isometry, res_iso)
    } else {
        (Compatibility::AntiIsometry, res_anti)
    };

    if square_residual > STRUCTURE_TOL || compat_residual > STRUCTURE_TOL {
        return Err(Error::NotAStructure(format!(
            "J^2 -/+ I residuals ({res_minus:.3e}, {res_plus:.3e}); \
             J^t g J -/+ g residuals ({res_iso:.3e}, {res_anti:.3e}); \
             tolerance {STRUCTURE_TOL:.0e}"
        )));
    }

    // Sign-correct self-adjointness of gJ: (gJ)^t = sigma eps gJ.
    let sigma = match compat {
        Compatibility::Isometry => 1.0,
        Compatibility::AntiIsometry => -1.0,
    };
    let gj = g.entries() * &j;
    let adj_residual = (gj.transpose() - sigma * epsilon * &gj).amax();
    if adj_residual > STRUCTURE_TOL {
        return Err(Error::NotAStructure(format!(
            "gJ fails (gJ)^t = {}*(gJ): residual {adj_residual:.3e}",
            sigma * epsilon
        )));
    }

    let klass = match (epsilon < 0.0, compat) {
        (true, Compatibility::Isometry) => StructureClass::AlmostComplex,
        (true, Compatibility::AntiIsometry) => StructureClass::Norden,
        (false, Compatibility::Isometry) => StructureClass::AlmostProduct,
        (false, Compatibility::AntiIsometry) => StructureClass::ParaComplex,
    };

    Ok(CompatibleStructure {
        j,
        g,
        epsilon,
        compat,
        klass,
        square_residual,
        compat_residual,
    })
}

/// Where a registry entry's matrices came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Paper,
    Derived,
}

/// A named structure in the built-in registry.
#[derive(Debug, Clone)]
pub struct StructureRegistryEntry {
    pub name: &'static str,
    pub structure: CompatibleStructure,
    pub provenance: Provenance,
    /// Shown by `verify-structure`; flags naming quirks such as para-complex
    /// structures that ship in Norden-labelled sources.
    pub note: Option<&'static str>,
}

/// Swaps coordinates `1<->2` and `3<->4` (1-based) on R^4.
fn pair_swap_12_34() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 1.0, 0.0, 0.0, //
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0,
        ],
    )
}

/// Swaps coordinates `1<->3` and `2<->4` (1-based) on R^4.
fn pair_swap_13_24() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0,
        ],
    )
}

/// 2x2 rotation block `[[0, 1], [-1, 0]]` repeated along the diagonal.
fn rotation_blocks(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(n, n);
    for b in 0..n / 2 {
        j[(2 * b, 2 * b + 1)] = 1.0;
        j[(2 * b + 1, 2 * b)] = -1.0;
    }
    j
}

const PARA_NOTE: &str = "anti-isometric with J^2 = +I: para-complex, not Norden \
(Norden requires J^2 = -I); published alongside Norden material under the \
'para Kaehler' label";

/// The built-in named structures S1..S8.
///
/// S1-S4 are the printed 4-dimensional pairs (all para-complex as printed),
/// S5/S6 are genuinely Norden, S7/S8 are the 8-dimensional direct sums used
/// by the higher-dimensional fixtures.
pub fn registry() -> Vec<StructureRegistryEntry> {
    let g_a = Metric::diagonal(&[1.0, -1.0, 1.0, -1.0]).unwrap();
    let g_b = Metric::diagonal(&[1.0, 1.0, -1.0, -1.0]).unwrap();
    let g_c = Metric::diagonal(&[-1.0, 1.0, 1.0, -1.0]).unwrap();
    let g_2d = Metric::diagonal(&[1.0, -1.0]).unwrap();

    let s1 = classify_structure(pair_swap_12_34(), g_a.clone()).unwrap();
    let s2 = classify_structure(pair_swap_13_24(), g_b).unwrap();
    let s3 = classify_structure(pair_swap_13_24(), g_c.clone()).unwrap();
    let s4 = classify_structure(pair_swap_12_34(), g_c).unwrap();
    let s5 = classify_structure(rotation_blocks(2), g_2d).unwrap();
    let s6 = classify_structure(rotation_blocks(4), g_a).unwrap();
    let s7 = s1.direct_sum(&s1).unwrap();
    let s8 = s6.direct_sum(&s6).unwrap();

    vec![
        StructureRegistryEntry {
            name: "S1",
            structure: s1,
            provenance: Provenance::Paper,
            note: Some(PARA_NOTE),
        },
        StructureRegistryEntry {
            name: "S2",
            structure: s2,
            provenance: Provenance::Paper,
            note: Some(PARA_NOTE),
        },
        StructureRegistryEntry {
            name: "S3",
            structure: s3,
            provenance: Provenance::Paper,
            note: Some(PARA_NOTE),
        },
        StructureRegistryEntry {
            name: "S4",
            structure: s4,
            provenance: Provenance::Paper,
            note: Some(PARA_NOTE),
        },
        StructureRegistryEntry {
            name: "S5",
            structure: s5,
            provenance: Provenance::Paper,
            note: None,
        },
        StructureRegistryEntry {
            name: "S6",
            structure: s6,
            provenance: Provenance::Derived,
            note: Some("rotation-block J with the neutral metric; genuinely Norden"),
        },
        StructureRegistryEntry {
            name: "S7",
            structure: s7,
            provenance: Provenance::Derived,
            note: Some("direct sum S1 (+) S1 on R^8"),
        },
        StructureRegistryEntry {
            name: "S8",
            structure: s8,
            provenance: Provenance::Derived,
            note: Some("direct sum S6 (+) S6 on R^8"),
        },
    ]
}

/// Looks a structure up by registry name.
pub fn registry_get(name: &str) -> Result<StructureRegistryEntry> {
    registry()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownRegistryEntry(name.to_string()))
}
