//! Linear algebra over indefinite (semi-Riemannian) metrics.
//!
//! A flat ambient space carries a constant non-degenerate symmetric bilinear
//! form `g` of arbitrary signature. Submanifold computations need four
//! primitives on top of it: the causal character of a vector, the Gram matrix
//! induced on a tangent frame, metric-orthogonal projection onto the span of
//! a frame, and a basis of the g-orthogonal complement.
//!
//! Indefinite metrics rule out the Euclidean shortcuts: light-like vectors
//! make Gram-Schmidt break down, and a frame of independent vectors can still
//! induce a singular Gram matrix (a non-trivial radical). Projection is
//! therefore done by solving the normal equations `G c = B^t g w`, and the
//! orthogonal complement is extracted as the null space of `B^t g`, which
//! works in every non-degenerate case.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tolerances::{
    DELTA_DEGENERATE, METRIC_DET_TOL, METRIC_SYMMETRY_TOL, TAU_LIGHTLIKE,
};

/// A constant non-degenerate symmetric bilinear form on R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    entries: DMatrix<f64>,
    signature: (usize, usize),
}

impl Metric {
    /// Validates symmetry and non-degeneracy, and computes the inertia.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::InvalidMetric(format!(
                "expected a square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let n = entries.nrows();
        if n == 0 {
            return Err(Error::InvalidMetric("empty matrix".into()));
        }
        let mut sym_residual = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                sym_residual = sym_residual.max((entries[(i, j)] - entries[(j, i)]).abs());
            }
        }
        if sym_residual > METRIC_SYMMETRY_TOL {
            return Err(Error::InvalidMetric(format!(
                "not symmetric: max |g_ij - g_ji| = {sym_residual:.3e} exceeds {METRIC_SYMMETRY_TOL:.0e}"
            )));
        }
        let det = entries.clone().determinant();
        if det.abs() <= METRIC_DET_TOL {
            return Err(Error::InvalidMetric(format!(
                "degenerate: |det g| = {:.3e} is not above {METRIC_DET_TOL:.0e}",
                det.abs()
            )));
        }
        let signature = inertia(&entries);
        if signature.0 + signature.1 != n {
            return Err(Error::InvalidMetric(format!(
                "inertia ({}, {}) does not fill dimension {n}; a near-zero eigenvalue slipped through",
                signature.0, signature.1
            )));
        }
        Ok(Self { entries, signature })
    }

    /// Diagonal metric with the given signs.
    pub fn diagonal(signs: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_row_slice(signs)))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// (positive, negative) inertia of the form.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// The scalar `g(v, w)`.
    pub fn inner(&self, v: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
        if v.len() != self.dim() || w.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "metric has dimension {}, vectors have lengths {} and {}",
                self.dim(),
                v.len(),
                w.len()
            )));
        }
        Ok((v.transpose() * &self.entries * w)[(0, 0)])
    }

    /// Block-diagonal direct sum of two metrics.
    pub fn direct_sum(&self, other: &Metric) -> Metric {
        let entries = block_diag(&self.entries, &other.entries);
        Metric {
            signature: (
                self.signature.0 + other.signature.0,
                self.signature.1 + other.signature.1,
            ),
            entries,
        }
    }
}

/// Space-like / time-like / light-like trichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CausalCharacter {
    SpaceLike,
    TimeLike,
    LightLike,
}

/// Classifies `v` by the sign of `g(v, v)`, with a relative light-like band:
/// space-like when `g(v,v) > tau * |v|_e^2`, time-like when below the
/// negative band, light-like in between.
pub fn causal_character(v: &DVector<f64>, g: &Metric) -> Result<CausalCharacter> {
    let q = g.inner(v, v)?;
    let scale = v.norm_squared();
    Ok(if q > TAU_LIGHTLIKE * scale {
        CausalCharacter::SpaceLike
    } else if q < -TAU_LIGHTLIKE * scale {
        CausalCharacter::TimeLike
    } else {
        CausalCharacter::LightLike
    })
}

/// Restriction of `g` to the columns of `B`: returns `B^t g B`.
pub fn induced_gram(b: &DMatrix<f64>, g: &Metric) -> Result<DMatrix<f64>> {
    if b.nrows() != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "frame has {} rows, metric dimension is {}",
            b.nrows(),
            g.dim()
        )));
    }
    if b.ncols() > b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "frame has more columns ({}) than ambient dimension ({})",
            b.ncols(),
            b.nrows()
        )));
    }
    let gram = b.transpose() * g.entries() * b;
    // Symmetrize away rounding; B^t g B is symmetric exactly.
    Ok(0.5 * (&gram + gram.transpose()))
}

/// A tangent frame at one parameter point: the Jacobian columns, the induced
/// Gram matrix, and its inertia.
#[derive(Debug, Clone)]
pub struct TangentFrame {
    pub point: Vec<f64>,
    pub basis: DMatrix<f64>,
    pub gram: DMatrix<f64>,
    pub signature: (usize, usize),
}

impl TangentFrame {
    /// Builds the frame and rejects it when the induced Gram matrix is
    /// numerically singular (radical directions present).
    pub fn new(g: &Metric, point: Vec<f64>, basis: DMatrix<f64>) -> Result<Self> {
        let gram = induced_gram(&basis, g)?;
        let d = scaled_det(&gram);
        if d.abs() <= DELTA_DEGENERATE {
            return Err(Error::DegenerateFrame(format!(
                "induced Gram matrix at {:?} has row-scaled |det| = {:.3e} (threshold {DELTA_DEGENERATE:.0e})",
                point, d.abs()
            )));
        }
        let signature = inertia(&gram);
        Ok(Self {
            point,
            basis,
            gram,
            signature,
        })
    }

    pub fn param_count(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }
}

/// Metric-orthogonal projection of `w` onto the span of the frame.
///
/// Returns the coefficient vector `c` solving `G c = B^t g w` together with
/// the residual `w - B c`, which is g-orthogonal to every frame vector.
pub fn tangential_projection(
    g: &Metric,
    frame: &TangentFrame,
    w: &DVector<f64>,
) -> Result<(DVector<f64>, DVector<f64>)> {
    if w.len() != frame.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "vector has length {}, ambient dimension is {}",
            w.len(),
            frame.ambient_dim()
        )));
    }
    let rhs = frame.basis.transpose() * g.entries() * w;
    let coeffs = frame
        .gram
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::DegenerateFrame("Gram matrix solve failed".into()))?;
    let residual = w - &frame.basis * &coeffs;
    Ok((coeffs, residual))
}

/// Basis of the g-orthogonal complement of the frame's span, computed as the
/// null space of `B^t g`. The complement of a non-degenerate span is itself
/// non-degenerate, and together they fill the ambient space.
pub fn normal_frame(g: &Metric, frame: &TangentFrame) -> Result<DMatrix<f64>> {
    let n = frame.ambient_dim();
    let k = frame.param_count();
    // Pad B^t g with zero rows to n x n so the SVD returns the full V and
    // with it the whole null space, not just the thin factor.
    let mut padded = DMatrix::zeros(n, n);
    padded
        .view_mut((0, 0), (k, n))
        .copy_from(&(frame.basis.transpose() * g.entries()));
    let svd = nalgebra::SVD::new(padded, false, true);
    let v_t = svd
        .v_t
        .as_ref()
        .expect("SVD of B^t g was requested with right singular vectors");
    let max_sv = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > 1e-10 * max_sv.max(1.0))
        .count();
    if rank < k {
        return Err(Error::DegenerateFrame(format!(
            "B^t g has rank {rank} < {k}; frame vectors are dependent"
        )));
    }
    let mut normal = DMatrix::zeros(n, n - k);
    for (col, row_idx) in (rank..n).enumerate() {
        for i in 0..n {
            normal[(i, col)] = v_t[(row_idx, i)];
        }
    }
    // The restriction of g to the complement must stay non-degenerate.
    let normal_gram = induced_gram(&normal, g)?;
    if scaled_det(&normal_gram).abs() <= DELTA_DEGENERATE {
        return Err(Error::DegenerateFrame(
            "normal complement inherited a degenerate induced metric".into(),
        ));
    }
    Ok(normal)
}

/// Determinant after dividing each row by its largest absolute entry, so the
/// verdict does not depend on the overall scale of the frame vectors.
/// A zero row yields 0.
pub fn scaled_det(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut scaled = m.clone();
    for i in 0..n {
        let row_max = (0..m.ncols()).map(|j| m[(i, j)].abs()).fold(0.0, f64::max);
        if row_max == 0.0 {
            return 0.0;
        }
        for j in 0..m.ncols() {
            scaled[(i, j)] /= row_max;
        }
    }
    scaled.determinant()
}

/// (positive, negative) eigenvalue counts of a symmetric matrix. Eigenvalues
/// within rounding distance of zero are counted in neither bucket.
pub fn inertia(m: &DMatrix<f64>) -> (usize, usize) {
    let sym = 0.5 * (m + m.transpose());
    let eigen = sym.symmetric_eigen();
    let max_abs = eigen.eigenvalues.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let zero_band = 1e-12 * max_abs.max(1e-300) * m.nrows() as f64;
    let mut pos = 0;
    let mut neg = 0;
    for e in eigen.eigenvalues.iter() {
        if *e > zero_band {
            pos += 1;
        } else if *e < -zero_band {
            neg += 1;
        }
    }
    (pos, neg)
}

/// Stacks two matrices into a block-diagonal matrix.
pub fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = DMatrix::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}
