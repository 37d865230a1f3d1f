//! Complex projective space with the Fubini–Study metric.
//!
//! The metric is normalized so that on the affine chart of ℙ¹ it reads `|dw|² / (1+|w|²)²`.
//! With that scale the operator norm of the differential of a map `ℂ → ℙ¹` is the classical
//! spherical derivative `|f′| / (1 + |f|²)`, and the geodesic distance is `arccos |⟨p, q⟩|`
//! on unit representatives (diameter π/2).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{
    spectral_norm, vec_dot, vec_norm, ComplexMatrix, LinearMapNorm, C64, ONE, ZERO,
};

/// Gram residual above which a frame is rejected.
pub const FRAME_TOL: f64 = 1e-9;

/// A point of ℙⁿ stored as a unit vector whose first nonzero coordinate is real and positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePoint {
    coords: Vec<C64>,
}

impl ProjectivePoint {
    pub fn new(homogeneous: Vec<C64>) -> Result<Self> {
        if homogeneous.len() < 2 {
            return Err(Error::InvalidInput(
                "a projective point needs at least two coordinates".into(),
            ));
        }
        if homogeneous.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput(
                "non-finite homogeneous coordinate".into(),
            ));
        }
        // Rescale by the largest modulus first so tiny or huge representatives do not under/overflow.
        let big = homogeneous.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if big == 0.0 {
            return Err(Error::InvalidInput(
                "zero vector has no projective class".into(),
            ));
        }
        let scaled: Vec<C64> = homogeneous.iter().map(|z| z / big).collect();
        let n = vec_norm(&scaled);
        let lead = scaled
            .iter()
            .find(|z| **z != ZERO)
            .copied()
            .expect("nonzero vector");
        let phase = lead.conj() / lead.norm();
        let coords = scaled.iter().map(|z| z * phase / n).collect();
        Ok(Self { coords })
    }

    /// `[1 : w₁ : … : wₙ]`.
    pub fn from_affine(w: &[C64]) -> Result<Self> {
        let mut h = Vec::with_capacity(w.len() + 1);
        h.push(ONE);
        h.extend_from_slice(w);
        Self::new(h)
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    /// Complex dimension `n` of the ambient ℙⁿ.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Index of the chart `{F_k ≠ 0}` in which the point sits best (largest `|F_k|`).
    pub fn best_chart(&self) -> usize {
        let mut best = 0;
        for (k, z) in self.coords.iter().enumerate() {
            if z.norm() > self.coords[best].norm() {
                best = k;
            }
        }
        best
    }

    /// Affine coordinates `F_i / F_k`, `i ≠ k`.
    pub fn chart_coords(&self, k: usize) -> Result<Vec<C64>> {
        let fk = *self
            .coords
            .get(k)
            .ok_or_else(|| Error::InvalidInput(format!("chart {k} out of range")))?;
        if fk == ZERO {
            return Err(Error::Domain(format!("point lies outside chart {k}")));
        }
        Ok(self
            .coords
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, z)| z / fk)
            .collect())
    }
}

/// Geodesic Fubini–Study distance, computed as `atan2(sin, cos)` for accuracy near 0 and π/2.
pub fn fs_distance(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<f64> {
    if p.coords.len() != q.coords.len() {
        return Err(Error::InvalidInput(format!(
            "ℙ^{} vs ℙ^{}",
            p.dim(),
            q.dim()
        )));
    }
    if p.coords == q.coords {
        return Ok(0.0);
    }
    let ip = vec_dot(&p.coords, &q.coords);
    let perp: Vec<C64> = q
        .coords
        .iter()
        .zip(&p.coords)
        .map(|(b, a)| b - a * ip)
        .collect();
    Ok(vec_norm(&perp).atan2(ip.norm()))
}

/// Fubini–Study metric matrix `H(w) = ((1+|w|²) I − w wᴴ) / (1+|w|²)²` on an affine chart.
pub fn chart_metric(w: &[C64]) -> ComplexMatrix {
    let n = w.len();
    let s = 1.0 + w.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let id = if i == j { s } else { 0.0 };
            h[(i, j)] = (C64::new(id, 0.0) - w[i] * w[j].conj()) / (s * s);
        }
    }
    h
}

/// `α (I − P) + β P` with `P` the orthogonal projector onto `w`.
fn spectral_pair(w: &[C64], alpha: f64, beta: f64) -> ComplexMatrix {
    let n = w.len();
    let s: f64 = w.iter().map(|z| z.norm_sqr()).sum();
    let mut m = ComplexMatrix::identity(n).scale_real(alpha);
    if s > 0.0 {
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += w[i] * w[j].conj() * ((beta - alpha) / s);
            }
        }
    }
    m
}

/// Orthonormal frame of `T^{1,0}ℙⁿ` at a point, read in one affine chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetMetricFrame {
    base: ProjectivePoint,
    chart: usize,
    metric: ComplexMatrix,
    /// Columns are the frame vectors: `H^{-1/2}`.
    frame: ComplexMatrix,
    /// Coordinates of a chart vector in the frame: `H^{1/2}`.
    coframe: ComplexMatrix,
}

impl TargetMetricFrame {
    pub fn at(base: &ProjectivePoint) -> Result<Self> {
        Self::in_chart(base, base.best_chart())
    }

    pub fn in_chart(base: &ProjectivePoint, chart: usize) -> Result<Self> {
        let w = base.chart_coords(chart)?;
        let s = 1.0 + w.iter().map(|z| z.norm_sqr()).sum::<f64>();
        Ok(Self {
            base: base.clone(),
            chart,
            metric: chart_metric(&w),
            frame: spectral_pair(&w, s.sqrt(), s),
            coframe: spectral_pair(&w, 1.0 / s.sqrt(), 1.0 / s),
        })
    }

    pub fn base(&self) -> &ProjectivePoint {
        &self.base
    }

    pub fn chart(&self) -> usize {
        self.chart
    }

    pub fn frame(&self) -> &ComplexMatrix {
        &self.frame
    }

    /// `max |Eᴴ H E − I|` over entries.
    pub fn gram_residual(&self) -> f64 {
        let gram = &(&self.frame.adjoint() * &self.metric) * &self.frame;
        (&gram - &ComplexMatrix::identity(gram.rows())).max_abs()
    }

    /// Expresses a chart Jacobian (rows indexed by the chart's affine coordinates, columns by an
    /// orthonormal source frame) in this orthonormal target frame.
    pub fn to_frame(&self, chart_jacobian: &ComplexMatrix) -> Result<ComplexMatrix> {
        if chart_jacobian.rows() != self.coframe.cols() {
            return Err(Error::InvalidInput(format!(
                "Jacobian has {} rows, target dimension is {}",
                chart_jacobian.rows(),
                self.coframe.cols()
            )));
        }
        Ok(&self.coframe * chart_jacobian)
    }
}

/// Operator norm of a differential whose chart Jacobian is `df_chart` at `frame.base()`.
pub fn differential_norm(
    df_chart: &ComplexMatrix,
    frame: &TargetMetricFrame,
) -> Result<LinearMapNorm> {
    let residual = frame.gram_residual();
    if residual.is_nan() || residual > FRAME_TOL {
        return Err(Error::InvalidFrame { residual });
    }
    spectral_norm(&frame.to_frame(df_chart)?)
}

/// Chart Jacobian of `[F]` from a homogeneous value `F` and its derivative `dF`
/// (`(n+1) × m`): `d(F_i/F_k) = (dF_i F_k − F_i dF_k) / F_k²`.
pub fn homogeneous_chart_jacobian(
    f: &[C64],
    df: &ComplexMatrix,
    k: usize,
) -> Result<ComplexMatrix> {
    if df.rows() != f.len() || k >= f.len() {
        return Err(Error::InvalidInput(
            "homogeneous derivative shape mismatch".into(),
        ));
    }
    let fk = f[k];
    if fk == ZERO {
        return Err(Error::Domain(format!("value lies outside chart {k}")));
    }
    let m = df.cols();
    let rows: Vec<Vec<C64>> = (0..f.len())
        .filter(|&i| i != k)
        .map(|i| {
            (0..m)
                .map(|a| (df[(i, a)] * fk - f[i] * df[(k, a)]) / (fk * fk))
                .collect()
        })
        .collect();
    let refs: Vec<&[C64]> = rows.iter().map(|r| r.as_slice()).collect();
    ComplexMatrix::from_rows(&refs)
}

/// Differential in orthonormal frames from homogeneous data, using the best chart at `[F]`.
pub fn homogeneous_frame_differential(f: &[C64], df: &ComplexMatrix) -> Result<ComplexMatrix> {
    let p = ProjectivePoint::new(f.to_vec())?;
    let frame = TargetMetricFrame::at(&p)?;
    // Work with a well-scaled representative so large |F| does not overflow F_k².
    let big = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let fs: Vec<C64> = f.iter().map(|z| z / big).collect();
    let dfs = df.scale_real(1.0 / big);
    frame.to_frame(&homogeneous_chart_jacobian(&fs, &dfs, frame.chart())?)
}
