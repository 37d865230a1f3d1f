//! Indexed holomorphic families `f_j : Ω → ℙⁿ` and the Marty normality scan.
//!
//! A family is given by homogeneous evaluators `(j, g) ↦ F_j(g) ∈ ℂ^{n+1}`. Differentials are
//! taken along the left-trivialized orthonormal frame of the source group and read in an
//! orthonormal Fubini–Study frame at the image point, so `df_norm` is a genuine operator norm.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expmap::exp_at;
use crate::liegroup::{random_unit, AlgebraVector, GroupElement, GroupInstance};
use crate::numkernel::{
    numeric_jacobian, spectral_norm, ComplexMatrix, LinearMapNorm, C64, DEFAULT_FD_STEP,
};
use crate::par::{argmax, map_indexed, stream_rng, Exec};
use crate::target::{homogeneous_frame_differential, ProjectivePoint};

pub type EvalFn = Arc<dyn Fn(u64, &GroupElement) -> Result<Vec<C64>> + Send + Sync>;
/// Homogeneous derivative: column `a` is `d/dt F_j(g·exp(t ε_a))` at `t = 0`.
pub type DiffFn = Arc<dyn Fn(u64, &GroupElement) -> Result<ComplexMatrix> + Send + Sync>;
pub type MemberFn = Arc<dyn Fn(&GroupElement) -> bool + Send + Sync>;

/// Which differentiation path to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffPath {
    /// Analytic when available, numeric otherwise.
    Auto,
    Analytic,
    Numeric,
}

#[derive(Clone)]
pub struct HoloFamily {
    name: String,
    instance: GroupInstance,
    target_dim: usize,
    index_set: String,
    eval: EvalFn,
    diff: Option<DiffFn>,
    member: MemberFn,
}

impl fmt::Debug for HoloFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HoloFamily")
            .field("name", &self.name)
            .field("group", &self.instance.name())
            .field("dim", &self.instance.dim())
            .field("target_dim", &self.target_dim)
            .field("index_set", &self.index_set)
            .field("analytic", &self.diff.is_some())
            .finish()
    }
}

/// Indices at which an analytic differential is spot-checked.
const SPOT_INDICES: [u64; 3] = [1, 2, 5];
const SPOT_POINTS: usize = 20;
const SPOT_TOL: f64 = 1e-6;

impl HoloFamily {
    pub fn new(
        name: impl Into<String>,
        instance: GroupInstance,
        target_dim: usize,
        index_set: impl Into<String>,
        eval: EvalFn,
        member: MemberFn,
    ) -> Result<Self> {
        if target_dim == 0 {
            return Err(Error::InvalidInput(
                "target dimension must be at least 1".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            instance,
            target_dim,
            index_set: index_set.into(),
            eval,
            diff: None,
            member,
        })
    }

    /// Attaches an analytic differential after checking it against finite differences at
    /// 20 pseudo-random points of the exp-ball `(anchor, radius)` for several indices.
    pub fn with_differential(
        mut self,
        diff: DiffFn,
        anchor: &GroupElement,
        radius: f64,
    ) -> Result<Self> {
        self.diff = Some(diff);
        let mut rng = stream_rng(0xd1ff, 0);
        let mut checked = 0;
        let mut attempts = 0;
        while checked < SPOT_POINTS {
            attempts += 1;
            if attempts > 50 * SPOT_POINTS {
                return Err(Error::InvalidInput(
                    "spot-check ball misses the domain".into(),
                ));
            }
            let eta = self.instance.random_algebra(&mut rng, radius);
            let g = exp_at(&self.instance, anchor, &eta)?;
            if !(self.member)(&g) {
                continue;
            }
            for j in SPOT_INDICES {
                let a = self.frame_differential_with(j, &g, DiffPath::Analytic)?;
                let n = self.frame_differential_with(j, &g, DiffPath::Numeric)?;
                let scale = spectral_norm(&n)?.value().max(1.0);
                let gap = spectral_norm(&(&a - &n))?.value();
                if gap > SPOT_TOL * scale {
                    return Err(Error::InvalidInput(format!(
                        "analytic differential of {} disagrees with finite differences by {gap:e} (j = {j}, g = {g})",
                        self.name
                    )));
                }
            }
            checked += 1;
        }
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn instance(&self) -> &GroupInstance {
        &self.instance
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn index_set(&self) -> &str {
        &self.index_set
    }

    pub fn has_analytic(&self) -> bool {
        self.diff.is_some()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.instance.check_member(g).is_ok() && (self.member)(g)
    }

    fn require_domain(&self, g: &GroupElement) -> Result<()> {
        if !self.contains(g) {
            return Err(Error::Domain(format!(
                "{g} lies outside the domain of {}",
                self.name
            )));
        }
        Ok(())
    }

    fn raw(&self, j: u64, g: &GroupElement) -> Result<Vec<C64>> {
        let v = (self.eval)(j, g)?;
        if v.len() != self.target_dim + 1 {
            return Err(Error::Evaluation(format!(
                "{} returned {} homogeneous coordinates",
                self.name,
                v.len()
            )));
        }
        if v.iter().any(|z| !z.is_finite()) {
            return Err(Error::Evaluation(format!(
                "{} is not finite at {g} (j = {j})",
                self.name
            )));
        }
        Ok(v)
    }

    /// Homogeneous value `F_j(g)`.
    pub fn homogeneous(&self, j: u64, g: &GroupElement) -> Result<Vec<C64>> {
        self.require_domain(g)?;
        self.raw(j, g)
    }

    pub fn evaluate(&self, j: u64, g: &GroupElement) -> Result<ProjectivePoint> {
        ProjectivePoint::new(self.homogeneous(j, g)?).map_err(|e| Error::Evaluation(e.to_string()))
    }

    /// Homogeneous value and its derivative along the left-trivialized basis.
    pub fn homogeneous_differential(
        &self,
        j: u64,
        g: &GroupElement,
        path: DiffPath,
    ) -> Result<(Vec<C64>, ComplexMatrix)> {
        let f = self.homogeneous(j, g)?;
        let use_analytic = match path {
            DiffPath::Auto => self.diff.is_some(),
            DiffPath::Analytic => {
                if self.diff.is_none() {
                    return Err(Error::InvalidInput(format!(
                        "{} has no analytic differential",
                        self.name
                    )));
                }
                true
            }
            DiffPath::Numeric => false,
        };
        let df = if use_analytic {
            let d = (self.diff.as_ref().expect("checked"))(j, g)?;
            if d.rows() != self.target_dim + 1 || d.cols() != self.instance.dim() {
                return Err(Error::Evaluation(format!(
                    "{} differential has the wrong shape",
                    self.name
                )));
            }
            d
        } else {
            let zero = vec![C64::new(0.0, 0.0); self.instance.dim()];
            numeric_jacobian(
                |xi| {
                    let x = exp_at(&self.instance, g, &AlgebraVector::new(xi.to_vec()))?;
                    self.raw(j, &x)
                },
                &zero,
                DEFAULT_FD_STEP,
            )?
        };
        Ok((f, df))
    }

    /// `(df_j)_g` as an `n × m` matrix between orthonormal frames.
    pub fn frame_differential(&self, j: u64, g: &GroupElement) -> Result<ComplexMatrix> {
        self.frame_differential_with(j, g, DiffPath::Auto)
    }

    pub fn frame_differential_with(
        &self,
        j: u64,
        g: &GroupElement,
        path: DiffPath,
    ) -> Result<ComplexMatrix> {
        let (f, df) = self.homogeneous_differential(j, g, path)?;
        homogeneous_frame_differential(&f, &df)
    }

    pub fn df_norm(&self, j: u64, g: &GroupElement) -> Result<LinearMapNorm> {
        spectral_norm(&self.frame_differential(j, g)?)
    }

    pub fn df_norm_with(&self, j: u64, g: &GroupElement, path: DiffPath) -> Result<LinearMapNorm> {
        spectral_norm(&self.frame_differential_with(j, g, path)?)
    }
}

/// Upper limit on grid nodes per scan.
pub const MAX_GRID_NODES: usize = 5_000_000;

/// Product grid with `n` points per real axis on `[-r, r]^{2·dim}`, restricted to the
/// closed ball of radius `r` and listed in lexicographic order of the flat index.
pub fn ball_grid(dim: usize, radius: f64, n: usize) -> Result<Vec<AlgebraVector>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "grid needs at least 2 points per axis, got {n}"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let axes = 2 * dim;
    let total = (n as f64).powi(axes as i32);
    if total > MAX_GRID_NODES as f64 {
        return Err(Error::InvalidInput(format!(
            "grid of {n}^{axes} nodes is too large"
        )));
    }
    let step = 2.0 * radius / (n - 1) as f64;
    let ticks: Vec<f64> = (0..n).map(|i| -radius + step * i as f64).collect();
    let slack = radius * (1.0 + 1e-12);
    let mut out = Vec::new();
    let mut idx = vec![0usize; axes];
    'outer: loop {
        let parts: Vec<f64> = idx.iter().map(|&i| ticks[i]).collect();
        if parts.iter().map(|x| x * x).sum::<f64>().sqrt() <= slack {
            out.push(AlgebraVector::from_real_parts(&parts));
        }
        for a in (0..axes).rev() {
            idx[a] += 1;
            if idx[a] < n {
                continue 'outer;
            }
            idx[a] = 0;
        }
        break;
    }
    Ok(out)
}

/// Boundary directions used for containment checks: 64 angles when `dim = 1`; otherwise the
/// `±` real and imaginary axes plus 64 fixed pseudo-random unit directions.
pub fn boundary_directions(dim: usize) -> Vec<AlgebraVector> {
    if dim == 1 {
        return (0..64)
            .map(|k| {
                AlgebraVector::new(vec![C64::from_polar(
                    1.0,
                    std::f64::consts::TAU * k as f64 / 64.0,
                )])
            })
            .collect();
    }
    let mut out = Vec::new();
    for a in 0..dim {
        for unit in [
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, -1.0),
        ] {
            out.push(AlgebraVector::basis(dim, a).scale(unit));
        }
    }
    let mut rng = stream_rng(0xb0da, dim as u64);
    out.extend((0..64).map(|_| random_unit(&mut rng, dim)));
    out
}

/// True when the center and the sampled boundary of the exp-ball lie in the family's domain.
pub fn exp_ball_in_domain(fam: &HoloFamily, center: &GroupElement, radius: f64) -> bool {
    if !fam.contains(center) {
        return false;
    }
    let inst = fam.instance();
    boundary_directions(inst.dim()).iter().all(|d| {
        exp_at(inst, center, &d.scale_real(radius))
            .map(|g| fam.contains(&g))
            .unwrap_or(false)
    })
}

/// Exp-ball `{exp_at(center, ξ) : ‖ξ‖ ≤ radius}` sampled on a product grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub center: GroupElement,
    pub radius: f64,
    /// Points per real axis.
    pub grid: usize,
}

impl Region {
    pub fn new(center: GroupElement, radius: f64, grid: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "region radius must be positive, got {radius}"
            )));
        }
        if grid < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 2 points per axis, got {grid}"
            )));
        }
        Ok(Self {
            center,
            radius,
            grid,
        })
    }

    /// 41 points per real axis in one complex dimension; in higher dimensions the largest odd
    /// count keeping the full product grid at or below 250 000 nodes.
    pub fn default_grid(dim: usize) -> usize {
        if dim <= 1 {
            return 41;
        }
        let axes = 2 * dim as i32;
        let mut n = 3usize;
        while ((n + 2) as f64).powi(axes) <= 250_000.0 {
            n += 2;
        }
        n
    }

    pub fn grid_spacing(&self) -> f64 {
        2.0 * self.radius / (self.grid - 1) as f64
    }

    pub fn offsets(&self, dim: usize) -> Result<Vec<AlgebraVector>> {
        ball_grid(dim, self.radius, self.grid)
    }

    /// Checks that the closed region sits inside the family's domain.
    pub fn validate(&self, fam: &HoloFamily) -> Result<()> {
        fam.instance().check_member(&self.center)?;
        if !exp_ball_in_domain(fam, &self.center, self.radius) {
            return Err(Error::Domain(format!(
                "exp-ball of radius {} around {} is not contained in the domain of {}",
                self.radius,
                self.center,
                fam.name()
            )));
        }
        Ok(())
    }

    pub fn nodes(
        &self,
        fam: &HoloFamily,
        exec: Exec,
    ) -> Result<(Vec<AlgebraVector>, Vec<GroupElement>)> {
        let inst = fam.instance();
        let offsets = self.offsets(inst.dim())?;
        let nodes = map_indexed(exec, offsets.len(), |i| {
            exp_at(inst, &self.center, &offsets[i])
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        Ok((offsets, nodes))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Threshold the maxima must exceed for a non-normal verdict (and stay below for normal).
    pub cap: f64,
    pub exec: Exec,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            cap: 10.0,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Growth {
    Bounded,
    Growing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Normal,
    NonNormal,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Normal => "normal",
            Verdict::NonNormal => "non-normal",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexMax {
    pub j: u64,
    pub max: f64,
    /// Flat position of the maximizing node among the grid nodes.
    pub argmax_node: usize,
    pub argmax_offset: AlgebraVector,
    pub argmax_point: Vec<C64>,
    pub failed_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub family: String,
    pub cap: f64,
    pub grid: usize,
    pub nodes: usize,
    pub per_index: Vec<IndexMax>,
    /// Least-squares slope of `ln max` against `ln j`.
    pub growth_exponent: Option<f64>,
    pub growth: Growth,
    pub verdict: Verdict,
}

impl NormalityReport {
    pub fn maxima(&self) -> Vec<f64> {
        self.per_index.iter().map(|m| m.max).collect()
    }
}

/// Number of trailing indices that must grow strictly for a growing classification.
pub const GROWTH_WINDOW: usize = 5;
/// Minimum fitted exponent for a growing classification.
pub const GROWTH_EXPONENT_MIN: f64 = 0.25;

/// Least-squares slope of `ln y` against `ln x` over positive pairs.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

pub fn check_indices(indices: &[u64]) -> Result<()> {
    if indices.is_empty() {
        return Err(Error::InvalidInput("index list is empty".into()));
    }
    if indices[0] == 0 {
        return Err(Error::InvalidInput("indices start at 1".into()));
    }
    if indices.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "indices must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Grid maximum of `‖df_j‖` over the region for each index, with a growth classification.
pub fn marty_scan(
    fam: &HoloFamily,
    region: &Region,
    indices: &[u64],
    opts: ScanOptions,
) -> Result<NormalityReport> {
    check_indices(indices)?;
    if opts.cap.is_nan() || opts.cap <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "cap must be positive, got {}",
            opts.cap
        )));
    }
    region.validate(fam)?;
    let (offsets, nodes) = region.nodes(fam, opts.exec)?;
    let total = nodes.len();
    let mut per_index = Vec::with_capacity(indices.len());
    for &j in indices {
        let values: Vec<f64> = map_indexed(opts.exec, total, |i| {
            fam.df_norm(j, &nodes[i])
                .map(|n| n.value())
                .unwrap_or(f64::NAN)
        });
        let failed = values.iter().filter(|v| v.is_nan()).count();
        if failed * 100 > total {
            return Err(Error::Scan { failed, total });
        }
        let best = argmax(&values).ok_or(Error::Scan { failed, total })?;
        per_index.push(IndexMax {
            j,
            max: values[best],
            argmax_node: best,
            argmax_offset: offsets[best].clone(),
            argmax_point: nodes[best].ambient(),
            failed_nodes: failed,
        });
    }
    let maxima: Vec<f64> = per_index.iter().map(|m| m.max).collect();
    let js: Vec<f64> = indices.iter().map(|&j| j as f64).collect();
    let growth_exponent = log_log_slope(&js, &maxima);
    let tail_growing = maxima.len() >= GROWTH_WINDOW
        && maxima[maxima.len() - GROWTH_WINDOW..]
            .windows(2)
            .all(|w| w[1] > w[0]);
    let growing = tail_growing && growth_exponent.is_some_and(|e| e > GROWTH_EXPONENT_MIN);
    let last = *maxima.last().expect("nonempty");
    let verdict = if growing && last > opts.cap {
        Verdict::NonNormal
    } else if !growing && maxima.iter().all(|&m| m <= opts.cap) {
        Verdict::Normal
    } else {
        Verdict::Inconclusive
    };
    Ok(NormalityReport {
        family: fam.name().to_string(),
        cap: opts.cap,
        grid: region.grid,
        nodes: total,
        per_index,
        growth_exponent,
        growth: if growing {
            Growth::Growing
        } else {
            Growth::Bounded
        },
        verdict,
    })
}

/// The shipped families.
pub mod builtin {
    use super::*;
    use crate::liegroup::GroupKind;
    use crate::numkernel::{ONE, ZERO};

    pub const NAMES: [&str; 6] = [
        "linear-family",
        "power-family",
        "exp-family",
        "torus-power",
        "sl2-entry-power",
        "constant-family",
    ];

    /// `(name, group, description)` for every shipped family.
    pub fn describe() -> Vec<(&'static str, &'static str, &'static str)> {
        vec![
            (
                "linear-family",
                "additive",
                "f_j(z) = j·⟨c, z⟩ into ℙ¹; domain ‖z‖ < domain_radius",
            ),
            (
                "power-family",
                "additive (dim 1)",
                "f_j(z) = z^j into ℙ¹; domain |z| < domain_radius",
            ),
            (
                "exp-family",
                "additive (dim 1)",
                "f_j(z) = e^{jz} into ℙ¹; domain |z| < domain_radius",
            ),
            (
                "torus-power",
                "torus (dim 1)",
                "f_j(w) = w^j into ℙ¹; domain inner < |w| < outer",
            ),
            (
                "sl2-entry-power",
                "sl2",
                "f_j(g) = (g₁₁)^j into ℙ¹; domain ‖g‖_F < frobenius_limit",
            ),
            ("constant-family", "any", "f_j ≡ constant into ℙ¹"),
        ]
    }

    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    #[serde(default, deny_unknown_fields)]
    pub struct FamilyParams {
        /// Coefficients `c` of the linear family, as `[re, im]` pairs.
        pub coefficients: Vec<[f64; 2]>,
        pub domain_radius: f64,
        pub inner: f64,
        pub outer: f64,
        pub frobenius_limit: f64,
        pub constant: [f64; 2],
    }

    impl Default for FamilyParams {
        fn default() -> Self {
            Self {
                coefficients: vec![[1.0, 0.0]],
                domain_radius: 3.0,
                inner: 0.9,
                outer: 1.1,
                frobenius_limit: 10.0,
                constant: [0.5, 0.0],
            }
        }
    }

    fn need(inst: &GroupInstance, kind: GroupKind, dim: Option<usize>, family: &str) -> Result<()> {
        if inst.kind() != kind || dim.is_some_and(|d| inst.dim() != d) {
            let want = match dim {
                Some(d) => format!("{} of dimension {d}", kind.name()),
                None => kind.name().to_string(),
            };
            return Err(Error::InvalidInput(format!(
                "{family} is defined on {want}, not {} of dimension {}",
                inst.name(),
                inst.dim()
            )));
        }
        Ok(())
    }

    fn positive(name: &str, v: f64) -> Result<()> {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "{name} must be positive, got {v}"
            )));
        }
        Ok(())
    }

    fn coords(g: &GroupElement) -> &[C64] {
        g.coords().expect("coordinate element")
    }

    fn disk_member(radius: f64) -> MemberFn {
        Arc::new(move |g: &GroupElement| {
            g.coords()
                .is_some_and(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() < radius)
        })
    }

    fn column(top: C64, bottom: C64) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[&[top], &[bottom]]).expect("finite")
    }

    /// Builds a shipped family on `inst`.
    pub fn build(name: &str, inst: &GroupInstance, params: &FamilyParams) -> Result<HoloFamily> {
        match name {
            "linear-family" => {
                need(inst, GroupKind::Additive, None, name)?;
                positive("domain_radius", params.domain_radius)?;
                let c: Vec<C64> = params
                    .coefficients
                    .iter()
                    .map(|p| C64::new(p[0], p[1]))
                    .collect();
                if c.len() != inst.dim() {
                    return Err(Error::InvalidInput(format!(
                        "linear-family needs {} coefficients, got {}",
                        inst.dim(),
                        c.len()
                    )));
                }
                let ce = c.clone();
                let eval: EvalFn = Arc::new(move |j, g| {
                    let s: C64 = ce.iter().zip(coords(g)).map(|(a, z)| a * z).sum();
                    Ok(vec![ONE, s * j as f64])
                });
                let diff: DiffFn = Arc::new(move |j, _g| {
                    let row: Vec<C64> = c.iter().map(|a| a * j as f64).collect();
                    ComplexMatrix::from_rows(&[&vec![ZERO; row.len()], &row])
                });
                let r = params.domain_radius;
                HoloFamily::new(name, inst.clone(), 1, "j ≥ 1", eval, disk_member(r))?
                    .with_differential(diff, &inst.identity(), r.min(1.0))
            }
            "power-family" => {
                need(inst, GroupKind::Additive, Some(1), name)?;
                positive("domain_radius", params.domain_radius)?;
                let eval: EvalFn = Arc::new(|j, g| Ok(vec![ONE, coords(g)[0].powu(j as u32)]));
                let diff: DiffFn = Arc::new(|j, g| {
                    let z = coords(g)[0];
                    Ok(column(ZERO, z.powu(j as u32 - 1) * j as f64))
                });
                let r = params.domain_radius;
                HoloFamily::new(name, inst.clone(), 1, "j ≥ 1", eval, disk_member(r))?
                    .with_differential(diff, &inst.identity(), r.min(1.0))
            }
            "exp-family" => {
                need(inst, GroupKind::Additive, Some(1), name)?;
                positive("domain_radius", params.domain_radius)?;
                // [1 : e^{jz}] or, when that would be large, the equivalent [e^{-jz} : 1].
                let eval: EvalFn = Arc::new(|j, g| {
                    let u = coords(g)[0] * j as f64;
                    Ok(if u.re <= 0.0 {
                        vec![ONE, u.exp()]
                    } else {
                        vec![(-u).exp(), ONE]
                    })
                });
                let diff: DiffFn = Arc::new(|j, g| {
                    let jf = j as f64;
                    let u = coords(g)[0] * jf;
                    Ok(if u.re <= 0.0 {
                        column(ZERO, u.exp() * jf)
                    } else {
                        column(-(-u).exp() * jf, ZERO)
                    })
                });
                let r = params.domain_radius;
                HoloFamily::new(name, inst.clone(), 1, "j ≥ 1", eval, disk_member(r))?
                    .with_differential(diff, &inst.identity(), r.min(1.0))
            }
            "torus-power" => {
                need(inst, GroupKind::Torus, Some(1), name)?;
                positive("inner", params.inner)?;
                if !(params.outer > params.inner && params.outer.is_finite()) {
                    return Err(Error::InvalidInput(
                        "torus annulus needs inner < outer".into(),
                    ));
                }
                let eval: EvalFn = Arc::new(|j, g| Ok(vec![ONE, coords(g)[0].powu(j as u32)]));
                // d/dt (w e^t)^j = j w^j
                let diff: DiffFn =
                    Arc::new(|j, g| Ok(column(ZERO, coords(g)[0].powu(j as u32) * j as f64)));
                let (lo, hi) = (params.inner, params.outer);
                let member: MemberFn = Arc::new(move |g| {
                    g.coords().is_some_and(|c| {
                        let r = c[0].norm();
                        lo < r && r < hi
                    })
                });
                let anchor_radius = 0.5 * (hi.ln().min(-lo.ln())).clamp(1e-6, 1.0);
                let fam = HoloFamily::new(name, inst.clone(), 1, "j ≥ 1", eval, member)?;
                if lo < 1.0 && 1.0 < hi {
                    fam.with_differential(diff, &inst.identity(), anchor_radius)
                } else {
                    let mid = inst.element_from_coords(vec![C64::new(0.5 * (lo + hi), 0.0)])?;
                    fam.with_differential(diff, &mid, 0.25 * (hi - lo) / hi)
                }
            }
            "sl2-entry-power" => {
                need(inst, GroupKind::SpecialLinear2, None, name)?;
                positive("frobenius_limit", params.frobenius_limit)?;
                if params.frobenius_limit <= 2f64.sqrt() {
                    return Err(Error::InvalidInput(
                        "frobenius_limit must exceed √2 (the identity's norm)".into(),
                    ));
                }
                let m11 = |g: &GroupElement| g.matrix().expect("matrix element")[(0, 0)];
                let eval: EvalFn = Arc::new(move |j, g| Ok(vec![ONE, m11(g).powu(j as u32)]));
                let basis: Vec<ComplexMatrix> = inst.basis().to_vec();
                let diff: DiffFn = Arc::new(move |j, g| {
                    let m = g.matrix().expect("matrix element");
                    let lead = m[(0, 0)].powu(j as u32 - 1) * j as f64;
                    let row: Vec<C64> = basis.iter().map(|e| (m * e)[(0, 0)] * lead).collect();
                    ComplexMatrix::from_rows(&[&vec![ZERO; row.len()], &row])
                });
                let limit = params.frobenius_limit;
                let member: MemberFn =
                    Arc::new(move |g| g.matrix().is_some_and(|m| m.frobenius_norm() < limit));
                HoloFamily::new(name, inst.clone(), 1, "j ≥ 1", eval, member)?.with_differential(
                    diff,
                    &inst.identity(),
                    0.5,
                )
            }
            "constant-family" => {
                let value = C64::new(params.constant[0], params.constant[1]);
                let d = inst.dim();
                let eval: EvalFn = Arc::new(move |_j, _g| Ok(vec![ONE, value]));
                let diff: DiffFn = Arc::new(move |_j, _g| Ok(ComplexMatrix::zeros(2, d)));
                let member: MemberFn = match inst.kind() {
                    GroupKind::Additive => disk_member(params.domain_radius),
                    _ => Arc::new(|_| true),
                };
                HoloFamily::new(name, inst.clone(), 1, "j ≥ 1", eval, member)?.with_differential(
                    diff,
                    &inst.identity(),
                    0.1,
                )
            }
            other => Err(Error::InvalidInput(format!(
                "unknown family '{other}'; available: {}",
                NAMES.join(", ")
            ))),
        }
    }
}
