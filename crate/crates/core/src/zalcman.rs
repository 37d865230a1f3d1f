//! Zalcman rescaling for non-normal families.
//!
//! For each index `j` the engine maximizes `‖(df_j)_g ξ‖` over the closed exp-ball of radius
//! `1/j` around `p₀` and unit `ξ`, giving `M_j`, `p_j` and `ξ_j`. With `ρ_j = 1/M_j` the
//! rescaled map is
//!
//! ```text
//!   φ_j(z) = f_j(exp_at(p_j, ρ_j · z)),   z ∈ ℂ^m, ‖z‖ < R_j
//! ```
//!
//! and `‖(dφ_j)_0 ξ_j‖ = ρ_j M_j = 1`, which is what the nonconstancy witness measures
//! independently, by finite differences of `φ_j` itself.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expmap::{abelian_log, dexp_at, exp_at};
use crate::family::{
    ball_grid, check_indices, exp_ball_in_domain, log_log_slope, HoloFamily, Region,
    GROWTH_EXPONENT_MIN,
};
use crate::liegroup::{left_translate_frame, AlgebraVector, GroupElement, GroupKind};
use crate::numkernel::{
    numeric_jacobian, top_singular_pair, vec_norm, ComplexMatrix, C64, DEFAULT_FD_STEP,
};
use crate::par::{argmax, map_indexed, Exec};
use crate::target::{fs_distance, homogeneous_frame_differential, ProjectivePoint};

const POLISH_MAX_ITERS: usize = 50;
const POLISH_MIN_STEP: f64 = 1e-4;
/// Domains larger than this multiple of `1/ρ_j` are reported as this value.
const DOMAIN_RADIUS_CAP: f64 = 1e12;

/// Post-processing of the maximizer location.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SnapRule {
    #[default]
    None,
    /// One-dimensional torus only: move `p_j` to the nearest `j`-th root of unity.
    RootsOfUnity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArgmaxOptions {
    /// Points per real axis of the search grid.
    pub grid: usize,
    pub exec: Exec,
}

impl Default for ArgmaxOptions {
    fn default() -> Self {
        Self {
            grid: 41,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Maximizer {
    pub j: u64,
    pub m: f64,
    pub point: GroupElement,
    /// `η` with `point = exp_at(p₀, η)`.
    pub offset: AlgebraVector,
    /// Unit maximizing direction (top right-singular vector).
    pub direction: AlgebraVector,
    pub grid_max: f64,
    pub grid_spacing: f64,
    pub polish_iterations: usize,
    /// Final polish step times the largest observed slope: a rough bound on the remaining
    /// gap to the true maximum.
    pub error_estimate: f64,
}

fn top_pair(fam: &HoloFamily, j: u64, g: &GroupElement) -> Result<(f64, Vec<C64>)> {
    top_singular_pair(&fam.frame_differential(j, g)?)
}

/// Grid search over the closed exp-ball of radius `1/j` around `p0`, then pattern-search polish.
pub fn argmax_mj(
    fam: &HoloFamily,
    j: u64,
    p0: &GroupElement,
    opts: ArgmaxOptions,
) -> Result<Maximizer> {
    if j == 0 {
        return Err(Error::InvalidInput("indices start at 1".into()));
    }
    let inst = fam.instance();
    let radius = 1.0 / j as f64;
    let region = Region::new(p0.clone(), radius, opts.grid)?;
    region.validate(fam)?;
    let (offsets, nodes) = region.nodes(fam, opts.exec)?;
    let values: Vec<f64> = map_indexed(opts.exec, nodes.len(), |i| {
        top_pair(fam, j, &nodes[i]).map(|p| p.0).unwrap_or(f64::NAN)
    });
    let best = argmax(&values)
        .ok_or_else(|| Error::Evaluation(format!("no grid node evaluable at j = {j}")))?;
    let grid_max = values[best];
    if grid_max == 0.0 {
        return Err(Error::DegenerateFamily(format!(
            "{} has vanishing differential on the 1/{j} ball",
            fam.name()
        )));
    }

    let mut eta = offsets[best].real_parts();
    let mut value = grid_max;
    let mut step = 0.5 * region.grid_spacing();
    let mut slope: f64 = 0.0;
    let mut iterations = 0;
    let eval_at = |parts: &[f64]| -> Option<f64> {
        let v = AlgebraVector::from_real_parts(parts);
        if v.norm() > radius {
            return None;
        }
        let g = exp_at(inst, p0, &v).ok()?;
        top_pair(fam, j, &g).ok().map(|p| p.0)
    };
    while iterations < POLISH_MAX_ITERS && step >= POLISH_MIN_STEP * radius {
        iterations += 1;
        let mut improved = false;
        for axis in 0..eta.len() {
            for sign in [1.0, -1.0] {
                let mut trial = eta.clone();
                trial[axis] += sign * step;
                if let Some(v) = eval_at(&trial) {
                    slope = slope.max((v - value).abs() / step);
                    if v > value * (1.0 + 1e-14) {
                        eta = trial;
                        value = v;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let offset = AlgebraVector::from_real_parts(&eta);
    let point = exp_at(inst, p0, &offset)?;
    let (m, dir) = top_pair(fam, j, &point)?;
    Ok(Maximizer {
        j,
        m,
        point,
        offset,
        direction: AlgebraVector::new(dir),
        grid_max,
        grid_spacing: region.grid_spacing(),
        polish_iterations: iterations,
        error_estimate: step * slope,
    })
}

/// One rescaling datum together with its family, so `φ_j` can be evaluated.
#[derive(Debug, Clone)]
pub struct RescalingStep {
    pub j: u64,
    pub point: GroupElement,
    pub xi: AlgebraVector,
    pub m: f64,
    pub rho: f64,
    /// `φ_j` is defined on `‖z‖ < domain_radius`.
    pub domain_radius: f64,
    family: HoloFamily,
}

/// Serializable view of a [`RescalingStep`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepSummary {
    pub j: u64,
    pub point: Vec<C64>,
    pub xi: AlgebraVector,
    pub m: f64,
    pub rho: f64,
    pub rho_m: f64,
    pub domain_radius: f64,
    pub witness: f64,
}

impl RescalingStep {
    pub fn family(&self) -> &HoloFamily {
        &self.family
    }

    fn check_z(&self, z: &[C64]) -> Result<()> {
        let dim = self.family.instance().dim();
        if z.len() != dim {
            return Err(Error::InvalidInput(format!(
                "φ takes {dim} coordinates, got {}",
                z.len()
            )));
        }
        if vec_norm(z) > self.domain_radius * (1.0 + 1e-9) {
            return Err(Error::Domain(format!(
                "‖z‖ = {} exceeds the domain radius {} of φ_{}",
                vec_norm(z),
                self.domain_radius,
                self.j
            )));
        }
        Ok(())
    }

    /// Source point `exp_at(p_j, ρ_j · z)` of `φ_j(z)`.
    pub fn source_point(&self, z: &[C64]) -> Result<GroupElement> {
        self.check_z(z)?;
        let v =
            left_translate_frame(&self.point, &AlgebraVector::new(z.to_vec())).scale_real(self.rho);
        exp_at(self.family.instance(), &self.point, &v)
    }

    pub fn phi_homogeneous(&self, z: &[C64]) -> Result<Vec<C64>> {
        self.family.homogeneous(self.j, &self.source_point(z)?)
    }

    pub fn phi(&self, z: &[C64]) -> Result<ProjectivePoint> {
        self.family.evaluate(self.j, &self.source_point(z)?)
    }

    /// `(dφ_j)_z` between orthonormal frames, by finite differences of `φ_j` itself.
    pub fn phi_differential(&self, z: &[C64]) -> Result<ComplexMatrix> {
        self.check_z(z)?;
        let h = (DEFAULT_FD_STEP / self.rho).min(0.25 * self.domain_radius);
        let f = self.phi_homogeneous(z)?;
        let inst = self.family.instance();
        let df = numeric_jacobian(
            |w| {
                let v = AlgebraVector::new(w.to_vec()).scale_real(self.rho);
                let g = exp_at(inst, &self.point, &v)?;
                self.family.homogeneous(self.j, &g)
            },
            z,
            h,
        )?;
        homogeneous_frame_differential(&f, &df)
    }

    pub fn summary(&self) -> Result<StepSummary> {
        Ok(StepSummary {
            j: self.j,
            point: self.point.ambient(),
            xi: self.xi.clone(),
            m: self.m,
            rho: self.rho,
            rho_m: self.rho * self.m,
            domain_radius: self.domain_radius,
            witness: nonconstancy_witness(self)?,
        })
    }
}

/// Builds `φ_j` at `p_j` with scale `ρ_j`.
///
/// `ξ_j` and `M_j` are re-read from the differential at `p_j`. The domain radius is the
/// largest `R` (found by doubling then bisection) for which the sampled boundary of the
/// exp-ball of radius `ρ_j R` around `p_j` stays inside the family's domain.
pub fn build_rescaled(
    fam: &HoloFamily,
    j: u64,
    p_j: &GroupElement,
    rho: f64,
) -> Result<RescalingStep> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "ρ must be positive and finite, got {rho}"
        )));
    }
    if !fam.contains(p_j) {
        return Err(Error::Domain(format!(
            "{p_j} lies outside the domain of {}",
            fam.name()
        )));
    }
    let (m, xi) = top_pair(fam, j, p_j)?;
    let inside = |r: f64| exp_ball_in_domain(fam, p_j, rho * r);
    let (mut lo, mut hi) = (0.0, 1.0);
    if inside(1.0) {
        lo = 1.0;
        hi = 2.0;
        while hi <= DOMAIN_RADIUS_CAP && inside(hi) {
            lo = hi;
            hi *= 2.0;
        }
    }
    if hi <= DOMAIN_RADIUS_CAP {
        for _ in 0..200 {
            if hi - lo <= 1e-12 * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if inside(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    if lo == 0.0 {
        return Err(Error::Domain(format!(
            "no exp-ball around {p_j} fits in the domain"
        )));
    }
    Ok(RescalingStep {
        j,
        point: p_j.clone(),
        xi: AlgebraVector::new(xi),
        m,
        rho,
        domain_radius: lo,
        family: fam.clone(),
    })
}

/// `‖(dφ_j)_0 t_j‖` where `t_j` solves `ρ_j (d exp_{p_j})_0 t_j = ρ_j ξ_j`.
pub fn nonconstancy_witness(step: &RescalingStep) -> Result<f64> {
    let inst = step.family.instance();
    let frame_map = dexp_at(inst, &step.point, &AlgebraVector::zeros(inst.dim()))?
        .matrix
        .scale_real(step.rho);
    let target: Vec<C64> = step.xi.coords().iter().map(|x| x * step.rho).collect();
    let t = frame_map.solve(&target).map_err(|e| {
        Error::Internal(format!(
            "frame map at 0 is singular for j = {}: {e}",
            step.j
        ))
    })?;
    let d = step.phi_differential(&vec![C64::new(0.0, 0.0); inst.dim()])?;
    Ok(vec_norm(&d.mat_vec(&t)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZalcmanOptions {
    pub argmax: ArgmaxOptions,
    pub snap: SnapRule,
}

impl Default for ZalcmanOptions {
    fn default() -> Self {
        Self {
            argmax: ArgmaxOptions::default(),
            snap: SnapRule::None,
        }
    }
}

fn snap_roots_of_unity(fam: &HoloFamily, j: u64, p: &GroupElement) -> Result<GroupElement> {
    let inst = fam.instance();
    if inst.kind() != GroupKind::Torus || inst.dim() != 1 {
        return Err(Error::InvalidInput(
            "root-of-unity snapping needs the one-dimensional torus".into(),
        ));
    }
    let w = p.coords().expect("torus element")[0];
    let k = (w.arg() * j as f64 / std::f64::consts::TAU).round();
    inst.element_from_coords(vec![C64::from_polar(
        1.0,
        std::f64::consts::TAU * k / j as f64,
    )])
}

/// Maximization, optional snapping and rescaling for every index.
pub fn rescaling_steps(
    fam: &HoloFamily,
    p0: &GroupElement,
    indices: &[u64],
    opts: ZalcmanOptions,
) -> Result<Vec<RescalingStep>> {
    check_indices(indices)?;
    let mut steps = Vec::with_capacity(indices.len());
    for &j in indices {
        let max = argmax_mj(fam, j, p0, opts.argmax)?;
        let point = match opts.snap {
            SnapRule::None => max.point,
            SnapRule::RootsOfUnity => snap_roots_of_unity(fam, j, &max.point)?,
        };
        let (m, _) = top_pair(fam, j, &point)?;
        if m == 0.0 {
            return Err(Error::DegenerateFamily(format!(
                "vanishing differential at p_{j}"
            )));
        }
        let step = build_rescaled(fam, j, &point, 1.0 / m)?;
        debug_assert_eq!(step.m, m);
        steps.push(step);
    }
    Ok(steps)
}

/// `|ρ_j M_j − 1|`, at most one ulp for steps built from a computed maximum.
pub fn rho_m_defect(step: &RescalingStep) -> f64 {
    (step.rho * step.m - 1.0).abs()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoTrend {
    pub indices: Vec<u64>,
    pub rho: Vec<f64>,
    /// Least-squares slope of `ln ρ_j` against `ln j`.
    pub slope: Option<f64>,
    pub tends_to_zero: bool,
}

/// Whether the scales shrink along the index list; a diagnostic, not a proof.
pub fn rho_trend(steps: &[RescalingStep]) -> RhoTrend {
    let indices: Vec<u64> = steps.iter().map(|s| s.j).collect();
    let rho: Vec<f64> = steps.iter().map(|s| s.rho).collect();
    let js: Vec<f64> = indices.iter().map(|&j| j as f64).collect();
    let slope = log_log_slope(&js, &rho);
    let tends_to_zero = slope.is_some_and(|s| s < -GROWTH_EXPONENT_MIN)
        && rho.len() >= 2
        && rho.last() < rho.first();
    RhoTrend {
        indices,
        rho,
        slope,
        tends_to_zero,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergeOptions {
    /// The last consecutive sup-distance must be below this for a Cauchy verdict.
    pub tolerance: f64,
    /// Points per real axis of the coarse limit-sample table.
    pub sample_grid: usize,
    pub exec: Exec,
}

impl Default for ConvergeOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            sample_grid: 9,
            exec: Exec::default(),
        }
    }
}

/// Increases below this are treated as rounding noise when testing monotonicity.
pub const DISTANCE_NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDistance {
    pub j: u64,
    pub k: u64,
    pub sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSample {
    pub z: Vec<C64>,
    pub value: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub radius: f64,
    pub grid: usize,
    pub points: usize,
    pub distances: Vec<PairDistance>,
    pub cauchy: bool,
    pub tolerance: f64,
    pub limit_index: u64,
    pub limit_samples: Vec<LimitSample>,
    pub witness: f64,
}

/// True when `values` never increase by more than the noise floor.
pub fn non_increasing(values: &[f64]) -> bool {
    values
        .windows(2)
        .all(|w| w[1] <= w[0] + DISTANCE_NOISE_FLOOR)
}

fn check_radius(steps: &[RescalingStep], radius: f64) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "compactum radius must be positive, got {radius}"
        )));
    }
    for s in steps {
        if radius > s.domain_radius {
            return Err(Error::Domain(format!(
                "radius {radius} exceeds the domain radius {} of step j = {}",
                s.domain_radius, s.j
            )));
        }
    }
    Ok(())
}

/// `sup_{‖z‖ ≤ R} d(φ_j(z), reference(z))` on the grid.
pub fn sup_distance_to_reference<F>(
    step: &RescalingStep,
    reference: F,
    radius: f64,
    grid: usize,
    exec: Exec,
) -> Result<f64>
where
    F: Fn(&[C64]) -> Result<Vec<C64>> + Sync + Send,
{
    check_radius(std::slice::from_ref(step), radius)?;
    let pts = ball_grid(step.family.instance().dim(), radius, grid)?;
    let d = map_indexed(exec, pts.len(), |i| -> Result<f64> {
        let z = pts[i].coords();
        fs_distance(&step.phi(z)?, &ProjectivePoint::new(reference(z)?)?)
    });
    let mut sup = 0.0f64;
    for v in d {
        sup = sup.max(v?);
    }
    Ok(sup)
}

/// Consecutive sup-distances between the rescaled maps on the ball `‖z‖ ≤ R`.
pub fn converge_check(
    steps: &[RescalingStep],
    radius: f64,
    grid: usize,
    opts: ConvergeOptions,
) -> Result<ConvergenceReport> {
    if steps.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "convergence check needs at least 3 steps, got {}",
            steps.len()
        )));
    }
    check_radius(steps, radius)?;
    let dim = steps[0].family.instance().dim();
    let pts = ball_grid(dim, radius, grid)?;
    let mut distances = Vec::with_capacity(steps.len() - 1);
    for pair in steps.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let d = map_indexed(opts.exec, pts.len(), |i| -> Result<f64> {
            let z = pts[i].coords();
            fs_distance(&a.phi(z)?, &b.phi(z)?)
        });
        let mut sup = 0.0f64;
        for v in d {
            sup = sup.max(v?);
        }
        distances.push(PairDistance {
            j: a.j,
            k: b.j,
            sup,
        });
    }
    let sups: Vec<f64> = distances.iter().map(|d| d.sup).collect();
    let cauchy = non_increasing(&sups) && *sups.last().expect("nonempty") < opts.tolerance;
    let last = steps.last().expect("nonempty");
    let sample_pts = ball_grid(dim, radius, opts.sample_grid)?;
    let limit_samples = map_indexed(opts.exec, sample_pts.len(), |i| -> Result<LimitSample> {
        let z = sample_pts[i].coords().to_vec();
        let value = last.phi(&z)?.coords().to_vec();
        Ok(LimitSample { z, value })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport {
        radius,
        grid,
        points: pts.len(),
        distances,
        cauchy,
        tolerance: opts.tolerance,
        limit_index: last.j,
        limit_samples,
        witness: nonconstancy_witness(last)?,
    })
}

/// Principal-log offset of `p` from `p0` for abelian instances.
pub fn abelian_offset(
    fam: &HoloFamily,
    p0: &GroupElement,
    p: &GroupElement,
) -> Result<AlgebraVector> {
    let inst = fam.instance();
    abelian_log(inst, &inst.mul(&inst.inv(p0)?, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::builtin::{build, FamilyParams};
    use crate::liegroup::GroupInstance;

    fn linear() -> HoloFamily {
        build(
            "linear-family",
            &GroupInstance::additive(1),
            &FamilyParams::default(),
        )
        .unwrap()
    }

    fn seq() -> ArgmaxOptions {
        ArgmaxOptions {
            grid: 21,
            exec: Exec::Sequential,
        }
    }

    #[test]
    fn linear_family_maximum_at_origin() {
        let fam = linear();
        let p0 = fam.instance().identity();
        for j in [1u64, 4, 9] {
            let m = argmax_mj(&fam, j, &p0, seq()).unwrap();
            assert!((m.m - j as f64).abs() < 1e-12 * j as f64);
            assert!(m.offset.norm() < 1e-12);
            assert!((m.direction.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_family_is_degenerate() {
        let inst = GroupInstance::additive(1);
        let fam = build("constant-family", &inst, &FamilyParams::default()).unwrap();
        assert!(matches!(
            argmax_mj(&fam, 2, &inst.identity(), seq()),
            Err(Error::DegenerateFamily(_))
        ));
    }

    #[test]
    fn ball_outside_domain_is_rejected() {
        let inst = GroupInstance::additive(1);
        let fam = linear();
        let edge = inst.element_from_coords(vec![C64::new(2.9, 0.0)]).unwrap();
        assert!(matches!(
            argmax_mj(&fam, 1, &edge, seq()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rescaled_linear_map_is_identity() {
        let fam = linear();
        let p = fam.instance().identity();
        let step = build_rescaled(&fam, 7, &p, 1.0 / 7.0).unwrap();
        let z = [C64::new(0.3, -1.1)];
        let phi = step.phi(&z).unwrap();
        let want = ProjectivePoint::from_affine(&z).unwrap();
        assert!(fs_distance(&phi, &want).unwrap() < 1e-12);
        assert!((step.domain_radius - 21.0).abs() < 1e-9);
    }

    #[test]
    fn witness_and_corruption() {
        let fam = linear();
        let p = fam.instance().identity();
        let step = build_rescaled(&fam, 5, &p, 0.2).unwrap();
        assert!((nonconstancy_witness(&step).unwrap() - 1.0).abs() < 1e-9);
        let mut bad = step.clone();
        bad.rho *= 0.5;
        assert!((nonconstancy_witness(&bad).unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn phi_rejects_points_outside_its_domain() {
        let fam = linear();
        let step = build_rescaled(&fam, 1, &fam.instance().identity(), 1.0).unwrap();
        assert!(matches!(
            step.phi(&[C64::new(4.0, 0.0)]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn converge_check_needs_three_steps_and_valid_radius() {
        let fam = linear();
        let opts = ZalcmanOptions {
            argmax: seq(),
            snap: SnapRule::None,
        };
        let steps = rescaling_steps(&fam, &fam.instance().identity(), &[1, 2, 3], opts).unwrap();
        assert!(converge_check(&steps[..2], 1.0, 11, ConvergeOptions::default()).is_err());
        let err = converge_check(&steps, 5.0, 11, ConvergeOptions::default()).unwrap_err();
        assert!(err.to_string().contains("j = 1"), "{err}");
        let rep = converge_check(&steps, 2.0, 11, ConvergeOptions::default()).unwrap();
        assert!(rep.cauchy);
        assert!(rep.distances.iter().all(|d| d.sup < 1e-12));
    }

    #[test]
    fn duplicated_step_has_zero_distance() {
        let fam = linear();
        let s = build_rescaled(&fam, 3, &fam.instance().identity(), 1.0 / 3.0).unwrap();
        let rep = converge_check(
            &[s.clone(), s.clone(), s],
            1.0,
            11,
            ConvergeOptions::default(),
        )
        .unwrap();
        assert!(rep.distances.iter().all(|d| d.sup == 0.0));
    }

    #[test]
    fn snapping_requires_torus() {
        let fam = linear();
        let opts = ZalcmanOptions {
            argmax: seq(),
            snap: SnapRule::RootsOfUnity,
        };
        assert!(rescaling_steps(&fam, &fam.instance().identity(), &[1], opts).is_err());
    }

    #[test]
    fn noise_floor_monotonicity() {
        assert!(non_increasing(&[3.0, 2.0, 2.0 + 1e-13, 1.0]));
        assert!(!non_increasing(&[1.0, 1.1]));
    }
}
