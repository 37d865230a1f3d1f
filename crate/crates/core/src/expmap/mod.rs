//! One-parameter subgroups and exponential maps.
//!
//! `one_param(X, z) = exp(zX)` is evaluated in closed form per instance. `exp_at(g, ξ)` is the
//! base-pointed exponential `g·exp(ξ)`; with left-trivialized tangent vectors the translation
//! `(dL_{g⁻¹})_g` is the coordinate identity, so `ξ` is used as the generator directly.
//!
//! The differential of `exp_at(g, ·)` at `ξ`, read in left-trivialized coordinates on both
//! sides, is the series
//!
//! ```text
//!   Σ_{k≥0} (-1)^k / (k+1)! · (ad_ξ)^k
//! ```
//!
//! truncated once the tail, bounded with `‖ad_ξ‖ ≤ C·‖ξ‖`, drops below 1e-12.

pub mod checks;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liegroup::{
    random_unit, AlgebraVector, ElementRepr, GroupElement, GroupInstance, GroupKind,
};
use crate::numkernel::{matrix_exp, numeric_jacobian, top_singular_pair, ComplexMatrix, C64, ONE};
use crate::par::{map_chunks, stream_rng, Exec};

/// Largest `|z|·‖X‖` accepted before `e^{zX}` is considered out of double range.
pub const OVERFLOW_LIMIT: f64 = 700.0;

/// Truncation target for the differential-of-exp series.
pub const DEXP_TAIL_TOL: f64 = 1e-12;

const MIN_ODE_STEPS: usize = 100;

fn overflow_guard(inst: &GroupInstance, x: &AlgebraVector, z: C64) -> Result<()> {
    if inst.kind() == GroupKind::Additive {
        return Ok(());
    }
    let magnitude = z.norm() * x.norm();
    if magnitude.is_nan() || magnitude > OVERFLOW_LIMIT {
        return Err(Error::Range {
            magnitude,
            limit: OVERFLOW_LIMIT,
        });
    }
    Ok(())
}

/// `exp(zX)`, the one-parameter subgroup generated by `X` evaluated at `z`.
pub fn one_param(inst: &GroupInstance, x: &AlgebraVector, z: C64) -> Result<GroupElement> {
    inst.check_algebra(x)?;
    overflow_guard(inst, x, z)?;
    match inst.kind() {
        GroupKind::Additive => inst.element_from_coords(x.coords().iter().map(|a| a * z).collect()),
        GroupKind::Torus => {
            inst.element_from_coords(x.coords().iter().map(|a| (a * z).exp()).collect())
        }
        GroupKind::GeneralLinear | GroupKind::SpecialLinear2 => {
            let m = matrix_exp(&inst.hat(x)?.scale(z))?;
            inst.finish_matrix(m)
        }
    }
}

/// Base-pointed exponential `exp_g(ξ) = g · exp(ξ)`.
pub fn exp_at(inst: &GroupInstance, g: &GroupElement, xi: &AlgebraVector) -> Result<GroupElement> {
    let step = one_param(inst, xi, ONE)?;
    inst.mul(g, &step)
}

/// Integrates `γ' = γ·(zX)` over `t ∈ [0, 1]` from the identity with classical RK4.
///
/// Each step right-multiplies the current point by the RK4 increment, computed from the four
/// stage evaluations of the left-invariant field. SL(2) iterates are pushed back onto
/// `det = 1` after every step. No matrix exponential is involved, so the result is an
/// independent check on [`one_param`]; the global error is O(steps⁻⁴).
pub fn ode_exp_oracle(
    inst: &GroupInstance,
    x: &AlgebraVector,
    z: C64,
    steps: usize,
) -> Result<GroupElement> {
    inst.check_algebra(x)?;
    if steps < MIN_ODE_STEPS {
        return Err(Error::InvalidInput(format!(
            "ODE oracle needs at least {MIN_ODE_STEPS} steps, got {steps}"
        )));
    }
    overflow_guard(inst, x, z)?;
    let h = 1.0 / steps as f64;
    match inst.kind() {
        GroupKind::Additive => {
            let inc: Vec<C64> = x.coords().iter().map(|a| a * z * h).collect();
            let mut g = vec![C64::new(0.0, 0.0); x.dim()];
            for _ in 0..steps {
                g.iter_mut().zip(&inc).for_each(|(p, d)| *p += d);
            }
            inst.element_from_coords(g)
        }
        GroupKind::Torus => {
            let mut g = vec![ONE; x.dim()];
            for (w, a) in g.iter_mut().zip(x.coords()) {
                let a = a * z * h;
                for _ in 0..steps {
                    let k1 = *w * a;
                    let k2 = (*w + k1 * 0.5) * a;
                    let k3 = (*w + k2 * 0.5) * a;
                    let k4 = (*w + k3) * a;
                    *w += (k1 + k2 * 2.0 + k3 * 2.0 + k4) / 6.0;
                }
            }
            inst.element_from_coords(g)
        }
        GroupKind::GeneralLinear | GroupKind::SpecialLinear2 => {
            let a = inst.hat(x)?.scale(z * h);
            let mut g = inst.identity();
            for _ in 0..steps {
                let gm = g.matrix().expect("matrix element");
                let k1 = gm * &a;
                let k2 = &(gm + &k1.scale_real(0.5)) * &a;
                let k3 = &(gm + &k2.scale_real(0.5)) * &a;
                let k4 = &(gm + &k3) * &a;
                let incr = &(&(&k1 + &k2.scale_real(2.0)) + &k3.scale_real(2.0)) + &k4;
                let next = gm + &incr.scale_real(1.0 / 6.0);
                g = inst.finish_matrix(next)?;
            }
            Ok(g)
        }
    }
}

/// The curve `z ↦ exp(zX)` with its defining checks.
#[derive(Debug, Clone)]
pub struct OneParamCurve {
    instance: GroupInstance,
    generator: AlgebraVector,
}

impl OneParamCurve {
    const PROBES: [(f64, f64); 3] = [(0.3, 0.2), (-0.5, 0.7), (1.1, -0.4)];

    /// Builds the curve, verifying `γ(0) = e` to 1e-12 and the Cauchy–Riemann equations at
    /// a few probe points to 1e-6.
    pub fn new(instance: GroupInstance, generator: AlgebraVector) -> Result<Self> {
        instance.check_algebra(&generator)?;
        let curve = Self {
            instance,
            generator,
        };
        let origin = curve.eval(C64::new(0.0, 0.0))?;
        let drift = curve
            .instance
            .distance_proxy(&curve.instance.identity(), &origin)?;
        if drift > 1e-12 {
            return Err(Error::Internal(format!(
                "γ(0) differs from the identity by {drift:e}"
            )));
        }
        for (re, im) in Self::PROBES {
            let scale = curve.generator.norm().max(1.0);
            let z = C64::new(re, im) / scale;
            let r = curve.holomorphy_residual(z)?;
            if r > 1e-6 {
                return Err(Error::Internal(format!(
                    "Cauchy–Riemann residual {r:e} at z = {z}"
                )));
            }
        }
        Ok(curve)
    }

    pub fn eval(&self, z: C64) -> Result<GroupElement> {
        one_param(&self.instance, &self.generator, z)
    }

    pub fn generator(&self) -> &AlgebraVector {
        &self.generator
    }

    /// `‖∂_y γ − i ∂_x γ‖ / (1 + ‖∂_x γ‖)` by central differences in ambient coordinates.
    pub fn holomorphy_residual(&self, z: C64) -> Result<f64> {
        let h = 1e-5;
        let at = |dz: C64| self.eval(z + dz).map(|g| g.ambient());
        let (xp, xm) = (at(C64::new(h, 0.0))?, at(C64::new(-h, 0.0))?);
        let (yp, ym) = (at(C64::new(0.0, h))?, at(C64::new(0.0, -h))?);
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..xp.len() {
            let dx = (xp[i] - xm[i]) / (2.0 * h);
            let dy = (yp[i] - ym[i]) / (2.0 * h);
            num += (dy - C64::i() * dx).norm_sqr();
            den += dx.norm_sqr();
        }
        Ok(num.sqrt() / (1.0 + den.sqrt()))
    }
}

/// Interval estimate of `C = sup_{‖X‖=‖Y‖=1} ‖[X, Y]‖`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureConstant {
    /// Largest `‖[X, Y]‖` actually evaluated on a unit pair: a certified lower bound.
    pub sampled_max: f64,
    /// `sqrt(Σ_ab ‖[ε_a, ε_b]‖²)`: a certified upper bound.
    pub upper_bound: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingOptions {
    pub samples: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0x5eed,
            exec: Exec::default(),
        }
    }
}

const SAMPLE_CHUNK: usize = 1 << 16;
const ASCENT_ITERS: usize = 200;

/// Estimates the structure constant by random unit pairs followed by alternating ascent.
///
/// The ascent step fixes one argument and replaces the other with the top right-singular
/// vector of the corresponding `ad` matrix, which can only increase `‖[X, Y]‖`.
pub fn structure_constant(inst: &GroupInstance, opts: SamplingOptions) -> StructureConstant {
    let upper_bound = inst.bracket_upper_bound();
    if inst.is_abelian() {
        return StructureConstant {
            sampled_max: 0.0,
            upper_bound,
            samples: 0,
            seed: opts.seed,
        };
    }
    let dim = inst.dim();
    let best = map_chunks(opts.exec, opts.samples, SAMPLE_CHUNK, |chunk, range| {
        let mut rng = stream_rng(opts.seed, chunk as u64);
        let mut best: Option<(f64, AlgebraVector, AlgebraVector)> = None;
        for _ in range {
            let x = random_unit(&mut rng, dim);
            let y = random_unit(&mut rng, dim);
            let v = inst.bracket(&x, &y).norm();
            if best.as_ref().is_none_or(|(b, _, _)| v > *b) {
                best = Some((v, x, y));
            }
        }
        best
    })
    .into_iter()
    .flatten()
    .fold(
        None,
        |acc: Option<(f64, AlgebraVector, AlgebraVector)>, cand| match acc {
            Some(a) if a.0 >= cand.0 => Some(a),
            _ => Some(cand),
        },
    );

    let mut sampled_max = 0.0;
    if let Some((v, mut x, mut y)) = best {
        sampled_max = v;
        for _ in 0..ASCENT_ITERS {
            let ad_x = inst.bracket_ad(&x).expect("dimension checked");
            if let Ok((_, vy)) = top_singular_pair(&ad_x) {
                y = AlgebraVector::new(vy);
            }
            let ad_y = inst.bracket_ad(&y).expect("dimension checked");
            if let Ok((_, vx)) = top_singular_pair(&ad_y) {
                x = AlgebraVector::new(vx);
            }
            let value = inst.bracket(&x, &y).norm();
            let improved = value > sampled_max * (1.0 + 1e-15);
            sampled_max = sampled_max.max(value);
            if !improved {
                break;
            }
        }
    }
    StructureConstant {
        sampled_max,
        upper_bound,
        samples: opts.samples,
        seed: opts.seed,
    }
}

/// Left-trivialized differential of `exp_at(base, ·)` at `xi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DexpOperator {
    pub base: GroupElement,
    pub xi: AlgebraVector,
    pub matrix: ComplexMatrix,
    /// Highest power of `ad_ξ` kept.
    pub order: usize,
    /// Upper bound on the discarded tail `Σ_{k>order} (C‖ξ‖)^k / (k+1)!`.
    pub tail_bound: f64,
}

/// Smallest truncation order whose tail bound is at most `tol`, with that bound.
fn truncation_order(x: f64, tol: f64) -> (usize, f64) {
    if x == 0.0 {
        return (0, 0.0);
    }
    // terms[k] = x^k / (k+1)!
    let mut terms = vec![1.0f64];
    let mut k = 0usize;
    loop {
        let next = terms[k] * x / (k + 2) as f64;
        k += 1;
        terms.push(next);
        if (k as f64) > x + 2.0 && next < tol * 1e-6 {
            break;
        }
    }
    // suffix[k] = Σ_{i ≥ k} terms[i], summed from the small end
    let mut suffix = vec![0.0; terms.len() + 1];
    for i in (0..terms.len()).rev() {
        suffix[i] = suffix[i + 1] + terms[i];
    }
    let order = (0..terms.len())
        .find(|&k| suffix[k + 1] <= tol)
        .unwrap_or(terms.len() - 1);
    (order, suffix[order + 1])
}

pub fn dexp_at(inst: &GroupInstance, g: &GroupElement, xi: &AlgebraVector) -> Result<DexpOperator> {
    inst.check_member(g)?;
    inst.check_algebra(xi)?;
    let d = inst.dim();
    let (order, tail_bound) =
        truncation_order(inst.bracket_upper_bound() * xi.norm(), DEXP_TAIL_TOL);
    let ad = inst.bracket_ad(xi)?;
    let id = ComplexMatrix::identity(d);
    // Horner in ad: c_0 I + ad (c_1 I + ad (c_2 I + …)), c_k = (-1)^k / (k+1)!
    let coeff = |k: usize| {
        let fact: f64 = (1..=k + 1).map(|i| i as f64).product();
        if k.is_multiple_of(2) {
            1.0 / fact
        } else {
            -1.0 / fact
        }
    };
    let mut acc = id.scale_real(coeff(order));
    for k in (0..order).rev() {
        acc = &id.scale_real(coeff(k)) + &(&ad * &acc);
    }
    Ok(DexpOperator {
        base: g.clone(),
        xi: xi.clone(),
        matrix: acc,
        order,
        tail_bound,
    })
}

/// `(e^{C r} − 1) / (C r)` with the analytic limit 1 for `C r < 1e-14`.
pub fn dexp_bound_factor(c: f64, r: f64) -> f64 {
    let x = c * r;
    if x < 1e-14 {
        1.0
    } else {
        x.exp_m1() / x
    }
}

/// Norm bound for `(d exp_g)_ξ` using the instance's certified upper structure constant.
pub fn dexp_norm_bound(inst: &GroupInstance, xi: &AlgebraVector) -> f64 {
    dexp_bound_factor(inst.bracket_upper_bound(), xi.norm())
}

/// Finite-difference counterpart of [`dexp_at`]: the holomorphic Jacobian of
/// `ξ′ ↦ exp_at(g, ξ′)` at `ξ`, converted column by column to left-trivialized coordinates.
pub fn dexp_finite_difference(
    inst: &GroupInstance,
    g: &GroupElement,
    xi: &AlgebraVector,
    h: f64,
) -> Result<ComplexMatrix> {
    let jac = numeric_jacobian(
        |v| exp_at(inst, g, &AlgebraVector::new(v.to_vec())).map(|x| x.ambient()),
        xi.coords(),
        h,
    )?;
    let x = exp_at(inst, g, xi)?;
    let cols: Vec<Vec<C64>> = (0..jac.cols())
        .map(|j| {
            inst.trivialize(&x, &jac.column(j))
                .map(AlgebraVector::into_coords)
        })
        .collect::<Result<_>>()?;
    ComplexMatrix::from_columns(&cols)
}

/// Random group element `exp(X₁)·exp(X₂)` with `‖X_i‖ ≤ spread`.
pub fn random_element<R: Rng + ?Sized>(
    inst: &GroupInstance,
    rng: &mut R,
    spread: f64,
) -> Result<GroupElement> {
    let a = one_param(inst, &inst.random_algebra(rng, spread), ONE)?;
    let b = one_param(inst, &inst.random_algebra(rng, spread), ONE)?;
    inst.mul(&a, &b)
}

/// Uniform point of the closed complex disk of radius `r`.
pub fn random_disk<R: Rng + ?Sized>(rng: &mut R, r: f64) -> C64 {
    let rad = r * rng.random::<f64>().sqrt();
    C64::from_polar(rad, std::f64::consts::TAU * rng.random::<f64>())
}

/// Principal logarithm for the abelian instances (additive, torus).
pub fn abelian_log(inst: &GroupInstance, g: &GroupElement) -> Result<AlgebraVector> {
    inst.check_member(g)?;
    match (inst.kind(), g.repr()) {
        (GroupKind::Additive, ElementRepr::Coords(c)) => Ok(AlgebraVector::new(c.clone())),
        (GroupKind::Torus, ElementRepr::Coords(c)) => {
            Ok(AlgebraVector::new(c.iter().map(|w| w.ln()).collect()))
        }
        _ => Err(Error::InvalidInput(format!(
            "no logarithm implemented for {}",
            inst.name()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{spectral_norm, ZERO};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn one_param_additive() {
        let g = GroupInstance::additive(2);
        let x = AlgebraVector::new(vec![ONE, c(0.0, 1.0)]);
        let p = one_param(&g, &x, c(2.0, 0.0)).unwrap();
        assert_eq!(p.coords().unwrap(), &[c(2.0, 0.0), c(0.0, 2.0)]);
    }

    #[test]
    fn one_param_torus_half_turn() {
        let t = GroupInstance::torus(1);
        let p = one_param(
            &t,
            &AlgebraVector::new(vec![ONE]),
            c(0.0, std::f64::consts::PI),
        )
        .unwrap();
        assert!((p.coords().unwrap()[0] + ONE).norm() < 1e-12);
    }

    #[test]
    fn one_param_gl_nilpotent() {
        let g = GroupInstance::general_linear(2);
        // E_01 is basis element 1
        let x = AlgebraVector::basis(4, 1);
        let p = one_param(&g, &x, ONE).unwrap();
        let want = ComplexMatrix::from_rows(&[&[ONE, ONE], &[ZERO, ONE]]).unwrap();
        assert!((p.matrix().unwrap() - &want).max_abs() < 1e-15);
    }

    #[test]
    fn one_param_overflow_guard() {
        let t = GroupInstance::torus(1);
        let err = one_param(&t, &AlgebraVector::new(vec![ONE]), c(800.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Range { magnitude, .. } if magnitude == 800.0));
    }

    #[test]
    fn exp_at_additive_is_translation() {
        let g = GroupInstance::additive(2);
        let p = g
            .element_from_coords(vec![c(1.0, -1.0), c(0.5, 0.0)])
            .unwrap();
        let xi = AlgebraVector::new(vec![c(0.25, 0.5), c(-2.0, 1.0)]);
        let q = exp_at(&g, &p, &xi).unwrap();
        assert_eq!(q.coords().unwrap(), &[c(1.25, -0.5), c(-1.5, 1.0)]);
    }

    #[test]
    fn exp_at_zero_is_basepoint() {
        let s = GroupInstance::sl2();
        let mut rng = stream_rng(1, 0);
        let g = random_element(&s, &mut rng, 1.0).unwrap();
        let q = exp_at(&s, &g, &AlgebraVector::zeros(3)).unwrap();
        assert!(s.distance_proxy(&g, &q).unwrap() < 1e-15);
    }

    #[test]
    fn exp_at_torus() {
        let t = GroupInstance::torus(1);
        let g = t.element_from_coords(vec![c(2.0, 0.0)]).unwrap();
        let q = exp_at(&t, &g, &AlgebraVector::new(vec![c(3f64.ln(), 0.0)])).unwrap();
        assert!((q.coords().unwrap()[0] - c(6.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn ode_oracle_trivial_cases() {
        for inst in [
            GroupInstance::additive(2),
            GroupInstance::torus(2),
            GroupInstance::sl2(),
            GroupInstance::general_linear(2),
        ] {
            let zero = AlgebraVector::zeros(inst.dim());
            let g = ode_exp_oracle(&inst, &zero, c(1.3, -0.2), 100).unwrap();
            assert_eq!(g, inst.identity(), "{}", inst.name());
        }
        let a = GroupInstance::additive(1);
        let x = AlgebraVector::new(vec![c(0.7, -0.3)]);
        let g = ode_exp_oracle(&a, &x, c(1.5, 0.5), 100).unwrap();
        let exact = one_param(&a, &x, c(1.5, 0.5)).unwrap();
        assert!(a.distance_proxy(&g, &exact).unwrap() < 1e-13);
        assert!(ode_exp_oracle(&a, &x, ONE, 99).is_err());
    }

    #[test]
    fn curve_checks_pass() {
        let s = GroupInstance::sl2();
        let curve = OneParamCurve::new(
            s.clone(),
            AlgebraVector::new(vec![c(0.5, 0.1), c(0.2, 0.0), c(-0.3, 0.4)]),
        )
        .unwrap();
        assert!(curve.holomorphy_residual(c(0.1, 0.9)).unwrap() < 1e-6);
    }

    #[test]
    fn abelian_structure_constant_is_zero() {
        for inst in [GroupInstance::additive(2), GroupInstance::torus(3)] {
            let sc = structure_constant(&inst, SamplingOptions::default());
            assert_eq!(sc.sampled_max, 0.0);
            assert_eq!(sc.upper_bound, 0.0);
        }
    }

    #[test]
    fn dexp_at_zero_is_identity() {
        for inst in [
            GroupInstance::sl2(),
            GroupInstance::general_linear(2),
            GroupInstance::torus(2),
        ] {
            let mut rng = stream_rng(3, 0);
            let g = random_element(&inst, &mut rng, 1.0).unwrap();
            let op = dexp_at(&inst, &g, &AlgebraVector::zeros(inst.dim())).unwrap();
            assert_eq!(op.matrix, ComplexMatrix::identity(inst.dim()));
            assert_eq!(op.order, 0);
        }
    }

    #[test]
    fn dexp_abelian_is_identity() {
        let t = GroupInstance::torus(2);
        let xi = AlgebraVector::new(vec![c(1.0, 2.0), c(-0.5, 0.3)]);
        let op = dexp_at(&t, &t.identity(), &xi).unwrap();
        assert_eq!(op.matrix, ComplexMatrix::identity(2));
        assert_eq!(dexp_norm_bound(&t, &xi), 1.0);
    }

    #[test]
    fn dexp_tail_respects_tolerance() {
        let s = GroupInstance::sl2();
        let xi = AlgebraVector::new(vec![c(2.0, 0.5), c(-1.0, 1.0), c(0.3, 0.0)]);
        let op = dexp_at(&s, &s.identity(), &xi).unwrap();
        assert!(op.tail_bound <= DEXP_TAIL_TOL);
        let (order_prev, tail_prev) =
            truncation_order(s.bracket_upper_bound() * xi.norm(), DEXP_TAIL_TOL);
        assert_eq!(order_prev, op.order);
        assert_eq!(tail_prev, op.tail_bound);
        // one order fewer would not have met the tolerance
        let x = s.bracket_upper_bound() * xi.norm();
        let fact: f64 = (1..=op.order + 1).map(|i| i as f64).product();
        assert!(op.tail_bound + x.powi(op.order as i32) / fact > DEXP_TAIL_TOL);
    }

    #[test]
    fn dexp_along_h_matches_finite_difference() {
        let s = GroupInstance::sl2();
        let xi = AlgebraVector::new(vec![c(0.8, 0.3), ZERO, ZERO]);
        let op = dexp_at(&s, &s.identity(), &xi).unwrap();
        let fd = dexp_finite_difference(&s, &s.identity(), &xi, 1e-5).unwrap();
        assert!(spectral_norm(&(&op.matrix - &fd)).unwrap().value() < 1e-6);
    }

    #[test]
    fn bound_factor_limits() {
        assert_eq!(dexp_bound_factor(0.0, 5.0), 1.0);
        assert_eq!(dexp_bound_factor(2.0, 0.0), 1.0);
        assert!((dexp_bound_factor(1.0, 1.0) - (1f64.exp() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn abelian_log_inverts_exp() {
        let t = GroupInstance::torus(1);
        let xi = AlgebraVector::new(vec![c(0.2, -0.4)]);
        let g = one_param(&t, &xi, ONE).unwrap();
        assert!(abelian_log(&t, &g).unwrap().sub(&xi).norm() < 1e-15);
        assert!(abelian_log(&GroupInstance::sl2(), &GroupInstance::sl2().identity()).is_err());
    }
}
