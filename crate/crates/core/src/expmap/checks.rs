//! Randomized invariant suite for the exponential layer.
//!
//! Every check draws sample `i` from its own random stream, so residuals are identical across
//! execution modes and thread counts.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    dexp_at, dexp_finite_difference, dexp_norm_bound, exp_at, ode_exp_oracle, one_param,
    random_disk, random_element,
};
use crate::error::Result;
use crate::liegroup::{AlgebraVector, GroupInstance};
use crate::numkernel::{numeric_jacobian, spectral_norm, vec_norm, C64, DEFAULT_FD_STEP, ONE};
use crate::par::{map_indexed, stream_rng, Exec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &str, samples: usize, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            samples,
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub samples: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 7,
            exec: Exec::default(),
        }
    }
}

/// Spread of the random base points `exp(X₁)exp(X₂)`.
const BASE_SPREAD: f64 = 0.5;
/// Generators are drawn from the unit ball and parameters from the disk of this radius.
const PARAM_RADIUS: f64 = 2.0;

/// Largest per-sample residual; stream tags keep different checks on disjoint random streams.
fn sample_max<F>(opts: &SuiteOptions, tag: u64, f: F) -> Result<f64>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync + Send,
{
    let values = map_indexed(opts.exec, opts.samples, |i| {
        let mut rng = stream_rng(opts.seed, (tag << 40) | i as u64);
        f(&mut rng)
    });
    let mut worst = 0.0f64;
    for v in values {
        let v = v?;
        worst = if v.is_nan() {
            f64::INFINITY
        } else {
            worst.max(v)
        };
    }
    Ok(worst)
}

/// `exp((s+t)X)` against `exp(sX)·exp(tX)`.
pub fn one_parameter_law(inst: &GroupInstance, opts: &SuiteOptions) -> Result<CheckResult> {
    let r = sample_max(opts, 1, |rng| {
        let x = inst.random_algebra(rng, 1.0);
        let s = random_disk(rng, PARAM_RADIUS);
        let t = random_disk(rng, PARAM_RADIUS);
        let lhs = one_param(inst, &x, s + t)?;
        let rhs = inst.mul(&one_param(inst, &x, s)?, &one_param(inst, &x, t)?)?;
        inst.distance_proxy(&lhs, &rhs)
    })?;
    Ok(CheckResult::new(
        "one-parameter-law",
        opts.samples,
        r,
        1e-10,
    ))
}

/// `exp_g(zξ)` against `g·exp(zX)`.
pub fn left_translated_exp(inst: &GroupInstance, opts: &SuiteOptions) -> Result<CheckResult> {
    let r = sample_max(opts, 2, |rng| {
        let g = random_element(inst, rng, BASE_SPREAD)?;
        let xi = inst.random_algebra(rng, 1.0);
        let z = random_disk(rng, PARAM_RADIUS);
        let lhs = exp_at(inst, &g, &xi.scale(z))?;
        let rhs = inst.mul(&g, &one_param(inst, &xi, z)?)?;
        inst.distance_proxy(&lhs, &rhs)
    })?;
    Ok(CheckResult::new(
        "left-translated-exp",
        opts.samples,
        r,
        1e-10,
    ))
}

/// `exp_g` against `L_g ∘ exp ∘ (dL_{g⁻¹})_g`, with the tangent vector passed through its
/// ambient form at `g` and pulled back explicitly.
pub fn exp_at_decomposition(inst: &GroupInstance, opts: &SuiteOptions) -> Result<CheckResult> {
    let r = sample_max(opts, 3, |rng| {
        let g = random_element(inst, rng, BASE_SPREAD)?;
        let xi = inst.random_algebra(rng, PARAM_RADIUS);
        let at_g = inst.ambient_tangent(&g, &xi)?;
        let pulled = inst.trivialize(&g, &at_g)?;
        let rhs = inst.mul(&g, &one_param(inst, &pulled, ONE)?)?;
        let lhs = exp_at(inst, &g, &xi)?;
        inst.distance_proxy(&lhs, &rhs)
    })?;
    Ok(CheckResult::new(
        "exp-at-decomposition",
        opts.samples,
        r,
        1e-10,
    ))
}

/// Finite-difference `d/dz exp(zX)` against the left translate of `X`.
pub fn derivative_of_one_param(inst: &GroupInstance, opts: &SuiteOptions) -> Result<CheckResult> {
    let r = sample_max(opts, 4, |rng| {
        let x = inst.random_algebra(rng, 1.0);
        let z = random_disk(rng, PARAM_RADIUS);
        let jac = numeric_jacobian(
            |w| one_param(inst, &x, w[0]).map(|g| g.ambient()),
            &[z],
            DEFAULT_FD_STEP,
        )?;
        let gz = one_param(inst, &x, z)?;
        let expected = inst.ambient_tangent(&gz, &x)?;
        let diff: Vec<C64> = jac
            .column(0)
            .iter()
            .zip(&expected)
            .map(|(a, b)| a - b)
            .collect();
        Ok(vec_norm(&diff) / vec_norm(&expected).max(1.0))
    })?;
    Ok(CheckResult::new(
        "derivative-of-one-param",
        opts.samples,
        r,
        1e-6,
    ))
}

/// `‖(d exp_g)_0‖ = 1`.
pub fn dexp_isometry_at_zero(inst: &GroupInstance, opts: &SuiteOptions) -> Result<CheckResult> {
    let zero = AlgebraVector::zeros(inst.dim());
    let r = sample_max(opts, 5, |rng| {
        let g = random_element(inst, rng, BASE_SPREAD)?;
        let op = dexp_at(inst, &g, &zero)?;
        Ok((spectral_norm(&op.matrix)?.value() - 1.0).abs())
    })?;
    Ok(CheckResult::new(
        "dexp-isometry-at-zero",
        opts.samples,
        r,
        1e-10,
    ))
}

/// The five group-law checks run on every instance.
pub fn property_suite(inst: &GroupInstance, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    Ok(vec![
        one_parameter_law(inst, opts)?,
        left_translated_exp(inst, opts)?,
        exp_at_decomposition(inst, opts)?,
        derivative_of_one_param(inst, opts)?,
        dexp_isometry_at_zero(inst, opts)?,
    ])
}

/// Series differential against the finite-difference Jacobian of `exp_at(g, ·)`.
pub fn duhamel_vs_jacobian(
    inst: &GroupInstance,
    opts: &SuiteOptions,
    max_norm: f64,
) -> Result<CheckResult> {
    let r = sample_max(opts, 6, |rng| {
        let g = random_element(inst, rng, BASE_SPREAD)?;
        let xi = inst.random_algebra(rng, max_norm);
        let op = dexp_at(inst, &g, &xi)?;
        let fd = dexp_finite_difference(inst, &g, &xi, DEFAULT_FD_STEP)?;
        Ok(spectral_norm(&(&op.matrix - &fd))?.value())
    })?;
    Ok(CheckResult::new(
        "duhamel-vs-jacobian",
        opts.samples,
        r,
        1e-6,
    ))
}

/// `‖(d exp_g)_ξ‖ − (e^{C‖ξ‖} − 1)/(C‖ξ‖)`, worst case (negative when the bound holds with room).
pub fn norm_bound(inst: &GroupInstance, opts: &SuiteOptions, max_norm: f64) -> Result<CheckResult> {
    let values = map_indexed(opts.exec, opts.samples, |i| -> Result<f64> {
        let mut rng = stream_rng(opts.seed, (7u64 << 40) | i as u64);
        let g = random_element(inst, &mut rng, BASE_SPREAD)?;
        let xi = inst.random_algebra(&mut rng, max_norm);
        let op = dexp_at(inst, &g, &xi)?;
        Ok(spectral_norm(&op.matrix)?.value() - dexp_norm_bound(inst, &xi))
    });
    let mut worst = f64::NEG_INFINITY;
    for v in values {
        worst = worst.max(v?);
    }
    Ok(CheckResult::new(
        "dexp-norm-bound",
        opts.samples,
        worst,
        1e-9,
    ))
}

/// `one_param` against the RK4 oracle at `steps` steps.
pub fn ode_agreement(
    inst: &GroupInstance,
    opts: &SuiteOptions,
    steps: usize,
) -> Result<CheckResult> {
    let r = sample_max(opts, 8, |rng| {
        let x = inst.random_algebra(rng, 1.0);
        let z = random_disk(rng, PARAM_RADIUS);
        let exact = one_param(inst, &x, z)?;
        let ode = ode_exp_oracle(inst, &x, z, steps)?;
        inst.distance_proxy(&exact, &ode)
    })?;
    Ok(CheckResult::new("ode-agreement", opts.samples, r, 1e-8))
}

/// Errors of the RK4 oracle at `steps` and `2·steps`, and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRatio {
    pub coarse_error: f64,
    pub fine_error: f64,
    pub ratio: f64,
}

pub fn ode_convergence_ratio(
    inst: &GroupInstance,
    x: &AlgebraVector,
    z: C64,
    steps: usize,
) -> Result<ConvergenceRatio> {
    let exact = one_param(inst, x, z)?;
    let coarse_error = inst.distance_proxy(&exact, &ode_exp_oracle(inst, x, z, steps)?)?;
    let fine_error = inst.distance_proxy(&exact, &ode_exp_oracle(inst, x, z, 2 * steps)?)?;
    Ok(ConvergenceRatio {
        coarse_error,
        fine_error,
        ratio: coarse_error / fine_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteOptions {
        SuiteOptions {
            samples: 50,
            seed: 11,
            exec: Exec::Sequential,
        }
    }

    #[test]
    fn suite_passes_on_every_instance() {
        for inst in [
            GroupInstance::additive(2),
            GroupInstance::torus(2),
            GroupInstance::general_linear(2),
            GroupInstance::sl2(),
        ] {
            for check in property_suite(&inst, &small()).unwrap() {
                assert!(
                    check.passed,
                    "{} on {}: {:e}",
                    check.name,
                    inst.name(),
                    check.max_residual
                );
            }
        }
    }

    #[test]
    fn execution_mode_does_not_change_residuals() {
        let inst = GroupInstance::sl2();
        let seq = duhamel_vs_jacobian(&inst, &small(), 2.0).unwrap();
        let par = duhamel_vs_jacobian(
            &inst,
            &SuiteOptions {
                exec: Exec::Parallel,
                ..small()
            },
            2.0,
        )
        .unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn norm_bound_holds_on_sl2() {
        let r = norm_bound(&GroupInstance::sl2(), &small(), 3.0).unwrap();
        assert!(r.passed, "{:e}", r.max_residual);
    }

    #[test]
    fn rk4_ratio_near_sixteen() {
        let t = GroupInstance::torus(1);
        let x = AlgebraVector::new(vec![C64::new(1.5, 1.0)]);
        let r = ode_convergence_ratio(&t, &x, C64::new(2.0, 0.5), 100).unwrap();
        assert!((r.ratio - 16.0).abs() < 4.0, "{r:?}");
    }
}
