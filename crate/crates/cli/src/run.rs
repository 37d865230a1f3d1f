//! Task execution and report bundles.

use std::path::{Path, PathBuf};
use std::time::Instant;

use liezal::expmap::checks::{
    duhamel_vs_jacobian, norm_bound, ode_agreement, ode_convergence_ratio, property_suite,
    CheckResult, ConvergenceRatio, SuiteOptions,
};
use liezal::expmap::{
    dexp_at, random_element, structure_constant, SamplingOptions, StructureConstant,
};
use liezal::family::{marty_scan, NormalityReport, Region, ScanOptions, Verdict};
use liezal::liegroup::{AlgebraVector, GroupInstance};
use liezal::numkernel::spectral_norm;
use liezal::par::{map_indexed, stream_rng};
use liezal::zalcman::{
    converge_check, non_increasing, rescaling_steps, rho_m_defect, rho_trend,
    sup_distance_to_reference, ArgmaxOptions, ConvergeOptions, ConvergenceReport, RhoTrend,
    StepSummary, ZalcmanOptions,
};
use liezal::C64;
use serde::{Deserialize, Serialize};

use crate::config::{Reference, ScenarioConfig, Task};
use crate::error::CliError;
use crate::output;

pub const REPORT_VERSION: &str = concat!("liezal-report/", env!("CARGO_PKG_VERSION"));

/// Radius of the `ξ` ball for the series-vs-Jacobian check.
pub const DUHAMEL_RADIUS: f64 = 2.0;
/// Radius of the `ξ` ball for the norm-bound check.
pub const BOUND_RADIUS: f64 = 3.0;
/// Step count of the coarse RK4 run in the convergence-order check.
pub const RATIO_STEPS: usize = 100;
/// Expected error ratio of a fourth-order method when the step halves.
pub const RATIO_TARGET: f64 = 16.0;
pub const RATIO_TOLERANCE: f64 = 0.25;
/// Below this the RK4 error is rounding noise and the ratio carries no order information.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;
/// Number of trailing reference distances that must not increase.
pub const REFERENCE_WINDOW: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MartyPayload {
    pub group: String,
    pub center: Vec<C64>,
    pub radius: f64,
    pub scan: NormalityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceDistance {
    pub j: u64,
    pub sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZalcmanPayload {
    pub group: String,
    pub center: Vec<C64>,
    pub scan: NormalityReport,
    pub steps: Vec<StepSummary>,
    pub max_rho_m_defect: f64,
    pub max_witness_defect: f64,
    pub witness_tolerance: f64,
    pub compact_radius: f64,
    pub reference: String,
    pub reference_distances: Vec<ReferenceDistance>,
    /// Whether the last few reference distances are non-increasing (up to rounding noise).
    pub reference_tail_non_increasing: Option<bool>,
    pub convergence: Option<ConvergenceReport>,
    pub rho_trend: RhoTrend,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeOrder {
    pub generator: AlgebraVector,
    pub parameter: C64,
    pub steps: usize,
    /// Absent when both errors are at rounding level (the additive flow has constant velocity).
    pub ratio: Option<ConvergenceRatio>,
    pub exact: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbelianExactness {
    pub samples: usize,
    /// Largest `|‖(d exp_g)_ξ‖ − 1|`; zero when the bound is attained exactly.
    pub max_defect: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpVerifyPayload {
    pub group: String,
    pub checks: Vec<CheckResult>,
    pub ode_order: OdeOrder,
    pub structure_constant: StructureConstant,
    pub abelian_exactness: Option<AbelianExactness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Payload {
    MartyScan(MartyPayload),
    Zalcman(Box<ZalcmanPayload>),
    ExpVerify(ExpVerifyPayload),
}

impl Payload {
    pub fn task(&self) -> Task {
        match self {
            Payload::MartyScan(_) => Task::MartyScan,
            Payload::Zalcman(_) => Task::Zalcman,
            Payload::ExpVerify(_) => Task::ExpVerify,
        }
    }
}

/// Everything written to `report.json`. Wall-clock timing lives in a separate file so that
/// reports stay byte-identical across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub version: String,
    pub task: Task,
    pub config: ScenarioConfig,
    pub payload: Payload,
    /// Failed checks and unmet expectations; empty on success.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub task: Task,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub bundle: ReportBundle,
    pub timing: Timing,
    pub report_path: PathBuf,
}

/// Runs the scenario without writing anything.
pub fn execute(cfg: &ScenarioConfig) -> Result<ReportBundle, CliError> {
    cfg.validate()?;
    let (payload, mut failures) = match cfg.task {
        Task::MartyScan => marty_task(cfg)?,
        Task::Zalcman => zalcman_task(cfg)?,
        Task::ExpVerify => exp_verify_task(cfg)?,
    };
    failures.extend(expectation_failures(cfg, &payload));
    Ok(ReportBundle {
        version: REPORT_VERSION.into(),
        task: cfg.task,
        config: cfg.clone(),
        payload,
        failures,
    })
}

/// Runs the scenario, writes `report.json`, `timing.json` and the CSV tables, and turns
/// recorded failures into a verdict error.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunOutcome, CliError> {
    let start = Instant::now();
    let bundle = execute(cfg)?;
    let timing = Timing {
        task: cfg.task,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    let report_path = write_outputs(&bundle, &timing, &cfg.output.dir, cfg.output.csv)?;
    if !bundle.failures.is_empty() {
        return Err(CliError::Verdict(format!(
            "{} (report written to {})",
            bundle.failures.join("; "),
            report_path.display()
        )));
    }
    Ok(RunOutcome {
        bundle,
        timing,
        report_path,
    })
}

pub fn write_outputs(
    bundle: &ReportBundle,
    timing: &Timing,
    dir: &Path,
    csv: bool,
) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let report_path = dir.join("report.json");
    std::fs::write(&report_path, report_json(bundle)?)?;
    let mut t = serde_json::to_string_pretty(timing)?;
    t.push('\n');
    std::fs::write(dir.join("timing.json"), t)?;
    if csv {
        output::write_tables(&bundle.payload, &dir.join("grids"))?;
    }
    Ok(report_path)
}

pub fn report_json(bundle: &ReportBundle) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(bundle)?;
    s.push('\n');
    Ok(s)
}

fn scan_options(cfg: &ScenarioConfig) -> ScanOptions {
    ScanOptions {
        cap: cfg.tolerances.cap,
        exec: cfg.exec,
    }
}

fn build_region(cfg: &ScenarioConfig, inst: &GroupInstance) -> Result<Region, CliError> {
    let r = cfg.region()?;
    let grid = r.grid.unwrap_or_else(|| Region::default_grid(inst.dim()));
    Ok(Region::new(cfg.center(inst)?, r.radius, grid)?)
}

fn marty_task(cfg: &ScenarioConfig) -> Result<(Payload, Vec<String>), CliError> {
    let inst = cfg.instance()?;
    let fam = cfg.family(&inst)?;
    let region = build_region(cfg, &inst)?;
    let scan = marty_scan(&fam, &region, &cfg.indices()?, scan_options(cfg))?;
    let payload = MartyPayload {
        group: inst.name().into(),
        center: region.center.ambient(),
        radius: region.radius,
        scan,
    };
    Ok((Payload::MartyScan(payload), Vec::new()))
}

fn reference_fn(r: Reference) -> impl Fn(&[C64]) -> liezal::Result<Vec<C64>> + Sync + Send {
    move |z: &[C64]| {
        let one = C64::new(1.0, 0.0);
        match r {
            Reference::Exp(c) => Ok(vec![one, (z[0] * c).exp()]),
            _ => {
                let mut v = Vec::with_capacity(z.len() + 1);
                v.push(one);
                v.extend_from_slice(z);
                Ok(v)
            }
        }
    }
}

fn zalcman_task(cfg: &ScenarioConfig) -> Result<(Payload, Vec<String>), CliError> {
    let inst = cfg.instance()?;
    let fam = cfg.family(&inst)?;
    let region = build_region(cfg, &inst)?;
    let indices = cfg.indices()?;
    let tol = &cfg.tolerances;
    let zc = &cfg.zalcman;
    let scan = marty_scan(&fam, &region, &indices, scan_options(cfg))?;
    let opts = ZalcmanOptions {
        argmax: ArgmaxOptions {
            grid: region.grid,
            exec: cfg.exec,
        },
        snap: zc.snap,
    };
    let steps = rescaling_steps(&fam, &region.center, &indices, opts)?;
    let summaries = steps
        .iter()
        .map(|s| s.summary())
        .collect::<liezal::Result<Vec<_>>>()?;
    let max_rho_m_defect = steps.iter().map(rho_m_defect).fold(0.0, f64::max);
    let max_witness_defect = summaries
        .iter()
        .map(|s| (s.witness - 1.0).abs())
        .fold(0.0, f64::max);

    let reference = Reference::parse(&zc.reference)?;
    let mut failures = Vec::new();
    let mut reference_distances = Vec::new();
    if reference != Reference::None {
        if reference == Reference::Identity && fam.target_dim() != inst.dim() {
            return Err(CliError::Config(format!(
                "identity reference needs target dimension {} to match the group dimension",
                fam.target_dim()
            )));
        }
        if matches!(reference, Reference::Exp(_)) && (inst.dim() != 1 || fam.target_dim() != 1) {
            return Err(CliError::Config(
                "exp reference needs a one-dimensional source and target".into(),
            ));
        }
        let f = reference_fn(reference);
        for s in &steps {
            let sup =
                sup_distance_to_reference(s, &f, tol.compact_radius, zc.converge_grid, cfg.exec)?;
            reference_distances.push(ReferenceDistance { j: s.j, sup });
        }
    }
    let reference_tail_non_increasing = (!reference_distances.is_empty()).then(|| {
        let sups: Vec<f64> = reference_distances.iter().map(|d| d.sup).collect();
        non_increasing(&sups[sups.len().saturating_sub(REFERENCE_WINDOW)..])
    });
    let convergence = if zc.converge {
        let opts = ConvergeOptions {
            tolerance: tol.cauchy,
            sample_grid: zc.sample_grid,
            exec: cfg.exec,
        };
        Some(converge_check(
            &steps,
            tol.compact_radius,
            zc.converge_grid,
            opts,
        )?)
    } else {
        None
    };

    if max_witness_defect > tol.witness {
        failures.push(format!(
            "witness defect {max_witness_defect:e} exceeds {:e}",
            tol.witness
        ));
    }
    let payload = ZalcmanPayload {
        group: inst.name().into(),
        center: region.center.ambient(),
        scan,
        steps: summaries,
        max_rho_m_defect,
        max_witness_defect,
        witness_tolerance: tol.witness,
        compact_radius: tol.compact_radius,
        reference: zc.reference.clone(),
        reference_distances,
        reference_tail_non_increasing,
        convergence,
        rho_trend: rho_trend(&steps),
    };
    Ok((Payload::Zalcman(Box::new(payload)), failures))
}

/// Fixed generator with `‖X‖ = 1.5` used for the convergence-order check.
fn order_generator(dim: usize) -> AlgebraVector {
    let raw = AlgebraVector::new(
        (0..dim)
            .map(|a| C64::new(1.0 + a as f64, 0.5 - 0.25 * a as f64))
            .collect(),
    );
    raw.scale_real(1.5 / raw.norm())
}

fn exp_verify_task(cfg: &ScenarioConfig) -> Result<(Payload, Vec<String>), CliError> {
    let inst = cfg.instance()?;
    let ev = &cfg.exp_verify;
    let suite = |samples| SuiteOptions {
        samples,
        seed: cfg.seed,
        exec: cfg.exec,
    };
    let mut checks = property_suite(&inst, &suite(ev.samples))?;
    checks.push(duhamel_vs_jacobian(
        &inst,
        &suite(ev.dexp_samples),
        DUHAMEL_RADIUS,
    )?);
    checks.push(norm_bound(&inst, &suite(ev.dexp_samples), BOUND_RADIUS)?);
    checks.push(ode_agreement(&inst, &suite(ev.ode_samples), ev.ode_steps)?);

    let generator = order_generator(inst.dim());
    let parameter = C64::new(2.0, 0.5);
    let ratio = ode_convergence_ratio(&inst, &generator, parameter, RATIO_STEPS)?;
    let exact = ratio.coarse_error <= ROUNDOFF_FLOOR && ratio.fine_error <= ROUNDOFF_FLOOR;
    let passed = exact || (ratio.ratio - RATIO_TARGET).abs() <= RATIO_TOLERANCE * RATIO_TARGET;
    let ode_order = OdeOrder {
        generator,
        parameter,
        steps: RATIO_STEPS,
        ratio: (!exact).then_some(ratio),
        exact,
        passed,
    };

    let sc = structure_constant(
        &inst,
        SamplingOptions {
            samples: ev.structure_samples,
            seed: cfg.seed,
            exec: cfg.exec,
        },
    );
    let abelian_exactness = if inst.is_abelian() {
        Some(abelian_exactness(&inst, cfg.seed, ev.dexp_samples)?)
    } else {
        None
    };

    let mut failures: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| {
            format!(
                "{}: residual {:e} above {:e}",
                c.name, c.max_residual, c.tolerance
            )
        })
        .collect();
    if !ode_order.passed {
        failures.push(format!(
            "ode order: error ratio {} outside {RATIO_TARGET} ± {}%",
            ratio.ratio,
            RATIO_TOLERANCE * 100.0
        ));
    }
    if inst.is_abelian() && sc.sampled_max != 0.0 {
        failures.push(format!(
            "abelian structure constant {} is not zero",
            sc.sampled_max
        ));
    }
    if let Some(a) = abelian_exactness.as_ref().filter(|a| !a.passed) {
        failures.push(format!("abelian dexp norm defect {:e}", a.max_defect));
    }
    let payload = ExpVerifyPayload {
        group: inst.name().into(),
        checks,
        ode_order,
        structure_constant: sc,
        abelian_exactness,
    };
    Ok((Payload::ExpVerify(payload), failures))
}

/// On abelian instances `d exp` is the identity in left-trivialized coordinates.
pub fn abelian_exactness(
    inst: &GroupInstance,
    seed: u64,
    samples: usize,
) -> Result<AbelianExactness, CliError> {
    let defects = map_indexed(
        liezal::Exec::Sequential,
        samples,
        |i| -> liezal::Result<f64> {
            let mut rng = stream_rng(seed, (9u64 << 40) | i as u64);
            let g = random_element(inst, &mut rng, 0.5)?;
            let xi = inst.random_algebra(&mut rng, BOUND_RADIUS);
            Ok((spectral_norm(&dexp_at(inst, &g, &xi)?.matrix)?.value() - 1.0).abs())
        },
    );
    let mut max_defect = 0.0f64;
    for d in defects {
        max_defect = max_defect.max(d?);
    }
    Ok(AbelianExactness {
        samples,
        max_defect,
        passed: max_defect == 0.0,
    })
}

fn expectation_failures(cfg: &ScenarioConfig, payload: &Payload) -> Vec<String> {
    let e = &cfg.expect;
    let mut out = Vec::new();
    let scan = match payload {
        Payload::MartyScan(p) => Some(&p.scan),
        Payload::Zalcman(p) => Some(&p.scan),
        Payload::ExpVerify(_) => None,
    };
    if let (Some(want), Some(scan)) = (e.verdict, scan) {
        if scan.verdict != want {
            out.push(format!(
                "expected verdict {}, got {}",
                want.as_str(),
                scan.verdict.as_str()
            ));
        }
    }
    if let Payload::Zalcman(p) = payload {
        if let Some(want) = e.cauchy {
            match &p.convergence {
                Some(c) if c.cauchy == want => {}
                Some(c) => out.push(format!("expected cauchy = {want}, got {}", c.cauchy)),
                None => out.push("cauchy expectation needs zalcman.converge = true".into()),
            }
        }
        if let Some(want) = e.rho_to_zero {
            if p.rho_trend.tends_to_zero != want {
                out.push(format!(
                    "expected rho_to_zero = {want}, got {}",
                    p.rho_trend.tends_to_zero
                ));
            }
        }
    } else if e.cauchy.is_some() || e.rho_to_zero.is_some() {
        out.push(format!(
            "cauchy/rho_to_zero expectations do not apply to {}",
            cfg.task.as_str()
        ));
    }
    out
}

/// Convenience for callers that only need the verdict of a scan payload.
pub fn scan_verdict(payload: &Payload) -> Option<Verdict> {
    match payload {
        Payload::MartyScan(p) => Some(p.scan.verdict),
        Payload::Zalcman(p) => Some(p.scan.verdict),
        Payload::ExpVerify(_) => None,
    }
}
