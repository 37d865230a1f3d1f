//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p liezal-cli --test acceptance`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use liezal::expmap::checks::{
    duhamel_vs_jacobian, norm_bound, ode_agreement, ode_convergence_ratio, property_suite,
    SuiteOptions,
};
use liezal::expmap::{structure_constant, SamplingOptions};
use liezal::family::Verdict;
use liezal::liegroup::{AlgebraVector, GroupInstance};
use liezal::Exec;
use liezal::C64;
use liezal_cli::run::{abelian_exactness, Payload, ZalcmanPayload};
use liezal_cli::{execute, run_scenario, ScenarioConfig};

const SEED: u64 = 20_240_611;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

type Criterion = (
    &'static str,
    Option<Duration>,
    fn() -> Result<Outcome, String>,
);

fn instances() -> [GroupInstance; 4] {
    [
        GroupInstance::general_linear(2),
        GroupInstance::sl2(),
        GroupInstance::torus(2),
        GroupInstance::additive(2),
    ]
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
}

fn load(name: &str) -> Result<ScenarioConfig, String> {
    ScenarioConfig::load(&scenario(name)).map_err(|e| e.to_string())
}

fn zalcman(name: &str) -> Result<ZalcmanPayload, String> {
    let bundle = execute(&load(name)?).map_err(|e| e.to_string())?;
    match bundle.payload {
        Payload::Zalcman(p) => Ok(*p),
        _ => Err(format!("{name} is not a zalcman scenario")),
    }
}

fn c1_property_suite() -> Result<Outcome, String> {
    let opts = SuiteOptions {
        samples: 1000,
        seed: SEED,
        exec: Exec::Parallel,
    };
    let mut worst = Vec::new();
    let mut ok = true;
    for inst in instances() {
        for check in property_suite(&inst, &opts).map_err(|e| e.to_string())? {
            ok &= check.passed;
            if !check.passed {
                worst.push(format!(
                    "{} on {}: {:e} > {:e}",
                    check.name,
                    inst.name(),
                    check.max_residual,
                    check.tolerance
                ));
            }
        }
    }
    Ok(if ok {
        outcome(
            true,
            "5 checks x 4 instances x 1000 samples within 1e-10 / 1e-6",
        )
    } else {
        outcome(false, worst.join("; "))
    })
}

fn c2_duhamel() -> Result<Outcome, String> {
    let r = duhamel_vs_jacobian(
        &GroupInstance::sl2(),
        &SuiteOptions {
            samples: 10_000,
            seed: SEED,
            exec: Exec::Parallel,
        },
        2.0,
    )
    .map_err(|e| e.to_string())?;
    Ok(outcome(
        r.max_residual <= 1e-6,
        format!(
            "sl2, 1e4 samples, ‖ξ‖ ≤ 2: max discrepancy {:.3e} (tol 1e-6)",
            r.max_residual
        ),
    ))
}

fn c3_norm_bound() -> Result<Outcome, String> {
    let r = norm_bound(
        &GroupInstance::sl2(),
        &SuiteOptions {
            samples: 10_000,
            seed: SEED,
            exec: Exec::Parallel,
        },
        3.0,
    )
    .map_err(|e| e.to_string())?;
    let mut exact = true;
    for inst in [GroupInstance::additive(2), GroupInstance::torus(2)] {
        exact &= abelian_exactness(&inst, SEED, 10_000)
            .map_err(|e| e.to_string())?
            .max_defect
            == 0.0;
    }
    Ok(outcome(
        r.max_residual <= 1e-9 && exact,
        format!("sl2, 1e4 samples, ‖ξ‖ ≤ 3: max(norm − bound) {:.3e} (tol 1e-9); abelian norm = 1 exactly: {exact}", r.max_residual),
    ))
}

fn c4_ode() -> Result<Outcome, String> {
    let opts = SuiteOptions {
        samples: 200,
        seed: SEED,
        exec: Exec::Parallel,
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for inst in instances() {
        let agree = ode_agreement(&inst, &opts, 1000).map_err(|e| e.to_string())?;
        let raw = AlgebraVector::new(
            (0..inst.dim())
                .map(|a| C64::new(1.0 + a as f64, 0.5 - 0.25 * a as f64))
                .collect(),
        );
        let x = raw.scale_real(1.5 / raw.norm());
        let r =
            ode_convergence_ratio(&inst, &x, C64::new(2.0, 0.5), 100).map_err(|e| e.to_string())?;
        let roundoff = r.coarse_error <= 1e-12 && r.fine_error <= 1e-12;
        let order_ok = if inst.is_abelian() && inst.name() == "additive" {
            roundoff
        } else {
            (r.ratio - 16.0).abs() <= 4.0
        };
        ok &= agree.max_residual <= 1e-8 && order_ok;
        let ratio = if roundoff {
            "roundoff".to_string()
        } else {
            format!("{:.2}", r.ratio)
        };
        parts.push(format!(
            "{} {:.1e}/{ratio}",
            inst.name(),
            agree.max_residual
        ));
    }
    Ok(outcome(
        ok,
        format!(
            "agreement at 1000 steps (tol 1e-8) / ratio 16 ± 25%: {}",
            parts.join(", ")
        ),
    ))
}

fn c5_linear() -> Result<Outcome, String> {
    let p = zalcman("linear_zalcman.toml")?;
    let m_ok = p
        .steps
        .iter()
        .all(|s| (s.m - s.j as f64).abs() <= 0.01 * s.j as f64);
    let rho_ok = p.max_rho_m_defect <= f64::EPSILON;
    let w_ok = p.max_witness_defect <= 1e-6;
    let sup = p
        .reference_distances
        .iter()
        .map(|d| d.sup)
        .fold(0.0, f64::max);
    let range_ok = p.steps.len() == 50 && p.scan.grid == 81 && p.compact_radius == 2.0;
    Ok(outcome(
        m_ok && rho_ok && w_ok && sup < 1e-6 && range_ok,
        format!(
            "j = 1..50, grid 81: M_j = j within 1%: {m_ok}; |ρM − 1| ≤ {:.1e}; witness defect {:.1e} (tol 1e-6); sup-distance to identity on ‖z‖ ≤ 2: {:.1e} (tol 1e-6)",
            p.max_rho_m_defect, p.max_witness_defect, sup
        ),
    ))
}

fn c6_torus() -> Result<Outcome, String> {
    let scan = match execute(&load("torus_marty.toml")?)
        .map_err(|e| e.to_string())?
        .payload
    {
        Payload::MartyScan(p) => p.scan,
        _ => return Err("torus_marty is not a marty scan".into()),
    };
    let maxima = scan.maxima();
    let monotone = maxima.windows(2).all(|w| w[1] > w[0]);
    let p = zalcman("torus_zalcman.toml")?;
    let w_ok = p.max_witness_defect <= 1e-4;
    let last = p
        .reference_distances
        .last()
        .ok_or("no reference distances")?;
    let tail_ok = p.reference_tail_non_increasing == Some(true);
    let ok = scan.verdict == Verdict::NonNormal
        && monotone
        && w_ok
        && tail_ok
        && last.j == 200
        && last.sup < 1e-2;
    Ok(outcome(
        ok,
        format!(
            "marty verdict {} with monotone M_j: {monotone}; witness defect {:.1e} (tol 1e-4); distance to e^(2z) non-increasing over last 5: {tail_ok}; at j = {}: {:.1e} (tol 1e-2)",
            scan.verdict.as_str(),
            p.max_witness_defect,
            last.j,
            last.sup
        ),
    ))
}

fn c7_control() -> Result<Outcome, String> {
    let verdict = match execute(&load("power_marty.toml")?)
        .map_err(|e| e.to_string())?
        .payload
    {
        Payload::MartyScan(p) => p.scan.verdict,
        _ => return Err("power_marty is not a marty scan".into()),
    };
    let p = zalcman("power_zalcman_control.toml")?;
    let slope = p
        .rho_trend
        .slope
        .map_or("n/a".to_string(), |s| format!("{s:.3}"));
    Ok(outcome(
        verdict == Verdict::Normal && !p.rho_trend.tends_to_zero,
        format!(
            "marty verdict {}; forced rescaling: ρ_j tends to 0: {} (log-log slope {slope}, last ρ {:.3e})",
            verdict.as_str(),
            p.rho_trend.tends_to_zero,
            p.rho_trend.rho.last().copied().unwrap_or(f64::NAN)
        ),
    ))
}

fn three_sig(x: f64) -> String {
    format!("{x:.2e}")
}

fn c8_structure_constant() -> Result<Outcome, String> {
    let s = GroupInstance::sl2();
    let a = structure_constant(
        &s,
        SamplingOptions {
            samples: 10_000_000,
            seed: SEED,
            exec: Exec::Parallel,
        },
    );
    let b = structure_constant(
        &s,
        SamplingOptions {
            samples: 10_000_000,
            seed: SEED + 1,
            exec: Exec::Parallel,
        },
    );
    let stable = three_sig(a.sampled_max) == three_sig(b.sampled_max);
    let abelian = [GroupInstance::additive(2), GroupInstance::torus(2)]
        .iter()
        .all(|g| {
            structure_constant(
                g,
                SamplingOptions {
                    samples: 1000,
                    seed: SEED,
                    exec: Exec::Parallel,
                },
            )
            .sampled_max
                == 0.0
        });
    Ok(outcome(
        stable && abelian,
        format!(
            "sl2 two 1e7-sample runs: {} vs {} (3 sig. figs {} / {}); abelian C = 0 exactly: {abelian}",
            a.sampled_max,
            b.sampled_max,
            three_sig(a.sampled_max),
            three_sig(b.sampled_max)
        ),
    ))
}

fn c9_determinism() -> Result<Outcome, String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut names: Vec<PathBuf> =
        std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios"))
            .map_err(|e| e.to_string())?
            .map(|e| e.map(|e| e.path()).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
    names.retain(|p| p.extension().is_some_and(|e| e == "toml"));
    names.sort();
    let mut differing = Vec::new();
    for path in &names {
        let mut cfg = ScenarioConfig::load(path).map_err(|e| e.to_string())?;
        cfg.output.dir = tmp.path().to_path_buf();
        let mut bytes = Vec::new();
        for _ in 0..2 {
            run_scenario(&cfg).map_err(|e| format!("{}: {e}", path.display()))?;
            bytes.push(std::fs::read(tmp.path().join("report.json")).map_err(|e| e.to_string())?);
        }
        if bytes[0] != bytes[1] {
            differing.push(path.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    Ok(outcome(
        differing.is_empty(),
        format!(
            "{} shipped scenarios run twice; differing reports: {:?}",
            names.len(),
            differing
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "1 property suite",
            Some(Duration::from_secs(30)),
            c1_property_suite,
        ),
        (
            "2 series vs Jacobian",
            Some(Duration::from_secs(60)),
            c2_duhamel,
        ),
        (
            "3 dexp norm bound",
            Some(Duration::from_secs(60)),
            c3_norm_bound,
        ),
        ("4 ODE oracle", None, c4_ode),
        (
            "5 linear rescaling",
            Some(Duration::from_secs(120)),
            c5_linear,
        ),
        (
            "6 torus rescaling",
            Some(Duration::from_secs(300)),
            c6_torus,
        ),
        ("7 normal control", None, c7_control),
        ("8 structure constant", None, c8_structure_constant),
        ("9 determinism", None, c9_determinism),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let (mut passed, detail) = match result {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let mut time = format!("{:.2} s", elapsed.as_secs_f64());
        if let Some(limit) = limit {
            time.push_str(&format!(" (limit {} s)", limit.as_secs()));
            passed &= elapsed <= limit;
        }
        println!(
            "[{}] criterion {name}: {detail} [{time}]",
            if passed { "PASS" } else { "FAIL" }
        );
        if !passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
