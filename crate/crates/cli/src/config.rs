//! Scenario files.
//!
//! A scenario is a TOML document with dotted section keys:
//!
//! ```toml
//! task = "zalcman"
//! seed = 7
//!
//! [group]
//! name = "additive"
//! dim = 1
//!
//! [family]
//! name = "linear-family"
//!
//! [region]
//! center = [0.0, 0.0]
//! radius = 1.0
//! grid = 81
//!
//! [indices]
//! start = 1
//! end = 50
//! ```

use std::path::{Path, PathBuf};

use liezal::family::builtin::{self, FamilyParams};
use liezal::family::Verdict;
use liezal::liegroup::GroupElement;
use liezal::liegroup::GroupInstance;
use liezal::par::Exec;
use liezal::zalcman::SnapRule;
use liezal::C64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    MartyScan,
    Zalcman,
    ExpVerify,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::MartyScan => "marty-scan",
            Task::Zalcman => "zalcman",
            Task::ExpVerify => "exp-verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub name: String,
    /// Complex dimension for `additive`/`torus`, matrix size for `gl`, 2 for `sl2`.
    #[serde(default = "one")]
    pub dim: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub name: String,
    #[serde(default)]
    pub params: FamilyParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    /// Ambient coordinates as `[re, im, re, im, …]`; matrices row-major. Identity when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub list: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<u64>,
}

impl IndexConfig {
    pub fn resolve(&self) -> Result<Vec<u64>, CliError> {
        let out = match (&self.list, self.start, self.end) {
            (Some(list), None, None) if self.step.is_none() => list.clone(),
            (None, Some(start), Some(end)) => {
                let step = self.step.unwrap_or(1);
                if step == 0 || end < start {
                    return Err(CliError::Config(format!(
                        "bad index range {start}..={end} step {step}"
                    )));
                }
                (start..=end).step_by(step as usize).collect()
            }
            _ => {
                return Err(CliError::Config(
                    "indices need either `list` or `start` and `end` (with optional `step`)".into(),
                ))
            }
        };
        liezal::family::check_indices(&out).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Marty-scan cap.
    pub cap: f64,
    /// Cauchy threshold for the last consecutive sup-distance.
    pub cauchy: f64,
    /// Allowed `|witness − 1|`.
    pub witness: f64,
    /// Radius of the compact ball used for convergence checks.
    pub compact_radius: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cap: 10.0,
            cauchy: 1e-6,
            witness: 1e-6,
            compact_radius: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZalcmanConfig {
    pub snap: SnapRule,
    /// `none`, `identity` (z ↦ [1 : z]) or `exp:<c>` (z ↦ [1 : e^{cz}]).
    pub reference: String,
    pub converge: bool,
    pub converge_grid: usize,
    pub sample_grid: usize,
}

impl Default for ZalcmanConfig {
    fn default() -> Self {
        Self {
            snap: SnapRule::None,
            reference: "none".into(),
            converge: true,
            converge_grid: 41,
            sample_grid: 9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpVerifyConfig {
    pub samples: usize,
    pub dexp_samples: usize,
    pub ode_samples: usize,
    pub ode_steps: usize,
    pub structure_samples: usize,
}

impl Default for ExpVerifyConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            dexp_samples: 10_000,
            ode_samples: 200,
            ode_steps: 1000,
            structure_samples: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub csv: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("liezal-out"),
            csv: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Expectations {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cauchy: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_to_zero: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub task: Task,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub exec: Exec,
    pub group: GroupConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<IndexConfig>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub zalcman: ZalcmanConfig,
    #[serde(default)]
    pub exp_verify: ExpVerifyConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub expect: Expectations,
}

/// Command-line overrides applied on top of a scenario file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub output_dir: Option<PathBuf>,
    pub grid: Option<usize>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
}

/// Reference map for sup-distance reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reference {
    None,
    Identity,
    Exp(f64),
}

impl Reference {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "none" => Ok(Reference::None),
            "identity" => Ok(Reference::Identity),
            _ => match s.strip_prefix("exp:").map(str::parse::<f64>) {
                Some(Ok(c)) if c.is_finite() => Ok(Reference::Exp(c)),
                _ => Err(CliError::Config(format!(
                    "unknown reference '{s}'; use none, identity or exp:<c>"
                ))),
            },
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(d) = &o.output_dir {
            self.output.dir = d.clone();
        }
        if let Some(g) = o.grid {
            if let Some(r) = self.region.as_mut() {
                r.grid = Some(g);
            }
        }
        if let Some(t) = o.tolerance {
            self.tolerances.cauchy = t;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
    }

    pub fn instance(&self) -> Result<GroupInstance, CliError> {
        GroupInstance::by_name(&self.group.name, self.group.dim)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn family(&self, inst: &GroupInstance) -> Result<liezal::family::HoloFamily, CliError> {
        let f = self.family.as_ref().ok_or_else(|| {
            CliError::Config(format!(
                "task {} needs a [family] section",
                self.task.as_str()
            ))
        })?;
        builtin::build(&f.name, inst, &f.params).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn region(&self) -> Result<&RegionConfig, CliError> {
        let r = self.region.as_ref().ok_or_else(|| {
            CliError::Config(format!(
                "task {} needs a [region] section",
                self.task.as_str()
            ))
        })?;
        if !(r.radius > 0.0 && r.radius.is_finite()) {
            return Err(CliError::Config(format!(
                "region.radius must be positive, got {}",
                r.radius
            )));
        }
        if r.grid.is_some_and(|g| g < 2) {
            return Err(CliError::Config("region.grid must be at least 2".into()));
        }
        Ok(r)
    }

    pub fn center(&self, inst: &GroupInstance) -> Result<GroupElement, CliError> {
        let Some(parts) = self.region.as_ref().and_then(|r| r.center.as_ref()) else {
            return Ok(inst.identity());
        };
        if parts.len() % 2 != 0 {
            return Err(CliError::Config(
                "region.center needs [re, im] pairs".into(),
            ));
        }
        let z: Vec<C64> = parts.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
        let bad = |e: liezal::Error| CliError::Config(format!("region.center: {e}"));
        if inst.kind().is_matrix() {
            let n = inst.size();
            liezal::ComplexMatrix::new(n, n, z)
                .and_then(|m| inst.element_from_matrix(m))
                .map_err(bad)
        } else {
            inst.element_from_coords(z).map_err(bad)
        }
    }

    pub fn indices(&self) -> Result<Vec<u64>, CliError> {
        self.indices
            .as_ref()
            .ok_or_else(|| {
                CliError::Config(format!(
                    "task {} needs an [indices] section",
                    self.task.as_str()
                ))
            })?
            .resolve()
    }

    /// Checks everything that can be checked without running the task.
    pub fn validate(&self) -> Result<(), CliError> {
        let inst = self.instance()?;
        if self.tolerances.cap <= 0.0
            || self.tolerances.cauchy <= 0.0
            || self.tolerances.witness <= 0.0
        {
            return Err(CliError::Config("tolerances must be positive".into()));
        }
        match self.task {
            Task::MartyScan | Task::Zalcman => {
                self.family(&inst)?;
                self.region()?;
                self.center(&inst)?;
                self.indices()?;
                Reference::parse(&self.zalcman.reference)?;
                if self.task == Task::Zalcman && self.zalcman.converge_grid < 2 {
                    return Err(CliError::Config(
                        "zalcman.converge_grid must be at least 2".into(),
                    ));
                }
            }
            Task::ExpVerify => {
                let e = &self.exp_verify;
                if e.samples == 0 || e.dexp_samples == 0 || e.ode_samples == 0 {
                    return Err(CliError::Config(
                        "exp_verify sample counts must be positive".into(),
                    ));
                }
                if e.ode_steps < 100 {
                    return Err(CliError::Config(
                        "exp_verify.ode_steps must be at least 100".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
task = "marty-scan"
[group]
name = "additive"
[family]
name = "power-family"
[region]
radius = 0.9
[indices]
start = 1
end = 10
"#;

    #[test]
    fn minimal_config_fills_defaults() {
        let c = ScenarioConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(c.task, Task::MartyScan);
        assert_eq!(c.group.dim, 1);
        assert_eq!(c.tolerances, Tolerances::default());
        assert_eq!(c.indices().unwrap(), (1..=10).collect::<Vec<_>>());
        c.validate().unwrap();
    }

    #[test]
    fn toml_round_trip() {
        let c = ScenarioConfig::from_toml_str(MINIMAL).unwrap();
        let again = ScenarioConfig::from_toml_str(&c.to_toml_string().unwrap()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn unknown_names_are_config_errors() {
        let bad_group = MINIMAL.replace("\"additive\"", "\"heisenberg\"");
        let err = ScenarioConfig::from_toml_str(&bad_group)
            .unwrap()
            .validate()
            .unwrap_err();
        assert!(
            matches!(err, CliError::Config(ref m) if m.contains("sl2")),
            "{err}"
        );
        let bad_family = MINIMAL.replace("power-family", "sine-family");
        let err = ScenarioConfig::from_toml_str(&bad_family)
            .unwrap()
            .validate()
            .unwrap_err();
        assert!(
            matches!(err, CliError::Config(ref m) if m.contains("torus-power")),
            "{err}"
        );
        let bad_task = MINIMAL.replace("marty-scan", "integrate");
        assert!(ScenarioConfig::from_toml_str(&bad_task).is_err());
    }

    #[test]
    fn index_list_must_increase() {
        let idx = IndexConfig {
            list: Some(vec![1, 3, 2]),
            ..Default::default()
        };
        assert!(idx.resolve().is_err());
        let both = IndexConfig {
            list: Some(vec![1]),
            start: Some(1),
            end: Some(3),
            step: None,
        };
        assert!(both.resolve().is_err());
    }

    #[test]
    fn non_positive_radius_rejected() {
        let c = ScenarioConfig::from_toml_str(&MINIMAL.replace("radius = 0.9", "radius = -1.0"))
            .unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn overrides() {
        let mut c = ScenarioConfig::from_toml_str(MINIMAL).unwrap();
        c.apply(&Overrides {
            output_dir: Some("x".into()),
            grid: Some(21),
            tolerance: Some(1e-3),
            seed: Some(9),
        });
        assert_eq!(c.output.dir, PathBuf::from("x"));
        assert_eq!(c.region.as_ref().unwrap().grid, Some(21));
        assert_eq!(c.tolerances.cauchy, 1e-3);
        assert_eq!(c.seed, 9);
    }

    #[test]
    fn references() {
        assert_eq!(Reference::parse("identity").unwrap(), Reference::Identity);
        assert_eq!(Reference::parse("exp:2").unwrap(), Reference::Exp(2.0));
        assert!(Reference::parse("exp:x").is_err());
        assert!(Reference::parse("sin").is_err());
    }
}
