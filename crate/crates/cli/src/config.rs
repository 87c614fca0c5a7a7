//! Run configuration, read from TOML.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use altmin::certificates::BoundKind;
use altmin::solvers::{CoefficientRule, FgmMomentum, MomentumRule};
use altmin::zoo::{Instance, InstanceSpec};
use altmin::{BlockObjective, SolverConfig, SolverKind};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Environment variable that replaces the directory of every output file.
pub const OUT_DIR_ENV: &str = "ALTMIN_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub certificates: Vec<BoundKind>,
    pub instance: InstanceSpec,
    #[serde(default, rename = "solver")]
    pub solvers: Vec<SolverEntry>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub figure: FigureConfig,
}

/// A constant given as a number or taken from the instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConstantValue {
    Value(f64),
    Keyword(Keyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Keyword {
    Declared,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverEntry {
    pub kind: SolverKind,
    /// Name used in the `solver` column; defaults to the kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grad_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_assumed: Option<ConstantValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_known: Option<ConstantValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_search_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficient_rule: Option<CoefficientRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum_rule: Option<MomentumRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fgm_momentum: Option<FgmMomentum>,
}

impl SolverEntry {
    pub fn new(kind: SolverKind) -> Self {
        Self {
            kind,
            label: None,
            max_iters: None,
            target_gap: None,
            grad_tolerance: None,
            mu_assumed: None,
            l_known: None,
            line_search_tol: None,
            rng_seed: None,
            coefficient_rule: None,
            momentum_rule: None,
            fgm_momentum: None,
        }
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(self.kind.name())
    }

    /// Solver settings with `"declared"` constants looked up on `h`.
    /// An unset `l_known` means the declared `L` when there is one.
    pub fn resolve(&self, h: &dyn BlockObjective) -> Result<SolverConfig, CliError> {
        let d = SolverConfig::default();
        let declared = h.constants();
        let lookup = |v: ConstantValue, name: &str, value: Option<f64>| match v {
            ConstantValue::Value(x) => Ok(x),
            ConstantValue::Keyword(Keyword::Declared) => value.ok_or_else(|| {
                CliError::Config(format!(
                    "solver '{}': {name} = \"declared\" but the instance declares no {name}",
                    self.label()
                ))
            }),
        };
        let mu_assumed = match self.mu_assumed {
            None => 0.0,
            Some(v) => lookup(v, "mu", declared.pl_or_strong())?,
        };
        let l_known = match self.l_known {
            None => declared.lipschitz,
            Some(v) => Some(lookup(v, "lipschitz", declared.lipschitz)?),
        };
        let cfg = SolverConfig {
            max_iters: self.max_iters.unwrap_or(d.max_iters),
            target_gap: self.target_gap.or(d.target_gap),
            grad_tolerance: self.grad_tolerance.unwrap_or(d.grad_tolerance),
            mu_assumed,
            l_known,
            line_search_tol: self.line_search_tol.unwrap_or(d.line_search_tol),
            rng_seed: self.rng_seed.unwrap_or(d.rng_seed),
            coefficient_rule: self.coefficient_rule.unwrap_or(d.coefficient_rule),
            momentum_rule: self.momentum_rule.unwrap_or(d.momentum_rule),
            fgm_momentum: self.fgm_momentum.unwrap_or(d.fgm_momentum),
        };
        cfg.validate()
            .map_err(|e| CliError::Config(format!("solver '{}': {e}", self.label())))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Used when no `--out` is given.
    pub dir: Option<PathBuf>,
    pub trace: String,
    pub summary: String,
    pub report: String,
    /// Write per-iteration wall-clock times (makes traces non-reproducible).
    pub wall_time: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: None,
            trace: "trace.csv".into(),
            summary: "summary.json".into(),
            report: "report.json".into(),
            wall_time: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FigureConfig {
    pub iters: usize,
    pub coefficient_rule: CoefficientRule,
    pub fgm_momentum: FgmMomentum,
}

impl Default for FigureConfig {
    fn default() -> Self {
        Self {
            iters: 200,
            coefficient_rule: CoefficientRule::Auto,
            fgm_momentum: FgmMomentum::Listed,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks that need the solver list: non-empty, unique labels.
    pub fn check_solvers(&self) -> Result<(), CliError> {
        if self.solvers.is_empty() {
            return Err(CliError::Config("the solver list is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for s in &self.solvers {
            if s.label().is_empty() {
                return Err(CliError::Config("solver labels must be non-empty".into()));
            }
            if !seen.insert(s.label()) {
                return Err(CliError::Config(format!("duplicate solver label '{}'", s.label())));
            }
        }
        Ok(())
    }

    pub fn build_instance(&self) -> Result<Instance, CliError> {
        self.instance
            .build()
            .map_err(|e| CliError::Config(format!("instance {}: {e}", self.instance.kind())))
    }
}

/// `ALTMIN_OUT_DIR` if set, else `fallback`.
pub fn output_dir(fallback: Option<&Path>) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => fallback.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(".")),
    }
}

/// Create `dir` and open `dir/name` for writing, reporting the path on failure.
pub fn create_output(dir: &Path, name: &str) -> Result<(PathBuf, std::fs::File), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::unwritable(dir, e))?;
    let path = dir.join(name);
    let file = std::fs::File::create(&path).map_err(|e| CliError::unwritable(&path, e))?;
    Ok((path, file))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
certificates = ["am_linear_pl", "aam_main", "aam_Ak_growth"]

[instance]
kind = "quadratic"
seed = 7
dim = 8
cond_number = 100.0

[[solver]]
kind = "am"

[[solver]]
kind = "aam"
label = "aam_mu"
mu_assumed = "declared"
coefficient_rule = "known_l"

[[solver]]
kind = "fgm"
l_known = 3.5
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = RunConfig::parse(EXAMPLE).unwrap();
        assert_eq!(cfg.solvers.len(), 3);
        assert_eq!(cfg.solvers[1].label(), "aam_mu");
        assert_eq!(cfg.solvers[1].mu_assumed, Some(ConstantValue::Keyword(Keyword::Declared)));
        assert_eq!(cfg.solvers[2].l_known, Some(ConstantValue::Value(3.5)));
        assert_eq!(cfg.certificates[2], BoundKind::AamAkGrowth);
        let again = RunConfig::parse(&cfg.to_toml()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = EXAMPLE.replace("seed = 7", "seed = 7\ncolour = 1");
        assert!(matches!(RunConfig::parse(&bad), Err(CliError::Config(_))));
        let bad = EXAMPLE.replace("\"aam_main\"", "\"aam_mian\"");
        assert!(RunConfig::parse(&bad).is_err());
    }

    #[test]
    fn declared_constants_resolve() {
        let cfg = RunConfig::parse(EXAMPLE).unwrap();
        let inst = cfg.build_instance().unwrap();
        let h = inst.objective();
        let c = cfg.solvers[1].resolve(h).unwrap();
        assert_eq!(Some(c.mu_assumed), h.constants().strong_convexity);
        assert_eq!(c.l_known, h.constants().lipschitz);
        assert_eq!(cfg.solvers[2].resolve(h).unwrap().l_known, Some(3.5));
    }

    #[test]
    fn duplicate_labels_and_empty_lists() {
        let mut cfg = RunConfig::parse(EXAMPLE).unwrap();
        cfg.solvers[2].label = Some("am".into());
        assert!(cfg.check_solvers().is_err());
        cfg.solvers.clear();
        assert!(cfg.check_solvers().is_err());
    }
}
