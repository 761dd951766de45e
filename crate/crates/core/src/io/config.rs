//! TOML run configuration and the run manifest.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, ParamError};
use crate::grid::{build_grid, sample_initial, BoundarySpec, InitialCondition};
use crate::kernel::{FractionalParams, DEFAULT_ALPHA_ONE_GUARD};
use crate::simulation::{DtPolicy, SimulationConfig};

use super::csv::read_xy_csv;

const DEFAULT_DT_SAFETY: f64 = 0.9;

/// Time step entry: the word `"auto"` or a positive number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DtDoc {
    Fixed(f64),
    Word(String),
}

impl Default for DtDoc {
    fn default() -> Self {
        DtDoc::Word("auto".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialDoc {
    Delta,
    Box {
        value: f64,
        from: f64,
        to: f64,
    },
    /// Two-column `x,C` file; relative paths resolve against the config file's directory.
    Csv {
        path: PathBuf,
    },
    /// Inline `(x, C)` pairs. Manifests use this so they do not depend on external files.
    Table(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum BoundaryDoc {
    Constant { value: f64 },
    Table(Vec<(f64, f64)>),
}

impl Default for BoundaryDoc {
    fn default() -> Self {
        BoundaryDoc::Constant { value: 0.0 }
    }
}

fn default_sigma() -> f64 {
    1.0
}

fn default_guard() -> f64 {
    DEFAULT_ALPHA_ONE_GUARD
}

/// The configuration document as written by users.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub alpha: f64,
    #[serde(default)]
    pub theta: f64,
    pub k_alpha: f64,
    pub domain: [f64; 2],
    pub n_cells: usize,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default)]
    pub dt: DtDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_safety: Option<f64>,
    pub t_end: f64,
    pub initial: InitialDoc,
    #[serde(default)]
    pub bc_left: BoundaryDoc,
    #[serde(default)]
    pub bc_right: BoundaryDoc,
    #[serde(default)]
    pub snapshots: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub allow_unstable: bool,
    #[serde(default = "default_guard")]
    pub alpha_one_guard: f64,
}

/// A validated configuration plus the settings that only matter to the CLI.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub simulation: SimulationConfig<f64>,
    pub output_dir: Option<PathBuf>,
}

fn invalid(path: &str, message: impl ToString) -> ConfigError {
    ConfigError::Validation {
        path: path.to_string(),
        message: message.to_string(),
    }
}

fn map_toml_error(err: toml::de::Error) -> ConfigError {
    let msg = err.message().to_string();
    for prefix in ["unknown field `", "unknown variant `"] {
        if let Some(rest) = msg.strip_prefix(prefix) {
            if let Some(end) = rest.find('`') {
                return ConfigError::UnknownKey(rest[..end].to_string());
            }
        }
    }
    ConfigError::Parse(err.to_string())
}

fn finite(path: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(path, format!("{v} is not finite")))
    }
}

impl ConfigDoc {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(map_toml_error)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config document always serializes")
    }

    /// Validates every field and builds the simulation configuration. `base_dir` resolves
    /// relative CSV paths.
    pub fn resolve(&self, base_dir: &Path) -> Result<RunConfig, ConfigError> {
        let guard = finite("alpha_one_guard", self.alpha_one_guard)?;
        let params = FractionalParams::with_guard(
            finite("alpha", self.alpha)?,
            finite("theta", self.theta)?,
            guard,
        )
        .map_err(|e| match e {
            ParamError::SkewnessTooLarge { .. } => invalid("theta", e),
            ParamError::InvalidGuard(_) => invalid("alpha_one_guard", e),
            _ => invalid("alpha", e),
        })?;
        let k_alpha = finite("k_alpha", self.k_alpha)?;
        if k_alpha <= 0.0 {
            return Err(invalid("k_alpha", "must be positive"));
        }
        let grid = build_grid(
            finite("domain", self.domain[0])?,
            finite("domain", self.domain[1])?,
            self.n_cells,
        )
        .map_err(|e| {
            invalid(
                if self.n_cells == 0 {
                    "n_cells"
                } else {
                    "domain"
                },
                e,
            )
        })?;
        let sigma = finite("sigma", self.sigma)?;
        if !(0.0..=1.0).contains(&sigma) {
            return Err(invalid("sigma", "must lie in [0, 1]"));
        }
        let t_end = finite("t_end", self.t_end)?;
        if t_end <= 0.0 {
            return Err(invalid("t_end", "must be positive"));
        }
        let dt_policy = match (&self.dt, self.dt_safety) {
            (DtDoc::Fixed(_), Some(_)) => {
                return Err(invalid("dt_safety", "only applies when dt = \"auto\""))
            }
            (DtDoc::Fixed(dt), None) => {
                if !(dt.is_finite() && *dt > 0.0) {
                    return Err(invalid("dt", "must be a positive number or \"auto\""));
                }
                DtPolicy::Fixed(*dt)
            }
            (DtDoc::Word(w), safety) if w == "auto" => {
                let safety = safety.unwrap_or(DEFAULT_DT_SAFETY);
                if !(safety > 0.0 && safety < 1.0) {
                    return Err(invalid("dt_safety", "must lie in (0, 1)"));
                }
                DtPolicy::Auto { safety }
            }
            (DtDoc::Word(w), _) => {
                return Err(invalid(
                    "dt",
                    format!("expected \"auto\" or a number, got \"{w}\""),
                ))
            }
        };
        let mut snapshots = self.snapshots.clone();
        for (i, t) in snapshots.iter().enumerate() {
            if !(t.is_finite() && *t >= 0.0 && *t <= t_end) {
                return Err(invalid(
                    &format!("snapshots[{i}]"),
                    "must lie in [0, t_end]",
                ));
            }
        }
        if snapshots.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("snapshots", "must be sorted"));
        }
        if snapshots.is_empty() {
            snapshots.push(t_end);
        }
        let initial = match &self.initial {
            InitialDoc::Delta => InitialCondition::Delta,
            InitialDoc::Box { value, from, to } => InitialCondition::Box {
                value: *value,
                from: *from,
                to: *to,
            },
            InitialDoc::Csv { path } => {
                let full = base_dir.join(path);
                let rows = read_xy_csv(&full).map_err(|e| invalid("initial.csv.path", e))?;
                InitialCondition::Tabulated(rows)
            }
            InitialDoc::Table(rows) => InitialCondition::Tabulated(rows.clone()),
        };
        sample_initial(&initial, &grid).map_err(|e| invalid("initial", e))?;
        let boundary = |doc: &BoundaryDoc, path: &str| -> Result<BoundarySpec<f64>, ConfigError> {
            match doc {
                BoundaryDoc::Constant { value } => Ok(BoundarySpec::Constant(finite(
                    &format!("{path}.constant.value"),
                    *value,
                )?)),
                BoundaryDoc::Table(rows) => BoundarySpec::time_table(rows.clone())
                    .map_err(|e| invalid(&format!("{path}.table"), e)),
            }
        };
        let simulation = SimulationConfig {
            grid,
            params,
            k_alpha,
            sigma,
            bc_left: boundary(&self.bc_left, "bc_left")?,
            bc_right: boundary(&self.bc_right, "bc_right")?,
            allow_unstable: self.allow_unstable,
            initial,
            t_end,
            snapshot_times: snapshots,
            dt_policy,
        };
        simulation.validate().map_err(|e| invalid("dt", e))?;
        Ok(RunConfig {
            simulation,
            output_dir: self.output_dir.clone(),
        })
    }

    /// Document that resolves back to `cfg`. Tabulated initial data is written inline.
    pub fn from_simulation(cfg: &SimulationConfig<f64>, output_dir: Option<PathBuf>) -> Self {
        let (dt, dt_safety) = match cfg.dt_policy {
            DtPolicy::Fixed(dt) => (DtDoc::Fixed(dt), None),
            DtPolicy::Auto { safety } => (DtDoc::default(), Some(safety)),
        };
        let boundary = |b: &BoundarySpec<f64>| match b {
            BoundarySpec::Constant(value) => BoundaryDoc::Constant { value: *value },
            BoundarySpec::TimeTable(rows) => BoundaryDoc::Table(rows.clone()),
        };
        Self {
            alpha: cfg.params.alpha(),
            theta: cfg.params.theta(),
            k_alpha: cfg.k_alpha,
            domain: [cfg.grid.left(), cfg.grid.right()],
            n_cells: cfg.grid.n_cells(),
            sigma: cfg.sigma,
            dt,
            dt_safety,
            t_end: cfg.t_end,
            initial: match &cfg.initial {
                InitialCondition::Delta => InitialDoc::Delta,
                InitialCondition::Box { value, from, to } => InitialDoc::Box {
                    value: *value,
                    from: *from,
                    to: *to,
                },
                InitialCondition::Tabulated(rows) => InitialDoc::Table(rows.clone()),
            },
            bc_left: boundary(&cfg.bc_left),
            bc_right: boundary(&cfg.bc_right),
            snapshots: cfg.snapshot_times.clone(),
            output_dir,
            allow_unstable: cfg.allow_unstable,
            alpha_one_guard: cfg.params.alpha_one_guard(),
        }
    }
}

/// Parses and validates a configuration; CSV paths resolve against the working directory.
pub fn parse_config(text: &str) -> Result<SimulationConfig<f64>, ConfigError> {
    Ok(parse_run_config(text, Path::new("."))?.simulation)
}

pub fn parse_run_config(text: &str, base_dir: &Path) -> Result<RunConfig, ConfigError> {
    ConfigDoc::from_toml(text)?.resolve(base_dir)
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_run_config(&text, base)
}

/// Everything needed to repeat a run, written next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub version: String,
    pub config_hash: String,
    pub dt: f64,
    pub n_steps: usize,
    /// Offsets `k` covered by the weight table.
    pub window: [i64; 2],
    pub duration_seconds: f64,
    pub config: ConfigDoc,
}

impl RunManifest {
    pub fn new(
        cfg: &SimulationConfig<f64>,
        output_dir: Option<PathBuf>,
        dt: f64,
        n_steps: usize,
        duration_seconds: f64,
    ) -> Self {
        let reach = cfg.grid.n_cells().saturating_sub(1) as i64;
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: cfg.config_hash(),
            dt,
            n_steps,
            window: [-reach, reach],
            duration_seconds,
            config: ConfigDoc::from_simulation(cfg, output_dir),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest always serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(map_toml_error)
    }

    pub fn simulation(&self) -> Result<SimulationConfig<f64>, ConfigError> {
        Ok(self.config.resolve(Path::new("."))?.simulation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = r#"
alpha = 2.0
theta = 0.0
k_alpha = 1.0
domain = [-10.0, 10.0]
n_cells = 1000
initial = "delta"
bc_left = { constant = { value = 0.0 } }
bc_right = { constant = { value = 0.0 } }
t_end = 1.0
"#;

    fn with(extra: &str, base: &str) -> String {
        format!("{base}\n{extra}\n")
    }

    #[test]
    fn point_source_document_is_valid() {
        let cfg = parse_config(FIG2).unwrap();
        assert_eq!(cfg.grid.n_cells(), 1000);
        assert!((cfg.grid.h() - 0.02).abs() < 1e-15);
        assert_eq!(cfg.dt_policy, DtPolicy::Auto { safety: 0.9 });
        assert_eq!(cfg.snapshot_times, vec![1.0]);
    }

    fn validation_path(text: &str) -> String {
        match parse_config(text) {
            Err(ConfigError::Validation { path, .. }) => path,
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn parameter_rejections_name_the_field() {
        assert_eq!(
            validation_path(&FIG2.replace("alpha = 2.0", "alpha = 1.0")),
            "alpha"
        );
        let skew = FIG2
            .replace("alpha = 2.0", "alpha = 1.5")
            .replace("theta = 0.0", "theta = 0.9");
        assert_eq!(validation_path(&skew), "theta");
        assert_eq!(validation_path(&with("sigma = 1.5", FIG2)), "sigma");
        assert_eq!(
            validation_path(&with("snapshots = [0.5, 2.0]", FIG2)),
            "snapshots[1]"
        );
        assert_eq!(validation_path(&with("dt = 0.01", FIG2)), "dt");
        assert_eq!(validation_path(&with("dt = \"soon\"", FIG2)), "dt");
    }

    #[test]
    fn unknown_keys_are_reported() {
        match parse_config(&with("colour = 3", FIG2)) {
            Err(ConfigError::UnknownKey(k)) => assert_eq!(k, "colour"),
            other => panic!("{other:?}"),
        }
        let bad_bc = FIG2.replace(
            "constant = { value = 0.0 } }\nbc_right",
            "fixed = 1 }\nbc_right",
        );
        assert!(matches!(
            parse_config(&bad_bc),
            Err(ConfigError::UnknownKey(_))
        ));
    }

    #[test]
    fn malformed_text_is_a_parse_error() {
        assert!(matches!(
            parse_config("alpha = = 2"),
            Err(ConfigError::Parse(_))
        ));
    }

    #[test]
    fn box_and_table_variants() {
        let text = r#"
alpha = 0.9
theta = -0.7
k_alpha = 1.0
domain = [0.0, 1.0]
n_cells = 100
sigma = 0.5
dt = 0.0001
t_end = 0.01
initial = { box = { value = 10.0, from = 0.4, to = 0.6 } }
bc_left = { table = [[0.0, 0.0], [0.005, 10.0]] }
snapshots = [0.0, 0.005]
output_dir = "out"
"#;
        let run = parse_run_config(text, Path::new(".")).unwrap();
        assert_eq!(run.output_dir, Some(PathBuf::from("out")));
        assert_eq!(run.simulation.dt_policy, DtPolicy::Fixed(1e-4));
        assert_eq!(run.simulation.bc_left.at(0.0025), 5.0);
        assert_eq!(run.simulation.bc_right, BoundarySpec::Constant(0.0));
    }

    #[test]
    fn manifest_round_trip_is_identity() {
        let text = with(
            "bc_left = { table = [[0.0, 0.1], [1.0, 0.30000000000000004]] }",
            &FIG2.replace("bc_left = { constant = { value = 0.0 } }\n", ""),
        );
        let cfg = parse_config(&text).unwrap();
        let manifest = RunManifest::new(&cfg, Some("o".into()), cfg.resolve_dt(), 5556, 1.5);
        let back = RunManifest::from_toml(&manifest.to_toml()).unwrap();
        assert_eq!(back, manifest);
        assert_eq!(back.simulation().unwrap(), cfg);
    }
}
