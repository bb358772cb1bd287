//! JSON run configuration, merged as defaults < file < command-line flags.

use std::path::{Path, PathBuf};

use optodicke::diagram::GridAxis;
use optodicke::solver::DEFAULT_WIDTH_TOL;
use optodicke::{ModelParams, SolverConfig};
use serde::Deserialize;

use crate::table::Format;
use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub omega: Option<f64>,
    pub omega_a: Option<f64>,
    pub omega_b: Option<f64>,
    pub g: Option<f64>,
    pub zeta: Option<f64>,
    pub n_atoms: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub tol_root: Option<f64>,
    pub tol_curv: Option<f64>,
    pub scan_points: Option<usize>,
    pub tol_gt: Option<f64>,
    pub width_tol: Option<f64>,
}

/// Contents of a config file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub solver: SolverSection,
    pub g_range: Option<String>,
    pub zeta_range: Option<String>,
    pub n_max: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelParams,
    pub solver: SolverConfig,
    pub width_tol: f64,
    pub g_range: GridAxis,
    pub zeta_range: GridAxis,
    pub n_max: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelParams {
                g: 1.5,
                zeta: 1.0,
                ..ModelParams::default()
            },
            solver: SolverConfig::default(),
            width_tol: DEFAULT_WIDTH_TOL,
            g_range: GridAxis::new(0.0, 3.0, 301),
            zeta_range: GridAxis::new(0.0, 3.0, 31),
            n_max: 300,
            output: None,
            format: Format::Csv,
        }
    }
}

pub fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<ConfigFile, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Config(format!("at `{path}`: {}", e.into_inner()))
    })
}

fn parse_axis(key: &str, s: &str) -> Result<GridAxis, CliError> {
    s.parse().map_err(|e| CliError::Config(format!("at `{key}`: {e}")))
}

/// Command-line overrides; `None` leaves the file or default value in place.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub model: ModelSection,
    pub solver: SolverSection,
    pub g_range: Option<GridAxis>,
    pub zeta_range: Option<GridAxis>,
    pub n_max: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

fn apply_model(target: &mut ModelParams, m: &ModelSection) {
    target.omega = m.omega.unwrap_or(target.omega);
    target.omega_a = m.omega_a.unwrap_or(target.omega_a);
    target.omega_b = m.omega_b.unwrap_or(target.omega_b);
    target.g = m.g.unwrap_or(target.g);
    target.zeta = m.zeta.unwrap_or(target.zeta);
    target.n_atoms = m.n_atoms.unwrap_or(target.n_atoms);
}

fn apply_solver(cfg: &mut RunConfig, s: &SolverSection) {
    cfg.solver.tol_root = s.tol_root.unwrap_or(cfg.solver.tol_root);
    cfg.solver.tol_curv = s.tol_curv.unwrap_or(cfg.solver.tol_curv);
    cfg.solver.scan_points = s.scan_points.unwrap_or(cfg.solver.scan_points);
    cfg.solver.tol_gt = s.tol_gt.unwrap_or(cfg.solver.tol_gt);
    cfg.width_tol = s.width_tol.unwrap_or(cfg.width_tol);
}

impl RunConfig {
    pub fn resolve(file: Option<&ConfigFile>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(file) = file {
            apply_model(&mut cfg.model, &file.model);
            apply_solver(&mut cfg, &file.solver);
            if let Some(r) = &file.g_range {
                cfg.g_range = parse_axis("g_range", r)?;
            }
            if let Some(r) = &file.zeta_range {
                cfg.zeta_range = parse_axis("zeta_range", r)?;
            }
            cfg.n_max = file.n_max.unwrap_or(cfg.n_max);
            cfg.output = file.output.clone().or(cfg.output);
            cfg.format = file.format.unwrap_or(cfg.format);
        }
        apply_model(&mut cfg.model, &flags.model);
        apply_solver(&mut cfg, &flags.solver);
        cfg.g_range = flags.g_range.unwrap_or(cfg.g_range);
        cfg.zeta_range = flags.zeta_range.unwrap_or(cfg.zeta_range);
        cfg.n_max = flags.n_max.unwrap_or(cfg.n_max);
        cfg.output = flags.output.clone().or(cfg.output);
        cfg.format = flags.format.unwrap_or(cfg.format);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every invariant, naming the offending key path.
    pub fn validate(&self) -> Result<(), CliError> {
        self.model.validate().map_err(|e| keyed(Some("model"), e))?;
        self.solver.validate().map_err(|e| keyed(Some("solver"), e))?;
        if !(self.width_tol.is_finite() && self.width_tol > 0.0) {
            return Err(CliError::Config(format!("at `solver.width_tol`: must be > 0, got {}", self.width_tol)));
        }
        self.g_range.validate("g_range").map_err(|e| keyed(None, e))?;
        self.zeta_range.validate("zeta_range").map_err(|e| keyed(None, e))?;
        if self.n_max < 2 {
            return Err(CliError::Config(format!("at `n_max`: must be >= 2, got {}", self.n_max)));
        }
        Ok(())
    }
}

fn keyed(section: Option<&str>, e: optodicke::Error) -> CliError {
    match e {
        optodicke::Error::InvalidParameter { field, reason } => {
            let path = section.map_or_else(|| field.to_owned(), |s| format!("{s}.{field}"));
            CliError::Config(format!("at `{path}`: {reason}"))
        }
        other => CliError::Config(other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_defaults() {
        let file = parse_config("{}").unwrap();
        let cfg = RunConfig::resolve(Some(&file), &Overrides::default()).unwrap();
        assert_eq!((cfg.model.omega, cfg.model.omega_a, cfg.model.omega_b, cfg.model.n_atoms), (1.0, 1.0, 10.0, 1));
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn negative_omega_b_rejected_with_key_path() {
        let file = parse_config(r#"{"model": {"omega_b": -1}}"#).unwrap();
        let err = RunConfig::resolve(Some(&file), &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("model.omega_b"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_key_rejected_with_key_path() {
        let err = parse_config(r#"{"model": {"omegab": 3}}"#).unwrap_err();
        assert!(err.to_string().contains("model"), "{err}");
        assert!(err.to_string().contains("omegab"), "{err}");
        let err = parse_config(r#"{"solver": {"scan_points": "many"}}"#).unwrap_err();
        assert!(err.to_string().contains("solver.scan_points"), "{err}");
    }

    #[test]
    fn flags_override_file() {
        let file = parse_config(r#"{"model": {"zeta": 1.0}, "g_range": "0:2:5"}"#).unwrap();
        let flags = Overrides {
            model: ModelSection { zeta: Some(1.203), ..Default::default() },
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Some(&file), &flags).unwrap();
        assert_eq!(cfg.model.zeta, 1.203);
        assert_eq!(cfg.g_range, GridAxis::new(0.0, 2.0, 5));
    }

    #[test]
    fn bad_range_in_file() {
        let file = parse_config(r#"{"g_range": "3:0:5"}"#).unwrap();
        let err = RunConfig::resolve(Some(&file), &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("`g_range`"), "{err}");
    }
}
