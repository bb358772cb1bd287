//! Parameter sweeps over the coupling plane.
//!
//! Every grid point is solved independently and in parallel; results are
//! always returned in grid order so the output does not depend on the number
//! of worker threads.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, Observables, SpinBranch, Stability, VariationalPoint};
use crate::solver::{self, Landscape, PhaseLabel, SolverConfig};

/// Photon-phonon couplings used for the observable-curve presets.
pub const PRESET_ZETAS: [f64; 4] = [0.0, 1.0, 2.0, 3.0];

/// Boundary localization tolerance on `g`.
pub const BOUNDARY_TOL: f64 = 1e-4;

/// Inclusive, evenly spaced grid `min:max:count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    pub fn validate(&self, name: &'static str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::invalid(name, "range bounds must be finite"));
        }
        if self.min < 0.0 {
            return Err(Error::invalid(name, format!("range must start at >= 0, got {}", self.min)));
        }
        if self.count == 0 {
            return Err(Error::invalid(name, "count must be >= 1"));
        }
        if self.min > self.max || (self.count > 1 && self.min == self.max) {
            return Err(Error::invalid(name, format!("range {} is not increasing", self)));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            return self.min;
        }
        if i + 1 == self.count {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

impl fmt::Display for GridAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseAxisError(pub String);

impl fmt::Display for ParseAxisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expected `min:max:count`, {}", self.0)
    }
}

impl std::error::Error for ParseAxisError {}

impl FromStr for GridAxis {
    type Err = ParseAxisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, count] = parts.as_slice() else {
            return Err(ParseAxisError(format!("got `{s}`")));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| ParseAxisError(format!("bad bound `{t}`: {e}")));
        let count = count
            .trim()
            .parse::<usize>()
            .map_err(|e| ParseAxisError(format!("bad count `{count}`: {e}")))?;
        Ok(GridAxis::new(num(min)?, num(max)?, count))
    }
}

/// Curve families of the observable plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BranchTag {
    /// Zero photons, normal spin.
    #[serde(rename = "N-")]
    NMinus,
    /// Zero photons, inverted spin.
    #[serde(rename = "N+")]
    NPlus,
    /// Stable nonzero-photon root of the normal branch.
    #[serde(rename = "gs-")]
    StableMinus,
    /// Unstable nonzero-photon root of the normal branch.
    #[serde(rename = "gus-")]
    UnstableMinus,
    /// Nonzero-photon root of the inverted branch.
    #[serde(rename = "gus+")]
    UnstablePlus,
}

impl BranchTag {
    pub const ALL: [BranchTag; 5] = [
        BranchTag::NMinus,
        BranchTag::NPlus,
        BranchTag::StableMinus,
        BranchTag::UnstableMinus,
        BranchTag::UnstablePlus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BranchTag::NMinus => "N-",
            BranchTag::NPlus => "N+",
            BranchTag::StableMinus => "gs-",
            BranchTag::UnstableMinus => "gus-",
            BranchTag::UnstablePlus => "gus+",
        }
    }

    /// Curve family of a stationary point; `is_zero` marks the zero-photon point.
    pub fn of<T: crate::Scalar>(point: &VariationalPoint<T>, is_zero: bool) -> Self {
        match (point.branch, is_zero, point.stability) {
            (SpinBranch::Normal, true, _) => BranchTag::NMinus,
            (SpinBranch::Inverted, true, _) => BranchTag::NPlus,
            (SpinBranch::Normal, false, Stability::Unstable) => BranchTag::UnstableMinus,
            (SpinBranch::Normal, false, _) => BranchTag::StableMinus,
            (SpinBranch::Inverted, false, _) => BranchTag::UnstablePlus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchEntry {
    pub tag: BranchTag,
    pub observables: Observables<f64>,
    pub stability: Stability,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub g: f64,
    pub phase: PhaseLabel,
    pub ground: Observables<f64>,
    /// Every stationary point at this `g`, sorted by tag.
    pub branches: Vec<BranchEntry>,
}

impl SweepRow {
    pub fn branch(&self, tag: BranchTag) -> Option<&BranchEntry> {
        self.branches.iter().find(|b| b.tag == tag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Fixed parameters; `g` and `zeta` are overridden by the sweep.
    pub params: ModelParams<f64>,
    pub zeta: f64,
    pub g: GridAxis,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.params.with_zeta(self.zeta).with_g(0.0).validate()?;
        self.g.validate("g")?;
        if self.g.count < 2 {
            return Err(Error::invalid("g", "a sweep needs at least 2 points"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub params: ModelParams<f64>,
    pub g: GridAxis,
    pub zeta: GridAxis,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        self.params.with_g(0.0).with_zeta(0.0).validate()?;
        self.g.validate("g")?;
        self.zeta.validate("zeta")
    }
}

fn tag_branches(params: &ModelParams<f64>, landscape: &Landscape<f64>) -> Vec<BranchEntry> {
    let mut entries: Vec<BranchEntry> = Vec::new();
    for set in [&landscape.normal, &landscape.inverted] {
        for (i, point) in set.points().enumerate() {
            let tag = BranchTag::of(point, i == 0);
            if entries.iter().all(|e| e.tag != tag) {
                entries.push(BranchEntry {
                    tag,
                    observables: params.observables_at(point),
                    stability: point.stability,
                });
            }
        }
    }
    entries.sort_by_key(|e| e.tag);
    entries
}

/// Solves one point of a sweep.
pub fn sweep_row(params: &ModelParams<f64>, config: &SolverConfig<f64>) -> Result<SweepRow> {
    let landscape = solver::stationary_points(params, config).map_err(|e| e.at(params.g, params.zeta))?;
    let ground = solver::select_ground(params, &landscape);
    Ok(SweepRow {
        g: params.g,
        phase: ground.phase,
        ground: ground.observables,
        branches: tag_branches(params, &landscape),
    })
}

/// Ground state and all coexisting stationary points along a `g` sweep.
pub fn sweep_g(spec: &SweepSpec, config: &SolverConfig<f64>) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    config.validate()?;
    let base = spec.params.with_zeta(spec.zeta);
    (0..spec.g.count)
        .into_par_iter()
        .map(|i| sweep_row(&base.with_g(spec.g.value(i)), config))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub g: f64,
    pub zeta: f64,
    pub phase: PhaseLabel,
}

/// A label change along `g` at fixed `zeta`, localized to [`BOUNDARY_TOL`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub zeta: f64,
    pub g: f64,
    pub below: PhaseLabel,
    pub above: PhaseLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    /// Cells ordered by `zeta`, then by `g`.
    pub cells: Vec<PhaseCell>,
    pub boundaries: Vec<BoundarySample>,
}

fn label(params: &ModelParams<f64>, config: &SolverConfig<f64>) -> Result<PhaseLabel> {
    solver::ground_state(params, config)
        .map(|gs| gs.phase)
        .map_err(|e| e.at(params.g, params.zeta))
}

fn refine_boundary(
    base: &ModelParams<f64>,
    (mut lo, mut hi): (f64, f64),
    below: PhaseLabel,
    config: &SolverConfig<f64>,
) -> Result<f64> {
    while hi - lo > BOUNDARY_TOL {
        let mid = 0.5 * (lo + hi);
        if label(&base.with_g(mid), config)? == below {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Ground-state labels on a `(g, zeta)` grid plus refined label boundaries.
pub fn phase_grid(spec: &GridSpec, config: &SolverConfig<f64>) -> Result<PhaseGrid> {
    spec.validate()?;
    config.validate()?;
    let (ng, nz) = (spec.g.count, spec.zeta.count);
    let cells: Vec<PhaseCell> = (0..ng * nz)
        .into_par_iter()
        .map(|idx| {
            let (g, zeta) = (spec.g.value(idx % ng), spec.zeta.value(idx / ng));
            let phase = label(&spec.params.with_g(g).with_zeta(zeta), config)?;
            Ok(PhaseCell { g, zeta, phase })
        })
        .collect::<Result<_>>()?;

    let changes: Vec<(usize, usize)> = (0..nz)
        .flat_map(|iz| (0..ng.saturating_sub(1)).map(move |ig| (iz, ig)))
        .filter(|&(iz, ig)| cells[iz * ng + ig].phase != cells[iz * ng + ig + 1].phase)
        .collect();
    let boundaries = changes
        .into_par_iter()
        .map(|(iz, ig)| {
            let (left, right) = (cells[iz * ng + ig], cells[iz * ng + ig + 1]);
            let base = spec.params.with_zeta(left.zeta);
            let g = refine_boundary(&base, (left.g, right.g), left.phase, config)?;
            Ok(BoundarySample {
                zeta: left.zeta,
                g,
                below: left.phase,
                above: right.phase,
            })
        })
        .collect::<Result<_>>()?;
    Ok(PhaseGrid { cells, boundaries })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRow {
    pub zeta: f64,
    pub g_c: f64,
    /// Absent for `zeta = 0` and beyond the closure of the superradiant window.
    pub g_t: Option<f64>,
}

/// `g_c` and `g_t` along the `zeta` axis of `spec`.
pub fn boundary_trace(spec: &GridSpec, config: &SolverConfig<f64>) -> Result<Vec<BoundaryRow>> {
    spec.validate()?;
    config.validate()?;
    (0..spec.zeta.count)
        .into_par_iter()
        .map(|i| {
            let zeta = spec.zeta.value(i);
            let g_t = match solver::turning_point(&spec.params, zeta, config) {
                Ok(tp) => tp.map(|t| t.g),
                Err(Error::NotFound(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(BoundaryRow {
                zeta,
                g_c: solver::critical_coupling(&spec.params),
                g_t,
            })
        })
        .collect()
}
