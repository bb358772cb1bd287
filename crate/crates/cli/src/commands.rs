//! Subcommand bodies: each turns a resolved [`RunConfig`] into output tables.

use std::path::PathBuf;

use optodicke::diagram::{self, BranchTag, GridSpec, SweepSpec};
use optodicke::rabi::{self, RabiParams};
use optodicke::solver::{self, PhaseLabel};
use optodicke::{Error, SpinBranch, Stability};

use crate::config::RunConfig;
use crate::table::{Cell, Table};
use crate::{CliError, Command};

/// Tables to write, each with its destination (`None` is standard output).
pub type Outputs = Vec<(Option<PathBuf>, Table)>;

pub fn stability_str(s: Stability) -> &'static str {
    match s {
        Stability::Stable => "stable",
        Stability::Unstable => "unstable",
        Stability::Marginal => "marginal",
    }
}

fn branch_str(b: SpinBranch) -> &'static str {
    match b {
        SpinBranch::Normal => "minus",
        SpinBranch::Inverted => "plus",
    }
}

pub fn run_command(command: &Command, cfg: &RunConfig) -> Result<Outputs, CliError> {
    let main = |t: Table| vec![(cfg.output.clone(), t)];
    Ok(match command {
        Command::Roots { .. } => main(roots(cfg)?),
        Command::Sweep { .. } => main(sweep(cfg)?),
        Command::PhaseDiagram { boundaries, trace, .. } => {
            let (cells, bounds, rows) = phase_diagram(cfg, trace.is_some())?;
            let mut out = main(cells);
            if let Some(p) = boundaries {
                out.push((Some(p.clone()), bounds));
            }
            if let (Some(p), Some(rows)) = (trace, rows) {
                out.push((Some(p.clone()), rows));
            }
            out
        }
        Command::TurningPoint { .. } => main(turning_point(cfg)?),
        Command::SpClosure { .. } => main(sp_closure(cfg)?),
        Command::RabiCompare { .. } => main(rabi_compare(cfg)?),
    })
}

pub fn roots(cfg: &RunConfig) -> Result<Table, CliError> {
    let p = &cfg.model;
    let landscape = solver::stationary_points(p, &cfg.solver).map_err(|e| e.at(p.g, p.zeta))?;
    let ground = solver::select_ground(p, &landscape);
    let mut t = Table::new([
        "branch", "tag", "gamma_bar", "n_p", "delta_n_a", "n_b", "energy", "curvature", "stability", "theta",
        "rho_bar", "is_ground",
    ]);
    for set in [&landscape.normal, &landscape.inverted] {
        for (i, point) in set.points().enumerate() {
            let obs = p.observables_at(point);
            let angles = p.scs_angles(point.amplitude);
            t.push(vec![
                branch_str(point.branch).into(),
                BranchTag::of(point, i == 0).as_str().into(),
                point.amplitude.value().into(),
                obs.n_p.into(),
                obs.delta_n_a.into(),
                obs.n_b.into(),
                point.energy.into(),
                point.curvature.into(),
                stability_str(point.stability).into(),
                angles.theta.into(),
                angles.rho_bar.into(),
                (if *point == ground.point { "true" } else { "false" }).into(),
            ]);
        }
    }
    Ok(t)
}

pub fn sweep(cfg: &RunConfig) -> Result<Table, CliError> {
    let spec = SweepSpec {
        params: cfg.model,
        zeta: cfg.model.zeta,
        g: cfg.g_range,
    };
    let rows = diagram::sweep_g(&spec, &cfg.solver)?;
    let mut columns: Vec<String> = ["g", "phase", "np_ground", "dna_ground", "nb_ground", "eps_ground"]
        .map(String::from)
        .to_vec();
    for tag in BranchTag::ALL {
        for q in ["np", "eps", "stab"] {
            columns.push(format!("{q}_{}", tag.as_str()));
        }
    }
    let mut t = Table::new(columns);
    for row in rows {
        let mut cells: Vec<Cell> = vec![
            row.g.into(),
            row.phase.as_str().into(),
            row.ground.n_p.into(),
            row.ground.delta_n_a.into(),
            row.ground.n_b.into(),
            row.ground.energy.into(),
        ];
        for tag in BranchTag::ALL {
            match row.branch(tag) {
                Some(b) => cells.extend([
                    b.observables.n_p.into(),
                    b.observables.energy.into(),
                    stability_str(b.stability).into(),
                ]),
                None => cells.extend([Cell::Empty, Cell::Empty, Cell::Empty]),
            }
        }
        t.push(cells);
    }
    Ok(t)
}

/// Cell labels, refined boundaries, and (optionally) the `g_c`/`g_t` trace.
pub fn phase_diagram(cfg: &RunConfig, with_trace: bool) -> Result<(Table, Table, Option<Table>), CliError> {
    let spec = GridSpec {
        params: cfg.model,
        g: cfg.g_range,
        zeta: cfg.zeta_range,
    };
    let grid = diagram::phase_grid(&spec, &cfg.solver)?;
    let mut cells = Table::new(["zeta", "g", "phase"]);
    for c in &grid.cells {
        cells.push(vec![c.zeta.into(), c.g.into(), c.phase.as_str().into()]);
    }
    let mut bounds = Table::new(["zeta", "g", "below", "above"]);
    for b in &grid.boundaries {
        bounds.push(vec![b.zeta.into(), b.g.into(), b.below.as_str().into(), b.above.as_str().into()]);
    }
    let trace = if with_trace {
        let mut t = Table::new(["zeta", "g_c", "g_t"]);
        for r in diagram::boundary_trace(&spec, &cfg.solver)? {
            t.push(vec![r.zeta.into(), r.g_c.into(), r.g_t.into()]);
        }
        Some(t)
    } else {
        None
    };
    Ok((cells, bounds, trace))
}

/// `g_t` at the configured `zeta`; the cells stay empty when there is no
/// superradiant window (`zeta = 0` is a continuous transition, and the window
/// is closed at large `zeta`).
pub fn turning_point(cfg: &RunConfig) -> Result<Table, CliError> {
    let p = &cfg.model;
    let tp = match solver::turning_point(p, p.zeta, &cfg.solver) {
        Ok(tp) => tp,
        Err(Error::NotFound(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let mut t = Table::new(["zeta", "g_c", "g_t", "gamma_bar", "residual"]);
    t.push(vec![
        p.zeta.into(),
        solver::critical_coupling(p).into(),
        tp.map(|tp| tp.g).into(),
        tp.map(|tp| tp.amplitude.value()).into(),
        tp.map(|tp| tp.residual).into(),
    ]);
    Ok(t)
}

pub fn sp_closure(cfg: &RunConfig) -> Result<Table, CliError> {
    let c = solver::sp_closure(&cfg.model, cfg.width_tol, &cfg.solver)?;
    let mut t = Table::new(["width_tol", "zeta_star", "zeta_estimate", "width_at_star"]);
    t.push(vec![c.width_tol.into(), c.zeta_star.into(), c.zeta_estimate.into(), c.width_at_star.into()]);
    Ok(t)
}

pub fn rabi_compare(cfg: &RunConfig) -> Result<Table, CliError> {
    let m = &cfg.model;
    let params = RabiParams::new(m.omega, m.omega_a, 0.0)?;
    let rows = rabi::compare_curve(&params, &cfg.g_range.values(), cfg.n_max)?;
    let mut t = Table::new([
        "g", "e_ed", "e_variational", "deviation", "residual", "truncation_change", "phase",
    ]);
    let g_c = (m.omega * m.omega_a).sqrt();
    for r in rows {
        let phase = if r.g <= g_c { PhaseLabel::NpNminus } else { PhaseLabel::Sp };
        t.push(vec![
            r.g.into(),
            r.e_ed.into(),
            r.e_variational.into(),
            r.deviation.into(),
            r.residual.into(),
            r.truncation_change.into(),
            phase.as_str().into(),
        ]);
    }
    Ok(t)
}
