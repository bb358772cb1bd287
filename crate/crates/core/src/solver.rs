//! Stationary points, stability, critical couplings and ground-state selection.
//!
//! Nonzero-photon roots of `p∓` are located in the photon fraction
//! `x = γ̄² ∈ (0, x_hi]` by a dense sign scan followed by bisection in `γ̄`.
//! On the normal branch `p₋` is concave in `x`, so its single interior
//! maximum (known in closed form) is added to the scan nodes; this keeps the
//! two roots bracketed however close they are to merging at the turning point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, Observables, ScaledAmplitude, SpinBranch, Stability, VariationalPoint};
use crate::scalar::Scalar;

/// Width of the superradiant window below which it counts as closed.
pub const DEFAULT_WIDTH_TOL: f64 = 1e-3;

const MAX_BISECTIONS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig<T> {
    /// Absolute tolerance on `γ̄` for root bisection.
    pub tol_root: T,
    /// Curvatures with `|∂²ε/∂γ̄²| <= tol_curv` are marginal.
    pub tol_curv: T,
    /// Number of scan intervals over the root search domain.
    pub scan_points: usize,
    /// Absolute tolerance on the turning-point coupling.
    pub tol_gt: T,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            tol_root: T::tol(1e-10, 64.0),
            tol_curv: T::tol(1e-9, 64.0),
            scan_points: 2000,
            tol_gt: T::tol(1e-6, 1024.0),
        }
    }
}

impl<T: Scalar> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [("tol_root", self.tol_root), ("tol_curv", self.tol_curv), ("tol_gt", self.tol_gt)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::invalid(field, format!("must be finite and > 0, got {v}")));
            }
        }
        if self.scan_points < 100 {
            return Err(Error::invalid("scan_points", format!("must be >= 100, got {}", self.scan_points)));
        }
        Ok(())
    }
}

/// Ground-state phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseLabel {
    /// Zero photons, normal pseudospin.
    #[serde(rename = "NP_Nminus")]
    NpNminus,
    /// Superradiant: nonzero photon fraction.
    #[serde(rename = "SP")]
    Sp,
    /// Zero photons, inverted pseudospin (population inversion).
    #[serde(rename = "NP_Nplus")]
    NpNplus,
}

impl PhaseLabel {
    pub fn of<T: Scalar>(point: &VariationalPoint<T>) -> Self {
        match (point.branch, point.amplitude.is_zero()) {
            (SpinBranch::Normal, true) => PhaseLabel::NpNminus,
            (SpinBranch::Inverted, true) => PhaseLabel::NpNplus,
            (_, false) => PhaseLabel::Sp,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PhaseLabel::NpNminus => "NP_Nminus",
            PhaseLabel::Sp => "SP",
            PhaseLabel::NpNplus => "NP_Nplus",
        }
    }
}

impl std::fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// All stationary points of one branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet<T> {
    pub branch: SpinBranch,
    /// Nonzero-amplitude stationary points, ascending in amplitude.
    pub roots: Vec<VariationalPoint<T>>,
    pub zero_point: VariationalPoint<T>,
}

impl<T: Scalar> RootSet<T> {
    pub fn stable_count(&self) -> usize {
        self.roots.iter().filter(|r| r.stability == Stability::Stable).count()
    }

    /// Zero point followed by the nonzero roots.
    pub fn points(&self) -> impl Iterator<Item = &VariationalPoint<T>> {
        std::iter::once(&self.zero_point).chain(self.roots.iter())
    }
}

/// Stationary points of both branches at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Landscape<T> {
    pub normal: RootSet<T>,
    pub inverted: RootSet<T>,
}

impl<T: Scalar> Landscape<T> {
    pub fn points(&self) -> impl Iterator<Item = &VariationalPoint<T>> {
        self.normal.points().chain(self.inverted.points())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundState<T> {
    pub phase: PhaseLabel,
    pub point: VariationalPoint<T>,
    pub observables: Observables<T>,
}

/// Fold of the normal branch where the stable and unstable roots merge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningPoint<T> {
    pub g: T,
    /// Location of the merged root.
    pub amplitude: ScaledAmplitude<T>,
    /// `p₋` at the merged root; vanishes as the bracket shrinks.
    pub residual: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpClosure<T> {
    /// Smallest `ζ` with `g_t − g_c <= width_tol`.
    pub zeta_star: T,
    /// Small-amplitude estimate `√(ω_b ω²/ω_a)` of exact closure.
    pub zeta_estimate: T,
    pub width_tol: T,
    /// `g_t − g_c` at `zeta_star` (zero once the window is closed).
    pub width_at_star: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoints<T> {
    pub g_c: T,
    /// `None` when `ζ = 0` or beyond the closure.
    pub g_t: Option<T>,
    pub zeta_star: T,
}

/// `g_c = √(ω ω_a)`.
pub fn critical_coupling<T: Scalar>(params: &ModelParams<T>) -> T {
    (params.omega * params.omega_a).sqrt()
}

pub fn zero_photon_point<T: Scalar>(
    params: &ModelParams<T>,
    branch: SpinBranch,
    config: &SolverConfig<T>,
) -> VariationalPoint<T> {
    VariationalPoint::evaluate(params, branch, ScaledAmplitude::zero(), config.tol_curv)
}

/// Interior maximum of `p₋(x)`, from `A³ = ω_b g⁴/ζ²`.
pub(crate) fn normal_branch_peak<T: Scalar>(params: &ModelParams<T>) -> Option<T> {
    if params.zeta <= T::zero() || params.g <= T::zero() {
        return None;
    }
    let g2 = params.g * params.g;
    let a = (params.omega_b * g2 * g2 / (params.zeta * params.zeta)).cbrt();
    let x = (a * a - params.omega_a * params.omega_a) / (T::lit(4.0) * g2);
    (x > T::zero()).then_some(x)
}

/// Upper end of the scanned photon-fraction range, past which `p∓ < 0`.
fn search_limit<T: Scalar>(params: &ModelParams<T>, branch: SpinBranch) -> T {
    let offset = match branch {
        SpinBranch::Normal => params.omega,
        SpinBranch::Inverted => params.omega + params.g * params.g / params.omega_a,
    };
    T::lit(1.2) * offset * params.omega_b / (T::two() * params.zeta * params.zeta)
}

/// Bisects `p` in `γ̄` between photon fractions `a < b` with a sign change.
fn bisect_root<T: Scalar>(params: &ModelParams<T>, branch: SpinBranch, a: T, b: T, tol: T) -> T {
    let (mut lo, mut hi) = (a.sqrt(), b.sqrt());
    let lo_negative = params.poly_at(branch, a) < T::zero();
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = T::half() * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let p = params.poly_at(branch, mid * mid);
        if p == T::zero() {
            return mid;
        }
        if (p < T::zero()) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    T::half() * (lo + hi)
}

/// Finds and classifies every nonzero-amplitude stationary point of `ε∓`.
pub fn find_roots<T: Scalar>(
    params: &ModelParams<T>,
    branch: SpinBranch,
    config: &SolverConfig<T>,
) -> Result<RootSet<T>> {
    params.validate()?;
    config.validate()?;
    let zero_point = zero_photon_point(params, branch, config);
    let mut fractions = Vec::new();

    if params.zeta == T::zero() {
        // p₊ > 0 everywhere; p₋ = 0 has the closed-form Dicke solution.
        if branch == SpinBranch::Normal && params.g > T::zero() {
            let four = T::lit(4.0);
            let g2 = params.g * params.g;
            let x = g2 / (four * params.omega * params.omega)
                - params.omega_a * params.omega_a / (four * g2);
            if x > T::zero() {
                fractions.push(x);
            }
        }
    } else {
        let x_hi = search_limit(params, branch);
        let n = config.scan_points;
        let step = x_hi / T::lit(n as f64);
        let mut nodes: Vec<T> = (0..=n).map(|i| step * T::lit(i as f64)).collect();
        if branch == SpinBranch::Normal {
            if let Some(peak) = normal_branch_peak(params).filter(|&x| x < x_hi) {
                let residual = params.poly_at(branch, peak);
                if residual.abs() <= config.tol_curv {
                    return Err(Error::DegenerateBracket {
                        x: peak.as_f64(),
                        residual: residual.as_f64(),
                    });
                }
                let at = nodes.partition_point(|&x| x < peak);
                if nodes.get(at) != Some(&peak) {
                    nodes.insert(at, peak);
                }
            }
        }
        let values: Vec<T> = nodes.iter().map(|&x| params.poly_at(branch, x)).collect();
        for i in 0..nodes.len() - 1 {
            let (a, b) = (nodes[i], nodes[i + 1]);
            let (pa, pb) = (values[i], values[i + 1]);
            if pa == T::zero() && a > T::zero() {
                fractions.push(a);
            } else if (pa < T::zero() && pb > T::zero()) || (pa > T::zero() && pb < T::zero()) {
                let gb = bisect_root(params, branch, a, b, config.tol_root);
                fractions.push(gb * gb);
            }
        }
    }

    let roots = fractions
        .into_iter()
        .map(|x| {
            VariationalPoint::evaluate(params, branch, ScaledAmplitude::from_photon_fraction(x), config.tol_curv)
        })
        .collect();
    Ok(RootSet {
        branch,
        roots,
        zero_point,
    })
}

pub fn stationary_points<T: Scalar>(params: &ModelParams<T>, config: &SolverConfig<T>) -> Result<Landscape<T>> {
    Ok(Landscape {
        normal: find_roots(params, SpinBranch::Normal, config)?,
        inverted: find_roots(params, SpinBranch::Inverted, config)?,
    })
}

/// A marginal zero-photon point is a minimum when the quartic term wins,
/// i.e. `dp/dx > 0` at `x = 0`.
fn is_ground_candidate<T: Scalar>(params: &ModelParams<T>, point: &VariationalPoint<T>) -> bool {
    match point.stability {
        Stability::Stable => true,
        Stability::Unstable => false,
        Stability::Marginal => {
            point.amplitude.is_zero() && params.poly_slope_at(point.branch, T::zero()) > T::zero()
        }
    }
}

/// Lowest-energy locally stable stationary point among both branches.
pub fn select_ground<T: Scalar>(params: &ModelParams<T>, landscape: &Landscape<T>) -> GroundState<T> {
    let tie = T::lit(1e-12);
    let mut best: Option<&VariationalPoint<T>> = None;
    for point in landscape.points().filter(|p| is_ground_candidate(params, p)) {
        best = match best {
            None => Some(point),
            Some(b) if point.energy < b.energy - tie => Some(point),
            Some(b) if (point.energy - b.energy).abs() <= tie && point.amplitude.value() < b.amplitude.value() => {
                Some(point)
            }
            keep => keep,
        };
    }
    // The inverted zero-photon point always has curvature 2(ω + g²/ω_a) > 0.
    let point = *best.unwrap_or(&landscape.inverted.zero_point);
    GroundState {
        phase: PhaseLabel::of(&point),
        point,
        observables: params.observables_at(&point),
    }
}

pub fn ground_state<T: Scalar>(params: &ModelParams<T>, config: &SolverConfig<T>) -> Result<GroundState<T>> {
    let landscape = stationary_points(params, config)?;
    Ok(select_ground(params, &landscape))
}

fn stable_normal_roots<T: Scalar>(params: &ModelParams<T>, config: &SolverConfig<T>) -> Result<usize> {
    Ok(find_roots(params, SpinBranch::Normal, config)?.stable_count())
}

fn fold_at<T: Scalar>(params: &ModelParams<T>, g: T) -> TurningPoint<T> {
    let at = params.with_g(g);
    let x = normal_branch_peak(&at).unwrap_or(T::zero());
    TurningPoint {
        g,
        amplitude: ScaledAmplitude::from_photon_fraction(x),
        residual: at.poly_at(SpinBranch::Normal, x),
    }
}

/// Coupling `g_t(ζ)` at which the superradiant root disappears.
///
/// Returns `Ok(None)` for `ζ = 0`, where the superradiant phase extends to
/// arbitrarily large `g`. `params.g` and `params.zeta` are ignored.
pub fn turning_point<T: Scalar>(
    params: &ModelParams<T>,
    zeta: T,
    config: &SolverConfig<T>,
) -> Result<Option<TurningPoint<T>>> {
    let base = params.with_zeta(zeta).with_g(T::zero());
    base.validate()?;
    config.validate()?;
    if zeta == T::zero() {
        return Ok(None);
    }
    let g_c = critical_coupling(&base);
    let mut lo = g_c * (T::one() + T::tol(1e-9, 16.0));
    let count = |g: T| stable_normal_roots(&base.with_g(g), config);
    let located = |e: Error, g: T| e.at(g.as_f64(), zeta.as_f64());
    match count(lo) {
        Ok(n) if n > 0 => {}
        Ok(_) | Err(Error::DegenerateBracket { .. }) => {
            return Err(Error::NotFound(format!(
                "no superradiant window above g_c = {g_c} at zeta = {zeta}"
            )))
        }
        Err(e) => return Err(located(e, lo)),
    }

    let mut hi = T::two() * g_c;
    let mut doublings = 0;
    loop {
        match count(hi) {
            Ok(0) => break,
            Ok(_) => {}
            Err(Error::DegenerateBracket { .. }) => return Ok(Some(fold_at(&base, hi))),
            Err(e) => return Err(located(e, hi)),
        }
        lo = hi;
        hi = hi * T::two();
        doublings += 1;
        if doublings > 60 {
            return Err(Error::NotFound(format!("turning point beyond g = {hi} at zeta = {zeta}")));
        }
    }

    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= config.tol_gt {
            break;
        }
        let mid = T::half() * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match count(mid) {
            Ok(0) => hi = mid,
            Ok(_) => lo = mid,
            Err(Error::DegenerateBracket { .. }) => return Ok(Some(fold_at(&base, mid))),
            Err(e) => return Err(located(e, mid)),
        }
    }
    Ok(Some(fold_at(&base, T::half() * (lo + hi))))
}

/// Width `g_t − g_c` of the superradiant window; zero once it has closed.
/// Returns `Ok(None)` for `ζ = 0` (unbounded window).
pub fn sp_window<T: Scalar>(params: &ModelParams<T>, zeta: T, config: &SolverConfig<T>) -> Result<Option<T>> {
    match turning_point(params, zeta, config) {
        Ok(Some(tp)) => Ok(Some((tp.g - critical_coupling(params)).max(T::zero()))),
        Ok(None) => Ok(None),
        Err(Error::NotFound(_)) => Ok(Some(T::zero())),
        Err(e) => Err(e),
    }
}

/// Smallest `ζ` at which the superradiant window is at most `width_tol` wide.
pub fn sp_closure<T: Scalar>(params: &ModelParams<T>, width_tol: T, config: &SolverConfig<T>) -> Result<SpClosure<T>> {
    if !(width_tol.is_finite() && width_tol > T::zero()) {
        return Err(Error::invalid("width_tol", format!("must be finite and > 0, got {width_tol}")));
    }
    let zeta_estimate = (params.omega_b * params.omega * params.omega / params.omega_a).sqrt();
    let width = |zeta: T| -> Result<T> { Ok(sp_window(params, zeta, config)?.unwrap_or(T::infinity())) };

    let mut lo = T::half() * zeta_estimate;
    let mut tries = 0;
    while width(lo)? <= width_tol {
        lo = T::half() * lo;
        tries += 1;
        if tries > 60 {
            return Err(Error::NotFound("superradiant window never exceeds width_tol".into()));
        }
    }
    let mut hi = T::lit(1.5) * zeta_estimate;
    tries = 0;
    while width(hi)? > width_tol {
        hi = hi * T::two();
        tries += 1;
        if tries > 60 {
            return Err(Error::NotFound("superradiant window does not close".into()));
        }
    }
    let zeta_tol = config.tol_gt * zeta_estimate;
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= zeta_tol {
            break;
        }
        let mid = T::half() * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if width(mid)? <= width_tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(SpClosure {
        zeta_star: hi,
        zeta_estimate,
        width_tol,
        width_at_star: width(hi)?,
    })
}

pub fn critical_points<T: Scalar>(params: &ModelParams<T>, config: &SolverConfig<T>) -> Result<CriticalPoints<T>> {
    let g_t = match turning_point(params, params.zeta, config) {
        Ok(tp) => tp.map(|t| t.g),
        Err(Error::NotFound(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(CriticalPoints {
        g_c: critical_coupling(params),
        g_t,
        zeta_star: sp_closure(params, T::lit(DEFAULT_WIDTH_TOL), config)?.zeta_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(g: f64, zeta: f64) -> ModelParams<f64> {
        ModelParams::new(1.0, 1.0, 10.0, g, zeta, 1).unwrap()
    }

    fn cfg() -> SolverConfig<f64> {
        SolverConfig::default()
    }

    #[test]
    fn critical_coupling_closed_form() {
        assert_eq!(critical_coupling(&params(0.3, 2.0)), 1.0);
        let p = ModelParams::new(4.0, 1.0, 3.0, 0.0, 0.0, 1).unwrap();
        assert_eq!(critical_coupling(&p), 2.0);
        let p = ModelParams::new(0.8, 1.2, 3.0, 0.0, 0.0, 1).unwrap();
        assert_relative_eq!(critical_coupling(&p), 0.96f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn zero_photon_stability() {
        let np = zero_photon_point(&params(0.8, 1.0), SpinBranch::Normal, &cfg());
        assert_eq!((np.stability, np.energy), (Stability::Stable, -0.5));
        let np = zero_photon_point(&params(1.5, 1.0), SpinBranch::Normal, &cfg());
        assert_eq!(np.stability, Stability::Unstable);
        let inv = zero_photon_point(&params(3.0, 1.0), SpinBranch::Inverted, &cfg());
        assert_eq!((inv.stability, inv.energy), (Stability::Stable, 0.5));
        let at_gc = zero_photon_point(&params(1.0, 1.0), SpinBranch::Normal, &cfg());
        assert_eq!(at_gc.stability, Stability::Marginal);
    }

    #[test]
    fn dicke_closed_form_root() {
        let set = find_roots(&params(1.5, 0.0), SpinBranch::Normal, &cfg()).unwrap();
        assert_eq!(set.roots.len(), 1);
        assert_relative_eq!(set.roots[0].amplitude.photon_fraction(), 2.25 / 4.0 - 1.0 / 9.0, epsilon = 1e-15);
        assert_relative_eq!(set.roots[0].amplitude.photon_fraction(), 0.45139, epsilon = 1e-5);
        assert_eq!(set.roots[0].stability, Stability::Stable);
        assert!(find_roots(&params(1.5, 0.0), SpinBranch::Inverted, &cfg()).unwrap().roots.is_empty());
        assert!(find_roots(&params(0.9, 0.0), SpinBranch::Normal, &cfg()).unwrap().roots.is_empty());
    }

    #[test]
    fn two_normal_roots_at_g_1_5() {
        let set = find_roots(&params(1.5, 1.0), SpinBranch::Normal, &cfg()).unwrap();
        let xs: Vec<f64> = set.roots.iter().map(|r| r.amplitude.photon_fraction()).collect();
        assert_eq!(xs.len(), 2);
        assert_relative_eq!(xs[0], 0.622, epsilon = 1e-3);
        assert_relative_eq!(xs[1], 2.800, epsilon = 5e-3);
        assert_eq!(set.roots[0].stability, Stability::Stable);
        assert_eq!(set.roots[1].stability, Stability::Unstable);
    }

    #[test]
    fn single_unstable_roots() {
        let below = find_roots(&params(0.8, 1.0), SpinBranch::Normal, &cfg()).unwrap();
        assert_eq!(below.roots.len(), 1);
        assert_eq!(below.roots[0].stability, Stability::Unstable);
        let inv = find_roots(&params(1.5, 1.0), SpinBranch::Inverted, &cfg()).unwrap();
        assert_eq!(inv.roots.len(), 1);
        assert_eq!(inv.roots[0].stability, Stability::Unstable);
    }

    #[test]
    fn roots_satisfy_residual_bound() {
        let c = cfg();
        for &(g, z) in &[(1.5, 1.0), (0.8, 1.0), (1.2, 2.0), (2.7, 0.4)] {
            let p = params(g, z);
            for branch in SpinBranch::BOTH {
                for r in find_roots(&p, branch, &c).unwrap().roots {
                    let x = r.amplitude.photon_fraction();
                    let slope = p.poly_slope_at(branch, x) * 2.0 * r.amplitude.value();
                    let res = p.extremum_polynomial(branch, r.amplitude);
                    assert!(res.abs() <= 10.0 * c.tol_root * slope.abs(), "g={g} z={z} res={res}");
                }
            }
        }
    }

    #[test]
    fn ground_state_examples() {
        let gs = ground_state(&params(0.8, 1.0), &cfg()).unwrap();
        assert_eq!((gs.phase, gs.point.energy), (PhaseLabel::NpNminus, -0.5));
        let gs = ground_state(&params(1.5, 1.0), &cfg()).unwrap();
        assert_eq!(gs.phase, PhaseLabel::Sp);
        assert_relative_eq!(gs.point.energy, -0.701, epsilon = 1e-3);
        let gs = ground_state(&params(2.0, 1.0), &cfg()).unwrap();
        assert_eq!((gs.phase, gs.point.energy), (PhaseLabel::NpNplus, 0.5));
    }

    #[test]
    fn ground_state_exactly_at_gc_stays_normal() {
        for zeta in [0.0, 1.0, 3.0] {
            let gs = ground_state(&params(1.0, zeta), &cfg()).unwrap();
            assert_eq!(gs.phase, PhaseLabel::NpNminus, "zeta = {zeta}");
            assert_eq!(gs.point.stability, Stability::Marginal);
        }
        // beyond the small-amplitude closure the marginal point is a maximum
        let gs = ground_state(&params(1.0, 3.3), &cfg()).unwrap();
        assert_eq!(gs.phase, PhaseLabel::NpNplus);
    }

    #[test]
    fn sp_observables_at_g_1_5() {
        let gs = ground_state(&params(1.5, 1.0), &cfg()).unwrap();
        let o = gs.observables;
        assert_relative_eq!(o.n_p, 0.622, epsilon = 1e-3);
        assert_relative_eq!(o.delta_n_a, -0.195, epsilon = 1e-3);
        assert_relative_eq!(o.n_b, 0.00387, epsilon = 1e-5);
        assert_relative_eq!(o.energy, -0.701, epsilon = 1e-3);
    }

    #[test]
    fn turning_point_paper_values() {
        let base = params(0.0, 0.0);
        let gt = turning_point(&base, 1.0, &cfg()).unwrap().unwrap();
        assert!((gt.g - 1.763).abs() <= 0.005, "g_t = {}", gt.g);
        assert!(gt.residual.abs() < 1e-5);
        let gt = turning_point(&base, 1.203, &cfg()).unwrap().unwrap();
        assert!((gt.g - 1.5).abs() <= 0.005, "g_t = {}", gt.g);
        assert_eq!(turning_point(&base, 0.0, &cfg()).unwrap(), None);
        assert!(matches!(turning_point(&base, 3.3, &cfg()), Err(Error::NotFound(_))));
    }

    #[test]
    fn stable_count_flips_across_turning_point() {
        let c = cfg();
        let gt = turning_point(&params(0.0, 0.0), 1.0, &c).unwrap().unwrap().g;
        let below = find_roots(&params(gt - c.tol_gt, 1.0), SpinBranch::Normal, &c).unwrap();
        let above = find_roots(&params(gt + c.tol_gt, 1.0), SpinBranch::Normal, &c).unwrap();
        assert_eq!(below.stable_count(), 1);
        assert_eq!(above.stable_count(), 0);
    }

    #[test]
    fn sp_closure_values() {
        let base = params(0.0, 0.0);
        let c = sp_closure(&base, 1e-3, &cfg()).unwrap();
        assert_relative_eq!(c.zeta_estimate, 10f64.sqrt(), epsilon = 1e-15);
        assert!((c.zeta_star - 3.0).abs() < 0.05, "zeta* = {}", c.zeta_star);
        assert!(c.width_at_star <= 1e-3);
        let coarse = sp_closure(&base, 1e-2, &cfg()).unwrap();
        assert!((2.6..=3.0).contains(&coarse.zeta_star), "zeta* = {}", coarse.zeta_star);
    }

    #[test]
    fn invalid_config_rejected() {
        let bad = SolverConfig { scan_points: 10, ..cfg() };
        assert!(find_roots(&params(1.0, 1.0), SpinBranch::Normal, &bad).is_err());
        let bad = SolverConfig { tol_root: 0.0, ..cfg() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn degenerate_bracket_on_exact_fold() {
        // Pick g on the fold: p₋ at the peak is within tol_curv of zero.
        let base = params(0.0, 1.0);
        let mut lo = 1.7;
        let mut hi = 1.8;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let p = base.with_g(mid);
            let peak = normal_branch_peak(&p).unwrap();
            if p.poly_at(SpinBranch::Normal, peak) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let err = find_roots(&base.with_g(lo), SpinBranch::Normal, &cfg()).unwrap_err();
        assert!(matches!(err, Error::DegenerateBracket { .. }));
    }

    #[test]
    fn single_precision_turning_point() {
        let base = ModelParams::<f32>::new(1.0, 1.0, 10.0, 0.0, 0.0, 1).unwrap();
        let gt = turning_point(&base, 1.0, &SolverConfig::default()).unwrap().unwrap();
        assert!((gt.g - 1.763).abs() <= 0.005);
    }
}
