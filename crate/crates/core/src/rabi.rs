//! Exact diagonalization of the quantum Rabi model in a truncated Fock basis.
//!
//! For one atom and no oscillator the Hamiltonian is
//! `H = ω a†a + (ω_a/2) σ_z + (g/2)(a + a†) σ_x`. It commutes with the parity
//! `Π = −σ_z (−1)^{a†a}`, and each parity sector is a symmetric tridiagonal
//! chain `|0,s⟩ – |1,−s⟩ – |2,s⟩ – …`. The lowest eigenvalue of each chain is
//! found by Sturm-count bisection; inverse iteration supplies the eigenvector
//! for a residual check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_BISECTIONS: usize = 400;
const MAX_INVERSE_ITERATIONS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RabiParams<T> {
    pub omega: T,
    pub omega_a: T,
    /// Collective coupling; the single-atom Rabi coupling is `g/2`.
    pub g: T,
}

impl<T: Scalar> RabiParams<T> {
    pub fn new(omega: T, omega_a: T, g: T) -> Result<Self> {
        let p = Self { omega, omega_a, g };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [("omega", self.omega), ("omega_a", self.omega_a)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::invalid(field, format!("must be finite and > 0, got {v}")));
            }
        }
        if !(self.g.is_finite() && self.g >= T::zero()) {
            return Err(Error::invalid("g", format!("must be finite and >= 0, got {}", self.g)));
        }
        Ok(())
    }

    pub fn with_g(self, g: T) -> Self {
        Self { g, ..self }
    }
}

/// Parity sector. The chain starting at `|0, ↓⟩` is [`Parity::Minus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn sign(self) -> i8 {
        match self {
            Parity::Plus => 1,
            Parity::Minus => -1,
        }
    }
}

/// Symmetric tridiagonal matrix of one parity sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalBlock<T> {
    pub parity: Parity,
    pub diag: Vec<T>,
    pub offdiag: Vec<T>,
}

/// Builds the two parity blocks with photon numbers `0..=n_max`:
/// `d_n = ωn + parity·(ω_a/2)(−1)ⁿ`, `t_n = (g/2)√(n+1)`.
pub fn build_blocks<T: Scalar>(params: &RabiParams<T>, n_max: usize) -> Result<[TridiagonalBlock<T>; 2]> {
    params.validate()?;
    if n_max < 2 {
        return Err(Error::invalid("n_max", format!("must be >= 2, got {n_max}")));
    }
    let half_split = T::half() * params.omega_a;
    let coupling = T::half() * params.g;
    let block = |parity: Parity| {
        let s = if parity == Parity::Plus { half_split } else { -half_split };
        let diag = (0..=n_max)
            .map(|n| {
                let alternating = if n % 2 == 0 { s } else { -s };
                params.omega * T::lit(n as f64) + alternating
            })
            .collect();
        let offdiag = (0..n_max).map(|n| coupling * T::lit((n + 1) as f64).sqrt()).collect();
        TridiagonalBlock { parity, diag, offdiag }
    };
    Ok([block(Parity::Plus), block(Parity::Minus)])
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<T> {
    pub value: T,
    pub vector: Vec<T>,
    /// `‖T v − λ v‖₂` with `‖v‖₂ = 1`.
    pub residual: T,
}

impl<T: Scalar> TridiagonalBlock<T> {
    pub fn new(parity: Parity, diag: Vec<T>, offdiag: Vec<T>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::invalid(
                "offdiag",
                format!("expected {} off-diagonal entries, got {}", diag.len().saturating_sub(1), offdiag.len()),
            ));
        }
        Ok(Self { parity, diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.dim();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { T::zero() };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { T::zero() };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Infinity norm, which equals the 1-norm for a symmetric matrix.
    pub fn norm(&self) -> T {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.offdiag[i - 1].abs() } else { T::zero() };
                let right = if i + 1 < n { self.offdiag[i].abs() } else { T::zero() };
                self.diag[i].abs() + left + right
            })
            .fold(T::zero(), T::max)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence via LDLᵀ pivots).
    pub fn count_below(&self, x: T) -> usize {
        let tiny = T::min_positive_value().sqrt();
        let mut count = 0;
        let mut q = T::one();
        for i in 0..self.dim() {
            let coupling = if i > 0 {
                let e = self.offdiag[i - 1];
                e * e / q
            } else {
                T::zero()
            };
            q = self.diag[i] - x - coupling;
            if q == T::zero() {
                q = -tiny;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to `tol`.
    pub fn eigenvalue(&self, k: usize, tol: T) -> Result<T> {
        if k >= self.dim() {
            return Err(Error::invalid("k", format!("index {k} out of range for dimension {}", self.dim())));
        }
        let (mut lo, mut hi) = self.gershgorin();
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::ConvergenceFailure("non-finite Gershgorin interval".into()));
        }
        let slack = T::epsilon() * T::lit(4.0) * (lo.abs().max(hi.abs()) + T::one());
        lo = lo - slack;
        hi = hi + slack;
        for _ in 0..MAX_BISECTIONS {
            let mid = T::half() * (lo + hi);
            if hi - lo <= tol || mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::ConvergenceFailure(format!(
            "eigenvalue bisection did not reach tolerance {tol} in {MAX_BISECTIONS} steps"
        )))
    }

    pub fn eigenvalues(&self, tol: T) -> Result<Vec<T>> {
        (0..self.dim()).map(|k| self.eigenvalue(k, tol)).collect()
    }

    /// `T x` for a vector of matching length.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y = y + self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y = y + self.offdiag[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Solves `(T − σ) y = b` for `σ` below the spectrum, where the shifted
    /// matrix is positive definite and elimination without pivoting is stable.
    fn solve_shifted(&self, sigma: T, b: &[T]) -> Vec<T> {
        let n = self.dim();
        let mut pivot = vec![T::zero(); n];
        let mut rhs = b.to_vec();
        pivot[0] = self.diag[0] - sigma;
        for i in 1..n {
            let m = self.offdiag[i - 1] / pivot[i - 1];
            pivot[i] = self.diag[i] - sigma - m * self.offdiag[i - 1];
            rhs[i] = rhs[i] - m * rhs[i - 1];
        }
        let mut y = vec![T::zero(); n];
        y[n - 1] = rhs[n - 1] / pivot[n - 1];
        for i in (0..n - 1).rev() {
            y[i] = (rhs[i] - self.offdiag[i] * y[i + 1]) / pivot[i];
        }
        y
    }

    /// Lowest eigenpair: Sturm bisection for the value, inverse iteration for
    /// the vector.
    pub fn smallest_eigenpair(&self, tol: T) -> Result<EigenPair<T>> {
        let value = self.eigenvalue(0, tol)?;
        let n = self.dim();
        let scale = self.norm().max(T::one());
        let shift = value - T::tol(1e-7, 64.0) * scale;
        let target = T::lit(1e-10) * scale;

        let mut v = vec![T::one() / T::lit(n as f64).sqrt(); n];
        let mut residual = T::infinity();
        for _ in 0..MAX_INVERSE_ITERATIONS {
            let y = self.solve_shifted(shift, &v);
            let norm = y.iter().fold(T::zero(), |acc, &c| acc + c * c).sqrt();
            if !(norm.is_finite() && norm > T::zero()) {
                return Err(Error::ConvergenceFailure("inverse iteration produced a non-finite vector".into()));
            }
            v = y.into_iter().map(|c| c / norm).collect();
            residual = self
                .apply(&v)
                .iter()
                .zip(&v)
                .fold(T::zero(), |acc, (&tv, &vi)| {
                    let r = tv - value * vi;
                    acc + r * r
                })
                .sqrt();
            if residual <= target {
                break;
            }
        }
        Ok(EigenPair { value, vector: v, residual })
    }

    /// Smallest eigenvalue and the residual of its eigenpair.
    pub fn smallest_eigenvalue(&self) -> Result<(T, T)> {
        let pair = self.smallest_eigenpair(eigen_tol())?;
        Ok((pair.value, pair.residual))
    }
}

fn eigen_tol<T: Scalar>() -> T {
    T::tol(1e-12, 8.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdResult<T> {
    pub ground_energy: T,
    pub parity: Parity,
    pub n_max: usize,
    pub residual: T,
    /// Norm bound of the block holding the ground state.
    pub matrix_norm: T,
    /// `|E(n_max) − E(n_max/2)|`.
    pub truncation_change: T,
}

fn lowest_over_blocks<T: Scalar>(params: &RabiParams<T>, n_max: usize) -> Result<(T, Parity, T, T)> {
    let mut best: Option<(T, Parity, T, T)> = None;
    for block in build_blocks(params, n_max)? {
        let (value, residual) = block.smallest_eigenvalue()?;
        if best.is_none_or(|(b, ..)| value < b) {
            best = Some((value, block.parity, residual, block.norm()));
        }
    }
    Ok(best.expect("two blocks"))
}

/// Ground energy over both parity sectors, with a truncation check against `n_max/2`.
pub fn ground_energy<T: Scalar>(params: &RabiParams<T>, n_max: usize) -> Result<EdResult<T>> {
    let (ground_energy, parity, residual, matrix_norm) = lowest_over_blocks(params, n_max)?;
    let half = (n_max / 2).max(2);
    let (coarse, ..) = lowest_over_blocks(params, half)?;
    Ok(EdResult {
        ground_energy,
        parity,
        n_max,
        residual,
        matrix_norm,
        truncation_change: (ground_energy - coarse).abs(),
    })
}

/// Variational ground energy of the Rabi limit: `−ω_a/2` up to `g_c = √(ωω_a)`,
/// then `−(ω/4)(g²/ω² + ω_a²/g²)`.
pub fn variational_energy_rabi<T: Scalar>(params: &RabiParams<T>) -> T {
    let g_c = (params.omega * params.omega_a).sqrt();
    if params.g <= g_c {
        -T::half() * params.omega_a
    } else {
        let g2 = params.g * params.g;
        -params.omega / T::lit(4.0) * (g2 / (params.omega * params.omega) + params.omega_a * params.omega_a / g2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow<T> {
    pub g: T,
    pub e_ed: T,
    pub e_variational: T,
    /// `E_variational − E_ED`; non-negative up to rounding.
    pub deviation: T,
    pub residual: T,
    pub truncation_change: T,
}

/// Variational versus exact energies over a coupling grid, in grid order.
pub fn compare_curve<T: Scalar>(params: &RabiParams<T>, gs: &[T], n_max: usize) -> Result<Vec<ComparisonRow<T>>> {
    gs.par_iter()
        .map(|&g| {
            let at = params.with_g(g);
            let ed = ground_energy(&at, n_max).map_err(|e| e.at(g.as_f64(), 0.0))?;
            let e_variational = variational_energy_rabi(&at);
            Ok(ComparisonRow {
                g,
                e_ed: ed.ground_energy,
                e_variational,
                deviation: e_variational - ed.ground_energy,
                residual: ed.residual,
                truncation_change: ed.truncation_change,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn resonant(g: f64) -> RabiParams<f64> {
        RabiParams::new(1.0, 1.0, g).unwrap()
    }

    #[test]
    fn block_entries_by_hand() {
        let [_, minus] = build_blocks(&resonant(1.0), 3).unwrap();
        assert_eq!(minus.parity, Parity::Minus);
        assert_eq!(minus.diag, vec![-0.5, 1.5, 1.5, 3.5]);
        let expected = [0.5, 0.5 * 2f64.sqrt(), 0.5 * 3f64.sqrt()];
        for (a, b) in minus.offdiag.iter().zip(expected) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn decoupled_limit() {
        let blocks = build_blocks(&resonant(0.0), 10).unwrap();
        assert!(blocks.iter().all(|b| b.offdiag.iter().all(|&t| t == 0.0)));
        let (e, _) = blocks[1].smallest_eigenvalue().unwrap();
        assert_relative_eq!(e, -0.5, epsilon = 1e-12);
        assert_relative_eq!(ground_energy(&resonant(0.0), 50).unwrap().ground_energy, -0.5, epsilon = 1e-12);
    }

    #[test]
    fn two_by_two_closed_form() {
        let b = TridiagonalBlock::new(Parity::Plus, vec![0.0, 1.0], vec![1.0]).unwrap();
        let (e, res) = b.smallest_eigenvalue().unwrap();
        assert_relative_eq!(e, (1.0 - 5f64.sqrt()) / 2.0, epsilon = 1e-12);
        assert!(res < 1e-10);
    }

    #[test]
    fn malformed_block_rejected() {
        assert!(TridiagonalBlock::new(Parity::Plus, vec![0.0, 1.0], vec![]).is_err());
        assert!(build_blocks(&resonant(1.0), 1).is_err());
        assert!(RabiParams::new(-1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn non_finite_block_fails_to_converge() {
        let b = TridiagonalBlock::new(Parity::Plus, vec![0.0, f64::NAN], vec![1.0]).unwrap();
        assert!(matches!(b.smallest_eigenvalue(), Err(Error::ConvergenceFailure(_))));
    }

    #[test]
    fn variational_closed_form() {
        assert_eq!(variational_energy_rabi(&resonant(0.7)), -0.5);
        assert_eq!(variational_energy_rabi(&resonant(1.0)), -0.5);
        assert_relative_eq!(variational_energy_rabi(&resonant(1.5)), -0.25 * (2.25 + 1.0 / 2.25), epsilon = 1e-15);
        assert_relative_eq!(variational_energy_rabi(&resonant(1.5)), -0.67361, epsilon = 1e-5);
        assert_eq!(variational_energy_rabi(&resonant(2.0)), -1.0625);
    }

    #[test]
    fn ground_energy_brackets() {
        let r = ground_energy(&resonant(1.0), 300).unwrap();
        assert!((-0.70..=-0.55).contains(&r.ground_energy));
        let r = ground_energy(&resonant(2.0), 300).unwrap();
        assert!(r.ground_energy <= -1.0625);
        assert!(r.residual <= 1e-10 * r.matrix_norm);
        assert!(r.truncation_change < 1e-10);
    }

    #[test]
    fn eigenvalues_sorted_and_counted() {
        let [plus, _] = build_blocks(&resonant(1.3), 12).unwrap();
        let vals = plus.eigenvalues(1e-12).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for (k, v) in vals.iter().enumerate() {
            assert_eq!(plus.count_below(*v - 1e-9), k);
        }
    }

    #[test]
    fn single_precision_ground_energy() {
        let p = RabiParams::<f32>::new(1.0, 1.0, 1.0).unwrap();
        let e = ground_energy(&p, 40).unwrap().ground_energy;
        let e64 = ground_energy(&resonant(1.0), 40).unwrap().ground_energy;
        assert!((f64::from(e) - e64).abs() < 1e-5);
    }
}
