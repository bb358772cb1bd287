//! Closed-form variational theory of the optomechanical Dicke model.
//!
//! After the photon and phonon coherent amplitudes are inserted, the phonon
//! displacement is eliminated and the collective spin is diagonalized in a
//! spin-coherent state, the energy per atom depends on a single scaled
//! amplitude `γ̄ = γ/√N`:
//!
//! ```text
//! ε∓(γ̄) = ω γ̄² − (ζ²/ω_b) γ̄⁴ ∓ A(γ̄)/2,    A(γ̄) = ω_a √(1 + f²),  f = 2gγ̄/ω_a
//! ```
//!
//! Stationary points satisfy `p∓(γ̄) = ω − 2ζ²γ̄²/ω_b ∓ g²/A(γ̄) = 0`. Most
//! internal helpers work in the photon fraction `x = γ̄²`, in which `p∓` is a
//! smooth function on `[0, ∞)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Physical parameters, frequencies in units of `omega_a` by convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    /// Cavity frequency.
    pub omega: T,
    /// Atomic transition frequency.
    pub omega_a: T,
    /// Mechanical oscillator frequency.
    pub omega_b: T,
    /// Collective atom-field coupling.
    pub g: T,
    /// Radiation-pressure (photon-phonon) coupling.
    pub zeta: T,
    /// Number of atoms `N`; the collective spin is `j = N/2`.
    pub n_atoms: u32,
}

impl<T: Scalar> Default for ModelParams<T> {
    fn default() -> Self {
        Self {
            omega: T::one(),
            omega_a: T::one(),
            omega_b: T::lit(10.0),
            g: T::zero(),
            zeta: T::zero(),
            n_atoms: 1,
        }
    }
}

fn check_positive<T: Scalar>(field: &'static str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite and > 0, got {v}")))
    }
}

fn check_non_negative<T: Scalar>(field: &'static str, v: T) -> Result<()> {
    if v.is_finite() && v >= T::zero() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite and >= 0, got {v}")))
    }
}

impl<T: Scalar> ModelParams<T> {
    pub fn new(omega: T, omega_a: T, omega_b: T, g: T, zeta: T, n_atoms: u32) -> Result<Self> {
        let p = Self {
            omega,
            omega_a,
            omega_b,
            g,
            zeta,
            n_atoms,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("omega", self.omega)?;
        check_positive("omega_a", self.omega_a)?;
        check_positive("omega_b", self.omega_b)?;
        check_non_negative("g", self.g)?;
        check_non_negative("zeta", self.zeta)?;
        if self.n_atoms == 0 {
            return Err(Error::invalid("n_atoms", "must be >= 1"));
        }
        Ok(())
    }

    pub fn with_g(self, g: T) -> Self {
        Self { g, ..self }
    }

    pub fn with_zeta(self, zeta: T) -> Self {
        Self { zeta, ..self }
    }

    pub fn with_n_atoms(self, n_atoms: u32) -> Self {
        Self { n_atoms, ..self }
    }

    /// `f(γ̄) = 2gγ̄/ω_a`, the tangent of the spin-coherent polar angle.
    pub fn tan_theta(&self, gamma_bar: ScaledAmplitude<T>) -> T {
        T::two() * self.g * gamma_bar.value() / self.omega_a
    }

    /// Effective level splitting `A(γ̄) = ω_a √(1 + f²)`.
    pub fn level_splitting(&self, gamma_bar: ScaledAmplitude<T>) -> T {
        self.omega_a * T::one().hypot(self.tan_theta(gamma_bar))
    }

    /// Scaled energy `ε∓(γ̄) = E∓/N`.
    pub fn scaled_energy(&self, branch: SpinBranch, gamma_bar: ScaledAmplitude<T>) -> T {
        self.energy_at(branch, gamma_bar.photon_fraction())
    }

    /// Extremum polynomial `p∓(γ̄)`, with `∂ε∓/∂γ̄ = 2γ̄·p∓(γ̄)`.
    pub fn extremum_polynomial(&self, branch: SpinBranch, gamma_bar: ScaledAmplitude<T>) -> T {
        self.poly_at(branch, gamma_bar.photon_fraction())
    }

    /// Second derivative `∂²ε∓/∂γ̄² = 2(ω − 6ζ²γ̄²/ω_b ∓ g²ω_a²/A³)`.
    pub fn curvature(&self, branch: SpinBranch, gamma_bar: ScaledAmplitude<T>) -> T {
        self.curvature_at(branch, gamma_bar.photon_fraction())
    }

    /// Closed-form spin-coherent and coherent-state angles at `γ̄`. The unit
    /// vector `n` is shared by both pseudospin branches.
    pub fn scs_angles(&self, gamma_bar: ScaledAmplitude<T>) -> ScsAngles<T> {
        ScsAngles {
            theta: self.tan_theta(gamma_bar).atan(),
            phi: T::PI(),
            eta: T::zero(),
            xi: T::zero(),
            rho_bar: self.zeta * gamma_bar.photon_fraction() / self.omega_b,
        }
    }

    /// Per-atom observables at a stationary point.
    pub fn observables_at(&self, point: &VariationalPoint<T>) -> Observables<T> {
        let x = point.amplitude.photon_fraction();
        let inv_two_a = T::half() * self.omega_a / self.splitting_at(x);
        let delta_n_a = match point.branch {
            SpinBranch::Normal => -inv_two_a,
            SpinBranch::Inverted => inv_two_a,
        };
        let n_b = self.zeta * self.zeta * x * x / (self.omega_b * self.omega_b);
        Observables {
            n_p: x,
            delta_n_a,
            n_b,
            energy: self.energy_at(point.branch, x),
        }
    }

    // Photon-fraction forms, x = γ̄².

    pub(crate) fn splitting_at(&self, x: T) -> T {
        let two_g = T::two() * self.g;
        (self.omega_a * self.omega_a + two_g * two_g * x).sqrt()
    }

    pub(crate) fn energy_at(&self, branch: SpinBranch, x: T) -> T {
        let quartic = self.zeta * self.zeta / self.omega_b;
        self.omega * x - quartic * x * x + branch.sign::<T>() * T::half() * self.splitting_at(x)
    }

    pub(crate) fn poly_at(&self, branch: SpinBranch, x: T) -> T {
        let stiffening = T::two() * self.zeta * self.zeta / self.omega_b;
        self.omega - stiffening * x + branch.sign::<T>() * self.g * self.g / self.splitting_at(x)
    }

    /// `dp/dx = −2ζ²/ω_b ∓ 2g⁴/A³`.
    pub(crate) fn poly_slope_at(&self, branch: SpinBranch, x: T) -> T {
        let a = self.splitting_at(x);
        let g2 = self.g * self.g;
        -T::two() * self.zeta * self.zeta / self.omega_b
            - branch.sign::<T>() * T::two() * g2 * g2 / (a * a * a)
    }

    pub(crate) fn curvature_at(&self, branch: SpinBranch, x: T) -> T {
        let a = self.splitting_at(x);
        let six = T::lit(6.0);
        T::two()
            * (self.omega - six * self.zeta * self.zeta * x / self.omega_b
                + branch.sign::<T>() * self.g * self.g * self.omega_a * self.omega_a / (a * a * a))
    }
}

/// Pseudospin branch of the spin-coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpinBranch {
    /// `|−n⟩`, lower sign in `E∓`.
    Normal,
    /// `|+n⟩`, upper sign in `E∓`.
    Inverted,
}

impl SpinBranch {
    pub const BOTH: [SpinBranch; 2] = [SpinBranch::Normal, SpinBranch::Inverted];

    /// `−1` for [`SpinBranch::Normal`], `+1` for [`SpinBranch::Inverted`].
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            SpinBranch::Normal => -T::one(),
            SpinBranch::Inverted => T::one(),
        }
    }
}

/// Scaled cavity amplitude `γ̄ = γ/√N ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScaledAmplitude<T>(T);

impl<T: Scalar> ScaledAmplitude<T> {
    pub fn new(gamma_bar: T) -> Result<Self> {
        check_non_negative("gamma_bar", gamma_bar)?;
        Ok(Self(gamma_bar))
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    /// Builds `γ̄ = √x` from the photon fraction `x = γ̄²`. Negative inputs clamp to zero.
    pub fn from_photon_fraction(x: T) -> Self {
        Self(x.max(T::zero()).sqrt())
    }

    pub fn value(self) -> T {
        self.0
    }

    /// `x = γ̄²`.
    pub fn photon_fraction(self) -> T {
        self.0 * self.0
    }

    /// Unscaled amplitude `γ = √N·γ̄`.
    pub fn raw(self, n_atoms: u32) -> T {
        T::lit(f64::from(n_atoms)).sqrt() * self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == T::zero()
    }
}

/// Angles of the variational state. `rho_bar = ρ/√N` is the scaled phonon
/// displacement `ζγ̄²/ω_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScsAngles<T> {
    pub theta: T,
    pub phi: T,
    pub eta: T,
    pub xi: T,
    pub rho_bar: T,
}

impl<T: Scalar> ScsAngles<T> {
    /// `A(α, θ, φ) = ω_a cos θ − 2gγ̄ cos η cos φ sin θ`, evaluated from the
    /// angles rather than the closed form.
    pub fn level_splitting(&self, params: &ModelParams<T>, gamma_bar: ScaledAmplitude<T>) -> T {
        params.omega_a * self.theta.cos()
            - T::two() * params.g * gamma_bar.value() * self.eta.cos() * self.phi.cos() * self.theta.sin()
    }

    /// Photon coherent amplitude `α = γ e^{iη}`.
    pub fn photon_amplitude(&self, gamma_bar: ScaledAmplitude<T>, n_atoms: u32) -> Complex<T> {
        Complex::from_polar(gamma_bar.raw(n_atoms), self.eta)
    }

    /// Phonon coherent amplitude `β = ρ e^{iξ}`.
    pub fn phonon_amplitude(&self, n_atoms: u32) -> Complex<T> {
        let rho = T::lit(f64::from(n_atoms)).sqrt() * self.rho_bar;
        Complex::from_polar(rho, self.xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

impl Stability {
    /// Classifies by the sign of `∂²ε/∂γ̄²` outside the band `[−tol, tol]`.
    pub fn from_curvature<T: Scalar>(curvature: T, tol: T) -> Self {
        if curvature > tol {
            Stability::Stable
        } else if curvature < -tol {
            Stability::Unstable
        } else {
            Stability::Marginal
        }
    }
}

/// A stationary point of `ε∓(γ̄)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationalPoint<T> {
    pub amplitude: ScaledAmplitude<T>,
    pub branch: SpinBranch,
    pub energy: T,
    pub curvature: T,
    pub stability: Stability,
}

impl<T: Scalar> VariationalPoint<T> {
    pub fn evaluate(
        params: &ModelParams<T>,
        branch: SpinBranch,
        amplitude: ScaledAmplitude<T>,
        tol_curv: T,
    ) -> Self {
        let curvature = params.curvature(branch, amplitude);
        Self {
            amplitude,
            branch,
            energy: params.scaled_energy(branch, amplitude),
            curvature,
            stability: Stability::from_curvature(curvature, tol_curv),
        }
    }
}

/// Per-atom observables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables<T> {
    /// Mean photon number per atom.
    pub n_p: T,
    /// Atomic population difference per atom, in `[−1/2, 1/2]`.
    pub delta_n_a: T,
    /// Mean phonon number per atom.
    pub n_b: T,
    /// Scaled energy `ε`.
    pub energy: T,
}
