//! Variational ground states of the optomechanical Dicke model.
//!
//! `N` two-level atoms couple to a cavity mode whose photon number drives a
//! mechanical oscillator through radiation pressure. With the spin-coherent
//! variational state the energy per atom is an explicit function of one scaled
//! cavity amplitude, valid for any atom number. This crate locates and
//! classifies its stationary points ([`solver`]), sweeps them into phase
//! diagrams and observable curves ([`diagram`]), and checks the single-atom,
//! oscillator-free limit against exact diagonalization of the quantum Rabi
//! model ([`rabi`]).
//!
//! The numerical core is generic over [`Scalar`] (`f32`/`f64`); the aliases
//! below fix it to `f64`.

pub mod diagram;
pub mod error;
pub mod model;
pub mod rabi;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use model::{Observables, ScaledAmplitude, ScsAngles, SpinBranch, Stability, VariationalPoint};
pub use scalar::Scalar;
pub use solver::{GroundState, Landscape, PhaseLabel, RootSet, SpClosure, TurningPoint};

pub type ModelParams = model::ModelParams<f64>;
pub type ModelParams32 = model::ModelParams<f32>;
pub type SolverConfig = solver::SolverConfig<f64>;
pub type SolverConfig32 = solver::SolverConfig<f32>;
pub type RabiParams = rabi::RabiParams<f64>;
pub type RabiParams32 = rabi::RabiParams<f32>;
pub type TridiagonalBlock = rabi::TridiagonalBlock<f64>;
