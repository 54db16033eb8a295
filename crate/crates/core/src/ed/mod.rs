//! Exact state-vector dynamics: bitwise spin Hamiltonians and Krylov
//! propagation.

pub mod hamiltonian;
pub mod krylov;
pub mod state;
pub mod tridiag;

pub use hamiltonian::{build_ising, build_xxz, CompiledHamiltonian, PairKind, SiteKind, SpinHamiltonian};
pub use krylov::{krylov_step, PropagatorConfig, Propagator, StepInfo};
pub use state::StateVector;
