//! Correlation spreading in long-range quantum spin lattices.
//!
//! * [`lattice`]: hypercubic geometry, graph distance, shell counts
//! * [`channel`]: analytic signal probabilities and the long-range bound
//! * [`ising`]: closed-form long-range Ising correlators
//! * [`ed`]: state vectors, bitwise Hamiltonians, Krylov propagation
//! * [`xxz`]: long-range XXZ quench from the staggered state
//! * [`analysis`]: causal fronts, power-law fits, finite-size scaling

pub mod analysis;
pub mod channel;
pub mod ed;
pub mod error;
pub mod field;
pub mod io;
pub mod ising;
pub mod lattice;
pub mod numeric;
pub mod xxz;

pub use error::{Error, Result};
pub use field::CorrelationField;
pub use lattice::{GraphDistance, LatticeSpec, ShellTable};
