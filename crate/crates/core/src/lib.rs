//! Growth of monodromy matrices of Hamburger Hamiltonians.
//!
//! The crate computes overflow-safe transfer-matrix products, measures
//! `log max_{|z|=R} ‖W_H(z)‖`, and evaluates explicit upper and lower bounds
//! for this quantity together with their closed-form regularly varying
//! asymptotics.

pub mod acceptance;
pub mod bounds;
pub mod casebook;
pub mod error;
pub mod hamiltonian;
pub mod monodromy;
pub(crate) mod quad;
pub mod regvar;

pub use bounds::{BoundMode, BoundReport, ComparisonData};
pub use error::{Error, Result};
pub use hamiltonian::{HamburgerHamiltonian, JacobiParameters};
pub use monodromy::{GrowthProfile, ScaledMat2};
pub use regvar::{ComparisonFunction, Monotonicity, PowerLog};
