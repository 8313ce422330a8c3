//! Interacting spinless fermions in a one-dimensional harmonic trap, solved
//! with a Luttinger-model (bosonization) treatment.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] and [`quad`]: oscillator functions, Laguerre and Bessel
//!   families, the Dirichlet kernel, and the quadrature rules built on them.
//! * [`trapmodel`]: trap scales, interaction models, Bogoliubov couplings.
//! * [`occupations`]: one-body expectation values `<c+_{M-p} c_{M+p}>`.
//! * [`observables`]: real-space and momentum densities, Friedel metrics.
//! * [`edoracle`]: exact diagonalization of the truncated fermionic
//!   Hamiltonian, used as an independent check.
//! * [`couplings`]: four-fermion matrix elements of realistic pair
//!   potentials and the resulting interaction-strength estimates.
//!
//! Energies are dimensionless in units of `hbar * omega_l` and lengths in
//! units of the oscillator length unless a field says otherwise.

pub mod constants;
pub mod couplings;
pub mod edoracle;
mod error;
pub mod observables;
pub mod occupations;
pub mod quad;
pub mod specfun;
pub mod trapmodel;

pub use error::{Error, Result};
