//! Matrix elements of realistic pair potentials in the oscillator basis and
//! the resulting near-edge coupling estimates.

mod elements;
mod estimates;
mod potential;

pub use elements::{
    elements_to_csv, matrix_element_asymptotic, matrix_element_asymptotic_with, matrix_element_bessel,
    matrix_element_exact, matrix_element_exact_with, ElementMethod, ElementSettings, MatrixElement,
};
pub use estimates::{estimate_v1, CouplingEstimate};
pub use potential::{
    custom_potential, dipole_potential, gaussian_potential, species_enhancement, vdw_coefficient_from_c6,
    vdw_potential, PotentialConfig, PotentialKind, PotentialSpec, Species,
};
