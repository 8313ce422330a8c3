//! Special-function kernels: oscillator eigenfunctions, associated Laguerre
//! polynomials, Bessel functions and the Dirichlet kernel.

mod bessel;
mod dirichlet;
mod hermite;
mod laguerre;

pub use bessel::{bessel_i, bessel_i_scaled, bessel_j, bessel_k1, x_k1};
pub use dirichlet::{dirichlet_fourier, dirichlet_kernel};
pub use hermite::{psi_row, psi_row_into, HermiteFunctionTable};
pub use laguerre::{laguerre_assoc, laguerre_fn, laguerre_fn_row};

/// Rescaling threshold for recurrences that track a separate log scale.
const BIG: f64 = 1e150;

/// `ln(n!)` for integer `n`.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}
