use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constants::{BOHR_MAGNETON, BOHR_RADIUS, HARTREE, MASS_CR53, MASS_LI6, MU_0, SPEED_OF_LIGHT, DEBYE_ROUNDED};
use crate::specfun::x_k1;
use crate::trapmodel::TrapConfig;
use crate::{Error, Result};

/// Functional form of a pair potential's Fourier transform.
#[derive(Clone)]
pub enum PotentialKind {
    /// `V0 x K_1(x)` with `x = k d`; `V0` in J·m.
    Dipole { v0: f64 },
    /// `-(pi/8)(A/d^5) e^{-kd}(3 + 3kd + k^2 d^2)`; `A` in J·m⁶.
    Vdw { a: f64 },
    /// Real-space `g exp(-z^2 / 2w^2)`; `g` in J, `w` in m.
    Gaussian { strength: f64, width: f64 },
    /// Arbitrary even `k [1/m] -> Ṽ(k) [J·m]`.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dipole { v0 } => write!(f, "Dipole {{ v0: {v0:e} }}"),
            Self::Vdw { a } => write!(f, "Vdw {{ a: {a:e} }}"),
            Self::Gaussian { strength, width } => write!(f, "Gaussian {{ strength: {strength:e}, width: {width:e} }}"),
            Self::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// A pair potential bound to a trap, so that wave numbers can be expressed in
/// units of `alpha` and energies in units of `hbar omega`.
#[derive(Clone, Debug)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    /// Transverse cutoff [m]; zero when the form has none.
    pub d: f64,
    /// Aspect ratio `omega_l / omega_t`.
    pub lambda: f64,
    pub alpha: f64,
    pub hbar_omega: f64,
    /// `Ṽ(k -> inf)`, subtracted before any matrix element is formed.
    pub v_infinity: f64,
}

impl PotentialSpec {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            PotentialKind::Dipole { .. } => "dipole",
            PotentialKind::Vdw { .. } => "vdw",
            PotentialKind::Gaussian { .. } => "gaussian",
            PotentialKind::Custom(_) => "custom",
        }
    }

    /// `Ṽ(k)` in J·m.
    pub fn fourier(&self, k: f64) -> f64 {
        let k = k.abs();
        match &self.kind {
            PotentialKind::Dipole { v0 } => v0 * x_k1(k * self.d).unwrap_or(0.0),
            PotentialKind::Vdw { a } => {
                let x = k * self.d;
                -std::f64::consts::PI / 8.0 * a / self.d.powi(5) * (-x).exp() * (3.0 + 3.0 * x + x * x)
            }
            PotentialKind::Gaussian { strength, width } => {
                strength * width * (2.0 * std::f64::consts::PI).sqrt() * (-0.5 * (k * width).powi(2)).exp()
            }
            PotentialKind::Custom(f) => f(k),
        }
    }

    pub fn v_eff(&self, k: f64) -> f64 {
        self.fourier(k) - self.v_infinity
    }

    /// `V_eff(alpha kappa) alpha / (hbar omega)`: the dimensionless transform
    /// entering matrix elements in units of `hbar omega`.
    pub fn reduced(&self, kappa: f64) -> f64 {
        self.v_eff(self.alpha * kappa) * self.alpha / self.hbar_omega
    }

    /// Real-space potential [J], where the form has one.
    pub fn real_space(&self, z: f64) -> Option<f64> {
        match &self.kind {
            PotentialKind::Dipole { v0 } => {
                // V0 = -(mu0/pi) mu^2 / d^2, V = -(mu0/2pi) mu^2 (z^2+d^2)^{-3/2}
                Some(0.5 * v0 * self.d * self.d / (z * z + self.d * self.d).powf(1.5))
            }
            PotentialKind::Vdw { a } => Some(-a / (z * z + self.d * self.d).powi(3)),
            PotentialKind::Gaussian { strength, width } => Some(strength * (-0.5 * (z / width).powi(2)).exp()),
            PotentialKind::Custom(_) => None,
        }
    }

    /// Strength `S` [J·m] such that `Ṽ_eff(k) = S g(k)` with `g` of order one.
    pub fn scale(&self) -> f64 {
        match &self.kind {
            PotentialKind::Dipole { v0 } => *v0,
            PotentialKind::Vdw { a } => -std::f64::consts::PI / 8.0 * a / self.d.powi(5),
            _ => {
                let s = self.v_eff(0.0);
                if s != 0.0 { s } else { 1.0 }
            }
        }
    }

    /// The same potential with `c` added to its transform; the subtraction
    /// constant is re-estimated from the shifted transform.
    pub fn shifted(&self, c: f64) -> PotentialSpec {
        let base = self.clone();
        custom_potential(Arc::new(move |k| base.fourier(k) + c), self.alpha, self.hbar_omega)
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidInput(format!("aspect ratio lambda must lie in (0, 1], got {lambda}")));
    }
    Ok(())
}

/// Longitudinally aligned magnetic dipoles of moment `mu` [J/T] in a channel of
/// width `d = sqrt(lambda)/alpha`.
pub fn dipole_potential(mu: f64, trap: &TrapConfig, lambda: f64) -> Result<PotentialSpec> {
    check_lambda(lambda)?;
    let alpha = trap.alpha();
    let v0 = -MU_0 / std::f64::consts::PI * mu * mu * alpha * alpha / lambda;
    Ok(PotentialSpec {
        kind: PotentialKind::Dipole { v0 },
        d: lambda.sqrt() / alpha,
        lambda,
        alpha,
        hbar_omega: trap.hbar_omega(),
        v_infinity: 0.0,
    })
}

/// Effective 1D van der Waals tail `-A/(z^2+d^2)^3`.
pub fn vdw_potential(a: f64, trap: &TrapConfig, lambda: f64) -> Result<PotentialSpec> {
    check_lambda(lambda)?;
    if !(a > 0.0) {
        return Err(Error::InvalidInput(format!("van der Waals coefficient must be positive, got {a}")));
    }
    let alpha = trap.alpha();
    Ok(PotentialSpec {
        kind: PotentialKind::Vdw { a },
        d: lambda.sqrt() / alpha,
        lambda,
        alpha,
        hbar_omega: trap.hbar_omega(),
        v_infinity: 0.0,
    })
}

/// `A = C6 E_h a0^6 / 2` from an atomic-unit `C6`.
pub fn vdw_coefficient_from_c6(c6_au: f64) -> f64 {
    0.5 * c6_au * HARTREE * BOHR_RADIUS.powi(6)
}

/// Gaussian `g exp(-z^2/2w^2)` with `w` given in oscillator lengths.
pub fn gaussian_potential(strength: f64, width_osc: f64, trap: &TrapConfig) -> Result<PotentialSpec> {
    if !(width_osc > 0.0) {
        return Err(Error::InvalidInput(format!("gaussian width must be positive, got {width_osc}")));
    }
    Ok(PotentialSpec {
        kind: PotentialKind::Gaussian { strength, width: width_osc / trap.alpha() },
        d: 0.0,
        lambda: 1.0,
        alpha: trap.alpha(),
        hbar_omega: trap.hbar_omega(),
        v_infinity: 0.0,
    })
}

/// User-supplied transform. `Ṽ(inf)` is read off far beyond any trap scale.
pub fn custom_potential(f: Arc<dyn Fn(f64) -> f64 + Send + Sync>, alpha: f64, hbar_omega: f64) -> PotentialSpec {
    let v_infinity = f(1e8 * alpha);
    PotentialSpec { kind: PotentialKind::Custom(f), d: 0.0, lambda: 1.0, alpha, hbar_omega, v_infinity }
}

/// Dipole moment and mass of a species. Electric dipoles are carried as the
/// magnetic moment `p c` with the same interaction strength.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Species {
    pub name: String,
    /// Magnetic moment [J/T].
    pub mu: f64,
    /// Mass [kg].
    pub mass: f64,
}

impl Species {
    pub fn li6() -> Self {
        Species { name: "Li6".into(), mu: BOHR_MAGNETON, mass: MASS_LI6 }
    }

    pub fn cr53() -> Self {
        Species { name: "Cr53".into(), mu: 6.0 * BOHR_MAGNETON, mass: MASS_CR53 }
    }

    /// Electric dipole `p` [C·m] at the given mass.
    pub fn electric(name: &str, p: f64, mass: f64) -> Self {
        Species { name: name.into(), mu: p * SPEED_OF_LIGHT, mass }
    }

    /// A 1-Debye (`a0 e/2.5`) molecule compared at the reference mass.
    pub fn polar_molecule(mass: f64) -> Self {
        Self::electric("polar", DEBYE_ROUNDED, mass)
    }
}

/// `(mu2/mu1)^2 (m2/m1)^{3/2}`.
pub fn species_enhancement(reference: &Species, candidate: &Species) -> f64 {
    (candidate.mu / reference.mu).powi(2) * (candidate.mass / reference.mass).powf(1.5)
}

/// JSON form of a potential. `lambda` defaults to `1/N` (filled trap).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PotentialConfig {
    Dipole {
        /// Moment in Bohr magnetons.
        #[serde(default = "one")]
        mu_bohr: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambda: Option<f64>,
    },
    Vdw {
        /// `C6` in atomic units.
        c6_au: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambda: Option<f64>,
    },
    Gaussian {
        /// Strength in units of `hbar omega`.
        strength: f64,
        /// Width in oscillator lengths.
        width: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl PotentialConfig {
    pub fn build(&self, trap: &TrapConfig) -> Result<PotentialSpec> {
        let filled = 1.0 / trap.n() as f64;
        match *self {
            PotentialConfig::Dipole { mu_bohr, lambda } => {
                dipole_potential(mu_bohr * BOHR_MAGNETON, trap, lambda.unwrap_or(filled))
            }
            PotentialConfig::Vdw { c6_au, lambda } => {
                vdw_potential(vdw_coefficient_from_c6(c6_au), trap, lambda.unwrap_or(filled))
            }
            PotentialConfig::Gaussian { strength, width } => {
                gaussian_potential(strength * trap.hbar_omega(), width, trap)
            }
        }
    }
}
