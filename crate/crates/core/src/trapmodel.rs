//! Trap scales, interaction models and the Bogoliubov couplings derived from
//! them.
//!
//! All interaction energies are dimensionless, measured in `hbar * omega_l`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, MASS_LI6};
use crate::{Error, Result};

/// Particle number and trap frequency together with the Fermi-scale
/// quantities that follow from them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrapRepr", into = "TrapRepr")]
pub struct TrapConfig {
    n: usize,
    omega_l: f64,
    mass: f64,
    alpha: f64,
    l: f64,
    l_f: f64,
    eps_f: f64,
    k_f: f64,
}

/// Derives the full set of trap quantities for `n` fermions of the given
/// mass in a trap of angular frequency `omega_l`.
pub fn derive_trap(n: usize, omega_l: f64, mass: f64) -> Result<TrapConfig> {
    if n == 0 {
        return Err(Error::InvalidInput("particle number must be >= 1".into()));
    }
    if !(omega_l > 0.0 && omega_l.is_finite()) {
        return Err(Error::InvalidInput(format!("omega_l must be positive, got {omega_l}")));
    }
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::InvalidInput(format!("mass must be positive, got {mass}")));
    }
    let alpha = (mass * omega_l / HBAR).sqrt();
    let width = (2.0 * n as f64 - 1.0).sqrt();
    Ok(TrapConfig {
        n,
        omega_l,
        mass,
        alpha,
        l: 1.0 / alpha,
        l_f: width / alpha,
        eps_f: HBAR * omega_l * (n as f64 - 0.5),
        k_f: alpha * width,
    })
}

impl TrapConfig {
    /// `n` 6Li atoms in a trap with `omega_l = 2 pi * 10 / s`.
    pub fn li6(n: usize) -> Result<Self> {
        derive_trap(n, 2.0 * PI * 10.0, MASS_LI6)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn omega_l(&self) -> f64 {
        self.omega_l
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    /// Inverse oscillator length [1/m].
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    /// Oscillator length [m].
    pub fn l(&self) -> f64 {
        self.l
    }
    /// Fermi width [m].
    pub fn l_f(&self) -> f64 {
        self.l_f
    }
    /// Fermi energy [J].
    pub fn eps_f(&self) -> f64 {
        self.eps_f
    }
    /// Fermi wave number [1/m].
    pub fn k_f(&self) -> f64 {
        self.k_f
    }
    /// `hbar * omega_l` [J].
    pub fn hbar_omega(&self) -> f64 {
        HBAR * self.omega_l
    }
    /// Fermi wave number from the Fermi energy, `sqrt(2 m eps_F) / hbar`.
    pub fn k_f_from_energy(&self) -> f64 {
        (2.0 * self.mass * self.eps_f).sqrt() / HBAR
    }
    /// Fermi width in oscillator lengths, `sqrt(2N - 1)`.
    pub fn fermi_width(&self) -> f64 {
        (2.0 * self.n as f64 - 1.0).sqrt()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrapRepr {
    #[serde(rename = "N")]
    n: usize,
    omega_l: f64,
    mass: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    l: Option<f64>,
    #[serde(rename = "L_F", default, skip_serializing_if = "Option::is_none")]
    l_f: Option<f64>,
    #[serde(rename = "eps_F", default, skip_serializing_if = "Option::is_none")]
    eps_f: Option<f64>,
    #[serde(rename = "k_F", default, skip_serializing_if = "Option::is_none")]
    k_f: Option<f64>,
}

impl TryFrom<TrapRepr> for TrapConfig {
    type Error = Error;

    fn try_from(r: TrapRepr) -> Result<Self> {
        let trap = derive_trap(r.n, r.omega_l, r.mass)?;
        let given = [
            ("alpha", r.alpha, trap.alpha),
            ("l", r.l, trap.l),
            ("L_F", r.l_f, trap.l_f),
            ("eps_F", r.eps_f, trap.eps_f),
            ("k_F", r.k_f, trap.k_f),
        ];
        for (name, value, derived) in given {
            if let Some(v) = value {
                if (v - derived).abs() > 1e-9 * derived.abs() {
                    return Err(Error::InvalidInput(format!(
                        "trap field {name}={v} disagrees with derived value {derived}"
                    )));
                }
            }
        }
        Ok(trap)
    }
}

impl From<TrapConfig> for TrapRepr {
    fn from(t: TrapConfig) -> Self {
        TrapRepr {
            n: t.n,
            omega_l: t.omega_l,
            mass: t.mass,
            alpha: Some(t.alpha),
            l: Some(t.l),
            l_f: Some(t.l_f),
            eps_f: Some(t.eps_f),
            k_f: Some(t.k_f),
        }
    }
}

/// The interaction model. `Im1` couples only the m=1 density modes; `Im2`
/// prescribes exponentially decaying `gamma_m` and `alpha_m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub enum InteractionModel {
    Free,
    Im1 {
        /// `V(1) / (hbar omega_l)`, with `V_a(1) = V_b(1) = V(1)`.
        v1: f64,
    },
    Im2 {
        gamma0: f64,
        /// Sign of `V(1)`, either +1 or -1.
        sign: i8,
        r_gamma: f64,
        r_alpha: f64,
    },
    /// Tabulated `V_a(m)`, `V_b(m)` for m = 1, 2, ...; zero beyond the table.
    Custom { va: Vec<f64>, vb: Vec<f64> },
}

/// Decay rates used for IM2 when none are given: 0.3 and 0.4 at N=10,
/// scaled as `sqrt(10/N)` otherwise.
pub fn default_im2_rates(n: usize) -> (f64, f64) {
    let scale = (10.0 / n.max(1) as f64).sqrt();
    (0.3 * scale, 0.4 * scale)
}

/// Solves `gamma (1 + gamma) = alpha^2` for the non-negative root.
pub fn gamma_from_alpha(alpha: f64) -> f64 {
    // (sqrt(1 + 4 a^2) - 1) / 2 without cancellation at small a
    let a2 = alpha * alpha;
    2.0 * a2 / ((1.0 + 4.0 * a2).sqrt() + 1.0)
}

impl InteractionModel {
    /// IM1 parameterised by `alpha_1` instead of `V(1)`.
    pub fn im1_from_alpha(alpha1: f64) -> Self {
        // V = e^{2 zeta} sinh 2 zeta with sinh 2 zeta = 2 alpha
        let s = 2.0 * alpha1;
        let v1 = s * (s + (1.0 + s * s).sqrt());
        InteractionModel::Im1 { v1 }
    }

    /// IM2 parameterised by `alpha_0`; `gamma_0` and the sign follow from it.
    pub fn im2_from_alpha0(alpha0: f64, r_gamma: f64, r_alpha: f64) -> Self {
        InteractionModel::Im2 {
            gamma0: gamma_from_alpha(alpha0),
            sign: if alpha0 < 0.0 { -1 } else { 1 },
            r_gamma,
            r_alpha,
        }
    }

    /// Raw `(V_a(m), V_b(m))` in units of `hbar omega_l`.
    pub fn potentials(&self, m: usize) -> (f64, f64) {
        match self {
            InteractionModel::Free => (0.0, 0.0),
            InteractionModel::Im1 { v1 } => {
                if m == 1 {
                    (*v1, *v1)
                } else {
                    (0.0, 0.0)
                }
            }
            InteractionModel::Im2 { .. } => {
                let zeta = self.im2_zeta(m);
                let v = (2.0 * zeta).exp() * (2.0 * zeta).sinh();
                (v, v)
            }
            InteractionModel::Custom { va, vb } => (
                va.get(m.wrapping_sub(1)).copied().unwrap_or(0.0),
                vb.get(m.wrapping_sub(1)).copied().unwrap_or(0.0),
            ),
        }
    }

    fn im2_zeta(&self, m: usize) -> f64 {
        match self {
            InteractionModel::Im2 {
                gamma0,
                sign,
                r_gamma,
                ..
            } => {
                let gamma = gamma0 * (-r_gamma * m as f64).exp();
                f64::from(*sign) * gamma.sqrt().asinh()
            }
            _ => unreachable!("im2_zeta on a non-IM2 model"),
        }
    }

    /// Largest mode index with a non-zero coupling, if the model has one.
    pub fn support(&self) -> Option<usize> {
        match self {
            InteractionModel::Free => Some(0),
            InteractionModel::Im1 { .. } => Some(1),
            InteractionModel::Im2 { .. } => None,
            InteractionModel::Custom { va, vb } => Some(va.len().max(vb.len())),
        }
    }

    /// Short human-readable identifier, stable across runs.
    pub fn model_id(&self) -> String {
        match self {
            InteractionModel::Free => "Free".to_string(),
            InteractionModel::Im1 { v1 } => format!("IM1(v1={v1})"),
            InteractionModel::Im2 {
                gamma0,
                sign,
                r_gamma,
                r_alpha,
            } => format!("IM2(gamma0={gamma0},sign={sign},r_gamma={r_gamma},r_alpha={r_alpha})"),
            InteractionModel::Custom { va, .. } => format!("Custom(modes={})", va.len()),
        }
    }

    fn check(&self) -> Result<()> {
        match self {
            InteractionModel::Im1 { v1 } if !v1.is_finite() => {
                Err(Error::InvalidInput("IM1 v1 must be finite".into()))
            }
            InteractionModel::Im2 {
                gamma0,
                sign,
                r_gamma,
                r_alpha,
            } => {
                if !(*gamma0 >= 0.0 && gamma0.is_finite()) {
                    return Err(Error::InvalidInput(format!("IM2 gamma0 must be >= 0, got {gamma0}")));
                }
                if *sign != 1 && *sign != -1 {
                    return Err(Error::InvalidInput(format!("IM2 sign must be +1 or -1, got {sign}")));
                }
                if !(*r_gamma > 0.0) || !(*r_alpha > 0.0) {
                    return Err(Error::Domain(format!(
                        "IM2 decay rates must be positive, got r_gamma={r_gamma}, r_alpha={r_alpha}"
                    )));
                }
                Ok(())
            }
            InteractionModel::Custom { va, vb } if va.len() != vb.len() => Err(Error::InvalidInput(
                format!("custom tables differ in length: {} vs {}", va.len(), vb.len()),
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
enum ModelKind {
    Free,
    #[serde(rename = "IM1")]
    Im1,
    #[serde(rename = "IM2")]
    Im2,
    Custom,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelRepr {
    kind: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sign: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r_gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r_alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    va: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vb: Option<Vec<f64>>,
}

impl TryFrom<ModelRepr> for InteractionModel {
    type Error = Error;

    fn try_from(r: ModelRepr) -> Result<Self> {
        let missing = |what: &str| Error::InvalidInput(format!("model field `{what}` is required"));
        let model = match r.kind {
            ModelKind::Free => InteractionModel::Free,
            ModelKind::Im1 => match (r.v1, r.alpha1) {
                (Some(v1), None) => InteractionModel::Im1 { v1 },
                (None, Some(a1)) => InteractionModel::im1_from_alpha(a1),
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidInput("give either v1 or alpha1 for IM1, not both".into()))
                }
                (None, None) => return Err(missing("v1")),
            },
            ModelKind::Im2 => {
                let r_gamma = r.r_gamma.ok_or_else(|| missing("r_gamma"))?;
                let r_alpha = r.r_alpha.ok_or_else(|| missing("r_alpha"))?;
                match (r.alpha0, r.gamma0) {
                    (Some(a0), None) if r.sign.is_none() => {
                        InteractionModel::im2_from_alpha0(a0, r_gamma, r_alpha)
                    }
                    (None, Some(gamma0)) => InteractionModel::Im2 {
                        gamma0,
                        sign: r.sign.unwrap_or(1),
                        r_gamma,
                        r_alpha,
                    },
                    (None, None) => return Err(missing("gamma0")),
                    _ => {
                        return Err(Error::InvalidInput(
                            "give either alpha0 or (gamma0, sign) for IM2".into(),
                        ))
                    }
                }
            }
            ModelKind::Custom => InteractionModel::Custom {
                va: r.va.ok_or_else(|| missing("va"))?,
                vb: r.vb.ok_or_else(|| missing("vb"))?,
            },
        };
        model.check()?;
        Ok(model)
    }
}

impl From<InteractionModel> for ModelRepr {
    fn from(m: InteractionModel) -> Self {
        let mut r = ModelRepr {
            kind: ModelKind::Free,
            v1: None,
            alpha1: None,
            gamma0: None,
            sign: None,
            alpha0: None,
            r_gamma: None,
            r_alpha: None,
            va: None,
            vb: None,
        };
        match m {
            InteractionModel::Free => {}
            InteractionModel::Im1 { v1 } => {
                r.kind = ModelKind::Im1;
                r.v1 = Some(v1);
            }
            InteractionModel::Im2 {
                gamma0,
                sign,
                r_gamma,
                r_alpha,
            } => {
                r.kind = ModelKind::Im2;
                r.gamma0 = Some(gamma0);
                r.sign = Some(sign);
                r.r_gamma = Some(r_gamma);
                r.r_alpha = Some(r_alpha);
            }
            InteractionModel::Custom { va, vb } => {
                r.kind = ModelKind::Custom;
                r.va = Some(va);
                r.vb = Some(vb);
            }
        }
        r
    }
}

/// Bogoliubov data for a single density mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingPoint {
    pub m: usize,
    pub va: f64,
    pub vb: f64,
    pub gamma_m: f64,
    pub alpha_m: f64,
    pub zeta_m: f64,
    pub k_m: f64,
    pub eps_m: f64,
    /// Only defined for IM2.
    pub z_gamma: Option<f64>,
    pub z_alpha: Option<f64>,
}

/// Bogoliubov angle, Luttinger parameter and mode energy for given
/// `(V_a, V_b)`. Fails on a consistency violation instead of returning NaN.
fn bogoliubov(m: usize, va: f64, vb: f64) -> Result<CouplingPoint> {
    let e0 = 1.0 + va;
    if !(e0 > 0.0) {
        return Err(Error::ModelInvalid {
            m,
            va,
            vb,
            reason: "hbar omega + V_a must be positive",
        });
    }
    if !(vb.abs() < e0) {
        return Err(Error::ModelInvalid {
            m,
            va,
            vb,
            reason: "|V_b| must be below |hbar omega + V_a|",
        });
    }
    let zeta = 0.5 * (vb / e0).atanh();
    let k = ((e0 - vb) / (e0 + vb)).sqrt();
    let s = zeta.sinh();
    Ok(CouplingPoint {
        m,
        va,
        vb,
        gamma_m: s * s,
        alpha_m: 0.5 * (2.0 * zeta).sinh(),
        zeta_m: zeta,
        k_m: k,
        eps_m: ((e0 - vb) * (e0 + vb)).sqrt(),
        z_gamma: None,
        z_alpha: None,
    })
}

/// Coupling constants of mode `m` (m >= 1).
pub fn coupling_at(model: &InteractionModel, m: usize) -> Result<CouplingPoint> {
    if m == 0 {
        return Err(Error::InvalidInput("mode index must be >= 1".into()));
    }
    model.check()?;
    match model {
        InteractionModel::Im2 {
            gamma0,
            sign,
            r_gamma,
            r_alpha,
        } => {
            let zeta = model.im2_zeta(m);
            let (v, _) = model.potentials(m);
            let alpha0 = f64::from(*sign) * (gamma0 * (1.0 + gamma0)).sqrt();
            Ok(CouplingPoint {
                m,
                va: v,
                vb: v,
                gamma_m: gamma0 * (-r_gamma * m as f64).exp(),
                alpha_m: alpha0 * (-0.5 * r_alpha * m as f64).exp(),
                zeta_m: zeta,
                k_m: (-2.0 * zeta).exp(),
                eps_m: (2.0 * zeta).exp(),
                z_gamma: Some(r_gamma.cosh() - 1.0),
                z_alpha: Some((0.5 * r_alpha).cosh() - 1.0),
            })
        }
        _ => {
            let (va, vb) = model.potentials(m);
            bogoliubov(m, va, vb)
        }
    }
}

/// Mode energy from the cosh/sinh form, `(1 + V_a) cosh 2 zeta - V_b sinh 2 zeta`.
pub fn mode_energy_hyperbolic(c: &CouplingPoint) -> f64 {
    (1.0 + c.va) * (2.0 * c.zeta_m).cosh() - c.vb * (2.0 * c.zeta_m).sinh()
}

/// Symmetric-case potential from a Luttinger parameter, `(1/K^2 - 1) / 2`.
pub fn potential_from_k(k: f64) -> f64 {
    0.5 * (1.0 / (k * k) - 1.0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModeCheck {
    pub m: usize,
    pub va: f64,
    pub vb: f64,
    pub consistent: bool,
    /// `sqrt(m) V_b(m) / (1 + V_a(m))`.
    pub stability: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub m_max: usize,
    pub modes: Vec<ModeCheck>,
    pub consistent: bool,
    pub first_violation: Option<usize>,
    /// Modes in the upper half of the range where `|stability|` grew.
    pub non_monotone_tail: Vec<usize>,
    /// First mode where `|stability|` fell below [`STABILITY_THRESHOLD`].
    pub decays_below_threshold_at: Option<usize>,
}

pub const STABILITY_THRESHOLD: f64 = 1e-6;

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.consistent && self.non_monotone_tail.is_empty()
    }
}

/// Checks consistency and the stability sequence for m = 1..=m_max.
pub fn validate_model(model: &InteractionModel, m_max: usize) -> ValidationReport {
    let m_max = m_max.max(1);
    let modes: Vec<ModeCheck> = (1..=m_max)
        .map(|m| {
            let (va, vb) = model.potentials(m);
            let e0 = 1.0 + va;
            ModeCheck {
                m,
                va,
                vb,
                consistent: e0 > 0.0 && vb.abs() < e0.abs(),
                stability: (m as f64).sqrt() * vb / e0,
            }
        })
        .collect();
    let first_violation = modes.iter().find(|c| !c.consistent).map(|c| c.m);
    let tail_start = m_max / 2;
    let non_monotone_tail = modes
        .windows(2)
        .filter(|w| w[1].m > tail_start && w[1].stability.abs() > w[0].stability.abs())
        .map(|w| w[1].m)
        .collect();
    let decays_below_threshold_at = modes
        .iter()
        .find(|c| c.stability.abs() < STABILITY_THRESHOLD)
        .map(|c| c.m);
    ValidationReport {
        m_max,
        consistent: first_violation.is_none(),
        first_violation,
        non_monotone_tail,
        decays_below_threshold_at,
        modes,
    }
}
