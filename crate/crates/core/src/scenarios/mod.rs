//! Prebuilt models with closed-form eigenvalue and EP oracles.
//!
//! Every builder returns a plain [`LindbladModel`]; nothing downstream
//! special-cases a scenario.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::standard::{annihilation, ket_bra, sigma_minus, sigma_plus, sigma_x, sigma_z};
use crate::model::{JumpChannel, LindbladModel};

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn check_rate(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::InvalidParameter(format!("{name} must be a non-negative rate, got {v}")));
    }
    Ok(())
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
    }
    Ok(())
}

/// Qubit with splitting `omega`, loss `gamma_minus` and gain `gamma_plus`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GainLossQubitParams {
    pub omega: f64,
    pub gamma_minus: f64,
    pub gamma_plus: f64,
}

impl Default for GainLossQubitParams {
    fn default() -> Self {
        Self { omega: 1.0, gamma_minus: 1.0, gamma_plus: 0.5 }
    }
}

/// `H = (omega/2) sigma_z`, channels `(gamma_minus, sigma_-)` and `(gamma_plus, sigma_+)`.
pub fn build_gain_loss_qubit(p: &GainLossQubitParams) -> Result<LindbladModel> {
    check_finite("omega", p.omega)?;
    check_rate("gamma_minus", p.gamma_minus)?;
    check_rate("gamma_plus", p.gamma_plus)?;
    LindbladModel::new(
        sigma_z().scale_re(0.5 * p.omega),
        vec![JumpChannel::new(p.gamma_minus, sigma_minus())?, JumpChannel::new(p.gamma_plus, sigma_plus())?],
    )
}

/// Equal displacements on both channels that make the no-jump Hamiltonian
/// defective: `+-z` and `+-conj(z)` with
/// `z = i (gamma_minus - gamma_plus - 2 i omega) / (4 sqrt(gamma_minus gamma_plus))`.
///
/// Only `+-z` are exceptional points of [`crate::model::nhh_beta`] as defined
/// here; the conjugates belong to the opposite sign convention for the
/// displacement and are returned so callers can tell them apart.
pub fn gain_loss_ep_candidates(p: &GainLossQubitParams) -> Result<[C64; 4]> {
    let prod = p.gamma_minus * p.gamma_plus;
    if !(prod > 0.0) || !prod.is_finite() {
        return Err(Error::InvalidParameter("both gain and loss rates must be positive".into()));
    }
    let z = I * C64::new(p.gamma_minus - p.gamma_plus, -2.0 * p.omega) / (4.0 * prod.sqrt());
    Ok([z, -z, z.conj(), -z.conj()])
}

/// Three-level system `(g, e, f)` with a drive resonant on `g <-> f`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThreeLevelParams {
    pub omega: f64,
    pub delta_omega: f64,
    #[serde(rename = "drive")]
    pub big_omega: f64,
    pub gamma_eg: f64,
    pub gamma_fe: f64,
}

impl Default for ThreeLevelParams {
    fn default() -> Self {
        Self { omega: 1.0, delta_omega: 0.1, big_omega: 1.0, gamma_eg: 0.04, gamma_fe: 100.0 }
    }
}

impl ThreeLevelParams {
    /// Gain rate of the two-level model left after eliminating `f`: `4 Omega^2 / gamma_fe`.
    pub fn effective_gain(&self) -> f64 {
        4.0 * self.big_omega * self.big_omega / self.gamma_fe
    }

    /// The eliminated model as a gain/loss qubit in the `(e, g)` basis.
    pub fn effective_two_level(&self) -> GainLossQubitParams {
        GainLossQubitParams { omega: 0.0, gamma_minus: self.gamma_eg, gamma_plus: self.effective_gain() }
    }
}

pub const LEVEL_G: usize = 0;
pub const LEVEL_E: usize = 1;
pub const LEVEL_F: usize = 2;

/// Rotating-frame model on `(|g>, |e>, |f>)`:
/// `H = omega |e><e| + Omega (|g><f| + |f><g|)`, channels
/// `(gamma_eg, |g><e|)` and `(gamma_fe, |e><f|)`.
///
/// The frame rotates `|f>` at the drive frequency, which equals its bare
/// energy `2 omega + delta_omega`, so `delta_omega` drops out of `H`.
pub fn build_three_level(p: &ThreeLevelParams) -> Result<LindbladModel> {
    check_finite("omega", p.omega)?;
    check_finite("delta_omega", p.delta_omega)?;
    check_finite("drive", p.big_omega)?;
    check_rate("gamma_eg", p.gamma_eg)?;
    check_rate("gamma_fe", p.gamma_fe)?;
    if p.gamma_fe == 0.0 {
        return Err(Error::InvalidParameter("gamma_fe must be positive".into()));
    }
    let h = ket_bra(3, LEVEL_E, LEVEL_E)?
        .scale_re(p.omega)
        .plus_scaled(C64::new(p.big_omega, 0.0), &(&ket_bra(3, LEVEL_G, LEVEL_F)? + &ket_bra(3, LEVEL_F, LEVEL_G)?));
    LindbladModel::new(
        h,
        vec![
            JumpChannel::new(p.gamma_eg, ket_bra(3, LEVEL_G, LEVEL_E)?)?,
            JumpChannel::new(p.gamma_fe, ket_bra(3, LEVEL_E, LEVEL_F)?)?,
        ],
    )
}

/// Driven Kerr resonator truncated to `truncation` Fock states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KerrParams {
    pub detuning: f64,
    pub kerr: f64,
    #[serde(with = "crate::model::json::complex")]
    pub drive: C64,
    pub gamma: f64,
    pub truncation: usize,
}

impl Default for KerrParams {
    fn default() -> Self {
        Self { detuning: 0.0, kerr: 2.0, drive: C64::new(0.1, 0.0), gamma: 1.0, truncation: 3 }
    }
}

/// `H = -Delta a^dag a + U a^dag^2 a^2 - i (alpha a^dag - alpha* a)`, channel `(gamma, a)`.
pub fn build_kerr(p: &KerrParams) -> Result<LindbladModel> {
    if p.truncation < 3 {
        return Err(Error::InvalidParameter(format!("Kerr truncation must be at least 3, got {}", p.truncation)));
    }
    check_finite("detuning", p.detuning)?;
    check_finite("kerr", p.kerr)?;
    check_finite("drive", p.drive.norm())?;
    check_rate("gamma", p.gamma)?;
    let n = p.truncation;
    let a = annihilation(n)?;
    let ad = a.adjoint();
    let number = ad.matmul(&a);
    let pairs = ad.matmul(&ad).matmul(&a).matmul(&a);
    let drive = ad.scale(p.drive).plus_scaled(-p.drive.conj(), &a).scale(-I);
    let h = number.scale_re(-p.detuning).plus_scaled(C64::new(p.kerr, 0.0), &pairs);
    LindbladModel::new(&h + &drive, vec![JumpChannel::new(p.gamma, a)?])
}

/// Resonantly driven qubit with loss.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DrivenQubitParams {
    pub omega: f64,
    pub gamma_minus: f64,
}

impl Default for DrivenQubitParams {
    fn default() -> Self {
        Self { omega: 1.0, gamma_minus: 1.0 }
    }
}

/// `H = (omega/2) sigma_x`, channel `(gamma_minus, sigma_-)`.
pub fn build_driven_qubit(p: &DrivenQubitParams) -> Result<LindbladModel> {
    check_finite("omega", p.omega)?;
    check_rate("gamma_minus", p.gamma_minus)?;
    LindbladModel::new(sigma_x().scale_re(0.5 * p.omega), vec![JumpChannel::new(p.gamma_minus, sigma_minus())?])
}

/// Undriven decay qubit, `H = 0` with a single `(gamma, sigma_-)` channel.
pub fn decay_qubit(gamma: f64) -> Result<LindbladModel> {
    build_driven_qubit(&DrivenQubitParams { omega: 0.0, gamma_minus: gamma })
}

/// Displacement that puts the driven qubit at an EP:
/// `beta = i (4 omega^2 - gamma^2) / (8 gamma omega)`.
pub fn driven_qubit_ep_beta(p: &DrivenQubitParams) -> Result<C64> {
    if !(p.omega != 0.0 && p.gamma_minus > 0.0) {
        return Err(Error::InvalidParameter("EP displacement needs nonzero drive and loss".into()));
    }
    let (w, g) = (p.omega, p.gamma_minus);
    Ok(I * (4.0 * w * w - g * g) / (8.0 * g * w))
}

/// Closed-form no-jump eigenvalues of the displaced driven qubit:
/// `-i gamma/4 - i gamma |beta|^2/2 +- sqrt(omega^2/4 - gamma^2/16 - i gamma omega beta*/2)`.
pub fn driven_qubit_eigenvalues(p: &DrivenQubitParams, beta: C64) -> [C64; 2] {
    let (w, g) = (p.omega, p.gamma_minus);
    let center = -I * (0.25 * g + 0.5 * g * beta.norm_sqr());
    let root = (C64::new(0.25 * w * w - g * g / 16.0, 0.0) - 0.5 * I * g * w * beta.conj()).sqrt();
    [center + root, center - root]
}

/// A scenario by name, as it appears in configuration files.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", content = "params", rename_all = "kebab-case")]
pub enum Scenario {
    GainLossQubit(GainLossQubitParams),
    ThreeLevel(ThreeLevelParams),
    Kerr(KerrParams),
    DrivenQubit(DrivenQubitParams),
}

impl Scenario {
    pub const NAMES: [&'static str; 4] = ["gain-loss-qubit", "three-level", "kerr", "driven-qubit"];

    /// Scenario with default parameters.
    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name {
            "gain-loss-qubit" => Scenario::GainLossQubit(Default::default()),
            "three-level" => Scenario::ThreeLevel(Default::default()),
            "kerr" => Scenario::Kerr(Default::default()),
            "driven-qubit" => Scenario::DrivenQubit(Default::default()),
            other => {
                return Err(Error::Config(format!(
                    "unknown scenario '{other}' (expected one of {})",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::GainLossQubit(_) => Self::NAMES[0],
            Scenario::ThreeLevel(_) => Self::NAMES[1],
            Scenario::Kerr(_) => Self::NAMES[2],
            Scenario::DrivenQubit(_) => Self::NAMES[3],
        }
    }

    pub fn build(&self) -> Result<LindbladModel> {
        match self {
            Scenario::GainLossQubit(p) => build_gain_loss_qubit(p),
            Scenario::ThreeLevel(p) => build_three_level(p),
            Scenario::Kerr(p) => build_kerr(p),
            Scenario::DrivenQubit(p) => build_driven_qubit(p),
        }
    }
}

#[cfg(test)]
mod tests;
