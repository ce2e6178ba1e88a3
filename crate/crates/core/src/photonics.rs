//! Laser spec → resonant flux, effective intensity and field, focal geometry.

use crate::constants::{EPSILON_0, HBAR, PLANCK, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::nucdata::LaserPulseSpec;
use crate::units::{Area, ElectricField, Energy, Frequency, Intensity, Length};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which Planck constant sets the transform limit ΔE·T_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FourierConvention {
    /// ΔE = h/T_p
    Planck,
    /// ΔE = ħ/T_p
    #[default]
    Reduced,
}

/// How the pulse's temporal coherence is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Seeding {
    /// Pulses are transform limited: lasers that are not coherent by design
    /// get the Fourier bandwidth, natively coherent ones keep their own.
    #[default]
    Seeded,
    /// Tabulated bandwidth, dephasing at 1/T_coh.
    Unseeded,
}

/// ΔE/E_ph for a transform-limited pulse.
pub fn fourier_bandwidth(laser: &LaserPulseSpec, convention: FourierConvention) -> f64 {
    let h = match convention {
        FourierConvention::Planck => PLANCK,
        FourierConvention::Reduced => HBAR,
    };
    h / laser.t_p.0 / laser.e_ph.0
}

/// Bandwidth actually used for a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolvedBandwidth {
    /// Relative to the laser photon energy.
    pub bw: f64,
    /// Absolute spectral width.
    pub delta_e: Energy,
    /// Coherence damping, as an energy ħ/T_coh (zero when coherent).
    pub gamma_dec: Energy,
}

pub fn resolve_bandwidth(
    laser: &LaserPulseSpec,
    seeding: Seeding,
    convention: FourierConvention,
) -> ResolvedBandwidth {
    let (bw, gamma_dec) = match (seeding, laser.seeded) {
        (Seeding::Seeded, true) => (laser.bw, 0.0),
        (Seeding::Seeded, false) => (fourier_bandwidth(laser, convention), 0.0),
        (Seeding::Unseeded, true) => (laser.bw, 0.0),
        (Seeding::Unseeded, false) => (laser.bw, HBAR / laser.t_coh.0),
    };
    ResolvedBandwidth {
        bw,
        delta_e: Energy(bw * laser.e_ph.0),
        gamma_dec: Energy(gamma_dec),
    }
}

/// Twice the Rayleigh length: (2π/λ)(d_foc/2)².
pub fn focal_length(wavelength: Length, d_foc: Length) -> Length {
    Length(2.0 * PI / wavelength.0 * (0.5 * d_foc.0).powi(2))
}

/// Inverse of [`focal_length`]: the focal diameter with the given length.
pub fn focal_diameter_for_length(wavelength: Length, l_foc: Length) -> Length {
    Length(2.0 * (l_foc.0 * wavelength.0 / (2.0 * PI)).sqrt())
}

pub fn focal_area(d_foc: Length) -> Area {
    Area(PI * (0.5 * d_foc.0).powi(2))
}

/// Peak field amplitude for a given intensity: √(2I/(ε₀c)).
pub fn field_from_intensity(i: Intensity) -> ElectricField {
    ElectricField((2.0 * i.0 / (EPSILON_0 * SPEED_OF_LIGHT)).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveField {
    pub phi_tot: Frequency,
    pub phi_res: Frequency,
    /// Resonant photons per pulse.
    pub n_res: f64,
    /// All photons per pulse.
    pub n_tot: f64,
    pub i_p: Intensity,
    pub i_ef: Intensity,
    pub e_ef: ElectricField,
    pub bw_used: f64,
    pub gamma_used: Energy,
}

/// Resonant fraction of the pulse and the field it carries.
///
/// The spectrum is flat over ΔE, so a fraction Γ/ΔE of the photons is
/// resonant, capped at one.
pub fn effective_field(
    laser: &LaserPulseSpec,
    gamma: Energy,
    e_gamma: Energy,
    bandwidth: &ResolvedBandwidth,
) -> Result<EffectiveField> {
    if !(gamma.0 > 0.0) {
        return Err(Error::domain(format!(
            "width Γ = {:e} J must be positive",
            gamma.0
        )));
    }
    if !(e_gamma.0 > 0.0) {
        return Err(Error::domain("photon energy must be positive"));
    }
    let phi_tot = laser.p_peak.0 / e_gamma.0;
    let fraction = (gamma.0 / bandwidth.delta_e.0).min(1.0);
    let phi_res = phi_tot * fraction;
    let i_p = laser.p_peak.0 / focal_area(laser.d_foc).0;
    let i_ef = Intensity(i_p * fraction);
    Ok(EffectiveField {
        phi_tot: Frequency(phi_tot),
        phi_res: Frequency(phi_res),
        n_res: phi_res * laser.t_p.0,
        n_tot: phi_tot * laser.t_p.0,
        i_p: Intensity(i_p),
        i_ef,
        e_ef: field_from_intensity(i_ef),
        bw_used: bandwidth.bw,
        gamma_used: gamma,
    })
}
