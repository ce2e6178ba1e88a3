//! Cooperative (excitonic) effects in thick solid targets: recoilless
//! fraction, resonance cross section, effective thickness, width
//! enhancement and the forward-scattering time spectrum.

mod nfs;

pub use nfs::{
    nfs_intensity_closed, nfs_intensity_early, nfs_intensity_series,
    nfs_intensity_series_accelerated, NfsSeries, SERIES_TOL,
};

use crate::constants::{ATOMIC_MASS_UNIT, BOLTZMANN, HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::nucdata::{total_width, NuclearTransition, TargetMaterial};
use crate::photonics::{focal_diameter_for_length, focal_length};
use crate::specfun::debye_integral;
use crate::units::{Area, Energy, Length, Temperature};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Free-nucleus recoil energy E_γ²/(2Mc²).
pub fn recoil_energy(t: &NuclearTransition, mat: &TargetMaterial) -> Energy {
    let mc2 = mat.atomic_mass * ATOMIC_MASS_UNIT * SPEED_OF_LIGHT * SPEED_OF_LIGHT;
    Energy(t.e_gamma.0 * t.e_gamma.0 / (2.0 * mc2))
}

/// Debye-model recoilless fraction for a given recoil energy.
pub fn lamb_moessbauer_factor(
    e_r: Energy,
    theta_d: Temperature,
    temperature: Temperature,
) -> Result<f64> {
    if !(theta_d.0 > 0.0) || temperature.0 < 0.0 || e_r.0 < 0.0 {
        return Err(Error::domain("need θ_D > 0, T ≥ 0 and E_R ≥ 0"));
    }
    let thermal = if temperature.0 == 0.0 {
        0.0
    } else {
        let r = temperature.0 / theta_d.0;
        4.0 * r * r * debye_integral(theta_d.0 / temperature.0)?
    };
    Ok((-2.0 * e_r.0 / (BOLTZMANN * theta_d.0) * (1.0 + thermal)).exp())
}

/// f_LM for a transition in its host material.
pub fn lamb_moessbauer(t: &NuclearTransition, mat: &TargetMaterial) -> Result<f64> {
    lamb_moessbauer_factor(
        recoil_energy(t, mat),
        mat.debye_temperature,
        mat.temperature,
    )
}

/// σ_R = 2π (2I_e+1)/(2I_g+1) (ħc/E_γ)² f_LM/(1+α).
pub fn resonance_cross_section(t: &NuclearTransition, f_lm: f64) -> Area {
    let lambda_bar = HBAR * SPEED_OF_LIGHT / t.e_gamma.0;
    let g = t.ie.multiplicity() as f64 / t.ig.multiplicity() as f64;
    Area(2.0 * PI * g * lambda_bar * lambda_bar * f_lm / (1.0 + t.alpha))
}

/// ξ = σ_R N d / 4 with N the enriched resonant density.
pub fn effective_thickness(sigma_r: Area, mat: &TargetMaterial, d: Length) -> f64 {
    sigma_r.0 * mat.resonant_density() * d.0 / 4.0
}

/// Γ = (ξ+1) Γ₀.
pub fn width_enhancement(xi: f64, gamma0: Energy) -> Energy {
    gamma0 * (xi + 1.0)
}

/// Which length limits the interacting slab.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// d = L_foc < 1/μ
    FocalLength,
    /// d = 1/μ < L_foc
    Absorption,
    /// a user-supplied sample thickness is smaller than both
    Sample,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::FocalLength => "focal_length",
            Regime::Absorption => "absorption",
            Regime::Sample => "sample",
        })
    }
}

/// d_used = min(L_foc, 1/μ, sample thickness).
pub fn thickness_used(l_foc: Length, inv_mu: Length, sample: Option<Length>) -> (Length, Regime) {
    let (mut d, mut regime) = if l_foc.0 <= inv_mu.0 {
        (l_foc, Regime::FocalLength)
    } else {
        (inv_mu, Regime::Absorption)
    };
    if let Some(s) = sample {
        if s.0 < d.0 {
            d = s;
            regime = Regime::Sample;
        }
    }
    (d, regime)
}

/// Focal diameter at which L_foc equals the absorption length.
pub fn crossover_focal_diameter(t: &NuclearTransition, mat: &TargetMaterial) -> Length {
    focal_diameter_for_length(t.wavelength(), mat.inv_mu)
}

/// Everything the collective treatment contributes to one scenario.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollectiveContext {
    pub f_lm: f64,
    pub sigma_r: Area,
    pub l_foc: Length,
    pub d_used: Length,
    pub regime: Regime,
    /// Zero when cooperative effects are switched off.
    pub xi: f64,
    pub gamma0: Energy,
    pub gamma: Energy,
}

pub fn collective_context(
    t: &NuclearTransition,
    mat: &TargetMaterial,
    d_foc: Length,
    sample: Option<Length>,
    cooperative: bool,
) -> Result<CollectiveContext> {
    let f_lm = lamb_moessbauer(t, mat)?;
    let sigma_r = resonance_cross_section(t, f_lm);
    let l_foc = focal_length(t.wavelength(), d_foc);
    let (d_used, regime) = thickness_used(l_foc, mat.inv_mu, sample);
    let xi = if cooperative {
        effective_thickness(sigma_r, mat, d_used)
    } else {
        0.0
    };
    let gamma0 = total_width(t)?;
    Ok(CollectiveContext {
        f_lm,
        sigma_r,
        l_foc,
        d_used,
        regime,
        xi,
        gamma0,
        gamma: width_enhancement(xi, gamma0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lamb_moessbauer_limits() {
        let th = Temperature(300.0);
        assert_eq!(
            lamb_moessbauer_factor(Energy(0.0), th, Temperature(300.0)).unwrap(),
            1.0
        );
        let er = Energy::from_ev(2e-3);
        let cold = lamb_moessbauer_factor(er, th, Temperature(0.0)).unwrap();
        assert_eq!(cold, (-2.0 * er.0 / (BOLTZMANN * th.0)).exp());
        // continuous approach to the zero-temperature value
        let near = lamb_moessbauer_factor(er, th, Temperature(1e-6)).unwrap();
        assert!((near - cold).abs() < 1e-12);
    }

    #[test]
    fn width_enhancement_examples() {
        let g0 = Energy::from_ev(4.66e-9);
        assert!((width_enhancement(86.7, g0) / g0 - 87.7).abs() < 1e-12);
        assert_eq!(width_enhancement(0.0, g0), g0);
        assert!((width_enhancement(99.0, g0) / g0 - 100.0).abs() < 1e-12);
    }

    #[test]
    fn regime_switches_at_equality() {
        let inv_mu = Length::from_um(21.9);
        assert_eq!(thickness_used(inv_mu, inv_mu, None).1, Regime::FocalLength);
        let above = Length(inv_mu.0 * (1.0 + 1e-15));
        assert_eq!(
            thickness_used(above, inv_mu, None),
            (inv_mu, Regime::Absorption)
        );
        let thin = Length::from_um(1.0);
        assert_eq!(
            thickness_used(above, inv_mu, Some(thin)),
            (thin, Regime::Sample)
        );
    }
}
