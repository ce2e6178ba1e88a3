//! Relativistic Doppler matching for ion-beam targets moving head-on into
//! the laser.

use crate::error::{Error, Result};
use crate::nucdata::LaserPulseSpec;
use crate::units::{Energy, Time};
use serde::{Deserialize, Serialize};

/// Relative spread Δγ/γ assumed when a scenario does not set one.
pub const DEFAULT_DGAMMA_REL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoostSpec {
    pub beta: f64,
    pub gamma: f64,
    pub dgamma_rel: f64,
}

impl BoostSpec {
    pub fn new(beta: f64, dgamma_rel: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&beta) {
            return Err(Error::domain(format!("β = {beta} outside [0, 1)")));
        }
        if !(dgamma_rel >= 0.0 && dgamma_rel.is_finite()) {
            return Err(Error::domain(format!(
                "Δγ/γ = {dgamma_rel} must be non-negative"
            )));
        }
        let gamma = 1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt();
        Ok(BoostSpec {
            beta,
            gamma,
            dgamma_rel,
        })
    }

    pub fn at_rest() -> Self {
        BoostSpec {
            beta: 0.0,
            gamma: 1.0,
            dgamma_rel: 0.0,
        }
    }

    pub fn with_dgamma(self, dgamma_rel: f64) -> Result<Self> {
        BoostSpec::new(self.beta, dgamma_rel)
    }

    /// ω_n/ω = √((1+β)/(1−β)).
    pub fn doppler_factor(&self) -> f64 {
        ((1.0 + self.beta) / (1.0 - self.beta)).sqrt()
    }

    /// ℰ_n/ℰ = (1+β)γ. Equal to the Doppler factor; kept separate because
    /// it is applied to the field rather than the photon energy.
    pub fn field_factor(&self) -> f64 {
        (1.0 + self.beta) * self.gamma
    }
}

/// Velocity that brings `e_lab` photons onto `e_transition` in the rest
/// frame: with D = E_n/E, β = (D²−1)/(D²+1).
pub fn required_beta(e_lab: Energy, e_transition: Energy) -> Result<BoostSpec> {
    if !(e_lab.0 > 0.0 && e_lab.0.is_finite()) {
        return Err(Error::domain("laboratory photon energy must be positive"));
    }
    if !(e_transition.0 >= e_lab.0) {
        return Err(Error::domain(format!(
            "transition energy {:.6} keV below photon energy {:.6} keV needs deceleration",
            e_transition.ev() / 1e3,
            e_lab.ev() / 1e3
        )));
    }
    let d2 = (e_transition.0 / e_lab.0).powi(2);
    BoostSpec::new((d2 - 1.0) / (d2 + 1.0), DEFAULT_DGAMMA_REL)
}

/// Which frame the tabulated pulse duration is taken to hold in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseDurationFrame {
    /// T_p kept as tabulated.
    #[default]
    Lab,
    /// T_p' = T_p/((1+β)γ), which keeps the photon number per pulse fixed
    /// once the field is scaled by (1+β)γ.
    Rest,
}

impl PulseDurationFrame {
    fn factor(self, boost: &BoostSpec) -> f64 {
        match self {
            PulseDurationFrame::Lab => 1.0,
            PulseDurationFrame::Rest => boost.field_factor(),
        }
    }
}

/// A laser seen from the nuclear rest frame.
#[derive(Clone, Debug, PartialEq)]
pub struct BoostedLaser {
    pub laser: LaserPulseSpec,
    pub boost: BoostSpec,
    /// Multiplies the laboratory field amplitude.
    pub field_factor: f64,
    pub frame: PulseDurationFrame,
}

/// Rest-frame photon energy, bandwidth and duration. Power, repetition rate
/// and focus are left in laboratory terms; the field factor is applied by
/// the caller.
pub fn boost_laser(
    laser: &LaserPulseSpec,
    boost: &BoostSpec,
    frame: PulseDurationFrame,
) -> BoostedLaser {
    let d = boost.doppler_factor();
    let tf = frame.factor(boost);
    let mut out = laser.clone();
    out.e_ph = Energy(laser.e_ph.0 * d);
    out.bw = laser.bw.hypot(boost.dgamma_rel);
    out.t_p = Time(laser.t_p.0 / tf);
    out.t_coh = Time(laser.t_coh.0 / tf);
    BoostedLaser {
        laser: out,
        boost: *boost,
        field_factor: boost.field_factor(),
        frame,
    }
}

/// Inverse of [`boost_laser`].
pub fn unboost_laser(boosted: &BoostedLaser) -> LaserPulseSpec {
    let b = &boosted.boost;
    let d = b.doppler_factor();
    let tf = boosted.frame.factor(b);
    let mut out = boosted.laser.clone();
    out.e_ph = Energy(out.e_ph.0 / d);
    let bw2 = (out.bw - b.dgamma_rel) * (out.bw + b.dgamma_rel);
    out.bw = bw2.max(0.0).sqrt();
    out.t_p = Time(out.t_p.0 * tf);
    out.t_coh = Time(out.t_coh.0 * tf);
    out
}

/// Finds Δγ/γ such that `model(Δγ/γ) = target`, assuming the model falls
/// as the spread grows. Bisection in log space over `[lo, hi]`.
pub fn calibrate_dgamma(
    mut model: impl FnMut(f64) -> Result<f64>,
    target: f64,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    if !(target > 0.0) || !(lo > 0.0) || !(hi > lo) {
        return Err(Error::domain(
            "calibration needs target > 0 and 0 < lo < hi",
        ));
    }
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let fa = model(lo)? - target;
    let fb = model(hi)? - target;
    if fa < 0.0 || fb > 0.0 {
        return Err(Error::domain(format!(
            "target {target:e} not bracketed by Δγ/γ in [{lo:e}, {hi:e}]"
        )));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if model(m.exp())? > target {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-12 {
            break;
        }
    }
    Ok((0.5 * (a + b)).exp())
}
