use crate::constants::{
    ELEMENTARY_CHARGE, EPSILON_0, FERMI, HBAR, MU_0, NUCLEAR_MAGNETON, SPEED_OF_LIGHT,
};
use crate::error::{Error, Result};
use crate::specfun::{double_factorial, AngularMomentum};
use crate::units::{Energy, Frequency, Length, Power, Temperature, Time};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MultipolarityKind {
    Electric,
    Magnetic,
}

/// Character and order of the radiation field, e.g. `M1`, `E2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Multipolarity {
    pub kind: MultipolarityKind,
    pub order: u32,
}

impl Multipolarity {
    pub fn order_am(self) -> AngularMomentum {
        AngularMomentum::integer(self.order)
    }
}

impl FromStr for Multipolarity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse {
            context: format!("multipolarity `{s}`"),
            message: "expected E<L> or M<L> with L ≥ 1".into(),
        };
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('E') | Some('e') => MultipolarityKind::Electric,
            Some('M') | Some('m') => MultipolarityKind::Magnetic,
            _ => return Err(bad()),
        };
        let order: u32 = chars.as_str().parse().map_err(|_| bad())?;
        if order == 0 {
            return Err(bad());
        }
        Ok(Multipolarity { kind, order })
    }
}

impl fmt::Display for Multipolarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            MultipolarityKind::Electric => 'E',
            MultipolarityKind::Magnetic => 'M',
        };
        write!(f, "{c}{}", self.order)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NuclearTransition {
    pub label: String,
    pub ig: AngularMomentum,
    pub ie: AngularMomentum,
    pub e_gamma: Energy,
    pub multipolarity: Multipolarity,
    /// B(λL, I_e→I_g) in e²fm^{2L} (electric) or μ_N²fm^{2L−2} (magnetic).
    pub b_down: Option<f64>,
    pub gamma0: Option<Energy>,
    pub alpha: f64,
    /// Name of the target material record, if the isotope has one.
    pub material: Option<String>,
}

impl NuclearTransition {
    /// Photon wavenumber k = E_γ/(ħc) [1/m].
    pub fn wavenumber(&self) -> f64 {
        self.e_gamma.0 / (HBAR * SPEED_OF_LIGHT)
    }

    pub fn wavelength(&self) -> Length {
        Length(2.0 * std::f64::consts::PI / self.wavenumber())
    }

    /// Conversion from the stored B units to SI.
    fn b_unit_si(&self) -> f64 {
        let l = self.multipolarity.order as i32;
        match self.multipolarity.kind {
            MultipolarityKind::Electric => ELEMENTARY_CHARGE.powi(2) * FERMI.powi(2 * l),
            MultipolarityKind::Magnetic => NUCLEAR_MAGNETON.powi(2) * FERMI.powi(2 * l - 2),
        }
    }

    /// (2L+2)/(L((2L+1)!!)²)·k^{2L+1}, times 1/ε₀ or μ₀. Multiplying by an SI
    /// B↓ gives Γ_rad in joules.
    pub(crate) fn width_prefactor(&self) -> f64 {
        let l = self.multipolarity.order;
        let df = double_factorial(2 * l + 1) as f64;
        let field = match self.multipolarity.kind {
            MultipolarityKind::Electric => 1.0 / EPSILON_0,
            MultipolarityKind::Magnetic => MU_0,
        };
        (2 * l + 2) as f64 / (l as f64 * df * df) * self.wavenumber().powi(2 * l as i32 + 1) * field
    }

    /// B↓ in SI, inverted from Γ_rad when no B is stored.
    pub fn b_down_si(&self) -> Result<f64> {
        match self.b_down {
            Some(b) => Ok(b * self.b_unit_si()),
            None => {
                let g = super::radiative_width(self)?;
                Ok(g.0 / self.width_prefactor())
            }
        }
    }

    /// B↑ = (2I_e+1)/(2I_g+1)·B↓, in SI.
    pub fn b_up_si(&self) -> Result<f64> {
        Ok(self.b_down_si()? * self.ie.multiplicity() as f64 / self.ig.multiplicity() as f64)
    }

    /// Stored B converted from an SI value, in the record's own units.
    pub fn b_from_si(&self, b_si: f64) -> f64 {
        b_si / self.b_unit_si()
    }

    pub(crate) fn check(&self) -> Result<()> {
        let fail = |rule: String| {
            Err(Error::Invariant {
                record: self.label.clone(),
                rule,
            })
        };
        if !(self.e_gamma.0 > 0.0 && self.e_gamma.0.is_finite()) {
            return fail("E_gamma must be positive".into());
        }
        if self.b_down.is_none() && self.gamma0.is_none() {
            return fail("one of B_down or a width (half_life_ns, Gamma0_eV) is required".into());
        }
        if let Some(b) = self.b_down {
            if !(b >= 0.0 && b.is_finite()) {
                return fail("B_down must be non-negative".into());
            }
        }
        if let Some(g) = self.gamma0 {
            if !(g.0 > 0.0 && g.0.is_finite()) {
                return fail("width must be positive".into());
            }
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return fail(format!("alpha = {} must be ≥ 0", self.alpha));
        }
        let l = 2 * self.multipolarity.order;
        let (g, e) = (self.ig.twice(), self.ie.twice());
        if l < g.abs_diff(e) || l > g + e {
            return fail(format!(
                "triangle rule |Ig−Ie| ≤ L ≤ Ig+Ie fails for Ig={}, Ie={}, L={}",
                self.ig, self.ie, self.multipolarity.order
            ));
        }
        Ok(())
    }
}

/// Γ_rad from the reduced transition probability, in joules.
pub fn gamma_rad_from_b(t: &NuclearTransition) -> Result<Energy> {
    let b = t.b_down.ok_or_else(|| Error::MissingData {
        record: t.label.clone(),
        what: "B_down",
    })?;
    Ok(Energy(t.width_prefactor() * b * t.b_unit_si()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TargetMaterial {
    pub label: String,
    /// Density of resonant nuclei before enrichment [m⁻³].
    pub number_density: f64,
    pub debye_temperature: Temperature,
    pub temperature: Temperature,
    /// Atomic mass [u].
    pub atomic_mass: f64,
    pub inv_mu: Length,
    pub enrichment: f64,
}

impl TargetMaterial {
    pub fn resonant_density(&self) -> f64 {
        self.number_density * self.enrichment
    }

    pub(crate) fn check(&self) -> Result<()> {
        let fail = |rule: &str| {
            Err(Error::Invariant {
                record: self.label.clone(),
                rule: rule.to_string(),
            })
        };
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if !pos(self.number_density) {
            return fail("N_per_m3 must be positive");
        }
        if !pos(self.debye_temperature.0) {
            return fail("theta_D_K must be positive");
        }
        if !pos(self.temperature.0) {
            return fail("T_K must be positive");
        }
        if !pos(self.atomic_mass) {
            return fail("mass_u must be positive");
        }
        if !pos(self.inv_mu.0) {
            return fail("inv_mu_um must be positive");
        }
        if !(self.enrichment > 0.0 && self.enrichment <= 1.0) {
            return fail("enrichment must lie in (0, 1]");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaserPulseSpec {
    pub label: String,
    pub e_ph: Energy,
    /// Relative bandwidth ΔE/E_ph.
    pub bw: f64,
    pub t_p: Time,
    pub t_coh: Time,
    pub p_peak: Power,
    pub rep_rate: Frequency,
    pub d_foc: Length,
    pub seeded: bool,
}

impl LaserPulseSpec {
    pub fn wavelength(&self) -> Length {
        Length(2.0 * std::f64::consts::PI * HBAR * SPEED_OF_LIGHT / self.e_ph.0)
    }

    pub(crate) fn check(&self) -> Result<()> {
        let fail = |rule: &str| {
            Err(Error::Invariant {
                record: self.label.clone(),
                rule: rule.to_string(),
            })
        };
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if !pos(self.e_ph.0) {
            return fail("E_max_eV must be positive");
        }
        if !pos(self.bw) {
            return fail("BW must be positive");
        }
        if !pos(self.t_p.0) || !pos(self.t_coh.0) {
            return fail("Tp_fs and Tcoh_fs must be positive");
        }
        if !(self.p_peak.0 >= 0.0 && self.p_peak.0.is_finite()) {
            return fail("Ppeak_W must be non-negative");
        }
        if !pos(self.rep_rate.0) {
            return fail("rep_rate_Hz must be positive");
        }
        if !pos(self.d_foc.0) {
            return fail("d_foc_nm must be positive");
        }
        Ok(())
    }
}
