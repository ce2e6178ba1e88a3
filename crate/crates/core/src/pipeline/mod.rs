//! Full scenario runs: isotope + laser + target mode → excited population
//! and signal rate.

mod tables;

pub use tables::{
    reproduce_table, reproduce_table_with, Reference, TableCell, TableId, TableReport,
    REFERENCE_FILE,
};

use crate::bloch::{
    evolve_with, total_excited_population, CoherenceDamping, Diagnostics, Envelope, SublevelSystem,
    DEFAULT_TOL,
};
use crate::constants::HBAR;
use crate::cooperative::{collective_context, crossover_focal_diameter, Regime};
use crate::doppler::{
    boost_laser, required_beta, BoostSpec, PulseDurationFrame, DEFAULT_DGAMMA_REL,
};
use crate::error::{Error, Result};
use crate::nucdata::{radiative_width, Dataset, LaserPulseSpec, NuclearTransition};
use crate::photonics::{
    effective_field, focal_area, focal_length, resolve_bandwidth, EffectiveField,
    FourierConvention, ResolvedBandwidth, Seeding,
};
use crate::units::{ElectricField, Energy, Length, Power};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Bare-ion density assumed in the beam, 1e11 cm⁻³.
pub const DEFAULT_ION_DENSITY: f64 = 1e17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetMode {
    #[default]
    SolidState,
    IonBeam,
}

impl std::fmt::Display for TargetMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TargetMode::SolidState => "solid_state",
            TargetMode::IonBeam => "ion_beam",
        })
    }
}

/// Where the collectively enhanced width is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthUsage {
    /// Resonant photon count and relaxation rates.
    #[default]
    FluxAndRelaxation,
    /// Resonant photon count only; the Bloch equations relax at Γ₀.
    FluxOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub transition: String,
    pub laser: String,
    pub mode: TargetMode,
    pub cooperative: bool,
    pub seeding: Seeding,
    pub fourier: FourierConvention,
    /// Focal diameter override [m].
    pub d_foc_m: Option<f64>,
    /// Sample thickness [m]; limits the slab if thinner than L_foc and 1/μ.
    pub thickness_m: Option<f64>,
    /// Peak power override [W].
    pub p_peak_w: Option<f64>,
    /// Repetition rate override [Hz].
    pub rep_rate_hz: Option<f64>,
    pub focus_efficiency: f64,
    pub dgamma_rel: Option<f64>,
    pub ion_density_per_m3: f64,
    pub pulse_frame: PulseDurationFrame,
    pub tol: f64,
    pub envelope: Envelope,
    pub width_usage: WidthUsage,
    pub damping: CoherenceDamping,
    pub polarization: i32,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            transition: String::new(),
            laser: String::new(),
            mode: TargetMode::SolidState,
            cooperative: true,
            seeding: Seeding::Seeded,
            fourier: FourierConvention::default(),
            d_foc_m: None,
            thickness_m: None,
            p_peak_w: None,
            rep_rate_hz: None,
            focus_efficiency: 1.0,
            dgamma_rel: None,
            ion_density_per_m3: DEFAULT_ION_DENSITY,
            pulse_frame: PulseDurationFrame::default(),
            tol: DEFAULT_TOL,
            envelope: Envelope::default(),
            width_usage: WidthUsage::default(),
            damping: CoherenceDamping::default(),
            polarization: 1,
        }
    }
}

impl ScenarioConfig {
    pub fn new(transition: &str, laser: &str) -> Self {
        ScenarioConfig {
            transition: transition.into(),
            laser: laser.into(),
            ..Default::default()
        }
    }

    pub fn ion_beam(transition: &str, laser: &str) -> Self {
        ScenarioConfig {
            mode: TargetMode::IonBeam,
            cooperative: false,
            ..Self::new(transition, laser)
        }
    }

    /// Short name used in error messages and output.
    pub fn name(&self) -> String {
        format!("{}/{}", self.transition, self.laser)
    }

    fn check(&self) -> Result<()> {
        let opt_pos = |v: Option<f64>, what: &str| match v {
            Some(x) if !(x > 0.0 && x.is_finite()) => {
                Err(Error::domain(format!("{what} must be positive, got {x}")))
            }
            _ => Ok(()),
        };
        opt_pos(self.d_foc_m, "d_foc_m")?;
        opt_pos(self.thickness_m, "thickness_m")?;
        opt_pos(self.rep_rate_hz, "rep_rate_hz")?;
        if let Some(p) = self.p_peak_w {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Error::domain(format!(
                    "p_peak_w must be non-negative, got {p}"
                )));
            }
        }
        if !(self.focus_efficiency > 0.0 && self.focus_efficiency <= 1.0) {
            return Err(Error::domain("focus_efficiency must lie in (0, 1]"));
        }
        if !(self.tol > 0.0 && self.tol < 1e-2) {
            return Err(Error::domain("tol must lie in (0, 1e-2)"));
        }
        if !(self.ion_density_per_m3 > 0.0) {
            return Err(Error::domain("ion density must be positive"));
        }
        Ok(())
    }
}

/// Record ids and dataset fingerprint behind a result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub dataset_hash: String,
    pub transition: String,
    pub laser: String,
    pub material: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExcitationResult {
    pub config: ScenarioConfig,
    pub rho_ee: f64,
    /// Signal photon rate [1/s].
    pub s: f64,
    pub xi: f64,
    pub gamma_used: Energy,
    pub n_fv: f64,
    pub d_used: Length,
    pub e_ef: ElectricField,
    pub f_l: f64,
    pub alpha: f64,
    pub regime: Option<Regime>,
    pub boost: Option<BoostSpec>,
    pub field: EffectiveField,
    /// ρ_ee with the other [`WidthUsage`], when it differs.
    pub rho_ee_alt: Option<f64>,
    pub diagnostics: Diagnostics,
    pub provenance: Provenance,
}

impl ExcitationResult {
    /// S recomputed from the stored fields.
    pub fn signal_from_fields(&self) -> f64 {
        signal_rate(self.rho_ee, self.n_fv, self.f_l, self.alpha)
    }
}

/// S = ρ_ee·N_fv·f_l/(1+α).
pub fn signal_rate(rho_ee: f64, n_fv: f64, f_l: f64, alpha: f64) -> f64 {
    rho_ee * n_fv * f_l / (1.0 + alpha)
}

struct Prepared {
    transition: NuclearTransition,
    laser: LaserPulseSpec,
    bandwidth: ResolvedBandwidth,
    gamma_flux: Energy,
    gamma_relax: Energy,
    gamma_alt: Option<Energy>,
    field_factor: f64,
    xi: f64,
    n_fv: f64,
    d_used: Length,
    alpha: f64,
    regime: Option<Regime>,
    boost: Option<BoostSpec>,
    material: Option<String>,
}

fn lab_laser(cfg: &ScenarioConfig, ds: &Dataset) -> Result<LaserPulseSpec> {
    let mut laser = ds.laser(&cfg.laser)?.clone();
    if let Some(d) = cfg.d_foc_m {
        laser.d_foc = Length(d);
    }
    if let Some(p) = cfg.p_peak_w {
        laser.p_peak = Power(p);
    }
    if let Some(f) = cfg.rep_rate_hz {
        laser.rep_rate = crate::units::Frequency(f);
    }
    laser.p_peak = laser.p_peak * cfg.focus_efficiency;
    Ok(laser)
}

fn prepare(cfg: &ScenarioConfig, ds: &Dataset) -> Result<Prepared> {
    cfg.check()?;
    let t = ds.transition(&cfg.transition)?.clone();
    let laser = lab_laser(cfg, ds)?;
    let lab_bw = resolve_bandwidth(&laser, cfg.seeding, cfg.fourier);
    match cfg.mode {
        TargetMode::SolidState => {
            let mat = ds.material_for(&t)?;
            let thickness = cfg.thickness_m.map(Length);
            let ctx = collective_context(&t, mat, laser.d_foc, thickness, cfg.cooperative)?;
            let (relax, alt) = match cfg.width_usage {
                WidthUsage::FluxAndRelaxation => (ctx.gamma, ctx.gamma0),
                WidthUsage::FluxOnly => (ctx.gamma0, ctx.gamma),
            };
            Ok(Prepared {
                n_fv: mat.resonant_density() * focal_area(laser.d_foc).0 * ctx.d_used.0,
                alpha: t.alpha,
                transition: t,
                laser,
                bandwidth: lab_bw,
                gamma_flux: ctx.gamma,
                gamma_relax: relax,
                gamma_alt: (alt != relax).then_some(alt),
                field_factor: 1.0,
                xi: ctx.xi,
                d_used: ctx.d_used,
                regime: Some(ctx.regime),
                boost: None,
                material: Some(mat.label.clone()),
            })
        }
        TargetMode::IonBeam => {
            // bare nuclei: no conversion electrons, no collective response
            let mut bare = t.clone();
            let gamma = radiative_width(&t)?;
            bare.alpha = 0.0;
            bare.gamma0 = Some(gamma);
            let dg = cfg.dgamma_rel.unwrap_or(DEFAULT_DGAMMA_REL);
            let boost = required_beta(laser.e_ph, t.e_gamma)?.with_dgamma(dg)?;
            // the relative Fourier width is frame independent, so resolve it
            // in the lab and fold in the γ spread afterwards
            let mut lab = laser.clone();
            lab.bw = lab_bw.bw;
            let boosted = boost_laser(&lab, &boost, cfg.pulse_frame);
            let rest = boosted.laser;
            let gamma_dec = if lab_bw.gamma_dec.0 > 0.0 {
                HBAR / rest.t_coh.0
            } else {
                0.0
            };
            let bandwidth = ResolvedBandwidth {
                bw: rest.bw,
                delta_e: Energy(rest.bw * rest.e_ph.0),
                gamma_dec: Energy(gamma_dec),
            };
            let l_foc = focal_length(laser.wavelength(), laser.d_foc);
            Ok(Prepared {
                n_fv: cfg.ion_density_per_m3 * focal_area(laser.d_foc).0 * l_foc.0,
                alpha: 0.0,
                transition: bare,
                laser: rest,
                bandwidth,
                gamma_flux: gamma,
                gamma_relax: gamma,
                gamma_alt: None,
                field_factor: boosted.field_factor,
                xi: 0.0,
                d_used: l_foc,
                regime: None,
                boost: Some(boost),
                material: None,
            })
        }
    }
}

fn population(
    cfg: &ScenarioConfig,
    p: &Prepared,
    gamma_relax: Energy,
    e_ef: ElectricField,
) -> Result<(f64, Diagnostics)> {
    let sys = SublevelSystem::new(
        &p.transition,
        gamma_relax,
        Energy(0.0),
        p.bandwidth.gamma_dec,
        cfg.polarization,
    )?
    .with_damping(cfg.damping);
    let (state, diag) = evolve_with(&sys, e_ef, p.laser.t_p, cfg.tol, cfg.envelope)?;
    Ok((total_excited_population(&state), diag))
}

fn run_inner(cfg: &ScenarioConfig, ds: &Dataset) -> Result<ExcitationResult> {
    let p = prepare(cfg, ds)?;
    let field = effective_field(&p.laser, p.gamma_flux, p.transition.e_gamma, &p.bandwidth)?;
    let e_ef = ElectricField(field.e_ef.0 * p.field_factor);
    let (rho_ee, diagnostics) = population(cfg, &p, p.gamma_relax, e_ef)?;
    let rho_ee_alt = match p.gamma_alt {
        Some(g) => Some(population(cfg, &p, g, e_ef)?.0),
        None => None,
    };
    let f_l = p.laser.rep_rate.0;
    Ok(ExcitationResult {
        config: cfg.clone(),
        rho_ee,
        s: signal_rate(rho_ee, p.n_fv, f_l, p.alpha),
        xi: p.xi,
        gamma_used: p.gamma_flux,
        n_fv: p.n_fv,
        d_used: p.d_used,
        e_ef,
        f_l,
        alpha: p.alpha,
        regime: p.regime,
        boost: p.boost,
        field,
        rho_ee_alt,
        diagnostics,
        provenance: Provenance {
            dataset_hash: ds.hash().to_string(),
            transition: cfg.transition.clone(),
            laser: cfg.laser.clone(),
            material: p.material,
        },
    })
}

/// Runs one scenario; errors carry the scenario name.
pub fn run_scenario(cfg: &ScenarioConfig, ds: &Dataset) -> Result<ExcitationResult> {
    run_inner(cfg, ds).map_err(|e| Error::Scenario {
        scenario: cfg.name(),
        source: Box::new(e),
    })
}

/// Runs scenarios in parallel; results come back in input order.
pub fn run_batch(cfgs: &[ScenarioConfig], ds: &Dataset) -> Vec<Result<ExcitationResult>> {
    cfgs.par_iter().map(|c| run_scenario(c, ds)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub d_foc: Length,
    pub rho_coop: f64,
    pub rho_nocoop: f64,
    pub regime: Regime,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FocalSweep {
    pub points: Vec<SweepPoint>,
    /// d_foc at which L_foc = 1/μ.
    pub crossover: Length,
}

/// ρ_ee with and without collective effects over a set of focal diameters.
///
/// With `constant_photon_number` the full pulse stays in the focus at every
/// diameter; otherwise the peak power scales with the focal area so that the
/// intensity of the reference focus is kept.
pub fn focal_sweep(
    cfg: &ScenarioConfig,
    ds: &Dataset,
    d_foc: &[Length],
    constant_photon_number: bool,
) -> Result<FocalSweep> {
    if cfg.mode == TargetMode::IonBeam {
        return Err(Error::domain(
            "focal sweeps compare collective effects in solid targets",
        ));
    }
    if let Some(d) = d_foc.iter().find(|d| !(d.0 > 0.0 && d.0.is_finite())) {
        return Err(Error::domain(format!(
            "focal diameter {:e} m must be positive",
            d.0
        )));
    }
    let t = ds.transition(&cfg.transition)?;
    let mat = ds.material_for(t)?;
    let reference = lab_laser(cfg, ds)?;
    let points = d_foc
        .par_iter()
        .map(|&d| {
            let mut c = cfg.clone();
            c.d_foc_m = Some(d.0);
            if !constant_photon_number {
                let scale = (d.0 / reference.d_foc.0).powi(2);
                c.p_peak_w = Some(reference.p_peak.0 / cfg.focus_efficiency * scale);
            }
            let coop = run_scenario(
                &ScenarioConfig {
                    cooperative: true,
                    ..c.clone()
                },
                ds,
            )?;
            let plain = run_scenario(
                &ScenarioConfig {
                    cooperative: false,
                    ..c
                },
                ds,
            )?;
            Ok(SweepPoint {
                d_foc: d,
                rho_coop: coop.rho_ee,
                rho_nocoop: plain.rho_ee,
                regime: coop.regime.unwrap_or(Regime::FocalLength),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FocalSweep {
        points,
        crossover: crossover_focal_diameter(t, mat),
    })
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo) || n == 0 {
        return Err(Error::domain(
            "log range needs 0 < lo ≤ hi and at least one step",
        ));
    }
    if n == 1 || lo == hi {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect())
}

/// Back-solves the ion-beam Δγ/γ that reproduces a known population for
/// one ion-beam scenario. The search covers 1e-8 to 1e-1.
pub fn calibrate_ion_dgamma(cfg: &ScenarioConfig, ds: &Dataset, target_rho: f64) -> Result<f64> {
    if cfg.mode != TargetMode::IonBeam {
        return Err(Error::domain(
            "Δγ/γ calibration applies to ion-beam scenarios",
        ));
    }
    crate::doppler::calibrate_dgamma(
        |dg| {
            let c = ScenarioConfig {
                dgamma_rel: Some(dg),
                ..cfg.clone()
            };
            run_scenario(&c, ds).map(|r| r.rho_ee)
        },
        target_rho,
        1e-8,
        1e-1,
    )
}
