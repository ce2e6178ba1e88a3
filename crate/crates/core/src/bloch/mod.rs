//! Optical Bloch equations over the magnetic sublevels of one nuclear
//! transition, in the frame rotating with the laser.
//!
//! Each coupled (M_g, M_e) pair carries its own coherence; populations are
//! shared between pairs. Relaxation uses the Clebsch–Gordan-weighted partial
//! rates, coherences additionally dephase at γ_dec.

pub mod ode;

use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::nucdata::{MultipolarityKind, NuclearTransition};
use crate::specfun::{clebsch_gordan, double_factorial, AngularMomentum, Projection};
use crate::units::{ElectricField, Energy, Time};
use num_complex::Complex64;
use ode::{dopri5, OdeOptions, OdeStats};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const DEFAULT_TOL: f64 = 1e-10;

/// γ(M_g,M_e) = (2I_e+1)/(2L+1)·⟨I_g M_g, I_e −M_e | L, M_g−M_e⟩²·Γ.
pub fn partial_rate(
    t: &NuclearTransition,
    mg: Projection,
    me: Projection,
    gamma: Energy,
) -> Result<Energy> {
    if !t.ig.admits(mg) || !t.ie.admits(me) {
        return Err(Error::domain(format!(
            "projections M_g = {mg}, M_e = {me} invalid for I_g = {}, I_e = {}",
            t.ig, t.ie
        )));
    }
    let l = t.multipolarity.order_am();
    let m = mg - me;
    if !l.admits(m) {
        return Ok(Energy(0.0));
    }
    let cg = clebsch_gordan(t.ig, mg, t.ie, -me, l, m)?;
    let w = t.ie.multiplicity() as f64 / l.multiplicity() as f64;
    Ok(gamma * (w * cg * cg))
}

/// Coupling per unit field, in J/(V/m). Multiply by ℰ to get
/// ⟨I_e M_e|H_I|I_g M_g⟩.
fn coupling_per_field(
    t: &NuclearTransition,
    mg: Projection,
    me: Projection,
    sigma: i32,
) -> Result<f64> {
    if !t.ig.admits(mg) || !t.ie.admits(me) {
        return Err(Error::domain(format!(
            "projections M_g = {mg}, M_e = {me} invalid"
        )));
    }
    let lord = t.multipolarity.order;
    let l = t.multipolarity.order_am();
    let ms = Projection(-2 * sigma);
    if !l.admits(ms) {
        return Ok(0.0);
    }
    let cg = clebsch_gordan(t.ie, me, t.ig, -mg, l, ms)?;
    if cg == 0.0 {
        return Ok(0.0);
    }
    // magnetic multipoles couple to the B field, ℰ/c
    let field = match t.multipolarity.kind {
        MultipolarityKind::Electric => 1.0,
        MultipolarityKind::Magnetic => 1.0 / SPEED_OF_LIGHT,
    };
    let k = t.wavenumber();
    let pre = (2.0 * std::f64::consts::PI).sqrt()
        * ((lord + 1) as f64 / lord as f64).sqrt()
        * k.powi(lord as i32 - 1)
        / double_factorial(2 * lord + 1) as f64;
    Ok(field * pre * cg * (t.ig.multiplicity() as f64).sqrt() * t.b_up_si()?.sqrt())
}

/// ⟨I_e M_e|H_I|I_g M_g⟩ for a field amplitude ℰ and photon helicity σ.
pub fn coupling_element(
    t: &NuclearTransition,
    e_ef: ElectricField,
    mg: Projection,
    me: Projection,
    sigma: i32,
) -> Result<Energy> {
    if e_ef.0 < 0.0 {
        return Err(Error::domain("field amplitude must be non-negative"));
    }
    if e_ef.0 == 0.0 {
        return Ok(Energy(0.0));
    }
    Ok(Energy(coupling_per_field(t, mg, me, sigma)? * e_ef.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SublevelPair {
    pub mg: Projection,
    pub me: Projection,
    /// Partial decay rate, as an energy.
    pub rate: Energy,
    /// Coupling per unit field [J/(V/m)].
    pub coupling: f64,
}

/// Pulse shape at fixed fluence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    /// Constant ℰ over T_p.
    #[default]
    Rectangular,
    /// Gaussian intensity with FWHM T_p, same fluence, sampled over 3T_p.
    Gaussian,
}

/// Relaxation rate of the coherence ρ_ge(M_g, M_e), before γ_dec is added.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoherenceDamping {
    /// Half the total decay rate of M_e. Keeps ρ positive.
    #[default]
    Total,
    /// Half the partial rate γ(M_g, M_e) of the driven branch only. Can
    /// drive populations negative once ΓT_p/ħ is of order one.
    Partial,
}

#[derive(Clone, Debug)]
pub struct SublevelSystem {
    pub transition: NuclearTransition,
    pub ground: Vec<Projection>,
    pub excited: Vec<Projection>,
    pub pairs: Vec<SublevelPair>,
    pub detuning: Energy,
    pub gamma_dec: Energy,
    pub polarization: i32,
    /// Total width the partial rates are built from.
    pub gamma: Energy,
    pub damping: CoherenceDamping,
}

impl SublevelSystem {
    /// Builds all sublevel pairs. `gamma` feeds the partial rates, so an
    /// enhanced width scales every rate by the same factor.
    pub fn new(
        t: &NuclearTransition,
        gamma: Energy,
        detuning: Energy,
        gamma_dec: Energy,
        polarization: i32,
    ) -> Result<Self> {
        if polarization != 1 && polarization != -1 {
            return Err(Error::domain("photon helicity must be ±1"));
        }
        if gamma.0 < 0.0 || gamma_dec.0 < 0.0 {
            return Err(Error::domain("rates must be non-negative"));
        }
        let ground: Vec<_> = t.ig.projections().collect();
        let excited: Vec<_> = t.ie.projections().collect();
        let mut pairs = Vec::new();
        for &mg in &ground {
            for &me in &excited {
                let rate = partial_rate(t, mg, me, gamma)?;
                let coupling = coupling_per_field(t, mg, me, polarization)?;
                if rate.0 != 0.0 || coupling != 0.0 {
                    pairs.push(SublevelPair {
                        mg,
                        me,
                        rate,
                        coupling,
                    });
                }
            }
        }
        Ok(SublevelSystem {
            transition: t.clone(),
            ground,
            excited,
            pairs,
            detuning,
            gamma_dec,
            polarization,
            gamma,
            damping: CoherenceDamping::default(),
        })
    }

    pub fn with_damping(mut self, damping: CoherenceDamping) -> Self {
        self.damping = damping;
        self
    }

    /// Σ_{M_g} γ(M_g, M_e) for each excited sublevel.
    pub fn decay_sums(&self) -> Vec<(Projection, Energy)> {
        self.excited
            .iter()
            .map(|&me| {
                let s = self
                    .pairs
                    .iter()
                    .filter(|p| p.me == me)
                    .map(|p| p.rate.0)
                    .sum();
                (me, Energy(s))
            })
            .collect()
    }

    fn coupled(&self) -> Vec<usize> {
        (0..self.pairs.len())
            .filter(|&i| self.pairs[i].coupling != 0.0)
            .collect()
    }

    /// Layout of the flat state vector used by the integrator.
    pub fn layout(&self) -> StateLayout {
        let coupled = self.coupled();
        StateLayout {
            ng: self.ground.len(),
            ne: self.excited.len(),
            coupled,
        }
    }

    /// Ground population spread evenly, no excitation, no coherence.
    pub fn initial_vector(&self) -> Vec<f64> {
        let l = self.layout();
        let mut y = vec![0.0; l.len()];
        let p = 1.0 / l.ng as f64;
        y[..l.ng].iter_mut().for_each(|v| *v = p);
        y
    }

    /// Right-hand side in time scaled by `t_scale` (seconds per unit).
    /// `field(s)` is the amplitude at scaled time s.
    pub fn rhs<'a>(
        &'a self,
        t_scale: f64,
        field: impl Fn(f64) -> f64 + 'a,
    ) -> impl Fn(f64, &[f64], &mut [f64]) + 'a {
        let l = self.layout();
        let gi: BTreeMap<Projection, usize> = self
            .ground
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i))
            .collect();
        let ei: BTreeMap<Projection, usize> = self
            .excited
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, l.ng + i))
            .collect();
        // (pair index, ground slot, excited slot)
        let relax: Vec<(f64, usize, usize)> = self
            .pairs
            .iter()
            .map(|p| (p.rate.0 / HBAR * t_scale, gi[&p.mg], ei[&p.me]))
            .collect();
        let totals: BTreeMap<Projection, f64> = self
            .decay_sums()
            .into_iter()
            .map(|(m, g)| (m, g.0))
            .collect();
        let coh: Vec<(f64, f64, usize, usize)> = l
            .coupled
            .iter()
            .map(|&i| {
                let p = &self.pairs[i];
                let rate = match self.damping {
                    CoherenceDamping::Total => totals[&p.me],
                    CoherenceDamping::Partial => p.rate.0,
                };
                let damp = (0.5 * rate + self.gamma_dec.0) / HBAR * t_scale;
                (p.coupling / HBAR * t_scale, damp, gi[&p.mg], ei[&p.me])
            })
            .collect();
        let det = self.detuning.0 / HBAR * t_scale;
        let base = l.ng + l.ne;
        move |s, y, dy| {
            dy.iter_mut().for_each(|v| *v = 0.0);
            for &(g, gs, es) in &relax {
                let flow = g * y[es];
                dy[gs] += flow;
                dy[es] -= flow;
            }
            let e = field(s);
            for (k, &(v, damp, gs, es)) in coh.iter().enumerate() {
                let (re, im) = (y[base + 2 * k], y[base + 2 * k + 1]);
                let h = v * e;
                // (2/ħ) Im(h ρ_ge) moves population from g to e
                let flow = 2.0 * h * im;
                dy[gs] -= flow;
                dy[es] += flow;
                // dρ_ge = iΔρ + i h (ρ_gg − ρ_ee) − damp ρ
                let inv = y[gs] - y[es];
                dy[base + 2 * k] = -det * im - damp * re;
                dy[base + 2 * k + 1] = det * re + h * inv - damp * im;
            }
        }
    }

    pub fn unflatten(&self, y: &[f64], time: Time) -> DensityMatrixState {
        let l = self.layout();
        let rho_gg = self
            .ground
            .iter()
            .zip(&y[..l.ng])
            .map(|(&m, &v)| (m, v))
            .collect();
        let rho_ee = self
            .excited
            .iter()
            .zip(&y[l.ng..l.ng + l.ne])
            .map(|(&m, &v)| (m, v))
            .collect();
        let base = l.ng + l.ne;
        let rho_ge = l
            .coupled
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let p = &self.pairs[i];
                (
                    (p.mg, p.me),
                    Complex64::new(y[base + 2 * k], y[base + 2 * k + 1]),
                )
            })
            .collect();
        DensityMatrixState {
            rho_gg,
            rho_ee,
            rho_ge,
            time,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateLayout {
    pub ng: usize,
    pub ne: usize,
    /// Pair indices that carry a coherence, in storage order.
    pub coupled: Vec<usize>,
}

impl StateLayout {
    pub fn len(&self) -> usize {
        self.ng + self.ne + 2 * self.coupled.len()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrixState {
    pub rho_gg: BTreeMap<Projection, f64>,
    pub rho_ee: BTreeMap<Projection, f64>,
    pub rho_ge: BTreeMap<(Projection, Projection), Complex64>,
    pub time: Time,
}

impl DensityMatrixState {
    pub fn trace(&self) -> f64 {
        self.rho_gg.values().sum::<f64>() + self.rho_ee.values().sum::<f64>()
    }
}

/// ρ_ee = Σ_{M_e} ρ_ee(M_e).
pub fn total_excited_population(state: &DensityMatrixState) -> f64 {
    state.rho_ee.values().sum()
}

/// What the integrator saw along the way.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub stats: OdeStats,
    /// max |Tr ρ − 1| over accepted steps
    pub max_trace_error: f64,
    /// smallest population seen
    pub min_population: f64,
}

/// Evolves the system from the unexcited state through one pulse.
pub fn evolve(
    sys: &SublevelSystem,
    e_ef: ElectricField,
    duration: Time,
    tol: f64,
) -> Result<DensityMatrixState> {
    evolve_with(sys, e_ef, duration, tol, Envelope::Rectangular).map(|(s, _)| s)
}

type BoxedRhs<'a> = Box<dyn Fn(f64, &[f64], &mut [f64]) + 'a>;

/// As [`evolve`], with a chosen envelope and integration diagnostics.
pub fn evolve_with(
    sys: &SublevelSystem,
    e_ef: ElectricField,
    duration: Time,
    tol: f64,
    envelope: Envelope,
) -> Result<(DensityMatrixState, Diagnostics)> {
    if !(e_ef.0 >= 0.0 && e_ef.0.is_finite()) {
        return Err(Error::domain(
            "field amplitude must be finite and non-negative",
        ));
    }
    if !(duration.0 >= 0.0) || !(tol > 0.0) {
        return Err(Error::domain("duration must be ≥ 0 and tol > 0"));
    }
    let mut y = sys.initial_vector();
    let nl = sys.ground.len() + sys.excited.len();
    let mut diag = Diagnostics {
        min_population: f64::INFINITY,
        ..Default::default()
    };
    let e0 = e_ef.0;
    let (span, rhs): (f64, BoxedRhs) = match envelope {
        Envelope::Rectangular => (1.0, Box::new(sys.rhs(duration.0, move |_| e0))),
        Envelope::Gaussian => {
            // I(s) = I₀ exp(−4 ln2 (s−1.5)²), ∫I = I_ef T_p ⇒ I₀ = I_ef/√(π/(4 ln2))
            let a = 4.0 * std::f64::consts::LN_2;
            let peak = e0 / (std::f64::consts::PI / a).sqrt().sqrt();
            let f = move |s: f64| peak * (-0.5 * a * (s - 1.5) * (s - 1.5)).exp();
            (3.0, Box::new(sys.rhs(duration.0, f)))
        }
    };
    let opts = OdeOptions {
        rtol: tol,
        ..Default::default()
    };
    let stats = dopri5(rhs, 0.0, &mut y, span, &opts, |_, y| {
        let tr: f64 = y[..nl].iter().sum();
        diag.max_trace_error = diag.max_trace_error.max((tr - 1.0).abs());
        let mn = y[..nl].iter().copied().fold(f64::INFINITY, f64::min);
        diag.min_population = diag.min_population.min(mn);
    })
    .map_err(|e| match e {
        // the integrator runs in units of the pulse duration
        Error::Stiff { t, h } => Error::Stiff {
            t: t * duration.0,
            h: h * duration.0,
        },
        e => e,
    })?;
    diag.stats = stats;
    Ok((sys.unflatten(&y, Time(duration.0 * span)), diag))
}

/// Spin helper for tests and callers that construct bare systems.
pub fn spin(twice: u32) -> AngularMomentum {
    AngularMomentum::from_twice(twice)
}
