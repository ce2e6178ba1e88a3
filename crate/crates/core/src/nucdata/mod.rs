//! Nuclei, target materials and laser presets, plus the curated data file.

mod dataset;
mod records;

pub use dataset::{load_dataset, load_dataset_str, Dataset, Warning, DATASET_FILE, DATA_ENV};
pub use records::{
    gamma_rad_from_b, LaserPulseSpec, Multipolarity, MultipolarityKind, NuclearTransition,
    TargetMaterial,
};

use crate::units::Energy;

/// Γ₀ = Γ_rad(1+α) when only B is known, otherwise the stored width.
pub fn total_width(t: &NuclearTransition) -> crate::Result<Energy> {
    match t.gamma0 {
        Some(g) => Ok(g),
        None => Ok(gamma_rad_from_b(t)? * (1.0 + t.alpha)),
    }
}

/// Radiative width, from B when present, else Γ₀/(1+α).
pub fn radiative_width(t: &NuclearTransition) -> crate::Result<Energy> {
    if t.b_down.is_some() {
        gamma_rad_from_b(t)
    } else {
        Ok(total_width(t)? / (1.0 + t.alpha))
    }
}
