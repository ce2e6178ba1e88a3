use super::records::{LaserPulseSpec, NuclearTransition, TargetMaterial};
use crate::error::{Error, Result};
use crate::units::{Energy, Frequency, Length, Power, Temperature, Time};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Environment variable naming the data directory.
pub const DATA_ENV: &str = "NUCLEOQ_DATA";
/// File looked up when a directory is given.
pub const DATASET_FILE: &str = "dataset.toml";

/// Relative Γ_rad(B) vs Γ₀/(1+α) mismatch above which a warning is raised.
const WIDTH_MISMATCH: f64 = 0.20;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransition {
    #[serde(rename = "E_gamma_keV")]
    e_gamma_kev: f64,
    #[serde(rename = "Ig")]
    ig: String,
    #[serde(rename = "Ie")]
    ie: String,
    multipolarity: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    half_life_ns: Option<f64>,
    #[serde(rename = "Gamma0_eV", default, skip_serializing_if = "Option::is_none")]
    gamma0_ev: Option<f64>,
    #[serde(default)]
    alpha: f64,
    #[serde(rename = "B_down", default, skip_serializing_if = "Option::is_none")]
    b_down: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    material: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<String>,
}

fn default_temperature() -> f64 {
    300.0
}
fn default_enrichment() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    #[serde(rename = "N_per_m3")]
    n_per_m3: f64,
    #[serde(rename = "theta_D_K")]
    theta_d_k: f64,
    #[serde(rename = "T_K", default = "default_temperature")]
    t_k: f64,
    mass_u: f64,
    inv_mu_um: f64,
    #[serde(default = "default_enrichment")]
    enrichment: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLaser {
    #[serde(rename = "E_max_eV")]
    e_max_ev: f64,
    #[serde(rename = "BW")]
    bw: f64,
    #[serde(rename = "Tp_fs")]
    tp_fs: f64,
    #[serde(rename = "Tcoh_fs", default, skip_serializing_if = "Option::is_none")]
    tcoh_fs: Option<f64>,
    #[serde(rename = "Ppeak_W")]
    ppeak_w: f64,
    #[serde(rename = "rep_rate_Hz")]
    rep_rate_hz: f64,
    #[serde(
        rename = "rep_rate_table_Hz",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    rep_rate_table_hz: Option<f64>,
    d_foc_nm: f64,
    #[serde(default)]
    seeded: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    transition: BTreeMap<String, RawTransition>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    material: BTreeMap<String, RawMaterial>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    laser: BTreeMap<String, RawLaser>,
}

/// A non-fatal validation finding.
#[derive(Clone, Debug, PartialEq)]
pub struct Warning {
    pub record: String,
    pub message: String,
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "warning: {}: {}", self.record, self.message)
    }
}

/// Validated, immutable collection of records.
#[derive(Clone, Debug)]
pub struct Dataset {
    raw: RawDataset,
    pub transitions: BTreeMap<String, NuclearTransition>,
    pub materials: BTreeMap<String, TargetMaterial>,
    pub lasers: BTreeMap<String, LaserPulseSpec>,
    pub warnings: Vec<Warning>,
    /// Tabulated repetition rates that differ from the default in use.
    pub rep_rate_table: BTreeMap<String, f64>,
    hash: String,
}

impl Dataset {
    pub fn transition(&self, id: &str) -> Result<&NuclearTransition> {
        self.transitions
            .get(id)
            .ok_or_else(|| Error::UnknownRecord {
                kind: "transition",
                name: id.to_string(),
            })
    }

    pub fn material(&self, id: &str) -> Result<&TargetMaterial> {
        self.materials.get(id).ok_or_else(|| Error::UnknownRecord {
            kind: "material",
            name: id.to_string(),
        })
    }

    /// Material attached to a transition.
    pub fn material_for(&self, t: &NuclearTransition) -> Result<&TargetMaterial> {
        match &t.material {
            Some(m) => self.material(m),
            None => Err(Error::MissingData {
                record: t.label.clone(),
                what: "material",
            }),
        }
    }

    pub fn laser(&self, id: &str) -> Result<&LaserPulseSpec> {
        self.lasers.get(id).ok_or_else(|| Error::UnknownRecord {
            kind: "laser",
            name: id.to_string(),
        })
    }

    /// SHA-256 over the canonical serialization, hex encoded.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// Canonical TOML form. Loading it again gives bit-identical numbers.
    pub fn to_toml(&self) -> String {
        toml::to_string(&self.raw).expect("raw records always serialize")
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty() && self.materials.is_empty() && self.lasers.is_empty()
    }
}

fn parse_err(context: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse {
        context: context.to_string(),
        message: e.to_string(),
    }
}

fn build(raw: RawDataset) -> Result<Dataset> {
    let mut warnings = Vec::new();

    let mut materials = BTreeMap::new();
    for (name, m) in &raw.material {
        let mat = TargetMaterial {
            label: name.clone(),
            number_density: m.n_per_m3,
            debye_temperature: Temperature(m.theta_d_k),
            temperature: Temperature(m.t_k),
            atomic_mass: m.mass_u,
            inv_mu: Length::from_um(m.inv_mu_um),
            enrichment: m.enrichment,
        };
        mat.check()?;
        materials.insert(name.clone(), mat);
    }

    let mut transitions = BTreeMap::new();
    for (name, r) in &raw.transition {
        let ctx = format!("transition.{name}");
        let ig =
            r.ig.parse()
                .map_err(|e| parse_err(&format!("{ctx}.Ig"), e))?;
        let ie =
            r.ie.parse()
                .map_err(|e| parse_err(&format!("{ctx}.Ie"), e))?;
        let multipolarity = r
            .multipolarity
            .parse()
            .map_err(|e| parse_err(&format!("{ctx}.multipolarity"), e))?;
        let gamma0 = match (r.gamma0_ev, r.half_life_ns) {
            (Some(g), _) => Some(Energy::from_ev(g)),
            (None, Some(t)) => Some(Energy(
                crate::constants::HBAR * std::f64::consts::LN_2 / Time::from_ns(t).0,
            )),
            (None, None) => None,
        };
        // material defaults to the record of the same name, if any
        let material = match &r.material {
            Some(m) => {
                if !materials.contains_key(m) {
                    return Err(Error::UnknownRecord {
                        kind: "material",
                        name: m.clone(),
                    });
                }
                Some(m.clone())
            }
            None => materials.contains_key(name).then(|| name.clone()),
        };
        let t = NuclearTransition {
            label: name.clone(),
            ig,
            ie,
            e_gamma: Energy::from_kev(r.e_gamma_kev),
            multipolarity,
            b_down: r.b_down,
            gamma0,
            alpha: r.alpha,
            material,
        };
        t.check()?;
        if let (Some(_), Some(g0)) = (t.b_down, t.gamma0) {
            let from_b = super::gamma_rad_from_b(&t)?;
            let from_w = g0 / (1.0 + t.alpha);
            let rel = (from_b.0 - from_w.0).abs() / from_w.0;
            if rel > WIDTH_MISMATCH {
                warnings.push(Warning {
                    record: name.clone(),
                    message: format!(
                        "Γ_rad from B ({:.3e} eV) and Γ₀/(1+α) ({:.3e} eV) differ by {:.0}%",
                        from_b.ev(),
                        from_w.ev(),
                        100.0 * rel
                    ),
                });
            }
        }
        transitions.insert(name.clone(), t);
    }

    let mut lasers = BTreeMap::new();
    let mut rep_rate_table = BTreeMap::new();
    for (name, l) in &raw.laser {
        let t_p = Time::from_fs(l.tp_fs);
        let spec = LaserPulseSpec {
            label: name.clone(),
            e_ph: Energy::from_ev(l.e_max_ev),
            bw: l.bw,
            t_p,
            // unreported coherence time is taken equal to the pulse duration
            t_coh: l.tcoh_fs.map(Time::from_fs).unwrap_or(t_p),
            p_peak: Power(l.ppeak_w),
            rep_rate: Frequency(l.rep_rate_hz),
            d_foc: Length::from_nm(l.d_foc_nm),
            seeded: l.seeded,
        };
        spec.check()?;
        if let Some(r) = l.rep_rate_table_hz {
            rep_rate_table.insert(name.clone(), r);
        }
        lasers.insert(name.clone(), spec);
    }

    let canonical = toml::to_string(&raw).expect("raw records always serialize");
    let hash = hex::encode(Sha256::digest(canonical.as_bytes()));

    Ok(Dataset {
        raw,
        transitions,
        materials,
        lasers,
        warnings,
        rep_rate_table,
        hash,
    })
}

/// Parses and validates a dataset held in memory.
pub fn load_dataset_str(text: &str) -> Result<Dataset> {
    let raw: RawDataset = toml::from_str(text).map_err(|e| parse_err("dataset", e))?;
    build(raw)
}

/// Loads a dataset from a file, or from `dataset.toml` inside a directory.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let mut p: PathBuf = path.as_ref().to_path_buf();
    if p.is_dir() {
        p.push(DATASET_FILE);
    }
    let text = std::fs::read_to_string(&p).map_err(|e| Error::Io {
        path: p.display().to_string(),
        message: e.to_string(),
    })?;
    let raw: RawDataset =
        toml::from_str(&text).map_err(|e| parse_err(&p.display().to_string(), e))?;
    build(raw)
}
