//! Recomputation of the published result tables with per-cell ratios.

use super::{run_batch, ScenarioConfig, TargetMode};
use crate::cooperative::{effective_thickness, lamb_moessbauer, resonance_cross_section};
use crate::error::{Error, Result};
use crate::nucdata::Dataset;
use crate::photonics::{focal_length, Seeding};
use crate::units::Length;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const REFERENCE_FILE: &str = "reference.toml";

const LASER_ORDER: [&str; 4] = ["EuropeanXFEL", "LCLS", "SACLA", "XFELO"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableId {
    T2,
    T3,
    T4,
    T5,
}

impl TableId {
    pub const ALL: [TableId; 4] = [TableId::T2, TableId::T3, TableId::T4, TableId::T5];
}

impl std::str::FromStr for TableId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let k = s.trim().to_ascii_lowercase();
        let k = k
            .strip_prefix("table")
            .or_else(|| k.strip_prefix('t'))
            .unwrap_or(&k);
        match k {
            "2" => Ok(TableId::T2),
            "3" => Ok(TableId::T3),
            "4" => Ok(TableId::T4),
            "5" => Ok(TableId::T5),
            _ => Err(Error::Parse {
                context: "table id".into(),
                message: format!("unknown table '{s}', expected T2..T5"),
            }),
        }
    }
}

impl std::fmt::Display for TableId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = match self {
            TableId::T2 => 2,
            TableId::T3 => 3,
            TableId::T4 => 4,
            TableId::T5 => 5,
        };
        write!(f, "T{n}")
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Table2Row {
    #[serde(rename = "f_LM")]
    pub f_lm: f64,
    pub inv_mu_um: f64,
    #[serde(rename = "L_foc_um")]
    pub l_foc_um: f64,
    pub xi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateCell {
    pub rho_ee: f64,
    #[serde(rename = "S")]
    pub s: f64,
}

type RateTable = BTreeMap<String, BTreeMap<String, RateCell>>;

/// Published values the recomputation is compared against.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reference {
    #[serde(default)]
    pub table2: BTreeMap<String, Table2Row>,
    #[serde(default)]
    pub table3: RateTable,
    #[serde(default)]
    pub table4: RateTable,
    #[serde(default)]
    pub table5: RateTable,
}

impl Reference {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            context: "reference".into(),
            message: e.to_string(),
        })
    }

    /// Reads a file, or `reference.toml` inside a directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let mut p: PathBuf = path.as_ref().to_path_buf();
        if p.is_dir() {
            p.push(REFERENCE_FILE);
        }
        let text = std::fs::read_to_string(&p).map_err(|e| Error::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        })?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            context: p.display().to_string(),
            message: e.to_string(),
        })
    }

    fn rates(&self, id: TableId) -> &RateTable {
        match id {
            TableId::T3 => &self.table3,
            TableId::T4 => &self.table4,
            _ => &self.table5,
        }
    }
}

/// One recomputed number next to its published counterpart.
#[derive(Clone, Debug, PartialEq)]
pub struct TableCell {
    pub isotope: String,
    /// Laser id, or "-" for per-isotope quantities.
    pub column: String,
    pub quantity: String,
    pub computed: f64,
    pub published: Option<f64>,
}

impl TableCell {
    /// computed/published, when a published value exists.
    pub fn ratio(&self) -> Option<f64> {
        self.published.map(|p| self.computed / p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableReport {
    pub table: TableId,
    pub cells: Vec<TableCell>,
    /// Isotopes or lasers without a dataset record.
    pub skipped: Vec<String>,
}

impl TableReport {
    pub fn cell(&self, isotope: &str, column: &str, quantity: &str) -> Option<&TableCell> {
        self.cells
            .iter()
            .find(|c| c.isotope == isotope && c.column == column && c.quantity == quantity)
    }
}

/// Isotope ids present in both, ordered by transition energy.
fn isotopes<'a>(
    ids: impl Iterator<Item = &'a String>,
    ds: &Dataset,
    skipped: &mut Vec<String>,
) -> Vec<String> {
    let mut found = Vec::new();
    for id in ids {
        match ds.transitions.get(id) {
            Some(t) => found.push((t.e_gamma.0, id.clone())),
            None => skipped.push(format!("isotope {id}")),
        }
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    found.into_iter().map(|(_, id)| id).collect()
}

pub fn reproduce_table(id: TableId, ds: &Dataset, reference: &Reference) -> Result<TableReport> {
    reproduce_table_with(id, ds, reference, &ScenarioConfig::default())
}

/// As [`reproduce_table`]; numerical options (tolerance, Δγ/γ, envelope and
/// the like) are taken from `template`.
pub fn reproduce_table_with(
    id: TableId,
    ds: &Dataset,
    reference: &Reference,
    template: &ScenarioConfig,
) -> Result<TableReport> {
    let mut skipped = Vec::new();
    let mut cells = Vec::new();
    if id == TableId::T2 {
        let d_foc = Length(template.d_foc_m.unwrap_or(100e-9));
        for iso in isotopes(reference.table2.keys(), ds, &mut skipped) {
            let t = &ds.transitions[&iso];
            let Ok(mat) = ds.material_for(t) else {
                skipped.push(format!("material for {iso}"));
                continue;
            };
            let row = &reference.table2[&iso];
            let f = lamb_moessbauer(t, mat)?;
            let xi = effective_thickness(resonance_cross_section(t, f), mat, mat.inv_mu);
            let l_foc = focal_length(t.wavelength(), d_foc);
            for (q, v, p) in [
                ("f_LM", f, row.f_lm),
                ("inv_mu_um", mat.inv_mu.um(), row.inv_mu_um),
                ("L_foc_um", l_foc.um(), row.l_foc_um),
                ("xi", xi, row.xi),
            ] {
                cells.push(TableCell {
                    isotope: iso.clone(),
                    column: "-".into(),
                    quantity: q.into(),
                    computed: v,
                    published: Some(p),
                });
            }
        }
        return Ok(TableReport {
            table: id,
            cells,
            skipped,
        });
    }

    let table = reference.rates(id);
    let mut lasers: Vec<String> = Vec::new();
    for row in table.values() {
        for l in row.keys() {
            if !lasers.contains(l) {
                lasers.push(l.clone());
            }
        }
    }
    let rank = |l: &String| {
        LASER_ORDER
            .iter()
            .position(|x| x == l)
            .unwrap_or(LASER_ORDER.len())
    };
    lasers.sort_by(|a, b| rank(a).cmp(&rank(b)).then_with(|| a.cmp(b)));
    lasers.retain(|l| {
        let ok = ds.lasers.contains_key(l);
        if !ok {
            skipped.push(format!("laser {l}"));
        }
        ok
    });

    let mut cfgs = Vec::new();
    for iso in isotopes(table.keys(), ds, &mut skipped) {
        for l in &lasers {
            let mut c = template.clone();
            c.transition = iso.clone();
            c.laser = l.clone();
            match id {
                TableId::T3 => {
                    c.mode = TargetMode::SolidState;
                    c.seeding = Seeding::Seeded;
                    c.cooperative = true;
                }
                TableId::T4 => {
                    c.mode = TargetMode::SolidState;
                    c.seeding = Seeding::Unseeded;
                    c.cooperative = true;
                }
                _ => {
                    c.mode = TargetMode::IonBeam;
                    c.seeding = Seeding::Seeded;
                    c.cooperative = false;
                }
            }
            cfgs.push(c);
        }
    }
    for (c, r) in cfgs.iter().zip(run_batch(&cfgs, ds)) {
        let r = r?;
        let published = table.get(&c.transition).and_then(|row| row.get(&c.laser));
        for (q, v, p) in [
            ("rho_ee", r.rho_ee, published.map(|p| p.rho_ee)),
            ("S", r.s, published.map(|p| p.s)),
        ] {
            cells.push(TableCell {
                isotope: c.transition.clone(),
                column: c.laser.clone(),
                quantity: q.into(),
                computed: v,
                published: p,
            });
        }
    }
    Ok(TableReport {
        table: id,
        cells,
        skipped,
    })
}
