//! `nucleoq`: scenario runs, NFS curves, focal sweeps, table reproduction
//! and dataset checks.

mod jobs;
mod output;

use clap::{Parser, Subcommand};
use jobs::{Command, JobFile, NfsJob, ReproduceJob, SweepJob};
use nucleoq::cooperative::{nfs_intensity_closed, nfs_intensity_early};
use nucleoq::nucdata::{load_dataset, DATASET_FILE, DATA_ENV};
use nucleoq::pipeline::{
    focal_sweep, log_space, reproduce_table_with, run_batch, Reference, TableId, REFERENCE_FILE,
};
use nucleoq::units::Length;
use nucleoq::{Dataset, Error, Result, ScenarioConfig, TargetMode};
use output::{num, RunManifest, Table};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "nucleoq",
    version,
    about = "Nuclear excitation by coherent x-ray pulses"
)]
struct Cli {
    /// Directory holding dataset.toml and reference.toml
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    /// Directory holding preset job files
    #[arg(long, global = true)]
    presets: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run every scenario in a job file and write one CSV row each
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Forward-scattering intensity after a short pulse
    Nfs {
        #[arg(long)]
        xi: f64,
        #[arg(long, default_value_t = 1.0)]
        tau_max: f64,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Excitation with and without collective effects over focal diameters
    Sweep {
        #[arg(long)]
        isotope: String,
        #[arg(long)]
        laser: String,
        /// Smallest focal diameter in nm
        #[arg(long, default_value_t = 7.0)]
        dfoc_min: f64,
        /// Largest focal diameter in nm
        #[arg(long, default_value_t = 100.0)]
        dfoc_max: f64,
        #[arg(long, default_value_t = 40)]
        steps: usize,
        /// Scale the pulse power with the focal area instead of keeping
        /// the photon number
        #[arg(long)]
        constant_intensity: bool,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Check the dataset and print its warnings
    Validate,
    /// Recompute a published table next to the reference values
    Reproduce {
        #[arg(long)]
        table: String,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Run a named preset, or all of them into a directory
    Preset {
        name: String,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

/// Compiled-in fallback next to the workspace root.
fn builtin(dir: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(dir)
}

fn resolve_data(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(DATA_ENV) {
        return PathBuf::from(p);
    }
    let local = PathBuf::from("data");
    if local.join(DATASET_FILE).is_file() {
        return local;
    }
    builtin("data")
}

fn resolve_presets(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    let local = PathBuf::from("presets");
    if local.is_dir() {
        return local;
    }
    builtin("presets")
}

struct Ctx {
    data: PathBuf,
    presets: PathBuf,
}

impl Ctx {
    fn dataset(&self) -> Result<Dataset> {
        let ds = load_dataset(&self.data)?;
        for w in &ds.warnings {
            eprintln!("{w}");
        }
        Ok(ds)
    }

    fn reference(&self) -> Result<Reference> {
        let dir = if self.data.is_dir() {
            self.data.clone()
        } else {
            self.data
                .parent()
                .map(Path::to_path_buf)
                .unwrap_or_default()
        };
        Reference::load(dir.join(REFERENCE_FILE))
    }
}

fn run_job(ctx: &Ctx, job: &JobFile, context: &str, out: &Path) -> Result<()> {
    if let Some(d) = &job.description {
        eprintln!("{d}");
    }
    match job.command {
        Command::Run => {
            let ds = ctx.dataset()?;
            run_scenarios(&ds, &job.scenarios(context)?, out)
        }
        Command::Nfs => {
            let n = job.nfs.as_ref().ok_or_else(|| missing(context, "nfs"))?;
            nfs(n, out)
        }
        Command::Sweep => {
            let s = job
                .sweep
                .as_ref()
                .ok_or_else(|| missing(context, "sweep"))?;
            let ds = ctx.dataset()?;
            sweep(&ds, s, &job.template(context)?, out)
        }
        Command::Reproduce => {
            let r = job
                .reproduce
                .as_ref()
                .ok_or_else(|| missing(context, "reproduce"))?;
            let ds = ctx.dataset()?;
            reproduce(&ds, &ctx.reference()?, r, &job.template(context)?, out)
        }
    }
}

fn missing(context: &str, section: &str) -> Error {
    Error::Parse {
        context: context.into(),
        message: format!("missing [{section}] section"),
    }
}

fn run_scenarios(ds: &Dataset, cfgs: &[ScenarioConfig], out: &Path) -> Result<()> {
    let mut table = Table::new(&[
        "isotope",
        "laser",
        "mode",
        "cooperative",
        "xi",
        "Gamma_eV",
        "E_ef_V_per_m",
        "rho_ee",
        "S_per_s",
    ]);
    // Any failure aborts the whole run so that no partial table is written.
    for r in run_batch(cfgs, ds) {
        let r = r?;
        table.push(vec![
            r.config.transition.clone(),
            r.config.laser.clone(),
            r.config.mode.to_string(),
            // ion beams never use collective effects
            (r.config.cooperative && r.config.mode == TargetMode::SolidState).to_string(),
            num(r.xi),
            num(r.gamma_used.ev()),
            num(r.e_ef.0),
            num(r.rho_ee),
            num(r.s),
        ]);
    }
    let manifest = RunManifest::new("run", ds.hash(), cfgs);
    output::write(out, &table, &manifest)
}

fn nfs(job: &NfsJob, out: &Path) -> Result<()> {
    if !(job.xi > 0.0 && job.xi.is_finite()) {
        return Err(Error::Domain(format!(
            "effective thickness ξ = {} must be positive",
            job.xi
        )));
    }
    if !(job.tau_max > 0.0 && job.tau_max.is_finite()) {
        return Err(Error::Domain(format!(
            "τ_max = {} must be positive",
            job.tau_max
        )));
    }
    if job.samples < 2 {
        return Err(Error::Domain("at least two samples are needed".into()));
    }
    let xi = job.xi;
    let mut table = Table::new(&["tau", "I_closed", "I_exp_decay", "I_enhanced"]);
    for i in 0..job.samples {
        let tau = job.tau_max * i as f64 / (job.samples - 1) as f64;
        table.push(vec![
            num(tau),
            num(nfs_intensity_closed(xi, tau)?),
            // single-nucleus decay on the same ξ² scale
            num(xi * xi * (-tau).exp()),
            num(nfs_intensity_early(xi, tau)?),
        ]);
    }
    let manifest = RunManifest::new("nfs", "", job);
    output::write(out, &table, &manifest)
}

fn sweep(ds: &Dataset, job: &SweepJob, template: &ScenarioConfig, out: &Path) -> Result<()> {
    let nm = log_space(job.dfoc_min_nm, job.dfoc_max_nm, job.steps)?;
    let d: Vec<Length> = nm.iter().map(|&x| Length::from_nm(x)).collect();
    let cfg = ScenarioConfig {
        transition: job.isotope.clone(),
        laser: job.laser.clone(),
        ..template.clone()
    };
    let res =
        focal_sweep(&cfg, ds, &d, job.constant_photon_number).map_err(|e| Error::Scenario {
            scenario: cfg.name(),
            source: Box::new(e),
        })?;
    let mut table = Table::new(&["d_foc_m", "rho_ee_coop", "rho_ee_nocoop", "regime"]);
    for p in &res.points {
        table.push(vec![
            num(p.d_foc.0),
            num(p.rho_coop),
            num(p.rho_nocoop),
            p.regime.to_string(),
        ]);
    }
    let mut manifest =
        RunManifest::new("sweep", ds.hash(), json!({ "sweep": job, "template": cfg }));
    manifest.notes = json!({ "crossover_d_foc_m": res.crossover.0 });
    eprintln!("crossover at d_foc = {:.1} nm", res.crossover.nm());
    output::write(out, &table, &manifest)
}

fn reproduce(
    ds: &Dataset,
    reference: &Reference,
    job: &ReproduceJob,
    template: &ScenarioConfig,
    out: &Path,
) -> Result<()> {
    let id: TableId = job.table.parse()?;
    let report = reproduce_table_with(id, ds, reference, template)?;
    for s in &report.skipped {
        eprintln!("skipped: {s}");
    }
    let mut table = Table::new(&[
        "table", "isotope", "column", "quantity", "computed", "published", "ratio",
    ]);
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    for c in &report.cells {
        table.push(vec![
            id.to_string(),
            c.isotope.clone(),
            c.column.clone(),
            c.quantity.clone(),
            num(c.computed),
            opt(c.published),
            opt(c.ratio()),
        ]);
    }
    let manifest = RunManifest::new(
        "reproduce",
        ds.hash(),
        json!({ "table": id.to_string(), "template": template }),
    );
    output::write(out, &table, &manifest)
}

fn preset_names(dir: &Path) -> Result<Vec<String>> {
    let rd = std::fs::read_dir(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut names: Vec<String> = rd
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .filter_map(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .collect();
    names.sort();
    Ok(names)
}

fn preset(ctx: &Ctx, name: &str, out: &Path) -> Result<()> {
    let load = |n: &str| {
        let path = ctx.presets.join(format!("{n}.toml"));
        if !path.is_file() {
            return Err(Error::UnknownRecord {
                kind: "preset",
                name: n.to_string(),
            });
        }
        JobFile::load(&path).map(|j| (j, path.display().to_string()))
    };
    if name != "all" {
        let (job, context) = load(name)?;
        return run_job(ctx, &job, &context, out);
    }
    if out.as_os_str() == "-" {
        return Err(Error::Domain("`preset all` needs --out <directory>".into()));
    }
    for n in preset_names(&ctx.presets)? {
        let (job, context) = load(&n)?;
        let start = std::time::Instant::now();
        run_job(ctx, &job, &context, &out.join(format!("{n}.csv")))?;
        eprintln!("{n}: {:.2} s", start.elapsed().as_secs_f64());
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    let ctx = Ctx {
        data: resolve_data(cli.data.as_deref()),
        presets: resolve_presets(cli.presets.as_deref()),
    };
    match cli.cmd {
        Cmd::Run { scenario, out } => {
            let job = JobFile::load(&scenario)?;
            run_job(&ctx, &job, &scenario.display().to_string(), &out)
        }
        Cmd::Nfs {
            xi,
            tau_max,
            samples,
            out,
        } => nfs(
            &NfsJob {
                xi,
                tau_max,
                samples,
            },
            &out,
        ),
        Cmd::Sweep {
            isotope,
            laser,
            dfoc_min,
            dfoc_max,
            steps,
            constant_intensity,
            out,
        } => {
            let ds = ctx.dataset()?;
            let job = SweepJob {
                isotope,
                laser,
                dfoc_min_nm: dfoc_min,
                dfoc_max_nm: dfoc_max,
                steps,
                constant_photon_number: !constant_intensity,
            };
            sweep(&ds, &job, &ScenarioConfig::default(), &out)
        }
        Cmd::Validate => {
            let ds = ctx.dataset()?;
            println!(
                "{} transitions, {} materials, {} lasers, {} warnings; sha256:{}",
                ds.transitions.len(),
                ds.materials.len(),
                ds.lasers.len(),
                ds.warnings.len(),
                ds.hash()
            );
            Ok(())
        }
        Cmd::Reproduce { table, out } => {
            let ds = ctx.dataset()?;
            reproduce(
                &ds,
                &ctx.reference()?,
                &ReproduceJob { table },
                &ScenarioConfig::default(),
                &out,
            )
        }
        Cmd::Preset { name, out } => preset(&ctx, &name, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_parse() { 1 } else { 2 })
        }
    }
}
