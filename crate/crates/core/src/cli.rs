//! Command-line front end: presets, configuration layering and result files.
//!
//! Values are layered preset < config file < flags. The seed additionally
//! falls back to `CDMASIM_SEED` when neither the file nor a flag sets it.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::detect::{DetectorKind, GreyRegion, Modulation};
use crate::signal::PowerProfile;
use crate::sim::{BerRecord, ExperimentConfig, Strategy, Sweep};
use crate::{Error, Result};

/// Environment variable consulted for the master seed.
pub const SEED_ENV: &str = "CDMASIM_SEED";

pub const CSV_HEADER: &str = "sweep,detector,strategy,errors,bits,ber,sinr_evals";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Detector comparison versus SNR, proposed greedy selection.
    #[value(name = "fig4-desk")]
    Fig4Desk,
    /// Selection strategy comparison versus SNR with GL-PIC.
    #[value(name = "fig5a-desk")]
    Fig5aDesk,
    /// Selection strategy comparison versus user count at 15 dB.
    #[value(name = "fig5b-desk")]
    Fig5bDesk,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig4Desk => "fig4-desk",
            Preset::Fig5aDesk => "fig5a-desk",
            Preset::Fig5bDesk => "fig5b-desk",
        }
    }

    /// Desk-scale configuration: 30 packets of 200 symbols per point.
    pub fn config(self) -> ExperimentConfig {
        let base = ExperimentConfig {
            users: 10,
            relays: 6,
            chips: 16,
            paths: 3,
            profile_db: PowerProfile::three_path(),
            symbols: 200,
            trials: 30,
            sweep: Sweep::Snr {
                snr_db: vec![0.0, 4.0, 8.0, 12.0, 16.0],
            },
            detectors: DetectorKind::ALL.to_vec(),
            relay_detector: None,
            strategies: vec![Strategy::Proposed],
            detector: Default::default(),
            seed: 1,
        };
        match self {
            Preset::Fig4Desk => base,
            Preset::Fig5aDesk => ExperimentConfig {
                detectors: vec![DetectorKind::GlPic],
                strategies: Strategy::ALL.to_vec(),
                ..base
            },
            Preset::Fig5bDesk => ExperimentConfig {
                detectors: vec![DetectorKind::GlPic],
                strategies: Strategy::ALL.to_vec(),
                sweep: Sweep::Users {
                    snr_db: 15.0,
                    users: vec![2, 4, 6, 8, 10],
                },
                ..base
            },
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        <Preset as ValueEnum>::from_str(s, true)
            .map_err(|_| Error::config("preset", format!("unknown preset `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plot,
    All,
}

/// Cooperative DS-CDMA uplink BER simulator.
#[derive(Debug, Clone, Parser)]
#[command(name = "cdmasim", version, about)]
pub struct Cli {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// `key = value` file; keys are the long flag names.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Replays the configuration stored in a run manifest.
    #[arg(long, conflicts_with_all = ["preset", "config"])]
    pub manifest: Option<PathBuf>,
    /// One value fixes K; several sweep K at a single SNR.
    #[arg(long, value_delimiter = ',')]
    pub users: Option<Vec<usize>>,
    #[arg(long)]
    pub relays: Option<usize>,
    #[arg(long)]
    pub chips: Option<usize>,
    #[arg(long, visible_alias = "lp")]
    pub paths: Option<usize>,
    /// Path powers in dB, one per path.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub profile: Option<Vec<f64>>,
    /// SNR points in dB.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub snr: Option<Vec<f64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub symbols: Option<usize>,
    /// Destination detectors: rake, sic, pic, glpic.
    #[arg(long, value_delimiter = ',')]
    pub detector: Option<Vec<DetectorKind>>,
    /// Relay detector; defaults to the destination detector.
    #[arg(long)]
    pub relay_detector: Option<DetectorKind>,
    /// Selection strategies: none, standard, proposed, exhaustive.
    #[arg(long, value_delimiter = ',')]
    pub strategy: Option<Vec<Strategy>>,
    #[arg(long)]
    pub dth: Option<f64>,
    #[arg(long)]
    pub nq: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub modulation: Option<Modulation>,
    #[arg(long, value_enum)]
    pub grey_region: Option<GreyRegionArg>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GreyRegionArg {
    BoundaryBand,
    NearestPoint,
}

impl From<GreyRegionArg> for GreyRegion {
    fn from(g: GreyRegionArg) -> Self {
        match g {
            GreyRegionArg::BoundaryBand => GreyRegion::BoundaryBand,
            GreyRegionArg::NearestPoint => GreyRegion::NearestPoint,
        }
    }
}

/// One layer of optional settings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub users: Option<Vec<usize>>,
    pub relays: Option<usize>,
    pub chips: Option<usize>,
    pub paths: Option<usize>,
    pub profile: Option<Vec<f64>>,
    pub snr: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub symbols: Option<usize>,
    pub detectors: Option<Vec<DetectorKind>>,
    pub relay_detector: Option<DetectorKind>,
    pub strategies: Option<Vec<Strategy>>,
    pub dth: Option<f64>,
    pub nq: Option<usize>,
    pub iters: Option<usize>,
    pub modulation: Option<Modulation>,
    pub grey_region: Option<GreyRegion>,
    pub seed: Option<u64>,
}

impl Overrides {
    pub fn from_cli(cli: &Cli) -> Self {
        Self {
            preset: cli.preset,
            users: cli.users.clone(),
            relays: cli.relays,
            chips: cli.chips,
            paths: cli.paths,
            profile: cli.profile.clone(),
            snr: cli.snr.clone(),
            trials: cli.trials,
            symbols: cli.symbols,
            detectors: cli.detector.clone(),
            relay_detector: cli.relay_detector,
            strategies: cli.strategy.clone(),
            dth: cli.dth,
            nq: cli.nq,
            iters: cli.iters,
            modulation: cli.modulation,
            grey_region: cli.grey_region.map(Into::into),
            seed: cli.seed,
        }
    }

    /// Parses `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut o = Overrides::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::config(
                    "config",
                    format!("line {}: expected `key = value`, got `{line}`", n + 1),
                ));
            };
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            match key.as_str() {
                "preset" => o.preset = Some(value.parse()?),
                "users" => o.users = Some(list(value, "users")?),
                "relays" => o.relays = Some(scalar(value, "relays")?),
                "chips" => o.chips = Some(scalar(value, "chips")?),
                "paths" | "lp" => o.paths = Some(scalar(value, "paths")?),
                "profile" => o.profile = Some(list(value, "profile")?),
                "snr" => o.snr = Some(list(value, "snr")?),
                "trials" => o.trials = Some(scalar(value, "trials")?),
                "symbols" => o.symbols = Some(scalar(value, "symbols")?),
                "detector" => o.detectors = Some(list(value, "detector")?),
                "relay-detector" => o.relay_detector = Some(value.parse()?),
                "strategy" => o.strategies = Some(list(value, "strategy")?),
                "dth" => o.dth = Some(scalar(value, "dth")?),
                "nq" => o.nq = Some(scalar(value, "nq")?),
                "iters" => o.iters = Some(scalar(value, "iters")?),
                "modulation" => o.modulation = Some(value.parse()?),
                "grey-region" => {
                    o.grey_region = Some(match value {
                        "boundary-band" => GreyRegion::BoundaryBand,
                        "nearest-point" => GreyRegion::NearestPoint,
                        other => {
                            return Err(Error::config(
                                "grey-region",
                                format!("unknown grey region `{other}`"),
                            ))
                        }
                    })
                }
                "seed" => o.seed = Some(scalar(value, "seed")?),
                other => {
                    return Err(Error::config(
                        "config",
                        format!("line {}: unknown key `{other}`", n + 1),
                    ))
                }
            }
        }
        Ok(o)
    }

    pub fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        set(&mut cfg.relays, self.relays);
        set(&mut cfg.chips, self.chips);
        set(&mut cfg.trials, self.trials);
        set(&mut cfg.symbols, self.symbols);
        set(&mut cfg.seed, self.seed);
        set(&mut cfg.detector.d_th, self.dth);
        set(&mut cfg.detector.n_q, self.nq);
        set(&mut cfg.detector.pic_iterations, self.iters);
        if let Some(m) = self.modulation {
            cfg.detector.constellation = m.into();
        }
        set(&mut cfg.detector.grey_region, self.grey_region);
        if let Some(d) = &self.detectors {
            cfg.detectors = dedup(d);
        }
        if self.relay_detector.is_some() {
            cfg.relay_detector = self.relay_detector;
        }
        if let Some(s) = &self.strategies {
            cfg.strategies = dedup(s);
        }
        if let Some(lp) = self.paths {
            cfg.paths = lp;
            if self.profile.is_none() && cfg.profile_db.len() != lp {
                cfg.profile_db = PowerProfile((0..lp).map(|i| -3.0 * i as f64).collect());
            }
        }
        if let Some(p) = &self.profile {
            cfg.profile_db = PowerProfile(p.clone());
        }

        let (mut snrs, mut users_sweep) = match &cfg.sweep {
            Sweep::Snr { snr_db } => (snr_db.clone(), None),
            Sweep::Users { snr_db, users } => (vec![*snr_db], Some(users.clone())),
        };
        if let Some(s) = &self.snr {
            snrs = s.clone();
        }
        if let Some(u) = &self.users {
            if u.len() == 1 {
                cfg.users = u[0];
                users_sweep = None;
            } else {
                users_sweep = Some(u.clone());
            }
        }
        cfg.sweep = match users_sweep {
            None => Sweep::Snr { snr_db: snrs },
            Some(users) => {
                if snrs.len() != 1 {
                    return Err(Error::config(
                        "snr",
                        "a sweep over users runs at exactly one SNR",
                    ));
                }
                if let Some(&max) = users.iter().max() {
                    cfg.users = max;
                }
                Sweep::Users {
                    snr_db: snrs[0],
                    users,
                }
            }
        };
        Ok(())
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn dedup<T: PartialEq + Copy>(items: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(items.len());
    for &x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn scalar<T: std::str::FromStr>(value: &str, field: &'static str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(field, format!("cannot parse `{value}`")))
}

fn list<T: std::str::FromStr>(value: &str, field: &'static str) -> Result<Vec<T>> {
    let items = value
        .split(',')
        .map(|v| scalar(v.trim(), field))
        .collect::<Result<Vec<T>>>()?;
    if items.is_empty() {
        return Err(Error::config(field, "empty list"));
    }
    Ok(items)
}

/// Resolved configuration and the preset it started from.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub preset: Option<Preset>,
}

/// Layers preset, config file, seed environment and flags, then validates.
pub fn parse_config(cli: &Cli, env_seed: Option<&str>) -> Result<Resolved> {
    let file = match &cli.config {
        Some(path) => Overrides::parse_file(&read_text(path)?)?,
        None => Overrides::default(),
    };
    let flags = Overrides::from_cli(cli);
    let preset = flags.preset.or(file.preset);
    let mut config = preset.map(Preset::config).unwrap_or_default();
    file.apply(&mut config)?;
    if file.seed.is_none() {
        if let Some(raw) = env_seed {
            config.seed = raw
                .trim()
                .parse()
                .map_err(|_| Error::config("seed", format!("{SEED_ENV}=`{raw}` is not an integer")))?;
        }
    }
    flags.apply(&mut config)?;
    config.validate()?;
    Ok(Resolved { config, preset })
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub preset: Option<Preset>,
    pub version: String,
    pub seed: u64,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(config: ExperimentConfig, preset: Option<Preset>) -> Self {
        let timestamp = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or_else(|| {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map_or(0, |d| d.as_secs())
            });
        Self {
            seed: config.seed,
            config,
            preset,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            outputs: Vec::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let doc: serde_json::Value = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        // Accept both a bare manifest and a results document embedding one.
        let value = doc.get("manifest").cloned().unwrap_or(doc);
        serde_json::from_value(value).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Layout of the JSON results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsDocument {
    pub manifest: RunManifest,
    pub records: Vec<BerRecord>,
}

/// BER with eleven significant digits.
pub fn format_ber(ber: f64) -> String {
    format!("{ber:.10e}")
}

pub fn csv_string(records: &[BerRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.sweep,
            r.detector,
            r.strategy,
            r.errors,
            r.bits,
            format_ber(r.ber),
            r.sinr_evals
        ));
    }
    out
}

/// Whitespace-separated data files, one per (detector, strategy) series.
pub fn plot_series(records: &[BerRecord]) -> Vec<(String, String)> {
    let mut series: Vec<(String, String)> = Vec::new();
    for r in records {
        let name = format!("{}_{}.dat", r.detector, r.strategy);
        let idx = match series.iter().position(|(n, _)| *n == name) {
            Some(i) => i,
            None => {
                series.push((
                    name,
                    format!(
                        "# detector={} strategy={}\n# sweep ber errors bits\n",
                        r.detector, r.strategy
                    ),
                ));
                series.len() - 1
            }
        };
        series[idx]
            .1
            .push_str(&format!("{} {} {} {}\n", r.sweep, format_ber(r.ber), r.errors, r.bits));
    }
    series
}

/// Writes the requested files into `out_dir` and returns their paths.
pub fn emit_results(
    records: &[BerRecord],
    manifest: &RunManifest,
    format: Format,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::config("records", "nothing to write"));
    }
    let want = |f: Format| format == f || format == Format::All;
    let mut files: Vec<(PathBuf, Option<String>)> = Vec::new();
    if want(Format::Csv) {
        files.push((out_dir.join("results.csv"), Some(csv_string(records))));
    }
    if want(Format::Plot) {
        for (name, body) in plot_series(records) {
            files.push((out_dir.join(name), Some(body)));
        }
    }
    if want(Format::Json) {
        files.push((out_dir.join("results.json"), None));
    }
    let mut manifest = manifest.clone();
    manifest.outputs = files.iter().map(|(p, _)| p.clone()).collect();

    fs::create_dir_all(out_dir).map_err(|source| Error::Write {
        path: out_dir.to_path_buf(),
        source,
    })?;
    for (path, body) in &files {
        let body = match body {
            Some(b) => b.clone(),
            None => {
                let doc = ResultsDocument {
                    manifest: manifest.clone(),
                    records: records.to_vec(),
                };
                let mut s = serde_json::to_string_pretty(&doc).map_err(|source| Error::Json {
                    path: path.clone(),
                    source,
                })?;
                s.push('\n');
                s
            }
        };
        fs::write(path, body).map_err(|source| Error::Write {
            path: path.clone(),
            source,
        })?;
    }
    Ok(manifest.outputs)
}

/// Human-readable summary table.
pub fn summary(records: &[BerRecord]) -> String {
    let mut out = format!(
        "{:>8} {:>6} {:>16} {:>10} {:>10} {:>12} {:>10}\n",
        "sweep", "det", "strategy", "errors", "bits", "ber", "sinr_evals"
    );
    for r in records {
        out.push_str(&format!(
            "{:>8} {:>6} {:>16} {:>10} {:>10} {:>12.4e} {:>10}\n",
            r.sweep, r.detector, r.strategy, r.errors, r.bits, r.ber, r.sinr_evals
        ));
    }
    out
}

/// Result of [`run`].
#[derive(Debug, Clone)]
pub struct RunReport {
    pub records: Vec<BerRecord>,
    pub outputs: Vec<PathBuf>,
}

/// Resolves the configuration, runs the experiment and writes the results.
pub fn run(cli: &Cli, env_seed: Option<&str>) -> Result<RunReport> {
    let resolved = match &cli.manifest {
        Some(path) => {
            let no_overrides = Overrides::from_cli(cli) == Overrides::default();
            if !no_overrides {
                return Err(Error::config(
                    "manifest",
                    "a manifest replays its own configuration; drop the other experiment flags",
                ));
            }
            let m = RunManifest::load(path)?;
            m.config.validate()?;
            Resolved {
                config: m.config,
                preset: m.preset,
            }
        }
        None => parse_config(cli, env_seed)?,
    };
    let records = crate::sim::run_experiment(&resolved.config)?;
    let manifest = RunManifest::new(resolved.config, resolved.preset);
    let outputs = emit_results(&records, &manifest, cli.format, &cli.out)?;
    Ok(RunReport { records, outputs })
}
