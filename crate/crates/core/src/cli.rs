//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for invalid input, 3 when a verification or
//! monotonicity check fails.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

use chrono::{DateTime, SecondsFormat, Utc};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::channel::{energy, ChannelTaps};
use crate::distance::{min_distance, DEFAULT_CEILING};
use crate::error::Error;
use crate::mlse::{ber_curve, format_exp, write_ber_csv};
use crate::verify::{self, Level};
use crate::worstcase::{
    augmentation_probe, sweep, uniqueness_probe, worst_channel_with, SearchOptions, SearchSpace,
    Sweep,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

const CHANNEL_ENERGY_SLACK: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(
    name = "isi",
    version,
    about = "Worst-case minimum-distance ISI channels",
    after_help = "SNR is 10*log10(1/sigma^2) for a unit-energy channel and unit-power binary symbols."
)]
struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "ISI_THREADS")]
    threads: Option<usize>,

    /// ISO-8601 timestamp recorded in JSON manifests (default:
    /// SOURCE_DATE_EPOCH, else the current time).
    #[arg(long, global = true)]
    timestamp: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    /// PAM levels M.
    #[arg(long, default_value_t = 2)]
    levels: u32,
    /// Longest error event considered (default max(2L, 12)).
    #[arg(long)]
    max_event_len: Option<usize>,
    /// Longest internal zero run (default L-2).
    #[arg(long)]
    max_zero_run: Option<usize>,
}

impl SearchArgs {
    fn space(&self) -> SearchSpace {
        SearchSpace {
            levels: self.levels,
            max_event_len: self.max_event_len,
            max_zero_run: self.max_zero_run,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Worst channel of one length (JSON).
    Worst {
        #[arg(long = "len")]
        len: usize,
        #[command(flatten)]
        search: SearchArgs,
        /// Disable Gershgorin pruning.
        #[arg(long)]
        no_prune: bool,
        /// Emit JSON (the default).
        #[arg(long)]
        json: bool,
    },
    /// Worst-case distance for L = 1..len-max (CSV by default).
    Sweep {
        #[arg(long)]
        len_max: usize,
        #[command(flatten)]
        search: SearchArgs,
        /// Write CSV to this path ("-" for stdout).
        #[arg(long)]
        csv: Option<String>,
        /// Emit JSON instead of CSV.
        #[arg(long, conflicts_with = "csv")]
        json: bool,
    },
    /// Augmented-channel and uniqueness probes for one length (JSON).
    Probe {
        #[arg(long = "len")]
        len: usize,
        #[command(flatten)]
        search: SearchArgs,
        /// Grid step for the appended tap.
        #[arg(long, default_value_t = 0.01)]
        grid: f64,
    },
    /// Minimum distance of a given channel (JSON).
    Dmin {
        /// Comma-separated taps f0,f1,...
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        channel: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        levels: u32,
        /// Search ceiling on d².
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: f64,
        /// Reject channels whose energy is not 1 instead of renormalizing.
        #[arg(long)]
        strict_energy: bool,
    },
    /// Monte Carlo BER of Viterbi detection (CSV).
    Simulate {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        channel: Vec<f64>,
        /// SNR grid start:stop:step in dB.
        #[arg(long, value_parser = parse_snr_grid)]
        snr: Option<SnrGrid>,
        #[arg(long, default_value_t = 100_000)]
        symbols: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write CSV to this path ("-" for stdout).
        #[arg(long)]
        csv: Option<String>,
        #[arg(long)]
        strict_energy: bool,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        #[arg(long)]
        full: bool,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SnrGrid(pub Vec<f64>);

/// Parse `start:stop:step` into an inclusive grid.
pub fn parse_snr_grid(s: &str) -> Result<SnrGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let (start, stop, step) = match nums[..] {
        [a] => (a, a, 1.0),
        [a, b, c] => (a, b, c),
        _ => return Err("expected start:stop:step".into()),
    };
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err("need finite start <= stop and a positive step".into());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok(SnrGrid(
        (0..count)
            .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
            .collect(),
    ))
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: BTreeMap<String, Value>,
    tool_version: &'static str,
    timestamp: String,
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    manifest: RunManifest,
    result: T,
}

fn timestamp(flag: &Option<String>) -> Result<String, String> {
    if let Some(t) = flag {
        return DateTime::parse_from_rfc3339(t)
            .map(|d| {
                d.with_timezone(&Utc)
                    .to_rfc3339_opts(SecondsFormat::Secs, true)
            })
            .map_err(|e| format!("invalid --timestamp {t:?}: {e}"));
    }
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        let secs: i64 = epoch
            .trim()
            .parse()
            .map_err(|_| format!("invalid SOURCE_DATE_EPOCH {epoch:?}"))?;
        let d = DateTime::from_timestamp(secs, 0)
            .ok_or_else(|| format!("SOURCE_DATE_EPOCH {secs} out of range"))?;
        return Ok(d.to_rfc3339_opts(SecondsFormat::Secs, true));
    }
    Ok(Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true))
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    timestamp: Option<String>,
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(format!("serialization error: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

impl Ctx<'_> {
    fn emit_json<T: Serialize>(
        &mut self,
        command: &str,
        parameters: BTreeMap<String, Value>,
        result: T,
    ) -> CmdResult {
        let manifest = RunManifest {
            command: command.to_string(),
            parameters,
            tool_version: env!("CARGO_PKG_VERSION"),
            timestamp: timestamp(&self.timestamp).map_err(Failure::Input)?,
        };
        let text = serde_json::to_string_pretty(&Envelope { manifest, result })?;
        writeln!(self.out, "{text}")?;
        Ok(())
    }

    fn warn(&mut self, msg: &str) {
        let _ = writeln!(self.err, "warning: {msg}");
    }

    /// Open `path` for writing, or stdout for `None` / `"-"`.
    fn with_output(
        &mut self,
        path: &Option<String>,
        body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
    ) -> CmdResult {
        match path.as_deref() {
            None | Some("-") => body(&mut *self.out)?,
            Some(p) => {
                let file = File::create(p)
                    .map_err(|e| Failure::Input(format!("cannot create {p}: {e}")))?;
                let mut w = BufWriter::new(file);
                body(&mut w)?;
                w.flush()?;
            }
        }
        Ok(())
    }

    fn channel(&mut self, taps: Vec<f64>, strict: bool) -> Result<ChannelTaps, Failure> {
        let e = energy(&taps);
        if (e - 1.0).abs() > CHANNEL_ENERGY_SLACK {
            if strict {
                return Err(Failure::Input(format!(
                    "channel energy {e} differs from 1 (--strict-energy)"
                )));
            }
            self.warn(&format!("channel energy {e} renormalized to 1"));
        }
        Ok(ChannelTaps::normalized(taps)?)
    }
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn search_params(len_key: &str, len: usize, s: &SearchArgs) -> BTreeMap<String, Value> {
    params(&[
        (len_key, json!(len)),
        ("levels", json!(s.levels)),
        ("max_event_len", json!(s.max_event_len)),
        ("max_zero_run", json!(s.max_zero_run)),
    ])
}

pub const SWEEP_CSV_HEADER: &str = "L,lambda_min,delta,strict";

pub fn write_sweep_csv(w: &mut dyn Write, s: &Sweep) -> std::io::Result<()> {
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    for r in &s.rows {
        let delta = r
            .delta_from_previous
            .map(|d| format_exp(d, 12))
            .unwrap_or_default();
        let strict = r.strict.map(|b| b.to_string()).unwrap_or_default();
        writeln!(w, "{},{:.12},{},{}", r.len, r.lambda_min, delta, strict)?;
    }
    Ok(())
}

fn dispatch(cli: Cli, ctx: &mut Ctx<'_>) -> CmdResult {
    match cli.command {
        Command::Worst {
            len,
            search,
            no_prune,
            ..
        } => {
            let spec = search.space().alphabet_for(len.max(1))?;
            let report = worst_channel_with(len, spec, SearchOptions { prune: !no_prune })?;
            for w in &report.warnings {
                ctx.warn(w);
            }
            let mut p = search_params("len", len, &search);
            p.insert("prune".into(), json!(!no_prune));
            ctx.emit_json("worst", p, &report)
        }
        Command::Sweep {
            len_max,
            search,
            csv,
            json,
        } => {
            let s = sweep(len_max, search.space())?;
            if json {
                ctx.emit_json("sweep", search_params("len_max", len_max, &search), &s.rows)?;
            } else {
                ctx.with_output(&csv, |w| write_sweep_csv(w, &s))?;
            }
            if !s.non_increasing() {
                return Err(Failure::Check(
                    "worst-case distance increased with channel length".into(),
                ));
            }
            Ok(())
        }
        Command::Probe { len, search, grid } => {
            let spec = search.space().alphabet_for(len.max(1))?;
            let probe = augmentation_probe(len, spec, grid)?;
            let report = worst_channel_with(len, spec, SearchOptions::default())?;
            let verdict = uniqueness_probe(&report);
            let mut p = search_params("len", len, &search);
            p.insert("grid".into(), json!(grid));
            ctx.emit_json(
                "probe",
                p,
                json!({ "augmentation": probe, "uniqueness": verdict }),
            )
        }
        Command::Dmin {
            channel,
            levels,
            ceiling,
            strict_energy,
        } => {
            let p = params(&[
                ("channel", json!(channel)),
                ("levels", json!(levels)),
                ("ceiling", json!(ceiling)),
                ("strict_energy", json!(strict_energy)),
            ]);
            let f = ctx.channel(channel, strict_energy)?;
            let r = min_distance(&f, levels, ceiling)?;
            ctx.emit_json("dmin", p, json!({ "channel": f, "distance": r }))
        }
        Command::Simulate {
            channel,
            snr,
            symbols,
            seed,
            csv,
            strict_energy,
        } => {
            let Some(SnrGrid(snr)) = snr else {
                return Err(Failure::Input("--snr start:stop:step is required".into()));
            };
            let f = ctx.channel(channel, strict_energy)?;
            let points = ber_curve(&f, &snr, symbols, seed)?;
            ctx.with_output(&csv, |w| write_ber_csv(w, &points))
        }
        Command::Verify { full, .. } => {
            let level = if full { Level::Full } else { Level::Quick };
            let results = verify::run(level);
            let mut failed = Vec::new();
            for r in &results {
                let tag = if r.pass { "PASS" } else { "FAIL" };
                writeln!(ctx.out, "{tag} {}: {}", r.name, r.detail)?;
                if !r.pass {
                    failed.push(r.name);
                }
            }
            if failed.is_empty() {
                writeln!(ctx.out, "all {} checks passed", results.len())?;
                Ok(())
            } else {
                Err(Failure::Check(format!("failed: {}", failed.join(", "))))
            }
        }
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // A second in-process run keeps the pool built by the first.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let mut ctx = Ctx {
        out,
        err,
        timestamp: cli.timestamp.clone(),
    };
    match dispatch(cli, &mut ctx) {
        Ok(()) => EXIT_OK,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(ctx.err, "check failed: {msg}");
            EXIT_CHECK
        }
    }
}
