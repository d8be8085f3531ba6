use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use weaktrace_core::tsvf::all_weak_values;
use weaktrace_core::{enumerate_paths, parse_network};

use crate::config::Config;
use crate::error::EXIT_VALIDATION;
use crate::manifest::RunArtifacts;
use crate::scenarios::{self, Check};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "weaktrace", version, about = "Nested Mach-Zehnder weak-value and vibrating-mirror simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print and save the weak values of the five mirrors
    WeakValues(Common),
    /// Simulate the quad-cell spectrum and traces of one scenario
    Simulate {
        #[arg(long, value_enum, default_value = "original")]
        scenario: Scenario,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep the detector distance at fixed path phase
    SweepZd(Common),
    /// Fit trace strengths against the kick strength
    Scaling(Common),
    /// Validate a network description (.imz) and summarize it
    ParseCheck {
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Original,
    Pf,
}

/// Options shared by every computing subcommand. Later sources win:
/// defaults, then `--config`, then `--set`, then the dedicated flags.
#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output root; artifacts go to `<out>/<scenario>/`
    #[arg(long)]
    pub out: Option<String>,
    /// Path phase in radians, `pi` arithmetic allowed, or `auto`
    #[arg(long = "phi-c", allow_hyphen_values = true)]
    pub phi_c: Option<String>,
    /// Detector distance from the waist, or `far` (1e6 Rayleigh ranges)
    #[arg(long, allow_hyphen_values = true)]
    pub zd: Option<String>,
    /// Kick strength k·w0·θ for every mirror
    #[arg(long)]
    pub eps: Option<String>,
    /// Accepted for reproducibility records; the pipeline is deterministic
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub format: Option<String>,
    /// Any config key, `key=value` (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Print the effective configuration and exit
    #[arg(long)]
    pub dump_config: bool,
    /// Progress on stderr
    #[arg(short, long)]
    pub verbose: bool,
}

impl Common {
    pub fn resolve(&self) -> Result<Config, Error> {
        let mut cfg = match &self.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Validation(format!("--set expects key=value, got `{kv}`")))?;
            cfg.set(k.trim(), v.trim(), "--set")?;
        }
        let flags = [
            ("out", &self.out, "--out"),
            ("phi_c", &self.phi_c, "--phi-c"),
            ("z_d", &self.zd, "--zd"),
            ("eps", &self.eps, "--eps"),
            ("seed", &self.seed, "--seed"),
            ("format", &self.format, "--format"),
        ];
        for (key, value, flag) in flags {
            if let Some(v) = value {
                cfg.set(key, v, flag)?;
            }
        }
        Ok(cfg)
    }
}

/// Runs the command line and returns the process exit status.
pub fn run(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { 0 };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: &Command) -> Result<(), Error> {
    let common = match cmd {
        Command::ParseCheck { file } => return parse_check(file),
        Command::WeakValues(c) | Command::SweepZd(c) | Command::Scaling(c) => c,
        Command::Simulate { common, .. } => common,
    };
    let cfg = common.resolve()?;
    if common.dump_config {
        print!("{}", cfg.dump());
        return Ok(());
    }
    cfg.validate()?;
    let log = |msg: &str| {
        if common.verbose {
            eprintln!("{msg}");
        }
    };
    let (artifacts, checks) = match cmd {
        Command::WeakValues(_) => {
            let (_, art) = scenarios::run_weak_values(&cfg)?;
            print!("{}", art.file("weak_values.csv").unwrap_or_default());
            (art, Vec::new())
        }
        Command::Simulate { scenario: Scenario::Original, .. } => {
            log("running original configuration");
            let r = scenarios::run_danan_original(&cfg)?;
            (r.artifacts, r.checks)
        }
        Command::Simulate { scenario: Scenario::Pf, .. } => {
            log("running path-phase modification");
            let r = scenarios::run_pf_modification(&cfg)?;
            (r.artifacts, r.checks)
        }
        Command::SweepZd(_) => {
            log(&format!("sweeping {} detector positions", cfg.sweep_points));
            let r = scenarios::run_zd_sweep(&cfg)?;
            (r.artifacts, r.checks)
        }
        Command::Scaling(_) => {
            log(&format!("tracing {} kick strengths", cfg.scaling_points));
            let r = scenarios::run_scaling(&cfg)?;
            (r.artifacts, r.checks)
        }
        Command::ParseCheck { .. } => unreachable!(),
    };
    let dir = write(&artifacts, &cfg.out)?;
    report(&checks);
    log(&format!("wrote {}", dir.display()));
    Ok(())
}

fn write(artifacts: &RunArtifacts, out: &Path) -> Result<PathBuf, Error> {
    artifacts.write(out).map_err(|e| Error::io(&out.join(&artifacts.scenario), e))
}

fn report(checks: &[Check]) {
    let mut stdout = std::io::stdout().lock();
    for c in checks {
        let _ = writeln!(stdout, "{}", c.line());
    }
}

fn parse_check(file: &Path) -> Result<(), Error> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::io(file, e))?;
    let net = parse_network(&text).map_err(|err| Error::Parse { file: file.display().to_string(), err })?;
    let paths = enumerate_paths(&net);
    let overlap = net.transfer_between(net.source(), net.detector());
    println!("{}: ok", file.display());
    println!("elements: {}", net.elements().len());
    println!("mirrors: {}", net.mirrors().map(|m| m.0).collect::<Vec<_>>().join(" "));
    println!("paths to detector: {}", paths.paths.len());
    println!("transfer amplitude: {} {:+}i (|.| = {})", overlap.re, overlap.im, overlap.norm());
    if net.mirrors().next().is_some() {
        match all_weak_values(&net) {
            Ok(wv) => {
                for (tag, v) in &wv.values {
                    println!("weak value {tag}: {} {:+}i", v.re, v.im);
                }
            }
            Err(e) => println!("weak values unavailable: {e}"),
        }
    }
    Ok(())
}

