use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use engel::manifest::{parse_manifest, Manifest, TaskKind};
use engel::runner::{digest, run_tasks, select_tasks, Report};

#[derive(Parser)]
#[command(
    name = "engel",
    version,
    about = "Verify and construct Engel structures described by manifests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the defining conditions of every structure.
    Verify(Common),
    /// Compute twisting numbers and minimal twisting numbers.
    Invariant(Common),
    /// Build prolongations and extensions and write them as manifests.
    Construct {
        #[command(flatten)]
        common: Common,
        /// Output manifest path; with several construct tasks the task id is
        /// inserted before the extension.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every task listed in the manifest.
    Run(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    manifest: PathBuf,
    /// Grid points per axis.
    #[arg(long)]
    samples_grid: Option<usize>,
    /// Number of seeded random sample points.
    #[arg(long)]
    samples_random: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Relative singular-value threshold for numerical rank.
    #[arg(long)]
    tol_rank: Option<f64>,
    /// Relative threshold for identically-zero checks.
    #[arg(long)]
    tol_zero: Option<f64>,
    /// Step for the finite-difference bracket cross-check.
    #[arg(long)]
    fd_step: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

impl Common {
    fn load(&self) -> anyhow::Result<(Manifest, String)> {
        let bytes =
            std::fs::read(&self.manifest).with_context(|| format!("cannot read {}", self.manifest.display()))?;
        let text = String::from_utf8(bytes.clone()).context("manifest is not UTF-8")?;
        let mut m = parse_manifest(&text).with_context(|| format!("{}", self.manifest.display()))?;
        if let Some(g) = self.samples_grid {
            if g < 2 {
                bail!("--samples-grid must be at least 2");
            }
            m.plan.grid = vec![g];
        }
        if let Some(r) = self.samples_random {
            m.plan.random = r;
        }
        if let Some(s) = self.seed {
            m.plan.seed = s;
        }
        for (flag, value, slot) in [
            ("--tol-rank", self.tol_rank, &mut m.tolerances.rank),
            ("--tol-zero", self.tol_zero, &mut m.tolerances.zero),
            ("--fd-step", self.fd_step, &mut m.tolerances.fd_step),
        ] {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    bail!("{flag} must be a positive number");
                }
                *slot = v;
            }
        }
        Ok((m, digest(&bytes)))
    }

    fn emit(&self, report: &Report) -> anyhow::Result<()> {
        let body = match self.format {
            Format::Json => report.to_json() + "\n",
            Format::Text => report.to_text(),
        };
        match &self.report {
            Some(path) => std::fs::write(path, body).with_context(|| format!("cannot write {}", path.display())),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

fn output_path(out: &Path, id: &str, several: bool) -> PathBuf {
    if !several {
        return out.to_path_buf();
    }
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("constructed");
    let name = match out.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}.{id}.{ext}"),
        None => format!("{stem}.{id}"),
    };
    out.with_file_name(name)
}

/// Exit code 2 for input errors, otherwise 0 or 1 by the report verdict.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let (common, kind, out) = match &cli.command {
        Command::Verify(c) => (c, Some(TaskKind::Verify), None),
        Command::Invariant(c) => (c, Some(TaskKind::Invariant), None),
        Command::Construct { common, out } => (common, Some(TaskKind::Construct), Some(out)),
        Command::Run(c) => (c, None, None),
    };
    let (manifest, digest) = common.load()?;
    let tasks = select_tasks(&manifest, kind).map_err(anyhow::Error::msg)?;
    let mut report = run_tasks(&manifest, &tasks, digest);
    if let Some(out) = out {
        let several = report.tasks.iter().filter(|t| t.constructed.is_some()).count() > 1;
        for t in report.tasks.iter_mut() {
            if let Some(text) = &t.constructed {
                let path = output_path(out, &t.id, several);
                std::fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
                t.output = Some(path.display().to_string());
            }
        }
    }
    common.emit(&report)?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
