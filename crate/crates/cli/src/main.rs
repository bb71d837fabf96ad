mod config;
mod report;
mod suites;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use config::{Args, Format, SuiteConfig};

const THREADS_VAR: &str = "ACYCLICA_THREADS";

fn init_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("{THREADS_VAR} must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn emit(report: &report::Report, cfg: &SuiteConfig) -> Result<()> {
    let mut out: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    };
    match cfg.format {
        Format::Json => report::write_json(report, &mut out)?,
        Format::Csv => report::write_csv(report, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn run() -> Result<bool> {
    let args = Args::parse();
    init_threads()?;
    let cfg = SuiteConfig::from_args(args)?;
    let report = suites::run_suite(&cfg)?;
    emit(&report, &cfg)?;
    for s in &report.body.suites {
        let failed: Vec<&str> = s.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        if !failed.is_empty() {
            eprintln!("{}: failed {}", s.suite, failed.join(", "));
        }
    }
    Ok(report.body.pass)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
