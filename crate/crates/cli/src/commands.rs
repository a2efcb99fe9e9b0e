//! The CLI verbs, callable without spawning a process.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::ExperimentConfig;
use crate::{catalog, plot, report, runner, selftest, CliError};

/// Paths written by a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunFiles {
    pub report: PathBuf,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Validation(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Runs a config file; returns the written files and the exit code.
pub fn run(
    config: &Path,
    out: &Path,
    seed: Option<u64>,
    jobs: usize,
) -> Result<(RunFiles, i32), CliError> {
    let text = fs::read_to_string(config)
        .map_err(|e| CliError::Validation(format!("{}: {e}", config.display())))?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let outcomes = runner::run_all(&cfg, jobs);
    let jsonl = report::render_run(&cfg, &outcomes);
    let base = out.join(&cfg.output.name);
    let files = RunFiles {
        report: base.with_extension("jsonl"),
        csv: cfg.output.csv.then(|| base.with_extension("csv")),
        svg: cfg.output.svg.then(|| base.with_extension("svg")),
    };
    write(&files.report, &jsonl)?;
    if let Some(p) = &files.csv {
        write(p, &report::render_csv(&outcomes))?;
    }
    if let Some(p) = &files.svg {
        write(p, &plot::render_svg(&jsonl).map_err(CliError::Internal)?)?;
    }
    for o in &outcomes {
        let verdict = o.verdict.map_or("-".to_string(), |v| v.to_string());
        println!("{:<24} {:<18} {:<17} {:<6} {}", o.name, o.op, o.status.as_str(), verdict, o.detail);
    }
    Ok((files, report::exit_code(&outcomes)))
}

pub fn catalog() -> String {
    catalog::render_catalog()
}

pub fn plot(report_path: &Path, out: &Path) -> Result<(), CliError> {
    let text = fs::read_to_string(report_path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", report_path.display())))?;
    let svg = plot::render_svg(&text).map_err(CliError::Validation)?;
    write(out, &svg)
}

/// Runs the acceptance suite and writes `selftest.jsonl`; exit code 2 if a
/// criterion fails.
pub fn selftest(out: &Path, seed: u64, jobs: usize) -> Result<(PathBuf, Vec<selftest::Criterion>, i32), CliError> {
    let (text, criteria) = selftest::run(seed, jobs);
    let path = out.join("selftest.jsonl");
    write(&path, &text)?;
    for c in &criteria {
        let mark = if c.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {mark} {}: {}", c.id, c.name, c.detail);
    }
    let code = if criteria.iter().all(|c| c.pass) { 0 } else { 2 };
    Ok((path, criteria, code))
}
