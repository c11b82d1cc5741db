//! Scenario runner binary.
//!
//! Exit codes: 0 on success, 1 for invalid configuration, 2 when any
//! verification row exceeds its tolerance.

mod config;
mod report;
mod scenarios;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use config::{Cli, FileConfig, Format, OutTarget, RunConfig};
use report::RunReport;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };

    let file = match FileConfig::load() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    let cfg = match RunConfig::resolve(cli, file) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    let rows = match scenarios::run(&cfg) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    let report = RunReport::new(&cfg, rows);
    let rendered = report.render(cfg.format);
    match &cfg.out {
        OutTarget::Stdout => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(rendered.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
        }
        OutTarget::File(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    if let Err(e) = std::fs::create_dir_all(dir) {
                        eprintln!("error: cannot create {}: {e}", dir.display());
                        return ExitCode::from(1);
                    }
                }
            }
            if let Err(e) = std::fs::write(path, rendered.as_bytes()) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
    }

    if report.pass {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "verification failed: max deviation {:.3e} in scenario {} ({} report emitted)",
            report.max_deviation,
            report.scenario,
            match cfg.format {
                Format::Csv => "csv",
                Format::Json => "json",
            }
        );
        ExitCode::from(2)
    }
}
