//! Command-line front end for `metric-forge-core`: certify kernels,
//! induce and verify distances, and embed distance matrices, all from
//! declarative JSON configs with fully reproducible reports.

pub mod args;
pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;
pub mod registry;
pub mod report;

use args::{Cli, Command};
use clap::Parser;
use commands::Artifacts;
use error::{CliError, Result};
use report::{Envelope, ErrorDto, Parameters};
use std::fs;
use std::path::Path;

/// Parse arguments, run the requested command, and return the process
/// exit code (0 pass, 1 usage/I-O, 2 certificate failure, 3 degenerate).
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };

    let (name, out, result) = match &cli.command {
        Command::CheckNdk(a) => {
            ("check-ndk", a.common.out.clone(), commands::cmd_check(a, false))
        }
        Command::CheckM(a) => ("check-m", a.common.out.clone(), commands::cmd_check(a, true)),
        Command::Induce(a) => ("induce", a.common.out.clone(), commands::cmd_induce(a)),
        Command::Embed(a) => ("embed", a.common.out.clone(), commands::cmd_embed(a)),
        Command::DemoExample1(a) => {
            ("demo-example1", a.common.out.clone(), commands::cmd_demo(a))
        }
    };

    match result {
        Ok((mut env, artifacts)) => {
            if let Some(dir) = out {
                if let Err(e) = write_artifacts(&mut env, &artifacts, &dir) {
                    return emit_error(name, &e);
                }
            }
            print!("{}", env.render());
            env.exit_code
        }
        Err(e) => emit_error(name, &e),
    }
}

/// Errors still produce a report: a machine-readable error object in the
/// same envelope, plus a human-readable line on stderr.
fn emit_error(command: &'static str, e: &CliError) -> i32 {
    let mut env = Envelope::new(command, Parameters::new());
    env.exit_code = e.exit_code();
    env.error = Some(ErrorDto { kind: e.kind(), message: e.to_string() });
    eprintln!("error: {e}");
    print!("{}", env.render());
    env.exit_code
}

fn write_artifacts(env: &mut Envelope, artifacts: &Artifacts, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    if let Some((labels, rows)) = &artifacts.matrix {
        csvio::write_matrix(&dir.join("distance_matrix.csv"), labels, rows)?;
        if let Some(dto) = &mut env.distance_matrix {
            dto.file = Some("distance_matrix.csv".into());
        }
    }
    if let Some((labels, coords)) = &artifacts.coordinates {
        csvio::write_coordinates(&dir.join("coordinates.csv"), labels, coords)?;
        if let Some(dto) = &mut env.embedding {
            dto.file = Some("coordinates.csv".into());
        }
    }
    let report_path = dir.join("report.json");
    fs::write(&report_path, env.render())
        .map_err(|source| CliError::Io { path: report_path, source })?;
    Ok(())
}
