/// Writes a diagnostic line to stderr, ignoring a closed pipe.
macro_rules! diag {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stderr(), $($arg)*);
    }};
}

mod args;
mod commands;
mod manifest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bassnet::exact::MAX_NODES_ENV;
use bassnet::SolverConfig;
use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use commands::{CliError, Ctx};
use manifest::RunManifest;

const CHECK_FAILED: i32 = 5;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    if let Some(n) = cli.max_nodes {
        // read by every solver configuration created afterwards
        std::env::set_var(MAX_NODES_ENV, n.to_string());
    }
    let jobs = cli
        .jobs
        .map(|j| j as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));

    let start = Instant::now();
    let mut ctx = Ctx { jobs, inputs: Vec::new(), seeds: Vec::new() };
    let code = match commands::run(&cli.command, &mut ctx).and_then(|p| {
        write_output(&cli.out, &p.data)?;
        Ok(p.checks_failed)
    }) {
        Ok(false) => 0,
        Ok(true) => CHECK_FAILED,
        Err(e) => {
            diag!("error: {}", e.message());
            if let CliError::Usage(_) = e {
                diag!("run with --help for usage");
            }
            e.code()
        }
    };

    let manifest = RunManifest {
        command_line: argv,
        tool_version: env!("CARGO_PKG_VERSION"),
        inputs: ctx.inputs,
        seeds: ctx.seeds,
        jobs,
        max_nodes: SolverConfig::default().max_nodes,
        output: cli.out.clone(),
        exit_code: code,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    let target = cli.manifest.clone().or_else(|| {
        (cli.out != "-").then(|| PathBuf::from(format!("{}.manifest.json", cli.out)))
    });
    match target {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text + "\n") {
                diag!("error: cannot write manifest {}: {e}", path.display());
            }
        }
        None => diag!("{text}"),
    }
    ExitCode::from(code as u8)
}

fn write_output(out: &str, data: &str) -> Result<(), CliError> {
    let res = if out == "-" {
        std::io::stdout().lock().write_all(data.as_bytes())
    } else {
        std::fs::write(out, data)
    };
    res.map_err(|e| CliError::Io(format!("cannot write {out}: {e}")))
}
