#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod report;
mod request;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;
use crate::commands::{error_kind, Exit};

fn fail(kind: &str, message: &str, exit: Exit) -> ExitCode {
    eprintln!("ERROR: {kind}: {}", message.replace('\n', " "));
    ExitCode::from(exit as u8)
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("KGK_NUM_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("KGK_NUM_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    if let Err(msg) = configure_threads() {
        return fail("invalid_parameter", &msg, Exit::Invalid);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            return fail("invalid_arguments", first, Exit::Invalid);
        }
    };
    let request = match request::resolve(cli) {
        Ok(r) => r,
        Err(e) => return fail(error_kind(&e), &e.to_string(), Exit::of(&e)),
    };
    let outcome = match commands::run(&request) {
        Ok(o) => o,
        Err(e) => return fail(error_kind(&e), &e.to_string(), Exit::of(&e)),
    };

    for d in &outcome.document.diagnostics {
        eprintln!("{}", d.line());
    }
    let text = outcome.document.render(request.format);
    let written = match &request.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        return fail("io", &e.to_string(), Exit::Failure);
    }
    ExitCode::from(outcome.exit as u8)
}
