//! `hqw`: command-line front end for hybrid quantum walk simulations.
//!
//! Exit codes: 0 on success, 1 for invalid input, 2 when a numerical check
//! fails (the artifact is still written).

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;
use hqw::pst::PstError;
use hqw::walk::WalkError;

use commands::NumericalViolation;
use config::{Cli, RunConfig};

fn is_numerical(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.is::<NumericalViolation>()
            || matches!(c.downcast_ref::<PstError>(), Some(PstError::Numerical(_)))
            || matches!(
                c.downcast_ref::<WalkError>().or(match c.downcast_ref::<PstError>() {
                    Some(PstError::Walk(w)) => Some(w),
                    _ => None,
                }),
                Some(WalkError::NotNormalized(_))
            )
    })
}

fn fail(e: &anyhow::Error) -> ExitCode {
    eprintln!("error: {e:#}");
    ExitCode::from(if is_numerical(e) { 2 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        hqw::exec::set_threads(n);
    }
    let config = match RunConfig::try_from(cli.command) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let outcome = match commands::run(&config.command, config.format) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    match output::write(&config, &outcome.artifact) {
        Ok(path) => eprintln!("wrote {}", path.display()),
        Err(e) => return fail(&e),
    }
    println!("{}", outcome.summary);
    match outcome.violation {
        Some(v) => fail(&v.into()),
        None => ExitCode::SUCCESS,
    }
}
