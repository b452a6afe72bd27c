//! Command-line interface.
//!
//! ```text
//! paulilab run <config>          full pipeline: predictions.csv, sweep.csv, summary.json
//! paulilab verify <config>       pipeline plus the verification checks
//! paulilab constants <config>    predictions.csv only
//! paulilab clean-cache <config>  remove cached potentials/bases
//! ```
//!
//! Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
//! 3 verification failure.

use std::process::ExitCode;

use paulilab_cli::pipeline::{run_pipeline, Mode, PipelineError};
use paulilab_cli::{cache, config};

fn usage() -> ExitCode {
    eprintln!(
        "usage: paulilab <run|verify|constants|clean-cache> <config-file>\n\
         environment: {} overrides the cache directory",
        cache::CACHE_DIR_ENV
    );
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    if args.len() != 3 {
        return usage();
    }
    let command = args[1].as_str();
    let path = &args[2];

    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read config '{path}': {e}");
            return ExitCode::from(1);
        }
    };
    let cfg = match config::parse_config(&text) {
        Ok(c) => c,
        Err(errors) => {
            eprintln!("invalid configuration ({} problem(s)):", errors.len());
            for e in &errors {
                eprintln!("  - {e}");
            }
            return ExitCode::from(1);
        }
    };

    let mode = match command {
        "run" => Mode::Run,
        "verify" => Mode::Verify,
        "constants" => Mode::Constants,
        "clean-cache" => {
            let dir = cache::cache_dir(&cfg.output_dir);
            return match cache::clean(&dir) {
                Ok(n) => {
                    println!("removed {n} cached artifact(s) from {}", dir.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("clean-cache failed: {e}");
                    ExitCode::from(2)
                }
            };
        }
        _ => return usage(),
    };

    match run_pipeline(&cfg, mode) {
        Ok(summary) => {
            for c in &summary.checks {
                println!(
                    "{} {}: {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.id,
                    c.detail
                );
            }
            println!(
                "artifacts written to {} (cache hits: {:?})",
                cfg.output_dir.display(),
                summary.cache_hits
            );
            if mode == Mode::Verify && !summary.pass {
                eprintln!("verification failed");
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(PipelineError::Numerical { stage, message }) => {
            eprintln!("numerical failure in stage '{stage}': {message}");
            ExitCode::from(2)
        }
        Err(PipelineError::Io(e)) => {
            eprintln!("i/o failure: {e}");
            ExitCode::from(2)
        }
    }
}
