use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use permzero::{init_thread_pool, run, Cli, ExperimentSpec};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = match ExperimentSpec::from_cli(cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = init_thread_pool() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    let result = match run(&spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    // wall time stays off the rows so reruns are byte-identical
    eprintln!("wall_time_s: {:.3}", start.elapsed().as_secs_f64());
    match &spec.out {
        Some(path) => match result.write_files(path, spec.format) {
            Ok(files) => {
                for f in files {
                    eprintln!("wrote {}", f.display());
                }
            }
            Err(e) => {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        },
        None => {
            let mut out = std::io::stdout().lock();
            if out.write_all(result.render_all(spec.format).as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
        }
    }
    if spec.command.is_suite() && !result.all_pass() {
        eprintln!("one or more checks failed");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
