//! `excon`: load presentation files and run the exact-context pipelines.

use std::process::ExitCode;

use clap::Parser;

use excon_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.command.common();
    if let Some(n) = common.threads {
        // only fails if a pool already exists, which it cannot here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli.command) {
        Ok(report) => {
            if common.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            let failed = report.checks_failed() || (common.expect.is_some() && !report.all_pass());
            ExitCode::from(if failed { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
