use std::process::ExitCode;

use clap::Parser;
use veronese_cli::{error_record, execute, write_outcome, Cli};

/// Caps rayon's pool from `VERONESE_THREADS`; output does not depend on it.
fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("VERONESE_THREADS") {
        let threads: usize = v
            .trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("VERONESE_THREADS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| {
        let outcome = execute(&cli)?;
        write_outcome(&outcome)?;
        Ok(outcome.success)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", error_record(&e));
            ExitCode::from(2)
        }
    }
}
