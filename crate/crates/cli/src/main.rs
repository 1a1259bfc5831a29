mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, RunConfig};

/// 2 for bad input (including unreadable files), otherwise the code of the
/// numerical error.
fn exit_code(err: &anyhow::Error) -> u8 {
    err.chain()
        .find_map(|e| e.downcast_ref::<weldlab_core::Error>())
        .map_or(2, |e| e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| {
        if let Some(n) = config::thread_cap()? {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
        }
        let cfg = RunConfig::from_cli(cli)?;
        let art = commands::run(&cfg)?;
        commands::write(&cfg, &art)
    })();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("weldlab: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
