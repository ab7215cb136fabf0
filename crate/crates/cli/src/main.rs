use std::process::ExitCode;

use clap::Parser;
use thermoshift_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("THERMOSHIFT_LOG", "warn")).init();

    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
        log::warn!("could not configure the thread pool: {e}");
    }
    log::info!("running {:?} on {threads} threads", cli.command);

    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    for line in &output.diagnostics {
        eprintln!("{line}");
    }
    match &cli.out {
        Some(path) => {
            if let Err(e) = thermoshift::io::write_text(path, &output.body) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
        None => print!("{}", output.body),
    }
    ExitCode::SUCCESS
}
