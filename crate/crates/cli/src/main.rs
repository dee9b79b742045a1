mod cli;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};
use commands::Status;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.command {
        Command::Measure(a) => commands::measure_cmd(a),
        Command::Twirl(a) => commands::twirl_cmd(a),
        Command::EnsembleCheck(a) => commands::ensemble_check_cmd(a),
        Command::ThermoTable(a) => commands::thermo_table_cmd(a),
        Command::MaxentSweep(a) => commands::maxent_sweep_cmd(a),
        Command::PreservationDemo(a) => commands::preservation_cmd(a),
        Command::CounterexampleDemo(a) => commands::counterexample_cmd(a),
    };
    match outcome {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::NotConverged(msg)) => {
            eprintln!("warning: {msg}");
            ExitCode::from(2)
        }
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}
