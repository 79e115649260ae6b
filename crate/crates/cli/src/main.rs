//! `rsw`: command-line front end for the rotating shallow water toolkit.

mod args;
mod commands;
mod failure;
mod output;

use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use args::{Cli, Command};
use failure::EXIT_USAGE;

fn configure_threads() {
    if let Some(n) = std::env::var("RSW_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let name = match &cli.command {
        Command::Field(_) => "field",
        Command::Trajectory(_) => "trajectory",
        Command::Residual(_) => "residual",
        Command::Commutators(_) => "commutators",
        Command::Map(_) => "map",
    };
    let result = match cli.command {
        Command::Field(c) => commands::field(c),
        Command::Trajectory(c) => commands::trajectory(c),
        Command::Residual(c) => commands::residual(c),
        Command::Commutators(c) => commands::commutators(c),
        Command::Map(c) => commands::map(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.message.contains("Broken pipe") => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.code == EXIT_USAGE {
                let mut cmd = Cli::command();
                cmd.build();
                if let Some(sub) = cmd.find_subcommand_mut(name) {
                    eprintln!("\n{}", sub.render_usage());
                }
            }
            ExitCode::from(e.code as u8)
        }
    }
}
