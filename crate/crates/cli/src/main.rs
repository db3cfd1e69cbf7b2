//! `theta-forge`: theta numbers, relaxed homomorphisms, certificates and
//! coding bounds from the command line.
//!
//! Exit codes: 0 success, 2 bad input, 3 solver failure, 4 certificate or
//! representation rejected, 5 reproduction check failed.

mod commands;
mod report;
mod source;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use theta_forge::theta::ThetaOptions;

use commands::{BoundsCmd, CertVerifyCmd, GraphCmd, HomCmd, RepVerifyCmd, ReproduceCmd, ThetaCmd};
use report::{CliError, RunReport};

#[derive(Parser, Debug)]
#[command(name = "theta-forge", version, about = "Theta numbers, relaxed graph homomorphisms and PSD certificates")]
struct Cli {
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lovász, Schrijver or Szegedy theta of a graph (complement convention by default).
    Theta(ThetaCmd),
    /// Decide a relaxed homomorphism g → h, optionally with a certificate.
    Hom(HomCmd),
    /// Cost-rate lower bounds for a source and a channel.
    Bounds(BoundsCmd),
    /// Run the numerical reproduction checks.
    Reproduce(ReproduceCmd),
    /// Summarise or export a graph.
    Graph(GraphCmd),
    /// Verify a homomorphism certificate file.
    CertVerify(CertVerifyCmd),
    /// Verify a projective representation file.
    RepVerify(RepVerifyCmd),
}

fn dispatch(cli: &Cli) -> Result<RunReport, CliError> {
    let opts = ThetaOptions::default();
    match &cli.command {
        Command::Theta(c) => commands::theta_cmd(c, &opts),
        Command::Hom(c) => commands::hom_cmd(c, &opts),
        Command::Bounds(c) => commands::bounds_cmd(c, &opts),
        Command::Reproduce(c) => commands::reproduce_cmd(c, &opts),
        Command::Graph(c) => commands::graph_cmd(c),
        Command::CertVerify(c) => commands::cert_verify_cmd(c),
        Command::RepVerify(c) => commands::rep_verify_cmd(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(report) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
            } else {
                report.text
            };
            // A closed pipe (`| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
