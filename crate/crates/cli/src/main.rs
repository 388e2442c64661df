use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use immerse_cli::{replay_check, run, verify, RunConfig, SerialChoice};

#[derive(Parser)]
#[command(name = "immerse", version, about = "Deterministic VR scene runner")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scene against a scripted scenario and write a trace.
    Run {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        /// `virtual` or `passthrough:<device path>`
        #[arg(long, default_value = "virtual")]
        serial: SerialChoice,
        /// Ticks between transform samples.
        #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u64).range(1..))]
        sample_stride: u64,
    },
    /// Check a trace against an assertion file.
    Verify {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        assertions: PathBuf,
    },
    /// Compare two traces byte for byte.
    ReplayCheck { a: PathBuf, b: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("IMMERSE_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (mut out, mut err) = (io::stdout(), io::stderr());
    let code = match cli.command {
        Cmd::Run { scene, scenario, trace, serial, sample_stride } => {
            let cfg = RunConfig { scene, scenario, trace, serial: serial.0, sample_stride };
            run(&cfg, &mut out, &mut err)
        }
        Cmd::Verify { trace, assertions } => verify(&trace, &assertions, &mut out, &mut err),
        Cmd::ReplayCheck { a, b } => replay_check(&a, &b, &mut out, &mut err),
    };
    ExitCode::from(code as u8)
}
