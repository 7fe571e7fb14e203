//! Command-line driver: run matches, parameter transfers, strategy
//! simplifications, cylinder codings, index games, and the seeded invariant
//! suites. All numeric input is exact rational text ("1/4", "3", "-7/2");
//! nothing is ever read as a float.
//!
//! Exit codes: 0 a certified result, 3 an undecided run, 2 unparseable
//! input, 1 a module refusing at runtime.

mod actions;
mod descriptors;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use settings::Settings;

#[derive(Parser)]
#[command(name = "schmidt-games", version, about = "Exact-arithmetic ball games on the line, the plane, and integer sequences")]
struct Cli {
    /// Config file of "key = value" lines mirroring the long flags.
    /// Explicit flags win over file entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one match between two strategies and emit its trace.
    Play(PlayArgs),
    /// Evaluate a parameter transfer and replay a strategy across it.
    Transfer(TransferArgs),
    /// Sweep a strategy into an interval table and validate it.
    Simplify(SimplifyArgs),
    /// Cylinder coding: tangent duels, uniformization extraction, auditing.
    Cylinder(CylinderArgs),
    /// Play the index game against seeded opposition and reconstruct the run.
    Gstar(GstarArgs),
    /// Run every invariant suite at a seed and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Args)]
pub struct PlayArgs {
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub rho: Option<String>,
    /// schmidt | non-tangent | banach-mazur
    #[arg(long)]
    pub variant: Option<String>,
    /// line | euclid:<n> | baire
    #[arg(long)]
    pub space: Option<String>,
    /// Target expression, e.g. rayq, interval:-1,1, stem:1,2, compl(Q).
    #[arg(long)]
    pub target: Option<String>,
    /// Strategy for the first player (see descriptors in the readme).
    #[arg(long = "I")]
    pub i: Option<String>,
    /// Strategy for the second player.
    #[arg(long = "II")]
    pub ii: Option<String>,
    /// Full rounds to play before giving up on a certificate.
    #[arg(long)]
    pub depth: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Fix the first ball's center (bare coordinates or [..] syntax).
    #[arg(long)]
    pub first_center: Option<String>,
    /// First ball's radius; defaults to rho when scheduled.
    #[arg(long)]
    pub first_radius: Option<String>,
    /// Write the trace here instead of stdout.
    #[arg(long)]
    pub trace_out: Option<String>,
}

#[derive(Args)]
pub struct TransferArgs {
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long = "alpha-prime")]
    pub alpha_prime: Option<String>,
    #[arg(long = "beta-prime")]
    pub beta_prime: Option<String>,
    #[arg(long)]
    pub rho: Option<String>,
    /// Primed first radius; picked from the window when omitted.
    #[arg(long = "rho-prime")]
    pub rho_prime: Option<String>,
    /// Strategy to transfer from the primed game (a II strategy).
    #[arg(long)]
    pub tau: Option<String>,
    /// Full rounds of the replay match; 0 prints the parameters only.
    #[arg(long)]
    pub rounds: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Dense target set used for snapping: rationals | dyadics.
    #[arg(long)]
    pub dense: Option<String>,
}

#[derive(Args)]
pub struct SimplifyArgs {
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub rho: Option<String>,
    /// The II strategy to sweep into a table.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Left end of the swept interval (default 0).
    #[arg(long)]
    pub lo: Option<String>,
    /// Right end of the swept interval (default 1).
    #[arg(long)]
    pub hi: Option<String>,
    #[arg(long = "max-cells")]
    pub max_cells: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Write the strategy document here instead of stdout.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Args)]
pub struct CylinderArgs {
    /// duel | extract | verify
    pub mode: String,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub rho: Option<String>,
    /// Relation table file: lines of "x cos sin".
    #[arg(long)]
    pub table: Option<String>,
    /// Duel rounds.
    #[arg(long)]
    pub depth: Option<String>,
    /// Shared x-coordinate of the duel.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub cos: Option<String>,
    #[arg(long)]
    pub sin: Option<String>,
}

#[derive(Args)]
pub struct GstarArgs {
    /// Table depth of the built-in splitting strategy.
    #[arg(long)]
    pub depth: Option<String>,
    /// Index rounds to play.
    #[arg(long)]
    pub rounds: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Target adjudicating the reconstructed run.
    #[arg(long)]
    pub target: Option<String>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: Option<String>,
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes instead of panicking mid-print
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let cfg = match Settings::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let run = match &cli.cmd {
        Cmd::Play(a) => actions::play_cmd(a, &cfg),
        Cmd::Transfer(a) => actions::transfer_cmd(a, &cfg),
        Cmd::Simplify(a) => actions::simplify_cmd(a, &cfg),
        Cmd::Cylinder(a) => actions::cylinder_cmd(a, &cfg),
        Cmd::Gstar(a) => actions::gstar_cmd(a, &cfg),
        Cmd::Verify(a) => actions::verify_cmd(a, &cfg),
    };
    match run {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
