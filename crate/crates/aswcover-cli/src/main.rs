//! Command-line interface for exact invariants of cyclic p²-covers of the
//! projective line in characteristic p: Cartier–Manin matrices, a-numbers,
//! key-term reports, and randomized verification of the closed formulas.

mod commands;
mod expr;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CmdError, CmdOutput, Format, RunConfig};

#[derive(Parser)]
#[command(
    name = "aswcover",
    about = "Exact Cartier–Manin matrices and a-numbers of Artin–Schreier–Witt covers of the projective line",
    version
)]
struct Cli {
    /// Field characteristic (an odd prime).
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,

    /// Extension degree of the coefficient field (canonical modulus).
    #[arg(long, global = true)]
    k: Option<usize>,

    /// Explicit irreducible modulus, constant term first (overrides --k).
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_hyphen_values = true,
        value_name = "C0,C1,..."
    )]
    modulus: Option<Vec<i64>>,

    /// Seed for every randomized choice; identical seeds give identical reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Number of randomized trials for verify and probe-image.
    #[arg(long, global = true, default_value_t = 20)]
    trials: u32,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Branch-point counts of a minimal cover to sample: N1,N2,N3,N4.
    #[arg(long, global = true, value_name = "N1,N2,N3,N4")]
    profile: Option<String>,

    /// First defining function, e.g. "x^2", "1/x + x", "2*(x-1)^-1".
    #[arg(long, global = true, value_name = "EXPR", allow_hyphen_values = true)]
    f: Option<String>,

    /// Second-level correction term h (defaults to 0).
    #[arg(long, global = true, value_name = "EXPR", allow_hyphen_values = true)]
    h: Option<String>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Describe a cover: field, defining functions, branch datum, genus.
    Info,
    /// Print the Cartier–Manin matrix in the monomial differential basis.
    Matrix,
    /// Print genus, matrix rank, and a-number.
    Anumber,
    /// Per-point key-term report and the rank lower bound it certifies.
    Keyterms,
    /// Regenerate the six reference key-term tables and compare them to the
    /// committed fixtures.
    Tables,
    /// Sample a minimal cover with the requested profile and print it as
    /// JSON suitable for later runs.
    Sample,
    /// Search random covers for Cartier images outside the key-term span
    /// (exploratory; always exits 0).
    ProbeImage,
    /// Randomized verification: closed a-number formula, rank bound, the
    /// one-level case formula, interval bounds, and a series-expansion
    /// cross-check on sampled minimal covers.
    Verify,
}

fn run(cli: &Cli) -> Result<CmdOutput, CmdError> {
    let cfg = RunConfig {
        p: cli.p,
        k: cli.k,
        modulus: cli.modulus.clone(),
        seed: cli.seed,
        trials: cli.trials,
        format: cli.format,
        profile: cli.profile.clone(),
        f: cli.f.clone(),
        h: cli.h.clone(),
        precision_margin: 4,
    };
    match cli.cmd {
        Cmd::Info => commands::cmd_info(&cfg),
        Cmd::Matrix => commands::cmd_matrix(&cfg),
        Cmd::Anumber => commands::cmd_anumber(&cfg),
        Cmd::Keyterms => commands::cmd_keyterms(&cfg),
        Cmd::Tables => commands::cmd_tables(&cfg),
        Cmd::Sample => commands::cmd_sample(&cfg),
        Cmd::ProbeImage => commands::cmd_probe_image(&cfg),
        Cmd::Verify => commands::cmd_verify(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            // A closed pipe (e.g. `aswcover ... | head`) is not an error.
            let _ = std::io::Write::write_all(&mut std::io::stdout(), out.text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(CmdError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
