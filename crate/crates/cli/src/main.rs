use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use xzsat::circuit::GateSet;
use xzsat::spectral::Sector;

mod commands;
mod io;

/// Circuit-to-XZ-Hamiltonian compiler and verifier.
#[derive(Parser)]
#[command(name = "xzsat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every gate identity exactly.
    Identities {
        /// Print the per-identity results as JSON.
        #[arg(long)]
        json: bool,
        /// Replace CZ by CX in the right-hand side of identity N (1-based)
        /// before checking; the run is expected to fail.
        #[arg(long, value_name = "N")]
        corrupt: Option<usize>,
    },
    /// Compile a circuit, optionally to standard form, an instance or a
    /// history state.
    Compile {
        circuit: PathBuf,
        /// Output path; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Target gate set.
        #[arg(long, default_value = "gt2")]
        to: GateSet,
        /// Pad to standard form (implies `--to gt2`).
        #[arg(long)]
        standard_form: bool,
        /// Write the full XZ instance instead of the circuit.
        #[arg(long, conflicts_with = "emit_history")]
        emit_instance: bool,
        /// Write the normalized history state for this proof bitstring.
        #[arg(long, value_name = "BITS")]
        emit_history: Option<String>,
    },
    /// Smallest eigenvalue of an instance on a sector.
    Spectrum {
        instance: PathBuf,
        #[arg(long, default_value = "full")]
        sector: Sector,
        /// Largest accepted eigenpair residual.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Eigensolver name.
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Clock-string census and structural lemma checks.
    Clockgraph {
        /// Clock length (odd).
        #[arg(long = "T", value_name = "T")]
        t: usize,
        #[arg(long)]
        check_lemmas: bool,
        /// Print one line per connected component.
        #[arg(long)]
        census: bool,
    },
    /// Run the projector-sampling verifier on a state, or the classical
    /// verifier on a pair of bitstrings for a commuting instance.
    Verify {
        instance: PathBuf,
        #[arg(long, required_unless_present = "np", conflicts_with = "np")]
        witness: Option<PathBuf>,
        /// Bitstrings `x,z`.
        #[arg(long, value_name = "X,Z")]
        np: Option<String>,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write one JSON line per shot here.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Embed a DIMACS 3-CNF as Z-basis projectors.
    #[command(name = "embed-3sat")]
    Embed3sat {
        cnf: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Outcome of a command that ran to completion.
pub enum Verdict {
    Pass,
    Fail,
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("XZSAT_THREADS") {
        let n: usize = v
            .parse()
            .with_context(|| format!("XZSAT_THREADS={v:?} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    configure_threads()?;
    match cli.command {
        Command::Identities { json, corrupt } => commands::identities(json, corrupt),
        Command::Compile {
            circuit,
            output,
            to,
            standard_form,
            emit_instance,
            emit_history,
        } => {
            let target = if standard_form || emit_instance || emit_history.is_some() {
                GateSet::Gt2Standard
            } else {
                to
            };
            let emit = match (emit_instance, emit_history) {
                (true, _) => commands::Emit::Instance,
                (_, Some(bits)) => commands::Emit::History(bits),
                _ => commands::Emit::Circuit,
            };
            commands::compile(&circuit, output.as_deref(), target, emit)
        }
        Command::Spectrum {
            instance,
            sector,
            tol,
            method,
            seed,
        } => commands::spectrum(&instance, sector, tol, &method, seed),
        Command::Clockgraph {
            t,
            check_lemmas,
            census,
        } => commands::clockgraph(t, check_lemmas, census),
        Command::Verify {
            instance,
            witness,
            np,
            shots,
            seed,
            transcript,
        } => match (witness, np) {
            (_, Some(np)) => commands::verify_np(&instance, &np),
            (Some(w), None) => commands::verify_qma(&instance, &w, shots, seed, transcript.as_deref()),
            (None, None) => unreachable!("clap requires one of --witness and --np"),
        },
        Command::Embed3sat { cnf, output } => commands::embed_3sat(&cnf, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
