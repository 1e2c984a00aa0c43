use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::{CliError, Outcome};

/// Session type isomorphisms: checking, normalization, adapter synthesis
/// and component search.
#[derive(Parser, Debug)]
#[command(name = "stiso", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: GlobalOpts,
}

#[derive(clap::Args, Debug, Clone)]
pub struct GlobalOpts {
    /// States explored by proof search before giving up
    #[arg(long, global = true, default_value_t = 20_000)]
    pub max_steps: usize,
    /// Largest process size kept during proof search
    #[arg(long, global = true)]
    pub max_term_size: Option<usize>,
    /// Random contexts tried by `equiv`
    #[arg(long, global = true, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print derivations and traces
    #[arg(long, global = true)]
    pub explain: bool,
    /// Accepted for scripts; all commands are already deterministic
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Component library for `search`
    #[arg(long, global = true)]
    pub library: Option<PathBuf>,
    /// Print a JSON envelope {ok, result, evidence}
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    Type,
    Process,
    Expr,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and print in canonical form
    Parse {
        text: String,
        /// What to parse; by default a type, then a process, then an expression
        #[arg(long = "as", value_enum)]
        kind: Option<Kind>,
    },
    /// Dual of a session type
    Dual { ty: String },
    /// Type check a process, or infer its interface when none is given
    Check { process: String, left: Option<String>, right: Option<String> },
    /// Identity process of a type
    Id { ty: String },
    /// Normal form under the isomorphism axioms
    Normalize { ty: String },
    /// Decide isomorphism and print adapters with the axiom derivation
    Iso { left: String, right: String },
    /// Synthesize adapters and certify them
    Synth { left: String, right: String },
    /// Certify a given adapter pair for two types
    Verify { left: String, right: String, forward: String, backward: String },
    /// Decide whether a closed process is correct
    Run { process: String },
    /// Look for a context that tells two processes apart
    Equiv { p: String, q: String, left: String, right: String },
    /// Find library components isomorphic to a type
    Search { ty: String },
}

fn dispatch(cmd: Command, o: &GlobalOpts) -> Result<Outcome, CliError> {
    match cmd {
        Command::Parse { text, kind } => commands::parse(&text, kind),
        Command::Dual { ty } => commands::dual(&ty),
        Command::Check { process, left, right } => commands::check(&process, left.as_deref(), right.as_deref()),
        Command::Id { ty } => commands::id(&ty),
        Command::Normalize { ty } => commands::normalize(&ty),
        Command::Iso { left, right } => commands::iso(&left, &right),
        Command::Synth { left, right } => commands::synth(&left, &right, o),
        Command::Verify { left, right, forward, backward } => commands::verify(&left, &right, &forward, &backward, o),
        Command::Run { process } => commands::run(&process),
        Command::Equiv { p, q, left, right } => commands::equiv(&p, &q, &left, &right, o),
        Command::Search { ty } => commands::search(&ty, o),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = cli.opts.clone();
    match dispatch(cli.command, &opts) {
        Ok(out) => {
            if opts.json {
                println!("{}", out.envelope());
            } else {
                for line in &out.text {
                    println!("{line}");
                }
                if opts.explain || out.always_explain {
                    for line in &out.evidence {
                        println!("{line}");
                    }
                }
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            if opts.json {
                println!("{}", serde_json::json!({ "ok": false, "result": { "error": e.to_string() }, "evidence": [] }));
            }
            eprintln!("stiso: {e}");
            ExitCode::from(2)
        }
    }
}
