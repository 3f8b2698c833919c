use std::path::PathBuf;
use std::process::ExitCode;

use bohrtop::cstar::Closure;
use bohrtop::tol;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod cmd;

use cmd::Failure;

/// Finite computations on Bohrified state spaces and quantum logics.
#[derive(Parser, Debug)]
#[command(name = "bohrtop", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Opts {
    /// Slack when comparing eigenvalues against interval endpoints.
    #[arg(long, global = true, default_value_t = tol::EIG, value_parser = positive)]
    pub tol_eig: f64,
    /// Slack when testing a probability against 1.
    #[arg(long, global = true, default_value_t = tol::TRUTH, value_parser = positive)]
    pub tol_truth: f64,
    /// Slack for measure additivity and naturality.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive)]
    pub tol_measure: f64,
    /// Largest number of elements any enumeration may produce.
    #[arg(long, global = true, env = "BOHRTOP_CAP", default_value_t = 1 << 22)]
    pub cap: u64,
    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write Graphviz instead of JSON.
    #[arg(long, global = true)]
    pub dot: bool,
    /// Write JSON for commands whose default output is text.
    #[arg(long, global = true)]
    pub json: bool,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be positive".into()),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Fixture {
    /// The ten-element orthomodular lattice with atoms a, b, c, d.
    X,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ClosureArg {
    None,
    Meets,
}

impl From<ClosureArg> for Closure {
    fn from(c: ClosureArg) -> Self {
        match c {
            ClosureArg::None => Closure::None,
            ClosureArg::Meets => Closure::Meets,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count the monotone Heyting algebra and the distributive ideals of example X.
    Examplex {
        /// Also check f ≤ (g ⟹ h) iff f ∧ g ≤ h on every triple.
        #[arg(long)]
        verify_adjunction: bool,
    },
    /// Count the opens of the Bohr frame of a context family and test whether it is Boolean.
    Frame {
        #[arg(long)]
        contexts: PathBuf,
    },
    /// Truth value of "a ∈ (q, r)" in a state.
    Truth {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        obs: PathBuf,
        /// Lower endpoint, as "p/q".
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Upper endpoint, as "p/q".
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long)]
        contexts: PathBuf,
    },
    /// Daseinisation of "a ∈ (q, r)" as an open of the Bohr frame.
    Dasein {
        #[arg(long)]
        obs: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long)]
        contexts: PathBuf,
    },
    /// Search for a noncontextual 0/1 valuation.
    Ks {
        #[arg(long, group = "src")]
        contexts: Option<PathBuf>,
        /// The shipped 18-ray, 9-basis configuration in dimension 4.
        #[arg(long, group = "src")]
        cabello: bool,
        /// All partitions of the standard basis of ℂⁿ.
        #[arg(long, group = "src")]
        diagonal: Option<usize>,
    },
    /// Generate a context family as JSON.
    Ctxgen {
        /// All partitions of the standard basis of ℂⁿ.
        #[arg(long, group = "kind")]
        diagonal: Option<usize>,
        /// Random contexts in dimension n.
        #[arg(long, group = "kind")]
        random: Option<usize>,
        /// Pauli contexts for the given axes, e.g. "zx".
        #[arg(long, group = "kind")]
        pauli: Option<String>,
        /// Number of random contexts.
        #[arg(long, default_value_t = 2)]
        count: usize,
        /// Atoms per random context.
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        #[arg(long, value_enum, default_value_t = ClosureArg::None)]
        closure: ClosureArg,
    },
    /// List the sequences 0 < i_1 < ... < i_k = n with non-increasing gaps.
    Young {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Check the orthomodular lattice laws and list the Boolean blocks.
    OmlValidate {
        #[arg(long, group = "src")]
        input: Option<PathBuf>,
        #[arg(long, group = "src", value_enum)]
        example: Option<Fixture>,
    },
    /// Distributive-ideal completion of a finite lattice.
    BrunsLakser {
        #[arg(long, group = "src")]
        input: Option<PathBuf>,
        #[arg(long, group = "src", value_enum)]
        example: Option<Fixture>,
    },
}

fn run(cli: Cli) -> Result<cmd::Report, Failure> {
    let o = &cli.opts;
    match cli.command {
        Command::Examplex { verify_adjunction } => cmd::examplex(o, verify_adjunction),
        Command::Frame { contexts } => cmd::frame(o, &contexts),
        Command::Truth { state, obs, q, r, contexts } => cmd::truth(o, &state, &obs, &q, &r, &contexts),
        Command::Dasein { obs, q, r, contexts } => cmd::dasein(o, &obs, &q, &r, &contexts),
        Command::Ks { contexts, cabello, diagonal } => cmd::ks(o, contexts.as_deref(), cabello, diagonal),
        Command::Ctxgen { diagonal, random, pauli, count, atoms, closure } => {
            cmd::ctxgen(o, diagonal, random, pauli.as_deref(), count, atoms, closure.into())
        }
        Command::Young { k, n } => cmd::young(o, k, n),
        Command::OmlValidate { input, example } => cmd::oml_validate(o, input.as_deref(), example),
        Command::BrunsLakser { input, example } => cmd::bruns_lakser(o, input.as_deref(), example),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            print!("{}", report.out);
            match report.violation {
                None => ExitCode::SUCCESS,
                Some(v) => {
                    eprintln!("bohrtop: {v}");
                    ExitCode::from(1)
                }
            }
        }
        Err(f) => {
            eprintln!("bohrtop: {f}");
            ExitCode::from(f.code())
        }
    }
}
