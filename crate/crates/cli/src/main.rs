use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pdchain::divpow::{CheckEntry, CheckReport, Status};
use pdchain::RingSpec;
use serde_json::{json, Map, Value};

mod commands;
mod input;

#[derive(Parser, Debug)]
#[command(name = "pdchain", version, about = "Exact Dold-Kan and divided power computations")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Coefficient ring for generated objects: Z, Q or Z/m.
    #[arg(long, global = true)]
    pub ring: Option<RingSpec>,
    /// Truncation level L.
    #[arg(long = "truncate", global = true, value_name = "L")]
    pub truncate: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    pub degree: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// A simplicial module: a document or the standard simplex.
#[derive(Args, Debug, Clone)]
pub struct SimplicialSource {
    #[arg(long, conflicts_with = "simplex")]
    pub simplicial: Option<PathBuf>,
    /// Use Z[Δ(n)] over --ring (default Z) through level --truncate (default 3).
    #[arg(long, value_name = "n")]
    pub simplex: Option<usize>,
}

/// A chain complex: a document or N(Z[Δ(n)]).
#[derive(Args, Debug, Clone)]
pub struct ComplexSource {
    #[arg(long, conflicts_with = "simplex")]
    pub complex: Option<PathBuf>,
    /// Use the normalized chains of Z[Δ(n)] over --ring (default Z).
    #[arg(long, value_name = "n")]
    pub simplex: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalized chains of a simplicial module.
    Normalize(SimplicialSource),
    /// The simplicial module Γ(C) and the comparison φ: NΓC -> C.
    Gamma(ComplexSource),
    /// φ and ψ are isomorphisms and satisfy the triangle identities.
    Roundtrip {
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long)]
        simplicial: Option<PathBuf>,
        /// Use X = Z[Δ(n)] and C = N(X).
        #[arg(long, value_name = "n")]
        simplex: Option<usize>,
    },
    /// The shuffle map: chain map, aw ∘ sh = id and the symmetry square.
    ShuffleCheck(PairSource),
    /// The Alexander-Whitney map and its failure to commute with the twist.
    AwCheck(PairSource),
    /// Ranks of N(ΓC ⊗̂ ΓC').
    LargeTensor {
        #[command(flatten)]
        first: ComplexSource,
        #[arg(long)]
        second: Option<PathBuf>,
    },
    /// Unit, associator, lax map, twist, hexagon and pentagon for C ⊗̃ -.
    TransferredStructure {
        #[command(flatten)]
        first: ComplexSource,
        /// Skip the pentagon, which needs a fourfold large tensor.
        #[arg(long)]
        no_pentagon: bool,
    },
    /// Divided power axioms for a graded algebra and a γ table.
    VerifyAxioms {
        #[arg(long)]
        algebra: PathBuf,
        /// γ table; optional for free divided power documents.
        #[arg(long)]
        gamma: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
    /// The free divided power algebra on graded generators.
    FreeDp {
        /// Generators as label:degree, comma separated.
        #[arg(long, value_name = "x:2,y:1")]
        generators: String,
    },
    /// Symmetric invariants of the tensor algebra compared with the free divided power algebra.
    InvariantsModel {
        #[arg(long, value_name = "x:2,y:1")]
        generators: String,
    },
    /// Decide whether a graded algebra admits divided powers.
    SearchDp {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, default_value_t = pdchain::divpow::CANDIDATE_BOUND)]
        bound: u128,
    },
    /// The bar construction B(A) and its homotopy.
    Bar {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Hochschild homology and its divided powers.
    Hochschild {
        #[arg(long)]
        algebra: PathBuf,
        /// Report HH_0 through HH_n (default L - 1).
        #[arg(long, value_name = "n")]
        homology: Option<usize>,
        /// Apply gamma_i to each HH_m with m i <= n.
        #[arg(long, value_name = "i")]
        gamma: Option<usize>,
        /// Random representatives and lifts per class.
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Leibniz rule and divided power axioms at chain level.
    PdChainCheck {
        /// Commutative algebra document; checks the normalized chains of its bar construction.
        #[arg(long, conflicts_with = "graded")]
        algebra: Option<PathBuf>,
        /// Use the Hochschild chains instead of the bar construction.
        #[arg(long, requires = "algebra")]
        hochschild: bool,
        /// Graded algebra with zero differential.
        #[arg(long)]
        graded: Option<PathBuf>,
        #[arg(long, requires = "graded")]
        gamma: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        max_i: usize,
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Commutative monoid laws for the chains of B(A) under ⊗̃.
    MonoidCheck {
        #[arg(long)]
        algebra: PathBuf,
        /// Perturb the multiplication before checking.
        #[arg(long)]
        corrupt: bool,
    },
    /// Transfer a monoid between simplicial algebras and chain complexes.
    MonoidTransfer {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, value_enum, default_value_t = Direction::RoundTrip)]
        direction: Direction,
    },
    /// A fixed set of fast checks across all modules.
    Selftest,
}

#[derive(Args, Debug, Clone)]
pub struct PairSource {
    #[command(flatten)]
    pub first: SimplicialSource,
    #[arg(long)]
    pub second: Option<PathBuf>,
    #[arg(long, value_name = "m", conflicts_with = "second")]
    pub second_simplex: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    ToChain,
    ToSimplicial,
    RoundTrip,
}

/// What a subcommand found.
pub struct Report {
    pub command: &'static str,
    pub info: Vec<(String, Value)>,
    pub checks: CheckReport,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, info: Vec::new(), checks: CheckReport::default() }
    }

    pub fn info(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.info.push((key.into(), value.into()));
    }

    /// A single yes/no check with an optional witness.
    pub fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> Value) {
        self.checks.push(CheckEntry {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            checked: 1,
            failures: usize::from(!ok),
            witness: if ok { None } else { Some(witness()) },
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.all_pass()
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = format!("{}\n", self.command);
                for (k, v) in &self.info {
                    match v {
                        Value::String(t) => s += &format!("{k} {t}\n"),
                        v => s += &format!("{k} {v}\n"),
                    }
                }
                s += &self.checks.to_string();
                s += &format!("verdict {}\n", if self.passed() { "PASS" } else { "FAIL" });
                s
            }
            Format::Json => {
                let info: Map<String, Value> = self.info.iter().cloned().collect();
                let doc = json!({
                    "command": self.command,
                    "info": info,
                    "checks": self.checks.entries,
                    "verdict": if self.passed() { "PASS" } else { "FAIL" },
                });
                format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Report> {
    let c = &cli.common;
    match cli.command {
        Command::Normalize(src) => commands::normalize(c, &src),
        Command::Gamma(src) => commands::gamma(c, &src),
        Command::Roundtrip { complex, simplicial, simplex } => commands::roundtrip(c, complex, simplicial, simplex),
        Command::ShuffleCheck(pair) => commands::shuffle_check(c, &pair),
        Command::AwCheck(pair) => commands::aw_check(c, &pair),
        Command::LargeTensor { first, second } => commands::large_tensor(c, &first, second),
        Command::TransferredStructure { first, no_pentagon } => commands::transferred(c, &first, !no_pentagon),
        Command::VerifyAxioms { algebra, gamma, samples } => commands::verify_axioms(c, &algebra, gamma, samples),
        Command::FreeDp { generators } => commands::free_dp(c, &generators),
        Command::InvariantsModel { generators } => commands::invariants(c, &generators),
        Command::SearchDp { algebra, bound } => commands::search_dp(c, &algebra, bound),
        Command::Bar { algebra } => commands::bar(c, &algebra),
        Command::Hochschild { algebra, homology, gamma, trials } => {
            commands::hochschild(c, &algebra, homology, gamma, trials)
        }
        Command::PdChainCheck { algebra, hochschild, graded, gamma, max_i, samples } => {
            commands::pd_chain_check(c, algebra, hochschild, graded, gamma, max_i, samples)
        }
        Command::MonoidCheck { algebra, corrupt } => commands::monoid_check(c, &algebra, corrupt),
        Command::MonoidTransfer { algebra, direction } => commands::monoid_transfer(c, &algebra, direction),
        Command::Selftest => commands::selftest(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, out) = (cli.common.format, cli.common.out.clone());
    match run(cli) {
        Ok(report) => {
            let text = report.render(format);
            print!("{text}");
            let _ = std::io::stdout().flush();
            if let Some(path) = out {
                if let Err(e) = fs::write(&path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if report.passed() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
