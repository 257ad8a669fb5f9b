//! Command-line front end: model checking with witnesses, bounded
//! satisfiability search, unwinding export, and parity-game objectives.
//!
//! Verdicts and artifacts go to stdout and are byte-deterministic for fixed
//! inputs; the command echo and timing go to stderr. Exit codes: 0 the
//! command completed (TRUE and FALSE are both completions), 2 syntax error,
//! 3 invalid model or game, 4 unknown atom, 5 budget or time limit, 1 other
//! failures.

use clap::{Parser, Subcommand, ValueEnum};
use cyclecheck_core::checker::{CheckError, LabelingTable, ModelChecker};
use cyclecheck_core::formula::{parse, Formula, ParseError};
use cyclecheck_core::kripke::{
    build_nonprompt_formula, build_parity_formula, GameError, KripkeStructure, ModelError,
    ParityGame,
};
use cyclecheck_core::satsearch::{sat_search, SatError, SearchBudget};
use cyclecheck_core::unwind::unwind_bounded;
use cyclecheck_core::Lasso;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

#[derive(Parser)]
#[command(
    name = "cyclecheck",
    version,
    about = "Explicit-state model checking for CTL* with cycle quantifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a formula on a model; prints TRUE or FALSE
    Mc {
        /// Model file in the `world`/`init`/`edge` format
        model: PathBuf,
        /// Formula text, or `@path` to read it from a file
        formula: String,
        /// Print a lasso witness for a true existential formula
        #[arg(long)]
        witness: bool,
        /// Print the full labeling table as TSV
        #[arg(long)]
        table: bool,
    },
    /// Search for a small model of a formula
    Sat {
        /// Formula text, or `@path` to read it from a file
        formula: String,
        /// Largest world count to try
        #[arg(long = "max-states")]
        max_states: usize,
        /// Abort after this many seconds
        #[arg(long = "time-limit")]
        time_limit: Option<u64>,
    },
    /// Materialize a bounded prefix of the tree-like unwinding
    Unwind {
        model: PathBuf,
        /// Letter-length bound of the prefix (at least 1)
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        out: OutFormat,
    },
    /// Check an objective of a parity game under its recorded strategy
    Pg {
        /// Game file in the `state`/`edge`/`strategy`/`init` format
        game: PathBuf,
        #[arg(long, value_enum)]
        check: Objective,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Dot,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Objective {
    /// Player 0 wins the parity condition on every strategy-consistent play
    Par,
    /// Some play defeats the prompt-parity condition by unbounded delays
    Npmt,
}

struct Failure {
    exit: i32,
    message: String,
}

impl Failure {
    fn new(exit: i32, message: impl Into<String>) -> Self {
        Failure {
            exit,
            message: message.into(),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::new(2, e.to_string())
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let exit = match e {
            ModelError::Syntax { .. } => 2,
            _ => 3,
        };
        Failure::new(exit, e.to_string())
    }
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Self {
        let exit = match e {
            GameError::Syntax { .. } => 2,
            _ => 3,
        };
        Failure::new(exit, e.to_string())
    }
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        let exit = match e {
            CheckError::UnknownAtom(_) => 4,
            CheckError::NotAStateFormula(_) => 2,
            CheckError::BudgetExceeded => 5,
            _ => 1,
        };
        Failure::new(exit, e.to_string())
    }
}

impl From<SatError> for Failure {
    fn from(e: SatError) -> Self {
        match e {
            SatError::TimeLimitExceeded => Failure::new(5, e.to_string()),
            SatError::Check(inner) => inner.into(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    eprintln!("command: cyclecheck {echo}");
    let code = match run(cli.command) {
        Ok(stdout) => {
            print!("{stdout}");
            0
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.exit
        }
    };
    eprintln!("time: {} ms", started.elapsed().as_millis());
    std::process::exit(code);
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Mc {
            model,
            formula,
            witness,
            table,
        } => cmd_mc(&model, &formula, witness, table),
        Command::Sat {
            formula,
            max_states,
            time_limit,
        } => cmd_sat(&formula, max_states, time_limit),
        Command::Unwind { model, depth, out } => cmd_unwind(&model, depth as usize, out),
        Command::Pg { game, check } => cmd_pg(&game, check),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))
}

fn read_formula(arg: &str) -> Result<Formula, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => read_file(Path::new(path))?,
        None => arg.to_string(),
    };
    Ok(parse(&text)?)
}

fn checker() -> ModelChecker {
    let threads = std::env::var("CYCLECHECK_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(1);
    ModelChecker::new().with_threads(threads)
}

fn render_lasso(k: &KripkeStructure, lasso: &Lasso) -> String {
    let names = |ws: &[cyclecheck_core::World]| {
        ws.iter()
            .map(|&w| format!(" {}", k.name(w)))
            .collect::<String>()
    };
    let mut out = format!("prefix:{}\n", names(&lasso.prefix));
    out.push_str(&format!("loop:{}", names(&lasso.cycle)));
    if let Some(anchor) = lasso.anchor {
        out.push_str(&format!(" (anchor: {})", k.name(anchor)));
    }
    out.push('\n');
    out
}

fn render_verdict(
    k: &KripkeStructure,
    truth: bool,
    witness: Option<&Lasso>,
    table: Option<&LabelingTable>,
) -> String {
    let mut out = String::from(if truth { "TRUE\n" } else { "FALSE\n" });
    if let Some(lasso) = witness {
        lasso.validate(k).expect("witnesses replay before printing");
        out.push_str(&render_lasso(k, lasso));
    }
    if let Some(t) = table {
        out.push_str(&t.to_tsv(k));
    }
    out
}

fn cmd_mc(model: &Path, formula: &str, witness: bool, table: bool) -> Result<String, Failure> {
    let k = KripkeStructure::from_text(&read_file(model)?)?;
    let phi = read_formula(formula)?;
    let mut checker = checker();
    let (verdict, labeling) = if witness {
        checker.check_with_witness(&k, &phi)?
    } else {
        checker.check(&k, &phi)?
    };
    Ok(render_verdict(
        &k,
        verdict.truth,
        verdict.witness.as_ref(),
        table.then_some(&labeling),
    ))
}

fn cmd_sat(formula: &str, max_states: usize, time_limit: Option<u64>) -> Result<String, Failure> {
    if max_states == 0 {
        return Err(Failure::new(2, "--max-states must be at least 1"));
    }
    let phi = read_formula(formula)?;
    let budget = SearchBudget {
        max_worlds: max_states,
        max_atoms: None,
        time_limit: time_limit.map(Duration::from_secs),
    };
    match sat_search(&phi, &budget)? {
        Some(k) => Ok(k.to_text()),
        None => Ok(format!(
            "no model with ≤ {max_states} worlds (logic lacks the finite-model property; this is not UNSAT)\n"
        )),
    }
}

fn cmd_unwind(model: &Path, depth: usize, out: OutFormat) -> Result<String, Failure> {
    let k = KripkeStructure::from_text(&read_file(model)?)?;
    let t = unwind_bounded(&k, depth);
    Ok(match out {
        OutFormat::Text => t.to_text(&k),
        OutFormat::Dot => t.to_dot(&k),
    })
}

fn cmd_pg(game: &Path, check: Objective) -> Result<String, Failure> {
    let g = ParityGame::from_text(&read_file(game)?)?;
    let k = g.project()?;
    let phi = match check {
        Objective::Par => build_parity_formula(g.max_priority()),
        Objective::Npmt => build_nonprompt_formula(g.max_priority()),
    };
    let (verdict, _) = checker().check(&k, &phi)?;
    Ok(if verdict.truth { "TRUE\n" } else { "FALSE\n" }.to_string())
}
