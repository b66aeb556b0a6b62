//! Command-line driver for exact Wedderburn component analysis of rational
//! group algebras: enumerate component-realizing subgroup pairs, decide
//! Schur indices with recorded evidence, construct complete sets of matrix
//! units, and independently re-verify saved unit files.
//!
//! Exit codes: 0 success, 2 a verified exact relation failed, 3 a question
//! was not settled within budget, 4 malformed or rejected input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wedderburn_cli::fail::{CliResult, Failure, EXIT_INPUT};
use wedderburn_cli::units_cmd::{self, UnitsRequest};
use wedderburn_cli::{analyze, source, verify_cmd};

#[derive(Parser)]
#[command(
    name = "wedderburn",
    version,
    about = "Exact simple components, Schur indices, and matrix units of rational group algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate component-realizing pairs and decide every component
    Analyze(AnalyzeArgs),
    /// Construct and exactly verify the matrix units of one component
    Units(UnitsArgs),
    /// Re-verify a saved matrix-unit file with independent exact checks
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// Built-in group name
    #[arg(long, value_name = "NAME")]
    catalog: Option<String>,
    /// Permutation-group JSON file: {"degree": D, "generators": [[images]], "name": "..."}
    #[arg(long, value_name = "FILE", conflicts_with = "catalog")]
    group: Option<PathBuf>,
}

#[derive(Args)]
struct BudgetArgs {
    /// Seed for randomized selections (recorded in all outputs)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Height-shell cap for norm-equation and unit searches
    #[arg(long, default_value_t = 8)]
    height: u32,
    /// Maximum number of subgroups enumerated per search
    #[arg(long = "subgroup-budget", default_value_t = 4096)]
    subgroup_budget: usize,
    /// JSON file of external Schur-index verdicts, consulted only after
    /// the built-in criteria are exhausted
    #[arg(long, value_name = "FILE")]
    oracle: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Directory to write the JSON report into
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct UnitsArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Generators of H, as comma-separated element indices
    #[arg(long = "subgroup-H", value_name = "IDX,IDX,...")]
    subgroup_h: String,
    /// Generators of K (omit for the trivial subgroup)
    #[arg(long = "subgroup-K", value_name = "IDX,IDX,...")]
    subgroup_k: Option<String>,
    /// Explicit chain from H to G: ';'-separated levels, each a
    /// comma-separated generator list (first level must generate H,
    /// last must generate G)
    #[arg(long, value_name = "IDX,..;IDX,..")]
    chain: Option<String>,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Directory for the units JSON and the summary
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Matrix-unit JSON file to re-verify
    #[arg(value_name = "UNITS_FILE")]
    units: PathBuf,
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze(args) => run_analyze_cmd(args),
        Command::Units(args) => run_units_cmd(args),
        Command::Verify(args) => run_verify_cmd(args),
    }
}

fn check_budgets(budget: &BudgetArgs) -> CliResult<()> {
    if budget.height == 0 {
        return Err(Failure::input("--height must be positive"));
    }
    if budget.subgroup_budget == 0 {
        return Err(Failure::input("--subgroup-budget must be positive"));
    }
    Ok(())
}

fn load_source(source: &SourceArgs) -> CliResult<source::LoadedGroup> {
    source::load_group(source.catalog.as_deref(), source.group.as_deref())
}

fn run_analyze_cmd(args: AnalyzeArgs) -> CliResult<()> {
    check_budgets(&args.budget)?;
    let lg = load_source(&args.source)?;
    let oracle = match &args.budget.oracle {
        Some(path) => Some(source::load_oracle(path)?),
        None => None,
    };
    let (report, settled) = analyze::run_analyze(
        &lg,
        args.budget.seed,
        args.budget.height,
        args.budget.subgroup_budget,
        oracle.as_ref(),
    );
    let mut rendered_json =
        serde_json::to_string_pretty(&report).expect("report serialization cannot fail");
    rendered_json.push('\n');
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(format!("{}-analyze.json", source::sanitize(&lg.name)));
        std::fs::write(&path, &rendered_json)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    }
    match args.format {
        Format::Json => print!("{rendered_json}"),
        Format::Text => print!("{}", analyze::render_text(&report, &lg.generator_names)),
    }
    if settled {
        Ok(())
    } else {
        Err(Failure::budget(
            "some questions were not settled within budget (see the report)",
        ))
    }
}

fn run_units_cmd(args: UnitsArgs) -> CliResult<()> {
    check_budgets(&args.budget)?;
    let lg = load_source(&args.source)?;
    let h_indices = source::parse_indices("--subgroup-H", &args.subgroup_h)?;
    let k_indices = match &args.subgroup_k {
        Some(s) => Some(source::parse_indices("--subgroup-K", s)?),
        None => None,
    };
    let chain_indices = match &args.chain {
        Some(spec) => {
            let mut levels = Vec::new();
            for (i, level) in spec.split(';').enumerate() {
                levels.push(source::parse_indices(&format!("--chain level {i}"), level)?);
            }
            Some(levels)
        }
        None => None,
    };
    let oracle = match &args.budget.oracle {
        Some(path) => Some(source::load_oracle(path)?),
        None => None,
    };
    let req = UnitsRequest {
        lg: &lg,
        h_indices,
        k_indices,
        chain_indices,
        seed: args.budget.seed,
        height: args.budget.height,
        subgroup_budget: args.budget.subgroup_budget,
        oracle,
        out_dir: args.out.clone(),
        json_output: args.format == Format::Json,
    };
    units_cmd::run_units(&req)
}

fn run_verify_cmd(args: VerifyArgs) -> CliResult<()> {
    let lg = load_source(&args.source)?;
    verify_cmd::run_verify(&lg, &args.units, args.format == Format::Json)
}
