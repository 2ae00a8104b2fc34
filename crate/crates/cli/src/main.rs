use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod render;

use commands::{CliError, Exit};

#[derive(Parser)]
#[command(name = "ratlogic", version, about = "Exact reasoning over rational Lukasiewicz, product and Goedel logics")]
struct Cli {
    /// Also write the JSON document to this file.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Logic {
    #[value(name = "RL")]
    Rl,
    #[value(name = "RP")]
    Rp,
    #[value(name = "RG")]
    Rg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Admissible,
    Derivable,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFlavor {
    Luk,
    Prod,
    Godel,
}

#[derive(Args)]
struct Budget {
    #[arg(long, default_value_t = 100_000)]
    budget_tuples: u64,
    #[arg(long, default_value_t = 6)]
    budget_depth: u32,
    #[arg(long, default_value_t = 10_000)]
    budget_steps: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Decide admissibility or derivability of a rule.
    Check {
        #[arg(long)]
        logic: Logic,
        #[arg(long)]
        mode: Mode,
        /// Goedel extension: `r=m/n` or `p=m/n,gamma=k|omega`.
        #[arg(long)]
        ext: Option<String>,
        #[arg(long, required_unless_present = "rules_file", conflicts_with = "rules_file")]
        rule: Option<String>,
        /// One rule per line; blank lines and lines starting with `%` are skipped.
        #[arg(long)]
        rules_file: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Evaluate a formula in one of the chains.
    Eval {
        /// `luk`, `product`, `product-trivialized`, `boolean`, `mv:N`, or
        /// `godel:r=m/n` / `godel:p=m/n,gamma=k|omega`.
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        formula: String,
        /// Comma-separated `xK=value` pairs.
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Compare the varieties generated by two Goedel chains.
    VarietyCompare {
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
    },
    /// Equational axioms of the variety generated by a Goedel chain.
    VarietyAxioms {
        #[arg(long)]
        g: String,
        /// Comma-separated constants to instantiate the axiom schema on.
        #[arg(long, default_value = "")]
        mentioned: String,
    },
    /// Structural completeness flags of a Goedel extension or chain quasivariety.
    Classify {
        #[arg(long, conflicts_with = "chain", required_unless_present = "chain")]
        ext: Option<String>,
        #[arg(long)]
        chain: Option<String>,
    },
    /// Validate the bookkeeping equations of a finite interpretation table.
    CheckTable {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        flavor: TableFlavor,
    },
    /// Check the gadget formula at its distinguished element.
    Gadget {
        /// Comma-separated primes.
        #[arg(long)]
        primes: String,
    },
}

fn dispatch(cmd: Command) -> Result<(serde_json::Value, Exit), CliError> {
    match cmd {
        Command::Check { logic, mode, ext, rule, rules_file, budget } => {
            let logic = match logic {
                Logic::Rl => commands::LogicChoice::Luk,
                Logic::Rp => commands::LogicChoice::Product,
                Logic::Rg => commands::LogicChoice::Godel,
            };
            let derivable = matches!(mode, Mode::Derivable);
            let budget = commands::budget(budget.budget_tuples, budget.budget_depth, budget.budget_steps)?;
            match (rule, rules_file) {
                (Some(text), _) => commands::check(logic, derivable, ext.as_deref(), &text, &budget),
                (None, Some(path)) => commands::check_file(logic, derivable, ext.as_deref(), &path, &budget),
                (None, None) => Err(CliError::Input("either --rule or --rules-file is required".into())),
            }
        }
        Command::Eval { algebra, formula, assign } => commands::eval(&algebra, &formula, &assign),
        Command::VarietyCompare { g1, g2 } => commands::variety_compare(&g1, &g2),
        Command::VarietyAxioms { g, mentioned } => commands::variety_axioms(&g, &mentioned),
        Command::Classify { ext, chain } => commands::classify(ext.as_deref(), chain.as_deref()),
        Command::CheckTable { table, flavor } => {
            let flavor = match flavor {
                TableFlavor::Luk => ratlogic::chains::Flavor::Luk,
                TableFlavor::Prod => ratlogic::chains::Flavor::Prod,
                TableFlavor::Godel => ratlogic::chains::Flavor::Godel,
            };
            commands::check_table(&table, flavor)
        }
        Command::Gadget { primes } => commands::gadget(&primes),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::InputError as u8 } else { 0 });
        }
    };
    let (doc, exit) = match dispatch(cli.command) {
        Ok(out) => out,
        Err(e) => (serde_json::json!({ "status": "error", "error": e.to_string() }), Exit::InputError),
    };
    let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout(), "{text}");
    if let Some(path) = cli.json_out {
        if let Err(e) = std::fs::write(&path, format!("{text}\n")) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(exit as u8)
}
