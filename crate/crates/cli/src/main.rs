//! `eat` — run the translation-based NER pipeline over a BIO dataset,
//! score predictions, measure translation quality, and harvest the
//! entity-aligned corpus. One binary so every artifact shares the same
//! manifest and fixture conventions.
//!
//! Credentials travel only through the environment (`EAT_API_BASE`,
//! `EAT_API_KEY`, `EAT_WIKI_UA`), never through flags.

mod eacl_cmd;
mod errors;
mod eval_cmd;
mod run_cmd;
mod translate_cmd;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Parser, Subcommand};

use crate::errors::CliResult;

#[derive(Parser)]
#[command(name = "eat", version, about = "Translation-based zero-shot NER toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predict entities for a BIO dataset via dual translation
    Run {
        #[command(flatten)]
        args: run_cmd::RunArgs,

        /// live | replay | record
        #[arg(long, value_enum, default_value_t = run_cmd::BackendMode::Live)]
        backend: run_cmd::BackendMode,
    },
    /// Run while capturing every chat exchange into the fixture store
    Record {
        #[command(flatten)]
        args: run_cmd::RunArgs,
    },
    /// Token-level micro F1 between a gold and a predicted BIO file
    Eval(eval_cmd::EvalArgs),
    /// BLEU and bigram-entropy loss between originals and round trips
    TranslateMetrics(translate_cmd::TranslateMetricsArgs),
    /// Harvest entity-aligned pairs from Wikipedia interlanguage links
    BuildEacl(eacl_cmd::BuildEaclArgs),
}

fn dispatch(cli: Cli) -> CliResult {
    match cli.command {
        Command::Run { args, backend } => run_cmd::cmd_run(&args, backend),
        Command::Record { args } => run_cmd::cmd_run(&args, run_cmd::BackendMode::Record),
        Command::Eval(args) => eval_cmd::cmd_eval(&args),
        Command::TranslateMetrics(args) => translate_cmd::cmd_translate_metrics(&args),
        Command::BuildEacl(args) => eacl_cmd::cmd_build_eacl(&args),
    }
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version are successful outcomes; anything else
            // is a usage error. clap routes the text to the right stream.
            let code = match err.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(error) => {
            eprintln!("error: {error}");
            error.exit_code()
        }
    }
}

fn main() {
    std::process::exit(real_main());
}
