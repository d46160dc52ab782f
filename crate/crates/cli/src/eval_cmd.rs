use std::path::PathBuf;

use clap::Args;
use eat_core::lang::LanguageCode;
use eat_core::metrics::micro_f1;

use crate::errors::{CliError, CliResult};
use crate::run_cmd::{load_dataset, parse_tag_set};

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// BIO file with gold tags
    pub gold: PathBuf,

    /// BIO file with predicted tags, same tokenization
    pub pred: PathBuf,

    /// Comma-separated entity tag inventory
    #[arg(long, default_value = "PER,LOC,ORG")]
    pub tags: String,

    /// Language code recorded while parsing (does not affect the score)
    #[arg(long, default_value = "en")]
    pub lang: String,
}

pub fn cmd_eval(args: &EvalArgs) -> CliResult {
    let lang = LanguageCode::new(&args.lang)
        .map_err(|e| CliError::config(format!("--lang {:?}: {e}", args.lang)))?;
    let tags = parse_tag_set(&args.tags)?;
    let gold = load_dataset(&args.gold, lang, &tags)?;
    let pred = load_dataset(&args.pred, lang, &tags)?;

    let gold_tags: Vec<_> = gold.sentences.iter().map(|s| s.tags.clone()).collect();
    let pred_tags: Vec<_> = pred.sentences.iter().map(|s| s.tags.clone()).collect();
    let report = micro_f1(&gold_tags, &pred_tags).map_err(|e| CliError::data(e.to_string()))?;

    println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    Ok(())
}
