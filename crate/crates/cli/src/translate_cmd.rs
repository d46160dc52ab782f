use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use eat_core::metrics::{bleu, entropy_loss};

use crate::errors::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct TranslateMetricsArgs {
    /// One original sentence per line
    pub original: PathBuf,

    /// The round-trip translation of each line, same order
    pub roundtrip: PathBuf,

    /// Treat every non-whitespace character as a token (for scripts
    /// without word spacing) instead of splitting on whitespace
    #[arg(long)]
    pub chars: bool,
}

fn read_lines(path: &Path) -> Result<Vec<String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("reading {}: {e}", path.display())))?;
    Ok(text.lines().map(str::to_string).collect())
}

fn tokenize(line: &str, chars: bool) -> Vec<String> {
    if chars {
        line.chars().filter(|c| !c.is_whitespace()).map(String::from).collect()
    } else {
        line.split_whitespace().map(str::to_string).collect()
    }
}

pub fn cmd_translate_metrics(args: &TranslateMetricsArgs) -> CliResult {
    let originals = read_lines(&args.original)?;
    let roundtrips = read_lines(&args.roundtrip)?;
    if originals.len() != roundtrips.len() {
        return Err(CliError::data(format!(
            "{} has {} lines but {} has {}",
            args.original.display(),
            originals.len(),
            args.roundtrip.display(),
            roundtrips.len()
        )));
    }

    println!("line\tbleu\tentropy_loss");
    let mut bleu_sum = 0.0;
    let mut loss_sum = 0.0;
    for (index, (original, roundtrip)) in originals.iter().zip(&roundtrips).enumerate() {
        let original = tokenize(original, args.chars);
        let roundtrip = tokenize(roundtrip, args.chars);
        // Forward translation is scored with the round trip as candidate
        // and the original as reference.
        let score = bleu(&roundtrip, &original, 4).bleu;
        let loss = entropy_loss(&original, &roundtrip);
        bleu_sum += score;
        loss_sum += loss;
        println!("{}\t{score:.6}\t{loss:.6}", index + 1);
    }
    if !originals.is_empty() {
        let n = originals.len() as f64;
        println!("mean\t{:.6}\t{:.6}", bleu_sum / n, loss_sum / n);
    }
    Ok(())
}
