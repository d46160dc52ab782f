use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use eat_core::lang::LanguageCode;
use eat_core::sharegpt::{write_sharegpt, DEFAULT_INSTRUCTION};
use eat_eacl::{
    build_corpus, EaclError, HttpWikiTransport, RecordingWikiTransport, ReplayWikiTransport,
    WikiClient, WikiFixtureStore, WikiTransport, DEFAULT_REQUESTS_PER_SECOND,
};
use eat_gateway::RetryPolicy;

use crate::errors::{CliError, CliResult};
use crate::run_cmd::BackendMode;

#[derive(Debug, Args)]
pub struct BuildEaclArgs {
    /// File with one English entity name per line
    #[arg(long)]
    pub entities: PathBuf,

    /// Comma-separated target language codes, e.g. "ja,zh"
    #[arg(long)]
    pub langs: String,

    /// live | replay | record, as for `run`
    #[arg(long, value_enum, default_value_t = BackendMode::Live)]
    pub backend: BackendMode,

    /// Fixture store directory (read by replay, written by record)
    #[arg(long)]
    pub fixtures: Option<PathBuf>,

    /// Output directory for per-language corpus files and counts.json
    #[arg(long, default_value = "out")]
    pub out: PathBuf,

    /// Request-rate ceiling, requests per second
    #[arg(long, default_value_t = DEFAULT_REQUESTS_PER_SECOND)]
    pub rate: f64,

    /// Harvest state file; reusing it resumes an interrupted run
    /// (defaults to harvest_state.json inside the output directory)
    #[arg(long)]
    pub state: Option<PathBuf>,
}

fn read_entities(path: &Path) -> Result<Vec<String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("reading {}: {e}", path.display())))?;
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::to_string).collect())
}

fn parse_langs(spec: &str) -> Result<Vec<LanguageCode>, CliError> {
    spec.split(',')
        .map(str::trim)
        .map(|code| {
            LanguageCode::new(code).map_err(|e| CliError::config(format!("--langs {spec:?}: {e}")))
        })
        .collect()
}

fn build_transport(
    mode: BackendMode,
    fixtures: Option<&Path>,
) -> Result<Box<dyn WikiTransport>, CliError> {
    let fixtures = |mode: &str| {
        fixtures.ok_or_else(|| CliError::config(format!("--fixtures is required in {mode} mode")))
    };
    match mode {
        BackendMode::Live => {
            Ok(Box::new(HttpWikiTransport::from_env().map_err(CliError::config)?))
        }
        BackendMode::Replay => {
            let store = WikiFixtureStore::open(fixtures("replay")?)
                .map_err(|e| CliError::config(e.to_string()))?;
            Ok(Box::new(ReplayWikiTransport::new(store)))
        }
        BackendMode::Record => {
            let store = WikiFixtureStore::create(fixtures("record")?)
                .map_err(|e| CliError::config(e.to_string()))?;
            let live = HttpWikiTransport::from_env().map_err(CliError::config)?;
            Ok(Box::new(RecordingWikiTransport::new(Box::new(live), store)))
        }
    }
}

pub fn cmd_build_eacl(args: &BuildEaclArgs) -> CliResult {
    let languages = parse_langs(&args.langs)?;
    let entities = read_entities(&args.entities)?;
    let transport = build_transport(args.backend, args.fixtures.as_deref())?;
    let client = WikiClient::new(transport, args.rate, RetryPolicy::default())
        .map_err(|e| CliError::config(e.to_string()))?;

    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::data(format!("creating {}: {e}", args.out.display())))?;
    let state_path =
        args.state.clone().unwrap_or_else(|| args.out.join("harvest_state.json"));

    let outcome = build_corpus(&client, &entities, &languages, &state_path).map_err(|e| match e {
        EaclError::State { .. } | EaclError::Fixture { .. } => CliError::data(e.to_string()),
        EaclError::Config(_) => CliError::config(e.to_string()),
        other => CliError::partial_network(other.to_string()),
    })?;

    let empty = Vec::new();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for lang in &languages {
        let pairs = outcome.state.pairs.get(lang).unwrap_or(&empty);
        let json = write_sharegpt(pairs, DEFAULT_INSTRUCTION)
            .map_err(|e| CliError::data(e.to_string()))?;
        let path = args.out.join(format!("eacl_{lang}.json"));
        fs::write(&path, json)
            .map_err(|e| CliError::data(format!("writing {}: {e}", path.display())))?;
        counts.insert(lang.as_str(), pairs.len());
        println!("{lang}\t{}", pairs.len());
    }
    let counts_json =
        serde_json::to_string_pretty(&counts).expect("counts serialize") + "\n";
    let counts_path = args.out.join("counts.json");
    fs::write(&counts_path, counts_json)
        .map_err(|e| CliError::data(format!("writing {}: {e}", counts_path.display())))?;
    println!("failed\t{}", outcome.failed.len());

    if !outcome.failed.is_empty() {
        return Err(CliError::partial_network(format!(
            "{} entities failed after retries (output is partial, rerun with the same --state to finish): {}",
            outcome.failed.len(),
            outcome.failed.join(", ")
        )));
    }
    Ok(())
}
