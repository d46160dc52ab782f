use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, ValueEnum};
use eat_core::corpus::{parse_bio_file, write_predictions, DatasetSplit, SplitName};
use eat_core::lang::LanguageCode;
use eat_core::normalize::NormalizationPolicy;
use eat_core::tag::TagSet;
use eat_gateway::{
    ChatBackend, FixtureStore, HttpBackend, RecordingBackend, ReplayBackend, RequestParams,
    RetryPolicy, TemplateSet,
};
use eat_pipeline::{
    run, ChatEngine, DictionaryEngine, ExtractionEngine, PipelineConfig, SentenceResult,
    DEFAULT_EXTRACTOR_PREFIX,
};

use crate::errors::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendMode {
    /// OpenAI-compatible endpoint from EAT_API_BASE / EAT_API_KEY.
    Live,
    /// Recorded fixtures only; any unrecorded request aborts the run.
    Replay,
    /// Live endpoint, writing every new exchange into the fixture store.
    Record,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// BIO-format input file (token and tag columns, blank-line separated)
    #[arg(long)]
    pub input: PathBuf,

    /// Two-letter language code of the input sentences
    #[arg(long)]
    pub lang: String,

    /// Fixture store directory (read by replay, written by record)
    #[arg(long)]
    pub fixtures: Option<PathBuf>,

    /// Output directory for predictions.bio, manifest.json, dropped.tsv
    #[arg(long, default_value = "out")]
    pub out: PathBuf,

    /// Reasoning rounds before the final filter call (1..=5)
    #[arg(long, default_value_t = 2)]
    pub rounds: u32,

    /// Extraction engine: "chat" or "dict:PATH" for a dictionary file
    #[arg(long, default_value = "chat")]
    pub engine: String,

    /// Model name sent to the live endpoint; replay stores only match
    /// requests recorded under the same name
    #[arg(long, default_value = "mock-llm")]
    pub model: String,

    /// Worker threads; output order never depends on this
    #[arg(long, default_value_t = 4)]
    pub parallelism: usize,

    /// Comma-separated entity tag inventory
    #[arg(long, default_value = "PER,LOC,ORG")]
    pub tags: String,

    /// JSON file of prompt-template overrides, keyed by template id
    #[arg(long)]
    pub templates: Option<PathBuf>,

    /// Longest token span a grounded entity may cover
    #[arg(long, default_value_t = 10)]
    pub max_span_tokens: usize,

    #[arg(long, default_value_t = 0.0)]
    pub temperature: f64,

    #[arg(long, default_value_t = 512)]
    pub max_output_tokens: u32,
}

pub fn parse_tag_set(spec: &str) -> Result<TagSet, CliError> {
    TagSet::new(spec.split(',').map(str::trim))
        .map_err(|e| CliError::config(format!("--tags {spec:?}: {e}")))
}

pub fn load_templates(path: Option<&Path>) -> Result<TemplateSet, CliError> {
    let Some(path) = path else {
        return Ok(TemplateSet::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("reading {}: {e}", path.display())))?;
    let overrides: BTreeMap<String, String> = serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("parsing {}: {e}", path.display())))?;
    TemplateSet::with_overrides(&overrides).map_err(CliError::config)
}

pub fn load_dataset(path: &Path, lang: LanguageCode, tags: &TagSet) -> Result<DatasetSplit, CliError> {
    let bytes =
        fs::read(path).map_err(|e| CliError::data(format!("reading {}: {e}", path.display())))?;
    parse_bio_file(&bytes, lang, tags, SplitName::Test)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

fn build_backend(
    mode: BackendMode,
    fixtures: Option<&Path>,
    model: &str,
    parallelism: usize,
) -> Result<Arc<dyn ChatBackend>, CliError> {
    let fixtures = |mode: &str| {
        fixtures.ok_or_else(|| CliError::config(format!("--fixtures is required in {mode} mode")))
    };
    match mode {
        BackendMode::Live => {
            let backend = HttpBackend::from_env(model, RetryPolicy::default(), parallelism)
                .map_err(|e| CliError::config(e.to_string()))?;
            Ok(Arc::new(backend))
        }
        BackendMode::Replay => {
            let store = FixtureStore::open(fixtures("replay")?)
                .map_err(|e| CliError::config(e.to_string()))?;
            Ok(Arc::new(ReplayBackend::new(store, model)))
        }
        BackendMode::Record => {
            let store = FixtureStore::create(fixtures("record")?)
                .map_err(|e| CliError::config(e.to_string()))?;
            let live = HttpBackend::from_env(model, RetryPolicy::default(), parallelism)
                .map_err(|e| CliError::config(e.to_string()))?;
            Ok(Arc::new(RecordingBackend::new(Arc::new(live), store)))
        }
    }
}

fn build_engine(
    spec: &str,
    backend: &Arc<dyn ChatBackend>,
    params: RequestParams,
    tags: &TagSet,
) -> Result<Arc<dyn ExtractionEngine>, CliError> {
    if spec == "chat" {
        return Ok(Arc::new(ChatEngine::new(backend.clone(), params)));
    }
    if let Some(path) = spec.strip_prefix("dict:") {
        let engine = DictionaryEngine::from_file(Path::new(path), tags)
            .map_err(|e| CliError::data(e.to_string()))?;
        return Ok(Arc::new(engine));
    }
    Err(CliError::config(format!(
        "--engine must be \"chat\" or \"dict:PATH\", got {spec:?}"
    )))
}

fn write_out(dir: &Path, name: &str, content: &str) -> CliResult {
    let path = dir.join(name);
    fs::write(&path, content)
        .map_err(|e| CliError::data(format!("writing {}: {e}", path.display())))
}

pub fn cmd_run(args: &RunArgs, mode: BackendMode) -> CliResult {
    if !(1..=5).contains(&args.rounds) {
        return Err(CliError::config(format!(
            "--rounds must be between 1 and 5, got {}",
            args.rounds
        )));
    }
    let lang = LanguageCode::new(&args.lang)
        .map_err(|e| CliError::config(format!("--lang {:?}: {e}", args.lang)))?;
    let tags = parse_tag_set(&args.tags)?;
    let templates = load_templates(args.templates.as_deref())?;
    let params = RequestParams {
        temperature: args.temperature,
        max_tokens: args.max_output_tokens,
    };
    let backend = build_backend(mode, args.fixtures.as_deref(), &args.model, args.parallelism)?;
    let engine = build_engine(&args.engine, &backend, params, &tags)?;
    let dataset = load_dataset(&args.input, lang, &tags)?;

    let config = PipelineConfig {
        backend,
        engine,
        templates,
        params,
        rounds: args.rounds,
        policy: NormalizationPolicy::default(),
        max_span_tokens: args.max_span_tokens,
        extractor_prefix: DEFAULT_EXTRACTOR_PREFIX.to_string(),
        tags,
        parallelism: args.parallelism,
        strict_replay: mode == BackendMode::Replay,
        dataset_label: args.input.display().to_string(),
    };

    let output = run(&dataset, &config).map_err(|e| CliError::backend(e.to_string()))?;

    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::data(format!("creating {}: {e}", args.out.display())))?;
    let predicted: Vec<_> = output.results.iter().map(SentenceResult::predicted_tags).collect();
    let bio = write_predictions(&dataset, &predicted).map_err(|e| CliError::data(e.to_string()))?;
    write_out(&args.out, "predictions.bio", &bio)?;

    let manifest = serde_json::to_string_pretty(&output.manifest)
        .expect("manifests serialize") + "\n";
    write_out(&args.out, "manifest.json", &manifest)?;

    let mut dropped_log = String::new();
    let mut dropped = 0usize;
    for result in &output.results {
        if let SentenceResult::Completed(outcome) = result {
            for entity in &outcome.dropped {
                dropped += 1;
                dropped_log.push_str(&format!(
                    "{}\t{}\t{}\n",
                    outcome.sentence_id, entity.surface, entity.reason
                ));
            }
        }
    }
    write_out(&args.out, "dropped.tsv", &dropped_log)?;

    println!("sentences\t{}", output.manifest.sentences);
    println!("failures\t{}", output.manifest.failures);
    println!("dropped\t{dropped}");

    if output.manifest.failures > 0 {
        let detail: Vec<String> = output
            .results
            .iter()
            .filter_map(|r| match r {
                SentenceResult::Failed(f) => {
                    Some(format!("sentence {}: {}", f.sentence_id, f.message))
                }
                SentenceResult::Completed(_) => None,
            })
            .collect();
        return Err(CliError::partial_network(format!(
            "{} of {} sentences failed:\n{}",
            output.manifest.failures,
            output.manifest.sentences,
            detail.join("\n")
        )));
    }
    Ok(())
}
