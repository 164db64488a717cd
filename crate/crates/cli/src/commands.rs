use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use parsec::sentiment::Analyzer;
use parsec::{
    accuracy, compress_corpus, compression_rate, read_corpus_file, read_model_file, serialize_model,
    split_train_test, write_tagged_corpus, BaselineAnalyzer, Compressor, Corpus, EvolutionParams,
    FitnessReport, GenerationStats, Lexicon, NegationList,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::report::{with_averages, AccuracyDelta};
use crate::CliError;

pub const MODEL_FILE: &str = "model.json";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const HISTORY_FILE: &str = "history.csv";

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::at(path, e))?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputFile {
    pub file: String,
    pub sha256: String,
}

impl InputFile {
    fn of(path: &Path) -> Result<Self, CliError> {
        Ok(InputFile {
            file: path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
            sha256: sha256_file(path)?,
        })
    }
}

/// Everything needed to repeat a run. No timestamps or absolute paths, so two
/// runs with the same inputs write identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub corpus: InputFile,
    pub lexicon: InputFile,
    pub negations: Option<InputFile>,
    pub train_fraction: f64,
    pub train_instances: usize,
    pub test_instances: usize,
    pub params: EvolutionParams,
    pub best: FitnessReport,
    pub best_rules: usize,
    pub train_compression_rate: f64,
    pub history: Vec<GenerationStats>,
}

#[derive(Serialize)]
struct HistoryRow {
    generation: usize,
    best_total: f64,
    best_raw_fitness: i64,
    best_average_change: f64,
    best_rules: usize,
    best_compression_rate: f64,
    mean_total: f64,
    mean_compression_rate: f64,
    min_compression_rate: f64,
    max_compression_rate: f64,
}

impl From<&GenerationStats> for HistoryRow {
    fn from(g: &GenerationStats) -> Self {
        HistoryRow {
            generation: g.generation,
            best_total: g.best.total,
            best_raw_fitness: g.best.raw_fitness,
            best_average_change: g.best.average_change,
            best_rules: g.best.num_rules,
            best_compression_rate: g.best.compression_rate,
            mean_total: g.mean_total,
            mean_compression_rate: g.mean_compression_rate,
            min_compression_rate: g.min_compression_rate,
            max_compression_rate: g.max_compression_rate,
        }
    }
}

pub fn load_analyzer(cfg: &ExperimentConfig) -> Result<BaselineAnalyzer, CliError> {
    let lex_path =
        cfg.lexicon.as_ref().ok_or_else(|| CliError::Config("`lexicon`: missing lexicon path".into()))?;
    let lexicon = Lexicon::read_file(lex_path).map_err(|e| CliError::at(lex_path, e))?;
    let negations = match &cfg.negations {
        Some(p) => NegationList::read_file(p).map_err(|e| CliError::at(p, e))?,
        None => NegationList::default(),
    };
    BaselineAnalyzer::new(lexicon, negations).map_err(|e| CliError::at(lex_path, e))
}

pub fn load_corpus(path: &Path) -> Result<Corpus, CliError> {
    read_corpus_file(path).map_err(|e| CliError::at(path, e))
}

fn split(corpus: &Corpus, cfg: &ExperimentConfig) -> Result<(Corpus, Corpus), CliError> {
    split_train_test(corpus, cfg.train_fraction, cfg.params.seed).map_err(|e| CliError::at(corpus.name(), e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::at(path, e))
}

/// Per-corpus result of [`evolve`].
#[derive(Clone, Debug)]
pub struct EvolveOutcome {
    pub dataset: String,
    pub dir: PathBuf,
    pub manifest: Manifest,
}

/// Evolves one compressor per corpus on its training split and writes
/// `<out>/<corpus>/{model.json, manifest.json, history.csv}`.
pub fn evolve(cfg: &ExperimentConfig) -> Result<Vec<EvolveOutcome>, CliError> {
    cfg.validate()?;
    let analyzer = load_analyzer(cfg)?;
    let mut outcomes = Vec::new();
    for path in &cfg.corpora {
        let corpus = load_corpus(path)?;
        let dir = cfg.out.join(corpus.name());
        if outcomes.iter().any(|o: &EvolveOutcome| o.dir == dir) {
            return Err(CliError::Config(format!("`corpus`: two corpora are named `{}`", corpus.name())));
        }
        let (train, test) = split(&corpus, cfg)?;
        log::info!(
            "{}: evolving on {} training instances ({} held out)",
            corpus.name(),
            train.len(),
            test.len()
        );
        let run = parsec::evolve(&cfg.params, &train, &analyzer)?;
        let best = &run.best;
        let manifest = Manifest {
            tool: concat!("parsec ", env!("CARGO_PKG_VERSION")).to_string(),
            corpus: InputFile::of(path)?,
            lexicon: InputFile::of(cfg.lexicon.as_deref().expect("validated"))?,
            negations: cfg.negations.as_deref().map(InputFile::of).transpose()?,
            train_fraction: cfg.train_fraction,
            train_instances: train.len(),
            test_instances: test.len(),
            params: cfg.params.clone(),
            best: best.fitness.clone(),
            best_rules: best.compressor.num_rules(),
            train_compression_rate: best.fitness.compression_rate,
            history: run.history.clone(),
        };
        fs::create_dir_all(&dir).map_err(|e| CliError::at(&dir, e))?;
        write_file(&dir.join(MODEL_FILE), serialize_model(&best.compressor).as_bytes())?;
        let mut json = serde_json::to_string_pretty(&manifest)?;
        json.push('\n');
        write_file(&dir.join(MANIFEST_FILE), json.as_bytes())?;
        let history_path = dir.join(HISTORY_FILE);
        let mut w = csv::Writer::from_path(&history_path).map_err(|e| CliError::at(&history_path, e))?;
        for g in &run.history {
            w.serialize(HistoryRow::from(g))?;
        }
        w.flush().map_err(|e| CliError::at(&history_path, e))?;
        log::info!(
            "{}: best total {:.3}, {} rules, train compression {:.2}%",
            corpus.name(),
            best.fitness.total,
            best.compressor.num_rules(),
            best.fitness.compression_rate
        );
        outcomes.push(EvolveOutcome { dataset: corpus.name().to_string(), dir, manifest });
    }
    Ok(outcomes)
}

/// Applies a model to a corpus and writes the result in the same format, to
/// `out` or stdout. Returns the achieved compression rate.
pub fn compress(model: &Path, corpus: &Path, out: Option<&Path>) -> Result<f64, CliError> {
    let compressor = read_model_file(model).map_err(|e| CliError::at(model, e))?;
    let corpus = load_corpus(corpus)?;
    let compressed = compress_corpus(&compressor, &corpus);
    match out {
        Some(path) => {
            let mut buf = Vec::new();
            write_tagged_corpus(&compressed, &mut buf).map_err(|e| CliError::at(path, e))?;
            write_file(path, &buf)?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_tagged_corpus(&compressed, &mut lock).map_err(|e| CliError::at("stdout", e))?;
            lock.flush().map_err(|e| CliError::at("stdout", e))?;
        }
    }
    Ok(compression_rate(&compressor, &corpus))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Split {
    /// The held-out part of the same split `evolve` used.
    #[default]
    Test,
    All,
}

fn models_for(
    cfg: &ExperimentConfig,
    models: &[PathBuf],
    names: &[String],
) -> Result<Vec<PathBuf>, CliError> {
    match models.len() {
        0 => Ok(names.iter().map(|n| cfg.out.join(n).join(MODEL_FILE)).collect()),
        1 => Ok(vec![models[0].clone(); names.len()]),
        n if n == names.len() => Ok(models.to_vec()),
        n => Err(CliError::Config(format!(
            "`model`: {n} models given for {} corpora (give one, or one per corpus)",
            names.len()
        ))),
    }
}

/// Baseline accuracy before and after compression, one row per corpus plus an
/// `Average` row when there are several.
pub fn evaluate(
    cfg: &ExperimentConfig,
    models: &[PathBuf],
    which: Split,
) -> Result<Vec<AccuracyDelta>, CliError> {
    cfg.validate()?;
    let analyzer = load_analyzer(cfg)?;
    let corpora = cfg.corpora.iter().map(|p| load_corpus(p)).collect::<Result<Vec<_>, _>>()?;
    let names: Vec<String> = corpora.iter().map(|c| c.name().to_string()).collect();
    let model_paths = models_for(cfg, models, &names)?;
    let mut rows = Vec::new();
    for (corpus, model_path) in corpora.iter().zip(&model_paths) {
        let compressor: Compressor = read_model_file(model_path).map_err(|e| CliError::at(model_path, e))?;
        let data = match which {
            Split::Test => split(corpus, cfg)?.1,
            Split::All => corpus.clone(),
        };
        let original = accuracy(&data, &analyzer, None);
        let compressed = accuracy(&data, &analyzer, Some(&compressor));
        log::info!(
            "{}: {} instances, compression {:.2}%",
            corpus.name(),
            data.len(),
            compression_rate(&compressor, &data)
        );
        rows.push(AccuracyDelta::new(corpus.name(), analyzer.name(), original, compressed));
    }
    Ok(with_averages(rows))
}

pub fn report(rows_csv: &Path) -> Result<Vec<AccuracyDelta>, CliError> {
    let file = fs::File::open(rows_csv).map_err(|e| CliError::at(rows_csv, e))?;
    crate::report::read_csv(file).map_err(|e| CliError::at(rows_csv, e))
}
