//! Experiment configuration: a flat TOML file overlaid with command-line flags.
//!
//! ```toml
//! corpus = ["data/books.txt", "data/dvd.txt"]
//! lexicon = "afinn.txt"
//! lcb = 20
//! ucb = 23
//! rules_min = 20
//! rules_max = 90
//! seed = 7
//! ```
//!
//! Keys other than `corpus`, `lexicon`, `negations`, `out`, `format` and
//! `train_fraction` are [`EvolutionParams`] fields.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use parsec::EvolutionParams;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Table,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            other => Err(format!("unknown format `{other}` (expected csv or table)")),
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub corpus: Vec<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub negations: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub train_fraction: Option<f64>,
    pub lcb: Option<f64>,
    pub ucb: Option<f64>,
    pub rules_min: Option<usize>,
    pub rules_max: Option<usize>,
    pub population_size: Option<usize>,
    pub generations: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub corpora: Vec<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub negations: Option<PathBuf>,
    pub params: EvolutionParams,
    pub out: PathBuf,
    pub format: Format,
    pub train_fraction: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            corpora: Vec::new(),
            lexicon: None,
            negations: None,
            params: EvolutionParams::default(),
            out: PathBuf::from("runs"),
            format: Format::Table,
            train_fraction: 0.7,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(PathBuf),
    Many(Vec<PathBuf>),
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn take<T: serde::de::DeserializeOwned>(table: &mut toml::Table, key: &str) -> Result<Option<T>, CliError> {
    table.remove(key).map(|v| v.try_into().map_err(|e| config_err(format!("`{key}`: {e}")))).transpose()
}

impl ExperimentConfig {
    /// Parses config text. Relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let mut table: toml::Table = text.parse().map_err(|e| config_err(format!("config: {e}")))?;
        let mut cfg = ExperimentConfig::default();
        let rebase = |p: PathBuf| if p.is_relative() { base.join(p) } else { p };
        cfg.corpora = match take::<OneOrMany>(&mut table, "corpus")? {
            None => Vec::new(),
            Some(OneOrMany::One(p)) => vec![rebase(p)],
            Some(OneOrMany::Many(v)) => v.into_iter().map(rebase).collect(),
        };
        cfg.lexicon = take::<PathBuf>(&mut table, "lexicon")?.map(rebase);
        cfg.negations = take::<PathBuf>(&mut table, "negations")?.map(rebase);
        if let Some(out) = take::<PathBuf>(&mut table, "out")? {
            cfg.out = rebase(out);
        }
        if let Some(f) = take::<String>(&mut table, "format")? {
            cfg.format = f.parse().map_err(|e: String| config_err(format!("`format`: {e}")))?;
        }
        if let Some(f) = take::<f64>(&mut table, "train_fraction")? {
            cfg.train_fraction = f;
        }
        cfg.params = toml::Value::Table(table)
            .try_into()
            .map_err(|e| config_err(format!("evolution parameters: {e}")))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| config_err(format!("`config`: cannot read {}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new("")))
    }

    /// Defaults, then the config file if any, then flags.
    pub fn resolve(config: Option<&Path>, o: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match config {
            Some(p) => Self::load(p)?,
            None => ExperimentConfig::default(),
        };
        if !o.corpus.is_empty() {
            cfg.corpora = o.corpus.clone();
        }
        if o.lexicon.is_some() {
            cfg.lexicon = o.lexicon.clone();
        }
        if o.negations.is_some() {
            cfg.negations = o.negations.clone();
        }
        if let Some(out) = &o.out {
            cfg.out = out.clone();
        }
        if let Some(f) = o.format {
            cfg.format = f;
        }
        if let Some(f) = o.train_fraction {
            cfg.train_fraction = f;
        }
        let p = &mut cfg.params;
        if let Some(v) = o.lcb {
            p.lcb = v;
        }
        if let Some(v) = o.ucb {
            p.ucb = v;
        }
        if let Some(v) = o.rules_min {
            p.rules_min = v;
        }
        if let Some(v) = o.rules_max {
            p.rules_max = v;
        }
        if let Some(v) = o.population_size {
            p.population_size = v;
        }
        if let Some(v) = o.generations {
            p.generations = v;
        }
        if let Some(v) = o.seed {
            p.seed = v;
        }
        Ok(cfg)
    }

    /// Checks what every command that trains or scores needs: at least one
    /// corpus, an existing lexicon, valid parameters and split fraction.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.corpora.is_empty() {
            return Err(config_err("`corpus`: no corpus given"));
        }
        for c in &self.corpora {
            require_file("corpus", c)?;
        }
        match &self.lexicon {
            None => return Err(config_err("`lexicon`: missing lexicon path")),
            Some(p) => require_file("lexicon", p)?,
        }
        if let Some(p) = &self.negations {
            require_file("negations", p)?;
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(config_err(format!("`train_fraction`: {} not in (0, 1)", self.train_fraction)));
        }
        self.params.validate().map_err(|e| config_err(e.to_string()))
    }
}

fn require_file(field: &str, path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(config_err(format!("`{field}`: no such file {}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_harness_and_params() {
        let cfg = ExperimentConfig::parse(
            "corpus = \"a.txt\"\nlexicon = \"/abs/lex.txt\"\nlcb = 20\nucb = 23\nrules_min = 20\nrules_max = 90\nformat = \"csv\"\n",
            Path::new("base"),
        )
        .unwrap();
        assert_eq!(cfg.corpora, vec![PathBuf::from("base/a.txt")]);
        assert_eq!(cfg.lexicon, Some(PathBuf::from("/abs/lex.txt")));
        assert_eq!((cfg.params.lcb, cfg.params.ucb, cfg.params.rules_max), (20.0, 23.0, 90));
        assert_eq!(cfg.params.population_size, 250);
        assert_eq!(cfg.format, Format::Csv);
    }

    #[test]
    fn unknown_key_is_a_config_error() {
        let err = ExperimentConfig::parse("popsize = 3\n", Path::new("")).unwrap_err();
        assert!(matches!(err, CliError::Config(m) if m.contains("popsize")));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        fs::write(&path, "seed = 1\npopulation_size = 10\n").unwrap();
        let o = Overrides { seed: Some(9), ..Default::default() };
        let cfg = ExperimentConfig::resolve(Some(&path), &o).unwrap();
        assert_eq!((cfg.params.seed, cfg.params.population_size), (9, 10));
    }

    #[test]
    fn missing_lexicon_names_the_field() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = dir.path().join("c.txt");
        fs::write(&corpus, "").unwrap();
        let cfg = ExperimentConfig { corpora: vec![corpus], ..Default::default() };
        let CliError::Config(msg) = cfg.validate().unwrap_err() else { panic!() };
        assert!(msg.contains("`lexicon`"), "{msg}");
    }
}
