//! Dictionary sentiment scoring with a polarity-swapping negation flag.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::{self, BufRead};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::compressor::{compress_instance, Compressor};
use crate::corpus::{Corpus, LabeledInstance, Polarity};
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: expected `<word>\\t<value>`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("lexicon has no non-zero entries")]
    Empty,
}

/// Predicted sentiment. `Neutral` never equals a gold label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
    Neutral,
}

impl From<Polarity> for Label {
    fn from(p: Polarity) -> Self {
        match p {
            Polarity::Positive => Label::Positive,
            Polarity::Negative => Label::Negative,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
            Label::Neutral => "neutral",
        })
    }
}

/// Lowercased words mapped to non-zero sentiment values.
#[derive(Clone, Debug, PartialEq)]
pub struct Lexicon<S> {
    entries: HashMap<String, S>,
}

impl<S: Scalar> Lexicon<S> {
    /// Keys are lowercased; zero-valued entries are dropped. Later duplicates win.
    pub fn new<K: AsRef<str>>(entries: impl IntoIterator<Item = (K, S)>) -> Result<Self, LexiconError> {
        let entries: HashMap<String, S> = entries
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k.as_ref().to_lowercase(), v))
            .collect();
        if entries.is_empty() {
            return Err(LexiconError::Empty);
        }
        Ok(Lexicon { entries })
    }

    /// AFINN-style text: `word<TAB>value` per line, `#` starts a comment.
    pub fn parse<R: BufRead>(input: R) -> Result<Self, LexiconError> {
        let mut entries = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let malformed = || LexiconError::Malformed { line: idx + 1, text: text.to_string() };
            let (word, value) = text
                .rsplit_once('\t')
                .or_else(|| text.rsplit_once(char::is_whitespace))
                .ok_or_else(malformed)?;
            let value = S::parse_decimal(value).ok_or_else(malformed)?;
            let word = word.trim();
            if word.is_empty() {
                return Err(malformed());
            }
            if value.is_zero() {
                log::warn!("lexicon line {}: dropping zero-valued entry `{word}`", idx + 1);
                continue;
            }
            entries.push((word.to_string(), value));
        }
        Self::new(entries)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        Self::parse(io::BufReader::new(fs::File::open(path)?))
    }

    /// Looks up a word, lowercasing it first.
    pub fn value(&self, word: &str) -> Option<S> {
        match self.entries.get(word) {
            Some(v) => Some(*v),
            None => self.entries.get(&word.to_lowercase()).copied(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.value(word).is_some()
    }

    fn remove(&mut self, word: &str) -> Option<S> {
        self.entries.remove(word)
    }
}

/// Words that toggle the negation flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegationList {
    words: HashSet<String>,
}

impl Default for NegationList {
    fn default() -> Self {
        NegationList::new(["not", "no", "never", "cannot", "n't", "without"])
    }
}

impl NegationList {
    pub fn new<K: AsRef<str>>(words: impl IntoIterator<Item = K>) -> Self {
        NegationList { words: words.into_iter().map(|w| w.as_ref().to_lowercase()).collect() }
    }

    /// One word per line; blank lines and `#` comments are skipped.
    pub fn parse<R: BufRead>(input: R) -> io::Result<Self> {
        let mut words = Vec::new();
        for line in input.lines() {
            let line = line?;
            let w = line.trim();
            if !w.is_empty() && !w.starts_with('#') {
                words.push(w.to_string());
            }
        }
        Ok(NegationList::new(words))
    }

    pub fn read_file(path: impl AsRef<Path>) -> io::Result<Self> {
        Self::parse(io::BufReader::new(fs::File::open(path)?))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word) || self.words.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// How the scorer sees a single word.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cue<S> {
    Sentiment(S),
    Negation,
    Other,
}

/// The scoring loop over pre-classified words. The flag starts false, a
/// sentiment word contributes its value (negated while the flag is set), a
/// negation word toggles the flag and any other word clears it.
pub fn score_cues<S: Scalar>(cues: impl IntoIterator<Item = Cue<S>>) -> S {
    let mut score = S::zero();
    let mut negated = false;
    for cue in cues {
        match cue {
            Cue::Sentiment(v) => {
                score = if negated { score + -v } else { score + v };
                negated = false;
            }
            Cue::Negation => negated = !negated,
            Cue::Other => negated = false,
        }
    }
    score
}

pub fn cue_of<S: Scalar>(word: &str, lexicon: &Lexicon<S>, negations: &NegationList) -> Cue<S> {
    let lower = word.to_lowercase();
    if let Some(v) = lexicon.value(&lower) {
        Cue::Sentiment(v)
    } else if negations.contains(&lower) {
        Cue::Negation
    } else {
        Cue::Other
    }
}

pub fn score_sentence<S: Scalar, W: AsRef<str>>(
    words: &[W],
    lexicon: &Lexicon<S>,
    negations: &NegationList,
) -> S {
    score_cues(words.iter().map(|w| cue_of(w.as_ref(), lexicon, negations)))
}

/// Sum of per-sentence scores; the negation flag resets at each sentence.
pub fn score_instance<S: Scalar>(
    instance: &LabeledInstance,
    lexicon: &Lexicon<S>,
    negations: &NegationList,
) -> S {
    instance.sentences().iter().map(|s| score_sentence(s.words(), lexicon, negations)).sum()
}

pub fn classify<S: Scalar>(score: S) -> Label {
    if score > S::zero() {
        Label::Positive
    } else if score < S::zero() {
        Label::Negative
    } else {
        Label::Neutral
    }
}

/// A sentiment engine that labels text. External engines plug in here.
pub trait Analyzer: Sync {
    fn name(&self) -> &str;

    /// Labels plain text.
    fn classify_text(&self, text: &str) -> Label;

    /// Labels an instance; by default its sentences are joined with spaces.
    fn classify_instance(&self, instance: &LabeledInstance) -> Label {
        let text = instance.sentences().iter().map(|s| s.words().join(" ")).collect::<Vec<_>>().join(" ");
        self.classify_text(&text)
    }
}

/// The built-in dictionary analyzer.
#[derive(Clone, Debug)]
pub struct BaselineAnalyzer<S> {
    lexicon: Lexicon<S>,
    negations: NegationList,
}

impl<S: Scalar> BaselineAnalyzer<S> {
    /// Negation words take precedence: lexicon entries that are also
    /// negation words are dropped.
    pub fn new(mut lexicon: Lexicon<S>, negations: NegationList) -> Result<Self, LexiconError> {
        for w in negations.iter() {
            if lexicon.remove(w).is_some() {
                log::warn!("`{w}` is both a negation and a lexicon word; keeping it as a negation");
            }
        }
        if lexicon.is_empty() {
            return Err(LexiconError::Empty);
        }
        Ok(BaselineAnalyzer { lexicon, negations })
    }

    pub fn lexicon(&self) -> &Lexicon<S> {
        &self.lexicon
    }

    pub fn negations(&self) -> &NegationList {
        &self.negations
    }

    pub fn cue(&self, word: &str) -> Cue<S> {
        cue_of(word, &self.lexicon, &self.negations)
    }

    pub fn score_sentence<W: AsRef<str>>(&self, words: &[W]) -> S {
        score_sentence(words, &self.lexicon, &self.negations)
    }

    pub fn score_instance(&self, instance: &LabeledInstance) -> S {
        score_instance(instance, &self.lexicon, &self.negations)
    }
}

impl<S: Scalar> Analyzer for BaselineAnalyzer<S> {
    fn name(&self) -> &str {
        "baseline"
    }

    fn classify_text(&self, text: &str) -> Label {
        let words: Vec<&str> = text.split_whitespace().collect();
        classify(self.score_sentence(&words))
    }

    fn classify_instance(&self, instance: &LabeledInstance) -> Label {
        classify(self.score_instance(instance))
    }
}

/// Percentage of instances whose predicted label equals the gold label,
/// compressing each instance first when a compressor is given.
pub fn accuracy<A: Analyzer + ?Sized>(corpus: &Corpus, analyzer: &A, compressor: Option<&Compressor>) -> f64 {
    if corpus.is_empty() {
        return 0.0;
    }
    let correct = corpus
        .instances()
        .iter()
        .filter(|inst| {
            let predicted = match compressor {
                Some(c) => analyzer.classify_instance(&compress_instance(c, inst)),
                None => analyzer.classify_instance(inst),
            };
            predicted == Label::from(inst.label())
        })
        .count();
    100.0 * correct as f64 / corpus.len() as f64
}
