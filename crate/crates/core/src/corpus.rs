//! Tagged-corpus data model, the vertical text format, and train/test splitting.
//!
//! The vertical format carries one `word<TAB>TAG` pair per line:
//!
//! ```text
//! #label positive
//! this    DT
//! is      VBZ
//! a       DT
//! great   JJ
//! product NN
//! ```
//!
//! Lines holding exactly two whitespace-separated fields, as above, are also
//! accepted. A blank line ends a sentence. Two consecutive blank lines, or the next
//! `#label` header, end an instance.

use std::fmt;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::tag::PosTag;

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: expected `<word>\\t<TAG>`")]
    MisalignedLine { line: usize },
    #[error("line {line}: unknown tag `{tag}`")]
    UnknownTag { tag: String, line: usize },
    #[error("line {line}: wildcard `*` is not a data tag")]
    WildcardInData { line: usize },
    #[error("line {line}: token appears before any `#label` header")]
    MissingLabel { line: usize },
    #[error("line {line}: invalid label `{value}` (expected positive or negative)")]
    InvalidLabel { value: String, line: usize },
    #[error("line {line}: instance has no tokens")]
    EmptyInstance { line: usize },
    #[error("corpus contains no instances")]
    EmptyCorpus,
    #[error("sentence has {words} words but {tags} tags")]
    Misaligned { words: usize, tags: usize },
    #[error("{label} class has {found} instances, at least 2 required")]
    TooFewInstances { label: Polarity, found: usize },
    #[error("train fraction {0} is not in (0, 1)")]
    InvalidFraction(f64),
}

/// Gold sentiment of a review.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarity {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.to_ascii_lowercase().as_str() {
            "positive" | "pos" => Ok(Polarity::Positive),
            "negative" | "neg" => Ok(Polarity::Negative),
            _ => Err(()),
        }
    }
}

/// Words with their aligned tags. Data tags are never the wildcard.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TaggedSentence {
    words: Vec<String>,
    tags: Vec<PosTag>,
}

impl TaggedSentence {
    pub fn new(words: Vec<String>, tags: Vec<PosTag>) -> Result<Self, CorpusError> {
        if words.len() != tags.len() {
            return Err(CorpusError::Misaligned { words: words.len(), tags: tags.len() });
        }
        if tags.contains(&PosTag::Wildcard) {
            return Err(CorpusError::WildcardInData { line: 0 });
        }
        Ok(TaggedSentence { words, tags })
    }

    /// Builds a sentence from `(word, tag)` pairs.
    pub fn from_pairs<W: Into<String>>(
        pairs: impl IntoIterator<Item = (W, PosTag)>,
    ) -> Result<Self, CorpusError> {
        let (words, tags): (Vec<String>, Vec<PosTag>) = pairs.into_iter().map(|(w, t)| (w.into(), t)).unzip();
        Self::new(words, tags)
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn tags(&self) -> &[PosTag] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Keeps the tokens at the given (ascending) positions.
    pub(crate) fn select(&self, keep: &[usize]) -> TaggedSentence {
        TaggedSentence {
            words: keep.iter().map(|&i| self.words[i].clone()).collect(),
            tags: keep.iter().map(|&i| self.tags[i]).collect(),
        }
    }

    pub(crate) fn push(&mut self, word: String, tag: PosTag) {
        self.words.push(word);
        self.tags.push(tag);
    }
}

/// One review: one or more sentences and a gold label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledInstance {
    sentences: Vec<TaggedSentence>,
    label: Polarity,
}

impl LabeledInstance {
    /// Fails with [`CorpusError::EmptyInstance`] when there are no words.
    pub fn new(sentences: Vec<TaggedSentence>, label: Polarity) -> Result<Self, CorpusError> {
        let inst = LabeledInstance { sentences, label };
        if inst.word_count() == 0 {
            return Err(CorpusError::EmptyInstance { line: 0 });
        }
        Ok(inst)
    }

    /// Compression may delete every word of an instance.
    pub(crate) fn new_unchecked(sentences: Vec<TaggedSentence>, label: Polarity) -> Self {
        LabeledInstance { sentences, label }
    }

    pub fn sentences(&self) -> &[TaggedSentence] {
        &self.sentences
    }

    pub fn label(&self) -> Polarity {
        self.label
    }

    pub fn word_count(&self) -> usize {
        self.sentences.iter().map(TaggedSentence::len).sum()
    }

    pub fn push_sentence(&mut self, sentence: TaggedSentence) {
        self.sentences.push(sentence);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    name: String,
    instances: Vec<LabeledInstance>,
}

impl Corpus {
    pub fn new(name: impl Into<String>, instances: Vec<LabeledInstance>) -> Result<Self, CorpusError> {
        if instances.is_empty() {
            return Err(CorpusError::EmptyCorpus);
        }
        Ok(Corpus { name: name.into(), instances })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn instances(&self) -> &[LabeledInstance] {
        &self.instances
    }

    pub fn instances_mut(&mut self) -> &mut [LabeledInstance] {
        &mut self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Total number of words over all sentences.
    pub fn word_count(&self) -> usize {
        corpus_word_count(self)
    }

    pub fn count_label(&self, label: Polarity) -> usize {
        self.instances.iter().filter(|i| i.label == label).count()
    }

    pub fn to_vertical_string(&self) -> String {
        let mut buf = Vec::new();
        write_tagged_corpus(self, &mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("corpus text is UTF-8")
    }
}

pub fn corpus_word_count(corpus: &Corpus) -> usize {
    corpus.instances.iter().map(LabeledInstance::word_count).sum()
}

/// Parses the vertical format. Instances without tokens are rejected.
pub fn parse_tagged_corpus<R: BufRead>(name: &str, input: R) -> Result<Corpus, CorpusError> {
    parse(name, input, false)
}

/// Like [`parse_tagged_corpus`], but accepts header-only instances, which is
/// how a compressed corpus records a review whose words were all deleted.
pub fn parse_tagged_corpus_lenient<R: BufRead>(name: &str, input: R) -> Result<Corpus, CorpusError> {
    parse(name, input, true)
}

/// Reads a corpus file, naming it after the file stem.
pub fn read_corpus_file(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let file = fs::File::open(path)?;
    parse_tagged_corpus(&name, io::BufReader::new(file))
}

struct Pending {
    label: Polarity,
    header_line: usize,
    sentences: Vec<TaggedSentence>,
    current: TaggedSentence,
}

impl Pending {
    fn end_sentence(&mut self) {
        if !self.current.is_empty() {
            self.sentences.push(std::mem::take(&mut self.current));
        }
    }
}

fn parse<R: BufRead>(name: &str, input: R, allow_empty: bool) -> Result<Corpus, CorpusError> {
    let mut instances = Vec::new();
    let mut pending: Option<Pending> = None;
    let mut blank_run = 0usize;

    let close = |p: Option<Pending>, instances: &mut Vec<LabeledInstance>| {
        if let Some(mut p) = p {
            p.end_sentence();
            let inst = LabeledInstance::new_unchecked(p.sentences, p.label);
            if inst.word_count() == 0 && !allow_empty {
                return Err(CorpusError::EmptyInstance { line: p.header_line });
            }
            instances.push(inst);
        }
        Ok(())
    };

    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let line = line.trim_end_matches(['\r', '\n']);

        if let Some(value) = header_label(line) {
            close(pending.take(), &mut instances)?;
            let label = value
                .parse()
                .map_err(|_| CorpusError::InvalidLabel { value: value.to_string(), line: lineno })?;
            pending = Some(Pending {
                label,
                header_line: lineno,
                sentences: Vec::new(),
                current: TaggedSentence::default(),
            });
            blank_run = 0;
            continue;
        }

        if line.trim().is_empty() {
            blank_run += 1;
            if let Some(p) = pending.as_mut() {
                p.end_sentence();
            }
            if blank_run >= 2 {
                close(pending.take(), &mut instances)?;
            }
            continue;
        }
        blank_run = 0;

        let p = pending.as_mut().ok_or(CorpusError::MissingLabel { line: lineno })?;
        let (word, tag) = split_token(line).ok_or(CorpusError::MisalignedLine { line: lineno })?;
        let tag: PosTag =
            tag.parse().map_err(|_| CorpusError::UnknownTag { tag: tag.to_string(), line: lineno })?;
        if tag.is_wildcard() {
            return Err(CorpusError::WildcardInData { line: lineno });
        }
        p.current.push(word.to_string(), tag);
    }
    close(pending.take(), &mut instances)?;

    Corpus::new(name, instances)
}

fn header_label(line: &str) -> Option<&str> {
    let rest = line.strip_prefix("#label")?;
    if rest.contains('\t') || !rest.starts_with(' ') {
        return None;
    }
    Some(rest.trim())
}

fn split_token(line: &str) -> Option<(&str, &str)> {
    if let Some((word, tag)) = line.rsplit_once('\t') {
        let (word, tag) = (word.trim(), tag.trim());
        return (!word.is_empty() && !tag.is_empty()).then_some((word, tag));
    }
    let mut fields = line.split_whitespace();
    match (fields.next(), fields.next(), fields.next()) {
        (Some(w), Some(t), None) => Some((w, t)),
        _ => None,
    }
}

pub fn write_tagged_corpus<W: Write>(corpus: &Corpus, mut out: W) -> io::Result<()> {
    for inst in &corpus.instances {
        writeln!(out, "#label {}", inst.label)?;
        for sentence in inst.sentences.iter().filter(|s| !s.is_empty()) {
            for (w, t) in sentence.words.iter().zip(&sentence.tags) {
                writeln!(out, "{w}\t{t}")?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Stratified split. Within each label the instances are shuffled with a
/// seeded generator and the first `round(n * train_fraction)` go to training.
/// Both halves keep the original instance order.
pub fn split_train_test(
    corpus: &Corpus,
    train_fraction: f64,
    seed: u64,
) -> Result<(Corpus, Corpus), CorpusError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(CorpusError::InvalidFraction(train_fraction));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_train = vec![false; corpus.len()];
    for label in [Polarity::Positive, Polarity::Negative] {
        let mut idx: Vec<usize> = (0..corpus.len()).filter(|&i| corpus.instances[i].label == label).collect();
        if idx.len() < 2 {
            return Err(CorpusError::TooFewInstances { label, found: idx.len() });
        }
        let n_train = ((idx.len() as f64 * train_fraction).round() as usize).clamp(1, idx.len() - 1);
        idx.shuffle(&mut rng);
        for &i in &idx[..n_train] {
            in_train[i] = true;
        }
    }
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (inst, &t) in corpus.instances.iter().zip(&in_train) {
        if t {
            train.push(inst.clone())
        } else {
            test.push(inst.clone())
        }
    }
    Ok((
        Corpus::new(format!("{}-train", corpus.name), train)?,
        Corpus::new(format!("{}-test", corpus.name), test)?,
    ))
}
