//! Compressors: ordered lists of tag-pattern rules that delete words.
//!
//! A rule scans every start position of a sentence. Where its pattern matches
//! it flags the words at its decision offsets; once the scan is finished all
//! flagged words are removed together. Rules run in order, each one on the
//! output of the previous. A window that contains a punctuation token never
//! matches, and the wildcard matches any word tag but no punctuation.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, LabeledInstance, TaggedSentence};
use crate::tag::PosTag;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("rule pattern is empty")]
    EmptyPattern,
    #[error("rule pattern starts with a wildcard")]
    LeadingWildcard,
    #[error("rule pattern ends with a wildcard")]
    TrailingWildcard,
    #[error("rule pattern contains punctuation tag `{0}`")]
    PunctuationInPattern(PosTag),
    #[error("rule has no decisions")]
    NoDecisions,
    #[error("decision index {index} out of range for a pattern of {len} tags")]
    DecisionOutOfRange { index: usize, len: usize },
    #[error("compressor has no rules")]
    NoRules,
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed model: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("rule {rule}: {source}")]
    InvariantViolation {
        rule: usize,
        #[source]
        source: RuleError,
    },
}

/// A tag pattern and the pattern offsets whose matched words get deleted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Rule {
    tags: Vec<PosTag>,
    decisions: Vec<usize>,
}

impl Rule {
    /// Decisions are stored as a sorted set; duplicates collapse.
    pub fn new(tags: Vec<PosTag>, mut decisions: Vec<usize>) -> Result<Self, RuleError> {
        decisions.sort_unstable();
        decisions.dedup();
        let rule = Rule { tags, decisions };
        rule.validate()?;
        Ok(rule)
    }

    fn validate(&self) -> Result<(), RuleError> {
        let (first, last) = match (self.tags.first(), self.tags.last()) {
            (Some(f), Some(l)) => (*f, *l),
            _ => return Err(RuleError::EmptyPattern),
        };
        if first.is_wildcard() {
            return Err(RuleError::LeadingWildcard);
        }
        if last.is_wildcard() {
            return Err(RuleError::TrailingWildcard);
        }
        if let Some(&t) = self.tags.iter().find(|t| t.is_punctuation()) {
            return Err(RuleError::PunctuationInPattern(t));
        }
        if self.decisions.is_empty() {
            return Err(RuleError::NoDecisions);
        }
        if let Some(&index) = self.decisions.iter().find(|&&d| d >= self.tags.len()) {
            return Err(RuleError::DecisionOutOfRange { index, len: self.tags.len() });
        }
        Ok(())
    }

    pub fn tags(&self) -> &[PosTag] {
        &self.tags
    }

    pub fn decisions(&self) -> &[usize] {
        &self.decisions
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tags: Vec<&str> = self.tags.iter().map(|t| t.as_str()).collect();
        write!(f, "[{}] -> {:?}", tags.join(", "), self.decisions)
    }
}

/// An ordered, non-empty list of rules.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Compressor {
    rules: Vec<Rule>,
}

impl Compressor {
    pub fn new(rules: Vec<Rule>) -> Result<Self, RuleError> {
        if rules.is_empty() {
            return Err(RuleError::NoRules);
        }
        Ok(Compressor { rules })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn into_rules(self) -> Vec<Rule> {
        self.rules
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    /// Positions of `tags` that survive every rule, in ascending order.
    pub fn survivors<'s>(&self, tags: &[PosTag], scratch: &'s mut Scratch) -> &'s [usize] {
        scratch.keep.clear();
        scratch.keep.extend(0..tags.len());
        for rule in &self.rules {
            if scratch.keep.len() < rule.len() {
                continue;
            }
            scratch.current.clear();
            scratch.current.extend(scratch.keep.iter().map(|&i| tags[i]));
            if !flag_matches(rule, &scratch.current, &mut scratch.flags) {
                continue;
            }
            let flags = &scratch.flags;
            let mut pos = 0;
            scratch.keep.retain(|_| {
                let keep = !flags[pos];
                pos += 1;
                keep
            });
        }
        &scratch.keep
    }
}

impl fmt::Display for Compressor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            writeln!(f, "R{}: {}", i + 1, r)?;
        }
        Ok(())
    }
}

/// Reusable buffers for [`Compressor::survivors`].
#[derive(Clone, Debug, Default)]
pub struct Scratch {
    keep: Vec<usize>,
    current: Vec<PosTag>,
    flags: Vec<bool>,
}

/// Whether `rule` matches `tags` at `start`. Out-of-range windows do not match.
#[inline]
pub fn match_rule_at(rule: &Rule, tags: &[PosTag], start: usize) -> bool {
    let Some(window) = tags.get(start..start + rule.tags.len()) else {
        return false;
    };
    rule.tags.iter().zip(window).all(|(p, &t)| p.accepts(t))
}

/// Flags every position covered by a decision of a match. Returns whether
/// anything was flagged.
fn flag_matches(rule: &Rule, tags: &[PosTag], flags: &mut Vec<bool>) -> bool {
    flags.clear();
    flags.resize(tags.len(), false);
    let mut any = false;
    for start in 0..tags.len() {
        if match_rule_at(rule, tags, start) {
            for &d in &rule.decisions {
                flags[start + d] = true;
            }
            any = true;
        }
    }
    any
}

pub fn apply_rule(rule: &Rule, sentence: &TaggedSentence) -> TaggedSentence {
    let mut flags = Vec::new();
    if !flag_matches(rule, sentence.tags(), &mut flags) {
        return sentence.clone();
    }
    let keep: Vec<usize> = (0..sentence.len()).filter(|&i| !flags[i]).collect();
    sentence.select(&keep)
}

pub fn apply_compressor(compressor: &Compressor, sentence: &TaggedSentence) -> TaggedSentence {
    let mut scratch = Scratch::default();
    let keep = compressor.survivors(sentence.tags(), &mut scratch);
    sentence.select(keep)
}

/// Compresses every sentence of an instance independently.
pub fn compress_instance(compressor: &Compressor, instance: &LabeledInstance) -> LabeledInstance {
    let mut scratch = Scratch::default();
    let sentences =
        instance.sentences().iter().map(|s| s.select(compressor.survivors(s.tags(), &mut scratch))).collect();
    LabeledInstance::new_unchecked(sentences, instance.label())
}

pub fn compress_corpus(compressor: &Compressor, corpus: &Corpus) -> Corpus {
    let instances = corpus.instances().iter().map(|i| compress_instance(compressor, i)).collect();
    Corpus::new(corpus.name(), instances).expect("compression keeps the instance count")
}

/// Percentage of the corpus words the compressor deletes.
pub fn compression_rate(compressor: &Compressor, corpus: &Corpus) -> f64 {
    let mut scratch = Scratch::default();
    let (mut total, mut kept) = (0usize, 0usize);
    for s in corpus.instances().iter().flat_map(|i| i.sentences()) {
        total += s.len();
        kept += compressor.survivors(s.tags(), &mut scratch).len();
    }
    rate_percent(total - kept, total)
}

pub(crate) fn rate_percent(deleted: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * deleted as f64 / total as f64
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    rules: Vec<RawRule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    tags: Vec<PosTag>,
    decisions: Vec<usize>,
}

/// Pretty-printed JSON: `{"rules": [{"tags": ["JJ", "NN"], "decisions": [0]}, ...]}`.
pub fn serialize_model(compressor: &Compressor) -> String {
    let mut s = serde_json::to_string_pretty(compressor).expect("model serializes");
    s.push('\n');
    s
}

pub fn deserialize_model(text: &str) -> Result<Compressor, ModelError> {
    let raw: RawModel = serde_json::from_str(text)?;
    let rules = raw
        .rules
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            Rule::new(r.tags, r.decisions)
                .map_err(|source| ModelError::InvariantViolation { rule: i, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Compressor::new(rules).map_err(|source| ModelError::InvariantViolation { rule: 0, source })
}

pub fn read_model_file(path: impl AsRef<Path>) -> Result<Compressor, ModelError> {
    deserialize_model(&fs::read_to_string(path)?)
}
