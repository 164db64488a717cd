//! Compressor fitness: label flips rewarded or penalised against the gold
//! label, plus a length-reduction bonus and a rule-count penalty.

use serde::Serialize;

use crate::compressor::{compress_instance, rate_percent, Compressor, Scratch};
use crate::corpus::Corpus;
use crate::scalar::Scalar;
use crate::sentiment::{classify, score_cues, Analyzer, BaselineAnalyzer, Cue, Label};

use super::params::{EvolutionParams, ParamsError};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitnessWeights<S> {
    pub length: S,
    pub rules: S,
}

impl<S: Scalar> FitnessWeights<S> {
    pub fn from_params(params: &EvolutionParams) -> Result<Self, ParamsError> {
        let conv = |name: &str, w: f64| {
            S::from_weight(w).ok_or_else(|| ParamsError(format!("{name} {w} not representable")))
        };
        Ok(FitnessWeights {
            length: conv("length_weight", params.length_weight)?,
            rules: conv("rules_weight", params.rules_weight)?,
        })
    }

    /// `raw + length * average_change - rules * num_rules`
    pub fn combine(&self, raw_fitness: i64, average_change: S, num_rules: usize) -> S {
        let raw = S::from_i64(raw_fitness).expect("raw fitness representable");
        raw + self.length * average_change - self.rules * S::from_count(num_rules)
    }
}

impl<S: Scalar> Default for FitnessWeights<S> {
    fn default() -> Self {
        FitnessWeights {
            length: S::from_weight(0.5).expect("0.5 representable"),
            rules: S::from_weight(0.1).expect("0.1 representable"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitnessReport<S> {
    pub raw_fitness: i64,
    /// Mean number of words removed per instance.
    pub average_change: S,
    pub num_rules: usize,
    pub total: S,
    pub compression_rate: f64,
}

impl<S: Scalar> FitnessReport<S> {
    pub fn new(
        raw_fitness: i64,
        average_change: S,
        num_rules: usize,
        compression_rate: f64,
        weights: &FitnessWeights<S>,
    ) -> Self {
        FitnessReport {
            raw_fitness,
            average_change,
            num_rules,
            total: weights.combine(raw_fitness, average_change, num_rules),
            compression_rate,
        }
    }

    pub fn to_f64(&self) -> FitnessReport<f64> {
        FitnessReport {
            raw_fitness: self.raw_fitness,
            average_change: self.average_change.to_f64_lossy(),
            num_rules: self.num_rules,
            total: self.total.to_f64_lossy(),
            compression_rate: self.compression_rate,
        }
    }
}

/// Per-instance labels and lengths of the uncompressed corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecomputedBaseline {
    pub original_labels: Vec<Label>,
    pub gold_labels: Vec<Label>,
    pub original_lengths: Vec<usize>,
}

impl PrecomputedBaseline {
    pub fn compute<A: Analyzer + ?Sized>(corpus: &Corpus, analyzer: &A) -> Self {
        let insts = corpus.instances();
        PrecomputedBaseline {
            original_labels: insts.iter().map(|i| analyzer.classify_instance(i)).collect(),
            gold_labels: insts.iter().map(|i| Label::from(i.label())).collect(),
            original_lengths: insts.iter().map(|i| i.word_count()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.gold_labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gold_labels.is_empty()
    }
}

/// Contribution of one instance to the raw fitness.
pub fn label_change_score(original: Label, compressed: Label, gold: Label) -> i64 {
    if compressed == original {
        0
    } else if compressed == gold {
        1
    } else {
        -1
    }
}

/// Fitness against any analyzer, compressing instance by instance.
pub fn fitness<S: Scalar, A: Analyzer + ?Sized>(
    compressor: &Compressor,
    corpus: &Corpus,
    baseline: &PrecomputedBaseline,
    analyzer: &A,
    weights: &FitnessWeights<S>,
) -> FitnessReport<S> {
    let mut raw = 0i64;
    let mut removed = 0usize;
    for (i, inst) in corpus.instances().iter().enumerate() {
        let compressed = compress_instance(compressor, inst);
        let label = analyzer.classify_instance(&compressed);
        raw += label_change_score(baseline.original_labels[i], label, baseline.gold_labels[i]);
        removed += baseline.original_lengths[i] - compressed.word_count();
    }
    let n = corpus.len().max(1);
    let average_change = S::from_count(removed) / S::from_count(n);
    let total_words: usize = baseline.original_lengths.iter().sum();
    FitnessReport::new(
        raw,
        average_change,
        compressor.num_rules(),
        rate_percent(removed, total_words),
        weights,
    )
}

struct PreparedSentence<S> {
    tags: Vec<crate::PosTag>,
    cues: Vec<Cue<S>>,
}

/// The training corpus pre-digested for the baseline analyzer: tags and
/// per-word lexicon cues are resolved once, so evaluating a compressor only
/// walks surviving positions.
pub struct Evaluator<S> {
    instances: Vec<Vec<PreparedSentence<S>>>,
    baseline: PrecomputedBaseline,
    total_words: usize,
    weights: FitnessWeights<S>,
}

impl<S: Scalar> Evaluator<S> {
    pub fn new(corpus: &Corpus, analyzer: &BaselineAnalyzer<S>, weights: FitnessWeights<S>) -> Self {
        let instances = corpus
            .instances()
            .iter()
            .map(|inst| {
                inst.sentences()
                    .iter()
                    .map(|s| PreparedSentence {
                        tags: s.tags().to_vec(),
                        cues: s.words().iter().map(|w| analyzer.cue(w)).collect(),
                    })
                    .collect()
            })
            .collect();
        Evaluator {
            instances,
            baseline: PrecomputedBaseline::compute(corpus, analyzer),
            total_words: corpus.word_count(),
            weights,
        }
    }

    pub fn baseline(&self) -> &PrecomputedBaseline {
        &self.baseline
    }

    pub fn weights(&self) -> &FitnessWeights<S> {
        &self.weights
    }

    pub fn total_words(&self) -> usize {
        self.total_words
    }

    /// Tags of a uniformly chosen punctuation-free window of `len` words from
    /// the corpus, or `None` if a few draws find none.
    pub fn sample_window<R: rand::Rng + ?Sized>(
        &self,
        len: usize,
        rng: &mut R,
    ) -> Option<Vec<crate::PosTag>> {
        use rand::seq::IndexedRandom;
        for _ in 0..16 {
            let sentence = self.instances.choose(rng)?.choose(rng)?;
            if sentence.tags.len() < len {
                continue;
            }
            let start = rng.random_range(0..=sentence.tags.len() - len);
            let window = &sentence.tags[start..start + len];
            if window.iter().all(|t| !t.is_punctuation()) {
                return Some(window.to_vec());
            }
        }
        None
    }

    /// Same value as [`crate::compressor::compression_rate`] on the corpus.
    pub fn compression_rate(&self, compressor: &Compressor, scratch: &mut Scratch) -> f64 {
        let kept: usize =
            self.instances.iter().flatten().map(|s| compressor.survivors(&s.tags, scratch).len()).sum();
        rate_percent(self.total_words - kept, self.total_words)
    }

    pub fn fitness(&self, compressor: &Compressor, scratch: &mut Scratch) -> FitnessReport<S> {
        let mut raw = 0i64;
        let mut removed = 0usize;
        for (i, sentences) in self.instances.iter().enumerate() {
            let mut score = S::zero();
            let mut kept = 0usize;
            for s in sentences {
                let keep = compressor.survivors(&s.tags, scratch);
                kept += keep.len();
                score = score + score_cues(keep.iter().map(|&p| s.cues[p]));
            }
            let b = &self.baseline;
            raw += label_change_score(b.original_labels[i], classify(score), b.gold_labels[i]);
            removed += b.original_lengths[i] - kept;
        }
        let n = self.instances.len().max(1);
        let average_change = S::from_count(removed) / S::from_count(n);
        FitnessReport::new(
            raw,
            average_change,
            compressor.num_rules(),
            rate_percent(removed, self.total_words),
            &self.weights,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compressor::Rule;
    use crate::corpus::{LabeledInstance, Polarity, TaggedSentence};
    use crate::sentiment::{Lexicon, NegationList};
    use crate::tag::PosTag::{self, *};
    use num_rational::Rational64;

    fn analyzer() -> BaselineAnalyzer<f64> {
        let lex = Lexicon::new([("good", 2.0), ("bad", -2.0), ("dull", -1.0)]).unwrap();
        BaselineAnalyzer::new(lex, NegationList::new(["not"])).unwrap()
    }

    fn inst(pairs: &[(&str, PosTag)], label: Polarity) -> LabeledInstance {
        LabeledInstance::new(vec![TaggedSentence::from_pairs(pairs.iter().copied()).unwrap()], label).unwrap()
    }

    /// Deleting every RB (a) turns "not good" into "good": a wrong negative
    /// prediction becomes right; (b) turns a correct "not bad" into "bad";
    /// (c) leaves an unrelated instance alone.
    fn toy() -> Corpus {
        Corpus::new(
            "toy",
            vec![
                inst(&[("not", RB), ("good", JJ), ("film", NN)], Polarity::Positive),
                inst(&[("not", RB), ("bad", JJ), ("film", NN)], Polarity::Positive),
                inst(&[("good", JJ), ("film", NN)], Polarity::Positive),
            ],
        )
        .unwrap()
    }

    fn delete_rb() -> Compressor {
        Compressor::new(vec![Rule::new(vec![RB, JJ], vec![0]).unwrap()]).unwrap()
    }

    #[test]
    fn flips_in_both_directions_cancel() {
        let corpus = toy();
        let a = analyzer();
        let b = PrecomputedBaseline::compute(&corpus, &a);
        assert_eq!(b.original_labels, [Label::Negative, Label::Positive, Label::Positive]);
        let r = fitness(&delete_rb(), &corpus, &b, &a, &FitnessWeights::<f64>::default());
        assert_eq!(r.raw_fitness, 0);
        // 2 words removed over 3 instances
        assert!((r.average_change - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.total, 0.0 + 0.5 * (2.0 / 3.0) - 0.1);
    }

    #[test]
    fn identity_compressor_costs_only_its_rules() {
        let corpus = toy();
        let a = analyzer();
        let id = Compressor::new(vec![Rule::new(vec![UH, UH], vec![0]).unwrap()]).unwrap();
        let ev = Evaluator::new(&corpus, &a, FitnessWeights::default());
        let r = ev.fitness(&id, &mut Scratch::default());
        assert_eq!((r.raw_fitness, r.average_change, r.compression_rate), (0, 0.0, 0.0));
        assert_eq!(r.total, -0.1);
    }

    #[test]
    fn formula_arithmetic() {
        let w = FitnessWeights::<f64>::default();
        assert_eq!(w.combine(5, 4.0, 10), 6.0);
        let exact = FitnessWeights::<Rational64>::default();
        assert_eq!(exact.combine(5, Rational64::from_integer(4), 10), Rational64::from_integer(6));
        assert_eq!(exact.combine(0, Rational64::from_integer(0), 1), Rational64::new(-1, 10));
    }

    #[test]
    fn evaluator_matches_the_generic_path() {
        let corpus = toy();
        let a = analyzer();
        let ev = Evaluator::new(&corpus, &a, FitnessWeights::default());
        let c = delete_rb();
        let slow = fitness(&c, &corpus, ev.baseline(), &a, ev.weights());
        assert_eq!(ev.fitness(&c, &mut Scratch::default()), slow);
        assert_eq!(
            ev.compression_rate(&c, &mut Scratch::default()),
            crate::compressor::compression_rate(&c, &corpus)
        );
    }

    #[test]
    fn label_change_rule() {
        use Label::*;
        assert_eq!(label_change_score(Positive, Positive, Negative), 0);
        assert_eq!(label_change_score(Negative, Positive, Positive), 1);
        assert_eq!(label_change_score(Positive, Neutral, Positive), -1);
        assert_eq!(label_change_score(Positive, Negative, Positive), -1);
    }
}
