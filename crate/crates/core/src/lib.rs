//! Evolving part-of-speech rule compressors that shorten text while keeping
//! its sentiment classification.
//!
//! A [`Compressor`] is an ordered list of [`Rule`]s. Each rule pairs a tag
//! pattern (optionally with `*` wildcards) with the pattern offsets to delete
//! wherever it matches. The [`evolution`] module searches for compressors whose
//! corpus compression rate stays inside a fixed window while the dictionary
//! [`sentiment`] analyzer's predictions change as little as possible.
//!
//! Sentiment values and fitness arithmetic are generic over [`Scalar`]; the
//! aliases below fix the scalar to `f64` or to exact rationals.

pub mod compressor;
pub mod corpus;
pub mod evolution;
pub mod scalar;
pub mod sentiment;
pub mod synthetic;
pub mod tag;

pub use compressor::{
    apply_compressor, apply_rule, compress_corpus, compress_instance, compression_rate, deserialize_model,
    match_rule_at, read_model_file, serialize_model, Compressor, ModelError, Rule, RuleError,
};
pub use corpus::{
    corpus_word_count, parse_tagged_corpus, parse_tagged_corpus_lenient, read_corpus_file, split_train_test,
    write_tagged_corpus, Corpus, CorpusError, LabeledInstance, Polarity, TaggedSentence,
};
pub use evolution::{evolve, EvolutionError, EvolutionParams};
pub use scalar::Scalar;
pub use sentiment::{accuracy, classify, Analyzer, Label, LexiconError, NegationList};
pub use tag::PosTag;

pub use num_rational::Rational64;

pub type Lexicon = sentiment::Lexicon<f64>;
pub type ExactLexicon = sentiment::Lexicon<Rational64>;
pub type BaselineAnalyzer = sentiment::BaselineAnalyzer<f64>;
pub type ExactBaselineAnalyzer = sentiment::BaselineAnalyzer<Rational64>;
pub type FitnessReport = evolution::FitnessReport<f64>;
pub type ExactFitnessReport = evolution::FitnessReport<Rational64>;
pub type FitnessWeights = evolution::FitnessWeights<f64>;
pub type Individual = evolution::Individual<f64>;
pub type EvolutionRun = evolution::EvolutionRun<f64>;
pub type GenerationStats = evolution::GenerationStats<f64>;
