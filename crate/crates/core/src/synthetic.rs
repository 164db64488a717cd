//! A seeded generator of small tagged review corpora with a matching lexicon.
//!
//! Reviews are built from a handful of sentence templates. Only adjectives in
//! sentiment slots carry lexicon values, so roughly one token in ten bears
//! sentiment and a large share of the remaining words (determiners,
//! prepositions, pronouns, neutral modifiers) can be removed without changing
//! any prediction.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, LabeledInstance, Polarity, TaggedSentence};
use crate::scalar::Scalar;
use crate::sentiment::{Lexicon, NegationList};
use crate::tag::PosTag::{self, *};

pub const POSITIVE_WORDS: [(&str, i64); 6] =
    [("great", 3), ("wonderful", 3), ("excellent", 3), ("good", 2), ("superb", 3), ("nice", 2)];
pub const NEGATIVE_WORDS: [(&str, i64); 6] =
    [("awful", -3), ("terrible", -3), ("bad", -2), ("boring", -2), ("poor", -2), ("dull", -2)];

const DETERMINERS: [&str; 4] = ["the", "a", "this", "that"];
const NOUNS: [&str; 10] =
    ["movie", "book", "story", "product", "plot", "cast", "screen", "battery", "design", "ending"];
const PAST_VERBS: [&str; 4] = ["was", "seemed", "felt", "looked"];
const PRESENT_VERBS: [&str; 2] = ["is", "seems"];
const PREPOSITIONS: [&str; 5] = ["in", "of", "with", "for", "about"];
const PRONOUNS: [&str; 3] = ["it", "we", "they"];
const CONJUNCTIONS: [&str; 2] = ["and", "but"];
const ADVERBS: [&str; 4] = ["really", "quite", "rather", "truly"];
const NEUTRAL_ADJECTIVES: [&str; 6] = ["long", "new", "old", "red", "big", "short"];
const PROPER_NOUNS: [&str; 3] = ["Friday", "London", "Amazon"];
const ACTION_VERBS: [&str; 4] = ["bought", "watched", "read", "opened"];

#[derive(Clone, Copy)]
enum Slot {
    Fixed(PosTag, &'static [&'static str]),
    Sentiment,
    Negated,
    Literal(PosTag, &'static str),
}

use Slot::*;

const TEMPLATES: [&[Slot]; 6] = [
    // the movie was really great .
    &[
        Fixed(DT, &DETERMINERS),
        Fixed(NN, &NOUNS),
        Fixed(VBD, &PAST_VERBS),
        Fixed(RB, &ADVERBS),
        Sentiment,
        Literal(Period, "."),
    ],
    // we watched the long story with a battery .
    &[
        Fixed(PRP, &PRONOUNS),
        Fixed(VBD, &ACTION_VERBS),
        Fixed(DT, &DETERMINERS),
        Fixed(JJ, &NEUTRAL_ADJECTIVES),
        Fixed(NN, &NOUNS),
        Fixed(IN, &PREPOSITIONS),
        Fixed(DT, &DETERMINERS),
        Fixed(NN, &NOUNS),
        Literal(Period, "."),
    ],
    // the plot is good and the cast is old .
    &[
        Fixed(DT, &DETERMINERS),
        Fixed(NN, &NOUNS),
        Fixed(VBZ, &PRESENT_VERBS),
        Sentiment,
        Fixed(CC, &CONJUNCTIONS),
        Fixed(DT, &DETERMINERS),
        Fixed(NN, &NOUNS),
        Fixed(VBZ, &PRESENT_VERBS),
        Fixed(JJ, &NEUTRAL_ADJECTIVES),
        Literal(Period, "."),
    ],
    // it was not bad .
    &[Fixed(PRP, &PRONOUNS), Fixed(VBD, &PAST_VERBS), Literal(RB, "not"), Negated, Literal(Period, ".")],
    // the new book from London felt dull .
    &[
        Fixed(DT, &DETERMINERS),
        Fixed(JJ, &NEUTRAL_ADJECTIVES),
        Fixed(NN, &NOUNS),
        Fixed(IN, &PREPOSITIONS),
        Fixed(NNP, &PROPER_NOUNS),
        Fixed(VBD, &PAST_VERBS),
        Sentiment,
        Literal(Period, "."),
    ],
    // in the ending , they opened the screen .
    &[
        Fixed(IN, &PREPOSITIONS),
        Fixed(DT, &DETERMINERS),
        Fixed(NN, &NOUNS),
        Literal(Comma, ","),
        Fixed(PRP, &PRONOUNS),
        Fixed(VBD, &ACTION_VERBS),
        Fixed(DT, &DETERMINERS),
        Fixed(NN, &NOUNS),
        Literal(Period, "."),
    ],
];

/// Generator settings.
#[derive(Clone, Debug)]
pub struct SyntheticCorpus {
    pub name: String,
    pub instances: usize,
    pub sentences_min: usize,
    pub sentences_max: usize,
    /// Probability that a sentiment slot agrees with the gold label.
    pub agreement: f64,
    pub seed: u64,
}

impl SyntheticCorpus {
    pub fn new(name: impl Into<String>, instances: usize, seed: u64) -> Self {
        SyntheticCorpus {
            name: name.into(),
            instances,
            sentences_min: 3,
            sentences_max: 5,
            agreement: 0.85,
            seed,
        }
    }

    /// Alternating positive and negative instances.
    pub fn generate(&self) -> Corpus {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let instances = (0..self.instances)
            .map(|i| {
                let label = if i % 2 == 0 { Polarity::Positive } else { Polarity::Negative };
                let n = rng.random_range(self.sentences_min..=self.sentences_max);
                let sentences = (0..n).map(|_| self.sentence(label, &mut rng)).collect();
                LabeledInstance::new(sentences, label).expect("templates are non-empty")
            })
            .collect();
        Corpus::new(self.name.clone(), instances).expect("at least one instance requested")
    }

    fn sentence(&self, label: Polarity, rng: &mut ChaCha8Rng) -> TaggedSentence {
        let template = TEMPLATES.choose(rng).expect("templates");
        let mut pairs = Vec::with_capacity(template.len());
        for slot in template.iter() {
            let pair = match *slot {
                Fixed(tag, words) => (*words.choose(rng).expect("vocabulary"), tag),
                Literal(tag, word) => (word, tag),
                Sentiment | Negated => {
                    let agree = rng.random_bool(self.agreement);
                    let mut positive = (label == Polarity::Positive) == agree;
                    if matches!(slot, Negated) {
                        positive = !positive;
                    }
                    let pool = if positive { &POSITIVE_WORDS } else { &NEGATIVE_WORDS };
                    (pool.choose(rng).expect("sentiment words").0, JJ)
                }
            };
            pairs.push(pair);
        }
        TaggedSentence::from_pairs(pairs).expect("aligned by construction")
    }
}

/// The lexicon matching the generator's sentiment words.
pub fn synthetic_lexicon<S: Scalar>() -> Lexicon<S> {
    Lexicon::new(
        POSITIVE_WORDS
            .iter()
            .chain(&NEGATIVE_WORDS)
            .map(|&(w, v)| (w, S::from_i64(v).expect("small integers"))),
    )
    .expect("non-empty")
}

/// The lexicon in `word<TAB>value` file form.
pub fn synthetic_lexicon_text() -> String {
    POSITIVE_WORDS.iter().chain(&NEGATIVE_WORDS).map(|(w, v)| format!("{w}\t{v}\n")).collect()
}

pub fn synthetic_negations() -> NegationList {
    NegationList::default()
}

/// Share of corpus tokens that are lexicon entries.
pub fn sentiment_token_fraction<S: Scalar>(corpus: &Corpus, lexicon: &Lexicon<S>) -> f64 {
    let hits = corpus
        .instances()
        .iter()
        .flat_map(|i| i.sentences())
        .flat_map(|s| s.words())
        .filter(|w| lexicon.contains(w))
        .count();
    hits as f64 / corpus.word_count() as f64
}
