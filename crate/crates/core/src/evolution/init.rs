//! Random rule creation, bound repair, and the initial population.

use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::compressor::{Compressor, Rule, Scratch};
use crate::scalar::Scalar;
use crate::tag::PosTag;

use super::fitness::Evaluator;
use super::params::EvolutionParams;
use super::rng::{stream_rng, Purpose};
use super::{EvolutionError, Individual};

/// Neighbours tried per repair step.
const REPAIR_CANDIDATES: usize = 8;

/// Word tags plus the wildcard, for interior pattern positions.
const INTERIOR_TAGS: [PosTag; 37] = {
    let mut out = [PosTag::Wildcard; 37];
    let mut i = 0;
    while i < 36 {
        out[i] = PosTag::WORD_TAGS[i];
        i += 1;
    }
    out
};

pub(crate) fn random_tag_at<R: Rng + ?Sized>(pos: usize, len: usize, rng: &mut R) -> PosTag {
    let pool: &[PosTag] = if pos == 0 || pos + 1 == len { &PosTag::WORD_TAGS } else { &INTERIOR_TAGS };
    *pool.choose(rng).expect("tag pool is non-empty")
}

/// A random pattern: length uniform in `[tags_min, tags_max]`, word tags at
/// both ends, word tags or the wildcard inside. Never punctuation.
pub fn create_pos_tags<R: Rng + ?Sized>(tags_min: usize, tags_max: usize, rng: &mut R) -> Vec<PosTag> {
    let len = rng.random_range(tags_min..=tags_max);
    (0..len).map(|i| random_tag_at(i, len, rng)).collect()
}

/// Each index joins with probability 0.5; an empty draw gets one random index.
pub fn create_decisions<R: Rng + ?Sized>(n_tags: usize, rng: &mut R) -> Vec<usize> {
    let mut out: Vec<usize> = (0..n_tags).filter(|_| rng.random::<f64>() < 0.5).collect();
    if out.is_empty() {
        out.push(rng.random_range(0..n_tags));
    }
    out
}

pub fn create_rule<R: Rng + ?Sized>(params: &EvolutionParams, rng: &mut R) -> Rule {
    let tags = create_pos_tags(params.tags_min, params.tags_max, rng);
    let decisions = create_decisions(tags.len(), rng);
    Rule::new(tags, decisions).expect("generated rules satisfy the rule invariants")
}

/// One coin per slot up to `rules_max`, at least one rule, then padded up to
/// `rules_min`.
pub fn create_compressor<R: Rng + ?Sized>(params: &EvolutionParams, rng: &mut R) -> Compressor {
    let mut rules: Vec<Rule> = Vec::new();
    for _ in 0..params.rules_max {
        if rng.random::<f64>() < 0.5 {
            rules.push(create_rule(params, rng));
        }
    }
    while rules.len() < params.rules_min.max(1) {
        rules.push(create_rule(params, rng));
    }
    Compressor::new(rules).expect("at least one rule")
}

/// Half the time a pattern copied from a corpus window (interior tags
/// widened to `*` at the usual wildcard rate), otherwise [`create_rule`].
/// Uniform patterns rarely occur in text, so they cannot raise the rate.
fn repair_rule<S: Scalar, R: Rng + ?Sized>(
    params: &EvolutionParams,
    eval: &Evaluator<S>,
    rng: &mut R,
) -> Rule {
    if rng.random::<bool>() {
        let len = rng.random_range(params.tags_min..=params.tags_max);
        if let Some(mut tags) = eval.sample_window(len, rng) {
            for t in tags.iter_mut().take(len - 1).skip(1) {
                if rng.random_range(0..INTERIOR_TAGS.len()) == 0 {
                    *t = PosTag::Wildcard;
                }
            }
            let decisions = create_decisions(len, rng);
            return Rule::new(tags, decisions).expect("corpus windows hold word tags only");
        }
    }
    create_rule(params, rng)
}

#[derive(Clone, Copy)]
enum Move {
    Add,
    Remove,
    Replace,
    Redecide,
}

fn neighbour<S: Scalar, R: Rng + ?Sized>(
    rules: &[Rule],
    mv: Move,
    params: &EvolutionParams,
    eval: &Evaluator<S>,
    rng: &mut R,
) -> Vec<Rule> {
    let mut out = rules.to_vec();
    match mv {
        Move::Add => {
            let at = rng.random_range(0..=out.len());
            out.insert(at, repair_rule(params, eval, rng));
        }
        Move::Remove => {
            out.remove(rng.random_range(0..out.len()));
        }
        Move::Replace => {
            let at = rng.random_range(0..out.len());
            out[at] = repair_rule(params, eval, rng);
        }
        Move::Redecide => {
            let at = rng.random_range(0..out.len());
            let tags = out[at].tags().to_vec();
            let decisions = create_decisions(tags.len(), rng);
            out[at] = Rule::new(tags, decisions).expect("same pattern, fresh decisions");
        }
    }
    out
}

/// Brings a rule list within the rule-count bounds and the compression window.
///
/// Counts are fixed first by dropping or adding random rules. Then, for up to
/// `max_steps` steps, several random neighbours that move the rate toward the
/// window (add or remove a rule, replace a rule, redraw a rule's decisions)
/// are scored and the closest one is kept. Added and replacement rules are
/// often copied from the corpus (see `repair_rule`). Returns `None` if the
/// window is not reached.
pub fn repair<S: Scalar, R: Rng + ?Sized>(
    mut rules: Vec<Rule>,
    params: &EvolutionParams,
    eval: &Evaluator<S>,
    rng: &mut R,
    max_steps: usize,
    scratch: &mut Scratch,
) -> Option<(Compressor, f64)> {
    let floor = params.rules_min.max(1);
    while rules.len() > params.rules_max {
        rules.remove(rng.random_range(0..rules.len()));
    }
    while rules.len() < floor {
        let at = rng.random_range(0..=rules.len());
        rules.insert(at, create_rule(params, rng));
    }
    let mut current = Compressor::new(rules).expect("non-empty after padding");
    let mut rate = eval.compression_rate(&current, scratch);

    for _ in 0..max_steps {
        if params.rate_in_bounds(rate) {
            return Some((current, rate));
        }
        let n = current.num_rules();
        let mut moves = Vec::with_capacity(3);
        if rate < params.lcb {
            if n < params.rules_max {
                moves.push(Move::Add);
            }
        } else if n > floor {
            moves.push(Move::Remove);
        }
        moves.extend([Move::Replace, Move::Redecide]);

        let mut best: Option<(Compressor, f64)> = None;
        for _ in 0..REPAIR_CANDIDATES {
            let mv = *moves.choose(rng).expect("moves non-empty");
            let cand =
                Compressor::new(neighbour(current.rules(), mv, params, eval, rng)).expect("never empties");
            let r = eval.compression_rate(&cand, scratch);
            let better = match &best {
                None => true,
                Some((_, br)) => params.distance_to_bounds(r) < params.distance_to_bounds(*br),
            };
            if better {
                best = Some((cand, r));
            }
        }
        let (c, r) = best.expect("at least one candidate");
        current = c;
        rate = r;
    }
    params.rate_in_bounds(rate).then_some((current, rate))
}

/// Creates one feasible individual: fresh draws first, then repair of the last
/// draw.
pub(crate) fn feasible_compressor<S: Scalar, R: Rng + ?Sized>(
    params: &EvolutionParams,
    eval: &Evaluator<S>,
    rng: &mut R,
    scratch: &mut Scratch,
) -> Result<Compressor, f64> {
    let mut last = None;
    for _ in 0..params.max_repair_attempts {
        let c = create_compressor(params, rng);
        let rate = eval.compression_rate(&c, scratch);
        if params.rate_in_bounds(rate) {
            return Ok(c);
        }
        last = Some((c, rate));
    }
    let start = match last {
        Some((c, _)) => c,
        None => create_compressor(params, rng),
    };
    let fallback_rate = eval.compression_rate(&start, scratch);
    repair(start.into_rules(), params, eval, rng, params.max_repair_steps, scratch)
        .map(|(c, _)| c)
        .ok_or(fallback_rate)
}

/// `population_size` individuals, each within the compression window and the
/// rule-count bounds on the evaluator's corpus.
pub fn init_population<S: Scalar>(
    params: &EvolutionParams,
    eval: &Evaluator<S>,
) -> Result<Vec<Individual<S>>, EvolutionError> {
    params.validate()?;
    (0..params.population_size)
        .into_par_iter()
        .map_init(Scratch::default, |scratch, i| {
            let mut rng = stream_rng(params.seed, Purpose::Init, 0, i as u64);
            let compressor = feasible_compressor(params, eval, &mut rng, scratch).map_err(|rate| {
                EvolutionError::InitializationFailure {
                    index: i,
                    lcb: params.lcb,
                    ucb: params.ucb,
                    rules_min: params.rules_min,
                    rules_max: params.rules_max,
                    last_rate: rate,
                }
            })?;
            let fitness = eval.fitness(&compressor, scratch);
            Ok(Individual { compressor, fitness })
        })
        .collect()
}
