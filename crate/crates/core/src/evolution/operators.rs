//! Variation and selection. Every offspring is repaired back into the
//! compression window; if repair fails the parent takes its place.

use rand::seq::{index, IndexedRandom};
use rand::Rng;

use crate::compressor::{Compressor, Rule, Scratch};
use crate::scalar::Scalar;

use super::fitness::Evaluator;
use super::init::{create_decisions, create_rule, random_tag_at, repair};
use super::params::EvolutionParams;
use super::Individual;

/// Head of `a` up to `cut_a` joined with the tail of `b` from `cut_b`, and
/// the converse. Children may be empty or oversized; callers repair them.
pub fn crossover_at(a: &Compressor, b: &Compressor, cut_a: usize, cut_b: usize) -> (Vec<Rule>, Vec<Rule>) {
    let (ra, rb) = (a.rules(), b.rules());
    let child_a = ra[..cut_a].iter().chain(&rb[cut_b..]).cloned().collect();
    let child_b = rb[..cut_b].iter().chain(&ra[cut_a..]).cloned().collect();
    (child_a, child_b)
}

/// Single-point crossover over the rule lists with independent cut points.
pub fn crossover<S: Scalar, R: Rng + ?Sized>(
    parent_a: &Compressor,
    parent_b: &Compressor,
    rng: &mut R,
    params: &EvolutionParams,
    eval: &Evaluator<S>,
    scratch: &mut Scratch,
) -> (Compressor, Compressor) {
    let cut_a = rng.random_range(0..=parent_a.num_rules());
    let cut_b = rng.random_range(0..=parent_b.num_rules());
    let (ca, cb) = crossover_at(parent_a, parent_b, cut_a, cut_b);
    let mut fix = |rules: Vec<Rule>, parent: &Compressor| {
        repair(rules, params, eval, rng, params.max_repair_attempts, scratch)
            .map(|(c, _)| c)
            .unwrap_or_else(|| parent.clone())
    };
    (fix(ca, parent_a), fix(cb, parent_b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    AddRule,
    RemoveRule,
    ReplaceTag,
    RegenerateDecisions,
}

/// Applies one sub-operation without repairing. Adding at `rules_max` or
/// removing at `rules_min` is never drawn.
pub fn mutate_raw<R: Rng + ?Sized>(
    compressor: &Compressor,
    rng: &mut R,
    params: &EvolutionParams,
) -> (Mutation, Vec<Rule>) {
    let n = compressor.num_rules();
    let mut ops = Vec::with_capacity(4);
    if n < params.rules_max {
        ops.push(Mutation::AddRule);
    }
    if n > params.rules_min.max(1) {
        ops.push(Mutation::RemoveRule);
    }
    ops.extend([Mutation::ReplaceTag, Mutation::RegenerateDecisions]);
    let op = *ops.choose(rng).expect("ops non-empty");

    let mut rules = compressor.rules().to_vec();
    match op {
        Mutation::AddRule => {
            let at = rng.random_range(0..=rules.len());
            rules.insert(at, create_rule(params, rng));
        }
        Mutation::RemoveRule => {
            rules.remove(rng.random_range(0..rules.len()));
        }
        Mutation::ReplaceTag => {
            let at = rng.random_range(0..rules.len());
            let mut tags = rules[at].tags().to_vec();
            let pos = rng.random_range(0..tags.len());
            tags[pos] = random_tag_at(pos, tags.len(), rng);
            rules[at] = Rule::new(tags, rules[at].decisions().to_vec()).expect("length unchanged");
        }
        Mutation::RegenerateDecisions => {
            let at = rng.random_range(0..rules.len());
            let tags = rules[at].tags().to_vec();
            let decisions = create_decisions(tags.len(), rng);
            rules[at] = Rule::new(tags, decisions).expect("fresh decisions are in range");
        }
    }
    (op, rules)
}

/// One random sub-operation followed by repair. Returns the input unchanged
/// if the result cannot be repaired.
pub fn mutate<S: Scalar, R: Rng + ?Sized>(
    compressor: &Compressor,
    rng: &mut R,
    params: &EvolutionParams,
    eval: &Evaluator<S>,
    scratch: &mut Scratch,
) -> Compressor {
    let (_, rules) = mutate_raw(compressor, rng, params);
    repair(rules, params, eval, rng, params.max_repair_attempts, scratch)
        .map(|(c, _)| c)
        .unwrap_or_else(|| compressor.clone())
}

/// Tournament over `tournament_size` distinct individuals; ties are broken
/// uniformly at random. Returns an index into `totals`.
pub fn select_index<S: Scalar, R: Rng + ?Sized>(totals: &[S], tournament_size: usize, rng: &mut R) -> usize {
    assert!(!totals.is_empty(), "cannot select from an empty population");
    let k = tournament_size.clamp(1, totals.len());
    let entrants = index::sample(rng, totals.len(), k);
    let mut best: Vec<usize> = Vec::with_capacity(k);
    for i in entrants.iter() {
        match best.first() {
            None => best.push(i),
            Some(&b) if totals[i] > totals[b] => {
                best.clear();
                best.push(i);
            }
            Some(&b) if totals[i] == totals[b] => best.push(i),
            _ => {}
        }
    }
    // sample() order is random; sort so the tie-break draw alone decides
    best.sort_unstable();
    *best.choose(rng).expect("tournament has an entrant")
}

pub fn select<'p, S: Scalar, R: Rng + ?Sized>(
    population: &'p [Individual<S>],
    rng: &mut R,
    params: &EvolutionParams,
) -> &'p Individual<S> {
    let totals: Vec<S> = population.iter().map(|i| i.fitness.total).collect();
    &population[select_index(&totals, params.tournament_size, rng)]
}
