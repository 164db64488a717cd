//! The generational evolutionary loop over compressors.

mod fitness;
mod init;
mod operators;
mod params;
pub mod rng;

pub use fitness::{
    fitness, label_change_score, Evaluator, FitnessReport, FitnessWeights, PrecomputedBaseline,
};
pub use init::{create_compressor, create_decisions, create_pos_tags, create_rule, init_population, repair};
pub use operators::{crossover, crossover_at, mutate, mutate_raw, select, select_index, Mutation};
pub use params::{BoundsPreset, EvolutionParams, ParamsError};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::compressor::{Compressor, Scratch};
use crate::corpus::Corpus;
use crate::scalar::Scalar;
use crate::sentiment::BaselineAnalyzer;

use rng::{stream_rng, Purpose};

#[derive(Debug, thiserror::Error)]
pub enum EvolutionError {
    #[error(transparent)]
    InvalidParams(#[from] ParamsError),
    #[error(
        "could not bring individual {index} into the compression window [{lcb}, {ucb}] with \
         {rules_min}..={rules_max} rules (last rate {last_rate:.2}%)"
    )]
    InitializationFailure {
        index: usize,
        lcb: f64,
        ucb: f64,
        rules_min: usize,
        rules_max: usize,
        last_rate: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Individual<S> {
    pub compressor: Compressor,
    pub fitness: FitnessReport<S>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenerationStats<S> {
    pub generation: usize,
    pub best: FitnessReport<S>,
    pub mean_total: S,
    pub mean_compression_rate: f64,
    pub min_compression_rate: f64,
    pub max_compression_rate: f64,
}

impl<S: Scalar> GenerationStats<S> {
    fn summarize(generation: usize, population: &[Individual<S>]) -> Self {
        let n = population.len();
        let best = &population[best_index(population)].fitness;
        let rates = population.iter().map(|i| i.fitness.compression_rate);
        GenerationStats {
            generation,
            best: best.clone(),
            mean_total: population.iter().map(|i| i.fitness.total).sum::<S>() / S::from_count(n),
            mean_compression_rate: rates.clone().sum::<f64>() / n as f64,
            min_compression_rate: rates.clone().fold(f64::INFINITY, f64::min),
            max_compression_rate: rates.fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvolutionRun<S> {
    /// Highest total seen in any generation; the earliest wins ties.
    pub best: Individual<S>,
    /// Generation 0 is the initial population.
    pub history: Vec<GenerationStats<S>>,
    pub final_population: Vec<Individual<S>>,
}

/// Index of the highest total, lowest index on ties.
fn best_index<S: Scalar>(population: &[Individual<S>]) -> usize {
    let mut best = 0;
    for (i, ind) in population.iter().enumerate().skip(1) {
        if ind.fitness.total > population[best].fitness.total {
            best = i;
        }
    }
    best
}

fn ranked<S: Scalar>(population: &[Individual<S>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&a, &b| {
        population[b]
            .fitness
            .total
            .partial_cmp(&population[a].fitness.total)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

/// Runs the EA on `train` with the baseline analyzer inside the fitness.
pub fn evolve<S: Scalar>(
    params: &EvolutionParams,
    train: &Corpus,
    analyzer: &BaselineAnalyzer<S>,
) -> Result<EvolutionRun<S>, EvolutionError> {
    evolve_with_observer(params, train, analyzer, |_, _| {})
}

/// [`evolve`], calling `observe(generation, population)` after the initial
/// population and after every generation.
pub fn evolve_with_observer<S: Scalar, F>(
    params: &EvolutionParams,
    train: &Corpus,
    analyzer: &BaselineAnalyzer<S>,
    mut observe: F,
) -> Result<EvolutionRun<S>, EvolutionError>
where
    F: FnMut(usize, &[Individual<S>]),
{
    params.validate()?;
    let eval = Evaluator::new(train, analyzer, FitnessWeights::from_params(params)?);

    let mut population = init_population(params, &eval)?;
    observe(0, &population);
    let mut history = vec![GenerationStats::summarize(0, &population)];
    let mut best = population[best_index(&population)].clone();
    log::info!("generation 0: best total {:?}", best.fitness.total);

    for generation in 1..=params.generations {
        population = next_generation(&population, generation, params, &eval);
        observe(generation, &population);
        history.push(GenerationStats::summarize(generation, &population));
        let gen_best = &population[best_index(&population)];
        if gen_best.fitness.total > best.fitness.total {
            best = gen_best.clone();
        }
        log::info!("generation {generation}: best total {:?}", gen_best.fitness.total);
    }

    Ok(EvolutionRun { best, history, final_population: population })
}

fn next_generation<S: Scalar>(
    population: &[Individual<S>],
    generation: usize,
    params: &EvolutionParams,
    eval: &Evaluator<S>,
) -> Vec<Individual<S>> {
    let size = params.population_size;
    let elites = params.elitism.min(size);
    let mut next: Vec<Individual<S>> =
        ranked(population).into_iter().take(elites).map(|i| population[i].clone()).collect();

    let remainder = size - next.len();
    let pairs = remainder.div_ceil(2);
    let offspring: Vec<Individual<S>> = (0..pairs)
        .into_par_iter()
        .map_init(Scratch::default, |scratch, pair| {
            let mut rng = stream_rng(params.seed, Purpose::Breed, generation as u64, pair as u64);
            let pa = &select(population, &mut rng, params).compressor;
            let pb = &select(population, &mut rng, params).compressor;
            let (mut ca, mut cb) = if rng.random_bool(params.crossover_rate) {
                crossover(pa, pb, &mut rng, params, eval, scratch)
            } else {
                (pa.clone(), pb.clone())
            };
            for child in [&mut ca, &mut cb] {
                if rng.random_bool(params.mutation_rate) {
                    *child = mutate(child, &mut rng, params, eval, scratch);
                }
            }
            [ca, cb].map(|compressor| {
                let fitness = eval.fitness(&compressor, scratch);
                Individual { compressor, fitness }
            })
        })
        .flatten_iter()
        .collect();

    next.extend(offspring.into_iter().take(remainder));
    next
}
