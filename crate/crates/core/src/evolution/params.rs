use serde::{Deserialize, Serialize};

use crate::compressor::Compressor;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid evolution parameters: {0}")]
pub struct ParamsError(pub String);

/// Run configuration. Field names double as config keys and CLI flag names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionParams {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    /// Lower compression bound, percent.
    pub lcb: f64,
    /// Upper compression bound, percent.
    pub ucb: f64,
    pub rules_min: usize,
    pub rules_max: usize,
    pub tags_min: usize,
    pub tags_max: usize,
    pub tournament_size: usize,
    pub elitism: usize,
    pub length_weight: f64,
    pub rules_weight: f64,
    /// Fresh draws per individual at initialization, and repair steps for
    /// offspring before falling back to a parent.
    pub max_repair_attempts: usize,
    /// Repair steps allowed for an initial individual before giving up.
    pub max_repair_steps: usize,
    pub seed: u64,
}

impl Default for EvolutionParams {
    fn default() -> Self {
        let preset = BoundsPreset::TABLE[0];
        EvolutionParams {
            population_size: 250,
            generations: 100,
            crossover_rate: 0.60,
            mutation_rate: 0.40,
            lcb: preset.lcb,
            ucb: preset.ucb,
            rules_min: preset.rules_min,
            rules_max: preset.rules_max,
            tags_min: 2,
            tags_max: 5,
            tournament_size: 4,
            elitism: 1,
            length_weight: 0.5,
            rules_weight: 0.1,
            max_repair_attempts: 50,
            max_repair_steps: 1000,
            seed: 0,
        }
    }
}

impl EvolutionParams {
    /// Default parameters with the bounds of a preset.
    pub fn with_bounds(preset: BoundsPreset) -> Self {
        EvolutionParams {
            lcb: preset.lcb,
            ucb: preset.ucb,
            rules_min: preset.rules_min,
            rules_max: preset.rules_max,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let fail = |m: String| Err(ParamsError(m));
        if !(self.lcb > 0.0 && self.lcb < self.ucb && self.ucb <= 100.0) {
            return fail(format!("need 0 < lcb < ucb <= 100, got lcb={} ucb={}", self.lcb, self.ucb));
        }
        if !(1 <= self.rules_min && self.rules_min <= self.rules_max) {
            return fail(format!(
                "need 1 <= rules_min <= rules_max, got {}..{}",
                self.rules_min, self.rules_max
            ));
        }
        if !(1 <= self.tags_min && self.tags_min <= self.tags_max) {
            return fail(format!("need 1 <= tags_min <= tags_max, got {}..{}", self.tags_min, self.tags_max));
        }
        for (name, p) in [("crossover_rate", self.crossover_rate), ("mutation_rate", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("{name} must be in [0, 1], got {p}"));
            }
        }
        if self.population_size == 0 {
            return fail("population_size must be positive".into());
        }
        if self.tournament_size == 0 {
            return fail("tournament_size must be positive".into());
        }
        if self.elitism > self.population_size {
            return fail(format!(
                "elitism {} exceeds population_size {}",
                self.elitism, self.population_size
            ));
        }
        if !self.length_weight.is_finite() || !self.rules_weight.is_finite() {
            return fail("fitness weights must be finite".into());
        }
        Ok(())
    }

    pub fn rate_in_bounds(&self, rate: f64) -> bool {
        self.lcb <= rate && rate <= self.ucb
    }

    /// Distance from `rate` to the `[lcb, ucb]` window; zero inside it.
    pub fn distance_to_bounds(&self, rate: f64) -> f64 {
        if rate < self.lcb {
            self.lcb - rate
        } else if rate > self.ucb {
            rate - self.ucb
        } else {
            0.0
        }
    }

    pub fn rule_count_in_bounds(&self, n: usize) -> bool {
        self.rules_min <= n && n <= self.rules_max
    }

    /// Whether every rule pattern length lies in `[tags_min, tags_max]`.
    pub fn pattern_lengths_in_bounds(&self, c: &Compressor) -> bool {
        c.rules().iter().all(|r| self.tags_min <= r.len() && r.len() <= self.tags_max)
    }
}

/// Compression window and rule-count bounds used together in experiments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundsPreset {
    pub lcb: f64,
    pub ucb: f64,
    pub rules_min: usize,
    pub rules_max: usize,
}

impl BoundsPreset {
    /// The fixed-rate experiment grid. The 20% row uses ucb = 23.
    pub const TABLE: [BoundsPreset; 6] = [
        BoundsPreset { lcb: 10.0, ucb: 13.0, rules_min: 5, rules_max: 50 },
        BoundsPreset { lcb: 15.0, ucb: 18.0, rules_min: 10, rules_max: 70 },
        BoundsPreset { lcb: 20.0, ucb: 23.0, rules_min: 20, rules_max: 90 },
        BoundsPreset { lcb: 25.0, ucb: 28.0, rules_min: 40, rules_max: 120 },
        BoundsPreset { lcb: 30.0, ucb: 33.0, rules_min: 90, rules_max: 150 },
        BoundsPreset { lcb: 50.0, ucb: 53.0, rules_min: 350, rules_max: 500 },
    ];

    /// No rule bounds were published for the 75% setting.
    pub const SEVENTY_FIVE: BoundsPreset =
        BoundsPreset { lcb: 75.0, ucb: 78.0, rules_min: 350, rules_max: 500 };

    /// Looks up a preset by its lower bound.
    pub fn for_rate(lcb: u32) -> Option<BoundsPreset> {
        Self::TABLE.iter().chain(std::iter::once(&Self::SEVENTY_FIVE)).find(|p| p.lcb == lcb as f64).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = EvolutionParams::default();
        p.validate().unwrap();
        assert_eq!((p.population_size, p.generations), (250, 100));
        assert_eq!((p.crossover_rate, p.mutation_rate), (0.6, 0.4));
        for preset in BoundsPreset::TABLE {
            EvolutionParams::with_bounds(preset).validate().unwrap();
        }
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = |f: fn(&mut EvolutionParams)| {
            let mut p = EvolutionParams::default();
            f(&mut p);
            p.validate().is_err()
        };
        assert!(bad(|p| p.ucb = p.lcb));
        assert!(bad(|p| p.lcb = 0.0));
        assert!(bad(|p| p.ucb = 101.0));
        assert!(bad(|p| p.rules_min = 0));
        assert!(bad(|p| p.rules_min = p.rules_max + 1));
        assert!(bad(|p| p.tags_min = 6));
        assert!(bad(|p| p.mutation_rate = 1.5));
        assert!(bad(|p| p.elitism = 1000));
    }

    #[test]
    fn bounds_distance() {
        let p = EvolutionParams::default();
        assert_eq!(p.distance_to_bounds(11.0), 0.0);
        assert_eq!(p.distance_to_bounds(8.0), 2.0);
        assert_eq!(p.distance_to_bounds(14.5), 1.5);
        assert_eq!(BoundsPreset::for_rate(20).unwrap().ucb, 23.0);
        assert_eq!(BoundsPreset::for_rate(75).unwrap().rules_min, 350);
        assert!(BoundsPreset::for_rate(40).is_none());
    }
}
