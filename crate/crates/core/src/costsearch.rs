//! Genetic-algorithm search over per-class cost vectors.
//!
//! Fitness of a candidate cost vector is the validation G-mean of a
//! SAMME.C2 ensemble trained with it. The search uses tournament
//! selection, uniform crossover, Gaussian mutation clipped to (0,1],
//! and elitism, so the best fitness per generation never decreases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::boosting::{self, BoostConfig, CostVector, Variant};
use crate::data::{stratified_split, Dataset};
use crate::derive_seed;
use crate::error::{Error, Result};
use crate::metrics;

/// Smallest admissible cost; keeps mutated genes inside (0,1].
const COST_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct GAConfig {
    pub population_size: usize,
    pub generations: usize,
    pub tournament_size: usize,
    pub mutation_sigma: f64,
    pub elitism_count: usize,
    /// Boosting rounds used during fitness evaluation; the final model is
    /// retrained at full strength with the winning costs.
    pub fitness_rounds: usize,
    /// Stratified share of the training set held out for fitness.
    pub validation_fraction: f64,
    pub seed: u64,
}

impl Default for GAConfig {
    fn default() -> Self {
        GAConfig {
            population_size: 20,
            generations: 30,
            tournament_size: 3,
            mutation_sigma: 0.1,
            elitism_count: 2,
            fitness_rounds: 50,
            validation_fraction: 0.2,
            seed: 0,
        }
    }
}

impl GAConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0
            || self.tournament_size == 0
            || self.fitness_rounds == 0
            || self.mutation_sigma.is_nan()
            || self.mutation_sigma < 0.0
        {
            return Err(Error::InvalidConfig("ga parameters must be positive".into()));
        }
        if self.elitism_count >= self.population_size {
            return Err(Error::InvalidConfig(
                "elitism_count must be below population_size".into(),
            ));
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(Error::InvalidConfig(
                "validation_fraction must be in (0,1)".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GaResult {
    pub best_costs: Vec<f64>,
    pub best_fitness: f64,
    /// Best fitness after evaluating each population, starting with the
    /// initial one (`generations + 1` entries).
    pub history: Vec<f64>,
}

/// Validation G-mean of a SAMME.C2 fit with the given per-class costs.
pub fn evaluate_fitness(
    costs: &[f64],
    train: &Dataset,
    valid: &Dataset,
    cfg: &GAConfig,
) -> Result<f64> {
    let boost_cfg = BoostConfig::new(Variant::SammeC2, cfg.fitness_rounds, derive_seed(cfg.seed, &[0xf1]))
        .with_costs(CostVector::new(costs.to_vec())?);
    let ensemble = boosting::fit(train, &boost_cfg)?;
    let predicted = ensemble.predict_batch(valid)?;
    let cm = metrics::confusion(valid.labels(), &predicted, valid.k())?;
    let stats = metrics::per_class_stats(&cm);
    Ok(metrics::gmean(&stats.recall))
}

pub fn ga_search(train: &Dataset, cfg: &GAConfig) -> Result<GaResult> {
    cfg.validate()?;
    let k = train.k();
    let mut init_rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[0x10]));
    let mut population: Vec<Vec<f64>> = vec![vec![1.0; k]]; // seeded uniform-cost individual
    while population.len() < cfg.population_size {
        population.push((0..k).map(|_| 1.0 - init_rng.gen::<f64>()).collect());
    }
    ga_search_from(train, cfg, population)
}

/// Runs the search from an explicit initial population (exposed so tests
/// can pin degenerate populations).
pub fn ga_search_from(
    train: &Dataset,
    cfg: &GAConfig,
    mut population: Vec<Vec<f64>>,
) -> Result<GaResult> {
    cfg.validate()?;
    if population.len() != cfg.population_size {
        return Err(Error::InvalidConfig(format!(
            "initial population has {} individuals, expected {}",
            population.len(),
            cfg.population_size
        )));
    }
    let split = stratified_split(
        train,
        1.0 - cfg.validation_fraction,
        derive_seed(cfg.seed, &[0x11]),
    )?;
    let (fit_set, valid_set) = (split.train, split.test);

    let mut fitness = evaluate_all(&population, &fit_set, &valid_set, cfg)?;
    let mut history = Vec::with_capacity(cfg.generations + 1);
    let (mut best_idx, mut best_fit) = argmax_fitness(&fitness);
    let mut best_costs = population[best_idx].clone();
    history.push(best_fit);

    for generation in 0..cfg.generations {
        let mut ranked: Vec<usize> = (0..population.len()).collect();
        ranked.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]).then(a.cmp(&b)));

        let mut next: Vec<Vec<f64>> = ranked
            .iter()
            .take(cfg.elitism_count)
            .map(|&i| population[i].clone())
            .collect();
        for slot in next.len()..cfg.population_size {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                cfg.seed,
                &[0x20, generation as u64, slot as u64],
            ));
            let a = tournament(&fitness, cfg.tournament_size, &mut rng);
            let b = tournament(&fitness, cfg.tournament_size, &mut rng);
            let child: Vec<f64> = (0..population[a].len())
                .map(|g| {
                    let gene = if rng.gen_bool(0.5) {
                        population[a][g]
                    } else {
                        population[b][g]
                    };
                    let noise: f64 = rng.sample(StandardNormal);
                    (gene + cfg.mutation_sigma * noise).clamp(COST_FLOOR, 1.0)
                })
                .collect();
            next.push(child);
        }
        population = next;
        fitness = evaluate_all(&population, &fit_set, &valid_set, cfg)?;
        let (gen_best_idx, gen_best) = argmax_fitness(&fitness);
        if gen_best > best_fit {
            best_fit = gen_best;
            best_idx = gen_best_idx;
            best_costs = population[best_idx].clone();
        }
        history.push(best_fit);
    }

    Ok(GaResult {
        best_costs,
        best_fitness: best_fit,
        history,
    })
}

fn evaluate_all(
    population: &[Vec<f64>],
    fit_set: &Dataset,
    valid_set: &Dataset,
    cfg: &GAConfig,
) -> Result<Vec<f64>> {
    population
        .iter()
        .map(|costs| evaluate_fitness(costs, fit_set, valid_set, cfg))
        .collect()
}

fn argmax_fitness(fitness: &[f64]) -> (usize, f64) {
    let mut best = 0;
    for i in 1..fitness.len() {
        if fitness[i] > fitness[best] {
            best = i;
        }
    }
    (best, fitness[best])
}

fn tournament(fitness: &[f64], size: usize, rng: &mut ChaCha8Rng) -> usize {
    let mut winner = rng.gen_range(0..fitness.len());
    for _ in 1..size {
        let challenger = rng.gen_range(0..fitness.len());
        if fitness[challenger] > fitness[winner] {
            winner = challenger;
        }
    }
    winner
}
