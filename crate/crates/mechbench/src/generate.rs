//! Seeded random instances.
//!
//! The stream is SplitMix64: the state starts at the seed, each draw adds
//! `0x9E3779B97F4A7C15` to the state (wrapping) and returns
//!
//! ```text
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z ^ (z >> 31)
//! ```
//!
//! A draw from the inclusive range `lo..=hi` is `lo + (next % (hi - lo + 1))`.
//! Draws happen in this order:
//!
//! 1. agent count `I`;
//! 2. type count of each agent, agent 1 first;
//! 3. strategy count of each agent;
//! 4. outcome count;
//! 5. strategy format, `0` oral and `1` laborious;
//! 6. utilities, by agent, then outcome, then type, from the utility range;
//! 7. random-joint prior only: one weight in `1..=8` per type profile in
//!    lexicographic order, normalized by their sum;
//! 8. the outcome index of every joint strategy profile in lexicographic
//!    order, from `0..=|X|-1`.
//!
//! Labels are `t0, t1, ...` for types, `s0, s1, ...` for strategies and
//! `x0, x1, ...` for outcomes.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use mechbench_core::game::{Environment, LabelSet, Mechanism, StrategyFormat};
use mechbench_core::rational::int;
use mechbench_core::Rational;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::document::InstanceDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorMode {
    /// Every type profile has probability `1/|Θ|`.
    IndependentUniform,
    /// Positive integer weights over type profiles, normalized.
    RandomJoint,
}

impl FromStr for PriorMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "independent" | "independent-uniform" => Ok(PriorMode::IndependentUniform),
            "joint" | "random-joint" => Ok(PriorMode::RandomJoint),
            other => Err(format!(
                "unknown prior mode `{other}` (expected independent-uniform or random-joint)"
            )),
        }
    }
}

impl fmt::Display for PriorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PriorMode::IndependentUniform => "independent-uniform",
            PriorMode::RandomJoint => "random-joint",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub agents: RangeInclusive<usize>,
    pub types: RangeInclusive<usize>,
    pub strategies: RangeInclusive<usize>,
    pub outcomes: RangeInclusive<usize>,
    pub utilities: RangeInclusive<i64>,
    pub prior: PriorMode,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            agents: 1..=3,
            types: 1..=3,
            strategies: 1..=3,
            outcomes: 1..=4,
            utilities: -4..=4,
            prior: PriorMode::RandomJoint,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorConfig {
            seed,
            ..self.clone()
        }
    }

    /// Checks that every range is nonempty and every count range starts at 1
    /// or more.
    pub fn check(&self) -> Result<(), String> {
        for (name, r) in [
            ("agents", &self.agents),
            ("types", &self.types),
            ("strategies", &self.strategies),
            ("outcomes", &self.outcomes),
        ] {
            if r.is_empty() || *r.start() == 0 {
                return Err(format!(
                    "{name} range must be nonempty and start at 1 or more"
                ));
            }
        }
        if self.utilities.is_empty() {
            return Err("utility range must be nonempty".into());
        }
        Ok(())
    }
}

struct Draws(SplitMix64);

impl Draws {
    fn below(&mut self, n: u64) -> u64 {
        self.0.next_u64() % n
    }

    fn count(&mut self, r: &RangeInclusive<usize>) -> usize {
        let span = (r.end() - r.start()) as u64 + 1;
        r.start() + self.below(span) as usize
    }

    fn value(&mut self, r: &RangeInclusive<i64>) -> i64 {
        let span = r.end().abs_diff(*r.start()) + 1;
        r.start().wrapping_add(self.below(span) as i64)
    }
}

fn labels(prefix: &str, n: usize) -> LabelSet {
    LabelSet::new("labels", (0..n).map(|k| format!("{prefix}{k}"))).expect("distinct labels")
}

/// Draws one instance. Identical configurations give identical documents.
///
/// Panics if [`GeneratorConfig::check`] fails.
pub fn generate_instance(cfg: &GeneratorConfig) -> InstanceDocument {
    cfg.check().expect("generator configuration");
    let mut rng = Draws(SplitMix64::seed_from_u64(cfg.seed));
    let agents = rng.count(&cfg.agents);
    let types: Vec<usize> = (0..agents).map(|_| rng.count(&cfg.types)).collect();
    let strategies: Vec<usize> = (0..agents).map(|_| rng.count(&cfg.strategies)).collect();
    let outcomes = rng.count(&cfg.outcomes);
    let format = match rng.below(2) {
        0 => StrategyFormat::Oral,
        _ => StrategyFormat::Laborious,
    };

    let mut env = Environment::new(
        types.iter().map(|&n| labels("t", n)).collect(),
        labels("x", outcomes),
    )
    .expect("nonempty environment");
    for (agent, &nt) in types.iter().enumerate() {
        for x in 0..outcomes {
            for t in 0..nt {
                env.set_utility(agent, x, t, int(rng.value(&cfg.utilities)));
            }
        }
    }
    match cfg.prior {
        PriorMode::IndependentUniform => env.set_uniform_prior(),
        PriorMode::RandomJoint => {
            let size = env.type_profiles().size();
            let weights: Vec<u64> = (0..size).map(|_| 1 + rng.below(8)).collect();
            let total: u64 = weights.iter().sum();
            for (idx, w) in weights.into_iter().enumerate() {
                let profile = env.type_profiles().decode(idx);
                env.set_prior(&profile, Rational::new(w.into(), total.into()));
            }
        }
    }
    let mechanism = Mechanism::from_fn(
        &env,
        strategies.iter().map(|&n| labels("s", n)).collect(),
        format,
        |_| rng.below(outcomes as u64) as usize,
    )
    .expect("generated table is total");
    InstanceDocument {
        environment: env,
        mechanism,
        scf: None,
        energy: None,
        designer_budget: None,
    }
}
