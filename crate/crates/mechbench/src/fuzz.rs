//! Seeded search for counterexamples to truthful implementability of the
//! direct mechanisms built from equilibria.
//!
//! Iteration `k` of a run with base seed `s` generates its instance with seed
//! `s + k` (wrapping). Each instance goes through the document round trip,
//! the full revelation pipeline, and then every emitted direct mechanism is
//! serialized, re-parsed and checked for truthfulness on its own.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use mechbench_core::equilibrium::search_space_size;
use mechbench_core::revelation::{is_truthful_bne, verify_revelation_principle, DirectMechanism};
use mechbench_core::CoreError;
use rayon::prelude::*;

use crate::document::{parse_instance, InstanceDocument};
use crate::generate::{generate_instance, GeneratorConfig};

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub generator: GeneratorConfig,
    pub count: u64,
    pub cap: u128,
    /// Where failing documents are written; nothing is written when `None`.
    pub failure_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// The revelation pipeline itself reported a broken report.
    Counterexample(String),
    /// An emitted direct mechanism did not survive re-parsing or was not
    /// truthful on its own.
    Closure(String),
    RoundTrip,
}

impl Failure {
    pub fn describe(&self) -> String {
        match self {
            Failure::Counterexample(m) => format!("counterexample: {m}"),
            Failure::Closure(m) => format!("pipeline closure: {m}"),
            Failure::RoundTrip => "document round trip changed the instance".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct InstanceResult {
    pub iteration: u64,
    pub seed: u64,
    pub search_space: u128,
    pub equilibria: usize,
    pub failures: Vec<Failure>,
    pub cap_exceeded: bool,
    pub persisted: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct FuzzSummary {
    pub base_seed: u64,
    pub results: Vec<InstanceResult>,
}

impl FuzzSummary {
    pub fn instances(&self) -> usize {
        self.results.len()
    }

    pub fn equilibria(&self) -> usize {
        self.results.iter().map(|r| r.equilibria).sum()
    }

    pub fn failing(&self) -> impl Iterator<Item = &InstanceResult> {
        self.results.iter().filter(|r| !r.failures.is_empty())
    }

    pub fn cap_exceeded(&self) -> usize {
        self.results.iter().filter(|r| r.cap_exceeded).count()
    }

    pub fn holds(&self) -> bool {
        self.failing().next().is_none()
    }
}

/// Name of the file a failing iteration is persisted under.
pub fn failure_file_name(base_seed: u64, iteration: u64) -> String {
    format!("fuzz-seed{base_seed}-iter{iteration}.json")
}

/// Checks one document; shared by the fuzz loop and by re-runs of persisted
/// failures.
pub fn check_instance(
    doc: &InstanceDocument,
    cap: u128,
) -> Result<(usize, Vec<Failure>), CoreError> {
    let env = &doc.environment;
    let reports = verify_revelation_principle(env, &doc.mechanism, cap)?;
    let mut failures = Vec::new();
    for (k, r) in reports.iter().enumerate() {
        if !r.holds() {
            let what = match &r.counterexample {
                Some(m) => format!(
                    "equilibrium #{k}: agent {} of type {} gains by announcing {}",
                    m.agent + 1,
                    env.type_label(m.agent, m.true_type),
                    env.type_label(m.agent, m.announced)
                ),
                None => format!("equilibrium #{k}: truthful outcomes differ from f"),
            };
            failures.push(Failure::Counterexample(what));
        }
        let emitted = direct_document(doc, r.direct.mechanism().clone(), r.scf.clone());
        let closure = parse_instance(&emitted.to_json())
            .map_err(|e| e.to_string())
            .and_then(|back| {
                let dm = DirectMechanism::from_mechanism(&back.environment, back.mechanism.clone())
                    .map_err(|e| e.to_string())?;
                is_truthful_bne(&back.environment, &dm)
                    .map(|_| ())
                    .map_err(|_| "truth-telling is not an equilibrium".to_string())
            });
        if let Err(e) = closure {
            failures.push(Failure::Closure(format!("equilibrium #{k}: {e}")));
        }
    }
    Ok((reports.len(), failures))
}

/// The document emitted for a direct mechanism: same environment, the
/// direct mechanism, `f` as the social choice function, energy data copied.
pub fn direct_document(
    source: &InstanceDocument,
    mechanism: mechbench_core::game::Mechanism,
    scf: mechbench_core::game::SocialChoiceFunction,
) -> InstanceDocument {
    InstanceDocument {
        environment: source.environment.clone(),
        mechanism,
        scf: Some(scf),
        energy: source.energy.clone(),
        designer_budget: source.designer_budget.clone(),
    }
}

fn run_one(cfg: &FuzzConfig, iteration: u64) -> io::Result<InstanceResult> {
    let seed = cfg.generator.seed.wrapping_add(iteration);
    let doc = generate_instance(&cfg.generator.with_seed(seed));
    let mut result = InstanceResult {
        iteration,
        seed,
        search_space: search_space_size(&doc.environment, &doc.mechanism),
        equilibria: 0,
        failures: Vec::new(),
        cap_exceeded: false,
        persisted: None,
    };
    let text = doc.to_json();
    if parse_instance(&text).as_ref() != Ok(&doc) {
        result.failures.push(Failure::RoundTrip);
    }
    match check_instance(&doc, cfg.cap) {
        Ok((n, failures)) => {
            result.equilibria = n;
            result.failures.extend(failures);
        }
        Err(CoreError::CapExceeded { .. }) => result.cap_exceeded = true,
        Err(e) => result.failures.push(Failure::Counterexample(e.to_string())),
    }
    if !result.failures.is_empty() {
        if let Some(dir) = &cfg.failure_dir {
            result.persisted = Some(persist(dir, cfg.generator.seed, iteration, &text)?);
        }
    }
    Ok(result)
}

fn persist(dir: &Path, base_seed: u64, iteration: u64, text: &str) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(failure_file_name(base_seed, iteration));
    fs::write(&path, text)?;
    Ok(path)
}

/// Runs all iterations in parallel; results come back in iteration order.
pub fn run_fuzz(cfg: &FuzzConfig) -> io::Result<FuzzSummary> {
    let results = (0..cfg.count)
        .into_par_iter()
        .map(|k| run_one(cfg, k))
        .collect::<io::Result<Vec<_>>>()?;
    Ok(FuzzSummary {
        base_seed: cfg.generator.seed,
        results,
    })
}
