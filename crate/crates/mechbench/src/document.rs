//! The `mechbench/1` instance document.
//!
//! A document is UTF-8 JSON. Rationals are strings of the form `"p/q"` (a bare
//! integer such as `"3"` is accepted). Arrays of labels fix the canonical
//! order of types, strategies and outcomes; every table is keyed by labels.
//!
//! ```json
//! {
//!   "format": "mechbench/1",
//!   "environment": {
//!     "outcomes": ["x0", "x1"],
//!     "agents": [
//!       { "types": ["L", "H"], "utilities": [["1", "0"], ["0", "1"]] },
//!       { "types": ["*"], "utilities": [["0"], ["0"]] }
//!     ],
//!     "prior": [
//!       { "profile": ["L", "*"], "p": "1/2" },
//!       { "profile": ["H", "*"], "p": "1/2" }
//!     ]
//!   },
//!   "mechanism": {
//!     "strategy_format": "laborious",
//!     "strategies": [["a", "b"], ["c"]],
//!     "outcome_fn": [
//!       { "profile": ["a", "c"], "outcome": "x0" },
//!       { "profile": ["b", "c"], "outcome": "x1" }
//!     ]
//!   },
//!   "scf": [
//!     { "profile": ["L", "*"], "outcome": "x0" },
//!     { "profile": ["H", "*"], "outcome": "x1" }
//!   ],
//!   "energy": { "action": "5", "message": "1", "send": "1/2", "outcome_fn": "2" },
//!   "designer_budget": "15"
//! }
//! ```
//!
//! `utilities[x][t]` is the utility of outcome `x` for the agent's type `t`;
//! `null` marks a missing entry. `scf`, `energy` and `designer_budget` are
//! optional.

use std::fmt;

use mechbench_core::energy::EnergyParams;
use mechbench_core::game::{
    validate_environment, Environment, LabelSet, Mechanism, SocialChoiceFunction, StrategyFormat,
    Violation,
};
use mechbench_core::rational::{format_rational, parse_rational};
use mechbench_core::{ProfileSpace, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: &str = "mechbench/1";

/// A parsed and validated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDocument {
    pub environment: Environment,
    pub mechanism: Mechanism,
    pub scf: Option<SocialChoiceFunction>,
    pub energy: Option<EnergyParams>,
    pub designer_budget: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format version `{0}` (expected `{FORMAT_VERSION}`)")]
    Version(String),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("instance is invalid: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    format: String,
    environment: WireEnvironment,
    mechanism: WireMechanism,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scf: Option<Vec<WireChoice>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    energy: Option<WireEnergy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    designer_budget: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireEnvironment {
    outcomes: Vec<String>,
    agents: Vec<WireAgent>,
    prior: Vec<WirePrior>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireAgent {
    types: Vec<String>,
    utilities: Vec<Vec<Option<String>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WirePrior {
    profile: Vec<String>,
    p: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireMechanism {
    strategy_format: String,
    strategies: Vec<Vec<String>>,
    outcome_fn: Vec<WireChoice>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireChoice {
    profile: Vec<String>,
    outcome: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireEnergy {
    action: String,
    message: String,
    send: String,
    outcome_fn: String,
}

fn field<P: fmt::Display, M: fmt::Display>(path: P, message: M) -> DocumentError {
    DocumentError::Field {
        path: path.to_string(),
        message: message.to_string(),
    }
}

fn rational_at(path: &str, text: &str) -> Result<Rational, DocumentError> {
    parse_rational(text).map_err(|e| field(path, e))
}

fn labels_at(path: &str, what: &'static str, labels: &[String]) -> Result<LabelSet, DocumentError> {
    LabelSet::new(what, labels.iter().cloned()).map_err(|e| field(path, e))
}

/// Resolves a label tuple against per-coordinate label sets.
fn resolve(path: &str, sets: &[LabelSet], profile: &[String]) -> Result<Vec<usize>, DocumentError> {
    if profile.len() != sets.len() {
        return Err(field(
            path,
            format_args!("expected {} labels, found {}", sets.len(), profile.len()),
        ));
    }
    profile
        .iter()
        .zip(sets)
        .enumerate()
        .map(|(k, (label, set))| {
            set.position(label).ok_or_else(|| {
                field(
                    path,
                    format_args!("unknown label `{label}` for agent {}", k + 1),
                )
            })
        })
        .collect()
}

/// Fills a table over `space` from label-keyed entries; duplicates are
/// errors, gaps stay `None`.
fn tabulate<T, E, F>(
    path: &str,
    sets: &[LabelSet],
    entries: &[E],
    mut entry: F,
) -> Result<Vec<Option<T>>, DocumentError>
where
    T: Clone,
    F: FnMut(&str, &E) -> Result<(Vec<String>, T), DocumentError>,
{
    let space =
        ProfileSpace::new(sets.iter().map(LabelSet::len).collect()).map_err(|e| field(path, e))?;
    let mut table: Vec<Option<T>> = vec![None; space.size()];
    for (k, e) in entries.iter().enumerate() {
        let at = format!("{path}[{k}]");
        let (profile, value) = entry(&at, e)?;
        let idx = space.index(&resolve(&format!("{at}.profile"), sets, &profile)?);
        if table[idx].is_some() {
            return Err(field(&at, "duplicate entry for this profile"));
        }
        table[idx] = Some(value);
    }
    Ok(table)
}

/// Parses and validates a document.
pub fn parse_instance(text: &str) -> Result<InstanceDocument, DocumentError> {
    let wire: Wire = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if wire.format != FORMAT_VERSION {
        return Err(DocumentError::Version(wire.format));
    }
    let w = &wire.environment;
    let outcomes = labels_at("environment.outcomes", "outcomes", &w.outcomes)?;
    if w.agents.is_empty() {
        return Err(field(
            "environment.agents",
            "at least one agent is required",
        ));
    }
    let type_spaces = w
        .agents
        .iter()
        .enumerate()
        .map(|(i, a)| labels_at(&format!("environment.agents[{i}].types"), "types", &a.types))
        .collect::<Result<Vec<_>, _>>()?;
    let mut env = Environment::new(type_spaces.clone(), outcomes.clone())
        .map_err(|e| field("environment", e))?;

    let prior = tabulate(
        "environment.prior",
        &type_spaces,
        &w.prior,
        |at, e: &WirePrior| Ok((e.profile.clone(), rational_at(&format!("{at}.p"), &e.p)?)),
    )?;
    for (idx, p) in prior.into_iter().enumerate() {
        if let Some(p) = p {
            env.set_prior(&env.type_profiles().decode(idx), p);
        }
    }
    for (i, agent) in w.agents.iter().enumerate() {
        let path = format!("environment.agents[{i}].utilities");
        if agent.utilities.len() != outcomes.len() {
            return Err(field(
                &path,
                format_args!(
                    "expected one row per outcome ({}), found {}",
                    outcomes.len(),
                    agent.utilities.len()
                ),
            ));
        }
        for (x, row) in agent.utilities.iter().enumerate() {
            if row.len() != agent.types.len() {
                return Err(field(
                    format!("{path}[{x}]"),
                    format_args!(
                        "expected one column per type ({}), found {}",
                        agent.types.len(),
                        row.len()
                    ),
                ));
            }
            for (t, cell) in row.iter().enumerate() {
                if let Some(text) = cell {
                    env.set_utility(i, x, t, rational_at(&format!("{path}[{x}][{t}]"), text)?);
                }
            }
        }
    }

    let m = &wire.mechanism;
    let format: StrategyFormat = m
        .strategy_format
        .parse()
        .map_err(|e| field("mechanism.strategy_format", e))?;
    if m.strategies.len() != env.agent_count() {
        return Err(field(
            "mechanism.strategies",
            format_args!(
                "expected one strategy set per agent ({}), found {}",
                env.agent_count(),
                m.strategies.len()
            ),
        ));
    }
    let strategy_sets = m
        .strategies
        .iter()
        .enumerate()
        .map(|(i, s)| labels_at(&format!("mechanism.strategies[{i}]"), "strategies", s))
        .collect::<Result<Vec<_>, _>>()?;
    let outcome_of = |at: &str, label: &str| {
        outcomes.position(label).ok_or_else(|| {
            field(
                format!("{at}.outcome"),
                format_args!("unknown outcome `{label}`"),
            )
        })
    };
    let g_table = tabulate(
        "mechanism.outcome_fn",
        &strategy_sets,
        &m.outcome_fn,
        |at, e: &WireChoice| Ok((e.profile.clone(), outcome_of(at, &e.outcome)?)),
    )?;
    let scf_table = match &wire.scf {
        None => None,
        Some(entries) => Some(tabulate(
            "scf",
            &type_spaces,
            entries,
            |at, e: &WireChoice| Ok((e.profile.clone(), outcome_of(at, &e.outcome)?)),
        )?),
    };
    let energy = match &wire.energy {
        None => None,
        Some(e) => Some(
            EnergyParams::new(
                rational_at("energy.action", &e.action)?,
                rational_at("energy.message", &e.message)?,
                rational_at("energy.send", &e.send)?,
                rational_at("energy.outcome_fn", &e.outcome_fn)?,
            )
            .map_err(|err| field("energy", err))?,
        ),
    };
    let designer_budget = match &wire.designer_budget {
        None => None,
        Some(text) => {
            let b = rational_at("designer_budget", text)?;
            if b < Rational::from_integer(0.into()) {
                return Err(field("designer_budget", "budget must be nonnegative"));
            }
            Some(b)
        }
    };

    let mut violations = validate_environment(&env);
    let mechanism = Mechanism::new(&env, strategy_sets, g_table, format);
    let scf = scf_table.map(|t| SocialChoiceFunction::new(&env, t));
    let mechanism = match mechanism {
        Ok(m) => Some(m),
        Err(v) => {
            violations.extend(v);
            None
        }
    };
    let scf = match scf {
        None => None,
        Some(Ok(f)) => Some(f),
        Some(Err(v)) => {
            violations.extend(v);
            None
        }
    };
    if !violations.is_empty() {
        return Err(DocumentError::Invalid(violations));
    }
    Ok(InstanceDocument {
        environment: env,
        mechanism: mechanism.expect("no violations"),
        scf,
        energy,
        designer_budget,
    })
}

impl InstanceDocument {
    fn to_wire(&self) -> Wire {
        let env = &self.environment;
        let mech = &self.mechanism;
        let outcome = |x: usize| env.outcomes().label(x).to_string();
        let agents = (0..env.agent_count())
            .map(|i| {
                let types = env.type_space(i);
                WireAgent {
                    types: types.as_slice().to_vec(),
                    utilities: (0..env.outcomes().len())
                        .map(|x| {
                            (0..types.len())
                                .map(|t| env.utility(i, x, t).map(format_rational))
                                .collect()
                        })
                        .collect(),
                }
            })
            .collect();
        let prior = env
            .type_profiles()
            .iter()
            .enumerate()
            .map(|(idx, p)| WirePrior {
                profile: env.profile_labels(&p),
                p: format_rational(env.prior_at(idx).expect("validated")),
            })
            .collect();
        let outcome_fn = mech
            .strategy_profiles()
            .iter()
            .enumerate()
            .map(|(idx, s)| WireChoice {
                profile: mech.strategy_labels(&s),
                outcome: outcome(mech.outcome_at(idx)),
            })
            .collect();
        let scf = self.scf.as_ref().map(|f| {
            env.type_profiles()
                .iter()
                .enumerate()
                .map(|(idx, t)| WireChoice {
                    profile: env.profile_labels(&t),
                    outcome: outcome(f.outcome_at(idx)),
                })
                .collect()
        });
        Wire {
            format: FORMAT_VERSION.to_string(),
            environment: WireEnvironment {
                outcomes: env.outcomes().as_slice().to_vec(),
                agents,
                prior,
            },
            mechanism: WireMechanism {
                strategy_format: mech.format().as_str().to_string(),
                strategies: mech
                    .strategy_sets()
                    .iter()
                    .map(|s| s.as_slice().to_vec())
                    .collect(),
                outcome_fn,
            },
            scf,
            energy: self.energy.as_ref().map(|e| WireEnergy {
                action: format_rational(&e.action),
                message: format_rational(&e.message),
                send: format_rational(&e.send),
                outcome_fn: format_rational(&e.outcome_fn),
            }),
            designer_budget: self.designer_budget.as_ref().map(format_rational),
        }
    }

    /// Canonical JSON value: tables in lexicographic profile order, rationals
    /// in lowest terms.
    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_wire()).expect("document serializes")
    }

    /// Canonical pretty-printed text, newline terminated.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_wire()).expect("document serializes");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const G1: &str = r#"{
      "format": "mechbench/1",
      "environment": {
        "outcomes": ["x0", "x1"],
        "agents": [
          { "types": ["L", "H"], "utilities": [["1", "0"], ["0", "1"]] },
          { "types": ["*"], "utilities": [["0"], ["0"]] }
        ],
        "prior": [
          { "profile": ["L", "*"], "p": "1/2" },
          { "profile": ["H", "*"], "p": "2/4" }
        ]
      },
      "mechanism": {
        "strategy_format": "laborious",
        "strategies": [["a", "b"], ["c"]],
        "outcome_fn": [
          { "profile": ["b", "c"], "outcome": "x1" },
          { "profile": ["a", "c"], "outcome": "x0" }
        ]
      }
    }"#;

    #[test]
    fn parses_and_canonicalizes() {
        let doc = parse_instance(G1).unwrap();
        assert_eq!(doc.mechanism.outcome_table(), &[0, 1]);
        let text = doc.to_json();
        assert!(text.contains("\"1/2\""));
        assert!(!text.contains("2/4"));
        assert_eq!(parse_instance(&text).unwrap(), doc);
    }

    #[test]
    fn empty_input_is_a_syntax_error() {
        assert!(matches!(
            parse_instance(""),
            Err(DocumentError::Syntax { .. })
        ));
        assert!(matches!(
            parse_instance("{\"format\": "),
            Err(DocumentError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn wrong_version_is_rejected() {
        let text = G1.replace("mechbench/1", "mechbench/9");
        assert_eq!(
            parse_instance(&text),
            Err(DocumentError::Version("mechbench/9".into()))
        );
    }

    #[test]
    fn unknown_labels_name_the_field() {
        let text = G1.replace(r#"["b", "c"]"#, r#"["z", "c"]"#);
        match parse_instance(&text) {
            Err(DocumentError::Field { path, message }) => {
                assert_eq!(path, "mechanism.outcome_fn[0].profile");
                assert!(message.contains("`z`"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_rational_names_the_field() {
        let text = G1.replace("\"2/4\"", "\"2/0\"");
        match parse_instance(&text) {
            Err(DocumentError::Field { path, .. }) => assert_eq!(path, "environment.prior[1].p"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_entries_become_violations() {
        let text = G1
            .replace(
                r#"[["1", "0"], ["0", "1"]]"#,
                r#"[["1", null], ["0", "1"]]"#,
            )
            .replace(r#"{ "profile": ["a", "c"], "outcome": "x0" }"#, "")
            .replace(r#""x1" },"#, r#""x1" }"#);
        match parse_instance(&text) {
            Err(DocumentError::Invalid(v)) => {
                let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
                assert_eq!(
                    msgs,
                    vec![
                        "missing utility for agent 1, outcome x0, type H",
                        "outcome function has no outcome for (a, c)",
                    ]
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_entries_are_rejected() {
        let text = G1.replace(r#"["H", "*"], "p": "2/4""#, r#"["L", "*"], "p": "2/4""#);
        assert!(matches!(
            parse_instance(&text),
            Err(DocumentError::Field { ref path, .. }) if path == "environment.prior[1]"
        ));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = G1.replace("\"format\"", "\"colour\": 1, \"format\"");
        assert!(matches!(
            parse_instance(&text),
            Err(DocumentError::Syntax { .. })
        ));
    }
}
