//! The finite Bayesian environment and the objects defined over it.
//!
//! Agents are indexed from 0 internally and printed from 1. Every ordered set
//! (types, strategies, outcomes) keeps the order it was declared in, and
//! profiles are indexed through [`ProfileSpace`] so that index order is the
//! lexicographic order of the declared labels.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::{CoreError, ProfileSpace, Rational};

/// A nonempty ordered set of distinct labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelSet {
    labels: Vec<String>,
}

impl LabelSet {
    pub fn new<I, S>(what: &'static str, labels: I) -> Result<Self, CoreError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(CoreError::Empty { what });
        }
        for (k, label) in labels.iter().enumerate() {
            if labels[..k].contains(label) {
                return Err(CoreError::DuplicateLabel {
                    what,
                    label: label.clone(),
                });
            }
        }
        Ok(LabelSet { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(String::as_str)
    }

    pub fn as_slice(&self) -> &[String] {
        &self.labels
    }
}

/// Whether the strategies of a mechanism are messages or physical actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyFormat {
    /// Strategies are plans of action sent as messages.
    Oral,
    /// Strategies are actions the agents physically perform.
    Laborious,
}

impl StrategyFormat {
    pub const ALL: [StrategyFormat; 2] = [StrategyFormat::Oral, StrategyFormat::Laborious];

    pub fn as_str(self) -> &'static str {
        match self {
            StrategyFormat::Oral => "oral",
            StrategyFormat::Laborious => "laborious",
        }
    }
}

impl fmt::Display for StrategyFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StrategyFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "oral" => Ok(StrategyFormat::Oral),
            "laborious" => Ok(StrategyFormat::Laborious),
            other => Err(format!(
                "unknown strategy format `{other}` (expected `oral` or `laborious`)"
            )),
        }
    }
}

/// A broken invariant found while validating an instance.
///
/// Violations are data: validation collects all of them in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingPrior {
        profile: Vec<String>,
    },
    NegativePrior {
        profile: Vec<String>,
        value: Rational,
    },
    PriorSum {
        sum: Rational,
    },
    MissingUtility {
        agent: usize,
        outcome: String,
        type_label: String,
    },
    AgentCountMismatch {
        expected: usize,
        found: usize,
    },
    TableSize {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    MissingOutcome {
        what: &'static str,
        profile: Vec<String>,
    },
    UnknownOutcome {
        what: &'static str,
        profile: Vec<String>,
        index: usize,
    },
    TooLarge {
        what: &'static str,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingPrior { profile } => {
                write!(f, "missing prior entry for ({})", profile.join(", "))
            }
            Violation::NegativePrior { profile, value } => {
                write!(f, "negative prior {value} for ({})", profile.join(", "))
            }
            Violation::PriorSum { sum } => write!(f, "prior sums to {sum}"),
            Violation::MissingUtility {
                agent,
                outcome,
                type_label,
            } => write!(
                f,
                "missing utility for agent {}, outcome {outcome}, type {type_label}",
                agent + 1
            ),
            Violation::AgentCountMismatch { expected, found } => {
                write!(f, "expected {expected} agents, found {found}")
            }
            Violation::TableSize {
                what,
                expected,
                found,
            } => write!(f, "{what} has {found} entries, expected {expected}"),
            Violation::MissingOutcome { what, profile } => {
                write!(f, "{what} has no outcome for ({})", profile.join(", "))
            }
            Violation::UnknownOutcome {
                what,
                profile,
                index,
            } => write!(
                f,
                "{what} maps ({}) to unknown outcome #{index}",
                profile.join(", ")
            ),
            Violation::TooLarge { what } => write!(f, "{what} is too large to tabulate"),
        }
    }
}

/// Agents, type spaces, joint prior, outcomes and utilities.
///
/// Tables may be incomplete while an environment is being assembled; run
/// [`validate_environment`] before handing it to any other operation. Those
/// operations panic on missing entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Environment {
    type_spaces: Vec<LabelSet>,
    outcomes: LabelSet,
    profiles: ProfileSpace,
    prior: Vec<Option<Rational>>,
    // [agent][outcome * |types of agent| + type]
    utilities: Vec<Vec<Option<Rational>>>,
}

impl Environment {
    /// An environment with every prior and utility entry missing.
    pub fn new(type_spaces: Vec<LabelSet>, outcomes: LabelSet) -> Result<Self, CoreError> {
        if type_spaces.is_empty() {
            return Err(CoreError::NoAgents);
        }
        let profiles = ProfileSpace::new(type_spaces.iter().map(LabelSet::len).collect())?;
        let utilities = type_spaces
            .iter()
            .map(|types| {
                types
                    .len()
                    .checked_mul(outcomes.len())
                    .map(|n| vec![None; n])
                    .ok_or(CoreError::SpaceTooLarge)
            })
            .collect::<Result<_, _>>()?;
        Ok(Environment {
            prior: vec![None; profiles.size()],
            type_spaces,
            outcomes,
            profiles,
            utilities,
        })
    }

    pub fn agent_count(&self) -> usize {
        self.type_spaces.len()
    }

    pub fn type_space(&self, agent: usize) -> &LabelSet {
        &self.type_spaces[agent]
    }

    pub fn type_spaces(&self) -> &[LabelSet] {
        &self.type_spaces
    }

    pub fn outcomes(&self) -> &LabelSet {
        &self.outcomes
    }

    /// Indexing of the full type profiles `Θ_1 × ··· × Θ_I`.
    pub fn type_profiles(&self) -> &ProfileSpace {
        &self.profiles
    }

    pub fn set_prior(&mut self, profile: &[usize], probability: Rational) {
        let idx = self.profiles.index(profile);
        self.prior[idx] = Some(probability);
    }

    /// Fills the prior with `1/|Θ|` for every profile.
    pub fn set_uniform_prior(&mut self) {
        let mass = Rational::new(One::one(), self.profiles.size().into());
        for slot in &mut self.prior {
            *slot = Some(mass.clone());
        }
    }

    pub fn prior(&self, profile: &[usize]) -> Option<&Rational> {
        self.prior_at(self.profiles.index(profile))
    }

    pub fn prior_at(&self, index: usize) -> Option<&Rational> {
        self.prior[index].as_ref()
    }

    pub fn set_utility(&mut self, agent: usize, outcome: usize, own_type: usize, value: Rational) {
        let slot = self.utility_slot(agent, outcome, own_type);
        self.utilities[agent][slot] = Some(value);
    }

    pub fn utility(&self, agent: usize, outcome: usize, own_type: usize) -> Option<&Rational> {
        self.utilities[agent][self.utility_slot(agent, outcome, own_type)].as_ref()
    }

    fn utility_slot(&self, agent: usize, outcome: usize, own_type: usize) -> usize {
        let types = self.type_spaces[agent].len();
        assert!(outcome < self.outcomes.len() && own_type < types);
        outcome * types + own_type
    }

    pub(crate) fn p(&self, index: usize) -> &Rational {
        self.prior[index]
            .as_ref()
            .expect("environment used before validation: missing prior entry")
    }

    pub(crate) fn u(&self, agent: usize, outcome: usize, own_type: usize) -> &Rational {
        self.utility(agent, outcome, own_type)
            .expect("environment used before validation: missing utility entry")
    }

    /// Marginal probability of `own_type` for `agent`.
    pub fn marginal(&self, agent: usize, own_type: usize) -> Rational {
        let mut total = Rational::zero();
        for (idx, entry) in self.prior.iter().enumerate() {
            if let Some(p) = entry {
                if (idx / self.profiles.stride(agent)) % self.profiles.radix(agent) == own_type {
                    total += p;
                }
            }
        }
        total
    }

    pub fn profile_labels(&self, profile: &[usize]) -> Vec<String> {
        profile
            .iter()
            .enumerate()
            .map(|(agent, &t)| self.type_spaces[agent].label(t).to_string())
            .collect()
    }

    pub fn type_label(&self, agent: usize, own_type: usize) -> &str {
        self.type_spaces[agent].label(own_type)
    }
}

/// Checks every environment invariant and names each violation.
///
/// Order: missing prior entries, negative prior entries (both in profile
/// order), the prior sum, then missing utilities by agent, outcome and type.
pub fn validate_environment(env: &Environment) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut sum = Rational::zero();
    let mut negatives = Vec::new();
    for (idx, entry) in env.prior.iter().enumerate() {
        let labels = || env.profile_labels(&env.profiles.decode(idx));
        match entry {
            None => violations.push(Violation::MissingPrior { profile: labels() }),
            Some(p) => {
                if p.is_negative() {
                    negatives.push(Violation::NegativePrior {
                        profile: labels(),
                        value: p.clone(),
                    });
                }
                sum += p;
            }
        }
    }
    violations.extend(negatives);
    if !sum.is_one() {
        violations.push(Violation::PriorSum { sum });
    }
    for agent in 0..env.agent_count() {
        for outcome in 0..env.outcomes.len() {
            for t in 0..env.type_spaces[agent].len() {
                if env.utility(agent, outcome, t).is_none() {
                    violations.push(Violation::MissingUtility {
                        agent,
                        outcome: env.outcomes.label(outcome).to_string(),
                        type_label: env.type_spaces[agent].label(t).to_string(),
                    });
                }
            }
        }
    }
    violations
}

/// `φ(θ_{-i} | θ_i)` for one agent and one own type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalPrior {
    pub agent: usize,
    pub own_type: usize,
    /// `(θ_{-i}, probability)` in lexicographic order of `θ_{-i}`. Profiles of
    /// probability zero are kept so the table is total.
    pub entries: Vec<(Vec<usize>, Rational)>,
}

impl ConditionalPrior {
    /// Reinserts the own type into `others` to give the full type profile.
    pub fn full_profile(&self, others: &[usize]) -> Vec<usize> {
        let mut full = Vec::with_capacity(others.len() + 1);
        full.extend_from_slice(&others[..self.agent]);
        full.push(self.own_type);
        full.extend_from_slice(&others[self.agent..]);
        full
    }

    pub fn total(&self) -> Rational {
        self.entries.iter().map(|(_, p)| p).sum()
    }
}

pub fn conditional_prior(
    env: &Environment,
    agent: usize,
    own_type: usize,
) -> Result<ConditionalPrior, CoreError> {
    let marginal = env.marginal(agent, own_type);
    if marginal.is_zero() {
        return Err(CoreError::ZeroMarginal {
            agent,
            type_label: env.type_label(agent, own_type).to_string(),
        });
    }
    let other_radices = (0..env.agent_count())
        .filter(|&j| j != agent)
        .map(|j| env.type_spaces[j].len())
        .collect();
    let others = ProfileSpace::new(other_radices)?;
    let mut cond = ConditionalPrior {
        agent,
        own_type,
        entries: Vec::with_capacity(others.size()),
    };
    for rest in others.iter() {
        let full = cond.full_profile(&rest);
        let joint = env.p(env.profiles.index(&full));
        cond.entries.push((rest, joint / &marginal));
    }
    Ok(cond)
}

/// Strategy sets, an outcome function over joint strategies, and the format of
/// the strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mechanism {
    strategy_sets: Vec<LabelSet>,
    profiles: ProfileSpace,
    outcome_fn: Vec<usize>,
    format: StrategyFormat,
}

impl Mechanism {
    /// Builds a mechanism from a table over joint strategy profiles in
    /// lexicographic order. Missing or out-of-range outcomes are violations.
    pub fn new(
        env: &Environment,
        strategy_sets: Vec<LabelSet>,
        outcome_fn: Vec<Option<usize>>,
        format: StrategyFormat,
    ) -> Result<Self, Vec<Violation>> {
        if strategy_sets.len() != env.agent_count() {
            return Err(vec![Violation::AgentCountMismatch {
                expected: env.agent_count(),
                found: strategy_sets.len(),
            }]);
        }
        let profiles = ProfileSpace::new(strategy_sets.iter().map(LabelSet::len).collect())
            .map_err(|_| {
                vec![Violation::TooLarge {
                    what: "outcome function",
                }]
            })?;
        if outcome_fn.len() != profiles.size() {
            return Err(vec![Violation::TableSize {
                what: "outcome function",
                expected: profiles.size(),
                found: outcome_fn.len(),
            }]);
        }
        let labels = |idx: usize| -> Vec<String> {
            profiles
                .decode(idx)
                .iter()
                .enumerate()
                .map(|(agent, &s)| strategy_sets[agent].label(s).to_string())
                .collect()
        };
        let table = check_outcome_table("outcome function", env, &outcome_fn, labels)?;
        Ok(Mechanism {
            strategy_sets,
            profiles,
            outcome_fn: table,
            format,
        })
    }

    /// Builds a mechanism by evaluating `g` at every joint strategy profile.
    pub fn from_fn<F>(
        env: &Environment,
        strategy_sets: Vec<LabelSet>,
        format: StrategyFormat,
        mut g: F,
    ) -> Result<Self, Vec<Violation>>
    where
        F: FnMut(&[usize]) -> usize,
    {
        let profiles = ProfileSpace::new(strategy_sets.iter().map(LabelSet::len).collect())
            .map_err(|_| {
                vec![Violation::TooLarge {
                    what: "outcome function",
                }]
            })?;
        let table = profiles.iter().map(|s| Some(g(&s))).collect();
        Mechanism::new(env, strategy_sets, table, format)
    }

    pub fn agent_count(&self) -> usize {
        self.strategy_sets.len()
    }

    pub fn strategy_set(&self, agent: usize) -> &LabelSet {
        &self.strategy_sets[agent]
    }

    pub fn strategy_sets(&self) -> &[LabelSet] {
        &self.strategy_sets
    }

    /// Indexing of the joint strategy profiles `S_1 × ··· × S_I`.
    pub fn strategy_profiles(&self) -> &ProfileSpace {
        &self.profiles
    }

    pub fn format(&self) -> StrategyFormat {
        self.format
    }

    pub fn outcome(&self, joint: &[usize]) -> usize {
        self.outcome_fn[self.profiles.index(joint)]
    }

    pub fn outcome_at(&self, index: usize) -> usize {
        self.outcome_fn[index]
    }

    /// Outcome indices in lexicographic order of joint strategy profiles.
    pub fn outcome_table(&self) -> &[usize] {
        &self.outcome_fn
    }

    pub fn strategy_labels(&self, joint: &[usize]) -> Vec<String> {
        joint
            .iter()
            .enumerate()
            .map(|(agent, &s)| self.strategy_sets[agent].label(s).to_string())
            .collect()
    }
}

fn check_outcome_table<L>(
    what: &'static str,
    env: &Environment,
    table: &[Option<usize>],
    labels: L,
) -> Result<Vec<usize>, Vec<Violation>>
where
    L: Fn(usize) -> Vec<String>,
{
    let mut violations = Vec::new();
    let mut out = Vec::with_capacity(table.len());
    for (idx, entry) in table.iter().enumerate() {
        match *entry {
            None => violations.push(Violation::MissingOutcome {
                what,
                profile: labels(idx),
            }),
            Some(x) if x >= env.outcomes.len() => violations.push(Violation::UnknownOutcome {
                what,
                profile: labels(idx),
                index: x,
            }),
            Some(x) => out.push(x),
        }
    }
    if violations.is_empty() {
        Ok(out)
    } else {
        Err(violations)
    }
}

/// `f: Θ → X`, tabulated over type profiles in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SocialChoiceFunction {
    table: Vec<usize>,
}

impl SocialChoiceFunction {
    pub fn new(env: &Environment, table: Vec<Option<usize>>) -> Result<Self, Vec<Violation>> {
        let profiles = env.type_profiles();
        if table.len() != profiles.size() {
            return Err(vec![Violation::TableSize {
                what: "social choice function",
                expected: profiles.size(),
                found: table.len(),
            }]);
        }
        let labels = |idx| env.profile_labels(&profiles.decode(idx));
        check_outcome_table("social choice function", env, &table, labels)
            .map(|table| SocialChoiceFunction { table })
    }

    pub fn from_fn<F>(env: &Environment, mut f: F) -> Result<Self, Vec<Violation>>
    where
        F: FnMut(&[usize]) -> usize,
    {
        let table = env.type_profiles().iter().map(|t| Some(f(&t))).collect();
        SocialChoiceFunction::new(env, table)
    }

    pub fn outcome_at(&self, profile_index: usize) -> usize {
        self.table[profile_index]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }
}

/// One map `s_i: Θ_i → S_i` per agent.
///
/// Profiles order lexicographically by agent, then by type, which is the order
/// equilibrium enumeration reports them in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyProfile {
    maps: Vec<Vec<usize>>,
}

impl StrategyProfile {
    pub fn new(
        env: &Environment,
        mech: &Mechanism,
        maps: Vec<Vec<usize>>,
    ) -> Result<Self, CoreError> {
        let invalid = |reason: String| Err(CoreError::InvalidProfile { reason });
        if maps.len() != env.agent_count() || mech.agent_count() != env.agent_count() {
            return invalid(format!(
                "{} maps for {} agents",
                maps.len(),
                env.agent_count()
            ));
        }
        for (agent, map) in maps.iter().enumerate() {
            if map.len() != env.type_space(agent).len() {
                return invalid(format!(
                    "agent {} maps {} types, expected {}",
                    agent + 1,
                    map.len(),
                    env.type_space(agent).len()
                ));
            }
            if let Some(&s) = map.iter().find(|&&s| s >= mech.strategy_set(agent).len()) {
                return invalid(format!("agent {} has no strategy #{s}", agent + 1));
            }
        }
        Ok(StrategyProfile { maps })
    }

    /// Truth-telling in a direct mechanism: every type announces itself.
    pub fn truthful(env: &Environment) -> Self {
        StrategyProfile {
            maps: env
                .type_spaces()
                .iter()
                .map(|types| (0..types.len()).collect())
                .collect(),
        }
    }

    pub(crate) fn from_maps_unchecked(maps: Vec<Vec<usize>>) -> Self {
        StrategyProfile { maps }
    }

    pub fn strategy(&self, agent: usize, own_type: usize) -> usize {
        self.maps[agent][own_type]
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    /// The joint strategy `(s_1(θ_1), ..., s_I(θ_I))` played at `types`.
    pub fn joint(&self, types: &[usize]) -> Vec<usize> {
        types
            .iter()
            .enumerate()
            .map(|(agent, &t)| self.maps[agent][t])
            .collect()
    }

    pub fn fits(&self, env: &Environment, mech: &Mechanism) -> bool {
        StrategyProfile::new(env, mech, self.maps.clone()).is_ok()
    }
}

/// The table `θ ↦ g(s_1(θ_1), ..., s_I(θ_I))`.
pub fn induced_scf(
    env: &Environment,
    mech: &Mechanism,
    profile: &StrategyProfile,
) -> SocialChoiceFunction {
    let table = env
        .type_profiles()
        .iter()
        .map(|types| mech.outcome(&profile.joint(&types)))
        .collect();
    SocialChoiceFunction { table }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn labels(what: &'static str, names: &[&str]) -> LabelSet {
        LabelSet::new(what, names.iter().copied()).unwrap()
    }

    fn two_by_two() -> Environment {
        let mut env = Environment::new(
            vec![labels("types", &["L", "H"]), labels("types", &["l", "h"])],
            labels("outcomes", &["x0", "x1"]),
        )
        .unwrap();
        env.set_uniform_prior();
        for agent in 0..2 {
            for x in 0..2 {
                for t in 0..2 {
                    env.set_utility(agent, x, t, int((x == t) as i64));
                }
            }
        }
        env
    }

    #[test]
    fn label_sets_reject_duplicates_and_empties() {
        assert!(matches!(
            LabelSet::new("types", ["a", "b", "a"]),
            Err(CoreError::DuplicateLabel { .. })
        ));
        assert!(matches!(
            LabelSet::new("types", Vec::<String>::new()),
            Err(CoreError::Empty { .. })
        ));
    }

    #[test]
    fn complete_environment_validates() {
        assert!(validate_environment(&two_by_two()).is_empty());
    }

    #[test]
    fn prior_sum_is_reported() {
        let mut env = two_by_two();
        env.set_prior(&[1, 1], ratio(3, 20));
        let v = validate_environment(&env);
        assert_eq!(v, vec![Violation::PriorSum { sum: ratio(9, 10) }]);
        assert_eq!(v[0].to_string(), "prior sums to 9/10");
    }

    #[test]
    fn missing_utility_is_named() {
        let mut env = Environment::new(
            vec![labels("types", &["L", "H"])],
            labels("outcomes", &["x1", "x2"]),
        )
        .unwrap();
        env.set_uniform_prior();
        for x in 0..2 {
            for t in 0..2 {
                if (x, t) != (0, 1) {
                    env.set_utility(0, x, t, int(1));
                }
            }
        }
        let v = validate_environment(&env);
        assert_eq!(
            v,
            vec![Violation::MissingUtility {
                agent: 0,
                outcome: "x1".into(),
                type_label: "H".into(),
            }]
        );
        assert_eq!(
            v[0].to_string(),
            "missing utility for agent 1, outcome x1, type H"
        );
    }

    #[test]
    fn missing_and_negative_prior_entries() {
        let mut env = Environment::new(
            vec![labels("types", &["a", "b", "c"])],
            labels("outcomes", &["x"]),
        )
        .unwrap();
        for t in 0..3 {
            env.set_utility(0, 0, t, int(0));
        }
        env.set_prior(&[0], ratio(3, 2));
        env.set_prior(&[1], ratio(-1, 2));
        let v = validate_environment(&env);
        assert_eq!(
            v,
            vec![
                Violation::MissingPrior {
                    profile: vec!["c".into()]
                },
                Violation::NegativePrior {
                    profile: vec!["b".into()],
                    value: ratio(-1, 2)
                },
            ]
        );
        // idempotent
        assert_eq!(validate_environment(&env), v);
    }

    #[test]
    fn independent_uniform_conditionals_are_half() {
        let env = two_by_two();
        for agent in 0..2 {
            for t in 0..2 {
                let cond = conditional_prior(&env, agent, t).unwrap();
                assert_eq!(cond.entries.len(), 2);
                assert!(cond.entries.iter().all(|(_, p)| *p == ratio(1, 2)));
            }
        }
    }

    #[test]
    fn single_agent_conditional_is_degenerate() {
        let mut env =
            Environment::new(vec![labels("types", &["t"])], labels("outcomes", &["x"])).unwrap();
        env.set_uniform_prior();
        let cond = conditional_prior(&env, 0, 0).unwrap();
        assert_eq!(cond.entries, vec![(vec![], int(1))]);
    }

    #[test]
    fn zero_marginal_is_an_error() {
        let mut env = two_by_two();
        env.set_prior(&[0, 0], ratio(1, 2));
        env.set_prior(&[0, 1], ratio(1, 2));
        env.set_prior(&[1, 0], int(0));
        env.set_prior(&[1, 1], int(0));
        assert!(matches!(
            conditional_prior(&env, 0, 1),
            Err(CoreError::ZeroMarginal { agent: 0, .. })
        ));
    }

    #[test]
    fn full_profile_reinserts_own_type() {
        let cond = ConditionalPrior {
            agent: 1,
            own_type: 7,
            entries: vec![],
        };
        assert_eq!(cond.full_profile(&[1, 2]), vec![1, 7, 2]);
    }

    #[test]
    fn mechanism_table_violations() {
        let env = two_by_two();
        let sets = vec![labels("s", &["a"]), labels("s", &["c", "d"])];
        let err = Mechanism::new(
            &env,
            sets.clone(),
            vec![Some(0), None],
            StrategyFormat::Oral,
        )
        .unwrap_err();
        assert_eq!(
            err,
            vec![Violation::MissingOutcome {
                what: "outcome function",
                profile: vec!["a".into(), "d".into()]
            }]
        );
        let err = Mechanism::new(
            &env,
            sets.clone(),
            vec![Some(0), Some(5)],
            StrategyFormat::Oral,
        )
        .unwrap_err();
        assert!(matches!(err[0], Violation::UnknownOutcome { index: 5, .. }));
        let err = Mechanism::new(
            &env,
            sets[..1].to_vec(),
            vec![Some(0)],
            StrategyFormat::Oral,
        )
        .unwrap_err();
        assert!(matches!(err[0], Violation::AgentCountMismatch { .. }));
    }

    #[test]
    fn strategy_profile_checks_shape() {
        let env = two_by_two();
        let sets = vec![labels("s", &["a"]), labels("s", &["c", "d"])];
        let mech = Mechanism::from_fn(&env, sets, StrategyFormat::Oral, |s| s[1]).unwrap();
        assert!(StrategyProfile::new(&env, &mech, vec![vec![0, 0], vec![1, 0]]).is_ok());
        assert!(StrategyProfile::new(&env, &mech, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(StrategyProfile::new(&env, &mech, vec![vec![0], vec![1, 0]]).is_err());
    }

    #[test]
    fn singleton_strategy_sets_induce_constant_scf() {
        let env = two_by_two();
        let sets = vec![labels("s", &["a"]), labels("s", &["c"])];
        let mech = Mechanism::from_fn(&env, sets, StrategyFormat::Oral, |_| 1).unwrap();
        let profile = StrategyProfile::new(&env, &mech, vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(induced_scf(&env, &mech, &profile).table(), &[1, 1, 1, 1]);
    }

    #[test]
    fn truthful_profile_in_direct_mechanism_recovers_g() {
        let env = two_by_two();
        let sets = env.type_spaces().to_vec();
        let mech =
            Mechanism::from_fn(&env, sets, StrategyFormat::Oral, |t| (t[0] + t[1]) % 2).unwrap();
        let f = induced_scf(&env, &mech, &StrategyProfile::truthful(&env));
        assert_eq!(f.table(), mech.outcome_table());
    }
}
