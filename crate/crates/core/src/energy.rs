//! Energy accounting for an indirect mechanism and its direct counterpart.
//!
//! Each cell of an [`EnergyMatrix`] is the pair (energy spent by all agents,
//! energy spent by the designer) for one strategy format and one mechanism
//! kind. With `I` agents:
//!
//! | format    | indirect                 | direct                   |
//! |-----------|--------------------------|--------------------------|
//! | oral      | `(I·(E_m+E_send), E_g)`  | `(I·E_send, I·E_m+E_g)`  |
//! | laborious | `(I·E_a, E_g)`           | `(I·E_send, I·E_a+E_g)`  |
//!
//! In the direct mechanism the designer has to carry out, on every agent's
//! behalf, what the agent would have chosen or done in the indirect one.
//! Units are abstract; reports label them joules.

use core::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::game::StrategyFormat;
use crate::rational::from_count;
use crate::{CoreError, Rational};

/// Per-agent and per-execution energy costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyParams {
    /// `E_a`: performing one action.
    pub action: Rational,
    /// `E_m`: selecting one message (a plan of action).
    pub message: Rational,
    /// `E_send`: sending one message.
    pub send: Rational,
    /// `E_g`: one evaluation of the outcome function.
    pub outcome_fn: Rational,
}

impl EnergyParams {
    pub fn new(
        action: Rational,
        message: Rational,
        send: Rational,
        outcome_fn: Rational,
    ) -> Result<Self, CoreError> {
        let params = EnergyParams {
            action,
            message,
            send,
            outcome_fn,
        };
        params.check()?;
        Ok(params)
    }

    /// Only `E_a` nonzero: the regime where messaging and evaluation costs
    /// are neglected.
    pub fn action_only(action: Rational) -> Result<Self, CoreError> {
        EnergyParams::new(action, Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn check(&self) -> Result<(), CoreError> {
        for (name, v) in [
            ("action", &self.action),
            ("message", &self.message),
            ("send", &self.send),
            ("outcome_fn", &self.outcome_fn),
        ] {
            if v.is_negative() {
                return Err(CoreError::NegativeEnergy { name });
            }
        }
        Ok(())
    }

    /// `E_a > E_m`. Parameters outside this regime are accepted but flagged.
    pub fn is_standard(&self) -> bool {
        self.action > self.message
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MechanismKind {
    Indirect,
    Direct,
}

impl MechanismKind {
    pub const ALL: [MechanismKind; 2] = [MechanismKind::Indirect, MechanismKind::Direct];

    pub fn as_str(self) -> &'static str {
        match self {
            MechanismKind::Indirect => "indirect",
            MechanismKind::Direct => "direct",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyCell {
    pub agents: Rational,
    pub designer: Rational,
}

impl EnergyCell {
    pub fn total(&self) -> Rational {
        &self.agents + &self.designer
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyMatrix {
    pub agent_count: usize,
    // [format][kind]
    cells: [[EnergyCell; 2]; 2],
}

impl EnergyMatrix {
    pub fn cell(&self, format: StrategyFormat, kind: MechanismKind) -> &EnergyCell {
        &self.cells[format_slot(format)][kind_slot(kind)]
    }
}

fn format_slot(format: StrategyFormat) -> usize {
    match format {
        StrategyFormat::Oral => 0,
        StrategyFormat::Laborious => 1,
    }
}

fn kind_slot(kind: MechanismKind) -> usize {
    match kind {
        MechanismKind::Indirect => 0,
        MechanismKind::Direct => 1,
    }
}

pub fn energy_matrix(agent_count: usize, p: &EnergyParams) -> Result<EnergyMatrix, CoreError> {
    if agent_count == 0 {
        return Err(CoreError::NoAgents);
    }
    p.check()?;
    let n = from_count(agent_count);
    let cell = |agents: Rational, designer: Rational| EnergyCell { agents, designer };
    Ok(EnergyMatrix {
        agent_count,
        cells: [
            [
                cell(&n * (&p.message + &p.send), p.outcome_fn.clone()),
                cell(&n * &p.send, &n * &p.message + &p.outcome_fn),
            ],
            [
                cell(&n * &p.action, p.outcome_fn.clone()),
                cell(&n * &p.send, &n * &p.action + &p.outcome_fn),
            ],
        ],
    })
}

/// The matrix with message, sending and evaluation costs neglected.
pub fn simplified_matrix(agent_count: usize, action: &Rational) -> Result<EnergyMatrix, CoreError> {
    energy_matrix(agent_count, &EnergyParams::action_only(action.clone())?)
}

/// The designer's budget measured against two thresholds: the agents' total
/// consumption in the indirect mechanism, and the designer's own full cost of
/// running the direct mechanism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub format: StrategyFormat,
    pub designer_budget: Rational,
    pub agents_threshold: Rational,
    pub full_direct_cost: Rational,
    pub agents_threshold_met: bool,
    pub full_cost_met: bool,
}

pub fn check_energy_condition(
    agent_count: usize,
    p: &EnergyParams,
    format: StrategyFormat,
    designer_budget: &Rational,
) -> Result<FeasibilityVerdict, CoreError> {
    if designer_budget.is_negative() {
        return Err(CoreError::NegativeEnergy {
            name: "designer_budget",
        });
    }
    let m = energy_matrix(agent_count, p)?;
    let agents_threshold = m.cell(format, MechanismKind::Indirect).agents.clone();
    let full_direct_cost = m.cell(format, MechanismKind::Direct).designer.clone();
    Ok(FeasibilityVerdict {
        format,
        agents_threshold_met: *designer_budget >= agents_threshold,
        full_cost_met: *designer_budget >= full_direct_cost,
        designer_budget: designer_budget.clone(),
        agents_threshold,
        full_direct_cost,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preference {
    Indirect,
    Direct,
    Indifferent,
}

impl Preference {
    /// The cheaper of the two, by exact comparison.
    fn cheaper(indirect: &Rational, direct: &Rational) -> Self {
        match indirect.cmp(direct) {
            Ordering::Less => Preference::Indirect,
            Ordering::Greater => Preference::Direct,
            Ordering::Equal => Preference::Indifferent,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Preference::Indirect => "indirect",
            Preference::Direct => "direct",
            Preference::Indifferent => "indifferent",
        }
    }
}

/// How the two preferences relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tension {
    /// The designer saves energy with the indirect mechanism while the agents
    /// save with the direct one: switching to direct revelation means the
    /// designer works harder for the same social choice function.
    DesignerWorksHarder,
    /// Designer and agents do not pull in opposite directions.
    Aligned,
}

impl Tension {
    pub fn code(self) -> &'static str {
        match self {
            Tension::DesignerWorksHarder => "designer-works-harder",
            Tension::Aligned => "aligned",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceReport {
    pub format: StrategyFormat,
    pub designer_indirect: Rational,
    pub designer_direct: Rational,
    pub agents_indirect: Rational,
    pub agents_direct: Rational,
    pub designer_prefers: Preference,
    pub agents_prefer: Preference,
    pub tension: Tension,
}

pub fn designer_preference(
    agent_count: usize,
    p: &EnergyParams,
    format: StrategyFormat,
) -> Result<PreferenceReport, CoreError> {
    let m = energy_matrix(agent_count, p)?;
    let indirect = m.cell(format, MechanismKind::Indirect);
    let direct = m.cell(format, MechanismKind::Direct);
    let designer_prefers = Preference::cheaper(&indirect.designer, &direct.designer);
    let agents_prefer = Preference::cheaper(&indirect.agents, &direct.agents);
    let tension = match (designer_prefers, agents_prefer) {
        (Preference::Indirect, Preference::Direct) => Tension::DesignerWorksHarder,
        _ => Tension::Aligned,
    };
    Ok(PreferenceReport {
        format,
        designer_indirect: indirect.designer.clone(),
        designer_direct: direct.designer.clone(),
        agents_indirect: indirect.agents.clone(),
        agents_direct: direct.agents.clone(),
        designer_prefers,
        agents_prefer,
        tension,
    })
}
