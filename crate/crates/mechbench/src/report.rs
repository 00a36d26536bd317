//! Report values shared by the JSON and text outputs.
//!
//! Every report is first built as a `serde_json::Value` with a fixed key order;
//! text output is a plain rendering of that same value, so both formats carry
//! the same information.

use mechbench_core::energy::{
    EnergyMatrix, EnergyParams, FeasibilityVerdict, MechanismKind, PreferenceReport,
};
use mechbench_core::equilibrium::{BneCertificate, Deviation};
use mechbench_core::game::{
    Environment, Mechanism, SocialChoiceFunction, StrategyFormat, Violation,
};
use mechbench_core::rational::format_rational;
use mechbench_core::revelation::{Misreport, RevelationReport};
use mechbench_core::Rational;
use serde_json::{json, Map, Value};

pub const ENERGY_UNIT: &str = "joule";

fn rat(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn opt_rat(r: &Option<Rational>) -> Value {
    r.as_ref().map(rat).unwrap_or(Value::Null)
}

pub fn violations(v: &[Violation]) -> Value {
    json!({
        "valid": false,
        "violations": v.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    })
}

pub fn certificate(env: &Environment, mech: &Mechanism, c: &BneCertificate) -> Value {
    let agents: Vec<Value> = c
        .records
        .iter()
        .enumerate()
        .map(|(agent, recs)| {
            let rows: Vec<Value> = recs
                .iter()
                .enumerate()
                .map(|(t, r)| {
                    json!({
                        "type": env.type_label(agent, t),
                        "strategy": mech.strategy_set(agent).label(r.strategy),
                        "interim_utility": opt_rat(&r.utility),
                        "best_deviation_utility": opt_rat(&r.best_deviation),
                        "skipped": r.skipped,
                    })
                })
                .collect();
            json!({ "agent": agent + 1, "strategy_map": rows })
        })
        .collect();
    json!({ "profile": agents })
}

pub fn deviation(env: &Environment, mech: &Mechanism, d: &Deviation) -> Value {
    let strategies = mech.strategy_set(d.agent);
    json!({
        "agent": d.agent + 1,
        "type": env.type_label(d.agent, d.own_type),
        "chosen": strategies.label(d.chosen),
        "deviation": strategies.label(d.deviation),
        "chosen_utility": rat(&d.chosen_utility),
        "deviation_utility": rat(&d.deviation_utility),
    })
}

pub fn misreport(env: &Environment, m: &Misreport) -> Value {
    json!({
        "agent": m.agent + 1,
        "true_type": env.type_label(m.agent, m.true_type),
        "announced": env.type_label(m.agent, m.announced),
        "truthful_utility": rat(&m.truthful_utility),
        "misreport_utility": rat(&m.misreport_utility),
    })
}

pub fn scf(env: &Environment, f: &SocialChoiceFunction) -> Value {
    Value::Array(
        env.type_profiles()
            .iter()
            .enumerate()
            .map(|(idx, t)| {
                json!({
                    "profile": env.profile_labels(&t),
                    "outcome": env.outcomes().label(f.outcome_at(idx)),
                })
            })
            .collect(),
    )
}

fn outcome_table(env: &Environment, mech: &Mechanism) -> Value {
    Value::Array(
        mech.strategy_profiles()
            .iter()
            .enumerate()
            .map(|(idx, s)| {
                json!({
                    "profile": mech.strategy_labels(&s),
                    "outcome": env.outcomes().label(mech.outcome_at(idx)),
                })
            })
            .collect(),
    )
}

pub fn skipped(env: &Environment, pairs: &[(usize, usize)]) -> Value {
    Value::Array(
        pairs
            .iter()
            .map(|&(i, t)| json!({ "agent": i + 1, "type": env.type_label(i, t) }))
            .collect(),
    )
}

pub fn revelation(env: &Environment, mech: &Mechanism, r: &RevelationReport) -> Value {
    let direct = r.direct.mechanism();
    json!({
        "equilibrium": certificate(env, mech, &r.bne),
        "social_choice_function": scf(env, &r.scf),
        "direct_mechanism": {
            "strategy_format": direct.format().as_str(),
            "outcome_fn": outcome_table(env, direct),
        },
        "truthful_certificate": r.truthful.as_ref().map(|c| certificate(env, direct, c)),
        "counterexample": r.counterexample.as_ref().map(|m| misreport(env, m)),
        "outcome_preserved": r.outcome_preserved,
        "skipped_types": skipped(env, &r.skipped),
        "holds": r.holds(),
    })
}

fn cell_pair(m: &EnergyMatrix, f: StrategyFormat, k: MechanismKind) -> Value {
    let c = m.cell(f, k);
    json!({ "agents": rat(&c.agents), "designer": rat(&c.designer) })
}

pub fn energy_matrix(m: &EnergyMatrix) -> Value {
    let mut rows = Map::new();
    for f in StrategyFormat::ALL {
        let mut row = Map::new();
        for k in MechanismKind::ALL {
            row.insert(k.as_str().to_string(), cell_pair(m, f, k));
        }
        rows.insert(f.as_str().to_string(), Value::Object(row));
    }
    json!({ "agent_count": m.agent_count, "cells": rows })
}

pub fn energy_params(p: &EnergyParams) -> Value {
    json!({
        "action": rat(&p.action),
        "message": rat(&p.message),
        "send": rat(&p.send),
        "outcome_fn": rat(&p.outcome_fn),
        "action_exceeds_message": p.is_standard(),
    })
}

pub fn feasibility(v: &FeasibilityVerdict) -> Value {
    json!({
        "strategy_format": v.format.as_str(),
        "designer_budget": rat(&v.designer_budget),
        "agents_indirect_total": rat(&v.agents_threshold),
        "designer_direct_cost": rat(&v.full_direct_cost),
        "covers_agents_indirect_total": v.agents_threshold_met,
        "covers_designer_direct_cost": v.full_cost_met,
    })
}

pub fn preference(r: &PreferenceReport) -> Value {
    json!({
        "strategy_format": r.format.as_str(),
        "designer": { "indirect": rat(&r.designer_indirect), "direct": rat(&r.designer_direct) },
        "agents": { "indirect": rat(&r.agents_indirect), "direct": rat(&r.agents_direct) },
        "designer_prefers": r.designer_prefers.as_str(),
        "agents_prefer": r.agents_prefer.as_str(),
        "commentary": r.tension.code(),
    })
}

/// Indented plain-text rendering of a report value.
pub fn to_text(value: &Value) -> String {
    let mut out = String::new();
    render(value, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a)
            if !a.is_empty()
                && a.iter()
                    .all(|x| matches!(x, Value::String(_) | Value::Number(_))) =>
        {
            Some(format!(
                "({})",
                a.iter()
                    .map(|x| scalar(x).unwrap())
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        }
        _ => None,
    }
}

fn render(value: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match scalar(v) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None if is_empty(v) => out.push_str(&format!("{pad}{k}: (none)\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(v, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(item, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap())),
    }
}

fn is_empty(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.is_empty(),
        Value::Object(m) => m.is_empty(),
        _ => false,
    }
}
