#![allow(dead_code)]

use mechbench_core::game::{Environment, LabelSet, Mechanism, StrategyFormat};
use mechbench_core::rational::int;
use mechbench_core::Rational;
use proptest::prelude::*;

pub fn set(names: &[&str]) -> LabelSet {
    LabelSet::new("labels", names.iter().copied()).unwrap()
}

/// G1: agent 1 has types L, H and strategies a, b; agent 2 has the single
/// type `*` and strategy `c`. `g(a, c) = x0`, `g(b, c) = x1`. Type L values
/// x0, type H values x1. Uniform prior; agent 2 is indifferent.
pub fn g1() -> (Environment, Mechanism) {
    let mut env =
        Environment::new(vec![set(&["L", "H"]), set(&["*"])], set(&["x0", "x1"])).unwrap();
    env.set_uniform_prior();
    for x in 0..2 {
        for t in 0..2 {
            env.set_utility(0, x, t, int((x == t) as i64));
        }
        env.set_utility(1, x, 0, int(0));
    }
    let mech = Mechanism::from_fn(
        &env,
        vec![set(&["a", "b"]), set(&["c"])],
        StrategyFormat::Laborious,
        |s| s[0],
    )
    .unwrap();
    (env, mech)
}

/// Raw description of a small random game.
#[derive(Debug, Clone)]
pub struct GameShape {
    pub types: Vec<usize>,
    pub strategies: Vec<usize>,
    pub outcomes: usize,
    /// Nonnegative integer weights over type profiles; zeros allowed, at
    /// least one positive.
    pub weights: Vec<u32>,
    pub utilities: Vec<i64>,
    pub g: Vec<usize>,
}

pub fn game_shape() -> impl Strategy<Value = GameShape> {
    (
        prop::collection::vec((1usize..=3, 1usize..=3), 1..=3),
        1usize..=3,
    )
        .prop_flat_map(|(dims, outcomes)| {
            let types: Vec<usize> = dims.iter().map(|d| d.0).collect();
            let strategies: Vec<usize> = dims.iter().map(|d| d.1).collect();
            let n_profiles: usize = types.iter().product();
            let n_utils: usize = types.iter().map(|t| t * outcomes).sum();
            let n_joint: usize = strategies.iter().product();
            (
                Just(types),
                Just(strategies),
                Just(outcomes),
                prop::collection::vec(0u32..=3, n_profiles),
                prop::collection::vec(-2i64..=2, n_utils),
                prop::collection::vec(0..outcomes, n_joint),
            )
        })
        .prop_map(|(types, strategies, outcomes, mut weights, utilities, g)| {
            if weights.iter().all(|&w| w == 0) {
                weights[0] = 1;
            }
            GameShape {
                types,
                strategies,
                outcomes,
                weights,
                utilities,
                g,
            }
        })
}

fn labels(prefix: &str, n: usize) -> LabelSet {
    LabelSet::new("labels", (0..n).map(|k| format!("{prefix}{k}"))).unwrap()
}

pub fn build(shape: &GameShape) -> (Environment, Mechanism) {
    let mut env = Environment::new(
        shape.types.iter().map(|&n| labels("t", n)).collect(),
        labels("x", shape.outcomes),
    )
    .unwrap();
    let total: u32 = shape.weights.iter().sum();
    for (idx, &w) in shape.weights.iter().enumerate() {
        let profile = env.type_profiles().decode(idx);
        env.set_prior(&profile, Rational::new(w.into(), total.into()));
    }
    let mut u = shape.utilities.iter();
    for (agent, &nt) in shape.types.iter().enumerate() {
        for x in 0..shape.outcomes {
            for t in 0..nt {
                env.set_utility(agent, x, t, int(*u.next().unwrap()));
            }
        }
    }
    let mech = Mechanism::new(
        &env,
        shape.strategies.iter().map(|&n| labels("s", n)).collect(),
        shape.g.iter().map(|&x| Some(x)).collect(),
        StrategyFormat::Oral,
    )
    .unwrap();
    (env, mech)
}
