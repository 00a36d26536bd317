mod common;

use common::{build, g1, game_shape, set};
use mechbench_core::game::{
    conditional_prior, induced_scf, validate_environment, Environment, StrategyProfile,
};
use mechbench_core::rational::{int, ratio};
use mechbench_core::Rational;
use num_traits::Zero;
use proptest::prelude::*;

/// Bayes by brute force: keep the joint entries consistent with the own
/// type and divide by their sum.
fn normalize_oracle(env: &Environment, agent: usize, own_type: usize) -> Vec<Rational> {
    let rows: Vec<Rational> = env
        .type_profiles()
        .iter()
        .filter(|p| p[agent] == own_type)
        .map(|p| env.prior(&p).unwrap().clone())
        .collect();
    let total: Rational = rows.iter().sum();
    rows.into_iter().map(|p| p / &total).collect()
}

#[test]
fn correlated_conditional_matches_bayes() {
    let mut env = Environment::new(vec![set(&["L", "H"]), set(&["l", "h"])], set(&["x"])).unwrap();
    env.set_prior(&[0, 0], ratio(1, 2));
    env.set_prior(&[0, 1], int(0));
    env.set_prior(&[1, 0], ratio(1, 4));
    env.set_prior(&[1, 1], ratio(1, 4));
    for agent in 0..2 {
        for t in 0..2 {
            env.set_utility(agent, 0, t, int(0));
        }
    }
    assert!(validate_environment(&env).is_empty());
    let cond = conditional_prior(&env, 0, 1).unwrap();
    let oracle = normalize_oracle(&env, 0, 1);
    assert_eq!(oracle, vec![ratio(1, 2), ratio(1, 2)]);
    assert_eq!(
        cond.entries,
        vec![(vec![0], ratio(1, 2)), (vec![1], ratio(1, 2))]
    );
    let given_low = conditional_prior(&env, 0, 0).unwrap();
    assert_eq!(given_low.entries[0].1, int(1));
    assert!(given_low.entries[1].1.is_zero());
}

#[test]
fn g1_induced_scf() {
    let (env, mech) = g1();
    let bne = StrategyProfile::new(&env, &mech, vec![vec![0, 1], vec![0]]).unwrap();
    let f = induced_scf(&env, &mech, &bne);
    // brute force g∘s* at (L,*) and (H,*)
    let expected: Vec<usize> = env
        .type_profiles()
        .iter()
        .map(|t| if t[0] == 0 { 0 } else { 1 })
        .collect();
    assert_eq!(f.table(), expected.as_slice());
    assert_eq!(env.outcomes().label(f.outcome_at(0)), "x0");
    assert_eq!(env.outcomes().label(f.outcome_at(1)), "x1");
}

proptest! {
    #[test]
    fn conditionals_sum_to_one(shape in game_shape()) {
        let (env, _) = build(&shape);
        for agent in 0..env.agent_count() {
            for t in 0..env.type_space(agent).len() {
                match conditional_prior(&env, agent, t) {
                    Ok(cond) => {
                        prop_assert_eq!(cond.total(), int(1));
                        let values: Vec<Rational> =
                            cond.entries.iter().map(|(_, p)| p.clone()).collect();
                        prop_assert_eq!(values, normalize_oracle(&env, agent, t));
                    }
                    Err(_) => prop_assert!(env.marginal(agent, t).is_zero()),
                }
            }
        }
    }

    #[test]
    fn induced_scf_is_pointwise_composition(shape in game_shape()) {
        let (env, mech) = build(&shape);
        let maps: Vec<Vec<usize>> = shape
            .types
            .iter()
            .zip(&shape.strategies)
            .map(|(&nt, &ns)| (0..nt).map(|t| (t * 7 + 1) % ns).collect())
            .collect();
        let profile = StrategyProfile::new(&env, &mech, maps.clone()).unwrap();
        let f = induced_scf(&env, &mech, &profile);
        for (idx, types) in env.type_profiles().iter().enumerate() {
            let joint: Vec<usize> = types.iter().enumerate().map(|(i, &t)| maps[i][t]).collect();
            prop_assert_eq!(f.outcome_at(idx), mech.outcome(&joint));
        }
    }

    #[test]
    fn generated_environments_validate(shape in game_shape()) {
        let (env, _) = build(&shape);
        prop_assert!(validate_environment(&env).is_empty());
    }
}
