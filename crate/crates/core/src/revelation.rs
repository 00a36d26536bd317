//! Direct revelation mechanisms built from equilibria, and instance-level
//! checks that truth-telling is an equilibrium of them.

use alloc::vec::Vec;

use crate::equilibrium::{check_bne, enumerate_bne, BneCertificate, Deviation};
use crate::game::{
    induced_scf, Environment, LabelSet, Mechanism, SocialChoiceFunction, StrategyProfile,
};
use crate::{CoreError, Rational};

/// A mechanism whose strategies are type announcements.
///
/// When built from an equilibrium `s*` of another mechanism `g`, the outcome at
/// announcement profile `θ̂` is `g(s*_1(θ̂_1), ..., s*_I(θ̂_I))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectMechanism {
    mechanism: Mechanism,
    source: Option<StrategyProfile>,
}

impl DirectMechanism {
    /// Accepts a mechanism already in direct form: each agent's strategy
    /// labels equal its type labels, in the same order.
    pub fn from_mechanism(env: &Environment, mechanism: Mechanism) -> Result<Self, CoreError> {
        for agent in 0..env.agent_count() {
            if mechanism.strategy_set(agent) != env.type_space(agent) {
                return Err(CoreError::NotDirect { agent });
            }
        }
        Ok(DirectMechanism {
            mechanism,
            source: None,
        })
    }

    pub fn mechanism(&self) -> &Mechanism {
        &self.mechanism
    }

    /// The equilibrium of the source mechanism this was built from, if any.
    pub fn source_profile(&self) -> Option<&StrategyProfile> {
        self.source.as_ref()
    }

    pub fn into_mechanism(self) -> Mechanism {
        self.mechanism
    }
}

/// Composes the outcome function with a verified equilibrium.
///
/// Fails with [`CoreError::StaleBne`] when the certificate does not re-verify
/// against `(env, mech)`.
pub fn build_direct(
    env: &Environment,
    mech: &Mechanism,
    bne: &BneCertificate,
) -> Result<DirectMechanism, CoreError> {
    if !bne.profile.fits(env, mech) || check_bne(env, mech, &bne.profile).is_err() {
        return Err(CoreError::StaleBne);
    }
    let announcements: Vec<LabelSet> = env.type_spaces().to_vec();
    let mechanism = Mechanism::from_fn(env, announcements, mech.format(), |reported| {
        mech.outcome(&bne.profile.joint(reported))
    })
    .expect("composition of a valid mechanism is total");
    Ok(DirectMechanism {
        mechanism,
        source: Some(bne.profile.clone()),
    })
}

/// A type that gains by announcing another type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Misreport {
    pub agent: usize,
    pub true_type: usize,
    pub announced: usize,
    pub truthful_utility: Rational,
    pub misreport_utility: Rational,
}

impl From<Deviation> for Misreport {
    fn from(d: Deviation) -> Self {
        Misreport {
            agent: d.agent,
            true_type: d.own_type,
            announced: d.deviation,
            truthful_utility: d.chosen_utility,
            misreport_utility: d.deviation_utility,
        }
    }
}

/// Checks that truth-telling is a Bayesian Nash equilibrium of `dm`.
#[allow(clippy::result_large_err)]
pub fn is_truthful_bne(
    env: &Environment,
    dm: &DirectMechanism,
) -> Result<BneCertificate, Misreport> {
    check_bne(env, &dm.mechanism, &StrategyProfile::truthful(env)).map_err(Misreport::from)
}

/// Everything checked for one equilibrium of the source mechanism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevelationReport {
    pub bne: BneCertificate,
    /// `f = g ∘ s*`.
    pub scf: SocialChoiceFunction,
    pub direct: DirectMechanism,
    pub truthful: Option<BneCertificate>,
    pub counterexample: Option<Misreport>,
    /// Truth-telling in the direct mechanism induces exactly `f`.
    pub outcome_preserved: bool,
    /// Zero-marginal `(agent, type)` pairs whose constraints were skipped.
    pub skipped: Vec<(usize, usize)>,
}

impl RevelationReport {
    pub fn holds(&self) -> bool {
        self.truthful.is_some() && self.counterexample.is_none() && self.outcome_preserved
    }
}

/// Runs the direct-mechanism construction for every equilibrium of `mech`, in
/// enumeration order.
pub fn verify_revelation_principle(
    env: &Environment,
    mech: &Mechanism,
    cap: u128,
) -> Result<Vec<RevelationReport>, CoreError> {
    enumerate_bne(env, mech, cap)?
        .into_iter()
        .map(|bne| revelation_report(env, mech, bne))
        .collect()
}

pub fn revelation_report(
    env: &Environment,
    mech: &Mechanism,
    bne: BneCertificate,
) -> Result<RevelationReport, CoreError> {
    let scf = induced_scf(env, mech, &bne.profile);
    let direct = build_direct(env, mech, &bne)?;
    let (truthful, counterexample) = match is_truthful_bne(env, &direct) {
        Ok(cert) => (Some(cert), None),
        Err(m) => (None, Some(m)),
    };
    let outcome_preserved =
        induced_scf(env, &direct.mechanism, &StrategyProfile::truthful(env)) == scf;
    let skipped = bne.skipped();
    Ok(RevelationReport {
        bne,
        scf,
        direct,
        truthful,
        counterexample,
        outcome_preserved,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::DEFAULT_PROFILE_CAP;
    use crate::game::StrategyFormat;
    use crate::rational::int;
    use alloc::vec;

    fn set(names: &[&str]) -> LabelSet {
        LabelSet::new("labels", names.iter().copied()).unwrap()
    }

    fn coordination() -> (Environment, Mechanism) {
        let mut env = Environment::new(vec![set(&["t"]), set(&["t"])], set(&["x", "y"])).unwrap();
        env.set_uniform_prior();
        for agent in 0..2 {
            env.set_utility(agent, 0, 0, int(1));
            env.set_utility(agent, 1, 0, int(0));
        }
        let mech = Mechanism::from_fn(
            &env,
            vec![set(&["a", "b"]), set(&["a", "b"])],
            StrategyFormat::Oral,
            |s| if s[0] == s[1] { 0 } else { 1 },
        )
        .unwrap();
        (env, mech)
    }

    #[test]
    fn single_type_agents_are_vacuously_truthful() {
        let (env, mech) = coordination();
        let reports = verify_revelation_principle(&env, &mech, DEFAULT_PROFILE_CAP).unwrap();
        assert_eq!(reports.len(), 2);
        for r in &reports {
            assert!(r.holds());
            assert_eq!(r.direct.mechanism().outcome_table(), &[0]);
        }
    }

    #[test]
    fn stale_certificate_is_rejected() {
        let (env, mech) = coordination();
        let good = enumerate_bne(&env, &mech, DEFAULT_PROFILE_CAP)
            .unwrap()
            .remove(0);
        let mut stale = good.clone();
        stale.profile = StrategyProfile::new(&env, &mech, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(build_direct(&env, &mech, &stale), Err(CoreError::StaleBne));
        let mut wrong_shape = good;
        wrong_shape.profile = StrategyProfile::from_maps_unchecked(vec![vec![0]]);
        assert_eq!(
            build_direct(&env, &mech, &wrong_shape),
            Err(CoreError::StaleBne)
        );
    }

    #[test]
    fn non_direct_mechanism_is_refused() {
        let (env, mech) = coordination();
        assert_eq!(
            DirectMechanism::from_mechanism(&env, mech),
            Err(CoreError::NotDirect { agent: 0 })
        );
    }
}
