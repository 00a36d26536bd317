//! Pure-strategy Bayesian Nash equilibria: interim utilities, the
//! best-response check, exhaustive enumeration and implementation.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::game::{
    conditional_prior, induced_scf, ConditionalPrior, Environment, Mechanism, SocialChoiceFunction,
    StrategyProfile,
};
use crate::{CoreError, ProfileSpace, Rational};

/// Default bound on `Π_i |S_i|^{|Θ_i|}` for exhaustive enumeration.
pub const DEFAULT_PROFILE_CAP: u128 = 10_000_000;

/// `E[u_i(g(ŝ_i, s_{-i}(θ_{-i})), θ_i) | θ_i]` for a candidate strategy `ŝ_i`.
pub fn interim_utility(
    env: &Environment,
    mech: &Mechanism,
    profile: &StrategyProfile,
    agent: usize,
    own_type: usize,
    candidate: usize,
) -> Result<Rational, CoreError> {
    if candidate >= mech.strategy_set(agent).len() {
        return Err(CoreError::InvalidProfile {
            reason: alloc::format!("agent {} has no strategy #{candidate}", agent + 1),
        });
    }
    let cond = conditional_prior(env, agent, own_type)?;
    Ok(expected_utility(env, mech, profile, &cond, candidate))
}

/// Interim utility of every strategy of `agent`, in declared order.
pub fn interim_utilities(
    env: &Environment,
    mech: &Mechanism,
    profile: &StrategyProfile,
    agent: usize,
    own_type: usize,
) -> Result<Vec<Rational>, CoreError> {
    let cond = conditional_prior(env, agent, own_type)?;
    Ok((0..mech.strategy_set(agent).len())
        .map(|s| expected_utility(env, mech, profile, &cond, s))
        .collect())
}

fn expected_utility(
    env: &Environment,
    mech: &Mechanism,
    profile: &StrategyProfile,
    cond: &ConditionalPrior,
    candidate: usize,
) -> Rational {
    let mut total = Rational::zero();
    for (others, p) in &cond.entries {
        if p.is_zero() {
            continue;
        }
        let mut joint = profile.joint(&cond.full_profile(others));
        joint[cond.agent] = candidate;
        total += p * env.u(cond.agent, mech.outcome(&joint), cond.own_type);
    }
    total
}

/// What the equilibrium check recorded for one `(agent, type)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeRecord {
    pub strategy: usize,
    /// Interim utility of the chosen strategy; `None` when skipped.
    pub utility: Option<Rational>,
    /// Best interim utility over the other strategies; `None` when skipped or
    /// when the agent has a single strategy.
    pub best_deviation: Option<Rational>,
    /// The type has zero marginal probability and imposes no constraint.
    pub skipped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BneCertificate {
    pub profile: StrategyProfile,
    /// Indexed `[agent][type]`.
    pub records: Vec<Vec<TypeRecord>>,
}

impl BneCertificate {
    /// `(agent, type)` pairs whose constraints were skipped.
    pub fn skipped(&self) -> Vec<(usize, usize)> {
        self.records
            .iter()
            .enumerate()
            .flat_map(|(agent, recs)| {
                recs.iter()
                    .enumerate()
                    .filter(|(_, r)| r.skipped)
                    .map(move |(t, _)| (agent, t))
            })
            .collect()
    }
}

/// A profitable unilateral deviation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub agent: usize,
    pub own_type: usize,
    pub chosen: usize,
    pub deviation: usize,
    pub chosen_utility: Rational,
    pub deviation_utility: Rational,
}

/// Checks every positive-marginal `(agent, type)` against every deviation in
/// declared order and stops at the first strictly profitable one.
///
/// `profile` must fit `mech` (see [`StrategyProfile::new`]).
#[allow(clippy::result_large_err)]
pub fn check_bne(
    env: &Environment,
    mech: &Mechanism,
    profile: &StrategyProfile,
) -> Result<BneCertificate, Deviation> {
    debug_assert!(profile.fits(env, mech));
    let mut records = Vec::with_capacity(env.agent_count());
    for agent in 0..env.agent_count() {
        let mut agent_records = Vec::with_capacity(env.type_space(agent).len());
        for own_type in 0..env.type_space(agent).len() {
            let chosen = profile.strategy(agent, own_type);
            let utilities = match interim_utilities(env, mech, profile, agent, own_type) {
                Ok(us) => us,
                Err(CoreError::ZeroMarginal { .. }) => {
                    agent_records.push(TypeRecord {
                        strategy: chosen,
                        utility: None,
                        best_deviation: None,
                        skipped: true,
                    });
                    continue;
                }
                Err(e) => unreachable!("profile was checked against the mechanism: {e}"),
            };
            if let Some(deviation) =
                (0..utilities.len()).find(|&s| utilities[s] > utilities[chosen])
            {
                return Err(Deviation {
                    agent,
                    own_type,
                    chosen,
                    deviation,
                    chosen_utility: utilities[chosen].clone(),
                    deviation_utility: utilities[deviation].clone(),
                });
            }
            let best_deviation = utilities
                .iter()
                .enumerate()
                .filter(|&(s, _)| s != chosen)
                .map(|(_, u)| u)
                .max()
                .cloned();
            agent_records.push(TypeRecord {
                strategy: chosen,
                utility: Some(utilities[chosen].clone()),
                best_deviation,
                skipped: false,
            });
        }
        records.push(agent_records);
    }
    Ok(BneCertificate {
        profile: profile.clone(),
        records,
    })
}

/// `Π_i |S_i|^{|Θ_i|}`, saturating at `u128::MAX`.
pub fn search_space_size(env: &Environment, mech: &Mechanism) -> u128 {
    let mut size: u128 = 1;
    for agent in 0..env.agent_count() {
        let s = mech.strategy_set(agent).len() as u128;
        for _ in 0..env.type_space(agent).len() {
            size = size.saturating_mul(s);
        }
    }
    size
}

/// Every strategy profile of `mech`, in lexicographic order.
pub fn all_profiles<'a>(
    env: &'a Environment,
    mech: &'a Mechanism,
) -> Result<impl Iterator<Item = StrategyProfile> + 'a, CoreError> {
    let mut radices = Vec::new();
    for agent in 0..env.agent_count() {
        for _ in 0..env.type_space(agent).len() {
            radices.push(mech.strategy_set(agent).len());
        }
    }
    let space = ProfileSpace::new(radices)?;
    Ok((0..space.size()).map(move |idx| {
        let mut flat = space.decode(idx).into_iter();
        let maps = (0..env.agent_count())
            .map(|agent| flat.by_ref().take(env.type_space(agent).len()).collect())
            .collect();
        StrategyProfile::from_maps_unchecked(maps)
    }))
}

/// All pure-strategy Bayesian Nash equilibria of `mech`, in lexicographic
/// profile order.
///
/// The last agent's strategy map is never enumerated: for each assignment of
/// the other agents its best-response set per type is computed directly, and
/// only the product of those sets is checked against the remaining agents.
/// Comparisons run on integer-scaled payoffs; certificates are recomputed
/// with [`check_bne`].
pub fn enumerate_bne(
    env: &Environment,
    mech: &Mechanism,
    cap: u128,
) -> Result<Vec<BneCertificate>, CoreError> {
    let size = search_space_size(env, mech);
    if size > cap {
        return Err(CoreError::CapExceeded { size, cap });
    }
    let scaled = ScaledGame::new(env);
    let profiles = match scaled.fits_i128() {
        true => Kernel::<i128>::new(env, mech, &scaled).enumerate(),
        false => Kernel::<BigInt>::new(env, mech, &scaled).enumerate(),
    };
    Ok(profiles
        .into_iter()
        .map(|p| check_bne(env, mech, &p).expect("kernel and exact check disagree"))
        .collect())
}

/// The equilibria of `mech` that induce `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplementationWitness {
    pub scf: SocialChoiceFunction,
    pub certificates: Vec<BneCertificate>,
}

impl ImplementationWitness {
    pub fn implements(&self) -> bool {
        !self.certificates.is_empty()
    }
}

pub fn implements(
    env: &Environment,
    mech: &Mechanism,
    f: &SocialChoiceFunction,
    cap: u128,
) -> Result<ImplementationWitness, CoreError> {
    let certificates = enumerate_bne(env, mech, cap)?
        .into_iter()
        .filter(|c| induced_scf(env, mech, &c.profile) == *f)
        .collect();
    Ok(ImplementationWitness {
        scf: f.clone(),
        certificates,
    })
}

/// Prior and utilities multiplied by the lcm of their denominators.
///
/// Scores built from these are `D · L_i · marginal(θ_i)` times the interim
/// utility, a positive multiple, so comparisons between strategies of one
/// `(agent, type)` are unchanged.
struct ScaledGame {
    prior: Vec<BigInt>,
    prior_bits: u64,
    utilities: Vec<Vec<BigInt>>,
    utility_bits: u64,
}

impl ScaledGame {
    fn new(env: &Environment) -> Self {
        let size = env.type_profiles().size();
        let prior_raw: Vec<&Rational> = (0..size).map(|idx| env.p(idx)).collect();
        let prior = scale(&prior_raw);
        let mut utilities = Vec::new();
        for agent in 0..env.agent_count() {
            let nt = env.type_space(agent).len();
            let raw: Vec<&Rational> = (0..env.outcomes().len() * nt)
                .map(|k| env.u(agent, k / nt, k % nt))
                .collect();
            utilities.push(scale(&raw));
        }
        // Σ|prior| = D for a valid prior; bound by the largest term times the
        // term count anyway so the check does not rely on validation.
        let prior_bits = prior.iter().map(BigInt::bits).max().unwrap_or(0)
            + (usize::BITS - size.leading_zeros()) as u64;
        let utility_bits = utilities
            .iter()
            .flatten()
            .map(BigInt::bits)
            .max()
            .unwrap_or(0);
        ScaledGame {
            prior,
            prior_bits,
            utilities,
            utility_bits,
        }
    }

    fn fits_i128(&self) -> bool {
        self.prior_bits + self.utility_bits <= 120
    }
}

fn scale(values: &[&Rational]) -> Vec<BigInt> {
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    values
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect()
}

trait Score: Clone + Ord {
    fn zero() -> Self;
    fn from_big(v: &BigInt) -> Self;
    fn add_product(&mut self, a: &Self, b: &Self);
}

impl Score for i128 {
    fn zero() -> Self {
        0
    }

    fn from_big(v: &BigInt) -> Self {
        v.to_i128().expect("bounded by fits_i128")
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

impl Score for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }

    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

struct Slice<T> {
    // None for zero-marginal types.
    terms: Option<Vec<(Vec<usize>, T)>>,
}

struct Kernel<'a, T> {
    mech: &'a Mechanism,
    type_counts: Vec<usize>,
    strategy_counts: Vec<usize>,
    slices: Vec<Vec<Slice<T>>>,
    utilities: Vec<Vec<T>>,
}

impl<'a, T: Score> Kernel<'a, T> {
    fn new(env: &Environment, mech: &'a Mechanism, scaled: &ScaledGame) -> Self {
        let agents = env.agent_count();
        let space = env.type_profiles();
        let mut slices: Vec<Vec<Slice<T>>> = (0..agents)
            .map(|i| {
                (0..env.type_space(i).len())
                    .map(|t| Slice {
                        terms: (!env.marginal(i, t).is_zero()).then(Vec::new),
                    })
                    .collect()
            })
            .collect();
        for (idx, weight) in scaled.prior.iter().enumerate() {
            if weight.is_zero() {
                continue;
            }
            let types = space.decode(idx);
            for agent in 0..agents {
                if let Some(terms) = slices[agent][types[agent]].terms.as_mut() {
                    terms.push((types.clone(), T::from_big(weight)));
                }
            }
        }
        Kernel {
            mech,
            type_counts: (0..agents).map(|i| env.type_space(i).len()).collect(),
            strategy_counts: (0..agents).map(|i| mech.strategy_set(i).len()).collect(),
            slices,
            utilities: scaled
                .utilities
                .iter()
                .map(|us| us.iter().map(T::from_big).collect())
                .collect(),
        }
    }

    fn score(&self, agent: usize, own_type: usize, candidate: usize, maps: &[Vec<usize>]) -> T {
        let space = self.mech.strategy_profiles();
        let nt = self.type_counts[agent];
        let mut acc = T::zero();
        let terms = self.slices[agent][own_type].terms.as_ref().unwrap();
        for (types, weight) in terms {
            let mut idx = candidate * space.stride(agent);
            for (j, &t) in types.iter().enumerate() {
                if j != agent {
                    idx += maps[j][t] * space.stride(j);
                }
            }
            let x = self.mech.outcome_at(idx);
            acc.add_product(weight, &self.utilities[agent][x * nt + own_type]);
        }
        acc
    }

    fn best_responses(&self, agent: usize, own_type: usize, maps: &[Vec<usize>]) -> Vec<usize> {
        let all = 0..self.strategy_counts[agent];
        if self.slices[agent][own_type].terms.is_none() {
            return all.collect();
        }
        let scores: Vec<T> = all.map(|s| self.score(agent, own_type, s, maps)).collect();
        let best = scores.iter().max().unwrap();
        (0..scores.len()).filter(|&s| scores[s] == *best).collect()
    }

    fn satisfied(&self, agent: usize, own_type: usize, maps: &[Vec<usize>]) -> bool {
        if self.slices[agent][own_type].terms.is_none() {
            return true;
        }
        let chosen = maps[agent][own_type];
        let base = self.score(agent, own_type, chosen, maps);
        (0..self.strategy_counts[agent])
            .filter(|&s| s != chosen)
            .all(|s| self.score(agent, own_type, s, maps) <= base)
    }

    fn enumerate(&self) -> Vec<StrategyProfile> {
        let agents = self.type_counts.len();
        let last = agents - 1;
        let outer: Vec<(usize, usize)> = (0..last)
            .flat_map(|i| (0..self.type_counts[i]).map(move |t| (i, t)))
            .collect();
        let mut maps: Vec<Vec<usize>> = self.type_counts.iter().map(|&n| vec![0; n]).collect();
        let mut found = Vec::new();
        loop {
            let responses: Vec<Vec<usize>> = (0..self.type_counts[last])
                .map(|t| self.best_responses(last, t, &maps))
                .collect();
            let mut pick = vec![0; responses.len()];
            loop {
                for (t, &k) in pick.iter().enumerate() {
                    maps[last][t] = responses[t][k];
                }
                if outer.iter().all(|&(i, t)| self.satisfied(i, t, &maps)) {
                    found.push(StrategyProfile::from_maps_unchecked(maps.clone()));
                }
                if !advance(&mut pick, |t| responses[t].len()) {
                    break;
                }
            }
            let mut flat: Vec<usize> = outer.iter().map(|&(i, t)| maps[i][t]).collect();
            if !advance(&mut flat, |k| self.strategy_counts[outer[k].0]) {
                break;
            }
            for (&(i, t), &s) in outer.iter().zip(&flat) {
                maps[i][t] = s;
            }
        }
        found
    }
}

/// Odometer step with the last digit least significant. Returns false after
/// wrapping past the final value.
fn advance<R: Fn(usize) -> usize>(digits: &mut [usize], radix: R) -> bool {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < radix(k) {
            return true;
        }
        digits[k] = 0;
    }
    false
}
