//! ESS verification, invasion search and support enumeration.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{dot, MixedStrategy, NashCheck, SupportSet, SymmetricGame};
use crate::intsolve::{positive_solution, IntOutcome, ScaledMatrix};
use crate::linalg::{self, LinearSolution};
use crate::rational::Rational;
use crate::tangent::{invader_from_direction, quadratic_form, FaceSearch, PatternBound, TangentCone};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EssStatus {
    Ess,
    NotNash,
    Invaded,
}

impl EssStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            EssStatus::Ess => "ESS",
            EssStatus::NotNash => "NOT_NASH",
            EssStatus::Invaded => "INVADED",
        }
    }
}

/// `u(σ,σ)`, the payoff of every pure strategy against `σ`, and the set of
/// pure best responses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NashData {
    pub value: Rational,
    pub pure_payoffs: Vec<Rational>,
    pub best_responses: SupportSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssVerdict {
    pub sigma: MixedStrategy,
    pub status: EssStatus,
    pub nash: NashData,
    /// For `NotNash`: a pure strategy doing strictly better against σ.
    pub violator: Option<usize>,
    /// For `NotNash` (the pure violator) and `Invaded`.
    pub invasion_witness: Option<MixedStrategy>,
    /// For `Ess`: one strictly negative maximum per maximal sign pattern.
    pub negativity_proofs: Vec<PatternBound>,
}

impl EssVerdict {
    pub fn is_ess(&self) -> bool {
        self.status == EssStatus::Ess
    }
}

fn nash_data(game: &SymmetricGame, sigma: &MixedStrategy) -> Result<NashData> {
    let pure_payoffs = game.payoffs_against(sigma)?;
    let value = dot(sigma.probs(), &pure_payoffs);
    let best_responses = game.best_response_set(sigma)?;
    Ok(NashData {
        value,
        pure_payoffs,
        best_responses,
    })
}

/// Decides both ESS conditions for `sigma` exactly.
pub fn verify_ess(game: &SymmetricGame, sigma: &MixedStrategy) -> Result<EssVerdict> {
    let nash = nash_data(game, sigma)?;
    if let NashCheck::Violated { strategy, .. } = game.is_symmetric_nash(sigma)? {
        return Ok(EssVerdict {
            sigma: sigma.clone(),
            status: EssStatus::NotNash,
            nash,
            violator: Some(strategy),
            invasion_witness: Some(MixedStrategy::pure(game.size(), strategy)),
            negativity_proofs: Vec::new(),
        });
    }
    let cone = TangentCone::new(game, sigma)?;
    let mut search = FaceSearch::new(game, &cone)?;
    if let Some(found) = search.first_nonnegative() {
        return Ok(EssVerdict {
            sigma: sigma.clone(),
            status: EssStatus::Invaded,
            nash,
            violator: None,
            invasion_witness: Some(invader_from_direction(sigma, &found.direction)),
            negativity_proofs: Vec::new(),
        });
    }
    let negativity_proofs = search.all_pattern_bounds();
    debug_assert!(negativity_proofs.iter().all(|b| b.maximum.is_negative()));
    Ok(EssVerdict {
        sigma: sigma.clone(),
        status: EssStatus::Ess,
        nash,
        violator: None,
        invasion_witness: None,
        negativity_proofs,
    })
}

/// An alternative best response `σ' ≠ σ` with `u(σ',σ') ≥ u(σ,σ')`, if any.
pub fn invasion_search(game: &SymmetricGame, sigma: &MixedStrategy) -> Result<Option<MixedStrategy>> {
    if !game.is_symmetric_nash(sigma)?.is_nash() {
        return Err(Error::Precondition(
            "invasion search needs a symmetric Nash strategy".into(),
        ));
    }
    let cone = TangentCone::new(game, sigma)?;
    let mut search = FaceSearch::new(game, &cone)?;
    Ok(search
        .first_nonnegative()
        .map(|c| invader_from_direction(sigma, &c.direction)))
}

/// Returns `(u(σ',σ') - u(σ,σ'), zᵀAz)` with `z = σ' - σ`. The two agree
/// whenever both `σ` and `σ'` are supported on best responses to `σ`.
pub fn tangent_identity_check(
    game: &SymmetricGame,
    sigma: &MixedStrategy,
    other: &MixedStrategy,
) -> Result<(Rational, Rational)> {
    game.check_strategy(sigma)?;
    game.check_strategy(other)?;
    let responses = game.best_response_set(sigma)?;
    if !sigma.support().is_subset(&responses) {
        return Err(Error::Precondition(
            "the base strategy is not a symmetric Nash strategy".into(),
        ));
    }
    if !other.support().is_subset(&responses) {
        return Err(Error::Precondition(
            "the alternative strategy uses a pure strategy that is not a best response".into(),
        ));
    }
    let lhs = game.payoff_mixed(other, other)? - game.payoff_mixed(sigma, other)?;
    let z: Vec<Rational> = other
        .probs()
        .iter()
        .zip(sigma.probs())
        .map(|(a, b)| a - b)
        .collect();
    Ok((lhs, quadratic_form(game, &z)))
}

/// Solution set of the indifference system for `support`: all strategies in
/// the support earn the same payoff against σ, σ sums to one and vanishes
/// off the support. Unknowns are σ restricted to the support followed by
/// the common payoff.
pub fn indifference_system(game: &SymmetricGame, support: &SupportSet) -> LinearSolution {
    let idx = support.indices();
    let k = idx.len();
    let mut rows = Vec::with_capacity(k + 1);
    let mut rhs = Vec::with_capacity(k + 1);
    for &i in idx {
        let mut row: Vec<Rational> = idx.iter().map(|&j| game.entry(i, j).clone()).collect();
        row.push(-Rational::one());
        rows.push(row);
        rhs.push(Rational::zero());
    }
    let mut total = vec![Rational::one(); k];
    total.push(Rational::zero());
    rows.push(total);
    rhs.push(Rational::one());
    linalg::solve(&rows, &rhs, k + 1)
}

/// The unique fully mixed solution of the indifference system on `support`,
/// or `None` when there is none or more than one.
pub fn indifference_candidate(game: &SymmetricGame, support: &SupportSet) -> Option<MixedStrategy> {
    candidate_with(game, ScaledMatrix::new(game).as_ref(), support)
}

fn candidate_with(game: &SymmetricGame, scaled: Option<&ScaledMatrix>, support: &SupportSet) -> Option<MixedStrategy> {
    let x = match scaled.map(|s| s.indifference(support)) {
        Some(IntOutcome::Singular) => return None,
        Some(IntOutcome::Unique {
            numerators,
            denominator,
        }) => positive_solution(&numerators, denominator)?,
        Some(IntOutcome::Overflow) | None => rational_candidate(game, support)?,
    };
    Some(embed(game, support, &x))
}

fn rational_candidate(game: &SymmetricGame, support: &SupportSet) -> Option<Vec<Rational>> {
    let LinearSolution::Unique(mut x) = indifference_system(game, support) else {
        return None;
    };
    x.truncate(support.len());
    x.iter().all(|p| p.is_positive()).then_some(x)
}

fn embed(game: &SymmetricGame, support: &SupportSet, x: &[Rational]) -> MixedStrategy {
    let mut probs = vec![Rational::zero(); game.size()];
    for (&i, p) in support.indices().iter().zip(x) {
        probs[i] = p.clone();
    }
    MixedStrategy::new(probs).expect("solution lies in the simplex")
}

/// Options for [`find_ess_with`].
#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    /// Only consider ESS supported inside this set. Invaders are never
    /// restricted.
    pub restriction: Option<SupportSet>,
    /// Largest support size to enumerate.
    pub max_support: Option<usize>,
    /// Stop after the first ESS.
    pub stop_at_first: bool,
}

/// All ESS of `game`, optionally restricted to a support set.
pub fn find_ess(
    game: &SymmetricGame,
    restriction: Option<&SupportSet>,
) -> Result<Vec<(MixedStrategy, EssVerdict)>> {
    find_ess_with(
        game,
        &SearchOptions {
            restriction: restriction.cloned(),
            ..SearchOptions::default()
        },
    )
}

/// Enumerates candidate supports by size then lexicographically; for each,
/// the unique fully mixed solution of its indifference system (if any) is
/// passed to [`verify_ess`]. Supports whose indifference system has a
/// positive-dimensional family of fully mixed solutions are skipped: each
/// member of such a family is invaded by another member with equality.
pub fn find_ess_with(game: &SymmetricGame, options: &SearchOptions) -> Result<Vec<(MixedStrategy, EssVerdict)>> {
    let pool = match &options.restriction {
        Some(r) => {
            if r.is_empty() {
                return Err(Error::Precondition("restriction set is empty".into()));
            }
            if let Some(m) = r.max_index().filter(|&m| m >= game.size()) {
                return Err(Error::IndexOutOfRange {
                    index: m,
                    size: game.size(),
                });
            }
            r.indices().to_vec()
        }
        None => (0..game.size()).collect(),
    };
    let cap = options.max_support.unwrap_or(pool.len()).min(pool.len());
    let scaled = ScaledMatrix::new(game);
    let mut found = Vec::new();
    for size in 1..=cap {
        for combo in Combinations::new(pool.len(), size) {
            let support = SupportSet::new(combo.iter().map(|&c| pool[c]));
            let Some(sigma) = candidate_with(game, scaled.as_ref(), &support) else {
                continue;
            };
            if !game.is_symmetric_nash(&sigma)?.is_nash() {
                continue;
            }
            let verdict = verify_ess(game, &sigma)?;
            if verdict.is_ess() {
                found.push((sigma, verdict));
                if options.stop_at_first {
                    return Ok(found);
                }
            }
        }
    }
    Ok(found)
}

/// k-subsets of `0..n` in lexicographic order.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        if k == 0 {
            self.current = None;
        }
        Some(out)
    }
}
