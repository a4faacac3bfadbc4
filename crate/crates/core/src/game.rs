//! Symmetric two-player games, mixed strategies and best responses.
//!
//! A [`SymmetricGame`] stores only the row player's payoffs `u(s, s')`; the
//! column player's payoffs are the transpose. Strategy names are labels for
//! humans and file formats, every algorithm works on indices.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation, VarKind};
use crate::rational::{format_rational, Rational};

/// A sorted set of strategy indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SupportSet(v)
    }

    pub fn full(n: usize) -> Self {
        SupportSet((0..n).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    pub fn is_disjoint(&self, other: &SupportSet) -> bool {
        self.iter().all(|i| !other.contains(i))
    }

    pub fn difference(&self, other: &SupportSet) -> SupportSet {
        SupportSet(self.iter().filter(|&i| !other.contains(i)).collect())
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().copied()
    }
}

impl FromIterator<usize> for SupportSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        SupportSet::new(iter)
    }
}

/// A probability vector over a game's pure strategies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedStrategy {
    probs: Vec<Rational>,
}

impl MixedStrategy {
    /// Validates non-negativity and that the entries sum to exactly one.
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidStrategy("empty probability vector".into()));
        }
        if let Some(p) = probs.iter().find(|p| p.is_negative()) {
            return Err(Error::InvalidStrategy(format!("negative probability {}", format_rational(p))));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidStrategy(format!(
                "probabilities sum to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(MixedStrategy { probs })
    }

    pub fn pure(n: usize, index: usize) -> Self {
        assert!(index < n, "pure strategy index {index} out of range {n}");
        let mut probs = vec![Rational::zero(); n];
        probs[index] = Rational::one();
        MixedStrategy { probs }
    }

    /// Uniform over `indices` (which must be nonempty, in range and distinct).
    pub fn uniform(n: usize, indices: &[usize]) -> Self {
        let set = SupportSet::new(indices.iter().copied());
        assert!(!set.is_empty() && set.len() == indices.len(), "uniform needs distinct indices");
        assert!(set.max_index().unwrap() < n);
        let w = Rational::new(1.into(), (set.len() as i64).into());
        let mut probs = vec![Rational::zero(); n];
        for i in set.iter() {
            probs[i] = w.clone();
        }
        MixedStrategy { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, index: usize) -> &Rational {
        &self.probs[index]
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<Rational> {
        self.probs
    }

    pub fn support(&self) -> SupportSet {
        SupportSet(
            self.probs
                .iter()
                .enumerate()
                .filter(|(_, p)| p.is_positive())
                .map(|(i, _)| i)
                .collect(),
        )
    }

    /// `alpha * self + (1 - alpha) * other`.
    pub fn mix(&self, other: &MixedStrategy, alpha: &Rational) -> Result<MixedStrategy> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        let beta = Rational::one() - alpha;
        MixedStrategy::new(
            self.probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| alpha * a + &beta * b)
                .collect(),
        )
    }
}

impl fmt::Display for MixedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.probs.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Outcome of the symmetric-Nash test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NashCheck {
    Nash,
    /// `strategy` earns `payoff > value = u(σ,σ)` against σ.
    Violated {
        strategy: usize,
        payoff: Rational,
        value: Rational,
    },
}

impl NashCheck {
    pub fn is_nash(&self) -> bool {
        matches!(self, NashCheck::Nash)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricGame {
    names: Vec<String>,
    payoffs: Vec<Vec<Rational>>,
}

impl SymmetricGame {
    pub fn new(names: Vec<String>, payoffs: Vec<Vec<Rational>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidGame("a game needs at least one strategy".into()));
        }
        if payoffs.len() != n || payoffs.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGame(format!("payoff matrix must be {n}x{n}")));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidGame(format!("duplicate strategy name {name:?}")));
            }
        }
        Ok(SymmetricGame { names, payoffs })
    }

    /// Convenience constructor from integer payoffs.
    pub fn from_integers(names: &[&str], rows: &[&[i64]]) -> Result<Self> {
        SymmetricGame::new(
            names.iter().map(|s| s.to_string()).collect(),
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.payoffs
    }

    /// `u(s, s')` without bounds checking beyond the slice index.
    pub fn entry(&self, s: usize, t: usize) -> &Rational {
        &self.payoffs[s][t]
    }

    /// `u(s, s')` for pure strategies.
    pub fn payoff_pure(&self, s: usize, t: usize) -> Result<Rational> {
        let n = self.size();
        for index in [s, t] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, size: n });
            }
        }
        Ok(self.payoffs[s][t].clone())
    }

    pub fn check_strategy(&self, sigma: &MixedStrategy) -> Result<()> {
        if sigma.len() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: sigma.len(),
            });
        }
        Ok(())
    }

    /// `u(σ, σ') = Σ σ(s) σ'(s') u(s, s')`.
    pub fn payoff_mixed(&self, sigma: &MixedStrategy, other: &MixedStrategy) -> Result<Rational> {
        self.check_strategy(sigma)?;
        self.check_strategy(other)?;
        Ok(bilinear(&self.payoffs, sigma.probs(), other.probs()))
    }

    /// `u(s, σ)` for every pure strategy `s`.
    pub fn payoffs_against(&self, sigma: &MixedStrategy) -> Result<Vec<Rational>> {
        self.check_strategy(sigma)?;
        Ok(matvec(&self.payoffs, sigma.probs()))
    }

    /// Pure strategies maximizing `u(s, σ)`.
    pub fn best_response_set(&self, sigma: &MixedStrategy) -> Result<SupportSet> {
        let payoffs = self.payoffs_against(sigma)?;
        let best = payoffs.iter().max().expect("nonempty game");
        Ok(SupportSet(
            payoffs
                .iter()
                .enumerate()
                .filter(|(_, p)| *p == best)
                .map(|(i, _)| i)
                .collect(),
        ))
    }

    /// Checks `u(s, σ) ≤ u(σ, σ)` for all pure `s`; on failure reports the
    /// first strategy with the largest payoff against σ.
    pub fn is_symmetric_nash(&self, sigma: &MixedStrategy) -> Result<NashCheck> {
        let payoffs = self.payoffs_against(sigma)?;
        let value = dot(sigma.probs(), &payoffs);
        let (best, payoff) = payoffs
            .iter()
            .enumerate()
            .fold(None::<(usize, &Rational)>, |acc, (i, p)| match acc {
                Some((_, q)) if q >= p => acc,
                _ => Some((i, p)),
            })
            .expect("nonempty game");
        if *payoff > value {
            Ok(NashCheck::Violated {
                strategy: best,
                payoff: payoff.clone(),
                value,
            })
        } else {
            Ok(NashCheck::Nash)
        }
    }

    /// A mixed strategy `μ` against which `s` is the unique best response,
    /// found by maximizing the smallest margin `u(s,μ) - u(s',μ)` over the
    /// simplex. `None` when the optimal margin is not positive.
    pub fn unique_best_response_witness(&self, s: usize) -> Result<Option<MixedStrategy>> {
        let n = self.size();
        if s >= n {
            return Err(Error::IndexOutOfRange { index: s, size: n });
        }
        if n == 1 {
            return Ok(Some(MixedStrategy::pure(1, 0)));
        }
        let mut lp = LinearProgram::new();
        let mu = lp.add_vars(n, VarKind::NonNegative);
        let margin = lp.add_var(VarKind::Free);
        lp.add_constraint(mu.iter().map(|&v| (v, Rational::one())).collect(), Relation::Eq, Rational::one());
        for other in (0..n).filter(|&o| o != s) {
            // Σ_j (u(s,j) - u(other,j)) μ_j - m ≥ 0
            let mut coeffs: Vec<(usize, Rational)> = (0..n)
                .map(|j| (mu[j], &self.payoffs[s][j] - &self.payoffs[other][j]))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            coeffs.push((margin, -Rational::one()));
            lp.add_constraint(coeffs, Relation::Ge, Rational::zero());
        }
        lp.set_objective(vec![(margin, Rational::one())]);
        match lp.maximize() {
            LpOutcome::Optimal { point, value } if value.is_positive() => {
                let probs = point[..n].to_vec();
                Ok(Some(MixedStrategy::new(probs).expect("simplex constraint holds")))
            }
            LpOutcome::Optimal { .. } => Ok(None),
            other => unreachable!("margin program is feasible and bounded, got {other:?}"),
        }
    }

    /// The game restricted to `subset`, strategies renumbered in order.
    pub fn restrict(&self, subset: &SupportSet) -> Result<SymmetricGame> {
        if subset.is_empty() {
            return Err(Error::Precondition("cannot restrict to an empty strategy set".into()));
        }
        if let Some(m) = subset.max_index().filter(|&m| m >= self.size()) {
            return Err(Error::IndexOutOfRange {
                index: m,
                size: self.size(),
            });
        }
        SymmetricGame::new(
            subset.iter().map(|i| self.names[i].clone()).collect(),
            subset
                .iter()
                .map(|i| subset.iter().map(|j| self.payoffs[i][j].clone()).collect())
                .collect(),
        )
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub(crate) fn matvec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub(crate) fn bilinear(m: &[Vec<Rational>], a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (row, x) in m.iter().zip(a) {
        if !x.is_zero() {
            acc += x * dot(row, b);
        }
    }
    acc
}
