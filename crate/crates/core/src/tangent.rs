//! Exact maximization of the payoff quadratic form over the tangent cone.
//!
//! Let `σ` be a symmetric Nash strategy with best-response set `B`. Every
//! alternative best response is `σ' = σ + z` with `z` in the cone
//!
//! ```text
//! C = { z supported on B : Σ z = 0, z_i ≥ 0 for i ∈ B \ support(σ) }
//! ```
//!
//! and `u(σ',σ') - u(σ,σ') = zᵀAz` because every `s ∈ B` earns the same
//! payoff against `σ`. Condition two of the ESS definition is therefore the
//! statement that `zᵀAz < 0` on `C \ {0}`.
//!
//! A nonzero `z ∈ C` splits into a positive part on `P⁺ ⊆ B` and a negative
//! part on `P⁻ ⊆ support(σ)`, disjoint, both nonempty. Scaling so that the
//! positive part sums to one gives `z = x - y` with `x ∈ Δ(P⁺)`, `y ∈ Δ(P⁻)`.
//! It suffices to look at the maximal patterns, where every index of `B`
//! is assigned a side, because the smaller patterns are faces of those.
//!
//! On a product of simplices the maximum of a quadratic form sits in the
//! relative interior of some face `Δ(F⁺) × Δ(F⁻)`, at a point where the
//! gradient is orthogonal to the face. Those stationarity conditions are
//! linear:
//!
//! ```text
//! (M z)_i = λ  for i ∈ F⁺,   (M z)_j = μ  for j ∈ F⁻,   Σ x = Σ y = 1
//! ```
//!
//! with `M = (A + Aᵀ)/2`, and at any solution `zᵀMz = λ - μ`. The stationary
//! set of a face is affine and the form is constant on it, so one feasible
//! stationary point per face suffices. Faces with a unique stationary point
//! are checked by sign; positive-dimensional stationary sets go through an
//! exact feasibility program.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{MixedStrategy, SupportSet, SymmetricGame};
use crate::linalg::{self, LinearSolution};
use crate::lp::{LinearProgram, Relation, VarKind};
use crate::rational::Rational;

/// The cone of admissible invasion directions at `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentCone {
    pub base: MixedStrategy,
    pub responses: SupportSet,
    pub free_indices: SupportSet,
    pub nonneg_indices: SupportSet,
}

impl TangentCone {
    pub fn new(game: &SymmetricGame, base: &MixedStrategy) -> Result<Self> {
        let responses = game.best_response_set(base)?;
        let support = base.support();
        let free_indices = SupportSet::new(responses.iter().filter(|&i| support.contains(i)));
        let nonneg_indices = responses.difference(&support);
        Ok(TangentCone {
            base: base.clone(),
            responses,
            free_indices,
            nonneg_indices,
        })
    }

    pub fn contains(&self, z: &[Rational]) -> bool {
        z.len() == self.base.len()
            && z.iter().sum::<Rational>().is_zero()
            && z.iter()
                .enumerate()
                .all(|(i, v)| v.is_zero() || self.responses.contains(i))
            && self.nonneg_indices.iter().all(|i| !z[i].is_negative())
    }
}

/// A maximal sign pattern: `positive ∪ negative = B`, `negative ⊆ support(σ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    pub positive: SupportSet,
    pub negative: SupportSet,
}

/// The exact maximum of `zᵀAz` over the normalized slice of one pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternBound {
    pub pattern: SignPattern,
    pub maximum: Rational,
    /// A maximizer `z` (length = number of strategies).
    pub argmax: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FaceCandidate {
    pub value: Rational,
    pub direction: Vec<Rational>,
}

/// Face enumeration over the sign-pattern polytopes of one tangent cone.
pub(crate) struct FaceSearch {
    n: usize,
    /// global index of each local position
    responses: Vec<usize>,
    /// local mask of indices that may go negative
    negative_mask: u64,
    /// symmetrized payoff matrix on B
    sym: Vec<Vec<Rational>>,
    cache: HashMap<(u64, u64), Option<FaceCandidate>>,
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    // nonempty submasks, in decreasing numeric order
    let mut sub = mask;
    let mut done = mask == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let current = sub;
        if sub == 0 {
            done = true;
            return None;
        }
        sub = (sub - 1) & mask;
        if sub == 0 {
            done = true;
        }
        Some(current)
    })
}

/// Bits of `mask`, highest first: the weight order of `reverse_bits`.
fn reversed_bits(mask: u64) -> Vec<u32> {
    (0..64).rev().filter(|b| mask >> b & 1 == 1).collect()
}

fn spread(counter: u64, bits: &[u32]) -> u64 {
    bits.iter()
        .enumerate()
        .filter(|(j, _)| counter >> j & 1 == 1)
        .fold(0, |m, (_, b)| m | 1 << b)
}

/// Nonempty submasks of `mask` in increasing `reverse_bits` order.
fn ordered_submasks(mask: u64) -> impl Iterator<Item = u64> {
    let bits = reversed_bits(mask);
    let end = 1u64 << bits.len();
    (1..end).map(move |c| spread(c, &bits))
}

/// Submasks of `mask` with `k ≥ 1` bits in increasing `reverse_bits` order
/// (Gosper's hack on the counter).
fn ordered_subsets_of_size(mask: u64, k: usize) -> impl Iterator<Item = u64> {
    let bits = reversed_bits(mask);
    let end = 1u64 << bits.len();
    let mut next = if k == 0 || k > bits.len() { end } else { (1u64 << k) - 1 };
    std::iter::from_fn(move || {
        if next >= end {
            return None;
        }
        let c = next;
        let low = c & c.wrapping_neg();
        let ripple = c + low;
        next = (((ripple ^ c) >> 2) / low) | ripple;
        Some(spread(c, &bits))
    })
}

impl FaceSearch {
    pub fn new(game: &SymmetricGame, cone: &TangentCone) -> Result<Self> {
        let responses: Vec<usize> = cone.responses.iter().collect();
        if responses.len() > 63 {
            return Err(Error::Precondition(format!(
                "best-response set of size {} is beyond the supported 63",
                responses.len()
            )));
        }
        let negative_mask = responses
            .iter()
            .enumerate()
            .filter(|(_, g)| cone.free_indices.contains(**g))
            .fold(0u64, |m, (l, _)| m | 1 << l);
        let half = Rational::new(1.into(), 2.into());
        let sym = responses
            .iter()
            .map(|&i| {
                responses
                    .iter()
                    .map(|&j| (game.entry(i, j) + game.entry(j, i)) * &half)
                    .collect()
            })
            .collect();
        Ok(FaceSearch {
            n: game.size(),
            responses,
            negative_mask,
            sym,
            cache: HashMap::new(),
        })
    }

    fn full_mask(&self) -> u64 {
        if self.responses.is_empty() {
            0
        } else {
            u64::MAX >> (64 - self.responses.len())
        }
    }

    /// Every maximal pattern.
    pub fn patterns(&self) -> Vec<(u64, u64)> {
        let full = self.full_mask();
        let mut out: Vec<(u64, u64)> = submasks(self.negative_mask)
            .filter(|&neg| neg != full)
            .map(|neg| (full & !neg, neg))
            .collect();
        out.sort_by_key(|&(p, n)| (n.count_ones(), n.reverse_bits(), p));
        out
    }

    /// Every face (F⁺, F⁻), by size, then by F⁻ and F⁺ in `reverse_bits`
    /// order. Generated lazily so that an early exit stays cheap.
    fn faces(&self) -> impl Iterator<Item = (u64, u64)> {
        let full = self.full_mask();
        let negative_mask = self.negative_mask;
        (2..=self.responses.len()).flat_map(move |size| {
            ordered_submasks(negative_mask)
                .filter(move |neg| (neg.count_ones() as usize) < size)
                .flat_map(move |neg| {
                    ordered_subsets_of_size(full & !neg, size - neg.count_ones() as usize).map(move |pos| (pos, neg))
                })
        })
    }

    /// Scans faces smallest-first and returns the first stationary point with
    /// a nonnegative value, or `None` after exhausting every face.
    pub fn first_nonnegative(&mut self) -> Option<FaceCandidate> {
        for (pos, neg) in self.faces() {
            if let Some(c) = self.face(pos, neg) {
                if !c.value.is_negative() {
                    return Some(c.clone());
                }
            }
        }
        None
    }

    /// Maximum over the polytope of one pattern.
    pub fn pattern_bound(&mut self, pos: u64, neg: u64) -> PatternBound {
        let mut best: Option<FaceCandidate> = None;
        for n in submasks(neg) {
            for p in submasks(pos) {
                if let Some(c) = self.face(p, n) {
                    if best.as_ref().map_or(true, |b| c.value > b.value) {
                        best = Some(c.clone());
                    }
                }
            }
        }
        let best = best.expect("every pattern polytope has at least one vertex");
        PatternBound {
            pattern: SignPattern {
                positive: self.to_global(pos),
                negative: self.to_global(neg),
            },
            maximum: best.value,
            argmax: best.direction,
        }
    }

    pub fn all_pattern_bounds(&mut self) -> Vec<PatternBound> {
        self.patterns()
            .into_iter()
            .map(|(p, n)| self.pattern_bound(p, n))
            .collect()
    }

    pub fn to_global(&self, mask: u64) -> SupportSet {
        SupportSet::new(mask_indices(mask).into_iter().map(|l| self.responses[l]))
    }

    pub fn local_mask(&self, set: &SupportSet) -> Option<u64> {
        let mut mask = 0u64;
        for g in set.iter() {
            let l = self.responses.iter().position(|&r| r == g)?;
            mask |= 1 << l;
        }
        Some(mask)
    }

    fn face(&mut self, pos: u64, neg: u64) -> Option<&FaceCandidate> {
        if !self.cache.contains_key(&(pos, neg)) {
            let c = self.solve_face(pos, neg);
            self.cache.insert((pos, neg), c);
        }
        self.cache[&(pos, neg)].as_ref()
    }

    fn solve_face(&self, pos: u64, neg: u64) -> Option<FaceCandidate> {
        let plus = mask_indices(pos);
        let minus = mask_indices(neg);
        let (p, q) = (plus.len(), minus.len());
        if p == 1 && q == 1 {
            // z = e_a - e_b
            let (a, b) = (plus[0], minus[0]);
            let value = &self.sym[a][a] + &self.sym[b][b] - &self.sym[a][b] - &self.sym[a][b];
            return Some(self.candidate(&plus, &minus, &[Rational::one()], &[Rational::one()], value));
        }
        let cols = p + q + 2;
        let (lambda, mu) = (p + q, p + q + 1);
        let mut rows = Vec::with_capacity(cols);
        let mut rhs = Vec::with_capacity(cols);
        for (k, &i) in plus.iter().chain(&minus).enumerate() {
            let mut row = Vec::with_capacity(cols);
            row.extend(plus.iter().map(|&a| self.sym[i][a].clone()));
            row.extend(minus.iter().map(|&b| -self.sym[i][b].clone()));
            row.push(if k < p { -Rational::one() } else { Rational::zero() });
            row.push(if k < p { Rational::zero() } else { -Rational::one() });
            rows.push(row);
            rhs.push(Rational::zero());
        }
        let mut sum_x = vec![Rational::zero(); cols];
        let mut sum_y = vec![Rational::zero(); cols];
        for v in sum_x[..p].iter_mut() {
            *v = Rational::one();
        }
        for v in sum_y[p..p + q].iter_mut() {
            *v = Rational::one();
        }
        rows.push(sum_x);
        rows.push(sum_y);
        rhs.push(Rational::one());
        rhs.push(Rational::one());

        let point = match linalg::solve(&rows, &rhs, cols) {
            LinearSolution::Inconsistent => return None,
            LinearSolution::Unique(x) => {
                if x[..p + q].iter().any(|v| v.is_negative()) {
                    return None;
                }
                x
            }
            LinearSolution::Family { particular, .. } => {
                if particular[..p + q].iter().all(|v| !v.is_negative()) {
                    particular
                } else {
                    let mut lp = LinearProgram::new();
                    let mut vars = lp.add_vars(p + q, VarKind::NonNegative);
                    vars.extend(lp.add_vars(2, VarKind::Free));
                    for (row, b) in rows.iter().zip(&rhs) {
                        let coeffs = row
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(j, c)| (vars[j], c.clone()))
                            .collect();
                        lp.add_constraint(coeffs, Relation::Eq, b.clone());
                    }
                    lp.find_feasible()?
                }
            }
        };
        let value = &point[lambda] - &point[mu];
        Some(self.candidate(&plus, &minus, &point[..p], &point[p..p + q], value))
    }

    fn candidate(
        &self,
        plus: &[usize],
        minus: &[usize],
        x: &[Rational],
        y: &[Rational],
        value: Rational,
    ) -> FaceCandidate {
        let mut direction = vec![Rational::zero(); self.n];
        for (&l, v) in plus.iter().zip(x) {
            direction[self.responses[l]] = v.clone();
        }
        for (&l, v) in minus.iter().zip(y) {
            direction[self.responses[l]] = -v.clone();
        }
        FaceCandidate { value, direction }
    }
}

/// `zᵀAz` for a direction vector.
pub fn quadratic_form(game: &SymmetricGame, z: &[Rational]) -> Rational {
    crate::game::bilinear(game.matrix(), z, z)
}

/// Recomputes the maximum over one pattern from scratch. Used when
/// rechecking certificates.
pub fn recompute_pattern_bound(
    game: &SymmetricGame,
    sigma: &MixedStrategy,
    pattern: &SignPattern,
) -> Result<PatternBound> {
    let cone = TangentCone::new(game, sigma)?;
    let mut search = FaceSearch::new(game, &cone)?;
    let (Some(pos), Some(neg)) = (search.local_mask(&pattern.positive), search.local_mask(&pattern.negative)) else {
        return Err(Error::Precondition("pattern is not inside the best-response set".into()));
    };
    if pos == 0 || neg == 0 || pos & neg != 0 || neg & !search.negative_mask != 0 {
        return Err(Error::Precondition("malformed sign pattern".into()));
    }
    Ok(search.pattern_bound(pos, neg))
}

/// Rescales a nonzero cone direction so that `σ + εz` stays in the simplex,
/// taking the largest admissible step.
pub(crate) fn invader_from_direction(sigma: &MixedStrategy, z: &[Rational]) -> MixedStrategy {
    let step = z
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_negative())
        .map(|(i, v)| sigma.prob(i) / -v.clone())
        .min()
        .expect("direction has a negative part");
    let probs = sigma
        .probs()
        .iter()
        .zip(z)
        .map(|(p, v)| p + &step * v)
        .collect();
    MixedStrategy::new(probs).expect("step keeps the point in the simplex")
}
