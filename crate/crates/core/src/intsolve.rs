//! Fraction-free Gauss–Jordan elimination over `i128` for the square
//! indifference systems, with a rational fallback on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::game::{SupportSet, SymmetricGame};
use crate::rational::Rational;

/// The payoff matrix scaled by a common denominator, when every scaled entry
/// fits in an `i64`.
pub(crate) struct ScaledMatrix {
    entries: Vec<Vec<i128>>,
}

pub(crate) enum IntOutcome {
    /// Singular system: no unique solution.
    Singular,
    /// Numerators over a common denominator (the last value is the payoff
    /// and is dropped).
    Unique { numerators: Vec<i128>, denominator: i128 },
    Overflow,
}

impl ScaledMatrix {
    pub fn new(game: &SymmetricGame) -> Option<Self> {
        let n = game.size();
        let mut lcm = BigInt::one();
        for i in 0..n {
            for j in 0..n {
                lcm = lcm.lcm(game.entry(i, j).denom());
            }
        }
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let e = game.entry(i, j);
                let scaled = e.numer() * (&lcm / e.denom());
                row.push(scaled.to_i64()? as i128);
            }
            entries.push(row);
        }
        Some(ScaledMatrix { entries })
    }

    /// Solves `A[S,S] x − v·1 = 0, Σx = 1` with unknowns `(x, v)`.
    pub fn indifference(&self, support: &SupportSet) -> IntOutcome {
        let idx = support.indices();
        let k = idx.len();
        let n = k + 1;
        let mut m: Vec<Vec<i128>> = Vec::with_capacity(n);
        for &i in idx {
            let mut row: Vec<i128> = idx.iter().map(|&j| self.entries[i][j]).collect();
            row.push(-1);
            row.push(0);
            m.push(row);
        }
        let mut total = vec![1i128; k];
        total.push(0);
        total.push(1);
        m.push(total);

        let mut prev: i128 = 1;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| m[r][c] != 0) else {
                return IntOutcome::Singular;
            };
            m.swap(c, p);
            let pivot = m[c][c];
            for r in 0..n {
                if r == c {
                    continue;
                }
                let factor = m[r][c];
                for j in 0..=n {
                    if j == c {
                        continue;
                    }
                    let Some(value) = pivot
                        .checked_mul(m[r][j])
                        .and_then(|a| factor.checked_mul(m[c][j]).and_then(|b| a.checked_sub(b)))
                    else {
                        return IntOutcome::Overflow;
                    };
                    debug_assert_eq!(value % prev, 0);
                    m[r][j] = value / prev;
                }
                m[r][c] = 0;
            }
            prev = pivot;
        }
        let numerators = (0..k).map(|r| m[r][n]).collect();
        IntOutcome::Unique {
            numerators,
            denominator: prev,
        }
    }
}

/// Turns an integer solution into rationals if every entry is positive.
pub(crate) fn positive_solution(numerators: &[i128], denominator: i128) -> Option<Vec<Rational>> {
    let sign = denominator.signum();
    if numerators.iter().any(|&x| x.signum() != sign) {
        return None;
    }
    let d = BigInt::from(denominator);
    let out: Vec<Rational> = numerators
        .iter()
        .map(|&x| Rational::new(BigInt::from(x), d.clone()))
        .collect();
    debug_assert!(out.iter().all(|p| p.is_positive() && !p.is_zero()));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ess::indifference_system;
    use crate::game::SupportSet;
    use crate::linalg::LinearSolution;
    use crate::rational::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_rational_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(1..=5);
            let matrix: Vec<Vec<Rational>> = (0..n)
                .map(|_| (0..n).map(|_| ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3))).collect())
                .collect();
            let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
            let game = SymmetricGame::new(names, matrix).unwrap();
            let scaled = ScaledMatrix::new(&game).unwrap();
            for mask in 1u32..(1 << n) {
                let support = SupportSet::new((0..n).filter(|i| mask >> i & 1 == 1));
                let exact = indifference_system(&game, &support);
                match (scaled.indifference(&support), exact) {
                    (IntOutcome::Singular, LinearSolution::Unique(_)) => panic!("missed unique solution"),
                    (IntOutcome::Unique { numerators, denominator }, LinearSolution::Unique(x)) => {
                        for (num, p) in numerators.iter().zip(&x) {
                            assert_eq!(Rational::new(BigInt::from(*num), BigInt::from(denominator)), *p);
                        }
                    }
                    (IntOutcome::Unique { .. }, _) => panic!("singular system reported unique"),
                    (IntOutcome::Overflow, _) => panic!("overflow on tiny entries"),
                    (IntOutcome::Singular, _) => {}
                }
            }
        }
    }
}
