//! Exact solution of linear systems by reduction to row echelon form.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// The solution set of `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution {
    Inconsistent,
    Unique(Vec<Rational>),
    /// An affine family of dimension `dimension`; `particular` is one member
    /// (free variables set to zero).
    Family {
        particular: Vec<Rational>,
        dimension: usize,
    },
}

impl LinearSolution {
    pub fn is_consistent(&self) -> bool {
        !matches!(self, LinearSolution::Inconsistent)
    }
}

/// Solves `A x = b` exactly. `rows` holds the rows of `A`; every row must
/// have `cols` entries.
pub fn solve(rows: &[Vec<Rational>], rhs: &[Rational], cols: usize) -> LinearSolution {
    assert_eq!(rows.len(), rhs.len());
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            debug_assert_eq!(row.len(), cols);
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = reduce(&mut aug, cols);
    let rank = pivots.len();
    if aug[rank..].iter().any(|row| !row[cols].is_zero()) {
        return LinearSolution::Inconsistent;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    if rank == cols {
        LinearSolution::Unique(x)
    } else {
        LinearSolution::Family {
            particular: x,
            dimension: cols - rank,
        }
    }
}

/// In-place reduced row echelon form over the first `cols` columns. Returns
/// the pivot column of each of the leading rows.
fn reduce(aug: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == aug.len() {
            break;
        }
        let Some(p) = (row..aug.len()).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(row, p);
        let inv = Rational::one() / &aug[row][col];
        if !inv.is_one() {
            for v in aug[row][col..].iter_mut() {
                *v *= &inv;
            }
        }
        let (head, tail) = aug.split_at_mut(row);
        let (pivot_row, rest) = tail.split_first_mut().unwrap();
        for other in head.iter_mut().chain(rest.iter_mut()) {
            if other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (v, p) in other[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn unique_solution() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let b = vec![int(3), int(5)];
        assert_eq!(
            solve(&a, &b, 2),
            LinearSolution::Unique(vec![ratio(4, 5), ratio(7, 5)])
        );
    }

    #[test]
    fn inconsistent_system() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let b = vec![int(1), int(3)];
        assert_eq!(solve(&a, &b, 2), LinearSolution::Inconsistent);
    }

    #[test]
    fn underdetermined_family() {
        let a = m(&[&[1, 1, 1]]);
        let b = vec![int(1)];
        match solve(&a, &b, 3) {
            LinearSolution::Family {
                particular,
                dimension,
            } => {
                assert_eq!(dimension, 2);
                assert_eq!(particular, vec![int(1), int(0), int(0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn redundant_rows_are_fine() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        let b = vec![int(1), int(2), int(3)];
        assert_eq!(solve(&a, &b, 2), LinearSolution::Unique(vec![int(1), int(2)]));
    }
}
