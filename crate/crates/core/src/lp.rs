//! A small dense two-phase simplex over exact rationals.
//!
//! Pivoting follows Bland's rule, so the method terminates on degenerate
//! problems; that matters here because the programs built by the ESS engine
//! are degenerate almost by construction.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
struct Constraint {
    coeffs: Vec<(usize, Rational)>,
    relation: Relation,
    rhs: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { point: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

/// `maximize c·x` subject to linear constraints.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    vars: Vec<VarKind>,
    constraints: Vec<Constraint>,
    objective: Vec<(usize, Rational)>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, kind: VarKind) -> usize {
        self.vars.push(kind);
        self.vars.len() - 1
    }

    pub fn add_vars(&mut self, count: usize, kind: VarKind) -> Vec<usize> {
        (0..count).map(|_| self.add_var(kind)).collect()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        debug_assert!(coeffs.iter().all(|(v, _)| *v < self.vars.len()));
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_objective(&mut self, coeffs: Vec<(usize, Rational)>) {
        self.objective = coeffs;
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// Any feasible point, or `None`.
    pub fn find_feasible(&self) -> Option<Vec<Rational>> {
        let mut form = StandardForm::build(self);
        if !form.phase_one() {
            return None;
        }
        Some(form.extract(self))
    }

    pub fn maximize(&self) -> LpOutcome {
        let mut form = StandardForm::build(self);
        if !form.phase_one() {
            return LpOutcome::Infeasible;
        }
        let mut cost = vec![Rational::zero(); form.width];
        for (v, c) in &self.objective {
            let (pos, neg) = form.columns[*v];
            cost[pos] += c;
            if let Some(neg) = neg {
                cost[neg] -= c;
            }
        }
        let allowed: Vec<bool> = (0..form.width).map(|j| j < form.first_artificial).collect();
        if !form.run(&cost, &allowed) {
            return LpOutcome::Unbounded;
        }
        let point = form.extract(self);
        let value = self
            .objective
            .iter()
            .map(|(v, c)| c * &point[*v])
            .fold(Rational::zero(), |a, b| a + b);
        LpOutcome::Optimal { point, value }
    }
}

struct StandardForm {
    /// rows of [A | b]
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
    first_artificial: usize,
    /// for each user variable: (positive column, negative column if free)
    columns: Vec<(usize, Option<usize>)>,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let mut columns = Vec::with_capacity(lp.vars.len());
        let mut width = 0;
        for kind in &lp.vars {
            match kind {
                VarKind::NonNegative => {
                    columns.push((width, None));
                    width += 1;
                }
                VarKind::Free => {
                    columns.push((width, Some(width + 1)));
                    width += 2;
                }
            }
        }
        let slack_count = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let first_slack = width;
        let first_artificial = first_slack + slack_count;
        let m = lp.constraints.len();
        let total = first_artificial + m;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = first_slack;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Rational::zero(); total + 1];
            for (v, a) in &c.coeffs {
                let (pos, neg) = columns[*v];
                row[pos] += a;
                if let Some(neg) = neg {
                    row[neg] -= a;
                }
            }
            match c.relation {
                Relation::Le => {
                    row[slack] = Rational::from_integer(1.into());
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = Rational::from_integer((-1).into());
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[total] = c.rhs.clone();
            if row[total].is_negative() {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
            }
            row[first_artificial + i] = Rational::from_integer(1.into());
            rows.push(row);
            basis.push(first_artificial + i);
        }
        StandardForm {
            rows,
            basis,
            width: total,
            first_artificial,
            columns,
        }
    }

    /// Returns false when infeasible. On success every artificial column is
    /// out of the basis (redundant rows are dropped).
    fn phase_one(&mut self) -> bool {
        let mut cost = vec![Rational::zero(); self.width];
        for c in cost[self.first_artificial..].iter_mut() {
            *c = Rational::from_integer((-1).into());
        }
        let allowed = vec![true; self.width];
        let bounded = self.run(&cost, &allowed);
        debug_assert!(bounded);
        let infeasible = self
            .basis
            .iter()
            .zip(&self.rows)
            .any(|(&b, row)| b >= self.first_artificial && !row[self.width].is_zero());
        if infeasible {
            return false;
        }
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        true
    }

    /// Maximizes `cost` over the current basis, entering only `allowed`
    /// columns. Returns false if unbounded.
    fn run(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.width).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = -cost[j].clone();
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if !cost[b].is_zero() && !row[j].is_zero() {
                        reduced += &cost[b] * &row[j];
                    }
                }
                reduced.is_negative()
            });
            let Some(j) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((i, _)) = leave else {
                return false;
            };
            self.pivot(i, j);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn extract(&self, lp: &LinearProgram) -> Vec<Rational> {
        let mut col_values = vec![Rational::zero(); self.width];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            col_values[b] = row[self.width].clone();
        }
        lp.vars
            .iter()
            .enumerate()
            .map(|(v, _)| {
                let (pos, neg) = self.columns[v];
                let mut x = col_values[pos].clone();
                if let Some(neg) = neg {
                    x -= &col_values[neg];
                }
                x
            })
            .collect()
    }
}
