//! From a MINMAX-CLIQUE instance to a symmetric game with a target set `T`
//! such that the game has an ESS supported in `T` exactly when the instance
//! is a "no" instance.
//!
//! Strategy layout: the `s_ij` block first (row-major over `I × J`), then one
//! strategy `s_v` per vertex in label order, then the sentinel `s_0`.
//!
//! With `c = 2 - 1/|I|` and `e = (k/(k-1))·c`, the payoffs are
//!
//! | row \ column        | `s_ij` same i, same j | same i, other j | other i | `s_v'`          | `s_0` |
//! |---------------------|-----------------------|-----------------|---------|-----------------|-------|
//! | `s_ij`              | 1                     | 0               | 2       | c               | c     |
//! | `s_v`, `v ∈ V_ij`   | c                     | 0               | c       | e if edge, else 0 | 0   |
//! | `s_0`               | c                     | c               | c       | 0               | 0     |

use num_traits::One;

use crate::clique::{MinmaxCliqueInstance, Selector};
use crate::error::{Error, Result};
use crate::game::{MixedStrategy, SupportSet, SymmetricGame};
use crate::rational::{int, Rational};

/// What a strategy of the reduced game stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entity {
    Pair { row: usize, col: usize },
    Vertex(usize),
    Sentinel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub game: SymmetricGame,
    pub target: SupportSet,
    pub index_map: Vec<Entity>,
}

impl ReductionOutput {
    pub fn index_of(&self, entity: Entity) -> Option<usize> {
        self.index_map.iter().position(|e| *e == entity)
    }
}

/// Index arithmetic for the strategy layout of the reduced game.
#[derive(Debug, Clone, Copy)]
pub struct Layout {
    rows: usize,
    cols: usize,
    vertices: usize,
}

impl Layout {
    pub fn of(instance: &MinmaxCliqueInstance) -> Self {
        Layout {
            rows: instance.rows().len(),
            cols: instance.cols().len(),
            vertices: instance.num_vertices(),
        }
    }

    pub fn pair(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    pub fn vertex(&self, v: usize) -> usize {
        self.rows * self.cols + v
    }

    pub fn sentinel(&self) -> usize {
        self.rows * self.cols + self.vertices
    }

    pub fn size(&self) -> usize {
        self.sentinel() + 1
    }
}

/// `2 - 1/|I|`.
pub fn base_payoff(instance: &MinmaxCliqueInstance) -> Rational {
    int(2) - Rational::new(1.into(), (instance.rows().len() as i64).into())
}

/// `(k/(k-1))·(2 - 1/|I|)`, the payoff between adjacent vertex strategies.
pub fn edge_payoff(instance: &MinmaxCliqueInstance) -> Rational {
    let k = instance.k() as i64;
    Rational::new(k.into(), (k - 1).into()) * base_payoff(instance)
}

fn strategy_names(instance: &MinmaxCliqueInstance) -> Vec<String> {
    let short = instance.rows().iter().chain(instance.cols()).all(|l| l.chars().count() == 1);
    let mut names = Vec::new();
    for i in instance.rows() {
        for j in instance.cols() {
            names.push(if short { format!("s{i}{j}") } else { format!("s{i}.{j}") });
        }
    }
    names.extend(instance.vertices().iter().map(|v| format!("s_{v}")));
    names.push("s0".to_string());
    names
}

pub fn reduce(instance: &MinmaxCliqueInstance) -> Result<ReductionOutput> {
    let layout = Layout::of(instance);
    let c = base_payoff(instance);
    let e = edge_payoff(instance);
    let zero = int(0);
    let mut index_map = Vec::with_capacity(layout.size());
    for row in 0..instance.rows().len() {
        for col in 0..instance.cols().len() {
            index_map.push(Entity::Pair { row, col });
        }
    }
    index_map.extend((0..instance.num_vertices()).map(Entity::Vertex));
    index_map.push(Entity::Sentinel);

    let payoff = |a: Entity, b: Entity| -> Rational {
        use Entity::*;
        match (a, b) {
            (Pair { row: i, col: j }, Pair { row: i2, col: j2 }) => {
                if i != i2 {
                    int(2)
                } else if j == j2 {
                    Rational::one()
                } else {
                    zero.clone()
                }
            }
            (Pair { .. }, Vertex(_)) | (Pair { .. }, Sentinel) => c.clone(),
            (Vertex(v), Pair { row: i2, col: j2 }) => {
                let (i, j) = instance.cell(v);
                if i == i2 && j != j2 {
                    zero.clone()
                } else {
                    c.clone()
                }
            }
            (Vertex(v), Vertex(w)) => {
                if v != w && instance.adjacent(v, w) {
                    e.clone()
                } else {
                    zero.clone()
                }
            }
            (Vertex(_), Sentinel) => zero.clone(),
            (Sentinel, Pair { .. }) => c.clone(),
            (Sentinel, Vertex(_)) | (Sentinel, Sentinel) => zero.clone(),
        }
    };
    let payoffs = index_map
        .iter()
        .map(|&a| index_map.iter().map(|&b| payoff(a, b)).collect())
        .collect();
    let game = SymmetricGame::new(strategy_names(instance), payoffs)
        .map_err(|err| Error::InvalidInstance(format!("labels produce clashing strategy names: {err}")))?;
    let target = SupportSet::new(0..instance.rows().len() * instance.cols().len());
    Ok(ReductionOutput {
        game,
        target,
        index_map,
    })
}

fn check_selector(instance: &MinmaxCliqueInstance, selector: &Selector) -> Result<()> {
    if selector.0.len() != instance.rows().len() || selector.0.iter().any(|&j| j >= instance.cols().len()) {
        return Err(Error::Precondition(format!(
            "selector {:?} is not a map from I to J",
            selector.0
        )));
    }
    Ok(())
}

/// Probability `1/|I|` on each selected `s_{i,t(i)}`.
pub fn expected_ess_profile(instance: &MinmaxCliqueInstance, selector: &Selector) -> Result<MixedStrategy> {
    check_selector(instance, selector)?;
    let layout = Layout::of(instance);
    let picks: Vec<usize> = (0..instance.rows().len())
        .map(|i| layout.pair(i, selector.get(i)))
        .collect();
    Ok(MixedStrategy::uniform(layout.size(), &picks))
}

/// Uniform mixture over the vertex strategies of `vertices`.
pub fn uniform_vertex_mix(instance: &MinmaxCliqueInstance, vertices: &[usize]) -> Result<MixedStrategy> {
    let layout = Layout::of(instance);
    if vertices.is_empty() || vertices.iter().any(|&v| v >= instance.num_vertices()) {
        return Err(Error::Precondition("need a nonempty set of existing vertices".into()));
    }
    let picks: Vec<usize> = vertices.iter().map(|&v| layout.vertex(v)).collect();
    if SupportSet::new(picks.iter().copied()).len() != picks.len() {
        return Err(Error::Precondition("vertices must be distinct".into()));
    }
    Ok(MixedStrategy::uniform(layout.size(), &picks))
}

/// The invader built from a clique of size at least `k` in the subgraph
/// selected by `selector`: uniform over the clique's vertex strategies.
pub fn clique_invader(
    instance: &MinmaxCliqueInstance,
    selector: &Selector,
    clique: &[usize],
) -> Result<MixedStrategy> {
    check_selector(instance, selector)?;
    if clique.len() < instance.k() {
        return Err(Error::Precondition(format!(
            "clique has {} vertices, fewer than k = {}",
            clique.len(),
            instance.k()
        )));
    }
    let active = instance.active_vertices(selector);
    if clique.iter().any(|v| !active.contains(v)) {
        return Err(Error::Precondition("clique leaves the selected cells".into()));
    }
    if !instance.is_clique(clique) {
        return Err(Error::Precondition("vertices do not form a clique".into()));
    }
    uniform_vertex_mix(instance, clique)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn edge_payoff_instantiation() {
        // |I| = 4, k = 3: (3/2)(7/4) = 21/8
        let inst = MinmaxCliqueInstance::from_indices(4, 1, &[(0, 0), (1, 0)], &[(0, 1)], 3).unwrap();
        let out = reduce(&inst).unwrap();
        let layout = Layout::of(&inst);
        assert_eq!(out.game.entry(layout.vertex(0), layout.vertex(1)), &ratio(21, 8));
        assert_eq!(out.game.entry(layout.sentinel(), layout.sentinel()), &int(0));
        assert_eq!(out.game.size(), 4 + 2 + 1);
        assert_eq!(out.target, SupportSet::new(0..4));
    }

    #[test]
    fn single_row_instance_is_well_defined() {
        let inst = MinmaxCliqueInstance::from_indices(1, 2, &[(0, 0), (0, 0)], &[(0, 1)], 2).unwrap();
        assert_eq!(base_payoff(&inst), int(1));
        assert_eq!(edge_payoff(&inst), int(2));
        assert!(reduce(&inst).is_ok());
    }

    #[test]
    fn profiles_and_invaders() {
        let inst = MinmaxCliqueInstance::from_indices(3, 2, &[(0, 0), (1, 0), (2, 1)], &[(0, 1)], 2).unwrap();
        let out = reduce(&inst).unwrap();
        let t = Selector(vec![0, 0, 1]);
        let sigma = expected_ess_profile(&inst, &t).unwrap();
        assert_eq!(sigma.support().len(), 3);
        assert!(sigma.support().iter().all(|i| sigma.prob(i) == &ratio(1, 3)));
        assert_eq!(out.game.payoff_mixed(&sigma, &sigma).unwrap(), ratio(5, 3));
        let inv = clique_invader(&inst, &t, &[0, 1]).unwrap();
        assert_eq!(out.game.payoff_mixed(&inv, &inv).unwrap(), ratio(5, 3));
        assert!(clique_invader(&inst, &t, &[0]).is_err());
        assert!(clique_invader(&inst, &Selector(vec![1, 0, 1]), &[0, 1]).is_err());
        assert!(expected_ess_profile(&inst, &Selector(vec![0, 2, 0])).is_err());
    }
}
