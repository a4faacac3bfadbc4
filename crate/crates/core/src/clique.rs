//! MINMAX-CLIQUE: for every selector `t: I → J`, does the subgraph induced
//! on the union of the selected cells `V_{i,t(i)}` contain a clique of size
//! at least `k`?
//!
//! Vertices are kept in sorted label order; this order is also the order of
//! the vertex strategies produced by [`crate::reduction`].

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// A choice of one column `t(i)` per row `i`, stored as column indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Selector(pub Vec<usize>);

impl Selector {
    pub fn get(&self, row: usize) -> usize {
        self.0[row]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinmaxCliqueInstance {
    rows: Vec<String>,
    cols: Vec<String>,
    vertices: Vec<String>,
    /// (row, col) cell of each vertex
    cells: Vec<(usize, usize)>,
    adjacency: Vec<Vec<bool>>,
    k: usize,
}

impl MinmaxCliqueInstance {
    /// Builds and validates an instance. `partition` maps every vertex label
    /// to its `(i, j)` cell labels; vertices end up in sorted label order.
    pub fn new(
        rows: Vec<String>,
        cols: Vec<String>,
        partition: BTreeMap<String, (String, String)>,
        edges: &[(String, String)],
        k: usize,
    ) -> Result<Self> {
        let invalid = |m: String| Err(Error::InvalidInstance(m));
        if rows.is_empty() || cols.is_empty() {
            return invalid("I and J must be nonempty".into());
        }
        for (what, labels) in [("I", &rows), ("J", &cols)] {
            let set: BTreeSet<_> = labels.iter().collect();
            if set.len() != labels.len() {
                return invalid(format!("duplicate label in {what}"));
            }
        }
        if k < 2 {
            return invalid(format!("k must be greater than 1, got {k}"));
        }
        let mut vertices = Vec::with_capacity(partition.len());
        let mut cells = Vec::with_capacity(partition.len());
        for (v, (i, j)) in &partition {
            let Some(ri) = rows.iter().position(|r| r == i) else {
                return invalid(format!("vertex {v:?} refers to unknown row {i:?}"));
            };
            let Some(cj) = cols.iter().position(|c| c == j) else {
                return invalid(format!("vertex {v:?} refers to unknown column {j:?}"));
            };
            vertices.push(v.clone());
            cells.push((ri, cj));
        }
        let n = vertices.len();
        let mut adjacency = vec![vec![false; n]; n];
        for (a, b) in edges {
            let pa = vertices.binary_search(a);
            let pb = vertices.binary_search(b);
            let (Ok(pa), Ok(pb)) = (pa, pb) else {
                return invalid(format!("edge ({a:?}, {b:?}) refers to an unknown vertex"));
            };
            if pa == pb {
                return invalid(format!("self-loop on {a:?}"));
            }
            adjacency[pa][pb] = true;
            adjacency[pb][pa] = true;
        }
        Ok(MinmaxCliqueInstance {
            rows,
            cols,
            vertices,
            cells,
            adjacency,
            k,
        })
    }

    /// Index-based constructor used by generators: `cells[v] = (i, j)`,
    /// labels are `1..=|I|`, `1..=|J|` and `v{i}{j}` style names.
    pub fn from_indices(
        num_rows: usize,
        num_cols: usize,
        cells: &[(usize, usize)],
        edges: &[(usize, usize)],
        k: usize,
    ) -> Result<Self> {
        let rows: Vec<String> = (1..=num_rows).map(|i| i.to_string()).collect();
        let cols: Vec<String> = (1..=num_cols).map(|j| j.to_string()).collect();
        let width = cells.len().to_string().len();
        let names: Vec<String> = (0..cells.len()).map(|v| format!("v{v:0width$}")).collect();
        let mut partition = BTreeMap::new();
        for (name, &(i, j)) in names.iter().zip(cells) {
            if i >= num_rows || j >= num_cols {
                return Err(Error::InvalidInstance(format!("cell ({i}, {j}) out of range")));
            }
            partition.insert(name.clone(), (rows[i].clone(), cols[j].clone()));
        }
        let mut named_edges = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= names.len() || b >= names.len() {
                return Err(Error::InvalidInstance(format!("edge ({a}, {b}) out of range")));
            }
            named_edges.push((names[a].clone(), names[b].clone()));
        }
        MinmaxCliqueInstance::new(rows, cols, partition, &named_edges, k)
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn cols(&self) -> &[String] {
        &self.cols
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn cell(&self, v: usize) -> (usize, usize) {
        self.cells[v]
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn with_k(&self, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInstance(format!("k must be greater than 1, got {k}")));
        }
        Ok(MinmaxCliqueInstance { k, ..self.clone() })
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(label)).ok()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e)
            .map(|(u, _)| u)
    }

    /// Edges as index pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.num_vertices();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.adjacency[a][b])
            .collect()
    }

    pub fn with_edges(&self, edges: &[(usize, usize)]) -> Result<Self> {
        let n = self.num_vertices();
        let mut adjacency = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidInstance(format!("bad edge ({a}, {b})")));
            }
            adjacency[a][b] = true;
            adjacency[b][a] = true;
        }
        Ok(MinmaxCliqueInstance {
            adjacency,
            ..self.clone()
        })
    }

    /// Vertices in `∪_i V_{i,t(i)}`.
    pub fn active_vertices(&self, selector: &Selector) -> Vec<usize> {
        (0..self.num_vertices())
            .filter(|&v| {
                let (i, j) = self.cells[v];
                selector.get(i) == j
            })
            .collect()
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(x, &a)| vertices[x + 1..].iter().all(|&b| self.adjacency[a][b]))
    }

    /// Instance without the vertex `v`.
    pub fn without_vertex(&self, v: usize) -> Self {
        let keep: Vec<usize> = (0..self.num_vertices()).filter(|&u| u != v).collect();
        MinmaxCliqueInstance {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            vertices: keep.iter().map(|&u| self.vertices[u].clone()).collect(),
            cells: keep.iter().map(|&u| self.cells[u]).collect(),
            adjacency: keep
                .iter()
                .map(|&a| keep.iter().map(|&b| self.adjacency[a][b]).collect())
                .collect(),
            k: self.k,
        }
    }

    /// Normalized instances: `|I| ≥ 2`, `|J| ≥ 2`, no dominated vertex
    /// and no isolated vertex.
    pub fn is_normalized(&self) -> bool {
        self.rows.len() >= 2
            && self.cols.len() >= 2
            && (0..self.num_vertices()).all(|v| self.neighbors(v).next().is_some())
            && find_dominated(self).is_none()
    }
}

/// All `|J|^|I|` selectors in lexicographic order (row 0 most significant).
pub fn enumerate_selectors(instance: &MinmaxCliqueInstance) -> impl Iterator<Item = Selector> {
    let (rows, cols) = (instance.rows.len(), instance.cols.len());
    let mut current = Some(vec![0usize; rows]);
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = rows;
        current = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            if next[i] + 1 < cols {
                next[i] += 1;
                break Some(next);
            }
            next[i] = 0;
        };
        Some(Selector(out))
    })
}

/// Exact maximum clique of the subgraph induced on `active`, by
/// branch-and-bound with greedy-coloring bounds. Returns the size and one
/// maximum clique (sorted).
pub fn max_clique(instance: &MinmaxCliqueInstance, active: &[usize]) -> (usize, Vec<usize>) {
    let mut best = Vec::new();
    let mut current = Vec::new();
    let candidates: Vec<usize> = active.to_vec();
    expand(instance, &mut current, candidates, &mut best);
    best.sort_unstable();
    (best.len(), best)
}

fn expand(inst: &MinmaxCliqueInstance, current: &mut Vec<usize>, candidates: Vec<usize>, best: &mut Vec<usize>) {
    let (order, colors) = color_sort(inst, &candidates);
    let mut remaining = candidates;
    for idx in (0..order.len()).rev() {
        if current.len() + colors[idx] <= best.len() {
            return;
        }
        let v = order[idx];
        current.push(v);
        let next: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&u| inst.adjacency[v][u])
            .collect();
        if next.is_empty() {
            if current.len() > best.len() {
                *best = current.clone();
            }
        } else {
            expand(inst, current, next, best);
        }
        current.pop();
        remaining.retain(|&u| u != v);
    }
}

/// Greedy sequential coloring; returns vertices ordered by color together
/// with the (1-based) color of each position, nondecreasing.
fn color_sort(inst: &MinmaxCliqueInstance, vertices: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in vertices {
        match classes
            .iter_mut()
            .find(|class| class.iter().all(|&u| !inst.adjacency[u][v]))
        {
            Some(class) => class.push(v),
            None => classes.push(vec![v]),
        }
    }
    let mut order = Vec::with_capacity(vertices.len());
    let mut colors = Vec::with_capacity(vertices.len());
    for (c, class) in classes.into_iter().enumerate() {
        for v in class {
            order.push(v);
            colors.push(c + 1);
        }
    }
    (order, colors)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliqueAnswer {
    /// Every selector leaves a clique of size ≥ k; one per selector.
    Yes { cliques: Vec<(Selector, Vec<usize>)> },
    /// The lexicographically first selector without such a clique, with the
    /// largest clique it does leave.
    No { selector: Selector, largest: Vec<usize> },
}

impl CliqueAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, CliqueAnswer::Yes { .. })
    }
}

/// Decides the instance exhaustively over selectors.
pub fn solve(instance: &MinmaxCliqueInstance) -> CliqueAnswer {
    let mut cliques = Vec::new();
    for selector in enumerate_selectors(instance) {
        let active = instance.active_vertices(&selector);
        let (size, clique) = max_clique(instance, &active);
        if size < instance.k {
            return CliqueAnswer::No {
                selector,
                largest: clique,
            };
        }
        cliques.push((selector, clique));
    }
    CliqueAnswer::Yes { cliques }
}

/// One dominance removal: `removed` was dominated by `dominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Removal {
    pub removed: String,
    pub dominator: String,
}

/// `v` dominates `w`: same cell, not adjacent, `N(v) ⊇ N(w)`.
pub fn dominates(instance: &MinmaxCliqueInstance, v: usize, w: usize) -> bool {
    v != w
        && instance.cells[v] == instance.cells[w]
        && !instance.adjacency[v][w]
        && instance.neighbors(w).all(|u| instance.adjacency[v][u])
}

/// First dominated vertex in label order, with its first dominator.
fn find_dominated(instance: &MinmaxCliqueInstance) -> Option<(usize, usize)> {
    let n = instance.num_vertices();
    (0..n).find_map(|w| (0..n).find(|&v| dominates(instance, v, w)).map(|v| (w, v)))
}

/// Removes dominated vertices until none is left, one at a time in label
/// order, restarting the scan after each removal.
pub fn remove_dominated(instance: &MinmaxCliqueInstance) -> (MinmaxCliqueInstance, Vec<Removal>) {
    let mut current = instance.clone();
    let mut log = Vec::new();
    while let Some((w, v)) = find_dominated(&current) {
        log.push(Removal {
            removed: current.vertices[w].clone(),
            dominator: current.vertices[v].clone(),
        });
        current = current.without_vertex(w);
    }
    (current, log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::four_vertex_example;

    #[test]
    fn four_vertex_example_is_no_with_first_failing_selector() {
        let inst = four_vertex_example();
        match solve(&inst) {
            CliqueAnswer::No { selector, largest } => {
                assert_eq!(selector, Selector(vec![1, 0]));
                assert_eq!(largest.len(), 1);
            }
            other => panic!("{other:?}"),
        }
        let active = vec![inst.vertex_index("v12").unwrap(), inst.vertex_index("v21").unwrap()];
        assert_eq!(max_clique(&inst, &active).0, 1);
    }

    #[test]
    fn selector_enumeration() {
        let count = |i, j| {
            let inst = MinmaxCliqueInstance::from_indices(i, j, &[], &[], 2).unwrap();
            enumerate_selectors(&inst).collect::<Vec<_>>()
        };
        assert_eq!(count(2, 2).len(), 4);
        assert_eq!(count(1, 3).len(), 3);
        let eight = count(3, 2);
        assert_eq!(eight.len(), 8);
        assert_eq!(eight[0], Selector(vec![0, 0, 0]));
        assert_eq!(eight[1], Selector(vec![0, 0, 1]));
        assert_eq!(eight[7], Selector(vec![1, 1, 1]));
        assert!(eight.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn max_clique_basics() {
        let inst = MinmaxCliqueInstance::from_indices(1, 1, &[(0, 0); 3], &[], 2).unwrap();
        assert_eq!(max_clique(&inst, &[0, 1, 2]).0, 1);
        assert_eq!(max_clique(&inst, &[]).0, 0);
        let m = 6;
        let all: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
        let complete = MinmaxCliqueInstance::from_indices(1, 1, &vec![(0, 0); m], &all, 2).unwrap();
        assert_eq!(max_clique(&complete, &(0..m).collect::<Vec<_>>()), (m, (0..m).collect()));
    }

    #[test]
    fn shared_clique_answers_yes() {
        // a triangle in the only cell, reached by every selector
        let cells = [(0, 0), (0, 0), (0, 0)];
        let inst = MinmaxCliqueInstance::from_indices(1, 1, &cells, &[(0, 1), (1, 2), (0, 2)], 3).unwrap();
        assert!(solve(&inst).is_yes());
    }

    #[test]
    fn empty_vertex_set_is_no() {
        let inst = MinmaxCliqueInstance::from_indices(2, 2, &[], &[], 2).unwrap();
        assert!(!solve(&inst).is_yes());
    }

    #[test]
    fn validation_errors() {
        assert!(MinmaxCliqueInstance::from_indices(2, 2, &[(0, 0)], &[], 1).is_err());
        assert!(MinmaxCliqueInstance::from_indices(2, 2, &[(0, 0)], &[(0, 0)], 2).is_err());
        assert!(MinmaxCliqueInstance::from_indices(2, 2, &[(0, 3)], &[], 2).is_err());
        assert!(MinmaxCliqueInstance::from_indices(2, 2, &[(0, 0)], &[(0, 1)], 2).is_err());
    }

    #[test]
    fn dominance_removal() {
        // v0, v1 in the same cell, not adjacent, N(v1) = {v2} ⊆ N(v0) = {v2, v3}
        let cells = [(0, 0), (0, 0), (1, 0), (1, 1)];
        let inst = MinmaxCliqueInstance::from_indices(2, 2, &cells, &[(0, 2), (0, 3), (1, 2)], 2).unwrap();
        assert!(dominates(&inst, 0, 1));
        assert!(!dominates(&inst, 1, 0));
        let (reduced, log) = remove_dominated(&inst);
        assert_eq!(reduced.num_vertices(), 3);
        assert_eq!(
            log,
            vec![Removal {
                removed: "v1".into(),
                dominator: "v0".into()
            }]
        );
        assert!(find_dominated(&reduced).is_none());

        // no two same-cell non-adjacent vertices: unchanged
        let cells = [(0, 0), (0, 0), (1, 1)];
        let inst = MinmaxCliqueInstance::from_indices(2, 2, &cells, &[(0, 1)], 2).unwrap();
        let (same, log) = remove_dominated(&inst);
        assert_eq!(same, inst);
        assert!(log.is_empty());
    }
}
