//! Instance generators: an exhaustive corpus of tiny instances and seeded
//! random corpora.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clique::MinmaxCliqueInstance;

/// One generated instance with a stable, file-system friendly name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub instance: MinmaxCliqueInstance,
}

/// Every instance with `|I| = rows`, `|J| = cols`, up to `max_vertices`
/// vertices, every edge set and every `k` in `ks`.
///
/// Vertex labels are interchangeable, so only one assignment of vertices to
/// cells per multiset is generated: vertex `v_a` never sits in a cell with a
/// smaller row-major index than `v_{a-1}`.
pub fn exhaustive(rows: usize, cols: usize, max_vertices: usize, ks: &[usize]) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for_each_exhaustive(rows, cols, max_vertices, ks, |name, instance| {
        out.push(CorpusEntry {
            name: name.to_string(),
            instance,
        })
    });
    out
}

/// Streaming form of [`exhaustive`] for corpora too large to hold at once.
pub fn for_each_exhaustive(
    rows: usize,
    cols: usize,
    max_vertices: usize,
    ks: &[usize],
    mut visit: impl FnMut(&str, MinmaxCliqueInstance),
) {
    let cells = rows * cols;
    for n in 0..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        for assignment in nondecreasing(n, cells) {
            let placed: Vec<(usize, usize)> = assignment.iter().map(|&c| (c / cols, c % cols)).collect();
            let cells_tag: String = assignment.iter().map(|c| c.to_string()).collect();
            for mask in 0u64..(1u64 << pairs.len()) {
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                for &k in ks {
                    let instance = MinmaxCliqueInstance::from_indices(rows, cols, &placed, &edges, k)
                        .expect("generated instance is valid");
                    visit(&format!("ex-{rows}x{cols}-n{n}-c{cells_tag}-e{mask}-k{k}"), instance);
                }
            }
        }
    }
}

/// The default exhaustive corpus: `|I| = |J| = 2`, up to four vertices,
/// `k ∈ {2, 3}`.
pub fn default_exhaustive() -> Vec<CorpusEntry> {
    exhaustive(2, 2, 4, &[2, 3])
}

fn nondecreasing(len: usize, cells: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn go(len: usize, cells: usize, from: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        for c in from..cells {
            current.push(c);
            go(len, cells, c, current, out);
            current.pop();
        }
    }
    go(len, cells, 0, &mut current, &mut out);
    out
}

/// Shape parameters for random instances.
#[derive(Debug, Clone)]
pub struct RandomShape {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub max_cells: usize,
    pub vertices: (usize, usize),
    pub edge_probability: f64,
    pub ks: Vec<usize>,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape {
            rows: (1, 3),
            cols: (1, 3),
            max_cells: 6,
            vertices: (0, 5),
            edge_probability: 0.5,
            ks: vec![2, 3],
        }
    }
}

pub fn random_instance(rng: &mut impl Rng, shape: &RandomShape) -> MinmaxCliqueInstance {
    let (rows, cols) = loop {
        let r = rng.gen_range(shape.rows.0..=shape.rows.1);
        let c = rng.gen_range(shape.cols.0..=shape.cols.1);
        if r * c <= shape.max_cells {
            break (r, c);
        }
    };
    let n = rng.gen_range(shape.vertices.0..=shape.vertices.1);
    let cells: Vec<(usize, usize)> = (0..n)
        .map(|_| (rng.gen_range(0..rows), rng.gen_range(0..cols)))
        .collect();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(shape.edge_probability))
        .collect();
    let k = shape.ks[rng.gen_range(0..shape.ks.len())];
    MinmaxCliqueInstance::from_indices(rows, cols, &cells, &edges, k).expect("generated instance is valid")
}

pub fn random_corpus(seed: u64, count: usize, shape: &RandomShape) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| CorpusEntry {
            name: format!("rnd-s{seed}-{i:04}"),
            instance: random_instance(&mut rng, shape),
        })
        .collect()
}

/// Distinct random normalized instances (at least
/// two rows and columns, no dominated vertex, no isolated vertex).
pub fn normalized_corpus(seed: u64, count: usize, max_vertices: usize) -> Vec<CorpusEntry> {
    let shape = RandomShape {
        rows: (2, 2),
        cols: (2, 2),
        max_cells: 4,
        vertices: (2, max_vertices.max(2)),
        edge_probability: 0.6,
        ks: vec![2, 3],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 100_000 {
        attempts += 1;
        let instance = random_instance(&mut rng, &shape);
        if !instance.is_normalized() {
            continue;
        }
        let key = crate::format::instance_to_json(&instance);
        if seen.insert(key) {
            out.push(CorpusEntry {
                name: format!("nrm-s{seed}-{:04}", out.len()),
                instance,
            });
        }
    }
    out
}
