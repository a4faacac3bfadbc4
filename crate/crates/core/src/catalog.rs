//! Small named games and instances used throughout the docs and tests.

use std::collections::BTreeMap;

use crate::clique::MinmaxCliqueInstance;
use crate::game::SymmetricGame;

/// Dove/Hawk with payoffs 1, 0 / 2, -1.
pub fn hawk_dove() -> SymmetricGame {
    SymmetricGame::from_integers(&["Dove", "Hawk"], &[&[1, 0], &[2, -1]]).expect("valid game")
}

/// Rock-paper-scissors with win 1, tie 0, loss -1.
pub fn rock_paper_scissors() -> SymmetricGame {
    SymmetricGame::from_integers(
        &["Rock", "Paper", "Scissors"],
        &[&[0, -1, 1], &[1, 0, -1], &[-1, 1, 0]],
    )
    .expect("valid game")
}

/// 2x2 pure coordination game.
pub fn coordination() -> SymmetricGame {
    SymmetricGame::from_integers(&["A", "B"], &[&[1, 0], &[0, 1]]).expect("valid game")
}

/// The four-vertex MINMAX-CLIQUE example: `I = J = {1, 2}`, one vertex
/// `v_ij` per cell, edges `v11–v21`, `v11–v22`, `v12–v22`, `k = 2`. Its
/// answer is "no" (the selector `t(1)=2, t(2)=1` leaves no edge).
pub fn four_vertex_example() -> MinmaxCliqueInstance {
    let labels = || vec!["1".to_string(), "2".to_string()];
    let mut partition = BTreeMap::new();
    for (v, i, j) in [("v11", "1", "1"), ("v12", "1", "2"), ("v21", "2", "1"), ("v22", "2", "2")] {
        partition.insert(v.to_string(), (i.to_string(), j.to_string()));
    }
    let edges: Vec<(String, String)> = [("v11", "v21"), ("v11", "v22"), ("v12", "v22")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    MinmaxCliqueInstance::new(labels(), labels(), partition, &edges, 2).expect("valid instance")
}
