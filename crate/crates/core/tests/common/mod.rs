//! Independent oracles shared by the integration tests. None of them calls
//! the search routines under test.

#![allow(dead_code)]

use esscert::clique::MinmaxCliqueInstance;
use esscert::game::{MixedStrategy, SymmetricGame};
use esscert::rational::{int, ratio, Rational};
use num_traits::{One, Zero};
use rand::Rng;

/// Enumerates every selector with an odometer and every k-subset of the
/// selected vertices, checking pairwise adjacency directly.
pub fn brute_force_minmax(instance: &MinmaxCliqueInstance) -> bool {
    let rows = instance.rows().len();
    let cols = instance.cols().len();
    let k = instance.k();
    let mut t = vec![0usize; rows];
    loop {
        let active: Vec<usize> = (0..instance.num_vertices())
            .filter(|&v| {
                let (i, j) = instance.cell(v);
                t[i] == j
            })
            .collect();
        if !has_k_clique(instance, &active, k) {
            return false;
        }
        let mut r = rows;
        loop {
            if r == 0 {
                return true;
            }
            r -= 1;
            t[r] += 1;
            if t[r] < cols {
                break;
            }
            t[r] = 0;
        }
    }
}

fn has_k_clique(instance: &MinmaxCliqueInstance, active: &[usize], k: usize) -> bool {
    let n = active.len();
    if n < k {
        return false;
    }
    (0u32..(1 << n)).filter(|m| m.count_ones() as usize == k).any(|mask| {
        let chosen: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| active[b]).collect();
        chosen
            .iter()
            .enumerate()
            .all(|(a, &x)| chosen[a + 1..].iter().all(|&y| instance.adjacent(x, y)))
    })
}

/// Random game with integer payoffs in `lo..=hi`; small ranges make ties
/// (and hence non-regular equilibria) common.
pub fn random_integer_game(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> SymmetricGame {
    let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    let matrix = (0..n)
        .map(|_| (0..n).map(|_| int(rng.gen_range(lo..=hi))).collect())
        .collect();
    SymmetricGame::new(names, matrix).unwrap()
}

/// Random game with small rational payoffs.
pub fn random_rational_game(rng: &mut impl Rng, n: usize) -> SymmetricGame {
    let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    let matrix = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
                .collect()
        })
        .collect();
    SymmetricGame::new(names, matrix).unwrap()
}

/// A random strategy with rational weights over `support`.
pub fn random_strategy_on(rng: &mut impl Rng, n: usize, support: &[usize]) -> MixedStrategy {
    let weights: Vec<i64> = support.iter().map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    let mut probs = vec![Rational::zero(); n];
    for (&s, &w) in support.iter().zip(&weights) {
        probs[s] = ratio(w, total);
    }
    MixedStrategy::new(probs).unwrap()
}

fn bilinear(game: &SymmetricGame, a: &[Rational], b: &[Rational]) -> Rational {
    let n = game.size();
    let mut total = Rational::zero();
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if !b[j].is_zero() {
                total += &a[i] * game.entry(i, j) * &b[j];
            }
        }
    }
    total
}

fn pure_payoffs(game: &SymmetricGame, sigma: &[Rational]) -> Vec<Rational> {
    (0..game.size())
        .map(|i| (0..game.size()).map(|j| game.entry(i, j) * &sigma[j]).sum())
        .collect()
}

/// Whether `other` invades `sigma` by direct evaluation of both conditions.
pub fn invades(game: &SymmetricGame, sigma: &[Rational], other: &[Rational]) -> bool {
    if sigma == other {
        return false;
    }
    let against_sigma = bilinear(game, other, sigma);
    let own = bilinear(game, sigma, sigma);
    if against_sigma > own {
        return true;
    }
    against_sigma == own && bilinear(game, other, other) >= bilinear(game, sigma, other)
}

/// Randomized exact search for an invader of `sigma`: pure strategies,
/// pairwise mixtures on a grid, random points of the best-response face,
/// small perturbations of sigma toward them, and exact hill climbing on
/// `u(σ',σ') − u(σ,σ')` inside the best-response face.
pub fn falsify(game: &SymmetricGame, sigma: &MixedStrategy, rng: &mut impl Rng, budget: usize) -> Option<Vec<Rational>> {
    let n = game.size();
    let s = sigma.probs().to_vec();
    for i in 0..n {
        let mut p = vec![Rational::zero(); n];
        p[i] = Rational::one();
        if invades(game, &s, &p) {
            return Some(p);
        }
    }
    let payoffs = pure_payoffs(game, &s);
    let best = payoffs.iter().max().unwrap().clone();
    let face: Vec<usize> = (0..n).filter(|&i| payoffs[i] == best).collect();
    for &a in &face {
        for &b in &face {
            for num in 1..8 {
                let mut p = vec![Rational::zero(); n];
                p[a] += ratio(num, 8);
                p[b] += ratio(8 - num, 8);
                if invades(game, &s, &p) {
                    return Some(p);
                }
            }
        }
    }
    let gain = |p: &[Rational]| bilinear(game, p, p) - bilinear(game, &s, p);
    for _ in 0..budget {
        let target = random_strategy_on(rng, n, &face);
        let step = ratio(1, rng.gen_range(1..=20));
        let p: Vec<Rational> = s
            .iter()
            .zip(target.probs())
            .map(|(a, b)| a + (b - a) * &step)
            .collect();
        if invades(game, &s, &p) {
            return Some(p);
        }
        let mut current = target.probs().to_vec();
        let mut value = gain(&current);
        for _ in 0..10 {
            let a = face[rng.gen_range(0..face.len())];
            let b = face[rng.gen_range(0..face.len())];
            if a == b || current[a].is_zero() {
                continue;
            }
            let moved = &current[a] * ratio(1, rng.gen_range(1..=4));
            let mut next = current.clone();
            next[a] -= &moved;
            next[b] += &moved;
            let next_value = gain(&next);
            if next_value > value {
                current = next;
                value = next_value;
            }
        }
        if invades(game, &s, &current) {
            return Some(current);
        }
    }
    None
}
