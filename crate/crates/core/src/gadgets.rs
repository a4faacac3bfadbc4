//! Transforms that remove a support restriction: duplicating every strategy
//! outside `T`, or replacing each of them by a rock-paper-scissors triple.
//!
//! Both keep strategies in their original order; copies of one original are
//! adjacent. Duplicates are named `s#1`, `s#2`, triples `s^1`, `s^2`, `s^3`.

use crate::ess::find_ess;
use crate::error::{Error, Result};
use crate::game::{SupportSet, SymmetricGame};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CopyTag {
    Original,
    /// 1 or 2
    Duplicate(u8),
    /// 1, 2 or 3
    Triple(u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformOutput {
    pub game: SymmetricGame,
    /// For each new strategy: the original index and which copy it is.
    pub origin_map: Vec<(usize, CopyTag)>,
    pub preserved_target: SupportSet,
}

impl TransformOutput {
    /// New indices of all copies of original strategy `s`.
    pub fn copies_of(&self, s: usize) -> SupportSet {
        SupportSet::new(
            self.origin_map
                .iter()
                .enumerate()
                .filter(|(_, (o, _))| *o == s)
                .map(|(i, _)| i),
        )
    }
}

/// Rock-paper-scissors payoffs on copy numbers 1..=3: `i` beats `i + 1`
/// (mod 3), so `ρ(1,2) = ρ(2,3) = ρ(3,1) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RpsMatrix;

impl RpsMatrix {
    pub fn get(i: u8, j: u8) -> i64 {
        assert!((1..=3).contains(&i) && (1..=3).contains(&j));
        if i == j {
            0
        } else if j == i % 3 + 1 {
            1
        } else {
            -1
        }
    }

    pub fn game() -> SymmetricGame {
        let rows: Vec<Vec<i64>> = (1..=3).map(|i| (1..=3).map(|j| Self::get(i, j)).collect()).collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        SymmetricGame::from_integers(&["1", "2", "3"], &refs).expect("3x3")
    }
}

fn check_target(game: &SymmetricGame, target: &SupportSet) -> Result<()> {
    match target.max_index() {
        Some(m) if m >= game.size() => Err(Error::IndexOutOfRange {
            index: m,
            size: game.size(),
        }),
        _ => Ok(()),
    }
}

fn expand(
    game: &SymmetricGame,
    target: &SupportSet,
    copies: u8,
    tag: fn(u8) -> CopyTag,
    suffix: &str,
    same_block: impl Fn(&Rational, u8, u8) -> Rational,
) -> Result<TransformOutput> {
    check_target(game, target)?;
    let mut origin_map = Vec::new();
    let mut names = Vec::new();
    for s in 0..game.size() {
        if target.contains(s) {
            origin_map.push((s, CopyTag::Original));
            names.push(game.name(s).to_string());
        } else {
            for c in 1..=copies {
                origin_map.push((s, tag(c)));
                names.push(format!("{}{suffix}{c}", game.name(s)));
            }
        }
    }
    let copy_number = |t: CopyTag| match t {
        CopyTag::Original => 0,
        CopyTag::Duplicate(c) | CopyTag::Triple(c) => c,
    };
    let payoffs = origin_map
        .iter()
        .map(|&(a, ta)| {
            origin_map
                .iter()
                .map(|&(b, tb)| {
                    let base = game.entry(a, b);
                    if a == b && ta != CopyTag::Original {
                        same_block(base, copy_number(ta), copy_number(tb))
                    } else {
                        base.clone()
                    }
                })
                .collect()
        })
        .collect();
    let preserved_target = SupportSet::new(
        origin_map
            .iter()
            .enumerate()
            .filter(|(_, (_, t))| *t == CopyTag::Original)
            .map(|(i, _)| i),
    );
    Ok(TransformOutput {
        game: SymmetricGame::new(names, payoffs)?,
        origin_map,
        preserved_target,
    })
}

/// Adds one exact copy (row and column) of every strategy outside `target`.
pub fn duplicate_transform(game: &SymmetricGame, target: &SupportSet) -> Result<TransformOutput> {
    expand(game, target, 2, CopyTag::Duplicate, "#", |base, _, _| base.clone())
}

/// Replaces every strategy outside `target` by three copies whose mutual
/// payoffs are `u(s,s) + ρ(i,j)`.
pub fn rps_transform(game: &SymmetricGame, target: &SupportSet) -> Result<TransformOutput> {
    expand(game, target, 3, CopyTag::Triple, "^", |base, i, j| base + int(RpsMatrix::get(i, j)))
}

/// Whether the members of `block` are interchangeable against every
/// strategy outside it, as row players and as column players.
pub fn interchangeable_block_check(game: &SymmetricGame, block: &SupportSet) -> Result<bool> {
    check_target(game, block)?;
    if block.is_empty() {
        return Err(Error::Precondition("block must be nonempty".into()));
    }
    let first = block.indices()[0];
    Ok((0..game.size()).filter(|&s| !block.contains(s)).all(|s| {
        block
            .iter()
            .all(|b| game.entry(b, s) == game.entry(first, s) && game.entry(s, b) == game.entry(s, first))
    }))
}

/// Checks that no ESS of `game` puts mass on `block`. Refuses unless the
/// block is interchangeable and the game restricted to it has no ESS.
pub fn no_ess_mass_on_block(game: &SymmetricGame, block: &SupportSet) -> Result<bool> {
    if !interchangeable_block_check(game, block)? {
        return Err(Error::Precondition("block is not interchangeable".into()));
    }
    let inner = game.restrict(block)?;
    if !find_ess(&inner, None)?.is_empty() {
        return Err(Error::Precondition("the game restricted to the block has an ESS".into()));
    }
    Ok(find_ess(game, None)?
        .iter()
        .all(|(sigma, _)| sigma.support().is_disjoint(block)))
}
