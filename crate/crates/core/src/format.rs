//! JSON file formats for games and MINMAX-CLIQUE instances.
//!
//! Game files:
//!
//! ```json
//! {"strategies": ["Dove", "Hawk"], "payoffs": [["1", "0"], ["2", "-1"]]}
//! ```
//!
//! Payoffs are rational literals (`"p/q"`, `"p"`) or JSON integers. Floats
//! are rejected. Files written by this crate may carry two optional extra
//! fields: `target` (strategy names) and `origin` (provenance of each
//! strategy after a transform).
//!
//! Instance files:
//!
//! ```json
//! {"I": ["1", "2"], "J": ["1", "2"],
//!  "partition": {"v11": ["1", "1"], "v12": ["1", "2"]},
//!  "edges": [["v11", "v12"]], "k": 2}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::clique::MinmaxCliqueInstance;
use crate::error::{Error, Result};
use crate::game::{MixedStrategy, SupportSet, SymmetricGame};
use crate::gadgets::{CopyTag, TransformOutput};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OriginEntry {
    pub source: String,
    /// `original`, `#1`, `#2`, `^1`, `^2` or `^3`
    pub copy: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameFile {
    pub strategies: Vec<String>,
    pub payoffs: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Vec<OriginEntry>>,
}

/// A rational from a JSON string literal or integer.
pub fn rational_from_json(value: &Value) -> Result<Rational> {
    match value {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected a rational literal, found {other}"))),
    }
}

impl GameFile {
    pub fn from_game(game: &SymmetricGame) -> Self {
        GameFile {
            strategies: game.names().to_vec(),
            payoffs: game
                .matrix()
                .iter()
                .map(|row| row.iter().map(|v| Value::String(format_rational(v))).collect())
                .collect(),
            target: None,
            origin: None,
        }
    }

    pub fn with_target(mut self, game: &SymmetricGame, target: &SupportSet) -> Self {
        self.target = Some(target.iter().map(|i| game.name(i).to_string()).collect());
        self
    }

    pub fn from_transform(original: &SymmetricGame, out: &TransformOutput) -> Self {
        let mut file = GameFile::from_game(&out.game).with_target(&out.game, &out.preserved_target);
        file.origin = Some(
            out.origin_map
                .iter()
                .map(|&(s, tag)| OriginEntry {
                    source: original.name(s).to_string(),
                    copy: match tag {
                        CopyTag::Original => "original".to_string(),
                        CopyTag::Duplicate(c) => format!("#{c}"),
                        CopyTag::Triple(c) => format!("^{c}"),
                    },
                })
                .collect(),
        );
        file
    }

    pub fn to_game(&self) -> Result<SymmetricGame> {
        let payoffs = self
            .payoffs
            .iter()
            .map(|row| row.iter().map(rational_from_json).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        SymmetricGame::new(self.strategies.clone(), payoffs)
    }

    /// The embedded target set, resolved against `game`.
    pub fn target_set(&self, game: &SymmetricGame) -> Result<Option<SupportSet>> {
        self.target
            .as_ref()
            .map(|names| resolve_names(game, names.iter().map(String::as_str)))
            .transpose()
    }
}

pub fn resolve_names<'a>(game: &SymmetricGame, names: impl IntoIterator<Item = &'a str>) -> Result<SupportSet> {
    names
        .into_iter()
        .map(|n| {
            game.index_of(n.trim())
                .ok_or_else(|| Error::Parse(format!("unknown strategy {n:?}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(SupportSet::new)
}

pub fn parse_game_file(text: &str) -> Result<GameFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("game file: {e}")))
}

pub fn parse_game(text: &str) -> Result<SymmetricGame> {
    parse_game_file(text)?.to_game()
}

pub fn game_to_json(game: &SymmetricGame) -> String {
    serde_json::to_string_pretty(&GameFile::from_game(game)).expect("serializable")
}

/// SHA-256 over the compact canonical form of names and payoffs.
pub fn game_hash(game: &SymmetricGame) -> String {
    let canonical = serde_json::to_string(&GameFile::from_game(game)).expect("serializable");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// Strategy vector text: either `p1,p2,...,pn` over all strategies or
/// `name=p,name=p` listing the support.
pub fn parse_strategy_vector(game: &SymmetricGame, text: &str) -> Result<MixedStrategy> {
    let parts: Vec<&str> = text.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    let mut probs = vec![Rational::from_integer(0.into()); game.size()];
    if parts.iter().any(|p| p.contains('=')) {
        for part in parts {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected name=value, got {part:?}")))?;
            let idx = game
                .index_of(name.trim())
                .ok_or_else(|| Error::Parse(format!("unknown strategy {name:?}")))?;
            probs[idx] += parse_rational(value)?;
        }
    } else {
        if parts.len() != game.size() {
            return Err(Error::DimensionMismatch {
                expected: game.size(),
                found: parts.len(),
            });
        }
        for (p, part) in probs.iter_mut().zip(parts) {
            *p = parse_rational(part)?;
        }
    }
    MixedStrategy::new(probs)
}

pub fn format_strategy(strategy: &MixedStrategy) -> Vec<String> {
    strategy.probs().iter().map(format_rational).collect()
}

/// `name=p` terms for the support of `strategy`.
pub fn describe_strategy(game: &SymmetricGame, strategy: &MixedStrategy) -> String {
    strategy
        .support()
        .iter()
        .map(|i| format!("{}={}", game.name(i), format_rational(strategy.prob(i))))
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(rename = "I")]
    pub rows: Vec<String>,
    #[serde(rename = "J")]
    pub cols: Vec<String>,
    pub partition: BTreeMap<String, (String, String)>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    pub k: i64,
}

impl InstanceFile {
    pub fn from_instance(instance: &MinmaxCliqueInstance) -> Self {
        let partition = (0..instance.num_vertices())
            .map(|v| {
                let (i, j) = instance.cell(v);
                (
                    instance.vertices()[v].clone(),
                    (instance.rows()[i].clone(), instance.cols()[j].clone()),
                )
            })
            .collect();
        let edges = instance
            .edges()
            .into_iter()
            .map(|(a, b)| (instance.vertices()[a].clone(), instance.vertices()[b].clone()))
            .collect();
        InstanceFile {
            rows: instance.rows().to_vec(),
            cols: instance.cols().to_vec(),
            partition,
            edges,
            k: instance.k() as i64,
        }
    }

    pub fn to_instance(&self) -> Result<MinmaxCliqueInstance> {
        if self.k < 2 {
            return Err(Error::InvalidInstance(format!("k must be greater than 1, got {}", self.k)));
        }
        MinmaxCliqueInstance::new(
            self.rows.clone(),
            self.cols.clone(),
            self.partition.clone(),
            &self.edges,
            self.k as usize,
        )
    }
}

pub fn parse_instance(text: &str) -> Result<MinmaxCliqueInstance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("instance file: {e}")))?;
    file.to_instance()
}

pub fn instance_to_json(instance: &MinmaxCliqueInstance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(instance)).expect("serializable")
}
