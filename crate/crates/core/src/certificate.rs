//! Self-contained JSON certificates for ESS verdicts and their recheck.
//!
//! A certificate names the game by content hash and records every exact
//! quantity the verdict depends on. [`recheck`] needs only the certificate
//! and the game: it recomputes the Nash data, replays the invasion
//! inequalities, and for ESS verdicts confirms that the recorded sign
//! patterns are exactly the maximal ones and that each recorded maximum is
//! attained by its argmax and matches a fresh per-pattern maximization.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ess::{EssStatus, EssVerdict};
use crate::format::{format_strategy, game_hash, resolve_names};
use crate::game::{dot, MixedStrategy, SupportSet, SymmetricGame};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::tangent::{quadratic_form, recompute_pattern_bound, SignPattern, TangentCone};

pub const TOOL_NAME: &str = "esscert";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subject {
    pub game_sha256: String,
    pub sigma: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NashRecord {
    pub value: String,
    pub pure_payoffs: Vec<String>,
    pub best_responses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternRecord {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
    pub maximum: String,
    pub argmax: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub tool: ToolInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub subject: Subject,
    pub status: String,
    pub nash: NashRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invasion_witness: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub negativity_proofs: Vec<PatternRecord>,
}

fn names(game: &SymmetricGame, set: &SupportSet) -> Vec<String> {
    set.iter().map(|i| game.name(i).to_string()).collect()
}

impl CertificateDocument {
    pub fn from_verdict(game: &SymmetricGame, verdict: &EssVerdict, provenance: Option<String>) -> Self {
        CertificateDocument {
            tool: ToolInfo {
                name: TOOL_NAME.into(),
                version: TOOL_VERSION.into(),
            },
            provenance,
            subject: Subject {
                game_sha256: game_hash(game),
                sigma: format_strategy(&verdict.sigma),
            },
            status: verdict.status.as_str().into(),
            nash: NashRecord {
                value: format_rational(&verdict.nash.value),
                pure_payoffs: verdict.nash.pure_payoffs.iter().map(format_rational).collect(),
                best_responses: names(game, &verdict.nash.best_responses),
            },
            violator: verdict.violator.map(|v| game.name(v).to_string()),
            invasion_witness: verdict.invasion_witness.as_ref().map(format_strategy),
            negativity_proofs: verdict
                .negativity_proofs
                .iter()
                .map(|b| PatternRecord {
                    positive: names(game, &b.pattern.positive),
                    negative: names(game, &b.pattern.negative),
                    maximum: format_rational(&b.maximum),
                    argmax: b.argmax.iter().map(format_rational).collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("certificate: {e}")))
    }
}

fn reject<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Certificate(msg.into()))
}

fn parse_vector(values: &[String]) -> Result<Vec<Rational>> {
    values.iter().map(|v| parse_rational(v)).collect()
}

fn parse_status(s: &str) -> Result<EssStatus> {
    match s {
        "ESS" => Ok(EssStatus::Ess),
        "NOT_NASH" => Ok(EssStatus::NotNash),
        "INVADED" => Ok(EssStatus::Invaded),
        other => reject(format!("unknown status {other:?}")),
    }
}

/// Replays every claim of `doc` against `game`; returns the certified status.
pub fn recheck(game: &SymmetricGame, doc: &CertificateDocument) -> Result<EssStatus> {
    if doc.subject.game_sha256 != game_hash(game) {
        return reject("game hash does not match (stale certificate or different game)");
    }
    let status = parse_status(&doc.status)?;
    let sigma = MixedStrategy::new(parse_vector(&doc.subject.sigma)?)?;
    game.check_strategy(&sigma)?;

    let pure = game.payoffs_against(&sigma)?;
    let value = dot(sigma.probs(), &pure);
    if parse_rational(&doc.nash.value)? != value {
        return reject("recorded u(σ,σ) is wrong");
    }
    if parse_vector(&doc.nash.pure_payoffs)? != pure {
        return reject("recorded pure-strategy payoffs are wrong");
    }
    let responses = game.best_response_set(&sigma)?;
    if resolve_names(game, doc.nash.best_responses.iter().map(String::as_str))? != responses {
        return reject("recorded best-response set is wrong");
    }
    let is_nash = pure.iter().all(|p| *p <= value);

    match status {
        EssStatus::NotNash => {
            let Some(name) = &doc.violator else {
                return reject("NOT_NASH without a violator");
            };
            let v = game
                .index_of(name)
                .ok_or_else(|| Error::Certificate(format!("unknown violator {name:?}")))?;
            if pure[v] <= value {
                return reject("violator does not beat σ against σ");
            }
        }
        EssStatus::Invaded => {
            if !is_nash {
                return reject("INVADED requires σ to be a symmetric Nash strategy");
            }
            let Some(w) = &doc.invasion_witness else {
                return reject("INVADED without a witness");
            };
            let w = MixedStrategy::new(parse_vector(w)?)?;
            game.check_strategy(&w)?;
            if w == sigma {
                return reject("witness equals σ");
            }
            let against_sigma = game.payoff_mixed(&w, &sigma)?;
            let invades = against_sigma > value
                || (against_sigma == value && game.payoff_mixed(&w, &w)? >= game.payoff_mixed(&sigma, &w)?);
            if !invades {
                return reject("witness does not invade σ");
            }
        }
        EssStatus::Ess => {
            if !is_nash {
                return reject("ESS requires σ to be a symmetric Nash strategy");
            }
            recheck_patterns(game, &sigma, &responses, &doc.negativity_proofs)?;
        }
    }
    Ok(status)
}

fn recheck_patterns(
    game: &SymmetricGame,
    sigma: &MixedStrategy,
    responses: &SupportSet,
    records: &[PatternRecord],
) -> Result<()> {
    let cone = TangentCone::new(game, sigma)?;
    let mut expected: Vec<SupportSet> = Vec::new();
    let free: Vec<usize> = cone.free_indices.iter().collect();
    for bits in 1u64..(1u64 << free.len()) {
        let neg = SupportSet::new((0..free.len()).filter(|b| bits >> b & 1 == 1).map(|b| free[b]));
        if neg.len() < responses.len() {
            expected.push(neg);
        }
    }
    let mut seen = Vec::new();
    for rec in records {
        let positive = resolve_names(game, rec.positive.iter().map(String::as_str))?;
        let negative = resolve_names(game, rec.negative.iter().map(String::as_str))?;
        if positive.is_empty()
            || negative.is_empty()
            || !negative.is_subset(&cone.free_indices)
            || !positive.is_disjoint(&negative)
            || SupportSet::new(positive.iter().chain(negative.iter())) != *responses
        {
            return reject("a recorded sign pattern is not maximal");
        }
        let maximum = parse_rational(&rec.maximum)?;
        if !maximum.is_negative() {
            return reject("a recorded maximum is not negative");
        }
        let z = parse_vector(&rec.argmax)?;
        if z.len() != game.size() {
            return reject("argmax has the wrong length");
        }
        let pos_sum: Rational = positive.iter().map(|i| z[i].clone()).sum();
        let neg_sum: Rational = negative.iter().map(|i| z[i].clone()).sum();
        let in_polytope = pos_sum == Rational::from_integer(1.into())
            && neg_sum == Rational::from_integer((-1).into())
            && positive.iter().all(|i| !z[i].is_negative())
            && negative.iter().all(|i| !z[i].is_positive())
            && (0..game.size())
                .filter(|&i| !responses.contains(i))
                .all(|i| z[i].is_zero());
        if !in_polytope || quadratic_form(game, &z) != maximum {
            return reject("argmax does not attain the recorded maximum inside its pattern");
        }
        let fresh = recompute_pattern_bound(
            game,
            sigma,
            &SignPattern {
                positive: positive.clone(),
                negative: negative.clone(),
            },
        )?;
        if fresh.maximum != maximum {
            return reject("recorded maximum is not the maximum of its pattern");
        }
        seen.push(negative);
    }
    seen.sort();
    expected.sort();
    if seen != expected {
        return reject("the recorded sign patterns do not cover every maximal pattern exactly once");
    }
    Ok(())
}
