use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use esscert::clique::{solve, CliqueAnswer, MinmaxCliqueInstance};
use esscert::ess::{find_ess, verify_ess};
use esscert::format::instance_to_json;
use esscert::gadgets::{duplicate_transform, rps_transform};
use esscert::reduction::{expected_ess_profile, reduce};
use rayon::prelude::*;

use crate::commands::load_instance;
use crate::RoundtripArgs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoundtripMode {
    /// Clique answer "no" iff the reduced game has an ESS inside the target.
    Restricted,
    /// As `restricted`, and duplication keeps the existence answer with no
    /// ESS mass on duplicates.
    Duplicate,
    /// As `duplicate` with triplication; instances that are not normalized
    /// are skipped.
    Rps,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOutcome {
    Ok,
    Skipped(String),
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripRow {
    pub name: String,
    pub clique_yes: Option<bool>,
    pub restricted_ess: Option<bool>,
    pub transformed_ess: Option<bool>,
    pub outcome: RowOutcome,
}

fn yes_no(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    }
}

/// Runs the mode's checks on one instance.
pub fn check_instance(name: &str, instance: &MinmaxCliqueInstance, mode: RoundtripMode) -> Result<RoundtripRow> {
    let mut row = RoundtripRow {
        name: name.to_string(),
        clique_yes: None,
        restricted_ess: None,
        transformed_ess: None,
        outcome: RowOutcome::Ok,
    };
    if mode == RoundtripMode::Rps && !instance.is_normalized() {
        row.outcome = RowOutcome::Skipped("instance is not normalized".into());
        return Ok(row);
    }
    let answer = solve(instance);
    row.clique_yes = Some(answer.is_yes());
    let reduced = reduce(instance)?;
    let restricted = find_ess(&reduced.game, Some(&reduced.target))?;
    row.restricted_ess = Some(!restricted.is_empty());
    let mut problems = Vec::new();
    if answer.is_yes() == !restricted.is_empty() {
        problems.push("clique answer and restricted ESS existence disagree".to_string());
    }
    if let CliqueAnswer::No { selector, .. } = &answer {
        let profile = expected_ess_profile(instance, selector)?;
        if !verify_ess(&reduced.game, &profile)?.is_ess() {
            problems.push("the failing selector's profile is not an ESS".to_string());
        }
    }
    let transformed = match mode {
        RoundtripMode::Restricted => None,
        RoundtripMode::Duplicate => Some(duplicate_transform(&reduced.game, &reduced.target)?),
        RoundtripMode::Rps => Some(rps_transform(&reduced.game, &reduced.target)?),
    };
    if let Some(t) = transformed {
        let found = find_ess(&t.game, None)?;
        row.transformed_ess = Some(!found.is_empty());
        if found.is_empty() != restricted.is_empty() {
            problems.push("the transform changed ESS existence".to_string());
        }
        if found.iter().any(|(s, _)| !s.support().is_subset(&t.preserved_target)) {
            problems.push("an ESS puts mass on a copied strategy".to_string());
        }
    }
    if !problems.is_empty() {
        row.outcome = RowOutcome::Failed(problems.join("; "));
    }
    Ok(row)
}

fn fails(instance: &MinmaxCliqueInstance, mode: RoundtripMode) -> bool {
    check_instance("", instance, mode)
        .map(|r| matches!(r.outcome, RowOutcome::Failed(_)))
        .unwrap_or(false)
}

/// Greedily drops vertices, edges and threshold while the instance keeps
/// failing.
pub fn shrink_failure(instance: &MinmaxCliqueInstance, mode: RoundtripMode) -> MinmaxCliqueInstance {
    let mut current = instance.clone();
    'outer: loop {
        for v in 0..current.num_vertices() {
            let candidate = current.without_vertex(v);
            if fails(&candidate, mode) {
                current = candidate;
                continue 'outer;
            }
        }
        let edges = current.edges();
        for e in 0..edges.len() {
            let mut fewer = edges.clone();
            fewer.remove(e);
            if let Ok(candidate) = current.with_edges(&fewer) {
                if fails(&candidate, mode) {
                    current = candidate;
                    continue 'outer;
                }
            }
        }
        if current.k() > 2 {
            if let Ok(candidate) = current.with_k(current.k() - 1) {
                if fails(&candidate, mode) {
                    current = candidate;
                    continue 'outer;
                }
            }
        }
        return current;
    }
}

fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == "json"));
    files.sort();
    Ok(files)
}

pub fn cmd_roundtrip(args: &RoundtripArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let files = corpus_files(&args.corpus_dir)?;
    let instances = files
        .iter()
        .map(|p| {
            let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            load_instance(p).map(|i| (name, i))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build()?;
    let rows: Vec<RoundtripRow> = pool.install(|| {
        instances
            .par_iter()
            .map(|(name, inst)| check_instance(name, inst, args.mode))
            .collect::<Result<_>>()
    })?;

    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(8).max(8);
    writeln!(out, "{:width$}  clique  restricted  transformed  result", "instance")?;
    let (mut ok, mut skipped, mut failed) = (0, 0, 0);
    for row in &rows {
        let result = match &row.outcome {
            RowOutcome::Ok => {
                ok += 1;
                "ok".to_string()
            }
            RowOutcome::Skipped(why) => {
                skipped += 1;
                format!("skip ({why})")
            }
            RowOutcome::Failed(why) => {
                failed += 1;
                format!("FAIL ({why})")
            }
        };
        writeln!(
            out,
            "{:width$}  {:6}  {:10}  {:11}  {result}",
            row.name,
            yes_no(row.clique_yes),
            yes_no(row.restricted_ess),
            yes_no(row.transformed_ess),
        )?;
    }
    writeln!(out, "{} instances: {ok} ok, {skipped} skipped, {failed} failed", rows.len())?;
    if failed > 0 {
        let smallest = rows
            .iter()
            .zip(&instances)
            .filter(|(r, _)| matches!(r.outcome, RowOutcome::Failed(_)))
            .map(|(_, (_, inst))| inst)
            .min_by_key(|inst| (inst.num_vertices(), inst.edges().len()))
            .expect("at least one failure");
        let minimal = shrink_failure(smallest, args.mode);
        fs::write(&args.dump, instance_to_json(&minimal))
            .with_context(|| format!("cannot write {}", args.dump.display()))?;
        writeln!(err, "minimal failing instance written to {}", args.dump.display())?;
    }
    Ok(failed == 0)
}
