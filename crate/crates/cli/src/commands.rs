use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use esscert::certificate::{recheck, CertificateDocument};
use esscert::clique::{remove_dominated, solve, CliqueAnswer, MinmaxCliqueInstance, Selector};
use esscert::corpus::{normalized_corpus, default_exhaustive, random_corpus, CorpusEntry, RandomShape};
use esscert::ess::{find_ess_with, verify_ess, EssStatus, SearchOptions};
use esscert::format::{
    describe_strategy, instance_to_json, parse_game_file, parse_instance, parse_strategy_vector, resolve_names,
    GameFile,
};
use esscert::gadgets::{duplicate_transform, rps_transform};
use esscert::rational::format_rational;
use esscert::reduction::reduce;
use esscert::SymmetricGame;

use crate::{
    AuditUbrArgs, CheckCertificateArgs, CorpusKind, FindEssArgs, GenerateCorpusArgs, ReduceArgs, SolveCliqueArgs,
    TransformArgs, TransformMode, VerifyArgs,
};

pub(crate) fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn load_instance(path: &Path) -> Result<MinmaxCliqueInstance> {
    parse_instance(&read(path)?).with_context(|| format!("invalid instance {}", path.display()))
}

/// The game file and the game it describes.
pub fn load_game(path: &Path) -> Result<(GameFile, SymmetricGame)> {
    let file = parse_game_file(&read(path)?).with_context(|| format!("invalid game {}", path.display()))?;
    let game = file.to_game().with_context(|| format!("invalid game {}", path.display()))?;
    Ok((file, game))
}

/// `t(1)=2, t(2)=1` with the instance's own labels.
pub fn format_selector(instance: &MinmaxCliqueInstance, selector: &Selector) -> String {
    instance
        .rows()
        .iter()
        .enumerate()
        .map(|(i, label)| format!("t({label})={}", instance.cols()[selector.get(i)]))
        .collect::<Vec<_>>()
        .join(", ")
}

fn format_vertices(instance: &MinmaxCliqueInstance, vertices: &[usize]) -> String {
    let names: Vec<&str> = vertices.iter().map(|&v| instance.vertices()[v].as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

pub fn cmd_solve_clique(args: &SolveCliqueArgs, out: &mut dyn Write) -> Result<bool> {
    let mut instance = load_instance(&args.input)?;
    if args.preprocess {
        let (reduced, log) = remove_dominated(&instance);
        for r in &log {
            writeln!(out, "removed {} (dominated by {})", r.removed, r.dominator)?;
        }
        instance = reduced;
    }
    match solve(&instance) {
        CliqueAnswer::Yes { cliques } => {
            writeln!(out, "answer: yes")?;
            if args.all {
                for (selector, clique) in &cliques {
                    writeln!(out, "{}: {}", format_selector(&instance, selector), format_vertices(&instance, clique))?;
                }
            }
            Ok(true)
        }
        CliqueAnswer::No { selector, largest } => {
            writeln!(out, "answer: no")?;
            writeln!(out, "failing selector: {}", format_selector(&instance, &selector))?;
            writeln!(
                out,
                "largest clique: {} {}",
                largest.len(),
                format_vertices(&instance, &largest)
            )?;
            Ok(false)
        }
    }
}

pub fn cmd_find_ess(args: &FindEssArgs, out: &mut dyn Write) -> Result<bool> {
    let (file, game) = load_game(&args.input)?;
    let restriction = if let Some(names) = &args.restrict {
        Some(resolve_names(&game, names.iter().map(String::as_str))?)
    } else if args.restrict_target {
        Some(file.target_set(&game)?.context("the game file has no target set")?)
    } else {
        None
    };
    let options = SearchOptions {
        restriction,
        max_support: args.max_support,
        stop_at_first: false,
    };
    let found = find_ess_with(&game, &options)?;
    writeln!(out, "ESS found: {}", found.len())?;
    for (sigma, _) in &found {
        writeln!(out, "  {}", describe_strategy(&game, sigma))?;
    }
    if let Some(path) = &args.certificate_out {
        let docs: Vec<CertificateDocument> = found
            .iter()
            .map(|(_, v)| CertificateDocument::from_verdict(&game, v, Some(args.input.display().to_string())))
            .collect();
        write_file(path, &serde_json::to_string_pretty(&docs)?)?;
    }
    Ok(!found.is_empty())
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let (_, game) = load_game(&args.input)?;
    let sigma = parse_strategy_vector(&game, &args.strategy)?;
    let verdict = verify_ess(&game, &sigma)?;
    writeln!(out, "status: {}", verdict.status.as_str())?;
    writeln!(out, "sigma: {}", describe_strategy(&game, &sigma))?;
    writeln!(out, "u(sigma,sigma) = {}", format_rational(&verdict.nash.value))?;
    let responses: Vec<&str> = verdict.nash.best_responses.iter().map(|i| game.name(i)).collect();
    writeln!(out, "best responses: {}", responses.join(", "))?;
    match verdict.status {
        EssStatus::NotNash => {
            let v = verdict.violator.expect("violator recorded");
            writeln!(
                out,
                "violator: {} with u({},sigma) = {}",
                game.name(v),
                game.name(v),
                format_rational(&verdict.nash.pure_payoffs[v])
            )?;
        }
        EssStatus::Invaded => {
            let w = verdict.invasion_witness.as_ref().expect("witness recorded");
            writeln!(out, "invader: {}", describe_strategy(&game, w))?;
            writeln!(out, "u(invader,sigma) = {}", format_rational(&game.payoff_mixed(w, &sigma)?))?;
            writeln!(out, "u(sigma,invader) = {}", format_rational(&game.payoff_mixed(&sigma, w)?))?;
            writeln!(out, "u(invader,invader) = {}", format_rational(&game.payoff_mixed(w, w)?))?;
        }
        EssStatus::Ess => {
            writeln!(out, "sign patterns certified: {}", verdict.negativity_proofs.len())?;
        }
    }
    if let Some(path) = &args.certificate_out {
        let doc = CertificateDocument::from_verdict(&game, &verdict, args.provenance.clone());
        write_file(path, &doc.to_json())?;
    }
    Ok(verdict.is_ess())
}

pub fn cmd_reduce(args: &ReduceArgs, out: &mut dyn Write) -> Result<bool> {
    let instance = load_instance(&args.input)?;
    let reduced = reduce(&instance)?;
    let file = GameFile::from_game(&reduced.game).with_target(&reduced.game, &reduced.target);
    let text = serde_json::to_string_pretty(&file)?;
    match &args.output {
        Some(path) => write_file(path, &text)?,
        None => writeln!(out, "{text}")?,
    }
    if let Some(path) = &args.target_out {
        write_file(path, &serde_json::to_string(&file.target)?)?;
    }
    Ok(true)
}

pub fn cmd_transform(args: &TransformArgs, out: &mut dyn Write) -> Result<bool> {
    let (file, game) = load_game(&args.input)?;
    let target = match &args.target {
        Some(names) => resolve_names(&game, names.iter().map(String::as_str))?,
        None => file.target_set(&game)?.context("no --target given and the game file has no target set")?,
    };
    let transformed = match args.mode {
        TransformMode::Duplicate => duplicate_transform(&game, &target)?,
        TransformMode::Rps => rps_transform(&game, &target)?,
    };
    let text = serde_json::to_string_pretty(&GameFile::from_transform(&game, &transformed))?;
    match &args.output {
        Some(path) => write_file(path, &text)?,
        None => writeln!(out, "{text}")?,
    }
    Ok(true)
}

pub fn cmd_audit_ubr(args: &AuditUbrArgs, out: &mut dyn Write) -> Result<bool> {
    let (_, game) = load_game(&args.input)?;
    let mut all = true;
    for s in 0..game.size() {
        match game.unique_best_response_witness(s)? {
            Some(w) => writeln!(out, "{}\tok\t{}", game.name(s), describe_strategy(&game, &w))?,
            None => {
                all = false;
                writeln!(out, "{}\tFAIL", game.name(s))?;
            }
        }
    }
    writeln!(out, "{}", if all { "all unique best responses" } else { "some strategies are never a unique best response" })?;
    Ok(all)
}

pub fn cmd_generate_corpus(args: &GenerateCorpusArgs, out: &mut dyn Write) -> Result<bool> {
    fs::create_dir_all(&args.output).with_context(|| format!("cannot create {}", args.output.display()))?;
    let mut entries: Vec<CorpusEntry> = Vec::new();
    let all = args.kind == CorpusKind::All;
    if all || args.kind == CorpusKind::Exhaustive {
        entries.extend(default_exhaustive());
    }
    if all || args.kind == CorpusKind::Random {
        entries.extend(random_corpus(args.seed, args.random, &RandomShape::default()));
    }
    if all || args.kind == CorpusKind::Normalized {
        let normalized = normalized_corpus(args.seed, args.normalized, args.normalized_vertices);
        if normalized.len() < args.normalized {
            bail!("only {} distinct normalized instances found", normalized.len());
        }
        entries.extend(normalized);
    }
    for e in &entries {
        write_file(&args.output.join(format!("{}.json", e.name)), &instance_to_json(&e.instance))?;
    }
    writeln!(out, "wrote {} instances to {}", entries.len(), args.output.display())?;
    Ok(true)
}

pub fn cmd_check_certificate(args: &CheckCertificateArgs, out: &mut dyn Write) -> Result<bool> {
    let (_, game) = load_game(&args.input)?;
    let text = read(&args.certificate)?;
    let value: serde_json::Value = serde_json::from_str(&text).context("certificate is not JSON")?;
    let docs: Vec<CertificateDocument> = match value {
        serde_json::Value::Array(items) => items
            .into_iter()
            .map(serde_json::from_value)
            .collect::<Result<_, _>>()
            .context("malformed certificate")?,
        other => vec![serde_json::from_value(other).context("malformed certificate")?],
    };
    let mut all = true;
    for (n, doc) in docs.iter().enumerate() {
        match recheck(&game, doc) {
            Ok(status) => writeln!(out, "certificate {n}: {} confirmed", status.as_str())?,
            Err(e) => {
                all = false;
                writeln!(out, "certificate {n}: rejected: {e}")?;
            }
        }
    }
    Ok(all)
}
