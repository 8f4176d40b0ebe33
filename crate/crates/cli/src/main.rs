use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use atc_core::entailment::{is_modular, Engine};
use atc_core::kripke::{canonical_frame, model_to_dot, model_to_json, KripkeModel, ModelSet};
use atc_core::model_change::{contract_model_set, revise_model_set, ChangeOutcome};
use atc_core::postulates::{check_postulates, Verdict};
use atc_core::syntax::{parse_law, parse_query, parse_theory_with_warnings, ActionTheory, Law, QueryError};
use atc_core::theory_change::{contract, theory_from_model_set, ContractOptions};
use atc_core::Signature;
use atc_service::Service;

/// Change action theories: check modularity, decide entailment, contract
/// and revise laws.
#[derive(Parser)]
#[command(name = "atc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TheoryLaw {
    /// Theory file.
    file: PathBuf,
    /// Law, e.g. "effect token => [buy] hot".
    law: String,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a theory and report its size and warnings.
    Check { file: PathBuf },
    /// Report whether the theory is modular, with its implicit static laws.
    Modular { file: PathBuf },
    /// Decide whether the theory entails a law.
    Entail(TheoryLaw),
    /// Contract a law; writes one theory file per candidate with --out.
    Contract {
        #[command(flatten)]
        input: TheoryLaw,
        /// Contract the canonical model instead of the theory.
        #[arg(long)]
        semantic: bool,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Revise the canonical model by a law and print the induced theories.
    Revise(TheoryLaw),
    /// Print the canonical frame.
    Canonical {
        file: PathBuf,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check the change postulates for contracting a law.
    Postulates {
        #[command(flatten)]
        input: TheoryLaw,
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, env = "ATC_PORT", default_value_t = 8080)]
        port: u16,
        /// Directory for persisted theories and sessions; in memory if unset.
        #[arg(long, env = "ATC_DATA")]
        data: Option<PathBuf>,
    },
}

/// The query is well-formed but not one of the three law shapes.
#[derive(Debug)]
struct Unsupported(String);

impl fmt::Display for Unsupported {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unsupported query shape: {}", self.0)
    }
}

impl std::error::Error for Unsupported {}

fn load(path: &Path) -> Result<ActionTheory> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let (t, warnings) = parse_theory_with_warnings(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(t)
}

fn read_law(sig: &Signature, text: &str) -> Result<Law> {
    let law_err = match parse_law(sig, text) {
        Ok(l) => return Ok(l),
        Err(e) => e,
    };
    match parse_query(sig, text) {
        Ok(q) if q.laws().len() == 1 => Ok(q.laws()[0].clone()),
        Ok(_) => Err(Unsupported("a conjunction of laws".into()).into()),
        Err(QueryError::Unsupported(s)) => Err(Unsupported(s).into()),
        Err(QueryError::Parse(_)) => bail!("malformed law: {law_err}"),
    }
}

fn load_with_law(input: &TheoryLaw) -> Result<(ActionTheory, Law)> {
    let t = load(&input.file)?;
    let l = read_law(t.sig(), &input.law)?;
    Ok((t, l))
}

/// The canonical model as a one-element set; refuses non-modular theories,
/// whose canonical frame is not a model.
fn canonical_set(t: &ActionTheory) -> Option<ModelSet> {
    if is_modular(t).modular {
        Some([canonical_frame(t)].into_iter().collect())
    } else {
        eprintln!("theory is not modular, so it has no canonical model; see `atc modular`");
        None
    }
}

fn check(file: &Path) -> Result<u8> {
    let t = load(file)?;
    println!(
        "{}: {} atoms, {} actions, {} laws ({} static, {} effect, {} executability)",
        t.name(),
        t.sig().atom_count(),
        t.sig().action_count(),
        t.card(),
        t.statics().len(),
        t.effects().len(),
        t.execs().len()
    );
    Ok(0)
}

fn modular(file: &Path) -> Result<u8> {
    let t = load(file)?;
    let r = is_modular(&t);
    if r.modular {
        println!("modular");
        return Ok(0);
    }
    println!("not modular");
    for (i, f) in r.implicit_laws.iter().enumerate() {
        println!("  round {}: {}", i + 1, f.display(t.sig()));
    }
    println!("  all rounds: {}", r.final_law.display(t.sig()));
    Ok(1)
}

fn entail(input: &TheoryLaw) -> Result<u8> {
    let (t, l) = load_with_law(input)?;
    if Engine::new(&t).entails_law(&l)? {
        println!("entailed");
        Ok(0)
    } else {
        println!("not entailed");
        Ok(1)
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

fn contract_theory(t: &ActionTheory, l: &Law, out: Option<&Path>) -> Result<u8> {
    let sig = t.sig();
    let cands = contract(t, l, &ContractOptions::default())?;
    println!("{} candidate(s) for contracting `{}`", cands.len(), l.display(sig));
    for (i, c) in cands.iter().enumerate() {
        let p = &c.provenance;
        let id = format!("c{}", i + 1);
        if p.unchanged {
            println!("{id}: unchanged ({} laws)", c.theory.card());
        } else {
            let mut parts = vec![format!("{} laws", c.theory.card())];
            if let Some(ctx) = p.context {
                parts.push(format!("context {}", ctx.term(sig.atom_count()).display(sig)));
            }
            if let Some(pp) = p.pi_prime {
                parts.push(format!("target {}", pp.display(sig)));
            }
            if let Some(w) = p.added_world {
                parts.push(format!("world {}", w.display(sig)));
            }
            if !p.weakened.is_empty() {
                parts.push(format!("{} weakened", p.weakened.len()));
            }
            println!("{id}: {}", parts.join(", "));
        }
        if let Some(dir) = out {
            let path = write_file(dir, &format!("{}-{id}.atc", t.name()), &c.theory.render())?;
            println!("    wrote {}", path.display());
        }
    }
    Ok(0)
}

fn print_outcome(sig: &Signature, outcome: &ChangeOutcome) {
    for (i, r) in outcome.results.iter().enumerate() {
        println!("m{}:", i + 1);
        for c in &r.changes {
            let d = &c.delta;
            for w in &d.added_worlds {
                println!("    + world {}", w.display(sig));
            }
            for w in &d.removed_worlds {
                println!("    - world {}", w.display(sig));
            }
            for (a, u, v) in &d.added_arrows {
                println!("    + {} -{}-> {}", u.display(sig), sig.action_name(*a), v.display(sig));
            }
            for (a, u, v) in &d.removed_arrows {
                println!("    - {} -{}-> {}", u.display(sig), sig.action_name(*a), v.display(sig));
            }
        }
    }
}

fn contract_semantic(t: &ActionTheory, l: &Law, out: Option<&Path>) -> Result<u8> {
    let Some(set) = canonical_set(t) else { return Ok(1) };
    let sig = t.sig();
    let outcome = contract_model_set(&set, l)?;
    println!("{} result(s) for contracting `{}` from the canonical model", outcome.results.len(), l.display(sig));
    if let Some(reason) = outcome.reason {
        println!("no change possible: {}", reason.code());
    }
    print_outcome(sig, &outcome);
    if let Some(dir) = out {
        for (i, r) in outcome.results.iter().enumerate() {
            let models: Vec<serde_json::Value> = r.models.iter().map(|m| model_to_json(m, sig)).collect();
            let text = serde_json::to_string_pretty(&models)?;
            let path = write_file(dir, &format!("{}-m{}.json", t.name(), i + 1), &text)?;
            println!("    wrote {}", path.display());
        }
    }
    Ok(0)
}

fn revise(input: &TheoryLaw) -> Result<u8> {
    let (t, l) = load_with_law(input)?;
    let Some(set) = canonical_set(&t) else { return Ok(1) };
    let sig = t.sig();
    let outcome = revise_model_set(&set, &l)?;
    println!("{} result(s) for revising by `{}`", outcome.results.len(), l.display(sig));
    if let Some(reason) = outcome.reason {
        println!("no revision possible: {}", reason.code());
        return Ok(1);
    }
    print_outcome(sig, &outcome);
    for (i, r) in outcome.results.iter().enumerate() {
        let induced = theory_from_model_set(&r.models, sig, t.name())?;
        println!("--- theory of m{}", i + 1);
        print!("{}", induced.render());
    }
    Ok(0)
}

fn canonical(file: &Path, dot: bool, json: bool) -> Result<u8> {
    let t = load(file)?;
    if !is_modular(&t).modular {
        eprintln!("warning: theory is not modular; the canonical frame is not a model of it");
    }
    let m = canonical_frame(&t);
    let sig = t.sig();
    if dot {
        print!("{}", model_to_dot(&m, sig));
    } else if json {
        println!("{}", serde_json::to_string_pretty(&model_to_json(&m, sig))?);
    } else {
        print_model(&m, sig);
    }
    Ok(0)
}

fn print_model(m: &KripkeModel, sig: &Signature) {
    println!("{} worlds, {} arrows", m.world_count(), m.arrow_count());
    for w in m.worlds() {
        println!("  {}", w.display(sig));
    }
    for (a, u, v) in m.labelled_arrows() {
        println!("  {} -{}-> {}", u.display(sig), sig.action_name(a), v.display(sig));
    }
}

fn postulates(input: &TheoryLaw, json: bool) -> Result<u8> {
    let (t, l) = load_with_law(input)?;
    let report = check_postulates(&t, &l)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report.to_json())?);
    } else {
        println!("{} candidate(s)", report.candidates.len());
        for r in &report.results {
            let verdict = match r.verdict {
                Verdict::Holds => "holds",
                Verdict::Fails => "FAILS",
                Verdict::PreconditionUnmet => "precondition unmet",
            };
            let name = serde_json::to_value(r.postulate)?;
            print!("{:<24} {verdict}", name.as_str().unwrap_or_default());
            match &r.witness {
                Some(w) => println!(": {w}"),
                None => println!(),
            }
        }
    }
    Ok(if report.any_failed() { 1 } else { 0 })
}

fn serve(port: u16, data: Option<PathBuf>) -> Result<u8> {
    let service = match &data {
        Some(dir) => Service::open(dir)?,
        None => Service::in_memory(),
    };
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
        eprintln!("listening on {}", listener.local_addr()?);
        atc_service::serve(listener, Arc::new(service)).await
    })?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check { file } => check(&file),
        Command::Modular { file } => modular(&file),
        Command::Entail(input) => entail(&input),
        Command::Contract { input, semantic, out } => {
            let (t, l) = load_with_law(&input)?;
            if semantic {
                contract_semantic(&t, &l, out.as_deref())
            } else {
                contract_theory(&t, &l, out.as_deref())
            }
        }
        Command::Revise(input) => revise(&input),
        Command::Canonical { file, dot, json } => canonical(&file, dot, json),
        Command::Postulates { input, json } => postulates(&input, json),
        Command::Serve { port, data } => serve(port, data),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<Unsupported>().is_some() { 3 } else { 2 })
        }
    }
}
