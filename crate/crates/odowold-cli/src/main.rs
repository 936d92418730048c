//! Command-line front end: parse representation files, verify and classify,
//! run the matrix oracle, emit patches, reduce words, render DOT.
//!
//! Exit codes: 0 pass/conclusive, 1 usage error, 2 violations or
//! disagreements, 3 only-Unknown classifications.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use odowold::classify::{ClassifySession, ComponentId, Status};
use odowold::format::{emit_rep_file, parse_rep_file, render_dot};
use odowold::oracle::{
    build_window, check_relations_numeric, compare_with_classifier, project_component,
    DEFAULT_VERTEX_CAP,
};
use odowold::rep::{is_nica_covariant, make_builtin, verify_relations, AtomicRep, VertexKey};
use odowold::semigroup::GeneratorWord;

#[derive(Parser)]
#[command(
    name = "odowold",
    about = "Wold-type decomposition toolkit for isometric representations of odometer semigroups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the defining relations and the Nica covariance condition.
    Check {
        #[command(flatten)]
        input: RepInput,
        /// Exploration depth from the seed vertices.
        #[arg(long, default_value_t = 6)]
        depth: u32,
        /// Seed vertices (semicolon-separated keys); defaults to the
        /// representation's canonical seeds.
        #[arg(long)]
        seeds: Option<String>,
    },
    /// Classify vertices into the four decomposition components.
    Classify {
        #[command(flatten)]
        input: RepInput,
        /// Vertices to classify (semicolon-separated keys); defaults to the
        /// canonical seeds.
        #[arg(long)]
        vertices: Option<String>,
        #[arg(long, default_value_t = 32)]
        budget: u32,
        /// Output format: json or table.
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Build a matrix window, report residuals and projection norms, and
    /// optionally compare against the classifier.
    Oracle {
        #[command(flatten)]
        input: RepInput,
        #[arg(long, default_value_t = 6)]
        radius: u32,
        /// Projection truncation depth.
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Cross-check projection norms against the classifier.
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        seeds: Option<String>,
        #[arg(long, default_value_t = 32)]
        budget: u32,
        /// Directory for the window matrices as text (row-major re,im pairs).
        #[arg(long)]
        dump_matrices: Option<String>,
    },
    /// Emit a finite patch of a builtin family in the file format.
    Builtin {
        /// Family name: left_regular_on, left_regular_fn_unitary, su_tree,
        /// weak_shift, inductive, slocinski.
        name: String,
        #[arg(long)]
        n: u8,
        /// Family parameters as key=value (lambda=1/3, stream=thue_morse).
        #[arg(long = "param")]
        params: Vec<String>,
        /// Output path ("-" for stdout).
        #[arg(long)]
        emit: String,
        #[arg(long, default_value_t = 4)]
        radius: u32,
    },
    /// Reduce a generator word to both normal forms.
    NormalForm {
        /// Whitespace-separated tokens, e.g. "w w v2 w v1".
        word: String,
        #[arg(long)]
        n: u8,
    },
    /// Render the explored patch as DOT.
    Render {
        #[command(flatten)]
        input: RepInput,
        /// Output path ("-" for stdout).
        #[arg(long)]
        dot: String,
        #[arg(long, default_value_t = 4)]
        radius: u32,
        #[arg(long)]
        seeds: Option<String>,
    },
}

#[derive(Args)]
struct RepInput {
    /// Path to a representation file.
    file: Option<String>,
    /// Builtin family name instead of a file.
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
    /// Rank for --builtin.
    #[arg(long, requires = "builtin")]
    n: Option<u8>,
    /// Parameters for --builtin as key=value.
    #[arg(long = "param", requires = "builtin")]
    params: Vec<String>,
}

enum Loaded {
    Rep(Box<AtomicRep>),
    /// The file parsed far enough to be judged a broken presentation
    /// (overlapping ranges, duplicate arrows, bad digits).
    Presentation(String),
}

impl RepInput {
    fn load(&self) -> Result<AtomicRep> {
        match self.load_distinguished()? {
            Loaded::Rep(rep) => Ok(*rep),
            Loaded::Presentation(msg) => Err(anyhow!(msg)),
        }
    }

    fn load_distinguished(&self) -> Result<Loaded> {
        if let Some(name) = &self.builtin {
            let n = self.n.ok_or_else(|| anyhow!("--builtin requires --n"))?;
            let params = parse_params(&self.params)?;
            return match make_builtin(name, n, &params) {
                Ok(rep) => Ok(Loaded::Rep(Box::new(rep))),
                Err(e) => Err(anyhow!(e.to_string())),
            };
        }
        let path = self
            .file
            .as_ref()
            .ok_or_else(|| anyhow!("expected a representation file or --builtin"))?;
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
        match parse_rep_file(&text) {
            Ok(rep) => Ok(Loaded::Rep(Box::new(rep))),
            Err(e @ odowold::format::ParseError::Presentation { .. }) => {
                Ok(Loaded::Presentation(format!("{path}: {e}")))
            }
            Err(e) => Err(anyhow!("{path}: {e}")),
        }
    }
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, String>> {
    let mut params = BTreeMap::new();
    for tok in raw {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| anyhow!("expected key=value, got {tok:?}"))?;
        params.insert(k.to_string(), v.to_string());
    }
    Ok(params)
}

/// Splits a key list on semicolons (and on commas outside parentheses or
/// brackets, so plain word keys can still be comma-separated).
fn parse_keys(raw: &str) -> Vec<VertexKey> {
    let mut keys = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in raw.chars() {
        match c {
            '(' | '[' => {
                depth += 1;
                cur.push(c);
            }
            ')' | ']' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            ';' => {
                if !cur.trim().is_empty() {
                    keys.push(VertexKey::new(cur.trim()));
                }
                cur.clear();
            }
            ',' if depth == 0 => {
                if !cur.trim().is_empty() {
                    keys.push(VertexKey::new(cur.trim()));
                }
                cur.clear();
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        keys.push(VertexKey::new(cur.trim()));
    }
    keys
}

fn seeds_for(rep: &AtomicRep, raw: &Option<String>) -> Result<Vec<VertexKey>> {
    let seeds = match raw {
        Some(list) => parse_keys(list),
        None => rep.canonical_seeds(),
    };
    if seeds.is_empty() {
        bail!("no seed vertices");
    }
    for s in &seeds {
        if !rep.contains(s) {
            bail!("seed {s} is not a vertex of the representation");
        }
    }
    Ok(seeds)
}

fn write_output(path: &str, content: &str) -> Result<()> {
    if path == "-" {
        print!("{content}");
        std::io::stdout().flush()?;
    } else {
        fs::write(path, content).with_context(|| format!("cannot write {path}"))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check {
            input,
            depth,
            seeds,
        } => {
            let rep = match input.load_distinguished()? {
                Loaded::Rep(rep) => *rep,
                Loaded::Presentation(msg) => {
                    let report = serde_json::json!({
                        "relations": { "passed": false, "violations": [msg] },
                    });
                    println!("{}", serde_json::to_string_pretty(&report)?);
                    return Ok(2);
                }
            };
            let seeds = seeds_for(&rep, &seeds)?;
            let relations = verify_relations(&rep, &seeds, depth);
            let nica = is_nica_covariant(&rep, &seeds, depth);
            let report = serde_json::json!({
                "explored": relations.explored,
                "relations": {
                    "passed": relations.passed(),
                    "violations": relations.violations,
                },
                "nica_covariant": {
                    "passed": nica.passed(),
                    "violations": nica.violations,
                },
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if relations.passed() { 0 } else { 2 })
        }
        Command::Classify {
            input,
            vertices,
            budget,
            format,
        } => {
            let rep = input.load()?;
            let targets = seeds_for(&rep, &vertices)?;
            let mut session = ClassifySession::new(&rep, budget);
            let classifications: Vec<_> = targets.iter().map(|v| session.classify(v)).collect();
            let any_conclusive = classifications.iter().any(|c| c.resolved.is_some());
            match format.as_str() {
                "json" => {
                    let records: Vec<_> = classifications.iter().map(|c| c.to_record()).collect();
                    println!("{}", serde_json::to_string_pretty(&records)?);
                }
                "table" => {
                    println!(
                        "{:<24} {:<8} {:<8} {:<8} {:<8} {:<8} resolved",
                        "vertex", "uu", "us", "su", "ws", "ss"
                    );
                    let status = |s: Status| match s {
                        Status::In => "in",
                        Status::Out => "out",
                        Status::Unknown => "unknown",
                    };
                    for c in &classifications {
                        println!(
                            "{:<24} {:<8} {:<8} {:<8} {:<8} {:<8} {}",
                            c.vertex.to_string(),
                            status(c.uu.status),
                            status(c.us.status),
                            status(c.su.status),
                            status(c.ws.status),
                            c.ss.as_ref().map_or("-", |v| status(v.status)),
                            c.resolved.map_or("-", |r| r.name()),
                        );
                    }
                }
                other => bail!("unknown format {other:?} (expected json or table)"),
            }
            Ok(if any_conclusive { 0 } else { 3 })
        }
        Command::Oracle {
            input,
            radius,
            depth,
            tol,
            compare,
            seeds,
            budget,
            dump_matrices,
        } => {
            let rep = input.load()?;
            let seeds = seeds_for(&rep, &seeds)?;
            let win = build_window(&rep, &seeds, radius, DEFAULT_VERTEX_CAP)?;
            if let Some(dir) = &dump_matrices {
                fs::create_dir_all(dir).with_context(|| format!("cannot create {dir}"))?;
                let mut dump = |name: String, m: &odowold::matrix::CMatrix| -> Result<()> {
                    let path = format!("{dir}/{name}.txt");
                    let mut out = Vec::new();
                    m.write_text(&mut out)?;
                    fs::write(&path, out).with_context(|| format!("cannot write {path}"))?;
                    Ok(())
                };
                dump("w".to_string(), &win.w)?;
                for (i, m) in win.v.iter().enumerate() {
                    dump(format!("v{}", i + 1), m)?;
                }
            }
            let numeric = check_relations_numeric(&win, tol);
            let mut projections: BTreeMap<String, BTreeMap<&'static str, f64>> = BTreeMap::new();
            for component in [
                ComponentId::UU,
                ComponentId::US,
                ComponentId::SU,
                ComponentId::WS,
            ] {
                if let Ok(values) = project_component(&win, component, depth) {
                    for (vertex, value) in values {
                        projections
                            .entry(vertex.to_string())
                            .or_default()
                            .insert(component.name(), value);
                    }
                }
            }
            let agreement = if compare {
                Some(compare_with_classifier(
                    &rep, &seeds, radius, depth, tol, budget,
                )?)
            } else {
                None
            };
            let report = serde_json::json!({
                "window_size": win.len(),
                "numeric": numeric,
                "projections": projections,
                "agreement": agreement,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            let failed = numeric.max_relation_residual() > tol
                || agreement.as_ref().is_some_and(|a| !a.passed());
            Ok(if failed { 2 } else { 0 })
        }
        Command::Builtin {
            name,
            n,
            params,
            emit,
            radius,
        } => {
            let params = parse_params(&params)?;
            let rep = make_builtin(&name, n, &params).map_err(|e| anyhow!(e.to_string()))?;
            let text = emit_rep_file(&rep, &rep.canonical_seeds(), radius);
            write_output(&emit, &text)?;
            Ok(0)
        }
        Command::NormalForm { word, n } => {
            let parsed = GeneratorWord::parse(&word, n).map_err(|e| anyhow!(e.to_string()))?;
            let element = parsed.reduce();
            println!("{element}");
            println!("{}", element.to_left_form());
            Ok(0)
        }
        Command::Render {
            input,
            dot,
            radius,
            seeds,
        } => {
            let rep = input.load()?;
            let seeds = seeds_for(&rep, &seeds)?;
            let text = render_dot(&rep, &seeds, radius);
            write_output(&dot, &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders --help and --version through the error path too
            if err.use_stderr() {
                eprint!("{err}");
                return ExitCode::from(1);
            }
            print!("{err}");
            return ExitCode::from(0);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
