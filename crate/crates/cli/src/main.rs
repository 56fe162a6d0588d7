//! Command-line front end: formula checking, model-wide validity,
//! reduction to the announcement-free fragment, model validation, the
//! axiom soundness suite, and the announcement-vs-effort diff search.
//!
//! Exit codes: 0 for success and true verdicts, 1 for false verdicts
//! (formula false, validation violations, suite failures, diff found),
//! 2 for usage or data errors.

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::PathBuf;
use topomc::formula::parse;
use topomc::model::{jewel_model, Situation, TopoModel, JEWEL_JSON};
use topomc::semantics::{find_distinguishing, BoxMode, Evaluator};
use topomc::reduce::reduction_trace;
use topomc::testkit::{soundness_suite, GenConfig};

#[derive(Parser)]
#[command(name = "topomc", version, about = "Model checker for a multi-agent logic of knowledge, topological interior, and (arbitrary) public announcements")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// How the arbitrary-announcement box quantifies.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Announcement)]
    mode: Mode,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Over updates definable by announcements (the logic's box).
    Announcement,
    /// Over all open neighbourhoods (effort-style).
    Effort,
}

impl From<Mode> for BoxMode {
    fn from(m: Mode) -> BoxMode {
        match m {
            Mode::Announcement => BoxMode::Announcement,
            Mode::Effort => BoxMode::Effort,
        }
    }
}

#[derive(Args)]
struct ModelArg {
    /// Path to a JSON model file; omit to use the bundled example model.
    #[arg(long)]
    model: Option<PathBuf>,
}

impl ModelArg {
    fn load(&self) -> Result<TopoModel> {
        let text = match &self.model {
            Some(path) => std::fs::read_to_string(path)
                .with_context(|| format!("cannot read model file {}", path.display()))?,
            None => JEWEL_JSON.to_string(),
        };
        topomc::model::load_model(&text).context("malformed model file")
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a formula at a situation.
    Check {
        #[command(flatten)]
        model: ModelArg,
        /// Generator naming the neighbourhood function.
        #[arg(long, default_value = "theta")]
        theta: String,
        /// Point id of the situation.
        #[arg(long)]
        point: String,
        /// Announcements applied left to right before checking.
        #[arg(long)]
        announce: Vec<String>,
        /// Formula to check.
        #[arg(long)]
        formula: String,
    },
    /// Check model-wide validity (truth at every situation).
    Valid {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        formula: String,
    },
    /// Rewrite an announcement formula into the announcement-free fragment.
    Reduce {
        #[arg(long)]
        formula: String,
        /// Also print each rewrite step.
        #[arg(long)]
        trace: bool,
    },
    /// Report the structural violations of a model file.
    Validate {
        #[command(flatten)]
        model: ModelArg,
    },
    /// Run the axiom soundness suite on random models.
    Axioms {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        max_points: usize,
    },
    /// Search for a situation where announcement- and effort-mode
    /// evaluation of the given formulas disagree.
    Diff {
        #[command(flatten)]
        model: ModelArg,
        /// Candidate formulas (repeatable).
        #[arg(long, required = true)]
        formula: Vec<String>,
    },
    /// Print the bundled example model.
    Example,
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    let mode: BoxMode = cli.mode.into();
    match cli.cmd {
        Cmd::Check {
            model,
            theta,
            point,
            announce,
            formula,
        } => {
            let m = model.load()?;
            let ev = Evaluator::new(&m, mode);
            let mut func = m.generator(&theta)?.func.clone();
            for text in &announce {
                let f = parse(text).with_context(|| format!("in announcement '{text}'"))?;
                func = ev.update(&func, &f)?;
            }
            let x = m.space().index_of(&point)?;
            let f = parse(&formula).context("in --formula")?;
            let verdict = ev.evaluate(&func, x, &f)?;
            if cli.json {
                println!("{}", json!({ "verdict": verdict }));
            } else {
                println!("{verdict}");
            }
            Ok(if verdict { 0 } else { 1 })
        }
        Cmd::Valid { model, formula } => {
            let m = model.load()?;
            let f = parse(&formula).context("in --formula")?;
            let verdict = Evaluator::new(&m, mode).valid_in_model(&f)?;
            if cli.json {
                println!("{}", json!({ "verdict": verdict }));
            } else {
                println!("{verdict}");
            }
            Ok(if verdict { 0 } else { 1 })
        }
        Cmd::Reduce { formula, trace } => {
            let f = parse(&formula).context("in --formula")?;
            let (reduced, steps) = reduction_trace(&f)?;
            if cli.json {
                let steps: Vec<_> = steps
                    .iter()
                    .map(|s| {
                        json!({
                            "rule": s.rule.to_string(),
                            "before": s.before.to_string(),
                            "after": s.after.to_string(),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    json!({ "input": f.to_string(), "output": reduced.to_string(), "trace": steps })
                );
            } else {
                if trace {
                    for s in &steps {
                        println!("{}: {}  =>  {}", s.rule, s.before, s.after);
                    }
                }
                println!("{reduced}");
            }
            Ok(0)
        }
        Cmd::Validate { model } => {
            let m = model.load()?;
            let violations = m.validate();
            if cli.json {
                let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                println!("{}", json!({ "violations": list }));
            } else if violations.is_empty() {
                println!("ok");
            } else {
                for v in &violations {
                    println!("{v}");
                }
            }
            Ok(if violations.is_empty() { 0 } else { 1 })
        }
        Cmd::Axioms {
            seed,
            trials,
            max_points,
        } => {
            let cfg = GenConfig {
                seed,
                max_points,
                ..GenConfig::default()
            };
            let report = soundness_suite(&cfg, trials)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{report}");
            }
            Ok(if report.total_failures() == 0 { 0 } else { 1 })
        }
        Cmd::Diff { model, formula } => {
            let m = model.load()?;
            let candidates: Vec<_> = formula
                .iter()
                .map(|text| parse(text).map_err(|e| anyhow!("in '{text}': {e}")))
                .collect::<Result<_>>()?;
            match find_distinguishing(&m, &candidates)? {
                Some((Situation { point, theta }, f)) => {
                    let id = m.space().id(point).to_string();
                    let dom = m.space().ids_in(theta.domain());
                    if cli.json {
                        println!(
                            "{}",
                            json!({ "found": true, "point": id, "domain": dom, "formula": f.to_string() })
                        );
                    } else {
                        println!("modes disagree on {f} at point {id} (domain {dom:?})");
                    }
                    Ok(1)
                }
                None => {
                    if cli.json {
                        println!("{}", json!({ "found": false }));
                    } else {
                        println!("no disagreement found");
                    }
                    Ok(0)
                }
            }
        }
        Cmd::Example => {
            // parse and re-check so the bundled text can never drift
            let m = jewel_model();
            debug_assert!(m.validate().is_empty());
            print!("{JEWEL_JSON}");
            Ok(0)
        }
    }
}
