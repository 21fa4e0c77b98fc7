use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use treebraid::cells::{count_critical_cells, enumerate_critical_1cells, enumerate_reduced_1cells, radial_rank};
use treebraid::delta::{build_delta, decide_isomorphic, detect_n, reconstruct_tree, DeltaGraph, DetectedN, GroupSpec};
use treebraid::forms::{build_complex_k, necessary_relations};
use treebraid::oracle::{all_zero_forms, sample_one_forms, verify_d_equals_delta, verify_morse_counts, DEFAULT_BUDGET};
use treebraid::tree::PlaneTree;
use treebraid::Error;

/// Tree braid group invariants: critical cells, Betti numbers, the cup-product
/// graph Δ, and reconstruction of the tree from Δ.
///
/// A TREE argument is either a parenthesized tree such as `((()()()))`, a path to
/// a file holding one, or `-` for standard input.
#[derive(Parser)]
#[command(name = "treebraid", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Strands {
    /// number of strands
    #[arg(long)]
    n: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Subdivide so every segment has at least n+1 edges.
    Subdivide {
        tree: String,
        #[command(flatten)]
        s: Strands,
    },
    /// List reduced non-extraneous 1-cells as JSON.
    Cells {
        tree: String,
        #[command(flatten)]
        s: Strands,
        #[arg(long)]
        critical: bool,
    },
    /// Betti numbers from critical-cell counts, or from the cube complex with --oracle.
    Betti {
        tree: String,
        #[command(flatten)]
        s: Strands,
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Rank of the free braid group of a radial tree.
    RadialRank {
        #[command(flatten)]
        s: Strands,
        #[arg(long)]
        degree: usize,
    },
    /// The cup-product graph Δ for n in {4, 5}.
    Delta {
        tree: String,
        #[command(flatten)]
        s: Strands,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Rebuild the tree from a Δ file; detects n when omitted.
    Reconstruct {
        #[arg(long)]
        delta: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Decide whether a Δ file came from four or five strands.
    DetectN {
        #[arg(long)]
        delta: String,
    },
    /// Decide whether two tree braid groups are isomorphic.
    Iso {
        a: String,
        b: String,
        /// strands on both sides
        #[arg(long, conflicts_with_all = ["na", "nb"])]
        n: Option<usize>,
        #[arg(long, requires = "nb")]
        na: Option<usize>,
        #[arg(long, requires = "na")]
        nb: Option<usize>,
        /// A and B are Δ files rather than trees
        #[arg(long)]
        delta: bool,
    },
    /// Check homology and d = δ against the cube-complex oracle.
    Verify {
        tree: String,
        #[command(flatten)]
        s: Strands,
        /// number of random 1-forms to test besides all 0-forms
        #[arg(long, default_value_t = 0)]
        forms_sample: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// The complex K and the coboundary chains of necessary forms.
    Presentation {
        tree: String,
        #[command(flatten)]
        s: Strands,
    },
}

enum Failure {
    Invalid(String),
    Undefined(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn read_source(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Invalid(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(Path::new(arg)).map_err(|e| Failure::Invalid(format!("{arg}: {e}")))
}

fn load_tree(arg: &str) -> Result<PlaneTree, Failure> {
    let text = if arg.trim_start().starts_with('(') { arg.to_string() } else { read_source(arg)? };
    Ok(PlaneTree::parse(text.trim())?)
}

fn load_delta(arg: &str) -> Result<DeltaGraph, Failure> {
    Ok(DeltaGraph::from_json(&read_source(arg)?)?)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Subdivide { tree, s } => {
            println!("{}", load_tree(&tree)?.subdivide_for(s.n));
        }
        Command::Cells { tree, s, critical } => {
            let t = load_tree(&tree)?.subdivide_for(s.n);
            let cells = if critical { enumerate_critical_1cells(&t, s.n)? } else { enumerate_reduced_1cells(&t, s.n)? };
            print_json(&json!({ "tree": t.to_paren(), "n": s.n, "cells": cells }));
        }
        Command::Betti { tree, s, oracle, budget } => {
            let t = load_tree(&tree)?;
            if oracle {
                let r = verify_morse_counts(&t, s.n, budget)?;
                print_json(&json!({ "n": s.n, "b": r.b, "source": "oracle" }));
            } else {
                let (c1, c2) = count_critical_cells(&t.subdivide_for(s.n), s.n)?;
                print_json(&json!({ "n": s.n, "b": [1, c1, c2], "source": "morse" }));
            }
        }
        Command::RadialRank { s, degree } => {
            println!("{}", radial_rank(s.n, degree)?);
        }
        Command::Delta { tree, s, format } => {
            let t = load_tree(&tree)?.subdivide_for(s.n);
            let delta = build_delta(&t, s.n)?;
            match format {
                Format::Json => println!("{}", delta.to_json()),
                Format::Dot => print!("{}", delta.to_dot()),
            }
        }
        Command::Reconstruct { delta, n } => {
            let delta = load_delta(&delta)?;
            let n = match n.or(delta.n) {
                Some(n) => n,
                None => match detect_n(&delta) {
                    DetectedN::Four => 4,
                    DetectedN::Five => 5,
                    DetectedN::Unknown => return Err(Failure::Undefined("cannot detect n from Δ".into())),
                },
            };
            let t = reconstruct_tree(&delta, n).map_err(|u| Failure::Undefined(u.to_string()))?;
            println!("{t}");
        }
        Command::DetectN { delta } => {
            println!("{}", detect_n(&load_delta(&delta)?));
        }
        Command::Iso { a, b, n, na, nb, delta } => {
            let (a, b) = if delta {
                (
                    GroupSpec::Delta { delta: load_delta(&a)?, n: na.or(n) },
                    GroupSpec::Delta { delta: load_delta(&b)?, n: nb.or(n) },
                )
            } else {
                let (na, nb) = match (n, na, nb) {
                    (Some(n), _, _) => (n, n),
                    (None, Some(x), Some(y)) => (x, y),
                    _ => return Err(Failure::Invalid("iso needs --n N or --na N --nb M".into())),
                };
                (GroupSpec::Tree { tree: load_tree(&a)?, n: na }, GroupSpec::Tree { tree: load_tree(&b)?, n: nb })
            };
            let same = decide_isomorphic(&a, &b)?;
            println!("{same}");
            return Ok(same);
        }
        Command::Verify { tree, s, forms_sample, seed, budget } => {
            let t = load_tree(&tree)?;
            let morse = match verify_morse_counts(&t, s.n, budget) {
                Err(e @ Error::BudgetExceeded { .. }) => {
                    print_json(&json!({ "skipped": e.to_string() }));
                    return Err(Failure::Invalid(e.to_string()));
                }
                r => r?,
            };
            let st = t.subdivide_for(s.n);
            let mut forms = all_zero_forms(&st, s.n);
            forms.extend(sample_one_forms(&st, s.n, forms_sample, seed)?);
            let coboundary = match verify_d_equals_delta(&t, s.n, &forms, budget) {
                Ok(r) => json!(r),
                Err(e @ Error::BudgetExceeded { .. }) => json!({ "skipped": e.to_string() }),
                Err(e) => return Err(e.into()),
            };
            let pass = morse.pass && coboundary.get("pass") != Some(&json!(false));
            print_json(&json!({ "morse": morse, "coboundary": coboundary, "pass": pass }));
            return Ok(pass);
        }
        Command::Presentation { tree, s } => {
            let t = load_tree(&tree)?.subdivide_for(s.n);
            let k = build_complex_k(&t, s.n)?;
            let relations = necessary_relations(&t, s.n)?;
            print_json(&json!({ "tree": t.to_paren(), "n": s.n, "k": k, "relations": relations }));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Undefined(msg)) => {
            eprintln!("undefined: {msg}");
            ExitCode::from(3)
        }
    }
}
