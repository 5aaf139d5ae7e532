use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use tsl_core::dataset::{self, TableEntry};
use tsl_core::enumerate::{rep_result, theta_prefix};
use tsl_core::forms::{automorphisms, is_isometric, TernaryForm, UnimodularMap};
use tsl_core::genus::enumerate_genus;
use tsl_core::search::{search_representing_one, verify_tables, Scale, SearchCaps, SearchFilter};
use tsl_core::ssr::{check_ssr, min_square, DEFAULT_MS_CAP};
use tsl_core::watson::{gamma_pair, watson_sequence};

const SCOPE: &str = "strong s-regularity is checked for n <= bound only; the shipped table dataset is the ground truth";

#[derive(Parser)]
#[command(name = "tsl", about = "Strongly s-regular ternary quadratic forms")]
struct Cli {
    /// Aligned text output instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    /// Table dataset to use instead of the embedded copy.
    #[arg(long, global = true, value_name = "PATH")]
    tables: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

type Positive = u64;

fn positive(s: &str) -> Result<Positive, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand)]
enum Command {
    /// r(n, f).
    Rcount {
        form: TernaryForm,
        n: u64,
        /// Also list the solutions.
        #[arg(long)]
        solutions: bool,
    },
    /// r(0..=B, f).
    Theta { form: TernaryForm, bound: u64 },
    /// m_s(f).
    Ms {
        form: TernaryForm,
        #[arg(long, value_parser = positive, default_value_t = DEFAULT_MS_CAP)]
        cap: Positive,
    },
    /// Check the strongly s-regular identity for n <= bound.
    Ssr {
        form: TernaryForm,
        #[arg(long, value_parser = positive, default_value_t = 40)]
        bound: Positive,
    },
    /// Apply λ_P repeatedly.
    Watson {
        form: TernaryForm,
        #[arg(value_parser = positive)]
        p: Positive,
        #[arg(long, value_parser = positive, default_value_t = 1)]
        times: Positive,
    },
    /// The two index-P sublattices with norm in Pℤ.
    Gamma {
        form: TernaryForm,
        #[arg(value_parser = positive)]
        p: Positive,
    },
    /// Classes in the genus, with automorphism orders and mass.
    Genus { form: TernaryForm },
    /// Isometry test with a witness.
    Isometric { f: TernaryForm, g: TernaryForm },
    /// The automorphism group.
    Auto { form: TernaryForm },
    /// Search for strongly s-regular forms representing 1.
    Search {
        #[arg(long)]
        scale: Option<Scale>,
        #[arg(long)]
        block: Option<String>,
        #[arg(long, value_parser = positive, default_value_t = 40)]
        bound: Positive,
        #[arg(long, value_parser = positive, default_value_t = 81)]
        coeff_max: Positive,
        #[arg(long, value_parser = positive, default_value_t = 4800)]
        disc_max: Positive,
    },
    /// Re-verify every table entry.
    VerifyTables {
        #[arg(long, value_parser = positive, default_value_t = 40)]
        bound: Positive,
    },
}

fn form_json(f: &TernaryForm) -> Value {
    json!(f.to_string())
}

fn matrix_json(u: &UnimodularMap) -> Value {
    json!(u.matrix())
}

fn load_tables(path: &Option<PathBuf>) -> Result<Vec<TableEntry>, String> {
    match path {
        Some(p) => dataset::load_path(p).map_err(|e| e.to_string()),
        None => Ok(dataset::load_embedded()),
    }
}

fn print_text(value: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match value {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            for (k, v) in map {
                match v {
                    Value::Object(_) => {
                        println!("{pad}{k}:");
                        print_text(v, indent + 2);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                        println!("{pad}{k}:");
                        for item in items {
                            println!("{pad}  -");
                            print_text(item, indent + 4);
                        }
                    }
                    _ => println!("{pad}{k:<width$}  {}", scalar(v)),
                }
            }
        }
        other => println!("{pad}{}", scalar(other)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Runs a command, returning its output and whether its check passed.
fn run(cli: &Cli) -> Result<(Value, bool), String> {
    Ok(match &cli.command {
        Command::Rcount { form, n, solutions } => {
            let r = rep_result(form, *n, *solutions);
            let mut out = json!({ "n": r.n, "count": r.count });
            if let Some(s) = r.solutions {
                out["solutions"] = json!(s);
            }
            (out, true)
        }
        Command::Theta { form, bound } => {
            let t = theta_prefix(form, *bound).map_err(|e| e.to_string())?;
            (json!({ "form": form_json(form), "bound": t.bound, "counts": t.counts }), true)
        }
        Command::Ms { form, cap } => {
            let ms = min_square(form, *cap);
            (json!({ "form": form_json(form), "cap": cap, "m_s": ms }), ms.is_some())
        }
        Command::Ssr { form, bound } => {
            let r = check_ssr(form, *bound);
            let cx = r.counterexample.map(|c| json!({ "n": c.n, "lhs": c.lhs, "rhs": c.rhs.to_string() }));
            let out = json!({
                "form": form_json(form),
                "bound": r.bound,
                "m_s": r.m_s,
                "passed": r.passed,
                "counterexample": cx,
            });
            (out, r.passed)
        }
        Command::Watson { form, p, times } => {
            let primes = vec![*p; *times as usize];
            let chain = watson_sequence(form, &primes).map_err(|e| e.to_string())?;
            let steps: Vec<Value> = chain
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "p": s.p,
                        "input": form_json(&s.input),
                        "index": s.index(),
                        "scale": s.scale_factor().to_string(),
                        "output": form_json(&s.output),
                    })
                })
                .collect();
            (json!({ "input": form_json(form), "n": chain.n, "steps": steps, "output": form_json(&chain.output()) }), true)
        }
        Command::Gamma { form, p } => match gamma_pair(form, *p) {
            Ok(pair) => {
                let sub = |s: &tsl_core::watson::Sublattice| json!({ "form": form_json(&s.form), "basis": s.basis });
                (json!({ "form": form_json(form), "p": p, "gamma1": sub(&pair.gamma1), "gamma2": sub(&pair.gamma2) }), true)
            }
            Err(e) => (json!({ "form": form_json(form), "p": p, "error": e.to_string() }), false),
        },
        Command::Genus { form } => {
            let g = enumerate_genus(form).map_err(|e| e.to_string())?;
            let classes: Vec<Value> = g
                .classes
                .iter()
                .map(|c| json!({ "form": form_json(&c.form), "automorphisms": c.automorphisms }))
                .collect();
            let out = json!({
                "form": form_json(form),
                "class_number": g.class_number(),
                "mass": g.mass.to_string(),
                "neighbor_primes": g.neighbor_primes,
                "classes": classes,
            });
            (out, true)
        }
        Command::Isometric { f, g } => {
            let u = is_isometric(f, g);
            (json!({ "f": form_json(f), "g": form_json(g), "isometric": u.is_some(), "matrix": u.as_ref().map(matrix_json) }), true)
        }
        Command::Auto { form } => {
            let auts = automorphisms(form);
            let mats: Vec<Value> = auts.iter().map(matrix_json).collect();
            (json!({ "form": form_json(form), "order": auts.len(), "matrices": mats }), true)
        }
        Command::Search { scale, block, bound, coeff_max, disc_max } => {
            let tables = load_tables(&cli.tables)?;
            if let Some(b) = block {
                if !dataset::BLOCKS.contains(&b.as_str()) {
                    return Err(format!("unknown block {b:?}; expected one of {:?}", dataset::BLOCKS));
                }
            }
            let caps = SearchCaps { coeff_max: *coeff_max as i64, disc_max: *disc_max };
            let filter = SearchFilter { scale: *scale, block: block.clone() };
            let r = search_representing_one(*bound, caps, &filter, &tables);
            let out = json!({
                "bound": r.bound,
                "candidates_examined": r.candidates_examined,
                "pruned": r.pruned,
                "passer_count": r.passers.len(),
                "passers": r.passers.iter().map(form_json).collect::<Vec<_>>(),
                "matched_against_dataset": r.matched_against_dataset,
                "false_positives": r.false_positives.iter().map(form_json).collect::<Vec<_>>(),
                "missing": r.missing.iter().map(form_json).collect::<Vec<_>>(),
                "scope": SCOPE,
            });
            (out, r.matched_against_dataset)
        }
        Command::VerifyTables { bound } => {
            let tables = load_tables(&cli.tables)?;
            let r = verify_tables(&tables, *bound);
            let failures: Vec<Value> = r.failures().iter().map(|e| serde_json::to_value(e).unwrap()).collect();
            let id_failures: Vec<Value> = r.identity_failures().iter().map(|c| serde_json::to_value(c).unwrap()).collect();
            let out = json!({
                "bound": r.bound,
                "entries": r.entries.len(),
                "passed_entries": r.entries.len() - failures.len(),
                "table1_blocks": r.table1_blocks,
                "table2_blocks": r.table2_blocks,
                "identity_checks": r.identities.len(),
                "failures": failures,
                "identity_failures": id_failures,
                "passed": r.passed(),
                "scope": SCOPE,
            });
            (out, r.passed())
        }
    })
}

fn configure_threads() {
    if let Some(n) = std::env::var("TSL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    configure_threads();
    match run(&cli) {
        Ok((value, passed)) => {
            if cli.text {
                print_text(&value, 0);
            } else {
                println!("{value}");
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
