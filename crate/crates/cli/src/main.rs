//! `qcalc`: command-line front end for the Q calculus library.
//!
//! Exit status is 0 when every requested check passes, 1 when a check fails
//! and 2 for usage, input or parse errors.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qcalc::braid::{self, BraidWord};
use qcalc::constructor::{self, parse_slot_permutation};
use qcalc::group::group_report;
use qcalc::kernel::{op_of_value, q8_to_signed_perm, Q8Op};
use qcalc::rewrite::{builtin_derivation, builtin_derivations, check_derivation, rules, Derivation};
use qcalc::textio::{parse_item, parse_qlf, QlfItem};
use qcalc::verifier::{
    check_assertion, check_equiv_with, demonstrations, distribution_matrix, run_law_suite, EquivOptions, LawSuite,
    DEFAULT_BUDGET,
};
use qcalc::{eval, parse, print, Env, Expr};

#[derive(Parser, Debug)]
#[command(name = "qcalc", version, about = "Quaternion Laws of Form: evaluate, verify, rewrite, braid")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Maximum number of assignments an equivalence check may enumerate.
    #[arg(long, global = true, env = "QCALC_BUDGET", default_value_t = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(16..))]
    budget: u64,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a .qlf file (or - for stdin) and echo each line in canonical form.
    Parse { file: PathBuf },
    /// Evaluate an expression.
    Eval {
        expr: String,
        /// Assignments such as `A=MUUM,b=M`: four-slot patterns for Q
        /// variables, a single M or U for tuple-slot variables.
        #[arg(long, default_value = "")]
        env: String,
    },
    /// Decide `LHS == RHS` by exhaustive enumeration.
    Equiv { assertion: String },
    /// Check every `LHS == RHS` line of a .qlf file.
    Check { file: PathBuf },
    /// Run a built-in law suite, or all of them.
    Laws {
        #[arg(default_value = "all")]
        suite: String,
    },
    /// The 8x8 distribution matrix of the binary connectives.
    Distribution,
    /// Multiplication table of the eight operators, checked as maps.
    GroupTable,
    /// List the rewrite rules.
    Rules,
    #[command(subcommand)]
    Braid(BraidCommand),
    /// Replay a derivation script (JSON), or a built-in one.
    CheckDerivation {
        file: Option<PathBuf>,
        /// Name of a built-in derivation, or `all`.
        #[arg(long, conflicts_with = "file")]
        builtin: Option<String>,
        /// List the built-in derivations.
        #[arg(long, conflicts_with_all = ["file", "builtin"])]
        list: bool,
    },
    #[command(subcommand)]
    Construct(ConstructCommand),
}

#[derive(Subcommand, Debug)]
enum BraidCommand {
    /// Compose a word such as `s1 s3' s2` into a signed permutation.
    Compose {
        word: String,
        #[arg(long, short, default_value_t = 4)]
        n: usize,
    },
    /// Check the braid relations on n strands.
    Verify {
        #[arg(long, short, default_value_t = 4)]
        n: usize,
    },
    /// Draw a word as ASCII strands.
    Diagram {
        word: String,
        #[arg(long, short, default_value_t = 4)]
        n: usize,
    },
    /// The words for the eight operators and the group they generate.
    Quaternion,
}

#[derive(Subcommand, Debug)]
enum ConstructCommand {
    /// An expression in X that marks slot 1-4 of X.
    MarkSlot { slot: usize },
    /// An expression in X realizing a slot layout such as `(a, d, b, c)` or `a [d] b c`.
    Permute { perm: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e:#}");
            ExitCode::from(2)
        }
    }
}

struct Out {
    format: Format,
}

impl Out {
    /// Print either the text form or the JSON value with sorted keys.
    /// A closed pipe (`qcalc ... | head`) ends the process quietly.
    fn emit(&self, json: Value, text: impl FnOnce() -> String) {
        let body = match self.format {
            Format::Json => serde_json::to_string_pretty(&json).expect("serializable"),
            Format::Text => text(),
        };
        let mut stdout = std::io::stdout().lock();
        if let Err(e) = writeln!(stdout, "{body}").and_then(|()| stdout.flush()) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            eprintln!("error: writing output: {e}");
            std::process::exit(2);
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(cli: &Cli) -> Result<bool> {
    let out = Out { format: cli.format };
    let opts = EquivOptions { budget: cli.budget };
    match &cli.command {
        Command::Parse { file } => cmd_parse(&out, file),
        Command::Eval { expr, env } => cmd_eval(&out, expr, env),
        Command::Equiv { assertion } => cmd_equiv(&out, assertion, &opts),
        Command::Check { file } => cmd_check(&out, file, &opts),
        Command::Laws { suite } => cmd_laws(&out, suite),
        Command::Distribution => {
            let matrix = distribution_matrix();
            let demos = demonstrations();
            let ok = matrix.off_diagonal_holding() == 56 && demos.first_holds && demos.second_template_holds;
            out.emit(json!({ "matrix": matrix, "demonstrations": demos }), || {
                let mut s = matrix.to_string();
                s.push_str(&format!(
                    "\nor_i over and_j: {}\nand_j over and_k: {}",
                    if demos.first_holds { "holds" } else { "FAILS" },
                    demos.valid_second_form.as_deref().unwrap_or("no unique valid form"),
                ));
                s
            });
            Ok(ok)
        }
        Command::GroupTable => {
            let r = group_report();
            out.emit(json!({ "report": r, "quaternion_group": r.is_q8() }), || r.to_string());
            Ok(r.is_q8())
        }
        Command::Rules => {
            let rows: Vec<Value> = rules()
                .iter()
                .map(|r| json!({ "id": r.id, "name": r.name, "params": format!("{:?}", r.params).to_lowercase() }))
                .collect();
            out.emit(Value::Array(rows), || {
                rules().iter().map(|r| format!("{:<8} {}", r.id, r.name)).collect::<Vec<_>>().join("\n")
            });
            Ok(true)
        }
        Command::Braid(b) => cmd_braid(&out, b),
        Command::CheckDerivation { file, builtin, list } => cmd_derivation(&out, file.as_deref(), builtin.as_deref(), *list),
        Command::Construct(c) => cmd_construct(&out, c, &opts),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn parse_expr(text: &str) -> Result<Expr> {
    parse(text).map_err(|e| anyhow!("{}", e.render(text)))
}

fn cmd_parse(out: &Out, file: &Path) -> Result<bool> {
    let source = read_input(file)?;
    let lines = parse_qlf(&source).map_err(|e| anyhow!("{}: {}", file.display(), e.render(&source)))?;
    let rows: Vec<Value> = lines.iter().map(|l| json!({ "line": l.line, "canonical": l.item.to_string() })).collect();
    out.emit(Value::Array(rows), || lines.iter().map(|l| l.item.to_string()).collect::<Vec<_>>().join("\n"));
    Ok(true)
}

fn cmd_eval(out: &Out, text: &str, env: &str) -> Result<bool> {
    let e = parse_expr(text)?;
    let env = Env::parse_for(env, &e)?;
    let v = eval(&e, &env)?;
    out.emit(
        json!({ "expr": print(&e), "env": env, "value": v, "operator": op_of_value(v).map(|g| g.to_string()) }),
        || v.to_string(),
    );
    Ok(true)
}

fn cmd_equiv(out: &Out, text: &str, opts: &EquivOptions) -> Result<bool> {
    let QlfItem::Assert(lhs, rhs) = parse_item(text).map_err(|e| anyhow!("{}", e.render(text)))? else {
        bail!("expected an assertion of the form LHS == RHS");
    };
    let r = check_equiv_with(&lhs, &rhs, opts)?;
    out.emit(json!({ "law": format!("{lhs} == {rhs}"), "result": r }), || match &r.counterexample {
        None => format!("equivalent ({} assignments)", r.assignments_checked),
        Some(c) => format!("NOT equivalent; counterexample {c}"),
    });
    Ok(r.is_equivalent())
}

fn cmd_check(out: &Out, file: &Path, opts: &EquivOptions) -> Result<bool> {
    let source = read_input(file)?;
    let lines = parse_qlf(&source).map_err(|e| anyhow!("{}: {}", file.display(), e.render(&source)))?;
    let reports: Vec<_> = lines
        .iter()
        .filter_map(|l| match &l.item {
            QlfItem::Assert(a, b) => Some(check_assertion(l.line, a, b, opts)),
            QlfItem::Expr(_) => None,
        })
        .collect();
    let ok = reports.iter().all(|r| r.error.is_none() && r.counterexample.is_none());
    out.emit(to_json(&reports), || {
        let mut lines: Vec<String> = reports
            .iter()
            .map(|r| match (&r.error, &r.counterexample) {
                (Some(e), _) => format!("line {}: ERROR {e}", r.line),
                (None, Some(c)) => format!("line {}: FAILS {} ; {c}", r.line, r.law),
                (None, None) => format!("line {}: holds {}", r.line, r.law),
            })
            .collect();
        lines.push(format!("{}/{} assertions hold", reports.iter().filter(|r| r.counterexample.is_none() && r.error.is_none()).count(), reports.len()));
        lines.join("\n")
    });
    Ok(ok)
}

fn cmd_laws(out: &Out, suite: &str) -> Result<bool> {
    let suites: Vec<LawSuite> = if suite == "all" {
        LawSuite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(|e| anyhow!("{e}"))?]
    };
    let reports: Vec<_> = suites.into_iter().map(run_law_suite).collect();
    let ok = reports.iter().all(|r| r.all_hold());
    out.emit(to_json(&reports), || reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n\n"));
    Ok(ok)
}

fn cmd_braid(out: &Out, b: &BraidCommand) -> Result<bool> {
    match b {
        BraidCommand::Compose { word, n } => {
            let w = BraidWord::parse(word, *n)?;
            let p = braid::braid_to_signed_perm(&w);
            let operator = (*n == 4).then(|| Q8Op::ALL.into_iter().find(|&g| q8_to_signed_perm(g) == p)).flatten();
            let action = braid::diagram(&w).lines().last().unwrap_or_default().to_string();
            out.emit(
                json!({ "word": w.to_string(), "arity": n, "signed_perm": p.to_string(), "action": action,
                        "operator": operator.map(|g| g.to_string()) }),
                || {
                    let mut s = format!("{w} = {p}\n{action}");
                    if let Some(g) = operator {
                        s.push_str(&format!("\nacts as the operator {g}"));
                    }
                    s
                },
            );
            Ok(true)
        }
        BraidCommand::Verify { n } => {
            let r = braid::verify_braid_relations(*n)?;
            out.emit(to_json(&r), || r.to_string().trim_end().to_string());
            Ok(r.all_hold())
        }
        BraidCommand::Diagram { word, n } => {
            let w = BraidWord::parse(word, *n)?;
            let d = braid::diagram(&w);
            out.emit(json!({ "word": w.to_string(), "diagram": d }), || d.clone());
            Ok(true)
        }
        BraidCommand::Quaternion => {
            let words: Vec<Value> = Q8Op::ALL
                .iter()
                .map(|&g| json!({ "operator": g.to_string(), "word": braid::quaternion_braid_word(g).to_string() }))
                .collect();
            let closure = braid::q8_closure();
            let ok = braid::words_match_operators() && closure.isomorphic();
            out.emit(json!({ "words": words, "closure": closure, "words_match_operators": ok }), || {
                let mut s: Vec<String> = Q8Op::ALL
                    .iter()
                    .map(|&g| format!("{:>3}  {}", g.to_string(), braid::quaternion_braid_word(g)))
                    .collect();
                s.push(format!(
                    "closure of the i and j words: {} elements, {}",
                    closure.order,
                    if closure.isomorphic() { "isomorphic to the operator group" } else { "NOT the operator group" }
                ));
                s.join("\n")
            });
            Ok(ok)
        }
    }
}

fn cmd_derivation(out: &Out, file: Option<&Path>, builtin: Option<&str>, list: bool) -> Result<bool> {
    if list {
        out.emit(
            Value::Array(builtin_derivations().iter().map(|d| json!({ "name": d.name, "title": d.title })).collect()),
            || builtin_derivations().iter().map(|d| format!("{:<24} {}", d.name, d.title)).collect::<Vec<_>>().join("\n"),
        );
        return Ok(true);
    }
    let derivations: Vec<Derivation> = match (file, builtin) {
        (Some(path), _) => {
            let text = read_input(path)?;
            let value: Value =
                serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))?;
            let parsed = if value.is_array() {
                serde_json::from_value::<Vec<Derivation>>(value)
            } else {
                serde_json::from_value::<Derivation>(value).map(|d| vec![d])
            };
            parsed.with_context(|| format!("{} is not a derivation script", path.display()))?
        }
        (None, Some("all")) => builtin_derivations().to_vec(),
        (None, Some(name)) => {
            vec![builtin_derivation(name)
                .ok_or_else(|| anyhow!("no built-in derivation named {name:?}; try --list"))?
                .clone()]
        }
        (None, None) => bail!("give a derivation file, --builtin NAME or --list"),
    };
    let reports: Vec<_> = derivations.iter().map(check_derivation).collect();
    let ok = reports.iter().all(|r| r.passed());
    out.emit(to_json(&reports), || reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"));
    Ok(ok)
}

fn cmd_construct(out: &Out, c: &ConstructCommand, opts: &EquivOptions) -> Result<bool> {
    let (expr, perm) = match c {
        ConstructCommand::MarkSlot { slot } => (constructor::mark_slot(*slot)?, constructor::mark_slot_perm(*slot)),
        ConstructCommand::Permute { perm } => {
            let p = parse_slot_permutation(perm)?;
            (constructor::permute_expr(&p), p)
        }
    };
    let spec = constructor::tuple_spec(&perm);
    let r = check_equiv_with(&constructor::on_generic_tuple(&expr), &spec, opts)?;
    out.emit(
        json!({ "expr": print(&expr), "spec": print(&spec), "signed_perm": perm.to_string(), "verified": r.is_equivalent(),
                "counterexample": r.counterexample }),
        || {
            format!(
                "{}\nX = {} gives {}: {}",
                print(&expr),
                print(&constructor::generic_tuple()),
                print(&spec),
                if r.is_equivalent() { "verified" } else { "FAILS" }
            )
        },
    );
    Ok(r.is_equivalent())
}
