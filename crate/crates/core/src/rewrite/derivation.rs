//! Derivation scripts and the step checker.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::textio::{parse, print, Expr};
use crate::verifier::check_equiv;

use super::matching::{apply_rule, format_position, Bindings, Direction, Position};
use super::rules::{find_rule, RuleParams};
use super::RewriteError;

/// One rewrite step. `next`, when present, is the term the step is claimed
/// to produce; without it the checker continues from whatever the rule
/// produces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: String,
    pub dir: Direction,
    pub pos: Position,
    #[serde(default)]
    pub subst: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "RuleParams::is_empty")]
    pub params: RuleParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub title: String,
    pub start: String,
    pub steps: Vec<Step>,
    pub end: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum Check {
    Ok,
    Failed(String),
    Skipped(String),
}

impl Check {
    pub fn is_ok(&self) -> bool {
        *self == Check::Ok
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Ok => f.write_str("ok"),
            Check::Failed(m) => write!(f, "FAILED ({m})"),
            Check::Skipped(m) => write!(f, "skipped ({m})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    /// 1-based.
    pub index: usize,
    pub rule: String,
    pub dir: Direction,
    pub pos: String,
    pub before: String,
    pub after: Option<String>,
    pub syntactic: Check,
    pub semantic: Check,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationReport {
    pub name: String,
    pub start: Check,
    pub steps: Vec<StepReport>,
    /// The last term equals the declared end up to juxtaposition order.
    pub end_reached: Check,
    /// The start and the declared end are equivalent.
    pub end_equivalent: Check,
}

impl DerivationReport {
    pub fn passed(&self) -> bool {
        self.start.is_ok()
            && self.end_reached.is_ok()
            && self.end_equivalent.is_ok()
            && self.steps.iter().all(|s| s.syntactic.is_ok() && s.semantic.is_ok())
    }

    pub fn failed_steps(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter(|s| !(s.syntactic.is_ok() && s.semantic.is_ok()))
            .map(|s| s.index)
            .collect()
    }
}

impl fmt::Display for DerivationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = if self.name.is_empty() { "derivation" } else { &self.name };
        writeln!(f, "{name}: {}", if self.passed() { "PASS" } else { "FAIL" })?;
        if !self.start.is_ok() {
            writeln!(f, "  start: {}", self.start)?;
        }
        for s in &self.steps {
            writeln!(
                f,
                "  {:>3}. {} {} at {}: syntactic {}, semantic {}",
                s.index, s.rule, s.dir, s.pos, s.syntactic, s.semantic
            )?;
            if let Some(after) = &s.after {
                writeln!(f, "       = {after}")?;
            }
        }
        writeln!(f, "  end reached: {}", self.end_reached)?;
        write!(f, "  start == end: {}", self.end_equivalent)
    }
}

fn parse_term(what: &str, text: &str) -> Result<Expr, String> {
    parse(text).map_err(|e| format!("{what} does not parse: {}", e.render(text).replace('\n', " | ")))
}

fn semantic(a: &Expr, b: &Expr) -> Check {
    match check_equiv(a, b) {
        Ok(r) if r.is_equivalent() => Check::Ok,
        Ok(r) => Check::Failed(format!("not equivalent: {}", r.counterexample.expect("inequivalent"))),
        Err(e) => Check::Failed(e.to_string()),
    }
}

fn run_step(current: &Expr, step: &Step) -> Result<Expr, String> {
    let rule = find_rule(&step.rule).ok_or_else(|| RewriteError::UnknownRule(step.rule.clone()).to_string())?;
    let mut subst = Bindings::new();
    for (var, text) in &step.subst {
        subst.insert(var.clone(), parse_term(&format!("substitution for {var}"), text)?);
    }
    apply_rule(current, rule, &step.params, step.dir, &step.pos, &subst).map_err(|e| e.to_string())
}

/// Replay a derivation. Every step is checked by rule application and,
/// independently, by equivalence of consecutive terms. A step that fails
/// syntactically does not stop the replay when it records its result.
pub fn check_derivation(d: &Derivation) -> DerivationReport {
    let mut report = DerivationReport {
        name: d.name.clone(),
        start: Check::Ok,
        steps: Vec::new(),
        end_reached: Check::Skipped("no final term".into()),
        end_equivalent: Check::Skipped("no final term".into()),
    };
    let end = parse_term("end", &d.end);
    let mut current = match parse_term("start", &d.start) {
        Ok(e) => Some(e),
        Err(m) => {
            report.start = Check::Failed(m);
            None
        }
    };
    if let (Some(start), Ok(end)) = (&current, &end) {
        report.end_equivalent = semantic(start, end);
    }
    for (n, step) in d.steps.iter().enumerate() {
        let before = current.as_ref().map(print).unwrap_or_default();
        let recorded = step.next.as_ref().map(|t| parse_term("recorded term", t));
        let (syntactic, produced) = match &current {
            None => (Check::Skipped("no current term".into()), None),
            Some(cur) => match run_step(cur, step) {
                Ok(out) => match &recorded {
                    Some(Ok(rec)) if !rec.ac_eq(&out) => (
                        Check::Failed(format!("rule produced `{}`, script records `{}`", print(&out), print(rec))),
                        Some(out),
                    ),
                    Some(Err(m)) => (Check::Failed(m.clone()), Some(out)),
                    _ => (Check::Ok, Some(out)),
                },
                Err(m) => (Check::Failed(m), None),
            },
        };
        let next = match recorded {
            Some(Ok(rec)) => Some(rec),
            _ => produced,
        };
        let semantic = match (&current, &next) {
            (Some(a), Some(b)) => semantic(a, b),
            _ => Check::Skipped("no term to compare".into()),
        };
        report.steps.push(StepReport {
            index: n + 1,
            rule: step.rule.clone(),
            dir: step.dir,
            pos: format_position(&step.pos),
            before,
            after: next.as_ref().map(print),
            syntactic,
            semantic,
        });
        current = next;
    }
    match (&current, &end) {
        (Some(last), Ok(end)) => {
            report.end_reached = if last.ac_eq(end) {
                Check::Ok
            } else {
                Check::Failed(format!("last term `{}` differs from end `{}`", print(last), print(end)))
            };
        }
        (_, Err(m)) => report.end_reached = Check::Failed(m.clone()),
        _ => {}
    }
    report
}
