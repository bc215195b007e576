//! The rule database. Each rule is an equation between two patterns whose
//! variables are pattern variables; some rules take subscript or group
//! parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::kernel::{op_value, q8_mul, MarkKind, Q8Op, QValue};
use crate::laws::{self, fill, LawTemplate, Params};
use crate::semantics::operator_expr;
use crate::textio::{parse, Expr};
use crate::verifier::check_equiv;

use super::RewriteError;

/// Parameters a step supplies to a parameterised rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<MarkKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<MarkKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Q8Op>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Q8Op>,
}

impl RuleParams {
    pub fn alpha(alpha: MarkKind) -> RuleParams {
        RuleParams { alpha: Some(alpha), ..RuleParams::default() }
    }

    pub fn alpha_beta(alpha: MarkKind, beta: MarkKind) -> RuleParams {
        RuleParams { alpha: Some(alpha), beta: Some(beta), ..RuleParams::default() }
    }

    pub fn compose(g: Q8Op, h: Q8Op) -> RuleParams {
        RuleParams { g: Some(g), h: Some(h), ..RuleParams::default() }
    }

    pub fn is_empty(&self) -> bool {
        *self == RuleParams::default()
    }
}

impl fmt::Display for RuleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(a) = self.alpha {
            parts.push(format!("alpha={a}"));
        }
        if let Some(b) = self.beta {
            parts.push(format!("beta={b}"));
        }
        if let Some(g) = self.g {
            parts.push(format!("g={g}"));
        }
        if let Some(h) = self.h {
            parts.push(format!("h={h}"));
        }
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleParamKind {
    None,
    Alpha,
    /// Two distinct imaginary subscripts.
    AlphaBeta,
    /// Two group elements `g` (inner) and `h` (outer).
    Compose,
}

#[derive(Clone, Copy, Debug)]
enum Form {
    Template(&'static str, &'static str),
    /// `[]@a` against its 4-tuple value; `cube` selects `[]@a^3`.
    EmptyMark { cube: bool },
    Compose,
}

#[derive(Clone, Copy, Debug)]
pub struct Rule {
    pub id: &'static str,
    pub name: &'static str,
    pub params: RuleParamKind,
    form: Form,
}

/// One side of a rule, fixed by its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub lhs: Expr,
    pub rhs: Expr,
}

/// The 4-tuple literal spelling out a value, with `[]` for marked slots.
pub fn tuple_of_value(v: QValue) -> Expr {
    Expr::tuple(v.slots().map(|s| if s.is_marked() { Expr::cross(Expr::Void) } else { Expr::Void }))
}

impl Rule {
    const fn template(
        id: &'static str,
        name: &'static str,
        lhs: &'static str,
        rhs: &'static str,
        params: RuleParamKind,
    ) -> Rule {
        Rule { id, name, params, form: Form::Template(lhs, rhs) }
    }

    fn from_law(t: &LawTemplate) -> Rule {
        let params = match t.params {
            Params::None => RuleParamKind::None,
            Params::Alpha => RuleParamKind::Alpha,
            Params::AlphaBeta => RuleParamKind::AlphaBeta,
        };
        Rule { id: t.id, name: t.name, params, form: Form::Template(t.lhs, t.rhs) }
    }

    /// Accepts the bare id, `id-Name` with spaces removed, or the name.
    pub fn answers_to(&self, key: &str) -> bool {
        let squashed: String = self.name.chars().filter(|c| !c.is_whitespace()).collect();
        key.eq_ignore_ascii_case(self.id)
            || key.eq_ignore_ascii_case(&format!("{}-{}", self.id, squashed))
            || key.eq_ignore_ascii_case(self.name)
            || key.eq_ignore_ascii_case(&squashed)
    }

    pub fn instantiate(&self, p: &RuleParams) -> Result<RuleInstance, RewriteError> {
        let missing = |what: &str| RewriteError::SideCondition {
            rule: self.id.to_string(),
            message: format!("parameter {what} is required"),
        };
        match self.params {
            RuleParamKind::None => {}
            RuleParamKind::Alpha => {
                p.alpha.filter(|a| *a != MarkKind::Plain).ok_or_else(|| missing("alpha in {i, j, k}"))?;
            }
            RuleParamKind::AlphaBeta => {
                let a = p.alpha.filter(|a| *a != MarkKind::Plain).ok_or_else(|| missing("alpha in {i, j, k}"))?;
                let b = p.beta.filter(|b| *b != MarkKind::Plain).ok_or_else(|| missing("beta in {i, j, k}"))?;
                if a == b {
                    return Err(RewriteError::SideCondition {
                        rule: self.id.to_string(),
                        message: format!("alpha and beta must differ, both are {a}"),
                    });
                }
            }
            RuleParamKind::Compose => {
                p.g.ok_or_else(|| missing("g"))?;
                p.h.ok_or_else(|| missing("h"))?;
            }
        }
        Ok(match self.form {
            Form::Template(l, r) => {
                let side = |t: &str| {
                    parse(&fill(t, p.alpha, p.beta))
                        .unwrap_or_else(|e| panic!("rule {} does not parse: {e}", self.id))
                };
                RuleInstance { lhs: side(l), rhs: side(r) }
            }
            Form::EmptyMark { cube } => {
                let alpha = p.alpha.expect("checked above");
                let (lhs, op) = if cube {
                    (Expr::power(alpha, Expr::Void, 3), alpha.op().neg())
                } else {
                    (Expr::mark(alpha, Expr::Void), alpha.op())
                };
                RuleInstance { lhs, rhs: tuple_of_value(op_value(op)) }
            }
            Form::Compose => {
                let (g, h) = (p.g.unwrap(), p.h.unwrap());
                let a = Expr::var("A");
                RuleInstance {
                    lhs: operator_expr(h, operator_expr(g, a.clone())),
                    rhs: operator_expr(q8_mul(g, h), a),
                }
            }
        })
    }

    /// Every admissible parameter choice.
    pub fn all_params(&self) -> Vec<RuleParams> {
        match self.params {
            RuleParamKind::None => vec![RuleParams::default()],
            RuleParamKind::Alpha => MarkKind::IMAGINARY.into_iter().map(RuleParams::alpha).collect(),
            RuleParamKind::AlphaBeta => MarkKind::IMAGINARY
                .into_iter()
                .flat_map(|a| {
                    MarkKind::IMAGINARY.into_iter().filter(move |&b| b != a).map(move |b| RuleParams::alpha_beta(a, b))
                })
                .collect(),
            RuleParamKind::Compose => Q8Op::ALL
                .into_iter()
                .flat_map(|g| Q8Op::ALL.into_iter().map(move |h| RuleParams::compose(g, h)))
                .collect(),
        }
    }
}

const EXTRA_RULES: &[Rule] = &[
    Rule::template("IJ", "IJ Compose", "[[A]i]j", "[A]k", RuleParamKind::None),
    Rule::template("QR2", "QR2", "[[[A]j]k]", "[[A]i]", RuleParamKind::None),
    Rule::template("QR3", "JK Compose", "[[A]j]k", "[A]i", RuleParamKind::None),
    Rule::template("KI", "KI Compose", "[[A]k]i", "[A]j", RuleParamKind::None),
    Rule::template("D1-m", "Tuple Mark", "[{a, b, c, d}]", "{[a], [b], [c], [d]}", RuleParamKind::None),
    Rule::template("D1-i", "Tuple i", "[{a, b, c, d}]i", "{[b], a, d, [c]}", RuleParamKind::None),
    Rule::template("D1-j", "Tuple j", "[{a, b, c, d}]j", "{[c], [d], a, b}", RuleParamKind::None),
    Rule::template("D1-k", "Tuple k", "[{a, b, c, d}]k", "{[d], c, [b], a}", RuleParamKind::None),
    Rule::template(
        "D2",
        "Tuple Juxtaposition",
        "{a, b, c, d} {e, f, g, h}",
        "{a e, b f, c g, d h}",
        RuleParamKind::None,
    ),
    Rule::template("U", "Unmarked Tuple", "", "{, , , }", RuleParamKind::None),
    Rule::template("EM-m", "Empty Mark", "[]", "{[], [], [], []}", RuleParamKind::None),
    Rule { id: "EM", name: "Empty Imaginary Mark", params: RuleParamKind::Alpha, form: Form::EmptyMark { cube: false } },
    Rule { id: "EM3", name: "Empty Imaginary Cube", params: RuleParamKind::Alpha, form: Form::EmptyMark { cube: true } },
    Rule::template("Pow1", "First Power", "[A]@a^1", "[A]@a", RuleParamKind::Alpha),
    Rule::template("Pow2", "Square", "[A]@a^2", "[A]", RuleParamKind::Alpha),
    Rule::template("Pow3", "Cube", "[A]@a^3", "[[A]@a]", RuleParamKind::Alpha),
    Rule::template("Exp", "Exponential Form", "A^([]@a)", "[A]@a", RuleParamKind::Alpha),
    Rule::template("Exp-m", "Exponential Mark", "A^([])", "[A]", RuleParamKind::None),
    Rule::template("Exp-0", "Exponential Identity", "A^([[]])", "A", RuleParamKind::None),
    Rule { id: "Compose", name: "Operator Composition", params: RuleParamKind::Compose, form: Form::Compose },
];

fn build_rules() -> Vec<Rule> {
    let mut rules: Vec<Rule> = laws::APPENDIX_A.iter().map(Rule::from_law).collect();
    rules.extend(laws::APPENDIX_B_GENERAL.iter().map(Rule::from_law));
    rules.extend(laws::APPENDIX_B_COMPILE.iter().map(|(t, _)| Rule::from_law(t)));
    rules.push(Rule::from_law(&laws::AND_DISTRIBUTION));
    rules.extend_from_slice(EXTRA_RULES);
    rules
}

/// Soundness report for one rule instance that failed the equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnsoundRule {
    pub id: String,
    pub params: RuleParams,
    pub detail: String,
}

/// Check every instance of every rule with the decision procedure.
pub fn verify_rules(rules: &[Rule]) -> Vec<UnsoundRule> {
    let mut bad = Vec::new();
    for rule in rules {
        for p in rule.all_params() {
            let inst = rule.instantiate(&p).expect("admissible parameters");
            let detail = match check_equiv(&inst.lhs, &inst.rhs) {
                Ok(r) if r.is_equivalent() => continue,
                Ok(r) => format!("{} != {}: {}", inst.lhs, inst.rhs, r.counterexample.unwrap()),
                Err(e) => e.to_string(),
            };
            bad.push(UnsoundRule { id: rule.id.to_string(), params: p, detail });
        }
    }
    bad
}

/// The rule database, checked for soundness on first use.
pub fn rules() -> &'static [Rule] {
    static RULES: OnceLock<Vec<Rule>> = OnceLock::new();
    RULES.get_or_init(|| {
        let rules = build_rules();
        let bad = verify_rules(&rules);
        assert!(bad.is_empty(), "unsound rules: {bad:?}");
        rules
    })
}

pub fn find_rule(key: &str) -> Option<&'static Rule> {
    rules().iter().find(|r| r.answers_to(key))
}

/// Rule ids grouped for display.
pub fn rule_table() -> BTreeMap<&'static str, &'static str> {
    rules().iter().map(|r| (r.id, r.name)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_rules_sound() {
        assert!(verify_rules(&build_rules()).is_empty());
        assert!(rules().len() > 40);
    }

    #[test]
    fn ids_are_unique() {
        let rules = build_rules();
        for (n, r) in rules.iter().enumerate() {
            assert!(rules[n + 1..].iter().all(|o| o.id != r.id), "{}", r.id);
        }
    }

    #[test]
    fn lookup_by_alias() {
        assert_eq!(find_rule("A3").unwrap().name, "Reflexion");
        assert_eq!(find_rule("A3-Reflexion").unwrap().id, "A3");
        assert_eq!(find_rule("Q6-SplitGeneration").unwrap().id, "Q6");
        assert_eq!(find_rule("split generation").unwrap().id, "Q6");
        assert!(find_rule("nope").is_none());
    }

    #[test]
    fn side_conditions() {
        let q5 = find_rule("Q5").unwrap();
        assert!(matches!(
            q5.instantiate(&RuleParams::alpha_beta(MarkKind::I, MarkKind::I)),
            Err(RewriteError::SideCondition { .. })
        ));
        assert!(find_rule("Q1").unwrap().instantiate(&RuleParams::default()).is_err());
        assert!(find_rule("Compose").unwrap().instantiate(&RuleParams::alpha(MarkKind::I)).is_err());
    }

    #[test]
    fn empty_mark_rules() {
        let em = find_rule("EM").unwrap().instantiate(&RuleParams::alpha(MarkKind::I)).unwrap();
        assert_eq!(em.lhs.to_string(), "[]i");
        assert_eq!(em.rhs.to_string(), "{[], , , []}");
        let em3 = find_rule("EM3").unwrap().instantiate(&RuleParams::alpha(MarkKind::J)).unwrap();
        assert_eq!(em3.lhs.to_string(), "[]j^3");
        assert_eq!(em3.rhs.to_string(), "{, , [], []}");
    }

    #[test]
    fn compose_rule() {
        let r = find_rule("Compose").unwrap().instantiate(&RuleParams::compose(Q8Op::MJ, Q8Op::MI)).unwrap();
        assert_eq!(r.lhs.to_string(), "[[A]j^3]i^3");
        assert_eq!(r.rhs.to_string(), "[A]k^3");
    }
}
