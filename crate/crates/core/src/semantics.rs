//! Finite-domain evaluation of Q expressions, the connectives, and the
//! pair-valued BF mode.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{op_of_value, LoF, MarkKind, Q8Op, QValue, ValueParseError};
use crate::textio::Expr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable {0:?}")]
    UnboundVariable(String),
    #[error("exponent evaluates to {0}, which is not an operator value")]
    NotOperatorValue(QValue),
    #[error("variable {0:?} is used both inside a tuple slot and as a 4-tuple")]
    SortConflict(String),
    #[error("{0} is not available in pair mode")]
    NotInPairMode(String),
}

/// Definition-level action of a mark on a 4-tuple.
pub fn apply_op(kind: MarkKind, v: QValue) -> QValue {
    let [a, b, c, d] = v.slots();
    let slots = match kind {
        MarkKind::Plain => [a.mark(), b.mark(), c.mark(), d.mark()],
        MarkKind::I => [b.mark(), a, d, c.mark()],
        MarkKind::J => [c.mark(), d.mark(), a, b],
        MarkKind::K => [d.mark(), c, b.mark(), a],
    };
    QValue::from_slots(slots)
}

/// The action of a group element, built from marks: `-g` is `g` under a plain mark.
pub fn apply_q8(g: Q8Op, v: QValue) -> QValue {
    let base = match g.unit_mark() {
        Some(kind) => apply_op(kind, v),
        None => v,
    };
    if g.is_negative() {
        base.mark()
    } else {
        base
    }
}

/// The canonical expression of a group element acting on `body`:
/// `1 -> body`, `-1 -> [body]`, `alpha -> [body]alpha`, `-alpha -> [body]alpha^3`.
pub fn operator_expr(g: Q8Op, body: Expr) -> Expr {
    match (g.unit_mark(), g.is_negative()) {
        (None, false) => body,
        (None, true) => Expr::cross(body),
        (Some(k), false) => Expr::mark(k, body),
        (Some(k), true) => Expr::power(k, body, 3),
    }
}

pub fn juxtapose(v: QValue, w: QValue) -> QValue {
    v.juxtapose(w)
}

fn apply_power(kind: MarkKind, v: QValue, exponent: u32) -> QValue {
    let period = if kind == MarkKind::Plain { 2 } else { 4 };
    (0..exponent % period).fold(v, |acc, _| apply_op(kind, acc))
}

/// Variable assignment. Variables inside tuple slots are LoF-valued, all
/// others range over the sixteen Q values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Env {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub q: BTreeMap<String, QValue>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lof: BTreeMap<String, LoF>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn with(mut self, name: &str, value: QValue) -> Env {
        self.q.insert(name.to_string(), value);
        self
    }

    pub fn with_lof(mut self, name: &str, value: LoF) -> Env {
        self.lof.insert(name.to_string(), value);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty() && self.lof.is_empty()
    }
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.q.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.extend(self.lof.iter().map(|(k, v)| format!("{k}={v}")));
        parts.sort();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvParseError {
    #[error("bad assignment {0:?}; expected name=value")]
    Syntax(String),
    #[error("{name} is a tuple-slot variable; its value must be M or U, got {value:?}")]
    SlotValue { name: String, value: String },
    #[error("value for {name}: {source}")]
    QValue { name: String, source: ValueParseError },
    #[error("{0} does not occur in the expression")]
    Unknown(String),
    #[error(transparent)]
    Sorts(#[from] EvalError),
}

impl Env {
    /// Parse `A=MUUM,b=M` for the variables of `e`: four-slot patterns for
    /// Q variables, a single `M` or `U` for tuple-slot variables.
    pub fn parse_for(text: &str, e: &Expr) -> Result<Env, EnvParseError> {
        let sorts = VarSorts::of(&[e])?;
        let mut env = Env::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part.split_once('=').ok_or_else(|| EnvParseError::Syntax(part.to_string()))?;
            let (name, value) = (name.trim(), value.trim());
            if sorts.lof.iter().any(|n| n == name) {
                let v = match value {
                    "M" | "m" => LoF::Marked,
                    "U" | "u" => LoF::Unmarked,
                    _ => return Err(EnvParseError::SlotValue { name: name.into(), value: value.into() }),
                };
                env = env.with_lof(name, v);
            } else if sorts.q.iter().any(|n| n == name) {
                let v = value.parse().map_err(|source| EnvParseError::QValue { name: name.into(), source })?;
                env = env.with(name, v);
            } else {
                return Err(EnvParseError::Unknown(name.to_string()));
            }
        }
        Ok(env)
    }
}

/// Free variables split by sort, each list sorted by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarSorts {
    pub q: Vec<String>,
    pub lof: Vec<String>,
}

impl VarSorts {
    pub fn of(exprs: &[&Expr]) -> Result<VarSorts, EvalError> {
        let mut q = std::collections::BTreeSet::new();
        let mut lof = std::collections::BTreeSet::new();
        for e in exprs {
            collect_sorts(e, false, &mut q, &mut lof);
        }
        if let Some(clash) = q.intersection(&lof).next() {
            return Err(EvalError::SortConflict(clash.clone()));
        }
        Ok(VarSorts { q: q.into_iter().collect(), lof: lof.into_iter().collect() })
    }
}

fn collect_sorts(
    e: &Expr,
    in_slot: bool,
    q: &mut std::collections::BTreeSet<String>,
    lof: &mut std::collections::BTreeSet<String>,
) {
    match e {
        Expr::Void => {}
        Expr::Var(name) => {
            if in_slot {
                lof.insert(name.clone());
            } else {
                q.insert(name.clone());
            }
        }
        Expr::Tuple(slots) => slots.iter().for_each(|s| collect_sorts(s, true, q, lof)),
        other => other.children().into_iter().for_each(|c| collect_sorts(c, in_slot, q, lof)),
    }
}

#[derive(Clone, Debug)]
enum SlotNode {
    Void,
    Var(usize),
    Mark(Box<SlotNode>),
    Juxt(Vec<SlotNode>),
}

impl SlotNode {
    fn run(&self, lof: &[LoF]) -> LoF {
        match self {
            SlotNode::Void => LoF::Unmarked,
            SlotNode::Var(i) => lof[*i],
            SlotNode::Mark(b) => b.run(lof).mark(),
            SlotNode::Juxt(children) => {
                LoF::from_bool(children.iter().any(|c| c.run(lof).is_marked()))
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Void,
    Var(usize),
    Mark(MarkKind, Box<Node>),
    Power(MarkKind, Box<Node>, u32),
    Juxt(Vec<Node>),
    Tuple(Box<[SlotNode; 4]>),
    ExpApply(Box<Node>, Box<Node>),
}

impl Node {
    fn run(&self, q: &[QValue], lof: &[LoF]) -> Result<QValue, EvalError> {
        Ok(match self {
            Node::Void => QValue::UNMARKED,
            Node::Var(i) => q[*i],
            Node::Mark(kind, b) => apply_op(*kind, b.run(q, lof)?),
            Node::Power(kind, b, n) => apply_power(*kind, b.run(q, lof)?, *n),
            Node::Juxt(children) => {
                let mut acc = QValue::UNMARKED;
                for c in children {
                    acc = acc.juxtapose(c.run(q, lof)?);
                }
                acc
            }
            Node::Tuple(slots) => QValue::from_slots([
                slots[0].run(lof),
                slots[1].run(lof),
                slots[2].run(lof),
                slots[3].run(lof),
            ]),
            Node::ExpApply(base, exponent) => {
                let e = exponent.run(q, lof)?;
                let g = op_of_value(e).ok_or(EvalError::NotOperatorValue(e))?;
                apply_q8(g, base.run(q, lof)?)
            }
        })
    }
}

/// An expression with its variables resolved to positions, ready for
/// repeated evaluation.
#[derive(Clone, Debug)]
pub struct Program {
    sorts: VarSorts,
    root: Node,
}

impl Program {
    pub fn compile(e: &Expr) -> Result<Program, EvalError> {
        let sorts = VarSorts::of(&[e])?;
        Program::compile_with(e, sorts)
    }

    /// Compile against a given variable layout (a superset of the free variables).
    pub fn compile_with(e: &Expr, sorts: VarSorts) -> Result<Program, EvalError> {
        let root = compile_node(e, &sorts)?;
        Ok(Program { sorts, root })
    }

    pub fn sorts(&self) -> &VarSorts {
        &self.sorts
    }

    /// Evaluate with values laid out in the order of [`Program::sorts`].
    pub fn run(&self, q: &[QValue], lof: &[LoF]) -> Result<QValue, EvalError> {
        self.root.run(q, lof)
    }

    pub fn run_env(&self, env: &Env) -> Result<QValue, EvalError> {
        let q = self
            .sorts
            .q
            .iter()
            .map(|n| env.q.get(n).copied().ok_or_else(|| EvalError::UnboundVariable(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let lof = self
            .sorts
            .lof
            .iter()
            .map(|n| env.lof.get(n).copied().ok_or_else(|| EvalError::UnboundVariable(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.run(&q, &lof)
    }
}

fn index_of(names: &[String], name: &str) -> Result<usize, EvalError> {
    names
        .binary_search_by(|n| n.as_str().cmp(name))
        .map_err(|_| EvalError::UnboundVariable(name.to_string()))
}

fn compile_slot(e: &Expr, sorts: &VarSorts) -> Result<SlotNode, EvalError> {
    Ok(match e {
        Expr::Void => SlotNode::Void,
        Expr::Var(name) => SlotNode::Var(index_of(&sorts.lof, name)?),
        Expr::Mark(MarkKind::Plain, b) => SlotNode::Mark(Box::new(compile_slot(b, sorts)?)),
        Expr::Juxt(children) => SlotNode::Juxt(
            children.iter().map(|c| compile_slot(c, sorts)).collect::<Result<_, _>>()?,
        ),
        // The parser rejects anything else inside a slot; the semantics of a
        // slot are plain LoF, so an imaginary mark there has no meaning.
        other => {
            return Err(EvalError::NotInPairMode(format!("non-LoF slot content {other}")));
        }
    })
}

fn compile_node(e: &Expr, sorts: &VarSorts) -> Result<Node, EvalError> {
    Ok(match e {
        Expr::Void => Node::Void,
        Expr::Var(name) => Node::Var(index_of(&sorts.q, name)?),
        Expr::Mark(k, b) => Node::Mark(*k, Box::new(compile_node(b, sorts)?)),
        Expr::Power(k, b, n) => Node::Power(*k, Box::new(compile_node(b, sorts)?), *n),
        Expr::Juxt(children) => {
            Node::Juxt(children.iter().map(|c| compile_node(c, sorts)).collect::<Result<_, _>>()?)
        }
        Expr::Tuple(slots) => Node::Tuple(Box::new([
            compile_slot(&slots[0], sorts)?,
            compile_slot(&slots[1], sorts)?,
            compile_slot(&slots[2], sorts)?,
            compile_slot(&slots[3], sorts)?,
        ])),
        Expr::ExpApply(b, x) => {
            Node::ExpApply(Box::new(compile_node(b, sorts)?), Box::new(compile_node(x, sorts)?))
        }
    })
}

pub fn eval(e: &Expr, env: &Env) -> Result<QValue, EvalError> {
    Program::compile(e)?.run_env(env)
}

/// The logical connectives. The first eight index the distribution matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectiveKind {
    Or,
    And,
    OrI,
    AndI,
    OrJ,
    AndJ,
    OrK,
    AndK,
    Xor,
}

impl ConnectiveKind {
    pub const EIGHT: [ConnectiveKind; 8] = [
        ConnectiveKind::Or,
        ConnectiveKind::And,
        ConnectiveKind::OrI,
        ConnectiveKind::AndI,
        ConnectiveKind::OrJ,
        ConnectiveKind::AndJ,
        ConnectiveKind::OrK,
        ConnectiveKind::AndK,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConnectiveKind::Or => "or",
            ConnectiveKind::And => "and",
            ConnectiveKind::OrI => "or_i",
            ConnectiveKind::AndI => "and_i",
            ConnectiveKind::OrJ => "or_j",
            ConnectiveKind::AndJ => "and_j",
            ConnectiveKind::OrK => "or_k",
            ConnectiveKind::AndK => "and_k",
            ConnectiveKind::Xor => "xor",
        }
    }
}

impl fmt::Display for ConnectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConnectiveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConnectiveKind::EIGHT
            .into_iter()
            .chain([ConnectiveKind::Xor])
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown connective {s:?}"))
    }
}

/// The defining expression of a connective applied to `a` and `b`.
pub fn connective(kind: ConnectiveKind, a: Expr, b: Expr) -> Expr {
    use ConnectiveKind::*;
    let or_alpha = |k: MarkKind, a: Expr, b: Expr| {
        Expr::mark(k, Expr::juxt([Expr::power(k, a, 3), Expr::power(k, b, 3)]))
    };
    let and_alpha = |k: MarkKind, a: Expr, b: Expr| {
        Expr::power(k, Expr::juxt([Expr::mark(k, a), Expr::mark(k, b)]), 3)
    };
    match kind {
        Or => Expr::juxt([a, b]),
        And => Expr::cross(Expr::juxt([Expr::cross(a), Expr::cross(b)])),
        OrI => or_alpha(MarkKind::I, a, b),
        AndI => and_alpha(MarkKind::I, a, b),
        OrJ => or_alpha(MarkKind::J, a, b),
        AndJ => and_alpha(MarkKind::J, a, b),
        OrK => or_alpha(MarkKind::K, a, b),
        AndK => and_alpha(MarkKind::K, a, b),
        Xor => Expr::juxt([
            Expr::cross(Expr::juxt([Expr::cross(a.clone()), b.clone()])),
            Expr::cross(Expr::juxt([Expr::cross(b), a])),
        ]),
    }
}

/// A BF value: a pair of LoF values.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BFValue(u8);

impl BFValue {
    pub fn new(a: LoF, b: LoF) -> BFValue {
        BFValue(((a.is_marked() as u8) << 1) | b.is_marked() as u8)
    }

    pub fn all() -> impl Iterator<Item = BFValue> + Clone {
        (0..4).map(BFValue)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn slots(self) -> [LoF; 2] {
        [LoF::from_bool(self.0 & 2 != 0), LoF::from_bool(self.0 & 1 != 0)]
    }

    pub fn juxtapose(self, other: BFValue) -> BFValue {
        BFValue(self.0 | other.0)
    }

    pub fn pattern(self) -> String {
        self.slots().iter().map(|s| s.symbol()).collect()
    }
}

impl fmt::Debug for BFValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BFValue({})", self.pattern())
    }
}

impl fmt::Display for BFValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pattern())
    }
}

impl FromStr for BFValue {
    type Err = ValueParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ValueParseError::BadPattern { expected: 2, found: s.to_string() };
        let mut slots = Vec::new();
        for c in s.trim().chars() {
            slots.push(match c {
                'M' | 'm' => LoF::Marked,
                'U' | 'u' => LoF::Unmarked,
                _ => return Err(bad()),
            });
        }
        match slots[..] {
            [a, b] => Ok(BFValue::new(a, b)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for BFValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.pattern())
    }
}

impl<'de> Deserialize<'de> for BFValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// BF marks: plain marks both slots, `i` maps `(a, b)` to `([b], a)`.
///
/// Panics on `j` or `k`, which BF does not have.
pub fn bf_apply(kind: MarkKind, v: BFValue) -> BFValue {
    let [a, b] = v.slots();
    match kind {
        MarkKind::Plain => BFValue::new(a.mark(), b.mark()),
        MarkKind::I => BFValue::new(b.mark(), a),
        other => panic!("BF has no {other} mark"),
    }
}

/// BF operator values: the four powers of `i` applied to `(U, U)`.
fn bf_op_power(v: BFValue) -> Option<u32> {
    (0..4).find(|&n| (0..n).fold(BFValue(0), |acc, _| bf_apply(MarkKind::I, acc)) == v)
}

pub fn eval_bf(e: &Expr, env: &BTreeMap<String, BFValue>) -> Result<BFValue, EvalError> {
    Ok(match e {
        Expr::Void => BFValue(0),
        Expr::Var(name) => *env.get(name).ok_or_else(|| EvalError::UnboundVariable(name.clone()))?,
        Expr::Mark(k @ (MarkKind::Plain | MarkKind::I), b) => bf_apply(*k, eval_bf(b, env)?),
        Expr::Power(k @ (MarkKind::Plain | MarkKind::I), b, n) => {
            let period = if *k == MarkKind::Plain { 2 } else { 4 };
            (0..n % period).try_fold(eval_bf(b, env)?, |acc, _| Ok::<_, EvalError>(bf_apply(*k, acc)))?
        }
        Expr::Mark(k, _) | Expr::Power(k, _, _) => {
            return Err(EvalError::NotInPairMode(format!("the {k} mark")))
        }
        Expr::Juxt(children) => {
            let mut acc = BFValue(0);
            for c in children {
                acc = acc.juxtapose(eval_bf(c, env)?);
            }
            acc
        }
        Expr::Tuple(_) => return Err(EvalError::NotInPairMode("a 4-tuple literal".into())),
        Expr::ExpApply(b, x) => {
            let exponent = eval_bf(x, env)?;
            let n = bf_op_power(exponent).ok_or_else(|| {
                EvalError::NotInPairMode(format!("exponent value {exponent}"))
            })?;
            (0..n).fold(eval_bf(b, env)?, |acc, _| bf_apply(MarkKind::I, acc))
        }
    })
}

/// All injections of BF into Q that fix the unmarked value and intertwine the
/// BF marks with the `alpha` and plain marks of Q, found by exhaustive search.
pub fn solve_bf_embeddings(alpha: MarkKind) -> Vec<[QValue; 4]> {
    assert_ne!(alpha, MarkKind::Plain, "embedding is into an imaginary subspace");
    let mut out = Vec::new();
    for code in 0u32..(1 << 16) {
        let image: [QValue; 4] =
            std::array::from_fn(|n| QValue::from_index(((code >> (4 * n)) & 0xF) as u8));
        if image[0] != QValue::UNMARKED {
            continue;
        }
        let distinct = (0..4).all(|x| (0..x).all(|y| image[x] != image[y]));
        let commutes = BFValue::all().all(|v| {
            image[bf_apply(MarkKind::I, v).index() as usize] == apply_op(alpha, image[v.index() as usize])
                && image[bf_apply(MarkKind::Plain, v).index() as usize]
                    == apply_op(MarkKind::Plain, image[v.index() as usize])
        });
        if distinct && commutes {
            out.push(image);
        }
    }
    out
}

fn embedding_table(alpha: MarkKind) -> &'static [QValue; 4] {
    static TABLES: OnceLock<[[QValue; 4]; 3]> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        MarkKind::IMAGINARY.map(|k| {
            let solutions = solve_bf_embeddings(k);
            assert_eq!(solutions.len(), 1, "BF embedding into the {k} subspace is not unique");
            solutions[0]
        })
    });
    match alpha {
        MarkKind::I => &tables[0],
        MarkKind::J => &tables[1],
        MarkKind::K => &tables[2],
        MarkKind::Plain => panic!("embedding is into an imaginary subspace"),
    }
}

/// Embed a BF value into the `alpha` subspace of Q.
pub fn embed_bf(alpha: MarkKind, v: BFValue) -> QValue {
    embedding_table(alpha)[v.index() as usize]
}

/// The `op_value` image of the BF operator `i^n` under the embedding; used to
/// check that the embedding lines up with the group.
pub fn embedded_op(alpha: MarkKind, n: u32) -> Q8Op {
    let g = alpha.op();
    (0..n % 4).fold(Q8Op::P1, |acc, _| crate::kernel::q8_mul(acc, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{op_value, q8_mul, q8_to_signed_perm};
    use crate::textio::parse;

    fn pat(s: &str) -> QValue {
        s.parse().unwrap()
    }

    fn ev(text: &str, env: &Env) -> QValue {
        eval(&parse(text).unwrap(), env).unwrap()
    }

    #[test]
    fn apply_op_examples() {
        assert_eq!(apply_op(MarkKind::I, QValue::UNMARKED), pat("MUUM"));
        assert_eq!(apply_op(MarkKind::K, QValue::UNMARKED), pat("MUMU"));
        for v in QValue::all() {
            assert_eq!(apply_op(MarkKind::Plain, apply_op(MarkKind::Plain, v)), v);
        }
    }

    #[test]
    fn op_orders() {
        for v in QValue::all() {
            for k in MarkKind::IMAGINARY {
                let twice = apply_op(k, apply_op(k, v));
                assert_eq!(twice, v.mark());
                assert_ne!(twice, v);
                assert_eq!(apply_op(k, apply_op(k, twice)), v);
            }
        }
    }

    #[test]
    fn definition_agrees_with_signed_perms() {
        for g in Q8Op::ALL {
            let perm = q8_to_signed_perm(g);
            for v in QValue::all() {
                assert_eq!(apply_q8(g, v), perm.apply_q(v), "{g} on {v}");
            }
        }
    }

    #[test]
    fn operation_preservation() {
        for g in Q8Op::ALL {
            for h in Q8Op::ALL {
                let gh = q8_mul(g, h);
                for v in QValue::all() {
                    assert_eq!(apply_q8(h, apply_q8(g, v)), apply_q8(gh, v));
                }
            }
        }
    }

    #[test]
    fn juxtaposition_examples() {
        for c in [LoF::Unmarked, LoF::Marked] {
            let w = QValue::from_slots([LoF::Unmarked, LoF::Unmarked, c, LoF::Marked]);
            assert_eq!(
                juxtapose(pat("MMUM"), w),
                QValue::from_slots([LoF::Marked, LoF::Marked, c, LoF::Marked])
            );
        }
        assert_eq!(juxtapose(op_value(Q8Op::I), op_value(Q8Op::J)), pat("MMUM"));
        for v in QValue::all() {
            assert_eq!(juxtapose(QValue::UNMARKED, v), v);
            assert_eq!(juxtapose(QValue::MARKED, v), QValue::MARKED);
            for w in QValue::all() {
                assert_eq!(juxtapose(v, w), juxtapose(w, v));
                for u in QValue::all() {
                    assert_eq!(juxtapose(juxtapose(v, w), u), juxtapose(v, juxtapose(w, u)));
                }
            }
        }
    }

    #[test]
    fn eval_examples() {
        let env = Env::new()
            .with_lof("a", LoF::Marked)
            .with_lof("b", LoF::Unmarked)
            .with_lof("c", LoF::Unmarked)
            .with_lof("d", LoF::Marked);
        assert_eq!(ev("[[{a,b,c,d}]i]j", &env), ev("[{a,b,c,d}]k", &env));
        assert_eq!(ev("{a,b,c,d}^([]i)", &env), ev("[{a,b,c,d}]i", &env));
        for x in QValue::all() {
            let env = Env::new().with("X", x);
            assert_eq!(ev("[X]i^4", &env), x);
            assert_eq!(ev("[X]i^3", &env), ev("[[X]i]", &env));
            for n in 1..12 {
                for k in ["", "i", "j", "k"] {
                    let full = ev(&format!("[X]{k}^{n}"), &env);
                    let reduced = match n % 4 {
                        0 => x,
                        r => ev(&format!("[X]{k}^{r}"), &env),
                    };
                    if k.is_empty() {
                        assert_eq!(full, if n % 2 == 0 { x } else { x.mark() });
                    } else {
                        assert_eq!(full, reduced);
                    }
                }
            }
        }
    }

    #[test]
    fn eval_errors() {
        assert_eq!(
            eval(&parse("[X]").unwrap(), &Env::new()),
            Err(EvalError::UnboundVariable("X".into()))
        );
        assert_eq!(
            eval(&parse("X^([]i []j)").unwrap(), &Env::new().with("X", QValue::UNMARKED)),
            Err(EvalError::NotOperatorValue(pat("MMUM")))
        );
        assert_eq!(
            eval(&parse("a {a,b,c,d}").unwrap(), &Env::new()),
            Err(EvalError::SortConflict("a".into()))
        );
    }

    #[test]
    fn exponent_forms_cover_all_operators() {
        for g in Q8Op::ALL {
            let exponent = crate::textio::Expr::tuple(op_value(g).slots().map(|s| {
                if s.is_marked() {
                    Expr::cross(Expr::Void)
                } else {
                    Expr::Void
                }
            }));
            let e = Expr::exp_apply(Expr::var("X"), exponent);
            for x in QValue::all() {
                assert_eq!(eval(&e, &Env::new().with("X", x)).unwrap(), apply_q8(g, x));
            }
        }
    }

    fn truth(kind: ConnectiveKind) -> [[QValue; 16]; 16] {
        let e = connective(kind, Expr::var("A"), Expr::var("B"));
        let p = Program::compile(&e).unwrap();
        let mut t = [[QValue::UNMARKED; 16]; 16];
        for a in QValue::all() {
            for b in QValue::all() {
                t[a.index() as usize][b.index() as usize] = p.run(&[a, b], &[]).unwrap();
            }
        }
        t
    }

    #[test]
    fn connective_shapes() {
        let (a, b) = (Expr::var("A"), Expr::var("B"));
        assert_eq!(connective(ConnectiveKind::Or, a.clone(), b.clone()), parse("A B").unwrap());
        assert_eq!(
            connective(ConnectiveKind::OrI, a.clone(), b.clone()),
            parse("[[A]i^3 [B]i^3]i").unwrap()
        );
        assert_eq!(
            connective(ConnectiveKind::AndI, a.clone(), b.clone()),
            parse("[[A]i [B]i]i^3").unwrap()
        );
        assert_eq!(connective(ConnectiveKind::Xor, a, b), parse("[[A] B] [[B] A]").unwrap());
        let and = truth(ConnectiveKind::And);
        for v in QValue::all() {
            assert_eq!(and[v.index() as usize][v.index() as usize], v);
        }
    }

    #[test]
    fn connectives_act_slotwise() {
        // Each of the eight connectives is slot-wise either OR or AND.
        // Oracle: the slot pattern of marks on the routing of the -alpha then
        // alpha operators, read off by brute force from the truth tables.
        let expected: [(ConnectiveKind, [bool; 4]); 8] = [
            (ConnectiveKind::Or, [true; 4]),
            (ConnectiveKind::And, [false; 4]),
            (ConnectiveKind::OrI, [false, true, true, false]),
            (ConnectiveKind::AndI, [true, false, false, true]),
            (ConnectiveKind::OrJ, [false, false, true, true]),
            (ConnectiveKind::AndJ, [true, true, false, false]),
            (ConnectiveKind::OrK, [false, true, false, true]),
            (ConnectiveKind::AndK, [true, false, true, false]),
        ];
        for (kind, or_slots) in expected {
            let t = truth(kind);
            for a in QValue::all() {
                for b in QValue::all() {
                    let got = t[a.index() as usize][b.index() as usize];
                    for p in 0..4 {
                        let (x, y) = (a.slot(p).is_marked(), b.slot(p).is_marked());
                        let want = if or_slots[p] { x || y } else { x && y };
                        assert_eq!(got.slot(p).is_marked(), want, "{kind} slot {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn or_i_matches_bilattice_convention() {
        // In pair mode True = (U, M), False = (M, U); or_i is the truth join.
        let t: BFValue = "UM".parse().unwrap();
        let f: BFValue = "MU".parse().unwrap();
        let e = connective(ConnectiveKind::OrI, Expr::var("A"), Expr::var("B"));
        let run = |x, y| {
            let env = BTreeMap::from([("A".to_string(), x), ("B".to_string(), y)]);
            eval_bf(&e, &env).unwrap()
        };
        assert_eq!(run(t, f), t);
        assert_eq!(run(f, t), t);
        assert_eq!(run(f, f), f);
        assert_eq!(run(t, t), t);
    }

    #[test]
    fn bf_marks() {
        assert_eq!(bf_apply(MarkKind::I, "UU".parse().unwrap()), "MU".parse().unwrap());
        for v in BFValue::all() {
            assert_eq!(bf_apply(MarkKind::I, bf_apply(MarkKind::I, v)), bf_apply(MarkKind::Plain, v));
            assert_eq!(bf_apply(MarkKind::Plain, bf_apply(MarkKind::Plain, v)), v);
        }
        let env = BTreeMap::new();
        assert!(eval_bf(&parse("[]j").unwrap(), &env).is_err());
        assert!(eval_bf(&parse("{,,,}").unwrap(), &env).is_err());
        assert_eq!(eval_bf(&parse("[]i^2").unwrap(), &env).unwrap(), "MM".parse().unwrap());
    }

    #[test]
    fn bf_embeddings() {
        for alpha in MarkKind::IMAGINARY {
            let uu: BFValue = "UU".parse().unwrap();
            assert_eq!(embed_bf(alpha, uu), QValue::UNMARKED);
            for v in BFValue::all() {
                assert_eq!(embed_bf(alpha, bf_apply(MarkKind::I, v)), apply_op(alpha, embed_bf(alpha, v)));
                assert_eq!(
                    embed_bf(alpha, bf_apply(MarkKind::Plain, v)),
                    apply_op(MarkKind::Plain, embed_bf(alpha, v))
                );
                for w in BFValue::all() {
                    assert_eq!(embed_bf(alpha, v.juxtapose(w)), embed_bf(alpha, v).juxtapose(embed_bf(alpha, w)));
                }
            }
            let mu: BFValue = "MU".parse().unwrap();
            assert_eq!(embed_bf(alpha, mu), op_value(embedded_op(alpha, 1)));
        }
    }

    #[test]
    fn bf_embedding_golden() {
        let golden: BTreeMap<String, BTreeMap<String, String>> =
            serde_json::from_str(include_str!("../data/bf_embedding.json")).unwrap();
        for alpha in MarkKind::IMAGINARY {
            let table = &golden[alpha.suffix()];
            for v in BFValue::all() {
                assert_eq!(table[&v.pattern()], embed_bf(alpha, v).pattern(), "{alpha} {v}");
            }
        }
    }
}
