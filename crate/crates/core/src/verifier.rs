//! Equivalence by exhaustive assignment, and the named law suites.
//!
//! Every operator acts slot-wise through a fixed signed routing, so running
//! through all Q values of the free variables is the same as running through
//! all Boolean values of the underlying LoF slot variables.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{op_value, q8_mul, LoF, MarkKind, Q8Op, QValue};
use crate::laws::{self, LawInstance, LawTemplate};
use crate::semantics::{
    apply_op, bf_apply, connective, embed_bf, eval, eval_bf, operator_expr, BFValue,
    ConnectiveKind, Env, EvalError, Program, VarSorts,
};
use crate::textio::{parse, Expr};

/// Default cap on the number of assignments: six Q variables.
pub const DEFAULT_BUDGET: u64 = 16 * 16 * 16 * 16 * 16 * 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{variables} variables need {required} assignments, over the budget of {budget}")]
    BudgetExceeded { variables: usize, required: u128, budget: u64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivOptions {
    pub budget: u64,
}

impl Default for EquivOptions {
    fn default() -> Self {
        EquivOptions { budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Equivalent,
    Inequivalent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub env: Env,
    pub lhs: QValue,
    pub rhs: QValue,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}: lhs={} rhs={}", self.env, self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivResult {
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
    pub assignments_checked: u64,
}

impl EquivResult {
    pub fn is_equivalent(&self) -> bool {
        self.verdict == Verdict::Equivalent
    }
}

/// Mixed-radix enumeration over the free variables, in name order with the
/// first name most significant. Q variables take 16 values, slot variables 2.
struct Assignments {
    sorts: VarSorts,
    // (is_q, index into its sort) in name order.
    order: Vec<(bool, usize)>,
    total: u64,
}

impl Assignments {
    fn new(sorts: VarSorts, budget: u64) -> Result<Assignments, VerifyError> {
        let mut named: Vec<(&str, bool, usize)> = sorts
            .q
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), true, i))
            .chain(sorts.lof.iter().enumerate().map(|(i, n)| (n.as_str(), false, i)))
            .collect();
        named.sort();
        let order: Vec<(bool, usize)> = named.iter().map(|&(_, q, i)| (q, i)).collect();
        let required: u128 = order.iter().map(|&(q, _)| if q { 16u128 } else { 2 }).product();
        if required > budget as u128 {
            return Err(VerifyError::BudgetExceeded {
                variables: order.len(),
                required,
                budget,
            });
        }
        Ok(Assignments { sorts, order, total: required as u64 })
    }

    fn decode(&self, mut index: u64, q: &mut [QValue], lof: &mut [LoF]) {
        for &(is_q, slot) in self.order.iter().rev() {
            if is_q {
                q[slot] = QValue::from_index((index % 16) as u8);
                index /= 16;
            } else {
                lof[slot] = LoF::from_bool(index % 2 == 1);
                index /= 2;
            }
        }
    }

    fn env(&self, index: u64) -> Env {
        let mut q = vec![QValue::UNMARKED; self.sorts.q.len()];
        let mut lof = vec![LoF::Unmarked; self.sorts.lof.len()];
        self.decode(index, &mut q, &mut lof);
        Env {
            q: self.sorts.q.iter().cloned().zip(q).collect(),
            lof: self.sorts.lof.iter().cloned().zip(lof).collect(),
        }
    }
}

/// Smallest index in `0..total` where `hit` holds.
fn first_hit(total: u64, hit: impl Fn(u64) -> bool + Sync) -> Option<u64> {
    #[cfg(feature = "parallel")]
    {
        if total > 1 << 14 {
            use rayon::prelude::*;
            return (0..total).into_par_iter().find_first(|&i| hit(i));
        }
    }
    (0..total).find(|&i| hit(i))
}

pub fn check_equiv(a: &Expr, b: &Expr) -> Result<EquivResult, VerifyError> {
    check_equiv_with(a, b, &EquivOptions::default())
}

pub fn check_equiv_with(a: &Expr, b: &Expr, opts: &EquivOptions) -> Result<EquivResult, VerifyError> {
    let sorts = VarSorts::of(&[a, b])?;
    let pa = Program::compile_with(a, sorts.clone())?;
    let pb = Program::compile_with(b, sorts.clone())?;
    let space = Assignments::new(sorts, opts.budget)?;
    let (nq, nl) = (space.sorts.q.len(), space.sorts.lof.len());
    let run_at = |index: u64| -> Result<(QValue, QValue), EvalError> {
        let mut q = vec![QValue::UNMARKED; nq];
        let mut lof = vec![LoF::Unmarked; nl];
        space.decode(index, &mut q, &mut lof);
        Ok((pa.run(&q, &lof)?, pb.run(&q, &lof)?))
    };
    let found = first_hit(space.total, |i| !matches!(run_at(i), Ok((x, y)) if x == y));
    match found {
        None => Ok(EquivResult {
            verdict: Verdict::Equivalent,
            counterexample: None,
            assignments_checked: space.total,
        }),
        Some(index) => {
            let (lhs, rhs) = run_at(index)?;
            Ok(EquivResult {
                verdict: Verdict::Inequivalent,
                counterexample: Some(Counterexample { env: space.env(index), lhs, rhs }),
                assignments_checked: index + 1,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LawStatus {
    Holds,
    Fails {
        /// Parameter instance that failed, e.g. `alpha=i`.
        instance: String,
        counterexample: Option<Counterexample>,
        detail: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawResult {
    pub name: String,
    #[serde(flatten)]
    pub status: LawStatus,
    pub assignments: u64,
}

impl LawResult {
    pub fn holds(&self) -> bool {
        self.status == LawStatus::Holds
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawSuite {
    LofAppendixA,
    QAppendixB,
    BfSubspaces,
    Q8Relations,
}

impl LawSuite {
    pub const ALL: [LawSuite; 4] =
        [LawSuite::LofAppendixA, LawSuite::QAppendixB, LawSuite::BfSubspaces, LawSuite::Q8Relations];

    pub fn name(self) -> &'static str {
        match self {
            LawSuite::LofAppendixA => "lof_appendix_a",
            LawSuite::QAppendixB => "q_appendix_b",
            LawSuite::BfSubspaces => "bf_subspaces",
            LawSuite::Q8Relations => "q8_relations",
        }
    }
}

impl FromStr for LawSuite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LawSuite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<_> = LawSuite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite {s:?} (expected one of {})", names.join(", "))
        })
    }
}

impl fmt::Display for LawSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawSuiteReport {
    pub suite: LawSuite,
    pub laws: Vec<LawResult>,
}

impl LawSuiteReport {
    pub fn all_hold(&self) -> bool {
        self.laws.iter().all(LawResult::holds)
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.name == name)
    }
}

impl fmt::Display for LawSuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite)?;
        for law in &self.laws {
            match &law.status {
                LawStatus::Holds => {
                    writeln!(f, "  holds  {:<36} ({} assignments)", law.name, law.assignments)?
                }
                LawStatus::Fails { instance, counterexample, detail } => {
                    write!(f, "  FAILS  {:<36} [{instance}] {detail}", law.name)?;
                    if let Some(c) = counterexample {
                        write!(f, " counterexample {c}")?;
                    }
                    writeln!(f)?;
                }
            }
        }
        let held = self.laws.iter().filter(|l| l.holds()).count();
        write!(f, "{held}/{} laws hold", self.laws.len())
    }
}

/// Check every instance of a template; the first failing instance is reported.
fn check_instances(name: String, instances: &[LawInstance]) -> LawResult {
    let mut assignments = 0;
    for inst in instances {
        match check_equiv(&inst.lhs, &inst.rhs) {
            Ok(r) => {
                assignments += r.assignments_checked;
                if !r.is_equivalent() {
                    return LawResult {
                        name,
                        status: LawStatus::Fails {
                            instance: inst.label(),
                            counterexample: r.counterexample,
                            detail: format!("{} != {}", inst.lhs, inst.rhs),
                        },
                        assignments,
                    };
                }
            }
            Err(e) => {
                return LawResult {
                    name,
                    status: LawStatus::Fails {
                        instance: inst.label(),
                        counterexample: None,
                        detail: e.to_string(),
                    },
                    assignments,
                }
            }
        }
    }
    LawResult { name, status: LawStatus::Holds, assignments }
}

fn template_result(t: &LawTemplate) -> LawResult {
    check_instances(format!("{} {}", t.id, t.name), &t.instances())
}

fn simple_result(name: impl Into<String>, checked: u64, failure: Option<String>) -> LawResult {
    LawResult {
        name: name.into(),
        status: match failure {
            None => LawStatus::Holds,
            Some(detail) => LawStatus::Fails { instance: String::new(), counterexample: None, detail },
        },
        assignments: checked,
    }
}

pub fn run_law_suite(suite: LawSuite) -> LawSuiteReport {
    let laws = match suite {
        LawSuite::LofAppendixA => laws::APPENDIX_A.iter().map(template_result).collect(),
        LawSuite::QAppendixB => appendix_b(),
        LawSuite::BfSubspaces => bf_subspaces(),
        LawSuite::Q8Relations => q8_relations(),
    };
    LawSuiteReport { suite, laws }
}

fn appendix_b() -> Vec<LawResult> {
    let mut out: Vec<LawResult> = laws::APPENDIX_B_GENERAL.iter().map(template_result).collect();
    for (t, op) in laws::APPENDIX_B_COMPILE {
        let inst = t.instantiate(None, None);
        let env = Env::new();
        let want = op_value(op);
        let failure = match (eval(&inst.lhs, &env), eval(&inst.rhs, &env)) {
            (Ok(l), Ok(r)) if l == want && r == want => None,
            (Ok(l), Ok(r)) => Some(format!("lhs={l} rhs={r}, expected {want}")),
            (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
        };
        out.push(simple_result(format!("{} {}", t.id, t.name), 1, failure));
    }
    out
}

/// Laws of BF, written with the `i` mark, that must carry over to each of the
/// I, J and K subspaces.
const BF_TRANSFER: [(&str, &str, &str); 6] = [
    ("Split Generation", "[[A]i B]i C", "[[A C]i B]i C"),
    ("SQR Mark", "[[A]i]i", "[A]"),
    ("Quadra Reflexion", "[A]i^4", "A"),
    ("Or Distribution", "[[A]i^3 [B]i^3]i C", "[[A C]i^3 [B C]i^3]i"),
    ("And Distribution", "[[A]i [B]i]i^3 C", "[[A C]i [B C]i]i^3"),
    ("Extraction", "[A []i]i", "[A]i []i^3"),
];

/// Check a law in pair mode over all `4^v` assignments.
pub fn check_bf_law(lhs: &Expr, rhs: &Expr) -> Result<(bool, u64), EvalError> {
    let mut names = lhs.variables();
    for n in rhs.variables() {
        if !names.contains(&n) {
            names.push(n);
        }
    }
    names.sort();
    let total = 4u64.pow(names.len() as u32);
    for index in 0..total {
        let env: BTreeMap<String, BFValue> = names
            .iter()
            .enumerate()
            .map(|(pos, n)| {
                let digit = (index >> (2 * (names.len() - 1 - pos))) & 3;
                (n.clone(), BFValue::all().nth(digit as usize).unwrap())
            })
            .collect();
        if eval_bf(lhs, &env)? != eval_bf(rhs, &env)? {
            return Ok((false, index + 1));
        }
    }
    Ok((true, total))
}

fn bf_subspaces() -> Vec<LawResult> {
    let mut out = Vec::new();

    let mut failure = None;
    for v in BFValue::all() {
        if bf_apply(MarkKind::I, bf_apply(MarkKind::I, v)) != bf_apply(MarkKind::Plain, v) {
            failure = Some(format!("i^2 differs from the mark on {v}"));
        }
    }
    out.push(simple_result("BF square root of the mark", 4, failure));

    for alpha in MarkKind::IMAGINARY {
        let mut failure = None;
        for v in BFValue::all() {
            let e = embed_bf(alpha, v);
            if embed_bf(alpha, bf_apply(MarkKind::Plain, v)) != apply_op(MarkKind::Plain, e) {
                failure = Some(format!("plain mark does not commute at {v}"));
            }
            if embed_bf(alpha, bf_apply(MarkKind::I, v)) != apply_op(alpha, e) {
                failure = Some(format!("i mark does not match the {alpha} mark at {v}"));
            }
        }
        let distinct = BFValue::all()
            .map(|v| embed_bf(alpha, v))
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        if distinct != 4 {
            failure = Some("embedding is not injective".into());
        }
        out.push(simple_result(format!("BF defining equations in {}", subspace(alpha)), 8, failure));
    }

    for (name, l, r) in BF_TRANSFER {
        let lhs = parse(l).expect("BF law");
        let rhs = parse(r).expect("BF law");
        let mut checked = 0;
        let mut failure = None;
        match check_bf_law(&lhs, &rhs) {
            Ok((true, n)) => checked += n,
            Ok((false, n)) => {
                checked += n;
                failure = Some("does not hold in BF".to_string());
            }
            Err(e) => failure = Some(e.to_string()),
        }
        if failure.is_none() {
            for alpha in MarkKind::IMAGINARY {
                let lq = parse(&l.replace("]i", &format!("]{}", alpha.suffix()))).unwrap();
                let rq = parse(&r.replace("]i", &format!("]{}", alpha.suffix()))).unwrap();
                match check_equiv(&lq, &rq) {
                    Ok(res) => {
                        checked += res.assignments_checked;
                        if !res.is_equivalent() {
                            failure = Some(format!("holds in BF but not in {}", subspace(alpha)));
                            break;
                        }
                    }
                    Err(e) => failure = Some(e.to_string()),
                }
            }
        }
        out.push(simple_result(format!("{name} in BF and I, J, K"), checked, failure));
    }
    out
}

fn subspace(alpha: MarkKind) -> &'static str {
    match alpha {
        MarkKind::I => "I",
        MarkKind::J => "J",
        MarkKind::K => "K",
        MarkKind::Plain => "LoF",
    }
}

fn q8_relations() -> Vec<LawResult> {
    let x = || Expr::var("X");
    let mut out = Vec::new();
    for g in Q8Op::ALL {
        for h in Q8Op::ALL {
            let lhs = operator_expr(h, operator_expr(g, x()));
            let rhs = operator_expr(q8_mul(g, h), x());
            let r = check_equiv(&lhs, &rhs).expect("closed over X");
            let failure = (!r.is_equivalent()).then(|| format!("{lhs} != {rhs}"));
            out.push(simple_result(
                format!("({g})({h}) = {}", q8_mul(g, h)),
                r.assignments_checked,
                failure,
            ));
        }
    }
    for (name, word, want) in [
        ("i^2 = -1", "[[X]i]i", "[X]"),
        ("j^2 = -1", "[[X]j]j", "[X]"),
        ("k^2 = -1", "[[X]k]k", "[X]"),
        ("ijk = -1", "[[[X]i]j]k", "[X]"),
    ] {
        let r = check_equiv(&parse(word).unwrap(), &parse(want).unwrap()).unwrap();
        out.push(simple_result(name, r.assignments_checked, (!r.is_equivalent()).then(|| word.to_string())));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionCell {
    /// Outer connective, the one that distributes.
    pub op1: ConnectiveKind,
    /// Inner connective, distributed over.
    pub op2: ConnectiveKind,
    pub trivial: bool,
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
    pub assignments: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub cells: Vec<DistributionCell>,
}

impl DistributionReport {
    pub fn cell(&self, op1: ConnectiveKind, op2: ConnectiveKind) -> &DistributionCell {
        self.cells.iter().find(|c| c.op1 == op1 && c.op2 == op2).expect("all 64 cells present")
    }

    pub fn off_diagonal_holding(&self) -> usize {
        self.cells.iter().filter(|c| !c.trivial && c.holds).count()
    }

    pub fn all_hold(&self) -> bool {
        self.cells.iter().all(|c| c.holds)
    }
}

impl fmt::Display for DistributionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(A op2 B) op1 C == (A op1 C) op2 (B op1 C); rows op1, columns op2")?;
        write!(f, "{:>6}", "")?;
        for op2 in ConnectiveKind::EIGHT {
            write!(f, " {:>6}", op2.name())?;
        }
        writeln!(f)?;
        for op1 in ConnectiveKind::EIGHT {
            write!(f, "{:>6}", op1.name())?;
            for op2 in ConnectiveKind::EIGHT {
                let c = self.cell(op1, op2);
                let mark = match (c.holds, c.trivial) {
                    (true, true) => "triv",
                    (true, false) => "holds",
                    (false, _) => "FAILS",
                };
                write!(f, " {mark:>6}")?;
            }
            writeln!(f)?;
        }
        write!(f, "{} of 56 non-trivial distribution laws hold", self.off_diagonal_holding())
    }
}

/// `(A op2 B) op1 C` against `(A op1 C) op2 (B op1 C)`.
pub fn distribution_law(op1: ConnectiveKind, op2: ConnectiveKind) -> (Expr, Expr) {
    let (a, b, c) = (Expr::var("A"), Expr::var("B"), Expr::var("C"));
    let lhs = connective(op1, connective(op2, a.clone(), b.clone()), c.clone());
    let rhs = connective(op2, connective(op1, a, c.clone()), connective(op1, b, c));
    (lhs, rhs)
}

pub fn distribution_matrix() -> DistributionReport {
    let mut cells = Vec::with_capacity(64);
    for op1 in ConnectiveKind::EIGHT {
        for op2 in ConnectiveKind::EIGHT {
            let (lhs, rhs) = distribution_law(op1, op2);
            let r = check_equiv(&lhs, &rhs).expect("three variables fit any budget");
            cells.push(DistributionCell {
                op1,
                op2,
                trivial: op1 == op2,
                holds: r.is_equivalent(),
                counterexample: r.counterexample,
                assignments: r.assignments_checked,
            });
        }
    }
    DistributionReport { cells }
}

/// The two worked distribution examples with non-commuting marks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemonstrationReport {
    /// `A or_i (B and_j C) == (A or_i B) and_j (A or_i C)`.
    pub first_holds: bool,
    /// `(A and_k B) and_j C == (A and_j C) and_k (B and_j C)`.
    pub second_template_holds: bool,
    /// `(A and_k B) and_j C == (A and_j B) and_k (B and_j C)`, as printed.
    pub second_printed_holds: bool,
    pub second_printed_counterexample: Option<Counterexample>,
    /// The one right-hand side of the second example that is valid, if exactly one is.
    pub valid_second_form: Option<String>,
}

pub fn demonstrations() -> DemonstrationReport {
    use ConnectiveKind::*;
    let (a, b, c) = (Expr::var("A"), Expr::var("B"), Expr::var("C"));
    let first_l = connective(OrI, a.clone(), connective(AndJ, b.clone(), c.clone()));
    let first_r = connective(AndJ, connective(OrI, a.clone(), b.clone()), connective(OrI, a.clone(), c.clone()));
    let second_l = connective(AndJ, connective(AndK, a.clone(), b.clone()), c.clone());
    let template = connective(AndK, connective(AndJ, a.clone(), c.clone()), connective(AndJ, b.clone(), c.clone()));
    let printed = connective(AndK, connective(AndJ, a, b.clone()), connective(AndJ, b, c));
    let first = check_equiv(&first_l, &first_r).expect("three variables");
    let t = check_equiv(&second_l, &template).expect("three variables");
    let p = check_equiv(&second_l, &printed).expect("three variables");
    let valid_second_form = match (t.is_equivalent(), p.is_equivalent()) {
        (true, false) => Some("(A and_j C) and_k (B and_j C)".to_string()),
        (false, true) => Some("(A and_j B) and_k (B and_j C)".to_string()),
        _ => None,
    };
    DemonstrationReport {
        first_holds: first.is_equivalent(),
        second_template_holds: t.is_equivalent(),
        second_printed_holds: p.is_equivalent(),
        second_printed_counterexample: p.counterexample,
        valid_second_form,
    }
}

/// Outcome of one `LHS == RHS` line of a `.qlf` file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssertionReport {
    pub line: usize,
    pub law: String,
    pub verdict: Option<Verdict>,
    pub counterexample: Option<Counterexample>,
    pub assignments: u64,
    pub error: Option<String>,
}

pub fn check_assertion(line: usize, lhs: &Expr, rhs: &Expr, opts: &EquivOptions) -> AssertionReport {
    let law = format!("{lhs} == {rhs}");
    match check_equiv_with(lhs, rhs, opts) {
        Ok(r) => AssertionReport {
            line,
            law,
            verdict: Some(r.verdict),
            counterexample: r.counterexample,
            assignments: r.assignments_checked,
            error: None,
        },
        Err(e) => AssertionReport {
            line,
            law,
            verdict: None,
            counterexample: None,
            assignments: 0,
            error: Some(e.to_string()),
        },
    }
}
