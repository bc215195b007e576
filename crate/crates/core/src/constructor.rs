//! Expressions in one free variable `X` that mark a single slot or move the
//! slots of `X` around.
//!
//! Both are built from one gadget. For a target slot `t`, the factor
//! `[ g(X) P_t ]` is void everywhere except slot `t`, where it carries the
//! mark of `g(X)` at `t`: the interference pattern `P_t` marks the other
//! three slots and the outer mark clears them. Juxtaposing one factor per
//! slot assembles the result.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{op_value, q8_to_signed_perm, LoF, MarkKind, Q8Op, QValue, SignedPerm};
use crate::semantics::operator_expr;
use crate::textio::Expr;

pub const FREE_VAR: &str = "X";
const SLOT_NAMES: [&str; 4] = ["a", "b", "c", "d"];

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("unknown interference pattern {0:?}; expected IJ, IK, JK or I3J3")]
    UnknownPattern(String),
    #[error("slot must be 1 to 4, got {0}")]
    Slot(usize),
    #[error("bad permutation {text:?}: {message}")]
    Permutation { text: String, message: String },
}

/// Juxtaposed pairs of empty imaginary marks that leave exactly one slot
/// unmarked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InterferencePattern {
    /// Open at slot a.
    I3J3,
    /// Open at slot b.
    IK,
    /// Open at slot c.
    IJ,
    /// Open at slot d.
    JK,
}

impl InterferencePattern {
    pub const ALL: [InterferencePattern; 4] =
        [InterferencePattern::I3J3, InterferencePattern::IK, InterferencePattern::IJ, InterferencePattern::JK];

    pub fn name(self) -> &'static str {
        match self {
            InterferencePattern::I3J3 => "I3J3",
            InterferencePattern::IK => "IK",
            InterferencePattern::IJ => "IJ",
            InterferencePattern::JK => "JK",
        }
    }

    fn factors(self) -> [Q8Op; 2] {
        match self {
            InterferencePattern::I3J3 => [Q8Op::MI, Q8Op::MJ],
            InterferencePattern::IK => [Q8Op::I, Q8Op::K],
            InterferencePattern::IJ => [Q8Op::I, Q8Op::J],
            InterferencePattern::JK => [Q8Op::J, Q8Op::K],
        }
    }

    pub fn value(self) -> QValue {
        let [g, h] = self.factors();
        op_value(g).juxtapose(op_value(h))
    }

    /// `[]i []j` and so on; the negated units appear as cubes.
    pub fn expr(self) -> Expr {
        Expr::juxt(self.factors().map(|g| operator_expr(g, Expr::Void)))
    }

    /// The zero-based slot left unmarked.
    pub fn open_slot(self) -> usize {
        self.value().slots().iter().position(|s| !s.is_marked()).expect("one slot is open")
    }

    pub fn opening(slot: usize) -> InterferencePattern {
        InterferencePattern::ALL[slot]
    }
}

impl fmt::Display for InterferencePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InterferencePattern {
    type Err = ConstructError;

    fn from_str(s: &str) -> Result<InterferencePattern, ConstructError> {
        InterferencePattern::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ConstructError::UnknownPattern(s.to_string()))
    }
}

pub fn interference(name: &str) -> Result<QValue, ConstructError> {
    Ok(name.parse::<InterferencePattern>()?.value())
}

/// `SELECTOR[t][s][m]`: the operator whose action puts source slot `s` into
/// target slot `t`, marked iff `m == 0`. The gadget's outer mark flips this,
/// so `m` is the flag on the final output. Derived by search over the eight
/// operators; see the test that re-derives it.
const SELECTOR: [[[Q8Op; 2]; 4]; 4] = [
    [[Q8Op::M1, Q8Op::P1], [Q8Op::I, Q8Op::MI], [Q8Op::J, Q8Op::MJ], [Q8Op::K, Q8Op::MK]],
    [[Q8Op::MI, Q8Op::I], [Q8Op::M1, Q8Op::P1], [Q8Op::MK, Q8Op::K], [Q8Op::J, Q8Op::MJ]],
    [[Q8Op::MJ, Q8Op::J], [Q8Op::K, Q8Op::MK], [Q8Op::M1, Q8Op::P1], [Q8Op::MI, Q8Op::I]],
    [[Q8Op::MK, Q8Op::K], [Q8Op::MJ, Q8Op::J], [Q8Op::I, Q8Op::MI], [Q8Op::M1, Q8Op::P1]],
];

/// The factor placing `source` (possibly marked) into `target`, void elsewhere.
pub fn selector(target: usize, source: usize, marked: bool, x: Expr) -> Expr {
    let g = SELECTOR[target][source][usize::from(marked)];
    Expr::cross(Expr::juxt([operator_expr(g, x), InterferencePattern::opening(target).expr()]))
}

/// `[X P] [[X] [P]]` with `P` open at the slot: the first factor carries the
/// marked slot, the second the other three unchanged.
pub fn mark_slot(slot: usize) -> Result<Expr, ConstructError> {
    if !(1..=4).contains(&slot) {
        return Err(ConstructError::Slot(slot));
    }
    let p = InterferencePattern::opening(slot - 1).expr();
    let x = Expr::var(FREE_VAR);
    Ok(Expr::juxt([
        Expr::cross(Expr::juxt([x.clone(), p.clone()])),
        Expr::cross(Expr::juxt([Expr::cross(x), Expr::cross(p)])),
    ]))
}

/// One selector per target slot, in slot order.
pub fn permute_expr(p: &SignedPerm) -> Expr {
    assert_eq!(p.arity(), 4, "slot permutations act on 4-tuples");
    let x = Expr::var(FREE_VAR);
    Expr::juxt((0..4).map(|t| selector(t, p.target()[t], p.marked()[t], x.clone())))
}

/// Parse a target layout such as `(a, d, b, c)`, `adbc`, `a d [b] c`,
/// `1 4 ~2 3`: entry `t` names the source slot that lands in slot `t`, with
/// a mark when bracketed or prefixed by `~`.
pub fn parse_slot_permutation(text: &str) -> Result<SignedPerm, ConstructError> {
    let err = |message: &str| ConstructError::Permutation { text: text.to_string(), message: message.to_string() };
    let mut target = Vec::new();
    let mut marked = Vec::new();
    let mut pending_mark = false;
    let mut open = false;
    for ch in text.chars() {
        match ch {
            '~' => pending_mark = true,
            '[' if !open => open = true,
            ']' if open => open = false,
            'a'..='d' | 'A'..='D' | '1'..='4' => {
                let slot = match ch {
                    '1'..='4' => ch as usize - '1' as usize,
                    _ => ch.to_ascii_lowercase() as usize - 'a' as usize,
                };
                target.push(slot);
                marked.push(pending_mark || open);
                pending_mark = false;
            }
            c if c.is_whitespace() || matches!(c, ',' | '(' | ')' | '{' | '}') => {}
            _ => return Err(err(&format!("unexpected character {ch:?}"))),
        }
    }
    if open || pending_mark {
        return Err(err("unfinished mark"));
    }
    if target.len() != 4 {
        return Err(err(&format!("expected 4 slots, found {}", target.len())));
    }
    SignedPerm::new(target, marked).map_err(|_| err("each slot must appear exactly once"))
}

/// `{a, b, c, d}` over LoF slot variables.
pub fn generic_tuple() -> Expr {
    Expr::tuple(SLOT_NAMES.map(Expr::var))
}

/// The tuple literal a permutation should produce from `{a, b, c, d}`.
pub fn tuple_spec(p: &SignedPerm) -> Expr {
    Expr::tuple(std::array::from_fn(|t| {
        let v = Expr::var(SLOT_NAMES[p.target()[t]]);
        if p.marked()[t] {
            Expr::cross(v)
        } else {
            v
        }
    }))
}

/// The context with `X` replaced by `{a, b, c, d}`.
pub fn on_generic_tuple(e: &Expr) -> Expr {
    e.substitute(&|name| (name == FREE_VAR).then(generic_tuple))
}

/// The signed permutation marking only `slot` (1-based).
pub fn mark_slot_perm(slot: usize) -> SignedPerm {
    let mut marked = [false; 4];
    marked[slot - 1] = true;
    SignedPerm::new((0..4).collect(), marked.to_vec()).expect("identity")
}

/// All 24 unsigned permutations of four slots, lexicographic.
pub fn s4() -> Vec<SignedPerm> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    if let Ok(p) = SignedPerm::new(vec![a, b, c, d], vec![false; 4]) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Whether the operator puts source `s` into target `t` with the given mark.
fn selects(g: Q8Op, t: usize, s: usize, mark: bool) -> bool {
    let p = q8_to_signed_perm(g);
    p.target()[t] == s && p.marked()[t] == mark
}

/// Evaluate a Q value slot through a gadget directly, for tests that avoid
/// the expression evaluator.
pub fn apply_perm_to_value(p: &SignedPerm, v: QValue) -> QValue {
    let out: Vec<LoF> = p.apply_lof(&v.slots());
    QValue::from_slots([out[0], out[1], out[2], out[3]])
}

#[doc(hidden)]
pub fn derive_selector_table() -> [[[Q8Op; 2]; 4]; 4] {
    std::array::from_fn(|t| {
        std::array::from_fn(|s| {
            std::array::from_fn(|flag| {
                // The outer mark of the gadget inverts the selected slot.
                let want = flag == 0;
                let found: Vec<Q8Op> = Q8Op::ALL.into_iter().filter(|&g| selects(g, t, s, want)).collect();
                assert_eq!(found.len(), 1, "exactly one operator per (target, source, mark)");
                found[0]
            })
        })
    })
}

#[doc(hidden)]
pub fn derive_patterns() -> [Vec<(MarkKind, bool, MarkKind, bool)>; 4] {
    let empties: Vec<(MarkKind, bool)> =
        MarkKind::IMAGINARY.iter().flat_map(|&k| [(k, false), (k, true)]).collect();
    let value = |(k, neg): (MarkKind, bool)| op_value(if neg { k.op().neg() } else { k.op() });
    std::array::from_fn(|slot| {
        let mut hits = Vec::new();
        for (n, &e) in empties.iter().enumerate() {
            for &f in &empties[n + 1..] {
                let v = value(e).juxtapose(value(f));
                let open: Vec<usize> = (0..4).filter(|&s| !v.slot(s).is_marked()).collect();
                if open == [slot] {
                    hits.push((e.0, e.1, f.0, f.1));
                }
            }
        }
        hits
    })
}
