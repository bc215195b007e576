//! Test support: a slot-wise Boolean truth-table oracle written against the
//! definitions directly, and a random expression generator.
//!
//! The oracle shares only the syntax tree with the library. Values are
//! `[bool; 4]` with `true` for a marked slot, the operators are spelled out
//! slot by slot, and enumeration is its own.

#![allow(dead_code)]

use std::collections::BTreeSet;

use qcalc::{Expr, MarkKind};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Slots = [bool; 4];

fn not(v: Slots) -> Slots {
    v.map(|x| !x)
}

fn unit(kind: MarkKind, v: Slots) -> Slots {
    let [a, b, c, d] = v;
    match kind {
        MarkKind::Plain => not(v),
        MarkKind::I => [!b, a, d, !c],
        MarkKind::J => [!c, !d, a, b],
        MarkKind::K => [!d, c, !b, a],
    }
}

/// The eight operators as functions, each `(kind, negated)`.
const OPERATORS: [(Option<MarkKind>, bool); 8] = [
    (None, false),
    (None, true),
    (Some(MarkKind::I), false),
    (Some(MarkKind::I), true),
    (Some(MarkKind::J), false),
    (Some(MarkKind::J), true),
    (Some(MarkKind::K), false),
    (Some(MarkKind::K), true),
];

fn operate(op: (Option<MarkKind>, bool), v: Slots) -> Slots {
    let base = match op.0 {
        Some(k) => unit(k, v),
        None => v,
    };
    if op.1 {
        not(base)
    } else {
        base
    }
}

#[derive(Clone, Debug, Default)]
pub struct Assignment {
    pub q: Vec<(String, Slots)>,
    pub slot: Vec<(String, bool)>,
}

impl Assignment {
    fn q(&self, name: &str) -> Slots {
        self.q.iter().find(|(n, _)| n == name).map(|(_, v)| *v).expect("bound")
    }

    fn slot(&self, name: &str) -> bool {
        self.slot.iter().find(|(n, _)| n == name).map(|(_, v)| *v).expect("bound")
    }
}

fn lof(e: &Expr, env: &Assignment) -> bool {
    match e {
        Expr::Void => false,
        Expr::Var(n) => env.slot(n),
        Expr::Mark(MarkKind::Plain, b) => !lof(b, env),
        Expr::Juxt(items) => items.iter().any(|x| lof(x, env)),
        other => panic!("not a slot expression: {other:?}"),
    }
}

/// `None` when an exponent is not one of the eight operator values.
pub fn value(e: &Expr, env: &Assignment) -> Option<Slots> {
    Some(match e {
        Expr::Void => [false; 4],
        Expr::Var(n) => env.q(n),
        Expr::Mark(k, b) => unit(*k, value(b, env)?),
        Expr::Power(k, b, n) => {
            let mut v = value(b, env)?;
            for _ in 0..*n {
                v = unit(*k, v);
            }
            v
        }
        Expr::Juxt(items) => {
            let mut acc = [false; 4];
            for x in items {
                let v = value(x, env)?;
                for s in 0..4 {
                    acc[s] |= v[s];
                }
            }
            acc
        }
        Expr::Tuple(slots) => [0, 1, 2, 3].map(|s| lof(&slots[s], env)),
        Expr::ExpApply(base, exponent) => {
            let ev = value(exponent, env)?;
            let op = OPERATORS.into_iter().find(|&op| operate(op, [false; 4]) == ev)?;
            operate(op, value(base, env)?)
        }
    })
}

fn collect(e: &Expr, in_slot: bool, q: &mut BTreeSet<String>, slot: &mut BTreeSet<String>) {
    match e {
        Expr::Void => {}
        Expr::Var(n) => {
            if in_slot {
                slot.insert(n.clone());
            } else {
                q.insert(n.clone());
            }
        }
        Expr::Mark(_, b) | Expr::Power(_, b, _) => collect(b, in_slot, q, slot),
        Expr::Juxt(items) => items.iter().for_each(|x| collect(x, in_slot, q, slot)),
        Expr::Tuple(slots) => slots.iter().for_each(|x| collect(x, true, q, slot)),
        Expr::ExpApply(b, x) => {
            collect(b, in_slot, q, slot);
            collect(x, in_slot, q, slot);
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Equivalent,
    /// The first distinguishing assignment found, as `name=value` pairs.
    Differs(Vec<(String, String)>),
    /// Some assignment gives an exponent that is not an operator value.
    Undefined,
}

fn pattern(v: Slots) -> String {
    v.iter().map(|&m| if m { 'M' } else { 'U' }).collect()
}

/// Compare two expressions slot by slot on every assignment.
pub fn oracle_equiv(a: &Expr, b: &Expr) -> OracleVerdict {
    let (mut q, mut slot) = (BTreeSet::new(), BTreeSet::new());
    collect(a, false, &mut q, &mut slot);
    collect(b, false, &mut q, &mut slot);
    let q: Vec<String> = q.into_iter().collect();
    let slot: Vec<String> = slot.into_iter().collect();
    let bits = 4 * q.len() + slot.len();
    assert!(bits <= 24, "too many variables for the oracle");
    for n in 0u32..1 << bits {
        let mut env = Assignment::default();
        let mut k = 0;
        for name in &q {
            let v = [0, 1, 2, 3].map(|s| n >> (k + s) & 1 == 1);
            env.q.push((name.clone(), v));
            k += 4;
        }
        for name in &slot {
            env.slot.push((name.clone(), n >> k & 1 == 1));
            k += 1;
        }
        let (Some(x), Some(y)) = (value(a, &env), value(b, &env)) else {
            return OracleVerdict::Undefined;
        };
        if x != y {
            let mut shown: Vec<(String, String)> = env.q.iter().map(|(n, v)| (n.clone(), pattern(*v))).collect();
            shown.extend(env.slot.iter().map(|(n, v)| (n.clone(), if *v { "M" } else { "U" }.to_string())));
            return OracleVerdict::Differs(shown);
        }
    }
    OracleVerdict::Equivalent
}

/// Evaluate with every variable Q-sorted set to the given patterns.
pub fn oracle_value(e: &Expr, q: &[(&str, &str)], slot: &[(&str, bool)]) -> Option<String> {
    let parse = |p: &str| -> Slots {
        let c: Vec<bool> = p.chars().map(|c| c == 'M').collect();
        [c[0], c[1], c[2], c[3]]
    };
    let env = Assignment {
        q: q.iter().map(|(n, p)| (n.to_string(), parse(p))).collect(),
        slot: slot.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
    };
    value(e, &env).map(pattern)
}

const KINDS: [MarkKind; 4] = [MarkKind::Plain, MarkKind::I, MarkKind::J, MarkKind::K];

fn random_slot(rng: &mut impl Rng, vars: &[&str], depth: u32) -> Expr {
    match rng.gen_range(0..if depth == 0 { 2 } else { 5 }) {
        0 => Expr::Void,
        1 => Expr::var(*vars.choose(rng).unwrap()),
        2 | 3 => Expr::cross(random_slot(rng, vars, depth - 1)),
        _ => Expr::juxt([random_slot(rng, vars, depth - 1), random_slot(rng, vars, depth - 1)]),
    }
}

/// A random expression over the Q variables `q` and slot variables `slot`.
pub fn random_expr(rng: &mut impl Rng, q: &[&str], slot: &[&str], depth: u32) -> Expr {
    let leaf_kinds = if slot.is_empty() { 2 } else { 3 };
    let pick = if depth == 0 { rng.gen_range(0..leaf_kinds) } else { rng.gen_range(0..9) };
    match pick {
        0 => Expr::Void,
        1 if !q.is_empty() => Expr::var(*q.choose(rng).unwrap()),
        1 => Expr::Void,
        2 if !slot.is_empty() => Expr::tuple(std::array::from_fn(|_| random_slot(rng, slot, 2))),
        2 | 3 | 4 => Expr::mark(*KINDS.choose(rng).unwrap(), random_expr(rng, q, slot, depth - 1)),
        5 | 6 => Expr::juxt([random_expr(rng, q, slot, depth - 1), random_expr(rng, q, slot, depth - 1)]),
        7 => Expr::power(*KINDS[1..].choose(rng).unwrap(), random_expr(rng, q, slot, depth - 1), rng.gen_range(1..4)),
        _ => {
            let exponent = Expr::mark(*KINDS.choose(rng).unwrap(), Expr::Void);
            Expr::exp_apply(random_expr(rng, q, slot, depth - 1), exponent)
        }
    }
}

/// Rewrites that preserve value: double marks, fourth powers, idempotent
/// juxtaposition, identity exponents. Applied at random positions.
pub fn sound_variant(rng: &mut impl Rng, e: &Expr) -> Expr {
    let wrap = |rng: &mut dyn rand::RngCore, e: Expr| -> Expr {
        match rng.gen_range(0..5) {
            0 => Expr::cross(Expr::cross(e)),
            1 => {
                let k = KINDS[rng.gen_range(1..4)];
                Expr::power(k, e, 4)
            }
            2 => Expr::juxt([e.clone(), e]),
            3 => Expr::exp_apply(e, Expr::cross(Expr::cross(Expr::Void))),
            _ => {
                let k = KINDS[rng.gen_range(1..4)];
                Expr::power(k, Expr::mark(k, e), 3)
            }
        }
    };
    let rebuilt = match e {
        Expr::Mark(k, b) => Expr::mark(*k, sound_variant(rng, b)),
        Expr::Power(k, b, n) => Expr::power(*k, sound_variant(rng, b), *n),
        Expr::Juxt(items) => {
            let mut items: Vec<Expr> = items.iter().map(|x| sound_variant(rng, x)).collect();
            items.shuffle(rng);
            Expr::juxt(items)
        }
        Expr::ExpApply(b, x) => Expr::exp_apply(sound_variant(rng, b), (**x).clone()),
        other => other.clone(),
    };
    if rng.gen_bool(0.3) {
        wrap(rng, rebuilt)
    } else {
        rebuilt
    }
}

/// A near miss: one imaginary subscript swapped for another somewhere.
pub fn perturbed(rng: &mut impl Rng, e: &Expr) -> Expr {
    fn swap(k: MarkKind) -> MarkKind {
        match k {
            MarkKind::I => MarkKind::J,
            MarkKind::J => MarkKind::K,
            MarkKind::K => MarkKind::I,
            MarkKind::Plain => MarkKind::Plain,
        }
    }
    match e {
        Expr::Mark(k, b) if rng.gen_bool(0.5) => Expr::mark(swap(*k), (**b).clone()),
        Expr::Mark(k, b) => Expr::mark(*k, perturbed(rng, b)),
        Expr::Power(k, b, n) => Expr::power(swap(*k), (**b).clone(), *n),
        Expr::Juxt(items) => {
            let mut items = items.clone();
            let at = rng.gen_range(0..items.len());
            items[at] = perturbed(rng, &items[at]);
            Expr::juxt(items)
        }
        other => Expr::mark(MarkKind::I, other.clone()),
    }
}
