//! Positions, matching modulo associativity and commutativity of
//! juxtaposition, and single-step rule application.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::textio::{print, Expr};

use super::rules::{Rule, RuleParams};
use super::RewriteError;

pub type Bindings = BTreeMap<String, Expr>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Left side to right side.
    Ltr,
    Rtl,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::Ltr => "ltr",
            Direction::Rtl => "rtl",
        })
    }
}

/// Path of child indices from the root. Juxtaposition children are indexed
/// in the order of their printed forms (stable for equal forms).
pub type Position = Vec<usize>;

pub fn format_position(pos: &[usize]) -> String {
    if pos.is_empty() {
        "root".to_string()
    } else {
        pos.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Storage indices of the children of `e`, in addressing order.
fn child_order(e: &Expr) -> Vec<usize> {
    match e {
        Expr::Juxt(children) => {
            let mut order: Vec<usize> = (0..children.len()).collect();
            let keys: Vec<String> = children.iter().map(print).collect();
            order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
            order
        }
        other => (0..other.children().len()).collect(),
    }
}

pub fn subterm<'a>(e: &'a Expr, pos: &[usize]) -> Result<&'a Expr, RewriteError> {
    let mut here = e;
    for (depth, &i) in pos.iter().enumerate() {
        let order = child_order(here);
        let Some(&storage) = order.get(i) else {
            return Err(RewriteError::BadPosition {
                position: format_position(pos),
                message: format!(
                    "{} has {} children, index {i} at depth {depth}",
                    describe(here),
                    order.len()
                ),
            });
        };
        here = here.children()[storage];
    }
    Ok(here)
}

fn describe(e: &Expr) -> String {
    let s = print(e);
    if s.is_empty() {
        "the void".to_string()
    } else {
        format!("`{s}`")
    }
}

fn replace_at(e: &Expr, pos: &[usize], new: Expr) -> Expr {
    let Some((&first, rest)) = pos.split_first() else {
        return new;
    };
    let storage = child_order(e)[first];
    match e {
        Expr::Mark(k, b) => Expr::mark(*k, replace_at(b, rest, new)),
        Expr::Power(k, b, n) => Expr::power(*k, replace_at(b, rest, new), *n),
        Expr::Juxt(children) => {
            let mut children = children.clone();
            children[storage] = replace_at(&children[storage], rest, new);
            Expr::juxt(children)
        }
        Expr::Tuple(slots) => {
            let mut slots = slots.clone();
            slots[storage] = replace_at(&slots[storage], rest, new);
            Expr::Tuple(slots)
        }
        Expr::ExpApply(b, x) => {
            if storage == 0 {
                Expr::exp_apply(replace_at(b, rest, new), (**x).clone())
            } else {
                Expr::exp_apply((**b).clone(), replace_at(x, rest, new))
            }
        }
        Expr::Void | Expr::Var(_) => unreachable!("subterm checked the position"),
    }
}

/// Every position in pre-order, children in addressing order.
pub fn all_positions(e: &Expr) -> Vec<Position> {
    fn walk(e: &Expr, here: &mut Position, out: &mut Vec<Position>) {
        out.push(here.clone());
        let children = e.children();
        for (i, &storage) in child_order(e).iter().enumerate() {
            here.push(i);
            walk(children[storage], here, out);
            here.pop();
        }
    }
    let mut out = Vec::new();
    walk(e, &mut Vec::new(), &mut out);
    out
}

fn sorted_items(e: &Expr) -> Vec<Expr> {
    let mut items = e.juxt_items();
    items.sort_by_cached_key(print);
    items
}

/// All ways `p` matches `t` extending `b`.
pub fn match_expr(p: &Expr, t: &Expr, b: &Bindings) -> Vec<Bindings> {
    match (p, t) {
        (Expr::Var(n), _) => match b.get(n) {
            Some(v) if v.ac_eq(t) => vec![b.clone()],
            Some(_) => Vec::new(),
            None => {
                let mut b = b.clone();
                b.insert(n.clone(), t.normalized());
                vec![b]
            }
        },
        (Expr::Juxt(ps), _) => match_items(ps, sorted_items(t), b, false).into_iter().map(|(b, _)| b).collect(),
        (Expr::Void, Expr::Void) => vec![b.clone()],
        (Expr::Mark(k, pb), Expr::Mark(k2, tb)) if k == k2 => match_expr(pb, tb, b),
        (Expr::Power(k, pb, n), Expr::Power(k2, tb, n2)) if k == k2 && n == n2 => match_expr(pb, tb, b),
        (Expr::Tuple(ps), Expr::Tuple(ts)) => {
            let mut acc = vec![b.clone()];
            for (ps, ts) in ps.iter().zip(ts.iter()) {
                acc = acc.iter().flat_map(|b| match_expr(ps, ts, b)).collect();
            }
            acc
        }
        (Expr::ExpApply(pb, pe), Expr::ExpApply(tb, te)) => {
            match_expr(pb, tb, b).iter().flat_map(|b| match_expr(pe, te, b)).collect()
        }
        _ => Vec::new(),
    }
}

/// Match juxtaposed patterns against a multiset of items. Structured
/// patterns go first, then variables already bound; an unbound variable
/// takes one item, except that the last one absorbs whatever is left when
/// no rest is allowed.
fn match_items(ps: &[Expr], items: Vec<Expr>, b: &Bindings, allow_rest: bool) -> Vec<(Bindings, Vec<Expr>)> {
    if ps.is_empty() {
        return if allow_rest || items.is_empty() { vec![(b.clone(), items)] } else { Vec::new() };
    }
    let pick = ps
        .iter()
        .position(|p| !matches!(p, Expr::Var(_)))
        .or_else(|| ps.iter().position(|p| matches!(p, Expr::Var(n) if b.contains_key(n))))
        .unwrap_or(0);
    let p = &ps[pick];
    let others: Vec<Expr> = ps.iter().enumerate().filter(|&(i, _)| i != pick).map(|(_, p)| p.clone()).collect();
    let mut out = Vec::new();
    match p {
        Expr::Var(n) if b.contains_key(n) => {
            let mut left = items;
            for want in b[n].juxt_items() {
                match left.iter().position(|x| x.ac_eq(&want)) {
                    Some(i) => {
                        left.remove(i);
                    }
                    None => return Vec::new(),
                }
            }
            out.extend(match_items(&others, left, b, allow_rest));
        }
        Expr::Var(n) => {
            if others.is_empty() && !allow_rest {
                let mut b = b.clone();
                b.insert(n.clone(), Expr::juxt(items));
                out.extend(match_items(&others, Vec::new(), &b, allow_rest));
            } else if items.is_empty() {
                let mut b = b.clone();
                b.insert(n.clone(), Expr::Void);
                out.extend(match_items(&others, Vec::new(), &b, allow_rest));
            } else {
                for i in distinct_indices(&items) {
                    let mut left = items.clone();
                    let taken = left.remove(i);
                    let mut b = b.clone();
                    b.insert(n.clone(), taken);
                    out.extend(match_items(&others, left, &b, allow_rest));
                }
            }
        }
        _ => {
            for i in distinct_indices(&items) {
                for b2 in match_expr(p, &items[i], b) {
                    let mut left = items.clone();
                    left.remove(i);
                    out.extend(match_items(&others, left, &b2, allow_rest));
                }
            }
        }
    }
    out
}

fn distinct_indices(items: &[Expr]) -> Vec<usize> {
    (0..items.len()).filter(|&i| !items[..i].contains(&items[i])).collect()
}

/// Match a rule side at the root of a subterm. A juxtaposed or void pattern
/// may leave items of a juxtaposed subterm unmatched; they are returned.
pub fn match_at_root(p: &Expr, t: &Expr, b: &Bindings) -> Option<(Bindings, Vec<Expr>)> {
    match p {
        Expr::Void => Some((b.clone(), t.juxt_items())),
        Expr::Juxt(ps) => match_items(ps, sorted_items(t), b, true).into_iter().next(),
        _ => match_expr(p, t, b).into_iter().next().map(|b| (b, Vec::new())),
    }
}

/// Tuple slots may only hold plain-mark expressions.
pub fn check_well_formed(e: &Expr) -> Result<(), String> {
    if let Expr::Tuple(slots) = e {
        if let Some(bad) = slots.iter().find(|s| !s.is_pure_lof()) {
            return Err(format!("tuple slot `{bad}` is not a plain-mark expression"));
        }
    }
    e.children().into_iter().try_for_each(check_well_formed)
}

/// Rewrite the subterm at `pos` with one side of `rule`.
pub fn apply_rule(
    e: &Expr,
    rule: &Rule,
    params: &RuleParams,
    dir: Direction,
    pos: &[usize],
    subst: &Bindings,
) -> Result<Expr, RewriteError> {
    let inst = rule.instantiate(params)?;
    let (pattern, other) = match dir {
        Direction::Ltr => (&inst.lhs, &inst.rhs),
        Direction::Rtl => (&inst.rhs, &inst.lhs),
    };
    let mut rule_vars = pattern.variables();
    rule_vars.extend(other.variables());
    if let Some(stray) = subst.keys().find(|k| !rule_vars.contains(k)) {
        return Err(RewriteError::UnknownVariable { rule: rule.id.to_string(), var: stray.clone() });
    }
    let target = subterm(e, pos)?;
    let subst: Bindings = subst.iter().map(|(k, v)| (k.clone(), v.normalized())).collect();
    let Some((bindings, rest)) = match_at_root(pattern, target, &subst) else {
        let expected = pattern.substitute(&|n| subst.get(n).cloned());
        return Err(RewriteError::NoMatch {
            rule: rule.id.to_string(),
            position: format_position(pos),
            expected: print(&expected),
            found: print(target),
        });
    };
    if let Some(var) = other.variables().into_iter().find(|v| !bindings.contains_key(v)) {
        return Err(RewriteError::Unbound { rule: rule.id.to_string(), var });
    }
    let replacement = Expr::juxt(std::iter::once(other.substitute(&|n| bindings.get(n).cloned())).chain(rest));
    let out = replace_at(e, pos, replacement).normalized();
    check_well_formed(&out).map_err(|message| RewriteError::IllFormed { rule: rule.id.to_string(), message })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::MarkKind;
    use crate::rewrite::rules::find_rule;
    use crate::textio::parse;

    fn apply(text: &str, rule: &str, params: RuleParams, dir: Direction, pos: &[usize]) -> Result<String, RewriteError> {
        let r = find_rule(rule).unwrap();
        apply_rule(&parse(text).unwrap(), r, &params, dir, pos, &Bindings::new()).map(|e| print(&e))
    }

    #[test]
    fn examples() {
        let none = RuleParams::default();
        assert_eq!(apply("[[x]]", "A3", none, Direction::Ltr, &[]).unwrap(), "x");
        assert_eq!(apply("[[A]i]i", "Q1", RuleParams::alpha(MarkKind::I), Direction::Ltr, &[]).unwrap(), "[A]");
        assert_eq!(
            apply("[[A]i]j", "Q5", RuleParams::alpha_beta(MarkKind::I, MarkKind::J), Direction::Ltr, &[]).unwrap(),
            "[[[A]j]i]"
        );
    }

    #[test]
    fn juxtaposition_is_matched_up_to_order() {
        let none = RuleParams::default();
        // Occultation `[[A] B] A = A` with the items shuffled.
        assert_eq!(apply("x [y [x]]", "A6", none, Direction::Ltr, &[]).unwrap(), "x");
        // Leftover items at the root of the position are kept.
        assert_eq!(apply("z [] q", "A5", none, Direction::Ltr, &[]).unwrap(), "[] z");
        assert_eq!(apply("b a b", "A7", none, Direction::Ltr, &[]).unwrap(), "b a");
    }

    #[test]
    fn positions_follow_sorted_children() {
        let e = parse("[y] [x]").unwrap();
        assert_eq!(print(subterm(&e, &[0]).unwrap()), "[x]");
        assert_eq!(print(subterm(&e, &[1, 0]).unwrap()), "y");
        assert!(matches!(subterm(&e, &[2]), Err(RewriteError::BadPosition { .. })));
        assert_eq!(all_positions(&e).len(), 5);
        let r = apply("[[[y]]] [x]", "A3", RuleParams::default(), Direction::Ltr, &[0, 0]).unwrap();
        assert_eq!(r, "[y] [x]");
    }

    #[test]
    fn no_match_reports_both_sides() {
        match apply("[x]", "A3", RuleParams::default(), Direction::Ltr, &[]) {
            Err(RewriteError::NoMatch { expected, found, .. }) => {
                assert_eq!(expected, "[[A]]");
                assert_eq!(found, "[x]");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn substitution_supplies_new_variables() {
        let r = find_rule("A1").unwrap();
        let e = parse("x").unwrap();
        let err = apply_rule(&e, r, &RuleParams::default(), Direction::Rtl, &[], &Bindings::new()).unwrap_err();
        assert!(matches!(err, RewriteError::Unbound { .. }));
        let subst = Bindings::from([("A".to_string(), parse("y").unwrap())]);
        let out = apply_rule(&e, r, &RuleParams::default(), Direction::Rtl, &[], &subst).unwrap();
        assert_eq!(print(&out), "[[y] y] x");
        let stray = Bindings::from([("Z".to_string(), parse("y").unwrap())]);
        assert!(matches!(
            apply_rule(&e, r, &RuleParams::default(), Direction::Rtl, &[], &stray),
            Err(RewriteError::UnknownVariable { .. })
        ));
    }

    #[test]
    fn tuple_rules() {
        let none = RuleParams::default();
        assert_eq!(apply("[{a, b, c, d}]i", "D1-i", none, Direction::Ltr, &[]).unwrap(), "{[b], a, d, [c]}");
        assert_eq!(
            apply("{x, , [], y} {a, b, c, d}", "D2", none, Direction::Ltr, &[]).unwrap(),
            "{a x, b, c [], d y}"
        );
        // Inside a slot, plain-mark laws apply; imaginary ones would be ill-formed.
        assert_eq!(apply("{[[a]], b, c, d}", "A3", none, Direction::Ltr, &[0]).unwrap(), "{a, b, c, d}");
        let err = apply("{a, b, c, d}", "Q1", RuleParams::alpha(MarkKind::I), Direction::Rtl, &[1]).unwrap_err();
        assert!(matches!(err, RewriteError::NoMatch { .. }));
        let err = apply("{[a], b, c, d}", "Q1", RuleParams::alpha(MarkKind::I), Direction::Rtl, &[0]).unwrap_err();
        assert!(matches!(err, RewriteError::IllFormed { .. }), "{err:?}");
    }

    #[test]
    fn void_patterns_insert() {
        let none = RuleParams::default();
        assert_eq!(apply("x", "U", none, Direction::Ltr, &[]).unwrap(), "{, , , } x");
        assert_eq!(apply("[[]]", "A3", none, Direction::Ltr, &[]).unwrap(), "");
    }
}
