//! The eight operators as maps on the sixteen values, and the check that
//! they form the quaternion group.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kernel::{q8_mul, Q8Op, QValue};
use crate::semantics::apply_q8;

pub type OperatorMap = [QValue; 16];

pub fn operator_map(g: Q8Op) -> OperatorMap {
    std::array::from_fn(|i| apply_q8(g, QValue::from_index(i as u8)))
}

fn compose(first: &OperatorMap, then: &OperatorMap) -> OperatorMap {
    std::array::from_fn(|i| then[first[i].index() as usize])
}

fn identity_map() -> OperatorMap {
    std::array::from_fn(|i| QValue::from_index(i as u8))
}

fn order(m: &OperatorMap) -> usize {
    let id = identity_map();
    let mut acc = *m;
    let mut n = 1;
    while acc != id {
        acc = compose(&acc, m);
        n += 1;
    }
    n
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    /// `table[g][h]` names the element acting as `g` followed by `h`, in
    /// `Q8Op::ALL` order; `?` if the composite is not one of the eight.
    pub table: Vec<Vec<String>>,
    pub distinct: bool,
    pub closed: bool,
    /// Every composite equals the map of the abstract product.
    pub matches_product: bool,
    /// `ij = -ji`, `jk = -kj`, `ki = -ik` as map equalities.
    pub anticommutation: Vec<(String, bool)>,
    /// Element orders in `Q8Op::ALL` order.
    pub orders: Vec<usize>,
}

impl GroupReport {
    /// Eight distinct maps, closed, non-abelian with a single involution:
    /// the quaternion group up to isomorphism.
    pub fn is_q8(&self) -> bool {
        let involutions = self.orders.iter().filter(|&&o| o == 2).count();
        self.distinct
            && self.closed
            && self.matches_product
            && self.anticommutation.iter().all(|(_, ok)| *ok)
            && involutions == 1
            && self.orders.iter().filter(|&&o| o == 4).count() == 6
    }
}

pub fn group_report() -> GroupReport {
    let maps: Vec<OperatorMap> = Q8Op::ALL.iter().map(|&g| operator_map(g)).collect();
    let name_of = |m: &OperatorMap| maps.iter().position(|x| x == m).map(|i| Q8Op::ALL[i]);
    let mut closed = true;
    let mut matches_product = true;
    let mut table = Vec::new();
    for (a, &g) in Q8Op::ALL.iter().enumerate() {
        let mut row = Vec::new();
        for (b, &h) in Q8Op::ALL.iter().enumerate() {
            let c = compose(&maps[a], &maps[b]);
            match name_of(&c) {
                Some(n) => {
                    matches_product &= n == q8_mul(g, h);
                    row.push(n.to_string());
                }
                None => {
                    closed = false;
                    matches_product = false;
                    row.push("?".to_string());
                }
            }
        }
        table.push(row);
    }
    let anticommutation = [(Q8Op::I, Q8Op::J), (Q8Op::J, Q8Op::K), (Q8Op::K, Q8Op::I)]
        .into_iter()
        .map(|(g, h)| {
            let gh = compose(&operator_map(g), &operator_map(h));
            let hg = compose(&operator_map(h), &operator_map(g));
            let neg = compose(&hg, &operator_map(Q8Op::M1));
            (format!("{g}{h} = -{h}{g}"), gh == neg)
        })
        .collect();
    GroupReport {
        table,
        distinct: maps.iter().collect::<BTreeSet<_>>().len() == 8,
        closed,
        matches_product,
        anticommutation,
        orders: maps.iter().map(order).collect(),
    }
}

impl fmt::Display for GroupReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "row g, column h: g then h")?;
        write!(f, "{:>4}", "")?;
        for h in Q8Op::ALL {
            write!(f, "{:>4}", h.to_string())?;
        }
        writeln!(f)?;
        for (g, row) in Q8Op::ALL.iter().zip(&self.table) {
            write!(f, "{:>4}", g.to_string())?;
            for cell in row {
                write!(f, "{cell:>4}")?;
            }
            writeln!(f)?;
        }
        for (law, ok) in &self.anticommutation {
            writeln!(f, "{law}: {}", if *ok { "holds" } else { "FAILS" })?;
        }
        write!(f, "quaternion group: {}", if self.is_q8() { "yes" } else { "NO" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators_form_q8() {
        let r = group_report();
        assert!(r.is_q8(), "{r}");
        assert_eq!(r.table[2][4], "k");
        assert_eq!(r.table[4][2], "-k");
        assert_eq!(r.orders, vec![1, 2, 4, 4, 4, 4, 4, 4]);
    }
}
