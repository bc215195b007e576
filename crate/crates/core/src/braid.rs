//! Braid words acting on LoF n-tuples.
//!
//! `σ_k` sends slots `(a_k, a_{k+1})` to `([a_{k+1}], a_k)` and `σ_k⁻¹` sends
//! them to `(a_{k+1}, [a_k])`. A word acts letter by letter from the left, so
//! the word for `i` followed by the word for `j` acts as the word for `k`.
//! Everything is computed in the finite signed-permutation image.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{q8_mul, q8_to_signed_perm, LoF, MarkKind, Q8Op, SignedPerm};
use crate::textio::Expr;

pub const MAX_ARITY: usize = 26;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("arity must be between 2 and {MAX_ARITY}, got {0}")]
    Arity(usize),
    #[error("generator s{index} needs at least {} strands, the word has {arity}", index + 1)]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("bad braid generator {0:?}; expected s1, s2, ... with an optional ' for the inverse")]
    BadGenerator(String),
    #[error("tuple has {found} slots, the word has arity {arity}")]
    TupleArity { arity: usize, found: usize },
}

/// `σ_index` (one-based) or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidGen {
    pub index: usize,
    pub inverse: bool,
}

impl BraidGen {
    pub fn sigma(index: usize) -> BraidGen {
        BraidGen { index, inverse: false }
    }

    pub fn sigma_inv(index: usize) -> BraidGen {
        BraidGen { index, inverse: true }
    }

    pub fn inverted(self) -> BraidGen {
        BraidGen { inverse: !self.inverse, ..self }
    }
}

impl fmt::Display for BraidGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}{}", self.index, if self.inverse { "'" } else { "" })
    }
}

impl FromStr for BraidGen {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<BraidGen, BraidError> {
        let bad = || BraidError::BadGenerator(s.to_string());
        let body = s.strip_prefix('s').or_else(|| s.strip_prefix('σ')).ok_or_else(bad)?;
        let (digits, inverse) = match body.strip_suffix('\'') {
            Some(d) => (d, true),
            None => (body, false),
        };
        let index: usize = digits.parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(BraidGen { index, inverse })
    }
}

/// Something a strand can carry: a LoF value or a slot expression.
pub trait Strand: Clone {
    fn marked(&self) -> Self;
}

impl Strand for LoF {
    fn marked(&self) -> LoF {
        self.mark()
    }
}

impl Strand for Expr {
    fn marked(&self) -> Expr {
        match self {
            Expr::Mark(MarkKind::Plain, inner) => (**inner).clone(),
            other => Expr::cross(other.clone()),
        }
    }
}

pub fn sigma_apply<T: Strand>(g: BraidGen, t: &[T]) -> Result<Vec<T>, BraidError> {
    if g.index == 0 || g.index + 1 > t.len() {
        return Err(BraidError::IndexOutOfRange { index: g.index, arity: t.len() });
    }
    let k = g.index - 1;
    let mut out = t.to_vec();
    if g.inverse {
        out[k] = t[k + 1].clone();
        out[k + 1] = t[k].marked();
    } else {
        out[k] = t[k + 1].marked();
        out[k + 1] = t[k].clone();
    }
    Ok(out)
}

fn gen_perm(g: BraidGen, n: usize) -> SignedPerm {
    let k = g.index - 1;
    let mut target: Vec<usize> = (0..n).collect();
    target.swap(k, k + 1);
    let mut marked = vec![false; n];
    marked[if g.inverse { k + 1 } else { k }] = true;
    SignedPerm::new(target, marked).expect("a transposition is a bijection")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    arity: usize,
    gens: Vec<BraidGen>,
}

impl BraidWord {
    pub fn new(arity: usize, gens: Vec<BraidGen>) -> Result<BraidWord, BraidError> {
        if !(2..=MAX_ARITY).contains(&arity) {
            return Err(BraidError::Arity(arity));
        }
        if let Some(g) = gens.iter().find(|g| g.index == 0 || g.index >= arity) {
            return Err(BraidError::IndexOutOfRange { index: g.index, arity });
        }
        Ok(BraidWord { arity, gens })
    }

    pub fn empty(arity: usize) -> Result<BraidWord, BraidError> {
        BraidWord::new(arity, Vec::new())
    }

    /// Whitespace-separated generators such as `s1 s3' s2`.
    pub fn parse(text: &str, arity: usize) -> Result<BraidWord, BraidError> {
        let gens = text.split_whitespace().map(str::parse).collect::<Result<Vec<_>, _>>()?;
        BraidWord::new(arity, gens)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn gens(&self) -> &[BraidGen] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        assert_eq!(self.arity, other.arity, "concatenating words of different arity");
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        BraidWord { arity: self.arity, gens }
    }

    pub fn pow(&self, n: usize) -> BraidWord {
        BraidWord { arity: self.arity, gens: self.gens.repeat(n) }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord { arity: self.arity, gens: self.gens.iter().rev().map(|g| g.inverted()).collect() }
    }

    pub fn apply<T: Strand>(&self, t: &[T]) -> Result<Vec<T>, BraidError> {
        if t.len() != self.arity {
            return Err(BraidError::TupleArity { arity: self.arity, found: t.len() });
        }
        self.gens.iter().try_fold(t.to_vec(), |acc, &g| sigma_apply(g, &acc))
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return f.write_str("1");
        }
        for (n, g) in self.gens.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

pub fn braid_to_signed_perm(w: &BraidWord) -> SignedPerm {
    w.gens.iter().fold(SignedPerm::identity(w.arity), |acc, &g| {
        acc.then(&gen_perm(g, w.arity)).expect("same arity")
    })
}

fn unit_word(kind: MarkKind) -> BraidWord {
    let text = match kind {
        MarkKind::Plain => "s1 s3' s1 s3'",
        MarkKind::I => "s1 s3'",
        MarkKind::J => "s2 s1' s3 s2'",
        MarkKind::K => "s1 s3' s2 s1' s3 s2'",
    };
    BraidWord::parse(text, 4).expect("fixed word")
}

/// A 4-strand word acting as the operator: the drawn words for i, j and k,
/// the empty word for the identity, `i²` for the plain mark and cubes for
/// the negated units.
pub fn quaternion_braid_word(g: Q8Op) -> BraidWord {
    match (g.unit_mark(), g.is_negative()) {
        (None, false) => BraidWord::empty(4).expect("arity 4"),
        (None, true) => unit_word(MarkKind::I).pow(2),
        (Some(kind), false) => unit_word(kind),
        (Some(kind), true) => unit_word(kind).pow(3),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidRelationReport {
    pub arity: usize,
    pub checks: Vec<RelationCheck>,
}

impl BraidRelationReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

impl fmt::Display for BraidRelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let held = self.checks.iter().filter(|c| c.holds).count();
        writeln!(f, "braid relations on {} strands: {held}/{} hold", self.arity, self.checks.len())?;
        for c in &self.checks {
            writeln!(f, "  {} {}", if c.holds { "ok  " } else { "FAIL" }, c.relation)?;
        }
        Ok(())
    }
}

/// Far commutation, the adjacent braid relation in both the positive and
/// the inverse form, and `σ_k⁴ = 1`, all as signed-permutation identities.
pub fn verify_braid_relations(n: usize) -> Result<BraidRelationReport, BraidError> {
    if !(2..=MAX_ARITY).contains(&n) {
        return Err(BraidError::Arity(n));
    }
    let word = |text: &str| BraidWord::parse(text, n);
    let mut checks = Vec::new();
    let mut check = |relation: String, lhs: BraidWord, rhs: BraidWord| {
        let holds = braid_to_signed_perm(&lhs) == braid_to_signed_perm(&rhs);
        checks.push(RelationCheck { relation, holds });
    };
    for i in 1..n {
        for j in i + 1..n {
            if j - i > 1 {
                check(format!("s{i} s{j} = s{j} s{i}"), word(&format!("s{i} s{j}"))?, word(&format!("s{j} s{i}"))?);
            } else {
                check(
                    format!("s{i} s{j} s{i} = s{j} s{i} s{j}"),
                    word(&format!("s{i} s{j} s{i}"))?,
                    word(&format!("s{j} s{i} s{j}"))?,
                );
                check(
                    format!("s{i}' s{j}' s{i}' = s{j}' s{i}' s{j}'"),
                    word(&format!("s{i}' s{j}' s{i}'"))?,
                    word(&format!("s{j}' s{i}' s{j}'"))?,
                );
            }
        }
    }
    for k in 1..n {
        check(format!("s{k}^4 = 1"), word(&format!("s{k}"))?.pow(4), BraidWord::empty(n)?);
        check(format!("s{k} s{k}' = 1"), word(&format!("s{k} s{k}'"))?, BraidWord::empty(n)?);
    }
    Ok(BraidRelationReport { arity: n, checks })
}

/// Closure of the images of `gens` under composition, in discovery order
/// (breadth first from the identity).
pub fn closure(gens: &[BraidWord]) -> Vec<SignedPerm> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let images: Vec<SignedPerm> = gens.iter().map(braid_to_signed_perm).collect();
    let identity = SignedPerm::identity(first.arity());
    let mut seen = vec![identity.clone()];
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in &images {
            let q = p.then(g).expect("same arity");
            if !seen.contains(&q) {
                seen.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    seen
}

/// Checks that the closure of the i and j words is a copy of the operator
/// group: eight elements, and the map sending each operator to the image of
/// its word is a bijection that respects products.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Q8ClosureReport {
    pub order: usize,
    /// Element names in `Q8Op::ALL` order with their signed permutations.
    pub elements: Vec<(String, String)>,
    pub bijective: bool,
    pub homomorphic: bool,
}

impl Q8ClosureReport {
    pub fn isomorphic(&self) -> bool {
        self.order == 8 && self.bijective && self.homomorphic
    }
}

pub fn q8_closure() -> Q8ClosureReport {
    let group = closure(&[unit_word(MarkKind::I), unit_word(MarkKind::J)]);
    let image: BTreeMap<Q8Op, SignedPerm> =
        Q8Op::ALL.iter().map(|&g| (g, braid_to_signed_perm(&quaternion_braid_word(g)))).collect();
    let bijective = image.values().all(|p| group.contains(p))
        && image.values().collect::<std::collections::BTreeSet<_>>().len() == group.len();
    let homomorphic = Q8Op::ALL.iter().all(|&g| {
        Q8Op::ALL.iter().all(|&h| image[&g].then(&image[&h]).expect("arity 4") == image[&q8_mul(g, h)])
    });
    Q8ClosureReport {
        order: group.len(),
        elements: Q8Op::ALL.iter().map(|g| (g.to_string(), image[g].to_string())).collect(),
        bijective,
        homomorphic,
    }
}

/// Whether each drawn word acts exactly as its operator.
pub fn words_match_operators() -> bool {
    Q8Op::ALL
        .iter()
        .all(|&g| braid_to_signed_perm(&quaternion_braid_word(g)) == q8_to_signed_perm(g))
}

fn strand_label(i: usize) -> char {
    (b'a' + i as u8) as char
}

/// ASCII picture with strands running down the page. A crossing row shows
/// `X` when the left strand passes over and `x` when it passes under; the
/// strand that passes under is marked and drawn with `#` until another
/// mark cancels it.
pub fn diagram(w: &BraidWord) -> String {
    let n = w.arity;
    let mut carried: Vec<(usize, bool)> = (0..n).map(|i| (i, false)).collect();
    let strands = |carried: &[(usize, bool)]| {
        carried.iter().map(|&(_, m)| if m { "#" } else { "|" }).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    let header: Vec<String> = (0..n).map(|i| strand_label(i).to_string()).collect();
    out.push_str(&format!("{}\n", header.join(" ")));
    out.push_str(&format!("{}\n", strands(&carried)));
    for g in &w.gens {
        let k = g.index - 1;
        let mut row: Vec<char> = strands(&carried).chars().collect();
        row[2 * k] = ' ';
        row[2 * k + 2] = ' ';
        row[2 * k + 1] = if g.inverse { 'x' } else { 'X' };
        let tail = format!("  {g}");
        out.push_str(row.iter().collect::<String>().trim_end());
        out.push_str(&tail);
        out.push('\n');
        carried.swap(k, k + 1);
        let under = if g.inverse { k + 1 } else { k };
        carried[under].1 = !carried[under].1;
        out.push_str(&format!("{}\n", strands(&carried)));
    }
    let labels: Vec<String> = carried
        .iter()
        .map(|&(s, m)| if m { format!("[{}]", strand_label(s)) } else { strand_label(s).to_string() })
        .collect();
    out.push_str(&format!("({})", labels.join(", ")));
    out
}
