//! Value domain and the operator group.
//!
//! A Q value is a 4-tuple of Laws of Form values, packed into four bits so the
//! sixteen states can be enumerated as `0..16`. The eight operators
//! `{1, -1, i, -i, j, -j, k, -k}` act on those tuples as signed permutations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the two primary values of the calculus of indications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LoF {
    Unmarked,
    Marked,
}

impl LoF {
    pub fn from_bool(marked: bool) -> LoF {
        if marked {
            LoF::Marked
        } else {
            LoF::Unmarked
        }
    }

    pub fn is_marked(self) -> bool {
        self == LoF::Marked
    }

    /// Crossing: the mark flips the state.
    pub fn mark(self) -> LoF {
        LoF::from_bool(!self.is_marked())
    }

    /// Calling and integration: marked if either side is marked.
    pub fn juxtapose(self, other: LoF) -> LoF {
        LoF::from_bool(self.is_marked() || other.is_marked())
    }

    pub fn symbol(self) -> char {
        match self {
            LoF::Unmarked => 'U',
            LoF::Marked => 'M',
        }
    }
}

impl fmt::Display for LoF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueParseError {
    #[error("expected {expected} characters of M/U, got {found:?}")]
    BadPattern { expected: usize, found: String },
    #[error("unknown operator {0:?} (expected one of 1, -1, i, -i, j, -j, k, -k)")]
    UnknownOperator(String),
}

/// A 4-tuple `(a, b, c, d)` of LoF values. Slot `a` is the most significant
/// bit, so `QValue::from_index(0b1001)` is `(M, U, U, M)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QValue(u8);

impl QValue {
    pub const UNMARKED: QValue = QValue(0);
    pub const MARKED: QValue = QValue(0b1111);

    pub fn from_index(index: u8) -> QValue {
        assert!(index < 16, "QValue index out of range: {index}");
        QValue(index)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = QValue> + Clone {
        (0..16).map(QValue)
    }

    pub fn from_slots(slots: [LoF; 4]) -> QValue {
        let mut bits = 0;
        for (pos, s) in slots.iter().enumerate() {
            if s.is_marked() {
                bits |= 1 << (3 - pos);
            }
        }
        QValue(bits)
    }

    pub fn slots(self) -> [LoF; 4] {
        [self.slot(0), self.slot(1), self.slot(2), self.slot(3)]
    }

    /// Slot by zero-based position (0 = a, 3 = d).
    pub fn slot(self, pos: usize) -> LoF {
        LoF::from_bool(self.0 & (1 << (3 - pos)) != 0)
    }

    pub fn with_slot(self, pos: usize, value: LoF) -> QValue {
        let bit = 1 << (3 - pos);
        QValue(if value.is_marked() { self.0 | bit } else { self.0 & !bit })
    }

    /// Slot-wise juxtaposition.
    pub fn juxtapose(self, other: QValue) -> QValue {
        QValue(self.0 | other.0)
    }

    /// The plain mark, slot-wise.
    pub fn mark(self) -> QValue {
        QValue(!self.0 & 0b1111)
    }

    /// Four-character `M`/`U` pattern, e.g. `MUUM`.
    pub fn pattern(self) -> String {
        self.slots().iter().map(|s| s.symbol()).collect()
    }
}

impl FromStr for QValue {
    type Err = ValueParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.trim().chars().collect();
        let bad = || ValueParseError::BadPattern { expected: 4, found: s.to_string() };
        if chars.len() != 4 {
            return Err(bad());
        }
        let mut slots = [LoF::Unmarked; 4];
        for (slot, c) in slots.iter_mut().zip(chars) {
            *slot = match c {
                'M' | 'm' => LoF::Marked,
                'U' | 'u' => LoF::Unmarked,
                _ => return Err(bad()),
            };
        }
        Ok(QValue::from_slots(slots))
    }
}

impl fmt::Debug for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QValue({})", self.pattern())
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pattern())
    }
}

impl Serialize for QValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.pattern())
    }
}

impl<'de> Deserialize<'de> for QValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The kind of an enclosure: LoF's plain mark or one of the imaginary marks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkKind {
    Plain,
    I,
    J,
    K,
}

impl MarkKind {
    pub const ALL: [MarkKind; 4] = [MarkKind::Plain, MarkKind::I, MarkKind::J, MarkKind::K];
    pub const IMAGINARY: [MarkKind; 3] = [MarkKind::I, MarkKind::J, MarkKind::K];

    /// Text written after the closing bracket.
    pub fn suffix(self) -> &'static str {
        match self {
            MarkKind::Plain => "",
            MarkKind::I => "i",
            MarkKind::J => "j",
            MarkKind::K => "k",
        }
    }

    pub fn from_suffix(s: &str) -> Option<MarkKind> {
        match s {
            "" | "plain" => Some(MarkKind::Plain),
            "i" => Some(MarkKind::I),
            "j" => Some(MarkKind::J),
            "k" => Some(MarkKind::K),
            _ => None,
        }
    }

    pub fn op(self) -> Q8Op {
        match self {
            MarkKind::Plain => Q8Op::M1,
            MarkKind::I => Q8Op::I,
            MarkKind::J => Q8Op::J,
            MarkKind::K => Q8Op::K,
        }
    }
}

impl fmt::Display for MarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarkKind::Plain => f.write_str("plain"),
            other => f.write_str(other.suffix()),
        }
    }
}

/// An element of the quaternion group, `{1, -1, i, -i, j, -j, k, -k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Q8Op {
    P1,
    M1,
    I,
    MI,
    J,
    MJ,
    K,
    MK,
}

/// `(negative, unit)` with unit 0 = 1, 1 = i, 2 = j, 3 = k.
type SignedUnit = (bool, u8);

// UNIT_MUL[a][b] = a * b for the units 1, i, j, k.
const UNIT_MUL: [[SignedUnit; 4]; 4] = [
    [(false, 0), (false, 1), (false, 2), (false, 3)],
    [(false, 1), (true, 0), (false, 3), (true, 2)],
    [(false, 2), (true, 3), (true, 0), (false, 1)],
    [(false, 3), (false, 2), (true, 1), (true, 0)],
];

impl Q8Op {
    pub const ALL: [Q8Op; 8] = [
        Q8Op::P1,
        Q8Op::M1,
        Q8Op::I,
        Q8Op::MI,
        Q8Op::J,
        Q8Op::MJ,
        Q8Op::K,
        Q8Op::MK,
    ];

    fn signed_unit(self) -> SignedUnit {
        match self {
            Q8Op::P1 => (false, 0),
            Q8Op::M1 => (true, 0),
            Q8Op::I => (false, 1),
            Q8Op::MI => (true, 1),
            Q8Op::J => (false, 2),
            Q8Op::MJ => (true, 2),
            Q8Op::K => (false, 3),
            Q8Op::MK => (true, 3),
        }
    }

    fn from_signed_unit((negative, unit): SignedUnit) -> Q8Op {
        match (negative, unit) {
            (false, 0) => Q8Op::P1,
            (true, 0) => Q8Op::M1,
            (false, 1) => Q8Op::I,
            (true, 1) => Q8Op::MI,
            (false, 2) => Q8Op::J,
            (true, 2) => Q8Op::MJ,
            (false, 3) => Q8Op::K,
            (true, 3) => Q8Op::MK,
            _ => unreachable!("unit index out of range"),
        }
    }

    /// The imaginary mark underlying this element, if any (`i` for `±i`).
    pub fn unit_mark(self) -> Option<MarkKind> {
        match self.signed_unit().1 {
            1 => Some(MarkKind::I),
            2 => Some(MarkKind::J),
            3 => Some(MarkKind::K),
            _ => None,
        }
    }

    pub fn is_negative(self) -> bool {
        self.signed_unit().0
    }

    pub fn neg(self) -> Q8Op {
        let (n, u) = self.signed_unit();
        Q8Op::from_signed_unit((!n, u))
    }

    pub fn inverse(self) -> Q8Op {
        match self {
            Q8Op::P1 | Q8Op::M1 => self,
            other => other.neg(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Q8Op::P1 => "1",
            Q8Op::M1 => "-1",
            Q8Op::I => "i",
            Q8Op::MI => "-i",
            Q8Op::J => "j",
            Q8Op::MJ => "-j",
            Q8Op::K => "k",
            Q8Op::MK => "-k",
        }
    }
}

/// Group product where `g` is the inner (first-applied) mark and `h` encloses it.
pub fn q8_mul(g: Q8Op, h: Q8Op) -> Q8Op {
    let (gn, gu) = g.signed_unit();
    let (hn, hu) = h.signed_unit();
    let (pn, pu) = UNIT_MUL[gu as usize][hu as usize];
    Q8Op::from_signed_unit((gn ^ hn ^ pn, pu))
}

impl fmt::Display for Q8Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Q8Op {
    type Err = ValueParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Q8Op::ALL
            .into_iter()
            .find(|g| g.name() == s.trim())
            .ok_or_else(|| ValueParseError::UnknownOperator(s.to_string()))
    }
}

impl Serialize for Q8Op {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Q8Op {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("arity must be positive")]
    ZeroArity,
    #[error("target has {targets} entries and marks {marks} for arity {arity}")]
    LengthMismatch { arity: usize, targets: usize, marks: usize },
    #[error("target is not a permutation of 1..{0}")]
    NotBijection(usize),
    #[error("cannot compose arities {0} and {1}")]
    ArityMismatch(usize, usize),
}

/// A permutation of `n` slots with a mark flag per output slot.
///
/// Output slot `p` takes the source slot `target[p]` and is marked if
/// `marked[p]`. Indices are zero-based; `Display` shows them one-based with a
/// `~` prefix on marked slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedPerm {
    target: Vec<usize>,
    marked: Vec<bool>,
}

impl SignedPerm {
    pub fn new(target: Vec<usize>, marked: Vec<bool>) -> Result<SignedPerm, PermError> {
        let n = target.len();
        if n == 0 {
            return Err(PermError::ZeroArity);
        }
        if marked.len() != n {
            return Err(PermError::LengthMismatch { arity: n, targets: n, marks: marked.len() });
        }
        let mut seen = vec![false; n];
        for &t in &target {
            if t >= n || seen[t] {
                return Err(PermError::NotBijection(n));
            }
            seen[t] = true;
        }
        Ok(SignedPerm { target, marked })
    }

    pub fn identity(arity: usize) -> SignedPerm {
        assert!(arity > 0, "arity must be positive");
        SignedPerm { target: (0..arity).collect(), marked: vec![false; arity] }
    }

    pub fn arity(&self) -> usize {
        self.target.len()
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn marked(&self) -> &[bool] {
        &self.marked
    }

    pub fn is_identity(&self) -> bool {
        self.target.iter().enumerate().all(|(p, &t)| p == t) && self.marked.iter().all(|m| !m)
    }

    /// The unsigned permutation underneath.
    pub fn unsigned(&self) -> SignedPerm {
        SignedPerm { target: self.target.clone(), marked: vec![false; self.arity()] }
    }

    /// `self` first, then `then`.
    pub fn then(&self, then: &SignedPerm) -> Result<SignedPerm, PermError> {
        if self.arity() != then.arity() {
            return Err(PermError::ArityMismatch(self.arity(), then.arity()));
        }
        let target = then.target.iter().map(|&q| self.target[q]).collect();
        let marked = then
            .target
            .iter()
            .zip(&then.marked)
            .map(|(&q, &m)| m ^ self.marked[q])
            .collect();
        Ok(SignedPerm { target, marked })
    }

    pub fn inverse(&self) -> SignedPerm {
        let n = self.arity();
        let mut target = vec![0; n];
        let mut marked = vec![false; n];
        for (p, &q) in self.target.iter().enumerate() {
            target[q] = p;
            marked[q] = self.marked[p];
        }
        SignedPerm { target, marked }
    }

    pub fn apply_lof(&self, slots: &[LoF]) -> Vec<LoF> {
        assert_eq!(slots.len(), self.arity(), "tuple arity mismatch");
        self.target
            .iter()
            .zip(&self.marked)
            .map(|(&src, &m)| if m { slots[src].mark() } else { slots[src] })
            .collect()
    }

    pub fn apply_q(&self, v: QValue) -> QValue {
        assert_eq!(self.arity(), 4, "QValue needs an arity-4 permutation");
        let out = self.apply_lof(&v.slots());
        QValue::from_slots([out[0], out[1], out[2], out[3]])
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (p, (&t, &m)) in self.target.iter().zip(&self.marked).enumerate() {
            if p > 0 {
                f.write_str(" ")?;
            }
            if m {
                f.write_str("~")?;
            }
            write!(f, "{}", t + 1)?;
        }
        f.write_str(")")
    }
}

pub fn q8_to_signed_perm(g: Q8Op) -> SignedPerm {
    let (target, marked): ([usize; 4], [bool; 4]) = match g.signed_unit().1 {
        0 => ([0, 1, 2, 3], [false; 4]),
        // (~b, a, d, ~c)
        1 => ([1, 0, 3, 2], [true, false, false, true]),
        // (~c, ~d, a, b)
        2 => ([2, 3, 0, 1], [true, true, false, false]),
        // (~d, c, ~b, a)
        3 => ([3, 2, 1, 0], [true, false, true, false]),
        _ => unreachable!(),
    };
    let flip = g.is_negative();
    SignedPerm { target: target.to_vec(), marked: marked.iter().map(|m| m ^ flip).collect() }
}

/// The value of the operator applied to the unmarked tuple.
pub fn op_value(g: Q8Op) -> QValue {
    q8_to_signed_perm(g).apply_q(QValue::UNMARKED)
}

/// Inverse of [`op_value`] on its image.
pub fn op_of_value(v: QValue) -> Option<Q8Op> {
    Q8Op::ALL.into_iter().find(|&g| op_value(g) == v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> QValue {
        s.parse().unwrap()
    }

    #[test]
    fn mul_examples() {
        assert_eq!(q8_mul(Q8Op::I, Q8Op::J), Q8Op::K);
        assert_eq!(q8_mul(Q8Op::J, Q8Op::I), Q8Op::MK);
        for x in Q8Op::ALL {
            assert_eq!(q8_mul(Q8Op::P1, x), x);
            assert_eq!(q8_mul(x, Q8Op::P1), x);
        }
    }

    #[test]
    fn group_axioms_over_all_triples() {
        for a in Q8Op::ALL {
            for b in Q8Op::ALL {
                for c in Q8Op::ALL {
                    assert_eq!(q8_mul(q8_mul(a, b), c), q8_mul(a, q8_mul(b, c)));
                }
            }
            assert_eq!(q8_mul(a, a.inverse()), Q8Op::P1);
        }
        for g in [Q8Op::I, Q8Op::J, Q8Op::K] {
            assert_eq!(q8_mul(g, g), Q8Op::M1);
        }
        assert_eq!(q8_mul(q8_mul(Q8Op::I, Q8Op::J), Q8Op::K), Q8Op::M1);
        let center: Vec<_> = Q8Op::ALL
            .into_iter()
            .filter(|&z| Q8Op::ALL.iter().all(|&x| q8_mul(z, x) == q8_mul(x, z)))
            .collect();
        assert_eq!(center, vec![Q8Op::P1, Q8Op::M1]);
    }

    #[test]
    fn anti_commutation() {
        for (a, b) in [(Q8Op::I, Q8Op::J), (Q8Op::J, Q8Op::K), (Q8Op::K, Q8Op::I)] {
            assert_eq!(q8_mul(a, b), q8_mul(Q8Op::M1, q8_mul(b, a)));
        }
    }

    #[test]
    fn signed_perm_of_i() {
        let p = q8_to_signed_perm(Q8Op::I);
        assert_eq!(p.target(), &[1, 0, 3, 2]);
        assert_eq!(p.marked(), &[true, false, false, true]);
        assert_eq!(p.to_string(), "(~2 1 4 ~3)");
        assert!(q8_to_signed_perm(Q8Op::P1).is_identity());
    }

    #[test]
    fn signed_perm_is_homomorphism() {
        for g in Q8Op::ALL {
            for h in Q8Op::ALL {
                let composed = q8_to_signed_perm(g).then(&q8_to_signed_perm(h)).unwrap();
                assert_eq!(composed, q8_to_signed_perm(q8_mul(g, h)), "{g} * {h}");
            }
        }
    }

    #[test]
    fn klein_four_underneath() {
        let a = SignedPerm::new(vec![1, 0, 3, 2], vec![false; 4]).unwrap();
        let b = SignedPerm::new(vec![2, 3, 0, 1], vec![false; 4]).unwrap();
        let c = SignedPerm::new(vec![3, 2, 1, 0], vec![false; 4]).unwrap();
        assert_eq!(q8_to_signed_perm(Q8Op::I).unsigned(), a);
        assert_eq!(q8_to_signed_perm(Q8Op::J).unsigned(), b);
        assert_eq!(q8_to_signed_perm(Q8Op::K).unsigned(), c);
        assert!(a.then(&a).unwrap().is_identity());
        assert_eq!(a.then(&b).unwrap(), c);
        assert_eq!(a.then(&c).unwrap(), b);
        assert_eq!(b.then(&c).unwrap(), a);
    }

    #[test]
    fn op_values() {
        assert_eq!(op_value(Q8Op::I), pat("MUUM"));
        assert_eq!(op_value(Q8Op::P1), pat("UUUU"));
        assert_eq!(op_value(Q8Op::J), pat("MMUU"));
        assert_eq!(op_value(Q8Op::K), pat("MUMU"));
        let mut seen: Vec<_> = Q8Op::ALL.iter().map(|&g| op_value(g)).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 8);
        for g in Q8Op::ALL {
            assert_eq!(op_of_value(op_value(g)), Some(g));
        }
    }

    #[test]
    fn perm_validation() {
        assert_eq!(SignedPerm::new(vec![0, 0], vec![false, false]), Err(PermError::NotBijection(2)));
        assert_eq!(SignedPerm::new(vec![], vec![]), Err(PermError::ZeroArity));
        assert!(matches!(SignedPerm::new(vec![0], vec![]), Err(PermError::LengthMismatch { .. })));
        let p = q8_to_signed_perm(Q8Op::MJ);
        assert!(p.then(&p.inverse()).unwrap().is_identity());
        assert!(SignedPerm::identity(3).then(&p).is_err());
    }

    #[test]
    fn value_patterns() {
        assert_eq!(QValue::from_index(0b1001).pattern(), "MUUM");
        assert!("MUU".parse::<QValue>().is_err());
        assert!("MUUX".parse::<QValue>().is_err());
        for v in QValue::all() {
            assert_eq!(v.pattern().parse::<QValue>().unwrap(), v);
            assert_eq!(v.mark().mark(), v);
            assert_eq!(v.juxtapose(v), v);
        }
    }
}
