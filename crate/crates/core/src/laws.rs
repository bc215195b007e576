//! Catalogue of named laws, written in the text syntax.
//!
//! Templates use `@a` and `@b` for the imaginary subscripts `alpha` and
//! `beta`; [`LawTemplate::instances`] expands them.

use crate::kernel::MarkKind;
use crate::textio::{parse, Expr};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Params {
    None,
    /// `alpha` ranges over `i, j, k`.
    Alpha,
    /// `alpha` and `beta` range over `i, j, k` with `alpha != beta`.
    AlphaBeta,
}

#[derive(Clone, Copy, Debug)]
pub struct LawTemplate {
    pub id: &'static str,
    pub name: &'static str,
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub params: Params,
}

/// One concrete instance of a template.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawInstance {
    pub alpha: Option<MarkKind>,
    pub beta: Option<MarkKind>,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl LawInstance {
    pub fn label(&self) -> String {
        match (self.alpha, self.beta) {
            (Some(a), Some(b)) => format!("alpha={a},beta={b}"),
            (Some(a), None) => format!("alpha={a}"),
            _ => String::new(),
        }
    }
}

pub(crate) fn fill(template: &str, alpha: Option<MarkKind>, beta: Option<MarkKind>) -> String {
    let mut s = template.to_string();
    if let Some(a) = alpha {
        s = s.replace("@a", a.suffix());
    }
    if let Some(b) = beta {
        s = s.replace("@b", b.suffix());
    }
    s
}

impl LawTemplate {
    pub const fn new(
        id: &'static str,
        name: &'static str,
        lhs: &'static str,
        rhs: &'static str,
        params: Params,
    ) -> LawTemplate {
        LawTemplate { id, name, lhs, rhs, params }
    }

    pub fn instantiate(&self, alpha: Option<MarkKind>, beta: Option<MarkKind>) -> LawInstance {
        let lhs = parse(&fill(self.lhs, alpha, beta))
            .unwrap_or_else(|e| panic!("law {} lhs: {e}", self.id));
        let rhs = parse(&fill(self.rhs, alpha, beta))
            .unwrap_or_else(|e| panic!("law {} rhs: {e}", self.id));
        LawInstance { alpha, beta, lhs, rhs }
    }

    pub fn instances(&self) -> Vec<LawInstance> {
        match self.params {
            Params::None => vec![self.instantiate(None, None)],
            Params::Alpha => {
                MarkKind::IMAGINARY.iter().map(|&a| self.instantiate(Some(a), None)).collect()
            }
            Params::AlphaBeta => MarkKind::IMAGINARY
                .iter()
                .flat_map(|&a| {
                    MarkKind::IMAGINARY
                        .iter()
                        .filter(move |&&b| b != a)
                        .map(move |&b| self.instantiate(Some(a), Some(b)))
                })
                .collect(),
        }
    }
}

/// Initials and consequences shared by LoF and Q.
pub const APPENDIX_A: [LawTemplate; 10] = [
    LawTemplate::new("A1", "Position", "[[A] A]", "", Params::None),
    LawTemplate::new("A2", "Transposition", "[[A] [B]] C", "[[A C] [B C]]", Params::None),
    LawTemplate::new("A3", "Reflexion", "[[A]]", "A", Params::None),
    LawTemplate::new("A4", "Generation", "[A] B", "[A B] B", Params::None),
    LawTemplate::new("A5", "Integration", "A []", "[]", Params::None),
    LawTemplate::new("A6", "Occultation", "[[A] B] A", "A", Params::None),
    LawTemplate::new("A7", "Iteration", "A A", "A", Params::None),
    LawTemplate::new("A8", "Extension", "[[A] [B]] [[A] B]", "A", Params::None),
    LawTemplate::new("A9", "Echelon", "[[[A] B] C]", "[A C] [[B] C]", Params::None),
    LawTemplate::new("A10", "Crosstransposition", "[[[A] B] [[A] [B]]]", "[A B] [A [B]]", Params::None),
];

/// Laws of Q that have no LoF counterpart. Q9 juxtaposes `C` on the right
/// and Q10 on the left.
pub const APPENDIX_B_GENERAL: [LawTemplate; 10] = [
    LawTemplate::new("Q1", "SQR Mark", "[[A]@a]@a", "[A]", Params::Alpha),
    LawTemplate::new("Q2", "IJK", "[[[A]i]j]k", "[A]", Params::None),
    LawTemplate::new("Q3", "Quadra Reflexion", "[A]@a^4", "A", Params::Alpha),
    LawTemplate::new("Q4", "Mark Commutes", "[[A]@a]", "[[A]]@a", Params::Alpha),
    LawTemplate::new("Q5", "Anti-commutes", "[[A]@a]@b", "[[[A]@b]@a]", Params::AlphaBeta),
    LawTemplate::new("Q6", "Split Generation", "[[A]@a B]@a C", "[[A C]@a B]@a C", Params::Alpha),
    LawTemplate::new("Q7", "Extraction", "[A []@a]@a", "[A]@a []@a^3", Params::Alpha),
    LawTemplate::new(
        "Q8",
        "Disintegration",
        "[A B]@a",
        "[[[A]@a [B]@a] [[A]@a []@a^3] [[B]@a []@a^3]]",
        Params::Alpha,
    ),
    LawTemplate::new(
        "Q9",
        "Right Distribution",
        "[[A]@a^3 [B]@a^3]@a C",
        "[[A C]@a^3 [B C]@a^3]@a",
        Params::Alpha,
    ),
    LawTemplate::new(
        "Q10",
        "Left Distribution",
        "C [[A]@a^3 [B]@a^3]@a",
        "[[C A]@a^3 [C B]@a^3]@a",
        Params::Alpha,
    ),
];

/// The arithmetic compile laws, valid only for empty marks. Each pairs the
/// law with the operator its left side must equal.
pub const APPENDIX_B_COMPILE: [(LawTemplate, crate::kernel::Q8Op); 3] = [
    (
        LawTemplate::new("Q11", "Compile-k", "[[]i []j] [[]i^3 []j^3]", "[]k", Params::None),
        crate::kernel::Q8Op::K,
    ),
    (
        LawTemplate::new("Q12", "Compile-i", "[[]j []k] [[]j^3 []k^3]", "[]i", Params::None),
        crate::kernel::Q8Op::I,
    ),
    (
        LawTemplate::new("Q13", "Compile-j", "[[]i []k] [[]i^3 []k^3]", "[]j", Params::None),
        crate::kernel::Q8Op::J,
    ),
];

/// Distribution of the `and_alpha` connective under juxtaposition, the
/// companion of Q9.
pub const AND_DISTRIBUTION: LawTemplate = LawTemplate::new(
    "D-And",
    "And Distribution",
    "[[A]@a [B]@a]@a^3 C",
    "[[A C]@a [B C]@a]@a^3",
    Params::Alpha,
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn templates_parse() {
        let all = APPENDIX_A
            .iter()
            .chain(APPENDIX_B_GENERAL.iter())
            .chain(APPENDIX_B_COMPILE.iter().map(|(t, _)| t))
            .chain([&AND_DISTRIBUTION]);
        for t in all {
            let n = t.instances().len();
            let expected = match t.params {
                Params::None => 1,
                Params::Alpha => 3,
                Params::AlphaBeta => 6,
            };
            assert_eq!(n, expected, "{}", t.id);
        }
    }

    #[test]
    fn placeholders_filled() {
        let q5 = APPENDIX_B_GENERAL[4].instantiate(Some(MarkKind::I), Some(MarkKind::J));
        assert_eq!(q5.lhs.to_string(), "[[A]i]j");
        assert_eq!(q5.rhs.to_string(), "[[[A]j]i]");
        assert_eq!(q5.label(), "alpha=i,beta=j");
    }
}
