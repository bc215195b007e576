//! Transcribed derivations. Scripts are written as rule applications with
//! the intermediate term where a rule could apply in several places; the
//! position of each step is located once when the scripts are built and
//! stored in the resulting [`Derivation`].

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::kernel::{MarkKind, Q8Op};
use crate::textio::{parse, print, Expr};

use super::derivation::{Derivation, Step};
use super::matching::{all_positions, apply_rule, Bindings, Direction};
use super::rules::{find_rule, RuleParams};

/// The slot-wise result the exercise's closing equation states.
pub const EXERCISE_STATED_RESULT: &str = "{a, [[b] [d]], [b] c, [[c] [d]]}";

struct Draft {
    rule: &'static str,
    dir: Direction,
    params: RuleParams,
    subst: Vec<(&'static str, &'static str)>,
    to: Option<&'static str>,
}

fn st(rule: &'static str) -> Draft {
    Draft { rule, dir: Direction::Ltr, params: RuleParams::default(), subst: Vec::new(), to: None }
}

impl Draft {
    fn rtl(mut self) -> Draft {
        self.dir = Direction::Rtl;
        self
    }

    fn alpha(mut self, alpha: MarkKind) -> Draft {
        self.params = RuleParams::alpha(alpha);
        self
    }

    fn compose(mut self, g: Q8Op, h: Q8Op) -> Draft {
        self.params = RuleParams::compose(g, h);
        self
    }

    fn sub(mut self, var: &'static str, text: &'static str) -> Draft {
        self.subst.push((var, text));
        self
    }

    fn to(mut self, next: &'static str) -> Draft {
        self.to = Some(next);
        self
    }
}

/// Locate each step and record its result. Panics if a step cannot be
/// placed, which only a broken transcription can cause.
fn build(name: &str, title: &str, start: &str, drafts: Vec<Draft>, end: &str) -> Derivation {
    let mut current = parse(start).unwrap_or_else(|e| panic!("{name}: start: {e}"));
    let mut steps = Vec::new();
    for (n, d) in drafts.into_iter().enumerate() {
        let rule = find_rule(d.rule).unwrap_or_else(|| panic!("{name}: unknown rule {}", d.rule));
        let subst: Bindings = d.subst.iter().map(|&(v, t)| (v.to_string(), parse(t).unwrap())).collect();
        let want: Option<Expr> = d.to.map(|t| parse(t).unwrap_or_else(|e| panic!("{name} step {}: {e}", n + 1)));
        let placed = all_positions(&current).into_iter().find_map(|pos| {
            let out = apply_rule(&current, rule, &d.params, d.dir, &pos, &subst).ok()?;
            if out.ac_eq(&current) {
                return None;
            }
            match &want {
                Some(w) if !w.ac_eq(&out) => None,
                _ => Some((pos, out)),
            }
        });
        let (pos, out) = placed.unwrap_or_else(|| {
            panic!("{name} step {} ({} {}) does not apply to `{}`", n + 1, d.rule, d.dir, print(&current))
        });
        steps.push(Step {
            rule: d.rule.to_string(),
            dir: d.dir,
            pos,
            subst: d.subst.iter().map(|&(v, t)| (v.to_string(), t.to_string())).collect::<BTreeMap<_, _>>(),
            params: d.params,
            next: Some(print(&out)),
        });
        current = out;
    }
    let end_expr = parse(end).unwrap();
    assert!(current.ac_eq(&end_expr), "{name}: ends at `{}`, not `{end}`", print(&current));
    Derivation {
        name: name.to_string(),
        title: title.to_string(),
        start: start.to_string(),
        steps,
        end: end.to_string(),
    }
}

use MarkKind::{I, J, K};

fn intro() -> Vec<Derivation> {
    vec![
        build(
            "intro-step1",
            "[[[]i]j]k = [[]k]k = []",
            "[[[]i]j]k",
            vec![st("IJ"), st("Q1").alpha(K)],
            "[]",
        ),
        build(
            "intro-step2",
            "[[]i] = [[[[]i]i]j]k = [[[]]j]k = [[[]j]k]",
            "[[]i]",
            vec![
                st("Q2").rtl(),
                st("Q1").alpha(I),
                st("Q4").rtl().alpha(J),
                st("Q4").rtl().alpha(K),
            ],
            "[[[]j]k]",
        ),
        build(
            "intro-step3",
            "[]i = [[]j]k",
            "[]i",
            vec![st("A3").rtl().sub("A", "[]i"), st("QR2").rtl(), st("A3")],
            "[[]j]k",
        ),
        build(
            "intro-step4",
            "[[]k]i = []j, through [[[Y]j]k]i = [Y] with Y = [[]j]",
            "[[]k]i",
            vec![
                st("A3").rtl().to("[[[[]]]k]i"),
                st("Q1").rtl().alpha(J).to("[[[[[]j]j]]k]i"),
                st("Q4").alpha(J).to("[[[[[]j]]j]k]i"),
                st("QR3"),
                st("Q1").alpha(I),
                st("A3"),
            ],
            "[]j",
        ),
        build(
            "intro-step5",
            "[[]k] = [[[]k]i]i = [[]j]i",
            "[[]k]",
            vec![st("Q1").rtl().alpha(I), st("KI")],
            "[[]j]i",
        ),
    ]
}

fn q8_relations() -> Vec<Derivation> {
    vec![
        build("QR1", "[[[X]i]j]k = [X]", "[[[X]i]j]k", vec![st("IJ"), st("Q1").alpha(K)], "[X]"),
        build(
            "QR2",
            "[[[X]j]k] = [[X]i] = [[X]k]j",
            "[[[X]j]k]",
            vec![
                st("Q4").alpha(K),
                st("Q4").alpha(J),
                st("Q1").rtl().alpha(I).to("[[[[X]i]i]j]k"),
                st("Q2"),
                st("Q1").rtl().alpha(J).to("[[[X]i]j]j"),
                st("IJ"),
            ],
            "[[X]k]j",
        ),
        build(
            "QR3",
            "[[X]j]k = [X]i",
            "[[X]j]k",
            vec![st("A3").rtl(), st("QR2"), st("A3")],
            "[X]i",
        ),
    ]
}

const X: &str = "{a, b, c, d}";

fn theorem1() -> Vec<Derivation> {
    let mut out = vec![
        build(
            "QCC",
            "[[X]] = X on tuples",
            "[[{a, b, c, d}]]",
            vec![st("D1-m"), st("D1-m"), st("A3"), st("A3"), st("A3"), st("A3")],
            X,
        ),
        build(
            "QII",
            "i^2 = -1 on tuples",
            "[[{a, b, c, d}]i]i",
            vec![st("D1-i"), st("D1-i"), st("D1-m").rtl()],
            "[{a, b, c, d}]",
        ),
        build(
            "QJJ",
            "j^2 = -1 on tuples",
            "[[{a, b, c, d}]j]j",
            vec![st("D1-j"), st("D1-j"), st("D1-m").rtl()],
            "[{a, b, c, d}]",
        ),
        build(
            "QKK",
            "k^2 = -1 on tuples",
            "[[{a, b, c, d}]k]k",
            vec![st("D1-k"), st("D1-k"), st("D1-m").rtl()],
            "[{a, b, c, d}]",
        ),
        build(
            "QIJ",
            "ij = k on tuples",
            "[[{a, b, c, d}]i]j",
            vec![st("D1-i"), st("D1-j"), st("A3"), st("D1-k").rtl()],
            "[{a, b, c, d}]k",
        ),
        build(
            "QIJK",
            "ijk = -1 on tuples",
            "[[[{a, b, c, d}]i]j]k",
            vec![st("IJ"), st("D1-k"), st("D1-k"), st("D1-m").rtl()],
            "[{a, b, c, d}]",
        ),
        build(
            "QJI",
            "ji = -ij on tuples",
            "[[{a, b, c, d}]j]i",
            vec![
                st("D1-j"),
                st("D1-i"),
                st("A3").rtl().to("{[[d]], [c], [[b]], [a]}"),
                st("D1-m").rtl(),
                st("D1-k").rtl(),
                st("IJ").rtl(),
            ],
            "[[[{a, b, c, d}]i]j]",
        ),
        build(
            "QMC",
            "the plain mark commutes with i on tuples",
            "[[{a, b, c, d}]i]",
            vec![st("D1-i"), st("D1-m"), st("D1-i").rtl(), st("D1-m").rtl()],
            "[[{a, b, c, d}]]i",
        ),
    ];
    for alpha in MarkKind::IMAGINARY {
        let (name, start) = match alpha {
            I => ("QINV-i", "[[[{a, b, c, d}]i]i]"),
            J => ("QINV-j", "[[[{a, b, c, d}]j]j]"),
            _ => ("QINV-k", "[[[{a, b, c, d}]k]k]"),
        };
        out.push(build(
            name,
            "each imaginary mark has an inverse",
            start,
            vec![st("Q1").alpha(alpha), st("A3")],
            X,
        ));
    }
    out
}

fn juxtaposition_examples() -> Vec<Derivation> {
    vec![
        build(
            "juxtaposition-1",
            "slot-wise juxtaposition with Integration and Calling",
            "{[], [], , []} {a, b, c, []}",
            vec![st("D2"), st("A5"), st("A5"), st("A7")],
            "{[], [], c, []}",
        ),
        build(
            "juxtaposition-2",
            "[X]i [Y]j with Y a permutation of X",
            "[{a, b, c, d}]i [{a, c, b, d}]j",
            vec![
                st("D1-i"),
                st("D1-j"),
                st("D2"),
                st("A7"),
                st("A3").rtl().to("{[b], a [d], a d, [[[c] c]]}"),
                st("A1"),
            ],
            "{[b], a [d], a d, []}",
        ),
    ]
}

fn distribution_demonstrations() -> Vec<Derivation> {
    vec![
        build(
            "demo-or_i-and_j",
            "A or_i (B and_j C) = (A or_i B) and_j (A or_i C)",
            "[[A]i^3 [[[B]j [C]j]j^3]i^3]i",
            vec![
                st("Compose").compose(Q8Op::MJ, Q8Op::MI),
                st("Compose").rtl().compose(Q8Op::MI, Q8Op::K).to("[[A]i^3 [[[B]i^3]k [C]j]k^3]i"),
                st("Compose").rtl().compose(Q8Op::MI, Q8Op::K),
                st("D-And").alpha(K),
                st("Compose").compose(Q8Op::MK, Q8Op::I),
                st("Compose").rtl().compose(Q8Op::I, Q8Op::J).to("[[[[A]i^3 [B]i^3]i]j [[A]i^3 [C]i^3]k]j^3"),
                st("Compose").rtl().compose(Q8Op::I, Q8Op::J),
            ],
            "[[[[A]i^3 [B]i^3]i]j [[[A]i^3 [C]i^3]i]j]j^3",
        ),
        // The closing line as printed reads (A and_j B) and_k (B and_j C); the
        // steps arrive at (A and_j C) and_k (B and_j C), which is also the
        // only one of the two that is valid.
        build(
            "demo-and_k-and_j",
            "(A and_k B) and_j C = (A and_j C) and_k (B and_j C)",
            "[[[[A]k [B]k]k^3]j [C]j]j^3",
            vec![
                st("Compose").compose(Q8Op::MK, Q8Op::J),
                st("Compose").rtl().compose(Q8Op::J, Q8Op::MI).to("[[[[A]j]i^3 [B]k]i [C]j]j^3"),
                st("Compose").rtl().compose(Q8Op::J, Q8Op::MI),
                st("Q9").alpha(I),
                st("Compose").compose(Q8Op::I, Q8Op::MJ),
                st("Compose").rtl().compose(Q8Op::MJ, Q8Op::K).to("[[[[A]j [C]j]j^3]k [[B]j [C]j]i^3]k^3"),
                st("Compose").rtl().compose(Q8Op::MJ, Q8Op::K),
            ],
            "[[[[A]j [C]j]j^3]k [[[B]j [C]j]j^3]k]k^3",
        ),
    ]
}

fn appendix_c() -> Vec<Derivation> {
    let example1 = build(
        "appendix-c-example-1",
        "[X []i []j] [[X] [[]i []j]] marks slot c",
        "[{a, b, c, d} []i []j] [[{a, b, c, d}] [[]i []j]]",
        vec![
            st("EM").alpha(I).to("[{a, b, c, d} {[], , , []} []j] [[{a, b, c, d}] [[]i []j]]"),
            st("EM").alpha(J).to("[{a, b, c, d} {[], , , []} {[], [], , }] [[{a, b, c, d}] [[]i []j]]"),
            st("D2").to("[{a, b, c, d} {[] [], [], , []}] [[{a, b, c, d}] [[]i []j]]"),
            st("A7").to("[{a, b, c, d} {[], [], , []}] [[{a, b, c, d}] [[]i []j]]"),
            st("D2").to("[{a [], b [], c, d []}] [[{a, b, c, d}] [[]i []j]]"),
            st("A5").to("[{[], b [], c, d []}] [[{a, b, c, d}] [[]i []j]]"),
            st("A5").to("[{[], [], c, d []}] [[{a, b, c, d}] [[]i []j]]"),
            st("A5").to("[{[], [], c, []}] [[{a, b, c, d}] [[]i []j]]"),
            st("D1-m").to("{[[]], [[]], [c], [[]]} [[{a, b, c, d}] [[]i []j]]"),
            st("A3").to("{, [[]], [c], [[]]} [[{a, b, c, d}] [[]i []j]]"),
            st("A3").to("{, , [c], [[]]} [[{a, b, c, d}] [[]i []j]]"),
            st("A3").to("{, , [c], } [[{a, b, c, d}] [[]i []j]]"),
            st("EM").alpha(I).to("{, , [c], } [[{a, b, c, d}] [{[], , , []} []j]]"),
            st("EM").alpha(J).to("{, , [c], } [[{a, b, c, d}] [{[], , , []} {[], [], , }]]"),
            st("D2").to("{, , [c], } [[{a, b, c, d}] [{[] [], [], , []}]]"),
            st("A7").to("{, , [c], } [[{a, b, c, d}] [{[], [], , []}]]"),
            st("D1-m").to("{, , [c], } [{[a], [b], [c], [d]} [{[], [], , []}]]"),
            st("D1-m").to("{, , [c], } [{[a], [b], [c], [d]} {[[]], [[]], [], [[]]}]"),
            st("A3").to("{, , [c], } [{[a], [b], [c], [d]} {, [[]], [], [[]]}]"),
            st("A3").to("{, , [c], } [{[a], [b], [c], [d]} {, , [], [[]]}]"),
            st("A3").to("{, , [c], } [{[a], [b], [c], [d]} {, , [], }]"),
            st("D2").to("{, , [c], } [{[a], [b], [c] [], [d]}]"),
            st("A5").to("{, , [c], } [{[a], [b], [], [d]}]"),
            st("D1-m").to("{, , [c], } {[[a]], [[b]], [[]], [[d]]}"),
            st("A3").to("{, , [c], } {a, [[b]], [[]], [[d]]}"),
            st("A3").to("{, , [c], } {a, b, [[]], [[d]]}"),
            st("A3").to("{, , [c], } {a, b, , [[d]]}"),
            st("A3").to("{, , [c], } {a, b, , d}"),
            st("D2"),
        ],
        "{a, b, [c], d}",
    );
    let example2 = build(
        "appendix-c-example-2",
        "[[X] []i^3 []j^3] [[X]j []i []k] [[X]i []j []k] [[X]k []i []j] permutes to (a, d, b, c)",
        "[[{a, b, c, d}] []i^3 []j^3] [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]",
        vec![
            // Each gadget reduces to a tuple holding one source slot.
            // [[X] I3J3] = (a, , , )
            st("D1-m").to("[{[a], [b], [c], [d]} []i^3 []j^3] [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("EM3").alpha(I).to("[{[a], [b], [c], [d]} {, [], [], } []j^3] [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("EM3").alpha(J).to("[{[a], [b], [c], [d]} {, [], [], } {, , [], []}] [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("D2").to("[{[a], [b], [c], [d]} {, [], [] [], []}] [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A7").to("[{[a], [b], [c], [d]} {, [], [], []}] [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("D2").to("[{[a], [b] [], [c] [], [d] []}] [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A5").to("[{[a], [], [c] [], [d] []}] [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A5").to("[{[a], [], [], [d] []}] [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A5").to("[{[a], [], [], []}] [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("D1-m").to("{[[a]], [[]], [[]], [[]]} [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A3").to("{a, [[]], [[]], [[]]} [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A3").to("{a, , [[]], [[]]} [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A3").to("{a, , , [[]]} [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A3").to("{a, , , } [[{a, b, c, d}]j []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            // [[X]j IK] = ( , d, , )
            st("D1-j").to("{a, , , } [{[c], [d], a, b} []i []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("EM").alpha(I).to("{a, , , } [{[c], [d], a, b} {[], , , []} []k] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("EM").alpha(K).to("{a, , , } [{[c], [d], a, b} {[], , , []} {[], , [], }] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("D2").to("{a, , , } [{[c], [d], a, b} {[] [], , [], []}] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A7").to("{a, , , } [{[c], [d], a, b} {[], , [], []}] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("D2").to("{a, , , } [{[c] [], [d], a [], b []}] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A5").to("{a, , , } [{[], [d], a [], b []}] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A5").to("{a, , , } [{[], [d], [], b []}] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A5").to("{a, , , } [{[], [d], [], []}] [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("D1-m").to("{a, , , } {[[]], [[d]], [[]], [[]]} [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A3").to("{a, , , } {, [[d]], [[]], [[]]} [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A3").to("{a, , , } {, d, [[]], [[]]} [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A3").to("{a, , , } {, d, , [[]]} [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            st("A3").to("{a, , , } {, d, , } [[{a, b, c, d}]i []j []k] [[{a, b, c, d}]k []i []j]"),
            // [[X]i JK] = ( , , , c)
            st("D1-i").to("{a, , , } {, d, , } [{[b], a, d, [c]} []j []k] [[{a, b, c, d}]k []i []j]"),
            st("EM").alpha(J).to("{a, , , } {, d, , } [{[b], a, d, [c]} {[], [], , } []k] [[{a, b, c, d}]k []i []j]"),
            st("EM").alpha(K).to("{a, , , } {, d, , } [{[b], a, d, [c]} {[], [], , } {[], , [], }] [[{a, b, c, d}]k []i []j]"),
            st("D2").to("{a, , , } {, d, , } [{[b], a, d, [c]} {[] [], [], [], }] [[{a, b, c, d}]k []i []j]"),
            st("A7").to("{a, , , } {, d, , } [{[b], a, d, [c]} {[], [], [], }] [[{a, b, c, d}]k []i []j]"),
            st("D2").to("{a, , , } {, d, , } [{[b] [], a [], d [], [c]}] [[{a, b, c, d}]k []i []j]"),
            st("A5").to("{a, , , } {, d, , } [{[], a [], d [], [c]}] [[{a, b, c, d}]k []i []j]"),
            st("A5").to("{a, , , } {, d, , } [{[], [], d [], [c]}] [[{a, b, c, d}]k []i []j]"),
            st("A5").to("{a, , , } {, d, , } [{[], [], [], [c]}] [[{a, b, c, d}]k []i []j]"),
            st("D1-m").to("{a, , , } {, d, , } {[[]], [[]], [[]], [[c]]} [[{a, b, c, d}]k []i []j]"),
            st("A3").to("{a, , , } {, d, , } {, [[]], [[]], [[c]]} [[{a, b, c, d}]k []i []j]"),
            st("A3").to("{a, , , } {, d, , } {, , [[]], [[c]]} [[{a, b, c, d}]k []i []j]"),
            st("A3").to("{a, , , } {, d, , } {, , , [[c]]} [[{a, b, c, d}]k []i []j]"),
            st("A3").to("{a, , , } {, d, , } {, , , c} [[{a, b, c, d}]k []i []j]"),
            // [[X]k IJ] = ( , , b, )
            st("D1-k").to("{a, , , } {, d, , } {, , , c} [{[d], c, [b], a} []i []j]"),
            st("EM").alpha(I).to("{a, , , } {, d, , } {, , , c} [{[d], c, [b], a} {[], , , []} []j]"),
            st("EM").alpha(J).to("{a, , , } {, d, , } {, , , c} [{[d], c, [b], a} {[], , , []} {[], [], , }]"),
            st("D2").to("{a, , , } {, d, , } {, , , c} [{[d], c, [b], a} {[] [], [], , []}]"),
            st("A7").to("{a, , , } {, d, , } {, , , c} [{[d], c, [b], a} {[], [], , []}]"),
            st("D2").to("{a, , , } {, d, , } {, , , c} [{[d] [], c [], [b], a []}]"),
            st("A5").to("{a, , , } {, d, , } {, , , c} [{[], c [], [b], a []}]"),
            st("A5").to("{a, , , } {, d, , } {, , , c} [{[], [], [b], a []}]"),
            st("A5").to("{a, , , } {, d, , } {, , , c} [{[], [], [b], []}]"),
            st("D1-m").to("{a, , , } {, d, , } {, , , c} {[[]], [[]], [[b]], [[]]}"),
            st("A3").to("{a, , , } {, d, , } {, , , c} {, [[]], [[b]], [[]]}"),
            st("A3").to("{a, , , } {, d, , } {, , , c} {, , [[b]], [[]]}"),
            st("A3").to("{a, , , } {, d, , } {, , , c} {, , b, [[]]}"),
            st("A3").to("{a, , , } {, d, , } {, , , c} {, , b, }"),
            // Combine the four single-slot tuples.
            st("D2"),
            st("D2"),
            st("D2"),
        ],
        "{a, d, b, c}",
    );

    let exercise = build(
        "appendix-c-exercise",
        "the conjunction of Examples 1 and 2 simplified slot-wise",
        "[[{a, b, [c], d}] [{a, d, b, c}]]",
        vec![
            st("D1-m").to("[{[a], [b], [[c]], [d]} [{a, d, b, c}]]"),
            st("D1-m").to("[{[a], [b], [[c]], [d]} {[a], [d], [b], [c]}]"),
            st("D2").to("[{[a] [a], [b] [d], [[c]] [b], [d] [c]}]"),
            st("D1-m").to("{[[a] [a]], [[b] [d]], [[[c]] [b]], [[d] [c]]}"),
            st("A7").to("{[[a]], [[b] [d]], [[[c]] [b]], [[d] [c]]}"),
            st("A3").to("{a, [[b] [d]], [[[c]] [b]], [[d] [c]]}"),
            st("A3").to("{a, [[b] [d]], [c [b]], [[d] [c]]}"),
        ],
        "{a, [[b] [d]], [c [b]], [[c] [d]]}",
    );
    vec![example1, example2, exercise]
}

/// Every transcribed derivation, each of which passes the checker.
pub fn builtin_derivations() -> &'static [Derivation] {
    static ALL: OnceLock<Vec<Derivation>> = OnceLock::new();
    ALL.get_or_init(|| {
        let mut all = intro();
        all.extend(q8_relations());
        all.extend(theorem1());
        all.extend(juxtaposition_examples());
        all.extend(distribution_demonstrations());
        all.extend(appendix_c());
        all
    })
}

pub fn builtin_derivation(name: &str) -> Option<&'static Derivation> {
    builtin_derivations().iter().find(|d| d.name == name)
}
