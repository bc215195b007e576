//! Linear concrete syntax for Q expressions.
//!
//! ```text
//! [ body ]          plain mark
//! [ body ]i         imaginary mark (also j, k); the suffix must touch the bracket
//! [A]B              any other name touching a bracket is juxtaposed
//! [ body ]i^3       operator power
//! {s1, s2, s3, s4}  4-tuple literal, slots are plain LoF expressions
//! X^(expr)          exponent application
//! (a b)^(expr)      parenthesised base
//! a b c             juxtaposition
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::MarkKind;

/// Byte offsets into the parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> SourceSpan {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }

    fn shifted(self, by: usize) -> SourceSpan {
        SourceSpan { start: self.start + by, end: self.end + by }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at {span}")]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

impl ParseError {
    fn new(message: impl Into<String>, start: usize, end: usize) -> ParseError {
        ParseError { message: message.into(), span: SourceSpan::new(start, end) }
    }

    /// Render the error with a caret line under the offending text.
    pub fn render(&self, source: &str) -> String {
        let line_start = source[..self.span.start.min(source.len())].rfind('\n').map_or(0, |i| i + 1);
        let line_end = source[line_start..].find('\n').map_or(source.len(), |i| line_start + i);
        let line = &source[line_start..line_end];
        let col = source[line_start..self.span.start.min(source.len())].chars().count();
        let width = source[self.span.start.min(line_end)..self.span.end.min(line_end).max(self.span.start.min(line_end))]
            .chars()
            .count()
            .max(1);
        format!("error: {}\n  {}\n  {}{}", self.message, line, " ".repeat(col), "^".repeat(width))
    }
}

/// Abstract syntax of a Q expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Void,
    Var(String),
    Mark(MarkKind, Box<Expr>),
    /// Flattened and order-preserving, at least two children, none void.
    Juxt(Vec<Expr>),
    Tuple(Box<[Expr; 4]>),
    Power(MarkKind, Box<Expr>, u32),
    ExpApply(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn mark(kind: MarkKind, body: Expr) -> Expr {
        Expr::Mark(kind, Box::new(body))
    }

    pub fn cross(body: Expr) -> Expr {
        Expr::mark(MarkKind::Plain, body)
    }

    pub fn power(kind: MarkKind, body: Expr, exponent: u32) -> Expr {
        Expr::Power(kind, Box::new(body), exponent)
    }

    pub fn tuple(slots: [Expr; 4]) -> Expr {
        Expr::Tuple(Box::new(slots))
    }

    pub fn exp_apply(base: Expr, exponent: Expr) -> Expr {
        Expr::ExpApply(Box::new(base), Box::new(exponent))
    }

    /// Juxtaposition with flattening; void children vanish.
    pub fn juxt(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut out = Vec::new();
        for item in items {
            match item {
                Expr::Void => {}
                Expr::Juxt(children) => out.extend(children),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Expr::Void,
            1 => out.pop().unwrap(),
            _ => Expr::Juxt(out),
        }
    }

    /// Items of a juxtaposition; a single item for anything else, none for void.
    pub fn juxt_items(&self) -> Vec<Expr> {
        match self {
            Expr::Void => Vec::new(),
            Expr::Juxt(children) => children.clone(),
            other => vec![other.clone()],
        }
    }

    pub fn is_void(&self) -> bool {
        matches!(self, Expr::Void)
    }

    /// True for expressions built only from plain marks, variables, void and
    /// juxtaposition: the allowed content of a tuple slot.
    pub fn is_pure_lof(&self) -> bool {
        match self {
            Expr::Void | Expr::Var(_) => true,
            Expr::Mark(MarkKind::Plain, body) => body.is_pure_lof(),
            Expr::Juxt(children) => children.iter().all(Expr::is_pure_lof),
            _ => false,
        }
    }

    /// Rebuild with juxtapositions flattened and voids removed from them.
    pub fn normalized(&self) -> Expr {
        match self {
            Expr::Void | Expr::Var(_) => self.clone(),
            Expr::Mark(k, b) => Expr::mark(*k, b.normalized()),
            Expr::Power(k, b, n) => Expr::power(*k, b.normalized(), *n),
            Expr::Juxt(children) => Expr::juxt(children.iter().map(Expr::normalized)),
            Expr::Tuple(slots) => Expr::tuple(slots.clone().map(|s| s.normalized())),
            Expr::ExpApply(b, e) => Expr::exp_apply(b.normalized(), e.normalized()),
        }
    }

    /// Canonical representative modulo associativity and commutativity of
    /// juxtaposition.
    pub fn ac_canonical(&self) -> Expr {
        match self {
            Expr::Void | Expr::Var(_) => self.clone(),
            Expr::Mark(k, b) => Expr::mark(*k, b.ac_canonical()),
            Expr::Power(k, b, n) => Expr::power(*k, b.ac_canonical(), *n),
            Expr::Tuple(slots) => Expr::tuple(slots.clone().map(|s| s.ac_canonical())),
            Expr::ExpApply(b, e) => Expr::exp_apply(b.ac_canonical(), e.ac_canonical()),
            Expr::Juxt(children) => {
                let mut items = Expr::juxt(children.iter().map(Expr::ac_canonical)).juxt_items();
                items.sort_by_cached_key(print);
                Expr::juxt(items)
            }
        }
    }

    pub fn ac_eq(&self, other: &Expr) -> bool {
        self.ac_canonical() == other.ac_canonical()
    }

    /// Replace variables by expressions; the result is normalized.
    pub fn substitute(&self, f: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        match self {
            Expr::Void => Expr::Void,
            Expr::Var(name) => f(name).unwrap_or_else(|| self.clone()),
            Expr::Mark(k, b) => Expr::mark(*k, b.substitute(f)),
            Expr::Power(k, b, n) => Expr::power(*k, b.substitute(f), *n),
            Expr::Juxt(children) => Expr::juxt(children.iter().map(|c| c.substitute(f))),
            Expr::Tuple(slots) => Expr::tuple(slots.clone().map(|s| s.substitute(f))),
            Expr::ExpApply(b, e) => Expr::exp_apply(b.substitute(f), e.substitute(f)),
        }
    }

    /// Variable names in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Void => {}
            Expr::Var(name) => {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
            Expr::Mark(_, b) | Expr::Power(_, b, _) => b.collect_vars(out),
            Expr::Juxt(children) => children.iter().for_each(|c| c.collect_vars(out)),
            Expr::Tuple(slots) => slots.iter().for_each(|c| c.collect_vars(out)),
            Expr::ExpApply(b, e) => {
                b.collect_vars(out);
                e.collect_vars(out);
            }
        }
    }

    /// Direct children in storage order.
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Void | Expr::Var(_) => Vec::new(),
            Expr::Mark(_, b) | Expr::Power(_, b, _) => vec![b],
            Expr::Juxt(children) => children.iter().collect(),
            Expr::Tuple(slots) => slots.iter().collect(),
            Expr::ExpApply(b, e) => vec![b, e],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Void => Ok(()),
            Expr::Var(name) => f.write_str(name),
            Expr::Mark(k, b) => write!(f, "[{b}]{}", k.suffix()),
            Expr::Power(k, b, n) => write!(f, "[{b}]{}^{n}", k.suffix()),
            Expr::Juxt(children) => {
                for (n, c) in children.iter().enumerate() {
                    if n > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            Expr::Tuple(slots) => {
                write!(f, "{{{}, {}, {}, {}}}", slots[0], slots[1], slots[2], slots[3])
            }
            Expr::ExpApply(b, e) => match **b {
                Expr::Void | Expr::Juxt(_) => write!(f, "({b})^({e})"),
                _ => write!(f, "{b}^({e})"),
            },
        }
    }
}

/// Canonical text of an expression.
pub fn print(e: &Expr) -> String {
    e.to_string()
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text, bytes: text.as_bytes(), pos: 0 };
    let e = p.juxtaposition()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        let c = p.peek_char().unwrap();
        let msg = match c {
            ']' => "unbalanced ']'".to_string(),
            '}' => "unbalanced '}'".to_string(),
            ')' => "unbalanced ')'".to_string(),
            ',' => "',' outside a tuple".to_string(),
            _ => format!("unexpected character {c:?}"),
        };
        return Err(ParseError::new(msg, p.pos, p.pos + c.len_utf8()));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic()
}

fn is_ident_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn juxtaposition(&mut self) -> Result<Expr, ParseError> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'[' | b'{' | b'(') => items.push(self.item()?),
                Some(b) if is_ident_start(b) => items.push(self.item()?),
                _ => break,
            }
        }
        Ok(Expr::juxt(items))
    }

    fn item(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let (mut e, mut is_mark) = match self.peek() {
            Some(b'[') => (self.mark()?, true),
            Some(b'{') => (self.tuple()?, false),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.juxtaposition()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.unclosed("(", start));
                }
                self.pos += 1;
                // Grouping only; without `^(...)` the content juxtaposes in place.
                (inner, false)
            }
            _ => (self.ident(), false),
        };
        while self.peek() == Some(b'^') {
            let caret = self.pos;
            self.pos += 1;
            match self.peek() {
                Some(b'(') => {
                    let open = self.pos;
                    self.pos += 1;
                    let exponent = self.juxtaposition()?;
                    self.skip_ws();
                    if self.peek() != Some(b')') {
                        return Err(self.unclosed("(", open));
                    }
                    self.pos += 1;
                    e = Expr::exp_apply(e, exponent);
                    is_mark = false;
                }
                Some(b) if b.is_ascii_digit() || b == b'-' => {
                    let num_start = self.pos;
                    if b == b'-' {
                        self.pos += 1;
                    }
                    while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    let text = &self.src[num_start..self.pos];
                    if !is_mark {
                        return Err(ParseError::new(
                            "operator power must follow a mark",
                            caret,
                            self.pos,
                        ));
                    }
                    let n: i64 = text
                        .parse()
                        .map_err(|_| ParseError::new("malformed exponent", num_start, self.pos))?;
                    if n <= 0 {
                        return Err(ParseError::new("exponent must be positive", num_start, self.pos));
                    }
                    let n = u32::try_from(n)
                        .map_err(|_| ParseError::new("exponent too large", num_start, self.pos))?;
                    e = match e {
                        Expr::Mark(k, b) => Expr::Power(k, b, n),
                        _ => unreachable!(),
                    };
                    is_mark = false;
                }
                _ => {
                    return Err(ParseError::new(
                        "expected exponent digits or '(' after '^'",
                        caret,
                        caret + 1,
                    ))
                }
            }
        }
        Ok(e)
    }

    fn ident(&mut self) -> Expr {
        let start = self.pos;
        while self.peek().is_some_and(is_ident_char) {
            self.pos += 1;
        }
        Expr::Var(self.src[start..self.pos].to_string())
    }

    fn unclosed(&self, what: &str, start: usize) -> ParseError {
        ParseError::new(format!("unbalanced '{what}'"), start, self.pos.max(start + 1).min(self.src.len().max(start + 1)))
    }

    fn mark(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let body = self.juxtaposition()?;
        self.skip_ws();
        if self.peek() != Some(b']') {
            return Err(self.unclosed("[", start));
        }
        self.pos += 1;
        let kind = match self.peek() {
            Some(c @ (b'i' | b'j' | b'k'))
                if !self.bytes.get(self.pos + 1).copied().is_some_and(is_ident_char) =>
            {
                self.pos += 1;
                match c {
                    b'i' => MarkKind::I,
                    b'j' => MarkKind::J,
                    _ => MarkKind::K,
                }
            }
            _ => MarkKind::Plain,
        };
        Ok(Expr::mark(kind, body))
    }

    fn tuple(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let mut slots = Vec::new();
        loop {
            self.skip_ws();
            let slot_start = self.pos;
            let slot = self.juxtaposition()?;
            if !slot.is_pure_lof() {
                return Err(ParseError::new(
                    "tuple slots may contain only plain marks, variables and juxtaposition",
                    slot_start,
                    self.pos,
                ));
            }
            slots.push(slot);
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.unclosed("{", start)),
            }
        }
        if slots.len() != 4 {
            return Err(ParseError::new(
                format!("tuple must have 4 slots, found {}", slots.len()),
                start,
                self.pos,
            ));
        }
        let slots: [Expr; 4] = slots.try_into().expect("length checked");
        Ok(Expr::tuple(slots))
    }
}

/// One meaningful line of a `.qlf` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QlfItem {
    Expr(Expr),
    Assert(Expr, Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QlfLine {
    /// One-based line number.
    pub line: usize,
    pub text: String,
    pub item: QlfItem,
}

impl fmt::Display for QlfItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QlfItem::Expr(e) => write!(f, "{e}"),
            QlfItem::Assert(l, r) => write!(f, "{l} == {r}"),
        }
    }
}

/// Parse a single `LHS == RHS` assertion or a lone expression.
pub fn parse_item(text: &str) -> Result<QlfItem, ParseError> {
    match text.find("==") {
        Some(at) => {
            let lhs = parse(&text[..at])?;
            let rhs = parse(&text[at + 2..]).map_err(|e| ParseError { span: e.span.shifted(at + 2), ..e })?;
            Ok(QlfItem::Assert(lhs, rhs))
        }
        None => Ok(QlfItem::Expr(parse(text)?)),
    }
}

/// Parse a `.qlf` document: one expression or assertion per line, `#` comments.
/// Error spans are offsets into the whole document.
pub fn parse_qlf(source: &str) -> Result<Vec<QlfLine>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for (n, raw) in source.split('\n').enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if !content.trim().is_empty() {
            let item = parse_item(content).map_err(|e| ParseError { span: e.span.shifted(offset), ..e })?;
            out.push(QlfLine { line: n + 1, text: content.trim().to_string(), item });
        }
        offset += raw.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(name: &str) -> Expr {
        Expr::var(name)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse("[[x]]").unwrap(), Expr::cross(Expr::cross(v("x"))));
        assert_eq!(
            parse("[[X]i]j").unwrap(),
            Expr::mark(MarkKind::J, Expr::mark(MarkKind::I, v("X")))
        );
        assert_eq!(parse("{a, b, c, d}").unwrap(), Expr::tuple([v("a"), v("b"), v("c"), v("d")]));
        assert_eq!(parse("[X]i^3").unwrap(), Expr::power(MarkKind::I, v("X"), 3));
        assert_eq!(parse("").unwrap(), Expr::Void);
        assert_eq!(parse("  a   b ").unwrap(), Expr::Juxt(vec![v("a"), v("b")]));
        assert_eq!(
            parse("{a,b,c,d}^([]i)").unwrap(),
            Expr::exp_apply(
                Expr::tuple([v("a"), v("b"), v("c"), v("d")]),
                Expr::mark(MarkKind::I, Expr::Void)
            )
        );
    }

    #[test]
    fn print_examples() {
        assert_eq!(print(&Expr::mark(MarkKind::I, Expr::Void)), "[]i");
        let t = Expr::tuple([v("a"), v("b"), v("c"), v("d")]);
        assert_eq!(print(&Expr::mark(MarkKind::K, t)), "[{a, b, c, d}]k");
        assert_eq!(print(&parse("{[],,,[]}").unwrap()), "{[], , , []}");
        assert_eq!(print(&parse("(a b)^([]i)").unwrap()), "(a b)^([]i)");
    }

    #[test]
    fn juxtaposition_flattens() {
        assert_eq!(parse("a (b c) d").unwrap(), Expr::Juxt(vec![v("a"), v("b"), v("c"), v("d")]));
        assert_eq!(parse("[] i").unwrap(), Expr::Juxt(vec![Expr::cross(Expr::Void), v("i")]));
        assert_eq!(parse("[]ix").unwrap(), Expr::Juxt(vec![Expr::cross(Expr::Void), v("ix")]));
        assert_eq!(parse("[[A]A]").unwrap(), parse("[[A] A]").unwrap());
    }

    #[test]
    fn syntax_errors_carry_spans() {
        let cases = [
            ("[a", "unbalanced '['"),
            ("a]", "unbalanced ']'"),
            ("{a, b, c}", "tuple must have 4 slots"),
            ("{a, b, c, d, e}", "tuple must have 4 slots"),
            ("[a]i^0", "exponent must be positive"),
            ("[a]^-2", "exponent must be positive"),
            ("a^3", "operator power must follow a mark"),
            ("{[a]i, b, c, d}", "tuple slots may contain only"),
            ("a, b", "',' outside a tuple"),
            ("a^", "expected exponent"),
            ("a ^2", "unexpected character"),
        ];
        for (text, expected) in cases {
            let err = parse(text).unwrap_err();
            assert!(err.message.contains(expected), "{text}: {}", err.message);
            assert!(err.span.start <= err.span.end && err.span.end <= text.len().max(1), "{text}: {:?}", err.span);
        }
    }

    #[test]
    fn qlf_document() {
        let doc = "# laws\n[[A]] == A   # reflexion\n\n[]i []j\n";
        let lines = parse_qlf(doc).unwrap();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].line, 2);
        assert!(matches!(lines[0].item, QlfItem::Assert(_, Expr::Var(_))));
        assert_eq!(lines[1].item.to_string(), "[]i []j");
        let err = parse_qlf("a\n[b == c\n").unwrap_err();
        assert_eq!(&"a\n[b == c\n"[err.span.start..err.span.start + 1], "[");
        let rhs_err = parse_qlf("a == b]").unwrap_err();
        assert_eq!(rhs_err.span.start, 6);
    }

    #[test]
    fn ac_equality() {
        let a = parse("[b a]i c").unwrap();
        let b = parse("c [a b]i").unwrap();
        assert!(a.ac_eq(&b));
        assert!(!a.ac_eq(&parse("c [a b]j").unwrap()));
    }

    pub(crate) fn arb_lof() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![Just(Expr::Void), "[a-e]".prop_map(Expr::Var)];
        leaf.prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Expr::cross),
                prop::collection::vec(inner, 2..4).prop_map(Expr::juxt),
            ]
        })
    }

    pub(crate) fn arb_expr() -> impl Strategy<Value = Expr> {
        let kind = prop_oneof![
            Just(MarkKind::Plain),
            Just(MarkKind::I),
            Just(MarkKind::J),
            Just(MarkKind::K)
        ];
        let leaf = prop_oneof![
            Just(Expr::Void),
            "[A-Z][a-z0-9_]{0,2}".prop_map(Expr::Var),
            prop::array::uniform4(arb_lof()).prop_map(Expr::tuple),
        ];
        leaf.prop_recursive(4, 24, 4, move |inner| {
            prop_oneof![
                (kind.clone(), inner.clone()).prop_map(|(k, b)| Expr::mark(k, b)),
                (kind.clone(), inner.clone(), 1u32..6).prop_map(|(k, b, n)| Expr::power(k, b, n)),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::juxt),
                (inner.clone(), inner).prop_map(|(b, e)| Expr::exp_apply(b, e)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn parse_print_round_trip(e in arb_expr()) {
            let text = print(&e);
            let back = parse(&text).map_err(|err| TestCaseError::fail(format!("{text:?}: {err}")))?;
            prop_assert_eq!(back, e);
        }

        #[test]
        fn print_parse_idempotent(e in arb_expr()) {
            let once = print(&parse(&print(&e)).unwrap());
            let twice = print(&parse(&once).unwrap());
            prop_assert_eq!(once, twice);
        }
    }
}
