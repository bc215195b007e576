//! Browser bindings: evaluate or compare expressions, draw braid words and
//! build slot permutations. Every export returns a JSON string with an
//! `ok` field so the page never has to catch exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qcalc::braid::{self, BraidWord};
use qcalc::constructor;
use qcalc::kernel::op_of_value;
use qcalc::textio::{parse_item, QlfItem};
use qcalc::{check_equiv, eval, parse, print, Env};

fn failure(message: impl std::fmt::Display) -> Value {
    json!({ "ok": false, "error": message.to_string() })
}

/// An expression is evaluated under `env` (`A=MUUM,b=M`); an assertion
/// `LHS == RHS` is decided by enumeration.
pub fn run_query(text: &str, env: &str) -> Value {
    match parse_item(text) {
        Err(e) => failure(e.render(text)),
        Ok(QlfItem::Expr(e)) => match Env::parse_for(env, &e).map_err(|e| e.to_string()).and_then(|env| {
            eval(&e, &env).map_err(|e| e.to_string())
        }) {
            Ok(v) => json!({
                "ok": true,
                "kind": "value",
                "expr": print(&e),
                "value": v.to_string(),
                "operator": op_of_value(v).map(|g| g.to_string()),
            }),
            Err(m) => failure(m),
        },
        Ok(QlfItem::Assert(l, r)) => match check_equiv(&l, &r) {
            Ok(res) => json!({
                "ok": true,
                "kind": "equiv",
                "law": format!("{} == {}", print(&l), print(&r)),
                "equivalent": res.is_equivalent(),
                "assignments": res.assignments_checked,
                "counterexample": res.counterexample.map(|c| c.to_string()),
            }),
            Err(e) => failure(e),
        },
    }
}

pub fn run_braid(word: &str, n: usize) -> Value {
    match BraidWord::parse(word, n) {
        Ok(w) => {
            let p = braid::braid_to_signed_perm(&w);
            json!({ "ok": true, "word": w.to_string(), "signed_perm": p.to_string(), "diagram": braid::diagram(&w) })
        }
        Err(e) => failure(e),
    }
}

pub fn run_permute(layout: &str) -> Value {
    let p = match constructor::parse_slot_permutation(layout) {
        Ok(p) => p,
        Err(e) => return failure(e),
    };
    let e = constructor::permute_expr(&p);
    let spec = constructor::tuple_spec(&p);
    match check_equiv(&constructor::on_generic_tuple(&e), &spec) {
        Ok(r) => json!({ "ok": true, "expr": print(&e), "spec": print(&spec), "verified": r.is_equivalent() }),
        Err(err) => failure(err),
    }
}

#[wasm_bindgen]
pub fn query(text: &str, env: &str) -> String {
    run_query(text, env).to_string()
}

#[wasm_bindgen]
pub fn braid_diagram(word: &str, n: usize) -> String {
    run_braid(word, n).to_string()
}

#[wasm_bindgen]
pub fn permute(layout: &str) -> String {
    run_permute(layout).to_string()
}

/// Canonical form of an expression, or the parse error.
#[wasm_bindgen]
pub fn canonical(text: &str) -> String {
    match parse(text) {
        Ok(e) => json!({ "ok": true, "expr": print(&e) }),
        Err(e) => failure(e.render(text)),
    }
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn queries() {
        let v = run_query("[A]i", "A=UUUU");
        assert_eq!(v["value"], "MUUM");
        assert_eq!(v["operator"], "i");
        let v = run_query("[[A]i]j == [[A]j]i", "");
        assert_eq!(v["equivalent"], false);
        assert_eq!(run_query("[[A]i]j == [A]k", "")["equivalent"], true);
        assert_eq!(run_query("[a", "")["ok"], false);
        assert_eq!(run_query("A", "A=MU")["ok"], false);
    }

    #[test]
    fn braids_and_permutations() {
        let v = run_braid("s1 s3'", 4);
        assert!(v["diagram"].as_str().unwrap().ends_with("([b], a, d, [c])"));
        assert_eq!(run_braid("s9", 4)["ok"], false);
        let v = run_permute("(a, d, b, c)");
        assert_eq!(v["verified"], true);
        assert_eq!(run_permute("a b")["ok"], false);
        assert!(canonical("[[a]i  b]").contains("[[a]i b]"));
    }
}
