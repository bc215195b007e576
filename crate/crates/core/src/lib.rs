//! Quaternion-valued Laws of Form: parsing, evaluation, equivalence checking,
//! rewrite derivations, braid words and interference-pattern constructors.

pub mod braid;
pub mod constructor;
pub mod group;
pub mod kernel;
pub mod laws;
pub mod rewrite;
pub mod semantics;
pub mod textio;
pub mod verifier;

pub use braid::{braid_to_signed_perm, quaternion_braid_word, sigma_apply, BraidGen, BraidWord};
pub use constructor::{interference, mark_slot, permute_expr, InterferencePattern};
pub use kernel::{op_value, q8_mul, LoF, MarkKind, Q8Op, QValue, SignedPerm};
pub use semantics::{eval, Env, EvalError};
pub use textio::{parse, print, Expr, ParseError};
pub use verifier::{check_equiv, check_equiv_with, EquivOptions, EquivResult, Verdict};
