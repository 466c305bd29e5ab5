//! Satisfiability of UF₁⁼ by bounded model search, and the brute-force
//! oracle it is checked against.

mod brute;
mod search;

use std::fmt;

pub use brute::{brute_force_sat, brute_force_sat_at, exhaustive_sat_at};
pub use search::{decide_sat_at, refute_by_types};

use crate::normal_form::NormalForm;
use crate::structures::{evaluate_sentence, Structure};

pub const DEFAULT_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "sat",
            Verdict::Unsat => "unsat",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SatResult {
    pub verdict: Verdict,
    pub witness: Option<Structure>,
    /// Largest domain size known to carry no model.
    pub explored_bound: u128,
}

impl SatResult {
    fn sat(witness: Structure) -> SatResult {
        let explored_bound = witness.size() as u128 - 1;
        SatResult {
            verdict: Verdict::Sat,
            witness: Some(witness),
            explored_bound,
        }
    }

    fn unsat(bound: u128) -> SatResult {
        SatResult {
            verdict: Verdict::Unsat,
            witness: None,
            explored_bound: bound,
        }
    }

    fn unknown(explored: usize) -> SatResult {
        SatResult {
            verdict: Verdict::Unknown,
            witness: None,
            explored_bound: explored as u128,
        }
    }

    pub fn is_conclusive(&self) -> bool {
        self.verdict != Verdict::Unknown
    }
}

/// Returned by [`paper_bound_for_size`] when |φ| > 60.
pub const BOUND_SENTINEL: u128 = u128::MAX;

/// `8·s³·2^s`, saturating for s > 60.
pub fn paper_bound_for_size(s: usize) -> u128 {
    if s > 60 {
        return BOUND_SENTINEL;
    }
    let s = s as u128;
    8 * s * s * s * (1u128 << s)
}

/// The small-model bound for `nf`, with |φ| the printed symbol count.
pub fn paper_bound(nf: &NormalForm) -> u128 {
    paper_bound_for_size(nf.size())
}

/// `2·s³·2^s`, the court-size bound; saturates like [`paper_bound_for_size`].
pub fn court_bound_for_size(s: usize) -> u128 {
    if s > 60 {
        return BOUND_SENTINEL;
    }
    let s = s as u128;
    2 * s * s * s * (1u128 << s)
}

/// Decides satisfiability of `nf` by iterative deepening over domain sizes
/// `1..=min(cap, bound)`. Any model found is re-checked by [`evaluate_sentence`].
pub fn decide_sat(nf: &NormalForm, cap: Option<usize>) -> SatResult {
    let cap = cap.unwrap_or(DEFAULT_CAP);
    let bound = paper_bound(nf);
    if refute_by_types(nf) {
        return SatResult::unsat(bound);
    }
    let top = (cap as u128).min(bound) as usize;
    for d in 1..=top {
        if let Some(m) = decide_sat_at(nf, d) {
            let ok = evaluate_sentence(&m, &nf.to_formula()).expect("well-formed witness");
            assert!(ok, "decide_sat produced a non-model");
            return SatResult::sat(m);
        }
    }
    if top as u128 >= bound {
        SatResult::unsat(bound)
    } else {
        SatResult::unknown(top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_form::to_normal_form;
    use crate::syntax::parse_formula_infer;

    fn nf(text: &str) -> NormalForm {
        to_normal_form(&parse_formula_infer(text).unwrap().0).unwrap()
    }

    #[test]
    fn bound_arithmetic() {
        assert_eq!(paper_bound_for_size(1), 16);
        assert_eq!(paper_bound_for_size(2), 256);
        assert_eq!(paper_bound_for_size(10), 8_192_000);
        assert_eq!(paper_bound_for_size(61), BOUND_SENTINEL);
        assert!(paper_bound_for_size(60) < BOUND_SENTINEL);
    }

    #[test]
    fn false_is_unsat() {
        let n = nf("false");
        let r = decide_sat(&n, Some(4));
        assert_eq!(r.verdict, Verdict::Unsat);
        assert_eq!(r.explored_bound, paper_bound(&n));
    }

    #[test]
    fn ternary_block_has_a_one_element_model() {
        let r = decide_sat(&nf("E x y z. R(x,y,z)"), Some(4));
        assert_eq!(r.verdict, Verdict::Sat);
        let w = r.witness.unwrap();
        assert_eq!(w.size(), 1);
        assert!(w.holds("R", &[0, 0, 0]));
        assert_eq!(r.explored_bound, 0);
    }

    #[test]
    fn successor_without_symmetric_edges() {
        let n = nf("A x. E y.(R(x,y) & ~x = y) & A x y.(R(x,y) -> ~R(y,x))");
        let r = decide_sat(&n, Some(4));
        assert_eq!(r.verdict, Verdict::Sat);
        assert_eq!(r.witness.unwrap().size(), 3);
    }

    #[test]
    fn contradiction_is_refuted() {
        let r = decide_sat(&nf("(E x. P(x)) & A x. ~P(x)"), Some(3));
        assert_eq!(r.verdict, Verdict::Unsat);
    }

    #[test]
    fn needs_more_elements_than_the_cap() {
        // four pairwise distinct P-elements
        let r = decide_sat(
            &nf("E x y z w. (P(x) & ~x = y & ~x = z & ~x = w & ~y = z & ~y = w & ~z = w)"),
            Some(3),
        );
        assert_eq!(r.verdict, Verdict::Unknown);
        assert_eq!(r.explored_bound, 3);
    }
}
