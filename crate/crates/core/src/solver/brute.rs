use super::{paper_bound, refute_by_types, SatResult};
use crate::normal_form::to_normal_form;
use std::cell::Cell;

use crate::structures::{for_each_tuple, Compiled, Interpretation, OneType, PartialStructure, Structure, Tv};
use crate::syntax::{validate_fragment, Formula, Vocabulary};

// Records the first undecided atom the evaluator looked at.
struct Probe<'a> {
    p: &'a PartialStructure,
    first: Cell<Option<(usize, usize)>>,
}

impl Interpretation for Probe<'_> {
    fn size(&self) -> usize {
        self.p.size()
    }

    fn atom(&self, rel: usize, off: usize) -> Tv {
        let v = self.p.atom(rel, off);
        if v == Tv::Unknown && self.first.get().is_none() {
            self.first.set(Some((rel, off)));
        }
        v
    }
}

struct Dfs<'a> {
    phi: &'a Compiled,
    size: usize,
    types: Vec<OneType>,
    chosen: Vec<usize>,
    p: PartialStructure,
}

impl Dfs<'_> {
    // Truth value so far and an undecided atom it depends on.
    fn status(&self) -> (Tv, Option<(usize, usize)>) {
        let probe = Probe {
            p: &self.p,
            first: Cell::new(None),
        };
        let v = self.phi.eval(&probe, &[]);
        (v, probe.first.get())
    }

    // 1-types of all elements first, so purely unary contradictions are
    // caught before any table is touched.
    fn element(&mut self, e: usize) -> Option<Structure> {
        if e == self.size {
            return self.branch();
        }
        if self.status().0 == Tv::False {
            return None;
        }
        let lo = if e == 0 { 0 } else { self.chosen[e - 1] };
        for ti in lo..self.types.len() {
            let t = self.types[ti].clone();
            for (r, &b) in t.bits.iter().enumerate() {
                let k = self.p.arity_at(r);
                self.p.set(r, &vec![e; k], b);
            }
            self.chosen[e] = ti;
            if let Some(m) = self.element(e + 1) {
                return Some(m);
            }
        }
        for r in 0..self.types[0].bits.len() {
            let k = self.p.arity_at(r);
            self.p.unset(r, &vec![e; k]);
        }
        None
    }

    // Only atoms the evaluation actually consulted are branched on; the
    // rest are left false once the sentence is decided.
    fn branch(&mut self) -> Option<Structure> {
        let (rel, off) = match self.status() {
            (Tv::False, _) => return None,
            (Tv::True, _) => {
                let m = self.p.to_structure();
                assert!(self.phi.holds(&m, &[]), "definite truth must survive completion");
                return Some(m);
            }
            (Tv::Unknown, cell) => cell.expect("an undecided result reads an undecided atom"),
        };
        for v in [false, true] {
            self.p.set_offset(rel, off, v);
            if let Some(m) = self.branch() {
                return Some(m);
            }
        }
        self.p.unset_offset(rel, off);
        None
    }
}

/// Looks for a model of the sentence `phi` with exactly `size` elements by
/// depth-first search over atoms with three-valued pruning. Elements carry
/// 1-types in non-decreasing canonical order.
pub fn brute_force_sat_at(phi: &Formula, size: usize) -> Option<Structure> {
    let vocab = phi.vocabulary().expect("consistent vocabulary");
    brute_force_sat_at_over(phi, &vocab, size)
}

pub(crate) fn brute_force_sat_at_over(phi: &Formula, vocab: &Vocabulary, size: usize) -> Option<Structure> {
    assert!(phi.free_vars().is_empty(), "brute force needs a sentence");
    if size == 0 {
        return None;
    }
    let compiled = Compiled::sentence(phi, vocab).expect("formula fits its vocabulary");
    let mut dfs = Dfs {
        phi: &compiled,
        size,
        types: OneType::all(vocab),
        chosen: vec![0; size],
        p: PartialStructure::new(vocab.clone(), size),
    };
    dfs.element(0)
}

/// Searches sizes `1..=max_size`. Unsat is reported only when the
/// small-model bound is covered or the formula is refuted for every size by
/// 1-type elimination on its normal form; otherwise the verdict is unknown.
pub fn brute_force_sat(phi: &Formula, max_size: usize) -> SatResult {
    for d in 1..=max_size {
        if let Some(m) = brute_force_sat_at(phi, d) {
            return SatResult::sat(m);
        }
    }
    let in_fragment = !phi.uses_counting() && validate_fragment(phi, false).member;
    if in_fragment {
        if let Ok(nf) = to_normal_form(phi) {
            let bound = paper_bound(&nf);
            if max_size as u128 >= bound || refute_by_types(&nf) {
                return SatResult::unsat(bound);
            }
        }
    }
    SatResult::unknown(max_size)
}

/// Reference enumerator: tries every structure of the given size, without
/// pruning or symmetry breaking. Only usable for a handful of atoms.
pub fn exhaustive_sat_at(phi: &Formula, size: usize) -> Option<Structure> {
    let vocab = phi.vocabulary().expect("consistent vocabulary");
    let compiled = Compiled::sentence(phi, &vocab).expect("compiles");
    let mut atoms = Vec::new();
    for (r, (_, k)) in vocab.iter().enumerate() {
        for_each_tuple(size, k, |t| atoms.push((r, t.to_vec())));
    }
    assert!(atoms.len() <= 24, "too many atoms for exhaustive enumeration");
    let mut p = PartialStructure::new(vocab, size);
    for mask in 0u64..1 << atoms.len() {
        for (i, (r, t)) in atoms.iter().enumerate() {
            p.set(*r, t, mask >> i & 1 == 1);
        }
        let s = p.to_structure();
        if compiled.holds(&s, &[]) {
            return Some(s);
        }
    }
    None
}
