//! Finite relational structures, their text format, 1-types and k-tables,
//! and the model checker.

mod eval;
mod format;
mod types;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::Vocabulary;

pub use eval::{evaluate, evaluate_sentence, Assignment, Compiled, EvalError, Interpretation, PartialStructure, Tv};
pub use format::parse_structure;
pub use types::{
    evaluate_matrix_by_types, matrix_profile, onto_shapes, EqualityPattern, KTable, OneType, Shape, TypeEvalError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: element {element} out of range for domain of size {size}")]
    Bounds { line: usize, element: usize, size: usize },
    #[error("line {line}: tuple of length {found} for {name}/{arity}")]
    Arity {
        line: usize,
        name: String,
        arity: usize,
        found: usize,
    },
    #[error("line {line}: relation {name} declared twice")]
    Duplicate { line: usize, name: String },
    #[error("domain size must be at least 1")]
    EmptyDomain,
    #[error("k-table needs pairwise distinct elements, got {0:?}")]
    RepeatedElement(Vec<usize>),
}

/// Dense bit set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub(crate) fn new(len: usize) -> Bits {
        Bits {
            words: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, v: bool) {
        if v {
            self.words[i >> 6] |= 1 << (i & 63);
        } else {
            self.words[i >> 6] &= !(1 << (i & 63));
        }
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Row-major index of `tuple` in a `size`-ary cube.
#[inline]
pub(crate) fn offset(size: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &e| acc * size + e)
}

/// A finite structure with domain `{0, …, size-1}`. Relations are stored
/// densely, one bit per tuple, in the vocabulary's canonical symbol order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    vocab: Vocabulary,
    size: usize,
    arities: Vec<usize>,
    rels: Vec<Bits>,
}

impl Structure {
    /// All relations empty.
    pub fn new(vocab: Vocabulary, size: usize) -> Result<Structure, StructureError> {
        if size == 0 {
            return Err(StructureError::EmptyDomain);
        }
        let arities: Vec<usize> = vocab.iter().map(|(_, a)| a).collect();
        let rels = arities.iter().map(|&a| Bits::new(size.pow(a as u32))).collect();
        Ok(Structure {
            vocab,
            size,
            arities,
            rels,
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[allow(dead_code)]
    pub(crate) fn arity_at(&self, rel: usize) -> usize {
        self.arities[rel]
    }

    pub fn holds(&self, rel: &str, tuple: &[usize]) -> bool {
        match self.vocab.index_of(rel) {
            Some(r) => self.holds_at(r, tuple),
            None => false,
        }
    }

    #[inline]
    pub(crate) fn holds_at(&self, rel: usize, tuple: &[usize]) -> bool {
        debug_assert_eq!(tuple.len(), self.arities[rel]);
        self.rels[rel].get(offset(self.size, tuple))
    }

    #[inline]
    pub(crate) fn holds_offset(&self, rel: usize, off: usize) -> bool {
        self.rels[rel].get(off)
    }

    /// Sets one tuple. Panics on an unknown symbol or out-of-range tuple.
    pub fn set(&mut self, rel: &str, tuple: &[usize], value: bool) {
        let r = self
            .vocab
            .index_of(rel)
            .unwrap_or_else(|| panic!("unknown relation {rel}"));
        self.set_at(r, tuple, value);
    }

    pub(crate) fn set_at(&mut self, rel: usize, tuple: &[usize], value: bool) {
        assert_eq!(tuple.len(), self.arities[rel], "arity mismatch");
        assert!(tuple.iter().all(|&e| e < self.size), "element out of range");
        self.rels[rel].set(offset(self.size, tuple), value);
    }

    /// Tuples of `rel` in lexicographic order.
    pub fn tuples(&self, rel: &str) -> Vec<Vec<usize>> {
        let Some(r) = self.vocab.index_of(rel) else {
            return Vec::new();
        };
        let k = self.arities[r];
        let total = self.size.pow(k as u32);
        let mut out = Vec::with_capacity(self.rels[r].count());
        for off in 0..total {
            if self.rels[r].get(off) {
                let mut t = vec![0; k];
                let mut rest = off;
                for slot in t.iter_mut().rev() {
                    *slot = rest % self.size;
                    rest /= self.size;
                }
                out.push(t);
            }
        }
        out
    }

    pub fn tuple_count(&self, rel: &str) -> usize {
        self.vocab.index_of(rel).map_or(0, |r| self.rels[r].count())
    }

    /// Substructure induced by `elems`, renumbered in the given order.
    pub fn induced(&self, elems: &[usize]) -> Structure {
        let mut out = Structure::new(self.vocab.clone(), elems.len().max(1)).expect("non-empty");
        for (r, &k) in self.arities.iter().enumerate() {
            for_each_tuple(elems.len(), k, |t| {
                let src: Vec<usize> = t.iter().map(|&i| elems[i]).collect();
                if self.holds_at(r, &src) {
                    out.set_at(r, t, true);
                }
            });
        }
        out
    }

    /// Keeps only the symbols accepted by `keep`.
    pub fn reduct(&self, keep: impl Fn(&str) -> bool) -> Structure {
        let vocab = self.vocab.restrict(&keep);
        let mut out = Structure::new(vocab, self.size).expect("non-empty");
        for (name, _) in self.vocab.iter() {
            if keep(name) {
                let src = self.vocab.index_of(name).unwrap();
                let dst = out.vocab.index_of(name).unwrap();
                out.rels[dst] = self.rels[src].clone();
            }
        }
        out
    }

    /// The same structure over exactly `vocab`, in its symbol order. `None`
    /// if some symbol of `vocab` is missing or has another arity.
    pub fn over(&self, vocab: &Vocabulary) -> Option<Structure> {
        let mut out = Structure::new(vocab.clone(), self.size).expect("non-empty");
        for (dst, (name, k)) in vocab.iter().enumerate() {
            if self.vocab.arity(name) != Some(k) {
                return None;
            }
            let src = self.vocab.index_of(name).unwrap();
            out.rels[dst] = self.rels[src].clone();
        }
        Some(out)
    }

    /// Adds an empty relation for every symbol of `extra` not yet present.
    pub fn expand(&self, extra: &Vocabulary) -> Result<Structure, crate::syntax::VocabularyError> {
        let mut vocab = self.vocab.clone();
        vocab.merge(extra)?;
        let mut out = Structure::new(vocab, self.size).expect("non-empty");
        for (name, _) in self.vocab.iter() {
            let src = self.vocab.index_of(name).unwrap();
            let dst = out.vocab.index_of(name).unwrap();
            out.rels[dst] = self.rels[src].clone();
        }
        Ok(out)
    }

    /// Elements whose 1-type contains the positive literal of unary `rel`.
    pub fn unary_set(&self, rel: &str) -> BTreeSet<usize> {
        (0..self.size).filter(|&a| self.holds(rel, &[a])).collect()
    }
}

/// Calls `f` on every tuple in `{0..n}^k`, lexicographically.
pub fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k == 0 {
        f(&[]);
        return;
    }
    if n == 0 {
        return;
    }
    let mut t = vec![0; k];
    loop {
        f(&t);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain = {}", self.size)?;
        for (name, arity) in self.vocab.iter() {
            write!(f, "rel {name}/{arity} = {{")?;
            for t in self.tuples(name) {
                let parts: Vec<String> = t.iter().map(|e| e.to_string()).collect();
                write!(f, " ({})", parts.join(" "))?;
            }
            writeln!(f, " }}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_enumeration_is_lexicographic() {
        let mut seen = Vec::new();
        for_each_tuple(2, 2, |t| seen.push(t.to_vec()));
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let mut count = 0;
        for_each_tuple(3, 0, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn set_and_read_back() {
        let v = Vocabulary::from_pairs([("R", 3), ("P", 1)]).unwrap();
        let mut s = Structure::new(v, 3).unwrap();
        s.set("R", &[2, 0, 1], true);
        assert!(s.holds("R", &[2, 0, 1]));
        assert!(!s.holds("R", &[1, 0, 2]));
        assert_eq!(s.tuples("R"), vec![vec![2, 0, 1]]);
        let sub = s.induced(&[2, 0, 1]);
        assert_eq!(sub.tuples("R"), vec![vec![0, 1, 2]]);
    }
}
