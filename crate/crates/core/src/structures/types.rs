use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{for_each_tuple, Structure, StructureError};
use crate::syntax::{live_variables, Formula, UniformityError, Var, Vocabulary};

/// One atom pattern: a symbol index and an argument tuple over the
/// variables `0..k`.
pub type Shape = (usize, Vec<usize>);

/// Atom shapes over `v₁…v_k` that use all k variables, by symbol and then
/// lexicographically. For k = 1 there is one shape per symbol.
pub fn onto_shapes(vocab: &Vocabulary, k: usize) -> Vec<Shape> {
    let mut out = Vec::new();
    for (r, (_, arity)) in vocab.iter().enumerate() {
        if arity < k {
            continue;
        }
        for_each_tuple(k, arity, |t| {
            let mut used = vec![false; k];
            for &i in t {
                used[i] = true;
            }
            if used.iter().all(|&u| u) {
                out.push((r, t.to_vec()));
            }
        });
    }
    out
}

fn literal(vocab: &Vocabulary, shape: &Shape, positive: bool, names: &[String]) -> String {
    let (r, t) = shape;
    let name = vocab.iter().nth(*r).map(|(n, _)| n).unwrap_or("?");
    let args: Vec<&str> = t.iter().map(|&i| names[i].as_str()).collect();
    format!("{}{}({})", if positive { "" } else { "~" }, name, args.join(","))
}

/// A k-table: one polarity per onto shape (see [`onto_shapes`]).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct KTable {
    pub k: usize,
    pub bits: Vec<bool>,
}

/// A 1-type: one polarity per symbol, read on the diagonal tuple.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OneType {
    pub bits: Vec<bool>,
}

impl From<OneType> for KTable {
    fn from(t: OneType) -> KTable {
        KTable { k: 1, bits: t.bits }
    }
}

impl OneType {
    /// All-negative type.
    pub fn empty(vocab: &Vocabulary) -> OneType {
        OneType {
            bits: vec![false; vocab.len()],
        }
    }

    /// Every 1-type over `vocab` in canonical order (binary counting with
    /// the first symbol as the most significant bit).
    pub fn all(vocab: &Vocabulary) -> Vec<OneType> {
        let n = vocab.len();
        assert!(n < 24, "too many symbols to enumerate 1-types");
        (0..1usize << n)
            .map(|m| OneType {
                bits: (0..n).map(|i| m >> (n - 1 - i) & 1 == 1).collect(),
            })
            .collect()
    }

    pub fn literals(&self, vocab: &Vocabulary) -> Vec<String> {
        let names = ["v1".to_string()];
        onto_shapes(vocab, 1)
            .iter()
            .zip(&self.bits)
            .map(|(s, &b)| literal(vocab, s, b, &names))
            .collect()
    }

    /// The conjunction of the type's literals with `v₁` replaced by `x`.
    pub fn to_formula(&self, vocab: &Vocabulary, x: &Var) -> Formula {
        KTable::from(self.clone()).to_formula(vocab, std::slice::from_ref(x))
    }
}

impl KTable {
    pub fn literals(&self, vocab: &Vocabulary) -> Vec<String> {
        let names: Vec<String> = (1..=self.k).map(|i| format!("v{i}")).collect();
        onto_shapes(vocab, self.k)
            .iter()
            .zip(&self.bits)
            .map(|(s, &b)| literal(vocab, s, b, &names))
            .collect()
    }

    pub fn to_formula(&self, vocab: &Vocabulary, vars: &[Var]) -> Formula {
        assert_eq!(vars.len(), self.k);
        let names: Vec<&str> = vocab.iter().map(|(n, _)| n).collect();
        Formula::and_all(onto_shapes(vocab, self.k).iter().zip(&self.bits).map(|((r, t), &b)| {
            let a = Formula::atom_vars(names[*r], t.iter().map(|&i| vars[i].clone()).collect());
            if b {
                a
            } else {
                Formula::not(a)
            }
        }))
    }
}

impl fmt::Display for OneType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Structure {
    /// The 1-type realized by `a`.
    pub fn one_type(&self, a: usize) -> OneType {
        OneType {
            bits: self
                .arities
                .iter()
                .enumerate()
                .map(|(r, &k)| self.holds_at(r, &vec![a; k]))
                .collect(),
        }
    }

    /// The table realized by pairwise distinct `elems`.
    pub fn k_table(&self, elems: &[usize]) -> Result<KTable, StructureError> {
        for (i, a) in elems.iter().enumerate() {
            if elems[..i].contains(a) {
                return Err(StructureError::RepeatedElement(elems.to_vec()));
            }
        }
        let bits = onto_shapes(&self.vocab, elems.len())
            .iter()
            .map(|(r, t)| {
                let tuple: Vec<usize> = t.iter().map(|&i| elems[i]).collect();
                self.holds_at(*r, &tuple)
            })
            .collect();
        Ok(KTable { k: elems.len(), bits })
    }

    pub fn set_one_type(&mut self, a: usize, t: &OneType) {
        for r in 0..self.arities.len() {
            let k = self.arities[r];
            self.set_at(r, &vec![a; k], t.bits[r]);
        }
    }

    /// Writes `table` onto pairwise distinct `elems`.
    pub fn set_k_table(&mut self, elems: &[usize], table: &KTable) {
        assert_eq!(elems.len(), table.k);
        for ((r, t), &b) in onto_shapes(&self.vocab, table.k).iter().zip(&table.bits) {
            let tuple: Vec<usize> = t.iter().map(|&i| elems[i]).collect();
            self.set_at(*r, &tuple, b);
        }
    }
}

/// Partition of argument positions, as class numbers assigned in order of
/// first occurrence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EqualityPattern(pub Vec<usize>);

impl EqualityPattern {
    pub fn of_tuple(tuple: &[usize]) -> EqualityPattern {
        let mut seen: Vec<usize> = Vec::new();
        EqualityPattern(
            tuple
                .iter()
                .map(|e| match seen.iter().position(|s| s == e) {
                    Some(i) => i,
                    None => {
                        seen.push(*e);
                        seen.len() - 1
                    }
                })
                .collect(),
        )
    }

    pub fn classes(&self) -> usize {
        self.0.iter().max().map_or(0, |m| m + 1)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every canonical pattern on `n` positions (restricted growth strings).
    pub fn all(n: usize) -> Vec<EqualityPattern> {
        fn go(n: usize, cur: &mut Vec<usize>, out: &mut Vec<EqualityPattern>) {
            if cur.len() == n {
                out.push(EqualityPattern(cur.clone()));
                return;
            }
            let next = cur.iter().max().map_or(0, |m| m + 1);
            for c in 0..=next {
                cur.push(c);
                go(n, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, &mut Vec::new(), &mut out);
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeEvalError {
    #[error("{0} variables but {1} 1-types and {2} pattern positions")]
    Lengths(usize, usize, usize),
    #[error("positions {0} and {1} are equated but carry different 1-types")]
    TypeClash(usize, usize),
    #[error("live part has {expected} distinct elements but the table has k = {found}")]
    TableSize { expected: usize, found: usize },
    #[error("live part has {0} distinct elements and needs a table")]
    MissingTable(usize),
    #[error("variable `{0}` is not one of the matrix positions")]
    UnknownVariable(Var),
    #[error("matrix contains a quantifier")]
    NotQuantifierFree,
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error(transparent)]
    Uniformity(#[from] UniformityError),
}

/// Truth of a quantifier-free matrix computed only from the 1-types of the
/// positions, their equality pattern and the table of the live part. The
/// live part's elements are ordered by their class number in `pattern`.
pub fn evaluate_matrix_by_types(
    vocab: &Vocabulary,
    vars: &[Var],
    one_types: &[OneType],
    pattern: &EqualityPattern,
    live_table: Option<&KTable>,
    matrix: &Formula,
) -> Result<bool, TypeEvalError> {
    if vars.len() != one_types.len() || vars.len() != pattern.len() {
        return Err(TypeEvalError::Lengths(vars.len(), one_types.len(), pattern.len()));
    }
    if !matrix.is_quantifier_free() {
        return Err(TypeEvalError::NotQuantifierFree);
    }
    for i in 0..vars.len() {
        for j in 0..i {
            if pattern.0[i] == pattern.0[j] && one_types[i] != one_types[j] {
                return Err(TypeEvalError::TypeClash(j, i));
            }
        }
    }
    let pos = |v: &Var| {
        vars.iter()
            .position(|w| w == v)
            .ok_or_else(|| TypeEvalError::UnknownVariable(v.clone()))
    };
    let live = live_variables(matrix)?;
    let mut live_classes = Vec::new();
    for v in &live {
        live_classes.push(pattern.0[pos(v)?]);
    }
    live_classes.sort_unstable();
    live_classes.dedup();
    let k = live_classes.len();
    let table = if k >= 2 {
        match live_table {
            None => return Err(TypeEvalError::MissingTable(k)),
            Some(t) if t.k != k => {
                return Err(TypeEvalError::TableSize {
                    expected: k,
                    found: t.k,
                })
            }
            Some(t) => Some(t),
        }
    } else {
        None
    };
    let shape_index: HashMap<Shape, usize> = onto_shapes(vocab, k.max(1))
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let class_of = |v: &Var| pos(v).map(|p| (p, pattern.0[p]));

    fn go(
        f: &Formula,
        vocab: &Vocabulary,
        atom: &dyn Fn(&str, &[Var]) -> Result<bool, TypeEvalError>,
        eq: &dyn Fn(&Var, &Var) -> Result<bool, TypeEvalError>,
    ) -> Result<bool, TypeEvalError> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom { rel, args } => atom(rel, args)?,
            Formula::Eq(a, b) => eq(a, b)?,
            Formula::Not(a) => !go(a, vocab, atom, eq)?,
            Formula::And(a, b) => go(a, vocab, atom, eq)? && go(b, vocab, atom, eq)?,
            Formula::Or(a, b) => go(a, vocab, atom, eq)? || go(b, vocab, atom, eq)?,
            Formula::Quant { .. } => return Err(TypeEvalError::NotQuantifierFree),
        })
    }

    let atom = |rel: &str, args: &[Var]| -> Result<bool, TypeEvalError> {
        let r = vocab
            .index_of(rel)
            .ok_or_else(|| TypeEvalError::UnknownRelation(rel.to_string()))?;
        let mut classes = Vec::with_capacity(args.len());
        let mut first_pos = 0;
        for a in args {
            let (p, c) = class_of(a)?;
            first_pos = p;
            classes.push(c);
        }
        if classes.iter().all(|&c| c == classes[0]) {
            // collapses to a unary atom: read it off the 1-type
            return Ok(one_types[first_pos].bits[r]);
        }
        let table = table.expect("a wide atom makes the live part wide");
        let t: Vec<usize> = classes
            .iter()
            .map(|c| live_classes.iter().position(|l| l == c).expect("uniform"))
            .collect();
        Ok(table.bits[shape_index[&(r, t)]])
    };
    let eq = |a: &Var, b: &Var| -> Result<bool, TypeEvalError> { Ok(class_of(a)?.1 == class_of(b)?.1) };
    go(matrix, vocab, &atom, &eq)
}

/// The inputs to [`evaluate_matrix_by_types`] read off a concrete tuple.
pub fn matrix_profile(
    a: &Structure,
    vars: &[Var],
    tuple: &[usize],
    matrix: &Formula,
) -> Result<(Vec<OneType>, EqualityPattern, Option<KTable>), TypeEvalError> {
    let pattern = EqualityPattern::of_tuple(tuple);
    let types = tuple.iter().map(|&e| a.one_type(e)).collect();
    let live = live_variables(matrix)?;
    let mut elems: Vec<(usize, usize)> = Vec::new();
    for v in &live {
        let p = vars
            .iter()
            .position(|w| w == v)
            .ok_or_else(|| TypeEvalError::UnknownVariable(v.clone()))?;
        elems.push((pattern.0[p], tuple[p]));
    }
    elems.sort_unstable();
    elems.dedup();
    let table = if elems.len() >= 2 {
        let live_elems: Vec<usize> = elems.iter().map(|&(_, e)| e).collect();
        Some(a.k_table(&live_elems).expect("distinct by construction"))
    } else {
        None
    };
    Ok((types, pattern, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{evaluate, parse_structure, Assignment};
    use crate::syntax::{parse_formula_infer, var};

    #[test]
    fn one_type_examples() {
        let a = parse_structure("domain=2; P/1={(0)}; R/2={(0 0)}").unwrap();
        assert_eq!(a.one_type(0).bits, vec![true, true]);
        assert_eq!(a.one_type(1).bits, vec![false, false]);
        assert_eq!(a.one_type(0).literals(a.vocab()), vec!["P(v1)", "R(v1,v1)"]);
        let e = Structure::new(Vocabulary::new(), 1).unwrap();
        assert!(e.one_type(0).bits.is_empty());
    }

    #[test]
    fn k_table_examples() {
        let a = parse_structure("domain=2; R/2={(0 1)}").unwrap();
        let t = a.k_table(&[0, 1]).unwrap();
        assert_eq!(t.literals(a.vocab()), vec!["R(v1,v2)", "~R(v2,v1)"]);
        assert_eq!(a.k_table(&[1]).unwrap(), KTable::from(a.one_type(1)));
        assert!(a.k_table(&[0, 0]).is_err());

        let b = parse_structure("domain=2; R/3={(0 1 0)}").unwrap();
        let t = b.k_table(&[0, 1]).unwrap();
        assert_eq!(t.bits.len(), 6);
        let lits = t.literals(b.vocab());
        assert!(lits.contains(&"R(v1,v2,v1)".to_string()));
        assert_eq!(lits.iter().filter(|l| !l.starts_with('~')).count(), 1);
    }

    #[test]
    fn patterns() {
        assert_eq!(EqualityPattern::of_tuple(&[3, 1, 3]).0, vec![0, 1, 0]);
        assert_eq!(EqualityPattern::all(3).len(), 5);
        assert_eq!(EqualityPattern::all(4).len(), 15);
    }

    #[test]
    fn type_evaluation_examples() {
        let v = Vocabulary::from_pairs([("P", 1)]).unwrap();
        let (m, _) = parse_formula_infer("P(x) & x = y").unwrap();
        let p = OneType { bits: vec![true] };
        let r = evaluate_matrix_by_types(
            &v,
            &[var("x"), var("y")],
            &[p.clone(), p.clone()],
            &EqualityPattern(vec![0, 0]),
            None,
            &m,
        );
        assert_eq!(r, Ok(true));
        let q = OneType { bits: vec![false] };
        let clash = evaluate_matrix_by_types(
            &v,
            &[var("x"), var("y")],
            &[p, q],
            &EqualityPattern(vec![0, 0]),
            None,
            &m,
        );
        assert!(matches!(clash, Err(TypeEvalError::TypeClash(0, 1))));

        let v = Vocabulary::from_pairs([("R", 2)]).unwrap();
        let (m, _) = parse_formula_infer("R(x,y) & ~x = y").unwrap();
        let t = KTable {
            k: 2,
            bits: vec![true, false],
        };
        let any = OneType::empty(&v);
        let r = evaluate_matrix_by_types(
            &v,
            &[var("x"), var("y")],
            &[any.clone(), any],
            &EqualityPattern(vec![0, 1]),
            Some(&t),
            &m,
        );
        assert_eq!(r, Ok(true));
    }

    #[test]
    fn types_match_evaluation_on_a_collapsed_tuple() {
        let a = parse_structure("domain=3; R/3={(0 0 1) (1 1 0)}; P/1={(1)}").unwrap();
        let (m, _) = parse_formula_infer("R(x,y,z) & ~R(z,y,x) | P(y) & x = y & R(y,x,z)").unwrap();
        let vars = [var("x"), var("y"), var("z")];
        for tuple in [[0, 0, 1], [1, 1, 0], [2, 2, 2], [0, 1, 2]] {
            let (t, p, k) = matrix_profile(&a, &vars, &tuple, &m).unwrap();
            let by_types = evaluate_matrix_by_types(a.vocab(), &vars, &t, &p, k.as_ref(), &m).unwrap();
            let s = Assignment::new()
                .with("x", tuple[0])
                .with("y", tuple[1])
                .with("z", tuple[2]);
            assert_eq!(by_types, evaluate(&a, &m, &s).unwrap(), "{tuple:?}");
        }
    }

    #[test]
    fn tables_determine_the_structure() {
        let a = parse_structure("domain=3; R/2={(0 1) (2 2)}; P/1={(1)}").unwrap();
        let mut b = Structure::new(a.vocab().clone(), 3).unwrap();
        for e in 0..3 {
            b.set_one_type(e, &a.one_type(e));
        }
        for (x, y) in [(0, 1), (0, 2), (1, 2)] {
            b.set_k_table(&[x, y], &a.k_table(&[x, y]).unwrap());
        }
        assert_eq!(a, b);
    }
}
