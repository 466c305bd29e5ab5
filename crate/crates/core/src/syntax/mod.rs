//! Formula syntax: variables, vocabularies, the formula AST and its
//! concrete text form, plus membership checking for the uniform
//! one-dimensional fragment.

mod fragment;
mod parser;
mod printer;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use fragment::{
    live_variables, validate_fragment, AstPath, Fragment, FragmentReport, Rule, UniformityError, Violation,
};
pub use parser::{parse_formula, parse_formula_infer, ParseError};

/// A first-order variable. Any identifier except the reserved words
/// `A`, `E`, `true` and `false`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Var {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Var {
        Var(s.to_string())
    }
}

/// Shorthand used heavily in tests and generators.
pub fn var(name: &str) -> Var {
    Var::new(name)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VocabularyError {
    #[error("relation `{0}` must have positive arity")]
    ZeroArity(String),
    #[error("relation `{name}` used with arity {found}, declared with arity {declared}")]
    ArityMismatch {
        name: String,
        declared: usize,
        found: usize,
    },
    #[error("unknown relation `{0}`")]
    Unknown(String),
}

/// Finite relational vocabulary: relation names with their arities.
/// Equality is built in and never listed here.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    symbols: BTreeMap<String, usize>,
}

impl Vocabulary {
    pub fn new() -> Vocabulary {
        Vocabulary::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, usize)>) -> Result<Vocabulary, VocabularyError> {
        let mut v = Vocabulary::new();
        for (name, arity) in pairs {
            v.insert(name, arity)?;
        }
        Ok(v)
    }

    /// Adds a symbol; re-adding with the same arity is a no-op.
    pub fn insert(&mut self, name: &str, arity: usize) -> Result<(), VocabularyError> {
        if arity == 0 {
            return Err(VocabularyError::ZeroArity(name.to_string()));
        }
        match self.symbols.get(name) {
            Some(&a) if a != arity => Err(VocabularyError::ArityMismatch {
                name: name.to_string(),
                declared: a,
                found: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.symbols.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    /// Position of `name` in the canonical (sorted) symbol order.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.keys().position(|k| k == name)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.values().copied().max().unwrap_or(0)
    }

    /// Symbols in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.symbols.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn merge(&mut self, other: &Vocabulary) -> Result<(), VocabularyError> {
        for (name, arity) in other.iter() {
            self.insert(name, arity)?;
        }
        Ok(())
    }

    /// Whether every symbol of `self` occurs in `other` with the same arity.
    pub fn is_subset_of(&self, other: &Vocabulary) -> bool {
        self.iter().all(|(n, a)| other.arity(n) == Some(a))
    }

    pub fn restrict(&self, keep: impl Fn(&str) -> bool) -> Vocabulary {
        Vocabulary {
            symbols: self
                .symbols
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(n, a)| format!("{n}/{a}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
    AtLeast(u32),
    AtMost(u32),
    Exactly(u32),
}

impl Quantifier {
    pub fn is_counting(self) -> bool {
        matches!(
            self,
            Quantifier::AtLeast(_) | Quantifier::AtMost(_) | Quantifier::Exactly(_)
        )
    }

    /// `∃` and the counting quantifiers form one family, `∀` the other.
    /// Directly nested quantifiers of one family make up a single block.
    pub fn same_family(self, other: Quantifier) -> bool {
        (self == Quantifier::Forall) == (other == Quantifier::Forall)
    }
}

/// Formula AST. Implication and biconditional exist only in the concrete
/// syntax and are desugared by the parser.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom {
        rel: String,
        args: Vec<Var>,
    },
    Eq(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Quant {
        kind: Quantifier,
        vars: Vec<Var>,
        body: Box<Formula>,
    },
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Formula {
    pub fn atom(rel: &str, args: &[&str]) -> Formula {
        Formula::Atom {
            rel: rel.to_string(),
            args: args.iter().map(|a| Var::new(*a)).collect(),
        }
    }

    pub fn atom_vars(rel: &str, args: Vec<Var>) -> Formula {
        Formula::Atom {
            rel: rel.to_string(),
            args,
        }
    }

    pub fn eq(a: &str, b: &str) -> Formula {
        Formula::Eq(Var::new(a), Var::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    /// `a <-> b`, desugared as `(a & b) | (~a & ~b)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::or(
            Formula::and(a.clone(), b.clone()),
            Formula::and(Formula::not(a), Formula::not(b)),
        )
    }

    pub fn quant(kind: Quantifier, vars: Vec<Var>, body: Formula) -> Formula {
        Formula::Quant {
            kind,
            vars,
            body: Box::new(body),
        }
    }

    pub fn exists(vars: &[&str], body: Formula) -> Formula {
        Formula::quant(Quantifier::Exists, vars.iter().map(|v| Var::new(*v)).collect(), body)
    }

    pub fn forall(vars: &[&str], body: Formula) -> Formula {
        Formula::quant(Quantifier::Forall, vars.iter().map(|v| Var::new(*v)).collect(), body)
    }

    pub fn counting(kind: Quantifier, v: &str, body: Formula) -> Formula {
        Formula::quant(kind, vec![Var::new(v)], body)
    }

    /// Left-nested conjunction; `true` for an empty iterator.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Left-nested disjunction; `false` for an empty iterator.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// Flattens nested conjunctions.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                _ => out.push(f),
            }
        }
        go(self, &mut out);
        out
    }

    pub fn disjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::Or(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                _ => out.push(f),
            }
        }
        go(self, &mut out);
        out
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Quant { .. } => false,
        }
    }

    pub fn uses_counting(&self) -> bool {
        match self {
            Formula::Quant { kind, body, .. } => kind.is_counting() || body.uses_counting(),
            Formula::Not(a) => a.uses_counting(),
            Formula::And(a, b) | Formula::Or(a, b) => a.uses_counting() || b.uses_counting(),
            _ => false,
        }
    }

    /// Number of AST nodes.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => 1,
            Formula::Not(a) => 1 + a.node_count(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.node_count() + b.node_count(),
            Formula::Quant { body, .. } => 1 + body.node_count(),
        }
    }

    /// Symbol count: relation symbols, variable occurrences, connectives,
    /// quantifier symbols and bound-variable occurrences.
    pub fn symbol_count(&self) -> usize {
        match self {
            Formula::True | Formula::False => 1,
            Formula::Atom { args, .. } => 1 + args.len(),
            Formula::Eq(..) => 3,
            Formula::Not(a) => 1 + a.symbol_count(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.symbol_count() + b.symbol_count(),
            Formula::Quant { vars, body, .. } => 1 + vars.len() + body.symbol_count(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom { args, .. } => {
                for a in args {
                    if !bound.contains(a) {
                        out.insert(a.clone());
                    }
                }
            }
            Formula::Eq(a, b) => {
                for v in [a, b] {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant { vars, body, .. } => {
                let n = bound.len();
                bound.extend(vars.iter().cloned());
                body.collect_free(bound, out);
                bound.truncate(n);
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom { args, .. } => out.extend(args.iter().cloned()),
            Formula::Eq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Quant { vars, .. } => out.extend(vars.iter().cloned()),
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Not(a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Quant { body, .. } => body.visit(f),
            _ => {}
        }
    }

    /// Relation symbols with the arities they are used at.
    pub fn vocabulary(&self) -> Result<Vocabulary, VocabularyError> {
        let mut v = Vocabulary::new();
        let mut err = None;
        self.visit(&mut |f| {
            if let Formula::Atom { rel, args } = f {
                if let Err(e) = v.insert(rel, args.len()) {
                    err.get_or_insert(e);
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    /// Checks every atom against `vocab`.
    pub fn check_vocabulary(&self, vocab: &Vocabulary) -> Result<(), VocabularyError> {
        let mut err = None;
        self.visit(&mut |f| {
            if let Formula::Atom { rel, args } = f {
                let e = match vocab.arity(rel) {
                    None => Some(VocabularyError::Unknown(rel.clone())),
                    Some(a) if a != args.len() => Some(VocabularyError::ArityMismatch {
                        name: rel.clone(),
                        declared: a,
                        found: args.len(),
                    }),
                    _ => None,
                };
                if let Some(e) = e {
                    err.get_or_insert(e);
                }
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// Renames free occurrences of variables according to `map`.
    /// The caller is responsible for avoiding capture.
    pub fn rename_free(&self, map: &BTreeMap<Var, Var>) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom { rel, args } => Formula::Atom {
                rel: rel.clone(),
                args: args
                    .iter()
                    .map(|a| map.get(a).cloned().unwrap_or_else(|| a.clone()))
                    .collect(),
            },
            Formula::Eq(a, b) => Formula::Eq(
                map.get(a).cloned().unwrap_or_else(|| a.clone()),
                map.get(b).cloned().unwrap_or_else(|| b.clone()),
            ),
            Formula::Not(a) => Formula::not(a.rename_free(map)),
            Formula::And(a, b) => Formula::and(a.rename_free(map), b.rename_free(map)),
            Formula::Or(a, b) => Formula::or(a.rename_free(map), b.rename_free(map)),
            Formula::Quant { kind, vars, body } => {
                let inner: BTreeMap<Var, Var> = map
                    .iter()
                    .filter(|(k, _)| !vars.contains(k))
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                Formula::quant(*kind, vars.clone(), body.rename_free(&inner))
            }
        }
    }

    /// Replaces every atom over `rel` by `f(args)`.
    pub fn substitute_atoms(&self, rel: &str, f: &impl Fn(&[Var]) -> Formula) -> Formula {
        match self {
            Formula::Atom { rel: r, args } if r == rel => f(args),
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => self.clone(),
            Formula::Not(a) => Formula::not(a.substitute_atoms(rel, f)),
            Formula::And(a, b) => Formula::and(a.substitute_atoms(rel, f), b.substitute_atoms(rel, f)),
            Formula::Or(a, b) => Formula::or(a.substitute_atoms(rel, f), b.substitute_atoms(rel, f)),
            Formula::Quant { kind, vars, body } => Formula::quant(*kind, vars.clone(), body.substitute_atoms(rel, f)),
        }
    }

    /// Negation normal form: negations only on atoms and equalities;
    /// `∀`/`∃` are dualised. Counting quantifiers are kept under a negation.
    pub fn nnf(&self) -> Formula {
        self.nnf_pol(true)
    }

    fn nnf_pol(&self, positive: bool) -> Formula {
        match (self, positive) {
            (Formula::True, true) | (Formula::False, false) => Formula::True,
            (Formula::True, false) | (Formula::False, true) => Formula::False,
            (Formula::Atom { .. } | Formula::Eq(..), true) => self.clone(),
            (Formula::Atom { .. } | Formula::Eq(..), false) => Formula::not(self.clone()),
            (Formula::Not(a), p) => a.nnf_pol(!p),
            (Formula::And(a, b), true) => Formula::and(a.nnf_pol(true), b.nnf_pol(true)),
            (Formula::And(a, b), false) => Formula::or(a.nnf_pol(false), b.nnf_pol(false)),
            (Formula::Or(a, b), true) => Formula::or(a.nnf_pol(true), b.nnf_pol(true)),
            (Formula::Or(a, b), false) => Formula::and(a.nnf_pol(false), b.nnf_pol(false)),
            (Formula::Quant { kind, vars, body }, p) => match (kind, p) {
                (Quantifier::Exists, true) | (Quantifier::Forall, true) => {
                    Formula::quant(*kind, vars.clone(), body.nnf_pol(true))
                }
                (Quantifier::Exists, false) => Formula::quant(Quantifier::Forall, vars.clone(), body.nnf_pol(false)),
                (Quantifier::Forall, false) => Formula::quant(Quantifier::Exists, vars.clone(), body.nnf_pol(false)),
                (_, true) => Formula::quant(*kind, vars.clone(), body.nnf_pol(true)),
                (_, false) => Formula::not(Formula::quant(*kind, vars.clone(), body.nnf_pol(true))),
            },
        }
    }

    /// Collapses directly nested `∃`/`∀` nodes of the same kind into one
    /// multi-variable node. Counting nodes are left alone.
    pub fn merge_blocks(&self) -> Formula {
        match self {
            Formula::Not(a) => Formula::not(a.merge_blocks()),
            Formula::And(a, b) => Formula::and(a.merge_blocks(), b.merge_blocks()),
            Formula::Or(a, b) => Formula::or(a.merge_blocks(), b.merge_blocks()),
            Formula::Quant { kind, vars, body } => {
                let body = body.merge_blocks();
                if !kind.is_counting() {
                    if let Formula::Quant {
                        kind: k2,
                        vars: v2,
                        body: b2,
                    } = &body
                    {
                        if k2 == kind && v2.iter().all(|v| !vars.contains(v)) {
                            let mut all = vars.clone();
                            all.extend(v2.iter().cloned());
                            return Formula::quant(*kind, all, (**b2).clone());
                        }
                    }
                }
                Formula::quant(*kind, vars.clone(), body)
            }
            _ => self.clone(),
        }
    }

    /// Light constant folding of `true`/`false` through the connectives.
    pub fn simplify_constants(&self) -> Formula {
        match self {
            Formula::Not(a) => match a.simplify_constants() {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                Formula::Not(inner) => *inner,
                other => Formula::not(other),
            },
            Formula::And(a, b) => match (a.simplify_constants(), b.simplify_constants()) {
                (Formula::False, _) | (_, Formula::False) => Formula::False,
                (Formula::True, x) | (x, Formula::True) => x,
                (x, y) => Formula::and(x, y),
            },
            Formula::Or(a, b) => match (a.simplify_constants(), b.simplify_constants()) {
                (Formula::True, _) | (_, Formula::True) => Formula::True,
                (Formula::False, x) | (x, Formula::False) => x,
                (x, y) => Formula::or(x, y),
            },
            Formula::Quant { kind, vars, body } => Formula::quant(*kind, vars.clone(), body.simplify_constants()),
            _ => self.clone(),
        }
    }
}

/// Returns a variable name based on `base` that is not in `taken`.
pub fn fresh_var(base: &str, taken: &BTreeSet<Var>) -> Var {
    let v = Var::new(base);
    if !taken.contains(&v) {
        return v;
    }
    (1..)
        .map(|i| Var::new(format!("{base}{i}")))
        .find(|v| !taken.contains(v))
        .expect("infinite supply")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_variables_examples() {
        let r = Formula::atom("R", &["x", "y", "z"]);
        assert_eq!(r.free_vars(), [var("x"), var("y"), var("z")].into());
        let b = Formula::exists(&["y", "z"], r);
        assert_eq!(b.free_vars(), [var("x")].into());
        assert_eq!(Formula::eq("x", "x").free_vars(), [var("x")].into());
    }

    #[test]
    fn vocabulary_rejects_inconsistent_arity() {
        let f = Formula::and(Formula::atom("R", &["x"]), Formula::atom("R", &["x", "y"]));
        assert!(matches!(f.vocabulary(), Err(VocabularyError::ArityMismatch { .. })));
        assert!(Vocabulary::from_pairs([("P", 0)]).is_err());
    }

    #[test]
    fn nnf_dualises_blocks() {
        let f = Formula::not(Formula::exists(&["x"], Formula::atom("P", &["x"])));
        assert_eq!(
            f.nnf(),
            Formula::forall(&["x"], Formula::not(Formula::atom("P", &["x"])))
        );
    }

    #[test]
    fn merge_blocks_joins_same_kind() {
        let f = Formula::exists(&["x"], Formula::exists(&["y"], Formula::atom("R", &["x", "y"])));
        assert_eq!(
            f.merge_blocks(),
            Formula::exists(&["x", "y"], Formula::atom("R", &["x", "y"]))
        );
        let g = Formula::forall(&["x"], Formula::exists(&["y"], Formula::atom("R", &["x", "y"])));
        assert_eq!(g.merge_blocks(), g);
    }
}
