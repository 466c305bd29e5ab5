use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::{offset, Bits, Structure};
use crate::syntax::{Formula, Quantifier, Var, Vocabulary, VocabularyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("free variable `{0}` has no value")]
    Unbound(Var),
    #[error("value {value} of `{var}` outside a domain of size {size}")]
    OutOfRange { var: Var, value: usize, size: usize },
    #[error(transparent)]
    Vocabulary(#[from] VocabularyError),
}

/// Values for variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Var, usize>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn with(mut self, v: &str, e: usize) -> Assignment {
        self.0.insert(Var::new(v), e);
        self
    }

    pub fn insert(&mut self, v: Var, e: usize) {
        self.0.insert(v, e);
    }

    pub fn get(&self, v: &Var) -> Option<usize> {
        self.0.get(v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, usize)> {
        self.0.iter().map(|(v, &e)| (v, e))
    }
}

impl FromIterator<(Var, usize)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (Var, usize)>>(iter: T) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

/// Kleene truth values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tv {
    False,
    Unknown,
    True,
}

impl Tv {
    pub fn from_bool(b: bool) -> Tv {
        if b {
            Tv::True
        } else {
            Tv::False
        }
    }

    #[inline]
    pub fn not(self) -> Tv {
        match self {
            Tv::False => Tv::True,
            Tv::Unknown => Tv::Unknown,
            Tv::True => Tv::False,
        }
    }

    pub fn is_definite(self) -> bool {
        self != Tv::Unknown
    }
}

/// Anything atoms can be looked up in. `off` is the row-major index of the
/// argument tuple.
pub trait Interpretation {
    fn size(&self) -> usize;
    fn atom(&self, rel: usize, off: usize) -> Tv;
}

impl Interpretation for Structure {
    fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn atom(&self, rel: usize, off: usize) -> Tv {
        Tv::from_bool(self.holds_offset(rel, off))
    }
}

/// A structure some of whose atoms are still undecided.
#[derive(Clone, Debug)]
pub struct PartialStructure {
    vocab: Vocabulary,
    size: usize,
    arities: Vec<usize>,
    value: Vec<Bits>,
    known: Vec<Bits>,
}

impl PartialStructure {
    pub fn new(vocab: Vocabulary, size: usize) -> PartialStructure {
        let arities: Vec<usize> = vocab.iter().map(|(_, a)| a).collect();
        let cube = |a: usize| Bits::new(size.pow(a as u32));
        PartialStructure {
            value: arities.iter().map(|&a| cube(a)).collect(),
            known: arities.iter().map(|&a| cube(a)).collect(),
            vocab,
            size,
            arities,
        }
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn arity_at(&self, rel: usize) -> usize {
        self.arities[rel]
    }

    pub fn set(&mut self, rel: usize, tuple: &[usize], v: bool) {
        let off = offset(self.size, tuple);
        self.known[rel].set(off, true);
        self.value[rel].set(off, v);
    }

    pub fn unset(&mut self, rel: usize, tuple: &[usize]) {
        let off = offset(self.size, tuple);
        self.known[rel].set(off, false);
        self.value[rel].set(off, false);
    }

    pub(crate) fn set_offset(&mut self, rel: usize, off: usize, v: bool) {
        self.known[rel].set(off, true);
        self.value[rel].set(off, v);
    }

    pub(crate) fn unset_offset(&mut self, rel: usize, off: usize) {
        self.known[rel].set(off, false);
        self.value[rel].set(off, false);
    }

    pub fn get(&self, rel: usize, tuple: &[usize]) -> Tv {
        self.atom(rel, offset(self.size, tuple))
    }

    /// Unknown atoms become false.
    pub fn to_structure(&self) -> Structure {
        let mut s = Structure::new(self.vocab.clone(), self.size).expect("non-empty");
        s.rels = self.value.clone();
        s
    }
}

impl Interpretation for PartialStructure {
    fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn atom(&self, rel: usize, off: usize) -> Tv {
        if !self.known[rel].get(off) {
            Tv::Unknown
        } else {
            Tv::from_bool(self.value[rel].get(off))
        }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Atom {
        rel: usize,
        args: Vec<usize>,
    },
    Eq(usize, usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Quant {
        kind: Quantifier,
        vars: Vec<usize>,
        body: Box<Node>,
    },
}

/// A formula compiled against a vocabulary: relation names become indices
/// and variables become slots in an environment vector. The first slots
/// hold the free variables in the order given at compile time.
#[derive(Clone, Debug)]
pub struct Compiled {
    node: Node,
    slots: usize,
    free: Vec<Var>,
}

struct Compiler<'a> {
    vocab: &'a Vocabulary,
    slots: usize,
}

impl Compiler<'_> {
    fn compile(&mut self, f: &Formula, scope: &mut HashMap<Var, Vec<usize>>) -> Result<Node, EvalError> {
        let lookup = |scope: &HashMap<Var, Vec<usize>>, v: &Var| {
            scope
                .get(v)
                .and_then(|s| s.last().copied())
                .ok_or_else(|| EvalError::Unbound(v.clone()))
        };
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Atom { rel, args } => {
                let r = match self.vocab.arity(rel) {
                    None => return Err(VocabularyError::Unknown(rel.clone()).into()),
                    Some(a) if a != args.len() => {
                        return Err(VocabularyError::ArityMismatch {
                            name: rel.clone(),
                            declared: a,
                            found: args.len(),
                        }
                        .into())
                    }
                    Some(_) => self.vocab.index_of(rel).unwrap(),
                };
                let args = args.iter().map(|a| lookup(scope, a)).collect::<Result<_, _>>()?;
                Node::Atom { rel: r, args }
            }
            Formula::Eq(a, b) => Node::Eq(lookup(scope, a)?, lookup(scope, b)?),
            Formula::Not(a) => Node::Not(Box::new(self.compile(a, scope)?)),
            Formula::And(a, b) => Node::And(Box::new(self.compile(a, scope)?), Box::new(self.compile(b, scope)?)),
            Formula::Or(a, b) => Node::Or(Box::new(self.compile(a, scope)?), Box::new(self.compile(b, scope)?)),
            Formula::Quant { kind, vars, body } => {
                let mut slots = Vec::new();
                for v in vars {
                    let s = self.slots;
                    self.slots += 1;
                    scope.entry(v.clone()).or_default().push(s);
                    slots.push(s);
                }
                let body = self.compile(body, scope);
                for v in vars {
                    scope.get_mut(v).unwrap().pop();
                }
                Node::Quant {
                    kind: *kind,
                    vars: slots,
                    body: Box::new(body?),
                }
            }
        })
    }
}

impl Compiled {
    /// Compiles `phi` with its free variables bound, in order, to the first
    /// slots. Every free variable of `phi` must be listed.
    pub fn new(phi: &Formula, vocab: &Vocabulary, free: &[Var]) -> Result<Compiled, EvalError> {
        let mut scope: HashMap<Var, Vec<usize>> = HashMap::new();
        for (i, v) in free.iter().enumerate() {
            scope.entry(v.clone()).or_default().push(i);
        }
        let mut c = Compiler {
            vocab,
            slots: free.len(),
        };
        let node = c.compile(phi, &mut scope)?;
        Ok(Compiled {
            node,
            slots: c.slots,
            free: free.to_vec(),
        })
    }

    pub fn sentence(phi: &Formula, vocab: &Vocabulary) -> Result<Compiled, EvalError> {
        Compiled::new(phi, vocab, &[])
    }

    pub fn free(&self) -> &[Var] {
        &self.free
    }

    /// Fresh environment with `args` in the free slots.
    pub fn env(&self, args: &[usize]) -> Vec<usize> {
        assert_eq!(args.len(), self.free.len(), "one value per free variable");
        let mut env = vec![0; self.slots.max(1)];
        env[..args.len()].copy_from_slice(args);
        env
    }

    pub fn eval<I: Interpretation>(&self, interp: &I, args: &[usize]) -> Tv {
        let mut env = self.env(args);
        eval_node(&self.node, &mut env, interp)
    }

    /// Evaluates with a caller-owned environment whose free slots are set.
    pub fn eval_in<I: Interpretation>(&self, interp: &I, env: &mut [usize]) -> Tv {
        eval_node(&self.node, env, interp)
    }

    pub fn holds(&self, s: &Structure, args: &[usize]) -> bool {
        self.eval(s, args) == Tv::True
    }
}

fn and(a: Tv, b: impl FnOnce() -> Tv) -> Tv {
    if a == Tv::False {
        return Tv::False;
    }
    let b = b();
    a.min(b)
}

fn or(a: Tv, b: impl FnOnce() -> Tv) -> Tv {
    if a == Tv::True {
        return Tv::True;
    }
    let b = b();
    a.max(b)
}

fn eval_node<I: Interpretation>(node: &Node, env: &mut [usize], interp: &I) -> Tv {
    match node {
        Node::Const(b) => Tv::from_bool(*b),
        Node::Atom { rel, args } => {
            let n = interp.size();
            let off = args.iter().fold(0, |acc, &s| acc * n + env[s]);
            interp.atom(*rel, off)
        }
        Node::Eq(a, b) => Tv::from_bool(env[*a] == env[*b]),
        Node::Not(a) => eval_node(a, env, interp).not(),
        Node::And(a, b) => {
            let x = eval_node(a, env, interp);
            and(x, || eval_node(b, env, interp))
        }
        Node::Or(a, b) => {
            let x = eval_node(a, env, interp);
            or(x, || eval_node(b, env, interp))
        }
        Node::Quant { kind, vars, body } => match kind {
            Quantifier::Exists => exists(vars, body, env, interp),
            Quantifier::Forall => forall(vars, body, env, interp),
            counting => {
                let (mut t, mut u) = (0u64, 0u64);
                let slot = vars[0];
                for e in 0..interp.size() {
                    env[slot] = e;
                    match eval_node(body, env, interp) {
                        Tv::True => t += 1,
                        Tv::Unknown => u += 1,
                        Tv::False => {}
                    }
                }
                count_verdict(*counting, t, u)
            }
        },
    }
}

/// Three-valued verdict of a counting quantifier given `t` definitely true
/// and `u` undecided instances.
pub(crate) fn count_verdict(q: Quantifier, t: u64, u: u64) -> Tv {
    match q {
        Quantifier::AtLeast(k) => {
            let k = u64::from(k);
            if t >= k {
                Tv::True
            } else if t + u < k {
                Tv::False
            } else {
                Tv::Unknown
            }
        }
        Quantifier::AtMost(k) => {
            let k = u64::from(k);
            if t + u <= k {
                Tv::True
            } else if t > k {
                Tv::False
            } else {
                Tv::Unknown
            }
        }
        Quantifier::Exactly(k) => {
            let k = u64::from(k);
            if t == k && u == 0 {
                Tv::True
            } else if t > k || t + u < k {
                Tv::False
            } else {
                Tv::Unknown
            }
        }
        Quantifier::Exists => count_verdict(Quantifier::AtLeast(1), t, u),
        Quantifier::Forall => unreachable!("not a counting quantifier"),
    }
}

fn exists<I: Interpretation>(vars: &[usize], body: &Node, env: &mut [usize], interp: &I) -> Tv {
    let (first, rest) = vars.split_first().expect("non-empty block");
    let mut acc = Tv::False;
    for e in 0..interp.size() {
        env[*first] = e;
        let r = if rest.is_empty() {
            eval_node(body, env, interp)
        } else {
            exists(rest, body, env, interp)
        };
        if r == Tv::True {
            return Tv::True;
        }
        acc = acc.max(r);
    }
    acc
}

fn forall<I: Interpretation>(vars: &[usize], body: &Node, env: &mut [usize], interp: &I) -> Tv {
    let (first, rest) = vars.split_first().expect("non-empty block");
    let mut acc = Tv::True;
    for e in 0..interp.size() {
        env[*first] = e;
        let r = if rest.is_empty() {
            eval_node(body, env, interp)
        } else {
            forall(rest, body, env, interp)
        };
        if r == Tv::False {
            return Tv::False;
        }
        acc = acc.min(r);
    }
    acc
}

/// Truth of `phi` in `a` under `s`.
pub fn evaluate(a: &Structure, phi: &Formula, s: &Assignment) -> Result<bool, EvalError> {
    let free: Vec<Var> = phi.free_vars().into_iter().collect();
    let mut args = Vec::with_capacity(free.len());
    for v in &free {
        let e = s.get(v).ok_or_else(|| EvalError::Unbound(v.clone()))?;
        if e >= a.size() {
            return Err(EvalError::OutOfRange {
                var: v.clone(),
                value: e,
                size: a.size(),
            });
        }
        args.push(e);
    }
    let c = Compiled::new(phi, a.vocab(), &free)?;
    Ok(c.holds(a, &args))
}

pub fn evaluate_sentence(a: &Structure, phi: &Formula) -> Result<bool, EvalError> {
    evaluate(a, phi, &Assignment::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::parse_structure;
    use crate::syntax::parse_formula_infer;

    fn truth(model: &str, formula: &str, s: &Assignment) -> bool {
        let a = parse_structure(model).unwrap();
        let (f, _) = parse_formula_infer(formula).unwrap();
        evaluate(&a, &f, s).unwrap()
    }

    #[test]
    fn witnesses_may_coincide() {
        assert!(truth(
            "domain=1; R/3={(0 0 0)}",
            "E x y z. R(x,y,z)",
            &Assignment::new()
        ));
    }

    #[test]
    fn empty_relation() {
        assert!(!truth("domain=2; E/1={}", "E x. E(x)", &Assignment::new()));
    }

    #[test]
    fn counting() {
        let m = "domain=3; P/1={(0) (2)}";
        let none = Assignment::new();
        assert!(truth(m, "E[=2] x. P(x)", &none));
        assert!(truth(m, "E[>=2] x. P(x)", &none));
        assert!(!truth(m, "E[>=3] x. P(x)", &none));
        assert!(truth(m, "E[<=2] x. P(x)", &none));
        assert!(!truth(m, "E[<=1] x. P(x)", &none));
        assert!(truth(m, "E[>=0] x. P(x)", &none));
        assert!(truth(m, "E[=1] y. (P(y) & ~y = x)", &Assignment::new().with("x", 0)));
    }

    #[test]
    fn shadowing() {
        let m = "domain=2; P/1={(0)}";
        assert!(truth(m, "P(x) & E x. ~P(x)", &Assignment::new().with("x", 0)));
    }

    #[test]
    fn unbound_is_an_error() {
        let a = parse_structure("domain=2; P/1={(0)}").unwrap();
        let (f, _) = parse_formula_infer("P(x)").unwrap();
        assert_eq!(
            evaluate(&a, &f, &Assignment::new()),
            Err(EvalError::Unbound(Var::new("x")))
        );
        let (g, _) = parse_formula_infer("Q(x)").unwrap();
        assert!(evaluate(&a, &g, &Assignment::new().with("x", 0)).is_err());
    }

    #[test]
    fn kleene_counting_bounds() {
        use Quantifier::*;
        assert_eq!(count_verdict(AtLeast(2), 1, 1), Tv::Unknown);
        assert_eq!(count_verdict(AtLeast(2), 2, 0), Tv::True);
        assert_eq!(count_verdict(AtMost(1), 0, 2), Tv::Unknown);
        assert_eq!(count_verdict(AtMost(1), 2, 0), Tv::False);
        assert_eq!(count_verdict(Exactly(1), 1, 1), Tv::Unknown);
        assert_eq!(count_verdict(Exactly(1), 0, 0), Tv::False);
    }

    #[test]
    fn partial_structures_are_three_valued() {
        let v = Vocabulary::from_pairs([("P", 1)]).unwrap();
        let mut p = PartialStructure::new(v.clone(), 2);
        let (f, _) = parse_formula_infer("E x. P(x)").unwrap();
        let c = Compiled::sentence(&f, &v).unwrap();
        assert_eq!(c.eval(&p, &[]), Tv::Unknown);
        p.set(0, &[0], false);
        assert_eq!(c.eval(&p, &[]), Tv::Unknown);
        p.set(0, &[1], true);
        assert_eq!(c.eval(&p, &[]), Tv::True);
    }
}
