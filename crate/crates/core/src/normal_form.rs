//! Generalized Scott normal form:
//! `⋀ ∀x∃y₁…y_k φ∃ᵢ ∧ ⋀ ∀x₁…x_l φ∀ᵢ` with quantifier-free matrices.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::structures::{Compiled, EvalError, Structure};
use crate::syntax::{
    fresh_var, live_variables, validate_fragment, var, Formula, Quantifier, Var, Violation, Vocabulary,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalFormError {
    #[error("counting quantifiers have no normal form here")]
    Counting,
    #[error("not a sentence: free variables {0:?}")]
    FreeVariables(Vec<Var>),
    #[error("not in the fragment: {}", .0.iter().map(|v| format!("{} at {}", v.rule, v.path)).collect::<Vec<_>>().join("; "))]
    NotInFragment(Vec<Violation>),
    #[error("inconsistent vocabulary: {0}")]
    Vocabulary(String),
}

/// `∀x∃ys matrix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExistConjunct {
    pub x: Var,
    pub ys: Vec<Var>,
    pub matrix: Formula,
    pub live: BTreeSet<Var>,
}

/// `∀vars matrix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivConjunct {
    pub vars: Vec<Var>,
    pub matrix: Formula,
    pub live: BTreeSet<Var>,
}

impl ExistConjunct {
    pub fn new(x: Var, ys: Vec<Var>, matrix: Formula) -> ExistConjunct {
        let live = live_variables(&matrix).expect("uniform matrix");
        ExistConjunct { x, ys, matrix, live }
    }

    /// `x` followed by the `ys`.
    pub fn all_vars(&self) -> Vec<Var> {
        let mut v = vec![self.x.clone()];
        v.extend(self.ys.iter().cloned());
        v
    }

    pub fn to_formula(&self) -> Formula {
        Formula::quant(
            Quantifier::Forall,
            vec![self.x.clone()],
            Formula::quant(Quantifier::Exists, self.ys.clone(), self.matrix.clone()),
        )
    }
}

impl UnivConjunct {
    pub fn new(vars: Vec<Var>, matrix: Formula) -> UnivConjunct {
        let live = live_variables(&matrix).expect("uniform matrix");
        UnivConjunct { vars, matrix, live }
    }

    pub fn to_formula(&self) -> Formula {
        Formula::quant(Quantifier::Forall, self.vars.clone(), self.matrix.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub exist: Vec<ExistConjunct>,
    pub univ: Vec<UnivConjunct>,
    /// Unary symbols introduced for renamed blocks.
    pub fresh_symbols: Vec<String>,
    /// Original vocabulary plus the fresh symbols.
    pub vocab: Vocabulary,
    /// The block each fresh symbol stands for, innermost first.
    pub definitions: Vec<MarkerDefinition>,
}

/// `symbol(free)` abbreviates `block`; closed blocks make the symbol
/// constant over the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkerDefinition {
    pub symbol: String,
    pub free: Option<Var>,
    pub block: Formula,
}

impl NormalForm {
    /// Assembles a normal form from conjuncts, padding empty lists with
    /// `∀x∃y y=x` and `∀x x=x`.
    pub fn new(mut exist: Vec<ExistConjunct>, mut univ: Vec<UnivConjunct>, vocab: Vocabulary) -> NormalForm {
        if exist.is_empty() {
            exist.push(ExistConjunct::new(var("x"), vec![var("y")], Formula::eq("y", "x")));
        }
        if univ.is_empty() {
            univ.push(UnivConjunct::new(vec![var("x")], Formula::eq("x", "x")));
        }
        NormalForm {
            exist,
            univ,
            fresh_symbols: Vec::new(),
            vocab,
            definitions: Vec::new(),
        }
    }

    /// `max({kᵢ+1} ∪ {lᵢ})`, at least 2.
    pub fn width(&self) -> usize {
        let e = self.exist.iter().map(|c| c.ys.len() + 1);
        let u = self.univ.iter().map(|c| c.vars.len());
        e.chain(u).max().unwrap_or(0).max(2)
    }

    pub fn to_formula(&self) -> Formula {
        Formula::and_all(
            self.exist
                .iter()
                .map(ExistConjunct::to_formula)
                .chain(self.univ.iter().map(UnivConjunct::to_formula)),
        )
    }

    /// |φ|: the symbol count of the printed normal form.
    pub fn size(&self) -> usize {
        self.to_formula().symbol_count()
    }

    pub fn max_arity(&self) -> usize {
        self.vocab.max_arity()
    }

    /// Expands a model of the original sentence to the fresh symbols by
    /// interpreting every marker as the truth value of its block. The result
    /// is a model of the normal form whenever `a` is a model of the sentence.
    pub fn expand_model(&self, a: &Structure) -> Result<Structure, EvalError> {
        let mut out = a.expand(&self.vocab)?;
        for d in &self.definitions {
            if a.vocab().contains(&d.symbol) {
                continue;
            }
            let c = Compiled::new(&d.block, out.vocab(), d.free.as_slice())?;
            let hits: Vec<usize> = match &d.free {
                Some(_) => (0..out.size()).filter(|&e| c.holds(&out, &[e])).collect(),
                None if c.holds(&out, &[]) => (0..out.size()).collect(),
                None => Vec::new(),
            };
            for e in hits {
                out.set(&d.symbol, &[e], true);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exist
            .iter()
            .map(|c| format!("({})", c.to_formula()))
            .chain(self.univ.iter().map(|c| format!("({})", c.to_formula())))
            .collect();
        f.write_str(&parts.join("\n& "))
    }
}

struct Builder {
    vocab: Vocabulary,
    counter: usize,
    fresh: Vec<String>,
    definitions: Vec<MarkerDefinition>,
    exist: Vec<ExistConjunct>,
    univ: Vec<UnivConjunct>,
}

impl Builder {
    fn marker(&mut self) -> String {
        loop {
            let name = format!("_nf{}", self.counter);
            self.counter += 1;
            if !self.vocab.contains(&name) {
                self.vocab.insert(&name, 1).expect("fresh");
                self.fresh.push(name.clone());
                return name;
            }
        }
    }

    // Replaces every outermost block of an NNF context by a marker atom.
    // Closed blocks are anchored at `anchor`.
    fn replace(&mut self, f: &Formula, anchor: &Var) -> Formula {
        match f {
            Formula::Not(a) => Formula::not(self.replace(a, anchor)),
            Formula::And(a, b) => Formula::and(self.replace(a, anchor), self.replace(b, anchor)),
            Formula::Or(a, b) => Formula::or(self.replace(a, anchor), self.replace(b, anchor)),
            Formula::Quant { kind, vars, body } => self.block(*kind, vars, body, f, anchor),
            _ => f.clone(),
        }
    }

    fn push(&mut self, kind: Quantifier, x: Var, ys: &[Var], matrix: Formula) {
        match kind {
            Quantifier::Exists => self.exist.push(ExistConjunct::new(x, ys.to_vec(), matrix)),
            _ => {
                let mut vars = vec![x];
                vars.extend(ys.iter().cloned());
                self.univ.push(UnivConjunct::new(vars, matrix));
            }
        }
    }

    fn block(&mut self, kind: Quantifier, vars: &[Var], body: &Formula, whole: &Formula, anchor: &Var) -> Formula {
        let matrix = self.replace(body, &vars[0]);
        let free = whole.free_vars();
        let p = self.marker();
        self.definitions.push(MarkerDefinition {
            symbol: p.clone(),
            free: free.iter().next().cloned(),
            block: Formula::quant(kind, vars.to_vec(), matrix.clone()),
        });
        match free.into_iter().next() {
            Some(x) => {
                let guarded = Formula::or(Formula::not(Formula::atom_vars(&p, vec![x.clone()])), matrix);
                self.push(kind, x.clone(), vars, guarded);
                Formula::atom_vars(&p, vec![x])
            }
            None => {
                let u = fresh_var("u", &whole.all_vars());
                let guarded = Formula::or(Formula::not(Formula::atom_vars(&p, vec![u.clone()])), matrix);
                self.push(kind, u, vars, guarded);
                self.constant(&p);
                Formula::atom_vars(&p, vec![anchor.clone()])
            }
        }
    }

    // ∀u∀v (P(u) <-> P(v))
    fn constant(&mut self, p: &str) {
        let pu = Formula::atom(p, &["u"]);
        let pv = Formula::atom(p, &["v"]);
        self.univ
            .push(UnivConjunct::new(vec![var("u"), var("v")], Formula::iff(pu, pv)));
    }

    fn top_conjunct(&mut self, f: &Formula) {
        match f {
            Formula::True => {}
            Formula::Quant {
                kind: Quantifier::Exists,
                vars,
                body,
            } => {
                let matrix = self.replace(body, &vars[0]);
                let u = fresh_var("u", &f.all_vars());
                self.exist.push(ExistConjunct::new(u, vars.clone(), matrix));
            }
            Formula::Quant {
                kind: Quantifier::Forall,
                vars,
                body,
            } if vars.len() == 1
                && matches!(
                    **body,
                    Formula::Quant {
                        kind: Quantifier::Exists,
                        ..
                    }
                ) =>
            {
                let Formula::Quant {
                    vars: ys, body: inner, ..
                } = &**body
                else {
                    unreachable!()
                };
                let matrix = self.replace(inner, &ys[0]);
                self.exist.push(ExistConjunct::new(vars[0].clone(), ys.clone(), matrix));
            }
            Formula::Quant {
                kind: Quantifier::Forall,
                vars,
                body,
            } => {
                let matrix = self.replace(body, &vars[0]);
                self.univ.push(UnivConjunct::new(vars.clone(), matrix));
            }
            other => {
                let x = fresh_var("x", &other.all_vars());
                let matrix = self.replace(other, &x);
                self.univ.push(UnivConjunct::new(vec![x], matrix));
            }
        }
    }
}

/// Translates a UF₁⁼ sentence into generalized Scott normal form over the
/// vocabulary extended by fresh unary symbols `_nfK`. Blocks are renamed
/// innermost first; every block occurs positively after NNF, so a single
/// implication `P(x) → block` defines each marker.
pub fn to_normal_form(phi: &Formula) -> Result<NormalForm, NormalFormError> {
    if phi.uses_counting() {
        return Err(NormalFormError::Counting);
    }
    let free = phi.free_vars();
    if !free.is_empty() {
        return Err(NormalFormError::FreeVariables(free.into_iter().collect()));
    }
    let report = validate_fragment(phi, false);
    if !report.member {
        return Err(NormalFormError::NotInFragment(report.violations));
    }
    let vocab = phi
        .vocabulary()
        .map_err(|e| NormalFormError::Vocabulary(e.to_string()))?;
    let prepared = phi.nnf().merge_blocks().simplify_constants();
    let mut b = Builder {
        vocab,
        counter: 0,
        fresh: Vec::new(),
        definitions: Vec::new(),
        exist: Vec::new(),
        univ: Vec::new(),
    };
    for c in prepared.conjuncts() {
        b.top_conjunct(c);
    }
    let mut nf = NormalForm::new(b.exist, b.univ, b.vocab);
    nf.fresh_symbols = b.fresh;
    nf.definitions = b.definitions;
    Ok(nf)
}

/// Like [`to_normal_form`], but the vocabulary also contains `base` (so a
/// structure over `base` can be checked against the result).
pub fn to_normal_form_over(phi: &Formula, base: &Vocabulary) -> Result<NormalForm, NormalFormError> {
    let mut nf = to_normal_form(phi)?;
    nf.vocab
        .merge(base)
        .map_err(|e| NormalFormError::Vocabulary(e.to_string()))?;
    Ok(nf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula_infer;

    fn nf(text: &str) -> NormalForm {
        let (f, _) = parse_formula_infer(text).unwrap();
        to_normal_form(&f).unwrap()
    }

    #[test]
    fn fo2_symmetry_is_already_normal() {
        let n = nf("A x. A y. (R(x,y) -> R(y,x))");
        assert_eq!(n.exist.len(), 1);
        assert_eq!(n.exist[0].matrix, Formula::eq("y", "x"));
        assert_eq!(n.univ.len(), 1);
        assert_eq!(n.univ[0].vars, vec![var("x"), var("y")]);
        assert_eq!(n.width(), 2);
        assert!(n.fresh_symbols.is_empty());
    }

    #[test]
    fn closed_existential_block() {
        let n = nf("E x y z. R(x,y,z)");
        assert_eq!(n.exist.len(), 1);
        assert_eq!(n.exist[0].ys.len(), 3);
        assert_eq!(n.exist[0].matrix, Formula::atom("R", &["x", "y", "z"]));
        assert_eq!(n.exist[0].live, [var("x"), var("y"), var("z")].into());
        assert_eq!(n.width(), 4);
        assert_eq!(n.univ[0].matrix, Formula::eq("x", "x"));
    }

    #[test]
    fn nested_blocks_get_markers() {
        let n = nf("A x. E y.(R(x,y) & E z.(S(y,z)))");
        assert_eq!(n.fresh_symbols.len(), 1);
        assert_eq!(n.exist.len(), 2);
        let inner = &n.exist[0];
        assert_eq!(inner.x, var("y"));
        assert_eq!(inner.to_formula().to_string(), "A y. E z. ~_nf0(y) | S(y,z)");
        assert_eq!(n.exist[1].to_formula().to_string(), "A x. E y. R(x,y) & _nf0(y)");
        assert!(validate_fragment(&n.to_formula(), false).member);
    }

    #[test]
    fn closed_nested_block_is_constant() {
        let n = nf("A x. (P(x) | E y. Q(y))");
        assert!(n.univ.iter().any(|u| u.vars == vec![var("u"), var("v")]));
        assert!(validate_fragment(&n.to_formula(), false).member);
    }

    #[test]
    fn rejections() {
        let (f, _) = parse_formula_infer("E[=1] x. P(x)").unwrap();
        assert_eq!(to_normal_form(&f), Err(NormalFormError::Counting));
        let (f, _) = parse_formula_infer("P(x)").unwrap();
        assert!(matches!(to_normal_form(&f), Err(NormalFormError::FreeVariables(_))));
        let (f, _) = parse_formula_infer("E x y z. (R(x,y,z) & R(x,y,y))").unwrap();
        assert!(matches!(to_normal_form(&f), Err(NormalFormError::NotInFragment(_))));
    }

    #[test]
    fn false_sentence() {
        let n = nf("false");
        assert!(n.univ.iter().any(|u| u.matrix == Formula::False));
    }

    #[test]
    fn expanded_models_satisfy_the_normal_form() {
        use crate::structures::{evaluate_sentence, parse_structure};
        let n = nf("A x. E y.(R(x,y) & E z.(S(y,z))) & (E x. P(x) | A x. ~P(x))");
        let a = parse_structure(
            "domain = 3\nrel R/2 = { (0 1) (1 2) (2 0) }\nrel S/2 = { (0 0) (1 0) (2 1) }\nrel P/1 = { (1) }",
        )
        .unwrap();
        let b = n.expand_model(&a).unwrap();
        assert!(evaluate_sentence(&b, &n.to_formula()).unwrap());
    }
}
