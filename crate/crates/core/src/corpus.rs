//! Seeded random generators for formulas, normal forms and structures.
//! Everything here is deterministic in the seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::normal_form::{ExistConjunct, NormalForm, UnivConjunct};
use crate::structures::{for_each_tuple, Compiled, Structure};
use crate::syntax::{validate_fragment, Formula, Quantifier, Var, Vocabulary};

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape parameters for random formulas.
#[derive(Clone, Debug)]
pub struct FormulaParams {
    pub vocab: Vocabulary,
    pub max_nodes: usize,
    pub max_depth: usize,
    pub max_bound: usize,
}

impl FormulaParams {
    pub fn new(vocab: Vocabulary, max_nodes: usize) -> FormulaParams {
        FormulaParams {
            vocab,
            max_nodes,
            max_depth: 2,
            max_bound: 2,
        }
    }
}

pub fn vocab(pairs: &[(&str, usize)]) -> Vocabulary {
    Vocabulary::from_pairs(pairs.iter().copied()).expect("valid vocabulary")
}

struct Gen<'a> {
    rng: &'a mut CorpusRng,
    p: &'a FormulaParams,
    budget: isize,
    counter: usize,
}

impl Gen<'_> {
    fn fresh(&mut self) -> Var {
        self.counter += 1;
        const NAMES: [&str; 6] = ["x", "y", "z", "w", "u", "v"];
        let i = self.counter - 1;
        if i < NAMES.len() {
            Var::new(NAMES[i])
        } else {
            Var::new(format!("x{i}"))
        }
    }

    fn symbols_of_arity_at_least(&self, k: usize) -> Vec<(String, usize)> {
        self.p
            .vocab
            .iter()
            .filter(|&(_, a)| a >= k)
            .map(|(n, a)| (n.to_string(), a))
            .collect()
    }

    // An atom whose distinct variables are exactly `vs`.
    fn onto_atom(&mut self, vs: &[Var]) -> Option<Formula> {
        let cands = self.symbols_of_arity_at_least(vs.len());
        let (name, arity) = cands.choose(self.rng)?.clone();
        let mut args: Vec<Var> = vs.to_vec();
        while args.len() < arity {
            args.push(vs.choose(self.rng).unwrap().clone());
        }
        args.shuffle(self.rng);
        Some(Formula::atom_vars(&name, args))
    }

    fn unary_atom(&mut self, v: &Var) -> Option<Formula> {
        let syms: Vec<(String, usize)> = self.symbols_of_arity_at_least(1);
        let (name, arity) = syms.choose(self.rng)?.clone();
        // wide symbols only contribute their diagonal here
        if arity > 1 && self.rng.gen_bool(0.6) {
            let unary: Vec<(String, usize)> = syms.iter().filter(|(_, a)| *a == 1).cloned().collect();
            if let Some((n, _)) = unary.choose(self.rng) {
                return Some(Formula::atom_vars(n, vec![v.clone()]));
            }
        }
        Some(Formula::atom_vars(&name, vec![v.clone(); arity]))
    }

    fn leaf(&mut self, scope: &[Var], live: &[Var], depth: usize) -> Formula {
        self.budget -= 1;
        loop {
            let roll = self.rng.gen_range(0..100);
            let f = if roll < 35 && live.len() >= 2 {
                self.onto_atom(live)
            } else if roll < 60 && !scope.is_empty() {
                let v = scope.choose(self.rng).unwrap().clone();
                self.unary_atom(&v)
            } else if roll < 72 && scope.len() >= 2 {
                let a = scope.choose(self.rng).unwrap().clone();
                let b = scope.choose(self.rng).unwrap().clone();
                Some(Formula::Eq(a, b))
            } else if roll < 97 && depth < self.p.max_depth && self.budget > 3 {
                let free = if !scope.is_empty() && self.rng.gen_bool(0.8) {
                    Some(scope.choose(self.rng).unwrap().clone())
                } else {
                    None
                };
                self.budget += 1;
                Some(self.block(free, depth + 1))
            } else if roll >= 97 {
                Some(if self.rng.gen_bool(0.5) {
                    Formula::True
                } else {
                    Formula::False
                })
            } else {
                None
            };
            if let Some(f) = f {
                return f;
            }
        }
    }

    fn boolean(&mut self, scope: &[Var], live: &[Var], depth: usize) -> Formula {
        if self.budget <= 1 || self.rng.gen_bool(0.35) {
            return self.leaf(scope, live, depth);
        }
        self.budget -= 1;
        match self.rng.gen_range(0..5) {
            0 => Formula::not(self.boolean(scope, live, depth)),
            1 | 2 => {
                let a = self.boolean(scope, live, depth);
                let b = self.boolean(scope, live, depth);
                Formula::and(a, b)
            }
            _ => {
                let a = self.boolean(scope, live, depth);
                let b = self.boolean(scope, live, depth);
                Formula::or(a, b)
            }
        }
    }

    fn block(&mut self, free: Option<Var>, depth: usize) -> Formula {
        self.budget -= 1;
        let kind = if self.rng.gen_bool(0.5) {
            Quantifier::Exists
        } else {
            Quantifier::Forall
        };
        let nb = self.rng.gen_range(1..=self.p.max_bound);
        let bound: Vec<Var> = (0..nb).map(|_| self.fresh()).collect();
        let mut scope = bound.clone();
        if let Some(x) = &free {
            scope.insert(0, x.clone());
        }
        let max_k = self.p.vocab.max_arity().min(scope.len());
        let live: Vec<Var> = if max_k >= 2 && self.rng.gen_bool(0.75) {
            let k = self.rng.gen_range(2..=max_k);
            let mut s = scope.clone();
            s.shuffle(self.rng);
            s.truncate(k);
            s
        } else {
            Vec::new()
        };
        let mut body = self.boolean(&scope, &live, depth);
        // make sure the free variable really occurs
        if let Some(x) = &free {
            if !body.free_vars().contains(x) {
                if let Some(u) = self.unary_atom(x) {
                    body = Formula::and(body, u);
                }
            }
        }
        Formula::quant(kind, bound, body)
    }
}

/// A random UF₁⁼ sentence within the node budget.
pub fn random_sentence(rng: &mut CorpusRng, p: &FormulaParams) -> Formula {
    loop {
        let mut g = Gen {
            rng,
            p,
            budget: p.max_nodes as isize - 1,
            counter: 0,
        };
        let f = if g.rng.gen_bool(0.3) {
            let a = g.block(None, 0);
            let b = g.block(None, 0);
            if g.rng.gen_bool(0.7) {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        } else {
            g.block(None, 0)
        };
        if f.node_count() <= p.max_nodes && validate_fragment(&f, false).member {
            return f;
        }
    }
}

/// Smallest node budget [`random_formula`] works with when `free` is set;
/// lower budgets are raised to it.
pub const MIN_OPEN_NODES: usize = 8;

/// A random UF₁⁼ formula with exactly the free variable `x`, or a sentence.
pub fn random_formula(rng: &mut CorpusRng, p: &FormulaParams, free: bool) -> Formula {
    if !free {
        return random_sentence(rng, p);
    }
    let max_nodes = p.max_nodes.max(MIN_OPEN_NODES);
    loop {
        let mut g = Gen {
            rng,
            p,
            budget: max_nodes as isize - 1,
            counter: 1,
        };
        let x = Var::new("x");
        let f = g.boolean(std::slice::from_ref(&x), &[], 0);
        let ok_free = f.free_vars().iter().all(|v| *v == x);
        let has_block = !f.is_quantifier_free();
        if ok_free && has_block && f.node_count() <= max_nodes && validate_fragment(&f, false).member {
            return f;
        }
    }
}

// A quantifier-free matrix over `vars` with live set `live`.
fn random_matrix(rng: &mut CorpusRng, vocab: &Vocabulary, vars: &[Var], live: &[Var], nodes: usize) -> Formula {
    let p = FormulaParams {
        vocab: vocab.clone(),
        max_nodes: nodes,
        max_depth: 0,
        max_bound: 1,
    };
    let mut g = Gen {
        rng,
        p: &p,
        budget: nodes as isize,
        counter: 0,
    };
    g.boolean(vars, live, 0)
}

fn live_choice(rng: &mut CorpusRng, vocab: &Vocabulary, vars: &[Var]) -> Vec<Var> {
    let max_k = vocab.max_arity().min(vars.len());
    if max_k >= 2 && rng.gen_bool(0.8) {
        let k = rng.gen_range(2..=max_k);
        let mut s = vars.to_vec();
        s.shuffle(rng);
        s.truncate(k);
        s
    } else {
        Vec::new()
    }
}

/// A quantifier-free matrix over `vars` whose atoms of arity > 1 all use one
/// randomly chosen live set.
pub fn random_uniform_matrix(rng: &mut CorpusRng, vocab: &Vocabulary, vars: &[Var], nodes: usize) -> Formula {
    let live = live_choice(rng, vocab, vars);
    random_matrix(rng, vocab, vars, &live, nodes)
}

fn names(prefix: &str, n: usize) -> Vec<Var> {
    (1..=n).map(|i| Var::new(format!("{prefix}{i}"))).collect()
}

/// A random normal form with up to two conjuncts of each kind.
pub fn random_normal_form(rng: &mut CorpusRng, vocab: &Vocabulary, matrix_nodes: usize) -> NormalForm {
    let me = rng.gen_range(1..=2);
    let mu = rng.gen_range(1..=2);
    let mut exist = Vec::new();
    for _ in 0..me {
        let k = rng.gen_range(1..=2);
        let x = Var::new("x");
        let ys = names("y", k);
        let mut all = vec![x.clone()];
        all.extend(ys.iter().cloned());
        let live = live_choice(rng, vocab, &all);
        let m = random_matrix(rng, vocab, &all, &live, matrix_nodes);
        exist.push(ExistConjunct::new(x, ys, m));
    }
    let mut univ = Vec::new();
    for _ in 0..mu {
        let l = rng.gen_range(1..=3);
        let xs = names("x", l);
        let live = live_choice(rng, vocab, &xs);
        let m = random_matrix(rng, vocab, &xs, &live, matrix_nodes);
        univ.push(UnivConjunct::new(xs, m));
    }
    NormalForm::new(exist, univ, vocab.clone())
}

/// Each tuple holds with probability `density`.
pub fn random_structure(rng: &mut CorpusRng, vocab: &Vocabulary, size: usize, density: f64) -> Structure {
    let mut s = Structure::new(vocab.clone(), size).expect("non-empty");
    for (name, k) in vocab.iter() {
        let name = name.to_string();
        let mut hits = Vec::new();
        for_each_tuple(size, k, |t| {
            if rng.gen_bool(density) {
                hits.push(t.to_vec());
            }
        });
        for t in hits {
            s.set(&name, &t, true);
        }
    }
    s
}

/// A random normal form that `model` satisfies, found by rejection
/// sampling of the individual conjuncts. `None` if sampling fails.
pub fn normal_form_satisfied_by(
    rng: &mut CorpusRng,
    model: &Structure,
    matrix_nodes: usize,
    tries: usize,
) -> Option<NormalForm> {
    let vocab = model.vocab();
    let mut exist = Vec::new();
    let target_e = rng.gen_range(1..=2);
    for _ in 0..tries {
        if exist.len() == target_e {
            break;
        }
        let k = rng.gen_range(1..=2);
        let x = Var::new("x");
        let ys = names("y", k);
        let mut all = vec![x.clone()];
        all.extend(ys.iter().cloned());
        let live = live_choice(rng, vocab, &all);
        let m = random_matrix(rng, vocab, &all, &live, matrix_nodes);
        let c = ExistConjunct::new(x, ys, m);
        let ok = Compiled::sentence(&c.to_formula(), vocab)
            .expect("compiles")
            .holds(model, &[]);
        // skip conjuncts that hold for trivial reasons on every element
        if ok && !c.live.is_empty() {
            exist.push(c);
        }
    }
    let mut univ = Vec::new();
    for _ in 0..tries {
        if univ.len() == 1 {
            break;
        }
        let l = rng.gen_range(2..=3);
        let xs = names("x", l);
        let live = live_choice(rng, vocab, &xs);
        let m = random_matrix(rng, vocab, &xs, &live, matrix_nodes);
        let c = UnivConjunct::new(xs, m);
        let ok = Compiled::sentence(&c.to_formula(), vocab)
            .expect("compiles")
            .holds(model, &[]);
        if ok && !c.live.is_empty() {
            univ.push(c);
        }
    }
    if exist.is_empty() {
        return None;
    }
    Some(NormalForm::new(exist, univ, vocab.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentences_are_members_and_deterministic() {
        let p = FormulaParams::new(vocab(&[("P", 1), ("R", 2), ("T", 3)]), 30);
        let a: Vec<Formula> = {
            let mut r = rng(7);
            (0..50).map(|_| random_sentence(&mut r, &p)).collect()
        };
        let b: Vec<Formula> = {
            let mut r = rng(7);
            (0..50).map(|_| random_sentence(&mut r, &p)).collect()
        };
        assert_eq!(a, b);
        for f in &a {
            assert!(f.free_vars().is_empty());
            assert!(f.node_count() <= 30);
            assert!(validate_fragment(f, false).member, "{f}");
        }
    }

    #[test]
    fn open_formulas_have_one_free_variable() {
        let p = FormulaParams::new(vocab(&[("P", 1), ("Q", 1), ("R", 2)]), 25);
        let mut r = rng(3);
        for _ in 0..30 {
            let f = random_formula(&mut r, &p, true);
            assert!(f.free_vars().len() <= 1);
        }
    }

    #[test]
    fn random_normal_forms_validate() {
        let v = vocab(&[("P", 1), ("R", 2), ("T", 3)]);
        let mut r = rng(11);
        for _ in 0..30 {
            let nf = random_normal_form(&mut r, &v, 6);
            assert!(validate_fragment(&nf.to_formula(), false).member);
        }
    }
}
