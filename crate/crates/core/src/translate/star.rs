//! Star centre formulas and star centre types over a vocabulary of unary
//! and binary symbols, and their counting translations into two variables.

use std::collections::{BTreeMap, BTreeSet};

use super::diagram::diff;
use super::TranslateError;
use crate::structures::{onto_shapes, OneType};
use crate::syntax::{Formula, Quantifier, Var, Vocabulary};

/// `∃x₁…x_k (diff(x₀,…,x_k) ∧ ⋀ literals)` where every literal mentions
/// at most `x₀` and one `x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarCentreFormula {
    pub centre: Var,
    pub bound: Vec<Var>,
    pub literals: Vec<Formula>,
}

/// Maximal consistent set of literals over two variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoType {
    pub first: OneType,
    pub second: OneType,
    /// Polarities of the two-variable shapes, in `onto_shapes(vocab, 2)` order.
    pub arrows: Vec<bool>,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarCentreType {
    pub vocab: Vocabulary,
    pub centre: Var,
    pub bound: Vec<Var>,
    pub centre_type: OneType,
    /// One 2-type per ray `(x₀, x_i)`; all have `equal == false`.
    pub rays: Vec<TwoType>,
}

fn literal_parts(l: &Formula) -> Option<(&str, &[Var], bool)> {
    match l {
        Formula::Atom { rel, args } => Some((rel, args, true)),
        Formula::Not(inner) => match &**inner {
            Formula::Atom { rel, args } => Some((rel, args, false)),
            _ => None,
        },
        _ => None,
    }
}

impl StarCentreFormula {
    pub fn new(centre: Var, bound: Vec<Var>, literals: Vec<Formula>) -> Result<Self, TranslateError> {
        let f = StarCentreFormula {
            centre,
            bound,
            literals,
        };
        for l in &f.literals {
            let Some((rel, args, _)) = literal_parts(l) else {
                return Err(TranslateError::StarShape(format!("{l} is not a literal")));
            };
            if args.len() > 2 {
                return Err(TranslateError::Arity {
                    symbol: rel.to_string(),
                    arity: args.len(),
                });
            }
            let rays: BTreeSet<&Var> = args.iter().filter(|a| **a != f.centre).collect();
            if rays.len() > 1 || rays.iter().any(|v| !f.bound.contains(v)) {
                return Err(TranslateError::StarShape(format!("{l} does not sit on a single ray")));
            }
        }
        Ok(f)
    }

    pub fn vocabulary(&self) -> Vocabulary {
        Formula::and_all(self.literals.iter().cloned())
            .vocabulary()
            .expect("literals agree on arities")
    }

    pub fn to_formula(&self) -> Formula {
        let vars: Vec<Var> = std::iter::once(self.centre.clone())
            .chain(self.bound.iter().cloned())
            .collect();
        let body = Formula::and(diff(&vars), Formula::and_all(self.literals.iter().cloned()));
        if self.bound.is_empty() {
            body.simplify_constants()
        } else {
            Formula::quant(Quantifier::Exists, self.bound.clone(), body.simplify_constants())
        }
    }
}

impl TwoType {
    pub fn to_formula(&self, vocab: &Vocabulary, x: &Var, y: &Var) -> Formula {
        let first = self.first.to_formula(vocab, x);
        if self.equal {
            return Formula::and(Formula::Eq(x.clone(), y.clone()), first);
        }
        let names: Vec<&str> = vocab.iter().map(|(n, _)| n).collect();
        let pair = [x.clone(), y.clone()];
        let arrows = onto_shapes(vocab, 2).into_iter().zip(&self.arrows).map(|((r, t), &b)| {
            let a = Formula::atom_vars(names[r], t.iter().map(|&i| pair[i].clone()).collect());
            if b {
                a
            } else {
                Formula::not(a)
            }
        });
        Formula::and_all(
            [
                Formula::not(Formula::Eq(x.clone(), y.clone())),
                first,
                self.second.to_formula(vocab, y),
            ]
            .into_iter()
            .chain(arrows),
        )
    }
}

impl StarCentreType {
    pub fn width(&self) -> usize {
        self.rays.len()
    }

    pub fn to_formula(&self) -> Formula {
        let vars: Vec<Var> = std::iter::once(self.centre.clone())
            .chain(self.bound.iter().cloned())
            .collect();
        let mut items = vec![diff(&vars), self.centre_type.to_formula(&self.vocab, &self.centre)];
        for (t, v) in self.rays.iter().zip(&self.bound) {
            items.push(t.to_formula(&self.vocab, &self.centre, v));
        }
        let body = Formula::and_all(items).simplify_constants();
        if self.bound.is_empty() {
            body
        } else {
            Formula::quant(Quantifier::Exists, self.bound.clone(), body)
        }
    }

    /// How many rays realize each 2-type.
    pub fn counts(&self) -> BTreeMap<&TwoType, usize> {
        let mut m = BTreeMap::new();
        for t in &self.rays {
            *m.entry(t).or_insert(0) += 1;
        }
        m
    }
}

// Truth of a literal over {centre, ray} given the centre's type, the ray's
// type and the arrows between them.
fn literal_holds(
    vocab: &Vocabulary,
    shapes: &[(usize, Vec<usize>)],
    lit: &Formula,
    centre: &Var,
    alpha0: &OneType,
    ray: Option<(&OneType, &[bool])>,
) -> bool {
    let (rel, args, pol) = literal_parts(lit).expect("literal");
    let r = vocab.index_of(rel).expect("symbol in vocabulary");
    let value = if args.iter().all(|a| a == centre) {
        alpha0.bits[r]
    } else if args.iter().all(|a| a != centre) {
        ray.expect("ray literal").0.bits[r]
    } else {
        let t: Vec<usize> = args.iter().map(|a| usize::from(a != centre)).collect();
        let i = shapes
            .iter()
            .position(|(s, u)| *s == r && *u == t)
            .expect("binary shape");
        ray.expect("ray literal").1[i]
    };
    value == pol
}

/// Splits a star centre formula into the disjunction of the star centre
/// types that entail it. Distinct results differ in some literal.
pub fn expand_star_centre(f: &StarCentreFormula) -> Vec<StarCentreType> {
    let vocab = f.vocabulary();
    let shapes = onto_shapes(&vocab, 2);
    let types = OneType::all(&vocab);
    let on_centre: Vec<&Formula> = f
        .literals
        .iter()
        .filter(|l| l.free_vars().iter().all(|v| *v == f.centre))
        .collect();
    let mut out = Vec::new();
    for alpha0 in &types {
        if !on_centre
            .iter()
            .all(|l| literal_holds(&vocab, &shapes, l, &f.centre, alpha0, None))
        {
            continue;
        }
        // consistent 2-types per ray
        let mut per_ray: Vec<Vec<TwoType>> = Vec::new();
        for v in &f.bound {
            let lits: Vec<&Formula> = f.literals.iter().filter(|l| l.free_vars().contains(v)).collect();
            let mut options = Vec::new();
            for second in &types {
                for mask in 0u64..1 << shapes.len() {
                    let arrows: Vec<bool> = (0..shapes.len()).map(|i| mask >> i & 1 == 1).collect();
                    if lits
                        .iter()
                        .all(|l| literal_holds(&vocab, &shapes, l, &f.centre, alpha0, Some((second, &arrows))))
                    {
                        options.push(TwoType {
                            first: alpha0.clone(),
                            second: second.clone(),
                            arrows,
                            equal: false,
                        });
                    }
                }
            }
            per_ray.push(options);
        }
        let mut choice = vec![0usize; per_ray.len()];
        if per_ray.iter().any(Vec::is_empty) {
            continue;
        }
        loop {
            out.push(StarCentreType {
                vocab: vocab.clone(),
                centre: f.centre.clone(),
                bound: f.bound.clone(),
                centre_type: alpha0.clone(),
                rays: choice.iter().zip(&per_ray).map(|(&c, o)| o[c].clone()).collect(),
            });
            let mut i = choice.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < per_ray[i].len() {
                    break;
                }
                choice[i] = 0;
            }
            if choice.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    out
}

/// `∃^{≥n} y cell(x, y)`, plain `∃` for `n = 1`.
pub(crate) fn at_least(n: usize, y: &Var, cell: Formula) -> Formula {
    match n {
        0 => Formula::True,
        1 => Formula::quant(Quantifier::Exists, vec![y.clone()], cell),
        _ => Formula::quant(Quantifier::AtLeast(n as u32), vec![y.clone()], cell),
    }
}

/// Count condition for a star whose centre `x` must avoid the current
/// value of `y`: at least `n` witnesses other than that value.
pub(crate) fn at_least_excluding(n: usize, y: &Var, cell: Formula) -> Formula {
    if n == 0 {
        return Formula::True;
    }
    Formula::or(
        Formula::and(Formula::not(cell.clone()), at_least(n, y, cell.clone())),
        at_least(n + 1, y, cell),
    )
}

/// `α₀(x) ∧ ⋀_T ∃^{≥#T} y T(x, y)`.
pub fn star_centre_to_foc2(sct: &StarCentreType, x: &Var, y: &Var) -> Formula {
    star_counts(sct, x, y, false)
}

pub(crate) fn star_counts(sct: &StarCentreType, x: &Var, y: &Var, exclude: bool) -> Formula {
    let mut items = vec![sct.centre_type.to_formula(&sct.vocab, x)];
    for (t, n) in sct.counts() {
        let cell = t.to_formula(&sct.vocab, x, y);
        items.push(if exclude {
            at_least_excluding(n, y, cell)
        } else {
            at_least(n, y, cell)
        });
    }
    Formula::and_all(items)
}

/// Ray conditions grouped into cells: for a non-empty set `Z` of rays,
/// `cell_Z(x, y)` says `y ≠ x` satisfies exactly the rays in `Z`. The
/// result lists the achievable count vectors, each as `(Z, count)` pairs.
pub(crate) fn cell_options(rays: &[Formula]) -> Vec<Vec<(u32, usize)>> {
    let k = rays.len();
    let possible = achievable_cells(rays);
    let mut seen = BTreeSet::new();
    let mut options = Vec::new();
    // each ray goes to some cell containing it
    let cells_for: Vec<Vec<u32>> = (0..k)
        .map(|i| possible.iter().copied().filter(|z| z >> i & 1 == 1).collect())
        .collect();
    if cells_for.iter().any(Vec::is_empty) {
        return options;
    }
    let mut choice = vec![0usize; k];
    loop {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for (i, &c) in choice.iter().enumerate() {
            *counts.entry(cells_for[i][c]).or_insert(0) += 1;
        }
        let v: Vec<(u32, usize)> = counts.into_iter().collect();
        if seen.insert(v.clone()) {
            options.push(v);
        }
        let mut i = k;
        let mut done = true;
        while i > 0 {
            i -= 1;
            choice[i] += 1;
            if choice[i] < cells_for[i].len() {
                done = false;
                break;
            }
            choice[i] = 0;
        }
        if done {
            break;
        }
    }
    options
}

// Non-empty ray sets realizable by some valuation of the atoms involved.
fn achievable_cells(rays: &[Formula]) -> Vec<u32> {
    let k = rays.len();
    let all: Vec<u32> = (1..1u32 << k).collect();
    let mut atoms = BTreeSet::new();
    for r in rays {
        r.visit(&mut |g| {
            if matches!(g, Formula::Atom { .. } | Formula::Eq(..)) {
                atoms.insert(g.clone());
            }
        });
    }
    if atoms.len() > 16 {
        return all;
    }
    let atoms: Vec<Formula> = atoms.into_iter().collect();
    let mut seen = BTreeSet::new();
    for mask in 0u32..1 << atoms.len() {
        let val: BTreeMap<&Formula, bool> = atoms.iter().enumerate().map(|(i, a)| (a, mask >> i & 1 == 1)).collect();
        let z = (0..k)
            .filter(|&i| eval_prop(&rays[i], &val))
            .fold(0u32, |z, i| z | 1 << i);
        if z != 0 {
            seen.insert(z);
        }
    }
    seen.into_iter().collect()
}

fn eval_prop(f: &Formula, val: &BTreeMap<&Formula, bool>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Not(a) => !eval_prop(a, val),
        Formula::And(a, b) => eval_prop(a, val) && eval_prop(b, val),
        Formula::Or(a, b) => eval_prop(a, val) || eval_prop(b, val),
        other => val[other],
    }
}

/// The cell formula for the ray set `z`.
pub(crate) fn cell(z: u32, rays: &[Formula], x: &Var, y: &Var) -> Formula {
    let mut items = vec![Formula::not(Formula::Eq(y.clone(), x.clone()))];
    for (i, r) in rays.iter().enumerate() {
        items.push(if z >> i & 1 == 1 {
            r.clone()
        } else {
            Formula::not(r.clone())
        });
    }
    Formula::and_all(items)
}
