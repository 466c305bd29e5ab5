//! Diagram normal form: every positive block becomes a disjunction of
//! blocks `∃x̄ (β(x,y) ∧ diff(x₀,…,x_k) ∧ ψ₀(x₀) ∧ … ∧ ψ_k(x_k))`.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Formula, Quantifier, Var};

/// A full binary diagram over the listed binary symbols: one literal for
/// `R(x,y)` and one for `R(y,x)` per symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub x: Var,
    pub y: Var,
    pub literals: Vec<Formula>,
}

impl Diagram {
    pub fn involves(&self, v: &Var) -> bool {
        self.x == *v || self.y == *v
    }

    pub fn renamed(&self, map: &BTreeMap<Var, Var>) -> Formula {
        Formula::and_all(self.literals.iter().map(|l| l.rename_free(map)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramBlock {
    /// The block is additionally wrapped in `∃centre`.
    pub closed: bool,
    pub centre: Var,
    pub bound: Vec<Var>,
    /// `None` stands for the empty diagram `⊤`.
    pub diagram: Option<Diagram>,
    /// `parts[0]` constrains the centre, `parts[i]` the `i`-th bound
    /// variable; each entry is a simple formula.
    pub parts: Vec<Vec<Formula>>,
}

impl DiagramBlock {
    pub fn vars(&self) -> Vec<Var> {
        std::iter::once(self.centre.clone())
            .chain(self.bound.iter().cloned())
            .collect()
    }

    /// The diagram mentions the centre (or there is none).
    pub fn touches_centre(&self) -> bool {
        self.diagram.as_ref().is_none_or(|d| d.involves(&self.centre))
    }

    pub fn to_formula(&self) -> Formula {
        let vars = self.vars();
        let mut items = Vec::new();
        if let Some(d) = &self.diagram {
            items.extend(d.literals.iter().cloned());
        }
        if vars.len() > 1 {
            items.push(diff(&vars));
        }
        for p in &self.parts {
            items.extend(p.iter().cloned());
        }
        let body = Formula::and_all(items);
        let inner = if self.bound.is_empty() {
            body
        } else {
            Formula::quant(Quantifier::Exists, self.bound.clone(), body)
        };
        if self.closed {
            Formula::quant(Quantifier::Exists, vec![self.centre.clone()], inner)
        } else {
            inner
        }
    }
}

/// Conjunction of `¬vᵢ = vⱼ` for all `i < j`.
pub fn diff(vars: &[Var]) -> Formula {
    let mut items = Vec::new();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            items.push(Formula::not(Formula::Eq(vars[i].clone(), vars[j].clone())));
        }
    }
    Formula::and_all(items)
}

/// Rewrites `∀x̄ψ` as `¬∃x̄¬ψ` and merges directly nested `∃`-blocks.
pub fn existential_form(f: &Formula) -> Formula {
    fn go(f: &Formula) -> Formula {
        match f {
            Formula::Not(a) => Formula::not(go(a)),
            Formula::And(a, b) => Formula::and(go(a), go(b)),
            Formula::Or(a, b) => Formula::or(go(a), go(b)),
            Formula::Quant {
                kind: Quantifier::Forall,
                vars,
                body,
            } => Formula::not(Formula::quant(
                Quantifier::Exists,
                vars.clone(),
                go(&Formula::not((**body).clone())),
            )),
            Formula::Quant { kind, vars, body } => Formula::quant(*kind, vars.clone(), go(body)),
            _ => f.clone(),
        }
    }
    go(f).merge_blocks()
}

/// Gives every bound variable a name of its own, distinct from all
/// variables of `f`, so later renamings cannot capture.
pub fn standardize_apart(f: &Formula) -> Formula {
    let mut taken = f.all_vars();
    let mut counter = 0;
    fn go(f: &Formula, map: &BTreeMap<Var, Var>, taken: &mut BTreeSet<Var>, counter: &mut usize) -> Formula {
        match f {
            Formula::Quant { kind, vars, body } => {
                let mut inner = map.clone();
                let mut fresh = Vec::new();
                for v in vars {
                    let n = loop {
                        *counter += 1;
                        let n = Var::new(format!("v{counter}"));
                        if !taken.contains(&n) {
                            break n;
                        }
                    };
                    taken.insert(n.clone());
                    inner.insert(v.clone(), n.clone());
                    fresh.push(n);
                }
                Formula::quant(*kind, fresh, go(body, &inner, taken, counter))
            }
            Formula::Not(a) => Formula::not(go(a, map, taken, counter)),
            Formula::And(a, b) => Formula::and(go(a, map, taken, counter), go(b, map, taken, counter)),
            Formula::Or(a, b) => Formula::or(go(a, map, taken, counter), go(b, map, taken, counter)),
            _ => f.rename_free(map),
        }
    }
    go(f, &BTreeMap::new(), &mut taken, &mut counter)
}

/// Disjunctive normal form over simple formulas (literals and blocks).
/// Contradictory conjunctions are dropped.
pub fn dnf(f: &Formula) -> Vec<Vec<Formula>> {
    fn go(f: &Formula, positive: bool) -> Vec<Vec<Formula>> {
        match (f, positive) {
            (Formula::True, true) | (Formula::False, false) => vec![vec![]],
            (Formula::True, false) | (Formula::False, true) => vec![],
            (Formula::Not(a), p) => go(a, !p),
            (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
                let left = go(a, positive);
                let right = go(b, positive);
                let mut out = Vec::new();
                for l in &left {
                    for r in &right {
                        let mut c = l.clone();
                        c.extend(r.iter().cloned());
                        out.push(c);
                    }
                }
                out
            }
            (Formula::Or(a, b), true) | (Formula::And(a, b), false) => {
                let mut out = go(a, positive);
                out.extend(go(b, positive));
                out
            }
            (simple, true) => vec![vec![simple.clone()]],
            (simple, false) => vec![vec![Formula::not(simple.clone())]],
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c in go(f, true) {
        let set: BTreeSet<Formula> = c.into_iter().collect();
        let contradictory = set.iter().any(|l| match l {
            Formula::Not(a) => set.contains(a),
            _ => false,
        });
        if !contradictory && seen.insert(set.clone()) {
            out.push(set.into_iter().collect());
        }
    }
    out
}

fn identity(f: &Formula) -> Option<(&Var, &Var, bool)> {
    match f {
        Formula::Eq(a, b) => Some((a, b, true)),
        Formula::Not(inner) => match &**inner {
            Formula::Eq(a, b) => Some((a, b, false)),
            _ => None,
        },
        _ => None,
    }
}

// Binary arrow `R(u,w)` or its negation with distinct variables.
fn arrow(f: &Formula) -> Option<(&str, &Var, &Var)> {
    let atom = match f {
        Formula::Not(inner) => &**inner,
        other => other,
    };
    match atom {
        Formula::Atom { rel, args } if args.len() == 2 && args[0] != args[1] => {
            Some((rel.as_str(), &args[0], &args[1]))
        }
        _ => None,
    }
}

/// Set partitions of `0..n` as restricted growth strings.
pub(crate) fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for c in 0..=next {
            prefix.push(c);
            go(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// Splits the positive block `∃vars body` (free variable `free`, if any)
/// into diagram blocks whose disjunction is equivalent to it. A closed
/// block is centred at its first bound variable that occurs in `body`.
pub fn diagram_blocks(vars: &[Var], body: &Formula, free: Option<&Var>) -> Vec<DiagramBlock> {
    let occurring = body.free_vars();
    let (centre, closed, rest): (Var, bool, Vec<Var>) = match free {
        Some(x) => (x.clone(), false, vars.to_vec()),
        None => {
            let c = vars.iter().find(|v| occurring.contains(*v)).unwrap_or(&vars[0]).clone();
            (c.clone(), true, vars.iter().filter(|v| **v != c).cloned().collect())
        }
    };
    // vacuous variables only demand a non-empty domain
    let bound: Vec<Var> = rest.into_iter().filter(|v| occurring.contains(v)).collect();
    let all: Vec<Var> = std::iter::once(centre.clone()).chain(bound.iter().cloned()).collect();
    let index: BTreeMap<&Var, usize> = all.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let parts_all = partitions(all.len());

    let mut out = Vec::new();
    for conj in dnf(body) {
        let mut ids = Vec::new();
        let mut others = Vec::new();
        let mut impossible = false;
        for lit in conj {
            match identity(&lit) {
                Some((a, b, pol)) if a == b => impossible |= !pol,
                Some((a, b, pol)) => ids.push((index[a], index[b], pol)),
                None => others.push(lit),
            }
        }
        if impossible {
            continue;
        }
        for p in &parts_all {
            if !ids.iter().all(|&(a, b, pol)| (p[a] == p[b]) == pol) {
                continue;
            }
            // representative of each class: first variable, so x₀ stays
            let mut rep_of_class: BTreeMap<usize, Var> = BTreeMap::new();
            for (i, v) in all.iter().enumerate() {
                rep_of_class.entry(p[i]).or_insert_with(|| v.clone());
            }
            let map: BTreeMap<Var, Var> = all
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), rep_of_class[&p[i]].clone()))
                .collect();
            let reps: Vec<Var> = rep_of_class.values().cloned().collect();
            let mut unary = Vec::new();
            let mut binary = Vec::new();
            for lit in &others {
                let r = lit.rename_free(&map);
                if arrow(&r).is_some() {
                    binary.push(r);
                } else {
                    unary.push(r);
                }
            }
            let lits: BTreeSet<&Formula> = unary.iter().chain(&binary).collect();
            if lits.iter().any(|l| matches!(l, Formula::Not(a) if lits.contains(&**a))) {
                continue;
            }
            let diagrams = complete_diagrams(&binary, &reps);
            for d in diagrams {
                let mut parts: Vec<Vec<Formula>> = vec![Vec::new(); reps.len()];
                for f in &unary {
                    let fv = f.free_vars();
                    let slot = match fv.iter().next() {
                        Some(v) => reps.iter().position(|r| r == v).expect("variable of the block"),
                        None => 0,
                    };
                    debug_assert!(fv.len() <= 1, "simple formula with two free variables");
                    if !parts[slot].contains(f) {
                        parts[slot].push(f.clone());
                    }
                }
                out.push(DiagramBlock {
                    closed,
                    centre: centre.clone(),
                    bound: reps[1..].to_vec(),
                    diagram: d,
                    parts,
                });
            }
        }
    }
    out
}

// All full diagrams over the binary symbols of `binary` that extend it.
fn complete_diagrams(binary: &[Formula], order: &[Var]) -> Vec<Option<Diagram>> {
    if binary.is_empty() {
        return vec![None];
    }
    let mut pair: Vec<Var> = Vec::new();
    let mut symbols = BTreeSet::new();
    for l in binary {
        let (rel, a, b) = arrow(l).expect("binary literal");
        for v in [a, b] {
            if !pair.contains(v) {
                pair.push(v.clone());
            }
        }
        symbols.insert(rel.to_string());
    }
    assert_eq!(pair.len(), 2, "binary literals of a uniform block share one pair");
    pair.sort_by_key(|v| order.iter().position(|o| o == v));
    let (x, y) = (pair[0].clone(), pair[1].clone());
    // key: (symbol, forward?) with forward meaning R(x,y)
    let mut constraints: BTreeMap<(String, bool), bool> = BTreeMap::new();
    for l in binary {
        let (rel, a, _) = arrow(l).unwrap();
        let forward = *a == x;
        let pol = !matches!(l, Formula::Not(_));
        if constraints.insert((rel.to_string(), forward), pol) == Some(!pol) {
            return Vec::new();
        }
    }
    let slots: Vec<(String, bool)> = symbols
        .iter()
        .flat_map(|s| [(s.clone(), true), (s.clone(), false)])
        .collect();
    let free: Vec<usize> = (0..slots.len())
        .filter(|&i| !constraints.contains_key(&slots[i]))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << free.len() {
        let mut literals = Vec::new();
        for (i, (rel, forward)) in slots.iter().enumerate() {
            let pol = match free.iter().position(|&f| f == i) {
                Some(bit) => mask >> bit & 1 == 1,
                None => constraints[&(rel.clone(), *forward)],
            };
            let args = if *forward {
                vec![x.clone(), y.clone()]
            } else {
                vec![y.clone(), x.clone()]
            };
            let atom = Formula::atom_vars(rel, args);
            literals.push(if pol { atom } else { Formula::not(atom) });
        }
        out.push(Some(Diagram {
            x: x.clone(),
            y: y.clone(),
            literals,
        }));
    }
    out
}

/// Rewrites every positive block of `phi` (bottom-up) into a disjunction
/// of diagram blocks. The input must use symbols of arity at most 2.
pub fn diagram_normal_form(phi: &Formula) -> Formula {
    fn go(f: &Formula) -> Formula {
        match f {
            Formula::Not(a) => Formula::not(go(a)),
            Formula::And(a, b) => Formula::and(go(a), go(b)),
            Formula::Or(a, b) => Formula::or(go(a), go(b)),
            Formula::Quant {
                kind: Quantifier::Exists,
                vars,
                body,
            } => {
                let inner = go(body);
                let free = f.free_vars();
                let blocks = diagram_blocks(vars, &inner, free.iter().next());
                super::any_of(blocks.iter().map(DiagramBlock::to_formula).collect())
            }
            _ => f.clone(),
        }
    }
    go(&existential_form(&standardize_apart(phi)))
}
