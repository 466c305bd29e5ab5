use crate::normal_form::NormalForm;
use crate::structures::{
    for_each_tuple, onto_shapes, Compiled, EqualityPattern, OneType, PartialStructure, Shape, Structure, Tv,
};
use crate::syntax::{Formula, Quantifier};

/// Compiled view of a normal form.
pub(crate) struct Problem {
    pub(crate) nf: NormalForm,
    // ∃ȳ φ with x free
    demands: Vec<Compiled>,
    // matrices with their variables free
    univ: Vec<(Compiled, usize)>,
    max_arity: usize,
}

impl Problem {
    pub(crate) fn new(nf: &NormalForm) -> Problem {
        let demands = nf
            .exist
            .iter()
            .map(|c| {
                let block = Formula::quant(Quantifier::Exists, c.ys.clone(), c.matrix.clone());
                Compiled::new(&block, &nf.vocab, std::slice::from_ref(&c.x)).expect("compiles")
            })
            .collect();
        let univ = nf
            .univ
            .iter()
            .map(|c| {
                (
                    Compiled::new(&c.matrix, &nf.vocab, &c.vars).expect("compiles"),
                    c.vars.len(),
                )
            })
            .collect();
        Problem {
            nf: nf.clone(),
            demands,
            univ,
            max_arity: nf.vocab.max_arity(),
        }
    }

    /// False as soon as some universal instance touching `touched` is
    /// definitely violated, or some element has no possible witness.
    fn consistent(&self, p: &PartialStructure, size: usize, touched: &[usize]) -> bool {
        for (c, l) in &self.univ {
            let mut env = Vec::new();
            let mut ok = true;
            for_each_tuple(size, *l, |t| {
                if !ok || !t.iter().any(|e| touched.contains(e)) {
                    return;
                }
                if env.is_empty() {
                    env = c.env(t);
                } else {
                    env[..t.len()].copy_from_slice(t);
                }
                if c.eval_in(p, &mut env) == Tv::False {
                    ok = false;
                }
            });
            if !ok {
                return false;
            }
        }
        for c in &self.demands {
            for a in 0..size {
                if c.eval(p, &[a]) == Tv::False {
                    return false;
                }
            }
        }
        true
    }
}

/// 1-types that satisfy every universal conjunct on a one-element domain.
pub(crate) fn admissible_types(nf: &NormalForm) -> Vec<OneType> {
    let univ: Vec<Formula> = nf.univ.iter().map(|c| c.to_formula()).collect();
    OneType::all(&nf.vocab)
        .into_iter()
        .filter(|t| {
            let mut s = Structure::new(nf.vocab.clone(), 1).expect("non-empty");
            s.set_one_type(0, t);
            univ.iter()
                .all(|u| Compiled::sentence(u, &nf.vocab).expect("compiles").holds(&s, &[]))
        })
        .collect()
}

fn write_type(p: &mut PartialStructure, e: usize, t: &OneType) {
    for (r, &b) in t.bits.iter().enumerate() {
        let k = p.arity_at(r);
        p.set(r, &vec![e; k], b);
    }
}

fn clear_type(p: &mut PartialStructure, e: usize) {
    for r in 0..p.vocab().len() {
        let k = p.arity_at(r);
        p.unset(r, &vec![e; k]);
    }
}

/// Sound refutation by 1-type elimination. Starting from the admissible
/// types, a type is dropped when some ∃-conjunct has no witness
/// configuration (equality pattern plus surviving types for the witnesses,
/// all other atoms unknown) that is not already false or does not already
/// break a ∀-conjunct. If nothing survives, no structure of any size is a
/// model.
pub fn refute_by_types(nf: &NormalForm) -> bool {
    if nf.vocab.len() >= 20 {
        return false;
    }
    let mut alive = admissible_types(nf);
    let univ: Vec<Compiled> = nf
        .univ
        .iter()
        .map(|c| Compiled::sentence(&c.to_formula(), &nf.vocab).expect("compiles"))
        .collect();
    loop {
        if alive.is_empty() {
            return true;
        }
        let before = alive.len();
        let snapshot = alive.clone();
        alive.retain(|t| {
            nf.exist.iter().all(|c| {
                let vars = c.all_vars();
                let m = Compiled::new(&c.matrix, &nf.vocab, &vars).expect("compiles");
                witness_possible(nf, &m, vars.len(), t, &snapshot, &univ)
            })
        });
        if alive.len() == before {
            return false;
        }
    }
}

fn witness_possible(
    nf: &NormalForm,
    matrix: &Compiled,
    positions: usize,
    t: &OneType,
    alive: &[OneType],
    univ: &[Compiled],
) -> bool {
    for pattern in EqualityPattern::all(positions) {
        let classes = pattern.classes();
        let others = classes - 1;
        let combos = (alive.len() as u128).saturating_pow(others as u32);
        let enumerate = combos <= 4096;
        let mut choice = vec![0usize; others];
        loop {
            let mut p = PartialStructure::new(nf.vocab.clone(), classes);
            write_type(&mut p, 0, t);
            if enumerate {
                for (i, &c) in choice.iter().enumerate() {
                    write_type(&mut p, i + 1, &alive[c]);
                }
            }
            let tuple: Vec<usize> = pattern.0.clone();
            if matrix.eval(&p, &tuple) != Tv::False && univ.iter().all(|u| u.eval(&p, &[]) != Tv::False) {
                return true;
            }
            if !enumerate || !advance(&mut choice, alive.len()) {
                break;
            }
        }
    }
    false
}

// Odometer step; false after the last combination.
fn advance(choice: &mut [usize], base: usize) -> bool {
    for c in choice.iter_mut().rev() {
        *c += 1;
        if *c < base {
            return true;
        }
        *c = 0;
    }
    false
}

enum Unit {
    Type(usize),
    Table(Vec<usize>),
}

struct Search<'a> {
    prob: &'a Problem,
    size: usize,
    types: Vec<OneType>,
    units: Vec<Unit>,
    shapes: Vec<Vec<Shape>>,
    chosen: Vec<usize>,
    p: PartialStructure,
}

fn subsets_with_max(e: usize, max_k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 2..=max_k.min(e + 1) {
        // choose k-1 elements below e
        let mut idx: Vec<usize> = (0..k - 1).collect();
        loop {
            let mut s = idx.clone();
            s.push(e);
            out.push(s);
            let mut i = k - 1;
            let mut moved = false;
            while i > 0 {
                i -= 1;
                if idx[i] < e - (k - 1 - i) {
                    idx[i] += 1;
                    for j in i + 1..k - 1 {
                        idx[j] = idx[j - 1] + 1;
                    }
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
    }
    out
}

impl Search<'_> {
    fn run(&mut self, u: usize) -> bool {
        if u == self.units.len() {
            return true;
        }
        match &self.units[u] {
            Unit::Type(e) => {
                let e = *e;
                let lo = if e == 0 { 0 } else { self.chosen[e - 1] };
                for ti in lo..self.types.len() {
                    let t = self.types[ti].clone();
                    write_type(&mut self.p, e, &t);
                    self.chosen[e] = ti;
                    if self.prob.consistent(&self.p, self.size, &[e]) && self.run(u + 1) {
                        return true;
                    }
                }
                clear_type(&mut self.p, e);
                false
            }
            Unit::Table(s) => {
                let s = s.clone();
                let shapes = self.shapes[s.len()].clone();
                let m = shapes.len();
                assert!(m < 26, "table with {m} cells is too large to enumerate");
                for mask in 0u32..1 << m {
                    for (i, (r, t)) in shapes.iter().enumerate() {
                        let tuple: Vec<usize> = t.iter().map(|&j| s[j]).collect();
                        self.p.set(*r, &tuple, mask >> i & 1 == 1);
                    }
                    if self.prob.consistent(&self.p, self.size, &s) && self.run(u + 1) {
                        return true;
                    }
                }
                for (r, t) in &shapes {
                    let tuple: Vec<usize> = t.iter().map(|&j| s[j]).collect();
                    self.p.unset(*r, &tuple);
                }
                false
            }
        }
    }
}

/// Searches for a model of `nf` with exactly `size` elements. Elements get
/// admissible 1-types in non-decreasing order; the tables of the subsets
/// whose largest element is `e` follow the type of `e`.
pub fn decide_sat_at(nf: &NormalForm, size: usize) -> Option<Structure> {
    let prob = Problem::new(nf);
    decide_with(&prob, size)
}

pub(crate) fn decide_with(prob: &Problem, size: usize) -> Option<Structure> {
    let types = admissible_types(&prob.nf);
    if types.is_empty() || size == 0 {
        return None;
    }
    let max_k = prob.max_arity;
    let mut units = Vec::new();
    for e in 0..size {
        units.push(Unit::Type(e));
        for s in subsets_with_max(e, max_k) {
            units.push(Unit::Table(s));
        }
    }
    let shapes = (0..=max_k.max(1)).map(|k| onto_shapes(&prob.nf.vocab, k)).collect();
    let mut search = Search {
        prob,
        size,
        types,
        units,
        shapes,
        chosen: vec![0; size],
        p: PartialStructure::new(prob.nf.vocab.clone(), size),
    };
    if search.run(0) {
        Some(search.p.to_structure())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_form::to_normal_form;
    use crate::syntax::parse_formula_infer;

    #[test]
    fn subsets_are_listed_once() {
        let all: Vec<Vec<usize>> = (0..4).flat_map(|e| subsets_with_max(e, 3)).collect();
        // pairs and triples of a 4-element set
        assert_eq!(all.len(), 6 + 4);
        assert!(all.contains(&vec![0, 2, 3]));
    }

    #[test]
    fn elimination_keeps_satisfiable_types() {
        let (f, _) = parse_formula_infer("A x. E y. (R(x,y) & P(y))").unwrap();
        assert!(!refute_by_types(&to_normal_form(&f).unwrap()));
        let (f, _) = parse_formula_infer("A x. E y. (P(y) & ~P(x)) & A x. P(x)").unwrap();
        assert!(refute_by_types(&to_normal_form(&f).unwrap()));
    }
}
