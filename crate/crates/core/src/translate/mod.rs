//! Diagram normal form, star types and the translation of UF₁⁼ over
//! unary and binary symbols into two-variable logic with counting.

pub mod diagram;
pub mod star;

use rayon::prelude::*;
use thiserror::Error;

use crate::structures::{for_each_tuple, Assignment, Compiled, Interpretation, Structure, Tv};
use crate::syntax::{parse_formula_infer, validate_fragment, Formula, Quantifier, Var, Vocabulary, VocabularyError};

pub use diagram::{diagram_blocks, diff, Diagram, DiagramBlock};
pub use star::{expand_star_centre, star_centre_to_foc2, StarCentreFormula, StarCentreType, TwoType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranslateError {
    #[error("symbol {symbol} has arity {arity}; only unary and binary symbols are supported")]
    Arity { symbol: String, arity: usize },
    #[error("formula has {0} free variables, at most one is allowed")]
    FreeVariables(usize),
    #[error("not in UF1=: {0}")]
    NotInFragment(String),
    #[error("not a star centre formula: {0}")]
    StarShape(String),
    #[error(transparent)]
    Vocabulary(#[from] VocabularyError),
}

/// How blocks whose diagram avoids the free variable are translated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OffCentre {
    /// Re-centres the star at the diagram's first variable and requires
    /// every ray witness to differ from the outer element.
    #[default]
    Corrected,
    /// The displayed formula of the original proof. Only sound when the
    /// block has at most two bound variables.
    Verbatim,
}

/// How star centre formulas are turned into counting formulas.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StarMode {
    /// Groups neighbours by the set of ray conditions they satisfy.
    #[default]
    Cells,
    /// Expands into full star centre types over the symbols present.
    Types,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Foc2Options {
    pub off_centre: OffCentre,
    pub star: StarMode,
}

fn check_input(phi: &Formula) -> Result<(), TranslateError> {
    let vocab = phi.vocabulary()?;
    if let Some((symbol, arity)) = vocab.iter().find(|(_, k)| *k > 2) {
        return Err(TranslateError::Arity {
            symbol: symbol.to_string(),
            arity,
        });
    }
    let report = validate_fragment(phi, false);
    if !report.member {
        let first = &report.violations[0];
        return Err(TranslateError::NotInFragment(first.detail.clone()));
    }
    Ok(())
}

/// Rewrites every positive block into a disjunction of diagram blocks.
pub fn to_diagram_normal_form(phi: &Formula) -> Result<Formula, TranslateError> {
    check_input(phi)?;
    Ok(diagram::diagram_normal_form(phi).simplify_constants())
}

pub fn to_foc2(phi: &Formula) -> Result<Formula, TranslateError> {
    to_foc2_with(phi, Foc2Options::default())
}

/// Translates a UF₁⁼ formula with at most one free variable into an
/// equivalent formula using two variables, the free one (or `x`) and `y`.
pub fn to_foc2_with(phi: &Formula, opts: Foc2Options) -> Result<Formula, TranslateError> {
    check_input(phi)?;
    let free = phi.free_vars();
    if free.len() > 1 {
        return Err(TranslateError::FreeVariables(free.len()));
    }
    let free = free.into_iter().next();
    let a = free.clone().unwrap_or_else(|| Var::new("x"));
    let b = Var::new(if a.name() == "y" { "x" } else { "y" });
    let prepared = diagram::existential_form(&diagram::standardize_apart(phi));
    let mut t = Translator {
        opts,
        a: a.clone(),
        b,
        counter: 0,
    };
    Ok(t.tr(&prepared, free.as_ref(), &a).simplify_constants())
}

/// At most two variable names and one variable per quantifier.
pub fn is_foc2(f: &Formula) -> bool {
    let mut ok = f.all_vars().len() <= 2;
    f.visit(&mut |g| {
        if let Formula::Quant { vars, .. } = g {
            ok &= vars.len() == 1;
        }
    });
    ok
}

struct Translator {
    opts: Foc2Options,
    a: Var,
    b: Var,
    counter: usize,
}

fn is_literal(f: &Formula) -> bool {
    match f {
        Formula::Atom { .. } => true,
        Formula::Not(a) => matches!(**a, Formula::Atom { .. }),
        _ => false,
    }
}

// Balanced disjunction, keeps nesting depth logarithmic.
fn any_of(mut items: Vec<Formula>) -> Formula {
    match items.len() {
        0 => Formula::False,
        1 => items.pop().unwrap(),
        n => {
            let right = items.split_off(n / 2);
            Formula::or(any_of(items), any_of(right))
        }
    }
}

fn rename(f: &Formula, from: &Var, to: &Var) -> Formula {
    f.rename_free(&[(from.clone(), to.clone())].into())
}

impl Translator {
    fn other(&self, v: &Var) -> Var {
        if *v == self.a {
            self.b.clone()
        } else {
            self.a.clone()
        }
    }

    // `from` is the free variable of `f`, renamed to `to` in the output.
    fn tr(&mut self, f: &Formula, from: Option<&Var>, to: &Var) -> Formula {
        match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Atom { .. } => match from {
                Some(x) => rename(f, x, to),
                None => f.clone(),
            },
            Formula::Eq(u, v) => {
                debug_assert_eq!(u, v, "equality between distinct variables outside a block");
                Formula::True
            }
            Formula::Not(g) => Formula::not(self.tr(g, from, to)),
            Formula::And(g, h) => Formula::and(self.tr(g, from, to), self.tr(h, from, to)),
            Formula::Or(g, h) => Formula::or(self.tr(g, from, to), self.tr(h, from, to)),
            Formula::Quant {
                kind: Quantifier::Forall,
                vars,
                body,
            } => {
                let dual = Formula::quant(Quantifier::Exists, vars.clone(), Formula::not((**body).clone()));
                Formula::not(self.tr(&dual, from, to))
            }
            Formula::Quant { vars, body, .. } => {
                let free = f.free_vars();
                let blocks = diagram_blocks(vars, body, free.iter().next());
                let out: Vec<Formula> = blocks.iter().map(|db| self.block(db, to)).collect();
                any_of(out)
            }
        }
    }

    fn block(&mut self, db: &DiagramBlock, v: &Var) -> Formula {
        let inner = self.open(db, v);
        if db.closed {
            Formula::quant(Quantifier::Exists, vec![v.clone()], inner)
        } else {
            inner
        }
    }

    // Translation of the block with its centre free as `v`.
    fn open(&mut self, db: &DiagramBlock, v: &Var) -> Formula {
        let w = self.other(v);
        let vars = db.vars();
        let mut lits = Vec::new();
        let mut holders: Vec<Option<(String, Formula)>> = Vec::new();
        for part in &db.parts {
            let (l, rest): (Vec<Formula>, Vec<Formula>) = part.iter().cloned().partition(is_literal);
            lits.push(l);
            holders.push(if rest.is_empty() {
                None
            } else {
                self.counter += 1;
                Some((format!("_ph{}", self.counter), Formula::and_all(rest)))
            });
        }
        let unary = |i: usize, at: &Var| -> Formula {
            let mut items: Vec<Formula> = lits[i].iter().map(|l| rename(l, &vars[i], at)).collect();
            if let Some((name, _)) = &holders[i] {
                items.push(Formula::atom_vars(name, vec![at.clone()]));
            }
            Formula::and_all(items)
        };
        let diagram_at = |map: &[(&Var, &Var)]| -> Formula {
            let d = db.diagram.as_ref().expect("diagram");
            d.renamed(&map.iter().map(|(a, b)| ((*a).clone(), (*b).clone())).collect())
        };

        let k = db.bound.len();
        let f = if k == 0 {
            unary(0, v)
        } else if db.touches_centre() {
            let rays: Vec<Formula> = (1..=k)
                .map(|i| {
                    let mut r = unary(i, &w);
                    if db.diagram.as_ref().is_some_and(|d| d.involves(&vars[i])) {
                        r = Formula::and(diagram_at(&[(&vars[0], v), (&vars[i], &w)]), r);
                    }
                    r
                })
                .collect();
            self.star(unary(0, v), rays, v, &w, false)
        } else {
            let d = db.diagram.as_ref().expect("diagram");
            let ci = vars.iter().position(|x| *x == d.x).expect("diagram variable");
            let cj = vars.iter().position(|x| *x == d.y).expect("diagram variable");
            let beta = diagram_at(&[(&vars[ci], &w), (&vars[cj], v)]);
            let distinct = Formula::not(Formula::Eq(w.clone(), v.clone()));
            match self.opts.off_centre {
                OffCentre::Corrected => {
                    let rays: Vec<Formula> = (1..=k)
                        .filter(|&m| m != ci)
                        .map(|m| {
                            let r = unary(m, v);
                            if m == cj {
                                Formula::and(beta.clone(), r)
                            } else {
                                r
                            }
                        })
                        .collect();
                    let inner = self.star(unary(ci, &w), rays, &w, v, true);
                    Formula::and(
                        unary(0, v),
                        Formula::quant(Quantifier::Exists, vec![w.clone()], Formula::and(distinct, inner)),
                    )
                }
                OffCentre::Verbatim => {
                    let order: Vec<usize> = std::iter::once(ci).chain((0..=k).filter(|&m| m != ci)).collect();
                    let recentred = DiagramBlock {
                        closed: false,
                        centre: vars[ci].clone(),
                        bound: order[1..].iter().map(|&m| vars[m].clone()).collect(),
                        diagram: db.diagram.clone(),
                        parts: order.iter().map(|&m| db.parts[m].clone()).collect(),
                    };
                    let theta = self.open(&recentred, &w);
                    let b = Formula::and(beta, unary(cj, v));
                    let twice = Formula::quant(
                        Quantifier::AtLeast(2),
                        vec![v.clone()],
                        Formula::and(distinct.clone(), b.clone()),
                    );
                    Formula::and(
                        unary(0, v),
                        Formula::quant(
                            Quantifier::Exists,
                            vec![w.clone()],
                            Formula::and_all([distinct, theta, Formula::or(Formula::not(b), twice)]),
                        ),
                    )
                }
            }
        };

        let mut f = f;
        for (i, h) in holders.iter().enumerate() {
            let Some((name, content)) = h else { continue };
            let at_v = self.tr(content, Some(&vars[i]), v);
            let at_w = self.tr(content, Some(&vars[i]), &w);
            f = f.substitute_atoms(name, &|args: &[Var]| {
                if args[0] == *v {
                    at_v.clone()
                } else {
                    at_w.clone()
                }
            });
        }
        f
    }

    // Star centred at `c` with rays over `y`; `exclude` keeps every ray
    // witness away from the value `y` has outside.
    fn star(&mut self, centre: Formula, rays: Vec<Formula>, c: &Var, y: &Var, exclude: bool) -> Formula {
        let count = |n: usize, cell: Formula| {
            if exclude {
                star::at_least_excluding(n, y, cell)
            } else {
                star::at_least(n, y, cell)
            }
        };
        match self.opts.star {
            StarMode::Cells => {
                let options = star::cell_options(&rays);
                let disjuncts = options
                    .iter()
                    .map(|o| Formula::and_all(o.iter().map(|&(z, n)| count(n, star::cell(z, &rays, c, y)))));
                Formula::and(centre, any_of(disjuncts.collect()))
            }
            StarMode::Types => {
                let ray_vars: Vec<Var> = (1..=rays.len()).map(|i| Var::new(format!("_s{i}"))).collect();
                let mut literals: Vec<Formula> = centre.conjuncts().into_iter().cloned().collect();
                for (r, rv) in rays.iter().zip(&ray_vars) {
                    literals.extend(r.conjuncts().into_iter().map(|l| rename(l, y, rv)));
                }
                literals.retain(|l| *l != Formula::True);
                let scf =
                    StarCentreFormula::new(c.clone(), ray_vars, literals).expect("blocks yield star centre formulas");
                let types = expand_star_centre(&scf);
                any_of(types.iter().map(|t| star::star_counts(t, c, y, exclude)).collect())
            }
        }
    }
}

/// Outcome of an exhaustive equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Equivalent {
        max_size: usize,
        checked: u64,
    },
    Counterexample {
        structure: Structure,
        assignment: Assignment,
    },
}

impl OracleVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, OracleVerdict::Equivalent { .. })
    }
}

// A structure packed into the bits of a u64, relation by relation.
struct Packed<'a> {
    size: usize,
    base: &'a [usize],
    bits: u64,
}

impl Interpretation for Packed<'_> {
    fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn atom(&self, rel: usize, off: usize) -> Tv {
        Tv::from_bool(self.bits >> (self.base[rel] + off) & 1 == 1)
    }
}

/// Compares `f` and `g` on every structure with at most `max_size`
/// elements over their joint vocabulary and every assignment to their free
/// variables. Structures are enumerated up to the order of 1-types.
pub fn equivalence_oracle(f: &Formula, g: &Formula, max_size: usize) -> Result<OracleVerdict, TranslateError> {
    let mut vocab = f.vocabulary()?;
    vocab.merge(&g.vocabulary()?)?;
    let free: Vec<Var> = f.free_vars().union(&g.free_vars()).cloned().collect();
    let cf = Compiled::new(f, &vocab, &free).expect("compiles");
    let cg = Compiled::new(g, &vocab, &free).expect("compiles");
    let arities: Vec<usize> = vocab.iter().map(|(_, k)| k).collect();
    let mut checked = 0u64;
    for size in 1..=max_size {
        let mut base = Vec::new();
        let mut total = 0;
        for &k in &arities {
            base.push(total);
            total += size.pow(k as u32);
        }
        assert!(total <= 40, "{total} atoms are too many to enumerate");
        // offset of the diagonal tuple (e,…,e) per relation
        let diag: Vec<usize> = arities
            .iter()
            .map(|&k| (0..k).map(|i| size.pow(i as u32)).sum())
            .collect();
        let sorted = |bits: u64| {
            let code = |e: usize| -> u64 {
                diag.iter()
                    .enumerate()
                    .fold(0, |c, (r, d)| c << 1 | (bits >> (base[r] + e * d) & 1))
            };
            (1..size).all(|e| code(e - 1) <= code(e))
        };
        let mut assignments = Vec::new();
        for_each_tuple(size, free.len(), |t| assignments.push(t.to_vec()));
        let found = (0..1u64 << total).into_par_iter().find_first(|&bits| {
            if !sorted(bits) {
                return false;
            }
            let s = Packed {
                size,
                base: &base,
                bits,
            };
            assignments.iter().any(|t| cf.eval(&s, t) != cg.eval(&s, t))
        });
        match found {
            Some(bits) => {
                let structure = unpack(&vocab, size, &base, bits);
                let s = Packed {
                    size,
                    base: &base,
                    bits,
                };
                let t = assignments
                    .iter()
                    .find(|t| cf.eval(&s, t) != cg.eval(&s, t))
                    .expect("differing assignment");
                let assignment = free.iter().cloned().zip(t.iter().copied()).collect();
                return Ok(OracleVerdict::Counterexample { structure, assignment });
            }
            None => checked += (0..1u64 << total).filter(|&b| sorted(b)).count() as u64,
        }
    }
    Ok(OracleVerdict::Equivalent { max_size, checked })
}

fn unpack(vocab: &Vocabulary, size: usize, base: &[usize], bits: u64) -> Structure {
    let mut s = Structure::new(vocab.clone(), size).expect("non-empty");
    for (r, (name, k)) in vocab.iter().enumerate() {
        let mut off = 0;
        for_each_tuple(size, k, |t| {
            if bits >> (base[r] + off) & 1 == 1 {
                s.set(name, t, true);
            }
            off += 1;
        });
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub formula: Formula,
    pub note: &'static str,
}

/// Formulas separating UF₁⁼ from two-variable logic with counting.
pub fn incomparability_corpus() -> Vec<CorpusEntry> {
    let parse = |s: &str| parse_formula_infer(s).expect("corpus formula parses").0;
    vec![
        CorpusEntry {
            name: "ternary",
            formula: parse("E x y z. R(x,y,z)"),
            note: "in UF1=; uses a ternary atom, beyond two variables",
        },
        CorpusEntry {
            name: "in-degree",
            formula: parse("A x. E[<=1] y. R(y,x)"),
            note: "in FOC2: every node has in-degree at most one",
        },
        CorpusEntry {
            name: "infinity-axiom",
            formula: parse("(A x. E y. R(x,y)) & (E x. A y. ~R(y,x)) & (A x. E[<=1] y. R(y,x))"),
            note: "in FOC2: satisfiable, but has no finite model",
        },
    ]
}
