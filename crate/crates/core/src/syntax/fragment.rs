use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::{Formula, Var};

/// Location of a node: child indices from the root (0 = left operand or
/// body, 1 = right operand).
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AstPath(pub Vec<u8>);

impl AstPath {
    pub fn root() -> AstPath {
        AstPath(Vec::new())
    }

    fn child(&self, i: u8) -> AstPath {
        let mut p = self.0.clone();
        p.push(i);
        AstPath(p)
    }

    /// Follows the path from `root`.
    pub fn resolve<'a>(&self, root: &'a Formula) -> Option<&'a Formula> {
        let mut f = root;
        for &i in &self.0 {
            f = match (f, i) {
                (Formula::Not(a), 0) => a,
                (Formula::And(a, _) | Formula::Or(a, _), 0) => a,
                (Formula::And(_, b) | Formula::Or(_, b), 1) => b,
                (Formula::Quant { body, .. }, 0) => body,
                _ => return None,
            };
        }
        Some(f)
    }
}

impl fmt::Display for AstPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl fmt::Debug for AstPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    OneDimensionality,
    Uniformity,
    Other,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::OneDimensionality => "one-dimensionality",
            Rule::Uniformity => "uniformity",
            Rule::Other => "other",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fragment {
    Uf1Eq,
    Ufc1Eq,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::Uf1Eq => "UF1=",
            Fragment::Ufc1Eq => "UFC1=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub path: AstPath,
    pub rule: Rule,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct FragmentReport {
    pub member: bool,
    pub fragment: Fragment,
    pub violations: Vec<Violation>,
    /// Live-variable set of every block, keyed by the path of the block's
    /// outermost quantifier node.
    pub live_sets: BTreeMap<AstPath, BTreeSet<Var>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("atoms {first} and {second} use different variable sets")]
pub struct UniformityError {
    pub first: Formula,
    pub second: Formula,
}

fn distinct_vars(args: &[Var]) -> BTreeSet<Var> {
    args.iter().cloned().collect()
}

/// Collects the non-equality atoms with two or more distinct variables that
/// occur in `matrix` outside any nested quantifier.
fn wide_atoms<'a>(matrix: &'a Formula, out: &mut Vec<&'a Formula>) {
    match matrix {
        Formula::Atom { args, .. } if distinct_vars(args).len() >= 2 => out.push(matrix),
        Formula::Not(a) => wide_atoms(a, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            wide_atoms(a, out);
            wide_atoms(b, out);
        }
        _ => {}
    }
}

/// The shared variable set of the matrix's atoms of arity two or more
/// (counted in distinct variables). Nested blocks are opaque. Empty when
/// there are no such atoms.
pub fn live_variables(matrix: &Formula) -> Result<BTreeSet<Var>, UniformityError> {
    let mut atoms = Vec::new();
    wide_atoms(matrix, &mut atoms);
    let mut live: Option<(BTreeSet<Var>, &Formula)> = None;
    for a in atoms {
        let Formula::Atom { args, .. } = a else { unreachable!() };
        let vs = distinct_vars(args);
        match &live {
            None => live = Some((vs, a)),
            Some((v, first)) if *v != vs => {
                return Err(UniformityError {
                    first: (*first).clone(),
                    second: a.clone(),
                })
            }
            _ => {}
        }
    }
    Ok(live.map(|(v, _)| v).unwrap_or_default())
}

/// Peels a maximal chain of directly nested quantifiers of one family.
/// Returns the bound variables in order and the matrix below the chain.
pub(crate) fn peel_block(f: &Formula) -> Option<(Vec<Var>, &Formula, usize)> {
    let Formula::Quant { kind, .. } = f else {
        return None;
    };
    let mut vars = Vec::new();
    let mut cur = f;
    let mut depth = 0;
    while let Formula::Quant {
        kind: k,
        vars: vs,
        body,
    } = cur
    {
        if !k.same_family(*kind) {
            break;
        }
        vars.extend(vs.iter().cloned());
        cur = body;
        depth += 1;
    }
    Some((vars, cur, depth))
}

struct Validator {
    allow_counting: bool,
    violations: Vec<Violation>,
    live_sets: BTreeMap<AstPath, BTreeSet<Var>>,
}

impl Validator {
    fn report(&mut self, path: &AstPath, rule: Rule, detail: String) {
        self.violations.push(Violation {
            path: path.clone(),
            rule,
            detail,
        });
    }

    // Walks a Boolean context. Wide atoms are allowed only inside a block
    // matrix, where the enclosing block checks them.
    fn context(&mut self, f: &Formula, path: &AstPath, in_matrix: bool) {
        match f {
            Formula::True | Formula::False | Formula::Eq(..) => {}
            Formula::Atom { args, .. } => {
                if !in_matrix && distinct_vars(args).len() >= 2 {
                    self.report(
                        path,
                        Rule::Other,
                        format!("atom {f} has several variables outside any block"),
                    );
                }
            }
            Formula::Not(a) => self.context(a, &path.child(0), in_matrix),
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.context(a, &path.child(0), in_matrix);
                self.context(b, &path.child(1), in_matrix);
            }
            Formula::Quant { .. } => self.block(f, path),
        }
    }

    fn block(&mut self, f: &Formula, path: &AstPath) {
        let (_, matrix, depth) = peel_block(f).expect("block");
        let mut cur = f;
        let mut matrix_path = path.clone();
        let mut counting_seen = None;
        for _ in 0..depth {
            let Formula::Quant { kind, body, .. } = cur else {
                unreachable!()
            };
            if kind.is_counting() && counting_seen.is_none() {
                counting_seen = Some(*kind);
            }
            cur = body;
            matrix_path = matrix_path.child(0);
        }
        let free = f.free_vars();
        if let (Some(k), false) = (counting_seen, self.allow_counting) {
            self.report(path, Rule::Other, format!("counting quantifier {k} not allowed"));
        } else if free.len() > 1 {
            let names: Vec<String> = free.iter().map(|v| v.to_string()).collect();
            self.report(
                path,
                Rule::OneDimensionality,
                format!("block leaves {} free variables: {}", free.len(), names.join(", ")),
            );
        } else {
            match live_variables(matrix) {
                Ok(live) => {
                    self.live_sets.insert(path.clone(), live);
                }
                Err(e) => self.report(path, Rule::Uniformity, e.to_string()),
            }
        }
        self.context(matrix, &matrix_path, true);
    }
}

/// Decides membership in UF₁⁼ (or UFC₁⁼ when `allow_counting`). A chain of
/// directly nested quantifiers of one family (`∀`, or `∃` together with
/// the counting quantifiers) is one block.
pub fn validate_fragment(phi: &Formula, allow_counting: bool) -> FragmentReport {
    let mut v = Validator {
        allow_counting,
        violations: Vec::new(),
        live_sets: BTreeMap::new(),
    };
    v.context(phi, &AstPath::root(), false);
    FragmentReport {
        member: v.violations.is_empty(),
        fragment: if phi.uses_counting() {
            Fragment::Ufc1Eq
        } else {
            Fragment::Uf1Eq
        },
        violations: v.violations,
        live_sets: v.live_sets,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula_infer, var};

    fn check(text: &str, counting: bool) -> FragmentReport {
        let (f, _) = parse_formula_infer(text).unwrap();
        validate_fragment(&f, counting)
    }

    #[test]
    fn uniform_sets() {
        assert!(check("E x y. (T(x,y) & S(y,x))", false).member);
        assert!(check("E x y. (R(x,x,y) | ~R(y,y,x) | S(y,x))", false).member);
        let r = check("E x y z. (R(x,y,z) & R(x,y,y))", false);
        assert!(!r.member);
        assert_eq!(r.violations[0].rule, Rule::Uniformity);
        assert!(check("E x y. (S(x,y) & x = y)", false).member);
    }

    #[test]
    fn one_dimensionality() {
        let r = check("A x z. E y. (R(x,y) & S(y,z))", false);
        assert!(!r.member);
        assert_eq!(r.violations[0].rule, Rule::OneDimensionality);
        assert_eq!(r.violations[0].path, AstPath(vec![0]));
    }

    #[test]
    fn fo2_member_and_live_sets() {
        let r = check("A x . A y . (R(x,y) -> R(y,x))", false);
        assert!(r.member);
        assert_eq!(r.live_sets[&AstPath::root()], [var("x"), var("y")].into());
    }

    #[test]
    fn counting_needs_permission() {
        let text = "A x. E[=1] y. E z. (R(x,y,z) & (E(x) <-> E(y)))";
        let r = check(text, false);
        assert!(!r.member);
        assert_eq!(r.violations[0].rule, Rule::Other);
        let r = check(text, true);
        assert!(r.member, "{:?}", r.violations);
        assert_eq!(r.fragment, Fragment::Ufc1Eq);
    }

    #[test]
    fn wide_atom_outside_block() {
        let r = check("R(x,y)", false);
        assert!(!r.member);
        assert_eq!(r.violations[0].rule, Rule::Other);
    }

    #[test]
    fn live_variables_examples() {
        let (f, _) = parse_formula_infer("R(x,y,z) & x = y & P(x)").unwrap();
        assert_eq!(live_variables(&f).unwrap(), [var("x"), var("y"), var("z")].into());
        let (f, _) = parse_formula_infer("P(x) & ~Q(y) & ~x = y").unwrap();
        assert!(live_variables(&f).unwrap().is_empty());
        let (f, _) = parse_formula_infer("T(x,y) & ~S(y,x)").unwrap();
        assert_eq!(live_variables(&f).unwrap(), [var("x"), var("y")].into());
    }

    #[test]
    fn path_resolves() {
        let (f, _) = parse_formula_infer("P(x) & ~(E y. Q(y))").unwrap();
        let p = AstPath(vec![1, 0]);
        assert!(matches!(p.resolve(&f), Some(Formula::Quant { .. })));
    }
}
