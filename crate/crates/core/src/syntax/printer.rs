use std::fmt;

use super::{Formula, Quantifier};

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantifier::Exists => f.write_str("E"),
            Quantifier::Forall => f.write_str("A"),
            Quantifier::AtLeast(k) => write!(f, "E[>={k}]"),
            Quantifier::AtMost(k) => write!(f, "E[<={k}]"),
            Quantifier::Exactly(k) => write!(f, "E[={k}]"),
        }
    }
}

// Binding strength: | = 1, & = 2, atoms and ~ = 3. Quantifiers swallow
// everything to their right, so they are bracketed unless they sit at the
// top or directly under another quantifier.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::Quant { .. } => 0,
        _ => 3,
    }
}

fn write_formula(out: &mut fmt::Formatter<'_>, f: &Formula, bare_quant: bool) -> fmt::Result {
    match f {
        Formula::True => out.write_str("true"),
        Formula::False => out.write_str("false"),
        Formula::Atom { rel, args } => {
            write!(out, "{rel}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.write_str(",")?;
                }
                write!(out, "{a}")?;
            }
            out.write_str(")")
        }
        Formula::Eq(a, b) => write!(out, "{a} = {b}"),
        Formula::Not(a) => {
            out.write_str("~")?;
            write_child(out, a, 3)
        }
        Formula::And(a, b) => {
            write_child(out, a, 2)?;
            out.write_str(" & ")?;
            write_child(out, b, 3)
        }
        Formula::Or(a, b) => {
            write_child(out, a, 1)?;
            out.write_str(" | ")?;
            write_child(out, b, 2)
        }
        Formula::Quant { kind, vars, body } => {
            if !bare_quant {
                out.write_str("(")?;
            }
            write!(out, "{kind}")?;
            for v in vars {
                write!(out, " {v}")?;
            }
            out.write_str(". ")?;
            write_formula(out, body, true)?;
            if !bare_quant {
                out.write_str(")")?;
            }
            Ok(())
        }
    }
}

fn write_child(out: &mut fmt::Formatter<'_>, f: &Formula, min: u8) -> fmt::Result {
    let p = prec(f);
    if p == 0 {
        write_formula(out, f, false)
    } else if p < min {
        out.write_str("(")?;
        write_formula(out, f, true)?;
        out.write_str(")")
    } else {
        write_formula(out, f, false)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, true)
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_formula_infer, Formula, Quantifier};

    fn roundtrip(f: &Formula) {
        let text = f.to_string();
        let (g, _) = parse_formula_infer(&text).unwrap();
        assert_eq!(&g, f, "printed as {text}");
    }

    #[test]
    fn prints_blocks_and_counting() {
        let f = Formula::exists(&["x"], Formula::atom("E", &["x"]));
        assert_eq!(f.to_string(), "E x. E(x)");
        let g = Formula::forall(
            &["x"],
            Formula::counting(Quantifier::Exactly(1), "y", Formula::atom("R", &["x", "y"])),
        );
        assert_eq!(g.to_string(), "A x. E[=1] y. R(x,y)");
    }

    #[test]
    fn brackets_follow_associativity() {
        let p = Formula::atom("P", &["x"]);
        let q = Formula::atom("Q", &["x"]);
        let right = Formula::and(p.clone(), Formula::and(q.clone(), p.clone()));
        assert_eq!(right.to_string(), "P(x) & (Q(x) & P(x))");
        roundtrip(&right);
        let mixed = Formula::and(Formula::or(p.clone(), q.clone()), Formula::not(p.clone()));
        assert_eq!(mixed.to_string(), "(P(x) | Q(x)) & ~P(x)");
        roundtrip(&mixed);
    }

    #[test]
    fn nested_quantifiers_are_bracketed() {
        let p = Formula::atom("P", &["x"]);
        let f = Formula::and(
            Formula::exists(&["x"], p.clone()),
            Formula::not(Formula::forall(&["x"], p.clone())),
        );
        assert_eq!(f.to_string(), "(E x. P(x)) & ~(A x. P(x))");
        roundtrip(&f);
        let g = Formula::not(Formula::eq("x", "y"));
        assert_eq!(g.to_string(), "~x = y");
        roundtrip(&g);
    }
}
