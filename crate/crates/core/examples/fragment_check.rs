//! Parses a handful of formulas and reports whether each one is in UF1= or
//! UFC1=, with the offending subformula when it is not.
use uf1eq::syntax::{parse_formula_infer, validate_fragment};

const FORMULAS: &[&str] = &[
    "A x. E y. (R(x,y) & ~P(y) & ~x = y)",
    "A x y z. (T(x,y,z) -> T(z,y,x))",
    // two live atoms on different variable sets
    "A x y z. (R(x,y) -> S(y,z))",
    // the binary atom leaves two free variables behind the inner block
    "A x. E y. (R(x,y) & E z. S(y,z))",
    "A x. E[=1] y. (R(x,y) & P(y))",
];

fn main() {
    for src in FORMULAS {
        let (phi, vocab) = parse_formula_infer(src).expect("well-formed");
        let plain = validate_fragment(&phi, false);
        let counting = validate_fragment(&phi, true);
        println!("{phi}");
        println!(
            "  symbols: {}",
            vocab
                .iter()
                .map(|(n, k)| format!("{n}/{k}"))
                .collect::<Vec<_>>()
                .join(" ")
        );
        println!("  UF1=: {}   UFC1=: {}", plain.member, counting.member);
        for v in &counting.violations {
            println!("  at {} ({}): {}", v.path, v.rule, v.detail);
        }
    }
}
