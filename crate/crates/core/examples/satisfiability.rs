//! Bounded satisfiability: the normal-form search next to brute force on the
//! original sentence.
use std::time::Instant;

use uf1eq::normal_form::to_normal_form;
use uf1eq::solver::{brute_force_sat, decide_sat};
use uf1eq::syntax::parse_formula_infer;

fn main() {
    let cases = [
        "(A x. E y. (R(x,y) & ~x = y)) & (A x y. (R(x,y) -> ~R(y,x)))",
        "(E x. P(x)) & (A x. (P(x) -> E y. (R(x,y) & ~P(y)))) & (A x. (~P(x) -> E y. (R(x,y) & P(y) & ~x = y)))",
        "(E x. P(x)) & (A x. ~P(x))",
        // unsatisfiable, but no search up to the cap can say so
        "(A x y. (R(x,y) -> x = y)) & (E x y. R(x,y)) & (A x. ~R(x,x))",
    ];
    for src in cases {
        let (phi, _) = parse_formula_infer(src).unwrap();
        let nf = to_normal_form(&phi).unwrap();
        let t = Instant::now();
        let r = decide_sat(&nf, Some(4));
        let dt = t.elapsed();
        let b = brute_force_sat(&phi, 4);
        println!("{phi}");
        println!("  normal form: {} ({:?})   brute force: {}", r.verdict, dt, b.verdict);
        if let Some(m) = b.witness {
            print!(
                "{}",
                m.to_string().lines().map(|l| format!("    {l}\n")).collect::<String>()
            );
        }
    }
}
