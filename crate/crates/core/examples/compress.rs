//! Builds a court for a model of a normal form and writes out the small
//! model, re-checking it against the sentence.
use uf1eq::compress::{check_model, compress_model_with};
use uf1eq::corpus::{self, vocab};
use uf1eq::normal_form::to_normal_form;
use uf1eq::syntax::parse_formula_infer;

fn main() {
    let (phi, _) = parse_formula_infer(
        "(A x. E y. (R(x,y) & ~x = y)) & (A x. (P(x) -> E y. (R(y,x) & ~P(y)))) & (A x y. (R(x,y) -> ~R(y,x)))",
    )
    .unwrap();
    let nf = to_normal_form(&phi).unwrap();

    // a random oriented graph on 60 elements
    let mut rng = corpus::rng(3);
    let v = vocab(&[("P", 1), ("R", 2)]);
    let a = loop {
        let mut a = corpus::random_structure(&mut rng, &v, 60, 0.3);
        for i in 0..60 {
            a.set("R", &[i, i], false);
            for j in 0..i {
                if a.holds("R", &[i, j]) {
                    a.set("R", &[j, i], false);
                }
            }
        }
        let a = nf.expand_model(&a).unwrap();
        if check_model(&a, &nf).is_ok() {
            break a;
        }
    };

    let c = compress_model_with(&a, &nf, true).unwrap();
    println!("source: {} elements", a.size());
    println!(
        "court: {} members, {} kings, bound {}",
        c.court.members.len(),
        c.court.kings.len(),
        c.court.size_bound()
    );
    println!("result: {} elements", c.structure.size());
    println!(
        "writes: {} witness, {} repeated, {} completions",
        c.stats.witness_writes, c.stats.repeated_writes, c.stats.completions
    );
    for e in c.trace.iter().take(6) {
        println!("  {e}");
    }
    assert!(check_model(&c.structure, &nf).is_ok());
}
