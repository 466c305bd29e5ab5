//! Normal form of a sentence, and a check that a model of the sentence
//! expands to a model of the normal form.
use uf1eq::normal_form::to_normal_form;
use uf1eq::structures::{evaluate_sentence, parse_structure};
use uf1eq::syntax::parse_formula_infer;

fn main() {
    let (phi, _) =
        parse_formula_infer("A x. (P(x) -> E y. (R(x,y) & ~P(y))) & ~(E x y. (R(x,y) & R(y,x) & ~x = y))").unwrap();
    let nf = to_normal_form(&phi).unwrap();
    println!("input:\n  {phi}\n");
    println!(
        "normal form (width {}, {} fresh symbols):\n  {nf}\n",
        nf.width(),
        nf.fresh_symbols.len()
    );

    let a = parse_structure(
        "domain = 3
         rel P/1 = { (0) (2) }
         rel R/2 = { (0 1) (2 1) }",
    )
    .unwrap();
    let expanded = nf.expand_model(&a).unwrap();
    println!("original holds:    {}", evaluate_sentence(&a, &phi).unwrap());
    println!(
        "normal form holds: {}",
        evaluate_sentence(&expanded, &nf.to_formula()).unwrap()
    );
}
