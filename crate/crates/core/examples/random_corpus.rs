//! The seeded corpus the tests draw from, and the model checker run over it.
use uf1eq::corpus::{self, vocab, FormulaParams};
use uf1eq::structures::evaluate_sentence;
use uf1eq::syntax::validate_fragment;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut rng = corpus::rng(seed);
    let v = vocab(&[("P", 1), ("R", 2), ("T", 3)]);
    let p = FormulaParams::new(v.clone(), 18);
    let models: Vec<_> = (1..=3)
        .map(|n| corpus::random_structure(&mut rng, &v, n, 0.4))
        .collect();
    for _ in 0..8 {
        let phi = corpus::random_sentence(&mut rng, &p);
        let verdicts: Vec<_> = models.iter().map(|a| evaluate_sentence(a, &phi).unwrap()).collect();
        println!("{:<5} {:?}  {phi}", validate_fragment(&phi, false).member, verdicts);
    }
}
