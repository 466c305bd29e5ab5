use uf1eq::compress::{compress_model, find_kings};
use uf1eq::corpus::{normal_form_satisfied_by, random_structure, rng, vocab};
use uf1eq::solver::paper_bound;
use uf1eq::structures::evaluate_sentence;

#[test]
fn random_pairs_compress_to_models() {
    let mut r = rng(2024);
    let v = vocab(&[("P", 1), ("Q", 1), ("R", 2), ("T", 3)]);
    let mut done = 0;
    let mut attempts = 0;
    while done < 24 && attempts < 400 {
        attempts += 1;
        let size = 10 + attempts % 21;
        let a = random_structure(&mut r, &v, size, 0.3);
        let Some(nf) = normal_form_satisfied_by(&mut r, &a, 6, 40) else {
            continue;
        };
        let c = compress_model(&a, &nf).unwrap_or_else(|e| panic!("{nf}\n{a}\n{e}"));
        assert!(evaluate_sentence(&c.structure, &nf.to_formula()).unwrap());
        assert!((c.structure.size() as u128) <= paper_bound(&nf));
        let (_, royal_before) = find_kings(&a, nf.width());
        assert!(c.royal_types().is_subset(&royal_before));
        for e in 0..c.structure.size() {
            let t = c.structure.one_type(e);
            assert!((0..a.size()).any(|x| a.one_type(x) == t));
        }
        done += 1;
    }
    assert!(done >= 20, "only {done} pairs in {attempts} attempts");
}
