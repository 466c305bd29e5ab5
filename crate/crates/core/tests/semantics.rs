use uf1eq::corpus::{self, vocab, FormulaParams};
use uf1eq::normal_form::to_normal_form;
use uf1eq::solver::{brute_force_sat, brute_force_sat_at, decide_sat, Verdict};
use uf1eq::structures::{
    evaluate, evaluate_matrix_by_types, evaluate_sentence, for_each_tuple, matrix_profile, Assignment,
};
use uf1eq::syntax::Var;

#[test]
fn types_decide_uniform_matrices() {
    let mut r = corpus::rng(91);
    let v = vocab(&[("P", 1), ("R", 2), ("T", 3)]);
    let vars: Vec<Var> = ["x", "y", "z"].map(Var::new).to_vec();
    for i in 0..150 {
        let a = corpus::random_structure(&mut r, &v, 1 + i % 4, 0.5);
        let m = corpus::random_uniform_matrix(&mut r, &v, &vars, 10);
        for_each_tuple(a.size(), 3, |t| {
            let s: Assignment = vars.iter().cloned().zip(t.iter().copied()).collect();
            let direct = evaluate(&a, &m, &s).unwrap();
            let (types, pattern, table) = matrix_profile(&a, &vars, t, &m).unwrap();
            let by_types = evaluate_matrix_by_types(&v, &vars, &types, &pattern, table.as_ref(), &m).unwrap();
            assert_eq!(direct, by_types, "{m} on {t:?}\n{a}");
        });
    }
}

#[test]
fn normal_form_preserves_small_models() {
    let mut r = corpus::rng(5);
    let p = FormulaParams::new(vocab(&[("P", 1), ("R", 2)]), 16);
    for _ in 0..40 {
        let phi = corpus::random_sentence(&mut r, &p);
        let nf = to_normal_form(&phi).unwrap();
        for d in 1..=2 {
            let a = brute_force_sat_at(&phi, d).is_some();
            let b = brute_force_sat_at(&nf.to_formula(), d).is_some();
            assert_eq!(a, b, "{phi}\n{nf}\nsize {d}");
        }
    }
}

#[test]
fn expanded_models_satisfy_the_normal_form() {
    let mut r = corpus::rng(17);
    let v = vocab(&[("P", 1), ("Q", 1), ("R", 2)]);
    let p = FormulaParams::new(v.clone(), 20);
    let mut hits = 0;
    for i in 0..120 {
        let phi = corpus::random_sentence(&mut r, &p);
        let a = corpus::random_structure(&mut r, &v, 1 + i % 5, 0.4);
        if !evaluate_sentence(&a, &phi).unwrap() {
            continue;
        }
        let nf = to_normal_form(&phi).unwrap();
        let b = nf.expand_model(&a).unwrap();
        assert!(evaluate_sentence(&b, &nf.to_formula()).unwrap(), "{phi}\n{a}");
        hits += 1;
    }
    assert!(hits > 20);
}

#[test]
fn solver_agrees_with_brute_force() {
    let mut r = corpus::rng(33);
    let v = vocab(&[("P", 1), ("R", 2)]);
    for _ in 0..30 {
        let nf = corpus::random_normal_form(&mut r, &v, 6);
        let s = decide_sat(&nf, Some(3));
        let b = brute_force_sat(&nf.to_formula(), 3);
        if s.is_conclusive() && b.is_conclusive() {
            assert_eq!(s.verdict, b.verdict, "{nf}");
        }
        if s.verdict == Verdict::Sat {
            let w = s.witness.unwrap();
            assert!(evaluate_sentence(&w, &nf.to_formula()).unwrap());
        }
    }
}
