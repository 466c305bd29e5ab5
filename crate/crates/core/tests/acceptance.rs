//! One test per acceptance criterion. Each prints a single PASS/FAIL line
//! with its counts and wall time, written past the test harness capture.

use std::io::Write;
use std::time::{Duration, Instant};

use uf1eq::compress::{compress_model, find_kings};
use uf1eq::corpus::{self, vocab, FormulaParams};
use uf1eq::normal_form::to_normal_form;
use uf1eq::solver::{brute_force_sat, brute_force_sat_at, decide_sat, paper_bound, Verdict};
use uf1eq::structures::{
    evaluate, evaluate_matrix_by_types, evaluate_sentence, for_each_tuple, matrix_profile, Assignment,
};
use uf1eq::syntax::{parse_formula_infer, validate_fragment, Formula, Rule, Var};
use uf1eq::tiling::{
    build_grid_encoding, check_torus_tiling, decorate, eta_models, extract_torus_hom, find_isomorphism, gen_eta,
    gen_tiling_formula, is_homomorphism, star_projection, torus, TileSet,
};
use uf1eq::translate::{equivalence_oracle, to_foc2, OracleVerdict};

fn f(s: &str) -> Formula {
    parse_formula_infer(s).unwrap_or_else(|e| panic!("{s}: {e}")).0
}

fn report(n: usize, name: &str, failures: &[String], detail: String, start: Instant, limit: Duration) {
    let took = start.elapsed();
    let ok = failures.is_empty() && took < limit;
    let line = format!(
        "criterion {n} [{name}]: {} ({detail}; {:.2}s of {}s)\n",
        if ok { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        limit.as_secs()
    );
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
    assert!(took < limit, "took {took:?}, limit {limit:?}");
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn criterion_1_fragment_classification() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let cases = [
        ("A x y. (T(x,y) | S(y,x))", true, None),
        ("A x y. (R(x,x,y) & R(y,y,x) -> S(y,x))", true, None),
        ("A x y z. (R(x,y,z) -> R(x,y,y))", false, Some(Rule::Uniformity)),
        // the inner block leaves x and y free
        ("A x y. E z. T(x,y,z)", false, Some(Rule::OneDimensionality)),
    ];
    for (src, want, rule) in cases {
        let r = validate_fragment(&f(src), false);
        if r.member != want {
            bad.push(format!("{src}: member = {}", r.member));
        }
        if let Some(rule) = rule {
            if !r.violations.iter().any(|v| v.rule == rule) {
                bad.push(format!("{src}: no {rule} violation in {:?}", r.violations));
            }
        }
    }
    report(
        1,
        "fragment classification",
        &bad,
        format!("{} formulas", cases.len()),
        t,
        secs(1),
    );
}

#[test]
fn criterion_2_type_based_evaluation() {
    let t = Instant::now();
    let mut r = corpus::rng(2);
    let v = vocab(&[("P", 1), ("Q", 1), ("R", 2), ("T", 3)]);
    let vars: Vec<Var> = ["x", "y", "z"].map(Var::new).to_vec();
    let mut bad = Vec::new();
    let mut tuples = 0usize;
    let instances = 1000;
    for i in 0..instances {
        let a = corpus::random_structure(&mut r, &v, 1 + i % 4, 0.5);
        let m = corpus::random_uniform_matrix(&mut r, &v, &vars, 12);
        for_each_tuple(a.size(), 3, |tup| {
            tuples += 1;
            let s: Assignment = vars.iter().cloned().zip(tup.iter().copied()).collect();
            let direct = evaluate(&a, &m, &s).unwrap();
            let by_types = matrix_profile(&a, &vars, tup, &m)
                .and_then(|(ts, pat, table)| evaluate_matrix_by_types(&v, &vars, &ts, &pat, table.as_ref(), &m));
            if by_types != Ok(direct) {
                bad.push(format!("{m} at {tup:?}: {direct} vs {by_types:?}\n{a}"));
            }
        });
    }
    report(
        2,
        "type-based evaluation",
        &bad,
        format!("{instances} instances, {tuples} tuples"),
        t,
        secs(120),
    );
}

#[test]
fn criterion_3_normal_form_equisatisfiable() {
    let t = Instant::now();
    let mut r = corpus::rng(3);
    let p = FormulaParams::new(vocab(&[("P", 1), ("Q", 1), ("R", 2), ("T", 3)]), 30);
    let mut bad = Vec::new();
    let sentences = 200;
    let mut sat_counts = [0usize; 3];
    for _ in 0..sentences {
        let phi = corpus::random_sentence(&mut r, &p);
        let nf = to_normal_form(&phi).unwrap();
        let psi = nf.to_formula();
        for d in 1..=3 {
            let a = brute_force_sat_at(&phi, d).is_some();
            let b = brute_force_sat_at(&psi, d).is_some();
            if a != b {
                bad.push(format!("size {d}: {a} vs {b}\n{phi}\n{nf}"));
            }
            sat_counts[d - 1] += a as usize;
        }
    }
    report(
        3,
        "normal form",
        &bad,
        format!("{sentences} sentences, satisfiable at d=1,2,3: {sat_counts:?}"),
        t,
        secs(900),
    );
}

#[test]
fn criterion_4_solver_vs_brute_force() {
    let t = Instant::now();
    let mut r = corpus::rng(4);
    let v = vocab(&[("P", 1), ("R", 2), ("T", 3)]);
    let mut bad = Vec::new();
    let cases = 100;
    let (mut conclusive, mut sat) = (0, 0);
    for _ in 0..cases {
        let nf = corpus::random_normal_form(&mut r, &v, 8);
        let phi = nf.to_formula();
        let s = decide_sat(&nf, Some(4));
        let b = brute_force_sat(&phi, 4);
        if s.is_conclusive() && b.is_conclusive() {
            conclusive += 1;
            if s.verdict != b.verdict {
                bad.push(format!("{} vs {}: {nf}", s.verdict, b.verdict));
            }
        }
        for (who, w) in [("decide_sat", &s.witness), ("brute force", &b.witness)] {
            if let Some(w) = w {
                sat += 1;
                if !evaluate_sentence(w, &phi).unwrap() {
                    bad.push(format!("{who} witness fails: {nf}\n{w}"));
                }
            }
        }
        if s.verdict == Verdict::Sat && s.witness.is_none() {
            bad.push(format!("sat without witness: {nf}"));
        }
    }
    report(
        4,
        "solver vs oracle",
        &bad,
        format!("{cases} normal forms, {conclusive} conclusive on both, {sat} witnesses re-checked"),
        t,
        secs(900),
    );
}

#[test]
fn criterion_5_small_model_construction() {
    let t = Instant::now();
    let mut r = corpus::rng(5);
    let v = vocab(&[("P", 1), ("Q", 1), ("R", 2), ("T", 3)]);
    let mut bad = Vec::new();
    let (mut done, mut attempts, mut largest) = (0, 0, 0);
    while done < 24 && attempts < 1000 {
        attempts += 1;
        let size = 8 + attempts % 23;
        let a = corpus::random_structure(&mut r, &v, size, 0.3);
        let Some(nf) = corpus::normal_form_satisfied_by(&mut r, &a, 6, 40) else {
            continue;
        };
        done += 1;
        largest = largest.max(size);
        let c = match compress_model(&a, &nf) {
            Ok(c) => c,
            Err(e) => {
                bad.push(format!("{e}\n{nf}"));
                continue;
            }
        };
        if !evaluate_sentence(&c.structure, &nf.to_formula()).unwrap() {
            bad.push(format!("result is not a model: {nf}"));
        }
        if c.structure.size() as u128 > paper_bound(&nf) {
            bad.push(format!("{} elements above the bound: {nf}", c.structure.size()));
        }
        let (_, royal) = find_kings(&a, nf.width());
        if !c.royal_types().is_subset(&royal) {
            bad.push(format!("new royal types: {nf}"));
        }
    }
    if done < 20 {
        bad.push(format!("only {done} pairs"));
    }
    report(
        5,
        "small-model construction",
        &bad,
        format!("{done} pairs, sources up to {largest} elements, zero conflicting writes"),
        t,
        secs(600),
    );
}

#[test]
fn criterion_6_foc2_translation() {
    let t = Instant::now();
    let mut r = corpus::rng(6);
    let p = FormulaParams::new(vocab(&[("P", 1), ("Q", 1), ("R", 2)]), 25);
    let mut bad = Vec::new();
    let total = 100;
    for i in 0..total {
        let phi = corpus::random_formula(&mut r, &p, i % 2 == 1);
        match to_foc2(&phi) {
            Ok(g) => {
                if let Ok(OracleVerdict::Counterexample { structure, assignment }) = equivalence_oracle(&phi, &g, 3) {
                    bad.push(format!(
                        "{phi}\n{structure}\n{:?}",
                        assignment.iter().collect::<Vec<_>>()
                    ));
                }
            }
            Err(e) => bad.push(format!("{phi}: {e}")),
        }
    }
    let two = f("(E x y. (P(x) & P(y) & ~x = y)) & ~(E x y z. (P(x) & P(y) & P(z) & ~x = y & ~x = z & ~y = z))");
    let g = to_foc2(&two).unwrap();
    if !equivalence_oracle(&g, &f("E[=2] x. P(x)"), 4).unwrap().is_equivalent() {
        bad.push("precisely two".into());
    }
    report(
        6,
        "FOC2 translation",
        &bad,
        format!("{total} formulas at size 3, precisely-two at size 4"),
        t,
        secs(1800),
    );
}

#[test]
fn criterion_7_incomparability() {
    let t = Instant::now();
    let mut bad = Vec::new();
    if brute_force_sat_at(&f("E x y z. R(x,y,z)"), 1).is_none() {
        bad.push("ternary witness has no size-1 model".into());
    }
    let inf = f("(A x. E y. R(x,y)) & (E x. A y. ~R(y,x)) & (A x. E[<=1] y. R(y,x))");
    for d in 1..=6 {
        if let Some(m) = brute_force_sat_at(&inf, d) {
            bad.push(format!("model of size {d}\n{m}"));
        }
    }
    report(
        7,
        "incomparability",
        &bad,
        "no model of the infinity axiom up to size 6".into(),
        t,
        secs(300),
    );
}

#[test]
fn criterion_8_tiling_reduction() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let eta = gen_eta();
    if !validate_fragment(&eta, true).member {
        bad.push("eta is not in UFC1=".into());
    }
    for n in 1..=2 {
        if !evaluate_sentence(&build_grid_encoding(n), &eta).unwrap() {
            bad.push(format!("grid n={n} fails eta"));
        }
    }
    if find_isomorphism(&star_projection(&build_grid_encoding(1)).unwrap(), &torus(2, 2)).is_none() {
        bad.push("projection is not the 2x2 torus".into());
    }
    let ts: TileSet = "tile w R=c L=c T=c B=c".parse().unwrap();
    let phi = gen_tiling_formula(&ts);
    if !validate_fragment(&phi, true).member {
        bad.push("tiling formula is not in UFC1=".into());
    }
    for n in 1..=2 {
        let tiling = check_torus_tiling(&ts, 2 * n).unwrap();
        let m = decorate(&build_grid_encoding(n), &ts, &tiling);
        if !evaluate_sentence(&m, &phi).unwrap() {
            bad.push(format!("decorated grid n={n} fails eta & phi_T"));
        }
    }
    let mut models: Vec<_> = (1..=8).filter_map(|d| brute_force_sat_at(&eta, d)).collect();
    models.extend(eta_models(8, 20));
    for a in &models {
        match extract_torus_hom(a) {
            Ok(h) => {
                let star = star_projection(a).unwrap();
                if !is_homomorphism(&torus(h.p, h.q), &star, &h.map)
                    || !is_homomorphism(&torus(h.square, h.square), &star, &h.square_map())
                {
                    bad.push(format!("not a homomorphism\n{a}"));
                }
            }
            Err(e) => bad.push(format!("{e}\n{a}")),
        }
    }
    report(
        8,
        "tiling reduction",
        &bad,
        format!("{} eta-models up to size 8", models.len()),
        t,
        secs(600),
    );
}
