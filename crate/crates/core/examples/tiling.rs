//! The tiling reduction: eta, the grid encoding, tile constraints, and
//! recovering a torus homomorphism from a model.
use uf1eq::solver::brute_force_sat_at;
use uf1eq::structures::evaluate_sentence;
use uf1eq::syntax::validate_fragment;
use uf1eq::tiling::{
    build_grid_encoding, check_torus_tiling, decorate, extract_torus_hom, find_isomorphism, gen_eta,
    gen_tiling_formula, star_projection, torus, TileSet,
};

fn main() {
    let eta = gen_eta();
    println!("eta in UFC1=: {}", validate_fragment(&eta, true).member);

    for n in 1..=2 {
        let g = build_grid_encoding(n);
        let s = star_projection(&g).unwrap();
        println!(
            "grid n={n}: {} elements, models eta: {}, projection is the {}x{} torus: {}",
            g.size(),
            evaluate_sentence(&g, &eta).unwrap(),
            2 * n,
            2 * n,
            find_isomorphism(&s, &torus(2 * n, 2 * n)).is_some()
        );
    }

    let ts: TileSet = "tile a R=r L=b T=u B=u\ntile b R=b L=r T=v B=v".parse().unwrap();
    let phi = gen_tiling_formula(&ts);
    let tiling = check_torus_tiling(&ts, 2).expect("stripes tile the 2x2 torus");
    let m = decorate(&build_grid_encoding(1), &ts, &tiling);
    println!(
        "stripes: decorated grid satisfies eta & phi_T: {}",
        evaluate_sentence(&m, &phi).unwrap()
    );

    // any finite model of eta maps homomorphically onto a torus
    for d in [3, 4, 6] {
        if let Some(a) = brute_force_sat_at(&eta, d) {
            let h = extract_torus_hom(&a).unwrap();
            println!(
                "model of size {d}: {}x{} torus, square map of side {}",
                h.p, h.q, h.square
            );
        }
    }
}
