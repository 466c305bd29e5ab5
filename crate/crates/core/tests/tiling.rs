use uf1eq::solver::brute_force_sat_at;
use uf1eq::structures::evaluate_sentence;
use uf1eq::tiling::{
    build_grid_encoding, check_torus_tiling, decorate, eta_models, extract_torus_hom, gen_eta, gen_tiling_formula,
    is_homomorphism, star_projection, torus, TileSet,
};

fn check(a: &uf1eq::structures::Structure) {
    let h = extract_torus_hom(a).unwrap();
    let star = star_projection(a).unwrap();
    assert!(is_homomorphism(&torus(h.p, h.q), &star, &h.map));
    assert!(is_homomorphism(&torus(h.square, h.square), &star, &h.square_map()));
}

#[test]
fn every_small_eta_model_maps_onto_a_torus() {
    let eta = gen_eta();
    let mut seen = 0;
    for d in 1..=6 {
        if let Some(a) = brute_force_sat_at(&eta, d) {
            check(&a);
            seen += 1;
        }
    }
    for a in eta_models(8, 6) {
        assert!(evaluate_sentence(&a, &eta).unwrap());
        check(&a);
        seen += 1;
    }
    assert!(seen > 10);
}

#[test]
fn decorated_grids_satisfy_the_reduction() {
    let sets = [
        "tile w R=c L=c T=c B=c",
        "tile a R=r L=b T=u B=u\ntile b R=b L=r T=v B=v",
        "tile a R=1 L=1 T=x B=y\ntile b R=1 L=1 T=y B=x",
    ];
    for src in sets {
        let ts: TileSet = src.parse().unwrap();
        let phi = gen_tiling_formula(&ts);
        for n in 1..=2 {
            let t = check_torus_tiling(&ts, 2 * n).unwrap_or_else(|| panic!("{src} n={n}"));
            let m = decorate(&build_grid_encoding(n), &ts, &t);
            assert!(evaluate_sentence(&m, &phi).unwrap(), "{src} n={n}");
        }
    }
}

#[test]
fn untileable_sets_have_no_tiling() {
    let ts: TileSet = "tile a R=r L=l T=u B=u".parse().unwrap();
    for n in 1..=3 {
        assert!(check_torus_tiling(&ts, n).is_none());
    }
}
