//! Tiles, the grid axioms `η` over `{R/3, E/1}`, grid and torus
//! encodings, and homomorphisms from tori into models of `η`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::structures::{evaluate_sentence, Structure};
use crate::syntax::{parse_formula_infer, Formula, Vocabulary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("tile set is empty")]
    Empty,
    #[error("tile {0} is defined twice")]
    Duplicate(String),
    #[error("structure must interpret R/3 and E/1")]
    Vocabulary,
    #[error("structure is not a model of eta")]
    EtaViolated,
    #[error("{relation} is not functional at element {element}")]
    NotFunctional { relation: &'static str, element: usize },
    #[error("walk did not close within {0} steps")]
    WalkExceeded(usize),
    #[error("extracted map is not a homomorphism")]
    NotHomomorphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tile {
    pub name: String,
    pub right: String,
    pub left: String,
    pub top: String,
    pub bottom: String,
}

impl Tile {
    pub fn predicate(&self) -> String {
        format!("P_{}", self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileSet {
    pub tiles: Vec<Tile>,
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl TileSet {
    pub fn new(tiles: Vec<Tile>) -> Result<TileSet, TilingError> {
        if tiles.is_empty() {
            return Err(TilingError::Empty);
        }
        for (i, t) in tiles.iter().enumerate() {
            if tiles[..i].iter().any(|u| u.name == t.name) {
                return Err(TilingError::Duplicate(t.name.clone()));
            }
        }
        Ok(TileSet { tiles })
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }
}

/// One tile per line: `tile NAME R=c L=c T=c B=c`. Blank lines and lines
/// starting with `#` are skipped.
impl FromStr for TileSet {
    type Err = TilingError;

    fn from_str(text: &str) -> Result<TileSet, TilingError> {
        let mut tiles = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| TilingError::Parse { line: n + 1, msg };
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.len() != 6 || words[0] != "tile" {
                return Err(err("expected `tile NAME R=c L=c T=c B=c`".into()));
            }
            if !is_ident(words[1]) {
                return Err(err(format!("bad tile name {}", words[1])));
            }
            let mut sides: [Option<String>; 4] = Default::default();
            for w in &words[2..] {
                let Some((k, c)) = w.split_once('=') else {
                    return Err(err(format!("expected SIDE=colour, got {w}")));
                };
                let slot = match k {
                    "R" => 0,
                    "L" => 1,
                    "T" => 2,
                    "B" => 3,
                    _ => return Err(err(format!("unknown side {k}"))),
                };
                if c.is_empty() || sides[slot].replace(c.to_string()).is_some() {
                    return Err(err(format!("side {k} given twice or empty")));
                }
            }
            let [Some(right), Some(left), Some(top), Some(bottom)] = sides else {
                return Err(err("every side needs a colour".into()));
            };
            tiles.push(Tile {
                name: words[1].to_string(),
                right,
                left,
                top,
                bottom,
            });
        }
        TileSet::new(tiles)
    }
}

impl fmt::Display for TileSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tiles {
            writeln!(
                f,
                "tile {} R={} L={} T={} B={}",
                t.name, t.right, t.left, t.top, t.bottom
            )?;
        }
        Ok(())
    }
}

const ETA: [&str; 7] = [
    "E x. E(x)",
    "A x. E[=1] y. E z. (R(x,y,z) & (E(x) <-> E(y)))",
    "A x. E[=1] y. E z. (R(x,y,z) & (E(x) <-> ~E(y)))",
    "A x. E[=1] z. E y. R(x,y,z)",
    "A x y z. (R(x,y,z) -> (E(x) <-> ~E(z)))",
    "A x. E[=1] y. E z. ((E(x) <-> E(y)) & (R(z,x,y) | R(x,y,z)))",
    "A x. E[=1] y. E z. ((E(x) <-> ~E(y)) & (R(z,x,y) | R(x,y,z)))",
];

pub fn eta_conjuncts() -> Vec<Formula> {
    ETA.iter()
        .map(|s| parse_formula_infer(s).expect("eta parses").0)
        .collect()
}

/// The conjunction of the seven grid axioms.
pub fn gen_eta() -> Formula {
    Formula::and_all(eta_conjuncts())
}

fn parse(s: &str) -> Formula {
    parse_formula_infer(s).expect("generated text parses").0
}

// ∀xyz ⋀ ¬((R(x,y,z) ∨ R(z,x,y)) ∧ (E(x) ↔ ±E(y)) ∧ P_t(x) ∧ P_t'(y))
fn forbid(ts: &TileSet, vertical: bool) -> Formula {
    let mut items = Vec::new();
    for t in &ts.tiles {
        for u in &ts.tiles {
            let clash = if vertical { t.top != u.bottom } else { t.right != u.left };
            if clash {
                let e = if vertical { "~E(y)" } else { "E(y)" };
                items.push(format!(
                    "~((R(x,y,z) | R(z,x,y)) & (E(x) <-> {e}) & {}(x) & {}(y))",
                    t.predicate(),
                    u.predicate()
                ));
            }
        }
    }
    if items.is_empty() {
        return Formula::True;
    }
    parse(&format!("A x y z. ({})", items.join(" & ")))
}

/// `ψ₀ ∧ ψ_H ∧ ψ_V` for the tile set.
pub fn tiling_constraints(ts: &TileSet) -> Formula {
    let preds: Vec<String> = ts.tiles.iter().map(Tile::predicate).collect();
    let mut parts = vec![format!(
        "({})",
        preds.iter().map(|p| format!("{p}(x)")).collect::<Vec<_>>().join(" | ")
    )];
    for i in 0..preds.len() {
        for j in i + 1..preds.len() {
            parts.push(format!("~({}(x) & {}(x))", preds[i], preds[j]));
        }
    }
    let psi0 = parse(&format!("A x. ({})", parts.join(" & ")));
    Formula::and_all([psi0, forbid(ts, false), forbid(ts, true)]).simplify_constants()
}

/// `η ∧ φ_T`.
pub fn gen_tiling_formula(ts: &TileSet) -> Formula {
    Formula::and(gen_eta(), tiling_constraints(ts))
}

fn eta_vocab() -> Vocabulary {
    Vocabulary::from_pairs([("R", 3), ("E", 1)]).expect("distinct symbols")
}

fn hv_vocab() -> Vocabulary {
    Vocabulary::from_pairs([("H", 2), ("V", 2)]).expect("distinct symbols")
}

/// The `(p × q)`-torus over `{H, V}`; `(x, y)` is element `y·p + x`.
pub fn torus(p: usize, q: usize) -> Structure {
    let mut s = Structure::new(hv_vocab(), p * q).expect("non-empty torus");
    for y in 0..q {
        for x in 0..p {
            let a = y * p + x;
            s.set("H", &[a, y * p + (x + 1) % p], true);
            s.set("V", &[a, ((y + 1) % q) * p + x], true);
        }
    }
    s
}

/// The encoding of the `(2n × 2n)`-torus: `E` on even rows, and
/// `R(a, b, c)` when `b` is a horizontal and `c` a vertical step on from
/// `b`, or the other way round.
pub fn build_grid_encoding(n: usize) -> Structure {
    assert!(n >= 1);
    let side = 2 * n;
    let mut s = Structure::new(eta_vocab(), side * side).expect("non-empty grid");
    let at = |x: usize, y: usize| (y % side) * side + x % side;
    for y in 0..side {
        for x in 0..side {
            let a = at(x, y);
            if y % 2 == 0 {
                s.set("E", &[a], true);
            }
            s.set("R", &[a, at(x + 1, y), at(x + 1, y + 1)], true);
            s.set("R", &[a, at(x, y + 1), at(x + 1, y + 1)], true);
        }
    }
    s
}

fn check_eta_vocab(a: &Structure) -> Result<(), TilingError> {
    if a.vocab().arity("R") == Some(3) && a.vocab().arity("E") == Some(1) {
        Ok(())
    } else {
        Err(TilingError::Vocabulary)
    }
}

/// `A*`: `H` and `V` are the pairs satisfying `φ_H` and `φ_V`.
pub fn star_projection(a: &Structure) -> Result<Structure, TilingError> {
    check_eta_vocab(a)?;
    let mut s = Structure::new(hv_vocab(), a.size()).expect("non-empty");
    for t in a.tuples("R") {
        for (u, v) in [(t[0], t[1]), (t[1], t[2])] {
            let rel = if a.holds("E", &[u]) == a.holds("E", &[v]) {
                "H"
            } else {
                "V"
            };
            s.set(rel, &[u, v], true);
        }
    }
    Ok(s)
}

/// Bijection `f` with `a ⊨ R(ē)` iff `b ⊨ R(f(ē))` for every symbol,
/// if one exists. Both structures need the same vocabulary.
pub fn find_isomorphism(a: &Structure, b: &Structure) -> Option<Vec<usize>> {
    if a.size() != b.size() || a.vocab() != b.vocab() {
        return None;
    }
    let rels: Vec<(String, usize)> = a.vocab().iter().map(|(n, k)| (n.to_string(), k)).collect();
    if rels.iter().any(|(r, _)| a.tuple_count(r) != b.tuple_count(r)) {
        return None;
    }
    let n = a.size();
    let mut f = vec![usize::MAX; n];
    let mut used = vec![false; n];
    // tuples over 0..=i that mention i agree under f
    fn consistent(a: &Structure, b: &Structure, rels: &[(String, usize)], f: &[usize], i: usize) -> bool {
        rels.iter().all(|(r, k)| {
            let mut ok = true;
            crate::structures::for_each_tuple(i + 1, *k, |t| {
                if ok && t.contains(&i) {
                    let img: Vec<usize> = t.iter().map(|&e| f[e]).collect();
                    ok = a.holds(r, t) == b.holds(r, &img);
                }
            });
            ok
        })
    }
    fn go(
        a: &Structure,
        b: &Structure,
        rels: &[(String, usize)],
        f: &mut Vec<usize>,
        used: &mut Vec<bool>,
        i: usize,
    ) -> bool {
        if i == f.len() {
            return true;
        }
        for c in 0..f.len() {
            if used[c] {
                continue;
            }
            f[i] = c;
            used[c] = true;
            if consistent(a, b, rels, f, i) && go(a, b, rels, f, used, i + 1) {
                return true;
            }
            used[c] = false;
        }
        f[i] = usize::MAX;
        false
    }
    go(a, b, &rels, &mut f, &mut used, 0).then_some(f)
}

/// Whether `f` (one tile index per element) satisfies the horizontal and
/// vertical matching conditions on an `{H, V}` structure.
pub fn is_tiling(ts: &TileSet, s: &Structure, f: &[usize]) -> bool {
    s.tuples("H")
        .iter()
        .all(|t| ts.tiles[f[t[0]]].right == ts.tiles[f[t[1]]].left)
        && s.tuples("V")
            .iter()
            .all(|t| ts.tiles[f[t[0]]].top == ts.tiles[f[t[1]]].bottom)
}

/// Brute-force search for a tiling of the `(p × q)`-torus, cells in
/// row-major order. The tile of the first cell is split across threads.
pub fn find_torus_tiling(ts: &TileSet, p: usize, q: usize) -> Option<Vec<usize>> {
    let k = ts.len();
    let fits = |f: &[usize], cell: usize| -> bool {
        let (x, y) = (cell % p, cell / p);
        let t = &ts.tiles[f[cell]];
        let left = y * p + (x + p - 1) % p;
        let below = ((y + q - 1) % q) * p + x;
        let right = y * p + (x + 1) % p;
        let above = ((y + 1) % q) * p + x;
        (left > cell || ts.tiles[f[left]].right == t.left)
            && (below > cell || ts.tiles[f[below]].top == t.bottom)
            && (right > cell || t.right == ts.tiles[f[right]].left)
            && (above > cell || t.top == ts.tiles[f[above]].bottom)
    };
    fn go(f: &mut Vec<usize>, cell: usize, k: usize, fits: &dyn Fn(&[usize], usize) -> bool) -> bool {
        if cell == f.len() {
            return true;
        }
        for t in 0..k {
            f[cell] = t;
            if fits(f, cell) && go(f, cell + 1, k, fits) {
                return true;
            }
        }
        false
    }
    let found = (0..k).into_par_iter().find_map_first(|first| {
        let mut f = vec![0; p * q];
        f[0] = first;
        (fits(&f, 0) && go(&mut f, 1, k, &fits)).then_some(f)
    })?;
    assert!(is_tiling(ts, &torus(p, q), &found), "search returned a non-tiling");
    Some(found)
}

pub fn check_torus_tiling(ts: &TileSet, n: usize) -> Option<Vec<usize>> {
    find_torus_tiling(ts, n, n)
}

/// Adds `P_t` for the tile of each element. `tiling` is indexed like the
/// elements of `a`.
pub fn decorate(a: &Structure, ts: &TileSet, tiling: &[usize]) -> Structure {
    let names: Vec<String> = ts.tiles.iter().map(Tile::predicate).collect();
    let extra = Vocabulary::from_pairs(names.iter().map(|n| (n.as_str(), 1))).expect("distinct tile names");
    let mut s = a.expand(&extra).expect("tile predicates are fresh");
    for (e, &t) in tiling.iter().enumerate() {
        s.set(&ts.tiles[t].predicate(), &[e], true);
    }
    s
}

/// A homomorphism from the `(p × q)`-torus into `A*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusHom {
    pub p: usize,
    pub q: usize,
    /// Image of `(x, y)` at index `y·p + x`.
    pub map: Vec<usize>,
    /// `2m = lcm(p, q, 2)`, the side of the square torus mapped in as well.
    pub square: usize,
}

impl TorusHom {
    pub fn at(&self, x: usize, y: usize) -> usize {
        self.map[(y % self.q) * self.p + x % self.p]
    }

    /// The induced map from the `(2m × 2m)`-torus.
    pub fn square_map(&self) -> Vec<usize> {
        let s = self.square;
        (0..s * s).map(|i| self.at(i % s, i / s)).collect()
    }
}

/// Whether `map` sends `H`/`V` edges of `domain` to `H`/`V` edges of `target`.
pub fn is_homomorphism(domain: &Structure, target: &Structure, map: &[usize]) -> bool {
    ["H", "V"].iter().all(|r| {
        domain
            .tuples(r)
            .iter()
            .all(|t| target.holds(r, &[map[t[0]], map[t[1]]]))
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn successor(s: &Structure, rel: &'static str) -> Result<Vec<usize>, TilingError> {
    (0..s.size())
        .map(|a| {
            let next: Vec<usize> = (0..s.size()).filter(|&b| s.holds(rel, &[a, b])).collect();
            match next[..] {
                [b] => Ok(b),
                _ => Err(TilingError::NotFunctional {
                    relation: rel,
                    element: a,
                }),
            }
        })
        .collect()
}

/// Walks the grid from an `E`-element: rows follow `H`, columns `V`.
/// The first repeated element of row 0 fixes the width, the first
/// repeated row segment the height.
pub fn extract_torus_hom(a: &Structure) -> Result<TorusHom, TilingError> {
    check_eta_vocab(a)?;
    if !evaluate_sentence(a, &gen_eta()).map_err(|_| TilingError::Vocabulary)? {
        return Err(TilingError::EtaViolated);
    }
    let star = star_projection(a)?;
    let h = successor(&star, "H")?;
    let v = successor(&star, "V")?;
    let n = a.size();
    let limit = n * n + n;
    let start = (0..n).find(|&e| a.holds("E", &[e])).ok_or(TilingError::EtaViolated)?;

    let mut row = vec![start];
    let (i, j) = loop {
        let next = h[*row.last().unwrap()];
        if let Some(i) = row.iter().position(|&e| e == next) {
            break (i, row.len());
        }
        row.push(next);
        if row.len() > limit {
            return Err(TilingError::WalkExceeded(limit));
        }
    };
    let mut segments: Vec<Vec<usize>> = vec![row[i..j].to_vec()];
    let (k, l) = loop {
        let next: Vec<usize> = segments.last().unwrap().iter().map(|&e| v[e]).collect();
        if let Some(k) = segments.iter().position(|s| *s == next) {
            break (k, segments.len());
        }
        segments.push(next);
        if segments.len() > limit {
            return Err(TilingError::WalkExceeded(limit));
        }
    };
    let (p, q) = (j - i, l - k);
    let map: Vec<usize> = segments[k..l].concat();
    let hom = TorusHom {
        p,
        q,
        map,
        square: lcm(lcm(p, q), 2),
    };
    let s = hom.square;
    if !is_homomorphism(&torus(p, q), &star, &hom.map) || !is_homomorphism(&torus(s, s), &star, &hom.square_map()) {
        return Err(TilingError::NotHomomorphism);
    }
    Ok(hom)
}

/// Models of `η` with `E = {0, …, e−1}`, built from a horizontal successor
/// `hs` that keeps `E` and a vertical successor `vs` that flips it, with
/// `hs∘vs = vs∘hs =: d` and `R = {(a, hs(a), d(a)), (a, vs(a), d(a))}`.
/// Every model of `η` is isomorphic to one of this shape. At most `limit`
/// models are returned per domain size.
pub fn eta_models(max_size: usize, limit: usize) -> Vec<Structure> {
    let mut out = Vec::new();
    for n in 2..=max_size {
        let mut found = Vec::new();
        for e in 1..n {
            let mut hs = vec![usize::MAX; n];
            let mut vs = vec![usize::MAX; n];
            search(n, e, 0, &mut hs, &mut vs, limit, &mut found);
            if found.len() >= limit {
                break;
            }
        }
        out.extend(found);
    }
    out
}

fn search(
    n: usize,
    e: usize,
    x: usize,
    hs: &mut Vec<usize>,
    vs: &mut Vec<usize>,
    limit: usize,
    out: &mut Vec<Structure>,
) {
    if out.len() >= limit {
        return;
    }
    if x == n {
        out.push(eta_model(e, hs, vs));
        return;
    }
    let same: Vec<usize> = if x < e { (0..e).collect() } else { (e..n).collect() };
    let other: Vec<usize> = if x < e { (e..n).collect() } else { (0..e).collect() };
    for &a in &same {
        hs[x] = a;
        for &b in &other {
            vs[x] = b;
            if commutes(hs, vs) {
                search(n, e, x + 1, hs, vs, limit, out);
            }
        }
    }
    hs[x] = usize::MAX;
    vs[x] = usize::MAX;
}

// hs(vs(y)) = vs(hs(y)) wherever both sides are defined
fn commutes(hs: &[usize], vs: &[usize]) -> bool {
    let get = |f: &[usize], a: usize| f.get(a).copied().filter(|&b| b != usize::MAX);
    (0..hs.len()).all(|y| {
        let l = get(vs, y).and_then(|b| get(hs, b));
        let r = get(hs, y).and_then(|b| get(vs, b));
        match (l, r) {
            (Some(l), Some(r)) => l == r,
            _ => true,
        }
    })
}

fn eta_model(e: usize, hs: &[usize], vs: &[usize]) -> Structure {
    let n = hs.len();
    let mut s = Structure::new(eta_vocab(), n).expect("non-empty");
    for a in 0..n {
        if a < e {
            s.set("E", &[a], true);
        }
        let d = hs[vs[a]];
        s.set("R", &[a, hs[a], d], true);
        s.set("R", &[a, vs[a], d], true);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::validate_fragment;

    fn tiles(text: &str) -> TileSet {
        text.parse().unwrap()
    }

    #[test]
    fn eta_shape() {
        let c = eta_conjuncts();
        assert_eq!(c.len(), 7);
        assert_eq!(c[0].to_string(), "E x. E(x)");
        assert!(validate_fragment(&gen_eta(), true).member);
        assert!(!validate_fragment(&gen_eta(), false).member);
    }

    #[test]
    fn tile_file_round_trip() {
        let ts = tiles("# stripes\ntile a R=1 L=1 T=x B=y\ntile b R=1 L=1 T=y B=x\n");
        assert_eq!(ts.len(), 2);
        assert_eq!(ts.to_string().parse::<TileSet>().unwrap(), ts);
        assert!(matches!(
            "tile a R=1 L=1 T=2".parse::<TileSet>(),
            Err(TilingError::Parse { line: 1, .. })
        ));
        assert_eq!("".parse::<TileSet>(), Err(TilingError::Empty));
    }

    #[test]
    fn tiling_formula_shapes() {
        let same = tiles("tile a R=c L=c T=d B=d");
        assert_eq!(tiling_constraints(&same), parse("A x. P_a(x)"));
        let f = gen_tiling_formula(&tiles("tile a R=c L=e T=d B=d"));
        assert!(validate_fragment(&f, true).member);
        assert!(f.to_string().contains("P_a(x) & P_a(y)"));
        let three = tiling_constraints(&tiles(
            "tile a R=1 L=1 T=1 B=1\ntile b R=1 L=1 T=1 B=1\ntile c R=1 L=1 T=1 B=1",
        ));
        assert_eq!(
            three.conjuncts()[0].node_count(),
            parse("A x. ((P_a(x) | P_b(x) | P_c(x)) & ~(P_a(x) & P_b(x)) & ~(P_a(x) & P_c(x)) & ~(P_b(x) & P_c(x)))")
                .node_count()
        );
    }

    #[test]
    fn grid_encodings_model_eta() {
        for n in 1..=2 {
            let g = build_grid_encoding(n);
            assert_eq!(g.unary_set("E").len(), 2 * n * n);
            assert!(evaluate_sentence(&g, &gen_eta()).unwrap());
            let star = star_projection(&g).unwrap();
            assert!(find_isomorphism(&star, &torus(2 * n, 2 * n)).is_some());
        }
    }

    #[test]
    fn projection_of_small_structures() {
        let mut a = Structure::new(eta_vocab(), 3).unwrap();
        assert_eq!(star_projection(&a).unwrap().tuple_count("H"), 0);
        a.set("R", &[0, 1, 2], true);
        a.set("E", &[0], true);
        a.set("E", &[1], true);
        let s = star_projection(&a).unwrap();
        assert!(s.holds("H", &[0, 1]));
        assert!(s.holds("V", &[1, 2]));
    }

    #[test]
    fn tilings_of_tori() {
        assert_eq!(
            check_torus_tiling(&tiles("tile a R=c L=c T=d B=d"), 3),
            Some(vec![0; 9])
        );
        assert_eq!(check_torus_tiling(&tiles("tile a R=c L=e T=d B=d"), 3), None);
        let stripes = tiles("tile a R=1 L=1 T=x B=y\ntile b R=1 L=1 T=y B=x");
        assert!(check_torus_tiling(&stripes, 2).is_some());
        assert!(check_torus_tiling(&stripes, 3).is_none());
    }

    #[test]
    fn homomorphisms_from_encodings() {
        let h = extract_torus_hom(&build_grid_encoding(1)).unwrap();
        assert_eq!((h.p, h.q, h.square), (2, 2, 2));
        let h = extract_torus_hom(&build_grid_encoding(2)).unwrap();
        assert!(4 % h.p == 0 && 4 % h.q == 0);
        let mut broken = build_grid_encoding(1);
        broken.set("E", &[0], false);
        assert_eq!(extract_torus_hom(&broken), Err(TilingError::EtaViolated));
    }

    #[test]
    fn enumerated_models_satisfy_eta() {
        let eta = gen_eta();
        let models = eta_models(6, 4);
        assert!(models.iter().any(|m| m.size() == 2));
        for m in &models {
            assert!(evaluate_sentence(m, &eta).unwrap(), "{m}");
            extract_torus_hom(m).unwrap();
        }
    }
}
