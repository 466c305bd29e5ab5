//! Translates UF1= formulas with at most binary symbols into two-variable
//! counting logic and checks the result on every small structure.
use uf1eq::syntax::parse_formula_infer;
use uf1eq::translate::{
    equivalence_oracle, is_foc2, to_diagram_normal_form, to_foc2_with, Foc2Options, OffCentre, OracleVerdict,
};

fn main() {
    let sources = [
        "(E x y. (P(x) & P(y) & ~x = y)) & ~(E x y z. (P(x) & P(y) & P(z) & ~x = y & ~x = z & ~y = z))",
        "A x. E y. (R(x,y) & P(y) & ~x = y & E z. (R(y,z) & ~P(z)))",
        "E y z. (R(y,z) & ~x = y & ~x = z & ~y = z & Q(z))",
    ];
    for src in sources {
        let (phi, _) = parse_formula_infer(src).unwrap();
        let dnf = to_diagram_normal_form(&phi).unwrap();
        let g = to_foc2_with(&phi, Foc2Options::default()).unwrap();
        println!("{phi}");
        println!("  diagram normal form: {} nodes", dnf.node_count());
        println!("  FOC2: {} nodes, two variables: {}", g.node_count(), is_foc2(&g));
        match equivalence_oracle(&phi, &g, 3).unwrap() {
            OracleVerdict::Equivalent { max_size, checked } => {
                println!("  equivalent on {checked} structures up to size {max_size}")
            }
            OracleVerdict::Counterexample { structure, .. } => println!("  differs on\n{structure}"),
        }
    }

    // the printed off-centre formula loses distinctness among three witnesses
    let (phi, _) =
        parse_formula_infer("E y z u. (R(y,z) & ~x = y & ~x = z & ~x = u & ~y = z & ~y = u & ~z = u & P(u))").unwrap();
    let opts = Foc2Options {
        off_centre: OffCentre::Verbatim,
        ..Default::default()
    };
    let g = to_foc2_with(&phi, opts).unwrap();
    let v = equivalence_oracle(&phi, &g, 4).unwrap();
    println!(
        "verbatim off-centre on three bound variables: equivalent = {}",
        v.is_equivalent()
    );
}
