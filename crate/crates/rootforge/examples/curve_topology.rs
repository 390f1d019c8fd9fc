//! Topology of real plane algebraic curves: vertices, edges, connected
//! components, and cycles for a few classic curves.

use num_bigint::BigInt;
use rootforge::{topology, IntPoly2, TopOptions};

fn poly2(terms: &[(i64, usize, usize)]) -> IntPoly2 {
    let mut f = IntPoly2::zero();
    for &(c, i, j) in terms {
        f = f.add(&IntPoly2::monomial(BigInt::from(c), i, j));
    }
    f
}

fn show(label: &str, f: &IntPoly2) {
    let t = topology(f, &TopOptions::default()).unwrap();
    println!(
        "{label}: {} vertices, {} edges, {} component(s), {} cycle(s) [shear {}, prime {}]",
        t.vertices.len(),
        t.edges.len(),
        t.components,
        t.cycles,
        t.shear_s,
        t.prime
    );
}

fn main() {
    show("circle x^2+y^2-1", &poly2(&[(1, 2, 0), (1, 0, 2), (-1, 0, 0)]));
    show("parabola y^2-x", &poly2(&[(1, 0, 2), (-1, 1, 0)]));
    show(
        "nodal cubic y^2-x^2(x+1)",
        &poly2(&[(1, 0, 2), (-1, 3, 0), (-1, 2, 0)]),
    );
    show("cusp y^2-x^3", &poly2(&[(1, 0, 2), (-1, 3, 0)]));
    let left = poly2(&[(1, 2, 0), (1, 0, 2), (-1, 0, 0)]);
    let right = poly2(&[(1, 2, 0), (-8, 1, 0), (16, 0, 0), (1, 0, 2), (-1, 0, 0)]);
    show("two disjoint ovals", &left.mul(&right));
}
