//! Isolate the real solutions of a bivariate polynomial system
//! g(x, y) = h(x, y) = 0 with certified disjoint boxes.

use num_bigint::BigInt;
use rootforge::{solve_system, IntPoly2, TopOptions};

fn poly2(terms: &[(i64, usize, usize)]) -> IntPoly2 {
    let mut f = IntPoly2::zero();
    for &(c, i, j) in terms {
        f = f.add(&IntPoly2::monomial(BigInt::from(c), i, j));
    }
    f
}

fn main() {
    // unit circle intersected with the diagonal x = y
    let g = poly2(&[(1, 2, 0), (1, 0, 2), (-1, 0, 0)]);
    let h = poly2(&[(1, 1, 0), (-1, 0, 1)]);
    let s = solve_system(&g, &h, &TopOptions::default()).unwrap();
    println!("circle meets x = y in {} points:", s.boxes.len());
    for (x, y) in &s.boxes {
        println!(
            "  x in [{}, {}] ~ {:.6}, y in [{}, {}] ~ {:.6}",
            x.lo,
            x.hi,
            x.mid().to_f64(),
            y.lo,
            y.hi,
            y.mid().to_f64()
        );
    }
    assert_eq!(s.boxes.len(), 2);

    // a system with a tangential (double) contact: circle and x = 1
    let v = poly2(&[(1, 1, 0), (-1, 0, 0)]);
    let s = solve_system(&g, &v, &TopOptions::default()).unwrap();
    println!("circle meets x = 1 in {} point(s)", s.boxes.len());
    assert_eq!(s.boxes.len(), 1);
}
