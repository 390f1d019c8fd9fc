//! The coefficient oracle is queried adaptively: easy instances finish at
//! low precision, while tightly clustered roots drive the precision up.

use rootforge::{isolate_integer, IntPoly, IsolatorConfig, OracleHandle};

fn report(label: &str, p: &IntPoly) {
    let h = OracleHandle::from_int(p.clone());
    let k = p.square_free_part().deg();
    let r = rootforge::isolate(&h, k, &IsolatorConfig::default()).unwrap();
    let (queries, max_l) = h.stats();
    println!(
        "{label}: degree {}, k = {}, b_final = {}, oracle queries = {queries}, max L = {max_l}",
        p.deg(),
        r.k(),
        r.b_final
    );
}

fn main() {
    // well separated: roots 0, 1, ..., 7
    let mut easy = IntPoly::from_i64(&[0, 1]);
    for root in 1..8i64 {
        easy = easy.mul(&IntPoly::from_i64(&[-root, 1]));
    }
    report("well-separated", &easy);

    // clustered: (x^2 - 2 x + 1 - 2^-40 variant) via (2^20 x - 2^20 - 1)(2^20 x - 2^20 + 1)
    let m = 1i64 << 20;
    let near = IntPoly::from_i64(&[-m - 1, m]).mul(&IntPoly::from_i64(&[-m + 1, m]));
    let clustered = near.mul(&IntPoly::from_i64(&[5, 1]));
    report("clustered pair", &clustered);

    // sanity: the clustered instance returns three disjoint disks
    let r = isolate_integer(&clustered, &IsolatorConfig::default()).unwrap();
    assert_eq!(r.k(), 3);
    for i in 0..3 {
        for j in i + 1..3 {
            assert!(r.disks[i].disjoint(&r.disks[j]));
        }
    }
}
