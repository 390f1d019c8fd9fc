//! Shrink isolating disks to an arbitrary target radius: the roots of
//! x^2 - 2 refined below 2^-300.

use rootforge::{isolate, refine, IntPoly, IsolatorConfig, OracleHandle};

fn main() {
    let p = IntPoly::from_i64(&[-2, 0, 1]);
    let h = OracleHandle::from_int(p);
    let cfg = IsolatorConfig::default();

    let coarse = isolate(&h, 2, &cfg).unwrap();
    println!("initial radii:");
    for d in &coarse.disks {
        println!("  {}", d.radius);
    }

    let fine = refine(&h, &coarse, 300, &cfg).unwrap();
    println!("after refinement to 2^-300 (budget 2^-{}):", fine.b_final);
    for d in &fine.disks {
        let (re, _) = d.center.to_f64();
        println!("  center ~ {re:.15}, radius exponent = {}", d.radius);
    }
    let (queries, max_l) = h.stats();
    println!("oracle served {queries} queries, max precision {max_l} bits");
}
