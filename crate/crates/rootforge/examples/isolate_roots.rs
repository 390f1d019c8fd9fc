//! Isolate the distinct complex roots of an integer polynomial with
//! multiple roots: (x - 1)^3 (x + 2)^2 (x^2 + 1).

use rootforge::{isolate_integer, IntPoly, IsolatorConfig};

fn main() {
    let lin1 = IntPoly::from_i64(&[-1, 1]);
    let lin2 = IntPoly::from_i64(&[2, 1]);
    let quad = IntPoly::from_i64(&[1, 0, 1]);
    let p = lin1
        .mul(&lin1)
        .mul(&lin1)
        .mul(&lin2)
        .mul(&lin2)
        .mul(&quad);
    println!("degree {} input with clustered factors", p.deg());

    let r = isolate_integer(&p, &IsolatorConfig::default()).unwrap();
    println!(
        "{} distinct roots certified at backward-error budget 2^-{}",
        r.k(),
        r.b_final
    );
    for (i, d) in r.disks.iter().enumerate() {
        let (re, im) = d.center.to_f64();
        println!(
            "  root {i}: center ~ ({re:.6}, {im:.6}), radius = {}, multiplicity = {}{}",
            d.radius,
            r.multiplicities[i],
            if r.real_flags[i] { ", real" } else { "" }
        );
    }
    assert_eq!(r.multiplicities.iter().sum::<usize>(), p.deg());
}
