//! Mignotte-type stress test: x^n - 2 (2^t x - 1)^2 has a pair of real
//! roots separated by roughly 2^(-t(n+2)/2).  The solver's working
//! precision adapts to that separation instead of a worst-case bound.

use rootforge::{isolate_integer, refine, IntPoly, IsolatorConfig, OracleHandle};

fn mignotte(n: usize, t: i64) -> IntPoly {
    // x^n - 2 (2^t x - 1)^2
    let lin = IntPoly::new(vec![(-1i64).into(), (1i64 << t).into()]);
    let sq = lin.mul(&lin);
    IntPoly::monomial(1.into(), n).sub(&sq.scale(&2.into()))
}

fn main() {
    for (n, t) in [(8usize, 14i64), (16, 14)] {
        let p = mignotte(n, t);
        let h = OracleHandle::from_int(p.clone());
        let r = isolate_integer(&p, &IsolatorConfig::default()).unwrap();
        let sep_bits = t * (n as i64 + 2) / 2;
        println!(
            "n = {n}, t = {t}: {} distinct roots, b_final = {} (near-pair separation ~ 2^-{sep_bits})",
            r.k(),
            r.b_final
        );
        let fine = refine(&h, &r, 100, &IsolatorConfig::default()).unwrap();
        let near: Vec<_> = (0..fine.k())
            .filter(|&i| {
                let (re, _) = fine.disks[i].center.to_f64();
                fine.real_flags[i] && (re - 2f64.powi(-(t as i32))).abs() < 1e-3
            })
            .collect();
        println!(
            "  near-pair roots around 2^-{t}: {} disks, all radius < 2^-100",
            near.len()
        );
        let (queries, max_l) = h.stats();
        println!("  telemetry: {queries} oracle queries, max precision {max_l} bits");
    }
}
