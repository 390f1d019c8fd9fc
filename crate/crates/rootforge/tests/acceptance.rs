//! End-to-end validation suite. Each test covers one acceptance criterion
//! and prints a single `criterion NN <name>: PASS|FAIL` line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rootforge::cluster::cluster;
use rootforge::factorizer::factorize;
use rootforge::intpoly2::IntPoly2;
use rootforge::oracle::AlgebraicReal;
use rootforge::rootbound::compute_gamma;
use rootforge::topnt::{gate_diagnostics, TopError};
use rootforge::*;

// ---------------------------------------------------------------------------
// reporting helpers

struct Report {
    name: &'static str,
    fails: Vec<String>,
}

impl Report {
    fn new(name: &'static str) -> Self {
        Report { name, fails: Vec::new() }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.fails.push(msg());
        }
    }

    fn finish(self) {
        if self.fails.is_empty() {
            println!("criterion {}: PASS", self.name);
        } else {
            println!("criterion {}: FAIL", self.name);
            for f in self.fails.iter().take(10) {
                println!("  {f}");
            }
            panic!("criterion {} failed with {} violations", self.name, self.fails.len());
        }
    }
}

// ---------------------------------------------------------------------------
// constructed instances with known integer roots

/// `lc * prod (x - r_i)^(m_i)` with pairwise distinct integer roots.
struct Instance {
    poly: IntPoly,
    roots: Vec<(BigInt, usize)>,
}

impl Instance {
    fn degree(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    /// Minimum distance from root `i` to the other roots (exact integer).
    fn sigma(&self, i: usize) -> BigInt {
        self.roots
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (r, _))| (&self.roots[i].0 - r).abs())
            .min()
            .expect("needs at least two roots")
    }

    /// `prod_{j != i} (r_i - r_j)^(m_j)` (exact integer).
    fn p_i(&self, i: usize) -> BigInt {
        let mut p = BigInt::one();
        for (j, (r, m)) in self.roots.iter().enumerate() {
            if j != i {
                let d = &self.roots[i].0 - r;
                for _ in 0..*m {
                    p *= &d;
                }
            }
        }
        p
    }
}

fn random_instance(
    rng: &mut ChaCha8Rng,
    k: usize,
    max_mult: usize,
    root_log2: u32,
    max_deg: usize,
    max_lc: i64,
) -> Instance {
    let mut roots: Vec<(BigInt, usize)> = Vec::new();
    while roots.len() < k {
        let e = rng.gen_range(0..=root_log2);
        let bound = 1i64 << e;
        let r = BigInt::from(rng.gen_range(-bound..=bound));
        if roots.iter().all(|(x, _)| *x != r) {
            roots.push((r, 1));
        }
    }
    // make sure the largest-magnitude root is at least 1 (for the root-bound
    // telemetry) by nudging a zero-only instance
    if roots.iter().all(|(r, _)| r.is_zero()) {
        roots[0].0 = BigInt::one();
    }
    let mut deg = k;
    for (_, m) in roots.iter_mut() {
        let extra = rng.gen_range(0..max_mult);
        let extra = extra.min(max_deg.saturating_sub(deg));
        *m += extra;
        deg += extra;
    }
    let mut poly = IntPoly::constant(BigInt::from(rng.gen_range(1..=max_lc)));
    for (r, m) in &roots {
        let lin = IntPoly::new(vec![-r.clone(), BigInt::one()]);
        for _ in 0..*m {
            poly = poly.mul(&lin);
        }
    }
    Instance { poly, roots }
}

fn int_point(r: &BigInt) -> ComplexDyadic {
    ComplexDyadic::real(Dyadic::new(r.clone(), 0))
}

/// Checks a result against the constructed ground truth; pushes any
/// violations into `rep` tagged with `tag`.
fn check_against_truth(rep: &mut Report, inst: &Instance, res: &RootResult, tag: &str) {
    let n = inst.degree();
    rep.check(res.k() == inst.roots.len(), || {
        format!("{tag}: k = {} but {} distinct roots constructed", res.k(), inst.roots.len())
    });
    let total: usize = res.multiplicities.iter().sum();
    rep.check(total == n, || format!("{tag}: multiplicities sum {total} != degree {n}"));
    for i in 0..res.k() {
        for j in i + 1..res.k() {
            rep.check(res.disks[i].disjoint(&res.disks[j]), || {
                format!("{tag}: disks {i} and {j} overlap")
            });
        }
    }
    for (ri, (r, m)) in inst.roots.iter().enumerate() {
        let z = int_point(r);
        let holders: Vec<usize> = (0..res.k()).filter(|&i| res.disks[i].contains(&z)).collect();
        rep.check(holders.len() == 1, || {
            format!("{tag}: root {r} contained in {} disks", holders.len())
        });
        if let [d] = holders[..] {
            rep.check(res.multiplicities[d] == *m, || {
                format!("{tag}: root {r} multiplicity {} != {m}", res.multiplicities[d])
            });
            rep.check(res.real_flags[d], || format!("{tag}: real root {r} not flagged real"));
            if inst.roots.len() >= 2 {
                // R_i * 64n < sigma_i, exactly in dyadics
                let lhs = &res.disks[d].radius * &Dyadic::from_int(64 * n as i64);
                let rhs = Dyadic::new(inst.sigma(ri), 0);
                rep.check(lhs < rhs, || {
                    format!("{tag}: radius bound violated at root {r}: 64n*R = {lhs} >= sigma = {rhs}")
                });
            }
        }
    }
}

// ---------------------------------------------------------------------------
// criterion 1

#[test]
fn c01_isolation_soundness() {
    let mut rep = Report::new("01 isolation soundness");
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let cfg = IsolatorConfig::default();
    for idx in 0..1000usize {
        let k = 2 + idx % 5;
        let inst = random_instance(&mut rng, k, 5, 20, 40, 3);
        match isolate_integer(&inst.poly, &cfg) {
            Ok(res) => check_against_truth(&mut rep, &inst, &res, &format!("instance {idx}")),
            Err(e) => rep.check(false, || format!("instance {idx}: isolate failed: {e}")),
        }
        if !rep.fails.is_empty() {
            break;
        }
    }
    rep.finish();
}

// ---------------------------------------------------------------------------
// criterion 2: re-verify the backward-error contract independently

/// Exact sequential expansion of `prod (x - z_i)` (deliberately not the
/// library's balanced product tree).
fn expand_sequential(roots: &[ComplexDyadic]) -> Vec<ComplexDyadic> {
    let mut c = vec![ComplexDyadic::real(Dyadic::one())];
    for z in roots {
        let mut next = vec![ComplexDyadic::zero(); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].add(a);
            next[i] = next[i].sub(&a.mul(z));
        }
        c = next;
    }
    c
}

#[test]
fn c02_backward_error_contract() {
    let mut rep = Report::new("02 backward-error contract");
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for idx in 0..40usize {
        let k = 2 + idx % 4;
        let inst = random_instance(&mut rng, k, 3, 6, 16, 3);
        let h = OracleHandle::from_int(inst.poly.clone());
        let gamma = compute_gamma(&h).expect("gamma");
        let b = if idx % 2 == 0 { 256 } else { 1024 };
        let f = match factorize(&h, b, gamma, None) {
            Ok(f) => f,
            Err(e) => {
                rep.check(false, || format!("instance {idx}: factorize failed: {e}"));
                continue;
            }
        };
        let mono = expand_sequential(&f.roots);
        let lead = Dyadic::new(inst.poly.leading(), 0);
        let bits = 2 * b;
        let mut diff = Dyadic::zero();
        for i in 0..=inst.degree() {
            let exact = ComplexDyadic::real(Dyadic::new(inst.poly.coeff(i), 0));
            let d = exact.sub(&mono[i].scale(&lead));
            diff = &diff + &d.modulus_upper(bits);
        }
        let norm = Dyadic::new(inst.poly.norm_1(), 0);
        rep.check(diff.mul_pow2(b) <= norm, || {
            format!("instance {idx}: ||p - p^||_1 * 2^{b} = {} > ||p||_1 = {norm}", diff.mul_pow2(b))
        });
    }
    rep.finish();
}

// ---------------------------------------------------------------------------
// criterion 3: root bound sandwich

#[test]
fn c03_root_bound() {
    let mut rep = Report::new("03 root bound");
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for idx in 0..200usize {
        let k = 2 + idx % 5;
        let inst = random_instance(&mut rng, k, 4, 18, 30, 4);
        let h = OracleHandle::from_int(inst.poly.clone());
        let gamma = compute_gamma(&h).expect("gamma");
        let n = inst.degree() as f64;
        let maxmod = inst
            .roots
            .iter()
            .map(|(r, _)| r.abs())
            .max()
            .unwrap()
            .max(BigInt::one());
        // gamma_p = log2 max(1, max |z_i|), exact for these integer roots
        let gamma_p = bigint_to_f64(&maxmod).log2();
        rep.check((gamma as f64) >= gamma_p.floor(), || {
            format!("instance {idx}: gamma {gamma} below gamma_p {gamma_p}")
        });
        rep.check((gamma as f64) < 8.0 * n.log2() + gamma_p + 1e-9, || {
            format!("instance {idx}: gamma {gamma} >= 8 log2(n) + gamma_p = {}", 8.0 * n.log2() + gamma_p)
        });
    }
    rep.finish();
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    let s = x.to_string();
    s.parse::<f64>().unwrap()
}

// ---------------------------------------------------------------------------
// criterion 4: clustering correctness once the budget clears the ground-truth
// threshold

fn floor_log2_big(x: &BigInt) -> i64 {
    assert!(!x.is_zero());
    x.abs().bits() as i64 - 1
}

fn ceil_log2_i64(x: i64) -> i64 {
    assert!(x >= 1);
    64 - (x - 1).max(0).leading_zeros() as i64
}

/// Smallest power-of-two budget satisfying all the ground-truth conditions
/// (degree/log floor, per-cluster radius vs n^2 and sigma, product lower
/// bound, and the strengthened clustering/certification variants).
fn ground_truth_budget(inst: &Instance) -> i64 {
    let n = inst.degree() as i64;
    let tau = floor_log2_big(&inst.poly.coeffs().iter().map(|c| c.abs()).max().unwrap()) + 1;
    let gamma_p = inst
        .roots
        .iter()
        .map(|(r, _)| if r.abs() <= BigInt::one() { 0 } else { floor_log2_big(r) + 1 })
        .max()
        .unwrap();
    let mut want = (8 * n).max(n * ceil_log2_i64(n.max(2)));
    for (i, (r, m)) in inst.roots.iter().enumerate() {
        let m = *m as i64;
        let sig = inst.sigma(i);
        let log_sig = floor_log2_big(&sig); // sigma >= 2^log_sig
        let p_i = inst.p_i(i);
        let log_p = floor_log2_big(&p_i); // |P_i| >= 2^log_p
        let log_m = if r.abs() <= BigInt::one() { 0 } else { floor_log2_big(r) + 1 };
        want = want.max(2 * m * ceil_log2_i64(2 * n * n));
        want = want.max(2 * m * (ceil_log2_i64(2 * n) - log_sig).max(1));
        want = want.max(2 * (4 + ceil_log2_i64(n + 1) + tau + n * log_m - log_p).max(1));
        let c7 = (8 * (ceil_log2_i64(4 * n) - log_sig))
            .max(ceil_log2_i64(1024 * n * n) - log_sig)
            .max(1);
        want = want.max(2 * m * (c7 + 1));
        let c8 = (ceil_log2_i64(n + 1) + 2 * n * gamma_p + 8 * n - log_p).max(4);
        want = want.max(8 * (c8 + 1));
    }
    let mut b = 1i64;
    while b < want {
        b *= 2;
    }
    b
}

#[test]
fn c04_clustering_at_threshold() {
    let mut rep = Report::new("04 clustering at threshold budget");
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for idx in 0..200usize {
        let k = 2 + idx % 4;
        let inst = random_instance(&mut rng, k, 3, 2, 10, 1);
        let b0 = ground_truth_budget(&inst);
        let h = OracleHandle::from_int(inst.poly.clone());
        let gamma = compute_gamma(&h).expect("gamma");
        let f = match factorize(&h, b0, gamma, None) {
            Ok(f) => f,
            Err(e) => {
                rep.check(false, || format!("instance {idx}: factorize at b0={b0} failed: {e}"));
                continue;
            }
        };
        let cs = match cluster(&f.roots, inst.roots.len(), b0) {
            Ok(cs) => cs,
            Err(e) => {
                rep.check(false, || format!("instance {idx}: clustering at b0={b0} failed: {e:?}"));
                continue;
            }
        };
        for (r, m) in &inst.roots {
            let z = int_point(r);
            let holders: Vec<usize> = cs
                .iter()
                .enumerate()
                .filter(|(_, c)| {
                    let r2 = &c.radius * &c.radius;
                    z.sub(&c.seed).norm_sq() <= r2
                })
                .map(|(i, _)| i)
                .collect();
            rep.check(holders.len() == 1, || {
                format!("instance {idx}: root {r} in {} cluster disks", holders.len())
            });
            if let [c] = holders[..] {
                rep.check(cs[c].members.len() == *m, || {
                    format!(
                        "instance {idx}: root {r} cluster holds {} approximations, expected {m}",
                        cs[c].members.len()
                    )
                });
            }
        }
        if !rep.fails.is_empty() {
            break;
        }
    }
    rep.finish();
}

// ---------------------------------------------------------------------------
// criterion 5: refinement to 2^-256 against an independent 512-bit oracle

#[test]
fn c05_refinement() {
    let mut rep = Report::new("05 refinement to 2^-256");
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let cfg = IsolatorConfig::default();
    for idx in 0..50usize {
        // p = prod (x^2 - d_j)^(e_j) * prod (x - r_i): surd roots with known
        // 512-bit enclosures plus integer roots
        let nsurd = 1 + idx % 3;
        let mut ds: Vec<(i64, usize)> = Vec::new();
        while ds.len() < nsurd {
            let d = rng.gen_range(2i64..=50);
            let s = (d as f64).sqrt() as i64;
            if s * s != d && ds.iter().all(|(x, _)| *x != d) {
                let e = 1 + rng.gen_range(0..2usize);
                ds.push((d, e));
            }
        }
        let nint = idx % 3;
        let mut rs: Vec<i64> = Vec::new();
        while rs.len() < nint {
            let r = rng.gen_range(-9i64..=9);
            if rs.iter().all(|x| *x != r) {
                rs.push(r);
            }
        }
        let mut p = IntPoly::one();
        for (d, e) in &ds {
            let q = IntPoly::from_i64(&[-d, 0, 1]);
            for _ in 0..*e {
                p = p.mul(&q);
            }
        }
        for r in &rs {
            p = p.mul(&IntPoly::from_i64(&[-r, 1]));
        }
        let iso = match isolate_integer(&p, &cfg) {
            Ok(r) => r,
            Err(e) => {
                rep.check(false, || format!("instance {idx}: isolate failed: {e}"));
                continue;
            }
        };
        let h = OracleHandle::from_int(p.clone());
        let fine = match refine(&h, &iso, 256, &cfg) {
            Ok(r) => r,
            Err(e) => {
                rep.check(false, || format!("instance {idx}: refine failed: {e}"));
                continue;
            }
        };
        let target = Dyadic::pow2(-256);
        for d in &fine.disks {
            rep.check(d.radius < target, || {
                format!("instance {idx}: radius {} not below 2^-256", d.radius)
            });
        }
        // 512-bit enclosures of every true root, fully independent of the
        // isolator: integer points and certified square-root brackets
        let mut oracle: Vec<(DyadicInterval, usize)> = Vec::new();
        for (d, e) in &ds {
            let dd = Dyadic::from_int(*d);
            let lo = dd.sqrt_lower(512);
            let hi = dd.sqrt_upper(512);
            oracle.push((DyadicInterval::new(lo.clone(), hi.clone()), *e));
            oracle.push((DyadicInterval::new(hi.neg_int(), lo.neg_int()), *e));
        }
        for r in &rs {
            oracle.push((DyadicInterval::point(Dyadic::from_int(*r)), 1));
        }
        rep.check(fine.k() == oracle.len(), || {
            format!("instance {idx}: {} disks for {} known roots", fine.k(), oracle.len())
        });
        for (int, m) in &oracle {
            let holders: Vec<usize> = (0..fine.k())
                .filter(|&i| fine.real_flags[i] && fine.disks[i].real_interval().intersects(int))
                .collect();
            rep.check(holders.len() == 1, || {
                format!("instance {idx}: oracle root [{}, {}] met {} disks", int.lo, int.hi, holders.len())
            });
            if let [i] = holders[..] {
                rep.check(fine.multiplicities[i] == *m, || {
                    format!("instance {idx}: oracle root multiplicity mismatch")
                });
            }
        }
        if !rep.fails.is_empty() {
            break;
        }
    }
    rep.finish();
}

trait NegInt {
    fn neg_int(&self) -> Dyadic;
}

impl NegInt for Dyadic {
    fn neg_int(&self) -> Dyadic {
        Dyadic::new(-self.mantissa().clone(), self.exponent())
    }
}

// ---------------------------------------------------------------------------
// criterion 6: Mignotte-style stress, budget adapts to the cluster separation

fn mignotte(n: usize, t: i64) -> IntPoly {
    let lin = IntPoly::new(vec![BigInt::from(-1), BigInt::one() << t as u32]);
    let sq = lin.mul(&lin).scale(&BigInt::from(2));
    IntPoly::monomial(BigInt::one(), n).sub(&sq)
}

#[test]
fn c06_mignotte_adaptivity() {
    let mut rep = Report::new("06 Mignotte stress adaptivity");
    let cfg = IsolatorConfig::default();
    for &(n, t) in &[(8usize, 14i64), (16, 14)] {
        let p = mignotte(n, t);
        let tag = format!("({n},{t})");
        let iso = match isolate_integer(&p, &cfg) {
            Ok(r) => r,
            Err(e) => {
                rep.check(false, || format!("{tag}: isolate failed: {e}"));
                continue;
            }
        };
        rep.check(iso.k() == n, || format!("{tag}: k = {} != {n}", iso.k()));
        let fine = match refine(&OracleHandle::from_int(p.clone()), &iso, 150, &cfg) {
            Ok(r) => r,
            Err(e) => {
                rep.check(false, || format!("{tag}: refine failed: {e}"));
                continue;
            }
        };
        let target = Dyadic::pow2(-100);
        for d in &fine.disks {
            rep.check(d.radius < target, || format!("{tag}: radius above 2^-100"));
        }
        // the two real roots clinging to 2^-t form the near pair; measure
        // their separation from the refined centers
        let mut min_d2: Option<Dyadic> = None;
        for i in 0..fine.k() {
            for j in i + 1..fine.k() {
                let d2 = fine.disks[i].center.sub(&fine.disks[j].center).norm_sq();
                if min_d2.as_ref().is_none_or(|m| &d2 < m) {
                    min_d2 = Some(d2);
                }
            }
        }
        let sep_bits = -(min_d2.unwrap().floor_log2() / 2);
        rep.check(sep_bits > 8, || format!("{tag}: no tight pair found (sep 2^-{sep_bits})"));
        // adaptivity on a log scale: the isolation budget lands at the
        // separation's bit size, up to the clustering-schedule constant 8
        // and one doubling overshoot
        rep.check(iso.b_final >= sep_bits, || {
            format!("{tag}: b_final {} below separation bits {sep_bits}", iso.b_final)
        });
        rep.check(iso.b_final <= 16 * sep_bits, || {
            format!("{tag}: b_final {} exceeds 16 * {sep_bits}", iso.b_final)
        });
    }
    rep.finish();
}

// ---------------------------------------------------------------------------
// criterion 7: exact algebra suites

fn random_intpoly(rng: &mut ChaCha8Rng, deg: usize, c: i64) -> IntPoly {
    loop {
        let coeffs: Vec<BigInt> = (0..=deg).map(|_| BigInt::from(rng.gen_range(-c..=c))).collect();
        let p = IntPoly::new(coeffs);
        if p.deg() == deg && !p.is_zero() {
            return p;
        }
    }
}

fn random_intpoly2(rng: &mut ChaCha8Rng, dx: usize, dy: usize, c: i64) -> IntPoly2 {
    loop {
        let ycoeffs: Vec<IntPoly> = (0..=dy)
            .map(|_| {
                let d = rng.gen_range(0..=dx);
                random_intpoly(rng, d, c)
            })
            .collect();
        let p = IntPoly2::new(ycoeffs);
        if p.deg_y() == dy {
            return p;
        }
    }
}

#[test]
fn c07_exact_algebra() {
    let mut rep = Report::new("07 exact algebra");
    let mut rng = ChaCha8Rng::seed_from_u64(707);

    // subresultant cofactor identity u*f + v*g = sres
    for idx in 0..25usize {
        let f = random_intpoly2(&mut rng, 2, 3, 5);
        let g = random_intpoly2(&mut rng, 2, 2, 5);
        for (si, s) in f.subresultants(&g).iter().enumerate() {
            let lhs = s.u.mul(&f).add(&s.v.mul(&g));
            rep.check(lhs.sub(&s.sres).is_zero(), || {
                format!("cofactor identity broken at pair {idx}, entry {si}")
            });
        }
    }

    // gcd divisibility: gcd divides both inputs; a primitive common factor
    // divides the gcd
    for idx in 0..40usize {
        let f = random_intpoly(&mut rng, 3 + idx % 3, 6);
        let g = random_intpoly(&mut rng, 2 + idx % 4, 6);
        let mut h = random_intpoly(&mut rng, 1 + idx % 3, 4);
        h = h.primitive_part();
        let fh = f.mul(&h);
        let gh = g.mul(&h);
        let d = fh.gcd(&gh);
        rep.check(fh.exact_div(&d).is_some(), || format!("gcd does not divide f*h at {idx}"));
        rep.check(gh.exact_div(&d).is_some(), || format!("gcd does not divide g*h at {idx}"));
        rep.check(d.exact_div(&h).is_some(), || format!("common factor missing from gcd at {idx}"));
    }
    for idx in 0..10usize {
        let f = random_intpoly2(&mut rng, 1, 2, 3);
        let g = random_intpoly2(&mut rng, 1, 1, 3);
        let h = random_intpoly2(&mut rng, 1, 1, 2);
        let d = f.mul(&h).gcd(&g.mul(&h));
        rep.check(f.mul(&h).exact_div(&d).is_some(), || format!("bivariate gcd not a divisor at {idx}"));
        rep.check(g.mul(&h).exact_div(&d).is_some(), || format!("bivariate gcd not a divisor at {idx}"));
    }

    // square-free reconstruction: prod f_i^i recovers the primitive part,
    // with square-free pairwise-coprime factors
    for idx in 0..30usize {
        let a = random_intpoly(&mut rng, 1 + idx % 2, 4).primitive_part();
        let b = random_intpoly(&mut rng, 1, 4).primitive_part();
        let c = random_intpoly(&mut rng, 1, 3).primitive_part();
        let p = a.mul(&b).mul(&b).mul(&c).mul(&c).mul(&c).scale(&BigInt::from(1 + (idx as i64 % 3)));
        let dec = p.square_free_decomposition();
        let mut back = IntPoly::one();
        for (f, m) in &dec {
            rep.check(f.gcd(&f.derivative()).is_constant(), || {
                format!("square-free factor is not square-free at {idx}")
            });
            for _ in 0..*m {
                back = back.mul(f);
            }
        }
        let pp = p.primitive_part();
        rep.check(back == pp || back == pp.neg(), || {
            format!("square-free reconstruction mismatch at {idx}")
        });
        for i in 0..dec.len() {
            for j in i + 1..dec.len() {
                rep.check(dec[i].0.gcd(&dec[j].0).is_constant(), || {
                    format!("square-free factors share a root at {idx}")
                });
            }
        }
    }

    // modular commutation: reduction is a ring homomorphism that commutes
    // with differentiation and evaluation
    use rootforge::modpoly::{ModPoly, PRIME_TABLE};
    for idx in 0..40usize {
        let f = random_intpoly(&mut rng, 2 + idx % 4, 50);
        let g = random_intpoly(&mut rng, 1 + idx % 3, 50);
        let p = PRIME_TABLE[idx % PRIME_TABLE.len()];
        let fr = ModPoly::reduce(&f, p);
        let gr = ModPoly::reduce(&g, p);
        rep.check(ModPoly::reduce(&f.mul(&g), p) == fr.mul(&gr), || {
            format!("mod-p multiplication mismatch at {idx}")
        });
        rep.check(ModPoly::reduce(&f.add(&g), p) == fr.add(&gr), || {
            format!("mod-p addition mismatch at {idx}")
        });
        rep.check(ModPoly::reduce(&f.derivative(), p) == fr.derivative(), || {
            format!("mod-p derivative mismatch at {idx}")
        });
        let x = BigInt::from(rng.gen_range(-100i64..=100));
        let ev = f.eval_bigint(&x);
        let xm = ((x.clone() % p + p) % p).to_string().parse::<u64>().unwrap();
        let evm = ((ev % p + p) % p).to_string().parse::<u64>().unwrap();
        rep.check(fr.eval(xm) == evm, || format!("mod-p evaluation mismatch at {idx}"));
    }
    rep.finish();
}

// ---------------------------------------------------------------------------
// criterion 8: counting gate vs brute-force fiber root counts

/// Mirrors the curve normalization done inside the topology pipeline.
fn normalize_curve(f: &IntPoly2) -> IntPoly2 {
    let c = f.content_x();
    let mut g = if c.deg() >= 1 || c.leading().abs() > BigInt::one() {
        f.exact_div_x(&c).expect("content divides")
    } else {
        f.clone()
    };
    if g.leading_y().leading().sign() == num_bigint::Sign::Minus {
        g = g.neg();
    }
    g
}

/// Decides whether `q(alpha) = 0` for `alpha` the unique root of the
/// square-free `minimal` inside `bracket`, exactly, by splitting `minimal`
/// into the part sharing roots with `q` and the coprime part.
fn vanishes_at(minimal: &IntPoly, bracket: &DyadicInterval, q: &IntPoly) -> bool {
    if q.is_zero() {
        return true;
    }
    if q.is_constant() {
        return false;
    }
    let g = minimal.gcd(q);
    if g.is_constant() {
        return false;
    }
    let cof = minimal.exact_div(&g).expect("gcd divides");
    let mut alpha = AlgebraicReal::new(minimal.clone(), bracket.lo.clone(), bracket.hi.clone());
    loop {
        let int = alpha.interval();
        let gv = g.eval_interval(&int, 256);
        if !gv.contains_zero() {
            return false;
        }
        let cv = cof.eval_interval(&int, 256);
        if !cv.contains_zero() {
            return true;
        }
        alpha.refine();
    }
}

/// Distinct complex roots of `f(alpha, y)` via the first nonvanishing
/// principal subresultant coefficient of `(f, f_y)` at `alpha`.
fn brute_force_count(fs: &IntPoly2, rstar: &IntPoly, bracket: &DyadicInterval) -> usize {
    let n_y = fs.deg_y();
    if n_y == 1 {
        return 1;
    }
    let sr = fs.principal_subresultant_coeffs(&fs.deriv_y());
    for i in 1..n_y {
        let q = if i < sr.len() { sr[i].clone() } else { IntPoly::zero() };
        if !vanishes_at(rstar, bracket, &q) {
            return n_y - i;
        }
    }
    1
}

#[test]
fn c08_counting_gate() {
    let mut rep = Report::new("08 counting gate");
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let x2 = IntPoly2::monomial(BigInt::one(), 2, 0);
    let y2 = IntPoly2::monomial(BigInt::one(), 0, 2);
    let one = IntPoly2::constant(BigInt::one());
    let named: Vec<(&str, IntPoly2)> = vec![
        ("circle", x2.add(&y2).sub(&one)),
        ("parabola", IntPoly2::monomial(BigInt::one(), 0, 1).sub(&x2)),
        (
            "nodal cubic",
            y2.sub(&x2.mul(&IntPoly2::monomial(BigInt::one(), 1, 0).add(&one))),
        ),
        ("cusp", y2.sub(&IntPoly2::monomial(BigInt::one(), 3, 0))),
    ];
    let mut curves: Vec<(String, IntPoly2)> =
        named.into_iter().map(|(n, c)| (n.to_string(), c)).collect();
    let mut made = 0usize;
    while made < 20 {
        let (dx, dy) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let f = random_intpoly2(&mut rng, dx, dy, 4);
        if f.total_degree() > 5 || f.total_degree() < 2 {
            continue;
        }
        // keep only square-free curves with some y-extent
        let g = normalize_curve(&f);
        if g.deg_y() == 0 || g.gcd(&g.deriv_y()).total_degree() >= 1 {
            continue;
        }
        made += 1;
        curves.push((format!("random {made}"), f));
    }
    let opts = TopOptions::default();
    for (name, f) in &curves {
        let (s, _prime, attempts, counts) = match gate_diagnostics(f, &opts) {
            Ok(r) => r,
            Err(e) => {
                rep.check(false, || format!("{name}: gate failed: {e}"));
                continue;
            }
        };
        rep.check(attempts <= 6, || format!("{name}: {attempts} shear attempts used"));
        let fs = normalize_curve(f).shear(s);
        let rstar = fs.resultant_y(&fs.deriv_y()).square_free_part();
        for fc in &counts {
            let bf = brute_force_count(&fs, &rstar, &fc.x);
            rep.check(fc.count == bf, || {
                format!(
                    "{name}: fiber at [{}, {}] declared {} distinct roots, brute force says {bf}",
                    fc.x.lo, fc.x.hi, fc.count
                )
            });
        }
    }
    rep.finish();
}

// ---------------------------------------------------------------------------
// criterion 9: topology regression and shear invariance

#[test]
fn c09_topology_regression() {
    let mut rep = Report::new("09 topology regression");
    let x = IntPoly2::monomial(BigInt::one(), 1, 0);
    let y = IntPoly2::monomial(BigInt::one(), 0, 1);
    let one = IntPoly2::constant(BigInt::one());
    let circle = x.mul(&x).add(&y.mul(&y)).sub(&one);
    let parabola = y.clone().sub(&x.mul(&x));
    let nodal = y.mul(&y).sub(&x.mul(&x).mul(&x.add(&one)));
    let cusp = y.mul(&y).sub(&x.mul(&x).mul(&x));
    let x4 = x.sub(&IntPoly2::constant(BigInt::from(4)));
    let ovals = circle.mul(&x4.mul(&x4).add(&y.mul(&y)).sub(&one));
    let cases: Vec<(&str, &IntPoly2, usize, usize)> = vec![
        ("circle", &circle, 1, 1),
        ("parabola", &parabola, 1, 0),
        ("nodal cubic", &nodal, 1, 1),
        ("cusp", &cusp, 1, 0),
        ("two ovals", &ovals, 2, 2),
    ];
    let opts = TopOptions::default();
    for (name, f, comps, cycles) in &cases {
        match topology(f, &opts) {
            Ok(t) => {
                rep.check(t.components == *comps && t.cycles == *cycles, || {
                    format!(
                        "{name}: got ({}, {}), expected ({comps}, {cycles})",
                        t.components, t.cycles
                    )
                });
            }
            Err(e) => rep.check(false, || format!("{name}: topology failed: {e}")),
        }
    }
    // the invariants must not depend on the shear actually used
    for (name, f, comps, cycles) in &cases {
        let mut seen = 0;
        for s in [0i64, 1, -1, 2, -2] {
            if seen == 3 {
                break;
            }
            let mut o = TopOptions::default();
            o.forced_shear = Some(s);
            match topology(f, &o) {
                Ok(t) => {
                    seen += 1;
                    rep.check(t.components == *comps && t.cycles == *cycles, || {
                        format!(
                            "{name} at shear {s}: got ({}, {}), expected ({comps}, {cycles})",
                            t.components, t.cycles
                        )
                    });
                }
                Err(TopError::ShearExhausted(_)) => {}
                Err(e) => rep.check(false, || format!("{name} at shear {s}: {e}")),
            }
        }
        rep.check(seen == 3, || format!("{name}: only {seen} shears accepted"));
    }
    rep.finish();
}

// ---------------------------------------------------------------------------
// criterion 10: bivariate systems with known rational solutions

#[test]
fn c10_bivariate_systems() {
    let mut rep = Report::new("10 bivariate solving");
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let opts = TopOptions::default();
    for idx in 0..30usize {
        // g = y - q(x), h = prod (x - r_i) + c * g: the solutions are
        // exactly (r_i, q(r_i))
        let qdeg = rng.gen_range(0..=2usize);
        let q = random_intpoly(&mut rng, qdeg, 4);
        let nroots = 1 + idx % 3;
        let mut rs: Vec<i64> = Vec::new();
        while rs.len() < nroots {
            let r = rng.gen_range(-5i64..=5);
            if rs.iter().all(|x| *x != r) {
                rs.push(r);
            }
        }
        let g = IntPoly2::monomial(BigInt::one(), 0, 1).sub(&IntPoly2::from_x(q.clone()));
        let mut w = IntPoly::one();
        for r in &rs {
            w = w.mul(&IntPoly::from_i64(&[-r, 1]));
        }
        let c = BigInt::from(rng.gen_range(1i64..=3));
        let h = IntPoly2::from_x(w).add(&g.scale_int(&c));
        let sol = match solve_system(&g, &h, &opts) {
            Ok(s) => s,
            Err(e) => {
                rep.check(false, || format!("system {idx}: solve failed: {e}"));
                continue;
            }
        };
        rep.check(sol.boxes.len() == nroots, || {
            format!("system {idx}: {} boxes for {nroots} solutions", sol.boxes.len())
        });
        for r in &rs {
            let xr = Dyadic::from_int(*r);
            let yr = q.eval_dyadic(&xr);
            let holders: Vec<usize> = sol
                .boxes
                .iter()
                .enumerate()
                .filter(|(_, (bx, by))| {
                    bx.lo <= xr && xr <= bx.hi && by.lo <= yr && yr <= by.hi
                })
                .map(|(i, _)| i)
                .collect();
            rep.check(holders.len() == 1, || {
                format!("system {idx}: solution ({r}, {yr}) in {} boxes", holders.len())
            });
        }
        if !rep.fails.is_empty() {
            break;
        }
    }
    rep.finish();
}
