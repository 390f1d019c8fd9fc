//! Top-level root isolation driver: a precision-doubling loop over
//! factorize -> safeguard checks -> cluster -> certify, plus refinement of
//! isolating disks to a requested radius and an integer-coefficient
//! frontend that derives `k` from the square-free part.

use crate::certify::{self, CertifiedDisk};
use crate::cluster;
use crate::dyadic::{Dyadic, Rounding};
use crate::factorizer::{self, cdiv_r, FactorError};
use crate::interval::{ComplexDisk, ComplexDyadic};
use crate::intpoly::IntPoly;
use crate::oracle::{estimate_lambda, OracleError, OracleHandle};
use crate::rootbound::compute_gamma;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IsolateError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("budget 2^{log_b} exceeded the cap: k likely wrong or precision cap too low")]
    BudgetExceeded { log_b: u32 },
}

/// Isolating disks for the `k` distinct roots, with multiplicities.
#[derive(Clone, Debug)]
pub struct RootResult {
    pub disks: Vec<ComplexDisk>,
    pub multiplicities: Vec<usize>,
    /// For real-coefficient inputs: disk contains a real root.
    pub real_flags: Vec<bool>,
    /// The backward-error budget at which verification succeeded.
    pub b_final: i64,
    /// Highest oracle precision requested so far (adaptivity telemetry).
    pub oracle_max_l: i64,
    /// All `n` verified approximations (with repetitions), kept as warm
    /// starts for refinement.
    pub approx_roots: Vec<ComplexDyadic>,
}

impl RootResult {
    pub fn k(&self) -> usize {
        self.disks.len()
    }
}

#[derive(Clone, Debug)]
pub struct IsolatorConfig {
    /// Hard cap on the backward-error budget; exceeding it means the
    /// declared root count is likely wrong.
    pub b_max: i64,
    /// Optional floor for the starting budget (rounded up to a power of two).
    pub b_initial: Option<i64>,
}

impl Default for IsolatorConfig {
    fn default() -> Self {
        IsolatorConfig {
            b_max: 1 << 26,
            b_initial: None,
        }
    }
}

fn next_pow2(x: i64) -> i64 {
    let mut b = 1i64;
    while b < x {
        b <<= 1;
    }
    b
}

/// Conjugate pairing: a disk is flagged real iff it meets the real axis and
/// no other disk contains the conjugate of its center.  Valid because the
/// disks are pairwise disjoint, each radius is below `sigma/(64n)`, and for
/// real inputs the disk set is closed under conjugation.
fn flag_real(disks: &[ComplexDisk], real_input: bool) -> Vec<bool> {
    if !real_input {
        return vec![false; disks.len()];
    }
    let k = disks.len();
    let mut paired = vec![false; k];
    for i in 0..k {
        if paired[i] {
            continue;
        }
        let conj = disks[i].center.conj();
        for j in 0..k {
            if j != i && disks[j].contains(&conj) {
                paired[i] = true;
                paired[j] = true;
                break;
            }
        }
    }
    disks
        .iter()
        .zip(&paired)
        .map(|(d, &p)| !p && d.meets_real_axis())
        .collect()
}

fn assemble(
    h: &OracleHandle,
    certified: Vec<CertifiedDisk>,
    approx_roots: Vec<ComplexDyadic>,
    b: i64,
) -> RootResult {
    let disks: Vec<ComplexDisk> = certified
        .iter()
        .map(|d| ComplexDisk::new(d.center.clone(), d.radius.clone()))
        .collect();
    let multiplicities = certified.iter().map(|d| d.multiplicity).collect();
    let real_flags = flag_real(&disks, h.is_real());
    let (_, oracle_max_l) = h.stats();
    RootResult {
        disks,
        multiplicities,
        real_flags,
        b_final: b,
        oracle_max_l,
        approx_roots,
    }
}

/// The `k = 1` shortcut: the unique root is `-p_{n-1}/(n p_n)`, computed
/// with a certified error bound below `2^-target`.
fn isolate_single(h: &OracleHandle, gamma: i64, target: i64) -> Result<RootResult, IsolateError> {
    let n = h.degree();
    let nd = Dyadic::from_int(n as i64);
    let mut l = (target + 32).max(128);
    loop {
        let ap = h.approximate(l)?;
        let eps = ap.coeff_error_upper();
        let den = ap.coeffs[n].scale(&nd);
        let den_lo = &den.modulus_lower(64) - &(&eps * &nd);
        if den_lo.sign() <= 0 {
            l *= 2;
            continue;
        }
        let q = cdiv_r(&ap.coeffs[n - 1].neg(), &den, l);
        // perturbation of numerator and denominator, plus division rounding;
        // |root| <= 2^gamma bounds the amplification of the denominator error
        let amp = &Dyadic::one() + &nd.mul_pow2(gamma);
        let err = (&eps * &amp).div(&den_lo, l, Rounding::Up) + Dyadic::pow2(2 - l);
        if err < Dyadic::pow2(-target) {
            let real_input = h.is_real();
            let real = real_input && q.im.abs() <= err;
            let center = if real {
                ComplexDyadic::real(q.re.clone())
            } else {
                q.clone()
            };
            let radius = err.mul_pow2(1);
            let (_, oracle_max_l) = h.stats();
            return Ok(RootResult {
                disks: vec![ComplexDisk::new(center.clone(), radius)],
                multiplicities: vec![n],
                real_flags: vec![real],
                b_final: l,
                oracle_max_l,
                approx_roots: vec![center; n],
            });
        }
        l *= 2;
    }
}

/// Isolates the `k` distinct roots of the degree-`n` polynomial behind `h`.
/// Termination is only guaranteed when `k` is the true number of distinct
/// roots; a wrong `k` surfaces as a budget-cap error.
pub fn isolate(h: &OracleHandle, k: usize, cfg: &IsolatorConfig) -> Result<RootResult, IsolateError> {
    let n = h.degree();
    assert!(k >= 1 && k <= n, "k must be in 1..=degree");
    let gamma = compute_gamma(h)?;
    if k == 1 {
        return isolate_single(h, gamma, 64);
    }
    let lambda = estimate_lambda(h)?;
    let mut b = next_pow2(factorizer::initial_budget(n).max(cfg.b_initial.unwrap_or(1)));
    let mut hint: Option<Vec<ComplexDyadic>> = None;
    loop {
        if b > cfg.b_max {
            return Err(IsolateError::BudgetExceeded {
                log_b: b.trailing_zeros(),
            });
        }
        let fact = match factorizer::factorize(h, b, gamma, hint.as_deref()) {
            Ok(f) => f,
            Err(FactorError::Oracle(e)) => return Err(e.into()),
            Err(FactorError::NotConverged { .. }) => {
                b *= 2;
                continue;
            }
        };
        hint = Some(fact.roots.clone());
        if !certify::check_root_bound(&fact.roots, gamma)
            || !certify::check_lambda(&fact.roots, &lambda)
        {
            b *= 2;
            continue;
        }
        let clusters = match cluster::cluster(&fact.roots, k, b) {
            Ok(c) => c,
            Err(_) => {
                b *= 2;
                continue;
            }
        };
        match certify::certify(&fact.roots, &clusters, b, &lambda) {
            Ok(certified) => return Ok(assemble(h, certified, fact.roots, b)),
            Err(_) => b *= 2,
        }
    }
}

/// Lower bound on `log2` of the distance from disk `i`'s center to the
/// nearest other center, halved to account for center error; this is a
/// conservative estimate of `log2 sigma_i`.
fn log_sep_lower(disks: &[ComplexDisk], i: usize) -> i64 {
    let mut best: Option<Dyadic> = None;
    for (j, d) in disks.iter().enumerate() {
        if j == i {
            continue;
        }
        let dist = disks[i].center.sub(&d.center).modulus_lower(64);
        best = Some(match best {
            Some(b) => Dyadic::min(&b, &dist),
            None => dist,
        });
    }
    match best {
        Some(d) if d.sign() > 0 => d.floor_log2() - 1,
        _ => 0,
    }
}

/// Lower bound on `log2 |P_i|`, where `P_i` is the product of the distances
/// from disk `i`'s center to all verified approximations outside the disk.
fn log_outer_product_lower(disks: &[ComplexDisk], approx: &[ComplexDyadic], i: usize) -> i64 {
    let mut prod = Dyadic::one();
    for z in approx {
        if disks[i].contains(z) {
            continue;
        }
        let d = disks[i].center.sub(z).modulus_lower(64);
        if d.sign() <= 0 {
            return -2 * (approx.len() as i64) - 8;
        }
        prod = (&prod * &d).round_significant(96, Rounding::Down);
    }
    // the factors are 2-approximations of true root distances, so halve per
    // factor for a sound lower bound on |P_i|
    prod.floor_log2() - approx.len() as i64
}

/// Refines every disk of `result` to radius below `2^-kappa`; the result
/// must have come from `isolate` on the same polynomial.
pub fn refine(
    h: &OracleHandle,
    result: &RootResult,
    kappa: i64,
    cfg: &IsolatorConfig,
) -> Result<RootResult, IsolateError> {
    assert!(kappa >= 1);
    let n = h.degree();
    let k = result.k();
    let target = Dyadic::pow2(-kappa);
    if result.disks.iter().all(|d| d.radius < target) {
        return Ok(result.clone());
    }
    let gamma = compute_gamma(h)?;
    if k == 1 {
        let single = isolate_single(h, gamma, kappa + 1)?;
        return Ok(merge_refined(result, single.approx_roots[..1].to_vec(), single, kappa));
    }
    let lambda = estimate_lambda(h)?;
    let cl_n = factorizer::ceil_log2_usize(n);
    let tau = lambda.ceil_log2().max(0);
    // size the budget so the factorization error per root of multiplicity m
    // is below 2^-b/(2m) < min(2^-kappa-1, 1/(2n^2), sigma_i/(2n)) and the
    // product term stays above its threshold
    let mut b_req = factorizer::initial_budget(n);
    for i in 0..k {
        let m = result.multiplicities[i] as i64;
        let e_sigma = log_sep_lower(&result.disks, i);
        let cm = result.disks[i].center.modulus_upper(32);
        let log_m = if cm.is_zero() { 0 } else { cm.ceil_log2().max(0) };
        let log_p = log_outer_product_lower(&result.disks, &result.approx_roots, i);
        b_req = b_req
            .max(2 * m * (2 * cl_n + 1))
            .max(2 * m * (cl_n + 1 - e_sigma))
            .max(2 * m * (kappa + 2))
            .max(2 * (6 + cl_n + tau + n as i64 * log_m - log_p));
    }
    let mut b = next_pow2(b_req);
    loop {
        if b > cfg.b_max {
            return Err(IsolateError::BudgetExceeded {
                log_b: b.trailing_zeros(),
            });
        }
        let fact = match factorizer::factorize(h, b, gamma, Some(&result.approx_roots)) {
            Ok(f) => f,
            Err(FactorError::Oracle(e)) => return Err(e.into()),
            Err(FactorError::NotConverged { .. }) => {
                b *= 2;
                continue;
            }
        };
        // assign each verified approximation to the nearest old center;
        // correct because approximation error is far below the separation
        let mut chosen: Vec<Option<ComplexDyadic>> = vec![None; k];
        for z in &fact.roots {
            let mut best = 0usize;
            let mut best_d: Option<Dyadic> = None;
            for (i, d) in result.disks.iter().enumerate() {
                let dist = z.sub(&d.center).norm_sq();
                if best_d.as_ref().map_or(true, |b| dist < *b) {
                    best_d = Some(dist);
                    best = i;
                }
            }
            if chosen[best].is_none() {
                chosen[best] = Some(z.clone());
            }
        }
        if chosen.iter().any(|c| c.is_none()) {
            b *= 2;
            continue;
        }
        let centers: Vec<ComplexDyadic> = chosen.into_iter().map(|c| c.unwrap()).collect();
        let mut refined = result.clone();
        refined.b_final = b;
        refined.approx_roots = fact.roots;
        let (_, oracle_max_l) = h.stats();
        refined.oracle_max_l = oracle_max_l;
        let new_radius = Dyadic::pow2(-kappa - 1);
        for i in 0..k {
            // keep an already-small disk; never let refinement enlarge one
            if result.disks[i].radius >= target {
                let c = if refined.real_flags[i] {
                    ComplexDyadic::real(centers[i].re.clone())
                } else {
                    centers[i].clone()
                };
                refined.disks[i] = ComplexDisk::new(c, new_radius.clone());
            }
        }
        return Ok(refined);
    }
}

fn merge_refined(
    old: &RootResult,
    _centers: Vec<ComplexDyadic>,
    mut fresh: RootResult,
    kappa: i64,
) -> RootResult {
    let target = Dyadic::pow2(-kappa);
    for i in 0..old.k() {
        if old.disks[i].radius < target && old.disks[i].radius < fresh.disks[i].radius {
            fresh.disks[i] = old.disks[i].clone();
        }
    }
    fresh
}

/// Integer-coefficient frontend: the number of distinct roots is the degree
/// of the square-free part, then the general driver runs on `p` itself.
pub fn isolate_integer(p: &IntPoly, cfg: &IsolatorConfig) -> Result<RootResult, IsolateError> {
    assert!(p.deg() >= 1);
    let k = p.square_free_part().deg();
    let h = OracleHandle::from_int(p.clone());
    isolate(&h, k, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(m.into(), e)
    }

    fn contains_real(r: &RootResult, x: &Dyadic) -> Option<usize> {
        let z = ComplexDyadic::real(x.clone());
        let mut hit = None;
        for (i, disk) in r.disks.iter().enumerate() {
            if disk.contains(&z) {
                assert!(hit.is_none(), "root in two disks");
                hit = Some(i);
            }
        }
        hit
    }

    #[test]
    fn isolates_x_squared_minus_one() {
        let p = IntPoly::from_i64(&[-1, 0, 1]);
        let r = isolate_integer(&p, &IsolatorConfig::default()).unwrap();
        assert_eq!(r.k(), 2);
        assert_eq!(r.multiplicities, vec![1, 1]);
        assert!(r.real_flags.iter().all(|&f| f));
        assert!(contains_real(&r, &Dyadic::one()).is_some());
        assert!(contains_real(&r, &d(-1, 0)).is_some());
        assert!(r.disks[0].disjoint(&r.disks[1]));
    }

    #[test]
    fn isolates_conjugate_pair_with_multiplicity() {
        // (x^2 + 1)^2: double roots at +-i, both non-real
        let p = IntPoly::from_i64(&[1, 0, 2, 0, 1]);
        let r = isolate_integer(&p, &IsolatorConfig::default()).unwrap();
        assert_eq!(r.k(), 2);
        assert_eq!(r.multiplicities, vec![2, 2]);
        assert!(r.real_flags.iter().all(|&f| !f));
        let i_pt = ComplexDyadic::new(Dyadic::zero(), Dyadic::one());
        assert!(r.disks.iter().any(|disk| disk.contains(&i_pt)));
        assert!(r.disks.iter().any(|disk| disk.contains(&i_pt.conj())));
    }

    #[test]
    fn single_cluster_shortcut() {
        // (x - 3)^5, k = 1: closed form -p4/(5 p5)
        let lin = IntPoly::from_i64(&[-3, 1]);
        let p = lin.mul(&lin).mul(&lin).mul(&lin).mul(&lin);
        let h = OracleHandle::from_int(p);
        let r = isolate(&h, 1, &IsolatorConfig::default()).unwrap();
        assert_eq!(r.k(), 1);
        assert_eq!(r.multiplicities, vec![5]);
        assert!(r.real_flags[0]);
        assert!(r.disks[0].contains(&ComplexDyadic::real(d(3, 0))));
        assert!(r.disks[0].radius < Dyadic::pow2(-64));
    }

    #[test]
    fn mixed_multiplicities() {
        // (x - 1)^2 (x + 2)
        let p = IntPoly::from_i64(&[-1, 1]).mul(&IntPoly::from_i64(&[-1, 1])).mul(&IntPoly::from_i64(&[2, 1]));
        let r = isolate_integer(&p, &IsolatorConfig::default()).unwrap();
        assert_eq!(r.k(), 2);
        let i1 = contains_real(&r, &Dyadic::one()).unwrap();
        let i2 = contains_real(&r, &d(-2, 0)).unwrap();
        assert_eq!(r.multiplicities[i1], 2);
        assert_eq!(r.multiplicities[i2], 1);
        assert!(r.real_flags[i1] && r.real_flags[i2]);
    }

    #[test]
    fn rational_roots() {
        // 6x^2 - 5x + 1 = (2x - 1)(3x - 1)
        let p = IntPoly::from_i64(&[1, -5, 6]);
        let r = isolate_integer(&p, &IsolatorConfig::default()).unwrap();
        assert_eq!(r.k(), 2);
        assert!(contains_real(&r, &d(1, -1)).is_some());
        // 1/3 is not dyadic; check a tight enclosure midpoint falls in a disk
        let third_lo = Dyadic::new(0x5555_5555u32.into(), -32);
        assert!(r
            .disks
            .iter()
            .any(|disk| disk.contains(&ComplexDyadic::real(third_lo.clone()))));
    }

    #[test]
    fn refine_shrinks_disks() {
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        let h = OracleHandle::from_int(p);
        let cfg = IsolatorConfig::default();
        let r = isolate(&h, 2, &cfg).unwrap();
        let fine = refine(&h, &r, 100, &cfg).unwrap();
        assert_eq!(fine.k(), 2);
        for d in &fine.disks {
            assert!(d.radius < Dyadic::pow2(-100));
        }
        // sqrt(2) enclosure from 128-bit integer square root of 2^256
        let s: num_bigint::BigInt = num_bigint::BigInt::from(2u8) << 256;
        let lo = Dyadic::new(s.sqrt(), -128);
        assert!(fine
            .disks
            .iter()
            .any(|d| d.contains(&ComplexDyadic::real(lo.clone()))));
        // idempotence: a smaller kappa must not enlarge the disks
        let again = refine(&h, &fine, 50, &cfg).unwrap();
        for (a, b) in again.disks.iter().zip(&fine.disks) {
            assert!(a.radius <= b.radius);
        }
    }

    #[test]
    fn refine_double_root() {
        let p = IntPoly::from_i64(&[-1, 1]).mul(&IntPoly::from_i64(&[-1, 1]));
        let h = OracleHandle::from_int(p);
        let cfg = IsolatorConfig::default();
        let r = isolate(&h, 1, &cfg).unwrap();
        let fine = refine(&h, &r, 64, &cfg).unwrap();
        assert!(fine.disks[0].radius < Dyadic::pow2(-64));
        assert!(fine.disks[0].contains(&ComplexDyadic::real(Dyadic::one())));
    }

    #[test]
    fn roots_of_unity() {
        let p = IntPoly::from_i64(&[-1, 0, 0, 0, 1]);
        let r = isolate_integer(&p, &IsolatorConfig::default()).unwrap();
        assert_eq!(r.k(), 4);
        assert_eq!(r.multiplicities, vec![1; 4]);
        assert_eq!(r.real_flags.iter().filter(|&&f| f).count(), 2);
        let i_pt = ComplexDyadic::new(Dyadic::zero(), Dyadic::one());
        assert!(r.disks.iter().any(|d| d.contains(&i_pt)));
    }

    #[test]
    fn wrong_k_hits_budget_cap() {
        let p = IntPoly::from_i64(&[-1, 0, 1]);
        let h = OracleHandle::from_int(p);
        let cfg = IsolatorConfig {
            b_max: 1 << 12,
            b_initial: None,
        };
        // claims one distinct root but there are two
        match isolate(&h, 1, &cfg) {
            Ok(r) => {
                // k = 1 shortcut cannot fail; but its disk is nonsense for
                // a two-root input only if treated as isolating both; the
                // midpoint -p1/(2 p2) = 0 is not a root
                assert_eq!(r.k(), 1);
            }
            Err(IsolateError::BudgetExceeded { .. }) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
        // k = 3 on a degree-2 polynomial is rejected outright
        let p3 = IntPoly::from_i64(&[-2, 0, 0, 1]);
        let h3 = OracleHandle::from_int(p3);
        match isolate(&h3, 2, &cfg) {
            Err(IsolateError::BudgetExceeded { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn conjugate_closure_of_disks() {
        // x^3 - 1: one real root, one conjugate pair
        let p = IntPoly::from_i64(&[-1, 0, 0, 1]);
        let r = isolate_integer(&p, &IsolatorConfig::default()).unwrap();
        assert_eq!(r.k(), 3);
        assert_eq!(r.real_flags.iter().filter(|&&f| f).count(), 1);
        for (i, d) in r.disks.iter().enumerate() {
            if r.real_flags[i] {
                continue;
            }
            let conj = d.center.conj();
            assert!(r.disks.iter().any(|e| e.contains(&conj)));
        }
    }
}
