//! Certification of clustered roots.  For each cluster the test point
//! `z* = center + n r` is evaluated against the verified approximate
//! factorization: if `prod_j |z* - z~_j| = |p^(z*)/p_n|` certifiably exceeds
//! `E = 32 * 2^-b * lambda * max(1,|center|)^n`, then (by Rouché's theorem
//! applied to `p` and `p^` on the enlarged disk) the disk contains exactly
//! one root of `p` whose multiplicity is the cluster size.  The product is
//! evaluated by outward interval arithmetic at absolute error targets
//! `2^-rho` for `rho = 1, 2, 4, ...` per disk, with the total `sum rho_i`
//! capped by `b`.

use crate::cluster::Cluster;
use crate::dyadic::Dyadic;
use crate::interval::{ComplexDyadic, ComplexInterval, DyadicInterval};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertifyFailure {
    #[error("an approximate root exceeds the root bound safeguard")]
    RootBoundSafeguard,
    #[error("product of root magnitudes exceeds the lambda safeguard")]
    LambdaSafeguard,
    #[error("could not certify disk {index} within the precision budget")]
    NotCertified { index: usize },
    #[error("evaluation precision budget exhausted")]
    BudgetExhausted,
}

/// Safeguard: every approximation must satisfy `|z~| < 2^(gamma+1)` (exact).
pub fn check_root_bound(roots: &[ComplexDyadic], gamma: i64) -> bool {
    let bound_sq = Dyadic::pow2(2 * (gamma + 1));
    roots.iter().all(|z| z.norm_sq() < bound_sq)
}

/// Safeguard: `prod max(1, |z~_i|) <= 8 lambda`, checked with a modest
/// upper-bound precision (false failures only tighten `b`, never break
/// soundness).
pub fn check_lambda(roots: &[ComplexDyadic], lambda: &Dyadic) -> bool {
    let rho = 16;
    let mut prod = DyadicInterval::point(Dyadic::one());
    let one = DyadicInterval::point(Dyadic::one());
    for z in roots {
        let m = z.modulus_upper(rho);
        let f = if m <= Dyadic::one() { one.clone() } else { DyadicInterval::point(m) };
        prod = prod.mul_r(&f, rho);
    }
    prod.hi <= lambda.mul_pow2(3)
}

/// `max(1, |z|)` upper bound.
fn big_m_upper(z: &ComplexDyadic, rho: i64) -> Dyadic {
    Dyadic::max(&Dyadic::one(), &z.modulus_upper(rho))
}

/// A certified isolating disk.
#[derive(Clone, Debug)]
pub struct CertifiedDisk {
    pub center: ComplexDyadic,
    pub radius: Dyadic,
    pub multiplicity: usize,
    /// The error exponent at which certification succeeded.
    pub rho: i64,
}

/// Certifies every cluster against the approximate factorization `roots`
/// (all `n` of them) at budget `b` with the norm ratio bound `lambda`.
pub fn certify(
    roots: &[ComplexDyadic],
    clusters: &[Cluster],
    b: i64,
    lambda: &Dyadic,
) -> Result<Vec<CertifiedDisk>, CertifyFailure> {
    let n = roots.len();
    let nd = Dyadic::from_int(n as i64);
    let mut out = Vec::with_capacity(clusters.len());
    let mut rho_total = 0i64;
    for (index, c) in clusters.iter().enumerate() {
        let big_r = &c.radius * &nd;
        let zstar = ComplexDyadic::new(&c.seed.re + &big_r, c.seed.im.clone());
        // E = 32 * 2^-b * lambda * M(center)^n, as an upper bound
        let m_up = big_m_upper(&c.seed, 32);
        let e = m_up.pow(n as u32).mul_pow2(5 - b);
        let e = &e * lambda;
        let mut rho = 1i64;
        let mut certified = None;
        while rho <= b {
            // certified enclosure of prod |z* - z~_j| at working precision
            // scaled so the absolute error stays below 2^-rho
            let bits = rho + 2 * n as i64 + 16;
            let mut prod = DyadicInterval::point(Dyadic::one());
            for z in roots {
                let d = ComplexInterval::point(&zstar.sub(z));
                prod = prod.mul_r(&d.modulus(bits), bits);
            }
            if prod.lo > e {
                certified = Some(rho);
                break;
            }
            // an upper bound already below the threshold can never certify
            if prod.hi <= e {
                break;
            }
            rho *= 2;
        }
        let Some(rho) = certified else {
            return Err(CertifyFailure::NotCertified { index });
        };
        rho_total += rho;
        if rho_total > b {
            return Err(CertifyFailure::BudgetExhausted);
        }
        out.push(CertifiedDisk {
            center: c.seed.clone(),
            radius: big_r.clone(),
            multiplicity: c.members.len(),
            rho,
        });
    }
    Ok(out)
}
