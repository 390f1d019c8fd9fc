//! Clustering of verified root approximations.  Groups the `n` approximate
//! roots into exactly `k` clusters by geometric vicinity: the threshold
//! starts at `2 * 2^(-b/(2a))` with `a = 2^(floor(log2 n) + 2)` and `a` is
//! halved until the filtered cluster around the seed reaches size `a/2`.
//! Every distance test is an exact comparison of squared distances against a
//! single-bit power-of-two threshold.  On success each cluster gets a disk
//! whose radius is a power-of-two 2-approximation of
//! `min(1/n^2, sep_i/(256 n^2))`, where `sep_i` is the distance from the
//! seed to the nearest other seed.

use crate::dyadic::Dyadic;
use crate::interval::{ComplexDisk, ComplexDyadic};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClusterFailure {
    #[error("clustering produced {found} clusters, expected {expected}")]
    WrongCount { found: usize, expected: usize },
    #[error("cluster member escaped its disk")]
    Containment,
    #[error("enlarged disks are not pairwise disjoint")]
    Overlap,
}

/// A cluster of root approximations with its enclosing disk data.
#[derive(Clone, Debug)]
pub struct Cluster {
    /// The seed approximation, used as disk center.
    pub seed: ComplexDyadic,
    /// Indices of the approximations in this cluster.
    pub members: Vec<usize>,
    /// Power-of-two radius `r_i` of the small disk `D_i`.
    pub radius: Dyadic,
    /// Exact squared distance from the seed to the nearest other seed.
    pub sep_sq: Dyadic,
}

impl Cluster {
    /// The `n`-times enlarged disk used for certification and reporting.
    pub fn enlarged(&self, n: usize) -> ComplexDisk {
        ComplexDisk::new(
            self.seed.clone(),
            &self.radius * &Dyadic::from_int(n as i64),
        )
    }
}

fn floor_log2_usize(n: usize) -> i64 {
    63 - (n as u64).leading_zeros() as i64
}

fn ceil_log2_usize(n: usize) -> i64 {
    crate::factorizer::ceil_log2_usize(n)
}

/// Partitions the approximations into clusters; `b` must be a power of two
/// with `b >= 8n`, so all thresholds are exact powers of two.
pub fn cluster(
    roots: &[ComplexDyadic],
    k: usize,
    b: i64,
) -> Result<Vec<Cluster>, ClusterFailure> {
    let n = roots.len();
    assert!(n >= 1 && b >= 8 * n as i64, "budget too small for clustering");
    let a0 = 1i64 << (floor_log2_usize(n) + 2);
    let mut clustered = vec![false; n];
    let mut groups: Vec<(usize, Vec<usize>)> = vec![]; // (seed index, members)
    while let Some(seed) = (0..n).find(|&i| !clustered[i]) {
        let mut c: Vec<usize> = (0..n).filter(|&i| !clustered[i]).collect();
        let mut a = a0;
        loop {
            // threshold 2 * 2^(-b/(2a)); b and a are powers of two and
            // b >= 2a, so the exponent is a positive integer
            let t = Dyadic::pow2(1 - b / (2 * a));
            let t2 = &t * &t;
            c.retain(|&i| roots[i].sub(&roots[seed]).norm_sq() <= t2);
            if c.len() as i64 >= a / 2 {
                break;
            }
            a /= 2;
        }
        for &i in &c {
            clustered[i] = true;
        }
        groups.push((seed, c));
    }
    if groups.len() != k {
        return Err(ClusterFailure::WrongCount { found: groups.len(), expected: k });
    }
    // seed separations (exact squared distances, all pairs)
    let mut out = Vec::with_capacity(k);
    for (gi, (seed, members)) in groups.iter().enumerate() {
        let mut sep_sq: Option<Dyadic> = None;
        for (gj, (other, _)) in groups.iter().enumerate() {
            if gi == gj {
                continue;
            }
            let d2 = roots[*seed].sub(&roots[*other]).norm_sq();
            if sep_sq.as_ref().is_none_or(|s| &d2 < s) {
                sep_sq = Some(d2);
            }
        }
        let radius = match &sep_sq {
            Some(d2) => {
                // ceil(log2 sep) = ceil(ceil(log2 sep^2) / 2)
                let e2 = d2.ceil_log2();
                let esep = if e2 >= 0 { (e2 + 1) / 2 } else { e2 / 2 };
                let cap = -ceil_log2_usize(n * n);
                Dyadic::pow2(cap.min(esep - 8 - ceil_log2_usize(n * n)))
            }
            // k = 1: no neighbor constrains the radius
            None => Dyadic::pow2(-ceil_log2_usize(n * n)),
        };
        out.push(Cluster {
            seed: roots[*seed].clone(),
            members: members.clone(),
            radius,
            sep_sq: sep_sq.unwrap_or_else(Dyadic::zero),
        });
    }
    // guarantee checks (they can fail for too-small b): every member inside
    // its small disk, and the n-times enlarged disks pairwise disjoint
    for c in &out {
        let r2 = &c.radius * &c.radius;
        for &i in &c.members {
            if roots[i].sub(&c.seed).norm_sq() > r2 {
                return Err(ClusterFailure::Containment);
            }
        }
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if !out[i].enlarged(n).disjoint(&out[j].enlarged(n)) {
                return Err(ClusterFailure::Overlap);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn pt(re: f64, im: f64) -> ComplexDyadic {
        ComplexDyadic::from_f64(re, im)
    }

    #[test]
    fn separated_points_form_singletons() {
        let roots = vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0)];
        let cs = cluster(&roots, 3, 64).unwrap();
        assert_eq!(cs.len(), 3);
        for c in &cs {
            assert_eq!(c.members.len(), 1);
        }
        // separation of the first two seeds is 1
        assert_eq!(cs[0].sep_sq, Dyadic::one());
    }

    #[test]
    fn tight_group_clusters_together() {
        let eps = 2.0f64.powi(-40);
        let roots = vec![
            pt(1.0, 0.0),
            pt(1.0 + eps, 0.0),
            pt(1.0, eps),
            pt(-2.0, 0.0),
        ];
        let cs = cluster(&roots, 2, 64).unwrap();
        let sizes: Vec<usize> = cs.iter().map(|c| c.members.len()).collect();
        assert!(sizes.contains(&3) && sizes.contains(&1));
    }

    #[test]
    fn wrong_count_reported() {
        let roots = vec![pt(0.0, 0.0), pt(5.0, 0.0)];
        let e = cluster(&roots, 1, 64).unwrap_err();
        assert_eq!(e, ClusterFailure::WrongCount { found: 2, expected: 1 });
    }

    #[test]
    fn radius_is_power_of_two_and_bounded() {
        let roots = vec![pt(0.0, 0.0), pt(1.0, 0.0)];
        let n = roots.len();
        let cs = cluster(&roots, 2, 64).unwrap();
        for c in &cs {
            assert_eq!(c.radius.mantissa(), &BigInt::from(1));
            // r <= 1/n^2 and r >= sep/(512 n^2)
            assert!(c.radius <= Dyadic::pow2(-ceil_log2_usize(n * n)));
            let sep_up = c.sep_sq.sqrt_upper(32);
            let lower = sep_up.mul_pow2(-9 - ceil_log2_usize(n * n));
            assert!(c.radius >= lower, "radius too small: {:?}", c.radius);
        }
    }

    #[test]
    fn moderately_close_pair_splits_at_high_b() {
        // distance 2^-4: a budget of 64 still separates them (threshold
        // shrinks as the cluster size bound drops)
        let roots = vec![pt(0.5, 0.0), pt(0.5 + 2.0f64.powi(-4), 0.0)];
        let cs = cluster(&roots, 2, 256).unwrap();
        assert_eq!(cs.len(), 2);
    }
}
