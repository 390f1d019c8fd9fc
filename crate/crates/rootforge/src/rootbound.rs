//! Certified power-of-two root bound: the smallest exponent `gamma` (found
//! by exponential plus binary search) such that the associated Cauchy
//! polynomial is certifiably positive at `2^gamma`, which proves every
//! complex root of the input has modulus below `2^gamma`.  The query
//! precision grows with the trial exponent so the certification stays sound
//! however large the roots are.

use crate::dyadic::Dyadic;
use crate::interval::DyadicInterval;
use crate::oracle::{estimate_lambda, estimate_leading_coeff, OracleError, OracleHandle};

/// Outward enclosures of the coefficient moduli `|p_i|` at precision `L`.
pub fn coeff_moduli(h: &OracleHandle, l: i64) -> Result<Vec<DyadicInterval>, OracleError> {
    let a = h.approximate(l)?;
    let err = a.coeff_error_upper();
    let rho = l + 16;
    Ok(a
        .coeffs
        .iter()
        .map(|c| {
            let lo = &c.modulus_lower(rho) - &err;
            let hi = &c.modulus_upper(rho) + &err;
            DyadicInterval::new(
                if lo.sign() > 0 { lo } else { Dyadic::zero() },
                hi,
            )
        })
        .collect())
}

/// Certified lower bound for the Cauchy polynomial
/// `|p_n| x^n - sum_{i<n} |p_i| x^i` at `x = 2^k`, using coefficient moduli
/// enclosures at precision `L`.  The evaluation is exact dyadic arithmetic on
/// the pessimistic endpoints.
fn cauchy_lower_at_pow2(moduli: &[DyadicInterval], k: i64) -> Dyadic {
    let n = moduli.len() - 1;
    let mut v = moduli[n].lo.mul_pow2(k * n as i64);
    for (i, m) in moduli.iter().enumerate().take(n) {
        v = &v - &m.hi.mul_pow2(k * i as i64);
    }
    v
}

/// Computes the root bound exponent: `2^gamma` strictly dominates the
/// modulus of every root, `gamma >= 1`, and `gamma` exceeds the optimal
/// power-of-two bound by at most `8 log2 n` (in practice by far less).
pub fn compute_gamma(h: &OracleHandle) -> Result<i64, OracleError> {
    let n = h.degree() as i64;
    assert!(n >= 1, "root bound needs positive degree");
    let lead = estimate_leading_coeff(h)?;
    let lam = estimate_lambda(h)?;
    let lam_exp = lam.ceil_log2().max(0);
    let base = lead.precision + lam_exp + 8;
    // success(k): certified positivity of the Cauchy polynomial at 2^k, with
    // precision scaled so the interval width cannot mask a true positive
    let success = |k: i64| -> Result<bool, OracleError> {
        let l = base + n * k;
        let moduli = coeff_moduli(h, l)?;
        Ok(cauchy_lower_at_pow2(&moduli, k).sign() > 0)
    };
    // exponential search for a success
    let mut hi = 1i64;
    while !success(hi)? {
        hi *= 2;
        if hi > 1 << 24 {
            return Err(OracleError::PrecisionCap { requested: hi, cap: 1 << 24 });
        }
    }
    // binary search for the smallest success in (hi/2, hi]
    let mut lo = hi / 2; // certified failure (or 0)
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if success(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi.max(1))
}
