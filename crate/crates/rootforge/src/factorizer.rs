//! Approximate factorization with a certified backward-error bound: given a
//! coefficient oracle, a budget exponent `b` and a root-bound exponent
//! `gamma`, produce `n` approximate roots `z~_1 .. z~_n` such that
//! `||p - p_n prod (x - z~_i)||_1 <= 2^-b ||p||_1`, verified by exact dyadic
//! expansion of the product.  The numerical engine is an Aberth-Ehrlich
//! simultaneous iteration over dyadic complex arithmetic with a precision
//! ladder, warm starts, and a cluster-collapse fallback for multiple roots;
//! exact integer inputs take a square-free-decomposition fast path.  None of
//! the numerics are trusted: the exact verification is the only arbiter.

use crate::dyadic::{Dyadic, Rounding};
use crate::interval::ComplexDyadic;
use crate::oracle::{ApproxPoly, OracleError, OracleHandle};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FactorError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("factorization did not reach backward error 2^-{b}")]
    NotConverged { b: i64 },
}

/// A verified approximate factorization.
#[derive(Clone, Debug)]
pub struct Factorization {
    /// The `n` approximate roots, with repetitions (exact dyadic points).
    pub roots: Vec<ComplexDyadic>,
    /// The coefficient approximation the roots were verified against.
    pub approx: ApproxPoly,
    pub b: i64,
}

/// Exact coefficients of the monic product `prod (x - z_i)`, by a balanced
/// product tree.
pub fn expand_monic(roots: &[ComplexDyadic]) -> Vec<ComplexDyadic> {
    match roots.len() {
        0 => vec![ComplexDyadic::real(Dyadic::one())],
        1 => vec![roots[0].neg(), ComplexDyadic::real(Dyadic::one())],
        n => {
            let a = expand_monic(&roots[..n / 2]);
            let b = expand_monic(&roots[n / 2..]);
            mul_poly_exact(&a, &b)
        }
    }
}

fn mul_poly_exact(a: &[ComplexDyadic], b: &[ComplexDyadic]) -> Vec<ComplexDyadic> {
    let mut v = vec![ComplexDyadic::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] = v[i + j].add(&x.mul(y));
        }
    }
    v
}

/// Checks `||p - p~_n prod (x - z_i)||_1 <= 2^-b ||p||_1` by exact
/// expansion, with enough margin over the oracle's own approximation error
/// that the bound transfers from the approximation `p~` to `p` itself.
pub fn verify_backward_error(
    h: &OracleHandle,
    roots: &[ComplexDyadic],
    b: i64,
) -> Result<bool, OracleError> {
    assert_eq!(roots.len(), h.degree());
    let l = b + 24;
    let a = h.approximate(l)?;
    let lead = a.coeffs.last().unwrap().clone();
    let mono = expand_monic(roots);
    let rho = b + 24;
    let mut diff = Dyadic::zero();
    for i in 0..a.coeffs.len() {
        let phat = lead.mul(&mono[i]);
        diff = &diff + &a.coeffs[i].sub(&phat).modulus_upper(rho);
    }
    let norm_lo = a.norm_1_lower(rho);
    // diff <= (7/8) 2^-b ||p~||: compare 8 * 2^b * diff <= 7 * ||p~||
    Ok(diff.mul_pow2(b + 3) <= &norm_lo.mul_pow2(3) - &norm_lo)
}

// --- rounded complex helpers -------------------------------------------------

fn cround(z: &ComplexDyadic, rho: i64) -> ComplexDyadic {
    z.round_nearest(rho)
}

fn cmul_r(a: &ComplexDyadic, b: &ComplexDyadic, rho: i64) -> ComplexDyadic {
    cround(&a.mul(b), rho)
}

/// Rounded complex quotient `a / b`; caller guarantees `b != 0`.
pub(crate) fn cdiv_r(a: &ComplexDyadic, b: &ComplexDyadic, rho: i64) -> ComplexDyadic {
    let d = b.norm_sq();
    let num = a.mul(&b.conj());
    ComplexDyadic::new(
        num.re.div(&d, rho, Rounding::Nearest),
        num.im.div(&d, rho, Rounding::Nearest),
    )
}

/// `max(|z|)` upper bound, cheap.
fn cmag(z: &ComplexDyadic) -> Dyadic {
    Dyadic::max(&z.re.abs(), &z.im.abs())
}

/// Horner evaluation of `p` and `p'` with rounding.
fn horner2(cs: &[ComplexDyadic], z: &ComplexDyadic, rho: i64) -> (ComplexDyadic, ComplexDyadic) {
    let mut p = ComplexDyadic::zero();
    let mut dp = ComplexDyadic::zero();
    for c in cs.iter().rev() {
        dp = cround(&dp.mul(z).add(&p), rho);
        p = cround(&p.mul(z).add(c), rho);
    }
    (p, dp)
}

// --- f64 warm start ----------------------------------------------------------

type C64 = (f64, f64);

fn c_add(a: C64, b: C64) -> C64 {
    (a.0 + b.0, a.1 + b.1)
}
fn c_sub(a: C64, b: C64) -> C64 {
    (a.0 - b.0, a.1 - b.1)
}
fn c_mul(a: C64, b: C64) -> C64 {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}
fn c_div(a: C64, b: C64) -> C64 {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}
fn c_abs(a: C64) -> f64 {
    a.0.hypot(a.1)
}

fn circle_guesses(n: usize) -> Vec<C64> {
    (0..n)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.39;
            (0.7 * t.cos(), 0.7 * t.sin())
        })
        .collect()
}

/// A few hundred double-precision Aberth sweeps to get cheap starting points
/// (roots are expected in the unit disk).  Falls back to a circle when the
/// coefficients are out of `f64` range.
fn f64_warm_start(cs: &[ComplexDyadic]) -> Vec<C64> {
    let n = cs.len() - 1;
    let lead = cs[n].to_f64();
    let coeffs: Vec<C64> = cs.iter().map(|c| c.to_f64()).collect();
    if coeffs
        .iter()
        .any(|&(re, im)| !re.is_finite() || !im.is_finite())
        || c_abs(lead) == 0.0
    {
        return circle_guesses(n);
    }
    let mut z = circle_guesses(n);
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (mut p, mut dp) = ((0.0, 0.0), (0.0, 0.0));
            for c in coeffs.iter().rev() {
                dp = c_add(c_mul(dp, z[i]), p);
                p = c_add(c_mul(p, z[i]), *c);
            }
            if c_abs(p) == 0.0 {
                continue;
            }
            if c_abs(dp) == 0.0 {
                z[i] = c_add(z[i], (1e-3, 1e-3));
                continue;
            }
            let nwt = c_div(p, dp);
            let mut s = (0.0, 0.0);
            for j in 0..n {
                if i != j {
                    let d = c_sub(z[i], z[j]);
                    if c_abs(d) > 0.0 {
                        s = c_add(s, c_div((1.0, 0.0), d));
                    }
                }
            }
            let den = c_sub((1.0, 0.0), c_mul(nwt, s));
            let step = if c_abs(den) > 1e-300 { c_div(nwt, den) } else { nwt };
            if step.0.is_finite() && step.1.is_finite() {
                z[i] = c_sub(z[i], step);
                max_step = max_step.max(c_abs(step));
            }
        }
        if max_step < 1e-14 {
            break;
        }
    }
    if z.iter().any(|&(re, im)| !re.is_finite() || !im.is_finite()) {
        return circle_guesses(n);
    }
    z
}

// --- dyadic Aberth ladder ----------------------------------------------------

/// One Gauss-Seidel Aberth sweep at working precision `rho`; returns an
/// upper bound on the largest step taken.
fn aberth_sweep(cs: &[ComplexDyadic], z: &mut [ComplexDyadic], rho: i64) -> Dyadic {
    let n = z.len();
    let one = ComplexDyadic::real(Dyadic::one());
    let mut max_step = Dyadic::zero();
    for i in 0..n {
        let (p, dp) = horner2(cs, &z[i], rho);
        if p.is_zero() {
            continue;
        }
        if dp.is_zero() {
            // nudge deterministically off the critical point
            let eps = Dyadic::pow2(-(rho / 2) - (i as i64 % 7));
            z[i] = z[i].add(&ComplexDyadic::new(eps.clone(), eps));
            continue;
        }
        let nwt = cdiv_r(&p, &dp, rho);
        let mut s = ComplexDyadic::zero();
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = z[i].sub(&z[j]);
            if d.is_zero() {
                continue;
            }
            s = cround(&s.add(&cdiv_r(&one, &d, rho)), rho);
        }
        let den = one.sub(&cmul_r(&nwt, &s, rho));
        let step = if den.is_zero() { nwt } else { cdiv_r(&nwt, &den, rho) };
        z[i] = z[i].sub(&step);
        let m = cmag(&step);
        if m > max_step {
            max_step = m;
        }
    }
    max_step
}

/// Precision-laddered Aberth iteration: runs sweeps at doubling working
/// precisions up to `target`, leaving each rung when the steps stall or drop
/// below the rung's resolution.  Returns the points and the last step bound.
fn aberth_ladder(
    coeffs: &[ComplexDyadic],
    mut z: Vec<ComplexDyadic>,
    target: i64,
    final_budget: usize,
) -> (Vec<ComplexDyadic>, Dyadic) {
    let n = z.len();
    let mut rho = 64i64;
    let mut last_step = Dyadic::pow2(10);
    loop {
        let at_target = rho >= target;
        let cs: Vec<ComplexDyadic> = coeffs.iter().map(|c| cround(c, rho + 8)).collect();
        let budget = if at_target { final_budget } else { 24 + 2 * n };
        let mut stalls = 0;
        for _ in 0..budget {
            let step = aberth_sweep(&cs, &mut z, rho + 8);
            if step.is_zero() || step <= Dyadic::pow2(-rho) {
                last_step = step;
                break;
            }
            // stall: steps no longer shrinking at this precision
            if step.mul_pow2(3) > &last_step.mul_pow2(3) - &last_step {
                stalls += 1;
            } else {
                stalls = 0;
            }
            last_step = step;
            if stalls >= 4 {
                break;
            }
        }
        if at_target {
            return (z, last_step);
        }
        rho = (rho * 2).min(target);
    }
}

fn guesses_to_dyadic(g: &[C64]) -> Vec<ComplexDyadic> {
    g.iter()
        .map(|&(re, im)| {
            ComplexDyadic::from_f64(
                if re.is_finite() { re } else { 0.0 },
                if im.is_finite() { im } else { 0.0 },
            )
        })
        .collect()
}

/// Collapses groups of points lying within `tol` of each other (transitive
/// closure) onto the rounded group centroid.
fn collapse_clusters(z: &[ComplexDyadic], tol: &Dyadic, rho: i64) -> Vec<ComplexDyadic> {
    let n = z.len();
    let t2 = tol * tol;
    let mut group = (0..n).collect::<Vec<_>>();
    fn find(g: &mut Vec<usize>, i: usize) -> usize {
        if g[i] != i {
            let r = find(g, g[i]);
            g[i] = r;
        }
        g[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if z[i].sub(&z[j]).norm_sq() <= t2 {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                group[a] = b;
            }
        }
    }
    let mut out = z.to_vec();
    for r in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| find(&mut group, i) == r).collect();
        if members.len() < 2 {
            continue;
        }
        let mut c = ComplexDyadic::zero();
        for &i in &members {
            c = c.add(&z[i]);
        }
        let inv = Dyadic::one().div(
            &Dyadic::from_int(members.len() as i64),
            rho,
            Rounding::Nearest,
        );
        let c = cround(&c.scale(&inv), rho);
        for &i in &members {
            out[i] = c.clone();
        }
    }
    out
}

// --- top level ---------------------------------------------------------------

/// Scaled coefficients of `g(x) = p~(2^gamma x)` (so all roots have modulus
/// below 1), normalized by a power of two to keep exponents tame.
fn scaled_coeffs(a: &ApproxPoly, gamma: i64) -> Vec<ComplexDyadic> {
    let mut g: Vec<ComplexDyadic> = a
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c.mul_pow2(gamma * i as i64))
        .collect();
    let maxe = g
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| cmag(c).floor_log2())
        .max()
        .unwrap_or(0);
    for c in &mut g {
        *c = c.mul_pow2(-maxe);
    }
    g
}

/// Shared root grid for budget `b`: roots are reported on `2^-(bb + ceil
/// log2 n + 4)` in the scaled (unit-disk) frame, where `bb = b + n gamma`.
fn root_grid(n: usize, b: i64, gamma: i64) -> i64 {
    b + n as i64 * gamma + ceil_log2_usize(n) + 4
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2_usize(n: usize) -> i64 {
    if n <= 1 {
        0
    } else {
        64 - ((n - 1) as u64).leading_zeros() as i64
    }
}

pub fn factorize(
    h: &OracleHandle,
    b: i64,
    gamma: i64,
    hint: Option<&[ComplexDyadic]>,
) -> Result<Factorization, FactorError> {
    let n = h.degree();
    assert!(n >= 1 && b >= 1 && gamma >= 1);
    let approx = h.approximate(b + 24)?;
    if n == 1 {
        let z = cdiv_r(
            &approx.coeffs[0].neg(),
            &approx.coeffs[1],
            root_grid(1, b, gamma),
        );
        if verify_backward_error(h, std::slice::from_ref(&z), b)? {
            return Ok(Factorization { roots: vec![z], approx, b });
        }
        return Err(FactorError::NotConverged { b });
    }
    let grid = root_grid(n, b, gamma);
    let target = grid + 16;

    // exact integer inputs: factor each square-free part separately, so
    // every numeric root is simple and the iteration converges quadratically
    if let Some(p) = h.exact_integer() {
        let decomp = p.square_free_decomposition();
        let mut tries = 0usize;
        let mut t = target;
        while tries < 4 {
            let mut roots = Vec::with_capacity(n);
            for (q, m) in &decomp {
                let qa = ApproxPoly {
                    coeffs: (0..=q.deg())
                        .map(|i| ComplexDyadic::real(Dyadic::from_int(q.coeff(i))))
                        .collect(),
                    denom_exp: 0,
                    precision: i64::MAX / 2,
                };
                let g = scaled_coeffs(&qa, gamma);
                let start = guesses_to_dyadic(&f64_warm_start(&g));
                let (z, _) = aberth_ladder(&g, start, t, 64 + 8 * q.deg());
                for zi in z {
                    let zi = cround(&zi, grid).mul_pow2(gamma);
                    for _ in 0..*m {
                        roots.push(zi.clone());
                    }
                }
            }
            if verify_backward_error(h, &roots, b)? {
                return Ok(Factorization { roots, approx, b });
            }
            tries += 1;
            t += t / 2;
        }
        return Err(FactorError::NotConverged { b });
    }

    // general oracle path
    let g = scaled_coeffs(&approx, gamma);
    let mut z: Vec<ComplexDyadic> = match hint {
        Some(hh) if hh.len() == n => hh
            .iter()
            .map(|r| cround(&r.mul_pow2(-gamma), 128))
            .collect(),
        _ => guesses_to_dyadic(&f64_warm_start(&g)),
    };
    let mut t = target;
    for _round in 0..6 {
        let (zz, step) = aberth_ladder(&g, z, t, 64 + 8 * n);
        z = zz;
        let unscale = |pts: &[ComplexDyadic]| -> Vec<ComplexDyadic> {
            pts.iter().map(|p| cround(p, grid).mul_pow2(gamma)).collect()
        };
        if verify_backward_error(h, &unscale(&z), b)? {
            return Ok(Factorization { roots: unscale(&z), approx, b });
        }
        // multiple roots only converge linearly: collapsing a tight cluster
        // onto its centroid often lands inside the backward-error budget
        let tol = step.mul_pow2(8);
        if tol.sign() > 0 {
            let zc = collapse_clusters(&z, &tol, t);
            if verify_backward_error(h, &unscale(&zc), b)? {
                return Ok(Factorization { roots: unscale(&zc), approx, b });
            }
            z = zc; // keep the collapsed configuration as the next start
        }
        t += t / 2;
    }
    Err(FactorError::NotConverged { b })
}

/// The smallest admissible budget exponent for degree `n`: a power of two at
/// least `max(8n, n ceil(log2 n))`.
pub fn initial_budget(n: usize) -> i64 {
    let cl = ceil_log2_usize(n).max(1);
    let want = (8 * n as i64).max(n as i64 * cl);
    let mut b = 1i64;
    while b < want {
        b *= 2;
    }
    b
}
