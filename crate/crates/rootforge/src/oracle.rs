//! Coefficient oracles.  A polynomial enters the isolation engine through an
//! oracle that, for any requested precision `L`, returns dyadic coefficient
//! approximations on a shared grid `2^-ell` with per-coefficient error at
//! most `2^(-L) * ||p||_1 / (n+1)`.  Three sources are supported: exact
//! integer coefficients, exact (complex) dyadic coefficients, and the fiber
//! `f(alpha, y)` of a bivariate polynomial over a real algebraic number
//! `alpha` given by a square-free defining polynomial and a refinable
//! isolating interval.

use crate::dyadic::{Dyadic, Rounding};
use crate::interval::{ComplexDyadic, DyadicInterval};
use crate::intpoly::IntPoly;
use num_bigint::BigInt;
use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle precision cap of {cap} bits exceeded (requested {requested})")]
    PrecisionCap { requested: i64, cap: i64 },
    #[error("leading coefficient is zero")]
    LeadingZero,
}

/// Coefficient approximations at precision `L`: all coefficients lie on the
/// grid `2^-denom_exp`, and `|coeffs[i] - p_i| <= 2^(-precision) * ||p||_1 /
/// (n+1)` holds for every `i`.
#[derive(Clone, Debug)]
pub struct ApproxPoly {
    pub coeffs: Vec<ComplexDyadic>,
    pub denom_exp: i64,
    pub precision: i64,
}

impl ApproxPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Upper bound on the 1-norm of the approximate coefficient vector.
    pub fn norm_1_upper(&self, rho: i64) -> Dyadic {
        let mut s = Dyadic::zero();
        for c in &self.coeffs {
            s = &s + &c.modulus_upper(rho);
        }
        s
    }

    pub fn norm_1_lower(&self, rho: i64) -> Dyadic {
        let mut s = Dyadic::zero();
        for c in &self.coeffs {
            s = &s + &c.modulus_lower(rho);
        }
        s
    }

    /// Upper bound on the per-coefficient approximation error implied by the
    /// precision contract, computed from this approximation alone:
    /// `2^(-L) * ||p||_1 / (n+1) <= 2^(-L - floor(log2(n+1))) * 2 * ||p~||_1`.
    pub fn coeff_error_upper(&self) -> Dyadic {
        let n1 = self.coeffs.len() as i64; // n + 1
        let fl = 63 - (n1 as u64).leading_zeros() as i64; // floor(log2(n+1))
        // ||p||_1 <= 2 ||p~||_1 as soon as L >= 1
        self.norm_1_upper(self.denom_exp + 8)
            .mul_pow2(1 - self.precision - fl)
    }
}

/// A real algebraic number: a simple real root of a square-free integer
/// polynomial, bracketed by a sign-changing dyadic interval that can be
/// refined by bisection.  A dyadic root is detected and pinned exactly.
#[derive(Clone, Debug)]
pub struct AlgebraicReal {
    poly: IntPoly,
    lo: Dyadic,
    hi: Dyadic,
    exact: bool,
}

impl AlgebraicReal {
    /// `poly` must be square-free with exactly one real root in `[lo, hi]`.
    pub fn new(poly: IntPoly, lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "inverted bracket");
        let slo = poly.eval_dyadic(&lo).sign();
        let shi = poly.eval_dyadic(&hi).sign();
        if slo == 0 {
            let l = lo.clone();
            return AlgebraicReal { poly, lo: l.clone(), hi: l, exact: true };
        }
        if shi == 0 {
            let h = hi.clone();
            return AlgebraicReal { poly, lo: h.clone(), hi: h, exact: true };
        }
        assert!(
            slo != shi,
            "bracket endpoints must straddle the root of the defining polynomial"
        );
        AlgebraicReal { poly, lo, hi, exact: false }
    }

    pub fn exact(value: Dyadic) -> Self {
        AlgebraicReal {
            poly: IntPoly::zero(),
            lo: value.clone(),
            hi: value,
            exact: true,
        }
    }

    pub fn interval(&self) -> DyadicInterval {
        DyadicInterval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// One bisection step (no-op once exact).
    pub fn refine(&mut self) {
        if self.exact {
            return;
        }
        let mid = (&self.lo + &self.hi).mul_pow2(-1);
        let sm = self.poly.eval_dyadic(&mid).sign();
        if sm == 0 {
            self.lo = mid.clone();
            self.hi = mid;
            self.exact = true;
            return;
        }
        let slo = self.poly.eval_dyadic(&self.lo).sign();
        if sm == slo {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn refine_below(&mut self, width: &Dyadic) {
        while !self.exact && &self.width() > width {
            self.refine();
        }
    }
}

enum Source {
    ExactInt(IntPoly),
    ExactDyadic(Vec<ComplexDyadic>),
    Fiber {
        /// `coeffs_x[j]` is the coefficient of `y^j`, a polynomial in `x`;
        /// the leading one must be a nonzero constant.
        coeffs_x: Vec<IntPoly>,
        alpha: RefCell<AlgebraicReal>,
    },
}

/// Handle to a polynomial given by approximation queries.  Tracks the number
/// of queries and the maximum precision ever requested, so the adaptive
/// behavior of the solvers is observable.
pub struct OracleHandle {
    source: Source,
    degree: usize,
    precision_cap: i64,
    queries: Cell<u64>,
    max_precision: Cell<i64>,
    memo: RefCell<BTreeMap<i64, ApproxPoly>>,
}

impl OracleHandle {
    pub fn from_int(p: IntPoly) -> Self {
        assert!(!p.is_zero(), "oracle for the zero polynomial");
        let degree = p.deg();
        OracleHandle {
            source: Source::ExactInt(p),
            degree,
            precision_cap: 1 << 28,
            queries: Cell::new(0),
            max_precision: Cell::new(0),
            memo: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn from_dyadic(coeffs: Vec<ComplexDyadic>) -> Self {
        assert!(
            coeffs.last().is_some_and(|c| !c.is_zero()),
            "leading coefficient must be nonzero"
        );
        let degree = coeffs.len() - 1;
        OracleHandle {
            source: Source::ExactDyadic(coeffs),
            degree,
            precision_cap: 1 << 28,
            queries: Cell::new(0),
            max_precision: Cell::new(0),
            memo: RefCell::new(BTreeMap::new()),
        }
    }

    /// Fiber `f(alpha, y)`: `coeffs_x[j]` is the `x`-polynomial coefficient
    /// of `y^j`.  The leading coefficient must be a nonzero constant so the
    /// fiber keeps full degree.
    pub fn from_fiber(coeffs_x: Vec<IntPoly>, alpha: AlgebraicReal) -> Self {
        let lead = coeffs_x.last().expect("empty fiber polynomial");
        assert!(
            lead.is_constant() && !lead.is_zero(),
            "fiber leading coefficient must be a nonzero constant"
        );
        let degree = coeffs_x.len() - 1;
        OracleHandle {
            source: Source::Fiber { coeffs_x, alpha: RefCell::new(alpha) },
            degree,
            precision_cap: 1 << 28,
            queries: Cell::new(0),
            max_precision: Cell::new(0),
            memo: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The exact integer polynomial behind the handle, when there is one
    /// (lets downstream stages use exact accelerations that are then still
    /// validated against the approximation contract).
    pub fn exact_integer(&self) -> Option<&IntPoly> {
        match &self.source {
            Source::ExactInt(p) => Some(p),
            _ => None,
        }
    }

    /// Whether every coefficient of the underlying polynomial is real.
    pub fn is_real(&self) -> bool {
        match &self.source {
            Source::ExactInt(_) | Source::Fiber { .. } => true,
            Source::ExactDyadic(c) => c.iter().all(|z| z.im.is_zero()),
        }
    }

    pub fn set_precision_cap(&mut self, cap: i64) {
        self.precision_cap = cap;
    }

    /// `(number of queries, maximum precision requested)`.
    pub fn stats(&self) -> (u64, i64) {
        (self.queries.get(), self.max_precision.get())
    }

    /// Coefficient approximations at precision `L >= 1`.
    pub fn approximate(&self, l: i64) -> Result<ApproxPoly, OracleError> {
        assert!(l >= 1, "precision must be at least 1");
        if l > self.precision_cap {
            return Err(OracleError::PrecisionCap { requested: l, cap: self.precision_cap });
        }
        self.queries.set(self.queries.get() + 1);
        if l > self.max_precision.get() {
            self.max_precision.set(l);
        }
        if let Some(a) = self.memo.borrow().get(&l) {
            return Ok(a.clone());
        }
        let a = match &self.source {
            Source::ExactInt(p) => self.approx_exact(
                &(0..=self.degree)
                    .map(|i| ComplexDyadic::real(Dyadic::from_int(p.coeff(i))))
                    .collect::<Vec<_>>(),
                l,
            ),
            Source::ExactDyadic(c) => self.approx_exact(c, l),
            Source::Fiber { coeffs_x, alpha } => {
                self.approx_fiber(coeffs_x, &mut alpha.borrow_mut(), l)
            }
        };
        self.memo.borrow_mut().insert(l, a.clone());
        Ok(a)
    }

    fn grid_exp(&self, l: i64, norm_upper: &Dyadic) -> i64 {
        let n1 = (self.degree + 1) as u64;
        let cl = 64 - (n1 - 1).leading_zeros() as i64; // ceil(log2(n+1))
        l + cl - norm_upper.floor_log2()
    }

    fn approx_exact(&self, coeffs: &[ComplexDyadic], l: i64) -> ApproxPoly {
        // a tight norm upper bound: exact for real coefficients, within a
        // factor (1 + eps) in general
        let mut u = Dyadic::zero();
        for c in coeffs {
            u = &u + &c.modulus_upper(l + 16);
        }
        let ell = self.grid_exp(l, &u);
        ApproxPoly {
            coeffs: coeffs.iter().map(|c| c.round_nearest(ell)).collect(),
            denom_exp: ell,
            precision: l,
        }
    }

    fn approx_fiber(
        &self,
        coeffs_x: &[IntPoly],
        alpha: &mut AlgebraicReal,
        l: i64,
    ) -> ApproxPoly {
        let n1 = (self.degree + 1) as u64;
        let cl = 64 - (n1 - 1).leading_zeros() as i64; // ceil(log2(n+1))
        let mut rho = l + cl + 16;
        loop {
            let ivs: Vec<DyadicInterval> = coeffs_x
                .iter()
                .map(|c| c.eval_interval(&alpha.interval(), rho))
                .collect();
            let mut upper = Dyadic::zero();
            let mut lower = Dyadic::zero();
            for iv in &ivs {
                let a = iv.abs();
                upper = &upper + &a.hi;
                lower = &lower + &a.lo;
            }
            // (a) the norm must be pinned within a factor 5/4, (b) every
            // coefficient interval must be narrower than half the allowed
            // per-coefficient error; together they bound midpoint + grid
            // rounding by 2^(-L) ||p||_1 / (n+1)
            let ok_norm = lower.sign() > 0 && {
                // upper <= (5/4) lower  <=>  4 upper <= 5 lower
                upper.mul_pow2(2) <= &lower.mul_pow2(2) + &lower
            };
            if ok_norm {
                let err_budget = lower.mul_pow2(-l - cl - 1);
                let ok_width = ivs.iter().all(|iv| iv.width() <= err_budget);
                if ok_width {
                    let ell = self.grid_exp(l, &upper);
                    let coeffs = ivs
                        .iter()
                        .map(|iv| {
                            ComplexDyadic::real(iv.mid().round(ell, Rounding::Nearest))
                        })
                        .collect();
                    return ApproxPoly { coeffs, denom_exp: ell, precision: l };
                }
            }
            // refine the root bracket and retry with more working precision
            for _ in 0..16 {
                alpha.refine();
            }
            rho += 32;
        }
    }
}

/// Certified bounds `lower <= |p_n| <= upper` on the modulus of the leading
/// coefficient, with `upper <= 2 * lower`, plus the precision that achieved
/// them.  Found by doubling the query precision until the error bound is
/// dominated by the observed leading coefficient.
pub struct LeadingEstimate {
    pub lower: Dyadic,
    pub upper: Dyadic,
    pub precision: i64,
}

pub fn estimate_leading_coeff(h: &OracleHandle) -> Result<LeadingEstimate, OracleError> {
    let mut l = 1i64;
    loop {
        let a = h.approximate(l)?;
        let err = a.coeff_error_upper();
        let lead = a.coeffs.last().unwrap();
        let lead_lo = lead.modulus_lower(l + 16);
        // err <= lead/8 pins the modulus within a factor (1+1/4)
        if lead_lo.sign() > 0 && err <= lead_lo.mul_pow2(-3) {
            let lead_hi = lead.modulus_upper(l + 16);
            return Ok(LeadingEstimate {
                lower: &lead_lo - &err,
                upper: &lead_hi + &err,
                precision: l,
            });
        }
        l = (2 * l).min(h.precision_cap);
        if l == h.precision_cap {
            // a final attempt at the cap before giving up
            let a = h.approximate(l)?;
            let err = a.coeff_error_upper();
            let lead = a.coeffs.last().unwrap();
            let lead_lo = lead.modulus_lower(l + 16);
            if lead_lo.sign() > 0 && err <= lead_lo.mul_pow2(-3) {
                let lead_hi = lead.modulus_upper(l + 16);
                return Ok(LeadingEstimate {
                    lower: &lead_lo - &err,
                    upper: &lead_hi + &err,
                    precision: l,
                });
            }
            return Err(OracleError::LeadingZero);
        }
    }
}

/// A power of two `lambda` with `||p||_1 / |p_n| <= lambda <= 4 ||p||_1 /
/// |p_n|`.
pub fn estimate_lambda(h: &OracleHandle) -> Result<Dyadic, OracleError> {
    let lead = estimate_leading_coeff(h)?;
    let a = h.approximate(lead.precision.max(8))?;
    let err = a.coeff_error_upper();
    let n1 = Dyadic::from_int(BigInt::from(h.degree() as i64 + 1));
    let norm_up = &a.norm_1_upper(lead.precision + 16) + &(&n1 * &err);
    // ratio upper bound, then round the exponent up to a power of two
    let r = norm_up.div(&lead.lower, 8, Rounding::Up);
    Ok(Dyadic::pow2(r.ceil_log2()))
}
