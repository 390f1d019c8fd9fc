//! Dense univariate polynomials over the integers: exact arithmetic,
//! content/primitive decomposition, gcd and square-free part via a primitive
//! pseudo-remainder sequence, and resultants through fraction-free
//! elimination of the Sylvester matrix.

use crate::dyadic::Dyadic;
use crate::interval::DyadicInterval;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A polynomial with `BigInt` coefficients, `coeffs[i]` the coefficient of
/// `x^i`, no trailing zeros (the zero polynomial has an empty vector).
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![BigInt::one()] }
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPoly { coeffs: v }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn neg(&self) -> Self {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + rhs.coeff(i));
        }
        IntPoly::new(v)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i + 1))
                .collect(),
        )
    }

    /// Sum of absolute values of the coefficients.
    pub fn norm_1(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn eval_bigint(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact evaluation at a dyadic point.
    pub fn eval_dyadic(&self, x: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Dyadic::from_int(c.clone());
        }
        acc
    }

    /// Outward-rounded Horner evaluation over a real interval.
    pub fn eval_interval(&self, x: &DyadicInterval, rho: i64) -> DyadicInterval {
        let mut acc = DyadicInterval::zero();
        for c in self.coeffs.iter().rev() {
            let cd = DyadicInterval::point(Dyadic::from_int(c.clone()));
            acc = acc.mul(x).add(&cd).outward(rho);
        }
        acc
    }

    /// Gcd of all coefficients, non-negative; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content; sign convention: leading coefficient keeps
    /// its sign.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let g = self.content();
        IntPoly { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    /// Exact division; returns `None` when the division leaves a remainder.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.coeffs.len() < d.coeffs.len() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dn = d.coeffs.len();
        let lead = d.leading();
        let qlen = rem.len() - dn + 1;
        let mut q = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = rem[i + dn - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(q))
    }

    /// Pseudo-remainder: the `r` in `lc(d)^(deg f - deg d + 1) f = q d + r`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "pseudo-remainder by zero");
        if self.coeffs.len() < d.coeffs.len() {
            return self.clone();
        }
        let lead = d.leading();
        let mut r = self.clone();
        let steps = self.deg() - d.deg() + 1;
        for _ in 0..steps {
            if r.coeffs.len() < d.coeffs.len() {
                r = r.scale(&lead);
                continue;
            }
            let k = r.deg() - d.deg();
            let top = r.leading();
            r = r.scale(&lead).sub(&d.mul(&IntPoly::monomial(top, k)));
        }
        r
    }

    /// Gcd via a primitive pseudo-remainder sequence; includes the integer
    /// content and is normalized to a positive leading coefficient.
    pub fn gcd(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.abs_normalized();
        }
        if rhs.is_zero() {
            return self.abs_normalized();
        }
        let cont = self.content().gcd(&rhs.content());
        let (mut a, mut b) = (self.primitive_part(), rhs.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.abs_normalized().scale(&cont)
    }

    fn abs_normalized(&self) -> Self {
        if self.leading().sign() == num_bigint::Sign::Minus {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// The square-free part `f / gcd(f, f')`, primitive, positive leading
    /// coefficient.
    pub fn square_free_part(&self) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        if self.deg() == 0 {
            return IntPoly::one();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g)
            .expect("gcd must divide")
            .primitive_part()
            .abs_normalized()
    }

    /// Square-free decomposition (Yun): returns `[(q_1, 1), (q_2, 2), ...]`
    /// with `self = c * prod q_i^i`, each `q_i` square-free and primitive,
    /// pairwise coprime; factors with empty `q_i` are omitted.
    pub fn square_free_decomposition(&self) -> Vec<(IntPoly, usize)> {
        if self.is_zero() || self.deg() == 0 {
            return vec![];
        }
        let p = self.primitive_part();
        let dp = p.derivative();
        let g = p.gcd(&dp);
        if g.deg() == 0 {
            return vec![(p.abs_normalized(), 1)];
        }
        let mut w = p.exact_div(&g).expect("gcd divides");
        let mut y = dp.exact_div(&g).expect("gcd divides derivative");
        let mut z = y.sub(&w.derivative());
        let mut out = vec![];
        let mut i = 1usize;
        while w.deg() > 0 {
            let gi = w.gcd(&z);
            if gi.deg() > 0 {
                out.push((gi.clone(), i));
            }
            w = w.exact_div(&gi).expect("factor divides");
            y = z.exact_div(&gi).expect("factor divides");
            z = y.sub(&w.derivative());
            i += 1;
        }
        out
    }

    /// Resultant with respect to the variable, as a determinant of the
    /// Sylvester matrix (rows of `self` first).
    pub fn resultant(&self, rhs: &Self) -> BigInt {
        let (p, q) = (self.deg(), rhs.deg());
        if self.is_zero() || rhs.is_zero() {
            return BigInt::zero();
        }
        if p == 0 && q == 0 {
            return BigInt::one();
        }
        if p == 0 {
            return self.coeff(0).pow(q as u32);
        }
        if q == 0 {
            return rhs.coeff(0).pow(p as u32);
        }
        let n = p + q;
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for r in 0..q {
            for (i, c) in self.coeffs.iter().rev().enumerate() {
                m[r][r + i] = c.clone();
            }
        }
        for r in 0..p {
            for (i, c) in rhs.coeffs.iter().rev().enumerate() {
                m[q + r][r + i] = c.clone();
            }
        }
        bareiss_det(m)
    }
}

/// Fraction-free determinant with row pivoting.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t.div_rem(&prev).0;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}
