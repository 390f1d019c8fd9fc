//! Bivariate polynomials over the integers, stored `y`-major: the
//! coefficient of `y^j` is a univariate `IntPoly` in `x`.  Provides shearing,
//! content/primitive decomposition with respect to `x`, bivariate gcd via a
//! primitive pseudo-remainder sequence in `y`, resultants, and the
//! subresultant sequence with exact integer cofactors obtained by
//! fraction-free elimination of an augmented Sylvester-style matrix.

use crate::intpoly::IntPoly;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly2 {
    /// `ycoeffs[j]` is the coefficient of `y^j`, a polynomial in `x`.
    ycoeffs: Vec<IntPoly>,
}

impl IntPoly2 {
    pub fn new(mut ycoeffs: Vec<IntPoly>) -> Self {
        while ycoeffs.last().is_some_and(|c| c.is_zero()) {
            ycoeffs.pop();
        }
        IntPoly2 { ycoeffs }
    }

    pub fn zero() -> Self {
        IntPoly2 { ycoeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.ycoeffs.is_empty()
    }

    pub fn from_x(p: IntPoly) -> Self {
        IntPoly2::new(vec![p])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly2::new(vec![IntPoly::constant(c)])
    }

    /// The monomial `c * x^i * y^j`.
    pub fn monomial(c: BigInt, i: usize, j: usize) -> Self {
        if c.is_zero() {
            return IntPoly2::zero();
        }
        let mut v = vec![IntPoly::zero(); j + 1];
        v[j] = IntPoly::monomial(c, i);
        IntPoly2 { ycoeffs: v }
    }

    /// Degree in `y`; the zero polynomial reports 0.
    pub fn deg_y(&self) -> usize {
        self.ycoeffs.len().saturating_sub(1)
    }

    pub fn deg_x(&self) -> usize {
        self.ycoeffs.iter().map(|c| c.deg()).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.ycoeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| j + c.deg())
            .max()
            .unwrap_or(0)
    }

    pub fn ycoeff(&self, j: usize) -> IntPoly {
        self.ycoeffs.get(j).cloned().unwrap_or_else(IntPoly::zero)
    }

    pub fn ycoeffs(&self) -> &[IntPoly] {
        &self.ycoeffs
    }

    /// Leading coefficient with respect to `y`.
    pub fn leading_y(&self) -> IntPoly {
        self.ycoeffs.last().cloned().unwrap_or_else(IntPoly::zero)
    }

    pub fn neg(&self) -> Self {
        IntPoly2 { ycoeffs: self.ycoeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.ycoeffs.len().max(rhs.ycoeffs.len());
        IntPoly2::new((0..n).map(|j| self.ycoeff(j).add(&rhs.ycoeff(j))).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly2::zero();
        }
        let mut v = vec![IntPoly::zero(); self.ycoeffs.len() + rhs.ycoeffs.len() - 1];
        for (i, a) in self.ycoeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.ycoeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        IntPoly2::new(v)
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        IntPoly2::new(self.ycoeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn scale_x(&self, c: &IntPoly) -> Self {
        IntPoly2::new(self.ycoeffs.iter().map(|p| p.mul(c)).collect())
    }

    pub fn deriv_y(&self) -> Self {
        if self.ycoeffs.len() <= 1 {
            return IntPoly2::zero();
        }
        IntPoly2::new(
            self.ycoeffs[1..]
                .iter()
                .enumerate()
                .map(|(j, c)| c.scale(&BigInt::from(j + 1)))
                .collect(),
        )
    }

    pub fn deriv_x(&self) -> Self {
        IntPoly2::new(self.ycoeffs.iter().map(|c| c.derivative()).collect())
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.ycoeffs.iter().rev() {
            acc = acc * y + c.eval_bigint(x);
        }
        acc
    }

    /// Coefficients as polynomials in `y`, indexed by the power of `x`
    /// (`result[i]` is the coefficient of `x^i`, a polynomial in `y` encoded
    /// as an `IntPoly` in the variable `y`).
    pub fn xcoeffs(&self) -> Vec<IntPoly> {
        let dx = self.deg_x();
        (0..=dx)
            .map(|i| {
                IntPoly::new(self.ycoeffs.iter().map(|c| c.coeff(i)).collect())
            })
            .collect()
    }

    /// The shear `f(x + s*y, y)`.
    pub fn shear(&self, s: i64) -> Self {
        if self.is_zero() {
            return IntPoly2::zero();
        }
        // Horner in x over the ring Z[x, y], substituting x -> x + s*y
        let sub = IntPoly2::new(vec![
            IntPoly::monomial(BigInt::one(), 1),
            IntPoly::constant(BigInt::from(s)),
        ]);
        let xs = self.xcoeffs();
        let mut acc = IntPoly2::zero();
        for ci in xs.iter().rev() {
            // ci is a polynomial in y
            let ci2 = IntPoly2::new(
                ci.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect(),
            );
            acc = acc.mul(&sub).add(&ci2);
        }
        acc
    }

    /// Inverse shear `f(x - s*y, y)`.
    pub fn unshear(&self, s: i64) -> Self {
        self.shear(-s)
    }

    /// Content with respect to `x`: the gcd (in `Z[x]`) of all `y`
    /// coefficients.  Includes the integer content.
    pub fn content_x(&self) -> IntPoly {
        let mut g = IntPoly::zero();
        for c in &self.ycoeffs {
            g = g.gcd(c);
            if g == IntPoly::one() {
                break;
            }
        }
        g
    }

    /// Divides out an exact `Z[x]` factor of every `y` coefficient.
    pub fn exact_div_x(&self, d: &IntPoly) -> Option<Self> {
        let mut v = Vec::with_capacity(self.ycoeffs.len());
        for c in &self.ycoeffs {
            v.push(c.exact_div(d)?);
        }
        Some(IntPoly2::new(v))
    }

    pub fn primitive_part_x(&self) -> Self {
        if self.is_zero() {
            return IntPoly2::zero();
        }
        let c = self.content_x();
        self.exact_div_x(&c).expect("content must divide")
    }

    /// Pseudo-remainder with respect to `y`.
    pub fn pseudo_rem_y(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "pseudo-remainder by zero");
        if self.ycoeffs.len() < d.ycoeffs.len() {
            return self.clone();
        }
        let lead = d.leading_y();
        let steps = self.deg_y() - d.deg_y() + 1;
        let mut r = self.clone();
        for _ in 0..steps {
            if r.ycoeffs.len() < d.ycoeffs.len() {
                r = r.scale_x(&lead);
                continue;
            }
            let k = r.deg_y() - d.deg_y();
            let top = r.leading_y();
            let mut shifted = vec![IntPoly::zero(); k];
            shifted.extend(d.ycoeffs.iter().map(|c| c.mul(&top)));
            r = r.scale_x(&lead).sub(&IntPoly2::new(shifted));
        }
        r
    }

    /// Exact division in `Z[x][y]`; `None` when not divisible.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly2::zero());
        }
        if self.ycoeffs.len() < d.ycoeffs.len() {
            return None;
        }
        let lead = d.leading_y();
        let mut rem = self.clone();
        let qlen = self.ycoeffs.len() - d.ycoeffs.len() + 1;
        let mut q = vec![IntPoly::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = rem.ycoeff(i + d.deg_y());
            if top.is_zero() {
                continue;
            }
            let c = top.exact_div(&lead)?;
            let mut shifted = vec![IntPoly::zero(); i];
            shifted.extend(d.ycoeffs.iter().map(|dc| dc.mul(&c)));
            rem = rem.sub(&IntPoly2::new(shifted));
            q[i] = c;
        }
        if !rem.is_zero() {
            return None;
        }
        Some(IntPoly2::new(q))
    }

    /// Bivariate gcd (primitive pseudo-remainder sequence in `y` over the
    /// content/primitive split with respect to `x`).  Includes both the
    /// `Z[x]` content gcd and the integer content.
    pub fn gcd(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let cont = self.content_x().gcd(&rhs.content_x());
        let (mut a, mut b) = (self.primitive_part_x(), rhs.primitive_part_x());
        if a.deg_y() < b.deg_y() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.deg_y() == 0 {
                // a nonzero constant (in y) step ends the sequence
                a = IntPoly2::from_x(IntPoly::one());
                break;
            }
            let r = a.pseudo_rem_y(&b).primitive_part_x();
            a = b;
            b = r;
        }
        a.primitive_part_x().scale_x(&cont)
    }

    /// Resultant with respect to `y`: a polynomial in `x`.  Rows of `self`
    /// come first in the underlying Sylvester matrix.
    pub fn resultant_y(&self, rhs: &Self) -> IntPoly {
        let (p, q) = (self.deg_y(), rhs.deg_y());
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        if p == 0 && q == 0 {
            return IntPoly::one();
        }
        if p == 0 {
            return pow_poly(&self.ycoeff(0), q);
        }
        if q == 0 {
            return pow_poly(&rhs.ycoeff(0), p);
        }
        let n = p + q;
        let mut m = vec![vec![IntPoly::zero(); n]; n];
        for r in 0..q {
            for i in 0..=p {
                m[r][r + i] = self.ycoeff(p - i);
            }
        }
        for r in 0..p {
            for i in 0..=q {
                m[q + r][r + i] = rhs.ycoeff(q - i);
            }
        }
        bareiss_det_poly(m)
    }

    /// Subresultant sequence with cofactors: entry `j` holds
    /// `sres_j = u_j * self + v_j * rhs` exactly over the integers, where
    /// `sres_j` has degree at most `j` in `y`.  Requires
    /// `deg_y self >= deg_y rhs >= 1`; indices run `j = 0 .. deg_y rhs - 1`.
    pub fn subresultants(&self, rhs: &Self) -> Vec<Subresultant> {
        let (p, q) = (self.deg_y(), rhs.deg_y());
        assert!(p >= q && q >= 1, "subresultants need deg f >= deg g >= 1");
        (0..q).map(|j| self.subresultant_j(rhs, j)).collect()
    }

    fn subresultant_j(&self, rhs: &Self, j: usize) -> Subresultant {
        let (p, q) = (self.deg_y(), rhs.deg_y());
        let rows = p + q - 2 * j;
        let vcols = p + q - j; // value columns: powers y^(p+q-j-1) .. y^0
        let ucols = q - j;
        let cols = vcols + ucols + (p - j);
        let mut m = vec![vec![IntPoly::zero(); cols]; rows];
        for r in 0..q - j {
            let k = q - j - 1 - r; // this row is y^k * f
            for t in 0..=p {
                // coefficient of y^(t+k) lands in the column of power t+k
                m[r][vcols - 1 - (t + k)] = self.ycoeff(t);
            }
            m[r][vcols + k] = IntPoly::one(); // u tag: y^k
        }
        for r in 0..p - j {
            let k = p - j - 1 - r; // y^k * g
            for t in 0..=q {
                m[q - j + r][vcols - 1 - (t + k)] = rhs.ycoeff(t);
            }
            m[q - j + r][vcols + ucols + k] = IntPoly::one(); // v tag: y^k
        }
        // fraction-free elimination of the first rows-1 columns; afterwards
        // the last row holds, column by column, the bordered minors that make
        // up the subresultant and its cofactors
        let pivots = rows - 1;
        let mut sign = 1i32;
        let mut prev = IntPoly::one();
        for k in 0..pivots {
            if m[k][k].is_zero() {
                let Some(pr) = (k + 1..rows).find(|&r| !m[r][k].is_zero()) else {
                    // the pivot columns are rank-deficient: every bordered
                    // minor vanishes, so this subresultant is zero
                    return Subresultant {
                        sres: IntPoly2::zero(),
                        u: IntPoly2::zero(),
                        v: IntPoly2::zero(),
                    };
                };
                m.swap(k, pr);
                sign = -sign;
            }
            for i in k + 1..rows {
                for c in k + 1..cols {
                    let t = m[i][c].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][c]));
                    m[i][c] = t.exact_div(&prev).expect("fraction-free step divides");
                }
                m[i][k] = IntPoly::zero();
            }
            prev = m[k][k].clone();
        }
        let last = &m[rows - 1];
        let fix = |p: &IntPoly| if sign < 0 { p.neg() } else { p.clone() };
        // value columns with powers y^j .. y^0 sit at vcols-1-j .. vcols-1
        let sres = IntPoly2::new(
            (0..=j).map(|t| fix(&last[vcols - 1 - t])).collect(),
        );
        let u = IntPoly2::new((0..ucols).map(|k| fix(&last[vcols + k])).collect());
        let v = IntPoly2::new(
            (0..p - j).map(|k| fix(&last[vcols + ucols + k])).collect(),
        );
        Subresultant { sres, u, v }
    }

    /// Principal subresultant coefficients `sr_i` of `(self, rhs)` for
    /// `i = 0 .. deg_y rhs`, with `sr_q = lc_y(rhs)` by convention.
    pub fn principal_subresultant_coeffs(&self, rhs: &Self) -> Vec<IntPoly> {
        let q = rhs.deg_y();
        let mut out: Vec<IntPoly> = self
            .subresultants(rhs)
            .iter()
            .enumerate()
            .map(|(j, s)| s.sres.ycoeff(j))
            .collect();
        out.push(rhs.leading_y());
        debug_assert_eq!(out.len(), q + 1);
        out
    }
}

/// One entry of the subresultant sequence together with its exact cofactors:
/// `u * f + v * g = sres`.
#[derive(Clone, Debug)]
pub struct Subresultant {
    pub sres: IntPoly2,
    pub u: IntPoly2,
    pub v: IntPoly2,
}

fn pow_poly(p: &IntPoly, k: usize) -> IntPoly {
    let mut r = IntPoly::one();
    for _ in 0..k {
        r = r.mul(p);
    }
    r
}

/// Fraction-free determinant over `Z[x]` with row pivoting.
fn bareiss_det_poly(mut m: Vec<Vec<IntPoly>>) -> IntPoly {
    let n = m.len();
    if n == 0 {
        return IntPoly::one();
    }
    let mut sign = 1i32;
    let mut prev = IntPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return IntPoly::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.exact_div(&prev).expect("fraction-free step divides");
            }
            m[i][k] = IntPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        d.neg()
    } else {
        d
    }
}

impl fmt::Debug for IntPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.ycoeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?})*y")?,
                _ => write!(f, "({c:?})*y^{j}")?,
            }
        }
        Ok(())
    }
}
