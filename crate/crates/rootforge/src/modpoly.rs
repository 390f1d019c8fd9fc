//! Univariate polynomial arithmetic over `Z/p` for word-sized primes:
//! reduction of integer polynomials, monic gcd, and exact division (a
//! non-exact division is the signal that the chosen prime is bad for the
//! current computation and must be retried).

use crate::intpoly::IntPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Fixed table of word-sized primes, consumed in order so runs are
/// deterministic.
pub const PRIME_TABLE: &[u64] = &[
    998244353,
    1000000007,
    1000000009,
    999999937,
    1004535809,
    1224736769,
    2013265921,
    2147483647,
    2113929217,
    167772161,
    469762049,
    754974721,
    2281701377,
    3221225473,
    3489660929,
    2305843009213693951,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BadPrime;

fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

fn invm(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

/// A polynomial over `Z/p`, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    coeffs: Vec<u64>,
    p: u64,
}

impl ModPoly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in &mut coeffs {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { coeffs, p }
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { coeffs: vec![], p }
    }

    pub fn one(p: u64) -> Self {
        ModPoly { coeffs: vec![1], p }
    }

    /// Reduces an integer polynomial mod `p`.
    pub fn reduce(f: &IntPoly, p: u64) -> Self {
        let bp = BigInt::from(p);
        ModPoly::new(
            f.coeffs()
                .iter()
                .map(|c| c.mod_floor(&bp).to_u64().expect("residue fits"))
                .collect(),
            p,
        )
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ModPoly::new(
            (0..n).map(|i| addm(self.coeff(i), rhs.coeff(i), self.p)).collect(),
            self.p,
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ModPoly::new(
            (0..n).map(|i| subm(self.coeff(i), rhs.coeff(i), self.p)).collect(),
            self.p,
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p);
        if self.is_zero() || rhs.is_zero() {
            return ModPoly::zero(self.p);
        }
        let mut v = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = addm(v[i + j], mulm(a, b, self.p), self.p);
            }
        }
        ModPoly::new(v, self.p)
    }

    pub fn scale(&self, c: u64) -> Self {
        ModPoly::new(self.coeffs.iter().map(|&x| mulm(x, c, self.p)).collect(), self.p)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return ModPoly::zero(self.p);
        }
        ModPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| mulm(c, (i as u64 + 1) % self.p, self.p))
                .collect(),
            self.p,
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = addm(mulm(acc, x, self.p), c, self.p);
        }
        acc
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invm(self.leading(), self.p))
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert_eq!(self.p, d.p);
        assert!(!d.is_zero(), "mod division by zero");
        if self.coeffs.len() < d.coeffs.len() {
            return (ModPoly::zero(self.p), self.clone());
        }
        let p = self.p;
        let inv_lead = invm(d.leading(), p);
        let mut rem = self.coeffs.clone();
        let dn = d.coeffs.len();
        let qlen = rem.len() - dn + 1;
        let mut q = vec![0u64; qlen];
        for i in (0..qlen).rev() {
            let top = rem[i + dn - 1];
            if top == 0 {
                continue;
            }
            let c = mulm(top, inv_lead, p);
            q[i] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = subm(rem[i + j], mulm(c, dc, p), p);
            }
        }
        (ModPoly::new(q, p), ModPoly::new(rem, p))
    }

    /// Exact division; a nonzero remainder reports `BadPrime`.
    pub fn exact_div(&self, d: &Self) -> Result<Self, BadPrime> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(BadPrime)
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}
