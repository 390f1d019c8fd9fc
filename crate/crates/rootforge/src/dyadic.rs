//! Exact dyadic (binary rational) arithmetic: numbers of the form `m * 2^e`
//! with arbitrary-precision mantissa.  Addition and multiplication are exact;
//! precision is controlled explicitly through directed rounding to a grid
//! `2^-rho`, which is what the interval layer builds on.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Rounding direction for grid rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
    /// To nearest grid point, ties away from zero.
    Nearest,
}

/// An exact dyadic number `m * 2^e`, kept canonical: `m` is odd, or `m = 0`
/// and `e = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    pub fn new(m: BigInt, e: i64) -> Self {
        let mut d = Dyadic { m, e };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.m.is_zero() {
            self.e = 0;
            return;
        }
        let tz = self.m.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.m >>= tz;
            self.e += tz as i64;
        }
    }

    pub fn zero() -> Self {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    pub fn one() -> Self {
        Dyadic { m: BigInt::one(), e: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { m: BigInt::one(), e }
    }

    /// Exact conversion from a finite `f64`.  Panics on NaN/infinity.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "dyadic from non-finite f64");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), exp - 1075)
        };
        Dyadic::new(BigInt::from(sign * mant as i64), e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn sign(&self) -> i32 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { m: self.m.abs(), e: self.e }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.m.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { m: self.m.clone(), e: self.e + k }
    }

    /// Number of significant bits of the mantissa (0 for zero).
    pub fn mantissa_bits(&self) -> u64 {
        self.m.bits()
    }

    /// Largest `t` with `2^t <= |x|`.  Panics on zero.
    pub fn floor_log2(&self) -> i64 {
        assert!(!self.is_zero(), "floor_log2 of zero");
        (self.m.bits() as i64 - 1) + self.e
    }

    /// Smallest `t` with `|x| <= 2^t`.  Panics on zero.
    pub fn ceil_log2(&self) -> i64 {
        let f = self.floor_log2();
        // canonical mantissa is odd, so |x| is a power of two iff |m| = 1
        if self.m.magnitude().is_one() {
            f
        } else {
            f + 1
        }
    }

    /// Rounds onto the grid `2^-rho` in the given direction.  The result `r`
    /// satisfies `|r - x| <= 2^-rho`, with equality direction per the mode.
    pub fn round(&self, rho: i64, mode: Rounding) -> Self {
        if self.is_zero() || self.e >= -rho {
            return self.clone();
        }
        let shift = (-rho - self.e) as u64;
        let q = &self.m >> shift;
        let r: BigInt = &self.m - (&q << shift);
        if r.is_zero() {
            return Dyadic::new(q, -rho);
        }
        // q is the floor; r > 0 since BigInt shr is floor division? No: BigInt
        // shr truncates toward negative infinity for num-bigint (arithmetic
        // shift), so q is the floor and 0 < r < 2^shift.
        debug_assert!(r.sign() == Sign::Plus);
        let bump = match mode {
            Rounding::Down => false,
            Rounding::Up => true,
            Rounding::Nearest => &r << 1u32 >= BigInt::one() << shift,
        };
        let q = if bump { q + 1 } else { q };
        Dyadic::new(q, -rho)
    }

    /// Rounds to at most `bits` significant mantissa bits (nearest).
    pub fn round_significant(&self, bits: u64, mode: Rounding) -> Self {
        if self.is_zero() || self.m.bits() <= bits {
            return self.clone();
        }
        let rho = (bits as i64 - 1) - self.floor_log2();
        self.round(rho, mode)
    }

    /// Approximate quotient on the grid `2^-rho`, rounded per `mode`.
    /// Panics if `b` is zero.
    pub fn div(&self, b: &Dyadic, rho: i64, mode: Rounding) -> Self {
        assert!(!b.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // a/b * 2^rho = a.m * 2^(a.e - b.e + rho) / b.m
        let shift = self.e - b.e + rho;
        let (mut num, mut den) = (self.m.clone(), b.m.clone());
        if shift >= 0 {
            num <<= shift as u64;
        } else {
            den <<= (-shift) as u64;
        }
        if den.sign() == Sign::Minus {
            num = -num;
            den = -den;
        }
        let (q, r) = num.div_mod_floor(&den);
        if r.is_zero() {
            return Dyadic::new(q, -rho);
        }
        let bump = match mode {
            Rounding::Down => false,
            Rounding::Up => true,
            Rounding::Nearest => &r << 1u32 >= den,
        };
        Dyadic::new(if bump { q + 1 } else { q }, -rho)
    }

    /// Largest grid point `r` on `2^-rho` with `r^2 <= x`.  Requires `x >= 0`.
    pub fn sqrt_lower(&self, rho: i64) -> Self {
        assert!(self.sign() >= 0, "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // floor(sqrt(x) * 2^rho) = isqrt(floor(x * 2^(2 rho)))
        let n = self.round(2 * rho, Rounding::Down);
        let scaled: BigInt = if n.e + 2 * rho >= 0 {
            &n.m << ((n.e + 2 * rho) as u64)
        } else {
            &n.m >> ((-(n.e + 2 * rho)) as u64)
        };
        Dyadic::new(scaled.sqrt(), -rho)
    }

    /// Smallest grid point `r` on `2^-rho` with `x <= r^2`.  Requires `x >= 0`.
    pub fn sqrt_upper(&self, rho: i64) -> Self {
        assert!(self.sign() >= 0, "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let n = self.round(2 * rho, Rounding::Up);
        let scaled: BigInt = if n.e + 2 * rho >= 0 {
            &n.m << ((n.e + 2 * rho) as u64)
        } else {
            &n.m >> ((-(n.e + 2 * rho)) as u64)
        };
        let s = scaled.sqrt();
        let r = if &s * &s >= scaled { s } else { s + 1 };
        Dyadic::new(r, -rho)
    }

    pub fn min(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a <= b { a.clone() } else { b.clone() }
    }

    pub fn max(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a >= b { a.clone() } else { b.clone() }
    }

    /// Lossy conversion to `f64` (rounded, may overflow to infinity).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.m.bits();
        let (mant, extra) = if bits > 53 {
            let sh = bits - 53;
            ((&self.m >> sh).to_f64().unwrap(), sh as i64)
        } else {
            (self.m.to_f64().unwrap(), 0)
        };
        let exp = self.e + extra;
        if exp > i32::MAX as i64 {
            return if mant > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if exp < i32::MIN as i64 {
            return 0.0;
        }
        mant * (exp as f64).exp2()
    }

    /// Exact integer power.
    pub fn pow(&self, k: u32) -> Self {
        let mut r = Dyadic::one();
        for _ in 0..k {
            r = &r * self;
        }
        r
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.sign(), other.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // align exponents and compare mantissas
        let e = self.e.min(other.e);
        let ma = &self.m << ((self.e - e) as u64);
        let mb = &other.m << ((other.e - e) as u64);
        ma.cmp(&mb)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.e.min(rhs.e);
        let ma = &self.m << ((self.e - e) as u64);
        let mb = &rhs.m << ((rhs.e - e) as u64);
        Dyadic::new(ma + mb, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // product of odd mantissas is odd: already canonical
        Dyadic { m: &self.m * &rhs.m, e: self.e + rhs.e }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { m: -&self.m, e: self.e }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.m, self.e)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{} (~{})", self.m, self.e, self.to_f64())
    }
}
