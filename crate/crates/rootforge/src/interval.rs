//! Interval arithmetic over dyadic endpoints, complex dyadic points,
//! complex rectangles and disks.  All interval operations are either exact
//! or outward-rounded onto an explicit grid `2^-rho`, so every enclosure is
//! certified by construction.

use crate::dyadic::{Dyadic, Rounding};
use std::fmt;

/// A closed real interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "inverted interval");
        DyadicInterval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        DyadicInterval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        DyadicInterval::point(Dyadic::zero())
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.sign() <= 0 && self.hi.sign() >= 0
    }

    /// Sign of every element, if determined: `1` if `lo > 0`, `-1` if
    /// `hi < 0`, `None` if the interval straddles or touches zero.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.sign() > 0 {
            Some(1)
        } else if self.hi.sign() < 0 {
            Some(-1)
        } else {
            None
        }
    }

    /// Rounds endpoints outward onto the grid `2^-rho`.
    pub fn outward(&self, rho: i64) -> Self {
        DyadicInterval {
            lo: self.lo.round(rho, Rounding::Down),
            hi: self.hi.round(rho, Rounding::Up),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        DyadicInterval { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        DyadicInterval { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }

    pub fn neg(&self) -> Self {
        DyadicInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let cands = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        DyadicInterval { lo, hi }
    }

    pub fn mul_r(&self, rhs: &Self, rho: i64) -> Self {
        self.mul(rhs).outward(rho)
    }

    pub fn add_r(&self, rhs: &Self, rho: i64) -> Self {
        self.add(rhs).outward(rho)
    }

    pub fn scale(&self, c: &Dyadic) -> Self {
        if c.sign() >= 0 {
            DyadicInterval { lo: &self.lo * c, hi: &self.hi * c }
        } else {
            DyadicInterval { lo: &self.hi * c, hi: &self.lo * c }
        }
    }

    /// Interval of absolute values.
    pub fn abs(&self) -> Self {
        if self.lo.sign() >= 0 {
            self.clone()
        } else if self.hi.sign() <= 0 {
            self.neg()
        } else {
            DyadicInterval {
                lo: Dyadic::zero(),
                hi: Dyadic::max(&self.lo.abs(), &self.hi),
            }
        }
    }

    /// Interval of squares.
    pub fn square(&self) -> Self {
        let a = self.abs();
        DyadicInterval { lo: &a.lo * &a.lo, hi: &a.hi * &a.hi }
    }

    /// Outward enclosure of the square root on the grid `2^-rho`.
    /// Negative lower endpoints are clamped to zero.
    pub fn sqrt_outward(&self, rho: i64) -> Self {
        assert!(self.hi.sign() >= 0, "sqrt of negative interval");
        let lo = if self.lo.sign() <= 0 {
            Dyadic::zero()
        } else {
            self.lo.sqrt_lower(rho)
        };
        DyadicInterval { lo, hi: self.hi.sqrt_upper(rho) }
    }

    pub fn hull(&self, rhs: &Self) -> Self {
        DyadicInterval {
            lo: Dyadic::min(&self.lo, &rhs.lo),
            hi: Dyadic::max(&self.hi, &rhs.hi),
        }
    }

    pub fn intersects(&self, rhs: &Self) -> bool {
        self.lo <= rhs.hi && rhs.lo <= self.hi
    }

    pub fn mid(&self) -> Dyadic {
        (&self.lo + &self.hi).mul_pow2(-1)
    }
}

/// An exact complex dyadic point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexDyadic {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl ComplexDyadic {
    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        ComplexDyadic { re, im }
    }

    pub fn zero() -> Self {
        ComplexDyadic { re: Dyadic::zero(), im: Dyadic::zero() }
    }

    pub fn real(re: Dyadic) -> Self {
        ComplexDyadic { re, im: Dyadic::zero() }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        ComplexDyadic { re: Dyadic::from_f64(re), im: Dyadic::from_f64(im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        ComplexDyadic { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        ComplexDyadic { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }

    pub fn neg(&self) -> Self {
        ComplexDyadic { re: -&self.re, im: -&self.im }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        ComplexDyadic {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexDyadic { re: self.re.clone(), im: -&self.im }
    }

    pub fn scale(&self, c: &Dyadic) -> Self {
        ComplexDyadic { re: &self.re * c, im: &self.im * c }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        ComplexDyadic { re: self.re.mul_pow2(k), im: self.im.mul_pow2(k) }
    }

    /// Exact `|z|^2`.
    pub fn norm_sq(&self) -> Dyadic {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    /// Dyadic upper bound on `|z|`, on the grid `2^-rho`.
    pub fn modulus_upper(&self, rho: i64) -> Dyadic {
        self.norm_sq().sqrt_upper(rho)
    }

    /// Dyadic lower bound on `|z|`, on the grid `2^-rho`.
    pub fn modulus_lower(&self, rho: i64) -> Dyadic {
        self.norm_sq().sqrt_lower(rho)
    }

    /// Rounds both parts to the grid `2^-rho` (nearest).
    pub fn round_nearest(&self, rho: i64) -> Self {
        ComplexDyadic {
            re: self.re.round(rho, Rounding::Nearest),
            im: self.im.round(rho, Rounding::Nearest),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for ComplexDyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

/// A complex rectangle: a product of two real intervals.
#[derive(Clone, Debug)]
pub struct ComplexInterval {
    pub re: DyadicInterval,
    pub im: DyadicInterval,
}

impl ComplexInterval {
    pub fn point(z: &ComplexDyadic) -> Self {
        ComplexInterval {
            re: DyadicInterval::point(z.re.clone()),
            im: DyadicInterval::point(z.im.clone()),
        }
    }

    pub fn new(re: DyadicInterval, im: DyadicInterval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        ComplexInterval { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        ComplexInterval { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        ComplexInterval {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn outward(&self, rho: i64) -> Self {
        ComplexInterval { re: self.re.outward(rho), im: self.im.outward(rho) }
    }

    pub fn mul_r(&self, rhs: &Self, rho: i64) -> Self {
        self.mul(rhs).outward(rho)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Enclosure of `|z|^2` over the rectangle.
    pub fn norm_sq(&self) -> DyadicInterval {
        self.re.square().add(&self.im.square())
    }

    /// Enclosure of `|z|` over the rectangle, on the grid `2^-rho`.
    pub fn modulus(&self, rho: i64) -> DyadicInterval {
        self.norm_sq().sqrt_outward(rho)
    }
}

/// A closed complex disk.
#[derive(Clone, Debug)]
pub struct ComplexDisk {
    pub center: ComplexDyadic,
    pub radius: Dyadic,
}

impl ComplexDisk {
    pub fn new(center: ComplexDyadic, radius: Dyadic) -> Self {
        assert!(radius.sign() >= 0, "negative disk radius");
        ComplexDisk { center, radius }
    }

    /// Exact membership test `|z - c| <= r`.
    pub fn contains(&self, z: &ComplexDyadic) -> bool {
        z.sub(&self.center).norm_sq() <= &self.radius * &self.radius
    }

    /// Exact disjointness test `|c1 - c2| > r1 + r2`.
    pub fn disjoint(&self, other: &ComplexDisk) -> bool {
        let d2 = self.center.sub(&other.center).norm_sq();
        let s = &self.radius + &other.radius;
        d2 > &s * &s
    }

    /// Whether the disk meets the real axis.
    pub fn meets_real_axis(&self) -> bool {
        self.center.im.abs() <= self.radius
    }

    /// The projection onto the real axis (meaningful for disks flagged as
    /// holding a real root): `[Re c - r, Re c + r]`.
    pub fn real_interval(&self) -> DyadicInterval {
        DyadicInterval::new(
            &self.center.re - &self.radius,
            &self.center.re + &self.radius,
        )
    }
}

/// Horner evaluation of a polynomial with complex dyadic coefficients over a
/// complex rectangle, with outward rounding at grid `2^-rho` after each step.
/// `coeffs[i]` is the coefficient of `x^i`.
pub fn eval_interval(coeffs: &[ComplexDyadic], at: &ComplexInterval, rho: i64) -> ComplexInterval {
    let mut acc = ComplexInterval::point(&ComplexDyadic::zero());
    for c in coeffs.iter().rev() {
        acc = acc
            .mul(at)
            .add(&ComplexInterval::point(c))
            .outward(rho);
    }
    acc
}

/// Accumulates an outward-rounded product of real intervals (used for the
/// certified modulus products in root certification).
pub fn product_accumulate(factors: &[DyadicInterval], rho: i64) -> DyadicInterval {
    let mut acc = DyadicInterval::point(Dyadic::one());
    for f in factors {
        acc = acc.mul_r(f, rho);
    }
    acc
}
