//! Certified real and complex (rectangular) interval arithmetic over dyadic
//! endpoints. Every operation returns an interval that encloses the exact
//! result of applying it to any points of the inputs; `prec` arguments bound
//! the mantissa size after outward rounding.

use crate::dyadic::{div_dir, rational_dir, sqrt_dir, Dyadic};
use num_rational::BigRational;
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl RealInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "inverted interval");
        RealInterval { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        RealInterval { lo: d.clone(), hi: d }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Self::point(Dyadic::from_int(v))
    }

    pub fn from_rational(r: &BigRational, prec: u64) -> Self {
        RealInterval {
            lo: rational_dir(r, prec, true),
            hi: rational_dir(r, prec, false),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn round_out(&self, prec: u64) -> Self {
        RealInterval {
            lo: self.lo.round(prec, true),
            hi: self.hi.round(prec, false),
        }
    }

    pub fn neg(&self) -> Self {
        RealInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RealInterval { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
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
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        RealInterval { lo, hi }
    }

    pub fn scale(&self, d: &Dyadic) -> Self {
        if d.signum() >= 0 {
            RealInterval { lo: &self.lo * d, hi: &self.hi * d }
        } else {
            RealInterval { lo: &self.hi * d, hi: &self.lo * d }
        }
    }

    /// Tight square: the result is `>= 0` even when the interval spans zero.
    pub fn square(&self) -> Self {
        if self.lo.signum() >= 0 {
            RealInterval { lo: &self.lo * &self.lo, hi: &self.hi * &self.hi }
        } else if self.hi.signum() <= 0 {
            RealInterval { lo: &self.hi * &self.hi, hi: &self.lo * &self.lo }
        } else {
            let a = &self.lo * &self.lo;
            let b = &self.hi * &self.hi;
            RealInterval { lo: Dyadic::zero(), hi: a.max(b) }
        }
    }

    /// Square root; negative lower endpoints are clamped to zero, which is
    /// sound when the enclosed value is known to be nonnegative.
    pub fn sqrt(&self, prec: u64) -> Self {
        let lo = if self.lo.signum() <= 0 {
            Dyadic::zero()
        } else {
            sqrt_dir(&self.lo, prec, true)
        };
        assert!(self.hi.signum() >= 0, "sqrt of a negative interval");
        let hi = sqrt_dir(&self.hi, prec, false);
        RealInterval { lo, hi }
    }

    pub fn abs(&self) -> Self {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            RealInterval {
                lo: Dyadic::zero(),
                hi: self.lo.abs().max(self.hi.abs()),
            }
        }
    }

    pub fn recip(&self, prec: u64) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        let one = Dyadic::one();
        Some(RealInterval {
            lo: div_dir(&one, &self.hi, prec, true),
            hi: div_dir(&one, &self.lo, prec, false),
        })
    }

    pub fn div(&self, rhs: &Self, prec: u64) -> Option<Self> {
        Some(self.mul(&rhs.recip(prec)?).round_out(prec))
    }

    /// Divide by a positive integer with directed rounding.
    pub fn div_nat(&self, n: &num_bigint::BigUint, prec: u64) -> Self {
        let d = Dyadic::from_bigint(&n.clone().into());
        RealInterval {
            lo: div_dir(&self.lo, &d, prec, true),
            hi: div_dir(&self.hi, &d, prec, false),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        self.lo <= *d && *d <= self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !(self.hi < other.lo || other.hi < self.lo)
    }

    /// Where the whole interval sits relative to a rational, if decided.
    pub fn cmp_rational(&self, r: &BigRational) -> Option<Ordering> {
        if self.hi.cmp_rational(r) == Ordering::Less {
            Some(Ordering::Less)
        } else if self.lo.cmp_rational(r) == Ordering::Greater {
            Some(Ordering::Greater)
        } else if self.lo.cmp_rational(r) == Ordering::Equal
            && self.hi.cmp_rational(r) == Ordering::Equal
        {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn cmp_interval(&self, other: &Self) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if other.hi < self.lo {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn max_with(&self, other: &Self) -> Self {
        RealInterval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn min_with(&self, other: &Self) -> Self {
        RealInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    /// Intersection, when nonempty. Sound for two enclosures of one value.
    pub fn meet(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo <= hi {
            Some(RealInterval { lo, hi })
        } else {
            None
        }
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl ComplexInterval {
    pub fn new(re: RealInterval, im: RealInterval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn point(re: Dyadic, im: Dyadic) -> Self {
        ComplexInterval {
            re: RealInterval::point(re),
            im: RealInterval::point(im),
        }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero(), Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::point(Dyadic::one(), Dyadic::zero())
    }

    /// Box of half-width `radius` around an f64 center; handy for selectors.
    pub fn from_f64_box(re: f64, im: f64, radius: f64) -> Self {
        let r = Dyadic::from_f64(radius).expect("finite radius");
        let cre = Dyadic::from_f64(re).expect("finite re");
        let cim = Dyadic::from_f64(im).expect("finite im");
        ComplexInterval {
            re: RealInterval::new(&cre - &r, &cre + &r),
            im: RealInterval::new(&cim - &r, &cim + &r),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        ComplexInterval { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        ComplexInterval { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    pub fn neg(&self) -> Self {
        ComplexInterval { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        ComplexInterval { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, rhs: &Self, prec: u64) -> Self {
        let re = self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im));
        let im = self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re));
        ComplexInterval { re, im }.round_out(prec)
    }

    pub fn abs_sq(&self) -> RealInterval {
        self.re.square().add(&self.im.square())
    }

    pub fn abs(&self, prec: u64) -> RealInterval {
        self.abs_sq().sqrt(prec).round_out(prec)
    }

    pub fn recip(&self, prec: u64) -> Option<Self> {
        let den = self.abs_sq();
        let inv = den.recip(prec)?;
        Some(ComplexInterval {
            re: self.re.mul(&inv),
            im: self.im.neg().mul(&inv),
        }
        .round_out(prec))
    }

    pub fn div(&self, rhs: &Self, prec: u64) -> Option<Self> {
        Some(self.mul(&rhs.recip(prec)?, prec))
    }

    pub fn div_nat(&self, n: &num_bigint::BigUint, prec: u64) -> Self {
        ComplexInterval {
            re: self.re.div_nat(n, prec),
            im: self.im.div_nat(n, prec),
        }
    }

    pub fn scale(&self, d: &Dyadic) -> Self {
        ComplexInterval { re: self.re.scale(d), im: self.im.scale(d) }
    }

    pub fn round_out(&self, prec: u64) -> Self {
        ComplexInterval {
            re: self.re.round_out(prec),
            im: self.im.round_out(prec),
        }
    }

    pub fn width(&self) -> Dyadic {
        self.re.width().max(self.im.width())
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        !self.intersects(other)
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.re.contains_interval(&other.re) && self.im.contains_interval(&other.im)
    }

    pub fn midpoint_f64(&self) -> (f64, f64) {
        (self.re.midpoint_f64(), self.im.midpoint_f64())
    }

    pub fn meet(&self, other: &Self) -> Option<Self> {
        Some(ComplexInterval {
            re: self.re.meet(&other.re)?,
            im: self.im.meet(&other.im)?,
        })
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}
