//! Exact arithmetic in the real quadratic field Q(sqrt(d)).
//!
//! Values `a + b*sqrt(d)` with rational `a, b` support exact sign
//! determination, which is what makes tie-breaking in lattice queries
//! decidable without any precision cap.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadRat {
    pub a: BigRational,
    pub b: BigRational,
    pub d: u64,
}

impl QuadRat {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        QuadRat { a, b, d }
    }

    pub fn from_rational(a: BigRational, d: u64) -> Self {
        QuadRat { a, b: BigRational::zero(), d }
    }

    pub fn zero(d: u64) -> Self {
        Self::from_rational(BigRational::zero(), d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.d, rhs.d);
        QuadRat::new(&self.a + &rhs.a, &self.b + &rhs.b, self.d)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.d, rhs.d);
        QuadRat::new(&self.a - &rhs.a, &self.b - &rhs.b, self.d)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.d, rhs.d);
        let d = BigRational::from_integer(self.d.into());
        QuadRat::new(
            &self.a * &rhs.a + &self.b * &rhs.b * d,
            &self.a * &rhs.b + &self.b * &rhs.a,
            self.d,
        )
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Exact sign of `a + b*sqrt(d)`.
    pub fn signum(&self) -> i8 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Opposite signs: compare a^2 against b^2*d.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.into());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn cmp(&self, rhs: &Self) -> Ordering {
        match self.sub(rhs).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.cmp(&QuadRat::from_rational(r.clone(), self.d))
    }
}

fn rat_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}
