//! Dyadic rationals `m * 2^e` with exact arithmetic and directed rounding.
//!
//! All certified interval endpoints in this crate are dyadic, so interval
//! arithmetic never accumulates hidden rounding: addition and multiplication
//! are exact, and precision is controlled explicitly by rounding endpoints
//! outward to a requested number of mantissa bits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// Floor division that is correct for negative numerators.
pub(crate) fn shr_floor(m: &BigInt, k: u64) -> BigInt {
    // num-bigint's `>>` rounds toward negative infinity, which is what
    // floor rounding needs.
    m >> k
}

pub(crate) fn shr_ceil(m: &BigInt, k: u64) -> BigInt {
    -((-m) >> k)
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.mant.trailing_zeros() {
            if tz > 0 {
                self.mant = &self.mant >> tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn half() -> Self {
        Dyadic { mant: BigInt::one(), exp: -1 }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Dyadic::new(v.clone(), 0)
    }

    /// Exact conversion; every finite f64 is a dyadic rational.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        Some(Dyadic::new(BigInt::from(sign) * BigInt::from(mant), exp))
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i8 {
        if self.mant.is_zero() {
            0
        } else if self.mant.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.mant.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Round to at most `prec` mantissa bits, toward -inf or +inf.
    pub fn round(&self, prec: u64, floor: bool) -> Self {
        let bits = self.mant.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        let mant = if floor {
            shr_floor(&self.mant, shift)
        } else {
            shr_ceil(&self.mant, shift)
        };
        Dyadic::new(mant, self.exp + shift as i64)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        // self = m*2^e; compare m*2^e*denom against numer.
        let (num, den) = (r.numer(), r.denom());
        let lhs;
        let rhs;
        if self.exp >= 0 {
            lhs = (&self.mant << self.exp as u64) * den;
            rhs = num.clone();
        } else {
            lhs = &self.mant * den;
            rhs = num << (-self.exp) as u64;
        }
        lhs.cmp(&rhs)
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        // Take the top 64 bits and track the shifted exponent.
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(64);
        let top = shr_floor(&self.mant, shift).to_f64().unwrap_or(f64::NAN);
        let e = self.exp.saturating_add(shift as i64);
        ldexp_f64(top, e)
    }

    /// Exact textual form `m*2^e`, used by the JSON artifacts.
    pub fn to_repr(&self) -> String {
        format!("{}*2^{}", self.mant, self.exp)
    }

    pub fn parse_repr(s: &str) -> Option<Self> {
        let (m, e) = s.split_once("*2^")?;
        let mant: BigInt = m.parse().ok()?;
        let exp: i64 = e.parse().ok()?;
        Some(Dyadic::new(mant, exp))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self - other;
        match d.signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.mant.is_zero() {
            return rhs.clone();
        }
        if rhs.mant.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
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
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Multiply by 2^e in steps so intermediates never overflow prematurely.
fn ldexp_f64(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 500 {
        x *= 2f64.powi(500);
        e -= 500;
        if !x.is_finite() {
            return x;
        }
    }
    while e < -500 {
        x *= 2f64.powi(-500);
        e += 500;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Directed division `num/den` with roughly `prec` significant bits.
///
/// The result is `<=` the true quotient for `floor`, `>=` for ceiling.
pub(crate) fn div_dir(num: &Dyadic, den: &Dyadic, prec: u64, floor: bool) -> Dyadic {
    assert!(!den.is_zero(), "division by zero dyadic");
    if num.is_zero() {
        return Dyadic::zero();
    }
    let nb = num.mant.bits() as i64;
    let db = den.mant.bits() as i64;
    let shift = (prec as i64 + db - nb + 2).max(0) as u64;
    let n = &num.mant << shift;
    let q = if floor {
        num_integer::Integer::div_floor(&n, &den.mant)
    } else {
        -num_integer::Integer::div_floor(&(-n), &den.mant)
    };
    Dyadic::new(q, num.exp - den.exp - shift as i64)
}

/// Directed conversion of a rational to a dyadic with ~`prec` bits.
pub(crate) fn rational_dir(r: &BigRational, prec: u64, floor: bool) -> Dyadic {
    div_dir(
        &Dyadic::from_bigint(r.numer()),
        &Dyadic::from_bigint(r.denom()),
        prec,
        floor,
    )
}

/// Directed square root of a nonnegative dyadic with ~`prec` bits.
pub(crate) fn sqrt_dir(d: &Dyadic, prec: u64, floor: bool) -> Dyadic {
    assert!(d.signum() >= 0, "sqrt of negative dyadic");
    if d.is_zero() {
        return Dyadic::zero();
    }
    let bits = d.mant.bits() as i64;
    // Scale so the shifted mantissa has ~2*prec bits and an even exponent.
    let mut shift = (2 * prec as i64 - bits).max(0);
    if (d.exp - shift) % 2 != 0 {
        shift += 1;
    }
    let scaled = d.mant.clone() << shift as u64;
    let root = scaled.sqrt();
    let e = (d.exp - shift) / 2;
    if floor {
        Dyadic::new(root, e)
    } else {
        Dyadic::new(root + BigInt::one(), e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bigint_shr_is_floor() {
        // the rounding directions rely on >> flooring for negatives
        assert_eq!(shr_floor(&BigInt::from(-5), 1), BigInt::from(-3));
        assert_eq!(shr_floor(&BigInt::from(-1), 1), BigInt::from(-1));
        assert_eq!(shr_floor(&BigInt::from(5), 1), BigInt::from(2));
        assert_eq!(shr_ceil(&BigInt::from(-5), 1), BigInt::from(-2));
        assert_eq!(shr_ceil(&BigInt::from(5), 1), BigInt::from(3));
    }

    #[test]
    fn arithmetic_and_order() {
        let a = Dyadic::from_int(3);
        let b = Dyadic::new(BigInt::from(5), -2); // 1.25
        assert_eq!((&a + &b).to_rational(), BigRational::new(17.into(), 4.into()));
        assert_eq!((&a * &b).to_rational(), BigRational::new(15.into(), 4.into()));
        assert!(b < a);
        assert_eq!((&b - &b).signum(), 0);
    }

    #[test]
    fn rounding_is_directed() {
        let x = Dyadic::new(BigInt::from(0b101101101), 0);
        let lo = x.round(4, true);
        let hi = x.round(4, false);
        assert!(lo <= x && x <= hi);
        assert!(lo.bits() <= 4 && hi.bits() <= 5);

        let y = -&x;
        let lo = y.round(4, true);
        let hi = y.round(4, false);
        assert!(lo <= y && y <= hi);
    }

    #[test]
    fn division_brackets_quotient() {
        let n = Dyadic::from_int(1);
        let d = Dyadic::from_int(3);
        let lo = div_dir(&n, &d, 60, true);
        let hi = div_dir(&n, &d, 60, false);
        let third = BigRational::new(1.into(), 3.into());
        assert!(lo.cmp_rational(&third) != Ordering::Greater);
        assert!(hi.cmp_rational(&third) != Ordering::Less);
        let w = (&hi - &lo).to_f64();
        assert!(w < 1e-15);
    }

    #[test]
    fn sqrt_brackets_root() {
        let two = Dyadic::from_int(2);
        let lo = sqrt_dir(&two, 80, true);
        let hi = sqrt_dir(&two, 80, false);
        assert!((&lo * &lo).cmp_rational(&BigRational::from_integer(2.into())) != Ordering::Greater);
        assert!((&hi * &hi).cmp_rational(&BigRational::from_integer(2.into())) != Ordering::Less);
        assert!((&hi - &lo).to_f64() < 1e-20);
    }

    #[test]
    fn f64_round_trip_is_exact() {
        for v in [0.5, -3.25, std::f64::consts::SQRT_2, 0.0, 1e-300] {
            let d = Dyadic::from_f64(v).unwrap();
            assert_eq!(d.to_f64(), v);
        }
    }

    #[test]
    fn repr_round_trip() {
        let d = Dyadic::new(BigInt::from(-12345), -17);
        assert_eq!(Dyadic::parse_repr(&d.to_repr()).unwrap(), d);
    }
}
