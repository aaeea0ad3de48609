//! The five discrete Euclidean subrings of C spanning the plane and
//! containing 1: `Z[i]`, `Z[sqrt(2)i]`, and `Z[(1+sqrt(j)i)/2]` for j = 3, 7, 11.
//!
//! Every element is stored as an integer pair (a, b) over the basis {1, w},
//! where w satisfies w^2 = t*w - n with trace t in {0, 1} and norm n. Half
//! integer coordinates never appear: the basis absorbs the parity constraint,
//! so norms are exact nonnegative integers and equality is structural.

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::{ComplexInterval, RealInterval};
use crate::quadrat::QuadRat;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

/// One of the five rings, identified by its basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingId {
    /// `Z[i]`, the Gaussian integers (w = i).
    G,
    /// `Z[sqrt(2) i]` (w = sqrt(2) i).
    R2,
    /// `Z[(1+sqrt(3) i)/2]`, the Eisenstein integers (w = (1+sqrt(3)i)/2).
    E3,
    /// `Z[(1+sqrt(7) i)/2]` (w = (1+sqrt(7)i)/2).
    E7,
    /// `Z[(1+sqrt(11) i)/2]` (w = (1+sqrt(11)i)/2).
    E11,
}

impl RingId {
    pub const ALL: [RingId; 5] = [RingId::G, RingId::R2, RingId::E3, RingId::E7, RingId::E11];

    /// Trace of the basis element: w + conj(w).
    pub fn omega_trace(self) -> i64 {
        match self {
            RingId::G | RingId::R2 => 0,
            _ => 1,
        }
    }

    /// Norm of the basis element: w * conj(w).
    pub fn omega_norm(self) -> i64 {
        match self {
            RingId::G | RingId::E3 => 1,
            RingId::R2 | RingId::E7 => 2,
            RingId::E11 => 3,
        }
    }

    /// D = 4n - t^2, so that Im(w) = sqrt(D)/2 and disc(x^2 - t*x + n) = -D.
    pub fn disc_d(self) -> u64 {
        match self {
            RingId::G => 4,
            RingId::R2 => 8,
            RingId::E3 => 3,
            RingId::E7 => 7,
            RingId::E11 => 11,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RingId::G => "G",
            RingId::R2 => "R2",
            RingId::E3 => "E3",
            RingId::E7 => "E7",
            RingId::E11 => "E11",
        }
    }

    pub fn omega_description(self) -> &'static str {
        match self {
            RingId::G => "i",
            RingId::R2 => "sqrt(2)*i",
            RingId::E3 => "(1+sqrt(3)*i)/2",
            RingId::E7 => "(1+sqrt(7)*i)/2",
            RingId::E11 => "(1+sqrt(11)*i)/2",
        }
    }
}

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RingId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G" | "g" => Ok(RingId::G),
            "R2" | "r2" => Ok(RingId::R2),
            "E3" | "e3" => Ok(RingId::E3),
            "E7" | "e7" => Ok(RingId::E7),
            "E11" | "e11" => Ok(RingId::E11),
            _ => Err(Error::InvalidInput(format!("unknown ring '{s}'"))),
        }
    }
}

/// Shared enclosure of sqrt(d) for small d, keyed by precision bucket.
pub(crate) fn sqrt_nat_interval(d: u64, prec: u64) -> RealInterval {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), RealInterval>>> = OnceLock::new();
    let bucket = prec.next_power_of_two().max(64);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(d, bucket)) {
        return v.clone();
    }
    let x = Dyadic::from_int(d as i64);
    let iv = RealInterval::new(
        crate::dyadic::sqrt_dir(&x, bucket, true),
        crate::dyadic::sqrt_dir(&x, bucket, false),
    );
    cache.lock().unwrap().insert((d, bucket), iv.clone());
    iv
}

/// Element a + b*w of a ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElt {
    pub ring: RingId,
    pub a: BigInt,
    pub b: BigInt,
}

impl RingElt {
    pub fn new(ring: RingId, a: i64, b: i64) -> Self {
        RingElt { ring, a: a.into(), b: b.into() }
    }

    pub fn from_bigints(ring: RingId, a: BigInt, b: BigInt) -> Self {
        RingElt { ring, a, b }
    }

    pub fn zero(ring: RingId) -> Self {
        Self::new(ring, 0, 0)
    }

    pub fn one(ring: RingId) -> Self {
        Self::new(ring, 1, 0)
    }

    pub fn omega(ring: RingId) -> Self {
        Self::new(ring, 0, 1)
    }

    pub fn from_int(ring: RingId, v: i64) -> Self {
        Self::new(ring, v, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// True when the element is a rational integer (b = 0).
    pub fn is_real_integer(&self) -> bool {
        self.b.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.ring, rhs.ring);
        RingElt { ring: self.ring, a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.ring, rhs.ring);
        RingElt { ring: self.ring, a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }

    pub fn neg(&self) -> Self {
        RingElt { ring: self.ring, a: -&self.a, b: -&self.b }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ring, rhs.ring);
        let t = BigInt::from(self.ring.omega_trace());
        let n = BigInt::from(self.ring.omega_norm());
        let bb = &self.b * &rhs.b;
        RingElt {
            ring: self.ring,
            a: &self.a * &rhs.a - &n * &bb,
            b: &self.a * &rhs.b + &self.b * &rhs.a + &t * &bb,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        RingElt { ring: self.ring, a: &self.a * k, b: &self.b * k }
    }

    pub fn conj(&self) -> Self {
        let t = BigInt::from(self.ring.omega_trace());
        RingElt { ring: self.ring, a: &self.a + &t * &self.b, b: -&self.b }
    }

    /// Exact nonnegative integer norm x * conj(x) = a^2 + t*ab + n*b^2.
    pub fn norm(&self) -> BigUint {
        let t = BigInt::from(self.ring.omega_trace());
        let n = BigInt::from(self.ring.omega_norm());
        let v = &self.a * &self.a + t * &self.a * &self.b + n * &self.b * &self.b;
        v.to_biguint().expect("norm is nonnegative")
    }

    /// gcd of the integer coordinates.
    pub fn content(&self) -> BigUint {
        self.a.gcd(&self.b).to_biguint().unwrap()
    }

    pub fn divisible_by_int(&self, k: &BigInt) -> bool {
        (&self.a % k).is_zero() && (&self.b % k).is_zero()
    }

    pub fn div_exact_int(&self, k: &BigInt) -> Self {
        debug_assert!(self.divisible_by_int(k));
        RingElt { ring: self.ring, a: &self.a / k, b: &self.b / k }
    }

    /// Real part as an exact rational: a + t*b/2.
    pub fn re_rational(&self) -> BigRational {
        let t = BigInt::from(self.ring.omega_trace());
        BigRational::new(BigInt::from(2) * &self.a + t * &self.b, BigInt::from(2))
    }

    /// Imaginary part is `im_coeff * sqrt(D)`; returns the rational coefficient b/2.
    pub fn im_coeff(&self) -> BigRational {
        BigRational::new(self.b.clone(), BigInt::from(2))
    }

    /// Certified enclosure of the complex embedding.
    pub fn interval(&self, prec: u64) -> ComplexInterval {
        let t = self.ring.omega_trace();
        let re = if t == 0 {
            Dyadic::from_bigint(&self.a)
        } else {
            Dyadic::new(BigInt::from(2) * &self.a + &self.b, -1)
        };
        let half_b = Dyadic::new(self.b.clone(), -1);
        let im = sqrt_nat_interval(self.ring.disc_d(), prec).scale(&half_b);
        ComplexInterval::new(RealInterval::point(re), im).round_out(prec)
    }

    /// Ordering key used for deterministic tie-breaking: (b, a) ascending.
    pub fn order_key(&self) -> (BigInt, BigInt) {
        (self.b.clone(), self.a.clone())
    }

    /// Parse `a+b*w` syntax: signed integer terms plus `w` terms (`3`,
    /// `-1+2*w`, `w`, `-w`). For the Gaussian ring, `i` is accepted for `w`.
    pub fn parse(ring: RingId, s: &str) -> Result<RingElt> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::InvalidInput("empty ring element".into()));
        }
        let mut a = BigInt::zero();
        let mut b = BigInt::zero();
        let mut term = String::new();
        let mut terms: Vec<String> = Vec::new();
        for (i, c) in cleaned.chars().enumerate() {
            if (c == '+' || c == '-') && i > 0 {
                terms.push(std::mem::take(&mut term));
            }
            term.push(c);
        }
        terms.push(term);
        for t in terms {
            let bad = || Error::InvalidInput(format!("bad ring element term '{t}' in '{s}'"));
            let is_w = t.ends_with('w') || (ring == RingId::G && t.ends_with('i'));
            if is_w {
                let mut coef = &t[..t.len() - 1];
                if let Some(stripped) = coef.strip_suffix('*') {
                    coef = stripped;
                }
                let v: BigInt = match coef {
                    "" | "+" => BigInt::one(),
                    "-" => -BigInt::one(),
                    _ => coef.parse().map_err(|_| bad())?,
                };
                b += v;
            } else {
                let v: BigInt = t.parse().map_err(|_| bad())?;
                a += v;
            }
        }
        Ok(RingElt { ring, a, b })
    }
}

impl fmt::Display for RingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let wpart = if self.b.is_one() {
            "w".to_string()
        } else if (-&self.b).is_one() {
            "-w".to_string()
        } else {
            format!("{}*w", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{wpart}")
        } else if self.b.is_negative() {
            write!(f, "{}{}", self.a, wpart)
        } else {
            write!(f, "{}+{}", self.a, wpart)
        }
    }
}

/// Element of the quotient field K, stored as `num / den` with a positive
/// integer denominator and coprime content.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElt {
    num: RingElt,
    den: BigUint,
}

impl KElt {
    pub fn new(num: RingElt, den: BigUint) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut k = KElt { num, den };
        k.reduce();
        k
    }

    fn reduce(&mut self) {
        let g = self.num.content().gcd(&self.den);
        if !g.is_one() && !g.is_zero() {
            let gi: BigInt = g.clone().into();
            self.num = self.num.div_exact_int(&gi);
            self.den /= &g;
        }
        if self.num.is_zero() {
            self.den = BigUint::one();
        }
    }

    pub fn from_ring(e: RingElt) -> Self {
        KElt { num: e, den: BigUint::one() }
    }

    pub fn from_rational(ring: RingId, r: &BigRational) -> Self {
        let (num, den) = (r.numer().clone(), r.denom().clone());
        let sign = BigInt::from(if den.is_negative() { -1 } else { 1 });
        KElt::new(
            RingElt::from_bigints(ring, num * &sign, BigInt::zero()),
            (den * &sign).to_biguint().unwrap(),
        )
    }

    pub fn zero(ring: RingId) -> Self {
        Self::from_ring(RingElt::zero(ring))
    }

    pub fn one(ring: RingId) -> Self {
        Self::from_ring(RingElt::one(ring))
    }

    pub fn ring(&self) -> RingId {
        self.num.ring
    }

    pub fn num(&self) -> &RingElt {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let l = self.num.mul_int(&rhs.den.clone().into());
        let r = rhs.num.mul_int(&self.den.clone().into());
        KElt::new(l.add(&r), &self.den * &rhs.den)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        KElt { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        KElt::new(self.num.mul(&rhs.num), &self.den * &rhs.den)
    }

    pub fn conj(&self) -> Self {
        KElt { num: self.num.conj(), den: self.den.clone() }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.num.norm();
        let den_bi: BigInt = self.den.clone().into();
        KElt::new(self.num.conj().mul_int(&den_bi), n)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv())
    }

    /// |x|^2 as an exact rational.
    pub fn norm_rational(&self) -> BigRational {
        BigRational::new(
            self.num.norm().into(),
            (&self.den * &self.den).into(),
        )
    }

    /// The rational value when the element lies in Q, if it does.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.b.is_zero() {
            Some(BigRational::new(self.num.a.clone(), self.den.clone().into()))
        } else {
            None
        }
    }

    pub fn re_rational(&self) -> BigRational {
        self.num.re_rational() / BigRational::from_integer(self.den.clone().into())
    }

    pub fn im_coeff(&self) -> BigRational {
        self.num.im_coeff() / BigRational::from_integer(self.den.clone().into())
    }

    pub fn interval(&self, prec: u64) -> ComplexInterval {
        self.num.interval(prec).div_nat(&self.den, prec)
    }

    /// Parse `num` or `num/den` or `(num)/den`, with `num` in ring-element
    /// syntax. The denominator applies to the whole numerator.
    pub fn parse(ring: RingId, s: &str) -> Result<KElt> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (num_str, den) = match cleaned.rsplit_once('/') {
            None => (cleaned.as_str(), BigUint::one()),
            Some((n, d)) => {
                let den: BigUint = d
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad denominator '{d}'")))?;
                if den.is_zero() {
                    return Err(Error::InvalidInput("zero denominator".into()));
                }
                (n, den)
            }
        };
        let trimmed = num_str
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(num_str);
        Ok(KElt::new(RingElt::parse(ring, trimmed)?, den))
    }
}

impl fmt::Display for KElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.num.b.is_zero() {
            write!(f, "{}/{}", self.num.a, self.den)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

/// 2x2 matrix over a ring, acting on the projective line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: RingElt,
    pub b: RingElt,
    pub c: RingElt,
    pub d: RingElt,
}

impl Mat2 {
    pub fn new(a: RingElt, b: RingElt, c: RingElt, d: RingElt) -> Self {
        assert!(a.ring == b.ring && b.ring == c.ring && c.ring == d.ring);
        Mat2 { a, b, c, d }
    }

    pub fn identity(ring: RingId) -> Self {
        Mat2::new(
            RingElt::one(ring),
            RingElt::zero(ring),
            RingElt::zero(ring),
            RingElt::one(ring),
        )
    }

    pub fn ring(&self) -> RingId {
        self.a.ring
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Mat2 {
            a: self.a.mul(&rhs.a).add(&self.b.mul(&rhs.c)),
            b: self.a.mul(&rhs.b).add(&self.b.mul(&rhs.d)),
            c: self.c.mul(&rhs.a).add(&self.d.mul(&rhs.c)),
            d: self.c.mul(&rhs.b).add(&self.d.mul(&rhs.d)),
        }
    }

    pub fn det(&self) -> RingElt {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    /// Determinant when it is +1 or -1; other units are rejected.
    pub fn det_sign(&self) -> Option<i8> {
        let d = self.det();
        if d.is_one() {
            Some(1)
        } else if d.neg().is_one() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn inverse_unimodular(&self) -> Option<Self> {
        let s = self.det_sign()?;
        let k = BigInt::from(s);
        Some(Mat2 {
            a: self.d.mul_int(&k),
            b: self.b.neg().mul_int(&k),
            c: self.c.neg().mul_int(&k),
            d: self.a.mul_int(&k),
        })
    }

    pub fn transpose(&self) -> Self {
        Mat2 {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn conj_entries(&self) -> Self {
        Mat2 {
            a: self.a.conj(),
            b: self.b.conj(),
            c: self.c.conj(),
            d: self.d.conj(),
        }
    }

    /// Matrix of one expansion step: z -> 1/(z - a).
    pub fn step_matrix(a: &RingElt) -> Self {
        let ring = a.ring;
        Mat2::new(
            RingElt::zero(ring),
            RingElt::one(ring),
            RingElt::one(ring),
            a.neg(),
        )
    }
}

/// Anything that can stand for a point of the plane in lattice queries:
/// a raw box, an exact algebraic point, or a quadratic surd state.
///
/// `enclosure` must return boxes that contain the point and (for refinable
/// sources) shrink as `prec` grows. The `cmp_*` hooks decide distance
/// comparisons exactly when the source supports it.
pub trait PointSource {
    fn enclosure(&self, prec: u64) -> ComplexInterval;

    /// Largest useful refinement precision; beyond it only the exact hooks help.
    fn max_prec(&self) -> u64 {
        1 << 10
    }

    /// Exact comparison of |P-x|^2 against |P-y|^2, when available.
    fn cmp_dist_sq(&self, _x: &RingElt, _y: &RingElt) -> Option<Ordering> {
        None
    }

    /// Exact comparison of |P-x|^2 against a rational, when available.
    fn cmp_dist_sq_c(&self, _x: &RingElt, _c: &BigRational) -> Option<Ordering> {
        None
    }
}

impl PointSource for ComplexInterval {
    fn enclosure(&self, _prec: u64) -> ComplexInterval {
        self.clone()
    }

    fn max_prec(&self) -> u64 {
        0
    }
}

/// An exactly-known point whose coordinates live in Q(sqrt(D)).
///
/// This covers points of K, rational complex points, and every dyadic test
/// point; distance comparisons against lattice elements are decided exactly.
#[derive(Clone, Debug)]
pub struct ExactPoint {
    pub ring: RingId,
    pub re: QuadRat,
    pub im: QuadRat,
}

impl ExactPoint {
    pub fn from_rational_xy(ring: RingId, re: BigRational, im: BigRational) -> Self {
        let d = ring.disc_d();
        ExactPoint {
            ring,
            re: QuadRat::from_rational(re, d),
            im: QuadRat::from_rational(im, d),
        }
    }

    pub fn from_f64(ring: RingId, re: f64, im: f64) -> Self {
        let r = Dyadic::from_f64(re).unwrap().to_rational();
        let i = Dyadic::from_f64(im).unwrap().to_rational();
        Self::from_rational_xy(ring, r, i)
    }

    pub fn from_k(k: &KElt) -> Self {
        let d = k.ring().disc_d();
        ExactPoint {
            ring: k.ring(),
            re: QuadRat::from_rational(k.re_rational(), d),
            // imaginary part is im_coeff * sqrt(D)
            im: QuadRat::new(BigRational::zero(), k.im_coeff(), d),
        }
    }

    /// Squared distance to a lattice element, exactly in Q(sqrt(D)).
    pub fn dist_sq(&self, x: &RingElt) -> QuadRat {
        let d = self.ring.disc_d();
        let dre = self.re.sub(&QuadRat::from_rational(x.re_rational(), d));
        let dim = self.im.sub(&QuadRat::new(BigRational::zero(), x.im_coeff(), d));
        dre.square().add(&dim.square())
    }
}

fn quadrat_interval(q: &QuadRat, prec: u64) -> RealInterval {
    let a = RealInterval::from_rational(&q.a, prec);
    if q.b.is_zero() {
        return a;
    }
    let b = RealInterval::from_rational(&q.b, prec);
    a.add(&b.mul(&sqrt_nat_interval(q.d, prec))).round_out(prec)
}

impl PointSource for ExactPoint {
    fn enclosure(&self, prec: u64) -> ComplexInterval {
        ComplexInterval::new(
            quadrat_interval(&self.re, prec),
            quadrat_interval(&self.im, prec),
        )
    }

    fn max_prec(&self) -> u64 {
        1 << 12
    }

    fn cmp_dist_sq(&self, x: &RingElt, y: &RingElt) -> Option<Ordering> {
        Some(self.dist_sq(x).cmp(&self.dist_sq(y)))
    }

    fn cmp_dist_sq_c(&self, x: &RingElt, c: &BigRational) -> Option<Ordering> {
        Some(self.dist_sq(x).cmp_rational(c))
    }
}

/// Compare |P-x|^2 with |P-y|^2, refining intervals before falling back to
/// the source's exact hook.
pub fn cmp_dist_pair(p: &dyn PointSource, x: &RingElt, y: &RingElt) -> Result<Ordering> {
    let mut prec = 64u64;
    loop {
        let e = p.enclosure(prec);
        let dx = e.sub(&x.interval(prec)).abs_sq();
        let dy = e.sub(&y.interval(prec)).abs_sq();
        if let Some(o) = dx.cmp_interval(&dy) {
            return Ok(o);
        }
        if prec >= 256 || prec >= p.max_prec() {
            if let Some(o) = p.cmp_dist_sq(x, y) {
                return Ok(o);
            }
            if prec >= p.max_prec() {
                return Err(Error::AmbiguousTie);
            }
        }
        prec *= 2;
    }
}

/// Compare |P-x|^2 with a rational threshold.
pub fn cmp_dist_to(p: &dyn PointSource, x: &RingElt, c: &BigRational) -> Result<Ordering> {
    let mut prec = 64u64;
    loop {
        let e = p.enclosure(prec);
        let dx = e.sub(&x.interval(prec)).abs_sq();
        if let Some(o) = dx.cmp_rational(c) {
            return Ok(o);
        }
        if prec >= 256 || prec >= p.max_prec() {
            if let Some(o) = p.cmp_dist_sq_c(x, c) {
                return Ok(o);
            }
            if prec >= p.max_prec() {
                return Err(Error::AmbiguousBoundary);
            }
        }
        prec *= 2;
    }
}

/// All lattice points whose embedding can lie within `extra` of the box,
/// in (b, a)-ascending order. The margins are generous; membership gets
/// decided by certified comparisons afterwards.
fn enumerate_box(ring: RingId, e: &ComplexInterval, extra: f64) -> Vec<RingElt> {
    let t = ring.omega_trace() as f64;
    let sqrt_d = (ring.disc_d() as f64).sqrt();
    let im_lo = e.im.lo().to_f64() - extra;
    let im_hi = e.im.hi().to_f64() + extra;
    let re_lo = e.re.lo().to_f64() - extra;
    let re_hi = e.re.hi().to_f64() + extra;
    let b_min = (im_lo * 2.0 / sqrt_d).floor() as i64 - 1;
    let b_max = (im_hi * 2.0 / sqrt_d).ceil() as i64 + 1;
    let mut out = Vec::new();
    for b in b_min..=b_max {
        let shift = t * b as f64 / 2.0;
        let a_min = (re_lo - shift).floor() as i64 - 1;
        let a_max = (re_hi - shift).ceil() as i64 + 1;
        for a in a_min..=a_max {
            out.push(RingElt::new(ring, a, b));
        }
    }
    out
}

pub(crate) fn nearest_elements_filtered(
    ring: RingId,
    p: &dyn PointSource,
    filter: &dyn Fn(&RingElt) -> bool,
    extra: f64,
) -> Result<Vec<RingElt>> {
    let prec = 64u64;
    let e = p.enclosure(prec);
    let margin = extra + e.width().to_f64();
    let cands: Vec<RingElt> = enumerate_box(ring, &e, margin)
        .into_iter()
        .filter(|g| filter(g))
        .collect();
    assert!(!cands.is_empty(), "enumeration box produced no candidates");

    // Prune to candidates that can still attain the minimum.
    let dists: Vec<RealInterval> = cands.iter().map(|g| e.sub(&g.interval(prec)).abs_sq()).collect();
    let dmin_hi = dists
        .iter()
        .map(|d| d.hi().clone())
        .min()
        .expect("nonempty candidate set");
    let live: Vec<&RingElt> = cands
        .iter()
        .zip(&dists)
        .filter(|(_, d)| *d.lo() <= dmin_hi)
        .map(|(g, _)| g)
        .collect();

    let mut best: Vec<RingElt> = vec![live[0].clone()];
    for cand in &live[1..] {
        match cmp_dist_pair(p, cand, &best[0])? {
            Ordering::Less => {
                best.clear();
                best.push((*cand).clone());
            }
            Ordering::Equal => best.push((*cand).clone()),
            Ordering::Greater => {}
        }
    }
    best.sort_by_key(|g| g.order_key());
    Ok(best)
}

/// All ring elements at minimal distance from the point, certified, with
/// ties in deterministic (b, a)-ascending order.
pub fn nearest_elements(ring: RingId, p: &dyn PointSource) -> Result<Vec<RingElt>> {
    nearest_elements_filtered(ring, p, &|_| true, 1.1)
}

/// All ring elements at certified distance strictly between 0 and `r`.
pub fn elements_within(ring: RingId, p: &dyn PointSource, r: &BigRational) -> Result<Vec<RingElt>> {
    let one = BigRational::one();
    if !r.is_positive() || r > &one {
        return Err(Error::InvalidInput(format!("radius {r} outside (0, 1]")));
    }
    let r_sq = r * r;
    let prec = 64u64;
    let e = p.enclosure(prec);
    let margin = r.to_f64().unwrap_or(1.0) + e.width().to_f64() + 0.1;
    let mut out = Vec::new();
    for cand in enumerate_box(ring, &e, margin) {
        if cmp_dist_to(p, &cand, &r_sq)? != Ordering::Less {
            continue;
        }
        // exclude the point itself when the distance is exactly 0
        let d = e.sub(&cand.interval(prec)).abs_sq();
        if d.contains_zero() && cmp_dist_to(p, &cand, &BigRational::zero())? == Ordering::Equal {
            continue;
        }
        out.push(cand);
    }
    out.sort_by_key(|g| g.order_key());
    Ok(out)
}

/// Exact squared covering radius r0^2 = n*(1 - t + n)/D, the circumradius
/// squared of the Delaunay triangle (0, 1, w) of the lattice.
pub fn covering_radius_sq(ring: RingId) -> BigRational {
    let n = ring.omega_norm();
    let s3 = 1 - ring.omega_trace() + n;
    BigRational::new((n * s3).into(), (ring.disc_d() as i64).into())
}

/// Certified enclosure of the covering radius, width well below 1e-6.
pub fn covering_radius(ring: RingId) -> RealInterval {
    RealInterval::from_rational(&covering_radius_sq(ring), 96)
        .sqrt(96)
        .round_out(96)
}

/// The full unit group, ordered with each +/- pair adjacent.
pub fn units(ring: RingId) -> Vec<RingElt> {
    let d = ring.disc_d() as i64;
    let t = ring.omega_trace();
    let mut out = Vec::new();
    let mut b = -1i64;
    while b <= 1 {
        let rem = 4 - d * b * b;
        if rem >= 0 {
            let k0 = (rem as f64).sqrt().round() as i64;
            for k in [-k0, k0] {
                if k * k == rem && (k - t * b) % 2 == 0 {
                    let a = (k - t * b) / 2;
                    let u = RingElt::new(ring, a, b);
                    if u.norm() == BigUint::one() && !out.contains(&u) {
                        out.push(u);
                    }
                }
                if k0 == 0 {
                    break;
                }
            }
        }
        b += 1;
    }
    out.sort_by_key(|u| {
        let neg = u.b.is_negative() || (u.b.is_zero() && u.a.is_negative());
        (u.b.abs(), u.a.abs(), neg)
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn norm_examples() {
        assert_eq!(RingElt::new(RingId::G, 2, 1).norm(), BigUint::from(5u32));
        assert_eq!(RingElt::zero(RingId::E7).norm(), BigUint::zero());
        assert_eq!(RingElt::omega(RingId::E3).norm(), BigUint::one());
    }

    #[test]
    fn norm_is_elt_times_conj() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ring in RingId::ALL {
            for _ in 0..200 {
                let x = RingElt::new(ring, rng.gen_range(-40..40), rng.gen_range(-40..40));
                let p = x.mul(&x.conj());
                assert!(p.b.is_zero());
                assert_eq!(p.a.to_biguint().unwrap(), x.norm());
            }
        }
    }

    #[test]
    fn norm_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ring in RingId::ALL {
            for _ in 0..1000 {
                let x = RingElt::new(ring, rng.gen_range(-50..50), rng.gen_range(-50..50));
                let y = RingElt::new(ring, rng.gen_range(-50..50), rng.gen_range(-50..50));
                assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
            }
        }
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for ring in RingId::ALL {
            for _ in 0..300 {
                let e = |rng: &mut ChaCha8Rng| {
                    RingElt::new(ring, rng.gen_range(-30..30), rng.gen_range(-30..30))
                };
                let (x, y, z) = (e(&mut rng), e(&mut rng), e(&mut rng));
                assert_eq!(x.add(&y), y.add(&x));
                assert_eq!(x.mul(&y), y.mul(&x));
                assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
                assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
                assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            }
        }
    }

    #[test]
    fn units_of_each_ring() {
        let g: Vec<String> = units(RingId::G).iter().map(|u| u.to_string()).collect();
        assert_eq!(g, ["1", "-1", "w", "-w"]);
        let e3 = units(RingId::E3);
        assert_eq!(e3.len(), 6);
        let names: Vec<String> = e3.iter().map(|u| u.to_string()).collect();
        assert_eq!(names, ["1", "-1", "w", "-w", "-1+w", "1-w"]);
        let r2: Vec<String> = units(RingId::R2).iter().map(|u| u.to_string()).collect();
        assert_eq!(r2, ["1", "-1"]);
        assert_eq!(units(RingId::E7).len(), 2);
        assert_eq!(units(RingId::E11).len(), 2);
    }

    #[test]
    fn covering_radii_match_closed_forms() {
        let expect = [
            (RingId::G, std::f64::consts::FRAC_1_SQRT_2),
            (RingId::R2, 0.8660254037844386),
            (RingId::E3, 0.5773502691896258),
            (RingId::E7, 0.7559289460184545),
            (RingId::E11, 0.9045340337332909),
        ];
        for (ring, v) in expect {
            let iv = covering_radius(ring);
            assert!(iv.width().to_f64() < 1e-6);
            assert!((iv.midpoint_f64() - v).abs() < 1e-9, "{ring}: {iv}");
            assert!(iv.hi().to_f64() < 1.0);
        }
    }

    #[test]
    fn covering_radius_vs_grid_oracle() {
        // Coarse grid over the fundamental cell, then local refinement
        // around the worst point; agrees with the closed form to 1e-4.
        for ring in RingId::ALL {
            let t = ring.omega_trace() as f64;
            let sd = (ring.disc_d() as f64).sqrt();
            let min_dist = |x: f64, y: f64| -> f64 {
                let mut best = f64::INFINITY;
                for b in -2..=3 {
                    for a in -3..=4 {
                        let gx = a as f64 + t * b as f64 / 2.0;
                        let gy = b as f64 * sd / 2.0;
                        best = best.min(((x - gx).powi(2) + (y - gy).powi(2)).sqrt());
                    }
                }
                best
            };
            let mut worst = (0.0, 0.0, 0.0f64);
            let n = 250;
            for i in 0..=n {
                for j in 0..=n {
                    let x = i as f64 / n as f64;
                    let y = j as f64 / n as f64 * sd / 2.0 * 1.02;
                    let d = min_dist(x, y);
                    if d > worst.2 {
                        worst = (x, y, d);
                    }
                }
            }
            let mut step = 1.0 / n as f64;
            for _ in 0..8 {
                let (cx, cy, _) = worst;
                for i in -10..=10 {
                    for j in -10..=10 {
                        let x = cx + i as f64 * step / 10.0;
                        let y = cy + j as f64 * step / 10.0;
                        let d = min_dist(x, y);
                        if d > worst.2 {
                            worst = (x, y, d);
                        }
                    }
                }
                step /= 10.0;
            }
            let enc = covering_radius(ring).midpoint_f64();
            assert!(
                (worst.2 - enc).abs() < 1e-4,
                "{ring}: grid {} vs enclosure {enc}",
                worst.2
            );
        }
    }

    #[test]
    fn covering_radius_bounds_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for ring in RingId::ALL {
            let hi = covering_radius(ring).hi().to_f64();
            for _ in 0..1000 {
                let p = ExactPoint::from_f64(ring, rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                let near = nearest_elements(ring, &p).unwrap();
                let d = p.dist_sq(&near[0]);
                // squared distance <= hi^2
                let lim = BigRational::from_float(hi * hi * (1.0 + 1e-12)).unwrap();
                assert!(d.cmp_rational(&lim) != Ordering::Greater);
            }
        }
    }

    #[test]
    #[allow(clippy::approx_constant)] // a truncated decimal is the point here
    fn nearest_examples() {
        // box around a truncation of sqrt(2)
        let b = ComplexInterval::point(
            Dyadic::from_f64(1.41421356).unwrap(),
            Dyadic::zero(),
        );
        let n = nearest_elements(RingId::G, &b).unwrap();
        assert_eq!(n, vec![RingElt::new(RingId::G, 1, 0)]);

        // deep hole of Z[i]: four-way tie in (b, a) order
        let p = ExactPoint::from_rational_xy(RingId::G, rat(1, 2), rat(1, 2));
        let n = nearest_elements(RingId::G, &p).unwrap();
        let want = [
            RingElt::new(RingId::G, 0, 0),
            RingElt::new(RingId::G, 1, 0),
            RingElt::new(RingId::G, 0, 1),
            RingElt::new(RingId::G, 1, 1),
        ];
        assert_eq!(n, want);

        let z = ExactPoint::from_rational_xy(RingId::E3, rat(0, 1), rat(0, 1));
        assert_eq!(
            nearest_elements(RingId::E3, &z).unwrap(),
            vec![RingElt::zero(RingId::E3)]
        );
    }

    #[test]
    fn nearest_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for ring in RingId::ALL {
            for _ in 0..1000 {
                let p = ExactPoint::from_f64(
                    ring,
                    rng.gen_range(-2.5..2.5),
                    rng.gen_range(-2.5..2.5),
                );
                let got = nearest_elements(ring, &p).unwrap();
                // brute force over a radius-3 coordinate box around the origin shift
                let e = p.enclosure(64);
                let mut best: Vec<RingElt> = Vec::new();
                for cand in enumerate_box(ring, &e, 3.0) {
                    if best.is_empty() {
                        best.push(cand);
                        continue;
                    }
                    match p.dist_sq(&cand).cmp(&p.dist_sq(&best[0])) {
                        Ordering::Less => {
                            best.clear();
                            best.push(cand);
                        }
                        Ordering::Equal => best.push(cand),
                        Ordering::Greater => {}
                    }
                }
                best.sort_by_key(|g| g.order_key());
                assert_eq!(got, best);
            }
        }
    }

    #[test]
    fn within_examples() {
        let s2 = ExactPoint::from_f64(RingId::G, std::f64::consts::SQRT_2, 0.0);
        let w1 = elements_within(RingId::G, &s2, &rat(1, 1)).unwrap();
        assert_eq!(
            w1,
            vec![RingElt::new(RingId::G, 1, 0), RingElt::new(RingId::G, 2, 0)]
        );
        let w2 = elements_within(RingId::G, &s2, &rat(1, 2)).unwrap();
        assert_eq!(w2, vec![RingElt::new(RingId::G, 1, 0)]);

        // sqrt(2)i/2 in Z[sqrt(2)i]: 0 and w both at distance sqrt(2)/2
        let p = ExactPoint::from_f64(RingId::R2, 0.0, std::f64::consts::SQRT_2 / 2.0);
        let w = elements_within(RingId::R2, &p, &rat(1, 1)).unwrap();
        assert_eq!(
            w,
            vec![RingElt::zero(RingId::R2), RingElt::omega(RingId::R2)]
        );
    }

    #[test]
    fn within_excludes_exact_center() {
        let p = ExactPoint::from_rational_xy(RingId::G, rat(1, 1), rat(0, 1));
        let w = elements_within(RingId::G, &p, &rat(1, 1)).unwrap();
        assert!(!w.contains(&RingElt::new(RingId::G, 1, 0)));
    }

    #[test]
    fn kelt_field_ops() {
        let x = KElt::new(RingElt::new(RingId::G, 1, 1), 2u32.into());
        let inv = x.inv();
        assert!(x.mul(&inv).sub(&KElt::one(RingId::G)).is_zero());
        assert_eq!(x.norm_rational(), rat(1, 2));
    }

    #[test]
    fn mat2_inverse() {
        let g = Mat2::new(
            RingElt::new(RingId::G, 0, 0),
            RingElt::new(RingId::G, 1, 0),
            RingElt::new(RingId::G, 1, 0),
            RingElt::new(RingId::G, -2, 0),
        );
        assert_eq!(g.det_sign(), Some(-1));
        let inv = g.inverse_unimodular().unwrap();
        assert_eq!(g.mul(&inv), Mat2::identity(RingId::G));
    }
}
