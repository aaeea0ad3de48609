//! Norm representability, congruence obstructions, and circles of badly
//! approximable numbers.
//!
//! For a circle `|z - center|^2 = m/n` with center in K and m, n coprime,
//! the circle contains a K-rational point exactly when both m and n are
//! norms of ring elements; otherwise every point of the circle is badly
//! approximable with respect to the ring. The congruence obstructions
//! `n = -1 (mod 8)` (for `Z[i]` and `Z[sqrt(2)i]`) and `n = -1 (mod j)` (for
//! the half-integer rings, j = 3, 7, 11) certify non-representability
//! cheaply; values `= -1 (mod 1848)` are obstructed in all five rings.

use crate::algebraic::{square_in_k, SurdSpec};
use crate::error::{Error, Result};
use crate::forms::FormMatrix;
use crate::interval::ComplexInterval;
use crate::rings::{KElt, RingElt, RingId};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

fn isqrt_u128(v: u128) -> u128 {
    if v == 0 {
        return 0;
    }
    let mut x = (v as f64).sqrt() as u128 + 2;
    while x * x > v {
        x -= 1;
    }
    x
}

/// A ring element of the given norm, if one exists.
///
/// Enumerates `4n = k^2 + D b^2` with `b >= 0` ascending and `k >= 0`
/// (k = 2a + t b), so the witness is deterministic; results are memoized
/// per ring. Desk-scale inputs only: the search is O(sqrt n).
pub fn is_norm(ring: RingId, n: u64) -> Option<RingElt> {
    static CACHE: OnceLock<Mutex<HashMap<(RingId, u64), Option<(i64, i64)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(ring, n)) {
        return hit.map(|(a, b)| RingElt::new(ring, a, b));
    }
    let d = ring.disc_d() as u128;
    let t = ring.omega_trace() as u128;
    let four_n = 4u128 * n as u128;
    let mut found: Option<(i64, i64)> = None;
    let b_max = isqrt_u128(four_n / d);
    for b in 0..=b_max {
        let rem = four_n - d * b * b;
        let k = isqrt_u128(rem);
        if k * k != rem {
            continue;
        }
        if (k + t * b) % 2 != 0 {
            continue;
        }
        let a = (k as i64 - (t as i64) * (b as i64)) / 2;
        found = Some((a, b as i64));
        break;
    }
    cache.lock().unwrap().insert((ring, n), found);
    found.map(|(a, b)| RingElt::new(ring, a, b))
}

/// Congruence certificate that `n` is not a norm: modulus 8 for `Z[i]` and
/// `Z[sqrt(2)i]` when n = -1 (mod 8), modulus j for the half-integer rings
/// when n = -1 (mod j).
pub fn congruence_obstruction(ring: RingId, n: u64) -> Option<u64> {
    let m = match ring {
        RingId::G | RingId::R2 => 8,
        RingId::E3 => 3,
        RingId::E7 => 7,
        RingId::E11 => 11,
    };
    if n % m == m - 1 {
        Some(m)
    } else {
        None
    }
}

/// A circle `|z - center|^2 = radius_sq` with center in K and rational
/// squared radius m/n in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleSpec {
    pub center: KElt,
    pub radius_sq: BigRational,
}

impl CircleSpec {
    pub fn new(center: KElt, radius_sq: BigRational) -> Result<CircleSpec> {
        if !radius_sq.is_positive() {
            return Err(Error::InvalidInput("radius^2 must be positive".into()));
        }
        Ok(CircleSpec { center, radius_sq })
    }

    pub fn ring(&self) -> RingId {
        self.center.ring()
    }

    /// Coprime (m, n) with radius_sq = m/n; errors beyond u64 range.
    pub fn m_n(&self) -> Result<(u64, u64)> {
        let m = self
            .radius_sq
            .numer()
            .to_u64()
            .ok_or_else(|| Error::InvalidInput("radius numerator too large".into()))?;
        let n = self
            .radius_sq
            .denom()
            .to_u64()
            .ok_or_else(|| Error::InvalidInput("radius denominator too large".into()))?;
        Ok((m, n))
    }

    /// The Hermitian form with entries in k^{-1}*Gamma whose zero set is
    /// this circle: `z conj(z) - center conj(z) - conj(center) z +
    /// (|center|^2 - r^2)`, scaled by k = lcm(den(center)^2, den(r^2)).
    pub fn hermitian_form(&self) -> FormMatrix {
        let ring = self.ring();
        let d = self.center.den().clone();
        let d2 = &d * &d;
        let n_den = self.radius_sq.denom().to_biguint().expect("positive denom");
        let k = d2.lcm(&n_den);
        let k_int: BigInt = k.clone().into();

        let a = RingElt::from_bigints(ring, k_int.clone(), BigInt::zero());
        let scale: BigInt = (&k / &d).into();
        let b = self.center.num().neg().mul_int(&scale);
        let abs2 = self.center.norm_rational();
        let dd = (&abs2 - &self.radius_sq) * BigRational::from_integer(k_int);
        assert!(dd.is_integer());
        let d_ent = RingElt::from_bigints(ring, dd.to_integer(), BigInt::zero());
        FormMatrix::hermitian(k, a, b, d_ent).expect("circle form is Hermitian")
    }
}

/// Outcome of classifying a circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CircleVerdict {
    /// Every point of the circle is badly approximable; `failing` is the
    /// numerator or denominator that is not a norm, with a congruence
    /// certificate when one applies.
    AllBad { failing: u64, obstruction: Option<u64> },
    /// A K-rational point on the circle, verified exactly.
    HasRationalPoint { witness: KElt },
}

/// Decide whether the circle contains a K-point (witness included) or
/// consists entirely of badly approximable numbers.
pub fn classify_circle(ring: RingId, c: &CircleSpec) -> Result<CircleVerdict> {
    assert_eq!(ring, c.ring());
    let (m, n) = c.m_n()?;
    let pm = is_norm(ring, m);
    let pn = is_norm(ring, n);
    match (pm, pn) {
        (Some(p), Some(q)) => {
            let witness = c.center.add(&KElt::from_ring(p).div(&KElt::from_ring(q)));
            let dist = witness.sub(&c.center).norm_rational();
            assert_eq!(dist, c.radius_sq, "witness must lie on the circle");
            Ok(CircleVerdict::HasRationalPoint { witness })
        }
        (None, _) => Ok(CircleVerdict::AllBad {
            failing: m,
            obstruction: congruence_obstruction(ring, m),
        }),
        (_, None) => Ok(CircleVerdict::AllBad {
            failing: n,
            obstruction: congruence_obstruction(ring, n),
        }),
    }
}

/// An exact circle point `center + x + i*sqrt(r^2 - x^2)` as a quadratic
/// surd, for a rational horizontal offset x from the center.
pub fn circle_point_surd(ring: RingId, c: &CircleSpec, x: &BigRational) -> Result<SurdSpec> {
    let s = &c.radius_sq - x * x;
    if !s.is_positive() {
        return Err(Error::InvalidInput(
            "offset leaves no positive vertical gap on the circle".into(),
        ));
    }
    if square_in_k(&KElt::from_rational(ring, &(-&s))).is_some() {
        return Err(Error::PointInK);
    }
    // (z - w)^2 = -s for w = center + x: z^2 - 2w z + (w^2 + s) = 0
    let w = c.center.add(&KElt::from_rational(ring, x));
    let c1 = w.neg().mul(&KElt::from_rational(ring, &BigRational::from_integer(2.into())));
    let c0 = w.mul(&w).add(&KElt::from_rational(ring, &s));
    let l = c1.den().lcm(c0.den());
    let to_ring = |k: &KElt| -> RingElt {
        let f: BigInt = (&l / k.den()).into();
        k.num().mul_int(&f)
    };
    let a = RingElt::from_bigints(ring, l.clone().into(), BigInt::zero());
    // branch +1 picks the root with positive vertical offset
    SurdSpec::with_branch(ring, a, to_ring(&c1), to_ring(&c0), 1)
}

/// Find a circle of badly approximable numbers separating two disjoint
/// boxes: center in K near `z`, radius^2 = m/n strictly between
/// sup |z - center| and inf |w - center|, verified AllBad.
///
/// Candidate radii are scanned by denominator, filtered through the
/// congruence obstruction first and then through the norm search, with the
/// denominator capped so failure is explicit.
pub fn separating_circle(
    ring: RingId,
    z: &ComplexInterval,
    w: &ComplexInterval,
) -> Result<CircleSpec> {
    if z.intersects(w) {
        return Err(Error::EnclosuresOverlap);
    }
    const DEN_CAP: u64 = 1_000_000;
    let prec = 96u64;

    // Center: a K-approximation of z's midpoint, refined until the gap
    // between the two distance ranges opens up.
    let (zre, zim) = z.midpoint_f64();
    let sqrt_d = (ring.disc_d() as f64).sqrt();
    let t = ring.omega_trace() as f64;
    let mut den = 8i64;
    let (lo_sq, hi_sq, center) = loop {
        let v = (zim * 2.0 * den as f64 / sqrt_d).round() as i64;
        let u = (zre * den as f64 - v as f64 * t / 2.0).round() as i64;
        let center = KElt::new(
            RingElt::new(ring, u, v),
            BigUint::from(den as u64),
        );
        let ci = center.interval(prec);
        let dz = z.sub(&ci).abs_sq();
        let dw = w.sub(&ci).abs_sq();
        let lo = dz.hi().to_rational();
        let hi = dw.lo().to_rational();
        if hi > lo && (&hi - &lo) > lo.clone() / BigRational::from_integer(4.into()) {
            break (lo, hi, center);
        }
        den *= 4;
        if den > 1 << 24 {
            return Err(Error::SearchExhausted);
        }
    };

    let gap = &hi_sq - &lo_sq;
    let start_den = (BigRational::one() / gap).to_integer().to_u64().unwrap_or(0) / 2 + 1;
    for n in start_den..=DEN_CAP {
        let n_rat = BigRational::from_integer(BigInt::from(n));
        let m_lo = (&lo_sq * &n_rat).to_integer().to_u64().unwrap_or(u64::MAX);
        let m_hi_r = &hi_sq * &n_rat;
        let m_hi = m_hi_r.to_integer().to_u64().unwrap_or(u64::MAX);
        let in_range = |m: u64| {
            let r = BigRational::new(m.into(), n.into());
            r > lo_sq && r < hi_sq
        };
        // congruence-filtered pass, then the norm-search fallback
        for pass in 0..2 {
            for m in m_lo..=m_hi.min(m_lo.saturating_add(10_000)) {
                if m == 0 || !in_range(m) || m.gcd(&n) != 1 {
                    continue;
                }
                let bad = if pass == 0 {
                    congruence_obstruction(ring, m).is_some()
                        || congruence_obstruction(ring, n).is_some()
                } else {
                    is_norm(ring, m).is_none() || is_norm(ring, n).is_none()
                };
                if !bad {
                    continue;
                }
                let spec = CircleSpec::new(
                    center.clone(),
                    BigRational::new(m.into(), n.into()),
                )?;
                if let CircleVerdict::AllBad { .. } = classify_circle(ring, &spec)? {
                    return Ok(spec);
                }
            }
        }
    }
    Err(Error::SearchExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{expand, Chooser};

    fn g(a: i64, b: i64) -> RingElt {
        RingElt::new(RingId::G, a, b)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn is_norm_examples() {
        assert_eq!(is_norm(RingId::G, 5), Some(g(2, 1)));
        assert_eq!(is_norm(RingId::G, 7), None);
        assert_eq!(is_norm(RingId::G, 1), Some(g(1, 0)));
    }

    #[test]
    fn witnesses_have_requested_norm() {
        for ring in RingId::ALL {
            for n in 0..500u64 {
                if let Some(x) = is_norm(ring, n) {
                    assert_eq!(x.norm(), BigUint::from(n));
                }
            }
        }
    }

    #[test]
    fn obstruction_examples() {
        assert_eq!(congruence_obstruction(RingId::G, 7), Some(8));
        assert_eq!(congruence_obstruction(RingId::E3, 2), Some(3));
        assert_eq!(congruence_obstruction(RingId::G, 5), None);
    }

    #[test]
    fn obstruction_sound_small() {
        for ring in RingId::ALL {
            for n in 0..2000u64 {
                if congruence_obstruction(ring, n).is_some() {
                    assert!(is_norm(ring, n).is_none(), "{ring} {n}");
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c = CircleSpec::new(KElt::zero(RingId::G), rat(1847, 1)).unwrap();
        match classify_circle(RingId::G, &c).unwrap() {
            CircleVerdict::AllBad { failing, obstruction } => {
                assert_eq!(failing, 1847);
                assert_eq!(obstruction, Some(8));
            }
            v => panic!("expected AllBad, got {v:?}"),
        }
        // 1847 = -1 mod 1848 obstructs every ring
        for ring in RingId::ALL {
            let c = CircleSpec::new(KElt::zero(ring), rat(1847, 1)).unwrap();
            assert!(matches!(
                classify_circle(ring, &c).unwrap(),
                CircleVerdict::AllBad { obstruction: Some(_), .. }
            ));
        }

        let c = CircleSpec::new(KElt::zero(RingId::G), rat(2, 1)).unwrap();
        match classify_circle(RingId::G, &c).unwrap() {
            CircleVerdict::HasRationalPoint { witness } => {
                assert_eq!(witness, KElt::from_ring(g(1, 1)));
            }
            v => panic!("expected point, got {v:?}"),
        }

        let c = CircleSpec::new(KElt::zero(RingId::G), rat(49, 25)).unwrap();
        match classify_circle(RingId::G, &c).unwrap() {
            CircleVerdict::HasRationalPoint { witness } => {
                assert_eq!(witness.norm_rational(), rat(49, 25));
            }
            v => panic!("expected point, got {v:?}"),
        }
    }

    #[test]
    fn verdict_ignores_center_translation() {
        // moving the center within K never changes the verdict kind
        for (m, n) in [(1847i64, 1i64), (2, 1), (7, 5)] {
            let at_zero = classify_circle(
                RingId::G,
                &CircleSpec::new(KElt::zero(RingId::G), rat(m, n)).unwrap(),
            )
            .unwrap();
            let shifted = classify_circle(
                RingId::G,
                &CircleSpec::new(KElt::new(g(3, -2), 5u32.into()), rat(m, n)).unwrap(),
            )
            .unwrap();
            assert_eq!(
                matches!(at_zero, CircleVerdict::AllBad { .. }),
                matches!(shifted, CircleVerdict::AllBad { .. })
            );
        }
    }

    #[test]
    fn classify_reciprocity() {
        for (m, n) in [(7u64, 5u64), (5, 7), (2, 3), (1847, 4), (10, 9)] {
            let a = classify_circle(
                RingId::G,
                &CircleSpec::new(KElt::zero(RingId::G), rat(m as i64, n as i64)).unwrap(),
            )
            .unwrap();
            let b = classify_circle(
                RingId::G,
                &CircleSpec::new(KElt::zero(RingId::G), rat(n as i64, m as i64)).unwrap(),
            )
            .unwrap();
            assert_eq!(
                matches!(a, CircleVerdict::AllBad { .. }),
                matches!(b, CircleVerdict::AllBad { .. })
            );
        }
    }

    #[test]
    fn circle_point_examples() {
        let c = CircleSpec::new(KElt::zero(RingId::G), rat(1847, 1)).unwrap();
        let s = circle_point_surd(RingId::G, &c, &rat(1, 1)).unwrap();
        // z^2 - 2z + 1847
        assert_eq!(s.coeffs(), &[g(1, 0), g(-2, 0), g(1847, 0)]);
        // the point satisfies the circle's Hermitian form exactly
        assert!(c.hermitian_form().is_zero_at_state(&s.state()));
        // and expands without trouble
        assert!(expand(&s, &Chooser::NearestInteger, 10).is_ok());

        let c2 = CircleSpec::new(KElt::zero(RingId::G), rat(2, 1)).unwrap();
        assert!(matches!(
            circle_point_surd(RingId::G, &c2, &rat(1, 1)),
            Err(Error::PointInK)
        ));

        let c7 = CircleSpec::new(KElt::zero(RingId::G), rat(7, 1)).unwrap();
        let s = circle_point_surd(RingId::G, &c7, &rat(0, 1)).unwrap();
        assert_eq!(s.coeffs(), &[g(1, 0), g(0, 0), g(7, 0)]);
        assert!(c7.hermitian_form().is_zero_at_state(&s.state()));
    }

    #[test]
    fn circle_point_respects_center() {
        let center = KElt::new(g(1, 2), BigUint::from(2u32));
        let c = CircleSpec::new(center, rat(23, 1)).unwrap();
        let s = circle_point_surd(RingId::G, &c, &rat(1, 3)).unwrap();
        assert!(c.hermitian_form().is_zero_at_state(&s.state()));
    }

    #[test]
    fn separating_circle_basic() {
        let z = ComplexInterval::from_f64_box(0.0, 0.0, 1e-6);
        let w = ComplexInterval::from_f64_box(10.0, 0.0, 1e-6);
        let c = separating_circle(RingId::G, &z, &w).unwrap();
        assert!(matches!(
            classify_circle(RingId::G, &c).unwrap(),
            CircleVerdict::AllBad { .. }
        ));

        let z2 = ComplexInterval::from_f64_box(0.01, 0.0, 1e-9);
        let w2 = ComplexInterval::from_f64_box(0.02, 0.0, 1e-9);
        let c = separating_circle(RingId::G, &z2, &w2).unwrap();
        assert!(matches!(
            classify_circle(RingId::G, &c).unwrap(),
            CircleVerdict::AllBad { .. }
        ));

        assert!(matches!(
            separating_circle(RingId::G, &z, &z),
            Err(Error::EnclosuresOverlap)
        ));
    }
}
