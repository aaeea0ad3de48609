//! Shared helpers for the integration suites.

use ccf_core::algebraic::SurdSpec;
use ccf_core::rings::{RingElt, RingId};
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn gauss(a: i64, b: i64) -> RingElt {
    RingElt::new(RingId::G, a, b)
}

pub fn sqrt2_spec() -> SurdSpec {
    SurdSpec::principal(RingId::G, gauss(1, 0), gauss(0, 0), gauss(-2, 0)).unwrap()
}

pub fn sqrt2_i_spec() -> SurdSpec {
    SurdSpec::principal(RingId::G, gauss(1, 0), gauss(0, 0), gauss(2, 0)).unwrap()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Random nonzero element with norm at most `max_norm`.
pub fn random_elt(rng: &mut ChaCha8Rng, ring: RingId, max_norm: u64, nonzero: bool) -> RingElt {
    loop {
        let e = RingElt::new(ring, rng.gen_range(-7..=7), rng.gen_range(-7..=7));
        if nonzero && e.is_zero() {
            continue;
        }
        if e.norm() <= max_norm.into() {
            return e;
        }
    }
}

/// Random quadratic surd with coefficient norms at most `max_norm`.
pub fn random_surd(rng: &mut ChaCha8Rng, ring: RingId, max_norm: u64) -> SurdSpec {
    loop {
        let a = random_elt(rng, ring, max_norm, true);
        let b = random_elt(rng, ring, max_norm, false);
        let c = random_elt(rng, ring, max_norm, false);
        let branch = if rng.gen_bool(0.5) { 1 } else { -1 };
        if let Ok(s) = SurdSpec::with_branch(ring, a, b, c, branch) {
            return s;
        }
    }
}
