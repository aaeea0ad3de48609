//! Binary sigma-forms over k^{-1}*Gamma and their orbit under the
//! convergent matrices of an expansion.
//!
//! A sigma-form with matrix X = [[A, B], [C, D]] is the function
//! `f(xi, eta) = A xi^s xi + B xi^s eta + C eta^s xi + D eta^s eta`, where
//! `s` is either the identity (binary quadratic form) or complex
//! conjugation (Hermitian form). X is sigma-symmetric when `C = B^s` and
//! `A, D` are fixed by sigma. The transformation is
//! `X_g = (g^t)^s X g`, which preserves sigma-symmetry and determinant for
//! unimodular g; along an expansion the matrices `X_{g_n}` stay within a
//! finite set over any index set with a uniform distance bound and
//! non-decreasing denominator norms, and the entries obey explicit bounds
//! in terms of sup |delta_n|.

use crate::algebraic::{SurdSpec, SurdState};
use crate::cf::Expansion;
use crate::dyadic::{rational_dir, sqrt_dir, Dyadic};
use crate::error::{Error, Result};
use crate::interval::ComplexInterval;
use crate::rings::{KElt, Mat2, RingElt};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;

/// The twist applied to the first argument of each monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sigma {
    Identity,
    Conjugation,
}

impl Sigma {
    pub fn apply(self, x: &RingElt) -> RingElt {
        match self {
            Sigma::Identity => x.clone(),
            Sigma::Conjugation => x.conj(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sigma::Identity => "quadratic",
            Sigma::Conjugation => "hermitian",
        }
    }
}

/// Sigma-symmetric 2x2 matrix with entries in k^{-1}*Gamma; the stored ring
/// elements are the numerators over the declared k.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormMatrix {
    sigma: Sigma,
    k: BigUint,
    a: RingElt,
    b: RingElt,
    c: RingElt,
    d: RingElt,
}

impl FormMatrix {
    pub fn new(
        sigma: Sigma,
        k: BigUint,
        a: RingElt,
        b: RingElt,
        c: RingElt,
        d: RingElt,
    ) -> Result<FormMatrix> {
        if k.is_zero() {
            return Err(Error::InvalidInput("k must be positive".into()));
        }
        let sym = match sigma {
            Sigma::Identity => c == b,
            Sigma::Conjugation => {
                c == b.conj() && a.is_real_integer() && d.is_real_integer()
            }
        };
        if !sym {
            return Err(Error::InvalidInput("matrix is not sigma-symmetric".into()));
        }
        Ok(FormMatrix { sigma, k, a, b, c, d })
    }

    /// [[a, b], [b, c]] with sigma the identity.
    pub fn quadratic(k: BigUint, a: RingElt, b: RingElt, c: RingElt) -> Result<FormMatrix> {
        FormMatrix::new(Sigma::Identity, k, a, b.clone(), b, c)
    }

    /// [[a, b], [conj(b), d]] with sigma the conjugation; a, d real.
    pub fn hermitian(k: BigUint, a: RingElt, b: RingElt, d: RingElt) -> Result<FormMatrix> {
        let c = b.conj();
        FormMatrix::new(Sigma::Conjugation, k, a, b, c, d)
    }

    pub fn sigma(&self) -> Sigma {
        self.sigma
    }

    pub fn k(&self) -> &BigUint {
        &self.k
    }

    /// Numerators (A, B, C, D) over k.
    pub fn entries(&self) -> [&RingElt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Numerator of the determinant over k^2.
    pub fn det_numerator(&self) -> RingElt {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn det_rational(&self) -> Option<BigRational> {
        let n = self.det_numerator();
        if !n.is_real_integer() {
            return None;
        }
        let k2: BigInt = (&self.k * &self.k).into();
        Some(BigRational::new(n.a.clone(), k2))
    }

    /// `X_g = (g^t)^sigma X g`; requires det(g) = +/-1.
    pub fn transform(&self, g: &Mat2) -> FormMatrix {
        assert!(
            g.det_sign().is_some(),
            "form transform requires a determinant +/-1 matrix"
        );
        let gs = g.transpose().conj_by(self.sigma);
        // rows of (g^t)^sigma times X times g
        let x11 = &self.a;
        let x12 = &self.b;
        let x21 = &self.c;
        let x22 = &self.d;
        // m = gs * X
        let m11 = gs.a.mul(x11).add(&gs.b.mul(x21));
        let m12 = gs.a.mul(x12).add(&gs.b.mul(x22));
        let m21 = gs.c.mul(x11).add(&gs.d.mul(x21));
        let m22 = gs.c.mul(x12).add(&gs.d.mul(x22));
        // r = m * g
        let r = FormMatrix {
            sigma: self.sigma,
            k: self.k.clone(),
            a: m11.mul(&g.a).add(&m12.mul(&g.c)),
            b: m11.mul(&g.b).add(&m12.mul(&g.d)),
            c: m21.mul(&g.a).add(&m22.mul(&g.c)),
            d: m21.mul(&g.b).add(&m22.mul(&g.d)),
        };
        debug_assert_eq!(r.c, self.sigma.apply(&r.b));
        debug_assert_eq!(r.det_numerator(), self.det_numerator());
        r
    }

    /// Exact value of the form at field elements.
    pub fn eval_exact(&self, xi: &KElt, eta: &KElt) -> KElt {
        let s = |x: &KElt| match self.sigma {
            Sigma::Identity => x.clone(),
            Sigma::Conjugation => x.conj(),
        };
        let xs = s(xi);
        let es = s(eta);
        let sum = KElt::from_ring(self.a.clone())
            .mul(&xs)
            .mul(xi)
            .add(&KElt::from_ring(self.b.clone()).mul(&xs).mul(eta))
            .add(&KElt::from_ring(self.c.clone()).mul(&es).mul(xi))
            .add(&KElt::from_ring(self.d.clone()).mul(&es).mul(eta));
        sum.div(&KElt::from_rational(
            self.a.ring,
            &BigRational::from_integer(self.k.clone().into()),
        ))
    }

    /// Exact numerator over k of the form at ring elements.
    pub fn eval_ring_numerator(&self, p: &RingElt, q: &RingElt) -> RingElt {
        let ps = self.sigma.apply(p);
        let qs = self.sigma.apply(q);
        self.a
            .mul(&ps)
            .mul(p)
            .add(&self.b.mul(&ps).mul(q))
            .add(&self.c.mul(&qs).mul(p))
            .add(&self.d.mul(&qs).mul(q))
    }

    /// Certified enclosure of the form value at enclosed arguments.
    pub fn eval_interval(
        &self,
        xi: &ComplexInterval,
        eta: &ComplexInterval,
        prec: u64,
    ) -> ComplexInterval {
        let s = |x: &ComplexInterval| match self.sigma {
            Sigma::Identity => x.clone(),
            Sigma::Conjugation => x.conj(),
        };
        let xs = s(xi);
        let es = s(eta);
        let term = |coef: &RingElt, l: &ComplexInterval, r: &ComplexInterval| {
            coef.interval(prec).mul(l, prec).mul(r, prec)
        };
        term(&self.a, &xs, xi)
            .add(&term(&self.b, &xs, eta))
            .add(&term(&self.c, &es, xi))
            .add(&term(&self.d, &es, eta))
            .div_nat(&self.k, prec)
    }

    /// Enclosure of f(v, 1) at a surd state.
    pub fn eval_at_state(&self, state: &SurdState, prec: u64) -> ComplexInterval {
        self.eval_interval(&state.enclosure(prec), &ComplexInterval::one(), prec)
    }

    /// Exact test of `f(v, 1) = 0` at a surd state.
    pub fn is_zero_at_state(&self, state: &SurdState) -> bool {
        match self.sigma {
            Sigma::Identity => {
                // f(v,1) = A v^2 + (B+C) v + D vanishes iff the triple is
                // zero or a K-multiple of the state's minimal triple.
                let a = &self.a;
                let bc = self.b.add(&self.c);
                let d = &self.d;
                if a.is_zero() && bc.is_zero() && d.is_zero() {
                    return true;
                }
                let [ta, tb, tc] = state.triple();
                a.mul(tb) == bc.mul(ta) && a.mul(tc) == d.mul(ta) && bc.mul(tc) == d.mul(tb)
            }
            Sigma::Conjugation => {
                let (x, y) = state.k_coords();
                let a = KElt::from_ring(self.a.clone());
                let b = KElt::from_ring(self.b.clone());
                let c = KElt::from_ring(self.c.clone());
                let d = KElt::from_ring(self.d.clone());
                let xc = x.conj();
                let yc = y.conj();
                let c0 = a.mul(&x).mul(&xc).add(&b.mul(&xc)).add(&c.mul(&x)).add(&d);
                let c1 = a.mul(&y).mul(&xc).add(&c.mul(&y));
                let c2 = a.mul(&x).mul(&yc).add(&b.mul(&yc));
                let c3 = a.mul(&y).mul(&yc);
                state.base().theta_expr_is_zero(&[c0, c1, c2, c3])
            }
        }
    }
}

impl fmt::Display for FormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[[{}, {}], [{}, {}]]/{}",
            self.sigma.label(),
            self.a,
            self.b,
            self.c,
            self.d,
            self.k
        )
    }
}

impl Mat2 {
    fn conj_by(&self, sigma: Sigma) -> Mat2 {
        match sigma {
            Sigma::Identity => self.clone(),
            Sigma::Conjugation => self.conj_entries(),
        }
    }
}

/// The quadratic form of a surd's own minimal polynomial: X = [[A, B/2],
/// [B/2, C]] over 2^{-1}Gamma (reduced to Gamma when B is even).
pub fn surd_to_form(spec: &SurdSpec) -> FormMatrix {
    let [a, b, c] = spec.coeffs();
    let two = BigInt::from(2);
    if b.divisible_by_int(&two) {
        let half_b = b.div_exact_int(&two);
        FormMatrix::quadratic(BigUint::one(), a.clone(), half_b, c.clone())
            .expect("construction is sigma-symmetric")
    } else {
        FormMatrix::quadratic(
            BigUint::from(2u32),
            a.mul_int(&two),
            b.clone(),
            c.mul_int(&two),
        )
        .expect("construction is sigma-symmetric")
    }
}

/// Zero set of a Hermitian quadratic polynomial `a z conj(z) + b conj(z) +
/// conj(b) z + c` with a, c real.
#[derive(Clone, Debug, PartialEq)]
pub enum ZeroSet {
    /// |z - center|^2 = radius_sq
    Circle { center: KElt, radius_sq: BigRational },
    /// 2 Re(conj(normal) z) + offset = 0
    Line { normal: RingElt, offset: BigInt },
    Point(KElt),
    Empty,
}

/// Classify the zero set of a Hermitian form: for nonzero leading entry a
/// the set is the circle `|z + b/a|^2 = (|b|^2 - a c)/a^2` when the right
/// side is positive, degenerating to a point at zero and to the empty set
/// when negative; for a = 0 and b nonzero it is an affine line.
pub fn classify_zero_set(x: &FormMatrix) -> Result<ZeroSet> {
    if x.sigma != Sigma::Conjugation {
        return Err(Error::InvalidInput(
            "zero-set classification applies to Hermitian forms".into(),
        ));
    }
    if x.is_zero() {
        return Err(Error::DegenerateForm);
    }
    let a = &x.a.a; // real by construction
    let d = &x.d.a;
    if !a.is_zero() {
        let sign = BigInt::from(if a.is_negative() { -1 } else { 1 });
        let center = KElt::new(
            x.b.neg().mul_int(&sign),
            (a * &sign).to_biguint().unwrap(),
        );
        let norm_b: BigInt = x.b.norm().into();
        let radius_sq = BigRational::new(norm_b - a * d, a * a);
        return Ok(if radius_sq.is_positive() {
            ZeroSet::Circle { center, radius_sq }
        } else if radius_sq.is_zero() {
            ZeroSet::Point(center)
        } else {
            ZeroSet::Empty
        });
    }
    if !x.b.is_zero() {
        return Ok(ZeroSet::Line { normal: x.b.clone(), offset: d.clone() });
    }
    // a = b = 0, d != 0: no zeros
    Ok(ZeroSet::Empty)
}

/// Distinct matrices `X_{g_n}` over an index set, with bookkeeping.
#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub distinct: Vec<FormMatrix>,
    /// index of first appearance for each distinct matrix
    pub first_seen: Vec<usize>,
    /// (n, id into distinct) for every n in the input set
    pub per_index: Vec<(usize, usize)>,
    /// first n after which no new matrix appeared (0 for empty input)
    pub stabilization_index: usize,
    /// indices where the leading entry A_n vanishes, i.e. the convergent
    /// p_n/q_n lands on the zero set of the form
    pub convergent_zero_hits: Vec<usize>,
}

/// Compute `{X_{g_n} : n in n_set}` along an expansion whose base point is a
/// nontrivial zero of the form.
///
/// The matrices are built incrementally (`g_{n+1} = g_n h_{n+1}` for the
/// single-step matrix h), deduplicated by exact entries, and each reported
/// index is cross-checked against the direct identities
/// `A_n = f(p_n, q_n)` and `D_n = f(p_{n-1}, q_{n-1})`.
pub fn orbit(x: &FormMatrix, e: &Expansion, n_set: &[usize]) -> Result<OrbitReport> {
    if !x.is_zero_at_state(&e.base.state()) {
        return Err(Error::NotAZero);
    }
    let mut report = OrbitReport {
        distinct: Vec::new(),
        first_seen: Vec::new(),
        per_index: Vec::new(),
        stabilization_index: 0,
        convergent_zero_hits: Vec::new(),
    };
    if n_set.is_empty() {
        return Ok(report);
    }
    let max_n = *n_set.iter().max().unwrap();
    assert!(max_n <= e.depth(), "orbit index beyond expansion depth");

    let mut ids: HashMap<[RingElt; 4], usize> = HashMap::new();
    let mut want = n_set.iter().copied().collect::<std::collections::BTreeSet<_>>();
    let mut cur = x.transform(&e.convergent_matrix(0));
    for n in 0..=max_n {
        if n > 0 {
            let a_n = &e.steps[n].partial_quotient;
            let ring = a_n.ring;
            let h = Mat2::new(
                a_n.clone(),
                RingElt::one(ring),
                RingElt::one(ring),
                RingElt::zero(ring),
            );
            cur = cur.transform(&h);
        }
        if !want.remove(&n) {
            continue;
        }
        // cross-check against direct evaluation at the convergent pair
        let gm = e.convergent_matrix(n);
        assert!(
            cur.a == x.eval_ring_numerator(&gm.a, &gm.c),
            "A_n mismatch at {n}"
        );
        assert!(
            cur.d == x.eval_ring_numerator(&gm.b, &gm.d),
            "D_n mismatch at {n}"
        );
        if cur.a.is_zero() {
            report.convergent_zero_hits.push(n);
        }
        let key = [cur.a.clone(), cur.b.clone(), cur.c.clone(), cur.d.clone()];
        let id = match ids.get(&key) {
            Some(&id) => id,
            None => {
                let id = report.distinct.len();
                ids.insert(key, id);
                report.distinct.push(cur.clone());
                report.first_seen.push(n);
                id
            }
        };
        report.per_index.push((n, id));
    }
    report.stabilization_index = report.first_seen.iter().copied().max().unwrap_or(0);
    Ok(report)
}

/// Which coefficient multiplies |delta_{n-1}|^2 in the D_n bound: the
/// original derivation prints |A z| where symmetry with the A_n bound
/// suggests |A|; both are available.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DBoundCoefficient {
    AsStated,
    Symmetric,
}

#[derive(Clone, Debug)]
pub struct EntryBounds {
    pub a_bound: Dyadic,
    pub d_bound: Dyadic,
    pub b_bound: Dyadic,
}

fn abs_upper(e: &RingElt, k: &BigUint, prec: u64) -> Dyadic {
    let hi = e.interval(prec).abs(prec).hi().clone();
    crate::dyadic::div_dir(&hi, &Dyadic::from_bigint(&k.clone().into()), prec, false)
}

/// Upper bounds on the entries of every orbit matrix over a neat index set
/// with `sup |delta_n| <= m_bound`:
///
/// ```text
/// |A_n| <= (|2Az| + |B| + |C|) M + |A| M^2
/// |D_n| <= (|2Az| + |B| + |C|) (M+1) + |Az| (M+1)^2
/// |B_n|^2 = |A_n D_n - (AD - B B^sigma)|
/// ```
///
/// using `|delta_{n-1}| <= |delta_n| + 1 <= M + 1` on such index sets.
pub fn entry_bounds(
    x: &FormMatrix,
    z: &ComplexInterval,
    m_bound: &BigRational,
    variant: DBoundCoefficient,
) -> EntryBounds {
    let prec = 96u64;
    let abs_a = abs_upper(&x.a, &x.k, prec);
    let abs_b = abs_upper(&x.b, &x.k, prec);
    let abs_c = abs_upper(&x.c, &x.k, prec);
    let z_hi = z.abs(prec).hi().clone();
    let az = &abs_a * &z_hi;
    let common = &(&(&az + &az) + &abs_b) + &abs_c;
    let m = rational_dir(m_bound, prec, false);
    let m1 = &m + &Dyadic::one();

    let a_bound = &(&common * &m) + &(&abs_a * &(&m * &m));
    let d_coef = match variant {
        DBoundCoefficient::AsStated => az.clone(),
        DBoundCoefficient::Symmetric => abs_a.clone(),
    };
    let d_bound = &(&common * &m1) + &(&d_coef * &(&m1 * &m1));

    // |AD - B B^sigma| upper bound from the exact determinant numerator
    let det_num = x.det_numerator();
    let k2 = &x.k * &x.k;
    let det_abs = abs_upper(&det_num, &k2, prec);
    let b_sq = &(&a_bound * &d_bound) + &det_abs;
    let b_bound = sqrt_dir(&b_sq, prec, false);
    EntryBounds { a_bound, d_bound, b_bound }
}

/// max of the entry bounds: a single computable constant dominating every
/// orbit-matrix entry.
pub fn entry_bound(
    x: &FormMatrix,
    z: &ComplexInterval,
    m_bound: &BigRational,
    variant: DBoundCoefficient,
) -> Dyadic {
    let b = entry_bounds(x, z, m_bound, variant);
    b.a_bound.max(b.d_bound).max(b.b_bound)
}

/// For a Hermitian form with no zeros in K: a bound on the partial
/// quotients of any expansion of a point on its zero circle, over a neat
/// index set with `sup |delta_n| <= m_bound`. Each state `z_{n+1}` lies on
/// the circle of the transformed form, whose center has modulus at most
/// `k |B_n|` and whose radius is `sqrt(-det X)/|A_n| <= k sqrt(-det X)`,
/// and partial quotients sit within distance 1 of their state.
pub fn hermitian_quotient_bound(
    x: &FormMatrix,
    z: &ComplexInterval,
    m_bound: &BigRational,
) -> Dyadic {
    assert_eq!(x.sigma, Sigma::Conjugation);
    let b = entry_bounds(x, z, m_bound, DBoundCoefficient::AsStated);
    let det = x.det_rational().expect("hermitian determinant is rational");
    let neg_det = -det;
    assert!(
        neg_det.is_positive(),
        "quotient bound needs a form with a genuine zero circle"
    );
    let prec = 96u64;
    let radius = sqrt_dir(&rational_dir(&neg_det, prec, false), prec, false);
    let k = Dyadic::from_bigint(&x.k.clone().into());
    &(&k * &(&b.b_bound + &radius)) + &Dyadic::one()
}
