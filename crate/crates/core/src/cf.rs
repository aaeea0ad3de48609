//! The expansion engine.
//!
//! An iteration sequence for a point z runs `z_{n+1} = (z_n - a_n)^{-1}`
//! with `0 < |z_n - a_n| < 1` certified at every step. Alongside it the
//! engine maintains the convergent recurrences
//!
//! ```text
//! p_n = a_n p_{n-1} + p_{n-2},   q_n = a_n q_{n-1} + q_{n-2}
//! ```
//!
//! with `p_{-1} = 1, q_{-1} = 0`, verifying `p_n q_{n-1} - p_{n-1} q_n =
//! (-1)^{n+1}` exactly at each step, plus certified enclosures of the
//! relative errors `delta_n = q_n (q_n z - p_n)` via the residue identity
//! `q_n z - p_n = (-1)^n (z_1 ... z_{n+1})^{-1}`.

use crate::algebraic::{transform_triple, SurdSpec, SurdState};
use crate::error::{Error, Result};
use crate::interval::{ComplexInterval, RealInterval};
use crate::rings::{
    cmp_dist_pair, covering_radius_sq, elements_within, nearest_elements,
    nearest_elements_filtered, KElt, Mat2, RingElt, RingId,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

pub const DEFAULT_PREC: u64 = 128;

/// Partial-quotient scripts: a fixed list, optionally cycling from an index.
#[derive(Clone, Debug)]
pub struct Script {
    entries: Vec<RingElt>,
    cycle_from: Option<usize>,
}

impl Script {
    pub fn finite(entries: Vec<RingElt>) -> Self {
        Script { entries, cycle_from: None }
    }

    /// `prefix` then `cycle` repeated forever.
    pub fn cyclic(prefix: Vec<RingElt>, cycle: Vec<RingElt>) -> Self {
        assert!(!cycle.is_empty(), "empty cycle");
        let cycle_from = prefix.len();
        let mut entries = prefix;
        entries.extend(cycle);
        Script { entries, cycle_from: Some(cycle_from) }
    }

    pub fn entry(&self, n: usize) -> Option<&RingElt> {
        if n < self.entries.len() {
            return Some(&self.entries[n]);
        }
        let c = self.cycle_from?;
        let period = self.entries.len() - c;
        Some(&self.entries[c + (n - c) % period])
    }

    pub fn cycle_len(&self) -> Option<usize> {
        self.cycle_from.map(|c| self.entries.len() - c)
    }

    pub fn cycle_from(&self) -> Option<usize> {
        self.cycle_from
    }
}

/// How the next partial quotient is chosen.
///
/// `NearestEven` restricts to the index-2 sublattice `{a + b*w : a + b even}`
/// and is experimental: its fundamental cell reaches distance 1, so the step
/// condition can fail at run time (reported as `ChooserFailed`). No
/// invariants are claimed for it.
#[derive(Clone, Debug)]
pub enum Chooser {
    NearestInteger,
    FarthestWithin(BigRational),
    NearestEven,
    Script(Script),
    Composite {
        primary: Box<Chooser>,
        overrides: BTreeMap<usize, RingElt>,
    },
}

impl Chooser {
    pub fn composite(primary: Chooser, overrides: BTreeMap<usize, RingElt>) -> Self {
        Chooser::Composite { primary: Box::new(primary), overrides }
    }

    pub fn select(&self, state: &SurdState, n: usize) -> Result<RingElt> {
        let ring = state.base().ring();
        match self {
            Chooser::NearestInteger => Ok(nearest_elements(ring, state)?
                .into_iter()
                .next()
                .expect("nearest set is nonempty")),
            Chooser::FarthestWithin(r) => {
                let one = BigRational::one();
                if r >= &one || (r * r) <= covering_radius_sq(ring) {
                    return Err(Error::ChooserFailed {
                        index: n,
                        reason: format!("farthest-within radius {r} not in (r0, 1)"),
                    });
                }
                let cands = elements_within(ring, state, r)?;
                let mut best = cands
                    .first()
                    .cloned()
                    .ok_or(Error::ChooserFailed {
                        index: n,
                        reason: "no lattice point within r".into(),
                    })?;
                for c in &cands[1..] {
                    if cmp_dist_pair(state, c, &best)? == Ordering::Greater {
                        best = c.clone();
                    }
                }
                Ok(best)
            }
            Chooser::NearestEven => {
                let two = BigInt::from(2);
                let even = move |g: &RingElt| ((&g.a + &g.b) % &two).is_zero();
                Ok(nearest_elements_filtered(ring, state, &even, 2.6)?
                    .into_iter()
                    .next()
                    .expect("filtered nearest set is nonempty"))
            }
            Chooser::Script(s) => s.entry(n).cloned().ok_or(Error::ChooserFailed {
                index: n,
                reason: "script exhausted".into(),
            }),
            Chooser::Composite { primary, overrides } => match overrides.get(&n) {
                Some(a) => Ok(a.clone()),
                None => primary.select(state, n),
            },
        }
    }

    /// Whether a verified state repeat `z_{n0} = z_{n0+k}` forces the whole
    /// tail to repeat. True for state-driven algorithms; for scripts and
    /// composites only when the index-dependence is itself periodic past n0.
    pub fn repeat_is_cycle(&self, n0: usize, k: usize) -> bool {
        match self {
            Chooser::NearestInteger | Chooser::FarthestWithin(_) | Chooser::NearestEven => true,
            Chooser::Script(s) => match (s.cycle_from, s.cycle_len()) {
                (Some(c), Some(p)) => n0 >= c && k % p == 0,
                _ => false,
            },
            Chooser::Composite { primary, overrides } => {
                primary.repeat_is_cycle(n0, k) && overrides.keys().all(|&i| i < n0)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Chooser::NearestInteger => "nearest".into(),
            Chooser::FarthestWithin(r) => format!("farthest:{r}"),
            Chooser::NearestEven => "nearest-even".into(),
            Chooser::Script(s) => format!(
                "script[{}]{}",
                s.entries.len(),
                if s.cycle_from.is_some() { " cyclic" } else { "" }
            ),
            Chooser::Composite { primary, overrides } => {
                format!("{}+{}overrides", primary.describe(), overrides.len())
            }
        }
    }
}

/// One step of an expansion: everything about index n.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub index: usize,
    /// a_n
    pub partial_quotient: RingElt,
    /// exact state of z_n
    pub state: SurdState,
    /// p_n
    pub p: RingElt,
    /// q_n
    pub q: RingElt,
    /// det g_n, verified equal to (-1)^{n+1}
    pub det_sign: i8,
    /// certified enclosure of delta_n = q_n (q_n z - p_n)
    pub delta: ComplexInterval,
    /// certified |delta_n|; stays tight at depths where the complex
    /// enclosure has degraded
    pub delta_abs: RealInterval,
    /// certified |z_n - a_n|
    pub dist: RealInterval,
    /// norm(q_{n-1}) <= norm(q_n), exact
    pub q_mono: bool,
}

/// Full trace of one continued-fraction run.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub ring: RingId,
    pub base: SurdSpec,
    pub steps: Vec<StepRecord>,
    /// z_{depth+1}
    pub final_state: SurdState,
    /// sup over 1 <= n <= depth of |z_n - a_n|
    pub radius: RealInterval,
    pub prec: u64,
}

impl Expansion {
    pub fn depth(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn partial_quotients(&self) -> Vec<RingElt> {
        self.steps.iter().map(|s| s.partial_quotient.clone()).collect()
    }

    /// State of z_n for 0 <= n <= depth+1.
    pub fn state(&self, n: usize) -> &SurdState {
        if n <= self.depth() {
            &self.steps[n].state
        } else if n == self.depth() + 1 {
            &self.final_state
        } else {
            panic!("state index {n} out of range");
        }
    }

    /// g_n = [[p_n, p_{n-1}], [q_n, q_{n-1}]].
    pub fn convergent_matrix(&self, n: usize) -> Mat2 {
        let (pm, qm) = if n == 0 {
            (RingElt::one(self.ring), RingElt::zero(self.ring))
        } else {
            (self.steps[n - 1].p.clone(), self.steps[n - 1].q.clone())
        };
        Mat2::new(self.steps[n].p.clone(), pm, self.steps[n].q.clone(), qm)
    }

    pub fn q_norms(&self) -> Vec<BigUint> {
        self.steps.iter().map(|s| s.q.norm()).collect()
    }

    /// Exact K(theta) coordinates of the residue `q_n z - p_n`: the pair
    /// (x, y) with residue = x + y*theta.
    fn residue_coords(&self, n: usize) -> (KElt, KElt) {
        let [a0, b0, _] = self.base.coeffs();
        let two = BigInt::from(2);
        let two_a = KElt::from_ring(a0.mul_int(&two));
        let s = BigInt::from(self.base.branch());
        let q = &self.steps[n].q;
        let p = &self.steps[n].p;
        let x_num = q.mul(&b0.neg()).sub(&p.mul(&a0.mul_int(&two)));
        let x = KElt::from_ring(x_num).div(&two_a);
        let y = KElt::from_ring(q.mul_int(&s)).div(&two_a);
        (x, y)
    }

    /// Certified enclosure of `q_n z - p_n` from its exact coordinates.
    pub fn residue_interval(&self, n: usize, prec: u64) -> ComplexInterval {
        let (x, y) = self.residue_coords(n);
        let pad = prec + self.steps[n].q.norm().bits() + 16;
        let th = self.base.theta(pad);
        x.interval(pad)
            .add(&y.interval(pad).mul(&th, pad))
            .round_out(prec + 8)
    }

    /// `|q_n z - p_n| * |z_1 ... z_{n+1}|` for each n, which the residue
    /// identity pins to exactly 1. Computed from exact residues against an
    /// independent running product of state enclosures.
    pub fn residue_identity_bounds(&self, prec: u64) -> Vec<RealInterval> {
        let mut prod = ComplexInterval::one();
        let mut out = Vec::with_capacity(self.steps.len());
        for n in 0..=self.depth() {
            let z_next = self.state(n + 1);
            prod = prod.mul(&z_next.enclosure(prec), prec);
            let r = self.residue_interval(n, prec);
            out.push(r.mul(&prod, prec).abs(prec));
        }
        out
    }
}

struct Engine {
    chooser: Chooser,
    state: SurdState,
    n: usize,
    p_prev: RingElt,
    p_prev2: RingElt,
    q_prev: RingElt,
    q_prev2: RingElt,
    /// z_1 ... z_{n+1}; box products lose relative precision under generic
    /// rotation, so this enclosure may grow slack on long runs
    z_prod: ComplexInterval,
    /// |z_1 ... z_{n+1}|^2; real products keep additive relative error
    z_prod_abs_sq: RealInterval,
    prec: u64,
}

impl Engine {
    fn new(base: &SurdSpec, chooser: &Chooser, prec: u64) -> Engine {
        let ring = base.ring();
        Engine {
            chooser: chooser.clone(),
            state: base.state(),
            n: 0,
            p_prev: RingElt::one(ring),
            p_prev2: RingElt::zero(ring),
            q_prev: RingElt::zero(ring),
            q_prev2: RingElt::one(ring),
            z_prod: ComplexInterval::one(),
            z_prod_abs_sq: RealInterval::from_int(1),
            prec,
        }
    }

    fn advance(&mut self) -> Result<StepRecord> {
        let n = self.n;
        let a = self.chooser.select(&self.state, n)?;
        if n >= 1 && a.is_zero() {
            return Err(Error::ChooserFailed {
                index: n,
                reason: "partial quotient 0 at n >= 1".into(),
            });
        }
        if self.state.cmp_abs2(&a, &BigRational::one()) != Ordering::Less {
            return Err(Error::ChooserFailed {
                index: n,
                reason: format!("|z_{n} - ({a})| >= 1"),
            });
        }
        let dist = self.state.dist_to(&a, self.prec);

        let p = a.mul(&self.p_prev).add(&self.p_prev2);
        let q = a.mul(&self.q_prev).add(&self.q_prev2);
        let det = p.mul(&self.q_prev).sub(&self.p_prev.mul(&q));
        let want = if n % 2 == 0 { -1i64 } else { 1i64 };
        assert!(
            det == RingElt::from_int(det.ring, want),
            "determinant identity violated at step {n}"
        );

        let next = self.state.moebius_image(&Mat2::step_matrix(&a))?;
        let enc = next.enclosure(self.prec);
        self.z_prod = self.z_prod.mul(&enc, self.prec);
        self.z_prod_abs_sq = self
            .z_prod_abs_sq
            .mul(&enc.abs_sq())
            .round_out(self.prec);

        // |delta_n| = |q_n| / |z_1...z_{n+1}| from the tight real product
        let prod_abs = self.z_prod_abs_sq.sqrt(self.prec);
        let q_iv = q.interval(self.prec);
        let delta_abs = q_iv
            .abs(self.prec)
            .div(&prod_abs, self.prec)
            .expect("|z_1...z_{n+1}| > 1");

        // complex enclosure: the identity route when still meaningful,
        // intersected with the |delta_n| bounding box
        let h = delta_abs.hi().clone();
        let disk = ComplexInterval::new(
            RealInterval::new(-&h, h.clone()),
            RealInterval::new(-&h, h.clone()),
        );
        let delta = match self.z_prod.recip(self.prec) {
            Some(inv) => {
                let d = q_iv.mul(&inv, self.prec);
                let d = if n % 2 == 0 { d } else { d.neg() };
                d.meet(&disk).expect("both routes enclose delta_n")
            }
            None => disk,
        };

        let q_mono = self.q_prev.norm() <= q.norm();
        let record = StepRecord {
            index: n,
            partial_quotient: a,
            state: self.state.clone(),
            p: p.clone(),
            q: q.clone(),
            det_sign: if n % 2 == 0 { -1 } else { 1 },
            delta,
            delta_abs,
            dist,
            q_mono,
        };

        self.p_prev2 = std::mem::replace(&mut self.p_prev, p);
        self.q_prev2 = std::mem::replace(&mut self.q_prev, q);
        self.state = next;
        self.n += 1;
        Ok(record)
    }
}

/// Run `depth + 1` steps (indices 0..=depth) from the base surd.
pub fn expand(base: &SurdSpec, chooser: &Chooser, depth: usize) -> Result<Expansion> {
    expand_with_prec(base, chooser, depth, DEFAULT_PREC)
}

pub fn expand_with_prec(
    base: &SurdSpec,
    chooser: &Chooser,
    depth: usize,
    prec: u64,
) -> Result<Expansion> {
    if depth < 1 {
        return Err(Error::InvalidInput("depth must be >= 1".into()));
    }
    let mut engine = Engine::new(base, chooser, prec);
    let mut steps = Vec::with_capacity(depth + 1);
    let mut radius = RealInterval::zero();
    for n in 0..=depth {
        let rec = engine.advance()?;
        if n >= 1 {
            radius = radius.max_with(&rec.dist);
        }
        steps.push(rec);
    }
    Ok(Expansion {
        ring: base.ring(),
        base: base.clone(),
        steps,
        final_state: engine.state,
        radius,
        prec,
    })
}

/// One iteration step: the chosen partial quotient and the next state.
pub fn step(state: &SurdState, chooser: &Chooser, n: usize) -> Result<(RingElt, SurdState)> {
    let a = chooser.select(state, n)?;
    if n >= 1 && a.is_zero() {
        return Err(Error::ChooserFailed {
            index: n,
            reason: "partial quotient 0 at n >= 1".into(),
        });
    }
    if state.cmp_abs2(&a, &BigRational::one()) != Ordering::Less {
        return Err(Error::ChooserFailed {
            index: n,
            reason: format!("|z - ({a})| >= 1"),
        });
    }
    let next = state.moebius_image(&Mat2::step_matrix(&a))?;
    Ok((a, next))
}

/// Certified enclosures of the relative errors `delta_n`, computed directly
/// from the exact residue coordinates and cross-checked against the stored
/// identity-based enclosures; the two must intersect, and the meet is
/// returned.
pub fn relative_errors(e: &Expansion) -> Vec<ComplexInterval> {
    (0..=e.depth())
        .map(|n| {
            let q_iv = e.steps[n].q.interval(e.prec);
            let direct = e.residue_interval(n, e.prec).mul(&q_iv, e.prec);
            direct
                .meet(&e.steps[n].delta)
                .expect("independent delta enclosures must intersect")
        })
        .collect()
}

/// Indices n >= 1 with certified `|z_n - a_n| <= r` and exact
/// `norm(q_{n-1}) <= norm(q_n)`.
///
/// The distance comparison falls back to the exact boundary predicate, so
/// ties at exactly r are decided rather than reported as ambiguous.
pub fn neat_indices(e: &Expansion, r: &BigRational) -> Vec<usize> {
    assert!(r.is_positive() && r < &BigRational::one(), "need 0 < r < 1");
    let r_sq = r * r;
    (1..=e.depth())
        .filter(|&n| {
            let s = &e.steps[n];
            s.q_mono && s.state.cmp_abs2(&s.partial_quotient, &r_sq) != Ordering::Greater
        })
        .collect()
}

/// Exact denominator-growth criterion on a partial-quotient sequence.
///
/// `quotients[i]` is a_{i+1} (the sequence from index 1; a_0 is
/// unconstrained). Requires every |a_n| > 1, and for consecutive pairs:
/// if |a_{n+1}| = sqrt(2) then |a_n + conj(a_{n+1})| >= 2, and if
/// |a_{n+1}| = sqrt(3) then |2 a_n + conj(a_{n+1})| >= 3. All checks are on
/// exact squared norms.
pub fn mono_criterion(quotients: &[RingElt]) -> bool {
    let two = BigUint::from(2u32);
    let three = BigUint::from(3u32);
    let four = BigUint::from(4u32);
    let nine = BigUint::from(9u32);
    for a in quotients {
        if a.norm() < two {
            return false;
        }
    }
    for w in quotients.windows(2) {
        let (cur, next) = (&w[0], &w[1]);
        let nn = next.norm();
        if nn == two {
            if cur.add(&next.conj()).norm() < four {
                return false;
            }
        } else if nn == three {
            let double = cur.mul_int(&BigInt::from(2));
            if double.add(&next.conj()).norm() < nine {
                return false;
            }
        }
    }
    true
}

/// A verified eventual period: states at `preperiod` and `preperiod+period`
/// are exactly equal and the chooser repeats from there on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleReport {
    pub preperiod: usize,
    pub period: usize,
    pub witness: (usize, usize),
}

/// Find the first state repeat that provably closes a cycle, within
/// `n_max` steps.
///
/// States are indexed by the canonical key of their value and every hash
/// hit is verified with the exact equality test. A repeat alone is not
/// enough when the chooser depends on the step index (scripts, composites
/// with pending overrides); such repeats are skipped, which is why the
/// non-periodic scripted constructions correctly report `None` even though
/// individual states recur.
pub fn detect_cycle(
    base: &SurdSpec,
    chooser: &Chooser,
    n_max: usize,
) -> Result<Option<CycleReport>> {
    let mut engine = Engine::new(base, chooser, 64);
    let mut states: Vec<SurdState> = Vec::new();
    let mut index: HashMap<crate::algebraic::StateKey, Vec<usize>> = HashMap::new();
    for n in 0..=n_max {
        let state = engine.state.clone();
        let key = state.value_key();
        if let Some(prev) = index.get(&key) {
            // larger m first: minimal period among repeats at this step
            for &m in prev.iter().rev() {
                if states[m].states_equal(&state) && chooser.repeat_is_cycle(m, n - m) {
                    return Ok(Some(CycleReport {
                        preperiod: m,
                        period: n - m,
                        witness: (m, n),
                    }));
                }
            }
        }
        index.entry(key).or_default().push(n);
        states.push(state);
        if n < n_max {
            engine.advance()?;
        }
    }
    Ok(None)
}

/// Reconstruct the quadratic surd whose expansion has the given preperiod
/// and repeating period, validated by re-expansion under the cyclic script.
pub fn periodic_to_surd(
    ring: RingId,
    preperiod: &[RingElt],
    period: &[RingElt],
) -> Result<SurdSpec> {
    if period.is_empty() {
        return Err(Error::InvalidInput("period must be nonempty".into()));
    }
    // Fixed-point quadratic of the period's Moebius product w = M(w).
    let mut m = Mat2::identity(ring);
    for a in period {
        m = m.mul(&quotient_matrix(a));
    }
    let t_w = [m.c.clone(), m.d.sub(&m.a), m.b.neg()];
    if t_w[0].is_zero() {
        return Err(Error::InvalidExpansion);
    }
    let mut h = Mat2::identity(ring);
    for a in preperiod {
        h = h.mul(&quotient_matrix(a));
    }
    let tri = transform_triple(&t_w, &h);
    let h_det = h.det_sign().expect("quotient matrices are unimodular");

    let script = Chooser::Script(Script::cyclic(preperiod.to_vec(), period.to_vec()));
    let depth = preperiod.len() + period.len();
    for s_w in [1i8, -1i8] {
        let spec = match SurdSpec::with_branch(
            ring,
            tri[0].clone(),
            tri[1].clone(),
            tri[2].clone(),
            s_w * h_det,
        ) {
            Ok(s) => s,
            Err(Error::ReducibleOverK) => return Err(Error::InvalidExpansion),
            Err(e) => return Err(e),
        };
        if let Ok(e) = expand(&spec, &script, depth) {
            let at = preperiod.len();
            if e.state(at).states_equal(e.state(at + period.len())) {
                return Ok(spec);
            }
        }
    }
    Err(Error::InvalidExpansion)
}

/// Matrix of w -> a + 1/w.
fn quotient_matrix(a: &RingElt) -> Mat2 {
    let ring = a.ring;
    Mat2::new(a.clone(), RingElt::one(ring), RingElt::one(ring), RingElt::zero(ring))
}

/// min over n of |delta_n|: a certified lower-bound probe for bad
/// approximability along the convergents.
pub fn approx_quality(e: &Expansion) -> RealInterval {
    assert!(!e.steps.is_empty());
    let mut acc: Option<RealInterval> = None;
    for s in &e.steps {
        acc = Some(match acc {
            None => s.delta_abs.clone(),
            Some(m) => m.min_with(&s.delta_abs),
        });
    }
    acc.unwrap()
}
