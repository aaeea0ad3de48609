//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).

mod common;

use common::*;

use ccf_core::algebraic::SurdSpec;
use ccf_core::cf::{
    approx_quality, detect_cycle, expand, expand_with_prec, mono_criterion, neat_indices,
    periodic_to_surd, Chooser, Expansion,
};
use ccf_core::diophantine::{
    circle_point_surd, classify_circle, congruence_obstruction, is_norm, separating_circle,
    CircleSpec, CircleVerdict,
};
use ccf_core::forms::{
    entry_bound, hermitian_quotient_bound, surd_to_form, DBoundCoefficient, FormMatrix,
};
use ccf_core::interval::{ComplexInterval, RealInterval};
use ccf_core::rings::{covering_radius, KElt, Mat2, RingElt, RingId};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

fn neat_r(ring: RingId) -> BigRational {
    let hi = covering_radius(ring).hi().to_rational();
    (hi + BigRational::one()) / BigRational::from_integer(2.into())
}

/// delta_n recomputed at arbitrary precision from the exact residue.
fn delta_at(e: &Expansion, n: usize, prec: u64) -> ComplexInterval {
    e.residue_interval(n, prec)
        .mul(&e.steps[n].q.interval(prec), prec)
}

#[test]
fn criterion_01_sqrt2_golden_run() {
    let e = expand(&sqrt2_spec(), &Chooser::NearestInteger, 50).unwrap();
    let a = e.partial_quotients();
    assert_eq!(a[0], gauss(1, 0));
    for (n, an) in a.iter().enumerate().skip(1) {
        assert_eq!(*an, gauss(2, 0), "a_{n}");
    }
    let c = detect_cycle(&sqrt2_spec(), &Chooser::NearestInteger, 100)
        .unwrap()
        .expect("sqrt2 must cycle");
    assert_eq!((c.preperiod, c.period), (1, 1));
    println!("[PASS] criterion 1: sqrt(2) golden run (a0=1, a_n=2, cycle (1,1))");
}

#[test]
fn criterion_02_nonperiodic_construction() {
    // (3, -2, 3) substituted at m = 4^k; entries at 1024 and beyond lie
    // past the tested depth but keep the chooser honestly non-periodic.
    let mut ov = BTreeMap::new();
    for k in 1..=5u32 {
        let m = 4usize.pow(k);
        ov.insert(m, gauss(3, 0));
        ov.insert(m + 1, gauss(-2, 0));
        ov.insert(m + 2, gauss(3, 0));
    }
    let ch = Chooser::composite(Chooser::NearestInteger, ov);
    let e = expand(&sqrt2_spec(), &ch, 1000).expect("every step must validate");

    for (m, want) in [(4, 3i64), (5, -2), (6, 3), (16, 3), (256, 3)] {
        assert_eq!(e.steps[m].partial_quotient, gauss(want, 0));
    }

    let c = detect_cycle(&sqrt2_spec(), &ch, 1000).unwrap();
    assert!(c.is_none(), "no genuine cycle may be reported: {c:?}");

    let one_plus = sqrt2_spec()
        .state()
        .moebius_image(&Mat2::new(gauss(1, 0), gauss(1, 0), gauss(0, 0), gauss(1, 0)))
        .unwrap();
    let hits = (0..=e.depth())
        .filter(|&n| e.state(n).states_equal(&one_plus))
        .count();
    assert!(hits >= 100, "state 1+sqrt2 recurs only {hits} times");
    println!(
        "[PASS] criterion 2: non-periodic construction (no cycle, 1+sqrt2 recurs {hits} times)"
    );
}

#[test]
fn criterion_03_periodicity_at_scale() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut total_period = 0usize;
    for ring in RingId::ALL {
        for i in 0..50 {
            let s = random_surd(&mut rng, ring, 50);
            let c = detect_cycle(&s, &Chooser::NearestInteger, 5000)
                .unwrap()
                .unwrap_or_else(|| panic!("no cycle for surd {i} over {ring}"));
            total_period += c.period;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "cycle search took {elapsed:?}, budget is 60s"
    );
    println!(
        "[PASS] criterion 3: 250 random surds all eventually periodic ({elapsed:?}, total period {total_period})"
    );
}

fn battery() -> Vec<Expansion> {
    let mut runs = vec![
        expand(&sqrt2_spec(), &Chooser::NearestInteger, 100).unwrap(),
        expand(&sqrt2_i_spec(), &Chooser::NearestInteger, 100).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for ring in RingId::ALL {
        for _ in 0..2 {
            let s = random_surd(&mut rng, ring, 50);
            runs.push(expand(&s, &Chooser::NearestInteger, 60).unwrap());
        }
    }
    runs
}

#[test]
fn criterion_04_exact_identities() {
    let tol = BigRational::new(1.into(), num_bigint::BigInt::from(10u64).pow(20));
    let one = BigRational::one();
    for e in battery() {
        for n in 0..=e.depth() {
            let want = if n % 2 == 0 { -1 } else { 1 };
            assert_eq!(e.convergent_matrix(n).det_sign(), Some(want), "det g_{n}");
        }
        for (n, b) in e.residue_identity_bounds(160).iter().enumerate() {
            let lo = b.lo().to_rational();
            let hi = b.hi().to_rational();
            assert!(
                &one - &lo <= tol && &hi - &one <= tol,
                "residue identity off at step {n}: [{lo}, {hi}]"
            );
        }
    }
    println!("[PASS] criterion 4: det g_n = (-1)^(n+1) exactly; residue product within 1e-20");
}

#[test]
fn criterion_05_theta1_inequalities() {
    let mut checked = 0usize;
    for e in battery() {
        for n in 1..=e.depth() {
            if !e.steps[n].q_mono {
                continue;
            }
            let mut prec = 128u64;
            let ok = loop {
                let dn = delta_at(&e, n, prec).abs(prec);
                let dprev = delta_at(&e, n - 1, prec).abs(prec);
                let znext = e.state(n + 1).enclosure(prec).abs(prec);
                if let Some(bound) = znext.sub(&RealInterval::from_int(1)).recip(prec) {
                    let first = dn.hi() <= bound.lo();
                    let second = dprev.hi() <= dn.add(&RealInterval::from_int(1)).lo();
                    if first && second {
                        break true;
                    }
                }
                prec *= 2;
                if prec > 2048 {
                    break false;
                }
            };
            assert!(ok, "theta1 not certified at index {n}");
            checked += 1;
        }
    }
    println!("[PASS] criterion 5: theta1 inequalities certified at {checked} monotone indices");
}

#[test]
fn criterion_06_mono_criterion_implies_growth() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for ring in RingId::ALL {
        for _ in 0..200 {
            // build a sequence that satisfies the criterion by construction
            let mut seq: Vec<RingElt> = Vec::new();
            while seq.len() < 12 {
                let cand = random_elt(&mut rng, ring, 20, true);
                let n = cand.norm();
                if n < BigUint::from(2u32) {
                    continue;
                }
                if let Some(prev) = seq.last() {
                    if n == BigUint::from(2u32)
                        && prev.add(&cand.conj()).norm() < BigUint::from(4u32)
                    {
                        continue;
                    }
                    if n == BigUint::from(3u32) {
                        let d = prev.mul_int(&2.into()).add(&cand.conj());
                        if d.norm() < BigUint::from(9u32) {
                            continue;
                        }
                    }
                }
                seq.push(cand);
            }
            assert!(mono_criterion(&seq));
            // strict growth of norm(q_n) under the recurrence, q_{-1} = 0, q_0 = 1
            let mut q_prev2 = RingElt::zero(ring);
            let mut q_prev = RingElt::one(ring);
            for a in &seq {
                let q = a.mul(&q_prev).add(&q_prev2);
                assert!(
                    q_prev.norm() < q.norm(),
                    "norm growth fails for {seq:?} over {ring}"
                );
                q_prev2 = std::mem::replace(&mut q_prev, q);
            }
        }
    }
    println!("[PASS] criterion 6: 1000 criterion-passing sequences all have strictly growing |q_n|");
}

fn bad_circle_values(ring: RingId) -> [u64; 2] {
    match ring {
        RingId::G | RingId::R2 => [7, 23],
        RingId::E3 => [2, 5],
        RingId::E7 => [6, 13],
        RingId::E11 => [10, 21],
    }
}

fn circle_point(ring: RingId, r_sq: u64) -> SurdSpec {
    let c = CircleSpec::new(
        KElt::zero(ring),
        BigRational::from_integer(r_sq.into()),
    )
    .unwrap();
    for x in [rat(0, 1), rat(1, 1), rat(2, 1), rat(1, 2)] {
        if let Ok(s) = circle_point_surd(ring, &c, &x) {
            return s;
        }
    }
    panic!("no usable circle point for |z|^2 = {r_sq} over {ring}");
}

#[test]
fn criterion_07_orbit_stabilization() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    // 10 (surd, quadratic form) pairs and 10 (circle point, Hermitian form)
    let mut pairs: Vec<(SurdSpec, FormMatrix)> = Vec::new();
    for ring in RingId::ALL {
        for _ in 0..2 {
            let s = random_surd(&mut rng, ring, 50);
            let x = surd_to_form(&s);
            pairs.push((s, x));
        }
        for v in bad_circle_values(ring) {
            let c = CircleSpec::new(
                KElt::zero(ring),
                BigRational::from_integer(v.into()),
            )
            .unwrap();
            let s = circle_point(ring, v);
            pairs.push((s, c.hermitian_form()));
        }
    }
    assert_eq!(pairs.len(), 20);

    for (i, (s, x)) in pairs.iter().enumerate() {
        let e = expand_with_prec(s, &Chooser::NearestInteger, 10_000, 64).unwrap();
        let r = neat_r(s.ring());
        let neat = neat_indices(&e, &r);
        assert!(!neat.is_empty(), "pair {i} has no neat indices");
        let rep = ccf_core::forms::orbit(x, &e, &neat).unwrap();
        assert!(
            rep.stabilization_index <= 1000,
            "pair {i}: new matrix appeared at {}",
            rep.stabilization_index
        );

        // every entry respects the bound computed from the observed sup
        let m_obs: BigRational = neat
            .iter()
            .map(|&n| e.steps[n].delta_abs.hi().to_rational())
            .max()
            .unwrap();
        let z_enc = s.state().enclosure(96);
        let bound = entry_bound(x, &z_enc, &m_obs, DBoundCoefficient::AsStated);
        let bound_sq = {
            let b = bound.to_rational();
            &b * &b
        };
        let k2 = BigRational::from_integer((x.k() * x.k()).into());
        for m in &rep.distinct {
            for ent in m.entries() {
                let val_sq = BigRational::from_integer(ent.norm().into()) / &k2;
                assert!(
                    val_sq <= bound_sq,
                    "pair {i}: entry {ent} exceeds bound {bound}"
                );
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 180, "orbit runs took {elapsed:?}");
    println!(
        "[PASS] criterion 7: 20 orbits stabilized by depth 1000 with bounded entries ({elapsed:?})"
    );
}

#[test]
fn criterion_08_hermitian_boundedness() {
    let started = Instant::now();
    let ring = RingId::G;
    let c = CircleSpec::new(KElt::zero(ring), rat(1847, 1)).unwrap();
    let x = c.hermitian_form();
    let threshold = rat(1, 1000);
    for xi in 0..5i64 {
        let s = circle_point_surd(ring, &c, &rat(xi, 1)).unwrap();
        let e = expand_with_prec(&s, &Chooser::NearestInteger, 10_000, 64).unwrap();

        // empirical bad-approximability probe
        let quality = approx_quality(&e);
        assert!(
            quality.lo().to_rational() >= threshold,
            "min |delta_n| dipped to {} for x = {xi}",
            quality.lo()
        );

        // partial quotients bounded by the entry-bound-derived constant
        let neat = neat_indices(&e, &neat_r(ring));
        let m_obs: BigRational = neat
            .iter()
            .map(|&n| e.steps[n].delta_abs.hi().to_rational())
            .max()
            .unwrap();
        let z_enc = s.state().enclosure(96);
        let cstar = hermitian_quotient_bound(&x, &z_enc, &m_obs);
        let cstar_sq = {
            let b = cstar.to_rational();
            &b * &b
        };
        for step in &e.steps {
            let norm = BigRational::from_integer(step.partial_quotient.norm().into());
            assert!(
                norm <= cstar_sq,
                "|a_n| exceeds C* = {cstar} at n = {} (x = {xi})",
                step.index
            );
        }
    }

    // control: a scripted number with a 1e6-sized partial quotient
    let control = periodic_to_surd(ring, &[], &[gauss(2, 0), gauss(1_000_000, 0)]).unwrap();
    let e = expand(&control, &Chooser::NearestInteger, 50).unwrap();
    let q = approx_quality(&e);
    assert!(
        q.hi().to_rational() < rat(1, 100_000),
        "control min |delta| = {} not < 1e-5",
        q.hi()
    );
    let elapsed = started.elapsed();
    println!(
        "[PASS] criterion 8: five circle points bounded with min|delta| >= 1e-3; control dips below 1e-5 ({elapsed:?})"
    );
}

#[test]
fn criterion_09_circle_classification() {
    // brute-force oracle: a K-point exists iff some t scales (m, n) into
    // the set of norms <= 1000
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for ring in RingId::ALL {
        let norms: HashSet<u64> = (0..=1000u64).filter(|&v| is_norm(ring, v).is_some()).collect();
        let oracle = |m: u64, n: u64| -> bool {
            (1..=1000 / m.max(n))
                .any(|t| norms.contains(&(m * t)) && norms.contains(&(n * t)))
        };
        for _ in 0..200 {
            let m = rng.gen_range(1..=900u64);
            let n = rng.gen_range(1..=900u64);
            if num_integer::Integer::gcd(&m, &n) != 1 {
                continue;
            }
            let center = KElt::new(
                random_elt(&mut rng, ring, 30, false),
                BigUint::from(rng.gen_range(1..=4u32)),
            );
            let spec = CircleSpec::new(center, rat(m as i64, n as i64)).unwrap();
            let got = classify_circle(ring, &spec).unwrap();
            let has_point = matches!(got, CircleVerdict::HasRationalPoint { .. });
            assert_eq!(
                has_point,
                oracle(m, n),
                "disagreement for r^2 = {m}/{n} over {ring}"
            );
        }
    }

    // the 1847 circles of Remark-style congruence obstructions
    for ring in RingId::ALL {
        let spec = CircleSpec::new(KElt::zero(ring), rat(1847, 1)).unwrap();
        match classify_circle(ring, &spec).unwrap() {
            CircleVerdict::AllBad { obstruction, .. } => {
                assert!(obstruction.is_some(), "no certificate over {ring}");
                if ring == RingId::G {
                    assert_eq!(obstruction, Some(8));
                }
            }
            v => panic!("1847 must be AllBad over {ring}, got {v:?}"),
        }
    }
    println!("[PASS] criterion 9: classification matches brute force on 200 circles per ring; 1847 AllBad in all rings");
}

#[test]
fn criterion_10_obstruction_soundness_sweep() {
    let started = Instant::now();
    for ring in RingId::ALL {
        for n in 0..=10_000u64 {
            if congruence_obstruction(ring, n).is_some() {
                assert!(is_norm(ring, n).is_none(), "{ring}: {n} obstructed yet a norm");
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "sweep took {elapsed:?}");
    println!("[PASS] criterion 10: obstruction soundness for n <= 10^4 in all five rings ({elapsed:?})");
}

#[test]
fn criterion_11_covering_radii() {
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
        assert!((iv.midpoint_f64() - v).abs() < 1e-6, "{ring}");
        assert!(iv.hi().to_f64() < 1.0, "{ring}: r0 must be < 1");
    }
    println!("[PASS] criterion 11: covering radii match 1/sqrt2, sqrt3/2, 1/sqrt3, 2/sqrt7, 3/sqrt11 and are < 1");
}

#[test]
fn criterion_12_separating_circles() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    let mut produced = 0usize;
    for ring in RingId::ALL {
        let mut done = 0;
        while done < 4 {
            let zx = rng.gen_range(-3.0..3.0);
            let zy = rng.gen_range(-3.0..3.0);
            let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let dist = rng.gen_range(0.5..5.0);
            let (wx, wy) = (zx + dist * ang.cos(), zy + dist * ang.sin());
            let z = ComplexInterval::from_f64_box(zx, zy, 1e-9);
            let w = ComplexInterval::from_f64_box(wx, wy, 1e-9);
            let c = separating_circle(ring, &z, &w).unwrap();

            // re-verify: AllBad and both strict radius inequalities
            assert!(matches!(
                classify_circle(ring, &c).unwrap(),
                CircleVerdict::AllBad { .. }
            ));
            let ci = c.center.interval(96);
            let dz = z.sub(&ci).abs_sq().hi().to_rational();
            let dw = w.sub(&ci).abs_sq().lo().to_rational();
            assert!(dz < c.radius_sq && c.radius_sq < dw);
            done += 1;
            produced += 1;
        }
    }
    assert_eq!(produced, 20);
    println!("[PASS] criterion 12: 20 separating circles re-verified (AllBad + strict radius bounds)");
}
