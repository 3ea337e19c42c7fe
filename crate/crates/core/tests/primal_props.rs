mod common;

use common::*;
use extremal::geometry::{PolyhedralNorm, Polyhedron, Region, Row};
use extremal::lp::{Lp, LpOutcome};
use extremal::num::{one, zero};
use extremal::primal::{
    check_relative_approx_stationary, check_relative_extremal, default_schedule, implication_chain, verify_shift_witness,
    Mode, SetSystem, ShiftWitness,
};
use extremal::vector::{add, dot, neg, Vector};
use extremal::verdict::Certificate;
use extremal::Scalar;
use proptest::prelude::*;
use rand::Rng;

fn system(seed: u64, convex: bool) -> SetSystem {
    let mut r = rng(seed);
    let d = r.gen_range(2..=3);
    let norm = if r.gen_bool(0.5) { PolyhedralNorm::max(d) } else { PolyhedralNorm::sum(d) };
    if convex {
        random_convex_system(&mut r, d, &norm)
    } else {
        random_system(&mut r, 2, 2, &PolyhedralNorm::max(2))
    }
}

/// `min ||x - y||` over `x ∈ p`, `y ∈ q` by one LP on `(x, y, t)`.
fn pair_distance(p: &Polyhedron, q: &Polyhedron, n: &PolyhedralNorm) -> Option<Scalar> {
    let d = p.dim;
    let mut lp = Lp::new_free(2 * d + 1);
    for row in &p.rows {
        let mut c = vec![zero(); 2 * d + 1];
        c[..d].clone_from_slice(&row.normal);
        lp.le(c, row.rhs.clone());
    }
    for row in &q.rows {
        let mut c = vec![zero(); 2 * d + 1];
        c[d..2 * d].clone_from_slice(&row.normal);
        lp.le(c, row.rhs.clone());
    }
    for f in n.facets() {
        let mut c = vec![zero(); 2 * d + 1];
        for i in 0..d {
            c[i] = f[i].clone();
            c[d + i] = -f[i].clone();
        }
        c[2 * d] = -one();
        lp.le(c, zero());
    }
    let mut obj = vec![zero(); 2 * d + 1];
    obj[2 * d] = one();
    lp.minimize(obj);
    match lp.solve() {
        LpOutcome::Optimal(s) => Some(s.value),
        _ => None,
    }
}

fn shifted(r: &Region, t: &[Scalar]) -> Vec<Polyhedron> {
    r.pieces().unwrap().iter().map(|p| p.translate(&neg(t))).collect()
}

fn strictly_inside(p: &Polyhedron, x: &[Scalar]) -> bool {
    p.rows.iter().all(|row| dot(&row.normal, x) < row.rhs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn proved_verdicts_carry_verifying_witnesses(seed in any::<u64>(), convex in any::<bool>()) {
        let s = system(seed, convex);
        let chain = implication_chain(&s).unwrap();
        for lv in &chain.levels {
            let v = &lv.verdict;
            if v.status.is_proved() {
                if let Some(Certificate::Shifts { witnesses, .. }) = &v.certificate {
                    prop_assert!(!witnesses.is_empty());
                    for c in witnesses {
                        prop_assert!(verify_shift_witness(&s, &c.witness, &c.eps, c.level).unwrap());
                    }
                }
            }
            if v.status.is_refuted() {
                prop_assert!(v.certificate.is_some(), "{} refuted without a witness", lv.level.label());
            }
        }
    }

    #[test]
    fn chain_is_monotone_and_flat_for_convex(seed in any::<u64>(), convex in any::<bool>()) {
        let s = system(seed, convex);
        let c = implication_chain(&s).unwrap();
        prop_assert!(c.ok(), "{:?}", c.violations);
        let h = c.holds();
        for w in h.windows(2) {
            prop_assert!(!(w[0] == Some(true) && w[1] == Some(false)));
        }
        if s.is_convex() {
            prop_assert!(h.iter().all(|x| *x == h[0]));
        }
    }

    #[test]
    fn single_shift_mode_agrees(seed in any::<u64>(), convex in any::<bool>()) {
        let s = system(seed, convex);
        let both = check_relative_extremal(&s, Mode::BothShifts).unwrap();
        let single = check_relative_extremal(&s, Mode::SingleShift).unwrap();
        prop_assert_eq!(both.status.is_proved(), single.status.is_proved());
        if let Some(Certificate::Shifts { witnesses, .. }) = &single.certificate {
            for c in witnesses {
                prop_assert!(c.witness.v.iter().all(|x| *x == zero()));
            }
        }
    }

    #[test]
    fn extremal_shifts_leave_a_positive_gap(seed in any::<u64>()) {
        let s = system(seed, true);
        let v = check_relative_extremal(&s, Mode::BothShifts).unwrap();
        if let Some(Certificate::Shifts { witnesses, .. }) = &v.certificate {
            for c in witnesses {
                let w: &ShiftWitness = &c.witness;
                let pa = shifted(&s.a_set, &add(&s.a, &w.u));
                let pb = shifted(&s.b_set, &add(&s.b, &w.v));
                for p in &pa {
                    for q in &pb {
                        let gap = pair_distance(p, q, &s.norm).expect("nonempty pieces");
                        prop_assert!(gap > zero());
                    }
                }
            }
        }
    }

    #[test]
    fn approx_stationarity_needs_boundary_points(seed in any::<u64>()) {
        let mut r = rng(seed);
        let norm = PolyhedralNorm::max(2);
        let mut s = random_system(&mut r, 2, 2, &norm);
        if r.gen_bool(0.5) {
            // make `a` interior to a fresh piece
            let a: Vector = s.a.clone();
            let rows = (0..3).map(|_| {
                let n = int_vec(&mut r, 2, 2);
                Row::new(n.clone(), dot(&n, &a) + rat(&mut r, 1, 1, 2))
            }).collect();
            let mut pieces = s.a_set.pieces().unwrap().to_vec();
            pieces.push(Polyhedron { dim: 2, rows });
            s = SetSystem::new(Region::exact(2, pieces).unwrap(), s.b_set.clone(), s.a.clone(), s.b.clone(), norm).unwrap();
        }
        let interior_a = s.a_set.pieces().unwrap().iter().any(|p| strictly_inside(p, &s.a));
        let interior_b = s.b_set.pieces().unwrap().iter().any(|p| strictly_inside(p, &s.b));
        if interior_a || interior_b {
            let v = check_relative_approx_stationary(&s, &default_schedule()).unwrap();
            prop_assert!(!v.status.is_proved());
        }
    }
}
