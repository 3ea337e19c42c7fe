mod common;

use common::*;
use extremal::cones::{normal_cone, Cone};
use extremal::dual::{
    check_ep_condition, convert_conditions, difference_separation, lemma1_merge, lemma1_split, zn_separation, Direction,
    Form,
};
use extremal::geometry::{dist_region_region, PolyhedralNorm, Polyhedron, Region, Row};
use extremal::num::{frac, int, one, zero};
use extremal::primal::SetSystem;
use extremal::vector::{add, dot, neg, scale, sub, Vector};
use extremal::verdict::Certificate;
use proptest::prelude::*;
use rand::Rng;

fn two_cones(r: &mut rand_chacha::ChaCha8Rng, d: usize) -> (Vec<Vector>, Cone, Vec<Vector>, Cone) {
    let g1: Vec<Vector> = (0..r.gen_range(1..=3)).map(|_| int_vec(r, d, 3)).collect();
    let g2: Vec<Vector> = (0..r.gen_range(1..=3)).map(|_| int_vec(r, d, 3)).collect();
    let k1 = Cone::from_generators(d, &g1).unwrap();
    let k2 = Cone::from_generators(d, &g2).unwrap();
    (g1, k1, g2, k2)
}

/// A disjoint pair of polytopes with `a`, `b` a nearest pair.
fn disjoint_pair(r: &mut rand_chacha::ChaCha8Rng) -> Option<SetSystem> {
    let d = 2;
    let mk = |r: &mut rand_chacha::ChaCha8Rng, c: &Vector| {
        let mut rows = Vec::new();
        for i in 0..d {
            let mut e = vec![zero(); d];
            e[i] = one();
            rows.push(Row::new(e.clone(), &c[i] + one()));
            rows.push(Row::new(neg(&e), -(&c[i] - one())));
        }
        let n = int_vec(r, d, 2);
        rows.push(Row::new(n.clone(), dot(&n, c) + rat(r, 0, 1, 2)));
        Polyhedron { dim: d, rows }
    };
    let ca = rat_vec(r, d, 1, 2);
    let cb: Vector = add(&ca, &rat_vec(r, d, 4, 2));
    let (a, b) = (Region::single(mk(r, &ca)), Region::single(mk(r, &cb)));
    let norm = PolyhedralNorm::max(d);
    let (dist, x, y) = dist_region_region(&a, &b, &norm).ok()?;
    if dist == zero() {
        return None;
    }
    SetSystem::new(a, b, x, y, norm).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn merge_meets_its_bound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.gen_range(2..=3);
        let dn = if r.gen_bool(0.5) { PolyhedralNorm::sum(d) } else { PolyhedralNorm::max(d) };
        let (g1, k1, _, _) = two_cones(&mut r, d);
        let z1 = g1[0].clone();
        let z2 = add(&neg(&z1), &scale(&rat_vec(&mut r, d, 1, 4), &frac(1, 8)));
        prop_assume!(z2.iter().any(|x| *x != zero()));
        let g2 = vec![z2.clone()];
        let k2 = Cone::from_generators(d, &g2).unwrap();
        let s = dn.eval(&z1) + dn.eval(&z2);
        let (z1, z2) = (scale(&z1, &(one() / &s)), scale(&z2, &(one() / &s)));
        let sigma = dn.eval(&add(&z1, &z2));
        prop_assume!(sigma < one());
        let eps = (&sigma + one()) / int(2);
        let (h1, h2) = lemma1_merge(&z1, &z2, &k1, &k2, &eps, &dn).unwrap();
        let bound = &eps / (int(2) * (one() - &eps));
        prop_assert_eq!(&h1, &neg(&h2));
        prop_assert_eq!(norm_by_facets(&dn, &h1) + norm_by_facets(&dn, &h2), one());
        prop_assert!(dist_to_generated(&h1, &g1, &dn) < bound);
        prop_assert!(dist_to_generated(&h2, &g2, &dn) < bound);
    }

    #[test]
    fn split_meets_its_bound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.gen_range(2..=3);
        let dn = if r.gen_bool(0.5) { PolyhedralNorm::sum(d) } else { PolyhedralNorm::max(d) };
        let (g1, k1, g2, k2) = two_cones(&mut r, d);
        let z = int_vec(&mut r, d, 3);
        let z1 = scale(&z, &(frac(1, 2) / dn.eval(&z)));
        let z2 = neg(&z1);
        let total = dist_to_generated(&z1, &g1, &dn) + dist_to_generated(&z2, &g2, &dn);
        prop_assume!(total < one());
        let eps = (&total + one()) / int(2);
        let (h1, h2) = lemma1_split(&z1, &z2, &k1, &k2, &eps, &dn).unwrap();
        prop_assert_eq!(dist_to_generated(&h1, &g1, &dn), zero());
        prop_assert_eq!(dist_to_generated(&h2, &g2, &dn), zero());
        prop_assert_eq!(norm_by_facets(&dn, &h1) + norm_by_facets(&dn, &h2), one());
        prop_assert!(norm_by_facets(&dn, &add(&h1, &h2)) < &eps / (one() - &eps));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn conversions_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_system(&mut r, 2, 2, &PolyhedralNorm::max(2));
        let xi = frac(1, 5);
        let v = check_ep_condition(&s, Form::II, &xi).unwrap();
        if let Some(Certificate::Dual { pair }) = &v.certificate {
            prop_assert!(pair.holds(&s).unwrap());
            let one_form = convert_conditions(pair, Direction::IiToI, &s).unwrap();
            prop_assert_eq!(one_form.form, Form::I);
            prop_assert_eq!(&one_form.eps, &(&xi / (one() - &xi)));
            prop_assert!(one_form.holds(&s).unwrap());
            let back = convert_conditions(&one_form, Direction::IToIi, &s).unwrap();
            prop_assert_eq!(back.form, Form::II);
            prop_assert!(back.holds(&s).unwrap());
        }
    }

    #[test]
    fn difference_separation_normals(seed in any::<u64>()) {
        let mut r = rng(seed);
        let Some(s) = disjoint_pair(&mut r) else { return Ok(()) };
        let eps = frac(1, 4);
        let (a, b, astar) = difference_separation(&s.a_set, &s.b_set, &eps, &s.norm).unwrap();
        prop_assert!(s.a_set.contains(&a) && s.b_set.contains(&b));
        prop_assert_eq!(s.dual_norm.eval(&astar), one());
        prop_assert!(normal_cone(&s.a_set, &a).unwrap().contains(&astar));
        prop_assert!(normal_cone(&s.b_set, &b).unwrap().contains(&neg(&astar)));
        let (dist, _, _) = dist_region_region(&s.a_set, &s.b_set, &s.norm).unwrap();
        prop_assert!(s.norm.eval(&sub(&a, &b)) < dist + eps);
    }

    #[test]
    fn zn_third_condition_is_not_vacuous(seed in any::<u64>()) {
        let mut r = rng(seed);
        let Some(s) = disjoint_pair(&mut r) else { return Ok(()) };
        let tau = frac(1, 2);
        let out = zn_separation(&s, &frac(1, 8), &frac(1, 2), Some(&tau)).unwrap();
        if let Some(z) = out {
            let gap = sub(&z.bprime, &z.aprime);
            prop_assert!(gap.iter().any(|x| *x != zero()));
            prop_assert!(dot(&z.astar, &gap) >= &tau * s.norm.eval(&gap));
            prop_assert!(z.prime.holds(&s).unwrap());
        }
    }
}
