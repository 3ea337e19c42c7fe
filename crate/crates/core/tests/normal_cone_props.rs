mod common;

use common::*;
use extremal::cones::{eps_normal_member, normal_cone, normal_cone_polyhedron, tangent_cone};
use extremal::geometry::{PolyhedralNorm, Polyhedron, Region};
use extremal::num::{frac, zero};
use extremal::vector::{add, dot, scale, Vector};
use proptest::prelude::*;
use rand::Rng;

fn random_piece(r: &mut rand_chacha::ChaCha8Rng, d: usize) -> (Polyhedron, Vector) {
    let p = rat_vec(r, d, 1, 2);
    let k = r.gen_range(1..=4);
    (piece_through(r, &p, k), p)
}

/// A nonnegative combination of the cone generators.
fn member(r: &mut rand_chacha::ChaCha8Rng, gens: &[Vector], d: usize) -> Vector {
    gens.iter().fold(vec![zero(); d], |acc, g| add(&acc, &scale(g, &rat(r, 0, 2, 3))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn normal_and_tangent_cones_are_polar(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.gen_range(2..=3);
        let (piece, p) = random_piece(&mut r, d);
        let n = normal_cone_polyhedron(&piece, &p).unwrap();
        let t = tangent_cone(&piece, &p).unwrap();
        prop_assert!(n.is_consistent() && t.is_consistent());
        for g in &n.generators {
            for v in &t.generators {
                prop_assert!(dot(g, v) <= zero());
            }
        }
    }

    #[test]
    fn eps_normals_grow_with_eps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.gen_range(2..=3);
        let (piece, p) = random_piece(&mut r, d);
        let region = Region::single(piece);
        let norm = PolyhedralNorm::max(d);
        let y = rat_vec(&mut r, d, 2, 3);
        let eps = rat(&mut r, 0, 2, 4);
        if eps_normal_member(&y, &p, &region, &eps, &norm).unwrap() {
            for bump in [frac(1, 8), frac(1, 1), frac(5, 1)] {
                prop_assert!(eps_normal_member(&y, &p, &region, &(&eps + bump), &norm).unwrap());
            }
        }
    }

    #[test]
    fn normals_plus_dual_ball_are_eps_normals(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.gen_range(2..=3);
        let (piece, p) = random_piece(&mut r, d);
        let region = Region::single(piece);
        let norm = if r.gen_bool(0.5) { PolyhedralNorm::max(d) } else { PolyhedralNorm::sum(d) };
        let dn = norm.dual();
        let k = normal_cone(&region, &p).unwrap();
        let eps = rat(&mut r, 0, 1, 8);
        for _ in 0..4 {
            let y = member(&mut r, &k.generators, d);
            // e in the closed dual unit ball
            let e = rat_vec(&mut r, d, 1, 4);
            let e = if dn.eval(&e) > frac(1, 1) { scale(&e, &(frac(1, 1) / dn.eval(&e))) } else { e };
            prop_assert!(eps_normal_member(&add(&y, &scale(&e, &eps)), &p, &region, &eps, &norm).unwrap());
        }
    }

    #[test]
    fn union_rule_at_a_point_of_one_piece(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = 2;
        let (piece, p) = random_piece(&mut r, d);
        // a second piece far away from p
        let far: Vector = p.iter().map(|x| x + frac(10, 1)).collect();
        let k = r.gen_range(1..=3);
        let other = piece_through(&mut r, &far, k);
        prop_assume!(!other.contains(&p));
        let union = Region::exact(d, vec![piece.clone(), other]).unwrap();
        let a = normal_cone(&union, &p).unwrap();
        let b = normal_cone_polyhedron(&piece, &p).unwrap();
        prop_assert_eq!(a.generators, b.generators);
        prop_assert_eq!(a.hrows, b.hrows);
    }
}
