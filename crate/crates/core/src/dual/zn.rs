//! Separation of disjoint sets by almost normal unit vectors, the
//! nonlocal dual condition, and the support-point constructions behind it.

use super::{lemma1_split, DualPair, Form};
use crate::cones::{dist_to_cone, local_cells, normal_cone, normal_cone_pieces, Cone};
use crate::error::{Error, Result};
use crate::geometry::distance::dist_polyhedra;
use crate::geometry::{dist_point_region, dist_region_region, minkowski_difference, point_status, PointStatus};
use crate::geometry::{PolyhedralNorm, Region};
use crate::lp::{feasible_point, verify_optimal, Lp, LpOutcome};
use crate::num::{frac, int, one, serde_scalar, serde_vector, Scalar};
use crate::primal::{check_relative_extremal, certify_shift, disjoint, Level, Limits, Mode, SetSystem};
use crate::verdict::{Certificate, Verdict};
use crate::vector::{add, dot, neg, scale, sub, zeros, Vector};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// A point of `A` in the open `ε`-ball around the boundary point `x̄` with a
/// nonzero normal cone, together with that cone.
pub fn support_point_search(a: &Region, xbar: &[Scalar], eps: &Scalar, norm: &PolyhedralNorm) -> Result<(Vector, Cone)> {
    if !eps.is_positive() {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    let pieces = a.pieces()?;
    match point_status(pieces, xbar, norm) {
        PointStatus::Outside { .. } => return Err(Error::NotMember),
        PointStatus::Interior { .. } => return Err(Error::Precondition("point is interior".into())),
        PointStatus::Boundary { .. } => {}
    }
    let k = normal_cone_pieces(pieces, xbar)?;
    if !k.is_zero() {
        return Ok((xbar.to_vec(), k));
    }
    let cells = local_cells(pieces, xbar, eps, norm, Limits::default().face_cap)?;
    cells
        .into_iter()
        .find(|c| !c.cone.is_zero())
        .map(|c| (c.face.representative, c.cone))
        .ok_or_else(|| Error::Soundness("boundary point without a nearby support point".into()))
}

/// `a ∈ A`, `b ∈ B` and a unit `a*` with `a* ∈ N_A(a)`, `-a* ∈ N_B(b)` and
/// `||a - b|| < d(A, B) + ε`, read off a support point of `A - B` near 0
/// (or near the point of `A - B` closest to 0).
pub fn difference_separation(a: &Region, b: &Region, eps: &Scalar, norm: &PolyhedralNorm) -> Result<(Vector, Vector, Vector)> {
    if !eps.is_positive() {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    let d = a.dim();
    let diff = minkowski_difference(a, b)?;
    let origin = zeros(d);
    let x0 = match point_status(diff.pieces()?, &origin, norm) {
        PointStatus::Interior { .. } => return Err(Error::Precondition("0 is interior to A - B".into())),
        PointStatus::Boundary { .. } => origin,
        PointStatus::Outside { .. } => dist_point_region(&origin, &diff, norm)?.witness,
    };
    let (x, k) = support_point_search(&diff, &x0, eps, norm)?;
    let dn = norm.dual();
    let g = &k.generators[0];
    let astar = scale(g, &(one() / dn.eval(g)));
    for p in a.pieces()? {
        for q in b.pieces()? {
            // a - b = x, a ∈ p, b ∈ q over the variables (a, b).
            let mut rows: Vec<(Vector, Scalar)> = Vec::new();
            for r in &p.rows {
                rows.push(([r.normal.clone(), zeros(d)].concat(), r.rhs.clone()));
            }
            for r in &q.rows {
                rows.push(([zeros(d), r.normal.clone()].concat(), r.rhs.clone()));
            }
            for i in 0..d {
                let mut e = zeros(2 * d);
                e[i] = one();
                e[d + i] = -one();
                rows.push((e.clone(), x[i].clone()));
                rows.push((neg(&e), -x[i].clone()));
            }
            let Ok(z) = feasible_point(2 * d, &rows) else { continue };
            let (pa, pb) = (z[..d].to_vec(), z[d..].to_vec());
            if !normal_cone(a, &pa)?.contains(&astar) || !normal_cone(b, &pb)?.contains(&neg(&astar)) {
                return Err(Error::Soundness("difference normal is not a normal of both sets".into()));
            }
            return Ok((pa, pb, astar));
        }
    }
    Err(Error::Soundness("support point of A - B does not decompose".into()))
}

/// Output of the separation search: points, a unit `a*` almost normal to
/// `A` at `a'` with `-a*` almost normal to `B` at `b'`, the summed cone
/// distances, and the exact pair obtained from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZnOutcome {
    #[serde(with = "serde_vector")]
    pub aprime: Vector,
    #[serde(with = "serde_vector")]
    pub bprime: Vector,
    #[serde(with = "serde_vector")]
    pub astar: Vector,
    #[serde(with = "serde_scalar")]
    pub deviation: Scalar,
    pub prime: DualPair,
}

/// `min d(a*, ka) + d(-a*, kb)` over unit `a*`, optionally with
/// `<a*, b' - a'>` bounded below by `floor`.
fn aligned_deviation(
    ka: &Cone,
    kb: &Cone,
    gap: &[Scalar],
    floor: Option<&Scalar>,
    dn: &PolyhedralNorm,
) -> Result<Option<(Scalar, Vector)>> {
    let d = ka.dim;
    let g = dn.facets();
    let z = || zeros(d);
    let pad = |v: Vec<Vector>, ta: i64, tb: i64| -> Vector { [v.concat(), vec![int(ta), int(tb)]].concat() };
    let mut best: Option<(Scalar, Vector)> = None;
    for gj in g {
        // Variables (a*, yA, yB, tA, tB), all free.
        let mut lp = Lp::new_free(3 * d + 2);
        for h in &ka.hrows {
            lp.le(pad(vec![z(), h.clone(), z()], 0, 0), Scalar::zero());
        }
        for h in &kb.hrows {
            lp.le(pad(vec![z(), z(), h.clone()], 0, 0), Scalar::zero());
        }
        for f in g {
            lp.le(pad(vec![f.clone(), neg(f), z()], -1, 0), Scalar::zero());
            lp.le(pad(vec![neg(f), z(), neg(f)], 0, -1), Scalar::zero());
            lp.le(pad(vec![f.clone(), z(), z()], 0, 0), one());
        }
        lp.eq(pad(vec![gj.clone(), z(), z()], 0, 0), one());
        if let Some(f) = floor {
            lp.ge(pad(vec![gap.to_vec(), z(), z()], 0, 0), f.clone());
        }
        lp.minimize(pad(vec![z(), z(), z()], 1, 1));
        let sol = match lp.solve() {
            LpOutcome::Optimal(s) => s,
            LpOutcome::Infeasible(_) => continue,
            LpOutcome::Unbounded { .. } => return Err(Error::Soundness("alignment LP unbounded".into())),
        };
        if !verify_optimal(&lp, &sol) {
            return Err(Error::Soundness("alignment LP optimality check failed".into()));
        }
        let a = sol.x[..d].to_vec();
        let dev = dist_to_cone(&a, ka, dn).0 + dist_to_cone(&neg(&a), kb, dn).0;
        if best.as_ref().is_none_or(|(v, _)| dev < *v) {
            best = Some((dev, a));
        }
    }
    Ok(best)
}

/// For disjoint `A`, `B` with `||a - b|| < d(A, B) + ε`: points `a'`, `b'` in
/// the open `λ`-balls and a unit `a*` with
/// `d(a*, N_A(a')) + d(-a*, N_B(b')) < ε/λ`, and with `tau` given also
/// `τ||a' - b'|| <= <a*, b' - a'>`. `None` when the candidate scan finds nothing.
pub fn zn_separation(s: &SetSystem, eps: &Scalar, lambda: &Scalar, tau: Option<&Scalar>) -> Result<Option<ZnOutcome>> {
    if !s.is_exact() {
        return Err(Error::OracleUnsupported);
    }
    if !eps.is_positive() || !lambda.is_positive() || eps >= lambda {
        return Err(Error::Precondition("need 0 < ε < λ".into()));
    }
    if tau.is_some_and(|t| !t.is_positive() || *t >= one()) {
        return Err(Error::Precondition("τ must lie in (0, 1)".into()));
    }
    if !disjoint(s)? {
        return Err(Error::Precondition("A and B intersect".into()));
    }
    let (dist, _, _) = dist_region_region(&s.a_set, &s.b_set, &s.norm)?;
    if s.norm.eval(&sub(&s.a, &s.b)) >= &dist + eps {
        return Err(Error::Precondition("||a - b|| is not within ε of d(A, B)".into()));
    }
    let cap = s.limits.face_cap;
    let mut candidates: Vec<(Vector, Vector)> = vec![(s.a.clone(), s.b.clone())];
    let half = lambda / int(2);
    let ball_a = s.norm.ball_rows(&s.a, &half);
    let ball_b = s.norm.ball_rows(&s.b, &half);
    for p in s.a_pieces()? {
        for q in s.b_pieces()? {
            if let Some((_, x, y)) = dist_polyhedra(&p.with_rows(&ball_a), &q.with_rows(&ball_b), &s.norm) {
                candidates.push((x, y));
            }
        }
    }
    let ca = local_cells(s.a_pieces()?, &s.a, lambda, &s.norm, cap)?;
    let cb = local_cells(s.b_pieces()?, &s.b, lambda, &s.norm, cap)?;
    for x in &ca {
        for y in &cb {
            candidates.push((x.face.representative.clone(), y.face.representative.clone()));
        }
    }
    if candidates.len() > cap {
        return Err(Error::FaceCap { count: candidates.len(), cap });
    }
    let target = eps / lambda;
    let dn = &s.dual_norm;
    for (ap, bp) in candidates {
        let ka = normal_cone(&s.a_set, &ap)?;
        let kb = normal_cone(&s.b_set, &bp)?;
        let gap = sub(&bp, &ap);
        let floor = tau.map(|t| t * s.norm.eval(&gap));
        let Some((dev, astar)) = aligned_deviation(&ka, &kb, &gap, floor.as_ref(), dn)? else { continue };
        if dev >= target || dn.eval(&astar) != one() || floor.is_some_and(|f| dot(&astar, &gap) < f) {
            continue;
        }
        let z1 = scale(&astar, &frac(1, 2));
        let (h1, h2) = lemma1_split(&z1, &neg(&z1), &ka, &kb, &(eps / (int(2) * lambda)), dn)?;
        let prime = DualPair { aprime: ap.clone(), bprime: bp.clone(), astar: h1, bstar: h2, eps: target, form: Form::II };
        if !prime.holds(s)? {
            return Err(Error::Soundness("split pair fails form (ii)".into()));
        }
        return Ok(Some(ZnOutcome { aprime: ap, bprime: bp, astar, deviation: dev, prime }));
    }
    Ok(None)
}

/// Dual pair for the nonlocal principle: `a ∈ A`, `b ∈ B` with
/// `||a - b|| < d(A, B) + ε` and exact normals with `||a* + b*|| < ε`.
/// Disjoint sets qualify as they are; intersecting sets must be extremal
/// and are first pulled apart by an extremal shift.
pub fn nonlocal_ep(s: &SetSystem, eps: &Scalar, tau: Option<&Scalar>) -> Result<Verdict> {
    if !eps.is_positive() || *eps >= one() {
        return Err(Error::Precondition("ε must lie in (0, 1)".into()));
    }
    if !s.is_exact() {
        return Ok(Verdict::unknown("nonlocal condition is not decided for oracle regions"));
    }
    let (dist, _, _) = dist_region_region(&s.a_set, &s.b_set, &s.norm)?;
    let (u, v, budget) = if disjoint(s)? {
        (zeros(s.dim()), zeros(s.dim()), eps.clone())
    } else {
        let ext = check_relative_extremal(s, Mode::BothShifts)?;
        if !ext.status.is_proved() {
            return Err(Error::Precondition("intersecting sets are not extremal".into()));
        }
        let Some(Certificate::Shifts { witnesses, .. }) = &ext.certificate else {
            return Err(Error::Soundness("extremal verdict without shifts".into()));
        };
        let best = witnesses.last().expect("schedule is nonempty");
        let small = eps / int(8);
        let k = if best.eps > small { &small / &best.eps } else { one() };
        let w = crate::primal::ShiftWitness::new(scale(&best.witness.u, &k), scale(&best.witness.v, &k), None);
        if certify_shift(s, &w, &small, Level::Extremal)?.is_none() {
            return Ok(Verdict::unknown("shrunken extremal shift does not separate"));
        }
        (w.u, w.v, eps / int(4))
    };
    let moved = s.translated(&u, &v)?;
    let (_, x, y) = dist_region_region(&moved.a_set, &moved.b_set, &s.norm)?;
    let moved = moved.at(&x, &y)?;
    let lambda = &budget / int(4);
    let zn_eps = &lambda * &budget / (one() + &budget);
    let Some(out) = zn_separation(&moved, &zn_eps, &lambda, tau)? else {
        return Ok(Verdict::unknown("candidate scan found no separating pair"));
    };
    let pair = DualPair {
        aprime: add(&out.prime.aprime, &u),
        bprime: add(&out.prime.bprime, &v),
        eps: eps.clone(),
        ..out.prime
    };
    if !pair.holds(s)? || s.norm.eval(&sub(&pair.aprime, &pair.bprime)) >= dist + eps {
        return Err(Error::Soundness("nonlocal pair fails its conditions".into()));
    }
    Ok(Verdict::proved(Certificate::Dual { pair }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polyhedron;
    use crate::vector::from_ints;

    fn half(n: &[i64], r: i64) -> Region {
        Region::single(Polyhedron::from_ints(2, &[(n, r)]))
    }

    fn parallel() -> SetSystem {
        SetSystem::new(half(&[0, 1], 0), half(&[0, -1], -1), from_ints(&[0, 0]), from_ints(&[0, 1]), PolyhedralNorm::max(2))
            .unwrap()
    }

    #[test]
    fn support_point_on_halfspace_boundary() {
        let (p, k) = support_point_search(&half(&[0, 1], 0), &from_ints(&[3, 0]), &frac(1, 2), &PolyhedralNorm::max(2))
            .unwrap();
        assert_eq!(p, from_ints(&[3, 0]));
        assert!(k.same_as(&Cone::ray(&from_ints(&[0, 1]))));
    }

    #[test]
    fn support_point_rejects_interior() {
        let r = support_point_search(&half(&[0, 1], 0), &from_ints(&[0, -1]), &frac(1, 2), &PolyhedralNorm::max(2));
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn parallel_halfspaces_difference_separation() {
        let (a, b, astar) =
            difference_separation(&half(&[0, 1], 0), &half(&[0, -1], -1), &frac(1, 4), &PolyhedralNorm::max(2)).unwrap();
        assert_eq!(astar, from_ints(&[0, 1]));
        assert_eq!(a[1], int(0));
        assert_eq!(b[1], int(1));
    }

    #[test]
    fn crossing_difference_is_interior() {
        let r = difference_separation(&half(&[0, 1], 0), &half(&[1, 1], 0), &frac(1, 4), &PolyhedralNorm::max(2));
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn parallel_zn() {
        let s = parallel();
        for tau in [frac(1, 2), frac(9, 10)] {
            let out = zn_separation(&s, &frac(1, 2), &int(1), Some(&tau)).unwrap().unwrap();
            assert_eq!((out.aprime.clone(), out.bprime.clone()), (s.a.clone(), s.b.clone()));
            assert_eq!(out.astar, from_ints(&[0, 1]));
            assert!(tau * s.norm.eval(&sub(&out.aprime, &out.bprime)) <= dot(&out.astar, &sub(&out.bprime, &out.aprime)));
        }
    }

    #[test]
    fn zn_needs_disjoint_sets() {
        let s = SetSystem::conventional(half(&[0, 1], 0), half(&[0, -1], 0), from_ints(&[0, 0]), PolyhedralNorm::max(2))
            .unwrap();
        assert!(matches!(zn_separation(&s, &frac(1, 2), &int(1), None), Err(Error::Precondition(_))));
    }

    #[test]
    fn nonlocal_cases() {
        assert!(nonlocal_ep(&parallel(), &frac(1, 4), Some(&frac(1, 2))).unwrap().status.is_proved());
        let comp = SetSystem::conventional(half(&[0, 1], 0), half(&[0, -1], 0), from_ints(&[0, 0]), PolyhedralNorm::max(2))
            .unwrap();
        assert!(nonlocal_ep(&comp, &frac(1, 4), None).unwrap().status.is_proved());
        let cross = SetSystem::conventional(half(&[0, 1], 0), half(&[1, 1], 0), from_ints(&[0, 0]), PolyhedralNorm::max(2))
            .unwrap();
        assert!(matches!(nonlocal_ep(&cross, &frac(1, 4), None), Err(Error::Precondition(_))));
    }
}
