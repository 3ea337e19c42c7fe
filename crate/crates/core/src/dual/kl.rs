//! Passing between primal shift witnesses and dual pairs at the
//! approximately stationary level.

use super::{separation_infimum, DualPair, Form};
use crate::error::{Error, Result};
use crate::geometry::exactness_radius;
use crate::num::{int, max, min, min_opt, Scalar};
use crate::primal::{certify_shift, verify_shift_witness, Level, SetSystem, ShiftWitness};
use crate::vector::{add, scale, sub};
use num_traits::Signed;

const HALVINGS: usize = 20;

/// Shifts from a form-(ii) pair: with `rho` below the exactness radii at
/// `a'` and `b'`, moving `A` along a primal support direction of `a*` and
/// `B` along one of `b*` by `s = rho (||a*+b*|| + ε) / 2` separates the
/// sets inside the `rho`-ball. `None` if no `rho` in the schedule works.
pub fn kl_backward(dp: &DualPair, s: &SetSystem, delta: &Scalar) -> Result<Option<ShiftWitness>> {
    if !s.is_exact() {
        return Err(Error::OracleUnsupported);
    }
    if !delta.is_positive() {
        return Err(Error::Precondition("δ must be positive".into()));
    }
    let eps = &dp.eps;
    if dp.form != Form::II || !dp.holds(s)? || !dp.within(s, eps) {
        return Err(Error::Precondition("pair is not valid in form (ii)".into()));
    }
    let ra = exactness_radius(s.a_pieces()?, &dp.aprime, &s.norm);
    let rb = exactness_radius(s.b_pieces()?, &dp.bprime, &s.norm);
    let cap = min_opt(min_opt(Some(min(eps, delta)), ra), rb).expect("ε is finite");
    let mut rho = cap / int(4);
    let gap = s.dual_norm.eval(&add(&dp.astar, &dp.bstar));
    let wa = s.norm.support_vertex(&dp.astar);
    let wb = s.norm.support_vertex(&dp.bstar);
    for _ in 0..HALVINGS {
        let len = (&gap + eps) / int(2) * &rho;
        let w = ShiftWitness {
            u: scale(&wa, &len),
            v: scale(&wb, &len),
            rho: Some(rho.clone()),
            aprime: Some(dp.aprime.clone()),
            bprime: Some(dp.bprime.clone()),
        };
        if certify_shift(s, &w, eps, Level::ApproxStationary)?.is_some() {
            return Ok(Some(w));
        }
        rho /= int(2);
    }
    Ok(None)
}

/// A form-(ii) pair in the open `δ`-balls from a verified witness. `δ` must
/// exceed `max(||a'-a||, ||b'-b||) + rho (ε + 1)`. `None` if the exact
/// separation value over the `δ`-balls is not below `ε`.
pub fn kl_forward(s: &SetSystem, w: &ShiftWitness, eps: &Scalar, delta: &Scalar) -> Result<Option<DualPair>> {
    if !s.is_exact() {
        return Err(Error::OracleUnsupported);
    }
    if !verify_shift_witness(s, w, eps, Level::ApproxStationary)? {
        return Err(Error::Precondition("witness does not verify".into()));
    }
    let rho = w.rho.clone().expect("verified witnesses carry a radius");
    let (ap, bp) = w.base_points(s);
    let moved = max(&s.norm.eval(&sub(&ap, &s.a)), &s.norm.eval(&sub(&bp, &s.b)));
    if *delta <= moved + rho * (eps + int(1)) {
        return Err(Error::Precondition("δ is below the required bound".into()));
    }
    let sep = separation_infimum(s, delta)?;
    Ok(match &sep.value {
        Some(v) if v < eps => sep.pair_at_representatives(eps),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{PolyhedralNorm, Polyhedron, Region};
    use crate::num::frac;
    use crate::vector::from_ints;

    fn complementary() -> SetSystem {
        SetSystem::conventional(
            Region::single(Polyhedron::from_ints(2, &[(&[0, 1], 0)])),
            Region::single(Polyhedron::from_ints(2, &[(&[0, -1], 0)])),
            from_ints(&[0, 0]),
            PolyhedralNorm::max(2),
        )
        .unwrap()
    }

    fn annihilating(eps: Scalar) -> DualPair {
        DualPair {
            aprime: from_ints(&[0, 0]),
            bprime: from_ints(&[0, 0]),
            astar: vec![int(0), frac(1, 2)],
            bstar: vec![int(0), frac(-1, 2)],
            eps,
            form: Form::II,
        }
    }

    #[test]
    fn backward_then_forward() {
        let s = complementary();
        let eps = frac(1, 4);
        let w = kl_backward(&annihilating(eps.clone()), &s, &frac(1, 2)).unwrap().unwrap();
        assert!(w.rho.as_ref().unwrap() < &frac(1, 2));
        assert!(verify_shift_witness(&s, &w, &eps, Level::ApproxStationary).unwrap());
        let rho = w.rho.clone().unwrap();
        let delta = &rho * (&eps + int(1)) + frac(1, 100);
        let dp = kl_forward(&s, &w, &eps, &delta).unwrap().unwrap();
        assert_eq!(dp.astar, vec![int(0), frac(1, 2)]);
        assert!(dp.holds(&s).unwrap());
    }

    #[test]
    fn vertical_single_shift_also_works() {
        let s = complementary();
        let (eps, rho) = (frac(1, 4), frac(1, 16));
        let w = ShiftWitness {
            aprime: Some(from_ints(&[0, 0])),
            bprime: Some(from_ints(&[0, 0])),
            ..ShiftWitness::new(vec![int(0), &eps * &rho / int(2)], from_ints(&[0, 0]), Some(rho))
        };
        assert!(verify_shift_witness(&s, &w, &eps, Level::ApproxStationary).unwrap());
    }

    #[test]
    fn large_gap_is_rejected() {
        let s = complementary();
        let mut dp = annihilating(frac(1, 4));
        dp.bstar = vec![int(0), int(0)];
        dp.astar = vec![int(0), int(1)];
        assert!(matches!(kl_backward(&dp, &s, &frac(1, 2)), Err(Error::Precondition(_))));
    }

    #[test]
    fn forward_bound_enforced() {
        let s = complementary();
        let eps = frac(1, 4);
        let w = kl_backward(&annihilating(eps.clone()), &s, &frac(1, 2)).unwrap().unwrap();
        let rho = w.rho.clone().unwrap();
        let delta = &rho * (&eps + int(1));
        assert!(matches!(kl_forward(&s, &w, &eps, &delta), Err(Error::Precondition(_))));
    }
}
