//! Moving between "exact normals with a small sum" and "opposite vectors
//! that are almost normal", with the constants of the two constructions.

use crate::cones::{dist_to_cone, Cone};
use crate::error::{check_dim, Error, Result};
use crate::geometry::PolyhedralNorm;
use crate::num::{int, one, Scalar};
use crate::vector::{add, is_zero, neg, scale, sub, Vector};
use num_traits::Signed;

fn check_eps(eps: &Scalar) -> Result<()> {
    if !eps.is_positive() || *eps >= one() {
        return Err(Error::Precondition("ε must lie in (0, 1)".into()));
    }
    Ok(())
}

fn normalize(z1: &[Scalar], z2: &[Scalar], dn: &PolyhedralNorm) -> (Vector, Vector) {
    let s = dn.eval(z1) + dn.eval(z2);
    let k = one() / s;
    (scale(z1, &k), scale(z2, &k))
}

/// From `z1 ∈ K1`, `z2 ∈ K2` with `||z1|| + ||z2|| = 1` and `||z1 + z2|| < ε`,
/// builds opposite `ẑ1 = -ẑ2` with `||ẑ1|| + ||ẑ2|| = 1` and
/// `d(ẑi, Ki) < ε / (2(1 - ε))`.
pub fn lemma1_merge(
    z1: &[Scalar],
    z2: &[Scalar],
    k1: &Cone,
    k2: &Cone,
    eps: &Scalar,
    dn: &PolyhedralNorm,
) -> Result<(Vector, Vector)> {
    check_eps(eps)?;
    check_dim(dn.dim, z1.len())?;
    check_dim(dn.dim, z2.len())?;
    if dn.eval(z1) + dn.eval(z2) != one() || dn.eval(&add(z1, z2)) >= *eps || !k1.contains(z1) || !k2.contains(z2) {
        return Err(Error::Precondition("merge needs unit-sum normals with sum below ε".into()));
    }
    let z1p = scale(&sub(z1, z2), &Scalar::new(1.into(), 2.into()));
    let z2p = neg(&z1p);
    let (h1, h2) = normalize(&z1p, &z2p, dn);
    let bound = eps / (int(2) * (one() - eps));
    if dist_to_cone(&h1, k1, dn).0 >= bound || dist_to_cone(&h2, k2, dn).0 >= bound {
        return Err(Error::Soundness("merge bound violated".into()));
    }
    Ok((h1, h2))
}

/// From opposite `z1 = -z2` with `||z1|| + ||z2|| = 1` and
/// `d(z1, K1) + d(z2, K2) < ε`, builds `ẑi ∈ Ki` with
/// `||ẑ1|| + ||ẑ2|| = 1` and `||ẑ1 + ẑ2|| < ε / (1 - ε)`.
pub fn lemma1_split(
    z1: &[Scalar],
    z2: &[Scalar],
    k1: &Cone,
    k2: &Cone,
    eps: &Scalar,
    dn: &PolyhedralNorm,
) -> Result<(Vector, Vector)> {
    check_eps(eps)?;
    check_dim(dn.dim, z1.len())?;
    check_dim(dn.dim, z2.len())?;
    let (d1, y1) = dist_to_cone(z1, k1, dn);
    let (d2, y2) = dist_to_cone(z2, k2, dn);
    if dn.eval(z1) + dn.eval(z2) != one() || !is_zero(&add(z1, z2)) || &d1 + &d2 >= *eps {
        return Err(Error::Precondition("split needs opposite unit-sum vectors within ε of the cones".into()));
    }
    let (h1, h2) = normalize(&y1, &y2, dn);
    let bound = eps / (one() - eps);
    if dn.eval(&add(&h1, &h2)) >= bound || !k1.contains(&h1) || !k2.contains(&h2) {
        return Err(Error::Soundness("split bound violated".into()));
    }
    Ok((h1, h2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::frac;
    use crate::vector::from_ints;

    #[test]
    fn merge_of_opposite_pair_is_identity() {
        let k1 = Cone::ray(&from_ints(&[0, 1]));
        let k2 = Cone::ray(&from_ints(&[0, -1]));
        let z1 = vec![int(0), frac(1, 2)];
        let z2 = vec![int(0), frac(-1, 2)];
        let (h1, h2) = lemma1_merge(&z1, &z2, &k1, &k2, &frac(1, 10), &PolyhedralNorm::sum(2)).unwrap();
        assert_eq!((h1, h2), (z1, z2));
    }

    #[test]
    fn merge_example_by_hand() {
        // z' = ((9/20, -1/20), (-9/20, 1/20)), ||z1'|| + ||z2'|| = 1 in the sum norm.
        let sum = PolyhedralNorm::sum(2);
        let k1 = Cone::ray(&from_ints(&[1, 0]));
        let k2 = Cone::ray(&from_ints(&[-4, 1]));
        let z1 = vec![frac(1, 2), int(0)];
        let z2 = vec![frac(-2, 5), frac(1, 10)];
        let (h1, h2) = lemma1_merge(&z1, &z2, &k1, &k2, &frac(21, 100), &sum).unwrap();
        assert_eq!(h1, vec![frac(9, 20), frac(-1, 20)]);
        assert_eq!(h2, vec![frac(-9, 20), frac(1, 20)]);
        let bound = frac(21, 100) / (int(2) * frac(79, 100));
        assert!(dist_to_cone(&h1, &k1, &sum).0 < bound);
        assert!(dist_to_cone(&h2, &k2, &sum).0 < bound);
        assert!(lemma1_merge(&z1, &z2, &k1, &k2, &frac(1, 5), &sum).is_err());
    }

    #[test]
    fn split_projects_and_normalizes() {
        let sum = PolyhedralNorm::sum(2);
        let k1 = Cone::ray(&from_ints(&[1, 4]));
        let k2 = Cone::ray(&from_ints(&[0, -1]));
        let z1 = vec![int(0), frac(1, 2)];
        let z2 = vec![int(0), frac(-1, 2)];
        let (h1, h2) = lemma1_split(&z1, &z2, &k1, &k2, &frac(1, 2), &sum).unwrap();
        assert!(k1.contains(&h1) && k2.contains(&h2));
        assert_eq!(sum.eval(&h1) + sum.eval(&h2), int(1));
        assert!(sum.eval(&add(&h1, &h2)) < int(1));
        assert!(lemma1_split(&z1, &z2, &k1, &k2, &int(0), &sum).is_err());
    }

    #[test]
    fn split_of_members_is_identity() {
        let k1 = Cone::ray(&from_ints(&[0, 1]));
        let k2 = Cone::ray(&from_ints(&[0, -1]));
        let z1 = vec![int(0), frac(1, 2)];
        let z2 = vec![int(0), frac(-1, 2)];
        let out = lemma1_split(&z1, &z2, &k1, &k2, &frac(1, 10), &PolyhedralNorm::sum(2)).unwrap();
        assert_eq!(out, (z1, z2));
    }
}
