//! Exact distances under polyhedral norms (one LP per piece or piece pair).

use super::norm::PolyhedralNorm;
use super::polyhedron::Polyhedron;
use super::region::Region;
use crate::error::{check_dim, Error, Result};
use crate::lp::{Lp, LpOutcome};
use crate::num::Scalar;
use crate::vector::{dot, sub, Vector};
use num_traits::{One, Zero};

/// `min ||x - p||` over `p ∈ P`, with an attaining point; `None` if `P = ∅`.
pub fn dist_point_polyhedron(x: &[Scalar], p: &Polyhedron, n: &PolyhedralNorm) -> Option<(Scalar, Vector)> {
    let d = p.dim;
    if p.contains(x) {
        return Some((Scalar::zero(), x.to_vec()));
    }
    // Variables (p, t): <f, x - p> <= t for each ball facet f.
    let mut lp = Lp::new_free(d + 1);
    for r in &p.rows {
        let mut row = r.normal.clone();
        row.push(Scalar::zero());
        lp.le(row, r.rhs.clone());
    }
    for f in n.facets() {
        let mut row: Vector = f.iter().map(|v| -v).collect();
        row.push(-Scalar::one());
        lp.le(row, -dot(f, x));
    }
    let mut obj = vec![Scalar::zero(); d];
    obj.push(Scalar::one());
    lp.minimize(obj);
    match lp.solve() {
        LpOutcome::Optimal(s) => Some((s.value, s.x[..d].to_vec())),
        _ => None,
    }
}

/// `min ||p - q||` over `p ∈ P`, `q ∈ Q`; `None` if either is empty.
pub fn dist_polyhedra(p: &Polyhedron, q: &Polyhedron, n: &PolyhedralNorm) -> Option<(Scalar, Vector, Vector)> {
    let d = p.dim;
    let mut lp = Lp::new_free(2 * d + 1);
    for r in &p.rows {
        let mut row = r.normal.clone();
        row.extend(std::iter::repeat(Scalar::zero()).take(d + 1));
        lp.le(row, r.rhs.clone());
    }
    for r in &q.rows {
        let mut row = vec![Scalar::zero(); d];
        row.extend(r.normal.iter().cloned());
        row.push(Scalar::zero());
        lp.le(row, r.rhs.clone());
    }
    for f in n.facets() {
        let mut row = f.clone();
        row.extend(f.iter().map(|v| -v));
        row.push(-Scalar::one());
        lp.le(row, Scalar::zero());
    }
    let mut obj = vec![Scalar::zero(); 2 * d];
    obj.push(Scalar::one());
    lp.minimize(obj);
    match lp.solve() {
        LpOutcome::Optimal(s) => Some((s.value, s.x[..d].to_vec(), s.x[d..2 * d].to_vec())),
        _ => None,
    }
}

/// Distance estimate. Exact for polyhedral regions; for oracle regions it is
/// the distance to the nearest grid member, tagged with the grid step.
#[derive(Debug, Clone, PartialEq)]
pub struct Distance {
    pub value: Scalar,
    pub witness: Vector,
    pub resolution: Option<Scalar>,
}

/// Grid size used for oracle distance estimates when none is given.
pub const DEFAULT_ORACLE_GRID: usize = 32;

pub fn dist_point_region(x: &[Scalar], r: &Region, n: &PolyhedralNorm) -> Result<Distance> {
    check_dim(r.dim(), x.len())?;
    match r {
        Region::Exact { pieces, .. } => {
            let mut best: Option<(Scalar, Vector)> = None;
            for p in pieces {
                if let Some((v, w)) = dist_point_polyhedron(x, p, n) {
                    if best.as_ref().is_none_or(|(b, _)| v < *b) {
                        best = Some((v, w));
                    }
                }
            }
            let (value, witness) = best.ok_or(Error::EmptyRegion)?;
            Ok(Distance { value, witness, resolution: None })
        }
        Region::Oracle(o) => {
            if o.contains(x) {
                return Ok(Distance { value: Scalar::zero(), witness: x.to_vec(), resolution: Some(Scalar::zero()) });
            }
            let (pts, h) = o.grid(DEFAULT_ORACLE_GRID);
            let best = pts.into_iter().map(|p| (n.eval(&sub(x, &p)), p)).min_by(|a, b| a.0.cmp(&b.0));
            let (value, witness) = best.ok_or(Error::EmptyRegion)?;
            Ok(Distance { value, witness, resolution: Some(h) })
        }
    }
}

/// `d(A, B)` with an attaining pair (always attained for polyhedral unions).
pub fn dist_region_region(a: &Region, b: &Region, n: &PolyhedralNorm) -> Result<(Scalar, Vector, Vector)> {
    check_dim(a.dim(), b.dim())?;
    let (pa, pb) = (a.pieces()?, b.pieces()?);
    if pa.is_empty() || pb.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let mut best: Option<(Scalar, Vector, Vector)> = None;
    for p in pa {
        for q in pb {
            if let Some(r) = dist_polyhedra(p, q, n) {
                if best.as_ref().is_none_or(|b| r.0 < b.0) {
                    best = Some(r);
                }
            }
        }
    }
    best.ok_or(Error::EmptyRegion)
}

/// `d(x, R)` over exact pieces, `None` if no piece is given.
pub fn dist_point_pieces(x: &[Scalar], pieces: &[Polyhedron], n: &PolyhedralNorm) -> Option<Scalar> {
    pieces.iter().filter_map(|p| dist_point_polyhedron(x, p, n).map(|r| r.0)).min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;
    use crate::vector::from_ints;

    #[test]
    fn halfspace_distance_max() {
        let r = Region::single(Polyhedron::from_ints(2, &[(&[0, 1], 0)]));
        let d = dist_point_region(&from_ints(&[0, 2]), &r, &PolyhedralNorm::max(2)).unwrap();
        assert_eq!(d.value, int(2));
        assert!(r.contains(&d.witness));
        assert_eq!(n_dist(&d.witness, &from_ints(&[0, 2])), int(2));
    }

    fn n_dist(a: &[Scalar], b: &[Scalar]) -> Scalar {
        PolyhedralNorm::max(2).eval(&sub(a, b))
    }

    #[test]
    fn quadrant_sum_distance() {
        let r = Region::single(Polyhedron::from_ints(2, &[(&[1, 0], 0), (&[0, 1], 0)]));
        let d = dist_point_region(&from_ints(&[1, 1]), &r, &PolyhedralNorm::sum(2)).unwrap();
        assert_eq!(d.value, int(2));
        assert_eq!(d.witness, from_ints(&[0, 0]));
    }

    #[test]
    fn member_distance_zero() {
        let r = Region::whole(2);
        let x = from_ints(&[3, 4]);
        let d = dist_point_region(&x, &r, &PolyhedralNorm::sum(2)).unwrap();
        assert_eq!((d.value, d.witness), (int(0), x));
    }

    #[test]
    fn region_distances() {
        let a = Region::single(Polyhedron::from_ints(2, &[(&[0, 1], 0)]));
        let b = Region::single(Polyhedron::from_ints(2, &[(&[0, -1], -1)]));
        let (d, p, q) = dist_region_region(&a, &b, &PolyhedralNorm::sum(2)).unwrap();
        assert_eq!(d, int(1));
        assert!(a.contains(&p) && b.contains(&q));
        let a = Region::single(Polyhedron::from_ints(2, &[(&[1, 0], 0), (&[0, 1], 0)]));
        let b = Region::single(Polyhedron::from_ints(2, &[(&[-1, 0], -2), (&[0, -1], -1)]));
        let (d, p, q) = dist_region_region(&a, &b, &PolyhedralNorm::max(2)).unwrap();
        assert_eq!(d, int(2));
        assert_eq!(PolyhedralNorm::max(2).eval(&sub(&p, &q)), int(2));
    }
}
