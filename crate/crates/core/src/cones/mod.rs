//! Polyhedral cones in both representations, tangent and Fréchet normal
//! cones of polyhedral unions, ε-normals, and distances to cones.

pub mod cells;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{PolyhedralNorm, Polyhedron, Region};
use crate::linalg::nullspace;
use crate::lp::{maximize_over, Lp, LpOutcome};
use crate::num::{serde_vectors, Scalar};
use crate::vector::{dot, neg, Vector};
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use cells::{local_cells, FacePoint, LocalCell};

/// Double description is brute force over row subsets; keep it small.
pub const CONE_DIM_CAP: usize = 6;

/// `cone(generators) = {y : <h, y> <= 0 for every h in hrows}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    pub dim: usize,
    #[serde(with = "serde_vectors")]
    pub generators: Vec<Vector>,
    #[serde(with = "serde_vectors")]
    pub hrows: Vec<Vector>,
}

/// Integer vector with coprime entries on the same ray as `v`.
pub fn primitive(v: &[Scalar]) -> Vector {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Scalar::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Scalar::from_integer(x / &g)).collect()
}

/// Generators of `{y : <r, y> <= 0 for r in rows}`: both signs of a
/// lineality basis plus the extreme rays of the pointed part.
pub fn extreme_rays(dim: usize, rows: &[Vector]) -> Result<Vec<Vector>> {
    if dim > CONE_DIM_CAP {
        return Err(Error::DimensionCap { dim, cap: CONE_DIM_CAP });
    }
    let rows: Vec<Vector> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let lineality = nullspace(&rows, dim);
    let k = dim - lineality.len();
    let mut out: Vec<Vector> = Vec::new();
    for l in &lineality {
        let p = primitive(l);
        out.push(p.clone());
        out.push(neg(&p));
    }
    if k == 0 {
        return Ok(out);
    }
    let mut rays: Vec<Vector> = Vec::new();
    for subset in (0..rows.len()).combinations(k - 1) {
        let mut m: Vec<Vector> = lineality.clone();
        m.extend(subset.iter().map(|&i| rows[i].clone()));
        let ns = nullspace(&m, dim);
        if ns.len() != 1 {
            continue;
        }
        let r = &ns[0];
        let cand = if rows.iter().all(|h| !dot(h, r).is_positive()) {
            primitive(r)
        } else if rows.iter().all(|h| !dot(h, r).is_negative()) {
            primitive(&neg(r))
        } else {
            continue;
        };
        if !rays.contains(&cand) {
            rays.push(cand);
        }
    }
    rays.sort();
    out.extend(rays);
    Ok(out)
}

impl Cone {
    pub fn from_generators(dim: usize, gens: &[Vector]) -> Result<Cone> {
        for g in gens {
            check_dim(dim, g.len())?;
        }
        let hrows = extreme_rays(dim, gens)?;
        let generators = extreme_rays(dim, &hrows)?;
        Ok(Cone { dim, generators, hrows })
    }

    pub fn from_hrows(dim: usize, rows: &[Vector]) -> Result<Cone> {
        for r in rows {
            check_dim(dim, r.len())?;
        }
        let generators = extreme_rays(dim, rows)?;
        let hrows = extreme_rays(dim, &generators)?;
        Ok(Cone { dim, generators, hrows })
    }

    pub fn zero(dim: usize) -> Cone {
        Cone::from_generators(dim, &[]).expect("small dimension")
    }

    pub fn whole(dim: usize) -> Cone {
        Cone::from_hrows(dim, &[]).expect("small dimension")
    }

    pub fn ray(v: &[Scalar]) -> Cone {
        Cone::from_generators(v.len(), &[v.to_vec()]).expect("small dimension")
    }

    pub fn contains(&self, y: &[Scalar]) -> bool {
        self.hrows.iter().all(|h| !dot(h, y).is_positive())
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Both representations agree: every generator satisfies every row.
    pub fn is_consistent(&self) -> bool {
        self.generators.iter().all(|g| self.contains(g))
    }

    pub fn subset_of(&self, other: &Cone) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    pub fn same_as(&self, other: &Cone) -> bool {
        self.dim == other.dim && self.subset_of(other) && other.subset_of(self)
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        let mut rows = self.hrows.clone();
        rows.extend(other.hrows.iter().cloned());
        Cone::from_hrows(self.dim, &rows)
    }

    /// `{-y : y ∈ K}`.
    pub fn negated(&self) -> Cone {
        Cone {
            dim: self.dim,
            generators: self.generators.iter().map(|g| neg(g)).collect(),
            hrows: self.hrows.iter().map(|h| neg(h)).collect(),
        }
    }
}

/// `{v : <n_i, v> <= 0 for rows active at a}`.
pub fn tangent_cone(p: &Polyhedron, a: &[Scalar]) -> Result<Cone> {
    check_dim(p.dim, a.len())?;
    if !p.contains(a) {
        return Err(Error::NotMember);
    }
    let rows: Vec<Vector> = p.active_rows(a).into_iter().map(|i| p.rows[i].normal.clone()).collect();
    Cone::from_hrows(p.dim, &rows)
}

/// Normal cone of a single polyhedron: conic hull of the active normals.
pub fn normal_cone_polyhedron(p: &Polyhedron, a: &[Scalar]) -> Result<Cone> {
    check_dim(p.dim, a.len())?;
    if !p.contains(a) {
        return Err(Error::NotMember);
    }
    let gens: Vec<Vector> = p.active_rows(a).into_iter().map(|i| p.rows[i].normal.clone()).collect();
    Cone::from_generators(p.dim, &gens)
}

/// Fréchet normal cone of a union at `a`: the intersection of the normal
/// cones of the pieces containing `a` (the polar of the union of tangent cones).
pub fn normal_cone(r: &Region, a: &[Scalar]) -> Result<Cone> {
    check_dim(r.dim(), a.len())?;
    let pieces = r.pieces()?;
    normal_cone_pieces(pieces, a)
}

pub fn normal_cone_pieces(pieces: &[Polyhedron], a: &[Scalar]) -> Result<Cone> {
    let dim = a.len();
    let mut rows: Vec<Vector> = Vec::new();
    let mut any = false;
    for p in pieces.iter().filter(|p| p.contains(a)) {
        any = true;
        rows.extend(tangent_cone(p, a)?.generators);
    }
    if !any {
        return Err(Error::NotMember);
    }
    Cone::from_hrows(dim, &rows)
}

/// Whether `x*` is an ε-normal to the region at `a`: for every piece
/// containing `a`, `max{<x*, v> : v ∈ T_P(a), ||v|| <= 1} <= ε`.
pub fn eps_normal_member(xstar: &[Scalar], a: &[Scalar], r: &Region, eps: &Scalar, n: &PolyhedralNorm) -> Result<bool> {
    check_dim(r.dim(), a.len())?;
    check_dim(r.dim(), xstar.len())?;
    if eps.is_negative() {
        return Err(Error::Precondition("ε must be nonnegative".into()));
    }
    let pieces = r.pieces()?;
    let mut any = false;
    for p in pieces.iter().filter(|p| p.contains(a)) {
        any = true;
        let mut rows: Vec<(Vector, Scalar)> =
            p.active_rows(a).into_iter().map(|i| (p.rows[i].normal.clone(), Scalar::zero())).collect();
        rows.extend(n.ball_facets());
        match maximize_over(r.dim(), &rows, xstar) {
            LpOutcome::Optimal(s) => {
                if s.value > *eps {
                    return Ok(false);
                }
            }
            _ => unreachable!("bounded by the unit ball"),
        }
    }
    if !any {
        return Err(Error::NotMember);
    }
    Ok(true)
}

/// `min{||x* - y||_dn : y ∈ K}` with an attaining `y`.
pub fn dist_to_cone(xstar: &[Scalar], k: &Cone, dn: &PolyhedralNorm) -> (Scalar, Vector) {
    if k.contains(xstar) {
        return (Scalar::zero(), xstar.to_vec());
    }
    let m = k.generators.len();
    if m == 0 {
        return (dn.eval(xstar), vec![Scalar::zero(); k.dim]);
    }
    // Variables (lambda >= 0, t free): <g, x* - G lambda> <= t.
    let mut lp = Lp::new(m + 1);
    lp.set_free(m);
    for g in dn.facets() {
        let mut row: Vector = k.generators.iter().map(|c| -dot(g, c)).collect();
        row.push(-Scalar::one());
        lp.le(row, -dot(g, xstar));
    }
    let mut obj = vec![Scalar::zero(); m];
    obj.push(Scalar::one());
    lp.minimize(obj);
    let s = lp.solve().optimal().expect("distance LP is feasible and bounded");
    let mut y = vec![Scalar::zero(); k.dim];
    for (lam, g) in s.x[..m].iter().zip(&k.generators) {
        for (yi, gi) in y.iter_mut().zip(g) {
            *yi += lam * gi;
        }
    }
    (s.value, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;
    use crate::vector::from_ints;

    #[test]
    fn halfspace_normal_is_ray() {
        let p = Polyhedron::from_ints(2, &[(&[1, 2], 3)]);
        let k = normal_cone_polyhedron(&p, &from_ints(&[1, 1])).unwrap();
        assert!(k.same_as(&Cone::ray(&from_ints(&[1, 2]))));
        assert!(k.is_consistent());
    }

    #[test]
    fn interior_normal_is_zero() {
        let p = Polyhedron::from_ints(2, &[(&[0, 1], 0)]);
        let k = normal_cone_polyhedron(&p, &from_ints(&[0, -1])).unwrap();
        assert!(k.is_zero());
        let t = tangent_cone(&p, &from_ints(&[0, -1])).unwrap();
        assert!(t.same_as(&Cone::whole(2)));
    }

    #[test]
    fn quadrant_tangent_cone() {
        let p = Polyhedron::from_ints(2, &[(&[1, 0], 0), (&[0, 1], 0)]);
        let t = tangent_cone(&p, &from_ints(&[0, 0])).unwrap();
        assert_eq!(t.generators.len(), 2);
        assert!(t.contains(&from_ints(&[-1, -3])));
        assert!(!t.contains(&from_ints(&[1, -3])));
    }

    #[test]
    fn union_corner_has_trivial_normal_cone() {
        let a = Region::exact(
            2,
            vec![Polyhedron::from_ints(2, &[(&[0, 1], 0)]), Polyhedron::from_ints(2, &[(&[1, 0], -1)])],
        )
        .unwrap();
        let k = normal_cone(&a, &from_ints(&[-1, 0])).unwrap();
        assert!(k.is_zero());
        let k = normal_cone(&a, &from_ints(&[0, 0])).unwrap();
        assert!(k.same_as(&Cone::ray(&from_ints(&[0, 1]))));
    }

    #[test]
    fn cone_distances() {
        let sum = PolyhedralNorm::sum(2);
        assert_eq!(dist_to_cone(&from_ints(&[0, 1]), &Cone::zero(2), &sum).0, int(1));
        let (d, w) = dist_to_cone(&from_ints(&[1, 1]), &Cone::ray(&from_ints(&[0, 1])), &sum);
        assert_eq!((d, w), (int(1), from_ints(&[0, 1])));
    }

    #[test]
    fn eps_normals_at_halfspace() {
        let r = Region::single(Polyhedron::from_ints(2, &[(&[0, 1], 0)]));
        let max = PolyhedralNorm::max(2);
        let a = from_ints(&[0, 0]);
        assert!(eps_normal_member(&from_ints(&[0, 1]), &a, &r, &int(0), &max).unwrap());
        assert!(!eps_normal_member(&from_ints(&[1, 1]), &a, &r, &int(0), &max).unwrap());
        assert!(eps_normal_member(&from_ints(&[1, 1]), &a, &r, &int(1), &max).unwrap());
    }
}
