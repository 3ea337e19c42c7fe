//! Reduction of n sets to a pair in a product space.

use super::norm::PolyhedralNorm;
use super::polyhedron::{Polyhedron, Row};
use super::region::Region;
use crate::error::{check_dim, Error, Result};
use crate::primal::SetSystem;
use crate::vector::Vector;
use itertools::Itertools;
use num_traits::{One, Zero};

use crate::num::Scalar;

fn lift(p: &Polyhedron, block: usize, blocks: usize) -> Vec<Row> {
    let d = p.dim;
    p.rows
        .iter()
        .map(|r| {
            let mut n = vec![Scalar::zero(); d * blocks];
            n[block * d..(block + 1) * d].clone_from_slice(&r.normal);
            Row::new(n, r.rhs.clone())
        })
        .collect()
}

/// `A × B` in the doubled space.
pub fn cartesian(a: &Region, b: &Region) -> Result<Region> {
    check_dim(a.dim(), b.dim())?;
    let d = a.dim();
    let mut pieces = Vec::new();
    for p in a.pieces()? {
        for q in b.pieces()? {
            pieces.push(Polyhedron::new(2 * d, [lift(p, 0, 2), lift(q, 1, 2)].concat())?);
        }
    }
    Region::exact(2 * d, pieces)
}

/// `{(x, x) : x ∈ R^d}`.
pub fn diagonal(d: usize) -> Polyhedron {
    let mut rows = Vec::new();
    for i in 0..d {
        let mut e = vec![Scalar::zero(); 2 * d];
        e[i] = Scalar::one();
        e[d + i] = -Scalar::one();
        rows.push(Row::new(e.clone(), Scalar::zero()));
        rows.push(Row::new(e.iter().map(|v| -v).collect(), Scalar::zero()));
    }
    Polyhedron { dim: 2 * d, rows }
}

/// `max(||y||, ||z||)` on pairs.
pub fn product_norm(n: &PolyhedralNorm) -> Result<PolyhedralNorm> {
    if n.kind == super::norm::NormKind::Max {
        return Ok(PolyhedralNorm::max(2 * n.dim));
    }
    let zero = vec![Scalar::zero(); n.dim];
    let facets: Vec<(Vector, Scalar)> = n
        .facets()
        .iter()
        .flat_map(|f| [([f.clone(), zero.clone()].concat(), Scalar::one()), ([zero.clone(), f.clone()].concat(), Scalar::one())])
        .collect();
    PolyhedralNorm::polytope_ball(2 * n.dim, &facets)
}

/// `A = A_1 × … × A_{n-1}` and `B = {(x, …, x) : x ∈ A_n}` with the max
/// norm on the product. `points[i]` is the reference point of `regions[i]`.
pub fn reduce_n_sets(regions: &[Region], points: &[Vector]) -> Result<SetSystem> {
    if regions.len() < 2 {
        return Err(Error::Precondition("at least two regions are needed".into()));
    }
    if points.len() != regions.len() {
        return Err(Error::Precondition("one reference point per region".into()));
    }
    let d = regions[0].dim();
    for (r, p) in regions.iter().zip(points) {
        check_dim(d, r.dim())?;
        check_dim(d, p.len())?;
    }
    let n = regions.len();
    if n == 2 {
        return SetSystem::new(
            regions[0].clone(),
            regions[1].clone(),
            points[0].clone(),
            points[1].clone(),
            PolyhedralNorm::max(d),
        );
    }
    let m = n - 1;
    let piece_lists: Vec<&[Polyhedron]> = regions.iter().map(|r| r.pieces()).collect::<Result<_>>()?;
    let mut a_pieces = Vec::new();
    for combo in piece_lists[..m].iter().map(|l| l.iter()).multi_cartesian_product() {
        let rows = combo.iter().enumerate().flat_map(|(k, p)| lift(p, k, m)).collect();
        a_pieces.push(Polyhedron::new(d * m, rows)?);
    }
    let mut b_pieces = Vec::new();
    for p in piece_lists[m] {
        let mut rows = lift(p, 0, m);
        for k in 1..m {
            for i in 0..d {
                let mut e = vec![Scalar::zero(); d * m];
                e[i] = Scalar::one();
                e[k * d + i] = -Scalar::one();
                rows.push(Row::new(e.clone(), Scalar::zero()));
                rows.push(Row::new(e.iter().map(|v| -v).collect(), Scalar::zero()));
            }
        }
        b_pieces.push(Polyhedron::new(d * m, rows)?);
    }
    let a: Vector = points[..m].concat();
    let b: Vector = (0..m).flat_map(|_| points[m].iter().cloned()).collect();
    SetSystem::new(Region::exact(d * m, a_pieces)?, Region::exact(d * m, b_pieces)?, a, b, PolyhedralNorm::max(d * m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::meet;
    use crate::geometry::Meet;
    use crate::vector::from_ints;

    fn half(n: &[i64], r: i64) -> Region {
        Region::single(Polyhedron::from_ints(2, &[(n, r)]))
    }

    #[test]
    fn two_sets_are_kept() {
        let r = vec![half(&[0, 1], 0), half(&[0, -1], 0)];
        let s = reduce_n_sets(&r, &[from_ints(&[0, 0]), from_ints(&[0, 0])]).unwrap();
        assert_eq!(s.a_set, r[0]);
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn three_sets_meet_iff_pair_meets() {
        let o = from_ints(&[0, 0]);
        let pts = vec![o.clone(), o.clone(), o.clone()];
        let meets = vec![half(&[0, 1], 0), half(&[1, 1], 0), half(&[-1, 0], 0)];
        let s = reduce_n_sets(&meets, &pts).unwrap();
        assert_eq!(s.dim(), 4);
        let pa = s.a_set.pieces().unwrap()[0].clone();
        let pb = s.b_set.pieces().unwrap()[0].clone();
        assert!(matches!(meet(&[pa, pb]).unwrap(), Meet::Common(_)));
        let apart = vec![half(&[0, 1], 0), half(&[0, -1], -1), half(&[1, 0], 0)];
        let s = reduce_n_sets(&apart, &[o.clone(), from_ints(&[0, 1]), o]).unwrap();
        let pa = s.a_set.pieces().unwrap()[0].clone();
        let pb = s.b_set.pieces().unwrap()[0].clone();
        assert!(matches!(meet(&[pa, pb]).unwrap(), Meet::Empty(_)));
    }

    #[test]
    fn whole_last_set_gives_diagonal() {
        let o = from_ints(&[0, 0]);
        let r = vec![half(&[0, 1], 0), half(&[1, 0], 0), Region::whole(2)];
        let s = reduce_n_sets(&r, &[o.clone(), o.clone(), o]).unwrap();
        assert!(s.b_set.contains(&from_ints(&[3, -2, 3, -2])));
        assert!(!s.b_set.contains(&from_ints(&[3, -2, 3, -1])));
    }
}
