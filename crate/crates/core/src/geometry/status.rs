//! Where a point sits in a union of polyhedra: outside, on the boundary
//! (with an escape direction), or in the interior (with a covering proof).

use super::distance::dist_point_polyhedron;
use super::norm::PolyhedralNorm;
use super::polyhedron::Polyhedron;
use crate::lp::{strict_system, verify_motzkin, StrictOutcome};
use crate::num::{min_opt, serde_opt_scalar, serde_vector, serde_vectors, Scalar};
use crate::vector::{dot, neg, zeros, Vector};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// One closed branch of the covering search: the strict system
/// `<n_k, v> > 0` over the selected normals has no solution, witnessed by
/// `multipliers >= 0` (not all zero) with `sum multipliers_k n_k = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverLeaf {
    pub selection: Vec<usize>,
    #[serde(with = "serde_vector")]
    pub multipliers: Vector,
}

/// Proof that the union of the tangent cones `{v : <n, v> <= 0, n ∈ normals[i]}`
/// is the whole space: every choice of one normal per cone is closed by a leaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub dim: usize,
    pub normals: Vec<NormalList>,
    pub leaves: Vec<CoverLeaf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalList(#[serde(with = "serde_vectors")] pub Vec<Vector>);

impl CoverCertificate {
    pub fn verify(&self) -> bool {
        if self.normals.iter().any(|n| n.0.is_empty()) {
            return true;
        }
        for leaf in &self.leaves {
            if leaf.selection.len() > self.normals.len()
                || leaf.selection.iter().zip(&self.normals).any(|(&s, n)| s >= n.0.len())
            {
                return false;
            }
            let lt: Vec<(Vector, Scalar)> = leaf
                .selection
                .iter()
                .zip(&self.normals)
                .map(|(&s, n)| (neg(&n.0[s]), Scalar::zero()))
                .collect();
            if !verify_motzkin(self.dim, &[], &lt, &[], &leaf.multipliers) {
                return false;
            }
        }
        // Every full selection must extend some leaf.
        let mut sel = vec![0usize; self.normals.len()];
        loop {
            let closed = self.leaves.iter().any(|l| l.selection.iter().zip(&sel).all(|(a, b)| a == b));
            if !closed {
                return false;
            }
            let mut k = sel.len();
            loop {
                if k == 0 {
                    return true;
                }
                k -= 1;
                sel[k] += 1;
                if sel[k] < self.normals[k].0.len() {
                    break;
                }
                sel[k] = 0;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointStatus {
    Outside {
        #[serde(with = "crate::num::serde_scalar")]
        distance: Scalar,
    },
    /// `x + t*escape` leaves the union for every `0 < t*||escape|| < reach`
    /// (`reach = None` means for every `t > 0`).
    Boundary {
        #[serde(with = "serde_vector")]
        escape: Vector,
        #[serde(with = "serde_opt_scalar")]
        reach: Option<Scalar>,
    },
    /// The closed ball of the given radius around `x` lies in the union
    /// (`None`: the union is the whole space near `x` at every scale).
    Interior {
        #[serde(with = "serde_opt_scalar")]
        radius: Option<Scalar>,
        cover: CoverCertificate,
    },
}

/// Active normals at `x` of every piece that contains `x`, plus the
/// indices of those pieces.
fn containing(pieces: &[Polyhedron], x: &[Scalar]) -> (Vec<usize>, Vec<Vec<Vector>>) {
    let mut idx = Vec::new();
    let mut normals = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        if p.contains(x) {
            idx.push(i);
            normals.push(p.active_rows(x).into_iter().map(|r| p.rows[r].normal.clone()).collect());
        }
    }
    (idx, normals)
}

/// Radius within which the union coincides with `x` plus the union of
/// tangent cones of the pieces containing `x`. `None` means unbounded.
pub fn exactness_radius(pieces: &[Polyhedron], x: &[Scalar], n: &PolyhedralNorm) -> Option<Scalar> {
    let mut r: Option<Scalar> = None;
    for p in pieces {
        if p.contains(x) {
            for row in &p.rows {
                let s = row.slack(x);
                if s.is_positive() {
                    r = min_opt(r, Some(n.hyperplane_distance(x, &row.normal, &row.rhs)));
                }
            }
        } else if let Some((d, _)) = dist_point_polyhedron(x, p, n) {
            r = min_opt(r, Some(d));
        }
    }
    r
}

enum Search {
    Escape(Vector),
    Closed(Vec<CoverLeaf>),
}

fn search(dim: usize, normals: &[Vec<Vector>], sel: &mut Vec<usize>, leaves: &mut Vec<CoverLeaf>) -> Option<Vector> {
    let lt: Vec<(Vector, Scalar)> =
        sel.iter().zip(normals).map(|(&s, n)| (neg(&n[s]), Scalar::zero())).collect();
    if !sel.is_empty() {
        match strict_system(dim, &[], &lt) {
            StrictOutcome::Motzkin { z, .. } => {
                leaves.push(CoverLeaf { selection: sel.clone(), multipliers: z });
                return None;
            }
            StrictOutcome::Feasible(v) => {
                if sel.len() == normals.len() {
                    return Some(v);
                }
            }
            StrictOutcome::Farkas(_) => unreachable!("no non-strict rows"),
        }
    } else if normals.is_empty() {
        return Some(zeros(dim));
    }
    let k = sel.len();
    for s in 0..normals[k].len() {
        sel.push(s);
        let found = search(dim, normals, sel, leaves);
        sel.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

fn run_search(dim: usize, normals: &[Vec<Vector>]) -> Search {
    if normals.iter().any(|n| n.is_empty()) {
        return Search::Closed(Vec::new());
    }
    let mut leaves = Vec::new();
    match search(dim, normals, &mut Vec::new(), &mut leaves) {
        Some(v) => Search::Escape(v),
        None => Search::Closed(leaves),
    }
}

/// Classifies `x` with respect to the union of `pieces`.
pub fn point_status(pieces: &[Polyhedron], x: &[Scalar], n: &PolyhedralNorm) -> PointStatus {
    let dim = x.len();
    let (idx, normals) = containing(pieces, x);
    if idx.is_empty() {
        let distance = pieces
            .iter()
            .filter_map(|p| dist_point_polyhedron(x, p, n).map(|r| r.0))
            .min()
            .expect("at least one nonempty piece");
        return PointStatus::Outside { distance };
    }
    match run_search(dim, &normals) {
        Search::Escape(escape) => {
            let mut reach: Option<Scalar> = None;
            for (i, p) in pieces.iter().enumerate() {
                if !idx.contains(&i) {
                    if let Some((d, _)) = dist_point_polyhedron(x, p, n) {
                        reach = min_opt(reach, Some(d));
                    }
                }
            }
            PointStatus::Boundary { escape, reach }
        }
        Search::Closed(leaves) => {
            let mut radius: Option<Scalar> = None;
            for &i in &idx {
                for row in &pieces[i].rows {
                    if row.slack(x).is_positive() {
                        radius = min_opt(radius, Some(n.hyperplane_distance(x, &row.normal, &row.rhs)));
                    }
                }
            }
            let cover = CoverCertificate { dim, normals: normals.into_iter().map(NormalList).collect(), leaves };
            PointStatus::Interior { radius, cover }
        }
    }
}

/// Checks an escape claim: for each piece containing `x`, some active row
/// has `<n, escape> > 0`, and every other piece is at least `reach` away.
pub fn verify_escape(pieces: &[Polyhedron], x: &[Scalar], escape: &[Scalar], reach: &Option<Scalar>, n: &PolyhedralNorm) -> bool {
    if escape.iter().all(|v| v.is_zero()) && !pieces.iter().all(|p| !p.contains(x)) {
        return false;
    }
    for p in pieces {
        if p.contains(x) {
            let blocked = p.active_rows(x).into_iter().any(|r| dot(&p.rows[r].normal, escape).is_positive());
            if !blocked {
                return false;
            }
        } else if let Some(bound) = reach {
            match dist_point_polyhedron(x, p, n) {
                Some((d, _)) if d < *bound => return false,
                _ => {}
            }
        } else if dist_point_polyhedron(x, p, n).is_some() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;
    use crate::vector::from_ints;

    fn halfplane(n: &[i64], b: i64) -> Polyhedron {
        Polyhedron::from_ints(2, &[(n, b)])
    }

    #[test]
    fn boundary_of_halfplane() {
        let pieces = vec![halfplane(&[0, 1], 0)];
        let n = PolyhedralNorm::max(2);
        match point_status(&pieces, &from_ints(&[0, 0]), &n) {
            PointStatus::Boundary { escape, reach } => {
                assert!(verify_escape(&pieces, &from_ints(&[0, 0]), &escape, &reach, &n));
                assert!(reach.is_none());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn complementary_halfplanes_cover() {
        let pieces = vec![halfplane(&[0, 1], 0), halfplane(&[0, -1], 0)];
        match point_status(&pieces, &from_ints(&[3, 0]), &PolyhedralNorm::max(2)) {
            PointStatus::Interior { radius, cover } => {
                assert!(radius.is_none());
                assert!(cover.verify());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn interior_radius_of_square() {
        let sq = Polyhedron::from_ints(2, &[(&[1, 0], 2), (&[-1, 0], 2), (&[0, 1], 2), (&[0, -1], 2)]);
        match point_status(&[sq], &from_ints(&[1, 0]), &PolyhedralNorm::max(2)) {
            PointStatus::Interior { radius, .. } => assert_eq!(radius, Some(int(1))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn outside_distance() {
        let pieces = vec![halfplane(&[0, 1], 0)];
        match point_status(&pieces, &from_ints(&[0, 3]), &PolyhedralNorm::sum(2)) {
            PointStatus::Outside { distance } => assert_eq!(distance, int(3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tampered_cover_fails() {
        let pieces = vec![halfplane(&[0, 1], 0), halfplane(&[0, -1], 0)];
        if let PointStatus::Interior { mut cover, .. } = point_status(&pieces, &from_ints(&[0, 0]), &PolyhedralNorm::max(2)) {
            cover.leaves.clear();
            assert!(!cover.verify());
        } else {
            panic!("expected interior");
        }
    }
}
