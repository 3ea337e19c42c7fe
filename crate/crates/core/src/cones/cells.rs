//! Cells of the hyperplane arrangement of a union inside an open ball.
//! The normal cone of a union is constant on each cell, so the distinct
//! cones found here are all the normal cones realized near the center.

use super::{normal_cone_pieces, Cone};
use crate::error::{Error, Result};
use crate::geometry::distance::dist_point_polyhedron;
use crate::geometry::{PolyhedralNorm, Polyhedron};
use crate::lp::{strict_system, StrictOutcome};
use crate::num::{serde_vector, Scalar};
use crate::vector::{dot, neg, Vector};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// A point in the relative interior of a face of one piece.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacePoint {
    pub piece_index: usize,
    pub active_rows: Vec<usize>,
    #[serde(with = "serde_vector")]
    pub representative: Vector,
}

impl FacePoint {
    pub fn at(pieces: &[Polyhedron], x: &[Scalar]) -> Option<FacePoint> {
        let i = pieces.iter().position(|p| p.contains(x))?;
        Some(FacePoint { piece_index: i, active_rows: pieces[i].active_rows(x), representative: x.to_vec() })
    }
}

#[derive(Debug, Clone)]
pub struct LocalCell {
    pub face: FacePoint,
    pub cone: Cone,
}

#[derive(Clone)]
struct Cell {
    le: Vec<(Vector, Scalar)>,
    lt: Vec<(Vector, Scalar)>,
    rep: Vector,
}

/// Hyperplanes of rows whose hyperplane meets the open ball, up to scaling.
fn hyperplanes(pieces: &[Polyhedron], center: &[Scalar], radius: &Scalar, n: &PolyhedralNorm) -> Vec<(Vector, Scalar)> {
    let mut out: Vec<(Vector, Scalar)> = Vec::new();
    for p in pieces {
        for r in &p.rows {
            if n.hyperplane_distance(center, &r.normal, &r.rhs) >= *radius {
                continue;
            }
            let c = r.canonical();
            let (nrm, rhs) = (c.normal, c.rhs);
            let flipped = (neg(&nrm), -rhs.clone());
            if !out.iter().any(|h| *h == (nrm.clone(), rhs.clone()) || *h == flipped) {
                out.push((nrm, rhs));
            }
        }
    }
    out
}

fn refine(cell: &Cell, h: &(Vector, Scalar)) -> Vec<Cell> {
    let (nrm, rhs) = h;
    let s = dot(nrm, &cell.rep) - rhs;
    let mut out = Vec::new();
    for side in [-1i8, 0, 1] {
        let mut c = cell.clone();
        match side {
            -1 => c.lt.push((nrm.clone(), rhs.clone())),
            1 => c.lt.push((neg(nrm), -rhs.clone())),
            _ => {
                c.le.push((nrm.clone(), rhs.clone()));
                c.le.push((neg(nrm), -rhs.clone()));
            }
        }
        let keeps = (side == -1 && s.is_negative()) || (side == 1 && s.is_positive()) || (side == 0 && s.is_zero());
        if keeps {
            out.push(c);
            continue;
        }
        let dim = nrm.len();
        if let StrictOutcome::Feasible(x) = strict_system(dim, &c.le, &c.lt) {
            c.rep = x;
            out.push(c);
        }
    }
    out
}

/// Distinct normal cones of the union over its points in the open ball
/// `{x : ||x - center|| < radius}`, each with a representative face point.
/// Fails when the number of arrangement cells exceeds `cap`.
pub fn local_cells(pieces: &[Polyhedron], center: &[Scalar], radius: &Scalar, n: &PolyhedralNorm, cap: usize) -> Result<Vec<LocalCell>> {
    let near: Vec<Polyhedron> = pieces
        .iter()
        .filter(|p| dist_point_polyhedron(center, p, n).is_some_and(|(d, _)| d < *radius))
        .cloned()
        .collect();
    let ball: Vec<(Vector, Scalar)> = n.ball_rows(center, radius);
    let mut cells = vec![Cell { le: Vec::new(), lt: ball, rep: center.to_vec() }];
    for h in hyperplanes(&near, center, radius, n) {
        cells = cells.iter().flat_map(|c| refine(c, &h)).collect();
        if cells.len() > cap {
            return Err(Error::FaceCap { count: cells.len(), cap });
        }
    }
    let mut out: Vec<LocalCell> = Vec::new();
    for c in cells {
        let Some(face) = FacePoint::at(pieces, &c.rep) else { continue };
        let cone = normal_cone_pieces(pieces, &c.rep)?;
        if !out.iter().any(|o| o.cone.same_as(&cone)) {
            out.push(LocalCell { face, cone });
        }
    }
    Ok(out)
}
