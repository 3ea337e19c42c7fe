//! Regions: finite unions of polyhedra, or a membership oracle for the
//! smooth sets that only admit grid-based (Likely) answers.

use super::norm::PolyhedralNorm;
use super::polyhedron::{Polyhedron, Row};
use crate::error::{check_dim, Error, Result};
use crate::lp::{maximize_over, LpOutcome};
use crate::num::{int, serde_opt_scalar, serde_scalar, serde_vector, to_f64, Scalar};
use crate::vector::{add, neg, sub, unit, Vector};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum OracleFamily {
    /// `x2 >= x1^2 + offset`.
    ParabolaEpigraph {
        #[serde(with = "serde_scalar")]
        offset: Scalar,
    },
    /// `exp(-x1) + offset <= x2`, and `x2 <= cap` when a cap is given.
    ExpEpigraph {
        #[serde(with = "serde_scalar")]
        offset: Scalar,
        #[serde(default, with = "serde_opt_scalar", skip_serializing_if = "Option::is_none")]
        cap: Option<Scalar>,
    },
}

impl OracleFamily {
    fn test(&self, y: &[Scalar]) -> bool {
        match self {
            OracleFamily::ParabolaEpigraph { offset } => y[1] >= &y[0] * &y[0] + offset,
            OracleFamily::ExpEpigraph { offset, cap } => {
                if let Some(c) = cap {
                    if &y[1] > c {
                        return false;
                    }
                }
                let lhs = &y[1] - offset;
                if !lhs.is_positive() {
                    return false;
                }
                // Transcendental boundary: compared in floating point.
                (-to_f64(&y[0])).exp() <= to_f64(&lhs)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRegion {
    pub family: OracleFamily,
    /// Bounding box in the family's own coordinates.
    pub bbox: Polyhedron,
    /// Suggested grid step.
    #[serde(with = "serde_scalar")]
    pub modulus: Scalar,
    /// The region is `family ∩ bbox` translated by `shift`.
    #[serde(with = "serde_vector")]
    pub shift: Vector,
}

impl OracleRegion {
    pub fn new(family: OracleFamily, bbox: Polyhedron, modulus: Scalar) -> Result<Self> {
        if bbox.dim != 2 {
            return Err(Error::Input("oracle regions are planar".into()));
        }
        let shift = vec![Scalar::zero(); 2];
        Ok(OracleRegion { family, bbox, modulus, shift })
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        let y = sub(x, &self.shift);
        self.bbox.contains(&y) && self.family.test(&y)
    }

    /// Axis bounds of the bounding box (in region coordinates).
    pub fn bounds(&self) -> Vec<(Scalar, Scalar)> {
        (0..2)
            .map(|i| {
                let e = unit(2, i);
                let hi = match maximize_over(2, &self.bbox.pairs(), &e) {
                    LpOutcome::Optimal(s) => s.value,
                    _ => panic!("oracle bounding box must be bounded and nonempty"),
                };
                let lo = match maximize_over(2, &self.bbox.pairs(), &neg(&e)) {
                    LpOutcome::Optimal(s) => -s.value,
                    _ => panic!("oracle bounding box must be bounded and nonempty"),
                };
                (lo + &self.shift[i], hi + &self.shift[i])
            })
            .collect()
    }

    /// Member points of a `per_axis x per_axis` grid over the box, and the
    /// grid step (the resolution of any verdict derived from it).
    pub fn grid(&self, per_axis: usize) -> (Vec<Vector>, Scalar) {
        let n = per_axis.max(1);
        let b = self.bounds();
        let steps: Vec<Scalar> = b.iter().map(|(lo, hi)| (hi - lo) / int(n as i64)).collect();
        let mut pts = Vec::new();
        for i in 0..=n {
            for j in 0..=n {
                let p = vec![&b[0].0 + &steps[0] * int(i as i64), &b[1].0 + &steps[1] * int(j as i64)];
                if self.contains(&p) {
                    pts.push(p);
                }
            }
        }
        let h = if steps[0] >= steps[1] { steps[0].clone() } else { steps[1].clone() };
        (pts, h)
    }
}

impl OracleRegion {
    /// Polyhedral stand-in at grid step `h = extent / per_axis`: the convex
    /// hull of the member grid nodes, with the grid aligned so that `anchor`
    /// is a node. Both families cut by a polyhedron are convex, so the hull
    /// lies inside the region.
    pub fn standin(&self, anchor: &[Scalar], per_axis: usize) -> (Vec<Polyhedron>, Scalar) {
        let b = self.bounds();
        let n = int(per_axis.max(1) as i64);
        let ext = if &b[0].1 - &b[0].0 >= &b[1].1 - &b[1].0 { &b[0].1 - &b[0].0 } else { &b[1].1 - &b[1].0 };
        let h = ext / n;
        let idx = |lo: &Scalar, hi: &Scalar, c: &Scalar| -> (i64, i64) {
            let k0 = ((lo - c) / &h).floor().to_integer();
            let k1 = ((hi - c) / &h).ceil().to_integer();
            (i64::try_from(k0).unwrap_or(i64::MIN / 4), i64::try_from(k1).unwrap_or(i64::MAX / 4))
        };
        let (i0, i1) = idx(&b[0].0, &b[0].1, &anchor[0]);
        let (j0, j1) = idx(&b[1].0, &b[1].1, &anchor[1]);
        let mut members = Vec::new();
        for i in i0..=i1 {
            for j in j0..=j1 {
                let p = vec![&anchor[0] + &h * int(i), &anchor[1] + &h * int(j)];
                if self.contains(&p) {
                    members.push(p);
                }
            }
        }
        (hull_polyhedron(members).into_iter().collect(), h)
    }
}

fn cross(o: &[Scalar], a: &[Scalar], b: &[Scalar]) -> Scalar {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// H-representation of the convex hull of planar points (monotone chain).
fn hull_polyhedron(mut pts: Vec<Vector>) -> Option<Polyhedron> {
    pts.sort();
    pts.dedup();
    match pts.len() {
        0 => return None,
        1 => return Some(Polyhedron::singleton(&pts[0])),
        _ => {}
    }
    let mut lower: Vec<Vector> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vector> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    let hull: Vec<Vector> = lower.into_iter().chain(upper).collect();
    let edge_row = |p: &Vector, q: &Vector| {
        let normal = vec![&q[1] - &p[1], &p[0] - &q[0]];
        let rhs = &normal[0] * &p[0] + &normal[1] * &p[1];
        Row::new(normal, rhs)
    };
    let mut rows: Vec<Row> = (0..hull.len()).map(|k| edge_row(&hull[k], &hull[(k + 1) % hull.len()])).collect();
    if hull.len() == 2 {
        // A segment: its line both ways plus end caps.
        let d = sub(&hull[1], &hull[0]);
        rows.push(Row::new(d.clone(), &d[0] * &hull[1][0] + &d[1] * &hull[1][1]));
        rows.push(Row::new(neg(&d), -(&d[0] * &hull[0][0] + &d[1] * &hull[0][1])));
    }
    Some(Polyhedron { dim: 2, rows })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
pub enum Region {
    Exact { dim: usize, pieces: Vec<Polyhedron> },
    Oracle(OracleRegion),
}

impl Region {
    /// Union of the nonempty pieces among `pieces`.
    pub fn exact(dim: usize, pieces: Vec<Polyhedron>) -> Result<Self> {
        let mut kept = Vec::new();
        for p in pieces {
            check_dim(dim, p.dim)?;
            if !p.is_empty() {
                kept.push(p);
            }
        }
        Ok(Region::Exact { dim, pieces: kept })
    }

    pub fn single(p: Polyhedron) -> Self {
        let dim = p.dim;
        Region::exact(dim, vec![p]).expect("dimension consistent")
    }

    pub fn whole(dim: usize) -> Self {
        Region::Exact { dim, pieces: vec![Polyhedron::whole(dim)] }
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Exact { dim, .. } => *dim,
            Region::Oracle(o) => o.bbox.dim,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Region::Exact { .. })
    }

    pub fn pieces(&self) -> Result<&[Polyhedron]> {
        match self {
            Region::Exact { pieces, .. } => Ok(pieces),
            Region::Oracle(_) => Err(Error::OracleUnsupported),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Region::Exact { pieces, .. } => pieces.is_empty(),
            Region::Oracle(_) => false,
        }
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        match self {
            Region::Exact { pieces, .. } => pieces.iter().any(|p| p.contains(x)),
            Region::Oracle(o) => o.contains(x),
        }
    }

    /// `R + t`.
    pub fn translate(&self, t: &[Scalar]) -> Region {
        match self {
            Region::Exact { dim, pieces } => {
                Region::Exact { dim: *dim, pieces: pieces.iter().map(|p| p.translate(t)).collect() }
            }
            Region::Oracle(o) => {
                let mut o = o.clone();
                o.shift = add(&o.shift, t);
                Region::Oracle(o)
            }
        }
    }

    /// True when the region is a single polyhedron.
    pub fn is_convex_piece(&self) -> bool {
        matches!(self, Region::Exact { pieces, .. } if pieces.len() == 1)
    }
}

/// `R ∩ {x : ||x - center|| <= rho}`. Empty pieces are dropped, so an empty
/// result is reported as a region without pieces.
pub fn localize(r: &Region, center: &[Scalar], rho: &Scalar, n: &PolyhedralNorm) -> Result<Region> {
    if !rho.is_positive() {
        return Err(Error::Precondition("localization radius must be positive".into()));
    }
    check_dim(r.dim(), center.len())?;
    let ball = n.ball_rows(center, rho);
    match r {
        Region::Exact { dim, pieces } => Region::exact(*dim, pieces.iter().map(|p| p.with_rows(&ball)).collect()),
        Region::Oracle(o) => {
            let mut o = o.clone();
            let local = n.ball_rows(&sub(center, &o.shift), rho);
            o.bbox = o.bbox.with_rows(&local);
            Ok(Region::Oracle(o))
        }
    }
}
