//! H-polyhedra `{x : <n_i, x> <= b_i}` and Farkas emptiness certificates.

use crate::error::{check_dim, Error, Result};
use crate::lp::{feasible_point, verify_le_farkas};
use crate::num::{serde_scalar, serde_vector, Scalar};
use crate::vector::{dot, is_zero, neg, unit, Vector};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Row {
    #[serde(with = "serde_vector")]
    pub normal: Vector,
    #[serde(with = "serde_scalar")]
    pub rhs: Scalar,
}

impl Row {
    pub fn new(normal: Vector, rhs: Scalar) -> Self {
        Row { normal, rhs }
    }

    pub fn slack(&self, x: &[Scalar]) -> Scalar {
        &self.rhs - dot(&self.normal, x)
    }

    /// Same halfspace up to positive scaling.
    pub fn canonical(&self) -> Row {
        let scale = self
            .normal
            .iter()
            .find(|v| !v.is_zero())
            .map(|v| v.abs())
            .unwrap_or_else(|| if self.rhs.is_zero() { Scalar::one() } else { self.rhs.abs() });
        Row { normal: self.normal.iter().map(|v| v / &scale).collect(), rhs: &self.rhs / &scale }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polyhedron {
    pub dim: usize,
    pub rows: Vec<Row>,
}

/// Nonnegative multipliers whose combination of the tested rows reads
/// `0 <= -1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmptinessCertificate {
    #[serde(with = "serde_vector")]
    pub multipliers: Vector,
}

impl EmptinessCertificate {
    pub fn verify(&self, dim: usize, rows: &[Row]) -> bool {
        let pairs: Vec<(Vector, Scalar)> = rows.iter().map(|r| (r.normal.clone(), r.rhs.clone())).collect();
        verify_le_farkas(dim, &pairs, &self.multipliers)
    }
}

impl Polyhedron {
    pub fn new(dim: usize, rows: Vec<Row>) -> Result<Self> {
        for r in &rows {
            check_dim(dim, r.normal.len())?;
        }
        Ok(Polyhedron { dim, rows })
    }

    /// Builds from integer coefficient rows, handy in tests and examples.
    pub fn from_ints(dim: usize, rows: &[(&[i64], i64)]) -> Self {
        let rows = rows
            .iter()
            .map(|(n, b)| Row::new(crate::vector::from_ints(n), crate::num::int(*b)))
            .collect();
        Polyhedron::new(dim, rows).expect("consistent dimensions")
    }

    pub fn whole(dim: usize) -> Self {
        Polyhedron { dim, rows: Vec::new() }
    }

    pub fn singleton(p: &[Scalar]) -> Self {
        let d = p.len();
        let mut rows = Vec::with_capacity(2 * d);
        for i in 0..d {
            rows.push(Row::new(unit(d, i), p[i].clone()));
            rows.push(Row::new(neg(&unit(d, i)), -p[i].clone()));
        }
        Polyhedron { dim: d, rows }
    }

    pub fn pairs(&self) -> Vec<(Vector, Scalar)> {
        self.rows.iter().map(|r| (r.normal.clone(), r.rhs.clone())).collect()
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        x.len() == self.dim && self.rows.iter().all(|r| !r.slack(x).is_negative())
    }

    /// `P + t`.
    pub fn translate(&self, t: &[Scalar]) -> Polyhedron {
        let rows = self
            .rows
            .iter()
            .map(|r| Row::new(r.normal.clone(), &r.rhs + dot(&r.normal, t)))
            .collect();
        Polyhedron { dim: self.dim, rows }
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        debug_assert_eq!(self.dim, other.dim);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Polyhedron { dim: self.dim, rows }
    }

    pub fn with_rows(&self, extra: &[(Vector, Scalar)]) -> Polyhedron {
        let mut rows = self.rows.clone();
        rows.extend(extra.iter().map(|(n, b)| Row::new(n.clone(), b.clone())));
        Polyhedron { dim: self.dim, rows }
    }

    /// A point of `P`, or a Farkas certificate over `self.rows`.
    pub fn find_point(&self) -> std::result::Result<Vector, EmptinessCertificate> {
        feasible_point(self.dim, &self.pairs()).map_err(|multipliers| EmptinessCertificate { multipliers })
    }

    pub fn is_empty(&self) -> bool {
        self.find_point().is_err()
    }

    /// Indices of rows tight at `x`.
    pub fn active_rows(&self, x: &[Scalar]) -> Vec<usize> {
        (0..self.rows.len()).filter(|&i| self.rows[i].slack(x).is_zero()).collect()
    }

    /// Drops rows of the form `0 <= b` with `b >= 0` and exact duplicates.
    pub fn tidy(&self) -> Polyhedron {
        let mut rows: Vec<Row> = Vec::new();
        for r in &self.rows {
            if is_zero(&r.normal) && !r.rhs.is_negative() {
                continue;
            }
            let c = r.canonical();
            if !rows.iter().any(|q| q.canonical() == c) {
                rows.push(r.clone());
            }
        }
        Polyhedron { dim: self.dim, rows }
    }
}

/// Outcome of an intersection test.
#[derive(Debug, Clone)]
pub enum Meet {
    Empty(EmptinessCertificate),
    Common(Vector),
}

/// Tests whether the polyhedra share a point. The certificate ranges over
/// the concatenated rows in the given order.
pub fn meet(pieces: &[Polyhedron]) -> Result<Meet> {
    let dim = pieces.first().map(|p| p.dim).ok_or_else(|| Error::Precondition("no pieces".into()))?;
    let mut all = Polyhedron::whole(dim);
    for p in pieces {
        check_dim(dim, p.dim)?;
        all = all.intersect(p);
    }
    Ok(match all.find_point() {
        Ok(x) => Meet::Common(x),
        Err(c) => Meet::Empty(c),
    })
}

/// Emptiness of an intersection: Proved with Farkas multipliers over the
/// concatenated rows, or Refuted with a common point.
pub fn intersect_empty(pieces: &[Polyhedron]) -> Result<crate::verdict::Verdict> {
    use crate::verdict::{Certificate, Verdict};
    Ok(match meet(pieces)? {
        Meet::Empty(certificate) => Verdict::proved(Certificate::Emptiness { certificate }),
        Meet::Common(point) => Verdict::refuted(Certificate::CommonPoint { point }),
    })
}

/// Rows of several polyhedra concatenated, matching `meet`'s certificate.
pub fn stacked_rows(pieces: &[Polyhedron]) -> Vec<Row> {
    pieces.iter().flat_map(|p| p.rows.iter().cloned()).collect()
}
