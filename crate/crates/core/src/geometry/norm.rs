//! Polyhedral norms: `||x|| = max_k <f_k, x>` over the facet normals of the
//! unit ball, with the ball's vertices giving the dual norm.

use crate::error::{check_dim, Error, Result};
use crate::linalg::solve_square;
use crate::lp::{maximize_over, LpOutcome};
use crate::num::Scalar;
use crate::vector::{dot, neg, unit, Vector};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Max,
    Sum,
    PolytopeBall,
}

/// Vertex enumeration for custom balls is brute force; keep it small.
pub const BALL_DIM_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(into = "NormSpec", try_from = "NormSpec")]
pub struct PolyhedralNorm {
    pub kind: NormKind,
    pub dim: usize,
    /// Unit ball `{x : <f, x> <= 1}`; the norm is the max of `<f, x>`.
    facets: Vec<Vector>,
    /// Vertices of the unit ball; the dual norm is the max of `<w, y>`.
    vertices: Vec<Vector>,
}

/// Serialized form: the kind, the dimension and, for custom balls, the
/// facet normals `f` of `{x : <f, x> <= 1}`.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct NormSpec {
    pub kind: NormKind,
    pub dim: usize,
    #[serde(default, with = "crate::num::serde_vectors", skip_serializing_if = "Vec::is_empty")]
    pub facets: Vec<Vector>,
}

impl From<PolyhedralNorm> for NormSpec {
    fn from(n: PolyhedralNorm) -> Self {
        let facets = if n.kind == NormKind::PolytopeBall { n.facets } else { Vec::new() };
        NormSpec { kind: n.kind, dim: n.dim, facets }
    }
}

impl TryFrom<NormSpec> for PolyhedralNorm {
    type Error = crate::error::Error;

    fn try_from(s: NormSpec) -> Result<Self> {
        match s.kind {
            NormKind::Max => Ok(PolyhedralNorm::max(s.dim)),
            NormKind::Sum => Ok(PolyhedralNorm::sum(s.dim)),
            NormKind::PolytopeBall => {
                let rows: Vec<(Vector, Scalar)> = s.facets.into_iter().map(|f| (f, Scalar::one())).collect();
                PolyhedralNorm::polytope_ball(s.dim, &rows)
            }
        }
    }
}

fn sign_vectors(dim: usize) -> Vec<Vector> {
    (0..dim)
        .map(|_| [Scalar::one(), -Scalar::one()])
        .multi_cartesian_product()
        .map(|v| v.to_vec())
        .collect()
}

fn signed_units(dim: usize) -> Vec<Vector> {
    (0..dim).flat_map(|i| [unit(dim, i), neg(&unit(dim, i))]).collect()
}

impl PolyhedralNorm {
    pub fn max(dim: usize) -> Self {
        PolyhedralNorm { kind: NormKind::Max, dim, facets: signed_units(dim), vertices: sign_vectors(dim) }
    }

    pub fn sum(dim: usize) -> Self {
        PolyhedralNorm { kind: NormKind::Sum, dim, facets: sign_vectors(dim), vertices: signed_units(dim) }
    }

    /// Norm whose unit ball is `{x : <n_k, x> <= r_k}`. The ball must be a
    /// bounded, symmetric polytope with 0 in its interior (all `r_k > 0`).
    pub fn polytope_ball(dim: usize, ball_facets: &[(Vector, Scalar)]) -> Result<Self> {
        if dim == 0 || dim > BALL_DIM_CAP {
            return Err(Error::DimensionCap { dim, cap: BALL_DIM_CAP });
        }
        if ball_facets.is_empty() {
            return Err(Error::InvalidNorm("no facets".into()));
        }
        let mut facets: Vec<Vector> = Vec::new();
        for (n, r) in ball_facets {
            check_dim(dim, n.len())?;
            if !r.is_positive() {
                return Err(Error::InvalidNorm("0 must be interior (all right-hand sides positive)".into()));
            }
            let f: Vector = n.iter().map(|x| x / r).collect();
            if !facets.contains(&f) {
                facets.push(f);
            }
        }
        let rows: Vec<(Vector, Scalar)> = facets.iter().map(|f| (f.clone(), Scalar::one())).collect();
        for d in signed_units(dim) {
            if !matches!(maximize_over(dim, &rows, &d), LpOutcome::Optimal(_)) {
                return Err(Error::InvalidNorm("unit ball is unbounded".into()));
            }
        }
        let mut vertices: Vec<Vector> = Vec::new();
        for subset in (0..facets.len()).combinations(dim) {
            let m: Vec<Vector> = subset.iter().map(|&i| facets[i].clone()).collect();
            let ones = vec![Scalar::one(); dim];
            if let Some(v) = solve_square(&m, &ones) {
                if facets.iter().all(|f| dot(f, &v) <= Scalar::one()) && !vertices.contains(&v) {
                    vertices.push(v);
                }
            }
        }
        for v in &vertices {
            let mv = neg(v);
            if facets.iter().any(|f| dot(f, &mv) > Scalar::one()) {
                return Err(Error::InvalidNorm("unit ball is not symmetric".into()));
            }
        }
        vertices.sort();
        Ok(PolyhedralNorm { kind: NormKind::PolytopeBall, dim, facets, vertices })
    }

    pub fn facets(&self) -> &[Vector] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Unit-ball description as `(normal, rhs)` rows.
    pub fn ball_facets(&self) -> Vec<(Vector, Scalar)> {
        self.facets.iter().map(|f| (f.clone(), Scalar::one())).collect()
    }

    pub fn eval(&self, v: &[Scalar]) -> Scalar {
        debug_assert_eq!(v.len(), self.dim);
        self.facets.iter().map(|f| dot(f, v)).max().unwrap_or_else(Scalar::zero)
    }

    /// Dual norm `max{<y, x> : ||x|| <= 1}`.
    pub fn dual_eval(&self, y: &[Scalar]) -> Scalar {
        debug_assert_eq!(y.len(), self.dim);
        self.vertices.iter().map(|w| dot(w, y)).max().unwrap_or_else(Scalar::zero)
    }

    /// A unit-ball vertex `w` with `<y, w> = ||y||_*`.
    pub fn support_vertex(&self, y: &[Scalar]) -> Vector {
        let best = self.dual_eval(y);
        self.vertices.iter().find(|w| dot(w, y) == best).cloned().expect("nonempty vertex list")
    }

    pub fn dual(&self) -> PolyhedralNorm {
        let kind = match self.kind {
            NormKind::Max => NormKind::Sum,
            NormKind::Sum => NormKind::Max,
            NormKind::PolytopeBall => NormKind::PolytopeBall,
        };
        let mut facets = self.vertices.clone();
        let mut vertices = self.facets.clone();
        if self.kind == NormKind::PolytopeBall {
            facets.sort();
            vertices.sort();
        }
        PolyhedralNorm { kind, dim: self.dim, facets, vertices }
    }

    /// Closed ball `{x : ||x - c|| <= r}` as inequality rows.
    pub fn ball_rows(&self, center: &[Scalar], radius: &Scalar) -> Vec<(Vector, Scalar)> {
        self.facets.iter().map(|f| (f.clone(), radius + dot(f, center))).collect()
    }

    /// Same unit ball (facet sets may differ by redundant rows).
    pub fn same_ball(&self, other: &PolyhedralNorm) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let inside = |p: &PolyhedralNorm, q: &PolyhedralNorm| q.vertices.iter().all(|v| p.eval(v) <= Scalar::one());
        inside(self, other) && inside(other, self)
    }

    /// Distance from `x` to the hyperplane `<n, y> = b`.
    pub fn hyperplane_distance(&self, x: &[Scalar], n: &[Scalar], b: &Scalar) -> Scalar {
        (dot(n, x) - b).abs() / self.dual_eval(n)
    }
}

pub fn norm_eval(v: &[Scalar], n: &PolyhedralNorm) -> Result<Scalar> {
    check_dim(n.dim, v.len())?;
    Ok(n.eval(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Lp;
    use crate::num::{frac, int};
    use crate::vector::{from_ints, zeros};

    fn diamond() -> PolyhedralNorm {
        let rows: Vec<(Vector, Scalar)> =
            sign_vectors(2).into_iter().map(|s| (s, int(1))).collect();
        PolyhedralNorm::polytope_ball(2, &rows).unwrap()
    }

    /// Gauge by LP: min t s.t. v in t*B.
    fn gauge_lp(v: &[Scalar], n: &PolyhedralNorm) -> Scalar {
        let d = v.len();
        let mut lp = Lp::new_free(1);
        for f in n.facets() {
            lp.ge(vec![Scalar::one()], dot(f, v));
        }
        lp.minimize(vec![Scalar::one()]);
        let _ = d;
        lp.solve().optimal().unwrap().value
    }

    #[test]
    fn basic_values() {
        assert_eq!(norm_eval(&zeros(2), &PolyhedralNorm::max(2)).unwrap(), int(0));
        assert_eq!(norm_eval(&from_ints(&[3, -4]), &PolyhedralNorm::max(2)).unwrap(), int(4));
        assert_eq!(norm_eval(&from_ints(&[3, -4]), &PolyhedralNorm::sum(2)).unwrap(), int(7));
        assert!(norm_eval(&from_ints(&[1]), &PolyhedralNorm::sum(2)).is_err());
    }

    #[test]
    fn diamond_ball_matches_lp_gauge() {
        let n = diamond();
        let v = vec![frac(1, 2), frac(1, 3)];
        assert_eq!(n.eval(&v), frac(5, 6));
        assert_eq!(gauge_lp(&v, &n), frac(5, 6));
        assert_eq!(n.vertices().len(), 4);
    }

    #[test]
    fn dual_pairs() {
        let m = PolyhedralNorm::max(3);
        assert_eq!(m.dual().kind, NormKind::Sum);
        assert!(m.dual().dual().same_ball(&m));
        let d = diamond();
        assert!(d.dual().dual().same_ball(&d));
        assert!(d.dual().same_ball(&PolyhedralNorm::max(2)));
    }

    #[test]
    fn rejects_bad_balls() {
        let half = vec![(from_ints(&[1, 0]), int(1)), (from_ints(&[0, 1]), int(1))];
        assert!(PolyhedralNorm::polytope_ball(2, &half).is_err());
        let skew = vec![
            (from_ints(&[1, 0]), int(1)),
            (from_ints(&[-1, 0]), int(2)),
            (from_ints(&[0, 1]), int(1)),
            (from_ints(&[0, -1]), int(1)),
        ];
        assert!(PolyhedralNorm::polytope_ball(2, &skew).is_err());
    }
}
