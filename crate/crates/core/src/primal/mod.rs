//! Primal properties of a pair of sets relative to reference points:
//! extremality, local extremality, stationarity and approximate
//! stationarity, with checkable shift witnesses.

mod checks;
mod probes;

pub use checks::{
    check_relative_approx_stationary, check_relative_extremal, check_relative_locally_extremal,
    check_relative_stationary, default_schedule, difference_status, dual_locality, validate_schedule, witness_from_distance, Mode,
};
pub use probes::{
    check_translation_invariance, implication_chain, metric_char_approx_stationary, stability_probe, ChainReport,
    StabilityReport,
};

pub(crate) use checks::disjoint;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{exactness_radius, meet, Meet, PolyhedralNorm, Polyhedron, Region};
use crate::num::{max, serde_opt_scalar, serde_opt_vector, serde_vector, Scalar};
use crate::verdict::{CertifiedShift, PiecePairCertificate};
use crate::vector::{add, neg, sub, Vector};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// Search limits shared by the checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Grid points per axis for oracle regions.
    pub grid: usize,
    /// Maximum number of face pairs in dual searches.
    pub face_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { grid: crate::geometry::distance::DEFAULT_ORACLE_GRID, face_cap: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSystem {
    pub a_set: Region,
    pub b_set: Region,
    #[serde(with = "serde_vector")]
    pub a: Vector,
    #[serde(with = "serde_vector")]
    pub b: Vector,
    pub norm: PolyhedralNorm,
    pub dual_norm: PolyhedralNorm,
    #[serde(default)]
    pub limits: Limits,
}

impl SetSystem {
    pub fn new(a_set: Region, b_set: Region, a: Vector, b: Vector, norm: PolyhedralNorm) -> Result<Self> {
        let d = a_set.dim();
        check_dim(d, b_set.dim())?;
        check_dim(d, a.len())?;
        check_dim(d, b.len())?;
        check_dim(d, norm.dim)?;
        if !a_set.contains(&a) || !b_set.contains(&b) {
            return Err(Error::NotMember);
        }
        let dual_norm = norm.dual();
        Ok(SetSystem { a_set, b_set, a, b, norm, dual_norm, limits: Limits::default() })
    }

    /// The conventional case `a = b = x̄`.
    pub fn conventional(a_set: Region, b_set: Region, x: Vector, norm: PolyhedralNorm) -> Result<Self> {
        SetSystem::new(a_set, b_set, x.clone(), x, norm)
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn is_exact(&self) -> bool {
        self.a_set.is_exact() && self.b_set.is_exact()
    }

    /// Both sets are single polyhedra.
    pub fn is_convex(&self) -> bool {
        self.a_set.is_convex_piece() && self.b_set.is_convex_piece()
    }

    /// Same sets, other reference points.
    pub fn at(&self, a: &[Scalar], b: &[Scalar]) -> Result<SetSystem> {
        let mut s = SetSystem::new(self.a_set.clone(), self.b_set.clone(), a.to_vec(), b.to_vec(), self.norm.clone())?;
        s.limits = self.limits;
        Ok(s)
    }

    /// `{A - u, B - v}` relative to `a - u` and `b - v`.
    pub fn translated(&self, u: &[Scalar], v: &[Scalar]) -> Result<SetSystem> {
        check_dim(self.dim(), u.len())?;
        check_dim(self.dim(), v.len())?;
        let mut s = SetSystem::new(
            self.a_set.translate(&neg(u)),
            self.b_set.translate(&neg(v)),
            sub(&self.a, u),
            sub(&self.b, v),
            self.norm.clone(),
        )?;
        s.limits = self.limits;
        Ok(s)
    }

    pub fn a_pieces(&self) -> Result<&[Polyhedron]> {
        self.a_set.pieces()
    }

    pub fn b_pieces(&self) -> Result<&[Polyhedron]> {
        self.b_set.pieces()
    }

    /// Radii around `a` and `b` within which the sets are cones at the
    /// reference points. `None` when unbounded.
    pub fn exactness_radii(&self) -> Result<(Option<Scalar>, Option<Scalar>)> {
        Ok((
            exactness_radius(self.a_pieces()?, &self.a, &self.norm),
            exactness_radius(self.b_pieces()?, &self.b, &self.norm),
        ))
    }

    /// Exact system to run the decision procedures on. Oracle regions are
    /// replaced by their grid stand-ins (optionally over a window around
    /// the reference point); the grid step is returned alongside.
    pub fn exact_view(&self, window: Option<&Scalar>) -> Result<(SetSystem, Option<Scalar>)> {
        if self.is_exact() {
            return Ok((self.clone(), None));
        }
        let mut resolution: Option<Scalar> = None;
        let mut convert = |r: &Region, center: &[Scalar]| -> Result<Region> {
            match r {
                Region::Exact { .. } => Ok(r.clone()),
                Region::Oracle(_) => {
                    let local = match window {
                        Some(w) => crate::geometry::localize(r, center, w, &self.norm)?,
                        None => r.clone(),
                    };
                    let Region::Oracle(o) = local else { unreachable!() };
                    let (pieces, h) = o.standin(center, self.limits.grid);
                    resolution = Some(match resolution.take() {
                        Some(old) => max(&old, &h),
                        None => h,
                    });
                    Region::exact(2, pieces)
                }
            }
        };
        let a_set = convert(&self.a_set, &self.a)?;
        let b_set = convert(&self.b_set, &self.b)?;
        let mut s = SetSystem::new(a_set, b_set, self.a.clone(), self.b.clone(), self.norm.clone())
            .map_err(|_| Error::Precondition("reference point lost in the grid stand-in".into()))?;
        s.limits = self.limits;
        Ok((s, resolution))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Extremal,
    LocallyExtremal,
    Stationary,
    ApproxStationary,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Extremal, Level::LocallyExtremal, Level::Stationary, Level::ApproxStationary];

    pub fn label(&self) -> &'static str {
        match self {
            Level::Extremal => "extremal",
            Level::LocallyExtremal => "locally-extremal",
            Level::Stationary => "stationary",
            Level::ApproxStationary => "approx-stationary",
        }
    }
}

/// Shifts `u`, `v` and radius `rho` (`None` is ∞) making
/// `(A - a' - u) ∩ (B - b' - v) ∩ rho·B` empty. `a'`, `b'` default to the
/// reference points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftWitness {
    #[serde(with = "serde_vector")]
    pub u: Vector,
    #[serde(with = "serde_vector")]
    pub v: Vector,
    #[serde(with = "serde_opt_scalar")]
    pub rho: Option<Scalar>,
    #[serde(default, with = "serde_opt_vector", skip_serializing_if = "Option::is_none")]
    pub aprime: Option<Vector>,
    #[serde(default, with = "serde_opt_vector", skip_serializing_if = "Option::is_none")]
    pub bprime: Option<Vector>,
}

impl ShiftWitness {
    pub fn new(u: Vector, v: Vector, rho: Option<Scalar>) -> Self {
        ShiftWitness { u, v, rho, aprime: None, bprime: None }
    }

    pub fn base_points(&self, s: &SetSystem) -> (Vector, Vector) {
        (self.aprime.clone().unwrap_or_else(|| s.a.clone()), self.bprime.clone().unwrap_or_else(|| s.b.clone()))
    }

    /// `u' = u - v`, `v' = 0`: the same separation with only `A` moving.
    pub fn single_shift(&self) -> ShiftWitness {
        ShiftWitness { u: sub(&self.u, &self.v), v: vec![Scalar::zero(); self.u.len()], ..self.clone() }
    }
}

/// Size and base-point conditions of the level, without the emptiness test.
pub fn size_conditions(s: &SetSystem, w: &ShiftWitness, eps: &Scalar, level: Level) -> bool {
    let d = s.dim();
    if w.u.len() != d || w.v.len() != d || !eps.is_positive() {
        return false;
    }
    let m = max(&s.norm.eval(&w.u), &s.norm.eval(&w.v));
    let (ap, bp) = w.base_points(s);
    if ap.len() != d || bp.len() != d {
        return false;
    }
    let moved = ap != s.a || bp != s.b;
    match level {
        Level::Extremal => w.rho.is_none() && !moved && m < *eps,
        Level::LocallyExtremal => w.rho.as_ref().is_some_and(|r| r.is_positive()) && !moved && m < *eps,
        Level::Stationary | Level::ApproxStationary => {
            let Some(rho) = &w.rho else { return false };
            if !rho.is_positive() || rho >= eps || m >= eps * rho {
                return false;
            }
            if level == Level::Stationary {
                return !moved;
            }
            s.a_set.contains(&ap)
                && s.b_set.contains(&bp)
                && s.norm.eval(&sub(&ap, &s.a)) < *eps
                && s.norm.eval(&sub(&bp, &s.b)) < *eps
        }
    }
}

/// The polyhedra whose intersection must be empty for piece pair `(i, j)`:
/// `A_i - a' - u`, `B_j - b' - v`, and the `rho`-ball when finite.
pub fn pair_system(s: &SetSystem, w: &ShiftWitness, i: usize, j: usize) -> Result<Vec<Polyhedron>> {
    let (ap, bp) = w.base_points(s);
    let mut out = vec![
        s.a_pieces()?[i].translate(&neg(&add(&ap, &w.u))),
        s.b_pieces()?[j].translate(&neg(&add(&bp, &w.v))),
    ];
    if let Some(rho) = &w.rho {
        let ball = s.norm.ball_rows(&vec![Scalar::zero(); s.dim()], rho);
        out.push(Polyhedron::whole(s.dim()).with_rows(&ball));
    }
    Ok(out)
}

/// Farkas certificates for every piece pair, or `None` if some pair meets.
pub fn pair_certificates(s: &SetSystem, w: &ShiftWitness) -> Result<Option<Vec<PiecePairCertificate>>> {
    let mut out = Vec::new();
    for i in 0..s.a_pieces()?.len() {
        for j in 0..s.b_pieces()?.len() {
            match meet(&pair_system(s, w, i, j)?)? {
                Meet::Empty(certificate) => out.push(PiecePairCertificate { a_piece: i, b_piece: j, certificate }),
                Meet::Common(_) => return Ok(None),
            }
        }
    }
    Ok(Some(out))
}

/// Checks a witness at the given level. Oracle regions are checked on
/// their grid stand-ins.
pub fn verify_shift_witness(s: &SetSystem, w: &ShiftWitness, eps: &Scalar, level: Level) -> Result<bool> {
    let (exact, _) = s.exact_view(None)?;
    if !size_conditions(&exact, w, eps, level) {
        return Ok(false);
    }
    Ok(pair_certificates(&exact, w)?.is_some())
}

/// A verified witness bundled with its emptiness certificates.
pub fn certify_shift(s: &SetSystem, w: &ShiftWitness, eps: &Scalar, level: Level) -> Result<Option<CertifiedShift>> {
    if !s.is_exact() {
        return Err(Error::OracleUnsupported);
    }
    if !size_conditions(s, w, eps, level) {
        return Ok(None);
    }
    Ok(pair_certificates(s, w)?.map(|pairs| CertifiedShift { level, eps: eps.clone(), witness: w.clone(), pairs }))
}
