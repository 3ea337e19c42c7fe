//! The pair of sets seen through the mappings `F(x) = (A - x) × (B - x)` and
//! `S(y, z) = (A - y) ∩ (B - z)`: images, sampled rates of the regularity
//! properties of `F` and `S`, and the boundary tests in the doubled space.

use crate::cones::{local_cells, CONE_DIM_CAP};
use crate::error::{check_dim, Error, Result};
use crate::geometry::distance::{dist_point_pieces, dist_point_polyhedron};
use crate::geometry::{
    cartesian, diagonal, minkowski_difference, minkowski_sum, point_status, product_norm, PointStatus, Polyhedron,
    Region,
};
use crate::num::{frac, int, max, min, one, serde_opt_scalar, serde_scalar, serde_vector, Scalar};
use crate::primal::{
    check_relative_approx_stationary, check_relative_extremal, default_schedule, Mode, SetSystem,
};
use crate::verdict::{Certificate, Status, Verdict};
use crate::vector::{add, concat, neg, scale, sub, zeros, Vector};
use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    F,
    S,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingView {
    pub system: SetSystem,
    pub which: Which,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MappingInput {
    Point(Vector),
    Pair(Vector, Vector),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Image {
    /// `F(x)` as its two factors.
    Product(Region, Region),
    /// `S(y, z)`; no pieces means the empty set.
    Set(Region),
}

impl Image {
    /// Membership; for a product `p` is the concatenation `(y, z)`.
    pub fn contains(&self, p: &[Scalar]) -> bool {
        match self {
            Image::Product(a, b) => {
                let d = a.dim();
                p.len() == 2 * d && a.contains(&p[..d]) && b.contains(&p[d..])
            }
            Image::Set(r) => r.contains(p),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Image::Product(a, b) => a.is_empty() || b.is_empty(),
            Image::Set(r) => r.is_empty(),
        }
    }
}

fn meet_region(s: &SetSystem, y: &[Scalar], z: &[Scalar]) -> Result<Region> {
    let mut pieces = Vec::new();
    for p in s.a_pieces()? {
        for q in s.b_pieces()? {
            pieces.push(p.translate(&neg(y)).intersect(&q.translate(&neg(z))));
        }
    }
    Region::exact(s.dim(), pieces)
}

pub fn evaluate(m: &MappingView, input: &MappingInput) -> Result<Image> {
    let s = &m.system;
    let d = s.dim();
    match (m.which, input) {
        (Which::F, MappingInput::Point(x)) => {
            check_dim(d, x.len())?;
            Ok(Image::Product(s.a_set.translate(&neg(x)), s.b_set.translate(&neg(x))))
        }
        (Which::S, MappingInput::Pair(y, z)) => {
            check_dim(d, y.len())?;
            check_dim(d, z.len())?;
            Ok(Image::Set(meet_region(s, y, z)?))
        }
        (Which::F, _) => Err(Error::Precondition("F takes a single point".into())),
        (Which::S, _) => Err(Error::Precondition("S takes a pair of points".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateProperty {
    Covering,
    Semiregularity,
    LipschitzLsc,
    MetricRegularity,
    Aubin,
}

impl RateProperty {
    pub const ALL: [RateProperty; 5] = [
        RateProperty::Covering,
        RateProperty::Semiregularity,
        RateProperty::LipschitzLsc,
        RateProperty::MetricRegularity,
        RateProperty::Aubin,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            RateProperty::Covering => "covering",
            RateProperty::Semiregularity => "semiregularity",
            RateProperty::LipschitzLsc => "lipschitz_lsc",
            RateProperty::MetricRegularity => "metric_regularity",
            RateProperty::Aubin => "aubin",
        }
    }
}

/// One evaluated sample; `ratio = None` stands for `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateSample {
    #[serde(with = "serde_vector")]
    pub input: Vector,
    #[serde(with = "serde_opt_scalar")]
    pub ratio: Option<Scalar>,
}

/// `alpha_lower <= alpha <= alpha_upper`; `alpha_upper = None` when no
/// sample gave a finite ratio.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub property: RateProperty,
    #[serde(with = "serde_scalar")]
    pub delta: Scalar,
    #[serde(with = "serde_scalar")]
    pub alpha_lower: Scalar,
    #[serde(with = "serde_opt_scalar")]
    pub alpha_upper: Option<Scalar>,
    pub samples: Vec<RateSample>,
}

impl RateEstimate {
    pub fn is_exact(&self) -> bool {
        self.alpha_upper.as_ref() == Some(&self.alpha_lower)
    }

    /// Every sampled ratio is at least `alpha`.
    pub fn bounded_below_by(&self, alpha: &Scalar) -> bool {
        self.samples.iter().all(|s| s.ratio.as_ref().is_none_or(|r| r >= alpha))
    }
}

/// Radii of the sample shells. The set is fixed so that windows nest.
fn radii() -> Vec<Scalar> {
    (1..=4).map(|k| frac(1, 1 << k)).collect()
}

/// Unit-box boundary points of a `grid`-per-axis lattice, and 0.
fn directions(d: usize, grid: usize) -> Vec<Vector> {
    let g = grid.max(2);
    let ticks: Vec<Scalar> = (0..g).map(|k| frac(2 * k as i64, g as i64 - 1) - int(1)).collect();
    let mut out = vec![zeros(d)];
    for p in (0..d).map(|_| ticks.iter().cloned()).multi_cartesian_product() {
        if p.iter().any(|t| t.abs() == one()) {
            out.push(p);
        }
    }
    out
}

/// Offset tuples `(o_1, …, o_k)` sharing a radius, inside the window.
fn shells(s: &SetSystem, k: usize, delta: &Scalar, grid: usize) -> Vec<Vec<Vector>> {
    let dirs = directions(s.dim(), grid);
    let mut out = Vec::new();
    for r in radii() {
        for tuple in (0..k).map(|_| dirs.iter()).multi_cartesian_product() {
            let t: Vec<Vector> = tuple.iter().map(|v| scale(v, &r)).collect();
            if t.iter().all(|o| s.norm.eval(o) < *delta) && !out.contains(&t) {
                out.push(t);
            }
        }
    }
    out
}

/// Points of `A` and `B` near the reference points, one per local cell.
fn face_points(s: &SetSystem, delta: &Scalar) -> Result<(Vec<Vector>, Vec<Vector>)> {
    let cap = s.limits.face_cap;
    let ca = local_cells(s.a_pieces()?, &s.a, delta, &s.norm, cap)?;
    let cb = local_cells(s.b_pieces()?, &s.b, delta, &s.norm, cap)?;
    Ok((
        ca.into_iter().map(|c| c.face.representative).collect(),
        cb.into_iter().map(|c| c.face.representative).collect(),
    ))
}

fn pair_norm(s: &SetSystem, y: &[Scalar], z: &[Scalar]) -> Scalar {
    max(&s.norm.eval(y), &s.norm.eval(z))
}

/// `d(w, S(y, z))`, `None` for the empty set.
fn dist_to_s(s: &SetSystem, w: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Result<Option<Scalar>> {
    let mut best: Option<Scalar> = None;
    for p in meet_region(s, y, z)?.pieces()? {
        if let Some((d, _)) = dist_point_polyhedron(w, p, &s.norm) {
            best = Some(best.map_or(d.clone(), |b| min(&b, &d)));
        }
    }
    Ok(best)
}

/// `num / den` with `den = None` read as `+∞` (ratio 0) and `den = 0` as
/// an infinite ratio.
fn ratio(num: Scalar, den: Option<Scalar>) -> Option<Scalar> {
    match den {
        None => Some(Scalar::zero()),
        Some(d) if d.is_zero() => None,
        Some(d) => Some(num / d),
    }
}

fn dom_s(s: &SetSystem) -> Result<Region> {
    let d = s.dim();
    minkowski_difference(&cartesian(&s.a_set, &s.b_set)?, &Region::single(diagonal(d)))
}

/// `p + T_P(p)` for each piece through `p`: the union of tangent cones,
/// which agrees with the region near `p`.
fn tangent_region(r: &Region, p: &[Scalar]) -> Result<Region> {
    let d = p.len();
    let cones: Vec<Polyhedron> = r
        .pieces()?
        .iter()
        .filter(|q| q.contains(p))
        .map(|q| Polyhedron { dim: d, rows: q.active_rows(p).into_iter().map(|i| q.rows[i].clone()).collect() })
        .collect();
    Region::exact(d, cones)
}

/// The system with both sets replaced by their tangent-cone unions at the
/// reference points. It is positively homogeneous around `(a, b)`, so a
/// ratio sampled on it is the limit of the ratio along the same ray.
fn tangent_view(s: &SetSystem) -> Result<SetSystem> {
    let t = SetSystem::new(tangent_region(&s.a_set, &s.a)?, tangent_region(&s.b_set, &s.b)?, s.a.clone(), s.b.clone(), s.norm.clone())?;
    Ok(t.with_limits(s.limits))
}

/// Samples the defining inequality of `property` in the `δ`-window around
/// the reference points (face points first, then the shell grid) and
/// returns the smallest ratio. Covering is sampled on the sets themselves;
/// the other, local, properties on the tangent-cone view, which gives the
/// limiting rank as the window shrinks. Oracle regions are sampled on their
/// stand-ins.
pub fn estimate_rate(m: &MappingView, property: RateProperty, delta: &Scalar, grid: usize) -> Result<RateEstimate> {
    if !delta.is_positive() {
        return Err(Error::Precondition("δ must be positive".into()));
    }
    let (s, _) = m.system.exact_view(Some(&one()))?;
    let s = if property == RateProperty::Covering { s } else { tangent_view(&s)? };
    let (a, b) = (s.a.clone(), s.b.clone());
    let (fa, fb) = face_points(&s, delta)?;
    let mut samples = Vec::new();
    let mut alpha_lower = Scalar::zero();
    let mut on_boundary = false;
    match property {
        RateProperty::Covering => {
            let dom = dom_s(&s)?;
            let ab = concat(&a, &b);
            match point_status(dom.pieces()?, &ab, &product_norm(&s.norm)?) {
                PointStatus::Interior { radius: Some(r), .. } => alpha_lower = r,
                PointStatus::Boundary { .. } => on_boundary = true,
                _ => {}
            }
            for t in shells(&s, 2, delta, grid) {
                let p = concat(&add(&a, &t[0]), &add(&b, &t[1]));
                let r = if dom.contains(&p) { None } else { Some(pair_norm(&s, &t[0], &t[1])) };
                samples.push(RateSample { input: p, ratio: r });
            }
        }
        RateProperty::Semiregularity | RateProperty::LipschitzLsc => {
            let mut offsets: Vec<(Vector, Vector)> = fa
                .iter()
                .cartesian_product(&fb)
                .map(|(p, q)| (sub(p, &a), sub(q, &b)))
                .filter(|(u, v)| pair_norm(&s, u, v) < *delta)
                .collect();
            offsets.extend(shells(&s, 2, delta, grid).into_iter().map(|t| (t[0].clone(), t[1].clone())));
            for (oy, oz) in offsets {
                let (y, z) = (add(&a, &oy), add(&b, &oz));
                let den = dist_to_s(&s, &zeros(s.dim()), &y, &z)?;
                samples.push(RateSample { input: concat(&y, &z), ratio: ratio(pair_norm(&s, &oy, &oz), den) });
            }
        }
        RateProperty::MetricRegularity => {
            for t in shells(&s, 3, delta, grid) {
                let (w, y, z) = (t[0].clone(), add(&a, &t[1]), add(&b, &t[2]));
                let da = dist_point_pieces(&add(&y, &w), s.a_pieces()?, &s.norm).ok_or(Error::EmptyRegion)?;
                let db = dist_point_pieces(&add(&z, &w), s.b_pieces()?, &s.norm).ok_or(Error::EmptyRegion)?;
                let den = dist_to_s(&s, &w, &y, &z)?;
                samples.push(RateSample { input: [w, y, z].concat(), ratio: ratio(max(&da, &db), den) });
            }
        }
        RateProperty::Aubin => {
            // Base pairs (y, z) ∈ A × B near (a, b), so w = 0 ∈ S(y, z).
            let bases: Vec<(Vector, Vector)> = fa
                .iter()
                .cartesian_product(&fb)
                .map(|(p, q)| (p.clone(), q.clone()))
                .filter(|(p, q)| pair_norm(&s, &sub(p, &a), &sub(q, &b)) < *delta)
                .collect();
            let moves = shells(&s, 2, delta, grid);
            for (y, z) in bases {
                let room = delta - pair_norm(&s, &sub(&y, &a), &sub(&z, &b));
                for t in &moves {
                    if pair_norm(&s, &t[0], &t[1]) >= room {
                        continue;
                    }
                    let (y2, z2) = (add(&y, &t[0]), add(&z, &t[1]));
                    let den = dist_to_s(&s, &zeros(s.dim()), &y2, &z2)?;
                    samples.push(RateSample {
                        input: [y.clone(), z.clone(), y2, z2].concat(),
                        ratio: ratio(pair_norm(&s, &t[0], &t[1]), den),
                    });
                }
            }
        }
    }
    let alpha_upper = if on_boundary {
        Some(Scalar::zero())
    } else {
        samples.iter().filter_map(|x| x.ratio.clone()).min()
    };
    if let Some(u) = &alpha_upper {
        if alpha_lower > *u {
            return Err(Error::Soundness("certified covering radius exceeds a sampled ratio".into()));
        }
    }
    Ok(RateEstimate { property, delta: delta.clone(), alpha_lower, alpha_upper, samples })
}

/// `(a, b)` against `Ã + B̃` with `Ã = A × B` and `B̃` the diagonal.
/// Boundary membership must agree with relative extremality.
pub fn product_boundary_condition(s: &SetSystem) -> Result<Verdict> {
    if !s.is_exact() {
        return Err(Error::OracleUnsupported);
    }
    let d = s.dim();
    if 2 * d > CONE_DIM_CAP {
        return Err(Error::DimensionCap { dim: 2 * d, cap: CONE_DIM_CAP });
    }
    let sum = minkowski_sum(&cartesian(&s.a_set, &s.b_set)?, &Region::single(diagonal(d)))?;
    let v = match point_status(sum.pieces()?, &concat(&s.a, &s.b), &product_norm(&s.norm)?) {
        PointStatus::Outside { .. } => return Err(Error::Soundness("(a, b) outside Ã + B̃".into())),
        PointStatus::Boundary { escape, reach } => Verdict::proved(Certificate::Boundary { escape, reach }),
        PointStatus::Interior { radius, cover } => Verdict::refuted(Certificate::Interior { radius, cover }),
    };
    let ext = check_relative_extremal(s, Mode::BothShifts)?;
    if ext.status.is_proved() != v.status.is_proved() {
        return Err(Error::Soundness("product boundary test disagrees with relative extremality".into()));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub extremal: Status,
    pub dom_boundary: bool,
    pub approx_stationary: Status,
    pub covering: RateEstimate,
    pub metric_regularity: RateEstimate,
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl CrosscheckReport {
    pub fn consistent(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Grid used by the crosscheck's sampled side.
pub const CROSSCHECK_GRID: usize = 2;

/// Compares the relative checks with the mapping-side criteria: extremality
/// against `(a, b) ∈ bd dom S` (exact), approximate stationarity against the
/// sampled metric-regularity rate (warnings only).
pub fn crosscheck_primal_dual(s: &SetSystem) -> Result<CrosscheckReport> {
    if !s.is_exact() {
        return Err(Error::OracleUnsupported);
    }
    let dom = dom_s(s)?;
    let dom_boundary = matches!(
        point_status(dom.pieces()?, &concat(&s.a, &s.b), &product_norm(&s.norm)?),
        PointStatus::Boundary { .. }
    );
    let extremal = check_relative_extremal(s, Mode::BothShifts)?.status;
    let approx = check_relative_approx_stationary(s, &default_schedule())?.status;
    let view = MappingView { system: s.clone(), which: Which::S };
    let delta = frac(1, 2);
    let covering = estimate_rate(&view, RateProperty::Covering, &delta, CROSSCHECK_GRID)?;
    let metric = estimate_rate(&view, RateProperty::MetricRegularity, &delta, CROSSCHECK_GRID)?;
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    if extremal.is_proved() != dom_boundary {
        errors.push(format!("extremality is {} but (a, b) ∈ bd dom S is {dom_boundary}", extremal.label()));
    }
    if extremal.is_proved() && covering.alpha_lower.is_positive() {
        errors.push("extremal pair with a certified positive covering radius".into());
    }
    let positive = metric.alpha_upper.as_ref().is_none_or(|u| u.is_positive());
    if approx.is_refuted() && !positive {
        warnings.push("not approximately stationary, yet a sample has metric-regularity ratio 0".into());
    }
    if approx.is_proved() && positive {
        warnings.push("approximately stationary, yet no sample exposes a zero metric-regularity ratio".into());
    }
    Ok(CrosscheckReport {
        extremal,
        dom_boundary,
        approx_stationary: approx,
        covering,
        metric_regularity: metric,
        errors,
        warnings,
    })
}
