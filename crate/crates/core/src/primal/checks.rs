//! Decision procedures for the four relative properties.
//!
//! Near the reference points a polyhedral union is a union of cones, so
//! `(A - a) - (B - b)` (localized when asked) is a union of polyhedra whose
//! boundary status at 0 decides levels (i)-(iii) exactly. Level (iv) goes
//! through the dual separation value.

use super::{certify_shift, Level, SetSystem, ShiftWitness};
use crate::dual::{kl_backward, separation_infimum, SeparationValue};
use crate::error::{Error, Result};
use crate::geometry::{dist_region_region, localize, meet, minkowski_difference, point_status, Meet, PointStatus};
use crate::num::{int, min, min_opt, one, Scalar};
use crate::verdict::{Certificate, CertifiedShift, Status, Verdict};
use crate::vector::{neg, scale, sub, zeros, Vector};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    BothShifts,
    SingleShift,
}

/// `2^-1, …, 2^-10`.
pub fn default_schedule() -> Vec<Scalar> {
    (1..=10).map(|k| Scalar::new(1.into(), num_bigint::BigInt::from(1u64 << k))).collect()
}

pub fn validate_schedule(schedule: &[Scalar]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::Precondition("empty ε schedule".into()));
    }
    if schedule.iter().any(|e| !e.is_positive() || *e >= one()) {
        return Err(Error::Precondition("schedule entries must lie in (0, 1)".into()));
    }
    if schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Precondition("schedule must be strictly decreasing".into()));
    }
    Ok(())
}

/// Boundary status of 0 in `(A - a) - (B - b)`. With `local = Some(rho)`
/// both sets are first cut to closed balls of radius
/// `min(rho, r_A, r_B) / 2` (returned), where `r_A`, `r_B` are the
/// exactness radii at the reference points.
pub fn difference_status(s: &SetSystem, local: Option<&Scalar>) -> Result<(PointStatus, Option<Scalar>)> {
    if !s.is_exact() {
        return Err(Error::OracleUnsupported);
    }
    let radius = match local {
        None => None,
        Some(rho) => {
            let (ra, rb) = s.exactness_radii()?;
            let r = min_opt(min_opt(Some(rho.clone()), ra), rb).expect("rho is finite");
            Some(r / int(2))
        }
    };
    let (a_set, b_set) = match &radius {
        None => (s.a_set.clone(), s.b_set.clone()),
        Some(r) => (localize(&s.a_set, &s.a, r, &s.norm)?, localize(&s.b_set, &s.b, r, &s.norm)?),
    };
    let d = minkowski_difference(&a_set.translate(&neg(&s.a)), &b_set.translate(&neg(&s.b)))?;
    Ok((point_status(d.pieces()?, &zeros(s.dim()), &s.norm), radius))
}

/// Shift along a boundary escape direction of the difference set.
fn escape_shift(
    level: Level,
    mode: Mode,
    eps: &Scalar,
    escape: &[Scalar],
    reach: &Option<Scalar>,
    radius: &Option<Scalar>,
    s: &SetSystem,
) -> ShiftWitness {
    let two = int(2);
    let (rho, len) = match level {
        Level::Extremal => (None, min_opt(Some(eps.clone()), reach.clone()).unwrap() / &two),
        Level::LocallyExtremal => {
            let r = radius.clone().expect("local check");
            let len = min(&min_opt(Some(eps.clone()), reach.clone()).unwrap(), &r) / &two;
            (Some(r / &two), len)
        }
        Level::Stationary | Level::ApproxStationary => {
            let r = radius.clone().expect("local check");
            let rho = min(eps, &r) / int(4);
            let len = min_opt(Some(eps * &rho), reach.clone()).unwrap() / &two;
            (Some(rho), len)
        }
    };
    let dir = scale(escape, &(len / s.norm.eval(escape)));
    match mode {
        Mode::BothShifts => {
            let half = scale(&dir, &Scalar::new(1.into(), 2.into()));
            ShiftWitness::new(half.clone(), neg(&half), rho)
        }
        Mode::SingleShift => ShiftWitness::new(dir, zeros(s.dim()), rho),
    }
}

fn from_status(
    s: &SetSystem,
    status: PointStatus,
    radius: Option<Scalar>,
    level: Level,
    mode: Mode,
    schedule: &[Scalar],
) -> Result<Verdict> {
    match status {
        PointStatus::Outside { .. } => Err(Error::Soundness("reference points outside their sets".into())),
        PointStatus::Interior { radius, cover } => Ok(Verdict::refuted(Certificate::Interior { radius, cover })),
        PointStatus::Boundary { escape, reach } => {
            let mut witnesses: Vec<CertifiedShift> = Vec::new();
            for eps in schedule {
                let w = escape_shift(level, mode, eps, &escape, &reach, &radius, s);
                match certify_shift(s, &w, eps, level)? {
                    Some(c) => witnesses.push(c),
                    None => return Err(Error::Soundness(format!("escape shift failed to separate at ε = {eps}"))),
                }
            }
            Ok(Verdict::proved(Certificate::Shifts { witnesses, escape: Some(escape) }))
        }
    }
}

/// Tags a verdict obtained on a grid stand-in.
fn graded(v: Verdict, resolution: Option<Scalar>, grid: usize) -> Verdict {
    let Some(h) = resolution else { return v };
    let status = match v.status {
        Status::Proved => Status::Likely { holds: true, resolution: h.clone() },
        Status::Refuted => Status::Likely { holds: false, resolution: h.clone() },
        other => other,
    };
    let mut out = Verdict::new(status, Some(Certificate::Grid { resolution: h, samples: grid * grid }));
    out.notes = v.notes;
    out.notes.push("decided on the grid stand-in of the oracle region".into());
    out
}

/// Extremality relative to `a`, `b`: `0 ∈ bd[(A - a) - (B - b)]`.
pub fn check_relative_extremal(s: &SetSystem, mode: Mode) -> Result<Verdict> {
    let (exact, res) = s.exact_view(None)?;
    let (st, radius) = difference_status(&exact, None)?;
    let v = from_status(&exact, st, radius, Level::Extremal, mode, &default_schedule())?;
    Ok(graded(v, res, s.limits.grid))
}

/// Local extremality: the same test for the sets cut to small balls
/// around the reference points.
pub fn check_relative_locally_extremal(s: &SetSystem, rho: &Scalar) -> Result<Verdict> {
    if !rho.is_positive() {
        return Err(Error::Precondition("ρ must be positive".into()));
    }
    let (exact, res) = s.exact_view(Some(rho))?;
    let (st, radius) = difference_status(&exact, Some(rho))?;
    let v = from_status(&exact, st, radius, Level::LocallyExtremal, Mode::BothShifts, &default_schedule())?;
    Ok(graded(v, res, s.limits.grid))
}

/// Stationarity relative to `a`, `b` on the given ε schedule. For unions of
/// polyhedra it coincides with local extremality, so the refutation is exact.
pub fn check_relative_stationary(s: &SetSystem, schedule: &[Scalar]) -> Result<Verdict> {
    validate_schedule(schedule)?;
    let (exact, res) = s.exact_view(Some(&one()))?;
    let (st, radius) = difference_status(&exact, Some(&one()))?;
    let v = from_status(&exact, st, radius, Level::Stationary, Mode::BothShifts, schedule)?;
    Ok(graded(v, res, s.limits.grid))
}

/// Locality radius for dual searches: half the smaller exactness radius.
pub fn dual_locality(s: &SetSystem) -> Result<Scalar> {
    let (ra, rb) = s.exactness_radii()?;
    Ok(min_opt(min_opt(Some(one()), ra), rb).expect("finite") / int(2))
}

/// Approximate stationarity, decided by the separation value near the
/// reference points: 0 proves it (with primal witnesses built from the
/// annihilating normals), a positive value or no admissible normals refutes it.
pub fn check_relative_approx_stationary(s: &SetSystem, schedule: &[Scalar]) -> Result<Verdict> {
    validate_schedule(schedule)?;
    let (exact, res) = s.exact_view(Some(&one()))?;
    let sep = separation_infimum(&exact, &dual_locality(&exact)?)?;
    let (st, _) = difference_status(&exact, Some(&one()))?;
    let v = match &sep.value {
        Some(val) if val.is_zero() => proved_by_separation(&exact, sep.clone(), schedule)?,
        _ => {
            if matches!(st, PointStatus::Boundary { .. }) {
                return Err(Error::Soundness(
                    "stationarity witness exists while the separation value is positive".into(),
                ));
            }
            Verdict::refuted(Certificate::Separation { value: sep, witnesses: Vec::new() })
        }
    };
    Ok(graded(v, res, s.limits.grid))
}

fn proved_by_separation(s: &SetSystem, sep: SeparationValue, schedule: &[Scalar]) -> Result<Verdict> {
    let mut witnesses = Vec::new();
    for eps in schedule {
        let dp = sep.pair_near(s, eps)?;
        let Some(w) = kl_backward(&dp, s, eps)? else {
            return Ok(Verdict::unknown(format!("no primal witness found at ε = {eps}")));
        };
        match certify_shift(s, &w, eps, Level::ApproxStationary)? {
            Some(c) => witnesses.push(c),
            None => return Err(Error::Soundness(format!("dual-built witness failed at ε = {eps}"))),
        }
    }
    Ok(Verdict::proved(Certificate::Separation { value: sep, witnesses }))
}

/// Shifts along `b - a` from the distance data: the attained-distance
/// construction when `||a - b|| = d(A, B) > 0`, otherwise the
/// near-distance construction for disjoint sets. `None` when neither applies.
pub fn witness_from_distance(s: &SetSystem, eps: &Scalar) -> Result<Option<ShiftWitness>> {
    if s.a == s.b {
        return Err(Error::Precondition("a = b: no direction to shift along".into()));
    }
    if !eps.is_positive() {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    let (d, _, _) = dist_region_region(&s.a_set, &s.b_set, &s.norm)?;
    let diff: Vector = sub(&s.b, &s.a);
    let len = s.norm.eval(&diff);
    if d.is_positive() && len == d {
        let t = min(&(eps / (int(2) * &len)), &Scalar::new(1.into(), 2.into()));
        return Ok(Some(ShiftWitness::new(scale(&diff, &t), scale(&diff, &-t), None)));
    }
    let disjoint = disjoint(s)?;
    if !disjoint || len >= &d + eps {
        return Ok(None);
    }
    let eps1 = if d.is_positive() {
        // Midpoint of (||b-a|| - d, min(ε, ||b-a||)).
        ((&len - &d) + min(eps, &len)) / int(2)
    } else if len < *eps {
        len.clone()
    } else {
        return Ok(None);
    };
    let t = eps1 / (int(2) * &len);
    Ok(Some(ShiftWitness::new(scale(&diff, &t), scale(&diff, &-t), None)))
}

pub(crate) fn disjoint(s: &SetSystem) -> Result<bool> {
    for p in s.a_pieces()? {
        for q in s.b_pieces()? {
            if matches!(meet(&[p.clone(), q.clone()])?, Meet::Common(_)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{PolyhedralNorm, Polyhedron, Region};
    use crate::num::frac;
    use crate::primal::verify_shift_witness;
    use crate::vector::from_ints;

    fn half(n: &[i64], r: i64) -> Region {
        Region::single(Polyhedron::from_ints(2, &[(n, r)]))
    }

    #[test]
    fn complementary_halfspaces_are_extremal() {
        let s = SetSystem::conventional(half(&[0, 1], 0), half(&[0, -1], 0), from_ints(&[0, 0]), PolyhedralNorm::max(2))
            .unwrap();
        for mode in [Mode::BothShifts, Mode::SingleShift] {
            assert!(check_relative_extremal(&s, mode).unwrap().status.is_proved());
        }
    }

    #[test]
    fn whole_plane_is_not_extremal() {
        let s = SetSystem::new(Region::whole(2), Region::whole(2), from_ints(&[1, 2]), from_ints(&[-3, 0]), PolyhedralNorm::max(2))
            .unwrap();
        assert!(check_relative_extremal(&s, Mode::BothShifts).unwrap().status.is_refuted());
    }

    #[test]
    fn crossing_halfplanes_are_not_stationary() {
        let s = SetSystem::conventional(half(&[0, 1], 0), half(&[1, 1], 0), from_ints(&[0, 0]), PolyhedralNorm::max(2))
            .unwrap();
        assert!(check_relative_stationary(&s, &default_schedule()).unwrap().status.is_refuted());
        assert!(check_relative_approx_stationary(&s, &default_schedule()).unwrap().status.is_refuted());
    }

    #[test]
    fn distance_witness_for_parallel_halfplanes() {
        let s = SetSystem::new(half(&[0, 1], 0), half(&[0, -1], -1), from_ints(&[0, 0]), from_ints(&[0, 1]), PolyhedralNorm::sum(2))
            .unwrap();
        let eps = frac(1, 4);
        let w = witness_from_distance(&s, &eps).unwrap().unwrap();
        assert_eq!(w.u, vec![int(0), frac(1, 8)]);
        assert_eq!(w.v, vec![int(0), frac(-1, 8)]);
        assert!(verify_shift_witness(&s, &w, &eps, Level::Extremal).unwrap());
    }

    #[test]
    fn schedule_validation() {
        assert!(validate_schedule(&[]).is_err());
        assert!(validate_schedule(&[frac(1, 4), frac(1, 2)]).is_err());
        assert!(validate_schedule(&[int(1)]).is_err());
        assert!(validate_schedule(&default_schedule()).is_ok());
    }
}
