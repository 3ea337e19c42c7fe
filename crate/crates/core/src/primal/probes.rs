//! Cross-checks between the four relative properties: the implication
//! chain, invariance under translation, the metric characterization of
//! approximate stationarity and its stability under moving the points.

use super::checks::{
    check_relative_approx_stationary, check_relative_extremal, check_relative_locally_extremal,
    check_relative_stationary, default_schedule, dual_locality, Mode,
};
use super::{certify_shift, Level, SetSystem, ShiftWitness};
use crate::dual::{kl_backward, separation_infimum};
use crate::error::{Error, Result};
use crate::geometry::distance::{dist_point_pieces, dist_point_polyhedron};
use crate::num::{frac, int, min, one, serde_vector, Scalar};
use crate::verdict::{Status, Verdict};
use crate::vector::{add, neg, scale, sub, Vector};
use itertools::Itertools;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelVerdict {
    pub level: Level,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub levels: Vec<LevelVerdict>,
    pub convex: bool,
    pub violations: Vec<String>,
}

impl ChainReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// `Some(true)` for proved (or likely), `Some(false)` for refuted.
    pub fn holds(&self) -> Vec<Option<bool>> {
        self.levels.iter().map(|l| decided(&l.verdict.status)).collect()
    }
}

fn decided(s: &Status) -> Option<bool> {
    match s {
        Status::Proved => Some(true),
        Status::Refuted => Some(false),
        Status::Likely { holds, .. } => Some(*holds),
        Status::Unknown => None,
    }
}

fn all_levels(s: &SetSystem) -> Result<Vec<LevelVerdict>> {
    let schedule = default_schedule();
    let verdicts = [
        check_relative_extremal(s, Mode::BothShifts)?,
        check_relative_locally_extremal(s, &one())?,
        check_relative_stationary(s, &schedule)?,
        check_relative_approx_stationary(s, &schedule)?,
    ];
    Ok(Level::ALL.into_iter().zip(verdicts).map(|(level, verdict)| LevelVerdict { level, verdict }).collect())
}

/// Runs all four checks and flags verdict patterns that break the chain
/// (a stronger property holding while a weaker one fails), and for two
/// single polyhedra any disagreement at all.
pub fn implication_chain(s: &SetSystem) -> Result<ChainReport> {
    let levels = all_levels(s)?;
    let holds: Vec<Option<bool>> = levels.iter().map(|l| decided(&l.verdict.status)).collect();
    let mut violations = Vec::new();
    for (i, j) in (0..holds.len()).tuple_combinations() {
        if holds[i] == Some(true) && holds[j] == Some(false) {
            violations.push(format!("{} holds but {} fails", levels[i].level.label(), levels[j].level.label()));
        }
    }
    let convex = s.is_convex();
    if convex {
        let known: Vec<bool> = holds.iter().flatten().copied().collect();
        if known.iter().any(|&h| h != known[0]) {
            violations.push("convex instance with unequal verdicts".into());
        }
    }
    Ok(ChainReport { levels, convex, violations })
}

/// Whether `{A - u, B - v}` at `a - u`, `b - v` gets the same four verdicts.
/// With `a = b = x̄` this is the conventional-to-relative reduction.
pub fn check_translation_invariance(s: &SetSystem, u: &[Scalar], v: &[Scalar]) -> Result<bool> {
    let before = all_levels(s)?;
    let after = all_levels(&s.translated(u, v)?)?;
    Ok(before.iter().zip(&after).all(|(x, y)| x.verdict.status == y.verdict.status))
}

/// `d(x, (A - y) ∩ (B - z))` over the piece pairs, `None` for the empty set.
fn dist_to_meet(x: &[Scalar], a: &SetSystem, y: &[Scalar], z: &[Scalar]) -> Result<Option<Scalar>> {
    let mut best: Option<Scalar> = None;
    for p in a.a_pieces()? {
        for q in a.b_pieces()? {
            let m = p.translate(&neg(y)).intersect(&q.translate(&neg(z)));
            if let Some((d, _)) = dist_point_polyhedron(x, &m, &a.norm) {
                best = Some(best.map_or(d.clone(), |b| min(&b, &d)));
            }
        }
    }
    Ok(best)
}

/// Searches `y` near `a`, `z` near `b` and `x` in the `ε`-ball for
/// `max{d(x, A - y), d(x, B - z)} < ε d(x, (A - y) ∩ (B - z))`, with the
/// distance to the empty set infinite. `y - a = -(z - b)` runs over scaled
/// unit-ball vertices and `x` over a `samples`-per-axis grid.
pub fn metric_char_approx_stationary(s: &SetSystem, eps: &Scalar, samples: usize) -> Result<bool> {
    if !eps.is_positive() {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    let (s, _) = s.exact_view(Some(&one()))?;
    let d = s.dim();
    let samples = samples.max(1);
    let steps: Vec<Scalar> = if samples == 1 {
        vec![int(0)]
    } else {
        (0..samples).map(|k| eps * (frac(k as i64, samples as i64 - 1) - frac(1, 2))).collect()
    };
    let xs: Vec<Vector> = (0..d)
        .map(|_| steps.iter().cloned())
        .multi_cartesian_product()
        .filter(|x| s.norm.eval(x) < *eps)
        .collect();
    let mut shifts: Vec<Vector> = vec![vec![int(0); d]];
    for k in 1..=4 {
        let t = eps / int(1 << k);
        shifts.extend(s.norm.vertices().iter().map(|w| scale(w, &t)));
    }
    for sh in &shifts {
        let y = add(&s.a, sh);
        let z = sub(&s.b, sh);
        for x in &xs {
            let da = dist_point_pieces(&add(x, &y), s.a_pieces()?, &s.norm);
            let db = dist_point_pieces(&add(x, &z), s.b_pieces()?, &s.norm);
            let (Some(da), Some(db)) = (da, db) else { continue };
            let lhs = if da > db { da } else { db };
            match dist_to_meet(x, &s, &y, &z)? {
                None => return Ok(true),
                Some(dm) if lhs < eps * &dm => return Ok(true),
                _ => {}
            }
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityEntry {
    #[serde(with = "serde_vector")]
    pub aprime: Vector,
    #[serde(with = "serde_vector")]
    pub bprime: Vector,
    pub witness: Option<ShiftWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub entries: Vec<StabilityEntry>,
    pub failures: usize,
}

impl StabilityReport {
    pub fn ok(&self) -> bool {
        self.failures == 0
    }
}

/// For each `(a', b')` near an approximately stationary pair of points,
/// looks for `rho < δ`, points within `ε` of `a'`, `b'` and shifts below
/// `ε rho` separating the sets inside the `rho`-ball.
pub fn stability_probe(s: &SetSystem, eps: &Scalar, delta: &Scalar, pairs: &[(Vector, Vector)]) -> Result<StabilityReport> {
    if !eps.is_positive() || *eps >= one() || !delta.is_positive() {
        return Err(Error::Precondition("need ε in (0, 1) and δ > 0".into()));
    }
    if !s.is_exact() {
        return Err(Error::OracleUnsupported);
    }
    if !check_relative_approx_stationary(s, &default_schedule())?.status.is_proved() {
        return Err(Error::Precondition("pair is not approximately stationary".into()));
    }
    let mut entries = Vec::new();
    let mut failures = 0;
    for (ap, bp) in pairs {
        if !s.a_set.contains(ap)
            || !s.b_set.contains(bp)
            || s.norm.eval(&sub(ap, &s.a)) >= *eps
            || s.norm.eval(&sub(bp, &s.b)) >= *eps
        {
            return Err(Error::Precondition("probe points must lie in the ε-balls".into()));
        }
        let moved = s.at(ap, bp)?;
        let locality = min(eps, &dual_locality(&moved)?);
        let sep = separation_infimum(&moved, &locality)?;
        let mut witness = None;
        if let Some(dp) = sep.value.as_ref().filter(|v| *v < eps).and_then(|_| sep.pair_at_representatives(eps)) {
            if let Some(w) = kl_backward(&dp, &moved, delta)? {
                if certify_shift(&moved, &w, eps, Level::ApproxStationary)?.is_some() {
                    witness = Some(w);
                }
            }
        }
        if witness.is_none() {
            failures += 1;
        }
        entries.push(StabilityEntry { aprime: ap.clone(), bprime: bp.clone(), witness });
    }
    Ok(StabilityReport { entries, failures })
}
