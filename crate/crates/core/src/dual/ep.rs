//! Deciding the dual conditions of the extremal principle at a given ε,
//! and converting certificates between the two equivalent forms.

use super::{lemma1_merge, lemma1_split, separation_infimum, DualPair, Form, SeparationValue};
use crate::cones::{local_cells, normal_cone, Cone};
use crate::error::{Error, Result};
use crate::geometry::PolyhedralNorm;
use crate::lp::{verify_optimal, Lp, LpOutcome};
use crate::num::{int, one, Scalar};
use crate::primal::SetSystem;
use crate::verdict::{Certificate, Verdict};
use crate::vector::{neg, scale, Vector};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    IToIi,
    IiToI,
}

/// `min max{d(a*, ka), d(-a*, kb)}` over `||a*||_* = 1`, one LP per facet of
/// the dual unit sphere.
fn deviation_minimum(ka: &Cone, kb: &Cone, dn: &PolyhedralNorm) -> Result<(Scalar, Vector)> {
    let d = ka.dim;
    let g = dn.facets();
    let mut best: Option<(Scalar, Vector)> = None;
    let z = || vec![Scalar::zero(); d];
    for gj in g {
        // Variables (a*, yA, yB, t), all free.
        let mut lp = Lp::new_free(3 * d + 1);
        for h in &ka.hrows {
            lp.le([z(), h.clone(), z(), vec![Scalar::zero()]].concat(), Scalar::zero());
        }
        for h in &kb.hrows {
            lp.le([z(), z(), h.clone(), vec![Scalar::zero()]].concat(), Scalar::zero());
        }
        for f in g {
            lp.le([f.clone(), neg(f), z(), vec![-one()]].concat(), Scalar::zero());
            lp.le([neg(f), z(), neg(f), vec![-one()]].concat(), Scalar::zero());
            lp.le([f.clone(), z(), z(), vec![Scalar::zero()]].concat(), one());
        }
        lp.eq([gj.clone(), z(), z(), vec![Scalar::zero()]].concat(), one());
        let mut obj = vec![Scalar::zero(); 3 * d];
        obj.push(one());
        lp.minimize(obj);
        let sol = match lp.solve() {
            LpOutcome::Optimal(s) => s,
            LpOutcome::Infeasible(_) => continue,
            LpOutcome::Unbounded { .. } => return Err(Error::Soundness("deviation LP unbounded".into())),
        };
        if !verify_optimal(&lp, &sol) {
            return Err(Error::Soundness("deviation LP optimality check failed".into()));
        }
        if best.as_ref().is_none_or(|(v, _)| sol.value < *v) {
            best = Some((sol.value.clone(), sol.x[..d].to_vec()));
        }
    }
    best.ok_or_else(|| Error::Soundness("dual unit sphere is empty".into()))
}

/// Decides the dual condition of the given form at ε, with points in the
/// open ε-balls around the reference points.
pub fn check_ep_condition(s: &SetSystem, form: Form, eps: &Scalar) -> Result<Verdict> {
    if !eps.is_positive() || *eps >= one() {
        return Err(Error::Precondition("ε must lie in (0, 1)".into()));
    }
    if !s.is_exact() {
        return Ok(Verdict::unknown("dual conditions are not decided for oracle regions"));
    }
    match form {
        Form::II | Form::III => {
            let sep = separation_infimum(s, eps)?;
            match (&sep.value, sep.pair_at_representatives(eps)) {
                (Some(v), Some(mut pair)) if v < eps => {
                    pair.form = form;
                    Ok(Verdict::proved(Certificate::Dual { pair }))
                }
                _ => Ok(Verdict::refuted(Certificate::Separation { value: sep, witnesses: Vec::new() })),
            }
        }
        Form::I => {
            let cap = s.limits.face_cap;
            let ca = local_cells(s.a_pieces()?, &s.a, eps, &s.norm, cap)?;
            let cb = local_cells(s.b_pieces()?, &s.b, eps, &s.norm, cap)?;
            let mut best: Option<(Scalar, Vector, usize, usize)> = None;
            for (i, x) in ca.iter().enumerate() {
                for (j, y) in cb.iter().enumerate() {
                    let (v, a) = deviation_minimum(&x.cone, &y.cone, &s.dual_norm)?;
                    if best.as_ref().is_none_or(|(b, ..)| v < *b) {
                        best = Some((v, a, i, j));
                    }
                }
            }
            let (v, a, i, j) = best.ok_or_else(|| Error::Soundness("no cells near the reference points".into()))?;
            if v < *eps {
                let pair = DualPair {
                    aprime: ca[i].face.representative.clone(),
                    bprime: cb[j].face.representative.clone(),
                    bstar: neg(&a),
                    astar: a,
                    eps: eps.clone(),
                    form: Form::I,
                };
                Ok(Verdict::proved(Certificate::Dual { pair }))
            } else {
                let value = SeparationValue {
                    value: Some(v),
                    locality: eps.clone(),
                    attained_at: Some((ca[i].face.clone(), cb[j].face.clone())),
                    bstar: Some(neg(&a)),
                    astar: Some(a),
                    face_pairs: ca.len() * cb.len(),
                };
                Ok(Verdict::refuted(Certificate::Separation { value, witnesses: Vec::new() })
                    .with_note("value is the minimal form-(i) deviation"))
            }
        }
    }
}

/// Converts a pair valid at `ξ` in the source form into a pair valid at
/// `ε = ξ / (1 - ξ)` in the target form, at the same points.
pub fn convert_conditions(dp: &DualPair, direction: Direction, s: &SetSystem) -> Result<DualPair> {
    let xi = &dp.eps;
    if !xi.is_positive() || *xi >= one() {
        return Err(Error::Precondition("source parameter must lie in (0, 1)".into()));
    }
    let source = match direction {
        Direction::IToIi => Form::I,
        Direction::IiToI => Form::II,
    };
    if dp.form != source || !dp.holds(s)? {
        return Err(Error::Precondition("source pair is not valid in its form".into()));
    }
    let eps = xi / (one() - xi);
    let ka = normal_cone(&s.a_set, &dp.aprime)?;
    let kb = normal_cone(&s.b_set, &dp.bprime)?;
    let dn = &s.dual_norm;
    let out = match direction {
        Direction::IiToI => {
            let (h1, _) = lemma1_merge(&dp.astar, &dp.bstar, &ka, &kb, xi, dn)?;
            let a = scale(&h1, &int(2));
            DualPair { bstar: neg(&a), astar: a, eps, form: Form::I, ..dp.clone() }
        }
        Direction::IToIi => {
            let half = Scalar::new(1.into(), 2.into());
            let z1 = scale(&dp.astar, &half);
            let (h1, h2) = lemma1_split(&z1, &neg(&z1), &ka, &kb, xi, dn)?;
            DualPair { astar: h1, bstar: h2, eps, form: Form::II, ..dp.clone() }
        }
    };
    if !out.holds(s)? {
        return Err(Error::Soundness("converted pair fails its target form".into()));
    }
    Ok(out)
}
