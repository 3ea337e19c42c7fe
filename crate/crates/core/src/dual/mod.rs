//! Dual certificates: pairs of (almost) normal vectors with a small sum,
//! the exact separation value of a set system, and the constructions that
//! move between primal shifts and dual pairs.

mod ep;
mod kl;
mod lemma1;
mod zn;

pub use ep::{check_ep_condition, convert_conditions, Direction};
pub use kl::{kl_backward, kl_forward};
pub use lemma1::{lemma1_merge, lemma1_split};
pub use zn::{difference_separation, nonlocal_ep, support_point_search, zn_separation, ZnOutcome};

use crate::cones::{dist_to_cone, local_cells, normal_cone, Cone, FacePoint};
use crate::error::{Error, Result};
use crate::lp::{verify_optimal, Lp, LpOutcome};
use crate::num::{int, min, one, serde_opt_scalar, serde_opt_vector, serde_scalar, serde_vector, Scalar};
use crate::primal::SetSystem;
use crate::vector::{add, neg, scale, sub, Vector};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// Which dual condition a pair is claimed to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    /// `||a*|| = 1`, `b* = -a*`, `d(a*, N_A(a')) < ε`, `d(-a*, N_B(b')) < ε`.
    I,
    /// `a* ∈ N_A(a')`, `b* ∈ N_B(b')`, `||a*|| + ||b*|| = 1`, `||a* + b*|| < ε`.
    II,
    /// `a* ∈ N_A(a')`, `b* ∈ N_B(b')`, `||a* + b*|| < ε (||a*|| + ||b*||)`.
    III,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualPair {
    #[serde(with = "serde_vector")]
    pub aprime: Vector,
    #[serde(with = "serde_vector")]
    pub bprime: Vector,
    #[serde(with = "serde_vector")]
    pub astar: Vector,
    #[serde(with = "serde_vector")]
    pub bstar: Vector,
    #[serde(with = "serde_scalar")]
    pub eps: Scalar,
    pub form: Form,
}

impl DualPair {
    /// Whether the pair satisfies its form's conditions for the sets of `s`
    /// (the ball constraints on `a'`, `b'` are the caller's business).
    pub fn holds(&self, s: &SetSystem) -> Result<bool> {
        let dn = &s.dual_norm;
        if !s.a_set.contains(&self.aprime) || !s.b_set.contains(&self.bprime) || !self.eps.is_positive() {
            return Ok(false);
        }
        let ka = normal_cone(&s.a_set, &self.aprime)?;
        let kb = normal_cone(&s.b_set, &self.bprime)?;
        let na = dn.eval(&self.astar);
        let nb = dn.eval(&self.bstar);
        let sum = dn.eval(&add(&self.astar, &self.bstar));
        Ok(match self.form {
            Form::I => {
                na == one()
                    && self.bstar == neg(&self.astar)
                    && dist_to_cone(&self.astar, &ka, dn).0 < self.eps
                    && dist_to_cone(&self.bstar, &kb, dn).0 < self.eps
            }
            Form::II => ka.contains(&self.astar) && kb.contains(&self.bstar) && na + nb == one() && sum < self.eps,
            Form::III => {
                let total = na + nb;
                total.is_positive() && ka.contains(&self.astar) && kb.contains(&self.bstar) && sum < &self.eps * total
            }
        })
    }

    /// `a'`, `b'` lie in the open `r`-balls around the reference points.
    pub fn within(&self, s: &SetSystem, r: &Scalar) -> bool {
        s.norm.eval(&sub(&self.aprime, &s.a)) < *r && s.norm.eval(&sub(&self.bprime, &s.b)) < *r
    }
}

/// `min ||a* + b*||_*` over normal pairs with `||a*||_* + ||b*||_* = 1`, taken
/// over all points of the sets in the open `locality`-balls around the
/// reference points. `value = None` means no nonzero normal exists there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationValue {
    #[serde(with = "serde_opt_scalar")]
    pub value: Option<Scalar>,
    #[serde(with = "serde_scalar")]
    pub locality: Scalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attained_at: Option<(FacePoint, FacePoint)>,
    #[serde(default, with = "serde_opt_vector", skip_serializing_if = "Option::is_none")]
    pub astar: Option<Vector>,
    #[serde(default, with = "serde_opt_vector", skip_serializing_if = "Option::is_none")]
    pub bstar: Option<Vector>,
    pub face_pairs: usize,
}

impl SeparationValue {
    /// A form-(ii) pair from the attaining data with `a'`, `b'` pulled
    /// toward the reference points to lie within `eps / 2` of them. Valid
    /// when the locality is below the exactness radii (cells are cones).
    pub fn pair_near(&self, s: &SetSystem, eps: &Scalar) -> Result<DualPair> {
        let (Some((fa, fb)), Some(astar), Some(bstar)) = (&self.attained_at, &self.astar, &self.bstar) else {
            return Err(Error::Precondition("no attaining normals".into()));
        };
        let pull = |center: &[Scalar], rep: &[Scalar]| -> Vector {
            let off = sub(rep, center);
            let len = s.norm.eval(&off);
            if len.is_zero() {
                return rep.to_vec();
            }
            let k = min(&one(), &(eps / (int(2) * len)));
            add(center, &scale(&off, &k))
        };
        Ok(DualPair {
            aprime: pull(&s.a, &fa.representative),
            bprime: pull(&s.b, &fb.representative),
            astar: astar.clone(),
            bstar: bstar.clone(),
            eps: eps.clone(),
            form: Form::II,
        })
    }

    /// The form-(ii) pair at the attaining representatives.
    pub fn pair_at_representatives(&self, eps: &Scalar) -> Option<DualPair> {
        let ((fa, fb), astar, bstar) = (self.attained_at.as_ref()?, self.astar.as_ref()?, self.bstar.as_ref()?);
        Some(DualPair {
            aprime: fa.representative.clone(),
            bprime: fb.representative.clone(),
            astar: astar.clone(),
            bstar: bstar.clone(),
            eps: eps.clone(),
            form: Form::II,
        })
    }
}

/// `min ||a* + b*||_*` over `a* ∈ ka`, `b* ∈ kb`, `||a*||_* + ||b*||_* = 1`.
/// The normalization is replaced by `<g_j, a*> + <g_k, b*> >= 1` for each
/// pair of dual-ball facets; the minimum over `(j, k)` is the answer.
pub fn cone_pair_minimum(ka: &Cone, kb: &Cone, dn: &crate::geometry::PolyhedralNorm) -> Result<Option<(Scalar, Vector, Vector)>> {
    let d = ka.dim;
    if ka.is_zero() && kb.is_zero() {
        return Ok(None);
    }
    let g = dn.facets();
    let mut best: Option<(Scalar, Vector, Vector)> = None;
    for gj in g {
        if ka.is_zero() && gj != &g[0] {
            continue;
        }
        for gk in g {
            if kb.is_zero() && gk != &g[0] {
                continue;
            }
            // Variables (a*, b*, t), all free.
            let mut lp = Lp::new_free(2 * d + 1);
            let zero_d = vec![Scalar::zero(); d];
            for h in &ka.hrows {
                lp.le([h.clone(), zero_d.clone(), vec![Scalar::zero()]].concat(), Scalar::zero());
            }
            if ka.is_zero() {
                for i in 0..d {
                    let mut e = vec![Scalar::zero(); 2 * d + 1];
                    e[i] = one();
                    lp.eq(e, Scalar::zero());
                }
            }
            for h in &kb.hrows {
                lp.le([zero_d.clone(), h.clone(), vec![Scalar::zero()]].concat(), Scalar::zero());
            }
            if kb.is_zero() {
                for i in 0..d {
                    let mut e = vec![Scalar::zero(); 2 * d + 1];
                    e[d + i] = one();
                    lp.eq(e, Scalar::zero());
                }
            }
            for f in g {
                lp.le([f.clone(), f.clone(), vec![-one()]].concat(), Scalar::zero());
            }
            let ga = if ka.is_zero() { zero_d.clone() } else { gj.clone() };
            let gb = if kb.is_zero() { zero_d.clone() } else { gk.clone() };
            lp.ge([ga, gb, vec![Scalar::zero()]].concat(), one());
            let mut obj = vec![Scalar::zero(); 2 * d];
            obj.push(one());
            lp.minimize(obj);
            let sol = match lp.solve() {
                LpOutcome::Optimal(sol) => sol,
                LpOutcome::Infeasible(_) => continue,
                LpOutcome::Unbounded { .. } => return Err(Error::Soundness("separation LP unbounded".into())),
            };
            if !verify_optimal(&lp, &sol) {
                return Err(Error::Soundness("separation LP optimality check failed".into()));
            }
            let a = sol.x[..d].to_vec();
            let b = sol.x[d..2 * d].to_vec();
            let total = dn.eval(&a) + dn.eval(&b);
            let a = scale(&a, &(one() / &total));
            let b = scale(&b, &(one() / &total));
            let value = dn.eval(&add(&a, &b));
            if best.as_ref().is_none_or(|(v, _, _)| value < *v) {
                best = Some((value, a, b));
            }
        }
    }
    Ok(best)
}

/// Exact separation value of `s` at the given locality. Face pairs are
/// scanned in a fixed order and ties keep the first pair.
pub fn separation_infimum(s: &SetSystem, locality: &Scalar) -> Result<SeparationValue> {
    if !s.is_exact() {
        return Err(Error::OracleUnsupported);
    }
    if !locality.is_positive() {
        return Err(Error::Precondition("locality must be positive".into()));
    }
    let cap = s.limits.face_cap;
    let ca = local_cells(s.a_pieces()?, &s.a, locality, &s.norm, cap)?;
    let cb = local_cells(s.b_pieces()?, &s.b, locality, &s.norm, cap)?;
    let count = ca.len() * cb.len();
    if count > cap {
        return Err(Error::FaceCap { count, cap });
    }
    let mut out = SeparationValue {
        value: None,
        locality: locality.clone(),
        attained_at: None,
        astar: None,
        bstar: None,
        face_pairs: count,
    };
    for x in &ca {
        for y in &cb {
            let Some((v, a, b)) = cone_pair_minimum(&x.cone, &y.cone, &s.dual_norm)? else { continue };
            if out.value.as_ref().is_none_or(|best| v < *best) {
                out.value = Some(v);
                out.attained_at = Some((x.face.clone(), y.face.clone()));
                out.astar = Some(a);
                out.bstar = Some(b);
            }
        }
    }
    Ok(out)
}
