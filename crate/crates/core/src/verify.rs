//! Independent re-check of the certificates in a report. Norms are
//! evaluated from the unit-ball facets and vertices, Farkas multipliers by
//! direct summation, and normal-cone conditions by fresh LPs.

use crate::dual::{DualPair, Form};
use crate::geometry::{PolyhedralNorm, Polyhedron, Region};
use crate::lp::{Lp, LpOutcome};
use crate::num::{fmt_scalar, one, Scalar};
use crate::primal::{Level, SetSystem};
use crate::report::{system_for, Outcome, Report, RunConfig};
use crate::scene::Scene;
use crate::verdict::{Certificate, CertifiedShift, Verdict};
use crate::vector::{add, dot, neg, sub, zeros, Vector};
use num_traits::{Signed, Zero};

/// Counts of re-checked objects and the failures found.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verification {
    pub emptiness: usize,
    pub shifts: usize,
    pub pairs: usize,
    pub failures: Vec<String>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, where_: &str, what: String) {
        self.failures.push(format!("{where_}: {what}"));
    }
}

fn primal(n: &PolyhedralNorm, x: &[Scalar]) -> Scalar {
    n.facets().iter().map(|f| dot(f, x)).max().expect("norm has facets")
}

fn dual(n: &PolyhedralNorm, x: &[Scalar]) -> Scalar {
    n.vertices().iter().map(|v| dot(v, x)).max().expect("norm has vertices")
}

fn pieces(r: &Region) -> &[Polyhedron] {
    match r {
        Region::Exact { pieces, .. } => pieces,
        Region::Oracle(_) => &[],
    }
}

fn member(r: &Region, x: &[Scalar]) -> bool {
    pieces(r).iter().any(|p| p.rows.iter().all(|row| dot(&row.normal, x) <= row.rhs))
}

/// `y >= 0`, `sum y_k n_k = 0`, `sum y_k r_k < 0`.
fn farkas(rows: &[(Vector, Scalar)], y: &[Scalar], dim: usize) -> bool {
    if rows.len() != y.len() || y.iter().any(|m| m.is_negative()) {
        return false;
    }
    let mut comb = zeros(dim);
    let mut rhs = Scalar::zero();
    for ((n, r), m) in rows.iter().zip(y) {
        for (c, a) in comb.iter_mut().zip(n) {
            *c += m * a;
        }
        rhs += m * r;
    }
    comb.iter().all(|c| c.is_zero()) && rhs.is_negative()
}

/// Rows of `P - t`.
fn shifted(p: &Polyhedron, t: &[Scalar]) -> Vec<(Vector, Scalar)> {
    p.rows.iter().map(|r| (r.normal.clone(), &r.rhs - dot(&r.normal, t))).collect()
}

fn check_shift(s: &SetSystem, c: &CertifiedShift, out: &mut Verification, where_: &str) {
    out.shifts += 1;
    let w = &c.witness;
    let eps = &c.eps;
    let ap = w.aprime.clone().unwrap_or_else(|| s.a.clone());
    let bp = w.bprime.clone().unwrap_or_else(|| s.b.clone());
    let m = primal(&s.norm, &w.u).max(primal(&s.norm, &w.v));
    let moved = ap != s.a || bp != s.b;
    let size_ok = match c.level {
        Level::Extremal => w.rho.is_none() && !moved && m < *eps,
        Level::LocallyExtremal => w.rho.as_ref().is_some_and(|r| r.is_positive()) && !moved && m < *eps,
        Level::Stationary | Level::ApproxStationary => match &w.rho {
            Some(rho) if rho.is_positive() && rho < eps && m < eps * rho => {
                if c.level == Level::Stationary {
                    !moved
                } else {
                    member(&s.a_set, &ap)
                        && member(&s.b_set, &bp)
                        && primal(&s.norm, &sub(&ap, &s.a)) < *eps
                        && primal(&s.norm, &sub(&bp, &s.b)) < *eps
                }
            }
            _ => false,
        },
    };
    if !size_ok {
        out.fail(where_, format!("shift at eps {} violates the size conditions", fmt_scalar(eps)));
    }
    let (pa, pb) = (pieces(&s.a_set), pieces(&s.b_set));
    if c.pairs.len() != pa.len() * pb.len() {
        out.fail(where_, format!("{} piece pairs certified, {} needed", c.pairs.len(), pa.len() * pb.len()));
    }
    for pc in &c.pairs {
        out.emptiness += 1;
        let (Some(p), Some(q)) = (pa.get(pc.a_piece), pb.get(pc.b_piece)) else {
            out.fail(where_, "certificate names a missing piece".into());
            continue;
        };
        let mut rows = shifted(p, &add(&ap, &w.u));
        rows.extend(shifted(q, &add(&bp, &w.v)));
        if let Some(rho) = &w.rho {
            rows.extend(s.norm.facets().iter().map(|f| (f.clone(), rho.clone())));
        }
        if !farkas(&rows, &pc.certificate.multipliers, s.dim()) {
            out.fail(where_, format!("Farkas certificate for pieces ({}, {}) does not verify", pc.a_piece, pc.b_piece));
        }
    }
}

/// `min ||x - w||_*` over `w` in the normal cone of `r` at `at`, the cone
/// being the intersection of the active-row cones of the pieces through `at`.
fn cone_distance(r: &Region, at: &[Scalar], x: &[Scalar], dn_vertices: &[Vector]) -> Option<Scalar> {
    let d = at.len();
    let through: Vec<&Polyhedron> = pieces(r).iter().filter(|p| p.rows.iter().all(|row| dot(&row.normal, at) <= row.rhs)).collect();
    if through.is_empty() {
        return None;
    }
    let actives: Vec<Vec<&Vector>> = through
        .iter()
        .map(|p| p.rows.iter().filter(|row| dot(&row.normal, at) == row.rhs).map(|row| &row.normal).collect())
        .collect();
    // Variables: w (d), t, then one multiplier block per piece.
    let nl: usize = actives.iter().map(|a| a.len()).sum();
    let n = d + 1 + nl;
    let mut lp = Lp::new_free(n);
    let mut off = d + 1;
    for act in &actives {
        for k in 0..act.len() {
            let mut e = zeros(n);
            e[off + k] = one();
            lp.ge(e, Scalar::zero());
        }
        for i in 0..d {
            let mut row = zeros(n);
            row[i] = -one();
            for (k, nrm) in act.iter().enumerate() {
                row[off + k] = nrm[i].clone();
            }
            lp.eq(row, Scalar::zero());
        }
        off += act.len();
    }
    // <x - w, v> <= t for each vertex v of the primal ball.
    for v in dn_vertices {
        let mut row = zeros(n);
        for i in 0..d {
            row[i] = -v[i].clone();
        }
        row[d] = -one();
        lp.le(row, -dot(v, x));
    }
    let mut c = zeros(n);
    c[d] = one();
    lp.minimize(c);
    match lp.solve() {
        LpOutcome::Optimal(sol) => Some(sol.value),
        _ => None,
    }
}

fn check_pair(a_set: &Region, b_set: &Region, norm: &PolyhedralNorm, p: &DualPair, out: &mut Verification, where_: &str) {
    out.pairs += 1;
    if !member(a_set, &p.aprime) || !member(b_set, &p.bprime) {
        out.fail(where_, "dual pair base points lie outside the sets".into());
        return;
    }
    let verts = norm.vertices();
    let (Some(da), Some(db)) = (cone_distance(a_set, &p.aprime, &p.astar, verts), cone_distance(b_set, &p.bprime, &p.bstar, verts))
    else {
        out.fail(where_, "normal cone LP failed".into());
        return;
    };
    let na = dual(norm, &p.astar);
    let nb = dual(norm, &p.bstar);
    let sum = dual(norm, &add(&p.astar, &p.bstar));
    let ok = p.eps.is_positive()
        && match p.form {
            Form::I => na == one() && p.bstar == neg(&p.astar) && da < p.eps && db < p.eps,
            Form::II => da.is_zero() && db.is_zero() && &na + &nb == one() && sum < p.eps,
            Form::III => {
                let total = &na + &nb;
                da.is_zero() && db.is_zero() && total.is_positive() && sum < &p.eps * total
            }
        };
    if !ok {
        out.fail(where_, format!("dual pair ({:?}, eps {}) does not verify", p.form, fmt_scalar(&p.eps)));
    }
}

fn check_verdict(s: &SetSystem, v: &Verdict, out: &mut Verification, where_: &str) {
    match &v.certificate {
        Some(Certificate::Shifts { witnesses, .. }) | Some(Certificate::Separation { witnesses, .. }) => {
            for c in witnesses {
                check_shift(s, c, out, where_);
            }
        }
        Some(Certificate::Dual { pair }) => check_pair(&s.a_set, &s.b_set, &s.norm, pair, out, where_),
        _ => {}
    }
}

/// Re-checks every shift witness, Farkas certificate and dual pair in the
/// exact-regime entries of `report`.
pub fn verify_report(scene: &Scene, report: &Report, config: &RunConfig) -> Verification {
    let mut out = Verification::default();
    for e in &report.entries {
        let where_ = format!("query {} ({})", e.index, e.query.kind.label());
        let Ok(s) = system_for(scene, &e.query, config) else { continue };
        if !s.is_exact() {
            continue;
        }
        match &e.outcome {
            Outcome::Verdict { verdict } => check_verdict(&s, verdict, &mut out, &where_),
            Outcome::Chain { report } => {
                for l in &report.levels {
                    check_verdict(&s, &l.verdict, &mut out, &where_);
                }
            }
            Outcome::Zn { outcome: Some(z) } => check_pair(&s.a_set, &s.b_set, &s.norm, &z.prime, &mut out, &where_),
            _ => {}
        }
    }
    out
}
