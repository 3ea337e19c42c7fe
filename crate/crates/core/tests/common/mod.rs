//! Random instances and independent oracles shared by the integration tests.
#![allow(dead_code)]

use extremal::corpus::CORPUS;
use extremal::geometry::{PolyhedralNorm, Polyhedron, Region, Row};
use extremal::lp::{Lp, LpOutcome};
use extremal::num::{int, one, zero};
use extremal::primal::SetSystem;
use extremal::report::{system_for, RunConfig};
use extremal::vector::{dot, Vector};
use extremal::Scalar;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(r: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Scalar {
    Scalar::new(r.gen_range(lo * den..=hi * den).into(), den.into())
}

pub fn int_vec(r: &mut ChaCha8Rng, d: usize, k: i64) -> Vector {
    loop {
        let v: Vector = (0..d).map(|_| int(r.gen_range(-k..=k))).collect();
        if v.iter().any(|x| *x != zero()) {
            return v;
        }
    }
}

pub fn rat_vec(r: &mut ChaCha8Rng, d: usize, k: i64, den: i64) -> Vector {
    (0..d).map(|_| rat(r, -k, k, den)).collect()
}

/// A polyhedron containing `p` with `rows` random rows; each row is tight
/// at `p` with probability one half.
pub fn piece_through(r: &mut ChaCha8Rng, p: &[Scalar], rows: usize) -> Polyhedron {
    let d = p.len();
    let rows = (0..rows)
        .map(|k| {
            let n = int_vec(r, d, 2);
            let slack = if k == 0 || r.gen_bool(0.5) { zero() } else { rat(r, 0, 1, 2) };
            Row::new(n.clone(), dot(&n, p) + slack)
        })
        .collect();
    Polyhedron { dim: d, rows }
}

/// A union of up to `max_pieces` pieces, the first one tight at `p`.
pub fn union_through(r: &mut ChaCha8Rng, p: &[Scalar], max_pieces: usize) -> Region {
    let d = p.len();
    let k = r.gen_range(1..=3);
    let mut pieces = vec![piece_through(r, p, k)];
    for _ in 1..r.gen_range(1..=max_pieces) {
        let q: Vector = p.iter().map(|x| x + rat(r, -1, 1, 2)).collect();
        let k = r.gen_range(1..=3);
        pieces.push(piece_through(r, &q, k));
    }
    Region::exact(d, pieces).expect("pieces contain their anchors")
}

/// Random instance; `a = b` with probability one half.
pub fn random_system(r: &mut ChaCha8Rng, d: usize, max_pieces: usize, norm: &PolyhedralNorm) -> SetSystem {
    let a = rat_vec(r, d, 1, 2);
    let b = if r.gen_bool(0.5) { a.clone() } else { rat_vec(r, d, 1, 2) };
    let aset = union_through(r, &a, max_pieces);
    let bset = union_through(r, &b, max_pieces);
    SetSystem::new(aset, bset, a, b, norm.clone()).expect("anchored")
}

pub fn random_convex_system(r: &mut ChaCha8Rng, d: usize, norm: &PolyhedralNorm) -> SetSystem {
    random_system(r, d, 1, norm)
}

/// Exact-regime systems of the corpus: one per distinct (sets, points).
pub fn corpus_systems() -> Vec<(String, SetSystem)> {
    let mut out: Vec<(String, SetSystem)> = Vec::new();
    for item in CORPUS {
        let scene = item.parse().expect("corpus parses");
        let mut seen = Vec::new();
        for q in &scene.queries {
            let Some(p) = &q.points else { continue };
            let key = (q.sets.clone(), p.clone());
            if seen.contains(&key) {
                continue;
            }
            seen.push(key);
            let s = system_for(&scene, q, &RunConfig::default()).expect("corpus system");
            if s.is_exact() {
                out.push((format!("{} {}@{},{}", item.name, q.sets.join(","), p[0], p[1]), s));
            }
        }
    }
    out
}

/// `max <f, x>` over the unit-ball facets of `n`.
pub fn norm_by_facets(n: &PolyhedralNorm, x: &[Scalar]) -> Scalar {
    n.facets().iter().map(|f| dot(f, x)).max().expect("facets")
}

/// `min ||x - sum mu_g g||` over `mu >= 0`, the norm given by its facets.
pub fn dist_to_generated(x: &[Scalar], gens: &[Vector], n: &PolyhedralNorm) -> Scalar {
    let d = x.len();
    let m = gens.len();
    // Variables: mu (m), t.
    let mut lp = Lp::new_free(m + 1);
    for k in 0..m {
        let mut e = vec![zero(); m + 1];
        e[k] = one();
        lp.ge(e, zero());
    }
    for f in n.facets() {
        // <f, x - G mu> <= t
        let mut row = vec![zero(); m + 1];
        for (k, g) in gens.iter().enumerate() {
            row[k] = -dot(f, g);
        }
        row[m] = -one();
        lp.le(row, -dot(f, x));
    }
    let mut c = vec![zero(); m + 1];
    c[m] = one();
    lp.minimize(c);
    let _ = d;
    match lp.solve() {
        LpOutcome::Optimal(s) => s.value,
        other => panic!("distance LP: {other:?}"),
    }
}

/// Active normals of the pieces through `p`.
pub fn active_normals(r: &Region, p: &[Scalar]) -> Vec<Vec<Vector>> {
    r.pieces()
        .expect("exact")
        .iter()
        .filter(|q| q.contains(p))
        .map(|q| q.rows.iter().filter(|row| dot(&row.normal, p) == row.rhs).map(|row| row.normal.clone()).collect())
        .collect()
}

/// Convex instances: a nonzero `y` in `cone(N_A) ∩ -cone(N_B)` exists, found
/// by feasibility LPs with one coordinate of `y` pinned to ±1.
pub fn supporting_direction_exists(s: &SetSystem) -> bool {
    let na = &active_normals(&s.a_set, &s.a)[0];
    let nb = &active_normals(&s.b_set, &s.b)[0];
    let d = s.dim();
    let (p, q) = (na.len(), nb.len());
    for i in 0..d {
        for sign in [1, -1] {
            let mut lp = Lp::new(p + q);
            // sum lambda n_A + sum mu n_B = 0
            for c in 0..d {
                let mut row = vec![zero(); p + q];
                for (k, n) in na.iter().enumerate() {
                    row[k] = n[c].clone();
                }
                for (k, n) in nb.iter().enumerate() {
                    row[p + k] = n[c].clone();
                }
                lp.eq(row, zero());
            }
            let mut row = vec![zero(); p + q];
            for (k, n) in na.iter().enumerate() {
                row[k] = n[i].clone();
            }
            lp.eq(row, int(sign));
            lp.minimize(vec![zero(); p + q]);
            if matches!(lp.solve(), LpOutcome::Optimal(_)) {
                return true;
            }
        }
    }
    false
}
