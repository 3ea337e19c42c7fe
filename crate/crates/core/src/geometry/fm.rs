//! Fourier–Motzkin projection with LP-based redundancy removal, and the
//! Minkowski sums/differences built on it.

use super::polyhedron::{Polyhedron, Row};
use super::region::Region;
use crate::error::{check_dim, Result};
use crate::lp::{maximize_over, LpOutcome};
use crate::num::Scalar;
use crate::vector::{is_zero, Vector};
use num_traits::{Signed, Zero};

/// Removes duplicate, trivial and LP-redundant rows. `None` if the system
/// is infeasible.
pub fn remove_redundant(dim: usize, rows: &[Row]) -> Option<Vec<Row>> {
    let tidy = Polyhedron { dim, rows: rows.to_vec() }.tidy();
    if tidy.rows.iter().any(|r| is_zero(&r.normal) && r.rhs.is_negative()) {
        return None;
    }
    if tidy.find_point().is_err() {
        return None;
    }
    let mut kept: Vec<Row> = tidy.rows;
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<(Vector, Scalar)> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, r)| (r.normal.clone(), r.rhs.clone()))
            .collect();
        let redundant = match maximize_over(dim, &others, &kept[i].normal) {
            LpOutcome::Optimal(s) => s.value <= kept[i].rhs,
            _ => false,
        };
        if redundant {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    Some(kept)
}

/// Projects `{(x, z) : rows}` (with `x` the first `keep` coordinates) onto `x`.
pub fn project(keep: usize, total: usize, rows: &[Row]) -> Option<Vec<Row>> {
    let mut cur = remove_redundant(total, rows)?;
    for k in (keep..total).rev() {
        let (mut pos, mut negs, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in cur {
            let c = &r.normal[k];
            if c.is_positive() {
                pos.push(r);
            } else if c.is_negative() {
                negs.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for q in &negs {
                let a = p.normal[k].clone();
                let b = -q.normal[k].clone();
                let normal: Vector = p.normal.iter().zip(&q.normal).map(|(x, y)| x * &b + y * &a).collect();
                rest.push(Row::new(normal, &p.rhs * &b + &q.rhs * &a));
            }
        }
        for r in rest.iter_mut() {
            r.normal.truncate(k);
        }
        cur = remove_redundant(k, &rest)?;
    }
    Some(cur)
}

/// `P - Q = {p - q}` as a polyhedron, `None` if empty.
pub fn difference_polyhedra(p: &Polyhedron, q: &Polyhedron) -> Option<Polyhedron> {
    let d = p.dim;
    // Variables (x, q) with x + q ∈ P, q ∈ Q.
    let mut rows = Vec::new();
    for r in &p.rows {
        let mut n = r.normal.clone();
        n.extend(r.normal.iter().cloned());
        rows.push(Row::new(n, r.rhs.clone()));
    }
    for r in &q.rows {
        let mut n = vec![Scalar::zero(); d];
        n.extend(r.normal.iter().cloned());
        rows.push(Row::new(n, r.rhs.clone()));
    }
    project(d, 2 * d, &rows).map(|rows| Polyhedron { dim: d, rows })
}

/// `P + Q`, `None` if empty.
pub fn sum_polyhedra(p: &Polyhedron, q: &Polyhedron) -> Option<Polyhedron> {
    let d = p.dim;
    // Variables (x, q) with x - q ∈ P, q ∈ Q.
    let mut rows = Vec::new();
    for r in &p.rows {
        let mut n = r.normal.clone();
        n.extend(r.normal.iter().map(|v| -v));
        rows.push(Row::new(n, r.rhs.clone()));
    }
    for r in &q.rows {
        let mut n = vec![Scalar::zero(); d];
        n.extend(r.normal.iter().cloned());
        rows.push(Row::new(n, r.rhs.clone()));
    }
    project(d, 2 * d, &rows).map(|rows| Polyhedron { dim: d, rows })
}

/// `A - B` over all piece pairs.
pub fn minkowski_difference(a: &Region, b: &Region) -> Result<Region> {
    check_dim(a.dim(), b.dim())?;
    let (pa, pb) = (a.pieces()?, b.pieces()?);
    let mut out = Vec::new();
    for p in pa {
        for q in pb {
            if let Some(d) = difference_polyhedra(p, q) {
                out.push(d);
            }
        }
    }
    Region::exact(a.dim(), out)
}

/// `A + B` over all piece pairs.
pub fn minkowski_sum(a: &Region, b: &Region) -> Result<Region> {
    check_dim(a.dim(), b.dim())?;
    let (pa, pb) = (a.pieces()?, b.pieces()?);
    let mut out = Vec::new();
    for p in pa {
        for q in pb {
            if let Some(s) = sum_polyhedra(p, q) {
                out.push(s);
            }
        }
    }
    Region::exact(a.dim(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, int};
    use crate::vector::from_ints;

    #[test]
    fn halfspace_difference() {
        let a = Region::single(Polyhedron::from_ints(2, &[(&[0, 1], 0)]));
        let b = Region::single(Polyhedron::from_ints(2, &[(&[0, -1], -1)]));
        let d = minkowski_difference(&a, &b).unwrap();
        let p = &d.pieces().unwrap()[0];
        assert_eq!(p.rows.len(), 1);
        assert!(d.contains(&from_ints(&[5, -1])));
        assert!(!d.contains(&vec![int(0), frac(-1, 2)]));
    }

    #[test]
    fn point_difference() {
        let a = Region::single(Polyhedron::singleton(&from_ints(&[1, 2])));
        let b = Region::single(Polyhedron::singleton(&from_ints(&[3, -1])));
        let d = minkowski_difference(&a, &b).unwrap();
        assert!(d.contains(&from_ints(&[-2, 3])));
        assert!(!d.contains(&from_ints(&[-2, 2])));
    }

    #[test]
    fn square_sum() {
        let sq = Polyhedron::from_ints(2, &[(&[1, 0], 1), (&[-1, 0], 0), (&[0, 1], 1), (&[0, -1], 0)]);
        let s = sum_polyhedra(&sq, &sq).unwrap();
        assert!(s.contains(&from_ints(&[2, 2])));
        assert!(!s.contains(&vec![int(2), frac(5, 2)]));
        assert_eq!(s.rows.len(), 4);
    }
}
