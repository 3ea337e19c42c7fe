//! Small exact linear algebra: row reduction, rank, nullspace, square solves.

use crate::num::Scalar;
use crate::vector::Vector;
use num_traits::{One, Zero};

/// Reduced row echelon form. Returns the reduced rows and pivot columns.
pub fn rref(rows: &[Vector], ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Scalar::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vector], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : <row, x> = 0 for all rows}`.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let (m, pivots) = rref(rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); ncols];
        v[free] = Scalar::one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `M x = b` for square nonsingular `M`; `None` if singular.
pub fn solve_square(m: &[Vector], b: &[Scalar]) -> Option<Vector> {
    let n = b.len();
    let aug: Vec<Vector> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(red.iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, int};
    use crate::vector::{dot, from_ints};

    #[test]
    fn nullspace_of_plane() {
        let rows = vec![from_ints(&[1, 1, 1])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert_eq!(dot(&rows[0], v), int(0));
        }
    }

    #[test]
    fn square_solve() {
        let m = vec![from_ints(&[2, 1]), from_ints(&[1, 3])];
        let x = solve_square(&m, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![frac(4, 5), frac(7, 5)]);
        assert!(solve_square(&[from_ints(&[1, 1]), from_ints(&[2, 2])], &[int(1), int(2)]).is_none());
    }
}
