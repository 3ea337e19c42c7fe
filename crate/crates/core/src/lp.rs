//! Exact two-phase simplex over rationals with Bland's rule.
//!
//! Every solve returns either an optimal primal/dual pair, a Farkas ray
//! proving infeasibility, or an unbounded ray. All three are checkable by
//! plain rational arithmetic (`verify_optimal`, `verify_farkas`).

use crate::num::Scalar;
use crate::vector::{dot, zeros, Vector};
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vector,
    pub rel: Rel,
    pub rhs: Scalar,
}

/// A linear program over `nvars` variables. Variables are nonnegative
/// unless flagged free.
#[derive(Debug, Clone)]
pub struct Lp {
    pub nvars: usize,
    pub free: Vec<bool>,
    pub objective: Vector,
    pub maximize: bool,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vector,
    pub value: Scalar,
    /// One multiplier per constraint. `value == sum duals[i] * rhs[i]`.
    pub duals: Vector,
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal(LpSolution),
    /// Multipliers per constraint with `sum y_i rhs_i = -1` (see `verify_farkas`).
    Infeasible(Vector),
    Unbounded { point: Vector, ray: Vector },
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

impl Lp {
    pub fn new(nvars: usize) -> Self {
        Lp {
            nvars,
            free: vec![false; nvars],
            objective: zeros(nvars),
            maximize: true,
            constraints: Vec::new(),
        }
    }

    /// All variables free.
    pub fn new_free(nvars: usize) -> Self {
        let mut lp = Lp::new(nvars);
        lp.free = vec![true; nvars];
        lp
    }

    pub fn set_free(&mut self, j: usize) {
        self.free[j] = true;
    }

    pub fn maximize(&mut self, c: Vector) {
        assert_eq!(c.len(), self.nvars);
        self.objective = c;
        self.maximize = true;
    }

    pub fn minimize(&mut self, c: Vector) {
        assert_eq!(c.len(), self.nvars);
        self.objective = c;
        self.maximize = false;
    }

    pub fn add(&mut self, coeffs: Vector, rel: Rel, rhs: Scalar) {
        assert_eq!(coeffs.len(), self.nvars, "constraint width");
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn le(&mut self, coeffs: Vector, rhs: Scalar) {
        self.add(coeffs, Rel::Le, rhs);
    }

    pub fn ge(&mut self, coeffs: Vector, rhs: Scalar) {
        self.add(coeffs, Rel::Ge, rhs);
    }

    pub fn eq(&mut self, coeffs: Vector, rhs: Scalar) {
        self.add(coeffs, Rel::Eq, rhs);
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    m: usize,
    /// Structural columns: for each user var, (column of +part, optional column of -part).
    var_cols: Vec<(usize, Option<usize>)>,
    n_struct: usize,
    art_start: usize,
    ncols: usize,
    rows: Vec<Vec<Scalar>>,
    rhs: Vec<Scalar>,
    basis: Vec<usize>,
    signs: Vec<bool>,
}

impl Tableau {
    fn build(lp: &Lp) -> Self {
        let m = lp.constraints.len();
        let mut var_cols = Vec::with_capacity(lp.nvars);
        let mut col = 0;
        for j in 0..lp.nvars {
            if lp.free[j] {
                var_cols.push((col, Some(col + 1)));
                col += 2;
            } else {
                var_cols.push((col, None));
                col += 1;
            }
        }
        let mut slack_of = vec![None; m];
        for (i, c) in lp.constraints.iter().enumerate() {
            if c.rel != Rel::Eq {
                slack_of[i] = Some(col);
                col += 1;
            }
        }
        let n_struct = col;
        let art_start = col;
        let ncols = col + m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut signs = Vec::with_capacity(m);
        for (i, c) in lp.constraints.iter().enumerate() {
            let flip = c.rhs.is_negative();
            let s = if flip { -Scalar::one() } else { Scalar::one() };
            let mut row = vec![Scalar::zero(); ncols];
            for (j, a) in c.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (p, n) = var_cols[j];
                row[p] = a * &s;
                if let Some(n) = n {
                    row[n] = -(a * &s);
                }
            }
            if let Some(sc) = slack_of[i] {
                row[sc] = match c.rel {
                    Rel::Le => s.clone(),
                    Rel::Ge => -s.clone(),
                    Rel::Eq => unreachable!(),
                };
            }
            row[art_start + i] = Scalar::one();
            rows.push(row);
            rhs.push(c.rhs.abs());
            signs.push(flip);
        }
        Tableau {
            m,
            var_cols,
            n_struct,
            art_start,
            ncols,
            rows,
            rhs,
            basis: (0..m).map(|i| art_start + i).collect(),
            signs,
        }
    }

    fn pivot(&mut self, r: usize, e: usize, obj: &mut Vec<Scalar>, obj_rhs: &mut Scalar) {
        let p = self.rows[r][e].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.rows[i][e].clone();
            if f.is_zero() {
                continue;
            }
            for (j, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    self.rows[i][j] -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        let f = obj[e].clone();
        if !f.is_zero() {
            for (j, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    obj[j] -= &f * pv;
                }
            }
            *obj_rhs -= &f * &prhs;
        }
        self.basis[r] = e;
    }

    /// Runs simplex iterations with Bland's rule. Returns the unbounded
    /// entering column if the objective is unbounded.
    fn iterate(&mut self, obj: &mut Vec<Scalar>, obj_rhs: &mut Scalar, limit: usize) -> Option<usize> {
        loop {
            let entering = (0..limit).find(|&j| obj[j].is_positive());
            let e = match entering {
                Some(e) => e,
                None => return None,
            };
            let mut best: Option<(usize, Scalar)> = None;
            for i in 0..self.m {
                let a = &self.rows[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, e, obj, obj_rhs),
                None => return Some(e),
            }
        }
    }

    fn column_values(&self) -> Vec<Scalar> {
        let mut vals = vec![Scalar::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            vals[b] = self.rhs[i].clone();
        }
        vals
    }

    fn user_x(&self, vals: &[Scalar]) -> Vector {
        self.var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &vals[p] - &vals[n],
                None => vals[p].clone(),
            })
            .collect()
    }

    /// Multipliers of the (sign-corrected) user rows, read off the reduced
    /// costs of the artificial columns: y_i = c_art - d_art.
    fn row_duals(&self, obj: &[Scalar], c_art: &Scalar) -> Vector {
        (0..self.m)
            .map(|i| {
                let y = c_art - &obj[self.art_start + i];
                if self.signs[i] {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }

    fn run(mut self, lp: &Lp) -> LpOutcome {
        let m = self.m;
        // Phase 1: maximize -sum(artificials).
        let mut obj = vec![Scalar::zero(); self.ncols];
        let mut obj_rhs = Scalar::zero();
        for i in 0..m {
            for j in 0..self.art_start {
                if !self.rows[i][j].is_zero() {
                    obj[j] += &self.rows[i][j];
                }
            }
            obj_rhs += &self.rhs[i];
        }
        // obj_rhs holds -(current objective value) = sum of artificials.
        let unb = self.iterate(&mut obj, &mut obj_rhs, self.art_start);
        debug_assert!(unb.is_none());
        if obj_rhs.is_positive() {
            let y = self.row_duals(&obj, &-Scalar::one());
            let total: Scalar = y.iter().zip(&lp.constraints).fold(Scalar::zero(), |acc, (yi, c)| acc + yi * &c.rhs);
            // total < 0; rescale to -1.
            let k = -total;
            return LpOutcome::Infeasible(y.into_iter().map(|v| v / &k).collect());
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..m {
            if self.basis[r] >= self.art_start {
                if let Some(e) = (0..self.art_start).find(|&j| !self.rows[r][j].is_zero()) {
                    self.pivot(r, e, &mut obj, &mut obj_rhs);
                }
            }
        }
        // Phase 2 objective over columns.
        let sense = if lp.maximize { Scalar::one() } else { -Scalar::one() };
        let mut cost = vec![Scalar::zero(); self.ncols];
        for (j, c) in lp.objective.iter().enumerate() {
            let (p, n) = self.var_cols[j];
            cost[p] = c * &sense;
            if let Some(n) = n {
                cost[n] = -(c * &sense);
            }
        }
        let mut obj = cost.clone();
        let mut obj_rhs = Scalar::zero();
        for i in 0..m {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                if !self.rows[i][j].is_zero() {
                    obj[j] -= cb * &self.rows[i][j];
                }
            }
            obj_rhs -= cb * &self.rhs[i];
        }
        if let Some(e) = self.iterate(&mut obj, &mut obj_rhs, self.n_struct) {
            let vals = self.column_values();
            let point = self.user_x(&vals);
            let mut dir = vec![Scalar::zero(); self.ncols];
            dir[e] = Scalar::one();
            for (i, &b) in self.basis.iter().enumerate() {
                dir[b] = -self.rows[i][e].clone();
            }
            let ray = self.user_x(&dir);
            return LpOutcome::Unbounded { point, ray };
        }
        let vals = self.column_values();
        let x = self.user_x(&vals);
        let value = dot(&lp.objective, &x);
        let mut duals = self.row_duals(&obj, &Scalar::zero());
        if !lp.maximize {
            for d in duals.iter_mut() {
                *d = -d.clone();
            }
        }
        LpOutcome::Optimal(LpSolution { x, value, duals })
    }
}

/// True iff `x` satisfies every constraint and sign restriction of `lp`.
pub fn is_feasible(lp: &Lp, x: &[Scalar]) -> bool {
    if x.len() != lp.nvars {
        return false;
    }
    if (0..lp.nvars).any(|j| !lp.free[j] && x[j].is_negative()) {
        return false;
    }
    lp.constraints.iter().all(|c| {
        let lhs = dot(&c.coeffs, x);
        match c.rel {
            Rel::Le => lhs <= c.rhs,
            Rel::Ge => lhs >= c.rhs,
            Rel::Eq => lhs == c.rhs,
        }
    })
}

/// Checks an optimality certificate: primal feasibility, dual feasibility
/// (sign rules and reduced costs), and equal objective values.
pub fn verify_optimal(lp: &Lp, sol: &LpSolution) -> bool {
    if !is_feasible(lp, &sol.x) || sol.duals.len() != lp.constraints.len() {
        return false;
    }
    let s = if lp.maximize { Scalar::one() } else { -Scalar::one() };
    for (y, c) in sol.duals.iter().zip(&lp.constraints) {
        let y = y * &s;
        let ok = match c.rel {
            Rel::Le => !y.is_negative(),
            Rel::Ge => !y.is_positive(),
            Rel::Eq => true,
        };
        if !ok {
            return false;
        }
    }
    for j in 0..lp.nvars {
        let mut red = lp.objective[j].clone();
        for (y, c) in sol.duals.iter().zip(&lp.constraints) {
            red -= y * &c.coeffs[j];
        }
        let red = red * &s;
        let ok = if lp.free[j] { red.is_zero() } else { !red.is_positive() };
        if !ok {
            return false;
        }
    }
    let dual_value = sol
        .duals
        .iter()
        .zip(&lp.constraints)
        .fold(Scalar::zero(), |acc, (y, c)| acc + y * &c.rhs);
    dual_value == sol.value && dot(&lp.objective, &sol.x) == sol.value
}

/// Checks a Farkas ray for `lp`'s constraint system.
pub fn verify_farkas(lp: &Lp, y: &[Scalar]) -> bool {
    if y.len() != lp.constraints.len() {
        return false;
    }
    for (yi, c) in y.iter().zip(&lp.constraints) {
        let ok = match c.rel {
            Rel::Le => !yi.is_negative(),
            Rel::Ge => !yi.is_positive(),
            Rel::Eq => true,
        };
        if !ok {
            return false;
        }
    }
    for j in 0..lp.nvars {
        let col = y
            .iter()
            .zip(&lp.constraints)
            .fold(Scalar::zero(), |acc, (yi, c)| acc + yi * &c.coeffs[j]);
        let ok = if lp.free[j] { col.is_zero() } else { !col.is_negative() };
        if !ok {
            return false;
        }
    }
    let rhs = y
        .iter()
        .zip(&lp.constraints)
        .fold(Scalar::zero(), |acc, (yi, c)| acc + yi * &c.rhs);
    rhs.is_negative()
}

/// Finds a point of `{x : <a_i, x> <= b_i}` (free variables), or Farkas
/// multipliers `y >= 0` with `sum y_i a_i = 0`, `sum y_i b_i = -1`.
pub fn feasible_point(dim: usize, rows: &[(Vector, Scalar)]) -> Result<Vector, Vector> {
    let mut lp = Lp::new_free(dim);
    for (a, b) in rows {
        lp.le(a.clone(), b.clone());
    }
    match lp.solve() {
        LpOutcome::Optimal(s) => Ok(s.x),
        LpOutcome::Infeasible(y) => Err(y),
        LpOutcome::Unbounded { .. } => unreachable!("zero objective"),
    }
}

#[derive(Debug, Clone)]
pub enum StrictOutcome {
    Feasible(Vector),
    /// The non-strict rows alone are infeasible: Farkas multipliers over them.
    Farkas(Vector),
    /// Motzkin certificate: `y >= 0` on non-strict rows, `z >= 0` with
    /// `sum z = 1` on strict rows, `sum y a + sum z c = 0`,
    /// `sum y b + sum z d <= 0`.
    Motzkin { y: Vector, z: Vector },
}

/// Decides `{x : a_i x <= b_i, c_j x < d_j}` exactly.
pub fn strict_system(dim: usize, le: &[(Vector, Scalar)], lt: &[(Vector, Scalar)]) -> StrictOutcome {
    if lt.is_empty() {
        return match feasible_point(dim, le) {
            Ok(x) => StrictOutcome::Feasible(x),
            Err(y) => StrictOutcome::Farkas(y),
        };
    }
    let mut lp = Lp::new_free(dim + 1);
    for (a, b) in le {
        let mut row = a.clone();
        row.push(Scalar::zero());
        lp.le(row, b.clone());
    }
    for (c, d) in lt {
        let mut row = c.clone();
        row.push(Scalar::one());
        lp.le(row, d.clone());
    }
    let mut t_row = zeros(dim);
    t_row.push(Scalar::one());
    lp.le(t_row.clone(), Scalar::one());
    lp.maximize(t_row);
    match lp.solve() {
        LpOutcome::Infeasible(y) => StrictOutcome::Farkas(y[..le.len()].to_vec()),
        LpOutcome::Optimal(s) => {
            if s.value.is_positive() {
                StrictOutcome::Feasible(s.x[..dim].to_vec())
            } else {
                let y = s.duals[..le.len()].to_vec();
                let z = s.duals[le.len()..le.len() + lt.len()].to_vec();
                StrictOutcome::Motzkin { y, z }
            }
        }
        LpOutcome::Unbounded { .. } => unreachable!("t is bounded by 1"),
    }
}

/// Checks Farkas multipliers for a free-variable `<=` system.
pub fn verify_le_farkas(dim: usize, rows: &[(Vector, Scalar)], y: &[Scalar]) -> bool {
    if y.len() != rows.len() || y.iter().any(|v| v.is_negative()) {
        return false;
    }
    let mut comb = zeros(dim);
    let mut rhs = Scalar::zero();
    for (yi, (a, b)) in y.iter().zip(rows) {
        if yi.is_zero() {
            continue;
        }
        for k in 0..dim {
            comb[k] += yi * &a[k];
        }
        rhs += yi * b;
    }
    comb.iter().all(|v| v.is_zero()) && rhs.is_negative()
}

/// Checks a Motzkin certificate for the strict system.
pub fn verify_motzkin(dim: usize, le: &[(Vector, Scalar)], lt: &[(Vector, Scalar)], y: &[Scalar], z: &[Scalar]) -> bool {
    if y.len() != le.len() || z.len() != lt.len() {
        return false;
    }
    if y.iter().chain(z).any(|v| v.is_negative()) || z.iter().all(|v| v.is_zero()) {
        return false;
    }
    let mut comb = zeros(dim);
    let mut rhs = Scalar::zero();
    for (yi, (a, b)) in y.iter().zip(le).chain(z.iter().zip(lt)) {
        for k in 0..dim {
            comb[k] += yi * &a[k];
        }
        rhs += yi * b;
    }
    comb.iter().all(|v| v.is_zero()) && !rhs.is_positive()
}

/// Maximizes `<c, x>` over `{x : a_i x <= b_i}` with free variables.
pub fn maximize_over(dim: usize, rows: &[(Vector, Scalar)], c: &[Scalar]) -> LpOutcome {
    let mut lp = Lp::new_free(dim);
    for (a, b) in rows {
        lp.le(a.clone(), b.clone());
    }
    lp.maximize(c.to_vec());
    lp.solve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, int};
    use crate::vector::from_ints;

    #[test]
    fn small_max_problem() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x,y >= 0 -> (8/5, 6/5), 14/5
        let mut lp = Lp::new(2);
        lp.le(from_ints(&[1, 2]), int(4));
        lp.le(from_ints(&[3, 1]), int(6));
        lp.maximize(from_ints(&[1, 1]));
        let s = lp.solve().optimal().unwrap();
        assert_eq!(s.x, vec![frac(8, 5), frac(6, 5)]);
        assert_eq!(s.value, frac(14, 5));
        assert!(verify_optimal(&lp, &s));
    }

    #[test]
    fn minimize_with_ge_and_free() {
        // min |x| style: min t s.t. t >= x - 3, t >= 3 - x, x free, t free, x >= 5
        let mut lp = Lp::new_free(2);
        lp.ge(from_ints(&[-1, 1]), int(-3));
        lp.ge(from_ints(&[1, 1]), int(3));
        lp.ge(from_ints(&[1, 0]), int(5));
        lp.minimize(from_ints(&[0, 1]));
        let s = lp.solve().optimal().unwrap();
        assert_eq!(s.value, int(2));
        assert!(verify_optimal(&lp, &s));
    }

    #[test]
    fn infeasible_gives_farkas() {
        let mut lp = Lp::new_free(2);
        lp.le(from_ints(&[0, 1]), int(0));
        lp.le(from_ints(&[0, -1]), int(-1));
        match lp.solve() {
            LpOutcome::Infeasible(y) => {
                assert!(verify_farkas(&lp, &y));
                assert_eq!(y, vec![int(1), int(1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_and_negative_rhs() {
        let mut lp = Lp::new(3);
        lp.eq(from_ints(&[1, 1, 1]), int(1));
        lp.ge(from_ints(&[1, -1, 0]), frac(-1, 2));
        lp.minimize(from_ints(&[2, 1, 3]));
        let s = lp.solve().optimal().unwrap();
        assert_eq!(s.value, frac(5, 4));
        assert!(verify_optimal(&lp, &s));
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = Lp::new(1);
        lp.ge(from_ints(&[1]), int(1));
        lp.maximize(from_ints(&[1]));
        assert!(matches!(lp.solve(), LpOutcome::Unbounded { .. }));
    }

    #[test]
    fn strict_systems() {
        // x < 0 and x > 0: Motzkin
        let lt = vec![(from_ints(&[1]), int(0)), (from_ints(&[-1]), int(0))];
        match strict_system(1, &[], &lt) {
            StrictOutcome::Motzkin { y, z } => assert!(verify_motzkin(1, &[], &lt, &y, &z)),
            other => panic!("{other:?}"),
        }
        // x <= 0, x > -1: feasible
        let le = vec![(from_ints(&[1]), int(0))];
        let lt = vec![(from_ints(&[-1]), int(1))];
        assert!(matches!(strict_system(1, &le, &lt), StrictOutcome::Feasible(_)));
        // x <= 0, x > 0
        let lt = vec![(from_ints(&[-1]), int(0))];
        match strict_system(1, &le, &lt) {
            StrictOutcome::Motzkin { y, z } => assert!(verify_motzkin(1, &le, &lt, &y, &z)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_redundant_rows() {
        let mut lp = Lp::new(2);
        lp.eq(from_ints(&[1, 1]), int(1));
        lp.eq(from_ints(&[2, 2]), int(2));
        lp.maximize(from_ints(&[1, 0]));
        let s = lp.solve().optimal().unwrap();
        assert_eq!(s.value, int(1));
        assert!(verify_optimal(&lp, &s));
    }
}
