//! Exact rational linear programming: a dense two-phase simplex with
//! Bland's rule over arbitrary-precision rationals. Used to decide
//! feasibility and per-coordinate ranges of normalization polytopes and
//! the ontic-weight systems of the noncontextual-model constructor.
//!
//! Infeasibility comes with a Farkas certificate `y` satisfying
//! `y^T A <= 0` componentwise and `y^T b > 0`, verified before returning.

use num_traits::{One, Signed, Zero};

use crate::rational::Rat;
use crate::scenario::Scenario;

/// `A x = b`, `x >= 0` in dense row form.
#[derive(Debug, Clone)]
pub struct StandardForm {
    pub num_vars: usize,
    /// Rows `(coefficients, rhs)`.
    pub rows: Vec<(Vec<Rat>, Rat)>,
}

impl StandardForm {
    pub fn new(num_vars: usize) -> Self {
        StandardForm {
            num_vars,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push((coeffs, rhs));
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, solution: Vec<Rat> },
    Infeasible { farkas: Vec<Rat> },
    Unbounded,
}

/// The normalization polytope of a scenario: one equality per context,
/// `sum_{w in f} p_w = 1`, with `p >= 0`.
pub fn normalization_polytope(h: &Scenario) -> StandardForm {
    let mut sf = StandardForm::new(h.num_nodes);
    for f in &h.hyperedges {
        let mut row = vec![Rat::zero(); h.num_nodes];
        for &w in f {
            row[w] = Rat::one();
        }
        sf.push_row(row, Rat::one());
    }
    sf
}

/// Checks `y^T A <= 0` componentwise and `y^T b > 0` against the original
/// (un-normalized) rows.
pub fn verify_farkas(sf: &StandardForm, y: &[Rat]) -> bool {
    if y.len() != sf.rows.len() {
        return false;
    }
    for j in 0..sf.num_vars {
        let dot: Rat = sf
            .rows
            .iter()
            .zip(y)
            .map(|((coeffs, _), yi)| &coeffs[j] * yi)
            .sum();
        if dot.is_positive() {
            return false;
        }
    }
    let rhs_dot: Rat = sf.rows.iter().zip(y).map(|((_, b), yi)| b * yi).sum();
    rhs_dot.is_positive()
}

/// Minimizes `objective . x` over the standard-form feasible region.
pub fn minimize(sf: &StandardForm, objective: &[Rat]) -> LpOutcome {
    Simplex::new(sf).solve(objective)
}

/// Maximizes by negating the objective.
pub fn maximize(sf: &StandardForm, objective: &[Rat]) -> LpOutcome {
    let negated: Vec<Rat> = objective.iter().map(|c| -c).collect();
    match Simplex::new(sf).solve(&negated) {
        LpOutcome::Optimal { value, solution } => LpOutcome::Optimal {
            value: -value,
            solution,
        },
        other => other,
    }
}

/// Returns a feasible point or a verified Farkas certificate.
pub fn feasible_point(sf: &StandardForm) -> Result<Vec<Rat>, Vec<Rat>> {
    let zero_obj = vec![Rat::zero(); sf.num_vars];
    match minimize(sf, &zero_obj) {
        LpOutcome::Optimal { solution, .. } => Ok(solution),
        LpOutcome::Infeasible { farkas } => Err(farkas),
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

/// Dense tableau. Column layout: `num_vars` structural columns followed by
/// one artificial column per row; the final column is the rhs. Row 0 holds
/// the reduced-cost row `z_j - c_j` with the objective value in its rhs.
struct Simplex {
    tab: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    num_vars: usize,
    num_rows: usize,
    /// Sign applied to each original row to make its rhs nonnegative.
    row_sign: Vec<bool>,
    /// Rows found redundant after phase one (never pivoted again).
    dropped: Vec<bool>,
}

impl Simplex {
    fn new(sf: &StandardForm) -> Self {
        let m = sf.rows.len();
        let n = sf.num_vars;
        let width = n + m + 1;
        let mut tab = vec![vec![Rat::zero(); width]; m + 1];
        let mut row_sign = vec![false; m];
        for (i, (coeffs, rhs)) in sf.rows.iter().enumerate() {
            let flip = rhs.is_negative();
            row_sign[i] = flip;
            for (j, c) in coeffs.iter().enumerate() {
                tab[i + 1][j] = if flip { -c } else { c.clone() };
            }
            tab[i + 1][n + i] = Rat::one();
            tab[i + 1][width - 1] = if flip { -rhs } else { rhs.clone() };
        }
        Simplex {
            tab,
            basis: (n..n + m).collect(),
            num_vars: n,
            num_rows: m,
            row_sign,
            dropped: vec![false; m],
        }
    }

    fn rhs_col(&self) -> usize {
        self.num_vars + self.num_rows
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.tab[0].len();
        let pivot_val = self.tab[row][col].clone();
        for j in 0..width {
            self.tab[row][j] = &self.tab[row][j] / &pivot_val;
        }
        for i in 0..self.tab.len() {
            if i == row || self.tab[i][col].is_zero() {
                continue;
            }
            let factor = self.tab[i][col].clone();
            for j in 0..width {
                let delta = &factor * &self.tab[row][j];
                self.tab[i][j] = &self.tab[i][j] - delta;
            }
        }
        self.basis[row - 1] = col;
    }

    /// Bland's rule: smallest-index entering column with positive reduced
    /// cost, leaving row by minimum ratio with smallest basic index on
    /// ties. Returns false at optimality, true after a pivot, and None for
    /// unbounded.
    fn step(&mut self, active_cols: usize) -> Option<bool> {
        let rhs = self.rhs_col();
        let entering = (0..active_cols).find(|&j| self.tab[0][j].is_positive());
        let Some(col) = entering else {
            return Some(false);
        };
        let mut leaving: Option<(usize, Rat)> = None;
        for i in 1..=self.num_rows {
            if self.dropped[i - 1] || !self.tab[i][col].is_positive() {
                continue;
            }
            let ratio = &self.tab[i][rhs] / &self.tab[i][col];
            let better = match &leaving {
                None => true,
                Some((best_row, best)) => {
                    ratio < *best
                        || (ratio == *best && self.basis[i - 1] < self.basis[*best_row - 1])
                }
            };
            if better {
                leaving = Some((i, ratio));
            }
        }
        let (row, _) = leaving?;
        self.pivot(row, col);
        Some(true)
    }

    fn run(&mut self, active_cols: usize) -> bool {
        loop {
            match self.step(active_cols) {
                Some(true) => continue,
                Some(false) => return true,
                None => return false,
            }
        }
    }

    fn set_cost_row(&mut self, costs: &[Rat]) {
        let width = self.tab[0].len();
        for j in 0..width {
            self.tab[0][j] = Rat::zero();
        }
        // Reduced costs: z_j - c_j = c_B B^-1 A_j - c_j, assembled by
        // subtracting c then adding back the basic rows' contributions.
        for (j, c) in costs.iter().enumerate() {
            self.tab[0][j] = -c.clone();
        }
        for i in 1..=self.num_rows {
            if self.dropped[i - 1] {
                continue;
            }
            let cb = costs.get(self.basis[i - 1]).cloned().unwrap_or_else(Rat::zero);
            if cb.is_zero() {
                continue;
            }
            for j in 0..width {
                let delta = &cb * &self.tab[i][j];
                self.tab[0][j] = &self.tab[0][j] + delta;
            }
        }
    }

    fn solve(&mut self, objective: &[Rat]) -> LpOutcome {
        let n = self.num_vars;
        let m = self.num_rows;
        let rhs = self.rhs_col();

        // Phase one: minimize the sum of artificials.
        let mut phase1_costs = vec![Rat::zero(); n + m];
        for c in phase1_costs.iter_mut().skip(n) {
            *c = Rat::one();
        }
        self.set_cost_row(&phase1_costs);
        let finished = self.run(n + m);
        debug_assert!(finished, "phase one has a bounded objective");
        if self.tab[0][rhs].is_positive() {
            // Dual solution from the artificial columns: y_i = row0[a_i] + 1,
            // then undo the sign normalization of each row.
            let mut farkas = Vec::with_capacity(m);
            for i in 0..m {
                let yi = &self.tab[0][n + i] + Rat::one();
                farkas.push(if self.row_sign[i] { -yi } else { yi });
            }
            return LpOutcome::Infeasible { farkas };
        }

        // Drive artificials out of the basis; a row that cannot pivot to a
        // structural column is redundant.
        for i in 1..=m {
            if self.basis[i - 1] < n {
                continue;
            }
            let col = (0..n).find(|&j| !self.tab[i][j].is_zero());
            match col {
                Some(j) => self.pivot(i, j),
                None => self.dropped[i - 1] = true,
            }
        }

        // Phase two over structural columns only.
        let mut phase2_costs = objective.to_vec();
        phase2_costs.resize(n + m, Rat::zero());
        self.set_cost_row(&phase2_costs);
        if !self.run(n) {
            return LpOutcome::Unbounded;
        }
        let mut solution = vec![Rat::zero(); n];
        for i in 1..=m {
            if !self.dropped[i - 1] && self.basis[i - 1] < n {
                solution[self.basis[i - 1]] = self.tab[i][rhs].clone();
            }
        }
        let value: Rat = objective
            .iter()
            .zip(&solution)
            .map(|(c, x)| c * x)
            .sum();
        LpOutcome::Optimal { value, solution }
    }
}

/// Outcome of solving a square-or-overdetermined exact linear system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemSolution {
    Unique(Vec<Rat>),
    Underdetermined,
    Inconsistent,
}

/// Gaussian elimination for `A x = b` over the rationals, with `A` given
/// as dense rows. No nonnegativity constraint.
#[allow(clippy::needless_range_loop)]
pub fn solve_exact_system(rows: &[(Vec<Rat>, Rat)], num_vars: usize) -> SystemSolution {
    let mut mat: Vec<(Vec<Rat>, Rat)> = rows.to_vec();
    let mut pivot_of_col = vec![usize::MAX; num_vars];
    let mut rank = 0usize;
    for col in 0..num_vars {
        let Some(pr) = (rank..mat.len()).find(|&r| !mat[r].0[col].is_zero()) else {
            continue;
        };
        mat.swap(rank, pr);
        let inv = mat[rank].0[col].clone();
        for j in col..num_vars {
            mat[rank].0[j] = &mat[rank].0[j] / &inv;
        }
        mat[rank].1 = &mat[rank].1 / &inv;
        for r in 0..mat.len() {
            if r == rank || mat[r].0[col].is_zero() {
                continue;
            }
            let factor = mat[r].0[col].clone();
            for j in col..num_vars {
                let delta = &factor * &mat[rank].0[j];
                mat[r].0[j] = &mat[r].0[j] - delta;
            }
            let delta = &factor * &mat[rank].1;
            mat[r].1 = &mat[r].1 - delta;
        }
        pivot_of_col[col] = rank;
        rank += 1;
    }
    for (coeffs, rhs) in mat.iter().skip(rank) {
        debug_assert!(coeffs.iter().all(|c| c.is_zero()));
        if !rhs.is_zero() {
            return SystemSolution::Inconsistent;
        }
    }
    if rank < num_vars {
        return SystemSolution::Underdetermined;
    }
    let mut x = vec![Rat::zero(); num_vars];
    for (col, &row) in pivot_of_col.iter().enumerate() {
        x[col] = mat[row].1.clone();
    }
    SystemSolution::Unique(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::scenario::Scenario;

    fn sf(rows: Vec<(Vec<i64>, i64)>, n: usize) -> StandardForm {
        let mut out = StandardForm::new(n);
        for (coeffs, rhs) in rows {
            out.push_row(coeffs.into_iter().map(rat_int).collect(), rat_int(rhs));
        }
        out
    }

    #[test]
    fn solves_a_small_lp() {
        // min -x0 - x1 s.t. x0 + x1 + s = 1 -> x0 + x1 = 1 at optimum.
        let p = sf(vec![(vec![1, 1, 1], 1)], 3);
        let obj = vec![rat_int(-1), rat_int(-1), rat_int(0)];
        match minimize(&p, &obj) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_int(-1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility_with_certificate() {
        // x0 = 1 and x0 = 2 cannot both hold.
        let p = sf(vec![(vec![1], 1), (vec![1], 2)], 1);
        match minimize(&p, &[rat_int(0)]) {
            LpOutcome::Infeasible { farkas } => assert!(verify_farkas(&p, &farkas)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_rhs_infeasibility() {
        // x0 + x1 = -1 with x >= 0.
        let p = sf(vec![(vec![1, 1], -1)], 2);
        match feasible_point(&p) {
            Err(farkas) => assert!(verify_farkas(&p, &farkas)),
            Ok(x) => panic!("unexpected feasible {x:?}"),
        }
    }

    #[test]
    fn detects_unboundedness() {
        // min -x0 s.t. x0 - x1 = 0: the ray x0 = x1 -> infinity.
        let p = sf(vec![(vec![1, -1], 0)], 2);
        match minimize(&p, &[rat_int(-1), rat_int(0)]) {
            LpOutcome::Unbounded => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn handles_redundant_rows() {
        let p = sf(vec![(vec![1, 1], 1), (vec![2, 2], 2)], 2);
        match minimize(&p, &[rat_int(1), rat_int(0)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_int(0)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn odd_cycle_polytope_is_a_point() {
        let h = Scenario::new(5, None, (0..5).map(|i| vec![i, (i + 1) % 5]).collect()).unwrap();
        let p = normalization_polytope(&h);
        for w in 0..5 {
            let mut obj = vec![rat_int(0); 5];
            obj[w] = rat_int(1);
            let lo = match minimize(&p, &obj) {
                LpOutcome::Optimal { value, .. } => value,
                other => panic!("unexpected {other:?}"),
            };
            let hi = match maximize(&p, &obj) {
                LpOutcome::Optimal { value, .. } => value,
                other => panic!("unexpected {other:?}"),
            };
            assert_eq!(lo, rat(1, 2));
            assert_eq!(hi, rat(1, 2));
        }
    }

    #[test]
    fn exact_system_solver_cases() {
        let rows = vec![
            (vec![rat_int(1), rat_int(1)], rat_int(1)),
            (vec![rat_int(1), rat_int(-1)], rat_int(0)),
        ];
        assert_eq!(
            solve_exact_system(&rows, 2),
            SystemSolution::Unique(vec![rat(1, 2), rat(1, 2)])
        );

        let under = vec![(vec![rat_int(1), rat_int(1)], rat_int(1))];
        assert_eq!(solve_exact_system(&under, 2), SystemSolution::Underdetermined);

        let bad = vec![
            (vec![rat_int(1), rat_int(1)], rat_int(1)),
            (vec![rat_int(2), rat_int(2)], rat_int(3)),
        ];
        assert_eq!(solve_exact_system(&bad, 2), SystemSolution::Inconsistent);
    }
}
