//! Dense two-phase primal simplex over exact rationals.
//!
//! Every program is a maximization. Pivoting follows Bland's least-index rule
//! in both phases, so the solver terminates under degeneracy and returns the
//! same basis for the same input. Duals are read off the final basis: for a
//! `<=` row of a maximization the multiplier is nonnegative, for a `>=` row it
//! is nonpositive, and equality rows are free.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub senses: Vec<Sense>,
    /// `None` marks a free variable.
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Meaningful only when `status == Optimal`; zero otherwise.
    pub objective_value: Rational,
    pub primal: Vec<Rational>,
    /// One multiplier per constraint row.
    pub dual: Vec<Rational>,
    /// One multiplier per variable for its upper bound (zero when unbounded above).
    pub upper_dual: Vec<Rational>,
}

impl LpSolution {
    fn without_optimum(status: LpStatus) -> Self {
        LpSolution {
            status,
            objective_value: Rational::zero(),
            primal: Vec::new(),
            dual: Vec::new(),
            upper_dual: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

impl LinearProgram {
    /// `max objective · x` with every variable bounded below by zero.
    pub fn maximize(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            matrix: Vec::new(),
            rhs: Vec::new(),
            senses: Vec::new(),
            lower: vec![Some(Rational::zero()); n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, sense: Sense, rhs: Rational) -> &mut Self {
        self.matrix.push(coeffs);
        self.senses.push(sense);
        self.rhs.push(rhs);
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, None, None)
    }

    fn check_dimensions(&self) -> Result<()> {
        let n = self.objective.len();
        let m = self.matrix.len();
        if self.rhs.len() != m || self.senses.len() != m {
            return Err(Error::Dimension(format!(
                "{m} constraint rows but {} right-hand sides and {} senses",
                self.rhs.len(),
                self.senses.len()
            )));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::Dimension(format!(
                "{n} variables but {} lower and {} upper bounds",
                self.lower.len(),
                self.upper.len()
            )));
        }
        if let Some((i, row)) = self.matrix.iter().enumerate().find(|(_, row)| row.len() != n) {
            return Err(Error::Dimension(format!(
                "row {i} has {} coefficients, expected {n}",
                row.len()
            )));
        }
        Ok(())
    }

    /// Dual objective for a solution of this program; equals the primal
    /// objective at optimality.
    pub fn dual_objective(&self, sol: &LpSolution) -> Rational {
        let mut total = Rational::zero();
        let shift = |j: usize| self.lower[j].clone().unwrap_or_else(Rational::zero);
        for (i, row) in self.matrix.iter().enumerate() {
            let mut rhs = self.rhs[i].clone();
            for (j, a) in row.iter().enumerate() {
                rhs -= a * shift(j);
            }
            total += &sol.dual[i] * rhs;
        }
        for j in 0..self.num_vars() {
            if let Some(u) = &self.upper[j] {
                total += &sol.upper_dual[j] * (u - shift(j));
            }
            total += &self.objective[j] * shift(j);
        }
        total
    }

    /// `rhs_i - a_i · x` for every row.
    pub fn slacks(&self, x: &[Rational]) -> Vec<Rational> {
        self.matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| b - dot(row, x))
            .collect()
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// How an original variable maps onto nonnegative internal columns.
enum ColumnMap {
    Shifted { col: usize, lower: Rational },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    n_cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if p != Rational::from_integer(1.into()) {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (j, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    let delta = &factor * pv;
                    self.rows[i][j] -= delta;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut z = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (j, zj) in z.iter_mut().enumerate() {
                if !self.rows[i][j].is_zero() {
                    *zj -= &cost[b] * &self.rows[i][j];
                }
            }
        }
        z
    }

    /// Bland's rule maximization. Columns with `allowed[j] == false` never
    /// enter. Returns `false` when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        loop {
            let z = self.reduced_costs(cost);
            let entering = (0..self.n_cols).find(|&j| allowed[j] && z[j].is_positive());
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .zip(&self.rhs)
            .fold(Rational::zero(), |acc, (&b, v)| acc + &cost[b] * v)
    }
}

/// Solves `lp` exactly. Infeasibility and unboundedness are statuses; only
/// malformed dimensions produce an error.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    lp.check_dimensions()?;
    let n = lp.num_vars();

    // Internal nonnegative structural columns.
    let mut maps = Vec::with_capacity(n);
    let mut n_struct = 0;
    for j in 0..n {
        match &lp.lower[j] {
            Some(l) => {
                maps.push(ColumnMap::Shifted { col: n_struct, lower: l.clone() });
                n_struct += 1;
            }
            None => {
                maps.push(ColumnMap::Split { pos: n_struct, neg: n_struct + 1 });
                n_struct += 2;
            }
        }
    }
    let expand = |coeffs: &[Rational]| -> (Vec<Rational>, Rational) {
        let mut out = vec![Rational::zero(); n_struct];
        let mut offset = Rational::zero();
        for (j, a) in coeffs.iter().enumerate() {
            match &maps[j] {
                ColumnMap::Shifted { col, lower } => {
                    out[*col] = a.clone();
                    offset += a * lower;
                }
                ColumnMap::Split { pos, neg } => {
                    out[*pos] = a.clone();
                    out[*neg] = -a;
                }
            }
        }
        (out, offset)
    };

    // Original rows followed by one row per finite upper bound.
    let mut rows: Vec<(Vec<Rational>, Sense, Rational)> = Vec::new();
    for i in 0..lp.num_rows() {
        let (coeffs, offset) = expand(&lp.matrix[i]);
        rows.push((coeffs, lp.senses[i], &lp.rhs[i] - offset));
    }
    let mut upper_rows = Vec::new();
    for j in 0..n {
        if let Some(u) = &lp.upper[j] {
            let mut unit = vec![Rational::zero(); n];
            unit[j] = Rational::from_integer(1.into());
            let (coeffs, offset) = expand(&unit);
            upper_rows.push((j, rows.len()));
            rows.push((coeffs, Sense::Le, u - offset));
        }
    }
    let m = rows.len();

    // Normalize to nonnegative right-hand sides.
    let mut flipped = vec![false; m];
    for (i, (coeffs, sense, b)) in rows.iter_mut().enumerate() {
        if b.is_negative() {
            flipped[i] = true;
            for a in coeffs.iter_mut() {
                *a = -a.clone();
            }
            *b = -b.clone();
            *sense = match *sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
    }

    let n_slack = rows.iter().filter(|(_, s, _)| *s != Sense::Eq).count();
    let n_art = rows.iter().filter(|(_, s, _)| *s != Sense::Le).count();
    let n_cols = n_struct + n_slack + n_art;
    let mut tableau = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        n_cols,
    };
    // Column of the identity initially basic in each row.
    let mut unit_col = Vec::with_capacity(m);
    let mut next_slack = n_struct;
    let mut next_art = n_struct + n_slack;
    for (coeffs, sense, b) in rows {
        let mut row = coeffs;
        row.resize(n_cols, Rational::zero());
        match sense {
            Sense::Le => {
                row[next_slack] = Rational::from_integer(1.into());
                tableau.basis.push(next_slack);
                unit_col.push(next_slack);
                next_slack += 1;
            }
            Sense::Ge => {
                row[next_slack] = Rational::from_integer((-1).into());
                next_slack += 1;
                row[next_art] = Rational::from_integer(1.into());
                tableau.basis.push(next_art);
                unit_col.push(next_art);
                next_art += 1;
            }
            Sense::Eq => {
                row[next_art] = Rational::from_integer(1.into());
                tableau.basis.push(next_art);
                unit_col.push(next_art);
                next_art += 1;
            }
        }
        tableau.rows.push(row);
        tableau.rhs.push(b);
    }

    let first_art = n_struct + n_slack;
    if n_art > 0 {
        let mut cost1 = vec![Rational::zero(); n_cols];
        for c in cost1.iter_mut().skip(first_art) {
            *c = Rational::from_integer((-1).into());
        }
        let all = vec![true; n_cols];
        tableau.optimize(&cost1, &all);
        if tableau.objective(&cost1).is_negative() {
            return Ok(LpSolution::without_optimum(LpStatus::Infeasible));
        }
        // Drive zero-level artificials out where a real column can replace them.
        for r in 0..m {
            if tableau.basis[r] >= first_art {
                if let Some(c) = (0..first_art).find(|&c| !tableau.rows[r][c].is_zero()) {
                    tableau.pivot(r, c);
                }
            }
        }
    }

    let mut cost = vec![Rational::zero(); n_cols];
    for (j, map) in maps.iter().enumerate() {
        match map {
            ColumnMap::Shifted { col, .. } => cost[*col] = lp.objective[j].clone(),
            ColumnMap::Split { pos, neg } => {
                cost[*pos] = lp.objective[j].clone();
                cost[*neg] = -lp.objective[j].clone();
            }
        }
    }
    let allowed: Vec<bool> = (0..n_cols).map(|c| c < first_art).collect();
    if !tableau.optimize(&cost, &allowed) {
        return Ok(LpSolution::without_optimum(LpStatus::Unbounded));
    }

    let mut values = vec![Rational::zero(); n_cols];
    for (i, &b) in tableau.basis.iter().enumerate() {
        values[b] = tableau.rhs[i].clone();
    }
    let primal: Vec<Rational> = maps
        .iter()
        .map(|map| match map {
            ColumnMap::Shifted { col, lower } => &values[*col] + lower,
            ColumnMap::Split { pos, neg } => &values[*pos] - &values[*neg],
        })
        .collect();

    let mut internal_dual = vec![Rational::zero(); m];
    for (i, y) in internal_dual.iter_mut().enumerate() {
        let col = unit_col[i];
        for (k, &b) in tableau.basis.iter().enumerate() {
            if !cost[b].is_zero() && !tableau.rows[k][col].is_zero() {
                *y += &cost[b] * &tableau.rows[k][col];
            }
        }
        if flipped[i] {
            *y = -y.clone();
        }
    }
    let dual = internal_dual[..lp.num_rows()].to_vec();
    let mut upper_dual = vec![Rational::zero(); n];
    for (j, row) in upper_rows {
        upper_dual[j] = internal_dual[row].clone();
    }
    let objective_value = dot(&lp.objective, &primal);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective_value,
        primal,
        dual,
        upper_dual,
    })
}
