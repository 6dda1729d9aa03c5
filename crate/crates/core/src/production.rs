//! Linear production situations with a capped, taxed emission-permit
//! resource.
//!
//! All firms share the Leontief technology `A` (resource rows followed by the
//! permit row) and differ in their endowments, the columns of `B`. A coalition
//! pooling its endowments and holding `z` permits earns
//!
//! ```text
//! value(S; z) = max { p·x - c·z : A_res x <= b^S, a_permit · x <= z, x >= 0 }
//! ```
//!
//! and its optimal demand `d_S` is the least `z` at which that profit peaks.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{Coalition, MAX_PLAYERS};
use crate::lp::{self, LinearProgram, LpSolution, Sense};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LppSituation {
    /// `(q + 1) × g`; the last row is permits per unit of each good.
    technology: Vec<Vec<Rational>>,
    /// `q × n`; column `i` is firm `i`'s endowment.
    endowments: Vec<Vec<Rational>>,
    prices: Vec<Rational>,
    tax: Rational,
    cap: Rational,
}

impl LppSituation {
    /// Validates the model conditions and builds the situation. Error
    /// messages name the breached condition and use one-based indices.
    pub fn new(
        technology: Vec<Vec<Rational>>,
        endowments: Vec<Vec<Rational>>,
        prices: Vec<Rational>,
        tax: Rational,
        cap: Rational,
    ) -> Result<Self> {
        let goods = prices.len();
        if goods == 0 {
            return Err(Error::Situation("at least one good is required".into()));
        }
        if technology.len() < 2 {
            return Err(Error::Situation(
                "technology matrix A needs at least one resource row plus the permit row".into(),
            ));
        }
        let q = technology.len() - 1;
        if let Some((t, row)) = technology.iter().enumerate().find(|(_, r)| r.len() != goods) {
            return Err(Error::Dimension(format!(
                "row {} of A has {} entries but there are {goods} prices",
                t + 1,
                row.len()
            )));
        }
        if endowments.len() != q {
            return Err(Error::Dimension(format!(
                "B has {} rows but A has {q} resource rows",
                endowments.len()
            )));
        }
        let n = endowments[0].len();
        if n == 0 || n > MAX_PLAYERS {
            return Err(Error::Situation(format!("firm count {n} outside 1..={MAX_PLAYERS}")));
        }
        if let Some((t, row)) = endowments.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row {} of B has {} entries, expected {n}",
                t + 1,
                row.len()
            )));
        }
        for (t, row) in technology.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if a.is_negative() {
                    return Err(Error::Situation(format!(
                        "A[{}][{}] is negative; input requirements must be nonnegative",
                        t + 1,
                        j + 1
                    )));
                }
            }
        }
        for (t, row) in endowments.iter().enumerate() {
            for (i, b) in row.iter().enumerate() {
                if b.is_negative() {
                    return Err(Error::Situation(format!(
                        "B[{}][{}] is negative; endowments must be nonnegative",
                        t + 1,
                        i + 1
                    )));
                }
            }
        }
        let permit_row = &technology[q];
        if let Some(j) = permit_row.iter().position(|a| !a.is_positive()) {
            return Err(Error::Situation(format!(
                "condition 1 violated: permit requirement a_(q+1){} must be positive",
                j + 1
            )));
        }
        if !technology[..q].iter().any(|row| row.iter().all(|a| a.is_positive())) {
            return Err(Error::Situation(
                "condition 1 violated: some resource must be required by every good".into(),
            ));
        }
        if let Some(t) = endowments.iter().position(|row| !row.iter().any(|b| b.is_positive())) {
            return Err(Error::Situation(format!(
                "condition 2 violated: no firm holds a positive amount of resource {}",
                t + 1
            )));
        }
        if !tax.is_positive() {
            return Err(Error::Situation("condition 3 violated: tax c must be positive".into()));
        }
        if !cap.is_positive() {
            return Err(Error::Situation("condition 3 violated: cap r must be positive".into()));
        }
        for j in 0..goods {
            if prices[j] <= &permit_row[j] * &tax {
                return Err(Error::Situation(format!(
                    "condition 4 violated: price condition p_j > a_(q+1)j c violated for good {}",
                    j + 1
                )));
            }
        }
        Ok(LppSituation { technology, endowments, prices, tax, cap })
    }

    pub fn n_firms(&self) -> usize {
        self.endowments[0].len()
    }

    pub fn n_goods(&self) -> usize {
        self.prices.len()
    }

    pub fn n_resources(&self) -> usize {
        self.endowments.len()
    }

    pub fn technology(&self) -> &[Vec<Rational>] {
        &self.technology
    }

    pub fn endowments(&self) -> &[Vec<Rational>] {
        &self.endowments
    }

    pub fn prices(&self) -> &[Rational] {
        &self.prices
    }

    pub fn tax(&self) -> &Rational {
        &self.tax
    }

    pub fn cap(&self) -> &Rational {
        &self.cap
    }

    /// Same economy under a different cap.
    pub fn with_cap(&self, cap: Rational) -> Result<Self> {
        Self::new(
            self.technology.clone(),
            self.endowments.clone(),
            self.prices.clone(),
            self.tax.clone(),
            cap,
        )
    }

    pub fn permit_row(&self) -> &[Rational] {
        &self.technology[self.n_resources()]
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::grand(self.n_firms())
    }

    /// `b^S`, the pooled resource vector.
    pub fn pooled_endowment(&self, s: Coalition) -> Vec<Rational> {
        self.endowments
            .iter()
            .map(|row| s.members().map(|i| &row[i]).sum())
            .collect()
    }

    fn check_coalition(&self, s: Coalition) -> Result<()> {
        if s.is_empty() || !s.is_subset_of(self.grand_coalition()) {
            return Err(Error::Domain(format!(
                "coalition mask {:#b} is not a nonempty subset of the {} firms",
                s.mask(),
                self.n_firms()
            )));
        }
        Ok(())
    }

    /// The revenue program `max p·x` over `A x <= (b^S; z)`, `x >= 0`.
    pub fn revenue_program(&self, s: Coalition, z: &Rational) -> LinearProgram {
        let mut lp = LinearProgram::maximize(self.prices.clone());
        for (row, b) in self.technology[..self.n_resources()].iter().zip(self.pooled_endowment(s)) {
            lp.add_row(row.clone(), Sense::Le, b);
        }
        lp.add_row(self.permit_row().to_vec(), Sense::Le, z.clone());
        lp
    }

    /// Solves the revenue program; the solution carries a production plan and
    /// the resource and permit shadow prices.
    pub fn production_plan(&self, s: Coalition, z: &Rational) -> Result<LpSolution> {
        self.check_coalition(s)?;
        if z.is_negative() {
            return Err(Error::Domain(format!("permit amount {z} is negative")));
        }
        let sol = lp::solve(&self.revenue_program(s, z))?;
        debug_assert!(sol.is_optimal(), "revenue program is feasible and bounded");
        Ok(sol)
    }

    /// Gross revenue `max p·x` with `z` permits, before tax.
    pub fn revenue(&self, s: Coalition, z: &Rational) -> Result<Rational> {
        Ok(self.production_plan(s, z)?.objective_value)
    }

    /// `value(S; z)`: best profit of `S` holding exactly `z` taxed permits.
    pub fn coalition_value(&self, s: Coalition, z: &Rational) -> Result<Rational> {
        Ok(self.revenue(s, z)? - &self.tax * z)
    }

    /// `d_S`, the least permit holding at which `value(S; ·)` is maximal.
    pub fn optimal_demand(&self, s: Coalition) -> Result<Rational> {
        self.check_coalition(s)?;
        let g = self.n_goods();
        let q = self.n_resources();
        let b = self.pooled_endowment(s);

        // Variables (x_1..x_g, z); profit p·x - c z.
        let mut profit = self.prices.clone();
        profit.push(-self.tax.clone());
        let mut stage1 = LinearProgram::maximize(profit.clone());
        for t in 0..q {
            let mut row = self.technology[t].clone();
            row.push(Rational::zero());
            stage1.add_row(row, Sense::Le, b[t].clone());
        }
        let mut permit = self.permit_row().to_vec();
        permit.push(Rational::from_integer((-1).into()));
        stage1.add_row(permit, Sense::Le, Rational::zero());
        let best = lp::solve(&stage1)?;
        debug_assert!(best.is_optimal());

        let mut min_z = vec![Rational::zero(); g];
        min_z.push(Rational::from_integer((-1).into()));
        let mut stage2 = stage1.clone();
        stage2.objective = min_z;
        stage2.add_row(profit, Sense::Eq, best.objective_value);
        let least = lp::solve(&stage2)?;
        debug_assert!(least.is_optimal());
        Ok(least.primal[g].clone())
    }

    /// `d_S` for every nonempty coalition, indexed by mask (slot 0 unused).
    pub fn all_demands(&self) -> Result<Vec<Rational>> {
        let n = self.n_firms();
        let mut out = vec![Rational::zero(); 1 << n];
        for mask in 1..(1u32 << n) {
            out[mask as usize] = self.optimal_demand(Coalition::from_mask(mask))?;
        }
        Ok(out)
    }
}
