//! The permit rule as a direct mechanism: claimants report demands, the cap
//! is divided by the rule over the reports, and each claimant produces with
//! its true endowment. Dominance of truthful reporting is verified by brute
//! force over finite report grids.

use std::collections::HashMap;

use num_traits::Signed;

use crate::bankruptcy::Rule;
use crate::error::{Error, Result};
use crate::game::Coalition;
use crate::partition::{partition_shares, Partition};
use crate::production::LppSituation;
use crate::rational::Rational;

pub const DEFAULT_PRODUCT_LIMIT: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MechanismConfig {
    pub rule: Rule,
    /// Reporting units; all singletons by default.
    pub claimants: Partition,
    /// Report levels available to each claimant.
    pub grids: Vec<Vec<Rational>>,
    /// Optimal demand of each claimant.
    pub true_demands: Vec<Rational>,
    /// Ceiling on payoff evaluations for one exhaustive check.
    pub product_limit: u64,
}

impl MechanismConfig {
    pub fn new(sit: &LppSituation, rule: Rule, claimants: Partition, grids: Vec<Vec<Rational>>) -> Result<Self> {
        let k = claimants.len();
        if grids.len() != k {
            return Err(Error::Dimension(format!("{} grids for {k} claimants", grids.len())));
        }
        let true_demands = claimants
            .blocks()
            .iter()
            .map(|&b| sit.optimal_demand(b))
            .collect::<Result<Vec<_>>>()?;
        for (i, grid) in grids.iter().enumerate() {
            if grid.is_empty() {
                return Err(Error::Domain(format!("report grid of claimant {} is empty", i + 1)));
            }
            if grid.iter().any(Signed::is_negative) {
                return Err(Error::Domain(format!("report grid of claimant {} has a negative level", i + 1)));
            }
            if !grid.contains(&true_demands[i]) {
                return Err(Error::Domain(format!(
                    "report grid of claimant {} lacks its true demand {}",
                    i + 1,
                    true_demands[i]
                )));
            }
        }
        Ok(MechanismConfig { rule, claimants, grids, true_demands, product_limit: DEFAULT_PRODUCT_LIMIT })
    }

    /// Every firm reports alone from the same grid.
    pub fn singletons(sit: &LppSituation, rule: Rule, grid: Vec<Rational>) -> Result<Self> {
        let n = sit.n_firms();
        Self::new(sit, rule, Partition::singletons(n), vec![grid; n])
    }

    pub fn claimant_count(&self) -> usize {
        self.claimants.len()
    }

    /// Permits awarded for a report profile.
    pub fn allocate(&self, cap: &Rational, reports: &[Rational]) -> Vec<Rational> {
        partition_shares(self.rule, cap, reports)
    }
}

fn check_profile(cfg: &MechanismConfig, reports: &[Rational]) -> Result<()> {
    if reports.len() != cfg.claimant_count() {
        return Err(Error::Dimension(format!(
            "{} reports for {} claimants",
            reports.len(),
            cfg.claimant_count()
        )));
    }
    if reports.iter().any(Signed::is_negative) {
        return Err(Error::Domain("reports must be nonnegative".into()));
    }
    Ok(())
}

/// `value(S_i; A_i(θ̂))`: claimant `i` produces with its own resources and pays
/// the tax on every permit it is awarded.
pub fn mechanism_payoff(sit: &LppSituation, cfg: &MechanismConfig, reports: &[Rational], i: usize) -> Result<Rational> {
    check_profile(cfg, reports)?;
    if i >= cfg.claimant_count() {
        return Err(Error::Dimension(format!("claimant {} out of range", i + 1)));
    }
    let award = cfg.allocate(sit.cap(), reports).swap_remove(i);
    sit.coalition_value(cfg.claimants.blocks()[i], &award)
}

/// Memoized `value(S_i; a)` lookups shared by the exhaustive checks.
struct PayoffTable<'a> {
    sit: &'a LppSituation,
    cfg: &'a MechanismConfig,
    values: HashMap<(Coalition, Rational), Rational>,
}

impl<'a> PayoffTable<'a> {
    fn new(sit: &'a LppSituation, cfg: &'a MechanismConfig) -> Self {
        PayoffTable { sit, cfg, values: HashMap::new() }
    }

    fn payoff(&mut self, reports: &[Rational], i: usize) -> Result<Rational> {
        let award = self.cfg.allocate(self.sit.cap(), reports).swap_remove(i);
        let block = self.cfg.claimants.blocks()[i];
        if let Some(v) = self.values.get(&(block, award.clone())) {
            return Ok(v.clone());
        }
        let v = self.sit.coalition_value(block, &award)?;
        self.values.insert((block, award), v.clone());
        Ok(v)
    }
}

/// A report that beats the reference report for one claimant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub claimant: usize,
    /// The profile before the deviation (truthful report in place for
    /// dominance checks).
    pub profile: Vec<Rational>,
    pub report: Rational,
    pub reference_payoff: Rational,
    pub deviation_payoff: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceReport {
    pub is_dominant_truthful: bool,
    /// First profitable deviation in iteration order: claimants ascending,
    /// opponent profiles lexicographic in grid order, deviations in grid order.
    pub counterexample: Option<Deviation>,
    pub comparisons: u64,
}

/// Number of payoff comparisons an exhaustive dominance check performs.
pub fn comparison_count(cfg: &MechanismConfig) -> u64 {
    let k = cfg.claimant_count();
    let lens: Vec<u64> = cfg.grids.iter().map(|g| g.len() as u64).collect();
    (0..k)
        .map(|i| {
            lens.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(lens[i], |acc, (_, &l)| acc.saturating_mul(l))
        })
        .fold(0u64, |acc, c| acc.saturating_add(c))
}

/// Checks that truthful reporting is a dominant strategy on the grids: for
/// every claimant, every opponent profile and every own report, the truthful
/// payoff is at least the deviating payoff. Ties do not count as gains.
pub fn dominance_check(sit: &LppSituation, cfg: &MechanismConfig) -> Result<DominanceReport> {
    let total = comparison_count(cfg);
    if total > cfg.product_limit {
        return Err(Error::SizeLimit(format!(
            "dominance check needs {total} comparisons, limit is {}",
            cfg.product_limit
        )));
    }
    let k = cfg.claimant_count();
    let mut table = PayoffTable::new(sit, cfg);
    let mut comparisons = 0u64;
    for i in 0..k {
        let others: Vec<usize> = (0..k).filter(|&j| j != i).collect();
        let mut odometer = vec![0usize; others.len()];
        loop {
            let mut profile: Vec<Rational> = cfg.true_demands.clone();
            for (slot, &j) in others.iter().enumerate() {
                profile[j] = cfg.grids[j][odometer[slot]].clone();
            }
            let truthful = table.payoff(&profile, i)?;
            for report in &cfg.grids[i] {
                comparisons += 1;
                let mut deviated = profile.clone();
                deviated[i] = report.clone();
                let payoff = table.payoff(&deviated, i)?;
                if payoff > truthful {
                    return Ok(DominanceReport {
                        is_dominant_truthful: false,
                        counterexample: Some(Deviation {
                            claimant: i,
                            profile,
                            report: report.clone(),
                            reference_payoff: truthful,
                            deviation_payoff: payoff,
                        }),
                        comparisons,
                    });
                }
            }
            if !advance(&mut odometer, &others, &cfg.grids) {
                break;
            }
        }
    }
    Ok(DominanceReport { is_dominant_truthful: true, counterexample: None, comparisons })
}

fn advance(odometer: &mut [usize], owners: &[usize], grids: &[Vec<Rational>]) -> bool {
    for slot in (0..odometer.len()).rev() {
        odometer[slot] += 1;
        if odometer[slot] < grids[owners[slot]].len() {
            return true;
        }
        odometer[slot] = 0;
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumReport {
    pub is_equilibrium: bool,
    pub deviation: Option<Deviation>,
}

/// No single claimant gains strictly by switching to another grid report
/// while the others keep theirs.
pub fn equilibrium_check(sit: &LppSituation, cfg: &MechanismConfig, profile: &[Rational]) -> Result<EquilibriumReport> {
    check_profile(cfg, profile)?;
    let mut table = PayoffTable::new(sit, cfg);
    for i in 0..cfg.claimant_count() {
        let current = table.payoff(profile, i)?;
        for report in &cfg.grids[i] {
            let mut deviated = profile.to_vec();
            deviated[i] = report.clone();
            let payoff = table.payoff(&deviated, i)?;
            if payoff > current {
                return Ok(EquilibriumReport {
                    is_equilibrium: false,
                    deviation: Some(Deviation {
                        claimant: i,
                        profile: profile.to_vec(),
                        report: report.clone(),
                        reference_payoff: current,
                        deviation_payoff: payoff,
                    }),
                });
            }
        }
    }
    Ok(EquilibriumReport { is_equilibrium: true, deviation: None })
}
