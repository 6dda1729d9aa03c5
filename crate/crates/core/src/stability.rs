//! Core membership and nonemptiness, the dual-based money allocation built
//! from a stable permit allocation, the end-to-end stable-allocation
//! pipeline, and uniform-price permit trade ledgers.

use num_traits::{One, Signed, Zero};

use crate::bankruptcy::Rule;
use crate::error::{Error, Result};
use crate::game::{coalitions_lex, CharacteristicGame, Coalition};
use crate::lp::{self, LinearProgram, Sense};
use crate::partition::{self, build_game_with_limit, Partition, PartitionFunctionGame, DEFAULT_PARTITION_LIMIT};
use crate::production::LppSituation;
use crate::rational::{sum, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationKind {
    Permits,
    Money,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    pub kind: AllocationKind,
    pub values: Vec<Rational>,
}

impl Allocation {
    pub fn permits(values: Vec<Rational>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| v.is_negative()) {
            return Err(Error::Domain(format!("permit holding of firm {} is negative", i + 1)));
        }
        Ok(Allocation { kind: AllocationKind::Permits, values })
    }

    pub fn money(values: Vec<Rational>) -> Self {
        Allocation { kind: AllocationKind::Money, values }
    }

    pub fn total(&self) -> Rational {
        sum(&self.values)
    }
}

/// Outcome of a core membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// `x(N) ≠ v(N)`.
    Inefficient { total: Rational, required: Rational },
    /// The lexicographically first coalition with `x(S) < v(S)`.
    Blocked { coalition: Coalition, total: Rational, value: Rational },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

fn coalition_total(x: &[Rational], s: Coalition) -> Rational {
    s.members().map(|i| &x[i]).sum()
}

pub fn in_core(game: &CharacteristicGame, x: &[Rational]) -> Result<Membership> {
    let n = game.players();
    if x.len() != n {
        return Err(Error::Dimension(format!("allocation has {} entries for {n} players", x.len())));
    }
    let total = sum(x);
    if &total != game.grand_value() {
        return Ok(Membership::Inefficient { total, required: game.grand_value().clone() });
    }
    for s in coalitions_lex(n) {
        let total = coalition_total(x, s);
        if &total < game.value(s) {
            return Ok(Membership::Blocked { coalition: s, total, value: game.value(s).clone() });
        }
    }
    Ok(Membership::Member)
}

/// Balanced weights `λ_S` over proper coalitions (each player's weights sum
/// to one) with `Σ λ_S v(S) > v(N)`, proving the core empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptinessCertificate {
    pub weights: Vec<(Coalition, Rational)>,
    pub weighted_total: Rational,
    pub grand_value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreVerdict {
    pub nonempty: bool,
    pub witness: Option<Vec<Rational>>,
    pub certificate: Option<EmptinessCertificate>,
}

/// Decides `C(v) ≠ ∅` exactly.
///
/// Solves `min x(N)` subject to `x(S) ≥ v(S)` for every proper coalition.
/// The core is nonempty iff the minimum is at most `v(N)`; the witness is the
/// optimal vertex with any slack `v(N) − min` handed to player 1. When the
/// core is empty the LP dual is a balanced collection certifying it. The
/// witness is deterministic but not canonical.
pub fn core_nonempty(game: &CharacteristicGame) -> Result<CoreVerdict> {
    let n = game.players();
    if n == 1 {
        return Ok(CoreVerdict {
            nonempty: true,
            witness: Some(vec![game.grand_value().clone()]),
            certificate: None,
        });
    }
    let grand = Coalition::grand(n);
    let proper: Vec<Coalition> = coalitions_lex(n).into_iter().filter(|&s| s != grand).collect();
    let mut lp = LinearProgram::maximize(vec![-Rational::one(); n]);
    for &s in &proper {
        let row = (0..n)
            .map(|i| if s.contains(i) { Rational::one() } else { Rational::zero() })
            .collect();
        lp.add_row(row, Sense::Ge, game.value(s).clone());
    }
    for i in 0..n {
        lp.set_free(i);
    }
    let sol = lp::solve(&lp)?;
    debug_assert!(sol.is_optimal(), "singleton rows bound x(N) from below");
    let minimum = -sol.objective_value.clone();
    let v_n = game.grand_value().clone();
    if minimum <= v_n {
        let mut witness = sol.primal;
        witness[0] += &v_n - &minimum;
        debug_assert!(in_core(game, &witness).unwrap().is_member());
        Ok(CoreVerdict { nonempty: true, witness: Some(witness), certificate: None })
    } else {
        let weights = proper
            .iter()
            .zip(&sol.dual)
            .filter(|(_, y)| !y.is_zero())
            .map(|(&s, y)| (s, -y.clone()))
            .collect();
        Ok(CoreVerdict {
            nonempty: false,
            witness: None,
            certificate: Some(EmptinessCertificate { weights, weighted_total: minimum, grand_value: v_n }),
        })
    }
}

/// Money allocation `x_i = Σ_t b^i_t y*_t + h_i (y*_{q+1} − c)` built from an
/// optimal dual `y*` of the grand coalition's program with the whole cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwenAllocation {
    pub money: Vec<Rational>,
    /// Resource prices followed by the permit price.
    pub dual: Vec<Rational>,
}

/// The result is *a* core element of the pessimistic game whenever `h` is in
/// the core of the pessimistic permit game; it depends on which optimal dual
/// the solver lands on when the dual is degenerate.
pub fn owen_allocation(sit: &LppSituation, h: &[Rational]) -> Result<OwenAllocation> {
    let n = sit.n_firms();
    let q = sit.n_resources();
    if h.len() != n {
        return Err(Error::Dimension(format!("permit allocation has {} entries for {n} firms", h.len())));
    }
    if h.iter().any(|v| v.is_negative()) {
        return Err(Error::Domain("permit allocation has a negative entry".into()));
    }
    if &sum(h) != sit.cap() {
        return Err(Error::Precondition(format!(
            "permit allocation totals {} but the cap is {}",
            sum(h),
            sit.cap()
        )));
    }
    let grand = sit.grand_coalition();
    let d_n = sit.optimal_demand(grand)?;
    if &d_n <= sit.cap() {
        return Err(Error::Precondition(format!(
            "grand coalition demand {d_n} does not exceed the cap {}",
            sit.cap()
        )));
    }
    let sol = sit.production_plan(grand, sit.cap())?;
    let y = sol.dual;
    let margin = &y[q] - sit.tax();
    if !margin.is_positive() {
        return Err(Error::Precondition(format!(
            "permit shadow price {} does not exceed the tax {}",
            y[q],
            sit.tax()
        )));
    }
    let money = (0..n)
        .map(|i| {
            let resources: Rational = (0..q).map(|t| &sit.endowments()[t][i] * &y[t]).sum();
            resources + &h[i] * &margin
        })
        .collect();
    Ok(OwenAllocation { money, dual: y })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `d_N ≤ r`: the cap does not bind the grand coalition.
    Abundant,
    /// `d_N > r > Σ d_i`: individual claims fit under the cap.
    ClaimsFit,
    /// `d_N > r` and `Σ d_i ≥ r`.
    Scarce,
}

/// One coalition's line of the merging inequality
/// `Σ_{i∈S} f_i(N, r, d) ≥ f(S | {S} ∪ singletons)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergingCheck {
    pub coalition: Coalition,
    pub separate: Rational,
    pub merged: Rational,
}

impl MergingCheck {
    pub fn holds(&self) -> bool {
        self.separate >= self.merged
    }
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub rule: Rule,
    pub individual_demands: Vec<Rational>,
    pub grand_demand: Rational,
    pub cap: Rational,
    pub regime: Regime,
    /// `f(N, r, (d_i))`, or the demands themselves when they fit.
    pub permit_allocation: Allocation,
    pub resource_game: CharacteristicGame,
    pub pessimistic_game: CharacteristicGame,
    /// Membership of the permit allocation in `C(R_f^-)` (scarce regime only).
    pub permit_membership: Option<Membership>,
    pub money_allocation: Option<Allocation>,
    pub dual: Option<Vec<Rational>>,
    /// Membership of the money allocation in `C(v_f^-)`.
    pub money_membership: Option<Membership>,
    /// CEA with `d_N > r` and `d_i + d_j ≥ 2r/n` for all distinct pairs.
    pub equal_awards_condition: bool,
    /// Per-coalition merging inequality, in lexicographic coalition order.
    pub merging_checks: Vec<MergingCheck>,
}

impl PipelineReport {
    pub fn merging_hypothesis_holds(&self) -> bool {
        self.merging_checks.iter().all(MergingCheck::holds)
    }

    /// True when a money allocation was produced and verified in the
    /// pessimistic core.
    pub fn stable(&self) -> bool {
        self.money_membership.as_ref().is_some_and(Membership::is_member)
    }
}

pub fn stable_pipeline(sit: &LppSituation, rule: Rule) -> Result<PipelineReport> {
    let game = build_game_with_limit(sit, rule, DEFAULT_PARTITION_LIMIT)?;
    stable_pipeline_for(&game)
}

/// Pipeline over an already built game.
pub fn stable_pipeline_for(game: &PartitionFunctionGame) -> Result<PipelineReport> {
    let sit = game.situation();
    let rule = game.rule();
    let n = sit.n_firms();
    let cap = sit.cap().clone();
    let individual: Vec<Rational> = (0..n).map(|i| game.demand(Coalition::singleton(i)).clone()).collect();
    let grand_demand = game.demand(sit.grand_coalition()).clone();
    let total_individual = sum(&individual);
    let regime = if grand_demand <= cap {
        Regime::Abundant
    } else if total_individual < cap {
        Regime::ClaimsFit
    } else {
        Regime::Scarce
    };
    let h = partition::partition_shares(rule, &cap, &individual);
    let resource_game = game.resource_game(partition::Sense::Minus);
    let pessimistic_game = game.pessimistic_game();

    let two_r_over_n = Rational::from_integer(2.into()) * &cap / Rational::from_integer((n as i64).into());
    let pairs_ok = (0..n).all(|i| (i + 1..n).all(|j| &individual[i] + &individual[j] >= two_r_over_n));
    let equal_awards_condition = rule == Rule::Cea && grand_demand > cap && pairs_ok;

    let merging_checks = coalitions_lex(n)
        .into_iter()
        .map(|s| {
            let separate = s.members().map(|i| &h[i]).sum();
            let p = Partition::with_singletons(s, n);
            let merged = game.share(s, &p).expect("S is a block of its own partition").clone();
            MergingCheck { coalition: s, separate, merged }
        })
        .collect();

    let mut report = PipelineReport {
        rule,
        individual_demands: individual,
        grand_demand,
        cap,
        regime,
        permit_allocation: Allocation::permits(h.clone())?,
        resource_game,
        pessimistic_game,
        permit_membership: None,
        money_allocation: None,
        dual: None,
        money_membership: None,
        equal_awards_condition,
        merging_checks,
    };
    if regime != Regime::Scarce {
        return Ok(report);
    }
    let membership = in_core(&report.resource_game, &h)?;
    let admitted = membership.is_member();
    report.permit_membership = Some(membership);
    if admitted {
        let owen = owen_allocation(sit, &h)?;
        report.money_membership = Some(in_core(&report.pessimistic_game, &owen.money)?);
        report.money_allocation = Some(Allocation::money(owen.money));
        report.dual = Some(owen.dual);
    }
    Ok(report)
}

/// One firm's accounts after trading permits at a uniform price.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerRow {
    pub initial: Rational,
    pub holding: Rational,
    /// Gross revenue from producing with `holding` permits.
    pub revenue: Rational,
    /// `c · initial`, paid to the permit authority.
    pub tax: Rational,
    /// Permits sold (negative when bought).
    pub sold: Rational,
    /// `price · sold`.
    pub trade_cash: Rational,
    pub net: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeLedger {
    /// `None` when no permits change hands.
    pub price: Option<Rational>,
    /// Marginal value of permits to the grand coalition at the cap, when unique.
    pub shadow_price: Option<Rational>,
    pub rows: Vec<LedgerRow>,
    /// `c · r`.
    pub manager_revenue: Rational,
}

impl TradeLedger {
    /// Rows of firms that actually trade, with their firm index.
    pub fn trades(&self) -> impl Iterator<Item = (usize, &LedgerRow)> {
        self.rows.iter().enumerate().filter(|(_, r)| !r.sold.is_zero())
    }

    pub fn nets(&self) -> Vec<Rational> {
        self.rows.iter().map(|r| r.net.clone()).collect()
    }
}

/// Range of each firm's permit holding over production-efficient
/// redistributions of the cap.
fn efficient_holding_bounds(sit: &LppSituation, total_revenue: &Rational) -> Result<Vec<(Rational, Rational)>> {
    let n = sit.n_firms();
    let g = sit.n_goods();
    let q = sit.n_resources();
    let vars = n * g + n;
    let k = |i: usize| n * g + i;
    let mut base = LinearProgram::maximize(vec![Rational::zero(); vars]);
    for i in 0..n {
        for t in 0..q {
            let mut row = vec![Rational::zero(); vars];
            row[i * g..(i + 1) * g].clone_from_slice(&sit.technology()[t]);
            base.add_row(row, Sense::Le, sit.endowments()[t][i].clone());
        }
        let mut row = vec![Rational::zero(); vars];
        row[i * g..(i + 1) * g].clone_from_slice(sit.permit_row());
        row[k(i)] = -Rational::one();
        base.add_row(row, Sense::Le, Rational::zero());
    }
    let mut holdings = vec![Rational::zero(); vars];
    let mut revenue = vec![Rational::zero(); vars];
    for i in 0..n {
        holdings[k(i)] = Rational::one();
        revenue[i * g..(i + 1) * g].clone_from_slice(sit.prices());
    }
    base.add_row(holdings, Sense::Eq, sit.cap().clone());
    base.add_row(revenue, Sense::Ge, total_revenue.clone());

    let mut bounds = Vec::with_capacity(n);
    for i in 0..n {
        let mut lo = base.clone();
        lo.objective[k(i)] = -Rational::one();
        let mut hi = base.clone();
        hi.objective[k(i)] = Rational::one();
        let lo = lp::solve(&lo)?;
        let hi = lp::solve(&hi)?;
        if !lo.is_optimal() || !hi.is_optimal() {
            return Err(Error::Infeasible("no production-efficient redistribution of the cap".into()));
        }
        bounds.push((lo.primal[k(i)].clone(), hi.primal[k(i)].clone()));
    }
    Ok(bounds)
}

/// Efficient holdings closest to `h` in total absolute deviation.
fn nearest_holdings(h: &[Rational], bounds: &[(Rational, Rational)], cap: &Rational) -> Result<Vec<Rational>> {
    let n = h.len();
    let mut objective = vec![Rational::zero(); n];
    objective.extend(vec![-Rational::one(); n]);
    let mut lp = LinearProgram::maximize(objective);
    for i in 0..n {
        let mut above = vec![Rational::zero(); 2 * n];
        above[n + i] = Rational::one();
        above[i] = -Rational::one();
        lp.add_row(above, Sense::Ge, -h[i].clone());
        let mut below = vec![Rational::zero(); 2 * n];
        below[n + i] = Rational::one();
        below[i] = Rational::one();
        lp.add_row(below, Sense::Ge, h[i].clone());
        lp.set_bounds(i, Some(bounds[i].0.clone()), Some(bounds[i].1.clone()));
    }
    let mut total = vec![Rational::one(); n];
    total.extend(vec![Rational::zero(); n]);
    lp.add_row(total, Sense::Eq, cap.clone());
    let sol = lp::solve(&lp)?;
    if !sol.is_optimal() {
        return Err(Error::Infeasible("no efficient permit holdings".into()));
    }
    Ok(sol.primal[..n].to_vec())
}

/// Accounting that turns the permit allocation `h` into the money allocation
/// `target` through trading at one uniform price.
///
/// Final holdings are always production efficient (the firms jointly earn the
/// grand coalition's revenue). With `price` given, holdings are solved for that
/// price. Without it the price is chosen among all that work as the one
/// closest to the grand coalition's permit shadow price. A target that no
/// single price reproduces is reported as [`Error::Infeasible`].
pub fn trade_ledger(
    sit: &LppSituation,
    h: &[Rational],
    target: &[Rational],
    price: Option<&Rational>,
) -> Result<TradeLedger> {
    let n = sit.n_firms();
    let c = sit.tax();
    let cap = sit.cap();
    if h.len() != n || target.len() != n {
        return Err(Error::Dimension(format!(
            "{n} firms but {} permit entries and {} target entries",
            h.len(),
            target.len()
        )));
    }
    if h.iter().any(|v| v.is_negative()) {
        return Err(Error::Domain("permit allocation has a negative entry".into()));
    }
    if &sum(h) != cap {
        return Err(Error::Precondition(format!("permit allocation totals {} but the cap is {cap}", sum(h))));
    }
    let grand = sit.grand_coalition();
    let total_revenue = sit.revenue(grand, cap)?;
    let attainable = &total_revenue - c * cap;
    if sum(target) != attainable {
        return Err(Error::Infeasible(format!(
            "target totals {} but trading can only redistribute {attainable}",
            sum(target)
        )));
    }

    let bounds = efficient_holding_bounds(sit, &total_revenue)?;
    let revenue_at = |i: usize, z: &Rational| sit.revenue(Coalition::singleton(i), z);
    let mut shadow = None;
    for (i, (a, b)) in bounds.iter().enumerate() {
        if a < b {
            shadow = Some((revenue_at(i, b)? - revenue_at(i, a)?) / (b - a));
            break;
        }
    }

    let (holdings, chosen_price) = match &shadow {
        None => {
            // A single efficient redistribution; only the price can move.
            let k: Vec<Rational> = bounds.iter().map(|(a, _)| a.clone()).collect();
            let mut found: Option<Rational> = price.cloned();
            for i in 0..n {
                if h[i] != k[i] && found.is_none() {
                    let cash = &target[i] - revenue_at(i, &k[i])? + c * &h[i];
                    found = Some(cash / (&h[i] - &k[i]));
                }
            }
            let moved = h.iter().zip(&k).any(|(a, b)| a != b);
            (k, if moved { found } else { None })
        }
        Some(lambda) => {
            let mut slack = Vec::with_capacity(n);
            for i in 0..n {
                let base = revenue_at(i, &bounds[i].0)? - lambda * &bounds[i].0;
                slack.push(&target[i] - base - (lambda - c) * &h[i]);
            }
            let fixed_point = slack.iter().all(Zero::is_zero);
            let explicit_delta = price.map(|p| lambda - p);
            match explicit_delta {
                Some(delta) if delta.is_zero() => {
                    if !fixed_point {
                        return Err(Error::Infeasible(format!(
                            "at the shadow price {lambda} trading cannot move money between firms"
                        )));
                    }
                    let k = nearest_holdings(h, &bounds, cap)?;
                    (k, price.cloned())
                }
                Some(delta) => {
                    let k: Vec<Rational> = h.iter().zip(&slack).map(|(hi, s)| hi + s / &delta).collect();
                    (k, price.cloned())
                }
                None if fixed_point => {
                    let k = nearest_holdings(h, &bounds, cap)?;
                    let moved = h.iter().zip(&k).any(|(a, b)| a != b);
                    (k, if moved { Some(lambda.clone()) } else { None })
                }
                None => {
                    // holdings h + τ s; each firm's efficient range bounds τ
                    let mut lo: Option<Rational> = None;
                    let mut hi: Option<Rational> = None;
                    for i in 0..n {
                        let (a, b) = &bounds[i];
                        if slack[i].is_zero() {
                            if &h[i] < a || &h[i] > b {
                                return Err(Error::Infeasible(format!(
                                    "firm {} cannot keep its permits and stay efficient",
                                    i + 1
                                )));
                            }
                            continue;
                        }
                        let t1 = (a - &h[i]) / &slack[i];
                        let t2 = (b - &h[i]) / &slack[i];
                        let (l, u) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
                        lo = Some(match lo {
                            Some(x) if x > l => x,
                            _ => l,
                        });
                        hi = Some(match hi {
                            Some(x) if x < u => x,
                            _ => u,
                        });
                    }
                    let (lo, hi) = (lo.unwrap(), hi.unwrap());
                    if lo > hi {
                        return Err(Error::Infeasible(
                            "no uniform permit price reproduces the target".into(),
                        ));
                    }
                    let tau = if hi.abs() >= lo.abs() { hi } else { lo };
                    if tau.is_zero() {
                        return Err(Error::Infeasible(
                            "no uniform permit price reproduces the target".into(),
                        ));
                    }
                    let k = h.iter().zip(&slack).map(|(hi, s)| hi + s * &tau).collect();
                    (k, Some(lambda - tau.recip()))
                }
            }
        }
    };

    let traded = h.iter().zip(&holdings).any(|(a, b)| a != b);
    if traded && chosen_price.is_none() {
        return Err(Error::Infeasible("permits must move but no price was determined".into()));
    }
    let zero = Rational::zero();
    let unit_price = chosen_price.clone().unwrap_or_else(Rational::zero);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let k = &holdings[i];
        if k.is_negative() || k < &bounds[i].0 || k > &bounds[i].1 {
            return Err(Error::Infeasible(format!(
                "firm {} would need an inefficient holding of {k} permits",
                i + 1
            )));
        }
        let revenue = revenue_at(i, k)?;
        let tax = c * &h[i];
        let sold = &h[i] - k;
        let trade_cash = if sold.is_zero() { zero.clone() } else { &unit_price * &sold };
        let net = &revenue - &tax + &trade_cash;
        if net != target[i] {
            return Err(Error::Infeasible(format!(
                "firm {} would net {net} instead of {} at this price",
                i + 1,
                target[i]
            )));
        }
        rows.push(LedgerRow { initial: h[i].clone(), holding: k.clone(), revenue, tax, sold, trade_cash, net });
    }
    Ok(TradeLedger {
        price: if traded { chosen_price } else { None },
        shadow_price: shadow,
        rows,
        manager_revenue: c * cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::build_game;
    use crate::production::fixtures::example_economy;
    use crate::rational::{int, ratio};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn pessimistic_core_members() {
        let g = build_game(&example_economy(), Rule::Cea).unwrap();
        let lo = g.pessimistic_game();
        assert!(in_core(&lo, &ints(&[700, 800, 800])).unwrap().is_member());
        let third = vec![ratio(50, 3); 3];
        assert!(in_core(&g.resource_game(partition::Sense::Minus), &third).unwrap().is_member());
    }

    #[test]
    fn membership_failures() {
        let g = build_game(&example_economy(), Rule::Cea).unwrap();
        let hi = g.optimistic_game();
        let singles = ints(&[720, 920, 1150]);
        assert_eq!(
            in_core(&hi, &singles).unwrap(),
            Membership::Inefficient { total: int(2790), required: int(2300) }
        );
        let blocked = in_core(&hi, &ints(&[700, 450, 1150])).unwrap();
        assert_eq!(
            blocked,
            Membership::Blocked { coalition: Coalition::singleton(0), total: int(700), value: int(720) }
        );
        assert!(matches!(in_core(&hi, &ints(&[1, 2])), Err(Error::Dimension(_))));
    }

    #[test]
    fn emptiness_decisions() {
        let g = build_game(&example_economy(), Rule::Cea).unwrap();
        let hi = core_nonempty(&g.optimistic_game()).unwrap();
        assert!(!hi.nonempty);
        let cert = hi.certificate.unwrap();
        assert_eq!(cert.weighted_total, int(2790));
        assert_eq!(
            cert.weights,
            (0..3).map(|i| (Coalition::singleton(i), int(1))).collect::<Vec<_>>()
        );

        let lo = core_nonempty(&g.pessimistic_game()).unwrap();
        assert!(lo.nonempty);
        assert!(in_core(&g.pessimistic_game(), &lo.witness.unwrap()).unwrap().is_member());

        let prop = build_game(&example_economy(), Rule::Prop).unwrap();
        assert!(!core_nonempty(&prop.resource_game(partition::Sense::Minus)).unwrap().nonempty);
        assert!(!core_nonempty(&prop.pessimistic_game()).unwrap().nonempty);
    }

    #[test]
    fn additive_and_single_player_games() {
        let w = ints(&[3, -1, 4]);
        let verdict = core_nonempty(&CharacteristicGame::additive(&w)).unwrap();
        assert_eq!(verdict.witness.unwrap(), w);
        let one = core_nonempty(&CharacteristicGame::additive(&[int(9)])).unwrap();
        assert_eq!(one.witness.unwrap(), ints(&[9]));
    }

    #[test]
    fn owen_allocation_of_the_example() {
        let sit = example_economy();
        let owen = owen_allocation(&sit, &[ratio(50, 3), ratio(50, 3), ratio(50, 3)]).unwrap();
        assert_eq!(owen.dual, ints(&[0, 0, 60]));
        assert_eq!(owen.money, vec![ratio(2300, 3); 3]);
        let other = owen_allocation(&sit, &ints(&[20, 15, 15])).unwrap();
        assert_eq!(sum(&other.money), int(2300));
    }

    #[test]
    fn owen_requires_a_binding_cap() {
        let sit = example_economy().with_cap(int(70)).unwrap();
        assert!(matches!(
            owen_allocation(&sit, &ints(&[20, 20, 30])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            owen_allocation(&example_economy(), &ints(&[20, 20, 20])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn single_firm_owen_is_the_grand_value() {
        let sit = LppSituation::new(
            vec![vec![int(1), int(2)], vec![int(1), int(1)]],
            vec![vec![int(10)]],
            vec![int(5), int(7)],
            int(1),
            int(4),
        )
        .unwrap();
        let owen = owen_allocation(&sit, &ints(&[4])).unwrap();
        let grand = sit.coalition_value(sit.grand_coalition(), &int(4)).unwrap();
        assert_eq!(owen.money, vec![grand]);
    }

    #[test]
    fn pipeline_on_the_example() {
        let cea = stable_pipeline(&example_economy(), Rule::Cea).unwrap();
        assert_eq!(cea.regime, Regime::Scarce);
        assert_eq!(cea.permit_allocation.values, vec![ratio(50, 3); 3]);
        assert!(cea.permit_membership.as_ref().unwrap().is_member());
        assert_eq!(cea.money_allocation.as_ref().unwrap().values, vec![ratio(2300, 3); 3]);
        assert!(cea.stable());
        assert!(cea.equal_awards_condition);
        assert!(cea.merging_hypothesis_holds());

        let prop = stable_pipeline(&example_economy(), Rule::Prop).unwrap();
        assert_eq!(
            prop.permit_allocation.values,
            vec![ratio(200, 13), ratio(200, 13), ratio(250, 13)]
        );
        assert!(!prop.permit_membership.as_ref().unwrap().is_member());
        assert!(prop.money_allocation.is_none());
        assert!(!prop.stable());

        let loose = stable_pipeline(&example_economy().with_cap(int(80)).unwrap(), Rule::Cea).unwrap();
        assert_eq!(loose.regime, Regime::Abundant);
        assert_eq!(loose.permit_allocation.values, ints(&[20, 20, 25]));
        assert!(loose.money_allocation.is_none());
    }

    #[test]
    fn trade_ledger_reaches_the_split_target() {
        let sit = example_economy();
        let h = vec![ratio(50, 3); 3];
        let ledger = trade_ledger(&sit, &h, &ints(&[700, 800, 800]), None).unwrap();
        assert_eq!(ledger.price, Some(int(50)));
        assert_eq!(ledger.manager_revenue, int(700));
        assert_eq!(ledger.rows[0].holding, int(10));
        assert_eq!(ledger.rows[0].revenue, int(600));
        assert_eq!(ledger.rows[0].sold, ratio(20, 3));
        assert_eq!(ledger.rows[1].holding, int(20));
        assert_eq!(ledger.rows[1].revenue, int(1200));
        assert_eq!(ledger.rows[1].sold, ratio(-10, 3));
        assert_eq!(ledger.nets(), ints(&[700, 800, 800]));

        let fixed = trade_ledger(&sit, &h, &ints(&[700, 800, 800]), Some(&int(40))).unwrap();
        assert_eq!(fixed.rows[0].holding, ratio(40, 3));
        assert_eq!(fixed.nets(), ints(&[700, 800, 800]));
        assert!(matches!(
            trade_ledger(&sit, &h, &ints(&[700, 800, 800]), Some(&int(30))),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn autarky_target_needs_no_trade() {
        let sit = example_economy();
        let h = ints(&[10, 20, 20]);
        let target: Vec<Rational> = (0..3)
            .map(|i| sit.coalition_value(Coalition::singleton(i), &h[i]).unwrap())
            .collect();
        let ledger = trade_ledger(&sit, &h, &target, None).unwrap();
        assert_eq!(ledger.trades().count(), 0);
        assert_eq!(ledger.price, None);
    }

    #[test]
    fn ledger_rejects_inefficient_targets() {
        let sit = example_economy();
        let h = vec![ratio(50, 3); 3];
        assert!(matches!(
            trade_ledger(&sit, &h, &ints(&[700, 800, 700]), None),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            trade_ledger(&sit, &ints(&[10, 10, 10]), &ints(&[700, 800, 800]), None),
            Err(Error::Precondition(_))
        ));
    }
}
