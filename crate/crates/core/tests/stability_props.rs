mod common;

use num_traits::{Signed, Zero};
use permit_games::game::coalitions_lex;
use permit_games::partition::{partition_shares, Sense as Side};
use permit_games::rational::{int, ratio, sum};
use permit_games::stability::{
    core_nonempty, in_core, owen_allocation, stable_pipeline_for, trade_ledger, Regime,
};
use permit_games::{build_game, Coalition, Error, LppSituation, Partition, Rational, Rule};
use rand::Rng;

fn individual_demands(sit: &LppSituation) -> Vec<Rational> {
    (0..sit.n_firms()).map(|i| sit.optimal_demand(Coalition::singleton(i)).unwrap()).collect()
}

/// Random situation whose cap satisfies `d_N > r` and `d_i + d_j ≥ 2r/n`.
fn equal_awards_situation(rng: &mut impl Rng) -> Option<LppSituation> {
    let sit = common::random_situation(rng, 4, 3, 3);
    let n = sit.n_firms();
    let d = individual_demands(&sit);
    let d_n = sit.optimal_demand(sit.grand_coalition()).unwrap();
    let mut limit = d_n.clone();
    for i in 0..n {
        for j in i + 1..n {
            limit = limit.min((&d[i] + &d[j]) * int(n as i64) / int(2));
        }
    }
    let cap = &limit * ratio(rng.gen_range(1..=10), 10);
    if !cap.is_positive() || cap >= d_n {
        return None;
    }
    Some(sit.with_cap(cap).unwrap())
}

#[test]
fn resource_core_witness_lifts_to_value_core() {
    let mut rng = common::rng(41);
    let (mut minus, mut plus) = (0, 0);
    for _ in 0..200 {
        let sit = common::random_situation(&mut rng, 4, 3, 3);
        if sit.optimal_demand(sit.grand_coalition()).unwrap() <= *sit.cap() {
            continue;
        }
        for rule in Rule::ALL {
            let game = build_game(&sit, rule).unwrap();
            for (side, value_game) in [(Side::Minus, game.pessimistic_game()), (Side::Plus, game.optimistic_game())] {
                let verdict = core_nonempty(&game.resource_game(side)).unwrap();
                let Some(h) = verdict.witness else { continue };
                let owen = owen_allocation(&sit, &h).unwrap();
                assert!(owen.dual[sit.n_resources()] > *sit.tax());
                let m = in_core(&value_game, &owen.money).unwrap();
                assert!(m.is_member(), "{rule} {side:?}: {m:?}");
                match side {
                    Side::Minus => minus += 1,
                    Side::Plus => plus += 1,
                }
            }
        }
    }
    assert!(minus >= 50 && plus > 0, "{minus} {plus}");
}

#[test]
fn owen_allocation_is_efficient_for_any_split() {
    let mut rng = common::rng(42);
    let mut checked = 0;
    for _ in 0..150 {
        let sit = common::random_situation(&mut rng, 4, 3, 3);
        let grand = sit.grand_coalition();
        if sit.optimal_demand(grand).unwrap() <= *sit.cap() {
            continue;
        }
        let weights: Vec<Rational> = (0..sit.n_firms()).map(|_| int(rng.gen_range(0..=5))).collect();
        let total = sum(&weights);
        let h: Vec<Rational> = if total.is_zero() {
            vec![sit.cap() / int(sit.n_firms() as i64); sit.n_firms()]
        } else {
            weights.iter().map(|w| w * sit.cap() / &total).collect()
        };
        let owen = owen_allocation(&sit, &h).unwrap();
        assert_eq!(sum(&owen.money), sit.coalition_value(grand, sit.cap()).unwrap());
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn owen_allocation_refuses_abundant_caps() {
    let sit = common::example_economy().with_cap(int(66)).unwrap();
    let h = common::ints(&[20, 20, 26]);
    assert!(matches!(owen_allocation(&sit, &h), Err(Error::Precondition(_))));
}

#[test]
fn equal_awards_condition_gives_stable_outcomes() {
    let mut rng = common::rng(43);
    let mut instances = 0;
    while instances < 80 {
        let Some(sit) = equal_awards_situation(&mut rng) else { continue };
        instances += 1;
        let game = build_game(&sit, Rule::Cea).unwrap();
        let report = stable_pipeline_for(&game).unwrap();
        assert!(report.equal_awards_condition);
        assert_eq!(report.regime, Regime::Scarce);
        assert!(report.merging_hypothesis_holds(), "{:?}", report.merging_checks);
        assert!(report.permit_membership.as_ref().unwrap().is_member());
        assert!(report.stable());
        let x = &report.money_allocation.as_ref().unwrap().values;
        assert!(in_core(&game.pessimistic_game(), x).unwrap().is_member());
        assert!(core_nonempty(&game.pessimistic_game()).unwrap().nonempty);

        // Weak merging proofness, recomputed from scratch.
        let n = sit.n_firms();
        let d = individual_demands(&sit);
        let h = partition_shares(Rule::Cea, sit.cap(), &d);
        for s in coalitions_lex(n) {
            let p = Partition::with_singletons(s, n);
            let claims: Vec<Rational> = p.blocks().iter().map(|&b| sit.optimal_demand(b).unwrap()).collect();
            let shares = partition_shares(Rule::Cea, sit.cap(), &claims);
            let merged = &shares[p.position(s).unwrap()];
            let separate: Rational = s.members().map(|i| &h[i]).sum();
            assert!(separate >= *merged, "{s}");
        }
    }
}

#[test]
fn merging_hypothesis_puts_claims_allocation_in_resource_core() {
    let mut rng = common::rng(44);
    let mut hits = 0;
    for _ in 0..250 {
        let sit = common::random_situation(&mut rng, 4, 3, 3);
        for rule in Rule::ALL {
            let game = build_game(&sit, rule).unwrap();
            let report = stable_pipeline_for(&game).unwrap();
            if report.regime != Regime::Scarce || !report.merging_hypothesis_holds() {
                continue;
            }
            hits += 1;
            let h = &report.permit_allocation.values;
            let m = in_core(&game.resource_game(Side::Minus), h).unwrap();
            assert!(m.is_member(), "{rule}: {m:?}");
            assert!(report.stable());
        }
    }
    assert!(hits >= 50, "{hits}");
}

#[test]
fn trade_ledgers_reproduce_targets_or_refuse() {
    let mut rng = common::rng(45);
    let (mut built, mut refused) = (0, 0);
    for _ in 0..200 {
        let sit = common::random_situation(&mut rng, 3, 2, 2);
        if sit.optimal_demand(sit.grand_coalition()).unwrap() <= *sit.cap() {
            continue;
        }
        let n = sit.n_firms();
        let d = individual_demands(&sit);
        if sum(&d) < *sit.cap() {
            continue;
        }
        let h = partition_shares(Rule::Cea, sit.cap(), &d);
        let base = owen_allocation(&sit, &h).unwrap().money;
        let mut target = base.clone();
        if n > 1 {
            let amount = ratio(rng.gen_range(-30..=30), rng.gen_range(1..=3));
            target[0] += &amount;
            target[n - 1] -= &amount;
        }
        match trade_ledger(&sit, &h, &target, None) {
            Ok(ledger) => {
                built += 1;
                assert_eq!(ledger.nets(), target);
                assert_eq!(ledger.manager_revenue, sit.tax() * sit.cap());
                let holdings: Rational = ledger.rows.iter().map(|r| &r.holding).sum();
                assert_eq!(&holdings, sit.cap());
                let sold: Rational = ledger.rows.iter().map(|r| &r.sold).sum();
                assert!(sold.is_zero());
                for r in &ledger.rows {
                    assert_eq!(r.net, &r.revenue - &r.tax + &r.trade_cash);
                }
            }
            Err(Error::Infeasible(_)) => refused += 1,
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    assert!(built > 20, "{built} built, {refused} refused");
}
