mod common;

use common::oracle::{cea_by_scan, cel_by_scan};
use num_traits::{Signed, Zero};
use permit_games::rational::{int, ratio, sum};
use permit_games::{apply_rule, bankruptcy_game, BankruptcyProblem, Rational, Rule};
use proptest::prelude::*;

fn problem() -> impl Strategy<Value = BankruptcyProblem> {
    (prop::collection::vec((0i64..=40, 1i64..=4), 1..=6), 0i64..=100).prop_map(|(raw, pct)| {
        let claims: Vec<Rational> = raw.into_iter().map(|(n, d)| ratio(n, d)).collect();
        let estate = sum(&claims) * ratio(pct, 100);
        BankruptcyProblem::new(estate, claims).unwrap()
    })
}

/// Problems where some claims repeat, so equal treatment is exercised.
fn problem_with_ties() -> impl Strategy<Value = BankruptcyProblem> {
    (prop::collection::vec(prop::sample::select(vec![0i64, 5, 5, 12, 12, 30]), 2..=6), 0i64..=100).prop_map(
        |(raw, pct)| {
            let claims: Vec<Rational> = raw.into_iter().map(int).collect();
            let estate = sum(&claims) * ratio(pct, 100);
            BankruptcyProblem::new(estate, claims).unwrap()
        },
    )
}

fn check_axioms(prob: &BankruptcyProblem) -> Result<(), TestCaseError> {
    let d = prob.claims();
    for rule in Rule::ALL {
        let a = apply_rule(rule, prob);
        prop_assert_eq!(&sum(&a), prob.estate(), "{} efficiency", rule);
        for i in 0..d.len() {
            prop_assert!(!a[i].is_negative() && a[i] <= d[i], "{} bounds", rule);
            for j in 0..d.len() {
                if d[i] == d[j] {
                    prop_assert_eq!(&a[i], &a[j], "{} equal treatment", rule);
                }
                if d[i] <= d[j] {
                    prop_assert!(a[i] <= a[j], "{} awards order", rule);
                    prop_assert!(&d[i] - &a[i] <= &d[j] - &a[j], "{} losses order", rule);
                }
            }
        }
        let v = bankruptcy_game(prob);
        for s in v.coalitions() {
            let x: Rational = s.members().map(|i| &a[i]).sum();
            prop_assert!(&x >= v.value(s), "{} allocation blocked by {}", rule, s);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn axioms_hold(prob in problem()) {
        check_axioms(&prob)?;
    }

    #[test]
    fn axioms_hold_with_tied_claims(prob in problem_with_ties()) {
        check_axioms(&prob)?;
    }

    #[test]
    fn cea_and_cel_match_breakpoint_scans(prob in problem()) {
        prop_assert_eq!(apply_rule(Rule::Cea, &prob), cea_by_scan(prob.estate(), prob.claims()));
        prop_assert_eq!(apply_rule(Rule::Cel, &prob), cel_by_scan(prob.estate(), prob.claims()));
    }

    #[test]
    fn merging_cea_never_helps_and_prop_is_neutral(prob in problem(), k in 0usize..6, j in 0usize..6) {
        let n = prob.len();
        prop_assume!(n >= 2);
        let (k, j) = (k % n, j % n);
        prop_assume!(k != j);
        let merged = prob.merge(k, j);
        let at = k.min(j);
        let cea = apply_rule(Rule::Cea, &prob);
        prop_assert!(apply_rule(Rule::Cea, &merged)[at] <= &cea[k] + &cea[j]);
        let prop = apply_rule(Rule::Prop, &prob);
        prop_assert_eq!(&apply_rule(Rule::Prop, &merged)[at], &(&prop[k] + &prop[j]));
    }

    #[test]
    fn talmud_is_continuous_at_half_claims(claims in prop::collection::vec(0i64..=50, 1..=6)) {
        let claims: Vec<Rational> = claims.into_iter().map(int).collect();
        let half = sum(&claims) / int(2);
        let halves: Vec<Rational> = claims.iter().map(|d| d / int(2)).collect();
        let tal = apply_rule(Rule::Tal, &BankruptcyProblem::new(half.clone(), claims.clone()).unwrap());
        prop_assert_eq!(&tal, &halves);
        prop_assert_eq!(tal, cea_by_scan(&half, &halves));
    }

    #[test]
    fn prop_scales_claims(prob in problem()) {
        let total = sum(prob.claims());
        let a = apply_rule(Rule::Prop, &prob);
        for (x, d) in a.iter().zip(prob.claims()) {
            prop_assert_eq!(x * &total, d * prob.estate());
        }
    }
}

#[test]
fn worked_cel_and_talmud_against_scans() {
    let d = common::ints(&[20, 20, 25]);
    let e = int(50);
    assert_eq!(cel_by_scan(&e, &d), common::ints(&[15, 15, 20]));
    // E > Σd/2 = 65/2: half-claims plus CEL of the remainder over the half-claims.
    let halves: Vec<Rational> = d.iter().map(|x| x / int(2)).collect();
    let rest = &e - sum(&halves);
    let tal: Vec<Rational> = cel_by_scan(&rest, &halves).iter().zip(&halves).map(|(a, h)| a + h).collect();
    assert_eq!(tal, common::ints(&[15, 15, 20]));
    let prob = BankruptcyProblem::new(e, d).unwrap();
    assert_eq!(apply_rule(Rule::Tal, &prob), tal);
}

#[test]
fn zero_claims_zero_estate() {
    let prob = BankruptcyProblem::new(int(0), vec![int(0); 4]).unwrap();
    for rule in Rule::ALL {
        assert!(apply_rule(rule, &prob).iter().all(Zero::is_zero));
    }
}
