//! Shared generators and reference data for the integration suites.
#![allow(dead_code)]

use permit_games::rational::{int, ratio};
use permit_games::{LppSituation, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

/// A small positive rational with denominator 1, 2 or 3.
pub fn small_rational(rng: &mut impl Rng, lo: i64, hi: i64) -> Rational {
    let den = rng.gen_range(1..=3);
    ratio(rng.gen_range(lo * den..=hi * den), den)
}

pub fn example_economy() -> LppSituation {
    LppSituation::new(
        vec![ints(&[2, 3]), ints(&[3, 2]), ints(&[1, 1])],
        vec![ints(&[40, 60, 80]), ints(&[60, 40, 50])],
        ints(&[50, 60]),
        int(14),
        int(50),
    )
    .unwrap()
}

/// Random valid situation with up to `max_n` firms, `max_q` resources and
/// `max_g` goods. The cap is drawn relative to the grand coalition demand so
/// that the scarce, fitting and abundant regimes all occur.
pub fn random_situation(rng: &mut impl Rng, max_n: usize, max_q: usize, max_g: usize) -> LppSituation {
    let n = rng.gen_range(1..=max_n);
    let q = rng.gen_range(1..=max_q);
    let g = rng.gen_range(1..=max_g);
    let full_row = rng.gen_range(0..q);
    let mut technology: Vec<Vec<Rational>> = (0..q)
        .map(|t| {
            (0..g)
                .map(|_| {
                    if t == full_row || rng.gen_bool(0.7) {
                        small_rational(rng, 1, 4)
                    } else {
                        int(0)
                    }
                })
                .collect()
        })
        .collect();
    technology.push((0..g).map(|_| small_rational(rng, 1, 3)).collect());
    let endowments: Vec<Vec<Rational>> = (0..q)
        .map(|_| {
            let mut row: Vec<Rational> = (0..n)
                .map(|_| if rng.gen_bool(0.85) { int(rng.gen_range(0..=60)) } else { int(0) })
                .collect();
            let k = rng.gen_range(0..n);
            if row.iter().all(|b| *b == int(0)) {
                row[k] = int(rng.gen_range(1..=60));
            }
            row
        })
        .collect();
    let tax = small_rational(rng, 1, 10);
    let prices: Vec<Rational> = technology[q]
        .iter()
        .map(|a| a * &tax + small_rational(rng, 1, 40))
        .collect();
    let probe = LppSituation::new(technology, endowments, prices, tax, int(1)).unwrap();
    let d_n = probe.optimal_demand(probe.grand_coalition()).unwrap();
    let cap = if d_n == int(0) {
        int(rng.gen_range(1..=10))
    } else {
        let scale = ratio(rng.gen_range(2..=12), 10);
        let cap = d_n * scale;
        if cap == int(0) { int(1) } else { cap }
    };
    probe.with_cap(cap).unwrap()
}

pub mod oracle;
