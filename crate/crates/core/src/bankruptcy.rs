//! Bankruptcy (rationing) problems, the CEA, CEL, PROP and Talmud division
//! rules, and the associated bankruptcy game.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::game::CharacteristicGame;
use crate::rational::{sum, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Constrained equal awards.
    Cea,
    /// Constrained equal losses.
    Cel,
    /// Proportional.
    Prop,
    /// Talmud.
    Tal,
}

impl Rule {
    pub const ALL: [Rule; 4] = [Rule::Cea, Rule::Cel, Rule::Prop, Rule::Tal];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Cea => "CEA",
            Rule::Cel => "CEL",
            Rule::Prop => "PROP",
            Rule::Tal => "TAL",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cea" => Ok(Rule::Cea),
            "cel" => Ok(Rule::Cel),
            "prop" => Ok(Rule::Prop),
            "tal" | "talmud" => Ok(Rule::Tal),
            _ => Err(Error::Parse(format!("unknown rule `{s}` (expected cea, cel, prop or tal)"))),
        }
    }
}

/// `(N, E, d)` with `Σ d ≥ E`. Claimants are positions in `claims`; callers
/// keep the mapping to firms or coalition blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BankruptcyProblem {
    estate: Rational,
    claims: Vec<Rational>,
}

impl BankruptcyProblem {
    pub fn new(estate: Rational, claims: Vec<Rational>) -> Result<Self> {
        if estate.is_negative() {
            return Err(Error::Bankruptcy(format!("estate {estate} is negative")));
        }
        if let Some(i) = claims.iter().position(|d| d.is_negative()) {
            return Err(Error::Bankruptcy(format!("claim {} is negative", i + 1)));
        }
        let total = sum(&claims);
        if total < estate {
            return Err(Error::Bankruptcy(format!(
                "claims total {total} is below the estate {estate}"
            )));
        }
        Ok(BankruptcyProblem { estate, claims })
    }

    pub fn estate(&self) -> &Rational {
        &self.estate
    }

    pub fn claims(&self) -> &[Rational] {
        &self.claims
    }

    pub fn len(&self) -> usize {
        self.claims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.claims.is_empty()
    }

    /// Merges claimants `k` and `j` into one claimant (placed at `min(k, j)`)
    /// whose claim is `d_k + d_j`.
    pub fn merge(&self, k: usize, j: usize) -> BankruptcyProblem {
        let (lo, hi) = if k < j { (k, j) } else { (j, k) };
        let mut claims = self.claims.clone();
        let merged = &claims[lo] + &claims[hi];
        claims[lo] = merged;
        claims.remove(hi);
        BankruptcyProblem { estate: self.estate.clone(), claims }
    }
}

pub fn apply_rule(rule: Rule, prob: &BankruptcyProblem) -> Vec<Rational> {
    match rule {
        Rule::Cea => cea(&prob.estate, &prob.claims),
        Rule::Cel => cel(&prob.estate, &prob.claims),
        Rule::Prop => prop(&prob.estate, &prob.claims),
        Rule::Tal => talmud(&prob.estate, &prob.claims),
    }
}

/// Validates `(estate, claims)` and applies `rule`.
pub fn divide(rule: Rule, estate: Rational, claims: Vec<Rational>) -> Result<Vec<Rational>> {
    Ok(apply_rule(rule, &BankruptcyProblem::new(estate, claims)?))
}

/// Water level `λ` with `Σ min(d_i, λ) = estate`, found by walking the sorted
/// claims. `None` when every claim is met in full.
fn water_level(estate: &Rational, claims: &[Rational]) -> Option<Rational> {
    let mut sorted: Vec<&Rational> = claims.iter().collect();
    sorted.sort();
    let mut remaining = estate.clone();
    let total = sorted.len();
    for (k, d) in sorted.into_iter().enumerate() {
        let open = Rational::from_integer(((total - k) as i64).into());
        if d * &open >= remaining {
            return Some(remaining / open);
        }
        remaining -= d;
    }
    None
}

fn cea(estate: &Rational, claims: &[Rational]) -> Vec<Rational> {
    match water_level(estate, claims) {
        Some(level) => claims.iter().map(|d| d.min(&level).clone()).collect(),
        None => claims.to_vec(),
    }
}

/// Losses `Σd − E` shared by constrained equal awards.
fn cel(estate: &Rational, claims: &[Rational]) -> Vec<Rational> {
    let loss = sum(claims) - estate;
    cea(&loss, claims)
        .into_iter()
        .zip(claims)
        .map(|(l, d)| d - l)
        .collect()
}

fn prop(estate: &Rational, claims: &[Rational]) -> Vec<Rational> {
    let total = sum(claims);
    if total.is_zero() {
        return vec![Rational::zero(); claims.len()];
    }
    claims.iter().map(|d| estate * d / &total).collect()
}

fn talmud(estate: &Rational, claims: &[Rational]) -> Vec<Rational> {
    let two = Rational::from_integer(2.into());
    let halves: Vec<Rational> = claims.iter().map(|d| d / &two).collect();
    let half_total = sum(&halves);
    if *estate <= half_total {
        cea(estate, &halves)
    } else {
        let rest = estate - &half_total;
        cel(&rest, &halves)
            .into_iter()
            .zip(halves)
            .map(|(a, h)| a + h)
            .collect()
    }
}

/// `v(S) = max(E − Σ_{i∉S} d_i, 0)`.
pub fn bankruptcy_game(prob: &BankruptcyProblem) -> CharacteristicGame {
    let n = prob.claims.len();
    let total = sum(&prob.claims);
    CharacteristicGame::from_fn(n, |s| {
        let inside: Rational = s.members().map(|i| &prob.claims[i]).sum();
        let left = &prob.estate - (&total - inside);
        if left.is_positive() {
            left
        } else {
            Rational::zero()
        }
    })
}
