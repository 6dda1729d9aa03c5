//! `reproduce-paper`: recomputes the published worked examples on the bundled
//! three-firm economy and compares each figure with a stored expectation.

use permit_games::partition::{build_game_with_limit, Sense as Side, DEFAULT_PARTITION_LIMIT};
use permit_games::rational::{format_exact, rounded};
use permit_games::stability::{core_nonempty, in_core, owen_allocation, trade_ledger};
use permit_games::{CharacteristicGame, Coalition, LppSituation, Partition, PartitionFunctionGame, Rational, Rule};
use serde::Deserialize;

use crate::commands::cite_certificate;
use crate::report::{Cell, Report, Section};
use crate::scenario::{parse_scenario, Num};
use crate::{CliError, Outcome};

pub const SCENARIO: &str = include_str!("../fixtures/example3.toml");

pub const EXPECTED: [(&str, &str); 5] = [
    ("example3", include_str!("../fixtures/expected/example3.toml")),
    ("example5", include_str!("../fixtures/expected/example5.toml")),
    ("example6", include_str!("../fixtures/expected/example6.toml")),
    ("example9", include_str!("../fixtures/expected/example9.toml")),
    ("example14", include_str!("../fixtures/expected/example14.toml")),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub title: String,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(rename = "check")]
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// `d_S`.
    Demand,
    /// `f(S|P)`.
    Share,
    /// `V(S|P)`.
    Value,
    /// `v^-(S)` / `v^+(S)`.
    Pessimistic,
    Optimistic,
    /// `R^-(S)` / `R^+(S)`.
    ResourceMinus,
    ResourcePlus,
    /// Whether the named game's core is empty.
    CoreEmpty,
    /// The inequality cited for an empty core.
    Certificate,
    /// Whether `allocation` lies in the named game's core.
    InCore,
    /// Optimal dual of the grand coalition's program at the cap.
    Dual,
    /// Dual-based money allocation for `holdings`.
    Owen,
    /// One field of the trade ledger from `holdings` to `target`.
    Ledger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Valuation {
    Exact,
    /// Value at the share rounded to two decimals, the convention of the
    /// published PROP tables.
    RoundedShare,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Expect {
    Flag(bool),
    Number(Num),
    List(Vec<Num>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub label: String,
    pub kind: Kind,
    #[serde(default)]
    pub rule: Option<String>,
    #[serde(default)]
    pub coalition: Vec<usize>,
    #[serde(default)]
    pub partition: Vec<Vec<usize>>,
    #[serde(default)]
    pub game: Option<String>,
    #[serde(default)]
    pub allocation: Vec<Num>,
    #[serde(default)]
    pub holdings: Vec<Num>,
    #[serde(default)]
    pub target: Vec<Num>,
    #[serde(default)]
    pub price: Option<Num>,
    #[serde(default)]
    pub field: Option<String>,
    #[serde(default)]
    pub valuation: Option<Valuation>,
    /// Largest accepted absolute difference; exact when absent.
    #[serde(default)]
    pub tolerance: Option<Num>,
    #[serde(default)]
    pub expect: Option<Expect>,
    /// Expected text, for certificates.
    #[serde(default)]
    pub expect_text: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
enum Computed {
    Flag(bool),
    Number(Rational),
    List(Vec<Rational>),
    Text(String),
}

impl Computed {
    fn show(&self) -> String {
        match self {
            Computed::Flag(b) => b.to_string(),
            Computed::Number(x) => format_exact(x),
            Computed::List(v) => format!("({})", v.iter().map(format_exact).collect::<Vec<_>>().join(", ")),
            Computed::Text(t) => t.clone(),
        }
    }
}

fn bad(label: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("expected-figure check `{label}`: {msg}"))
}

fn coalition(members: &[usize], label: &str) -> Result<Coalition, CliError> {
    if members.is_empty() || members.iter().any(|&m| m == 0) {
        return Err(bad(label, "coalition members are one-based and nonempty"));
    }
    Ok(Coalition::from_members(members.iter().map(|m| m - 1)))
}

struct Engine {
    sit: LppSituation,
    games: Vec<(Rule, PartitionFunctionGame)>,
}

impl Engine {
    fn game(&mut self, rule: Rule) -> Result<&PartitionFunctionGame, CliError> {
        if let Some(k) = self.games.iter().position(|(r, _)| *r == rule) {
            return Ok(&self.games[k].1);
        }
        let g = build_game_with_limit(&self.sit, rule, DEFAULT_PARTITION_LIMIT)?;
        self.games.push((rule, g));
        Ok(&self.games.last().unwrap().1)
    }

    fn rule(check: &Check) -> Result<Rule, CliError> {
        let text = check.rule.as_deref().ok_or_else(|| bad(&check.label, "missing rule"))?;
        text.parse().map_err(|e| bad(&check.label, e))
    }

    fn named_game(&mut self, check: &Check) -> Result<CharacteristicGame, CliError> {
        let g = self.game(Self::rule(check)?)?;
        match check.game.as_deref() {
            Some("optimistic") => Ok(g.optimistic_game()),
            Some("pessimistic") => Ok(g.pessimistic_game()),
            Some("resource-plus") => Ok(g.resource_game(Side::Plus)),
            Some("resource-minus") => Ok(g.resource_game(Side::Minus)),
            other => Err(bad(&check.label, format!("unknown game {other:?}"))),
        }
    }

    fn value_at(&self, s: Coalition, share: &Rational, valuation: Valuation) -> Result<Rational, CliError> {
        let z = match valuation {
            Valuation::Exact => share.clone(),
            Valuation::RoundedShare => rounded(share, 2),
        };
        Ok(self.sit.coalition_value(s, &z)?)
    }

    fn compute(&mut self, check: &Check) -> Result<Computed, CliError> {
        let label = check.label.as_str();
        let n = self.sit.n_firms();
        let valuation = check.valuation.unwrap_or(Valuation::Exact);
        let nums = |v: &[Num]| v.iter().map(|x| x.0.clone()).collect::<Vec<_>>();
        Ok(match check.kind {
            Kind::Demand => Computed::Number(self.sit.optimal_demand(coalition(&check.coalition, label)?)?),
            Kind::Share | Kind::Value => {
                let s = coalition(&check.coalition, label)?;
                let blocks = check
                    .partition
                    .iter()
                    .map(|b| coalition(b, label))
                    .collect::<Result<Vec<_>, _>>()?;
                let p = Partition::new(blocks, n).map_err(|e| bad(label, e))?;
                let g = self.game(Self::rule(check)?)?;
                let share = g.share(s, &p).ok_or_else(|| bad(label, "coalition is not a block"))?.clone();
                if check.kind == Kind::Share {
                    Computed::Number(share)
                } else {
                    Computed::Number(self.value_at(s, &share, valuation)?)
                }
            }
            Kind::Pessimistic | Kind::Optimistic => {
                let s = coalition(&check.coalition, label)?;
                let g = self.game(Self::rule(check)?)?;
                let shares: Vec<Rational> = g.cells_of(s).map(|(_, c)| c.share.clone()).collect();
                let mut values = Vec::with_capacity(shares.len());
                for share in &shares {
                    values.push(self.value_at(s, share, valuation)?);
                }
                let pick = if check.kind == Kind::Pessimistic { values.iter().min() } else { values.iter().max() };
                Computed::Number(pick.expect("every coalition is a block somewhere").clone())
            }
            Kind::ResourceMinus | Kind::ResourcePlus => {
                let s = coalition(&check.coalition, label)?;
                let side = if check.kind == Kind::ResourceMinus { Side::Minus } else { Side::Plus };
                Computed::Number(self.game(Self::rule(check)?)?.resource_game(side).value(s).clone())
            }
            Kind::CoreEmpty => Computed::Flag(!core_nonempty(&self.named_game(check)?)?.nonempty),
            Kind::Certificate => {
                let game = self.named_game(check)?;
                let verdict = core_nonempty(&game)?;
                Computed::Text(cite_certificate(&verdict, &game, 2).unwrap_or_else(|| "core nonempty".into()))
            }
            Kind::InCore => {
                let game = self.named_game(check)?;
                Computed::Flag(in_core(&game, &nums(&check.allocation))?.is_member())
            }
            Kind::Dual => {
                let sol = self.sit.production_plan(self.sit.grand_coalition(), self.sit.cap())?;
                Computed::List(sol.dual)
            }
            Kind::Owen => Computed::List(owen_allocation(&self.sit, &nums(&check.holdings))?.money),
            Kind::Ledger => {
                let price = check.price.as_ref().map(|p| p.0.clone());
                let ledger = trade_ledger(&self.sit, &nums(&check.holdings), &nums(&check.target), price.as_ref())?;
                match check.field.as_deref() {
                    Some("price") => match ledger.price {
                        Some(p) => Computed::Number(p),
                        None => Computed::Text("no trade".into()),
                    },
                    Some("manager_revenue") => Computed::Number(ledger.manager_revenue),
                    Some("holdings") => Computed::List(ledger.rows.iter().map(|r| r.holding.clone()).collect()),
                    Some("sold") => Computed::List(ledger.rows.iter().map(|r| r.sold.clone()).collect()),
                    Some("nets") => Computed::List(ledger.nets()),
                    other => return Err(bad(label, format!("unknown ledger field {other:?}"))),
                }
            }
        })
    }
}

fn close(a: &Rational, b: &Rational, tol: &Rational) -> bool {
    let diff = if a > b { a - b } else { b - a };
    diff <= *tol
}

fn matches(computed: &Computed, check: &Check) -> Result<(bool, String), CliError> {
    let zero = Rational::from_integer(0.into());
    let tol = check.tolerance.as_ref().map_or(zero, |t| t.0.clone());
    if let Some(text) = &check.expect_text {
        return Ok((computed == &Computed::Text(text.clone()), text.clone()));
    }
    let expect = check.expect.as_ref().ok_or_else(|| bad(&check.label, "no expectation"))?;
    Ok(match (computed, expect) {
        (Computed::Flag(a), Expect::Flag(b)) => (a == b, b.to_string()),
        (Computed::Number(a), Expect::Number(b)) => (close(a, &b.0, &tol), format_exact(&b.0)),
        (Computed::List(a), Expect::List(b)) => (
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| close(x, &y.0, &tol)),
            format!("({})", b.iter().map(|y| format_exact(&y.0)).collect::<Vec<_>>().join(", ")),
        ),
        (other, _) => return Err(bad(&check.label, format!("computed {} does not fit the expectation", other.show()))),
    })
}

pub fn parse_expected(text: &str, origin: &str) -> Result<Expected, CliError> {
    toml::from_str(text).map_err(|e| CliError::Input(format!("{origin}: {e}")))
}

/// Runs every stored check. The outcome is negative on any mismatch.
pub fn run() -> Result<Outcome, CliError> {
    let scenario = parse_scenario(SCENARIO, "example3.toml")?;
    let mut engine = Engine { sit: scenario.situation, games: Vec::new() };
    let mut report = Report::new("reproduce-paper");
    let mut failures = 0;
    let mut total = 0;
    for (name, text) in EXPECTED {
        let expected = parse_expected(text, name)?;
        let mut section = Section::new(expected.title.clone(), &["check", "computed", "expected", "tolerance", "status"]);
        let mut local = 0;
        for check in &expected.checks {
            let computed = engine.compute(check)?;
            let (ok, shown) = matches(&computed, check)?;
            total += 1;
            if !ok {
                local += 1;
            }
            let shown_cell = match &computed {
                Computed::Number(x) => Cell::num(x),
                other => Cell::text(other.show()),
            };
            section.row(vec![
                Cell::text(check.label.clone()),
                shown_cell,
                Cell::text(shown),
                Cell::text(check.tolerance.as_ref().map_or("exact".to_string(), |t| format_exact(&t.0))),
                Cell::text(if ok { "ok" } else { "MISMATCH" }),
            ]);
        }
        for note in &expected.notes {
            section.note(note.clone());
        }
        section.note(if local == 0 {
            format!("{}: all {} checks match", expected.title, expected.checks.len())
        } else {
            format!("{}: {local} of {} checks mismatch", expected.title, expected.checks.len())
        });
        failures += local;
        report.push(section);
    }
    report.verdict = Some(if failures == 0 {
        format!("all {total} checks reproduced")
    } else {
        format!("{failures} of {total} checks mismatch")
    });
    Ok(Outcome { report, negative: failures > 0 })
}
