//! Scenario files: a TOML document with a `[situation]` table holding the
//! economy and an optional `[options]` table.
//!
//! Numbers are TOML integers or strings holding an integer, a decimal
//! (`"0.25"`) or a fraction (`"50/3"`). TOML floats are refused because they
//! are not exact.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use permit_games::rational::{format_exact, parse_rational};
use permit_games::{LppSituation, Rational, Rule};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

/// An exact number as written in a scenario file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Num(pub Rational);

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct NumVisitor;

        impl Visitor<'_> for NumVisitor {
            type Value = Num;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a string such as \"12\", \"0.25\" or \"50/3\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
                Ok(Num(Rational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
                Err(E::custom(format!(
                    "floating-point literal {v} is not exact; quote it, e.g. \"{v}\""
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                parse_rational(v).map(Num).map_err(|e| E::custom(e.to_string()))
            }
        }

        deserializer.deserialize_any(NumVisitor)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Ok(v) = i64::try_from(self.0.to_integer()) {
                return serializer.serialize_i64(v);
            }
        }
        serializer.serialize_str(&format_exact(&self.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Table => "table",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected table, csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub partition_limit: Option<usize>,
    pub precision: Option<usize>,
    pub format: Option<Format>,
    pub grid: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub situation: LppSituation,
    pub rule: Rule,
    pub options: Options,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    situation: RawSituation,
    #[serde(default, skip_serializing_if = "RawOptions::is_empty")]
    options: RawOptions,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawSituation {
    /// Rows of A; the last row is permits per unit of each good.
    technology: Vec<Vec<Num>>,
    /// Rows of B, one per resource; column i is firm i.
    endowments: Vec<Vec<Num>>,
    prices: Vec<Num>,
    tax: Num,
    cap: Num,
}

#[derive(Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition_limit: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    precision: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<Vec<Num>>,
}

impl RawOptions {
    fn is_empty(&self) -> bool {
        self.rule.is_none()
            && self.partition_limit.is_none()
            && self.precision.is_none()
            && self.format.is_none()
            && self.grid.is_none()
    }
}

fn unwrap_all(v: Vec<Num>) -> Vec<Rational> {
    v.into_iter().map(|n| n.0).collect()
}

fn wrap_all(v: &[Rational]) -> Vec<Num> {
    v.iter().cloned().map(Num).collect()
}

/// Parses scenario text. `origin` names the source in error messages.
pub fn parse_scenario(text: &str, origin: &str) -> Result<Scenario, CliError> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| CliError::Input(format!("{origin}: {e}")))?;
    let field = |name: &str, e: String| CliError::Input(format!("{origin}: {name}: {e}"));
    let s = raw.situation;
    let situation = LppSituation::new(
        s.technology.into_iter().map(unwrap_all).collect(),
        s.endowments.into_iter().map(unwrap_all).collect(),
        unwrap_all(s.prices),
        s.tax.0,
        s.cap.0,
    )
    .map_err(|e| field("situation", e.to_string()))?;
    let o = raw.options;
    let rule = match o.rule {
        Some(r) => r.parse::<Rule>().map_err(|e| field("options.rule", e.to_string()))?,
        None => Rule::Cea,
    };
    let format = match o.format {
        Some(f) => Some(f.parse::<Format>().map_err(|e| field("options.format", e))?),
        None => None,
    };
    if o.partition_limit == Some(0) {
        return Err(field("options.partition_limit", "must be at least 1".into()));
    }
    Ok(Scenario {
        situation,
        rule,
        options: Options {
            partition_limit: o.partition_limit,
            precision: o.precision,
            format,
            grid: o.grid.map(unwrap_all),
        },
    })
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_scenario(&text, &path.display().to_string())
}

/// Serializes a scenario so that [`parse_scenario`] reads it back unchanged.
pub fn dump_scenario(scenario: &Scenario) -> String {
    let sit = &scenario.situation;
    let raw = RawScenario {
        situation: RawSituation {
            technology: sit.technology().iter().map(|r| wrap_all(r)).collect(),
            endowments: sit.endowments().iter().map(|r| wrap_all(r)).collect(),
            prices: wrap_all(sit.prices()),
            tax: Num(sit.tax().clone()),
            cap: Num(sit.cap().clone()),
        },
        options: RawOptions {
            rule: Some(scenario.rule.name().to_ascii_lowercase()),
            partition_limit: scenario.options.partition_limit,
            precision: scenario.options.precision,
            format: scenario.options.format.map(|f| f.name().to_string()),
            grid: scenario.options.grid.as_deref().map(wrap_all),
        },
    };
    toml::to_string(&raw).expect("scenario serializes")
}

/// Parses a comma-separated list of exact numbers, e.g. `0,10,50/3,20`.
pub fn parse_list(text: &str, what: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|item| {
            parse_rational(item.trim()).map_err(|e| CliError::Input(format!("{what}: `{}`: {e}", item.trim())))
        })
        .collect()
}
