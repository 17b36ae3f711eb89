//! JSON file formats. Rationals travel as canonical strings, never floats.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use pricecomp::{
    format_rational, parse_rational, Assignment, BuyerType, Family, Game, PriceVector, Rational,
};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuyerTypeDocument {
    pub volume: String,
    pub valuations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VendorDocument {
    pub cost: String,
}

/// A game. `meta.family`, when it names a known family, tags the loaded game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub buyer_types: Vec<BuyerTypeDocument>,
    pub vendors: Vec<VendorDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Value>,
}

/// One positive entry of an assignment; vendor 0 is abstain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentEntry {
    pub buyer_type: usize,
    pub vendor: usize,
    pub volume: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDocument {
    pub assignment: Vec<AssignmentEntry>,
}

/// Real-vendor prices in vendor order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PricesDocument {
    pub prices: Vec<String>,
}

fn field(text: &str, location: impl FnOnce() -> String) -> CliResult<Rational> {
    parse_rational(text).map_err(|e| CliError::Document(format!("{}: {e}", location())))
}

pub fn rationals(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

impl GameDocument {
    pub fn from_game(game: &Game, meta: Option<Value>) -> Self {
        GameDocument {
            buyer_types: (0..game.n())
                .map(|i| BuyerTypeDocument {
                    volume: format_rational(game.volume(i)),
                    valuations: rationals(game.valuations(i)),
                })
                .collect(),
            vendors: (1..=game.m())
                .map(|j| VendorDocument {
                    cost: format_rational(game.cost(j)),
                })
                .collect(),
            meta,
        }
    }

    pub fn to_game(&self) -> CliResult<Game> {
        let m = self.vendors.len();
        let mut buyer_types = Vec::with_capacity(self.buyer_types.len());
        for (i, bt) in self.buyer_types.iter().enumerate() {
            if bt.valuations.len() != m {
                return Err(CliError::Document(format!(
                    "buyer_types[{i}] has {} valuations for {m} vendors",
                    bt.valuations.len()
                )));
            }
            let volume = field(&bt.volume, || format!("buyer_types[{i}].volume"))?;
            let valuations = bt
                .valuations
                .iter()
                .enumerate()
                .map(|(j, v)| field(v, || format!("buyer_types[{i}].valuations[{j}]")))
                .collect::<CliResult<Vec<_>>>()?;
            buyer_types.push(BuyerType::new(volume, valuations));
        }
        let costs = self
            .vendors
            .iter()
            .enumerate()
            .map(|(j, v)| field(&v.cost, || format!("vendors[{j}].cost")))
            .collect::<CliResult<Vec<_>>>()?;
        let game = Game::new(buyer_types, costs)?;
        let family = self
            .meta
            .as_ref()
            .and_then(|meta| meta.get("family"))
            .and_then(Value::as_str)
            .and_then(Family::from_name);
        Ok(match family {
            Some(f) => game.with_family(f),
            None => game,
        })
    }
}

impl AssignmentDocument {
    pub fn from_assignment(x: &Assignment) -> Self {
        AssignmentDocument {
            assignment: x
                .entries()
                .map(|(buyer_type, vendor, volume)| AssignmentEntry {
                    buyer_type,
                    vendor,
                    volume: format_rational(volume),
                })
                .collect(),
        }
    }

    pub fn to_assignment(&self, game: &Game) -> CliResult<Assignment> {
        let (n, m) = (game.n(), game.m());
        let mut rows = vec![vec![None; m + 1]; n];
        for (k, entry) in self.assignment.iter().enumerate() {
            if entry.buyer_type >= n || entry.vendor > m {
                return Err(CliError::Document(format!(
                    "assignment[{k}] addresses ({}, {}) outside {n} buyer types and vendors 0..={m}",
                    entry.buyer_type, entry.vendor
                )));
            }
            let volume = field(&entry.volume, || format!("assignment[{k}].volume"))?;
            let slot = &mut rows[entry.buyer_type][entry.vendor];
            if slot.is_some() {
                return Err(CliError::Document(format!(
                    "assignment[{k}] repeats ({}, {})",
                    entry.buyer_type, entry.vendor
                )));
            }
            *slot = Some(volume);
        }
        let rows = rows
            .into_iter()
            .map(|row| row.into_iter().map(Option::unwrap_or_default).collect())
            .collect();
        Ok(Assignment::new(game, rows)?)
    }
}

impl PricesDocument {
    pub fn from_prices(p: &PriceVector) -> Self {
        PricesDocument {
            prices: rationals(p.as_slice()),
        }
    }

    pub fn to_prices(&self, game: &Game) -> CliResult<PriceVector> {
        let prices = self
            .prices
            .iter()
            .enumerate()
            .map(|(j, v)| field(v, || format!("prices[{j}]")))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(PriceVector::new(game, prices)?)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    fs::write(path, to_pretty(value)).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    text
}
