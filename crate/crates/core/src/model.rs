//! Price competition games and their basic quantities.
//!
//! Vendors are addressed by *column* indices `0..=m`: column `0` is the
//! implicit abstain option (cost 0, price 0, valuation 0 for every buyer
//! type) and columns `1..=m` are the real vendors. The abstain column is
//! materialized internally so that lookups never branch on it.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Column index of the abstain option.
pub const ABSTAIN: usize = 0;

/// Instance family a game was generated from, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Lemma1,
    Lemma4,
    Theorem4,
    Theorem5,
    X3c,
    NodeCover,
    Random,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Lemma1 => "lemma1",
            Family::Lemma4 => "lemma4",
            Family::Theorem4 => "theorem4",
            Family::Theorem5 => "theorem5",
            Family::X3c => "x3c",
            Family::NodeCover => "nodecover",
            Family::Random => "random",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        [
            Family::Lemma1,
            Family::Lemma4,
            Family::Theorem4,
            Family::Theorem5,
            Family::X3c,
            Family::NodeCover,
            Family::Random,
        ]
        .into_iter()
        .find(|f| f.name() == name)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A class of identical buyers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuyerType {
    pub volume: Rational,
    /// One valuation per real vendor.
    pub valuations: Vec<Rational>,
}

impl BuyerType {
    pub fn new(volume: Rational, valuations: Vec<Rational>) -> Self {
        BuyerType { volume, valuations }
    }
}

/// A full-information price competition game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    volumes: Vec<Rational>,
    // n rows of m+1 columns, column 0 = abstain
    valuations: Vec<Vec<Rational>>,
    // m+1 entries, entry 0 = abstain
    costs: Vec<Rational>,
    family: Option<Family>,
}

impl Game {
    /// Validates and builds a game from buyer types and real-vendor costs.
    pub fn new(buyer_types: Vec<BuyerType>, costs: Vec<Rational>) -> Result<Self> {
        let m = costs.len();
        if m == 0 {
            return Err(Error::InvalidGame(
                "a game needs at least one vendor".into(),
            ));
        }
        if buyer_types.is_empty() {
            return Err(Error::InvalidGame(
                "a game needs at least one buyer type".into(),
            ));
        }
        for (j, c) in costs.iter().enumerate() {
            if c.is_negative() {
                return Err(Error::InvalidGame(format!(
                    "vendor {} has negative cost {c}",
                    j + 1
                )));
            }
        }
        let mut volumes = Vec::with_capacity(buyer_types.len());
        let mut valuations = Vec::with_capacity(buyer_types.len());
        for (i, bt) in buyer_types.into_iter().enumerate() {
            if !bt.volume.is_positive() {
                return Err(Error::InvalidGame(format!(
                    "buyer type {i} has non-positive volume {}",
                    bt.volume
                )));
            }
            if bt.valuations.len() != m {
                return Err(Error::DimensionMismatch {
                    what: "valuation vector",
                    expected: m,
                    found: bt.valuations.len(),
                });
            }
            if let Some(v) = bt.valuations.iter().find(|v| v.is_negative()) {
                return Err(Error::InvalidGame(format!(
                    "buyer type {i} has negative valuation {v}"
                )));
            }
            let mut row = Vec::with_capacity(m + 1);
            row.push(Rational::zero());
            row.extend(bt.valuations);
            volumes.push(bt.volume);
            valuations.push(row);
        }
        let mut all_costs = Vec::with_capacity(m + 1);
        all_costs.push(Rational::zero());
        all_costs.extend(costs);
        Ok(Game {
            volumes,
            valuations,
            costs: all_costs,
            family: None,
        })
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = Some(family);
        self
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    /// Number of buyer types.
    pub fn n(&self) -> usize {
        self.volumes.len()
    }

    /// Number of real vendors.
    pub fn m(&self) -> usize {
        self.costs.len() - 1
    }

    pub fn volume(&self, i: usize) -> &Rational {
        &self.volumes[i]
    }

    pub fn volumes(&self) -> &[Rational] {
        &self.volumes
    }

    /// Valuation of buyer type `i` for column `j` (0 for abstain).
    pub fn valuation(&self, i: usize, j: usize) -> &Rational {
        &self.valuations[i][j]
    }

    /// Production cost of column `j` (0 for abstain).
    pub fn cost(&self, j: usize) -> &Rational {
        &self.costs[j]
    }

    /// Costs of the real vendors.
    pub fn costs(&self) -> &[Rational] {
        &self.costs[1..]
    }

    /// Valuations of buyer type `i` for the real vendors.
    pub fn valuations(&self, i: usize) -> &[Rational] {
        &self.valuations[i][1..]
    }

    pub fn buyer_types(&self) -> Vec<BuyerType> {
        (0..self.n())
            .map(|i| BuyerType::new(self.volumes[i].clone(), self.valuations(i).to_vec()))
            .collect()
    }

    /// Surplus `v_ij - c_j` of serving type `i` by column `j`.
    pub fn surplus(&self, i: usize, j: usize) -> Rational {
        &self.valuations[i][j] - &self.costs[j]
    }

    pub fn total_volume(&self) -> Rational {
        self.volumes.iter().fold(Rational::zero(), |acc, v| acc + v)
    }

    pub(crate) fn check_buyer(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange {
                what: "buyer type",
                index: i,
                limit: self.n(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_real_vendor(&self, j: usize) -> Result<()> {
        if j == ABSTAIN {
            return Err(Error::AbstainVendor);
        }
        if j > self.m() {
            return Err(Error::IndexOutOfRange {
                what: "vendor",
                index: j,
                limit: self.m() + 1,
            });
        }
        Ok(())
    }
}

/// One price per real vendor; the abstain option is priced at 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PriceVector {
    // m+1 entries, entry 0 = abstain = 0
    prices: Vec<Rational>,
}

impl PriceVector {
    /// Builds a price vector for `game`, rejecting prices below cost.
    pub fn new(game: &Game, prices: Vec<Rational>) -> Result<Self> {
        if prices.len() != game.m() {
            return Err(Error::DimensionMismatch {
                what: "price vector",
                expected: game.m(),
                found: prices.len(),
            });
        }
        for (j, p) in prices.iter().enumerate() {
            if p < game.cost(j + 1) {
                return Err(Error::PriceBelowCost {
                    vendor: j + 1,
                    price: Box::new(p.clone()),
                    cost: Box::new(game.cost(j + 1).clone()),
                });
            }
        }
        Ok(Self::from_real_prices(prices))
    }

    /// Prices every real vendor at its production cost.
    pub fn at_cost(game: &Game) -> Self {
        Self::from_real_prices(game.costs().to_vec())
    }

    pub(crate) fn from_real_prices(prices: Vec<Rational>) -> Self {
        let mut all = Vec::with_capacity(prices.len() + 1);
        all.push(Rational::zero());
        all.extend(prices);
        PriceVector { prices: all }
    }

    /// Price of column `j` (0 for abstain).
    pub fn price(&self, j: usize) -> &Rational {
        &self.prices[j]
    }

    /// Prices of the real vendors.
    pub fn as_slice(&self) -> &[Rational] {
        &self.prices[1..]
    }

    pub fn m(&self) -> usize {
        self.prices.len() - 1
    }

    /// All `m+1` column prices, abstain first.
    pub(crate) fn columns(&self) -> &[Rational] {
        &self.prices
    }

    pub(crate) fn check_for(&self, game: &Game) -> Result<()> {
        if self.m() != game.m() {
            return Err(Error::DimensionMismatch {
                what: "price vector",
                expected: game.m(),
                found: self.m(),
            });
        }
        for j in 1..=game.m() {
            if self.price(j) < game.cost(j) {
                return Err(Error::PriceBelowCost {
                    vendor: j,
                    price: Box::new(self.price(j).clone()),
                    cost: Box::new(game.cost(j).clone()),
                });
            }
        }
        Ok(())
    }
}

/// Buyers-to-vendors volumes: an `n x (m+1)` matrix whose rows sum to the
/// buyer-type volumes. Column 0 is the abstain option.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    rows: Vec<Vec<Rational>>,
}

impl Assignment {
    /// Validates a full matrix against `game`.
    pub fn new(game: &Game, rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.len() != game.n() {
            return Err(Error::DimensionMismatch {
                what: "assignment rows",
                expected: game.n(),
                found: rows.len(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != game.m() + 1 {
                return Err(Error::DimensionMismatch {
                    what: "assignment columns",
                    expected: game.m() + 1,
                    found: row.len(),
                });
            }
            if row.iter().any(|x| x.is_negative()) {
                return Err(Error::InvalidAssignment(format!(
                    "buyer type {i} has a negative volume entry"
                )));
            }
            let total = row.iter().fold(Rational::zero(), |acc, x| acc + x);
            if &total != game.volume(i) {
                return Err(Error::InvalidAssignment(format!(
                    "row {i} sums to {total}, volume is {}",
                    game.volume(i)
                )));
            }
        }
        Ok(Assignment { rows })
    }

    /// Sends all buyers of type `i` to column `choices[i]`.
    pub fn from_choices(game: &Game, choices: &[usize]) -> Result<Self> {
        if choices.len() != game.n() {
            return Err(Error::DimensionMismatch {
                what: "assignment rows",
                expected: game.n(),
                found: choices.len(),
            });
        }
        let mut rows = vec![vec![Rational::zero(); game.m() + 1]; game.n()];
        for (i, &j) in choices.iter().enumerate() {
            if j > game.m() {
                return Err(Error::IndexOutOfRange {
                    what: "vendor",
                    index: j,
                    limit: game.m() + 1,
                });
            }
            rows[i][j] = game.volume(i).clone();
        }
        Ok(Assignment { rows })
    }

    /// Everyone abstains.
    pub fn all_abstain(game: &Game) -> Self {
        Self::from_choices(game, &vec![ABSTAIN; game.n()]).expect("abstain is always valid")
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Number of real vendor columns.
    pub fn m(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len() - 1)
    }

    pub fn volume(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Column holding all of type `i`, or `None` if the row is split.
    pub fn choice(&self, i: usize) -> Option<usize> {
        let mut positive = self.rows[i]
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_positive());
        let (j, _) = positive.next()?;
        positive.next().is_none().then_some(j)
    }

    /// Per-row choices, failing on the first split row.
    pub fn choices(&self) -> Result<Vec<usize>> {
        (0..self.n())
            .map(|i| {
                self.choice(i)
                    .ok_or(Error::FractionalAssignment { buyer_type: i })
            })
            .collect()
    }

    /// Total volume attracted by column `j`.
    pub fn attracted_volume(&self, j: usize) -> Rational {
        self.rows
            .iter()
            .fold(Rational::zero(), |acc, row| acc + &row[j])
    }

    /// True when column `j` receives no buyers.
    pub fn is_empty_vendor(&self, j: usize) -> bool {
        self.rows.iter().all(|row| row[j].is_zero())
    }

    /// Positive entries as `(buyer_type, column, volume)` triples.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.rows.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, x)| x.is_positive())
                .map(move |(j, x)| (i, j, x))
        })
    }

    pub(crate) fn check_for(&self, game: &Game) -> Result<()> {
        if self.n() != game.n() {
            return Err(Error::DimensionMismatch {
                what: "assignment rows",
                expected: game.n(),
                found: self.n(),
            });
        }
        if self.m() != game.m() {
            return Err(Error::DimensionMismatch {
                what: "assignment columns",
                expected: game.m() + 1,
                found: self.m() + 1,
            });
        }
        Ok(())
    }
}

/// Best utility type `i` can get from any option, abstaining included.
pub(crate) fn best_utility(game: &Game, p: &PriceVector, i: usize) -> Rational {
    (1..=game.m())
        .map(|j| game.valuation(i, j) - p.price(j))
        .fold(Rational::zero(), |best, u| if u > best { u } else { best })
}

/// Columns maximizing the utility of buyer type `i` at prices `p`.
///
/// Abstain (column 0) is included whenever the best real utility is
/// non-positive; if it is negative the result is exactly `{0}`.
pub fn demand_set(game: &Game, p: &PriceVector, i: usize) -> Result<Vec<usize>> {
    game.check_buyer(i)?;
    p.check_for(game)?;
    Ok(demand_set_unchecked(game, p, i))
}

pub(crate) fn demand_set_unchecked(game: &Game, p: &PriceVector, i: usize) -> Vec<usize> {
    let best = best_utility(game, p, i);
    (0..=game.m())
        .filter(|&j| game.valuation(i, j) - p.price(j) == best)
        .collect()
}

pub(crate) fn first_inconsistency(game: &Game, x: &Assignment, p: &PriceVector) -> Option<usize> {
    (0..game.n()).find(|&i| {
        let best = best_utility(game, p, i);
        (0..=game.m())
            .any(|j| x.volume(i, j).is_positive() && game.valuation(i, j) - p.price(j) != best)
    })
}

/// Whether every positive entry of `x` lies in the buyer type's demand set.
pub fn is_consistent(game: &Game, x: &Assignment, p: &PriceVector) -> Result<bool> {
    x.check_for(game)?;
    p.check_for(game)?;
    Ok(first_inconsistency(game, x, p).is_none())
}

/// Total utility `t_i` of buyer type `i`.
pub fn buyer_type_utility(
    game: &Game,
    x: &Assignment,
    p: &PriceVector,
    i: usize,
) -> Result<Rational> {
    x.check_for(game)?;
    p.check_for(game)?;
    game.check_buyer(i)?;
    Ok((1..=game.m()).fold(Rational::zero(), |acc, j| {
        acc + x.volume(i, j) * (game.valuation(i, j) - p.price(j))
    }))
}

/// Profit `u_j = (p_j - c_j) * attracted volume` of real vendor `j`.
pub fn vendor_utility(game: &Game, x: &Assignment, p: &PriceVector, j: usize) -> Result<Rational> {
    x.check_for(game)?;
    p.check_for(game)?;
    game.check_real_vendor(j)?;
    Ok(vendor_utility_unchecked(game, x, p, j))
}

pub(crate) fn vendor_utility_unchecked(
    game: &Game,
    x: &Assignment,
    p: &PriceVector,
    j: usize,
) -> Rational {
    (p.price(j) - game.cost(j)) * x.attracted_volume(j)
}

/// Social welfare `sum_ij x_ij (v_ij - c_j)`; abstain contributes nothing.
pub fn social_welfare(game: &Game, x: &Assignment) -> Result<Rational> {
    x.check_for(game)?;
    Ok(social_welfare_unchecked(game, x))
}

pub(crate) fn social_welfare_unchecked(game: &Game, x: &Assignment) -> Rational {
    x.entries()
        .filter(|&(_, j, _)| j != ABSTAIN)
        .fold(Rational::zero(), |acc, (i, j, vol)| {
            acc + vol * game.surplus(i, j)
        })
}

/// Column chosen for type `i` by the welfare-optimal assignment: the lowest
/// real vendor with maximum non-negative surplus, abstain otherwise.
pub(crate) fn optimal_choice(game: &Game, i: usize) -> usize {
    let mut best: Option<(usize, Rational)> = None;
    for j in 1..=game.m() {
        let s = game.surplus(i, j);
        if s.is_negative() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| &s > b) {
            best = Some((j, s));
        }
    }
    best.map_or(ABSTAIN, |(j, _)| j)
}

/// A welfare-maximizing non-fractional assignment and the optimal welfare
/// `SW* = sum_i mu_i max_j (v_ij - c_j)^+`.
pub fn optimal_assignment(game: &Game) -> (Assignment, Rational) {
    let choices: Vec<usize> = (0..game.n()).map(|i| optimal_choice(game, i)).collect();
    let x = Assignment::from_choices(game, &choices).expect("choices are in range");
    let sw = optimal_welfare(game);
    (x, sw)
}

/// `SW*` evaluated directly from its closed form.
pub fn optimal_welfare(game: &Game) -> Rational {
    (0..game.n()).fold(Rational::zero(), |acc, i| {
        let best = (1..=game.m())
            .map(|j| game.surplus(i, j))
            .fold(Rational::zero(), |b, s| if s > b { s } else { b });
        acc + game.volume(i) * best
    })
}
