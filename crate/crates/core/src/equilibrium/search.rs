//! Exhaustive equilibrium search and the price of anarchy.

use std::collections::BTreeSet;

use num_traits::Zero;
use rayon::prelude::*;

use crate::equilibrium::candidate::equilibrium_for_choices;
use crate::equilibrium::region::{
    pair_boundaries, pair_regions, DifferenceSystem, PairRegion, Region,
};
use crate::error::{Error, Result};
use crate::model::{
    optimal_welfare, social_welfare_unchecked, Assignment, Game, PriceVector, ABSTAIN,
};
use crate::rational::Rational;

/// One pure Nash equilibrium. Orders by prices, then assignment.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Equilibrium {
    pub prices: PriceVector,
    pub assignment: Assignment,
}

/// Deduplicated, canonically sorted equilibria.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EquilibriumSet {
    items: Vec<Equilibrium>,
}

impl EquilibriumSet {
    pub fn from_vec(mut items: Vec<Equilibrium>) -> Self {
        items.sort();
        items.dedup();
        EquilibriumSet { items }
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Equilibrium> {
        self.items.iter()
    }

    /// Social welfare of every member, in set order.
    pub fn welfare_values(&self, game: &Game) -> Vec<Rational> {
        self.items
            .iter()
            .map(|e| social_welfare_unchecked(game, &e.assignment))
            .collect()
    }

    pub fn min_welfare(&self, game: &Game) -> Option<Rational> {
        self.welfare_values(game).into_iter().min()
    }

    pub fn max_welfare(&self, game: &Game) -> Option<Rational> {
        self.welfare_values(game).into_iter().max()
    }
}

impl<'a> IntoIterator for &'a EquilibriumSet {
    type Item = &'a Equilibrium;
    type IntoIter = std::slice::Iter<'a, Equilibrium>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// Result of a possibly truncated search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub equilibria: EquilibriumSet,
    /// False when the budget cut the search short.
    pub exhaustive: bool,
    /// Candidates (assignments or profiles) examined.
    pub evaluated: u64,
}

/// `(m+1)^n`, saturating.
pub fn assignment_count(game: &Game) -> u128 {
    let base = (game.m() + 1) as u128;
    (0..game.n()).fold(1u128, |acc, _| acc.saturating_mul(base))
}

fn decode_choices(mut index: u128, n: usize, base: u128) -> Vec<usize> {
    let mut choices = vec![0; n];
    for slot in choices.iter_mut().rev() {
        *slot = (index % base) as usize;
        index /= base;
    }
    choices
}

fn collect_equilibria<I>(game: &Game, candidates: I) -> EquilibriumSet
where
    I: IntoParallelIterator<Item = Vec<usize>>,
{
    let found: Vec<Equilibrium> = candidates
        .into_par_iter()
        .filter_map(|choices| {
            equilibrium_for_choices(game, &choices)
                .map(|(assignment, prices, _)| Equilibrium { prices, assignment })
        })
        .collect();
    EquilibriumSet::from_vec(found)
}

/// Runs `ComputePrice` on the first `budget` non-fractional assignments (in
/// lexicographic order of per-type choices).
pub fn brute_force_bounded(game: &Game, budget: u64) -> SearchOutcome {
    let total = assignment_count(game);
    let limit = total.min(budget as u128);
    let base = (game.m() + 1) as u128;
    let n = game.n();
    let equilibria = collect_equilibria(
        game,
        (0..limit as u64)
            .into_par_iter()
            .map(|k| decode_choices(k as u128, n, base)),
    );
    SearchOutcome {
        equilibria,
        exhaustive: limit == total,
        evaluated: limit as u64,
    }
}

/// All equilibria with non-fractional assignments, by trying every one of
/// the `(m+1)^n` assignments.
pub fn brute_force_equilibria(game: &Game, budget: u64) -> Result<EquilibriumSet> {
    let needed = assignment_count(game);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(brute_force_bounded(game, budget).equilibria)
}

/// Number of preference profiles `Enumerate` walks through, saturating.
pub fn profile_count(game: &Game) -> u128 {
    column_pairs(game)
        .into_iter()
        .map(|(a, b)| (2 * pair_boundaries(game, a, b).len() + 1) as u128)
        .fold(1u128, |acc, k| acc.saturating_mul(k))
}

fn column_pairs(game: &Game) -> Vec<(usize, usize)> {
    let columns = game.m() + 1;
    (0..columns)
        .flat_map(|a| (a + 1..columns).map(move |b| (a, b)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub budget: u64,
    /// Discard contradictory partial profiles as soon as they appear.
    pub prune_infeasible: bool,
    /// Try every way of sending tied buyer types to their top vendors
    /// instead of one representative per profile.
    pub expand_ties: bool,
}

impl EnumerateOptions {
    pub fn with_budget(budget: u64) -> Self {
        EnumerateOptions {
            budget,
            prune_infeasible: true,
            expand_ties: true,
        }
    }
}

/// Columns maximizing `v_ij - w_j` for buyer type `i` (abstain included).
fn top_set(game: &Game, w: &[Rational], i: usize) -> Vec<usize> {
    let utilities: Vec<Rational> = (0..=game.m())
        .map(|j| game.valuation(i, j) - &w[j])
        .collect();
    let best = utilities.iter().max().expect("at least the abstain column");
    (0..=game.m()).filter(|&j| &utilities[j] == best).collect()
}

/// Representative of a top set: its only member, or the member with the
/// largest surplus, lowest real index first and abstain last.
fn representative(game: &Game, i: usize, top: &[usize]) -> usize {
    if top.len() == 1 {
        return top[0];
    }
    let best_surplus = top
        .iter()
        .map(|&j| game.surplus(i, j))
        .max()
        .expect("non-empty");
    top.iter()
        .copied()
        .filter(|&j| j != ABSTAIN)
        .find(|&j| game.surplus(i, j) == best_surplus)
        .unwrap_or(ABSTAIN)
}

/// Every choice vector picking one member of each top set.
fn tie_combinations(tops: &[Vec<usize>]) -> Vec<Vec<usize>> {
    tops.iter().fold(vec![Vec::new()], |partial, top| {
        partial
            .iter()
            .flat_map(|prefix| {
                top.iter().map(move |&j| {
                    let mut next = prefix.clone();
                    next.push(j);
                    next
                })
            })
            .collect()
    })
}

struct ProfileWalk<'a> {
    game: &'a Game,
    pairs: Vec<(usize, usize, Vec<Region>)>,
    prune: bool,
    expand_ties: bool,
    system: DifferenceSystem,
    assignments: BTreeSet<Vec<usize>>,
    leaves: u64,
}

impl ProfileWalk<'_> {
    fn descend(&mut self, depth: usize) {
        if depth == self.pairs.len() {
            self.leaves += 1;
            if let Some(w) = self.system.solve() {
                let tops: Vec<Vec<usize>> = (0..self.game.n())
                    .map(|i| top_set(self.game, &w, i))
                    .collect();
                if self.expand_ties {
                    self.assignments.extend(tie_combinations(&tops));
                } else {
                    let choices = tops
                        .iter()
                        .enumerate()
                        .map(|(i, t)| representative(self.game, i, t))
                        .collect();
                    self.assignments.insert(choices);
                }
            }
            return;
        }
        let (a, b) = (self.pairs[depth].0, self.pairs[depth].1);
        for r in 0..self.pairs[depth].2.len() {
            let mark = self.system.len();
            let cell = PairRegion {
                first: a,
                second: b,
                region: self.pairs[depth].2[r].clone(),
            };
            self.system.push_region(&cell);
            if !self.prune || self.system.is_feasible() {
                self.descend(depth + 1);
            }
            self.system.truncate(mark);
        }
    }
}

/// The distinct assignments `Enumerate` derives from realizable profiles,
/// with the number of profile leaves reached.
pub(crate) fn profile_assignments(
    game: &Game,
    options: EnumerateOptions,
) -> (BTreeSet<Vec<usize>>, u64) {
    let pairs = column_pairs(game)
        .into_iter()
        .map(|(a, b)| (a, b, pair_regions(&pair_boundaries(game, a, b))))
        .collect();
    let mut walk = ProfileWalk {
        game,
        pairs,
        prune: options.prune_infeasible,
        expand_ties: options.expand_ties,
        system: DifferenceSystem::new(game.m() + 1),
        assignments: BTreeSet::new(),
        leaves: 0,
    };
    walk.descend(0);
    (walk.assignments, walk.leaves)
}

/// `Enumerate`: assignments derived from every realizable preference
/// profile (all tie resolutions, or one representative per profile), each
/// priced by `CandidatePrice` and checked by `Verify`. Finds an equilibrium
/// whenever the game has one.
pub fn enumerate_equilibria(game: &Game, options: EnumerateOptions) -> Result<EquilibriumSet> {
    let needed = profile_count(game);
    if needed > options.budget as u128 {
        return Err(Error::BudgetExceeded {
            needed,
            budget: options.budget,
        });
    }
    let (assignments, _) = profile_assignments(game, options);
    Ok(collect_equilibria(
        game,
        assignments.into_iter().collect::<Vec<_>>(),
    ))
}

/// Value of `SW* / min equilibrium welfare`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PriceOfAnarchy {
    Finite(Rational),
    /// Worst equilibrium has zero welfare while `SW* > 0`.
    Infinite,
    /// No equilibrium to measure.
    Undefined,
}

impl PriceOfAnarchy {
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            PriceOfAnarchy::Finite(r) => Some(r),
            _ => None,
        }
    }
}

/// Price of anarchy over an exhaustive equilibrium set. When both `SW*`
/// and the worst equilibrium welfare are zero the ratio is taken as 1.
pub fn price_of_anarchy(game: &Game, equilibria: &EquilibriumSet) -> PriceOfAnarchy {
    let Some(worst) = equilibria.min_welfare(game) else {
        return PriceOfAnarchy::Undefined;
    };
    let optimum = optimal_welfare(game);
    if worst.is_zero() {
        if optimum.is_zero() {
            PriceOfAnarchy::Finite(Rational::from_integer(1.into()))
        } else {
            PriceOfAnarchy::Infinite
        }
    } else {
        PriceOfAnarchy::Finite(optimum / worst)
    }
}
