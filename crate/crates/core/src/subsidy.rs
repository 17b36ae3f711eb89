//! Subsidies that enforce an assignment and price vector as an equilibrium.
//!
//! Vendor `j` needs `s_j = theta_j - u_j`: the gap between its best
//! deviation and its status-quo profit. [`min_subsidies`] searches price
//! vectors minimizing the total over a finite candidate grid.

use num_traits::Zero;

use crate::equilibrium::{
    best_threshold, equilibrium_for_choices, priceable_choices, require_consistent,
    thresholds_unchecked, vendor_reports,
};
use crate::error::{Error, Result};
use crate::model::{optimal_assignment, Assignment, Family, Game, PriceVector, ABSTAIN};
use crate::rational::Rational;

/// Entry-wise minimum subsidies, one per real vendor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsidyVector {
    entries: Vec<Rational>,
    total: Rational,
}

impl SubsidyVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        let total = entries.iter().fold(Rational::zero(), |acc, s| acc + s);
        SubsidyVector { entries, total }
    }

    pub fn zeros(m: usize) -> Self {
        Self::new(vec![Rational::zero(); m])
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// Subsidy of real vendor `j` (1-based column).
    pub fn get(&self, j: usize) -> &Rational {
        &self.entries[j - 1]
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }
}

/// `s(x, p)`; fails if `x` is not consistent to `p`.
pub fn subsidy_vector(game: &Game, x: &Assignment, p: &PriceVector) -> Result<SubsidyVector> {
    x.check_for(game)?;
    p.check_for(game)?;
    require_consistent(game, x, p)?;
    Ok(SubsidyVector::new(
        vendor_reports(game, x, p)
            .into_iter()
            .map(|r| r.slack)
            .collect(),
    ))
}

/// The optimal assignment priced at cost, with the subsidies enforcing it.
/// The total never exceeds `SW*`.
pub fn enforce_at_cost(game: &Game) -> (Assignment, PriceVector, SubsidyVector) {
    let (x, _) = optimal_assignment(game);
    let p = PriceVector::at_cost(game);
    let s = subsidy_vector(game, &x, &p).expect("optimal assignment is consistent at cost");
    (x, p, s)
}

/// Per-vendor candidate prices: cost, every valuation, and every price that
/// makes some buyer type indifferent to a competitor priced at its cost or
/// at one of its valuations. Sorted, deduplicated, and at least cost.
pub fn candidate_grid(game: &Game) -> Vec<Vec<Rational>> {
    let (n, m) = (game.n(), game.m());
    let anchors: Vec<Vec<Rational>> = (0..=m)
        .map(|k| {
            let mut values: Vec<Rational> = (0..n).map(|i| game.valuation(i, k).clone()).collect();
            values.push(game.cost(k).clone());
            values.sort();
            values.dedup();
            values
        })
        .collect();
    (1..=m)
        .map(|j| {
            let cost = game.cost(j);
            let mut grid = vec![cost.clone()];
            for i in 0..n {
                grid.push(game.valuation(i, j).clone());
                for k in 1..=m {
                    if k == j {
                        continue;
                    }
                    let gap = game.valuation(i, j) - game.valuation(i, k);
                    grid.extend(anchors[k].iter().map(|t| &gap + t));
                }
            }
            grid.retain(|v| v >= cost);
            grid.sort();
            grid.dedup();
            grid
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Exhaustive search over the candidate grid.
    Grid,
    /// Grid search followed by coordinate descent over grid midpoints.
    GridRefine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsidySearchOptions {
    pub mode: SearchMode,
    /// Largest admissible product of per-vendor grid sizes.
    pub budget: u64,
}

impl SubsidySearchOptions {
    pub fn grid(budget: u64) -> Self {
        SubsidySearchOptions {
            mode: SearchMode::Grid,
            budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsidySearchResult {
    pub best_price: PriceVector,
    pub best_subsidy: SubsidyVector,
    /// Complete grid points whose subsidies were evaluated.
    pub evaluated: u64,
    /// Set when the returned total is provably the minimum over all prices.
    pub certified_exact: bool,
    /// The assignment already is an equilibrium at `best_price`.
    pub is_equilibrium: bool,
}

/// Families whose analytic optimum for this assignment lies on the grid.
fn certified_family(game: &Game, choices: &[usize]) -> bool {
    match game.family() {
        Some(Family::Theorem5) | Some(Family::NodeCover) => {
            let (optimal, _) = optimal_assignment(game);
            optimal.choices().is_ok_and(|c| c == choices)
        }
        Some(Family::Theorem4) => choices == [1, 2],
        _ => false,
    }
}

/// `p_j - p_k <= bound` for every price vector keeping the assignment consistent.
struct PairLimit {
    j: usize,
    k: usize,
    bound: Rational,
}

struct BranchAndBound<'a> {
    game: &'a Game,
    observer: &'a mut dyn FnMut(&[Rational], &Rational),
    domains: Vec<Vec<Rational>>,
    limits_by_vendor: Vec<Vec<PairLimit>>,
    volumes: Vec<Rational>,
    // column-indexed; unassigned real vendors hold their domain minimum
    low_prices: Vec<Rational>,
    best: Option<(Vec<Rational>, Rational)>,
    evaluated: u64,
}

impl BranchAndBound<'_> {
    fn profit(&self, j: usize, price: &Rational) -> Rational {
        (price - self.game.cost(j)) * &self.volumes[j]
    }

    /// Lower bound on the total subsidy of any completion once vendors
    /// `1..=depth` are fixed. Exact when `depth == m`.
    fn bound(&self, depth: usize) -> Rational {
        let m = self.game.m();
        (1..=m).fold(Rational::zero(), |acc, j| {
            let tau = thresholds_unchecked(self.game, &self.low_prices, j);
            let (_, theta) = best_threshold(&tau, self.game.volumes(), self.game.cost(j));
            let profit = if j <= depth {
                self.profit(j, &self.low_prices[j])
            } else {
                self.profit(j, self.domains[j].last().expect("non-empty domain"))
            };
            let gap = theta - profit;
            if gap > Rational::zero() {
                acc + gap
            } else {
                acc
            }
        })
    }

    fn compatible(&self, j: usize, price: &Rational) -> bool {
        self.limits_by_vendor[j].iter().all(|l| {
            // only constraints whose other end is already fixed
            let other = if l.j == j { l.k } else { l.j };
            if other > j {
                return true;
            }
            let (pj, pk) = if l.j == j {
                (price, &self.low_prices[l.k])
            } else {
                (&self.low_prices[l.j], price)
            };
            pj - pk <= l.bound
        })
    }

    fn descend(&mut self, depth: usize) {
        let m = self.game.m();
        if depth == m {
            self.evaluated += 1;
            let total = self.bound(m);
            (self.observer)(&self.low_prices[1..], &total);
            if self.best.as_ref().is_none_or(|(_, b)| &total < b) {
                self.best = Some((self.low_prices[1..].to_vec(), total));
            }
            return;
        }
        let j = depth + 1;
        let saved = self.low_prices[j].clone();
        for idx in 0..self.domains[j].len() {
            let price = self.domains[j][idx].clone();
            if !self.compatible(j, &price) {
                continue;
            }
            self.low_prices[j] = price;
            let prune = match &self.best {
                Some((_, b)) => depth + 1 < m && self.bound(depth + 1) >= *b,
                None => false,
            };
            if !prune {
                self.descend(depth + 1);
            }
        }
        self.low_prices[j] = saved;
    }
}

fn unary_filter(game: &Game, choices: &[usize], grid: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let mut domains = vec![Vec::new()];
    for (j0, mut values) in grid.into_iter().enumerate() {
        let j = j0 + 1;
        for (i, &c) in choices.iter().enumerate() {
            if c == j {
                values.retain(|p| p <= game.valuation(i, j));
            } else if c == ABSTAIN {
                values.retain(|p| p >= game.valuation(i, j));
            }
        }
        domains.push(values);
    }
    domains
}

fn pair_limits(game: &Game, choices: &[usize]) -> Vec<Vec<PairLimit>> {
    let m = game.m();
    let mut tightest: Vec<Vec<Option<Rational>>> = vec![vec![None; m + 1]; m + 1];
    for (i, &j) in choices.iter().enumerate() {
        if j == ABSTAIN {
            continue;
        }
        for k in 1..=m {
            if k == j {
                continue;
            }
            let bound = game.valuation(i, j) - game.valuation(i, k);
            let slot = &mut tightest[j][k];
            if slot.as_ref().is_none_or(|b| &bound < b) {
                *slot = Some(bound);
            }
        }
    }
    let mut by_vendor: Vec<Vec<PairLimit>> = (0..=m).map(|_| Vec::new()).collect();
    for j in 1..=m {
        for k in 1..=m {
            if let Some(bound) = tightest[j][k].take() {
                let owner = j.max(k);
                by_vendor[owner].push(PairLimit { j, k, bound });
            }
        }
    }
    by_vendor
}

fn total_at(game: &Game, x: &Assignment, prices: &[Rational]) -> Option<Rational> {
    let p = PriceVector::new(game, prices.to_vec()).ok()?;
    subsidy_vector(game, x, &p).ok().map(|s| s.total().clone())
}

fn midpoints(values: &[Rational]) -> Vec<Rational> {
    let two = Rational::from_integer(2.into());
    values.windows(2).map(|w| (&w[0] + &w[1]) / &two).collect()
}

/// Coordinate descent over midpoints of adjacent grid values; accepts only
/// strict improvements.
fn refine(
    game: &Game,
    x: &Assignment,
    grid: &[Vec<Rational>],
    mut prices: Vec<Rational>,
    mut total: Rational,
) -> Vec<Rational> {
    let probes: Vec<Vec<Rational>> = grid.iter().map(|g| midpoints(g)).collect();
    let mut improved = true;
    while improved {
        improved = false;
        for j in 0..game.m() {
            for probe in &probes[j] {
                let mut trial = prices.clone();
                trial[j] = probe.clone();
                if let Some(t) = total_at(game, x, &trial) {
                    if t < total {
                        prices = trial;
                        total = t;
                        improved = true;
                    }
                }
            }
        }
    }
    prices
}

/// Cheapest subsidies enforcing `x`: zero if `x` admits equilibrium prices,
/// otherwise the minimum over the candidate grid (ties go to the
/// lexicographically smallest price vector).
pub fn min_subsidies(
    game: &Game,
    x: &Assignment,
    options: SubsidySearchOptions,
) -> Result<SubsidySearchResult> {
    min_subsidies_observed(game, x, options, |_, _| {})
}

/// [`min_subsidies`], reporting every complete grid price vector it
/// evaluates (real-vendor prices) together with its subsidy total.
pub fn min_subsidies_observed<F>(
    game: &Game,
    x: &Assignment,
    options: SubsidySearchOptions,
    mut observer: F,
) -> Result<SubsidySearchResult>
where
    F: FnMut(&[Rational], &Rational),
{
    let choices = priceable_choices(game, x)?;
    if let Some((_, p, _)) = equilibrium_for_choices(game, &choices) {
        return Ok(SubsidySearchResult {
            best_price: p,
            best_subsidy: SubsidyVector::zeros(game.m()),
            evaluated: 0,
            certified_exact: true,
            is_equilibrium: true,
        });
    }

    let grid = candidate_grid(game);
    let domains = unary_filter(game, &choices, grid.clone());
    let size = domains[1..]
        .iter()
        .fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128));
    if size == 0 {
        return Err(Error::NoConsistentGridPrice);
    }
    if size > options.budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: size,
            budget: options.budget,
        });
    }

    let m = game.m();
    let mut low_prices = vec![Rational::zero(); m + 1];
    for j in 1..=m {
        low_prices[j] = domains[j][0].clone();
    }
    let mut search = BranchAndBound {
        game,
        observer: &mut observer,
        limits_by_vendor: pair_limits(game, &choices),
        volumes: (0..=m).map(|j| x.attracted_volume(j)).collect(),
        domains,
        low_prices,
        best: None,
        evaluated: 0,
    };
    search.descend(0);
    let evaluated = search.evaluated;
    let (mut prices, total) = search.best.ok_or(Error::NoConsistentGridPrice)?;

    if options.mode == SearchMode::GridRefine {
        prices = refine(game, x, &grid, prices, total);
    }
    let best_price = PriceVector::new(game, prices)?;
    let best_subsidy = subsidy_vector(game, x, &best_price)?;
    Ok(SubsidySearchResult {
        certified_exact: certified_family(game, &choices),
        is_equilibrium: best_subsidy.total().is_zero(),
        best_price,
        best_subsidy,
        evaluated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{one_type_equilibrium, verify};
    use crate::instances::{lemma4_game, theorem4_game, theorem5_game};
    use crate::model::BuyerType;
    use crate::rational::{int, rat};

    const BUDGET: u64 = 10_000_000;

    fn prices(game: &Game, p: &[Rational]) -> PriceVector {
        PriceVector::new(game, p.to_vec()).unwrap()
    }

    #[test]
    fn crossing_diagonal_needs_one_each() {
        let g = lemma4_game();
        let x = Assignment::from_choices(&g, &[1, 2]).unwrap();
        let s = subsidy_vector(&g, &x, &prices(&g, &[int(5), int(5)])).unwrap();
        assert_eq!(s.entries(), &[int(1), int(1)]);
        assert_eq!(s.total(), &int(2));
    }

    #[test]
    fn near_tied_duopoly_at_zero_prices() {
        let eps = rat(1, 10);
        let g = theorem4_game(&eps).unwrap();
        let x = Assignment::from_choices(&g, &[1, 2]).unwrap();
        let s = subsidy_vector(&g, &x, &prices(&g, &[int(0), int(0)])).unwrap();
        assert_eq!(s.entries(), &[rat(9, 10), rat(9, 10)]);
        assert_eq!(s.total(), &rat(9, 5));
    }

    #[test]
    fn equilibria_need_nothing() {
        let g = Game::new(
            vec![BuyerType::new(int(1), vec![int(10), int(7)])],
            vec![int(2), int(1)],
        )
        .unwrap();
        let (x, p) = one_type_equilibrium(&g).unwrap();
        assert!(verify(&g, &x, &p).unwrap().is_equilibrium);
        assert!(subsidy_vector(&g, &x, &p).unwrap().total().is_zero());
        let result = min_subsidies(&g, &x, SubsidySearchOptions::grid(BUDGET)).unwrap();
        assert!(result.is_equilibrium && result.certified_exact);
        assert!(result.best_subsidy.total().is_zero());
    }

    #[test]
    fn subsidies_require_consistency() {
        let g = lemma4_game();
        let x = Assignment::from_choices(&g, &[2, 2]).unwrap();
        assert!(matches!(
            subsidy_vector(&g, &x, &prices(&g, &[int(0), int(0)])),
            Err(Error::Inconsistent { buyer_type: 0 })
        ));
    }

    #[test]
    fn enforce_at_cost_monopolist() {
        let g = theorem5_game(&int(4)).unwrap();
        let (x, p, s) = enforce_at_cost(&g);
        assert_eq!(x.choices().unwrap(), vec![1, 1]);
        assert_eq!(p.as_slice(), &[int(0)]);
        assert_eq!(s.entries(), &[int(4)]);

        let g = theorem5_game(&int(100)).unwrap();
        let (_, _, s) = enforce_at_cost(&g);
        assert_eq!(s.total() / crate::model::optimal_welfare(&g), rat(100, 101));

        let flat = Game::new(vec![BuyerType::new(int(1), vec![int(3)])], vec![int(3)]).unwrap();
        let (_, p, s) = enforce_at_cost(&flat);
        assert_eq!((p.as_slice(), s.total()), (&[int(3)][..], &int(0)));
    }

    #[test]
    fn grid_examples() {
        let g = theorem5_game(&int(4)).unwrap();
        assert_eq!(candidate_grid(&g), vec![vec![int(0), int(1), int(4)]]);
        let single = Game::new(vec![BuyerType::new(int(1), vec![int(5)])], vec![int(2)]).unwrap();
        assert_eq!(candidate_grid(&single), vec![vec![int(2), int(5)]]);
    }

    #[test]
    fn monopolist_minimum_is_chi_minus_two() {
        for chi in [3, 4, 5, 10] {
            let g = theorem5_game(&int(chi)).unwrap();
            let (x, _) = optimal_assignment(&g);
            let r = min_subsidies(&g, &x, SubsidySearchOptions::grid(BUDGET)).unwrap();
            assert_eq!(r.best_subsidy.total(), &int(chi - 2), "chi = {chi}");
            assert_eq!(r.best_price.as_slice(), &[int(1)]);
            assert!(r.certified_exact);
        }
    }

    #[test]
    fn near_tied_duopoly_diagonal_minimum() {
        let g = theorem4_game(&rat(1, 10)).unwrap();
        let x = Assignment::from_choices(&g, &[1, 2]).unwrap();
        let r = min_subsidies(&g, &x, SubsidySearchOptions::grid(BUDGET)).unwrap();
        assert_eq!(r.best_subsidy.total(), &rat(9, 5));
        assert!(r.certified_exact);
        let refined = min_subsidies(
            &g,
            &x,
            SubsidySearchOptions {
                mode: SearchMode::GridRefine,
                budget: BUDGET,
            },
        )
        .unwrap();
        assert!(refined.best_subsidy.total() <= r.best_subsidy.total());
    }

    #[test]
    fn search_errors() {
        let g = theorem5_game(&int(4)).unwrap();
        let (x, _) = optimal_assignment(&g);
        assert!(matches!(
            min_subsidies(&g, &x, SubsidySearchOptions::grid(1)),
            Err(Error::BudgetExceeded { .. })
        ));
        let split =
            Assignment::new(&g, vec![vec![rat(1, 2), rat(1, 2)], vec![int(0), int(1)]]).unwrap();
        assert!(matches!(
            min_subsidies(&g, &split, SubsidySearchOptions::grid(BUDGET)),
            Err(Error::FractionalAssignment { .. })
        ));
    }
}
