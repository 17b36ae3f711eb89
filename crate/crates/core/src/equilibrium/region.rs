//! Preference-profile regions and their feasibility.
//!
//! For a pair of columns `(a, b)` the sign pattern of
//! `v_ia - v_ib - (p_a - p_b)` over all buyer types only changes when the
//! price difference `d = p_a - p_b` crosses one of the at most `n` distinct
//! values `v_ia - v_ib`. A [`Region`] names one cell of that partition: a
//! boundary value itself or an open interval between consecutive values.
//! A [`ProfileRegion`] fixes one cell per pair; it is realizable iff the
//! induced system of difference constraints (with strict inequalities) is
//! feasible.

use num_traits::{One, Signed, Zero};

use crate::model::Game;
use crate::rational::Rational;

/// One cell for `d = p_first - p_second`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    /// `d` equals this boundary.
    Equal(Rational),
    /// `lower < d < upper`; `None` means unbounded on that side.
    Between {
        lower: Option<Rational>,
        upper: Option<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRegion {
    pub first: usize,
    pub second: usize,
    pub region: Region,
}

/// A choice of cell for (a subset of) the column pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProfileRegion {
    pub pairs: Vec<PairRegion>,
}

/// Sorted distinct values of `v_ia - v_ib` over buyer types.
pub fn pair_boundaries(game: &Game, a: usize, b: usize) -> Vec<Rational> {
    let mut deltas: Vec<Rational> = (0..game.n())
        .map(|i| game.valuation(i, a) - game.valuation(i, b))
        .collect();
    deltas.sort();
    deltas.dedup();
    deltas
}

/// All `2r + 1` cells induced by `r` sorted boundaries, in increasing order.
pub fn pair_regions(boundaries: &[Rational]) -> Vec<Region> {
    let mut regions = Vec::with_capacity(2 * boundaries.len() + 1);
    let mut lower = None;
    for b in boundaries {
        regions.push(Region::Between {
            lower: lower.clone(),
            upper: Some(b.clone()),
        });
        regions.push(Region::Equal(b.clone()));
        lower = Some(b.clone());
    }
    regions.push(Region::Between { lower, upper: None });
    regions
}

/// `value + eps * infinitesimal`, compared lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Lex {
    value: Rational,
    eps: i64,
}

impl Lex {
    fn zero() -> Self {
        Lex {
            value: Rational::zero(),
            eps: 0,
        }
    }

    fn plus(&self, other: &Lex) -> Lex {
        Lex {
            value: &self.value + &other.value,
            eps: self.eps + other.eps,
        }
    }
}

/// `p[to] - p[from] <= weight`.
#[derive(Debug, Clone)]
struct Constraint {
    from: usize,
    to: usize,
    weight: Lex,
}

/// Difference-constraint system over columns `0..columns`.
#[derive(Debug, Clone, Default)]
pub(crate) struct DifferenceSystem {
    columns: usize,
    constraints: Vec<Constraint>,
}

impl DifferenceSystem {
    pub(crate) fn new(columns: usize) -> Self {
        DifferenceSystem {
            columns,
            constraints: Vec::new(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.constraints.len()
    }

    pub(crate) fn truncate(&mut self, len: usize) {
        self.constraints.truncate(len);
    }

    // p[a] - p[b] <= w (strict: < w)
    fn upper(&mut self, a: usize, b: usize, w: &Rational, strict: bool) {
        self.constraints.push(Constraint {
            from: b,
            to: a,
            weight: Lex {
                value: w.clone(),
                eps: if strict { -1 } else { 0 },
            },
        });
    }

    pub(crate) fn push_region(&mut self, pair: &PairRegion) {
        let (a, b) = (pair.first, pair.second);
        match &pair.region {
            Region::Equal(d) => {
                self.upper(a, b, d, false);
                self.upper(b, a, &-d, false);
            }
            Region::Between { lower, upper } => {
                if let Some(u) = upper {
                    self.upper(a, b, u, true);
                }
                if let Some(l) = lower {
                    self.upper(b, a, &-l, true);
                }
            }
        }
    }

    /// Bellman-Ford from a virtual source; `None` on a negative cycle.
    fn potentials(&self) -> Option<Vec<Lex>> {
        let mut dist = vec![Lex::zero(); self.columns];
        for round in 0..=self.columns {
            let mut changed = false;
            for c in &self.constraints {
                let candidate = dist[c.from].plus(&c.weight);
                if candidate < dist[c.to] {
                    dist[c.to] = candidate;
                    changed = true;
                }
            }
            if !changed {
                return Some(dist);
            }
            if round == self.columns {
                break;
            }
        }
        None
    }

    pub(crate) fn is_feasible(&self) -> bool {
        self.potentials().is_some()
    }

    /// Concrete solution with column 0 pinned at 0.
    pub(crate) fn solve(&self) -> Option<Vec<Rational>> {
        let dist = self.potentials()?;
        // largest infinitesimal (capped at 1) that keeps every constraint
        let mut eps = Rational::one();
        for c in &self.constraints {
            let slack = &dist[c.to].value - &dist[c.from].value - &c.weight.value;
            let rate = dist[c.to].eps - dist[c.from].eps - c.weight.eps;
            if slack.is_negative() && rate > 0 {
                let bound = -slack / Rational::from_integer(rate.into());
                if bound < eps {
                    eps = bound;
                }
            }
        }
        let concrete: Vec<Rational> = dist
            .iter()
            .map(|d| &d.value + &eps * Rational::from_integer(d.eps.into()))
            .collect();
        Some(concrete.iter().map(|v| v - &concrete[0]).collect())
    }
}

/// A price vector (abstain pinned at 0, not checked against costs)
/// realizing every pair cell of `region`, or `None` if the cells
/// contradict each other. Returned prices cover the real vendors only.
pub fn region_witness(game: &Game, region: &ProfileRegion) -> Option<Vec<Rational>> {
    let mut system = DifferenceSystem::new(game.m() + 1);
    for pair in &region.pairs {
        if pair.first > game.m() || pair.second > game.m() {
            return None;
        }
        system.push_region(pair);
    }
    system.solve().map(|mut w| {
        w.remove(0);
        w
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::lemma4_game;
    use crate::model::BuyerType;
    use crate::rational::int;

    fn pair(first: usize, second: usize, region: Region) -> PairRegion {
        PairRegion {
            first,
            second,
            region,
        }
    }

    fn satisfies(w: &[Rational], pair: &PairRegion) -> bool {
        let at = |j: usize| {
            if j == 0 {
                Rational::zero()
            } else {
                w[j - 1].clone()
            }
        };
        let d = at(pair.first) - at(pair.second);
        match &pair.region {
            Region::Equal(v) => &d == v,
            Region::Between { lower, upper } => {
                lower.as_ref().is_none_or(|l| &d > l) && upper.as_ref().is_none_or(|u| &d < u)
            }
        }
    }

    #[test]
    fn crossing_duopoly_tie_point() {
        let g = lemma4_game();
        let region = ProfileRegion {
            pairs: vec![
                pair(1, 2, Region::Equal(int(0))),
                pair(1, 0, Region::Equal(int(5))),
                pair(2, 0, Region::Equal(int(5))),
            ],
        };
        assert_eq!(region_witness(&g, &region), Some(vec![int(5), int(5)]));
    }

    #[test]
    fn contradictory_cycle() {
        let g = Game::new(
            vec![BuyerType::new(int(1), vec![int(1), int(1), int(1)])],
            vec![int(0); 3],
        )
        .unwrap();
        let region = ProfileRegion {
            pairs: vec![
                pair(1, 2, Region::Equal(int(1))),
                pair(2, 3, Region::Equal(int(1))),
                pair(1, 3, Region::Equal(int(0))),
            ],
        };
        assert_eq!(region_witness(&g, &region), None);
    }

    #[test]
    fn above_every_valuation() {
        let g = Game::new(
            vec![
                BuyerType::new(int(1), vec![int(2)]),
                BuyerType::new(int(1), vec![int(7)]),
            ],
            vec![int(0)],
        )
        .unwrap();
        let bounds = pair_boundaries(&g, 1, 0);
        assert_eq!(bounds, vec![int(2), int(7)]);
        let regions = pair_regions(&bounds);
        assert_eq!(regions.len(), 5);
        let top = ProfileRegion {
            pairs: vec![pair(1, 0, regions[4].clone())],
        };
        assert_eq!(region_witness(&g, &top), Some(vec![int(8)]));
    }

    #[test]
    fn strict_cells_get_interior_witnesses() {
        let g = lemma4_game();
        let b12 = pair_regions(&pair_boundaries(&g, 1, 2));
        let b10 = pair_regions(&pair_boundaries(&g, 1, 0));
        let b20 = pair_regions(&pair_boundaries(&g, 2, 0));
        for r12 in &b12 {
            for r10 in &b10 {
                for r20 in &b20 {
                    let region = ProfileRegion {
                        pairs: vec![
                            pair(1, 2, r12.clone()),
                            pair(1, 0, r10.clone()),
                            pair(2, 0, r20.clone()),
                        ],
                    };
                    if let Some(w) = region_witness(&g, &region) {
                        for p in &region.pairs {
                            assert!(satisfies(&w, p), "{w:?} violates {p:?}");
                        }
                    }
                }
            }
        }
    }
}
