//! Prices for a fixed assignment: `CandidatePrice`, `ComputePrice`, and the
//! one-buyer-type construction.

use num_traits::{Signed, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::equilibrium::verify::{verify_unchecked, VerifyReport};
use crate::error::{Error, Result};
use crate::model::{optimal_choice, Assignment, Game, PriceVector, ABSTAIN};
use crate::rational::{positive_part, Rational};

/// Rejects split rows and buyers sent to a vendor that cannot serve them
/// at or above cost. Returns the per-type columns.
pub(crate) fn priceable_choices(game: &Game, x: &Assignment) -> Result<Vec<usize>> {
    x.check_for(game)?;
    let choices = x.choices()?;
    for (i, &j) in choices.iter().enumerate() {
        if j != ABSTAIN && game.valuation(i, j) < game.cost(j) {
            return Err(Error::UnpriceableAssignment {
                buyer_type: i,
                vendor: j,
            });
        }
    }
    Ok(choices)
}

/// Seed vendors: those forced to price at cost in any equilibrium with
/// assignment `choices`. Indexed by column; abstain is always a seed.
pub(crate) fn seed_vendors(game: &Game, choices: &[usize]) -> Vec<bool> {
    let m = game.m();
    let mut graph: DiGraph<(), usize> = DiGraph::with_capacity(m + 1, 0);
    let nodes: Vec<NodeIndex> = (0..=m).map(|_| graph.add_node(())).collect();
    // edge j -> j' (j != j') labelled i when type i sits at j and j' offers
    // at least the same surplus
    for (i, &j) in choices.iter().enumerate() {
        let here = game.surplus(i, j);
        for k in 0..=m {
            if k != j && here <= game.surplus(i, k) {
                graph.add_edge(nodes[j], nodes[k], i);
            }
        }
    }

    let mut seed = vec![false; m + 1];
    seed[ABSTAIN] = true;
    for j in 1..=m {
        let mut min_valuation: Option<&Rational> = None;
        for (i, &c) in choices.iter().enumerate() {
            if c == j {
                let v = game.valuation(i, j);
                if min_valuation.is_none_or(|mv| v < mv) {
                    min_valuation = Some(v);
                }
            }
        }
        seed[j] = match min_valuation {
            None => true,
            Some(v) => v == game.cost(j),
        };
    }
    for component in tarjan_scc(&graph) {
        if component.len() > 1 {
            for node in component {
                seed[node.index()] = true;
            }
        }
    }
    // backward closure: anything pointing into the seed set joins it
    let mut changed = true;
    while changed {
        changed = false;
        for edge in graph.raw_edges() {
            let (from, to) = (edge.source().index(), edge.target().index());
            if !seed[from] && seed[to] {
                seed[from] = true;
                changed = true;
            }
        }
    }
    seed
}

/// The unique price vector that can pair with `x` in an equilibrium (on
/// non-empty vendors); empty vendors are priced at cost.
pub fn candidate_price(game: &Game, x: &Assignment) -> Result<PriceVector> {
    let choices = priceable_choices(game, x)?;
    Ok(candidate_from_choices(game, &choices))
}

pub(crate) fn candidate_from_choices(game: &Game, choices: &[usize]) -> PriceVector {
    let m = game.m();
    let seed = seed_vendors(game, choices);
    let prices = (1..=m)
        .map(|j| {
            if seed[j] {
                return game.cost(j).clone();
            }
            choices
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c == j)
                .map(|(i, _)| {
                    let outside = (0..=m)
                        .filter(|&k| seed[k])
                        .map(|k| positive_part(&game.surplus(i, k)))
                        .max()
                        .unwrap_or_else(Rational::zero);
                    game.valuation(i, j) - outside
                })
                .min()
                .expect("non-seed vendors are non-empty")
        })
        .collect::<Vec<_>>();
    debug_assert!(prices.iter().zip(game.costs()).all(|(p, c)| p >= c));
    PriceVector::from_real_prices(prices)
}

/// Finds prices making `x` an equilibrium, if any exist.
///
/// Returns `None` when no price vector works: the candidate price is the
/// only one that can, up to the prices of empty vendors.
pub fn compute_price(game: &Game, x: &Assignment) -> Result<Option<(PriceVector, VerifyReport)>> {
    let choices = priceable_choices(game, x)?;
    Ok(equilibrium_for_choices(game, &choices).map(|(_, p, r)| (p, r)))
}

/// `ComputePrice` on a non-fractional assignment given by its choices.
/// Unpriceable assignments yield `None`.
pub(crate) fn equilibrium_for_choices(
    game: &Game,
    choices: &[usize],
) -> Option<(Assignment, PriceVector, VerifyReport)> {
    if choices
        .iter()
        .enumerate()
        .any(|(i, &j)| j != ABSTAIN && game.valuation(i, j) < game.cost(j))
    {
        return None;
    }
    let x = Assignment::from_choices(game, choices).ok()?;
    let p = candidate_from_choices(game, choices);
    let report = verify_unchecked(game, &x, &p);
    report.is_equilibrium.then_some((x, p, report))
}

/// Equilibrium of a game with a single buyer type: everybody buys from a
/// surplus-maximizing vendor, priced so the runner-up (possibly abstaining)
/// is exactly as attractive; all other vendors price at cost.
pub fn one_type_equilibrium(game: &Game) -> Result<(Assignment, PriceVector)> {
    if game.n() != 1 {
        return Err(Error::InvalidParameter(format!(
            "one_type_equilibrium needs exactly one buyer type, got {}",
            game.n()
        )));
    }
    let best = optimal_choice(game, 0);
    let mut prices = game.costs().to_vec();
    if best != ABSTAIN && !game.surplus(0, best).is_negative() {
        let runner_up = (0..=game.m())
            .filter(|&j| j != best)
            .map(|j| game.surplus(0, j))
            .max()
            .expect("abstain is always a runner-up");
        // runner_up >= 0 because abstain offers surplus 0
        prices[best - 1] = game.valuation(0, best) - runner_up;
    }
    let x = Assignment::from_choices(game, &[best])?;
    Ok((x, PriceVector::new(game, prices)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::verify::verify;
    use crate::instances::lemma4_game;
    use crate::model::BuyerType;
    use crate::rational::{int, rat};

    fn one_type(v: &[i64], c: &[i64]) -> Game {
        Game::new(
            vec![BuyerType::new(int(1), v.iter().map(|&a| int(a)).collect())],
            c.iter().map(|&a| int(a)).collect(),
        )
        .unwrap()
    }

    fn ints(p: &PriceVector) -> Vec<Rational> {
        p.as_slice().to_vec()
    }

    #[test]
    fn candidate_one_type() {
        let g = one_type(&[10, 7], &[2, 1]);
        let x = Assignment::from_choices(&g, &[1]).unwrap();
        assert_eq!(
            ints(&candidate_price(&g, &x).unwrap()),
            vec![int(4), int(1)]
        );
        let (p, report) = compute_price(&g, &x).unwrap().unwrap();
        assert_eq!(ints(&p), vec![int(4), int(1)]);
        assert_eq!(report.per_vendor[0].theta, int(2));
        assert_eq!(report.per_vendor[0].utility, int(2));
    }

    #[test]
    fn candidate_all_abstain_is_cost() {
        let g = one_type(&[10, 7], &[2, 1]);
        let x = Assignment::all_abstain(&g);
        assert_eq!(
            ints(&candidate_price(&g, &x).unwrap()),
            vec![int(2), int(1)]
        );
    }

    #[test]
    fn compute_price_crossing_duopoly_has_none() {
        let g = lemma4_game();
        let x = Assignment::from_choices(&g, &[1, 2]).unwrap();
        assert_eq!(compute_price(&g, &x).unwrap(), None);
    }

    #[test]
    fn compute_price_rejects_worse_vendor() {
        // type strictly prefers vendor 1 even at cost
        let g = one_type(&[10, 3], &[0, 0]);
        let x = Assignment::from_choices(&g, &[2]).unwrap();
        assert_eq!(compute_price(&g, &x).unwrap(), None);
    }

    #[test]
    fn candidate_errors() {
        let g = one_type(&[1, 3], &[2, 0]);
        let x = Assignment::from_choices(&g, &[1]).unwrap();
        assert_eq!(
            candidate_price(&g, &x),
            Err(Error::UnpriceableAssignment {
                buyer_type: 0,
                vendor: 1
            })
        );
        let split = Assignment::new(&g, vec![vec![int(0), rat(1, 2), rat(1, 2)]]).unwrap();
        assert_eq!(
            candidate_price(&g, &split),
            Err(Error::FractionalAssignment { buyer_type: 0 })
        );
    }

    #[test]
    fn cycle_vendors_price_at_cost() {
        // two types with identical surplus at both vendors: H has a 2-cycle
        let g = Game::new(
            vec![
                BuyerType::new(int(1), vec![int(4), int(4)]),
                BuyerType::new(int(1), vec![int(4), int(4)]),
            ],
            vec![int(0), int(0)],
        )
        .unwrap();
        let x = Assignment::from_choices(&g, &[1, 2]).unwrap();
        assert_eq!(seed_vendors(&g, &[1, 2]), vec![true, true, true]);
        let p = candidate_price(&g, &x).unwrap();
        assert_eq!(ints(&p), vec![int(0), int(0)]);
        assert!(verify(&g, &x, &p).unwrap().is_equilibrium);
    }

    #[test]
    fn one_type_examples() {
        let g = one_type(&[10, 7], &[2, 1]);
        let (x, p) = one_type_equilibrium(&g).unwrap();
        assert_eq!(x.choices().unwrap(), vec![1]);
        assert_eq!(ints(&p), vec![int(4), int(1)]);
        assert!(verify(&g, &x, &p).unwrap().is_equilibrium);

        let mono = one_type(&[5], &[1]);
        let (x, p) = one_type_equilibrium(&mono).unwrap();
        assert_eq!((x.choices().unwrap(), ints(&p)), (vec![1], vec![int(5)]));

        let tie = one_type(&[3, 3], &[0, 0]);
        let (x, p) = one_type_equilibrium(&tie).unwrap();
        assert_eq!(
            (x.choices().unwrap(), ints(&p)),
            (vec![1], vec![int(0), int(0)])
        );
        assert!(verify(&tie, &x, &p).unwrap().is_equilibrium);
    }

    #[test]
    fn one_type_nobody_buys() {
        let g = one_type(&[1, 2], &[3, 4]);
        let (x, p) = one_type_equilibrium(&g).unwrap();
        assert_eq!(x.choices().unwrap(), vec![ABSTAIN]);
        assert_eq!(ints(&p), vec![int(3), int(4)]);
        assert!(verify(&g, &x, &p).unwrap().is_equilibrium);
    }

    #[test]
    fn one_type_requires_single_type() {
        assert!(matches!(
            one_type_equilibrium(&lemma4_game()),
            Err(Error::InvalidParameter(_))
        ));
    }
}
