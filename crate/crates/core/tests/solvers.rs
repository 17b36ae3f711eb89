mod oracle;

use std::collections::BTreeSet;

use num_traits::Zero;
use pricecomp::equilibrium::{
    brute_force_equilibria, candidate_price, enumerate_equilibria, EnumerateOptions,
};
use pricecomp::rational::int;
use pricecomp::{optimal_welfare, social_welfare, verify, Assignment, Game, Rational};

use oracle::{sweep_game, IntGame};

const BUDGET: u64 = 10_000_000;

fn brute_choices(game: &Game) -> BTreeSet<Vec<usize>> {
    brute_force_equilibria(game, BUDGET)
        .unwrap()
        .iter()
        .map(|e| e.assignment.choices().unwrap())
        .collect()
}

#[test]
fn brute_force_matches_grid_oracle() {
    for seed in 0..60 {
        let game = sweep_game(seed, 3);
        let reference = IntGame::from_game(&game).unwrap();
        let oracle = reference.grid_equilibria();
        let oracle_choices: BTreeSet<Vec<usize>> = oracle.iter().map(|(x, _)| x.clone()).collect();
        assert_eq!(brute_choices(&game), oracle_choices, "seed {seed}");
    }
}

#[test]
fn candidate_price_recovers_every_equilibrium_price() {
    for seed in 0..60 {
        let game = sweep_game(seed, 3);
        for (choices, prices) in IntGame::from_game(&game).unwrap().grid_equilibria() {
            let x = Assignment::from_choices(&game, &choices).unwrap();
            let candidate = candidate_price(&game, &x).unwrap();
            for j in 1..=game.m() {
                if !x.is_empty_vendor(j) {
                    assert_eq!(
                        candidate.price(j),
                        &int(prices[j - 1]),
                        "seed {seed}, vendor {j}"
                    );
                }
            }
        }
    }
}

#[test]
fn equilibria_welfare_is_within_factor_n() {
    for seed in 0..60 {
        let game = sweep_game(seed, 3);
        let optimum = optimal_welfare(&game);
        let n = int(game.n() as i64);
        for e in &brute_force_equilibria(&game, BUDGET).unwrap() {
            assert!(
                verify(&game, &e.assignment, &e.prices)
                    .unwrap()
                    .is_equilibrium
            );
            assert!(
                &n * social_welfare(&game, &e.assignment).unwrap() >= optimum,
                "seed {seed}"
            );
        }
    }
}

#[test]
fn enumerate_agrees_with_brute_force() {
    for seed in 0..60 {
        let game = sweep_game(seed, 2);
        let brute = brute_force_equilibria(&game, BUDGET).unwrap();
        let enumerated =
            enumerate_equilibria(&game, EnumerateOptions::with_budget(BUDGET)).unwrap();
        assert_eq!(brute, enumerated, "seed {seed}");
    }
}

#[test]
fn representatives_reach_every_welfare_value() {
    let distinct = |values: Vec<Rational>| values.into_iter().collect::<BTreeSet<_>>();
    for seed in 0..60 {
        let game = sweep_game(seed, 2);
        let brute = brute_force_equilibria(&game, BUDGET).unwrap();
        let options = EnumerateOptions {
            expand_ties: false,
            ..EnumerateOptions::with_budget(BUDGET)
        };
        let representatives = enumerate_equilibria(&game, options).unwrap();
        assert_eq!(brute.is_empty(), representatives.is_empty(), "seed {seed}");
        assert_eq!(
            distinct(brute.welfare_values(&game)),
            distinct(representatives.welfare_values(&game)),
            "seed {seed}"
        );
        assert!(
            representatives.iter().all(|e| brute.iter().any(|b| b == e)),
            "seed {seed}"
        );
    }
}

#[test]
fn enumerate_without_pruning_finds_the_same_equilibria() {
    for seed in 0..12 {
        let game = sweep_game(seed, 2);
        let pruned = enumerate_equilibria(&game, EnumerateOptions::with_budget(BUDGET)).unwrap();
        let full = enumerate_equilibria(
            &game,
            EnumerateOptions {
                prune_infeasible: false,
                ..EnumerateOptions::with_budget(BUDGET)
            },
        )
        .unwrap();
        assert_eq!(pruned, full, "seed {seed}");
    }
}

#[test]
fn oracle_welfare_agrees_with_model() {
    for seed in 0..30 {
        let game = sweep_game(seed, 3);
        let reference = IntGame::from_game(&game).unwrap();
        assert_eq!(optimal_welfare(&game), int(reference.optimal_welfare()));
        let all_abstain = Assignment::all_abstain(&game);
        assert!(social_welfare(&game, &all_abstain).unwrap().is_zero());
    }
}
