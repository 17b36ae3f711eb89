//! Named instance families, hardness reductions, and random games.
//!
//! Every generator tags its output with a [`Family`].

mod nodecover;
mod x3c;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{BuyerType, Family, Game};
use crate::rational::{int, Rational};

pub use nodecover::{
    lemma8_subsidy_formula, min_node_cover_bruteforce, nodecover_reduction, Hypergraph,
    NodeCoverReduction,
};
pub use x3c::{x3c_reduction, X3cInstance, X3cReduction};

fn require(condition: bool, message: impl FnOnce() -> String) -> Result<()> {
    if condition {
        Ok(())
    } else {
        Err(Error::InvalidParameter(message()))
    }
}

/// One vendor at cost 0 facing types of geometrically shrinking volume
/// `alpha^(i-1)`. Type `i < n` values the vendor at the inverse of the
/// volume of types `i..n`; the last type at `(1 + alpha) / mu_n`.
pub fn lemma1_family(n: usize, alpha: &Rational) -> Result<Game> {
    require(n >= 1, || "lemma1 needs n >= 1".into())?;
    require(
        alpha > &Rational::zero() && alpha < &Rational::one(),
        || format!("lemma1 needs 0 < alpha < 1, got {alpha}"),
    )?;
    let mut volumes = Vec::with_capacity(n);
    let mut mu = Rational::one();
    for _ in 0..n {
        volumes.push(mu.clone());
        mu *= alpha;
    }
    let mut tails = vec![Rational::zero(); n + 1];
    for i in (0..n).rev() {
        tails[i] = &tails[i + 1] + &volumes[i];
    }
    let buyer_types = (0..n)
        .map(|i| {
            let v = if i + 1 < n {
                tails[i].recip()
            } else {
                (Rational::one() + alpha) / &volumes[i]
            };
            BuyerType::new(volumes[i].clone(), vec![v])
        })
        .collect();
    Ok(Game::new(buyer_types, vec![Rational::zero()])?.with_family(Family::Lemma1))
}

fn symmetric_duopoly(own: Rational, other: Rational) -> Vec<BuyerType> {
    vec![
        BuyerType::new(Rational::one(), vec![own.clone(), other.clone()]),
        BuyerType::new(Rational::one(), vec![other, own]),
    ]
}

/// Two unit types, two free vendors, valuations `[[5, 3], [3, 5]]`. Has no
/// equilibrium.
pub fn lemma4_game() -> Game {
    Game::new(symmetric_duopoly(int(5), int(3)), vec![Rational::zero(); 2])
        .expect("fixed valid game")
        .with_family(Family::Lemma4)
}

/// Valuations `[[4 - eps, 3], [3, 4 - eps]]`, unit volumes, zero costs.
pub fn theorem4_game(eps: &Rational) -> Result<Game> {
    require(eps > &Rational::zero() && eps < &Rational::one(), || {
        format!("theorem4 needs 0 < eps < 1, got {eps}")
    })?;
    Ok(Game::new(
        symmetric_duopoly(int(4) - eps, int(3)),
        vec![Rational::zero(); 2],
    )?
    .with_family(Family::Theorem4))
}

/// A free monopolist facing two unit types valuing it at `chi` and 1.
pub fn theorem5_game(chi: &Rational) -> Result<Game> {
    require(chi > &int(2), || {
        format!("theorem5 needs chi > 2, got {chi}")
    })?;
    Ok(Game::new(
        vec![
            BuyerType::new(Rational::one(), vec![chi.clone()]),
            BuyerType::new(Rational::one(), vec![Rational::one()]),
        ],
        vec![Rational::zero()],
    )?
    .with_family(Family::Theorem5))
}

/// Deterministic game with integer data: volumes in `1..=bound`,
/// valuations in `0..=bound`, costs in `0..=bound / 2`.
pub fn random_game(seed: u64, n: usize, m: usize, bound: u32) -> Result<Game> {
    require(n >= 1 && m >= 1, || {
        format!("random games need n, m >= 1, got n={n}, m={m}")
    })?;
    require(bound >= 1, || "random games need value bound >= 1".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |lo: u32, hi: u32| int(i64::from(rng.gen_range(lo..=hi)));
    let buyer_types = (0..n)
        .map(|_| {
            let volume = draw(1, bound);
            let valuations = (0..m).map(|_| draw(0, bound)).collect();
            BuyerType::new(volume, valuations)
        })
        .collect();
    let costs = (0..m).map(|_| draw(0, bound / 2)).collect();
    Ok(Game::new(buyer_types, costs)?.with_family(Family::Random))
}
