//! Best responses of single vendors and the `Verify` decision procedure.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{first_inconsistency, vendor_utility_unchecked, Assignment, Game, PriceVector};
use crate::rational::Rational;

/// The most profitable unilateral deviation of one vendor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestResponse {
    /// Deviation price attaining `theta` (the highest one on ties).
    pub price: Rational,
    /// Maximum utility over all deviations and consistent reassignments.
    pub theta: Rational,
    /// Buyer types the vendor attracts at `price`.
    pub attracted: Vec<usize>,
}

/// Highest price at which vendor `j` still attracts each buyer type, given
/// the other prices in `prices` (indexed by column, entry 0 = abstain).
/// See [`attraction_thresholds`].
///
/// `tau_ij = v_ij - max(0, max_{j' != j} (v_ij' - p_j'))`. At exactly this
/// price the type is indifferent, and the deviator may claim it.
pub(crate) fn thresholds_unchecked(game: &Game, prices: &[Rational], j: usize) -> Vec<Rational> {
    (0..game.n())
        .map(|i| {
            let mut alternative = Rational::zero();
            for k in 1..=game.m() {
                if k == j {
                    continue;
                }
                let u = game.valuation(i, k) - &prices[k];
                if u > alternative {
                    alternative = u;
                }
            }
            game.valuation(i, j) - alternative
        })
        .collect()
}

/// Maximizes `(t - cost) * sum_{i: tau_i >= t} mu_i` over `t >= cost`.
/// Returns `(price, value)`; the maximum is attained at `cost` or at one
/// of the thresholds.
pub(crate) fn best_threshold(
    thresholds: &[Rational],
    volumes: &[Rational],
    cost: &Rational,
) -> (Rational, Rational) {
    let mut order: Vec<usize> = (0..thresholds.len())
        .filter(|&i| &thresholds[i] >= cost)
        .collect();
    order.sort_by(|&a, &b| thresholds[b].cmp(&thresholds[a]));

    let mut best_price = cost.clone();
    let mut best_value = Rational::zero();
    let mut found = false;
    let mut volume = Rational::zero();
    let mut k = 0;
    while k < order.len() {
        let t = &thresholds[order[k]];
        while k < order.len() && &thresholds[order[k]] == t {
            volume += &volumes[order[k]];
            k += 1;
        }
        let value = (t - cost) * &volume;
        if !found || value > best_value {
            best_price = t.clone();
            best_value = value;
            found = true;
        }
    }
    (best_price, best_value)
}

/// Per buyer type, the highest price at which real vendor `j` attracts it
/// against the other prices in `p` (the price of `j` itself is ignored).
pub fn attraction_thresholds(game: &Game, p: &PriceVector, j: usize) -> Result<Vec<Rational>> {
    p.check_for(game)?;
    game.check_real_vendor(j)?;
    Ok(thresholds_unchecked(game, p.columns(), j))
}

pub(crate) fn best_response_unchecked(game: &Game, prices: &[Rational], j: usize) -> BestResponse {
    let tau = thresholds_unchecked(game, prices, j);
    let (price, theta) = best_threshold(&tau, game.volumes(), game.cost(j));
    let attracted = (0..game.n()).filter(|&i| tau[i] >= price).collect();
    BestResponse {
        price,
        theta,
        attracted,
    }
}

/// Best deviation of real vendor `j` against the other prices in `p`.
pub fn best_response(game: &Game, p: &PriceVector, j: usize) -> Result<BestResponse> {
    p.check_for(game)?;
    game.check_real_vendor(j)?;
    Ok(best_response_unchecked(game, p.columns(), j))
}

/// Deviation analysis of one vendor inside a [`VerifyReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VendorReport {
    pub theta: Rational,
    pub utility: Rational,
    /// `theta - utility`, the subsidy that would stop any deviation.
    pub slack: Rational,
    pub best_deviation_price: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub consistent: bool,
    /// One entry per real vendor, in vendor order.
    pub per_vendor: Vec<VendorReport>,
    pub is_equilibrium: bool,
}

impl VerifyReport {
    pub fn total_slack(&self) -> Rational {
        self.per_vendor
            .iter()
            .fold(Rational::zero(), |acc, v| acc + &v.slack)
    }
}

/// Decides whether `(x, p)` is a pure Nash equilibrium.
pub fn verify(game: &Game, x: &Assignment, p: &PriceVector) -> Result<VerifyReport> {
    x.check_for(game)?;
    p.check_for(game)?;
    Ok(verify_unchecked(game, x, p))
}

pub(crate) fn vendor_reports(game: &Game, x: &Assignment, p: &PriceVector) -> Vec<VendorReport> {
    (1..=game.m())
        .map(|j| {
            let br = best_response_unchecked(game, p.columns(), j);
            let utility = vendor_utility_unchecked(game, x, p, j);
            VendorReport {
                slack: &br.theta - &utility,
                theta: br.theta,
                utility,
                best_deviation_price: br.price,
            }
        })
        .collect()
}

pub(crate) fn verify_unchecked(game: &Game, x: &Assignment, p: &PriceVector) -> VerifyReport {
    let consistent = first_inconsistency(game, x, p).is_none();
    let per_vendor = vendor_reports(game, x, p);
    let is_equilibrium = consistent && per_vendor.iter().all(|v| v.slack.is_zero());
    debug_assert!(!consistent || per_vendor.iter().all(|v| !v.slack.is_negative()));
    VerifyReport {
        consistent,
        per_vendor,
        is_equilibrium,
    }
}

/// Rejects `(x, p)` pairs that are not consistent.
pub(crate) fn require_consistent(game: &Game, x: &Assignment, p: &PriceVector) -> Result<()> {
    match first_inconsistency(game, x, p) {
        Some(buyer_type) => Err(Error::Inconsistent { buyer_type }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{lemma4_game, theorem5_game};
    use crate::model::BuyerType;
    use crate::rational::int;

    fn prices(game: &Game, p: &[i64]) -> PriceVector {
        PriceVector::new(game, p.iter().map(|&v| int(v)).collect()).unwrap()
    }

    #[test]
    fn crossing_duopoly_undercut() {
        let g = lemma4_game();
        let br = best_response(&g, &prices(&g, &[5, 5]), 2).unwrap();
        assert_eq!(br.price, int(3));
        assert_eq!(br.theta, int(6));
        assert_eq!(br.attracted, vec![0, 1]);
    }

    #[test]
    fn monopolist_extracts_valuation() {
        let g = Game::new(vec![BuyerType::new(int(1), vec![int(10)])], vec![int(0)]).unwrap();
        for p in [0, 3, 10, 12] {
            let br = best_response(&g, &prices(&g, &[p]), 1).unwrap();
            assert_eq!((br.price, br.theta), (int(10), int(10)));
        }
    }

    #[test]
    fn monopolist_serves_high_type_only() {
        let g = theorem5_game(&int(4)).unwrap();
        let br = best_response(&g, &prices(&g, &[1]), 1).unwrap();
        assert_eq!(
            (br.price, br.theta, br.attracted),
            (int(4), int(4), vec![0])
        );
    }

    #[test]
    fn theta_is_zero_without_customers() {
        let g = Game::new(vec![BuyerType::new(int(1), vec![int(1)])], vec![int(3)]).unwrap();
        let br = best_response(&g, &prices(&g, &[3]), 1).unwrap();
        assert_eq!((br.price, br.theta), (int(3), int(0)));
        assert!(br.attracted.is_empty());
    }

    #[test]
    fn best_response_rejects_abstain() {
        let g = lemma4_game();
        assert_eq!(
            best_response(&g, &prices(&g, &[1, 1]), 0),
            Err(Error::AbstainVendor)
        );
    }

    #[test]
    fn verify_crossing_duopoly_diagonal() {
        let g = lemma4_game();
        let x = Assignment::from_choices(&g, &[1, 2]).unwrap();
        let report = verify(&g, &x, &prices(&g, &[5, 5])).unwrap();
        assert!(report.consistent);
        assert!(!report.is_equilibrium);
        for v in &report.per_vendor {
            assert_eq!(
                (v.theta.clone(), v.utility.clone(), v.slack.clone()),
                (int(6), int(5), int(1))
            );
        }
    }

    #[test]
    fn verify_flags_inconsistency() {
        let g = lemma4_game();
        let x = Assignment::from_choices(&g, &[2, 2]).unwrap();
        let report = verify(&g, &x, &prices(&g, &[0, 0])).unwrap();
        assert!(!report.consistent);
        assert!(!report.is_equilibrium);
    }
}
