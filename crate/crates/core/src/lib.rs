//! Exact solvers for full-information price competition games.
//!
//! Buyer types choose among vendors (and an implicit abstain option) to
//! maximize `valuation - price`; vendors choose prices at or above their
//! production cost. The crate verifies and searches pure Nash equilibria,
//! measures the price of anarchy, and computes the subsidies that enforce a
//! given assignment. All arithmetic is exact over arbitrary-precision
//! rationals.

// vendor columns index several parallel arrays at once
#![allow(clippy::needless_range_loop)]

pub mod equilibrium;
pub mod error;
pub mod instances;
pub mod model;
pub mod rational;
pub mod subsidy;

pub use equilibrium::{
    best_response, brute_force_equilibria, candidate_price, compute_price, enumerate_equilibria,
    one_type_equilibrium, price_of_anarchy, verify, BestResponse, EnumerateOptions, Equilibrium,
    EquilibriumSet, PriceOfAnarchy, VendorReport, VerifyReport,
};
pub use error::{Error, Result};
pub use model::{
    buyer_type_utility, demand_set, is_consistent, optimal_assignment, optimal_welfare,
    social_welfare, vendor_utility, Assignment, BuyerType, Family, Game, PriceVector, ABSTAIN,
};
pub use rational::{format_rational, parse_rational, Rational};
pub use subsidy::{
    candidate_grid, enforce_at_cost, min_subsidies, min_subsidies_observed, subsidy_vector,
    SearchMode, SubsidySearchOptions, SubsidySearchResult, SubsidyVector,
};
