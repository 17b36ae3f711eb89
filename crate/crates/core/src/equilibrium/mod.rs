//! Equilibrium verification, pricing, and exhaustive search.

mod candidate;
mod region;
mod search;
mod verify;

pub use candidate::{candidate_price, compute_price, one_type_equilibrium};
pub(crate) use candidate::{equilibrium_for_choices, priceable_choices};
pub use region::{
    pair_boundaries, pair_regions, region_witness, PairRegion, ProfileRegion, Region,
};
pub use search::{
    assignment_count, brute_force_bounded, brute_force_equilibria, enumerate_equilibria,
    price_of_anarchy, profile_count, EnumerateOptions, Equilibrium, EquilibriumSet, PriceOfAnarchy,
    SearchOutcome,
};
pub use verify::{
    attraction_thresholds, best_response, verify, BestResponse, VendorReport, VerifyReport,
};
pub(crate) use verify::{best_threshold, require_consistent, thresholds_unchecked, vendor_reports};
