use thiserror::Error;

use crate::rational::Rational;

/// Errors reported by the model, the solvers and the instance generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("the abstain option (vendor 0) has no price or utility")]
    AbstainVendor,

    #[error("price {price} of vendor {vendor} is below its production cost {cost}")]
    PriceBelowCost {
        vendor: usize,
        price: Box<Rational>,
        cost: Box<Rational>,
    },

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("buyer type {buyer_type} is split across several vendors")]
    FractionalAssignment { buyer_type: usize },

    #[error(
        "buyer type {buyer_type} is assigned to vendor {vendor} whose cost exceeds its valuation; \
         no consistent price vector exists"
    )]
    UnpriceableAssignment { buyer_type: usize, vendor: usize },

    #[error("assignment is not consistent to the price vector (buyer type {buyer_type})")]
    Inconsistent { buyer_type: usize },

    #[error("no candidate grid price keeps the assignment consistent")]
    NoConsistentGridPrice,

    #[error("budget exceeded: {needed} evaluations needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
