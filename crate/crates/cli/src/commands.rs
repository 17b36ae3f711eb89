//! Solver commands. Each returns its report and exit code.

use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use pricecomp::equilibrium::{assignment_count, brute_force_bounded, profile_count, SearchOutcome};
use pricecomp::rational::int;
use pricecomp::{
    candidate_price, compute_price, enforce_at_cost, enumerate_equilibria, format_rational,
    min_subsidies, optimal_assignment, optimal_welfare, price_of_anarchy, social_welfare,
    subsidy_vector, verify, Assignment, EnumerateOptions, EquilibriumSet, Error, Game,
    PriceOfAnarchy, PriceVector, SearchMode, SubsidySearchOptions, VerifyReport,
};

use crate::document::{
    rationals, read_json, AssignmentDocument, AssignmentEntry, GameDocument, PricesDocument,
};
use crate::error::{CliError, CliResult, EXIT_BUDGET, EXIT_FALSE, EXIT_OK};

pub struct Response {
    pub report: Value,
    pub code: i32,
    /// Human diagnostic for stderr.
    pub note: Option<String>,
}

fn respond<T: Serialize>(report: T, code: i32, note: Option<String>) -> Response {
    Response {
        report: serde_json::to_value(report).expect("reports serialize"),
        code,
        note,
    }
}

pub fn load_game(path: &Path) -> CliResult<Game> {
    read_json::<GameDocument>(path)?.to_game()
}

pub fn load_assignment(path: &Path, game: &Game) -> CliResult<Assignment> {
    read_json::<AssignmentDocument>(path)?.to_assignment(game)
}

pub fn load_prices(path: &Path, game: &Game) -> CliResult<PriceVector> {
    read_json::<PricesDocument>(path)?.to_prices(game)
}

fn entries(x: &Assignment) -> Vec<AssignmentEntry> {
    AssignmentDocument::from_assignment(x).assignment
}

#[derive(Debug, Serialize)]
struct VendorJson {
    vendor: usize,
    price: String,
    utility: String,
    theta: String,
    slack: String,
    best_deviation_price: String,
}

#[derive(Debug, Serialize)]
struct VerifyJson {
    command: &'static str,
    consistent: bool,
    is_equilibrium: bool,
    total_slack: String,
    vendors: Vec<VendorJson>,
}

fn verify_json(command: &'static str, p: &PriceVector, report: &VerifyReport) -> VerifyJson {
    VerifyJson {
        command,
        consistent: report.consistent,
        is_equilibrium: report.is_equilibrium,
        total_slack: format_rational(&report.total_slack()),
        vendors: report
            .per_vendor
            .iter()
            .enumerate()
            .map(|(k, v)| VendorJson {
                vendor: k + 1,
                price: format_rational(p.price(k + 1)),
                utility: format_rational(&v.utility),
                theta: format_rational(&v.theta),
                slack: format_rational(&v.slack),
                best_deviation_price: format_rational(&v.best_deviation_price),
            })
            .collect(),
    }
}

pub fn cmd_verify(game: &Path, assignment: &Path, prices: &Path) -> CliResult<Response> {
    let game = load_game(game)?;
    let x = load_assignment(assignment, &game)?;
    let p = load_prices(prices, &game)?;
    let report = verify(&game, &x, &p)?;
    let code = if report.is_equilibrium {
        EXIT_OK
    } else {
        EXIT_FALSE
    };
    let note =
        (!report.consistent).then(|| "assignment is not consistent with the prices".to_string());
    Ok(respond(verify_json("verify", &p, &report), code, note))
}

#[derive(Debug, Serialize)]
struct PriceJson {
    #[serde(flatten)]
    verdict: VerifyJson,
    prices: Vec<String>,
}

pub fn cmd_price(game: &Path, assignment: &Path) -> CliResult<Response> {
    let game = load_game(game)?;
    let x = load_assignment(assignment, &game)?;
    let (p, report, code, note) = match compute_price(&game, &x)? {
        Some((p, report)) => (p, report, EXIT_OK, None),
        None => {
            let p = candidate_price(&game, &x)?;
            let report = verify(&game, &x, &p)?;
            let note = "no price vector makes the assignment an equilibrium; reporting the candidate prices";
            (p, report, EXIT_FALSE, Some(note.to_string()))
        }
    };
    let report = PriceJson {
        verdict: verify_json("price", &p, &report),
        prices: rationals(p.as_slice()),
    };
    Ok(respond(report, code, note))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Brute force when it fits the budget, else profile enumeration.
    Auto,
    Brute,
    Enumerate,
}

#[derive(Debug, Serialize)]
struct EquilibriumJson {
    prices: Vec<String>,
    assignment: Vec<AssignmentEntry>,
    welfare: String,
}

#[derive(Debug, Serialize)]
struct SolveJson {
    command: &'static str,
    method: &'static str,
    budget: u64,
    /// Assignments or profiles examined.
    evaluated: u64,
    exhaustive: bool,
    has_equilibrium: bool,
    count: usize,
    optimal_welfare: String,
    min_welfare: Option<String>,
    max_welfare: Option<String>,
    equilibria: Vec<EquilibriumJson>,
}

/// Search result with the method that produced it.
struct Solved {
    method: &'static str,
    outcome: SearchOutcome,
}

fn solve(game: &Game, method: Method, budget: u64) -> Solved {
    let brute_fits = assignment_count(game) <= budget as u128;
    let profiles = profile_count(game);
    let method = match method {
        Method::Auto if brute_fits => Method::Brute,
        Method::Auto if profiles <= budget as u128 => Method::Enumerate,
        Method::Auto => {
            return Solved {
                method: "brute",
                outcome: brute_force_bounded(game, budget),
            }
        }
        other => other,
    };
    match method {
        Method::Enumerate => {
            let outcome = match enumerate_equilibria(game, EnumerateOptions::with_budget(budget)) {
                Ok(equilibria) => SearchOutcome {
                    equilibria,
                    exhaustive: true,
                    evaluated: profiles as u64,
                },
                Err(_) => SearchOutcome {
                    equilibria: EquilibriumSet::default(),
                    exhaustive: false,
                    evaluated: 0,
                },
            };
            Solved {
                method: "enumerate",
                outcome,
            }
        }
        _ => Solved {
            method: "brute",
            outcome: brute_force_bounded(game, budget),
        },
    }
}

fn require_budget(budget: u64) -> CliResult<()> {
    if budget == 0 {
        return Err(CliError::Usage("--budget must be positive".into()));
    }
    Ok(())
}

pub fn cmd_solve(game: &Path, method: Method, budget: u64) -> CliResult<Response> {
    require_budget(budget)?;
    let game = load_game(game)?;
    let Solved { method, outcome } = solve(&game, method, budget);
    let set = &outcome.equilibria;
    let equilibria = set
        .iter()
        .map(|e| EquilibriumJson {
            prices: rationals(e.prices.as_slice()),
            assignment: entries(&e.assignment),
            welfare: format_rational(
                &social_welfare(&game, &e.assignment).expect("solver output is valid"),
            ),
        })
        .collect();
    let report = SolveJson {
        command: "solve",
        method,
        budget,
        evaluated: outcome.evaluated,
        exhaustive: outcome.exhaustive,
        has_equilibrium: !set.is_empty(),
        count: set.len(),
        optimal_welfare: format_rational(&optimal_welfare(&game)),
        min_welfare: set.min_welfare(&game).as_ref().map(format_rational),
        max_welfare: set.max_welfare(&game).as_ref().map(format_rational),
        equilibria,
    };
    let (code, note) = if !outcome.exhaustive {
        (
            EXIT_BUDGET,
            Some(format!("budget {budget} exhausted; results are partial")),
        )
    } else if set.is_empty() {
        (EXIT_FALSE, Some("no equilibrium".to_string()))
    } else {
        (EXIT_OK, None)
    };
    Ok(respond(report, code, note))
}

#[derive(Debug, Serialize)]
struct PoaJson {
    command: &'static str,
    method: &'static str,
    equilibria: usize,
    optimal_welfare: String,
    worst_welfare: Option<String>,
    ratio: String,
}

pub fn cmd_poa(game: &Path, budget: u64) -> CliResult<Response> {
    require_budget(budget)?;
    let game = load_game(game)?;
    let Solved { method, outcome } = solve(&game, Method::Auto, budget);
    if !outcome.exhaustive {
        let needed = assignment_count(&game).min(profile_count(&game));
        return Err(Error::BudgetExceeded { needed, budget }.into());
    }
    let set = &outcome.equilibria;
    let ratio = match price_of_anarchy(&game, set) {
        PriceOfAnarchy::Finite(r) => format_rational(&r),
        PriceOfAnarchy::Infinite => "inf".to_string(),
        PriceOfAnarchy::Undefined => "undefined".to_string(),
    };
    let report = PoaJson {
        command: "poa",
        method,
        equilibria: set.len(),
        optimal_welfare: format_rational(&optimal_welfare(&game)),
        worst_welfare: set.min_welfare(&game).as_ref().map(format_rational),
        ratio,
    };
    Ok(respond(report, EXIT_OK, None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Every vendor at cost, optimal assignment unless one is given.
    ExactAtCost,
    /// Minimum total over the candidate price grid.
    MinGrid,
}

#[derive(Debug, Serialize)]
struct SubsidizeJson {
    command: &'static str,
    mode: &'static str,
    refined: bool,
    assignment: Vec<AssignmentEntry>,
    prices: Vec<String>,
    subsidies: Vec<String>,
    total: String,
    certified_exact: bool,
    is_equilibrium: bool,
    evaluated: u64,
}

pub fn cmd_subsidize(
    game: &Path,
    assignment: Option<&Path>,
    mode: Mode,
    refine: bool,
    budget: u64,
) -> CliResult<Response> {
    require_budget(budget)?;
    let game = load_game(game)?;
    let x = match assignment {
        Some(path) => load_assignment(path, &game)?,
        None => optimal_assignment(&game).0,
    };
    let report = match mode {
        Mode::ExactAtCost => {
            let (p, s) = if assignment.is_some() {
                let p = PriceVector::at_cost(&game);
                let s = subsidy_vector(&game, &x, &p)?;
                (p, s)
            } else {
                let (_, p, s) = enforce_at_cost(&game);
                (p, s)
            };
            let zero = s.total() == &int(0);
            SubsidizeJson {
                command: "subsidize",
                mode: "exact-at-cost",
                refined: false,
                assignment: entries(&x),
                prices: rationals(p.as_slice()),
                subsidies: rationals(s.entries()),
                total: format_rational(s.total()),
                certified_exact: zero,
                is_equilibrium: zero,
                evaluated: 1,
            }
        }
        Mode::MinGrid => {
            let options = SubsidySearchOptions {
                mode: if refine {
                    SearchMode::GridRefine
                } else {
                    SearchMode::Grid
                },
                budget,
            };
            let result = min_subsidies(&game, &x, options)?;
            SubsidizeJson {
                command: "subsidize",
                mode: "min-grid",
                refined: refine,
                assignment: entries(&x),
                prices: rationals(result.best_price.as_slice()),
                subsidies: rationals(result.best_subsidy.entries()),
                total: format_rational(result.best_subsidy.total()),
                certified_exact: result.certified_exact,
                is_equilibrium: result.is_equilibrium,
                evaluated: result.evaluated,
            }
        }
    };
    Ok(respond(report, EXIT_OK, None))
}
