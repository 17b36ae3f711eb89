//! The `gen` command: instance families as documents, with index maps for
//! reductions and an optional `(assignment, prices)` fixture.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use serde_json::{json, Value};

use pricecomp::instances::{
    lemma1_family, lemma4_game, nodecover_reduction, random_game, theorem4_game, theorem5_game,
    x3c_reduction, Hypergraph, X3cInstance,
};
use pricecomp::rational::int;
use pricecomp::{format_rational, parse_rational, Assignment, Family, Game, PriceVector, Rational};

use crate::document::{write_json, AssignmentDocument, GameDocument, PricesDocument};
use crate::error::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct GenArgs {
    /// lemma1 | lemma4 | theorem4 | theorem5 | x3c | nodecover | random
    pub family: String,
    /// Game file to write; sidecar fixtures go next to it. Prints the game when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Buyer types (lemma1, random).
    #[arg(long)]
    pub n: Option<usize>,
    /// Vendors (random).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub chi: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest random volume and valuation.
    #[arg(long, default_value_t = 6)]
    pub bound: u32,
    /// Universe size (x3c); elements are 0-based.
    #[arg(long)]
    pub universe: Option<usize>,
    /// Triples such as "0,1,2;3,4,5" (x3c).
    #[arg(long)]
    pub sets: Option<String>,
    /// Node count (nodecover).
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Edge size (nodecover).
    #[arg(long = "k")]
    pub k: Option<usize>,
    /// Edges such as "0,1;1,2" (nodecover).
    #[arg(long)]
    pub edges: Option<String>,
    /// Chosen sets (x3c) or nodes (nodecover), such as "0,2"; emits the induced fixture.
    #[arg(long)]
    pub cover: Option<String>,
}

/// A generated game plus the fixture it comes with, if any.
pub struct Generated {
    pub game: Game,
    pub meta: Value,
    pub fixture: Option<(Assignment, PriceVector)>,
}

#[derive(Debug, Serialize)]
struct GenReport {
    command: &'static str,
    family: &'static str,
    game: String,
    assignment: Option<String>,
    prices: Option<String>,
}

fn required<T>(value: Option<T>, flag: &str, family: Family) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("{family} needs --{flag}")))
}

fn rational_param(value: &Option<String>, flag: &str, family: Family) -> CliResult<Rational> {
    let text = required(value.as_deref(), flag, family)?;
    parse_rational(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn index_list(text: &str, flag: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::Usage(format!("--{flag}: {s:?} is not an index")))
        })
        .collect()
}

fn index_groups(text: &str, flag: &str) -> CliResult<Vec<Vec<usize>>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|group| index_list(group, flag))
        .collect()
}

pub fn generate(args: &GenArgs) -> CliResult<Generated> {
    let family = Family::from_name(&args.family)
        .ok_or_else(|| CliError::Usage(format!("unknown family {:?}", args.family)))?;
    if args.cover.is_some() && !matches!(family, Family::X3c | Family::NodeCover) {
        return Err(CliError::Usage(format!("{family} takes no --cover")));
    }
    let plain = |game: Game, meta: Value| Generated {
        game,
        meta,
        fixture: None,
    };
    Ok(match family {
        Family::Lemma1 => {
            let n = required(args.n, "n", family)?;
            let alpha = rational_param(&args.alpha, "alpha", family)?;
            let meta = json!({"family": "lemma1", "n": n, "alpha": format_rational(&alpha)});
            plain(lemma1_family(n, &alpha)?, meta)
        }
        Family::Lemma4 => {
            let game = lemma4_game();
            let x = Assignment::from_choices(&game, &[1, 2])?;
            let p = PriceVector::new(&game, vec![int(5), int(5)])?;
            Generated {
                game,
                meta: json!({"family": "lemma4"}),
                fixture: Some((x, p)),
            }
        }
        Family::Theorem4 => {
            let eps = rational_param(&args.eps, "eps", family)?;
            let meta = json!({"family": "theorem4", "eps": format_rational(&eps)});
            plain(theorem4_game(&eps)?, meta)
        }
        Family::Theorem5 => {
            let chi = rational_param(&args.chi, "chi", family)?;
            let meta = json!({"family": "theorem5", "chi": format_rational(&chi)});
            plain(theorem5_game(&chi)?, meta)
        }
        Family::Random => {
            let seed = required(args.seed, "seed", family)?;
            let (n, m) = (args.n.unwrap_or(2), args.m.unwrap_or(2));
            let meta =
                json!({"family": "random", "seed": seed, "n": n, "m": m, "bound": args.bound});
            plain(random_game(seed, n, m, args.bound)?, meta)
        }
        Family::X3c => x3c(args)?,
        Family::NodeCover => nodecover(args)?,
    })
}

fn x3c(args: &GenArgs) -> CliResult<Generated> {
    let universe = required(args.universe, "universe", Family::X3c)?;
    let sets = index_groups(required(args.sets.as_deref(), "sets", Family::X3c)?, "sets")?
        .into_iter()
        .map(|s| {
            <[usize; 3]>::try_from(s.as_slice())
                .map_err(|_| CliError::Usage(format!("--sets: {s:?} is not a triple")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let reduction = x3c_reduction(&X3cInstance::new(universe, sets.clone())?);
    let fixture = match &args.cover {
        Some(cover) => Some(reduction.cover_profile(&index_list(cover, "cover")?)?),
        None => None,
    };
    let meta = json!({
        "family": "x3c",
        "universe": universe,
        "sets": sets,
        "set_vendor": reduction.set_vendor,
        "element_vendors": reduction.element_vendors,
        "element_buyer": reduction.element_buyer,
        "element_rival_buyer": reduction.element_rival_buyer,
        "set_high_buyer": reduction.set_high_buyer,
        "set_low_buyer": reduction.set_low_buyer,
    });
    Ok(Generated {
        game: reduction.game,
        meta,
        fixture,
    })
}

fn nodecover(args: &GenArgs) -> CliResult<Generated> {
    let nodes = required(args.nodes, "nodes", Family::NodeCover)?;
    let k = required(args.k, "k", Family::NodeCover)?;
    let edges = index_groups(args.edges.as_deref().unwrap_or(""), "edges")?;
    let reduction = nodecover_reduction(&Hypergraph::new(nodes, k, edges.clone())?);
    let fixture = match &args.cover {
        Some(cover) => Some((
            reduction.optimal.clone(),
            reduction.cover_prices(&index_list(cover, "cover")?)?,
        )),
        None => None,
    };
    let meta = json!({
        "family": "nodecover",
        "nodes": nodes,
        "k": k,
        "edges": edges,
        "edge_vendor": reduction.edge_vendor,
        "node_vendor": reduction.node_vendor,
        "aux_vendor": reduction.aux_vendor,
        "edge_buyer": reduction.edge_buyer,
        "node_buyer": reduction.node_buyer,
        "aux_buyer": reduction.aux_buyer,
    });
    Ok(Generated {
        game: reduction.game,
        meta,
        fixture,
    })
}

/// `dir/name.json` with suffix `assignment` gives `dir/name.assignment.json`.
fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}.json"))
}

/// Runs `gen`; returns the stdout document.
pub fn cmd_gen(args: &GenArgs) -> CliResult<Value> {
    let generated = generate(args)?;
    let family = generated
        .game
        .family()
        .expect("generators tag their games")
        .name();
    let document = GameDocument::from_game(&generated.game, Some(generated.meta));
    let Some(out) = &args.out else {
        if args.cover.is_some() {
            return Err(CliError::Usage(
                "--cover needs --out for the fixture files".into(),
            ));
        }
        return Ok(serde_json::to_value(document).expect("documents serialize"));
    };
    write_json(out, &document)?;
    let mut report = GenReport {
        command: "gen",
        family,
        game: out.display().to_string(),
        assignment: None,
        prices: None,
    };
    if let Some((x, p)) = &generated.fixture {
        let (xa, pa) = (sidecar(out, "assignment"), sidecar(out, "prices"));
        write_json(&xa, &AssignmentDocument::from_assignment(x))?;
        write_json(&pa, &PricesDocument::from_prices(p))?;
        report.assignment = Some(xa.display().to_string());
        report.prices = Some(pa.display().to_string());
    }
    Ok(serde_json::to_value(report).expect("reports serialize"))
}
