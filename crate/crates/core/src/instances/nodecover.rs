//! Game built from a k-uniform hypergraph whose optimal assignment needs
//! subsidies equal to the minimum node cover size.

use num_traits::{One, Zero};

use crate::equilibrium::require_consistent;
use crate::error::{Error, Result};
use crate::model::{optimal_assignment, Assignment, BuyerType, Family, Game, PriceVector};
use crate::rational::{int, Rational};
use crate::subsidy::SubsidyVector;

/// Hypergraph on nodes `0..nodes` whose edges all have exactly `k` nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    nodes: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(nodes: usize, k: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!(
                "edge size k must be at least 2, got {k}"
            )));
        }
        for (e, edge) in edges.iter().enumerate() {
            let mut sorted = edge.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != k || edge.len() != k || sorted.iter().any(|&j| j >= nodes) {
                return Err(Error::InvalidParameter(format!(
                    "edge {e} = {edge:?} is not {k} distinct nodes of 0..{nodes}"
                )));
            }
        }
        Ok(Hypergraph { nodes, k, edges })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn is_cover(&self, cover: &[usize]) -> bool {
        self.edges
            .iter()
            .all(|e| e.iter().any(|j| cover.contains(j)))
    }

    fn incident(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(move |&e| self.edges[e].contains(&j))
    }
}

/// Smallest node cover size, trying all `2^nodes` subsets (`budget` caps
/// that count).
pub fn min_node_cover_bruteforce(h: &Hypergraph, budget: u64) -> Result<usize> {
    let needed = 1u128.checked_shl(h.nodes() as u32).unwrap_or(u128::MAX);
    if h.nodes() >= 64 || needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let masks: Vec<u64> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u64, |acc, &j| acc | (1 << j)))
        .collect();
    (0..needed as u64)
        .filter(|subset| masks.iter().all(|m| m & subset != 0))
        .map(|subset| subset.count_ones() as usize)
        .min()
        .ok_or_else(|| Error::InvalidParameter("hypergraph has no cover".into()))
}

/// The reduction's game, index maps, and optimal assignment. Vendor columns
/// are laid out as edge vendors, then node vendors, then auxiliary vendors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCoverReduction {
    pub hypergraph: Hypergraph,
    pub game: Game,
    pub edge_vendor: Vec<usize>,
    pub node_vendor: Vec<usize>,
    /// `j*` per node.
    pub aux_vendor: Vec<usize>,
    /// `b_e` per edge: volume 1, valuation `(k+1)^2` at its edge vendor.
    pub edge_buyer: Vec<usize>,
    /// `b_j` per node: volume 1, `k+3` at `j`, `k+2` at incident edges.
    pub node_buyer: Vec<usize>,
    /// `b*_j` per node: volume `1/(k+2)`, `k+2` at `j`, `k+3` at `j*`.
    pub aux_buyer: Vec<usize>,
    /// Every type at its valuation-maximizing vendor.
    pub optimal: Assignment,
}

pub fn nodecover_reduction(h: &Hypergraph) -> NodeCoverReduction {
    let (nodes, edges) = (h.nodes(), h.edges().len());
    let m = edges + 2 * nodes;
    let k = h.k() as i64;
    let edge_vendor: Vec<usize> = (1..=edges).collect();
    let node_vendor: Vec<usize> = (edges + 1..=edges + nodes).collect();
    let aux_vendor: Vec<usize> = (edges + nodes + 1..=m).collect();

    let row = |entries: &[(usize, Rational)]| {
        let mut v = vec![Rational::zero(); m];
        for (j, value) in entries {
            v[j - 1] = value.clone();
        }
        v
    };
    let mut buyer_types = Vec::with_capacity(edges + 2 * nodes);
    for &e in &edge_vendor {
        buyer_types.push(BuyerType::new(int(1), row(&[(e, int((k + 1) * (k + 1)))])));
    }
    for j in 0..nodes {
        let mut entries = vec![(node_vendor[j], int(k + 3))];
        entries.extend(h.incident(j).map(|e| (edge_vendor[e], int(k + 2))));
        buyer_types.push(BuyerType::new(int(1), row(&entries)));
    }
    for j in 0..nodes {
        buyer_types.push(BuyerType::new(
            int(k + 2).recip(),
            row(&[(node_vendor[j], int(k + 2)), (aux_vendor[j], int(k + 3))]),
        ));
    }
    let game = Game::new(buyer_types, vec![Rational::zero(); m])
        .expect("reduction data is valid")
        .with_family(Family::NodeCover);
    let (optimal, _) = optimal_assignment(&game);

    NodeCoverReduction {
        hypergraph: h.clone(),
        game,
        edge_vendor,
        node_vendor,
        aux_vendor,
        edge_buyer: (0..edges).collect(),
        node_buyer: (edges..edges + nodes).collect(),
        aux_buyer: (edges + nodes..edges + 2 * nodes).collect(),
        optimal,
    }
}

impl NodeCoverReduction {
    /// Prices under which the optimal assignment needs exactly `|cover|`
    /// subsidy: `k+3` at auxiliary vendors, `(k+1)^2` at edge vendors, and
    /// `k+2` on cover nodes, `k+3` on the others.
    pub fn cover_prices(&self, cover: &[usize]) -> Result<PriceVector> {
        let h = &self.hypergraph;
        if cover.iter().any(|&j| j >= h.nodes()) || !h.is_cover(cover) {
            return Err(Error::InvalidParameter(format!(
                "{cover:?} is not a node cover"
            )));
        }
        let k = h.k() as i64;
        let mut prices = vec![Rational::zero(); self.game.m()];
        for &e in &self.edge_vendor {
            prices[e - 1] = int((k + 1) * (k + 1));
        }
        for j in 0..h.nodes() {
            prices[self.aux_vendor[j] - 1] = int(k + 3);
            prices[self.node_vendor[j] - 1] = int(if cover.contains(&j) { k + 2 } else { k + 3 });
        }
        PriceVector::new(&self.game, prices)
    }
}

/// Closed-form subsidies of the optimal assignment at `p`, per vendor:
///
/// * auxiliary `j*`: `(min(k+3, p_j + 1) - p_{j*}) / (k+2)`
/// * edge `e`: `max((k+1)^2, (k+1) min_{j in e}(p_j - 1)) - p_e`
/// * node `j`: with `lo`/`hi` the smaller/larger of `p_{j*} - 1` and
///   `1 + min(k+2, min_{e ni j} p_e)`, `max((k+3)/(k+2) lo, g hi) - p_j`, where
///   `g = 1/(k+2)` if `p_{j*} - 1` is the larger, else 1.
pub fn lemma8_subsidy_formula(
    reduction: &NodeCoverReduction,
    p: &PriceVector,
) -> Result<SubsidyVector> {
    let game = &reduction.game;
    require_consistent(game, &reduction.optimal, p)?;
    let h = &reduction.hypergraph;
    let k = int(h.k() as i64);
    let one = Rational::one();
    let (k1, k2, k3) = (&k + &one, &k + int(2), &k + int(3));
    let price = |j: usize| p.price(j).clone();

    let mut s = vec![Rational::zero(); game.m()];
    for j in 0..h.nodes() {
        let (node, aux) = (reduction.node_vendor[j], reduction.aux_vendor[j]);
        s[aux - 1] = ((&k3).min(&(price(node) + &one)).clone() - price(aux)) / &k2;

        let via_edges = h
            .incident(j)
            .map(|e| price(reduction.edge_vendor[e]))
            .fold(k2.clone(), |acc, pe| acc.min(pe));
        let edge_side = &one + via_edges;
        let aux_side = price(aux) - &one;
        let gamma = if aux_side >= edge_side {
            &one - &k1 / &k2
        } else {
            one.clone()
        };
        let lo = (&aux_side).min(&edge_side).clone();
        let hi = aux_side.max(edge_side);
        s[node - 1] = (&k3 / &k2 * lo).max(gamma * hi) - price(node);
    }
    for (e, edge) in h.edges().iter().enumerate() {
        let vendor = reduction.edge_vendor[e];
        let cheapest = edge
            .iter()
            .map(|&j| price(reduction.node_vendor[j]) - &one)
            .min()
            .expect("edges are non-empty");
        s[vendor - 1] = (&k1 * &k1).max(&k1 * cheapest) - price(vendor);
    }
    Ok(SubsidyVector::new(s))
}
