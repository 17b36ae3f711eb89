//! Game built from an exact-cover-by-3-sets instance. The game has an
//! equilibrium iff the instance has an exact cover.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{Assignment, BuyerType, Family, Game, PriceVector, ABSTAIN};
use crate::rational::{int, Rational};

/// Universe `0..universe` and a collection of 3-element subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X3cInstance {
    universe: usize,
    sets: Vec<[usize; 3]>,
}

impl X3cInstance {
    pub fn new(universe: usize, sets: Vec<[usize; 3]>) -> Result<Self> {
        if universe == 0 || !universe.is_multiple_of(3) {
            return Err(Error::InvalidParameter(format!(
                "universe size must be a positive multiple of 3, got {universe}"
            )));
        }
        for (s, set) in sets.iter().enumerate() {
            let distinct = set[0] != set[1] && set[1] != set[2] && set[0] != set[2];
            if !distinct || set.iter().any(|&e| e >= universe) {
                return Err(Error::InvalidParameter(format!(
                    "set {s} = {set:?} is not three distinct elements of 0..{universe}"
                )));
            }
        }
        Ok(X3cInstance { universe, sets })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[[usize; 3]] {
        &self.sets
    }

    /// Whether the chosen sets cover every element exactly once.
    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        let mut hits = vec![0usize; self.universe];
        for &s in chosen {
            match self.sets.get(s) {
                Some(set) => set.iter().for_each(|&e| hits[e] += 1),
                None => return false,
            }
        }
        hits.iter().all(|&h| h == 1)
    }
}

/// The reduction's game plus the vendor and buyer-type index of every
/// constructed entity. Vendors are columns (`1..=m`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X3cReduction {
    pub instance: X3cInstance,
    pub game: Game,
    /// `nu_S` per set.
    pub set_vendor: Vec<usize>,
    /// `(nu_{e,1}, nu_{e,2})` per element.
    pub element_vendors: Vec<(usize, usize)>,
    /// `b_e` per element.
    pub element_buyer: Vec<usize>,
    /// `b*_e` per element.
    pub element_rival_buyer: Vec<usize>,
    /// `b_{S,h}` per set: volume 3, valuation 30.
    pub set_high_buyer: Vec<usize>,
    /// `b_{S,l}` per set: volume 9, valuation 6.
    pub set_low_buyer: Vec<usize>,
}

pub fn x3c_reduction(instance: &X3cInstance) -> X3cReduction {
    let sets = instance.sets();
    let (u, c) = (instance.universe(), sets.len());
    let m = c + 2 * u;
    let set_vendor: Vec<usize> = (1..=c).collect();
    let element_vendors: Vec<(usize, usize)> =
        (0..u).map(|e| (c + 1 + 2 * e, c + 2 + 2 * e)).collect();

    let row = |entries: &[(usize, i64)]| {
        let mut v = vec![Rational::zero(); m];
        for &(j, value) in entries {
            v[j - 1] = int(value);
        }
        v
    };
    let mut buyer_types = Vec::with_capacity(2 * u + 2 * c);
    for e in 0..u {
        let (first, second) = element_vendors[e];
        let mut entries = vec![(first, 5), (second, 3)];
        entries.extend(
            (0..c)
                .filter(|&s| sets[s].contains(&e))
                .map(|s| (set_vendor[s], 12)),
        );
        buyer_types.push(BuyerType::new(int(1), row(&entries)));
    }
    for &(first, second) in &element_vendors {
        buyer_types.push(BuyerType::new(int(1), row(&[(first, 3), (second, 5)])));
    }
    for &nu in &set_vendor {
        buyer_types.push(BuyerType::new(int(3), row(&[(nu, 30)])));
    }
    for &nu in &set_vendor {
        buyer_types.push(BuyerType::new(int(9), row(&[(nu, 6)])));
    }
    let game = Game::new(buyer_types, vec![Rational::zero(); m])
        .expect("reduction data is valid")
        .with_family(Family::X3c);

    X3cReduction {
        instance: instance.clone(),
        game,
        set_vendor,
        element_vendors,
        element_buyer: (0..u).collect(),
        element_rival_buyer: (u..2 * u).collect(),
        set_high_buyer: (2 * u..2 * u + c).collect(),
        set_low_buyer: (2 * u + c..2 * u + 2 * c).collect(),
    }
}

impl X3cReduction {
    /// The equilibrium induced by an exact cover: chosen set vendors price at
    /// 6 and serve their elements and both set types, the others price at 30;
    /// each element pair prices at `(0, 2)` with `b*_e` at the second vendor.
    pub fn cover_profile(&self, cover: &[usize]) -> Result<(Assignment, PriceVector)> {
        if !self.instance.is_exact_cover(cover) {
            return Err(Error::InvalidParameter(format!(
                "{cover:?} is not an exact cover"
            )));
        }
        let sets = self.instance.sets();
        let mut choices = vec![ABSTAIN; self.game.n()];
        let mut prices = vec![Rational::zero(); self.game.m()];
        for s in 0..sets.len() {
            let nu = self.set_vendor[s];
            choices[self.set_high_buyer[s]] = nu;
            if cover.contains(&s) {
                prices[nu - 1] = int(6);
                choices[self.set_low_buyer[s]] = nu;
                for &e in &sets[s] {
                    choices[self.element_buyer[e]] = nu;
                }
            } else {
                prices[nu - 1] = int(30);
            }
        }
        for (e, &(_, second)) in self.element_vendors.iter().enumerate() {
            prices[second - 1] = int(2);
            choices[self.element_rival_buyer[e]] = second;
        }
        Ok((
            Assignment::from_choices(&self.game, &choices)?,
            PriceVector::new(&self.game, prices)?,
        ))
    }

    /// The two element vendors of `e` restricted to `b_e` and `b*_e`: the
    /// competition left when no set vendor serves `e`.
    pub fn element_subgame(&self, e: usize) -> Result<Game> {
        let (first, second) = *self.element_vendors.get(e).ok_or(Error::IndexOutOfRange {
            what: "element",
            index: e,
            limit: self.instance.universe(),
        })?;
        let buyer_types = [self.element_buyer[e], self.element_rival_buyer[e]]
            .iter()
            .map(|&i| {
                BuyerType::new(
                    self.game.volume(i).clone(),
                    vec![
                        self.game.valuation(i, first).clone(),
                        self.game.valuation(i, second).clone(),
                    ],
                )
            })
            .collect();
        Game::new(
            buyer_types,
            vec![
                self.game.cost(first).clone(),
                self.game.cost(second).clone(),
            ],
        )
    }
}
