//! Integer reference implementations of the game primitives, written from
//! the definitions and sharing no code with the library. Only games with
//! integer data are supported.
#![allow(dead_code)]

use pricecomp::{Game, Rational};

pub struct IntGame {
    pub mu: Vec<i64>,
    // n rows of m+1 columns, column 0 = abstain
    pub v: Vec<Vec<i64>>,
    // m+1 entries, entry 0 = abstain
    pub c: Vec<i64>,
}

fn as_int(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        i64::try_from(r.to_integer()).ok()
    } else {
        None
    }
}

impl IntGame {
    pub fn from_game(game: &Game) -> Option<Self> {
        let (n, m) = (game.n(), game.m());
        let mu = (0..n)
            .map(|i| as_int(game.volume(i)))
            .collect::<Option<Vec<_>>>()?;
        let v = (0..n)
            .map(|i| {
                (0..=m)
                    .map(|j| as_int(game.valuation(i, j)))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        let c = (0..=m)
            .map(|j| as_int(game.cost(j)))
            .collect::<Option<Vec<_>>>()?;
        Some(IntGame { mu, v, c })
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn m(&self) -> usize {
        self.c.len() - 1
    }

    /// Columns maximizing `v_ij - p_j`, with abstain added when the best
    /// utility is not positive.
    pub fn demand(&self, p: &[i64], i: usize) -> Vec<usize> {
        let best = (1..=self.m()).map(|j| self.v[i][j] - p[j]).max().unwrap();
        let mut set = Vec::new();
        if best <= 0 {
            set.push(0);
        }
        if best >= 0 {
            set.extend((1..=self.m()).filter(|&j| self.v[i][j] - p[j] == best));
        }
        set
    }

    /// Utility of vendor `j` deviating to `t` while claiming every type
    /// that weakly prefers it to all alternatives.
    pub fn deviation_value(&self, p: &[i64], j: usize, t: i64) -> i64 {
        let volume: i64 = (0..self.n())
            .filter(|&i| {
                let outside = (1..=self.m())
                    .filter(|&k| k != j)
                    .map(|k| self.v[i][k] - p[k])
                    .fold(0, i64::max);
                self.v[i][j] - t >= outside
            })
            .map(|i| self.mu[i])
            .sum();
        (t - self.c[j]) * volume
    }

    /// Best deviation utility by sweeping every integer price from cost to
    /// the largest valuation (thresholds are integers for integer games).
    pub fn theta(&self, p: &[i64], j: usize) -> i64 {
        let top = (0..self.n())
            .map(|i| self.v[i][j])
            .max()
            .unwrap()
            .max(self.c[j]);
        (self.c[j]..=top)
            .map(|t| self.deviation_value(p, j, t))
            .max()
            .unwrap()
    }

    /// Per-vendor prices at which any equilibrium's non-empty vendors can sit.
    pub fn price_grid(&self) -> Vec<Vec<i64>> {
        let (n, m) = (self.n(), self.m());
        (1..=m)
            .map(|j| {
                let mut g = vec![self.c[j]];
                for i in 0..n {
                    g.push(self.v[i][j]);
                    for k in 1..=m {
                        if k != j {
                            g.push(self.v[i][j] - self.v[i][k] + self.c[k]);
                        }
                    }
                }
                g.retain(|&x| x >= self.c[j]);
                g.sort_unstable();
                g.dedup();
                g
            })
            .collect()
    }

    /// Every non-fractional equilibrium `(choices, real prices)` whose
    /// prices lie on [`IntGame::price_grid`].
    pub fn grid_equilibria(&self) -> Vec<(Vec<usize>, Vec<i64>)> {
        let (n, m) = (self.n(), self.m());
        let grid = self.price_grid();
        let mut found = Vec::new();
        let mut idx = vec![0usize; m];
        loop {
            let mut p = vec![0i64];
            p.extend((0..m).map(|j| grid[j][idx[j]]));
            let theta: Vec<i64> = (1..=m).map(|j| self.theta(&p, j)).collect();
            let demand: Vec<Vec<usize>> = (0..n).map(|i| self.demand(&p, i)).collect();
            let mut pick = vec![0usize; n];
            loop {
                let choices: Vec<usize> = (0..n).map(|i| demand[i][pick[i]]).collect();
                let stable = (1..=m).all(|j| {
                    let volume: i64 = (0..n)
                        .filter(|&i| choices[i] == j)
                        .map(|i| self.mu[i])
                        .sum();
                    (p[j] - self.c[j]) * volume == theta[j - 1]
                });
                if stable {
                    found.push((choices, p[1..].to_vec()));
                }
                if !advance(&mut pick, |i| demand[i].len()) {
                    break;
                }
            }
            if !advance(&mut idx, |j| grid[j].len()) {
                break;
            }
        }
        found
    }

    pub fn welfare(&self, choices: &[usize]) -> i64 {
        choices
            .iter()
            .enumerate()
            .map(|(i, &j)| self.mu[i] * (self.v[i][j] - self.c[j]))
            .sum()
    }

    pub fn optimal_welfare(&self) -> i64 {
        (0..self.n())
            .map(|i| {
                self.mu[i]
                    * (0..=self.m())
                        .map(|j| self.v[i][j] - self.c[j])
                        .max()
                        .unwrap()
            })
            .sum()
    }
}

/// Odometer increment; false once every digit wrapped.
fn advance(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for d in (0..digits.len()).rev() {
        digits[d] += 1;
        if digits[d] < radix(d) {
            return true;
        }
        digits[d] = 0;
    }
    false
}

/// Sizes used by the seeded sweeps: `n, m` cycle through `1..=3`.
pub fn sweep_game(seed: u64, max_m: usize) -> Game {
    let n = 1 + (seed % 3) as usize;
    let m = 1 + ((seed / 3) as usize % max_m);
    pricecomp::instances::random_game(seed, n, m, 6).unwrap()
}
