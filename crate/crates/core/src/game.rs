//! Finite games, correlated distributions, and the quantities every other
//! module is built from: marginals, posteriors, expected payoffs and
//! unnormalized deviation gains.
//!
//! Pure profiles are addressed by a mixed-radix index over the players'
//! action indices, last player fastest. For a two-player game this is the
//! row-major order of the payoff bimatrix.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    actions: Vec<Vec<String>>,
    strides: Vec<usize>,
    profiles: Vec<Vec<usize>>,
    /// `payoffs[idx * n + i]` is player `i`'s payoff at profile `idx`.
    payoffs: Vec<Rational>,
}

impl Game {
    /// Builds a game by evaluating `payoff` at every pure profile, in index
    /// order. `payoff` must return one value per player.
    pub fn new<F>(actions: Vec<Vec<String>>, mut payoff: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Vec<Rational>,
    {
        if actions.is_empty() {
            return Err(Error::input("a game needs at least one player"));
        }
        for (i, labels) in actions.iter().enumerate() {
            if labels.is_empty() {
                return Err(Error::input(format!("player {} has no actions", i + 1)));
            }
            let mut seen = HashSet::new();
            for l in labels {
                if !seen.insert(l.as_str()) {
                    return Err(Error::input(format!(
                        "duplicate action label {l:?} for player {}",
                        i + 1
                    )));
                }
            }
        }
        let n = actions.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1]
                .checked_mul(actions[i + 1].len())
                .ok_or_else(|| Error::input("game too large"))?;
        }
        let total = strides[0]
            .checked_mul(actions[0].len())
            .ok_or_else(|| Error::input("game too large"))?;

        let mut profiles = Vec::with_capacity(total);
        let mut payoffs = Vec::with_capacity(total * n);
        let mut current = vec![0usize; n];
        for _ in 0..total {
            let u = payoff(&current);
            if u.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: u.len(),
                });
            }
            payoffs.extend(u);
            profiles.push(current.clone());
            for k in (0..n).rev() {
                current[k] += 1;
                if current[k] < actions[k].len() {
                    break;
                }
                current[k] = 0;
            }
        }
        Ok(Game {
            actions,
            strides,
            profiles,
            payoffs,
        })
    }

    /// Builds a game from a table of payoff vectors listed in profile index
    /// order.
    pub fn from_table(actions: Vec<Vec<String>>, table: Vec<Vec<Rational>>) -> Result<Self> {
        let total: usize = actions.iter().map(Vec::len).product();
        if table.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: table.len(),
            });
        }
        let mut rows = table.into_iter();
        Self::new(actions, |_| rows.next().unwrap_or_default())
    }

    /// Two-player game from row/column payoff matrices. Labels are
    /// `r0, r1, ..` for the row player and `c0, c1, ..` for the column player.
    pub fn bimatrix(u1: &[Vec<Rational>], u2: &[Vec<Rational>]) -> Result<Self> {
        let rows = u1.len();
        let cols = u1.first().map_or(0, Vec::len);
        let well_formed = u2.len() == rows && u1.iter().chain(u2).all(|r| r.len() == cols);
        if !well_formed {
            return Err(Error::input("payoff matrices must be rectangular and of equal shape"));
        }
        let actions = vec![
            (0..rows).map(|k| format!("r{k}")).collect(),
            (0..cols).map(|k| format!("c{k}")).collect(),
        ];
        Self::new(actions, |a| vec![u1[a[0]][a[1]].clone(), u2[a[0]][a[1]].clone()])
    }

    /// Game with labels `a0, a1, ..` for every player.
    pub fn with_sizes<F>(sizes: &[usize], payoff: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Vec<Rational>,
    {
        let actions = sizes
            .iter()
            .map(|&m| (0..m).map(|k| format!("a{k}")).collect())
            .collect();
        Self::new(actions, payoff)
    }

    pub fn num_players(&self) -> usize {
        self.actions.len()
    }

    pub fn num_actions(&self, player: usize) -> usize {
        self.actions[player].len()
    }

    pub fn action_counts(&self) -> Vec<usize> {
        self.actions.iter().map(Vec::len).collect()
    }

    pub fn num_profiles(&self) -> usize {
        self.profiles.len()
    }

    pub fn actions(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    pub fn all_actions(&self) -> &[Vec<String>] {
        &self.actions
    }

    pub fn action_label(&self, player: usize, action: usize) -> &str {
        &self.actions[player][action]
    }

    pub fn action_index(&self, player: usize, label: &str) -> Result<usize> {
        if player >= self.num_players() {
            return Err(Error::input(format!("no player {}", player + 1)));
        }
        self.actions[player]
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownAction {
                player: player + 1,
                label: label.to_string(),
            })
    }

    /// Profile index of a list of action labels, one per player.
    pub fn profile_index_of_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        if labels.len() != self.num_players() {
            return Err(Error::DimensionMismatch {
                expected: self.num_players(),
                found: labels.len(),
            });
        }
        let mut idx = 0;
        for (i, l) in labels.iter().enumerate() {
            idx += self.action_index(i, l.as_ref())? * self.strides[i];
        }
        Ok(idx)
    }

    pub fn profile_labels(&self, idx: usize) -> Vec<&str> {
        self.profiles[idx]
            .iter()
            .enumerate()
            .map(|(i, &a)| self.actions[i][a].as_str())
            .collect()
    }

    /// Action indices of the profile at `idx`.
    pub fn profile(&self, idx: usize) -> &[usize] {
        &self.profiles[idx]
    }

    pub fn index_of(&self, actions: &[usize]) -> usize {
        debug_assert_eq!(actions.len(), self.num_players());
        actions.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    /// Index of the profile obtained from `idx` by setting `player`'s
    /// action to `action`.
    pub fn deviate(&self, idx: usize, player: usize, action: usize) -> usize {
        let cur = self.profiles[idx][player];
        idx + action * self.strides[player] - cur * self.strides[player]
    }

    pub fn payoff(&self, idx: usize, player: usize) -> &Rational {
        &self.payoffs[idx * self.num_players() + player]
    }

    pub fn payoff_vector(&self, idx: usize) -> &[Rational] {
        let n = self.num_players();
        &self.payoffs[idx * n..(idx + 1) * n]
    }

    /// Profiles in which `player` is recommended `action`.
    pub fn profiles_with(&self, player: usize, action: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_profiles()).filter(move |&idx| self.profiles[idx][player] == action)
    }

    /// All `(player, recommendation, alternative)` triples with distinct
    /// recommendation and alternative, in lexicographic order.
    pub fn deviation_triples(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.num_players() {
            let m = self.num_actions(j);
            for a in 0..m {
                for b in 0..m {
                    if a != b {
                        out.push((j, a, b));
                    }
                }
            }
        }
        out
    }

    /// Coefficients `c` with `gain(P, j, a_j, b_j) = Σ_idx c[idx]·P(idx)`.
    pub fn gain_coefficients(&self, j: usize, a_j: usize, b_j: usize) -> Vec<(usize, Rational)> {
        self.profiles_with(j, a_j)
            .map(|idx| {
                let dev = self.deviate(idx, j, b_j);
                (idx, self.payoff(dev, j) - self.payoff(idx, j))
            })
            .collect()
    }
}

/// A probability assignment over the pure profiles of a game.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Distribution {
    probs: Vec<Rational>,
}

impl Distribution {
    /// Validates nonnegativity, exact normalization and dimension.
    pub fn new(game: &Game, probs: Vec<Rational>) -> Result<Self> {
        if probs.len() != game.num_profiles() {
            return Err(Error::DimensionMismatch {
                expected: game.num_profiles(),
                found: probs.len(),
            });
        }
        if let Some(idx) = probs.iter().position(Signed::is_negative) {
            return Err(Error::InvalidDistribution(format!(
                "negative probability {} at profile {:?}",
                probs[idx],
                game.profile_labels(idx)
            )));
        }
        let total: Rational = probs.iter().sum();
        if total != rational::one() {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Distribution { probs })
    }

    /// Normalizes nonnegative integer weights.
    pub fn from_weights(game: &Game, weights: &[u64]) -> Result<Self> {
        let total: u64 = weights.iter().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("all weights are zero".into()));
        }
        let probs = weights.iter().map(|&w| Rational::new(w.into(), total.into())).collect();
        Self::new(game, probs)
    }

    pub fn point_mass(game: &Game, idx: usize) -> Self {
        let mut probs = vec![rational::zero(); game.num_profiles()];
        probs[idx] = rational::one();
        Distribution { probs }
    }

    pub fn uniform(game: &Game) -> Self {
        let m = game.num_profiles() as i64;
        Distribution {
            probs: vec![rational::ratio(1, m); game.num_profiles()],
        }
    }

    /// Product distribution induced by independent mixed actions.
    pub fn product(game: &Game, mixed: &[Vec<Rational>]) -> Result<Self> {
        if mixed.len() != game.num_players() {
            return Err(Error::DimensionMismatch {
                expected: game.num_players(),
                found: mixed.len(),
            });
        }
        for (i, m) in mixed.iter().enumerate() {
            if m.len() != game.num_actions(i) {
                return Err(Error::DimensionMismatch {
                    expected: game.num_actions(i),
                    found: m.len(),
                });
            }
        }
        let probs = (0..game.num_profiles())
            .map(|idx| {
                game.profile(idx)
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| mixed[i][a].clone())
                    .product()
            })
            .collect();
        Self::new(game, probs)
    }

    /// `(1 - lambda)·self + lambda·other`.
    pub fn mix(&self, other: &Distribution, lambda: &Rational) -> Result<Self> {
        if self.probs.len() != other.probs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.probs.len(),
                found: other.probs.len(),
            });
        }
        if lambda.is_negative() || *lambda > rational::one() {
            return Err(Error::input(format!("mixing weight {lambda} outside [0, 1]")));
        }
        let keep = rational::one() - lambda;
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(p, q)| &keep * p + lambda * q)
            .collect();
        Ok(Distribution { probs })
    }

    pub fn prob(&self, idx: usize) -> &Rational {
        &self.probs[idx]
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(idx, _)| idx)
    }

    pub fn check_dimensions(&self, game: &Game) -> Result<()> {
        if self.probs.len() == game.num_profiles() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: game.num_profiles(),
                found: self.probs.len(),
            })
        }
    }
}

/// Conditional distribution of the other players' recommendations given
/// one player's recommendation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Posterior {
    pub player: usize,
    pub recommendation: usize,
    /// Opponent action vectors (in player order, `player` omitted) and
    /// their conditional probabilities. Empty when undefined.
    pub weights: Vec<(Vec<usize>, Rational)>,
    pub defined: bool,
}

/// `P_i(a_i)`.
pub fn marginal(game: &Game, p: &Distribution, player: usize, action: usize) -> Rational {
    game.profiles_with(player, action).map(|idx| p.prob(idx)).sum()
}

pub fn marginal_by_label(game: &Game, p: &Distribution, player: usize, label: &str) -> Result<Rational> {
    let a = game.action_index(player, label)?;
    Ok(marginal(game, p, player, a))
}

pub fn posterior(game: &Game, p: &Distribution, player: usize, action: usize) -> Posterior {
    let mass = marginal(game, p, player, action);
    if mass.is_zero() {
        return Posterior {
            player,
            recommendation: action,
            weights: Vec::new(),
            defined: false,
        };
    }
    let weights = game
        .profiles_with(player, action)
        .map(|idx| {
            let others: Vec<usize> = game
                .profile(idx)
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != player)
                .map(|(_, &a)| a)
                .collect();
            (others, p.prob(idx) / &mass)
        })
        .collect();
    Posterior {
        player,
        recommendation: action,
        weights,
        defined: true,
    }
}

/// `Σ_a P(a)·u_i(a)`.
pub fn expected_payoff(game: &Game, p: &Distribution, player: usize) -> Rational {
    p.support().map(|idx| p.prob(idx) * game.payoff(idx, player)).sum()
}

pub fn expected_payoffs(game: &Game, p: &Distribution) -> Vec<Rational> {
    (0..game.num_players()).map(|i| expected_payoff(game, p, i)).collect()
}

/// Unnormalized gain of player `j` from playing `b_j` after being
/// recommended `a_j`: `Σ_{a_-j} P(a_j, a_-j)·[u_j(b_j, a_-j) − u_j(a_j, a_-j)]`.
///
/// Zero when `b_j == a_j` or when `a_j` has zero marginal probability.
pub fn gain(game: &Game, p: &Distribution, j: usize, a_j: usize, b_j: usize) -> Rational {
    if a_j == b_j {
        return rational::zero();
    }
    game.profiles_with(j, a_j)
        .filter(|&idx| !p.prob(idx).is_zero())
        .map(|idx| {
            let dev = game.deviate(idx, j, b_j);
            p.prob(idx) * (game.payoff(dev, j) - game.payoff(idx, j))
        })
        .sum()
}
