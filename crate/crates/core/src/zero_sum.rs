//! Two-player zero-sum games: value, closed-form guarantees, and the
//! coincidence of optimin and correlated equilibrium.

use std::fmt;

use num_traits::Zero;

use crate::equilibrium::check_ce;
use crate::error::{Error, Result};
use crate::game::{Distribution, Game};
use crate::lp::{LinearProgram, Outcome, Relation, Sense};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotZeroSum {
    PlayerCount(usize),
    /// Payoffs at this profile index do not cancel.
    NotOpposite(usize),
}

impl fmt::Display for NotZeroSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotZeroSum::PlayerCount(n) => write!(f, "game has {n} players, not 2"),
            NotZeroSum::NotOpposite(idx) => write!(f, "payoffs at profile #{idx} do not sum to zero"),
        }
    }
}

impl From<NotZeroSum> for Error {
    fn from(e: NotZeroSum) -> Self {
        Error::NotZeroSum(e.to_string())
    }
}

/// A game known to satisfy `u_2 = −u_1` exactly.
#[derive(Debug, Clone, Copy)]
pub struct ZeroSumView<'g> {
    game: &'g Game,
}

pub fn as_zero_sum(game: &Game) -> Result<ZeroSumView<'_>, NotZeroSum> {
    if game.num_players() != 2 {
        return Err(NotZeroSum::PlayerCount(game.num_players()));
    }
    match (0..game.num_profiles()).find(|&idx| !(game.payoff(idx, 0) + game.payoff(idx, 1)).is_zero()) {
        Some(idx) => Err(NotZeroSum::NotOpposite(idx)),
        None => Ok(ZeroSumView { game }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameValue {
    pub v: Rational,
    pub p1_star: Vec<Rational>,
    pub p2_star: Vec<Rational>,
    /// Constant added to every payoff before solving.
    pub shift: Rational,
}

impl<'g> ZeroSumView<'g> {
    pub fn game(&self) -> &'g Game {
        self.game
    }

    pub fn rows(&self) -> usize {
        self.game.num_actions(0)
    }

    pub fn cols(&self) -> usize {
        self.game.num_actions(1)
    }

    /// Player 1's payoff.
    pub fn u(&self, a1: usize, a2: usize) -> &Rational {
        self.game.payoff(self.game.index_of(&[a1, a2]), 0)
    }

    /// Solves both players' maximin LPs on positively shifted payoffs and
    /// checks that they agree.
    pub fn value(&self) -> Result<GameValue> {
        let (rows, cols) = (self.rows(), self.cols());
        let min = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .map(|(r, c)| self.u(r, c).clone())
            .min()
            .unwrap_or_default();
        let shift = rational::one() - min;
        let shifted = |r: usize, c: usize| self.u(r, c) + &shift;

        // Player 1: min Σx  s.t.  Σ_r x_r·u'(r, c) ≥ 1 for every column.
        let mut lp1 = LinearProgram::new(rows, Sense::Minimize);
        lp1.set_objective(vec![rational::one(); rows])?;
        for c in 0..cols {
            lp1.add_constraint(
                (0..rows).map(|r| shifted(r, c)).collect(),
                Relation::Ge,
                rational::one(),
            )?;
        }
        // Player 2: max Σy  s.t.  Σ_c u'(r, c)·y_c ≤ 1 for every row.
        let mut lp2 = LinearProgram::new(cols, Sense::Maximize);
        lp2.set_objective(vec![rational::one(); cols])?;
        for r in 0..rows {
            lp2.add_constraint(
                (0..cols).map(|c| shifted(r, c)).collect(),
                Relation::Le,
                rational::one(),
            )?;
        }
        let (s1, s2) = match (lp1.solve(), lp2.solve()) {
            (Outcome::Optimal(a), Outcome::Optimal(b)) => (a, b),
            other => return Err(Error::internal(format!("value LPs not optimal: {other:?}"))),
        };
        if s1.value != s2.value {
            return Err(Error::internal(format!(
                "value LPs disagree: {} vs {}",
                s1.value, s2.value
            )));
        }
        let shifted_value = rational::one() / &s1.value;
        let p1_star: Vec<Rational> = s1.x.iter().map(|x| x * &shifted_value).collect();
        let p2_star: Vec<Rational> = s2.x.iter().map(|y| y * &shifted_value).collect();
        let v = shifted_value - &shift;

        let guaranteed = (0..cols)
            .map(|c| (0..rows).map(|r| &p1_star[r] * self.u(r, c)).sum::<Rational>())
            .min();
        let conceded = (0..rows)
            .map(|r| (0..cols).map(|c| &p2_star[c] * self.u(r, c)).sum::<Rational>())
            .max();
        if guaranteed.as_ref() != Some(&v) || conceded.as_ref() != Some(&v) {
            return Err(Error::internal("optimal strategies do not certify the value"));
        }
        Ok(GameValue {
            v,
            p1_star,
            p2_star,
            shift,
        })
    }

    /// `π_1(P) = Σ_{a2} min_{b2} Σ_{a1} P(a1, a2)·u(a1, b2)` and
    /// `π_2(P) = −Σ_{a1} max_{b1} Σ_{a2} P(a1, a2)·u(b1, a2)`.
    pub fn performance_closed_form(&self, p: &Distribution) -> Result<(Rational, Rational)> {
        p.check_dimensions(self.game)?;
        let (rows, cols) = (self.rows(), self.cols());
        let prob = |r: usize, c: usize| p.prob(self.game.index_of(&[r, c]));
        let pi1: Rational = (0..cols)
            .map(|a2| {
                (0..cols)
                    .map(|b2| (0..rows).map(|a1| prob(a1, a2) * self.u(a1, b2)).sum::<Rational>())
                    .min()
                    .unwrap_or_default()
            })
            .sum();
        let worst_for_2: Rational = (0..rows)
            .map(|a1| {
                (0..rows)
                    .map(|b1| (0..cols).map(|a2| prob(a1, a2) * self.u(b1, a2)).sum::<Rational>())
                    .max()
                    .unwrap_or_default()
            })
            .sum();
        Ok((pi1, -worst_for_2))
    }

    /// Decides `π(P) = (v, −v)` and `P ∈ CE` independently; they must agree.
    pub fn co_equals_ce_check(&self, p: &Distribution) -> Result<bool> {
        let value = self.value()?;
        self.co_equals_ce_check_with(&value, p)
    }

    pub fn co_equals_ce_check_with(&self, value: &GameValue, p: &Distribution) -> Result<bool> {
        let (pi1, pi2) = self.performance_closed_form(p)?;
        let optimal = pi1 == value.v && pi2 == -&value.v;
        let is_ce = check_ce(self.game, p)?.is_empty();
        if optimal != is_ce {
            return Err(Error::internal(format!(
                "π(P) = ({pi1}, {pi2}) with v = {} but CE check says {is_ce}",
                value.v
            )));
        }
        Ok(optimal)
    }
}
