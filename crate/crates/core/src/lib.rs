//! Exact correlated optimin analysis for finite normal-form games.
//!
//! A correlated distribution is scored, player by player, by the worst
//! ex-ante payoff that survives when every opponent may either obey their
//! private recommendation or switch to a strictly profitable action after
//! seeing it. This crate computes those guarantees (and several variants),
//! checks correlated and coarse correlated equilibria, and searches for
//! distributions that are Pareto optimal with respect to the guarantees.
//!
//! Everything is exact: probabilities and payoffs are arbitrary precision
//! rationals and the linear programs are solved by an in-crate rational
//! simplex.

pub mod equilibrium;
pub mod error;
pub mod game;
pub mod io;
pub mod lp;
pub mod optimin;
pub mod rational;
pub mod search;
pub mod zero_sum;

pub use error::{Error, Result};
pub use game::{Distribution, Game, Posterior};
pub use optimin::{Evaluator, PerformanceVector, Variant};
pub use rational::Rational;
