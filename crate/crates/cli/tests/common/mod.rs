//! Seeded random instances and brute-force reference computations.
//!
//! The reference functions work directly from payoffs and probabilities
//! and share no code with the library's evaluators.

#![allow(dead_code)]

use correlated_optimin::rational::{int, one, zero, Rational};
use correlated_optimin::{Distribution, Game};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_game<R: Rng>(rng: &mut R, sizes: &[usize], lo: i64, hi: i64) -> Game {
    let n = sizes.len();
    Game::with_sizes(sizes, |_| (0..n).map(|_| int(rng.gen_range(lo..=hi))).collect()).unwrap()
}

/// 2 or 3 players with 2 or 3 actions each.
pub fn random_small_game<R: Rng>(rng: &mut R) -> Game {
    let n = rng.gen_range(2..=3);
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
    random_game(rng, &sizes, -4, 4)
}

pub fn random_zero_sum<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Game {
    Game::with_sizes(&[rows, cols], |_| {
        let x = int(rng.gen_range(-6..=6));
        vec![x.clone(), -x]
    })
    .unwrap()
}

/// Integer weights from a small lattice, with about a third of the
/// profiles forced to zero so that ties and empty recommendations occur.
pub fn random_distribution<R: Rng>(rng: &mut R, game: &Game) -> Distribution {
    loop {
        let max = if rng.gen_bool(0.5) { 6 } else { 1000 };
        let w: Vec<u64> = (0..game.num_profiles())
            .map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(0..=max) })
            .collect();
        if let Ok(p) = Distribution::from_weights(game, &w) {
            return p;
        }
    }
}

pub fn random_objective<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| int(rng.gen_range(-3..=5))).collect()
}

pub fn ref_expected(game: &Game, p: &Distribution, i: usize) -> Rational {
    (0..game.num_profiles())
        .map(|idx| p.prob(idx) * game.payoff(idx, i))
        .sum()
}

fn with_action(game: &Game, idx: usize, j: usize, b: usize) -> usize {
    let mut a = game.profile(idx).to_vec();
    a[j] = b;
    game.index_of(&a)
}

/// Conditional expected payoff of `j` for playing `b` when told `a`, or
/// `None` when `a` is never recommended.
fn conditional(game: &Game, p: &Distribution, j: usize, a: usize, b: usize) -> Option<Rational> {
    let rows: Vec<usize> = (0..game.num_profiles())
        .filter(|&idx| game.profile(idx)[j] == a)
        .collect();
    let mass: Rational = rows.iter().map(|&idx| p.prob(idx).clone()).sum();
    if mass == zero() {
        return None;
    }
    let total: Rational = rows
        .iter()
        .map(|&idx| p.prob(idx) * game.payoff(with_action(game, idx, j, b), j))
        .sum();
    Some(total / mass)
}

pub fn ref_is_ce(game: &Game, p: &Distribution) -> bool {
    (0..game.num_players()).all(|j| {
        (0..game.num_actions(j)).all(|a| {
            (0..game.num_actions(j)).all(
                |b| match (conditional(game, p, j, a, a), conditional(game, p, j, a, b)) {
                    (Some(obey), Some(dev)) => dev <= obey,
                    _ => true,
                },
            )
        })
    })
}

/// Obedience plus every strictly better action given `a`.
pub fn ref_admissible(game: &Game, p: &Distribution, j: usize, a: usize) -> Vec<usize> {
    let Some(obey) = conditional(game, p, j, a, a) else {
        return vec![a];
    };
    (0..game.num_actions(j))
        .filter(|&b| b == a || conditional(game, p, j, a, b).is_some_and(|v| v > obey))
        .collect()
}

/// Minimum of `i`'s payoff over every product of admissible opponent
/// rules, enumerated in full.
pub fn ref_outside(game: &Game, p: &Distribution, i: usize) -> Rational {
    let n = game.num_players();
    // One choice slot per (opponent, recommendation).
    let mut slots: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for j in (0..n).filter(|&j| j != i) {
        for a in 0..game.num_actions(j) {
            slots.push((j, a, ref_admissible(game, p, j, a)));
        }
    }
    let mut choice = vec![0usize; slots.len()];
    let mut best: Option<Rational> = None;
    loop {
        let rule = |j: usize, a: usize| -> usize {
            let k = slots.iter().position(|s| s.0 == j && s.1 == a).unwrap();
            slots[k].2[choice[k]]
        };
        let value: Rational = (0..game.num_profiles())
            .map(|idx| {
                let mut a = game.profile(idx).to_vec();
                for j in (0..n).filter(|&j| j != i) {
                    a[j] = rule(j, a[j]);
                }
                p.prob(idx) * game.payoff(game.index_of(&a), i)
            })
            .sum();
        if best.as_ref().is_none_or(|b| value < *b) {
            best = Some(value);
        }
        let mut k = 0;
        loop {
            if k == slots.len() {
                return best.unwrap_or_else(zero);
            }
            choice[k] += 1;
            if choice[k] < slots[k].2.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Checks a claimed value of a zero-sum game against the two strategies
/// that are supposed to certify it.
pub fn ref_certifies_value(game: &Game, v: &Rational, x: &[Rational], y: &[Rational]) -> bool {
    let (rows, cols) = (game.num_actions(0), game.num_actions(1));
    let u = |r: usize, c: usize| game.payoff(game.index_of(&[r, c]), 0).clone();
    let sums_to_one = |s: &[Rational]| s.iter().sum::<Rational>() == one() && s.iter().all(|t| *t >= zero());
    sums_to_one(x)
        && sums_to_one(y)
        && (0..cols).all(|c| (0..rows).map(|r| &x[r] * u(r, c)).sum::<Rational>() >= *v)
        && (0..rows).all(|r| (0..cols).map(|c| &y[c] * u(r, c)).sum::<Rational>() <= *v)
}
