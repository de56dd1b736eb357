//! Correlated and coarse correlated equilibrium checks, and LP
//! construction of correlated equilibria.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::game::{self, Distribution, Game};
use crate::lp::{LinearProgram, Outcome, Relation, Sense};
use crate::optimin::coarse_gain;
use crate::rational::{self, Rational};

/// A strictly profitable recommendation-contingent deviation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CeViolation {
    pub player: usize,
    pub recommendation: usize,
    pub deviation: usize,
    pub gain: Rational,
}

/// A strictly profitable ex-ante commitment to a constant action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CceViolation {
    pub player: usize,
    pub action: usize,
    pub exante_gain: Rational,
}

/// Every `(j, a_j, b_j)` with strictly positive unnormalized gain. Empty
/// iff `p` is a correlated equilibrium.
pub fn check_ce(game: &Game, p: &Distribution) -> Result<Vec<CeViolation>> {
    p.check_dimensions(game)?;
    Ok(game
        .deviation_triples()
        .into_iter()
        .filter_map(|(j, a, b)| {
            let g = game::gain(game, p, j, a, b);
            g.is_positive().then_some(CeViolation {
                player: j,
                recommendation: a,
                deviation: b,
                gain: g,
            })
        })
        .collect())
}

pub fn check_cce(game: &Game, p: &Distribution) -> Result<Vec<CceViolation>> {
    p.check_dimensions(game)?;
    let mut out = Vec::new();
    for j in 0..game.num_players() {
        for b in 0..game.num_actions(j) {
            let h = coarse_gain(game, p, j, b);
            if h.is_positive() {
                out.push(CceViolation {
                    player: j,
                    action: b,
                    exante_gain: h,
                });
            }
        }
    }
    Ok(out)
}

/// Simplex constraints plus every joint-probability CE inequality, over
/// `num_vars ≥ |A|` variables whose first `|A|` entries are the profile
/// probabilities.
pub(crate) fn ce_polytope(game: &Game, num_vars: usize, sense: Sense) -> Result<LinearProgram> {
    let m = game.num_profiles();
    let mut lp = LinearProgram::new(num_vars, sense);
    let ones: Vec<(usize, Rational)> = (0..m).map(|k| (k, rational::one())).collect();
    lp.add_sparse(&ones, Relation::Eq, rational::one())?;
    for (j, a, b) in game.deviation_triples() {
        lp.add_sparse(&game.gain_coefficients(j, a, b), Relation::Le, rational::zero())?;
    }
    Ok(lp)
}

fn welfare_coefficients(game: &Game, weights: &[Rational]) -> Vec<Rational> {
    (0..game.num_profiles())
        .map(|idx| weights.iter().enumerate().map(|(i, w)| w * game.payoff(idx, i)).sum())
        .collect()
}

fn distribution_from_solution(game: &Game, x: &[Rational]) -> Result<Distribution> {
    Distribution::new(game, x[..game.num_profiles()].to_vec())
        .map_err(|e| Error::internal(format!("LP returned an invalid distribution: {e}")))
}

/// A vertex of the CE polytope optimizing `Σ_i w_i·E_P[u_i]`.
pub fn find_ce(game: &Game, weights: &[Rational], sense: Sense) -> Result<Distribution> {
    if weights.len() != game.num_players() {
        return Err(Error::DimensionMismatch {
            expected: game.num_players(),
            found: weights.len(),
        });
    }
    let mut lp = ce_polytope(game, game.num_profiles(), sense)?;
    lp.set_objective(welfare_coefficients(game, weights))?;
    let sol = match lp.solve() {
        Outcome::Optimal(s) => s,
        other => {
            return Err(Error::internal(format!(
                "CE polytope LP not solved to optimality: {other:?}"
            )))
        }
    };
    let p = distribution_from_solution(game, &sol.x)?;
    if !check_ce(game, &p)?.is_empty() {
        return Err(Error::internal("find_ce produced a non-equilibrium"));
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessProbe {
    /// The unique CE when `unique`, otherwise some CE.
    pub point: Distribution,
    pub unique: bool,
    /// Per profile, the minimum and maximum probability over the CE polytope.
    pub ranges: Vec<(Rational, Rational)>,
}

/// Minimizes and maximizes every profile coordinate over the CE polytope.
pub fn ce_uniqueness_probe(game: &Game) -> Result<UniquenessProbe> {
    let m = game.num_profiles();
    let mut ranges = Vec::with_capacity(m);
    let mut point = None;
    for idx in 0..m {
        let mut bounds = Vec::with_capacity(2);
        for sense in [Sense::Minimize, Sense::Maximize] {
            let mut lp = ce_polytope(game, m, sense)?;
            let mut obj = vec![rational::zero(); m];
            obj[idx] = rational::one();
            lp.set_objective(obj)?;
            let sol = lp
                .solve()
                .optimal()
                .ok_or_else(|| Error::internal("CE polytope LP not solved to optimality"))?;
            if point.is_none() {
                point = Some(distribution_from_solution(game, &sol.x)?);
            }
            bounds.push(sol.value);
        }
        let hi = bounds.pop().unwrap_or_default();
        let lo = bounds.pop().unwrap_or_default();
        ranges.push((lo, hi));
    }
    let unique = ranges.iter().all(|(lo, hi)| lo == hi);
    let point = if unique {
        Distribution::new(game, ranges.iter().map(|(lo, _)| lo.clone()).collect())?
    } else {
        point.ok_or_else(|| Error::internal("empty game"))?
    };
    Ok(UniquenessProbe { point, unique, ranges })
}
