//! Search for correlated optimin distributions.
//!
//! The simplex is cut into regions by the sign of every deviation gain.
//! Inside a region the admissible sets are fixed, so each guarantee is a
//! minimum of finitely many linear functions of `P` and maximizing a
//! positive weighting of the guarantees is a linear program. Strict gain
//! constraints are relaxed to their closures; every candidate is then
//! re-evaluated from scratch at its point.
//!
//! On the closure of a region the true admissible sets are subsets of the
//! region's sets, so the re-evaluated weighted value of a candidate is at
//! least its LP value. Taking the best candidate over all regions therefore
//! attains the maximum of the LP values, which bounds the weighted
//! guarantee everywhere.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::equilibrium::check_ce;
use crate::error::{Error, Result};
use crate::game::{self, Distribution, Game};
use crate::lp::{LinearProgram, Outcome, Relation, Sense};
use crate::optimin::{AdmissibleSets, Evaluator, PerformanceVector, Variant, DEFAULT_RULE_CAP};
use crate::rational::{self, Rational};

/// Largest number of gain inequalities whose sign patterns are enumerated.
pub const DEFAULT_PATTERN_CAP: usize = 24;

/// Upper end of the integer lattice used for random distributions.
pub const LATTICE_MAX: u64 = 1000;

/// For every deviation triple (in [`Game::deviation_triples`] order),
/// whether its gain is strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignPattern {
    pub flags: Vec<bool>,
}

impl SignPattern {
    pub fn at(game: &Game, p: &Distribution) -> Self {
        let flags = game
            .deviation_triples()
            .into_iter()
            .map(|(j, a, b)| game::gain(game, p, j, a, b).is_positive())
            .collect();
        SignPattern { flags }
    }

    /// The pattern whose region is the correlated equilibrium polytope.
    pub fn all_nonpositive(game: &Game) -> Self {
        SignPattern {
            flags: vec![false; game.deviation_triples().len()],
        }
    }

    fn from_mask(mask: u64, len: usize) -> Self {
        SignPattern {
            flags: (0..len).map(|k| mask >> k & 1 == 1).collect(),
        }
    }

    pub fn positives(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn admissible_sets(&self, game: &Game) -> AdmissibleSets {
        AdmissibleSets::from_fn(game, |j, a, b| self.flags[triple_position(game, j, a, b)])
    }
}

/// Position of `(j, a, b)` in [`Game::deviation_triples`].
pub fn triple_position(game: &Game, j: usize, a: usize, b: usize) -> usize {
    debug_assert_ne!(a, b);
    let offset: usize = (0..j).map(|k| game.num_actions(k) * (game.num_actions(k) - 1)).sum();
    let m = game.num_actions(j);
    offset + a * (m - 1) + if b < a { b } else { b - 1 }
}

/// Masks over `len` bits ordered by popcount, then by lexicographic order
/// of the set positions.
fn pattern_masks(len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(1usize << len);
    for c in 0..=len {
        let mut pos: Vec<usize> = (0..c).collect();
        loop {
            out.push(pos.iter().fold(0u64, |m, &k| m | 1 << k));
            let Some(k) = (0..c).rev().find(|&k| pos[k] < len - c + k) else {
                break;
            };
            pos[k] += 1;
            for t in k + 1..c {
                pos[t] = pos[t - 1] + 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub weights: Vec<Rational>,
    pub rule_cap: u128,
    pub pattern_cap: usize,
    /// Worker threads for region solving; results do not depend on it.
    pub jobs: usize,
    /// Random samples for the post-search dominance check (0 disables it).
    pub trials: usize,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(weights: Vec<Rational>) -> Self {
        SearchConfig {
            weights,
            rule_cap: DEFAULT_RULE_CAP,
            pattern_cap: DEFAULT_PATTERN_CAP,
            jobs: 1,
            trials: 0,
            seed: 0,
        }
    }

    pub fn unit(game: &Game) -> Self {
        Self::new(vec![rational::one(); game.num_players()])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionCertificate {
    pub pattern: SignPattern,
    pub point: Distribution,
    /// Optimum of the relaxed region LP.
    pub lp_value: Rational,
    /// Outside guarantees recomputed at `point`.
    pub verified_pi: PerformanceVector,
    pub weights: Vec<Rational>,
    pub verified_value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dominator {
    pub point: Distribution,
    pub pi: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FalsifyReport {
    pub samples_checked: usize,
    pub dominator: Option<Dominator>,
}

impl FalsifyReport {
    pub fn falsified(&self) -> bool {
        self.dominator.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptiminResult {
    pub best: RegionCertificate,
    /// Largest region LP value over all feasible regions.
    pub lp_bound: Rational,
    /// Set when the best verified value falls short of `lp_bound`.
    pub bound_gap: bool,
    pub regions_total: usize,
    pub regions_feasible: usize,
    pub dominance_samples_checked: usize,
    pub falsified: bool,
    pub dominator: Option<Dominator>,
}

fn validate_weights(game: &Game, weights: &[Rational]) -> Result<()> {
    if weights.len() != game.num_players() {
        return Err(Error::DimensionMismatch {
            expected: game.num_players(),
            found: weights.len(),
        });
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::input("weights must be strictly positive"));
    }
    Ok(())
}

fn weighted(weights: &[Rational], values: &[Rational]) -> Rational {
    weights.iter().zip(values).map(|(w, v)| w * v).sum()
}

/// Maximizes `Σ_i w_i·t_i` over the closure of the pattern's region, where
/// `t_i` is bounded by every rule profile admissible under the pattern.
///
/// Returns `None` when the region is empty.
pub fn region_lp(
    game: &Game,
    pattern: &SignPattern,
    weights: &[Rational],
    extra_lower_bounds: Option<&[Rational]>,
) -> Result<Option<(Distribution, Rational)>> {
    region_lp_with(
        game,
        pattern,
        weights,
        extra_lower_bounds,
        &rational::zero(),
        DEFAULT_RULE_CAP,
    )
}

/// As [`region_lp`], with positive gains required to be at least `margin`.
pub fn region_lp_with(
    game: &Game,
    pattern: &SignPattern,
    weights: &[Rational],
    extra_lower_bounds: Option<&[Rational]>,
    margin: &Rational,
    rule_cap: u128,
) -> Result<Option<(Distribution, Rational)>> {
    validate_weights(game, weights)?;
    let triples = game.deviation_triples();
    if pattern.flags.len() != triples.len() {
        return Err(Error::DimensionMismatch {
            expected: triples.len(),
            found: pattern.flags.len(),
        });
    }
    let n = game.num_players();
    let m = game.num_profiles();
    let sets = pattern.admissible_sets(game);
    if let Some(lb) = extra_lower_bounds {
        if lb.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: lb.len(),
            });
        }
    }

    // Every guarantee term is an expectation of u_i over at most unit mass,
    // so it is at least `floor_i`. Shifting by the floor keeps all
    // auxiliary variables nonnegative.
    let floor: Vec<Rational> = (0..n)
        .map(|i| {
            (0..m)
                .map(|idx| game.payoff(idx, i).clone())
                .chain(std::iter::once(rational::zero()))
                .min()
                .unwrap_or_default()
        })
        .collect();

    // Two players: one variable per opponent recommendation, the guarantee
    // being their sum. Otherwise one variable per player bounded by every
    // rule profile.
    let two = n == 2;
    let group = |i: usize| if two { game.num_actions(1 - i) } else { 1 };
    let mut base = Vec::with_capacity(n);
    let mut num_vars = m;
    for i in 0..n {
        base.push(num_vars);
        num_vars += group(i);
    }

    let mut lp = LinearProgram::new(num_vars, Sense::Maximize);
    let ones: Vec<(usize, Rational)> = (0..m).map(|k| (k, rational::one())).collect();
    lp.add_sparse(&ones, Relation::Eq, rational::one())?;
    for ((j, a, b), &pos) in triples.iter().zip(&pattern.flags) {
        let coeffs = game.gain_coefficients(*j, *a, *b);
        if pos {
            lp.add_sparse(&coeffs, Relation::Ge, margin.clone())?;
        } else {
            lp.add_sparse(&coeffs, Relation::Le, rational::zero())?;
        }
    }

    let ev = Evaluator::new(game).with_cap(rule_cap);
    let mut offset = rational::zero();
    let mut obj = vec![rational::zero(); num_vars];
    for i in 0..n {
        let shift = -&floor[i];
        let mut rows = Vec::new();
        if two {
            let j = 1 - i;
            for a in 0..game.num_actions(j) {
                for &b in sets.get(j, a) {
                    let mut terms = vec![(base[i] + a, rational::one())];
                    terms.extend(
                        game.profiles_with(j, a)
                            .map(|idx| (idx, -game.payoff(game.deviate(idx, j, b), i))),
                    );
                    rows.push(terms);
                }
            }
        } else {
            ev.visit_rule_profiles(&sets, i, |prof| {
                let mut terms = vec![(base[i], rational::one())];
                terms.extend((0..m).map(|idx| (idx, -game.payoff(prof.apply(game, idx), i))));
                rows.push(terms);
            })?;
        }
        for terms in rows {
            lp.add_sparse(&terms, Relation::Le, shift.clone())?;
        }
        let vars: Vec<(usize, Rational)> = (0..group(i)).map(|k| (base[i] + k, rational::one())).collect();
        let total_floor = &floor[i] * rational::int(group(i) as i64);
        if let Some(lb) = extra_lower_bounds {
            lp.add_sparse(&vars, Relation::Ge, &lb[i] - &total_floor)?;
        }
        for (v, _) in vars {
            obj[v] = weights[i].clone();
        }
        offset += &weights[i] * total_floor;
    }
    lp.set_objective(obj)?;

    match lp.solve() {
        Outcome::Optimal(sol) => {
            let point = Distribution::new(game, sol.x[..m].to_vec())
                .map_err(|e| Error::internal(format!("region LP returned an invalid point: {e}")))?;
            Ok(Some((point, sol.value + offset)))
        }
        Outcome::Infeasible => Ok(None),
        Outcome::Unbounded => Err(Error::internal("region LP unbounded")),
    }
}

fn certify(
    game: &Game,
    pattern: SignPattern,
    point: Distribution,
    lp_value: Rational,
    weights: &[Rational],
    rule_cap: u128,
) -> Result<RegionCertificate> {
    let verified_pi = Evaluator::new(game)
        .with_cap(rule_cap)
        .performance(&point, Variant::Outside)?;
    let verified_value = weighted(weights, &verified_pi.values);
    Ok(RegionCertificate {
        pattern,
        point,
        lp_value,
        verified_pi,
        weights: weights.to_vec(),
        verified_value,
    })
}

/// Running summary over regions; combining is associative and picks the
/// lexicographically smallest pattern on ties, so any evaluation order
/// gives the same result.
#[derive(Debug, Default)]
struct Summary {
    best: Option<RegionCertificate>,
    lp_best: Option<(SignPattern, Rational)>,
    feasible: usize,
}

impl Summary {
    fn merge(self, other: Summary) -> Summary {
        let best = match (self.best, other.best) {
            (Some(a), Some(b)) => {
                let b_wins = b.verified_value > a.verified_value
                    || (b.verified_value == a.verified_value && b.pattern < a.pattern);
                Some(if b_wins { b } else { a })
            }
            (a, b) => a.or(b),
        };
        let lp_best = match (self.lp_best, other.lp_best) {
            (Some(a), Some(b)) => Some(if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a }),
            (a, b) => a.or(b),
        };
        Summary {
            best,
            lp_best,
            feasible: self.feasible + other.feasible,
        }
    }
}

fn run_search(game: &Game, cfg: &SearchConfig, lower_bounds: Option<Vec<Rational>>) -> Result<OptiminResult> {
    validate_weights(game, &cfg.weights)?;
    let d = game.deviation_triples().len();
    if d > cfg.pattern_cap || d >= 63 {
        return Err(Error::SizeCap {
            what: "gain inequalities to split into sign regions".into(),
            count: d as u128,
            cap: cfg.pattern_cap as u128,
        });
    }
    let masks = pattern_masks(d);
    let lb = lower_bounds.as_deref();

    let solve_one = |&mask: &u64| -> Result<Summary> {
        let pattern = SignPattern::from_mask(mask, d);
        let Some((point, value)) = region_lp_with(game, &pattern, &cfg.weights, lb, &rational::zero(), cfg.rule_cap)?
        else {
            return Ok(Summary::default());
        };
        let cert = certify(game, pattern.clone(), point, value.clone(), &cfg.weights, cfg.rule_cap)?;
        Ok(Summary {
            best: Some(cert),
            lp_best: Some((pattern, value)),
            feasible: 1,
        })
    };
    let merge = |a: Result<Summary>, b: Result<Summary>| -> Result<Summary> { Ok(a?.merge(b?)) };

    let summary = if cfg.jobs <= 1 {
        masks.iter().map(solve_one).fold(Ok(Summary::default()), merge)?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::internal(format!("thread pool: {e}")))?;
        pool.install(|| masks.par_iter().map(solve_one).reduce(|| Ok(Summary::default()), merge))?
    };

    let (Some(mut best), Some((lp_pattern, lp_bound))) = (summary.best, summary.lp_best) else {
        return Err(match lb {
            Some(_) => Error::internal("no region admits the requested lower bounds"),
            None => Error::internal("no feasible region"),
        });
    };

    if best.verified_value < lp_bound {
        // Refine the region with the largest bound, pushing positive gains
        // away from zero.
        let pattern = lp_pattern;
        for margin in crate::optimin::default_eps_schedule() {
            if let Some((point, value)) = region_lp_with(game, &pattern, &cfg.weights, lb, &margin, cfg.rule_cap)? {
                let cert = certify(game, pattern.clone(), point, value, &cfg.weights, cfg.rule_cap)?;
                if cert.verified_value > best.verified_value {
                    best = cert;
                }
                if best.verified_value >= lp_bound {
                    break;
                }
            }
        }
    }
    let bound_gap = best.verified_value < lp_bound;

    let report = if cfg.trials > 0 {
        pareto_falsify_with(game, &best.point, cfg.trials, cfg.seed, cfg.rule_cap)?
    } else {
        FalsifyReport {
            samples_checked: 0,
            dominator: None,
        }
    };
    Ok(OptiminResult {
        best,
        lp_bound,
        bound_gap,
        regions_total: masks.len(),
        regions_feasible: summary.feasible,
        dominance_samples_checked: report.samples_checked,
        falsified: report.falsified(),
        dominator: report.dominator,
    })
}

/// Maximizes the weighted sum of outside guarantees over all regions.
pub fn find_optimin(game: &Game, cfg: &SearchConfig) -> Result<OptiminResult> {
    run_search(game, cfg, None)
}

/// As [`find_optimin`], restricted to distributions whose guarantees are at
/// least the expected payoffs of the correlated equilibrium `p_ce`.
pub fn find_optimin_dominating(game: &Game, p_ce: &Distribution, cfg: &SearchConfig) -> Result<OptiminResult> {
    let violations = check_ce(game, p_ce)?;
    if !violations.is_empty() {
        return Err(Error::input(format!(
            "the given distribution is not a correlated equilibrium (violated inequalities: {})",
            violations.len()
        )));
    }
    run_search(game, cfg, Some(game::expected_payoffs(game, p_ce)))
}

/// Normalized integer vector drawn uniformly from `{0, …, max}^|A|`.
pub fn sample_lattice<R: Rng>(game: &Game, rng: &mut R, max: u64) -> Distribution {
    loop {
        let w: Vec<u64> = (0..game.num_profiles()).map(|_| rng.gen_range(0..=max)).collect();
        if let Ok(p) = Distribution::from_weights(game, &w) {
            return p;
        }
    }
}

fn dominates(a: &[Rational], b: &[Rational]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y)
}

/// Looks for a distribution whose outside guarantees Pareto dominate those
/// of `p`. Structured points (vertices, centroid, `p` nudged toward each
/// vertex) are tried first, then `trials` random lattice points together
/// with `p` moved toward each of them. Stops at the first dominator.
pub fn pareto_falsify(game: &Game, p: &Distribution, trials: usize, seed: u64) -> Result<FalsifyReport> {
    pareto_falsify_with(game, p, trials, seed, DEFAULT_RULE_CAP)
}

pub fn pareto_falsify_with(
    game: &Game,
    p: &Distribution,
    trials: usize,
    seed: u64,
    rule_cap: u128,
) -> Result<FalsifyReport> {
    if trials == 0 {
        return Err(Error::input("at least one trial is required"));
    }
    p.check_dimensions(game)?;
    let ev = Evaluator::new(game).with_cap(rule_cap);
    let target = ev.performance(p, Variant::Outside)?.values;
    let mut checked = 0usize;
    let mut test = |q: Distribution| -> Result<Option<Dominator>> {
        checked += 1;
        let pi = ev.performance(&q, Variant::Outside)?.values;
        Ok(dominates(&pi, &target).then_some(Dominator { point: q, pi }))
    };

    let mut structured = vec![Distribution::uniform(game)];
    for idx in 0..game.num_profiles() {
        let vertex = Distribution::point_mass(game, idx);
        structured.push(p.mix(&vertex, &rational::ratio(1, 10))?);
        structured.push(p.mix(&vertex, &rational::ratio(1, 100))?);
        structured.push(vertex);
    }
    for q in structured {
        if let Some(d) = test(q)? {
            return Ok(FalsifyReport {
                samples_checked: checked,
                dominator: Some(d),
            });
        }
    }

    let steps = [
        rational::ratio(1, 2),
        rational::ratio(1, 4),
        rational::ratio(1, 10),
        rational::ratio(1, 100),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..trials {
        let r = sample_lattice(game, &mut rng, LATTICE_MAX);
        let nudged = p.mix(&r, &steps[k % steps.len()])?;
        for q in [r, nudged] {
            if let Some(d) = test(q)? {
                return Ok(FalsifyReport {
                    samples_checked: checked,
                    dominator: Some(d),
                });
            }
        }
    }
    Ok(FalsifyReport {
        samples_checked: checked,
        dominator: None,
    })
}
