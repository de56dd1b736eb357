//! Guaranteed performance of a correlated distribution.
//!
//! For each opponent `j` and recommendation `a_j`, the admissible set
//! `B_j(a_j)` holds obedience plus every action with strictly positive
//! unnormalized gain. A player's guarantee is the minimum ex-ante payoff
//! over opponents' admissible recommendation-contingent rules. Variants
//! move the minimum inside the player's own recommendation, let the rule
//! depend on the whole opponent state, restrict to constant ex-ante
//! deviations, or allow mixed deviations (two players only).

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{self, Distribution, Game};
use crate::lp::{LinearProgram, Outcome, Relation, Sense};
use crate::rational::{self, Rational};

/// Default bound on the number of rule profiles enumerated for one
/// minimization.
pub const DEFAULT_RULE_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Outside,
    Inside,
    SelectorOutside,
    SelectorInside,
    Coarse,
    Mixed,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Outside,
        Variant::Inside,
        Variant::SelectorOutside,
        Variant::SelectorInside,
        Variant::Coarse,
        Variant::Mixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Outside => "outside",
            Variant::Inside => "inside",
            Variant::SelectorOutside => "selector-out",
            Variant::SelectorInside => "selector-in",
            Variant::Coarse => "coarse",
            Variant::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::input(format!("unknown variant {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerformanceVector {
    pub variant: Variant,
    pub values: Vec<Rational>,
}

/// `B_j(a_j)`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSet {
    pub player: usize,
    pub recommendation: usize,
    pub actions: Vec<usize>,
}

pub fn admissible_set(game: &Game, p: &Distribution, j: usize, a_j: usize) -> AdmissibleSet {
    let actions = (0..game.num_actions(j))
        .filter(|&b| b == a_j || game::gain(game, p, j, a_j, b).is_positive())
        .collect();
    AdmissibleSet {
        player: j,
        recommendation: a_j,
        actions,
    }
}

/// Admissible sets for every player and recommendation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSets {
    sets: Vec<Vec<Vec<usize>>>,
}

impl AdmissibleSets {
    pub fn at(game: &Game, p: &Distribution) -> Self {
        let sets = (0..game.num_players())
            .map(|j| {
                (0..game.num_actions(j))
                    .map(|a| admissible_set(game, p, j, a).actions)
                    .collect()
            })
            .collect();
        AdmissibleSets { sets }
    }

    /// Sets where `b ≠ a` is admissible for `j` iff `admits(j, a, b)`.
    pub fn from_fn<F>(game: &Game, mut admits: F) -> Self
    where
        F: FnMut(usize, usize, usize) -> bool,
    {
        let sets = (0..game.num_players())
            .map(|j| {
                (0..game.num_actions(j))
                    .map(|a| {
                        (0..game.num_actions(j))
                            .filter(|&b| b == a || admits(j, a, b))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        AdmissibleSets { sets }
    }

    pub fn get(&self, j: usize, a_j: usize) -> &[usize] {
        &self.sets[j][a_j]
    }

    pub fn is_obedience_only(&self) -> bool {
        self.sets.iter().flatten().all(|s| s.len() == 1)
    }
}

/// Recommendation-contingent rules `δ_j : A_j → A_j` for every opponent of
/// `player`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeviationRuleProfile {
    pub player: usize,
    /// `rules[j][a_j]` for `j ≠ player`; `None` at `player`.
    pub rules: Vec<Option<Vec<usize>>>,
}

impl DeviationRuleProfile {
    pub fn obedience(game: &Game, player: usize) -> Self {
        let rules = (0..game.num_players())
            .map(|j| (j != player).then(|| (0..game.num_actions(j)).collect()))
            .collect();
        DeviationRuleProfile { player, rules }
    }

    /// Profile index reached from `idx` when every opponent applies its rule.
    pub fn apply(&self, game: &Game, idx: usize) -> usize {
        let mut out = idx;
        for (j, rule) in self.rules.iter().enumerate() {
            if let Some(rule) = rule {
                out = game.deviate(out, j, rule[game.profile(idx)[j]]);
            }
        }
        out
    }

    pub fn is_admissible(&self, sets: &AdmissibleSets) -> bool {
        self.rules.iter().enumerate().all(|(j, rule)| match rule {
            None => true,
            Some(rule) => rule.iter().enumerate().all(|(a, b)| sets.get(j, a).contains(b)),
        })
    }

    pub fn is_obedient(&self) -> bool {
        self.rules
            .iter()
            .flatten()
            .all(|rule| rule.iter().enumerate().all(|(a, &b)| a == b))
    }

    /// `Σ_a P(a)·u_i(a_i, δ_-i(a_-i))`.
    pub fn value(&self, game: &Game, p: &Distribution) -> Rational {
        p.support()
            .map(|idx| p.prob(idx) * game.payoff(self.apply(game, idx), self.player))
            .sum()
    }

    /// The same sum restricted to profiles where `player` is recommended
    /// `own`.
    pub fn value_given(&self, game: &Game, p: &Distribution, own: usize) -> Rational {
        game.profiles_with(self.player, own)
            .filter(|&idx| !p.prob(idx).is_zero())
            .map(|idx| p.prob(idx) * game.payoff(self.apply(game, idx), self.player))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guarantee {
    pub value: Rational,
    pub witness: DeviationRuleProfile,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsideGuarantee {
    pub value: Rational,
    /// One minimizing rule profile per own recommendation.
    pub witnesses: Vec<DeviationRuleProfile>,
}

/// Opponent responses `α_-i(a_-i)`, keyed by opponent state. Both vectors
/// list opponents in player order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatewiseSelector {
    pub player: usize,
    pub responses: Vec<(Vec<usize>, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectorGuarantee {
    pub value: Rational,
    pub inside: bool,
    /// A single selector for the outside form; one per own recommendation
    /// for the inside form.
    pub witnesses: Vec<StatewiseSelector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoarseRule {
    Obey,
    Constant(usize),
}

/// `ι_j` plus every constant rule with strictly positive ex-ante gain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseRuleSet {
    pub player: usize,
    pub rules: Vec<CoarseRule>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseGuarantee {
    pub value: Rational,
    /// `None` at the evaluated player.
    pub witness: Vec<Option<CoarseRule>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedResponse {
    pub recommendation: usize,
    pub value: Rational,
    /// A minimizer over the closure of the admissible mixed actions.
    pub strategy: Vec<Rational>,
    /// Whether some admissible mixed action attains `value`.
    pub attained: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedGuarantee {
    pub value: Rational,
    pub responses: Vec<MixedResponse>,
}

impl MixedGuarantee {
    pub fn attained(&self) -> bool {
        self.responses.iter().all(|r| r.attained)
    }
}

/// `H_j(P; b_j) = Σ_a P(a)·[u_j(b_j, a_-j) − u_j(a)]`.
pub fn coarse_gain(game: &Game, p: &Distribution, j: usize, b_j: usize) -> Rational {
    p.support()
        .map(|idx| {
            let dev = game.deviate(idx, j, b_j);
            p.prob(idx) * (game.payoff(dev, j) - game.payoff(idx, j))
        })
        .sum()
}

pub fn coarse_rule_set(game: &Game, p: &Distribution, j: usize) -> CoarseRuleSet {
    let mut rules = vec![CoarseRule::Obey];
    rules.extend(
        (0..game.num_actions(j))
            .filter(|&b| coarse_gain(game, p, j, b).is_positive())
            .map(CoarseRule::Constant),
    );
    CoarseRuleSet { player: j, rules }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersistenceReport {
    pub holds: bool,
    /// Largest scheduled ε from which the condition holds for every smaller
    /// scheduled ε.
    pub threshold: Option<Rational>,
    pub witness: DeviationRuleProfile,
}

/// `{1/10, 1/100, …, 1/10^6}`.
pub fn default_eps_schedule() -> Vec<Rational> {
    (1..=6).map(|k| rational::ratio(1, 10i64.pow(k))).collect()
}

/// Lexicographic odometer over per-component option lists.
fn for_each_choice<F>(options: &[&[usize]], mut visit: F)
where
    F: FnMut(&[usize]),
{
    if options.iter().any(|o| o.is_empty()) {
        return;
    }
    let mut pos = vec![0usize; options.len()];
    let mut choice: Vec<usize> = options.iter().map(|o| o[0]).collect();
    loop {
        visit(&choice);
        let mut k = options.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < options[k].len() {
                choice[k] = options[k][pos[k]];
                break;
            }
            pos[k] = 0;
            choice[k] = options[k][0];
        }
    }
}

fn product_size<I: IntoIterator<Item = usize>>(sizes: I) -> u128 {
    sizes.into_iter().fold(1u128, |acc, s| acc.saturating_mul(s as u128))
}

/// Evaluates guarantees for one game under a rule-enumeration cap.
#[derive(Debug, Clone, Copy)]
pub struct Evaluator<'g> {
    game: &'g Game,
    cap: u128,
}

impl<'g> Evaluator<'g> {
    pub fn new(game: &'g Game) -> Self {
        Evaluator {
            game,
            cap: DEFAULT_RULE_CAP,
        }
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn game(&self) -> &'g Game {
        self.game
    }

    fn check(&self, p: &Distribution, player: usize) -> Result<()> {
        p.check_dimensions(self.game)?;
        if player >= self.game.num_players() {
            return Err(Error::input(format!("no player {}", player + 1)));
        }
        Ok(())
    }

    fn guard(&self, what: &str, count: u128) -> Result<()> {
        if count > self.cap {
            Err(Error::SizeCap {
                what: what.to_string(),
                count,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    /// `(opponent, recommendation)` components and their admissible options.
    fn rule_components<'s>(&self, sets: &'s AdmissibleSets, player: usize) -> (Vec<(usize, usize)>, Vec<&'s [usize]>) {
        let mut comps = Vec::new();
        let mut options = Vec::new();
        for j in (0..self.game.num_players()).filter(|&j| j != player) {
            for a in 0..self.game.num_actions(j) {
                comps.push((j, a));
                options.push(sets.get(j, a));
            }
        }
        (comps, options)
    }

    fn profile_from_choice(&self, player: usize, comps: &[(usize, usize)], choice: &[usize]) -> DeviationRuleProfile {
        let mut prof = DeviationRuleProfile::obedience(self.game, player);
        for (&(j, a), &b) in comps.iter().zip(choice) {
            if let Some(rule) = prof.rules[j].as_mut() {
                rule[a] = b;
            }
        }
        prof
    }

    /// Opponent payoff contribution `Σ_{a_i} P(a_i, a_j)·u_i(a_i, b)` in a
    /// two-player game, optionally restricted to one own recommendation.
    fn column_value(&self, p: &Distribution, player: usize, a_j: usize, b: usize, own: Option<usize>) -> Rational {
        let j = 1 - player;
        self.game
            .profiles_with(j, a_j)
            .filter(|&idx| own.is_none_or(|o| self.game.profile(idx)[player] == o))
            .filter(|&idx| !p.prob(idx).is_zero())
            .map(|idx| p.prob(idx) * self.game.payoff(self.game.deviate(idx, j, b), player))
            .sum()
    }

    /// Visits every rule profile admissible under `sets`, in lexicographic
    /// order, subject to the cap.
    pub fn visit_rule_profiles<F>(&self, sets: &AdmissibleSets, player: usize, mut visit: F) -> Result<()>
    where
        F: FnMut(&DeviationRuleProfile),
    {
        let (comps, options) = self.rule_components(sets, player);
        self.guard(
            "admissible rule profiles",
            product_size(options.iter().map(|o| o.len())),
        )?;
        for_each_choice(&options, |choice| {
            visit(&self.profile_from_choice(player, &comps, choice))
        });
        Ok(())
    }

    /// Smallest-index minimizer of `f` over `options`.
    fn argmin<F: FnMut(usize) -> Rational>(options: &[usize], mut f: F) -> (usize, Rational) {
        let mut best: Option<(usize, Rational)> = None;
        for &b in options {
            let v = f(b);
            if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                best = Some((b, v));
            }
        }
        best.expect("admissible sets always contain obedience")
    }

    /// Outside guarantee `π_i(P)` with a minimizing rule profile.
    ///
    /// Two-player games separate across the opponent's recommendations;
    /// otherwise the full product of admissible rules is enumerated.
    pub fn outside(&self, p: &Distribution, player: usize) -> Result<Guarantee> {
        self.check(p, player)?;
        if self.game.num_players() != 2 {
            return self.outside_enumerated(p, player);
        }
        let sets = AdmissibleSets::at(self.game, p);
        Ok(self.outside_separated_with(&sets, p, player))
    }

    pub(crate) fn outside_separated_with(&self, sets: &AdmissibleSets, p: &Distribution, player: usize) -> Guarantee {
        let j = 1 - player;
        let mut witness = DeviationRuleProfile::obedience(self.game, player);
        let mut value = rational::zero();
        for a in 0..self.game.num_actions(j) {
            let (b, v) = Self::argmin(sets.get(j, a), |b| self.column_value(p, player, a, b, None));
            if let Some(rule) = witness.rules[j].as_mut() {
                rule[a] = b;
            }
            value += v;
        }
        Guarantee { value, witness }
    }

    /// Outside guarantee by enumerating every admissible rule profile in
    /// lexicographic order, for any number of players.
    pub fn outside_enumerated(&self, p: &Distribution, player: usize) -> Result<Guarantee> {
        self.check(p, player)?;
        let sets = AdmissibleSets::at(self.game, p);
        self.outside_enumerated_with(&sets, p, player)
    }

    pub(crate) fn outside_enumerated_with(
        &self,
        sets: &AdmissibleSets,
        p: &Distribution,
        player: usize,
    ) -> Result<Guarantee> {
        let mut best: Option<Guarantee> = None;
        self.visit_rule_profiles(sets, player, |prof| {
            let v = prof.value(self.game, p);
            if best.as_ref().is_none_or(|g| v < g.value) {
                best = Some(Guarantee {
                    value: v,
                    witness: prof.clone(),
                });
            }
        })?;
        best.ok_or_else(|| Error::internal("empty admissible rule product"))
    }

    /// Inside guarantee: per own recommendation, the worst admissible rule
    /// profile, summed in joint-probability form.
    pub fn inside(&self, p: &Distribution, player: usize) -> Result<InsideGuarantee> {
        self.check(p, player)?;
        let game = self.game;
        let sets = AdmissibleSets::at(game, p);
        let mut value = rational::zero();
        let mut witnesses = Vec::with_capacity(game.num_actions(player));
        if game.num_players() == 2 {
            let j = 1 - player;
            for own in 0..game.num_actions(player) {
                let mut prof = DeviationRuleProfile::obedience(game, player);
                for a in 0..game.num_actions(j) {
                    let (b, v) = Self::argmin(sets.get(j, a), |b| self.column_value(p, player, a, b, Some(own)));
                    if let Some(rule) = prof.rules[j].as_mut() {
                        rule[a] = b;
                    }
                    value += v;
                }
                witnesses.push(prof);
            }
        } else {
            let (comps, options) = self.rule_components(&sets, player);
            self.guard(
                "admissible rule profiles",
                product_size(options.iter().map(|o| o.len())),
            )?;
            for own in 0..game.num_actions(player) {
                let mut best: Option<(Rational, DeviationRuleProfile)> = None;
                for_each_choice(&options, |choice| {
                    let prof = self.profile_from_choice(player, &comps, choice);
                    let v = prof.value_given(game, p, own);
                    if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                        best = Some((v, prof));
                    }
                });
                let (v, prof) = best.ok_or_else(|| Error::internal("empty admissible rule product"))?;
                value += v;
                witnesses.push(prof);
            }
        }
        Ok(InsideGuarantee { value, witnesses })
    }

    /// Statewise selector guarantee. The selector chooses independently at
    /// every opponent state, so the minimum separates across states (and,
    /// for the inside form, across own recommendations too).
    pub fn selector(&self, p: &Distribution, player: usize, inside: bool) -> Result<SelectorGuarantee> {
        self.check(p, player)?;
        let game = self.game;
        let sets = AdmissibleSets::at(game, p);
        let opponents: Vec<usize> = (0..game.num_players()).filter(|&j| j != player).collect();
        // Representative profile (own action 0) of every opponent state.
        let states: Vec<usize> = game.profiles_with(player, 0).collect();
        let own_count = game.num_actions(player);

        let mut value = rational::zero();
        let groups = if inside { own_count } else { 1 };
        let mut witnesses: Vec<StatewiseSelector> = (0..groups)
            .map(|_| StatewiseSelector {
                player,
                responses: Vec::with_capacity(states.len()),
            })
            .collect();

        for &rep in &states {
            let state: Vec<usize> = opponents.iter().map(|&j| game.profile(rep)[j]).collect();
            let options: Vec<&[usize]> = opponents.iter().zip(&state).map(|(&j, &a)| sets.get(j, a)).collect();
            self.guard(
                "selector responses per state",
                product_size(options.iter().map(|o| o.len())),
            )?;
            let contribution = |own: usize, resp: &[usize]| -> Rational {
                let idx = game.deviate(rep, player, own);
                let prob = p.prob(idx);
                if prob.is_zero() {
                    return rational::zero();
                }
                let mut dev = idx;
                for (&j, &b) in opponents.iter().zip(resp) {
                    dev = game.deviate(dev, j, b);
                }
                prob * game.payoff(dev, player)
            };
            for (g, witness) in witnesses.iter_mut().enumerate() {
                let owns: Vec<usize> = if inside { vec![g] } else { (0..own_count).collect() };
                let mut best: Option<(Rational, Vec<usize>)> = None;
                for_each_choice(&options, |resp| {
                    let v: Rational = owns.iter().map(|&o| contribution(o, resp)).sum();
                    if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                        best = Some((v, resp.to_vec()));
                    }
                });
                let (v, resp) = best.ok_or_else(|| Error::internal("empty selector options"))?;
                value += v;
                witness.responses.push((state.clone(), resp));
            }
        }
        Ok(SelectorGuarantee {
            value,
            inside,
            witnesses,
        })
    }

    /// Coarse guarantee: opponents either obey or commit to a constant
    /// action with strictly positive ex-ante gain.
    pub fn coarse(&self, p: &Distribution, player: usize) -> Result<CoarseGuarantee> {
        self.check(p, player)?;
        let game = self.game;
        let opponents: Vec<usize> = (0..game.num_players()).filter(|&j| j != player).collect();
        let rule_sets: Vec<CoarseRuleSet> = opponents.iter().map(|&j| coarse_rule_set(game, p, j)).collect();
        self.guard(
            "coarse rule profiles",
            product_size(rule_sets.iter().map(|s| s.rules.len())),
        )?;
        let index_lists: Vec<Vec<usize>> = rule_sets.iter().map(|s| (0..s.rules.len()).collect()).collect();
        let options: Vec<&[usize]> = index_lists.iter().map(Vec::as_slice).collect();

        let mut best: Option<(Rational, Vec<usize>)> = None;
        for_each_choice(&options, |choice| {
            let v: Rational = p
                .support()
                .map(|idx| {
                    let mut dev = idx;
                    for ((&j, set), &k) in opponents.iter().zip(&rule_sets).zip(choice) {
                        if let CoarseRule::Constant(b) = set.rules[k] {
                            dev = game.deviate(dev, j, b);
                        }
                    }
                    p.prob(idx) * game.payoff(dev, player)
                })
                .sum();
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, choice.to_vec()));
            }
        });
        let (value, choice) = best.ok_or_else(|| Error::internal("empty coarse rule product"))?;
        let mut witness = vec![None; game.num_players()];
        for ((&j, set), &k) in opponents.iter().zip(&rule_sets).zip(&choice) {
            witness[j] = Some(set.rules[k]);
        }
        Ok(CoarseGuarantee { value, witness })
    }

    /// Mixed-deviation guarantee for two-player games: the infimum over
    /// admissible mixed recommendation-contingent deviations, with an
    /// attainment flag per opponent recommendation.
    pub fn mixed(&self, p: &Distribution, player: usize) -> Result<MixedGuarantee> {
        self.check(p, player)?;
        let game = self.game;
        if game.num_players() != 2 {
            return Err(Error::Unsupported(format!(
                "mixed deviations are implemented for two-player games only (this game has {} players)",
                game.num_players()
            )));
        }
        let j = 1 - player;
        let m = game.num_actions(j);
        let mut value = rational::zero();
        let mut responses = Vec::with_capacity(m);
        for a in 0..m {
            let gains: Vec<Rational> = (0..m).map(|b| game::gain(game, p, j, a, b)).collect();
            let costs: Vec<Rational> = (0..m).map(|b| self.column_value(p, player, a, b, None)).collect();
            let resp = Self::mixed_response(a, &gains, &costs)?;
            value += &resp.value;
            responses.push(resp);
        }
        Ok(MixedGuarantee { value, responses })
    }

    fn mixed_response(a: usize, gains: &[Rational], costs: &[Rational]) -> Result<MixedResponse> {
        let m = gains.len();
        let mut obey = vec![rational::zero(); m];
        obey[a] = rational::one();
        if !gains.iter().any(Signed::is_positive) {
            return Ok(MixedResponse {
                recommendation: a,
                value: costs[a].clone(),
                strategy: obey,
                attained: true,
            });
        }
        // The strict-gain region is nonempty, so its infimum equals the
        // minimum over its closure {g·q ≥ 0} ∩ Δ, which contains obedience.
        let simplex = |lp: &mut LinearProgram| -> Result<()> {
            lp.add_constraint(vec![rational::one(); m], Relation::Eq, rational::one())?;
            lp.add_constraint(gains.to_vec(), Relation::Ge, rational::zero())
        };
        let mut lp = LinearProgram::new(m, Sense::Minimize);
        simplex(&mut lp)?;
        lp.set_objective(costs.to_vec())?;
        let closure = match lp.solve() {
            Outcome::Optimal(s) => s,
            other => return Err(Error::internal(format!("mixed deviation LP: {other:?}"))),
        };
        if closure.value == costs[a] {
            return Ok(MixedResponse {
                recommendation: a,
                value: closure.value,
                strategy: obey,
                attained: true,
            });
        }
        // Attained iff some minimizer has strictly positive gain.
        let mut lp = LinearProgram::new(m, Sense::Maximize);
        simplex(&mut lp)?;
        lp.add_constraint(costs.to_vec(), Relation::Eq, closure.value.clone())?;
        lp.set_objective(gains.to_vec())?;
        let best_gain = match lp.solve() {
            Outcome::Optimal(s) => s,
            other => return Err(Error::internal(format!("mixed attainment LP: {other:?}"))),
        };
        let attained = best_gain.value.is_positive();
        Ok(MixedResponse {
            recommendation: a,
            value: closure.value,
            strategy: if attained { best_gain.x } else { closure.x },
            attained,
        })
    }

    pub fn value(&self, p: &Distribution, player: usize, variant: Variant) -> Result<Rational> {
        Ok(match variant {
            Variant::Outside => self.outside(p, player)?.value,
            Variant::Inside => self.inside(p, player)?.value,
            Variant::SelectorOutside => self.selector(p, player, false)?.value,
            Variant::SelectorInside => self.selector(p, player, true)?.value,
            Variant::Coarse => self.coarse(p, player)?.value,
            Variant::Mixed => self.mixed(p, player)?.value,
        })
    }

    pub fn performance(&self, p: &Distribution, variant: Variant) -> Result<PerformanceVector> {
        let values = (0..self.game.num_players())
            .map(|i| self.value(p, i, variant))
            .collect::<Result<_>>()?;
        Ok(PerformanceVector { variant, values })
    }

    /// Checks that the minimizing rule profile at `p` stays admissible, and
    /// keeps bounding `π_i` from above, along `(1 − ε)·p + ε·direction` for
    /// every scheduled ε below some threshold.
    pub fn persistence_check(
        &self,
        p: &Distribution,
        player: usize,
        direction: &Distribution,
        schedule: &[Rational],
    ) -> Result<PersistenceReport> {
        self.check(p, player)?;
        direction.check_dimensions(self.game)?;
        if schedule.is_empty() {
            return Err(Error::input("empty epsilon schedule"));
        }
        if schedule.iter().any(|e| !e.is_positive() || *e > rational::one()) {
            return Err(Error::input("epsilon values must lie in (0, 1]"));
        }
        let mut eps = schedule.to_vec();
        eps.sort_by(|a, b| b.cmp(a));

        let witness = self.outside(p, player)?.witness;
        let mut holds_from: Option<Rational> = None;
        for e in &eps {
            let pe = p.mix(direction, e)?;
            let sets = AdmissibleSets::at(self.game, &pe);
            let ok = witness.is_admissible(&sets) && self.outside(&pe, player)?.value <= witness.value(self.game, &pe);
            if ok {
                holds_from.get_or_insert_with(|| e.clone());
            } else {
                holds_from = None;
            }
        }
        Ok(PersistenceReport {
            holds: holds_from.is_some(),
            threshold: holds_from,
            witness,
        })
    }
}

/// Outside guarantees for every player with the default cap.
pub fn performance(game: &Game, p: &Distribution, variant: Variant) -> Result<PerformanceVector> {
    Evaluator::new(game).performance(p, variant)
}
