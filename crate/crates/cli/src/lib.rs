//! Commands behind the `optimin` binary. Each command reads its input
//! files, runs one analysis and returns a [`RunReport`] that can be printed
//! as text or JSON.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use correlated_optimin::equilibrium::{self, ce_uniqueness_probe, check_cce, check_ce};
use correlated_optimin::game::{self, Distribution, Game};
use correlated_optimin::io;
use correlated_optimin::lp::Sense;
use correlated_optimin::optimin::{
    CoarseRule, DeviationRuleProfile, Evaluator, StatewiseSelector, Variant, DEFAULT_RULE_CAP,
};
use correlated_optimin::rational::{self, Rational};
use correlated_optimin::search::{self, OptiminResult, SearchConfig, DEFAULT_PATTERN_CAP};
use correlated_optimin::zero_sum::as_zero_sum;
use correlated_optimin::{Error, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::SizeCap { .. } => EXIT_CAP,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Done,
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputFile {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputFile>,
    /// Rational values are always strings.
    pub results: Value,
    pub witnesses: Value,
    pub seed: Option<u64>,
    pub elapsed: Duration,
    pub verdict: Verdict,
    /// Human-readable lines.
    pub text: Vec<String>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Fail => EXIT_FAIL,
            _ => EXIT_OK,
        }
    }

    pub fn to_json(&self) -> Value {
        let inputs: Vec<Value> = self
            .inputs
            .iter()
            .map(|f| json!({"path": f.path.display().to_string(), "sha256": f.sha256}))
            .collect();
        json!({
            "command": self.command,
            "inputs": inputs,
            "verdict": match self.verdict {
                Verdict::Done => "done",
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
            },
            "results": self.results,
            "witnesses": self.witnesses,
            "seed": self.seed,
            "timing": {"elapsed_ms": self.elapsed.as_millis() as u64},
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for line in &self.text {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub cap: u128,
    pub pattern_cap: usize,
    pub jobs: usize,
    pub trials: usize,
    pub seed: u64,
    /// Append decimal hints to rationals in text output.
    pub approx: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            cap: DEFAULT_RULE_CAP,
            pattern_cap: DEFAULT_PATTERN_CAP,
            jobs: 1,
            trials: 200,
            seed: 0,
            approx: false,
        }
    }
}

impl Options {
    fn r(&self, x: &Rational) -> String {
        if self.approx {
            format!("{x} (~{:.6})", rational::approx(x))
        } else {
            x.to_string()
        }
    }

    fn list(&self, xs: &[Rational]) -> String {
        if self.approx {
            let parts: Vec<String> = xs.iter().map(|x| self.r(x)).collect();
            format!("[{}]", parts.join(", "))
        } else {
            rational::format_list(xs)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Ce,
    Cce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FindMode {
    Ce,
    Optimin,
    OptiminDominating,
}

fn load(path: &Path, inputs: &mut Vec<InputFile>) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    inputs.push(InputFile {
        path: path.to_path_buf(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    });
    String::from_utf8(bytes).map_err(|_| Error::Input(format!("{}: not valid UTF-8", path.display())))
}

fn with_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        Error::InvalidDistribution(m) => Error::InvalidDistribution(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load_game(path: &Path, inputs: &mut Vec<InputFile>) -> Result<Game> {
    let text = load(path, inputs)?;
    with_path(path, io::parse_game(&text))
}

fn load_distribution(game: &Game, path: &Path, inputs: &mut Vec<InputFile>) -> Result<Distribution> {
    let text = load(path, inputs)?;
    with_path(path, io::parse_distribution(game, &text))
}

fn s(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

fn rule_json(game: &Game, prof: &DeviationRuleProfile) -> Value {
    let rules: Vec<Value> = prof
        .rules
        .iter()
        .enumerate()
        .filter_map(|(j, rule)| {
            let rule = rule.as_ref()?;
            let map: Vec<Value> = rule
                .iter()
                .enumerate()
                .map(|(a, &b)| json!({"from": game.action_label(j, a), "to": game.action_label(j, b)}))
                .collect();
            Some(json!({"player": j + 1, "map": map}))
        })
        .collect();
    Value::Array(rules)
}

fn rule_text(game: &Game, prof: &DeviationRuleProfile) -> String {
    let parts: Vec<String> = prof
        .rules
        .iter()
        .enumerate()
        .filter_map(|(j, rule)| {
            let rule = rule.as_ref()?;
            let map: Vec<String> = rule
                .iter()
                .enumerate()
                .map(|(a, &b)| format!("{}->{}", game.action_label(j, a), game.action_label(j, b)))
                .collect();
            Some(format!("player {} {}", j + 1, map.join(" ")))
        })
        .collect();
    if parts.is_empty() {
        "no opponents".to_string()
    } else {
        parts.join("; ")
    }
}

fn selector_json(game: &Game, sel: &StatewiseSelector) -> Value {
    let opponents: Vec<usize> = (0..game.num_players()).filter(|&j| j != sel.player).collect();
    let label = |xs: &[usize]| -> Vec<&str> {
        opponents
            .iter()
            .zip(xs)
            .map(|(&j, &a)| game.action_label(j, a))
            .collect()
    };
    let responses: Vec<Value> = sel
        .responses
        .iter()
        .map(|(state, resp)| json!({"state": label(state), "response": label(resp)}))
        .collect();
    Value::Array(responses)
}

fn coarse_json(game: &Game, witness: &[Option<CoarseRule>]) -> Value {
    let rules: Vec<Value> = witness
        .iter()
        .enumerate()
        .filter_map(|(j, r)| {
            let rule = match (*r)? {
                CoarseRule::Obey => "obey".to_string(),
                CoarseRule::Constant(b) => format!("constant {}", game.action_label(j, b)),
            };
            Some(json!({"player": j + 1, "rule": rule}))
        })
        .collect();
    Value::Array(rules)
}

/// Value and witness JSON of one player's guarantee, plus a text summary.
fn evaluate_player(
    ev: &Evaluator<'_>,
    p: &Distribution,
    player: usize,
    variant: Variant,
) -> Result<(Rational, Value, String)> {
    let game = ev.game();
    Ok(match variant {
        Variant::Outside => {
            let g = ev.outside(p, player)?;
            let text = rule_text(game, &g.witness);
            (g.value, json!({"rules": rule_json(game, &g.witness)}), text)
        }
        Variant::Inside => {
            let g = ev.inside(p, player)?;
            let per: Vec<Value> = g
                .witnesses
                .iter()
                .enumerate()
                .map(|(a, w)| json!({"recommendation": game.action_label(player, a), "rules": rule_json(game, w)}))
                .collect();
            let text: Vec<String> = g
                .witnesses
                .iter()
                .enumerate()
                .map(|(a, w)| format!("given {}: {}", game.action_label(player, a), rule_text(game, w)))
                .collect();
            (g.value, Value::Array(per), text.join(" | "))
        }
        Variant::SelectorOutside | Variant::SelectorInside => {
            let g = ev.selector(p, player, variant == Variant::SelectorInside)?;
            let sel: Vec<Value> = g.witnesses.iter().map(|w| selector_json(game, w)).collect();
            (
                g.value,
                json!({"selectors": sel}),
                format!("{} selector(s)", g.witnesses.len()),
            )
        }
        Variant::Coarse => {
            let g = ev.coarse(p, player)?;
            let w = coarse_json(game, &g.witness);
            let text: Vec<String> = w
                .as_array()
                .into_iter()
                .flatten()
                .map(|r| format!("player {} {}", r["player"], r["rule"].as_str().unwrap_or_default()))
                .collect();
            (g.value, json!({"rules": w}), text.join("; "))
        }
        Variant::Mixed => {
            let g = ev.mixed(p, player)?;
            let opp = 1 - player;
            let responses: Vec<Value> = g
                .responses
                .iter()
                .map(|r| {
                    json!({
                        "recommendation": game.action_label(opp, r.recommendation),
                        "value": s(&r.value),
                        "strategy": io::rationals(&r.strategy),
                        "attained": r.attained,
                    })
                })
                .collect();
            let text = if g.attained() {
                "infimum attained".to_string()
            } else {
                "infimum not attained by an admissible mixed action".to_string()
            };
            (
                g.value.clone(),
                json!({"responses": responses, "attained": g.attained()}),
                text,
            )
        }
    })
}

pub fn cmd_eval(
    game_path: &Path,
    dist_path: &Path,
    variant: Variant,
    player: Option<usize>,
    opts: &Options,
) -> Result<RunReport> {
    let start = Instant::now();
    let mut inputs = Vec::new();
    let game = load_game(game_path, &mut inputs)?;
    let p = load_distribution(&game, dist_path, &mut inputs)?;
    let n = game.num_players();
    let players: Vec<usize> = match player {
        Some(k) if k == 0 || k > n => {
            return Err(Error::Input(format!("player {k} out of range 1..={n}")));
        }
        Some(k) => vec![k - 1],
        None => (0..n).collect(),
    };
    if variant == Variant::Mixed && n != 2 {
        return Err(Error::Unsupported(format!(
            "mixed responses need exactly 2 players, game has {n}"
        )));
    }
    let ev = Evaluator::new(&game).with_cap(opts.cap);
    let mut values = Vec::new();
    let mut witnesses = Vec::new();
    let mut text = vec![format!("variant: {variant}")];
    let mut detail = Vec::new();
    for &i in &players {
        let (v, w, t) = evaluate_player(&ev, &p, i, variant)?;
        detail.push(format!("  player {}: {} worst case: {t}", i + 1, opts.r(&v)));
        witnesses.push(json!({"player": i + 1, "witness": w}));
        values.push(v);
    }
    let results = if let Some(k) = player {
        text.push(format!("pi_{k} = {}", opts.r(&values[0])));
        json!({"variant": variant.name(), "player": k, "value": s(&values[0])})
    } else {
        text.push(format!("pi = {}", opts.list(&values)));
        json!({"variant": variant.name(), "pi": io::rationals(&values)})
    };
    text.extend(detail);
    Ok(RunReport {
        command: "eval".into(),
        inputs,
        results,
        witnesses: Value::Array(witnesses),
        seed: None,
        elapsed: start.elapsed(),
        verdict: Verdict::Done,
        text,
    })
}

pub fn cmd_check(game_path: &Path, dist_path: &Path, kind: CheckKind, opts: &Options) -> Result<RunReport> {
    let start = Instant::now();
    let mut inputs = Vec::new();
    let game = load_game(game_path, &mut inputs)?;
    let p = load_distribution(&game, dist_path, &mut inputs)?;
    let (name, violations, lines): (&str, Vec<Value>, Vec<String>) = match kind {
        CheckKind::Ce => {
            let v = check_ce(&game, &p)?;
            let json = v
                .iter()
                .map(|x| {
                    json!({
                        "player": x.player + 1,
                        "recommendation": game.action_label(x.player, x.recommendation),
                        "deviation": game.action_label(x.player, x.deviation),
                        "gain": s(&x.gain),
                    })
                })
                .collect();
            let lines = v
                .iter()
                .map(|x| {
                    format!(
                        "  player {}: {} -> {} gain {}",
                        x.player + 1,
                        game.action_label(x.player, x.recommendation),
                        game.action_label(x.player, x.deviation),
                        opts.r(&x.gain)
                    )
                })
                .collect();
            ("ce", json, lines)
        }
        CheckKind::Cce => {
            let v = check_cce(&game, &p)?;
            let json = v
                .iter()
                .map(|x| {
                    json!({
                        "player": x.player + 1,
                        "action": game.action_label(x.player, x.action),
                        "exante_gain": s(&x.exante_gain),
                    })
                })
                .collect();
            let lines = v
                .iter()
                .map(|x| {
                    format!(
                        "  player {}: const {} gain {}",
                        x.player + 1,
                        game.action_label(x.player, x.action),
                        opts.r(&x.exante_gain)
                    )
                })
                .collect();
            ("cce", json, lines)
        }
    };
    let pass = violations.is_empty();
    let mut text = vec![format!("{name}: {}", if pass { "PASS" } else { "FAIL" })];
    text.extend(lines);
    Ok(RunReport {
        command: format!("check {name}"),
        inputs,
        results: json!({"kind": name, "pass": pass, "violations": violations}),
        witnesses: Value::Array(vec![]),
        seed: None,
        elapsed: start.elapsed(),
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        text,
    })
}

fn search_config(game: &Game, weights: Option<Vec<Rational>>, opts: &Options) -> SearchConfig {
    let mut cfg = match weights {
        Some(w) => SearchConfig::new(w),
        None => SearchConfig::unit(game),
    };
    cfg.rule_cap = opts.cap;
    cfg.pattern_cap = opts.pattern_cap;
    cfg.jobs = opts.jobs;
    cfg.trials = opts.trials;
    cfg.seed = opts.seed;
    cfg
}

fn optimin_report(game: &Game, res: &OptiminResult, opts: &Options, text: &mut Vec<String>) -> Result<(Value, Value)> {
    if let Some(d) = &res.dominator {
        return Err(Error::Internal(format!(
            "search result is Pareto dominated by a sampled point with pi = {}",
            rational::format_list(&d.pi)
        )));
    }
    let best = &res.best;
    text.push(format!("pi = {}", opts.list(&best.verified_pi.values)));
    text.push(format!(
        "weights = {}, weighted value = {}, LP bound = {}",
        rational::format_list(&best.weights),
        opts.r(&best.verified_value),
        opts.r(&res.lp_bound)
    ));
    text.push("distribution:".into());
    for idx in best.point.support() {
        text.push(format!(
            "  {:?} {}",
            game.profile_labels(idx),
            opts.r(best.point.prob(idx))
        ));
    }
    text.push(format!(
        "regions: {} feasible of {}; bound gap: {}",
        res.regions_feasible,
        res.regions_total,
        if res.bound_gap { "yes" } else { "no" }
    ));
    text.push(format!(
        "dominance check: {} samples, no dominator found",
        res.dominance_samples_checked
    ));
    let results = json!({
        "distribution": io::distribution_to_json(game, &best.point)["prob"],
        "pi": io::rationals(&best.verified_pi.values),
        "weighted_value": s(&best.verified_value),
        "lp_bound": s(&res.lp_bound),
        "bound_gap": res.bound_gap,
        "regions_total": res.regions_total,
        "regions_feasible": res.regions_feasible,
        "dominance_samples_checked": res.dominance_samples_checked,
        "falsified": res.falsified,
    });
    let witness = json!({"certificate": io::certificate_to_json(game, best, res.bound_gap)});
    Ok((results, witness))
}

pub fn cmd_find(
    game_path: &Path,
    mode: FindMode,
    weights: Option<Vec<Rational>>,
    ce_path: Option<&Path>,
    opts: &Options,
) -> Result<RunReport> {
    let start = Instant::now();
    let mut inputs = Vec::new();
    let game = load_game(game_path, &mut inputs)?;
    let mut text = Vec::new();
    let mut seed = None;
    let (command, results, witnesses) = match mode {
        FindMode::Ce => {
            let w = weights.unwrap_or_else(|| vec![rational::one(); game.num_players()]);
            let p = equilibrium::find_ce(&game, &w, Sense::Maximize)?;
            let probe = ce_uniqueness_probe(&game)?;
            let point = if probe.unique { &probe.point } else { &p };
            let payoffs = game::expected_payoffs(&game, point);
            text.push(format!("unique: {}", if probe.unique { "yes" } else { "no" }));
            text.push(format!("expected payoffs = {}", opts.list(&payoffs)));
            text.push("distribution:".into());
            for idx in point.support() {
                text.push(format!("  {:?} {}", game.profile_labels(idx), opts.r(point.prob(idx))));
            }
            let ranges: Vec<Value> = probe
                .ranges
                .iter()
                .enumerate()
                .map(|(idx, (lo, hi))| json!({"profile": game.profile_labels(idx), "min": s(lo), "max": s(hi)}))
                .collect();
            let results = json!({
                "distribution": io::distribution_to_json(&game, point)["prob"],
                "expected_payoffs": io::rationals(&payoffs),
                "weights": io::rationals(&w),
                "unique": probe.unique,
                "ranges": ranges,
            });
            ("find ce", results, Value::Array(vec![]))
        }
        FindMode::Optimin => {
            let cfg = search_config(&game, weights, opts);
            seed = Some(cfg.seed);
            let res = search::find_optimin(&game, &cfg)?;
            let (r, w) = optimin_report(&game, &res, opts, &mut text)?;
            ("find optimin", r, w)
        }
        FindMode::OptiminDominating => {
            let ce_path =
                ce_path.ok_or_else(|| Error::Input("--ce <path> is required for optimin-dominating".into()))?;
            let p_ce = load_distribution(&game, ce_path, &mut inputs)?;
            let cfg = search_config(&game, weights, opts);
            seed = Some(cfg.seed);
            let res = search::find_optimin_dominating(&game, &p_ce, &cfg)?;
            let floor = game::expected_payoffs(&game, &p_ce);
            text.push(format!("CE payoffs = {}", opts.list(&floor)));
            let (mut r, w) = optimin_report(&game, &res, opts, &mut text)?;
            r["ce_payoffs"] = io::rationals(&floor);
            ("find optimin-dominating", r, w)
        }
    };
    Ok(RunReport {
        command: command.into(),
        inputs,
        results,
        witnesses,
        seed,
        elapsed: start.elapsed(),
        verdict: Verdict::Done,
        text,
    })
}

pub fn cmd_value(game_path: &Path, opts: &Options) -> Result<RunReport> {
    let start = Instant::now();
    let mut inputs = Vec::new();
    let game = load_game(game_path, &mut inputs)?;
    let zs = as_zero_sum(&game)?;
    let val = zs.value()?;
    let text = vec![
        format!("v = {}", opts.r(&val.v)),
        format!("p1* = {}", opts.list(&val.p1_star)),
        format!("p2* = {}", opts.list(&val.p2_star)),
    ];
    Ok(RunReport {
        command: "value".into(),
        inputs,
        results: json!({
            "v": s(&val.v),
            "p1_star": io::rationals(&val.p1_star),
            "p2_star": io::rationals(&val.p2_star),
            "p1_actions": game.actions(0),
            "p2_actions": game.actions(1),
            "shift": s(&val.shift),
        }),
        witnesses: Value::Array(vec![]),
        seed: None,
        elapsed: start.elapsed(),
        verdict: Verdict::Done,
        text,
    })
}
