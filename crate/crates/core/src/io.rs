//! JSON game and distribution files, and JSON forms of results.
//!
//! Game file:
//!
//! ```json
//! {"players": 2, "actions": [["U", "D"], ["L", "R"]],
//!  "payoffs": [{"profile": ["U", "L"], "u": ["0", "1"]}, ...]}
//! ```
//!
//! Every profile must appear exactly once. Distribution file:
//!
//! ```json
//! {"prob": [{"profile": ["U", "L"], "p": "7/30"}, ...]}
//! ```
//!
//! Profiles left out have probability zero. All numbers are rational
//! strings (`"7/30"`, `"-2"`); JSON numbers are rejected so that no value
//! ever passes through a float.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::game::{Distribution, Game};
use crate::rational::{self, Rational};
use crate::search::{RegionCertificate, SignPattern};

fn at(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("{path}: {msg}"))
}

/// Message of a nested input error without its category prefix.
fn inner(e: Error) -> String {
    match e {
        Error::Input(m) => m,
        other => other.to_string(),
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v Value> {
    obj.get(key).ok_or_else(|| at(path, format!("missing field {key:?}")))
}

fn as_object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>> {
    v.as_object().ok_or_else(|| at(path, "expected an object"))
}

fn as_array<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| at(path, "expected an array"))
}

fn as_str<'v>(v: &'v Value, path: &str) -> Result<&'v str> {
    v.as_str().ok_or_else(|| at(path, "expected a string"))
}

fn parse_rational(v: &Value, path: &str) -> Result<Rational> {
    let s = v
        .as_str()
        .ok_or_else(|| at(path, "expected a rational string such as \"7/30\""))?;
    rational::parse(s).map_err(|e| at(path, inner(e)))
}

fn parse_profile(game: &Game, v: &Value, path: &str) -> Result<usize> {
    let labels = as_array(v, path)?;
    if labels.len() != game.num_players() {
        return Err(at(
            path,
            format!("expected {} action labels, found {}", game.num_players(), labels.len()),
        ));
    }
    let mut actions = Vec::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        let label = as_str(l, &format!("{path}[{i}]"))?;
        actions.push(
            game.action_index(i, label)
                .map_err(|e| at(&format!("{path}[{i}]"), inner(e)))?,
        );
    }
    Ok(game.index_of(&actions))
}

pub fn parse_game(text: &str) -> Result<Game> {
    let root = parse_json(text)?;
    let obj = as_object(&root, "game")?;
    let players = field(obj, "players", "game")?
        .as_u64()
        .ok_or_else(|| at("players", "expected a positive integer"))?;
    let actions_v = as_array(field(obj, "actions", "game")?, "actions")?;
    if actions_v.len() as u64 != players {
        return Err(at(
            "actions",
            format!(
                "\"players\" is {players} but {} action lists were given",
                actions_v.len()
            ),
        ));
    }
    let mut actions = Vec::with_capacity(actions_v.len());
    for (i, list) in actions_v.iter().enumerate() {
        let path = format!("actions[{i}]");
        let labels = as_array(list, &path)?
            .iter()
            .enumerate()
            .map(|(k, l)| as_str(l, &format!("{path}[{k}]")).map(str::to_owned))
            .collect::<Result<Vec<_>>>()?;
        actions.push(labels);
    }
    // Validates labels and fixes the profile order; payoffs filled below.
    let shape = Game::new(actions.clone(), |a| vec![rational::zero(); a.len()])?;
    let n = shape.num_players();

    let entries = as_array(field(obj, "payoffs", "game")?, "payoffs")?;
    let mut table: Vec<Option<Vec<Rational>>> = vec![None; shape.num_profiles()];
    for (k, e) in entries.iter().enumerate() {
        let path = format!("payoffs[{k}]");
        let entry = as_object(e, &path)?;
        let idx = parse_profile(&shape, field(entry, "profile", &path)?, &format!("{path}.profile"))?;
        let u_v = as_array(field(entry, "u", &path)?, &format!("{path}.u"))?;
        if u_v.len() != n {
            return Err(at(
                &format!("{path}.u"),
                format!("expected {n} payoffs, found {}", u_v.len()),
            ));
        }
        let u = u_v
            .iter()
            .enumerate()
            .map(|(i, x)| parse_rational(x, &format!("{path}.u[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        if table[idx].replace(u).is_some() {
            return Err(at(
                &format!("{path}.profile"),
                format!("duplicate profile {:?}", shape.profile_labels(idx)),
            ));
        }
    }
    if let Some(idx) = table.iter().position(Option::is_none) {
        return Err(at(
            "payoffs",
            format!("no payoffs given for profile {:?}", shape.profile_labels(idx)),
        ));
    }
    Game::from_table(actions, table.into_iter().flatten().collect())
}

pub fn parse_distribution(game: &Game, text: &str) -> Result<Distribution> {
    let root = parse_json(text)?;
    let obj = as_object(&root, "distribution")?;
    let entries = as_array(field(obj, "prob", "distribution")?, "prob")?;
    let mut probs: Vec<Option<Rational>> = vec![None; game.num_profiles()];
    for (k, e) in entries.iter().enumerate() {
        let path = format!("prob[{k}]");
        let entry = as_object(e, &path)?;
        let idx = parse_profile(game, field(entry, "profile", &path)?, &format!("{path}.profile"))?;
        let p = parse_rational(field(entry, "p", &path)?, &format!("{path}.p"))?;
        if probs[idx].replace(p).is_some() {
            return Err(at(
                &format!("{path}.profile"),
                format!("duplicate profile {:?}", game.profile_labels(idx)),
            ));
        }
    }
    Distribution::new(game, probs.into_iter().map(Option::unwrap_or_default).collect())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
        Error::InvalidDistribution(msg) => Error::InvalidDistribution(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn read_game(path: &Path) -> Result<Game> {
    in_file(path, parse_game(&read(path)?))
}

pub fn read_distribution(game: &Game, path: &Path) -> Result<Distribution> {
    in_file(path, parse_distribution(game, &read(path)?))
}

pub fn rationals(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(|r| Value::String(rational::format(r))).collect())
}

fn labels(game: &Game, idx: usize) -> Value {
    json!(game.profile_labels(idx))
}

pub fn game_to_json(game: &Game) -> Value {
    let payoffs: Vec<Value> = (0..game.num_profiles())
        .map(|idx| json!({"profile": labels(game, idx), "u": rationals(game.payoff_vector(idx))}))
        .collect();
    json!({
        "players": game.num_players(),
        "actions": game.all_actions(),
        "payoffs": payoffs,
    })
}

/// Support entries only, in profile index order.
pub fn distribution_to_json(game: &Game, p: &Distribution) -> Value {
    let prob: Vec<Value> = p
        .support()
        .map(|idx| json!({"profile": labels(game, idx), "p": rational::format(p.prob(idx))}))
        .collect();
    json!({ "prob": prob })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

pub fn emit_game(game: &Game) -> String {
    pretty(&game_to_json(game))
}

pub fn emit_distribution(game: &Game, p: &Distribution) -> String {
    pretty(&distribution_to_json(game, p))
}

/// One entry per deviation triple with 1-based player numbers and action
/// labels.
pub fn pattern_to_json(game: &Game, pattern: &SignPattern) -> Value {
    let flags: Vec<Value> = game
        .deviation_triples()
        .into_iter()
        .zip(&pattern.flags)
        .map(|((j, a, b), &pos)| {
            json!({
                "player": j + 1,
                "from": game.action_label(j, a),
                "to": game.action_label(j, b),
                "flag": if pos { "POS" } else { "NONPOS" },
            })
        })
        .collect();
    Value::Array(flags)
}

pub fn certificate_to_json(game: &Game, cert: &RegionCertificate, bound_gap: bool) -> Value {
    json!({
        "pattern": pattern_to_json(game, &cert.pattern),
        "point": distribution_to_json(game, &cert.point)["prob"],
        "lp_value": rational::format(&cert.lp_value),
        "verified_pi": rationals(&cert.verified_pi.values),
        "weights": rationals(&cert.weights),
        "verified_value": rational::format(&cert.verified_value),
        "bound_gap": bound_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::*;
    use crate::rational::{int, ratio};

    const GAME: &str = r#"{
        "players": 2,
        "actions": [["U", "D"], ["L", "R"]],
        "payoffs": [
            {"profile": ["U", "L"], "u": ["0", "1"]},
            {"profile": ["U", "R"], "u": ["1", "0"]},
            {"profile": ["D", "L"], "u": ["1", "0"]},
            {"profile": ["D", "R"], "u": ["0", "2"]}
        ]
    }"#;

    fn input_msg(r: Result<impl std::fmt::Debug>) -> String {
        match r {
            Err(Error::Input(m)) => m,
            other => panic!("expected an input error, got {other:?}"),
        }
    }

    #[test]
    fn parses_the_example_game() {
        let g = parse_game(GAME).unwrap();
        assert_eq!(g, example_game());
    }

    #[test]
    fn parses_distributions_with_omitted_profiles() {
        let g = example_game();
        let p = parse_distribution(
            &g,
            r#"{"prob": [{"profile": ["D", "R"], "p": "1/6"}, {"profile": ["U", "L"], "p": "1/3"},
                         {"profile": ["U", "R"], "p": "1/3"}, {"profile": ["D", "L"], "p": "1/6"}]}"#,
        )
        .unwrap();
        assert_eq!(p, p_ce(&g));
        let pm = parse_distribution(&g, r#"{"prob": [{"profile": ["D", "L"], "p": "1"}]}"#).unwrap();
        assert_eq!(pm, Distribution::point_mass(&g, 2));
    }

    #[test]
    fn round_trips() {
        let g = example_game();
        assert_eq!(parse_game(&emit_game(&g)).unwrap(), g);
        for p in [p_ce(&g), q(&g), Distribution::point_mass(&g, 3)] {
            assert_eq!(parse_distribution(&g, &emit_distribution(&g, &p)).unwrap(), p);
        }
        let three = Game::with_sizes(&[2, 1, 3], |a| vec![ratio(a[0] as i64, 7), int(-1), int(a[2] as i64)]).unwrap();
        assert_eq!(parse_game(&emit_game(&three)).unwrap(), three);
    }

    #[test]
    fn field_diagnostics() {
        let bad_u = GAME.replace(r#"["0", "2"]"#, r#"["0", "2/0"]"#);
        assert!(input_msg(parse_game(&bad_u)).starts_with("payoffs[3].u[1]"));
        let float = GAME.replace(r#"["0", "2"]"#, r#"["0", 2.5]"#);
        assert!(input_msg(parse_game(&float)).starts_with("payoffs[3].u[1]"));
        let dup = GAME.replace(r#"["D", "R"]"#, r#"["U", "L"]"#);
        assert!(input_msg(parse_game(&dup)).contains("duplicate profile"));
        let players = GAME.replace(r#""players": 2"#, r#""players": 3"#);
        assert!(input_msg(parse_game(&players)).starts_with("actions"));
        let label = GAME.replace(r#"["D", "R"]"#, r#"["D", "X"]"#);
        assert!(input_msg(parse_game(&label)).starts_with("payoffs[3].profile[1]"));
        let syntax = input_msg(parse_game("{\"players\": 2,\n  \"actions\": [}"));
        assert!(syntax.contains("line 2"), "{syntax}");
    }

    #[test]
    fn missing_profile_is_rejected() {
        let missing = GAME.replace(
            ",\n            {\"profile\": [\"D\", \"R\"], \"u\": [\"0\", \"2\"]}",
            "",
        );
        assert!(input_msg(parse_game(&missing)).contains("[\"D\", \"R\"]"));
    }

    #[test]
    fn distribution_errors() {
        let g = example_game();
        let dup = r#"{"prob": [{"profile": ["U", "L"], "p": "1/2"}, {"profile": ["U", "L"], "p": "1/2"}]}"#;
        assert!(input_msg(parse_distribution(&g, dup)).contains("duplicate"));
        let short = r#"{"prob": [{"profile": ["U", "L"], "p": "1/2"}]}"#;
        assert!(matches!(
            parse_distribution(&g, short),
            Err(Error::InvalidDistribution(_))
        ));
        let neg = r#"{"prob": [{"profile": ["U", "L"], "p": "-1"}, {"profile": ["U", "R"], "p": "2"}]}"#;
        assert!(matches!(
            parse_distribution(&g, neg),
            Err(Error::InvalidDistribution(_))
        ));
    }

    #[test]
    fn certificate_json_keeps_rationals_as_strings() {
        let g = example_game();
        let cfg = crate::search::SearchConfig::new(vec![int(3), int(2)]);
        let res = crate::search::find_optimin(&g, &cfg).unwrap();
        let v = certificate_to_json(&g, &res.best, res.bound_gap);
        assert_eq!(v["lp_value"], "3");
        assert_eq!(v["weights"], json!(["3", "2"]));
        assert_eq!(v["bound_gap"], false);
        assert_eq!(v["pattern"].as_array().unwrap().len(), 4);
        assert_eq!(v["pattern"][2]["player"], 2);
    }
}
