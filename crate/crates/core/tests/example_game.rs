//! Golden values on the bundled game files.

mod common;

use std::path::PathBuf;

use common::*;
use correlated_optimin::equilibrium::{ce_uniqueness_probe, check_ce};
use correlated_optimin::game::expected_payoffs;
use correlated_optimin::io;
use correlated_optimin::optimin::{Evaluator, Variant};
use correlated_optimin::rational::{int, ratio, Rational};
use correlated_optimin::search::{
    find_optimin, find_optimin_dominating, pareto_falsify, region_lp, SearchConfig, SignPattern,
};
use correlated_optimin::zero_sum::as_zero_sum;
use correlated_optimin::{Distribution, Game};

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../games").join(name)
}

fn example() -> (Game, Distribution, Distribution) {
    let g = io::read_game(&path("example.json")).unwrap();
    let p_ce = io::read_distribution(&g, &path("example_ce.json")).unwrap();
    let q = io::read_distribution(&g, &path("example_q.json")).unwrap();
    (g, p_ce, q)
}

fn r(values: &[(i64, i64)]) -> Vec<Rational> {
    values.iter().map(|&(n, d)| ratio(n, d)).collect()
}

#[test]
fn bundled_ce_is_the_unique_equilibrium() {
    let (g, p_ce, _) = example();
    let probe = ce_uniqueness_probe(&g).unwrap();
    assert!(probe.unique);
    assert_eq!(probe.point, p_ce);
    assert_eq!(expected_payoffs(&g, &p_ce), r(&[(1, 2), (2, 3)]));
}

#[test]
fn every_variant_collapses_at_the_equilibrium() {
    let (g, p_ce, _) = example();
    let ev = Evaluator::new(&g);
    for variant in Variant::ALL {
        assert_eq!(
            ev.performance(&p_ce, variant).unwrap().values,
            r(&[(1, 2), (2, 3)]),
            "{variant}"
        );
    }
}

#[test]
fn guarantees_at_q() {
    let (g, _, q) = example();
    let ev = Evaluator::new(&g);
    let out = ev.performance(&q, Variant::Outside).unwrap().values;
    assert_eq!(out, r(&[(8, 15), (7, 10)]));
    assert_eq!(out, vec![ref_outside(&g, &q, 0), ref_outside(&g, &q, 1)]);

    let inside = ev.performance(&q, Variant::Inside).unwrap().values;
    assert_eq!(inside, r(&[(3, 10), (7, 10)]));
    assert_eq!(inside, vec![ref_inside(&g, &q, 0), ref_inside(&g, &q, 1)]);

    let coarse = ev.performance(&q, Variant::Coarse).unwrap().values;
    assert_eq!(coarse, vec![ref_coarse(&g, &q, 0), ref_coarse(&g, &q, 1)]);

    // One opponent action per recommendation, so mixing buys nothing.
    assert_eq!(ev.performance(&q, Variant::Mixed).unwrap().values, out);

    let violations = check_ce(&g, &q).unwrap();
    assert_eq!(violations.len(), 1);
    let v = &violations[0];
    assert_eq!((v.player, v.recommendation, v.deviation), (1, 0, 1));
    assert_eq!(v.gain, ratio(7, 30));
}

#[test]
fn weighted_optimin_reaches_three() {
    let (g, p_ce, _) = example();
    let res = find_optimin(&g, &SearchConfig::new(vec![int(3), int(2)])).unwrap();
    assert_eq!(res.best.verified_value, int(3));
    assert_eq!(res.lp_bound, int(3));
    assert!(!res.bound_gap);
    assert_eq!(res.regions_total, 16);
    // The equilibrium only reaches 3/2 + 4/3.
    assert!(res.best.verified_value > ratio(17, 6));
    let report = pareto_falsify(&g, &res.best.point, 100, 1).unwrap();
    assert!(!report.falsified());
    assert!(pareto_falsify(&g, &p_ce, 100, 1).unwrap().falsified());
}

#[test]
fn all_nonpositive_region_contains_the_equilibrium_value() {
    let (g, p_ce, _) = example();
    let pattern = SignPattern::all_nonpositive(&g);
    assert_eq!(SignPattern::at(&g, &p_ce), pattern);
    let (_, value) = region_lp(&g, &pattern, &[int(1), int(1)], None).unwrap().unwrap();
    assert_eq!(value, ratio(7, 6));
}

#[test]
fn dominating_search_keeps_equilibrium_payoffs() {
    let (g, p_ce, q) = example();
    let res = find_optimin_dominating(&g, &p_ce, &SearchConfig::unit(&g)).unwrap();
    let floor = r(&[(1, 2), (2, 3)]);
    for (v, f) in res.best.verified_pi.values.iter().zip(&floor) {
        assert!(v >= f);
    }
    assert!(res.best.verified_value >= ratio(7, 6));
    assert!(find_optimin_dominating(&g, &q, &SearchConfig::unit(&g)).is_err());
}

#[test]
fn witnesses_persist_near_q_and_the_equilibrium() {
    let (g, p_ce, q) = example();
    let ev = Evaluator::new(&g);
    let schedule = r(&[(1, 10), (1, 100), (1, 1000)]);
    let uniform = Distribution::uniform(&g);
    for i in 0..2 {
        for dir in [&uniform, &p_ce] {
            assert!(ev.persistence_check(&q, i, dir, &schedule).unwrap().holds);
        }
        let rep = ev.persistence_check(&p_ce, i, &p_ce, &schedule).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.threshold, Some(ratio(1, 10)));
    }
}

#[test]
fn matching_pennies_is_worth_nothing() {
    let g = io::read_game(&path("matching_pennies.json")).unwrap();
    let p = io::read_distribution(&g, &path("uniform_2x2.json")).unwrap();
    let zs = as_zero_sum(&g).unwrap();
    let val = zs.value().unwrap();
    assert_eq!(val.v, int(0));
    assert_eq!(val.p1_star, r(&[(1, 2), (1, 2)]));
    assert_eq!(val.p2_star, r(&[(1, 2), (1, 2)]));
    assert!(ref_certifies_value(&g, &val.v, &val.p1_star, &val.p2_star));
    assert!(check_ce(&g, &p).unwrap().is_empty());
    let pi = Evaluator::new(&g).performance(&p, Variant::Outside).unwrap().values;
    assert_eq!(pi, vec![int(0), int(0)]);
    let res = find_optimin(&g, &SearchConfig::unit(&g)).unwrap();
    assert_eq!(res.best.verified_pi.values, vec![int(0), int(0)]);
}

#[test]
fn saddle_point_game() {
    let g = io::read_game(&path("saddle.json")).unwrap();
    let val = as_zero_sum(&g).unwrap().value().unwrap();
    assert_eq!(val.v, int(2));
    assert_eq!(val.p1_star, vec![int(1), int(0)]);
    assert_eq!(val.p2_star, vec![int(0), int(1), int(0)]);
    assert!(ref_certifies_value(&g, &val.v, &val.p1_star, &val.p2_star));
    let p = Distribution::point_mass(&g, g.profile_index_of_labels(&["top", "middle"]).unwrap());
    let (a, b) = as_zero_sum(&g).unwrap().performance_closed_form(&p).unwrap();
    assert_eq!((a, b), (int(2), int(-2)));
}

#[test]
fn example_is_not_zero_sum() {
    let (g, _, _) = example();
    assert!(as_zero_sum(&g).is_err());
}

#[test]
fn single_player_guarantee_is_the_expected_payoff() {
    let g = Game::with_sizes(&[3], |a| vec![int([1, 3, 2][a[0]])]).unwrap();
    let p = Distribution::uniform(&g);
    for variant in [Variant::Outside, Variant::Inside, Variant::Coarse] {
        assert_eq!(
            Evaluator::new(&g).performance(&p, variant).unwrap().values,
            vec![int(2)]
        );
    }
    let probe = ce_uniqueness_probe(&g).unwrap();
    assert!(probe.unique);
    assert_eq!(probe.point, Distribution::point_mass(&g, 1));
}
