mod common;

use common::{run_property, CASES};

fn check(name: &str) {
    if let Err(e) = run_property(name, CASES) {
        panic!("{name}: {e}");
    }
}

#[test]
fn series_solve_residual_vanishes() {
    check("series_solve_residual");
}

#[test]
fn clusters_multiply_back() {
    check("cluster_product");
}

#[test]
fn q_truncation_does_not_change_the_ideal() {
    check("q_truncation");
}

#[test]
fn ideal_closed_under_ring_operations() {
    check("ideal_closure");
}

#[test]
fn divisorial_orders_add() {
    check("valuation_additivity");
}

#[test]
fn parser_round_trip() {
    check("parser_round_trip");
}

#[test]
fn json_is_deterministic() {
    check("json_determinism");
}
