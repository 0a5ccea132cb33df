//! Kernel property suites at 1000 seeded cases each.

mod common;

use common::properties::run;

const CASES: u32 = 1000;

#[test]
fn splice() {
    run("splice", CASES).unwrap();
}

#[test]
fn phi_round_trip() {
    run("phi-round-trip", CASES).unwrap();
}

#[test]
fn series_ring_laws() {
    run("series-ring", CASES).unwrap();
}

#[test]
fn weyl_equivariance() {
    run("weyl", CASES).unwrap();
}

#[test]
fn fixed_point_counts() {
    run("fixed-points", CASES).unwrap();
}
