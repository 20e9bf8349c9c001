//! Acceptance suite: one test per criterion, each printing a single
//! pass line with the quantities it measured. The check bodies live in
//! `gbs_core::verify` so that `verify-paper` reports run the exact same
//! code; the tests pin the default seed.

use gbs_core::verify;

fn run(id: u8) {
    let c = verify::all()
        .into_iter()
        .find(|c| c.id == id)
        .unwrap_or_else(|| panic!("no criterion {id}"));
    let detail = (c.run)(0);
    println!("criterion {:02}: pass - {detail}", c.id);
}

#[test]
fn criterion_01_tile_computing_identity() {
    run(1);
}

#[test]
fn criterion_02_bs_witness_patches() {
    run(2);
}

#[test]
fn criterion_03_lambda_step_identities() {
    run(3);
}

#[test]
fn criterion_04_height_well_definedness() {
    run(4);
}

#[test]
fn criterion_05_circle_map_aperiodicity() {
    run(5);
}

#[test]
fn criterion_06_normal_forms_match_oracle() {
    run(6);
}

#[test]
fn criterion_07_flow_periods_force_words() {
    run(7);
}

#[test]
fn criterion_08_fold_unfold_round_trip() {
    run(8);
}

#[test]
fn criterion_09_period_scanners() {
    run(9);
}

#[test]
fn criterion_10_locked_stabilizers() {
    run(10);
}

#[test]
fn criterion_11_approach_sequence() {
    run(11);
}

#[test]
fn criterion_12_presentations_and_witnesses() {
    run(12);
}
