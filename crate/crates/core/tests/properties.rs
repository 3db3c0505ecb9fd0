mod common;

use common::*;

fn timed(name: &str, f: fn(u64) -> Result<(), String>, seed: u64) {
    let t = std::time::Instant::now();
    let r = f(seed);
    eprintln!("{name}: {:?}", t.elapsed());
    if let Err(e) = r {
        panic!("{name}: {e}");
    }
}

#[test]
fn pbw_normal_form_is_confluent() {
    timed("confluence", pbw_confluence, 0x5eed_0001);
}

#[test]
fn multiplication_is_associative() {
    timed("associativity", associativity, 0x5eed_0002);
}

#[test]
fn commutator_obeys_leibniz_and_jacobi() {
    timed("leibniz", leibniz_jacobi, 0x5eed_0003);
}

#[test]
fn central_reduction_is_sound() {
    timed("reduction", reduction_soundness, 0x5eed_0004);
}

#[test]
fn substitution_is_a_morphism() {
    timed("morphism", substitute_morphism, 0x5eed_0005);
}

#[test]
fn spot_oracle_agrees() {
    timed("oracle", spot_oracle, 0x5eed_0006);
}

#[test]
fn spot_oracle_catches_a_corrupted_image() {
    assert!(spot_oracle_detects_corruption(3));
}
