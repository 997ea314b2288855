mod common;

use common::{bessel_grid, bessel_i_oracle, bessel_j_oracle};
use fockphase::specfun::{bessel_i, bessel_j, bessel_j_sequence};

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

#[test]
fn oracle_small_cases() {
    assert!((bessel_j_oracle(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-16);
    assert!((bessel_i_oracle(0, 1.0) - 1.266_065_877_752_008_4).abs() < 1e-15);
    assert_eq!(bessel_j_oracle(3, 0.0), 0.0);
}

#[test]
fn j_matches_series_oracle() {
    let mut worst = (0.0, 0, 0.0);
    for (m, x) in bessel_grid() {
        let e = rel(bessel_j(m, x).unwrap(), bessel_j_oracle(m, x));
        if e > worst.0 {
            worst = (e, m, x);
        }
    }
    println!("J worst relative error {:.3e} at m = {}, x = {}", worst.0, worst.1, worst.2);
    assert!(worst.0 <= 1e-12);
}

#[test]
fn i_matches_series_oracle() {
    let mut worst = (0.0, 0, 0.0);
    for (m, x) in bessel_grid() {
        let e = rel(bessel_i(m, x).unwrap(), bessel_i_oracle(m, x));
        if e > worst.0 {
            worst = (e, m, x);
        }
    }
    println!("I worst relative error {:.3e} at m = {}, x = {}", worst.0, worst.1, worst.2);
    assert!(worst.0 <= 1e-12);
}

#[test]
fn sequence_agrees_with_oracle_at_every_order() {
    for x in [0.3, 2.404_825_557_695_773, 7.5, 19.9] {
        let seq = bessel_j_sequence(60, x).unwrap();
        for (m, v) in seq.iter().enumerate() {
            let o = bessel_j_oracle(m, x);
            assert!((v - o).abs() <= 1e-12 * o.abs().max(1e-300) + 1e-16, "m = {m}, x = {x}");
        }
    }
}

#[test]
fn certified_range_beyond_grid() {
    // absolute floor near zeros of J; |J| ≤ 1 so this is still ~1e-14 of the scale
    for i in 0..200 {
        let x = 20.0 + 30.0 * i as f64 / 199.0;
        let m = (i * 53) % 201;
        let o = bessel_j_oracle(m, x);
        let v = bessel_j(m, x).unwrap();
        assert!((v - o).abs() <= 1e-12 * o.abs() + 1e-15, "J m = {m}, x = {x}: {v} vs {o}");
        let o = bessel_i_oracle(m, x);
        assert!(rel(bessel_i(m, x).unwrap(), o) <= 1e-12, "I m = {m}, x = {x}");
    }
}
