//! Oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

const FRACTION_BITS: usize = 1500;

fn shift(v: BigInt, by: i64) -> BigInt {
    if by >= 0 {
        v << by as usize
    } else {
        v >> (-by) as usize
    }
}

/// Ascending series `Σ_k s^k (x/2)^{2k+m} / (k! (k+m)!)` summed in 1500-bit
/// fixed point from the exact binary value of `x`. `s = −1` gives `J_m`,
/// `s = +1` gives `I_m`.
fn series(m: usize, x: f64, alternating: bool) -> f64 {
    assert!((0.0..=64.0).contains(&x));
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    let (mant, exp, _) = x.integer_decode();
    let mant = BigInt::from(mant);
    // x/2 = mant · 2^q
    let q = exp as i64 - 1;
    let mant2 = &mant * &mant;

    let mut t = BigInt::one() << FRACTION_BITS;
    for j in 1..=m {
        t = shift(t * &mant, q) / BigInt::from(j);
    }
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    loop {
        if alternating && k % 2 == 1 {
            sum -= &t;
        } else {
            sum += &t;
        }
        k += 1;
        t = shift(t * &mant2, 2 * q) / BigInt::from(k * (k + m as u64));
        if t.is_zero() || (k as f64 > x && t.abs() < BigInt::one() << 64) {
            break;
        }
    }
    BigRational::new(sum, BigInt::one() << FRACTION_BITS).to_f64().unwrap()
}

pub fn bessel_j_oracle(m: usize, x: f64) -> f64 {
    series(m, x, true)
}

pub fn bessel_i_oracle(m: usize, x: f64) -> f64 {
    series(m, x, false)
}

/// 1000 `(m, x)` pairs covering `0 ≤ m ≤ 60`, `0 < x ≤ 20`.
pub fn bessel_grid() -> Vec<(usize, f64)> {
    (0..1000)
        .map(|i| {
            let m = (i * 37) % 61;
            let x = 20.0 * (i + 1) as f64 / 1000.0;
            (m, x)
        })
        .collect()
}
