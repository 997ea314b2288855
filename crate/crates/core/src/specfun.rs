//! Bessel functions of the first kind, `J_m(x)` and `I_m(x)`, for integer order.
//!
//! `J_m` is computed with Miller's downward recurrence normalized through
//! `J_0(x) + 2 Σ_k J_2k(x) = 1`. `I_m` uses the ascending series for small
//! arguments and the analogous downward recurrence normalized through
//! `I_0(x) + 2 Σ_k I_k(x) = e^x` above that.

use crate::error::{Error, Result};

/// Largest order with a certified accuracy.
pub const MAX_ORDER: usize = 200;
/// Largest |argument| with a certified accuracy.
pub const MAX_ARGUMENT: f64 = 50.0;
/// Longest sequence [`bessel_j_sequence`] and [`bessel_j_ratios`] will build.
pub const MAX_SEQUENCE_ORDER: usize = 16_384;

const SERIES_SWITCH_I: f64 = 15.0;
const TINY_ARGUMENT: f64 = 1e-6;
const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEvaluation {
    pub order: usize,
    pub argument: f64,
    pub value: f64,
    /// Rounding-growth estimate for the recurrence that produced `value`.
    pub est_rel_error: f64,
}

// J_k(x) falls off only once k passes x, so the sweep starts past both the
// requested order and the turning point.
fn start_order(m: usize, x: f64) -> usize {
    let n = m.max(x.abs().ceil() as usize);
    n + 30 + (40.0 * n as f64).sqrt().ceil() as usize
}

fn check_range(m: usize, x: f64, max_order: usize) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Range(format!("argument {x} is not finite")));
    }
    if m > max_order {
        return Err(Error::Range(format!("order {m} exceeds {max_order}")));
    }
    if x.abs() > MAX_ARGUMENT {
        return Err(Error::Range(format!("|x| = {} exceeds {MAX_ARGUMENT}", x.abs())));
    }
    Ok(())
}

/// `J_m(x)` for `m ≤ 200`, `|x| ≤ 50`.
pub fn bessel_j(m: usize, x: f64) -> Result<f64> {
    bessel_j_eval(m, x).map(|e| e.value)
}

pub fn bessel_j_eval(m: usize, x: f64) -> Result<BesselEvaluation> {
    check_range(m, x, MAX_ORDER)?;
    let value = bessel_j_sequence(m, x)?[m];
    Ok(BesselEvaluation { order: m, argument: x, value, est_rel_error: 4.0 * start_order(m, x) as f64 * f64::EPSILON })
}

/// `J_0(x), …, J_max_order(x)` from a single downward sweep.
///
/// Orders above [`MAX_ORDER`] are allowed up to [`MAX_SEQUENCE_ORDER`]; their
/// values are tiny and underflow to zero where `J_m(x)` is below `f64` range.
pub fn bessel_j_sequence(max_order: usize, x: f64) -> Result<Vec<f64>> {
    check_range(max_order, x, MAX_SEQUENCE_ORDER)?;
    if x == 0.0 {
        let mut out = vec![0.0; max_order + 1];
        out[0] = 1.0;
        return Ok(out);
    }
    let mut out = if x.abs() < TINY_ARGUMENT {
        (0..=max_order).map(|m| j_tiny(m, x.abs())).collect()
    } else {
        miller_j(max_order, x.abs())
    };
    if x < 0.0 {
        for (m, v) in out.iter_mut().enumerate() {
            if m % 2 == 1 {
                *v = -*v;
            }
        }
    }
    Ok(out)
}

// Two leading terms of the ascending series; exact to rounding for |x| < 1e-6.
fn j_tiny(m: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for j in 1..=m {
        lead *= half / j as f64;
    }
    lead * (1.0 - half * half / (m + 1) as f64)
}

fn miller_j(max_order: usize, x: f64) -> Vec<f64> {
    let start = start_order(max_order, x);
    let mut out = vec![0.0; max_order + 1];
    let mut above = 0.0; // f_{k+1}
    let mut cur = 1.0; // f_k
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        if k <= max_order {
            out[k] = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let below = (2.0 * k as f64 / x) * cur - above;
        above = cur;
        cur = below;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            above *= RESCALE_BY;
            norm *= RESCALE_BY;
            if k <= max_order {
                for v in &mut out[k..] {
                    *v *= RESCALE_BY;
                }
            }
        }
    }
    out[0] = cur;
    norm += cur;
    for v in &mut out {
        *v /= norm;
    }
    out
}

/// Successive ratios `r[k] = J_k(x) / J_{k+1}(x)` for `k = 0..=max_order`.
///
/// Evaluated as the backward continued fraction `r[k-1] = 2k/x - 1/r[k]`, so
/// it stays finite where the individual values would underflow. A ratio is
/// infinite when `J_{k+1}(x)` is exactly zero.
pub fn bessel_j_ratios(max_order: usize, x: f64) -> Result<Vec<f64>> {
    check_range(max_order, x, MAX_SEQUENCE_ORDER)?;
    if x == 0.0 {
        return Err(Error::Range("ratios J_k(0)/J_k+1(0) are undefined".into()));
    }
    let start = start_order(max_order + 1, x);
    let mut r = 2.0 * (start + 1) as f64 / x;
    let mut out = vec![0.0; max_order + 1];
    for k in (1..=start).rev() {
        if k <= max_order {
            out[k] = r;
        }
        r = 2.0 * k as f64 / x - 1.0 / r;
    }
    out[0] = r;
    Ok(out)
}

/// `I_m(x)` for `m ≤ 200`, `0 ≤ x ≤ 50`.
pub fn bessel_i(m: usize, x: f64) -> Result<f64> {
    bessel_i_eval(m, x).map(|e| e.value)
}

pub fn bessel_i_eval(m: usize, x: f64) -> Result<BesselEvaluation> {
    check_range(m, x, MAX_ORDER)?;
    if x < 0.0 {
        return Err(Error::Range(format!("I_m needs x >= 0, got {x}")));
    }
    let (value, steps) = if x == 0.0 {
        (if m == 0 { 1.0 } else { 0.0 }, 1)
    } else if x <= SERIES_SWITCH_I {
        i_series(m, x)
    } else {
        (i_downward(m, x), i_start_order(m, x))
    };
    Ok(BesselEvaluation { order: m, argument: x, value, est_rel_error: 4.0 * steps as f64 * f64::EPSILON })
}

fn i_series(m: usize, x: f64) -> (f64, usize) {
    let half = 0.5 * x;
    let quarter_sq = half * half;
    let mut term = 1.0;
    for j in 1..=m {
        term *= half / j as f64;
    }
    let mut sum = term;
    let mut k = 0usize;
    loop {
        k += 1;
        term *= quarter_sq / (k as f64 * (k + m) as f64);
        sum += term;
        if term <= f64::EPSILON * 1e-3 * sum || term == 0.0 {
            break;
        }
    }
    (sum, m + k)
}

// I_k(x) only starts to fall off once k passes ~x, so the start sits further
// out than for J.
fn i_start_order(m: usize, x: f64) -> usize {
    m + 20 + (2.0 * x).ceil() as usize
}

fn i_downward(m: usize, x: f64) -> f64 {
    let start = i_start_order(m, x);
    let mut above = 0.0;
    let mut cur = 1.0;
    let mut target = 0.0;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        if k == m {
            target = cur;
        }
        norm += 2.0 * cur;
        let below = (2.0 * k as f64 / x) * cur + above;
        above = cur;
        cur = below;
        if cur > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            above *= RESCALE_BY;
            norm *= RESCALE_BY;
            target *= RESCALE_BY;
        }
    }
    if m == 0 {
        target = cur;
    }
    norm += cur;
    // e^x / norm can overflow only far outside the supported range.
    target * (x.exp() / norm)
}
