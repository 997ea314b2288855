//! Dense complex matrix exponential.
//!
//! Diagonal input is exponentiated entrywise.
//! Strictly triangular input is nilpotent, so its exponential is the finite
//! Taylor polynomial `Σ_{k<N} A^k / k!`; that path is exact up to rounding in
//! every entry, which matters for the ladder operators `K₊`, `K₋`, `V̂`, `V̂†`
//! whose exponentials span many orders of magnitude. Everything else goes
//! through scaling and squaring with a diagonal Padé approximant (degree 3, 5,
//! 7, 9 or 13 picked from the 1-norm). No eigendecomposition is used, so
//! non-normal input is handled the same as normal input.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

type CMatrix = DMatrix<Complex64>;

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17_297_280.0, 8_648_640.0, 1_995_840.0, 277_200.0, 25_200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn is_diagonal(a: &CMatrix) -> bool {
    let n = a.nrows();
    (0..n).all(|j| (0..n).all(|i| i == j || a[(i, j)] == Complex64::new(0.0, 0.0)))
}

pub(crate) fn expm(a: &CMatrix) -> Result<CMatrix> {
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("matrix exponential of non-finite entries".into()));
    }
    let out = if is_diagonal(a) {
        CMatrix::from_diagonal(&a.diagonal().map(|z| z.exp()))
    } else if let Some(nonzeros) = sparse_nilpotent(a) {
        nilpotent_series(a.nrows(), &nonzeros)
    } else {
        pade_scaling_squaring(a)?
    };
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("matrix exponential overflowed".into()));
    }
    Ok(out)
}

/// Nonzeros of `a` if it is strictly triangular and sparse enough for the
/// column-axpy Taylor sum to beat dense Padé.
fn sparse_nilpotent(a: &CMatrix) -> Option<Vec<(usize, usize, Complex64)>> {
    let n = a.nrows();
    let mut lower = true;
    let mut upper = true;
    let mut nonzeros = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let v = a[(i, j)];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            if i <= j {
                lower = false;
            }
            if i >= j {
                upper = false;
            }
            if !lower && !upper {
                return None;
            }
            nonzeros.push((i, j, v));
        }
    }
    (nonzeros.len() <= 4 * n).then_some(nonzeros)
}

fn nilpotent_series(n: usize, nonzeros: &[(usize, usize, Complex64)]) -> CMatrix {
    let mut result = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..n {
        let mut next = CMatrix::zeros(n, n);
        let inv_k = 1.0 / k as f64;
        for &(i, j, v) in nonzeros {
            let src = term.column(i);
            if src.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                continue;
            }
            next.column_mut(j).axpy(v * inv_k, &src, Complex64::new(1.0, 0.0));
        }
        if next.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
            break;
        }
        result += &next;
        term = next;
    }
    result
}

fn norm1(a: &CMatrix) -> f64 {
    a.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn pade_scaling_squaring(a: &CMatrix) -> Result<CMatrix> {
    let norm = norm1(a);
    for &(m, theta) in &THETA {
        if norm <= theta {
            return low_order_pade(a, m);
        }
    }
    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as i32 } else { 0 };
    let scaled = a * Complex64::new(2f64.powi(-s), 0.0);
    let mut x = pade13(&scaled)?;
    for _ in 0..s {
        x = &x * &x;
    }
    Ok(x)
}

fn low_order_pade(a: &CMatrix, m: usize) -> Result<CMatrix> {
    let b: &[f64] = match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        _ => &B9,
    };
    let n = a.nrows();
    let a2 = a * a;
    let mut even_power = CMatrix::identity(n, n);
    let mut u = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    for k in 0..=m / 2 {
        if k > 0 {
            even_power = &even_power * &a2;
        }
        v += &even_power * Complex64::new(b[2 * k], 0.0);
        u += &even_power * Complex64::new(b[2 * k + 1], 0.0);
    }
    let u = a * u;
    solve_pade(u, v)
}

fn pade13(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    let c = |x: f64| Complex64::new(x, 0.0);
    let ident = CMatrix::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let inner_u = &a6 * c(B13[13]) + &a4 * c(B13[11]) + &a2 * c(B13[9]);
    let u = a * (&a6 * inner_u + &a6 * c(B13[7]) + &a4 * c(B13[5]) + &a2 * c(B13[3]) + &ident * c(B13[1]));
    let inner_v = &a6 * c(B13[12]) + &a4 * c(B13[10]) + &a2 * c(B13[8]);
    let v = &a6 * inner_v + &a6 * c(B13[6]) + &a4 * c(B13[4]) + &a2 * c(B13[2]) + ident * c(B13[0]);
    solve_pade(u, v)
}

// r(A) = (V - U)^{-1} (V + U)
fn solve_pade(u: CMatrix, v: CMatrix) -> Result<CMatrix> {
    let numer = &v + &u;
    let denom = v - u;
    denom.lu().solve(&numer).ok_or_else(|| Error::Numeric("singular Padé denominator".into()))
}

#[cfg(test)]
pub(crate) fn expm_pade_only(a: &CMatrix) -> Result<CMatrix> {
    pade_scaling_squaring(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_gives_identity() {
        let z = CMatrix::zeros(5, 5);
        assert_eq!(expm(&z).unwrap(), CMatrix::identity(5, 5));
    }

    #[test]
    fn diagonal() {
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]));
        let e = expm(&a).unwrap();
        let expect = [1.0, std::f64::consts::E, std::f64::consts::E.powi(2)];
        for (i, x) in expect.iter().enumerate() {
            assert!((e[(i, i)] - c(*x, 0.0)).norm() < 1e-14 * x);
        }
        assert!(e[(0, 1)].norm() == 0.0);
    }

    #[test]
    fn non_normal_upper_triangular_closed_form() {
        // exp([[a, b], [0, d]]) = [[e^a, b (e^a - e^d)/(a - d)], [0, e^d]]
        let (a, b, d) = (c(0.3, 1.1), c(-2.0, 0.5), c(-1.7, 0.2));
        let m = CMatrix::from_row_slice(2, 2, &[a, b, c(0.0, 0.0), d]);
        let e = expm(&m).unwrap();
        let off = b * (a.exp() - d.exp()) / (a - d);
        assert!((e[(0, 0)] - a.exp()).norm() < 1e-14);
        assert!((e[(1, 1)] - d.exp()).norm() < 1e-14);
        assert!((e[(0, 1)] - off).norm() < 1e-14);
        assert!(e[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn jordan_block_large_norm() {
        let lambda = c(0.5, -3.0);
        let m = CMatrix::from_row_slice(2, 2, &[lambda, c(40.0, 0.0), c(0.0, 0.0), lambda]);
        let e = expm(&m).unwrap();
        let el = lambda.exp();
        let bound = 1e-12 * norm1(&m).exp();
        assert!((e[(0, 0)] - el).norm() < bound);
        assert!((e[(0, 1)] - el * 40.0).norm() < bound);
    }

    #[test]
    fn rotation_generator() {
        let t = 7.25;
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-t, 0.0), c(t, 0.0), c(0.0, 0.0)]);
        let e = expm(&m).unwrap();
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-13);
        assert!((e[(1, 0)].re - t.sin()).abs() < 1e-13);
    }

    #[test]
    fn nilpotent_series_agrees_with_pade() {
        let n = 24;
        let mut m = CMatrix::zeros(n, n);
        for j in 0..n - 1 {
            m[(j + 1, j)] = c(0.3 * (j + 1) as f64, 0.1);
        }
        assert!(sparse_nilpotent(&m).is_some());
        let taylor = expm(&m).unwrap();
        let pade = expm_pade_only(&m).unwrap();
        let scale = taylor.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(max_diff(&taylor, &pade) < 1e-12 * scale);
    }

    #[test]
    fn inverse_round_trip() {
        let n = 6;
        let m = CMatrix::from_fn(n, n, |i, j| c(((i * 7 + j * 3) % 5) as f64 * 0.3 - 0.6, (i as f64 - j as f64) * 0.2));
        let e = expm(&m).unwrap();
        let einv = expm(&(-m)).unwrap();
        assert!(max_diff(&(e * einv), &CMatrix::identity(n, n)) < 1e-12);
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = CMatrix::zeros(3, 3);
        m[(1, 2)] = c(f64::NAN, 0.0);
        assert!(matches!(expm(&m), Err(Error::Numeric(_))));
    }
}
