//! State families on the truncated Fock space: the phase state, the
//! Barut–Girardello state of `K₋`, the London nonlinear coherent state and the
//! SU(1,1) Perelomov state, plus the α-deformed annihilation operator whose
//! eigenstate is the London state.
//!
//! Each family that the theory also writes as an ordered exponential acting on
//! `|0⟩` has a second constructor (`*_ordered`, [`phase_state_perelomov`])
//! that builds it that way with [`TruncatedOperator::expm`] in a larger space
//! and truncates, so the two forms can be compared.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{phase_operators, su11_generators, Su11Generators, BARGMANN_K};
use crate::error::{Error, Result};
use crate::fock::{annihilation, FockVector, TruncatedOperator, ZERO};
use crate::specfun::{bessel_i, bessel_j_ratios, bessel_j_sequence};

/// Largest `|α|` accepted by the coherent-state builders.
pub const MAX_ALPHA: f64 = 20.0;
/// Default relative threshold for the Bessel-root guard of [`deformed_annihilation`].
pub const ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateFamily {
    Phase,
    BarutGirardello,
    London,
    Su11Perelomov,
}

impl StateFamily {
    pub fn name(self) -> &'static str {
        match self {
            StateFamily::Phase => "phase",
            StateFamily::BarutGirardello => "bg",
            StateFamily::London => "london",
            StateFamily::Su11Perelomov => "su11",
        }
    }
}

/// A state request. `param` is `φ` for [`StateFamily::Phase`] and `α` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSpec {
    pub family: StateFamily,
    pub param: Complex64,
    /// Used by [`StateFamily::Su11Perelomov`] only.
    pub bargmann_k: f64,
    pub dim: usize,
}

impl StateSpec {
    pub fn new(family: StateFamily, param: Complex64, dim: usize) -> Self {
        Self { family, param, bargmann_k: BARGMANN_K, dim }
    }

    pub fn with_bargmann(mut self, k: f64) -> Self {
        self.bargmann_k = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Dimension(format!("truncated space needs N >= 2, got {}", self.dim)));
        }
        if !self.param.re.is_finite() || !self.param.im.is_finite() {
            return Err(Error::Range(format!("parameter {} is not finite", self.param)));
        }
        match self.family {
            StateFamily::Phase if self.param.im != 0.0 => {
                Err(Error::Range(format!("phase φ must be real, got {}", self.param)))
            }
            StateFamily::London if self.param.im != 0.0 => {
                Err(Error::Range(format!("London α must be real, got {}", self.param)))
            }
            StateFamily::Su11Perelomov if !(self.bargmann_k > 0.0 && self.bargmann_k.is_finite()) => {
                Err(Error::Range(format!("Bargmann index must be positive, got {}", self.bargmann_k)))
            }
            StateFamily::Phase => Ok(()),
            _ => check_alpha(self.param.norm()),
        }
    }

    pub fn build(&self) -> Result<FockVector> {
        self.validate()?;
        match self.family {
            StateFamily::Phase => phase_state(self.param.re, self.dim),
            StateFamily::BarutGirardello => bg_state(self.param, self.dim),
            StateFamily::London => london_state(self.param.re, self.dim),
            StateFamily::Su11Perelomov => su11_perelomov_state(self.param, self.bargmann_k, self.dim),
        }
    }
}

fn check_alpha(abs: f64) -> Result<()> {
    if !abs.is_finite() || abs > MAX_ALPHA {
        return Err(Error::Range(format!("|α| = {abs} exceeds {MAX_ALPHA}")));
    }
    Ok(())
}

/// `c_j = e^{iφ(j+1/2)} / √(2π)`. Not normalized: `‖φ‖² = N/(2π)`.
pub fn phase_state(phi: f64, dim: usize) -> Result<FockVector> {
    if !phi.is_finite() {
        return Err(Error::Range(format!("φ = {phi} is not finite")));
    }
    let pref = 1.0 / (2.0 * PI).sqrt();
    let amps = (0..dim).map(|j| Complex64::from_polar(pref, phi * (j as f64 + 0.5))).collect();
    FockVector::new(amps)
}

/// `(2π)^{-1/2} e^{e^{iφ}K₊} e^{iφK₀} e^{−e^{−iφ}K₋}|0⟩`, built in `N + guard`
/// levels and truncated to `N`.
pub fn phase_state_perelomov(phi: f64, dim: usize, guard: usize) -> Result<FockVector> {
    if !phi.is_finite() {
        return Err(Error::Range(format!("φ = {phi} is not finite")));
    }
    let big = dim + guard;
    let g = su11_generators(big)?;
    let e = Complex64::from_polar(1.0, phi);
    let factors = [g.kminus.expm(-e.conj())?, g.k0.expm(Complex64::new(0.0, phi))?, g.kplus.expm(e)?];
    let v = apply_all(&factors, FockVector::basis(big, 0)?)?;
    v.scaled(Complex64::new(1.0 / (2.0 * PI).sqrt(), 0.0)).truncated(dim)
}

fn apply_all(ops: &[TruncatedOperator], mut v: FockVector) -> Result<FockVector> {
    for op in ops {
        v = op.apply(&v)?;
    }
    Ok(v)
}

/// Barut–Girardello state of `K₋`: `c_j = α^j / (j! √I₀(2|α|))`.
pub fn bg_state(alpha: Complex64, dim: usize) -> Result<FockVector> {
    check_alpha(alpha.norm())?;
    let norm = bessel_i(0, 2.0 * alpha.norm())?.sqrt();
    let mut amps = Vec::with_capacity(dim);
    let mut term = Complex64::new(1.0 / norm, 0.0);
    for j in 0..dim {
        if j > 0 {
            term *= alpha / j as f64;
        }
        amps.push(term);
    }
    FockVector::new(amps)
}

/// `I₀(2|α|)^{-1/2} e^{αV̂†} e^{−α*V̂}|0⟩` in `N + guard` levels, truncated to `N`.
pub fn bg_state_ordered(alpha: Complex64, dim: usize, guard: usize) -> Result<FockVector> {
    check_alpha(alpha.norm())?;
    let big = dim + guard;
    let p = phase_operators(big)?;
    let factors = [p.v.expm(-alpha.conj())?, p.vdag.expm(alpha)?];
    let v = apply_all(&factors, FockVector::basis(big, 0)?)?;
    let norm = bessel_i(0, 2.0 * alpha.norm())?.sqrt();
    v.scaled(Complex64::new(1.0 / norm, 0.0)).truncated(dim)
}

/// Guard that keeps the Barut–Girardello tail below rounding: `⌈2e|α|⌉ + 32`.
pub fn bg_default_guard(alpha: Complex64) -> usize {
    (2.0 * std::f64::consts::E * alpha.norm()).ceil() as usize + 32
}

/// London nonlinear coherent state, `c_j = (j+1) J_{j+1}(2α) / α`; `|0⟩` at `α = 0`.
pub fn london_state(alpha: f64, dim: usize) -> Result<FockVector> {
    check_alpha(alpha.abs())?;
    if alpha == 0.0 {
        return FockVector::basis(dim, 0);
    }
    let j = bessel_j_sequence(dim, 2.0 * alpha)?;
    let amps = (0..dim).map(|k| Complex64::new((k + 1) as f64 * j[k + 1] / alpha, 0.0)).collect();
    FockVector::new(amps)
}

/// `e^{α(V̂†−V̂)}|0⟩` in `N + guard` levels, truncated to `N`.
pub fn london_state_ordered(alpha: f64, dim: usize, guard: usize) -> Result<FockVector> {
    check_alpha(alpha.abs())?;
    let big = dim + guard;
    let p = phase_operators(big)?;
    let u = p.vdag.sub(&p.v)?.expm(Complex64::new(alpha, 0.0))?;
    u.apply(&FockVector::basis(big, 0)?)?.truncated(dim)
}

/// Superdiagonal of `Ĉ_α`: `⟨n|Ĉ_α|n+1⟩ = α (n+1) J_{n+1}(2α) / ((n+2) J_{n+2}(2α))`.
///
/// The Bessel quotient comes from the ratio recurrence, so it stays finite
/// where the individual values underflow. A level is rejected when
/// `J_{n+2}(2α)` is smaller than `tol` times both neighbours `J_{n+1}` and
/// `J_{n+3}`, which is what happens near a zero but never on the monotone
/// tail. At `α = 0` the limit is `K₋`.
fn deformed_weights(alpha: f64, dim: usize, tol: f64) -> Result<Vec<f64>> {
    check_alpha(alpha.abs())?;
    if dim < 2 {
        return Err(Error::Dimension(format!("truncated space needs N >= 2, got {dim}")));
    }
    if alpha == 0.0 {
        return Ok((0..dim - 1).map(|n| (n + 1) as f64).collect());
    }
    // r[k] = J_k / J_{k+1}
    let r = bessel_j_ratios(dim + 1, 2.0 * alpha)?;
    let mut out = Vec::with_capacity(dim - 1);
    for n in 0..dim - 1 {
        let below = 1.0 / r[n + 1].abs(); // |J_{n+2} / J_{n+1}|
        let above = r[n + 2].abs(); // |J_{n+2} / J_{n+3}|
        if below < tol && above < tol {
            return Err(Error::BesselRoot { order: n + 2, index: n });
        }
        out.push(alpha * (n + 1) as f64 / (n + 2) as f64 * r[n + 1]);
    }
    Ok(out)
}

/// `Ĉ_α = f(n̂) √(n̂+1) â` with `f(n) = α J_{n+1}(2α) / ((n+2) J_{n+2}(2α))`.
pub fn deformed_annihilation(alpha: f64, dim: usize) -> Result<TruncatedOperator> {
    deformed_annihilation_with(alpha, dim, ROOT_TOL)
}

pub fn deformed_annihilation_with(alpha: f64, dim: usize, tol: f64) -> Result<TruncatedOperator> {
    let w = deformed_weights(alpha, dim, tol)?;
    // w[n] = f(n)·(n+1); split it back into the diagonal f(n) and √(n+1)·â.
    let f: Vec<_> =
        (0..dim).map(|n| if n + 1 < dim { Complex64::new(w[n] / (n + 1) as f64, 0.0) } else { ZERO }).collect();
    let sqrt_n1: Vec<_> = (0..dim).map(|n| Complex64::new(((n + 1) as f64).sqrt(), 0.0)).collect();
    TruncatedOperator::from_diagonal(&f)?.mul(&TruncatedOperator::from_diagonal(&sqrt_n1)?)?.mul(&annihilation(dim)?)
}

/// The same operator written on the SU(1,1) generators:
/// `α J_{K₀+1/2}(2α) / ((K₀+3/2) J_{K₀+3/2}(2α)) · K₋`.
pub fn deformed_annihilation_su11(alpha: f64, dim: usize) -> Result<TruncatedOperator> {
    let w = deformed_weights(alpha, dim, ROOT_TOL)?;
    let g = su11_generators(dim)?;
    let f: Vec<_> = (0..dim)
        .map(|n| {
            // K₀ + 1/2 = n + 1 on |n⟩
            let order = (g.k0.entry(n, n).re + 0.5).round() as usize;
            if n + 1 < dim {
                Complex64::new(w[order - 1] / order as f64, 0.0)
            } else {
                ZERO
            }
        })
        .collect();
    TruncatedOperator::from_diagonal(&f)?.mul(&g.kminus)
}

/// SU(1,1) Perelomov state `e^{αK₊ − α*K₋}|k,0⟩`:
/// `c_m = (1−|μ|²)^k √(Γ(2k+m)/(m! Γ(2k))) μ^m`, `μ = (α/|α|) tanh|α|`.
///
/// Magnitudes are accumulated as logarithms so large `m` cannot overflow.
pub fn su11_perelomov_state(alpha: Complex64, k: f64, dim: usize) -> Result<FockVector> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Range(format!("Bargmann index must be positive, got {k}")));
    }
    let a = alpha.norm();
    check_alpha(a)?;
    if a == 0.0 {
        return FockVector::basis(dim, 0);
    }
    let e2 = (-2.0 * a).exp();
    // ln(1 − tanh²a) = −2 ln cosh a
    let ln_sech2 = -2.0 * (a + e2.ln_1p() - std::f64::consts::LN_2);
    let ln_tanh = if a < 1.0 { a.tanh().ln() } else { (-e2).ln_1p() - e2.ln_1p() };
    let theta = alpha.arg();
    let mut amps = Vec::with_capacity(dim);
    let mut ln_binom = 0.0; // ln Γ(2k+m) − ln m! − ln Γ(2k)
    for m in 0..dim {
        if m > 0 {
            ln_binom += ((2.0 * k + m as f64 - 1.0) / m as f64).ln();
        }
        let ln_mag = k * ln_sech2 + 0.5 * ln_binom + m as f64 * ln_tanh;
        amps.push(Complex64::from_polar(ln_mag.exp(), m as f64 * theta));
    }
    FockVector::new(amps)
}

/// `e^{αK₊ − α*K₋}|k,0⟩` by `expm` in `N + guard` levels, truncated to `N`.
pub fn su11_perelomov_state_ordered(alpha: Complex64, k: f64, dim: usize, guard: usize) -> Result<FockVector> {
    check_alpha(alpha.norm())?;
    let big = dim + guard;
    let g = Su11Generators::with_bargmann(big, k)?;
    let gen = g.kplus.scaled(alpha).sub(&g.kminus.scaled(alpha.conj()))?;
    gen.expm(Complex64::new(1.0, 0.0))?.apply(&FockVector::basis(big, 0)?)?.truncated(dim)
}

/// `‖(Ô v − λ v)_{0..N−1−exclude_top}‖ / ‖v‖`.
pub fn eigen_residual(op: &TruncatedOperator, v: &FockVector, lambda: Complex64, exclude_top: usize) -> Result<f64> {
    let w = op.apply(v)?;
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::Numeric("eigen residual of the zero vector".into()));
    }
    let upto = v.dim().saturating_sub(exclude_top);
    let diff: f64 = (0..upto).map(|j| (w.get(j) - lambda * v.get(j)).norm_sqr()).sum();
    Ok(diff.sqrt() / norm)
}
