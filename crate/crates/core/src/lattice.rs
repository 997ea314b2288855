//! Semi-infinite waveguide arrays with nearest-neighbour coupling, truncated to
//! `N` guides, and their closed-form impulse responses for light launched into
//! guide 0.
//!
//! Two arrays are modelled. The Glauber–Fock-type array has `H = K₊ + K₋`
//! (coupling `j+1` between guides `j` and `j+1` at Bargmann index 1/2); the
//! uniform array has `H = V̂† + V̂` (all couplings 1). Fields obey
//! `∓i dE/dz = H E` depending on [`Sign`], and are integrated with fixed-step
//! RK4 on the tridiagonal coupling list.

use num_complex::Complex64;

use crate::algebra::{phase_operators, Su11Generators, BARGMANN_K};
use crate::error::{Error, Result};
use crate::fock::{FockVector, TruncatedOperator, ZERO};
use crate::specfun::bessel_j_sequence;
use crate::states::su11_perelomov_state;

/// Largest `|c_{N−1}|²` tolerated before the run is declared truncated.
pub const LEAKAGE_LIMIT: f64 = 1e-8;
/// Largest `h·ρ(H)` allowed; RK4 is unstable on the imaginary axis past `2√2`.
pub const STABILITY_LIMIT: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    /// Glauber–Fock-type array, `H = K₊ + K₋`.
    Su11,
    /// Homogeneously coupled array, `H = V̂† + V̂`.
    Uniform,
}

impl LatticeKind {
    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::Su11 => "su11",
            LatticeKind::Uniform => "uniform",
        }
    }
}

/// Which side of the field equation carries the `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// `−i dE/dz = H E`, so `E(z) = e^{izH} E(0)`.
    MinusI,
    /// `i dE/dz = H E`, so `E(z) = e^{−izH} E(0)`.
    PlusI,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::MinusI => 1.0,
            Sign::PlusI => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sign::MinusI => "minus-i",
            Sign::PlusI => "plus-i",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    pub dim: usize,
    pub sign: Sign,
    /// Bargmann index of the [`LatticeKind::Su11`] couplings `√((j+1)(j+2k))`.
    pub bargmann_k: f64,
}

impl LatticeSpec {
    pub fn new(kind: LatticeKind, dim: usize) -> Self {
        Self { kind, dim, sign: Sign::MinusI, bargmann_k: BARGMANN_K }
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    pub fn with_bargmann(mut self, k: f64) -> Self {
        self.bargmann_k = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Dimension(format!("lattice needs at least 2 guides, got {}", self.dim)));
        }
        if !(self.bargmann_k > 0.0 && self.bargmann_k.is_finite()) {
            return Err(Error::Range(format!("Bargmann index must be positive, got {}", self.bargmann_k)));
        }
        Ok(())
    }

    /// `g[j]` couples guides `j` and `j+1`.
    pub fn couplings(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let k = self.bargmann_k;
        Ok((0..self.dim - 1)
            .map(|j| match self.kind {
                LatticeKind::Uniform => 1.0,
                LatticeKind::Su11 if k == BARGMANN_K => (j + 1) as f64,
                LatticeKind::Su11 => ((j + 1) as f64 * (j as f64 + 2.0 * k)).sqrt(),
            })
            .collect())
    }
}

/// Fewest guides that keep the impulse response off the truncation edge up to `zmax`.
pub fn default_dim(kind: LatticeKind, zmax: f64) -> usize {
    let z = zmax.abs();
    match kind {
        LatticeKind::Su11 => 50 + (120.0 * z).ceil() as usize,
        LatticeKind::Uniform => 40 + (6.0 * z).ceil() as usize,
    }
}

/// Substeps per sample that keep `h·ρ(H) ≤ 0.01`.
pub fn default_steps_per_sample(spec: &LatticeSpec, zmax: f64, samples: usize) -> Result<usize> {
    let rho = spectral_bound(&spec.couplings()?);
    let per_sample = zmax.abs() / samples.max(1) as f64;
    Ok(((per_sample * rho / 0.01).ceil() as usize).max(1))
}

/// Guides excluded from oracle comparisons by default, `⌈N/4⌉`. The hard wall
/// at guide `N−1` reflects whatever amplitude reaches it, so the last guides
/// differ from the semi-infinite closed form by about the field's own size
/// there.
pub fn default_oracle_edge(dim: usize) -> usize {
    dim.div_ceil(4)
}

// Gershgorin bound on the spectral radius of the tridiagonal H.
fn spectral_bound(g: &[f64]) -> f64 {
    (0..=g.len())
        .map(|j| {
            let left = if j > 0 { g[j - 1] } else { 0.0 };
            let right = if j < g.len() { g[j] } else { 0.0 };
            left + right
        })
        .fold(0.0, f64::max)
}

/// `H` as a dense Hermitian operator with zero diagonal; edge band 1.
pub fn build_hamiltonian(spec: &LatticeSpec) -> Result<TruncatedOperator> {
    spec.validate()?;
    let h = match spec.kind {
        LatticeKind::Su11 => {
            let g = Su11Generators::with_bargmann(spec.dim, spec.bargmann_k)?;
            g.kplus.add(&g.kminus)?
        }
        LatticeKind::Uniform => {
            let p = phase_operators(spec.dim)?;
            p.vdag.add(&p.v)?
        }
    };
    Ok(h.with_edge_band(1))
}

/// `e^{±izH}` by dense matrix exponential, the independent route to the same fields.
pub fn exact_propagator(spec: &LatticeSpec, z: f64) -> Result<TruncatedOperator> {
    build_hamiltonian(spec)?.expm(Complex64::new(0.0, spec.sign.factor() * z))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationResult {
    pub z_grid: Vec<f64>,
    pub fields: Vec<FockVector>,
    /// `max_z |‖E(z)‖² − ‖E(0)‖²|`.
    pub norm_drift: f64,
    /// `max_z |E_{N−1}(z)|²`.
    pub edge_leakage: f64,
}

impl PropagationResult {
    pub fn input(&self) -> &FockVector {
        &self.fields[0]
    }
}

/// Integrates the field equation from `z = 0` to `zmax` with classical RK4 at
/// step `h = zmax / (samples · steps_per_sample)`, recording `samples + 1`
/// fields including the input.
pub fn propagate(
    spec: &LatticeSpec,
    input: &FockVector,
    zmax: f64,
    samples: usize,
    steps_per_sample: usize,
) -> Result<PropagationResult> {
    let g = spec.couplings()?;
    if input.dim() != spec.dim {
        return Err(Error::Dimension(format!("input has {} guides, lattice {}", input.dim(), spec.dim)));
    }
    if input.norm() == 0.0 {
        return Err(Error::Range("input field is zero".into()));
    }
    if !zmax.is_finite() {
        return Err(Error::Range(format!("zmax = {zmax} is not finite")));
    }
    if samples == 0 || steps_per_sample == 0 {
        return Err(Error::Range("samples and steps per sample must be positive".into()));
    }
    let h = zmax / (samples * steps_per_sample) as f64;
    let rho = spectral_bound(&g);
    if h.abs() * rho > STABILITY_LIMIT {
        return Err(Error::Range(format!(
            "step {h} too large for spectral radius {rho}; use at least {} steps per sample",
            default_steps_per_sample(spec, zmax, samples)?
        )));
    }

    let n = spec.dim;
    let rate = Complex64::new(0.0, spec.sign.factor());
    let mut e: Vec<Complex64> = input.amps().to_vec();
    let norm0 = input.norm_sqr();
    let mut work = Rk4Work::new(n);
    let mut z_grid = Vec::with_capacity(samples + 1);
    let mut fields = Vec::with_capacity(samples + 1);
    let mut norm_drift: f64 = 0.0;
    let mut edge_leakage = e[n - 1].norm_sqr();
    z_grid.push(0.0);
    fields.push(input.clone());
    for s in 1..=samples {
        for _ in 0..steps_per_sample {
            work.step(&g, rate, h, &mut e);
            edge_leakage = edge_leakage.max(e[n - 1].norm_sqr());
        }
        if e.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Numeric(format!("field diverged before z = {}", s as f64 * h)));
        }
        let v = FockVector::new(e.clone())?;
        norm_drift = norm_drift.max((v.norm_sqr() - norm0).abs());
        z_grid.push(zmax * s as f64 / samples as f64);
        fields.push(v);
    }
    if edge_leakage > LEAKAGE_LIMIT {
        return Err(Error::TruncationOverflow { leakage: edge_leakage });
    }
    Ok(PropagationResult { z_grid, fields, norm_drift, edge_leakage })
}

struct Rk4Work {
    k: [Vec<Complex64>; 4],
    tmp: Vec<Complex64>,
}

impl Rk4Work {
    fn new(n: usize) -> Self {
        Self { k: std::array::from_fn(|_| vec![ZERO; n]), tmp: vec![ZERO; n] }
    }

    fn step(&mut self, g: &[f64], rate: Complex64, h: f64, e: &mut [Complex64]) {
        let [k1, k2, k3, k4] = &mut self.k;
        let tmp = &mut self.tmp;
        deriv(g, rate, e, k1);
        axpy_into(tmp, e, 0.5 * h, k1);
        deriv(g, rate, tmp, k2);
        axpy_into(tmp, e, 0.5 * h, k2);
        deriv(g, rate, tmp, k3);
        axpy_into(tmp, e, h, k3);
        deriv(g, rate, tmp, k4);
        let w = h / 6.0;
        for j in 0..e.len() {
            e[j] += (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]) * w;
        }
    }
}

// out = rate · H e
fn deriv(g: &[f64], rate: Complex64, e: &[Complex64], out: &mut [Complex64]) {
    let n = e.len();
    for j in 0..n {
        let mut acc = ZERO;
        if j > 0 {
            acc += e[j - 1] * g[j - 1];
        }
        if j + 1 < n {
            acc += e[j + 1] * g[j];
        }
        out[j] = rate * acc;
    }
}

fn axpy_into(out: &mut [Complex64], e: &[Complex64], s: f64, k: &[Complex64]) {
    for j in 0..e.len() {
        out[j] = e[j] + k[j] * s;
    }
}

/// Closed-form field at guide `m` for unit input at guide `input`, distance `z`.
///
/// Only `input = 0` has a closed form: `sech z (i tanh z)^m` for the
/// Glauber–Fock-type array and `i^m (m+1) J_{m+1}(2z) / z` for the uniform
/// one, with `z → −z` under [`Sign::PlusI`].
pub fn impulse_analytic(spec: &LatticeSpec, m: usize, input: usize, z: f64) -> Result<Complex64> {
    Ok(impulse_profile(spec, input, z, m + 1)?[m])
}

/// [`impulse_analytic`] for guides `0..count`.
pub fn impulse_profile(spec: &LatticeSpec, input: usize, z: f64, count: usize) -> Result<Vec<Complex64>> {
    spec.validate()?;
    if input != 0 {
        return Err(Error::UnsupportedOracle { input });
    }
    if !z.is_finite() {
        return Err(Error::Range(format!("z = {z} is not finite")));
    }
    let t = spec.sign.factor() * z;
    if t == 0.0 {
        let mut out = vec![ZERO; count];
        if count > 0 {
            out[0] = Complex64::new(1.0, 0.0);
        }
        return Ok(out);
    }
    match spec.kind {
        LatticeKind::Su11 if spec.bargmann_k == BARGMANN_K => {
            let sech = 1.0 / t.cosh();
            let step = Complex64::new(0.0, t.tanh());
            let mut cur = Complex64::new(sech, 0.0);
            Ok((0..count)
                .map(|_| {
                    let out = cur;
                    cur *= step;
                    out
                })
                .collect())
        }
        LatticeKind::Su11 => {
            // e^{itH} = e^{αK₊ − α*K₋} with α = it.
            let v = su11_perelomov_state(Complex64::new(0.0, t), spec.bargmann_k, count.max(2))?;
            Ok(v.amps()[..count].to_vec())
        }
        LatticeKind::Uniform => {
            let j = bessel_j_sequence(count, 2.0 * t)?;
            let mut phase = Complex64::new(1.0, 0.0);
            Ok((0..count)
                .map(|m| {
                    let out = phase * ((m + 1) as f64 * j[m + 1] / t);
                    phase *= Complex64::new(0.0, 1.0);
                    out
                })
                .collect())
        }
    }
}

/// Guide the input was launched into, if it is a unit impulse.
pub fn impulse_input(v: &FockVector) -> Option<usize> {
    let mut hit = None;
    for (j, c) in v.amps().iter().enumerate() {
        if *c == ZERO {
            continue;
        }
        if hit.is_some() || *c != Complex64::new(1.0, 0.0) {
            return None;
        }
        hit = Some(j);
    }
    hit
}

/// `max_{z, m < N−b} |E_m(z) − I_{m,0}(z)|` for a run launched into guide 0,
/// with `b` = [`default_oracle_edge`].
pub fn compare_to_oracle(result: &PropagationResult, spec: &LatticeSpec) -> Result<f64> {
    compare_to_oracle_with(result, spec, default_oracle_edge(spec.dim))
}

pub fn compare_to_oracle_with(result: &PropagationResult, spec: &LatticeSpec, edge: usize) -> Result<f64> {
    match impulse_input(result.input()) {
        Some(0) => {}
        Some(n) => return Err(Error::UnsupportedOracle { input: n }),
        None => return Err(Error::Range("closed form needs a unit impulse input".into())),
    }
    let guides = spec.dim.saturating_sub(edge.max(1));
    let mut worst: f64 = 0.0;
    for (z, field) in result.z_grid.iter().zip(&result.fields) {
        let exact = impulse_profile(spec, 0, *z, guides)?;
        for (m, x) in exact.iter().enumerate() {
            worst = worst.max((field.get(m) - x).norm());
        }
    }
    Ok(worst)
}
