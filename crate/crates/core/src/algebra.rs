//! SU(1,1) generators, the exponential phase operators `V̂`, `V̂†`, and the
//! maps that move a product `e^{X₊K₊} e^{ln X₀ K₀} e^{X₋K₋}` between normal
//! order (`K₊` leftmost) and antinormal order (`K₋` leftmost).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{commutator, TruncatedOperator, ONE, ZERO};

/// Bargmann index of the single-mode realization used throughout.
pub const BARGMANN_K: f64 = 0.5;

const SINGULAR_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct Su11Generators {
    pub k0: TruncatedOperator,
    pub kplus: TruncatedOperator,
    pub kminus: TruncatedOperator,
    pub bargmann_k: f64,
}

/// `K₀ = n̂ + 1/2`, `K₊ = â†√(n̂+1)`, `K₋ = √(n̂+1) â`.
pub fn su11_generators(dim: usize) -> Result<Su11Generators> {
    Su11Generators::with_bargmann(dim, BARGMANN_K)
}

impl Su11Generators {
    /// Discrete-series realization with `⟨n+1|K₊|n⟩ = √((n+1)(n+2k))`.
    /// At `k = 1/2` the matrix elements are exactly `n + 1`.
    pub fn with_bargmann(dim: usize, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Range(format!("Bargmann index must be positive, got {k}")));
        }
        let weight = move |n: usize| {
            if k == BARGMANN_K {
                (n + 1) as f64
            } else {
                ((n + 1) as f64 * (n as f64 + 2.0 * k)).sqrt()
            }
        };
        let kplus = TruncatedOperator::shift(dim, true, 1, weight)?;
        let kminus = TruncatedOperator::shift(dim, false, 0, move |n| weight(n - 1))?;
        let diag: Vec<_> = (0..dim).map(|n| Complex64::new(n as f64 + k, 0.0)).collect();
        let k0 = TruncatedOperator::from_diagonal(&diag)?;
        Ok(Self { k0, kplus, kminus, bargmann_k: k })
    }

    pub fn dim(&self) -> usize {
        self.k0.dim()
    }
}

#[derive(Debug, Clone)]
pub struct PhaseOperators {
    pub v: TruncatedOperator,
    pub vdag: TruncatedOperator,
}

/// `V̂ = (n̂+1)^{-1/2} â` and its adjoint: `V̂|n⟩ = |n-1⟩`, `V̂†|n⟩ = |n+1⟩`.
pub fn phase_operators(dim: usize) -> Result<PhaseOperators> {
    let v = TruncatedOperator::shift(dim, false, 0, |_| 1.0)?;
    let vdag = v.adjoint().with_edge_band(1);
    Ok(PhaseOperators { v, vdag })
}

/// Residuals of `[K₀,K₊] = K₊`, `[K₀,K₋] = -K₋`, `[K₊,K₋] = -2K₀` outside the edge band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorResiduals {
    pub k0_kplus: f64,
    pub k0_kminus: f64,
    pub kplus_kminus: f64,
}

impl CommutatorResiduals {
    pub fn max(&self) -> f64 {
        self.k0_kplus.max(self.k0_kminus).max(self.kplus_kminus)
    }
}

pub fn commutator_residuals(g: &Su11Generators) -> Result<CommutatorResiduals> {
    let c1 = commutator(&g.k0, &g.kplus)?;
    let c2 = commutator(&g.k0, &g.kminus)?;
    let c3 = commutator(&g.kplus, &g.kminus)?;
    Ok(CommutatorResiduals {
        k0_kplus: c1.max_deviation(&g.kplus, c1.retained())?,
        k0_kminus: c2.max_deviation(&g.kminus.scaled(-ONE), c2.retained())?,
        kplus_kminus: c3.max_deviation(&g.k0.scaled(Complex64::new(-2.0, 0.0)), c3.retained())?,
    })
}

/// `(‖V̂V̂† − 1‖, ‖V̂†V̂ − (1 − |0⟩⟨0|)‖)`, entrywise maxima outside the edge band.
pub fn phase_unitarity_residuals(p: &PhaseOperators) -> Result<(f64, f64)> {
    let dim = p.v.dim();
    let id = TruncatedOperator::identity(dim)?;
    let right = p.v.mul(&p.vdag)?;
    let left = p.vdag.mul(&p.v)?;
    let mut proj = DMatrix::identity(dim, dim);
    proj[(0, 0)] = ZERO;
    let proj = TruncatedOperator::from_matrix(proj, 0)?;
    Ok((right.max_deviation(&id, right.retained())?, left.max_deviation(&proj, left.retained())?))
}

/// Entrywise distance between `(K₀ + 1/2)^{-1} K₋` and `V̂`.
pub fn deformed_lowering_residual(dim: usize) -> Result<f64> {
    let g = su11_generators(dim)?;
    let p = phase_operators(dim)?;
    let inv: Vec<_> = (0..dim).map(|n| Complex64::new(1.0 / (n as f64 + 1.0), 0.0)).collect();
    let lhs = TruncatedOperator::from_diagonal(&inv)?.mul(&g.kminus)?;
    lhs.max_deviation(&p.v, dim)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// `e^{X₊K₊} e^{ln X₀ K₀} e^{X₋K₋}`.
    NormalFirst,
    /// `e^{X₋K₋} e^{ln X₀ K₀} e^{X₊K₊}`.
    AntinormalFirst,
}

/// Parameters of an ordered exponential product.
///
/// Because `K₀` has half-integer spectrum at `k = 1/2`, `e^{ln X₀ K₀}` depends
/// on the branch of `ln X₀` through a sign. The maps keep the branch
/// consistent by carrying `ln X₀` explicitly; constructors from `X₀` take the
/// principal branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BchParams {
    pub plus: Complex64,
    pub zero: Complex64,
    pub minus: Complex64,
    log_zero: Complex64,
    pub ordering: Ordering,
}

impl BchParams {
    pub fn new(ordering: Ordering, plus: Complex64, zero: Complex64, minus: Complex64) -> Result<Self> {
        if zero == ZERO || !zero.re.is_finite() || !zero.im.is_finite() {
            return Err(Error::Branch);
        }
        Ok(Self { plus, zero, minus, log_zero: zero.ln(), ordering })
    }

    pub fn normal(plus: Complex64, zero: Complex64, minus: Complex64) -> Result<Self> {
        Self::new(Ordering::NormalFirst, plus, zero, minus)
    }

    pub fn antinormal(plus: Complex64, zero: Complex64, minus: Complex64) -> Result<Self> {
        Self::new(Ordering::AntinormalFirst, plus, zero, minus)
    }

    /// Parameters with an explicit branch for `ln X₀`.
    pub fn with_log_zero(ordering: Ordering, plus: Complex64, log_zero: Complex64, minus: Complex64) -> Self {
        Self { plus, zero: log_zero.exp(), minus, log_zero, ordering }
    }

    pub fn log_zero(&self) -> Complex64 {
        self.log_zero
    }
}

/// `A± = B±B₀/(1 − B₊B₀B₋)`, `A₀ = B₀/(1 − B₊B₀B₋)²`.
pub fn bch_antinormal_to_normal(b: &BchParams) -> Result<BchParams> {
    if b.ordering != Ordering::AntinormalFirst {
        return Err(Error::Range("expected antinormal-ordered parameters".into()));
    }
    let d = ONE - b.plus * b.zero * b.minus;
    if d.norm() < SINGULAR_TOL {
        return Err(Error::SingularParameter(format!("1 - B+ B0 B- = {d}")));
    }
    Ok(BchParams::with_log_zero(
        Ordering::NormalFirst,
        b.plus * b.zero / d,
        b.log_zero - 2.0 * d.ln(),
        b.minus * b.zero / d,
    ))
}

/// `B± = A±/(A₀ − A₊A₋)`, `B₀ = (A₀ − A₊A₋)²/A₀`; the exact inverse of
/// [`bch_antinormal_to_normal`].
pub fn bch_normal_to_antinormal(a: &BchParams) -> Result<BchParams> {
    if a.ordering != Ordering::NormalFirst {
        return Err(Error::Range("expected normal-ordered parameters".into()));
    }
    let shifted = a.zero - a.plus * a.minus;
    if shifted.norm() < SINGULAR_TOL * a.zero.norm().max(1.0) {
        return Err(Error::SingularParameter(format!("A0 - A+ A- = {shifted}")));
    }
    Ok(BchParams::with_log_zero(
        Ordering::AntinormalFirst,
        a.plus / shifted,
        2.0 * shifted.ln() - a.log_zero,
        a.minus / shifted,
    ))
}

/// The equivalent parameters in the opposite ordering.
pub fn reorder(p: &BchParams) -> Result<BchParams> {
    match p.ordering {
        Ordering::NormalFirst => bch_normal_to_antinormal(p),
        Ordering::AntinormalFirst => bch_antinormal_to_normal(p),
    }
}

/// The three exponential factors of an ordered product, left to right.
pub fn ordered_factors(p: &BchParams, g: &Su11Generators) -> Result<[TruncatedOperator; 3]> {
    let middle = g.k0.expm(p.log_zero)?;
    Ok(match p.ordering {
        Ordering::NormalFirst => [g.kplus.expm(p.plus)?, middle, g.kminus.expm(p.minus)?],
        Ordering::AntinormalFirst => [g.kminus.expm(p.minus)?, middle, g.kplus.expm(p.plus)?],
    })
}

pub fn ordered_product(p: &BchParams, g: &Su11Generators) -> Result<TruncatedOperator> {
    let [a, b, c] = ordered_factors(p, g)?;
    a.mul(&b)?.mul(&c)
}

/// Sizes for [`verify_bch_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BchCheck {
    /// Nominal dimension `N`.
    pub dim: usize,
    /// Edge exclusion `b`; the comparison covers the leading `(N−b)×(N−b)` block.
    pub edge: usize,
    /// Extra levels the products are built with. The antinormal product sums
    /// over all intermediate levels above the block, so it needs room above `N`.
    pub guard: usize,
}

impl BchCheck {
    pub fn new(dim: usize) -> Self {
        Self { dim, edge: dim.div_ceil(4), guard: 2 * dim }
    }

    pub fn with_edge(mut self, edge: usize) -> Self {
        self.edge = edge;
        self
    }

    pub fn with_guard(mut self, guard: usize) -> Self {
        self.guard = guard;
        self
    }

    pub fn block(&self) -> usize {
        self.dim.saturating_sub(self.edge)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BchReport {
    /// Parameters of the opposite ordering.
    pub converted: BchParams,
    /// `max |L − R| / S` over the block, where `S_mn` is the larger of
    /// `(|F₁||F₂||F₃|)_mn` for the two products. This is the rounding scale
    /// of each entry, so the residual is insensitive to cancellation.
    pub residual: f64,
    /// `max |L − R| / max(1, max |L|)` over the block.
    pub peak_relative: f64,
    pub max_abs: f64,
}

/// Builds both orderings of `params` with [`TruncatedOperator::expm`] and
/// returns the componentwise residual of the reordering identity, using the
/// default edge (`⌈N/4⌉`) and guard.
pub fn verify_bch(params: &BchParams, dim: usize) -> Result<f64> {
    verify_bch_with(params, &BchCheck::new(dim)).map(|r| r.residual)
}

pub fn verify_bch_with(params: &BchParams, check: &BchCheck) -> Result<BchReport> {
    let block = check.block();
    if block == 0 || check.dim < 2 {
        return Err(Error::Dimension(format!("edge exclusion {} leaves nothing of N = {}", check.edge, check.dim)));
    }
    let converted = reorder(params)?;
    let g = su11_generators(check.dim + check.guard)?;
    let lf = ordered_factors(params, &g)?;
    let rf = ordered_factors(&converted, &g)?;
    let lhs = lf[0].mul(&lf[1])?.mul(&lf[2])?;
    let rhs = rf[0].mul(&rf[1])?.mul(&rf[2])?;
    let scale_l = abs_product(&lf);
    let scale_r = abs_product(&rf);

    let mut residual: f64 = 0.0;
    let mut max_abs: f64 = 0.0;
    let mut peak: f64 = 1.0;
    for n in 0..block {
        for m in 0..block {
            let l = lhs.entry(m, n);
            let diff = (l - rhs.entry(m, n)).norm();
            let scale = scale_l[(m, n)].max(scale_r[(m, n)]);
            let rel = if diff == 0.0 { 0.0 } else { diff / scale };
            residual = residual.max(rel);
            max_abs = max_abs.max(diff);
            peak = peak.max(l.norm());
        }
    }
    if !residual.is_finite() && residual != f64::INFINITY {
        return Err(Error::Numeric("non-finite BCH residual".into()));
    }
    Ok(BchReport { converted, residual, peak_relative: max_abs / peak, max_abs })
}

fn abs_product(f: &[TruncatedOperator; 3]) -> DMatrix<f64> {
    let abs = |t: &TruncatedOperator| t.matrix().map(|z| z.norm());
    abs(&f[0]) * abs(&f[1]) * abs(&f[2])
}

/// Deviation between `e^{-iπn̂/2} e^{iα(V̂†+V̂)} e^{iπn̂/2}` and `e^{α(V̂†−V̂)}`
/// over the leading `(N−b)×(N−b)` block, `b = ⌈N/4⌉`.
pub fn rotation_conjugation_check(alpha: f64, dim: usize) -> Result<f64> {
    rotation_conjugation_check_with(alpha, dim, dim.div_ceil(4))
}

pub fn rotation_conjugation_check_with(alpha: f64, dim: usize, edge: usize) -> Result<f64> {
    if !alpha.is_finite() {
        return Err(Error::Numeric(format!("alpha = {alpha}")));
    }
    if alpha.abs() > dim as f64 / 8.0 {
        return Err(Error::Range(format!("|alpha| = {} exceeds N/8 = {}", alpha.abs(), dim as f64 / 8.0)));
    }
    let p = phase_operators(dim)?;
    let n = crate::fock::number(dim)?;
    let quarter = Complex64::new(0.0, std::f64::consts::FRAC_PI_2);
    let rot_minus = n.expm(-quarter)?;
    let rot_plus = n.expm(quarter)?;
    let hop = p.vdag.add(&p.v)?.expm(Complex64::new(0.0, alpha))?;
    let lhs = rot_minus.mul(&hop)?.mul(&rot_plus)?;
    let rhs = p.vdag.sub(&p.v)?.expm(Complex64::new(alpha, 0.0))?;
    lhs.max_deviation(&rhs, dim.saturating_sub(edge))
}
