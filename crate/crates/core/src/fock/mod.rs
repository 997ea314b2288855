//! Truncated Fock space: state vectors, dense operators and the ladder operators.
//!
//! The space keeps levels `|0⟩ … |N-1⟩` and cuts everything above, so
//! `â†|N-1⟩ = 0`. Operators carry an `edge_band`: rows and columns with index
//! `≥ N - edge_band` may differ from their infinite-space values.

mod expm;

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexAmplitude = Complex64;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::Dimension(format!("truncated space needs N >= 2, got {dim}")));
    }
    Ok(())
}

fn check_same(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!("dimension mismatch: {a} vs {b}")));
    }
    Ok(())
}

/// Amplitudes `c_j = ⟨j|ψ⟩` over the retained levels.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: DVector<Complex64>,
}

impl FockVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        check_dim(amps.len())?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("non-finite amplitude".into()));
        }
        Ok(Self { amps: DVector::from_vec(amps) })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { amps: DVector::zeros(dim) })
    }

    /// Fock state `|n⟩`.
    pub fn basis(dim: usize, n: usize) -> Result<Self> {
        check_dim(dim)?;
        if n >= dim {
            return Err(Error::Dimension(format!("level {n} outside a {dim}-level space")));
        }
        let mut amps = DVector::zeros(dim);
        amps[n] = ONE;
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        self.amps.as_slice()
    }

    pub fn get(&self, j: usize) -> Complex64 {
        self.amps[j]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Numeric("cannot normalize the zero vector".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { amps: &self.amps * s }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_same(self.dim(), other.dim())?;
        Ok(self.amps.dotc(&other.amps))
    }

    /// The leading `dim` amplitudes.
    pub fn truncated(&self, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if dim > self.dim() {
            return Err(Error::Dimension(format!("cannot truncate {} levels to {dim}", self.dim())));
        }
        Ok(Self { amps: self.amps.rows(0, dim).into_owned() })
    }

    /// Zero-padded copy with `dim` levels.
    pub fn padded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::Dimension(format!("cannot pad {} levels to {dim}", self.dim())));
        }
        let mut amps = DVector::zeros(dim);
        amps.rows_mut(0, self.dim()).copy_from(&self.amps);
        Ok(Self { amps })
    }

    /// Largest `|a_j - b_j|` over `j < upto`.
    pub fn max_deviation(&self, other: &Self, upto: usize) -> Result<f64> {
        check_same(self.dim(), other.dim())?;
        Ok(self.amps.iter().zip(other.amps.iter()).take(upto).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

/// Dense `N×N` operator, `entries[m][n] = ⟨m|Ô|n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    matrix: DMatrix<Complex64>,
    edge_band: usize,
}

impl TruncatedOperator {
    pub fn from_matrix(matrix: DMatrix<Complex64>, edge_band: usize) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Dimension(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_dim(matrix.nrows())?;
        if edge_band > matrix.nrows() {
            return Err(Error::Dimension(format!("edge band {edge_band} exceeds dimension {}", matrix.nrows())));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("non-finite operator entry".into()));
        }
        Ok(Self { matrix, edge_band })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { matrix: DMatrix::identity(dim, dim), edge_band: 0 })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { matrix: DMatrix::zeros(dim, dim), edge_band: 0 })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        check_dim(diag.len())?;
        Ok(Self { matrix: DMatrix::from_diagonal(&DVector::from_column_slice(diag)), edge_band: 0 })
    }

    /// Operator with a single off-diagonal: `⟨n+shift|Ô|n⟩ = weight(n)` for
    /// `shift = 1` (raising) or `⟨n-1|Ô|n⟩ = weight(n)` for `shift = -1`.
    pub(crate) fn shift(dim: usize, raising: bool, edge_band: usize, weight: impl Fn(usize) -> f64) -> Result<Self> {
        check_dim(dim)?;
        let mut matrix = DMatrix::zeros(dim, dim);
        for n in 0..dim - 1 {
            if raising {
                matrix[(n + 1, n)] = Complex64::new(weight(n), 0.0);
            } else {
                matrix[(n, n + 1)] = Complex64::new(weight(n + 1), 0.0);
            }
        }
        Ok(Self { matrix, edge_band })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn edge_band(&self) -> usize {
        self.edge_band
    }

    pub fn with_edge_band(mut self, edge_band: usize) -> Self {
        self.edge_band = edge_band.min(self.dim());
        self
    }

    /// Levels unaffected by truncation, `N - edge_band`.
    pub fn retained(&self) -> usize {
        self.dim() - self.edge_band
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        self.matrix[(m, n)]
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint(), edge_band: self.edge_band }
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { matrix: &self.matrix * s, edge_band: self.edge_band }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(self.dim(), other.dim())?;
        Ok(Self { matrix: &self.matrix + &other.matrix, edge_band: self.edge_band.max(other.edge_band) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(-ONE))
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_same(self.dim(), other.dim())?;
        Ok(Self { matrix: &self.matrix * &other.matrix, edge_band: (self.edge_band + other.edge_band).min(self.dim()) })
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        check_same(self.dim(), v.dim())?;
        Ok(FockVector { amps: &self.matrix * &v.amps })
    }

    /// `exp(scale · self)`.
    pub fn expm(&self, scale: Complex64) -> Result<Self> {
        let scaled = &self.matrix * scale;
        Ok(Self { matrix: expm::expm(&scaled)?, edge_band: self.edge_band })
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix == self.matrix.adjoint()
    }

    /// Largest `|a_mn - b_mn|` over the leading `block × block` entries.
    pub fn max_deviation(&self, other: &Self, block: usize) -> Result<f64> {
        check_same(self.dim(), other.dim())?;
        let block = block.min(self.dim());
        let mut worst: f64 = 0.0;
        for n in 0..block {
            for m in 0..block {
                worst = worst.max((self.matrix[(m, n)] - other.matrix[(m, n)]).norm());
            }
        }
        Ok(worst)
    }
}

impl fmt::Display for TruncatedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedOperator(N = {}, edge_band = {})", self.dim(), self.edge_band)
    }
}

/// `AB - BA`.
pub fn commutator(a: &TruncatedOperator, b: &TruncatedOperator) -> Result<TruncatedOperator> {
    check_same(a.dim(), b.dim())?;
    let matrix = &a.matrix * &b.matrix - &b.matrix * &a.matrix;
    let edge_band = (a.edge_band + b.edge_band + 1).min(a.dim());
    Ok(TruncatedOperator { matrix, edge_band })
}

/// `â`, with `⟨n-1|â|n⟩ = √n`.
pub fn annihilation(dim: usize) -> Result<TruncatedOperator> {
    TruncatedOperator::shift(dim, false, 0, |n| (n as f64).sqrt())
}

/// `â†`, the adjoint of [`annihilation`]; `â†|N-1⟩ = 0`.
pub fn creation(dim: usize) -> Result<TruncatedOperator> {
    Ok(annihilation(dim)?.adjoint().with_edge_band(1))
}

/// `n̂ = diag(0, 1, …, N-1)`.
pub fn number(dim: usize) -> Result<TruncatedOperator> {
    check_dim(dim)?;
    let diag: Vec<_> = (0..dim).map(|n| Complex64::new(n as f64, 0.0)).collect();
    TruncatedOperator::from_diagonal(&diag)
}
