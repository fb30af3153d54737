//! Entanglement diagnostics for the post-selected field ⊗ vibration pair:
//! state fidelity, reduced density matrices, von Neumann entropy, and
//! negativity.
//!
//! A Bell pair scores entropy ln 2 in either marginal and negativity 1/2;
//! a product state scores zero on both.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::hilbert::{BipartiteState, HilbertError};

/// Tolerance on the defining properties of a density matrix (hermiticity,
/// unit trace, positive spectrum).
pub const DENSITY_TOL: f64 = 1e-12;

/// Eigenvalues of a reduced density this far below zero are rounding
/// artifacts and are clamped; anything lower is rejected.
pub const EIGENVALUE_CLIP: f64 = 1e-10;

/// Errors from entanglement diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    /// Density matrices must be square.
    #[error("density matrix must be square, got {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },
    /// Density matrices must be Hermitian.
    #[error("density matrix deviates from Hermitian by {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    /// Density matrices must have unit trace.
    #[error("density matrix has trace {trace:?}, expected 1")]
    TraceNotOne { trace: (f64, f64) },
    /// Density matrices must be positive semidefinite.
    #[error("density matrix has negative eigenvalue {value:.3e}")]
    NegativeEigenvalue { value: f64 },
    /// State-level failure (mismatched cutoffs, bad amplitudes).
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// Fidelity |⟨a|b⟩|² between two pure pair states.
pub fn fidelity(a: &BipartiteState, b: &BipartiteState) -> Result<f64, AnalysisError> {
    Ok(a.overlap(b)?.norm_sqr())
}

/// Which mode of the pair survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    /// Keep the cavity field, trace out the vibration.
    Field,
    /// Keep the vibration, trace out the cavity field.
    Vibration,
}

/// A validated reduced density matrix with its spectrum.
///
/// The spectrum is computed once at construction, sorted in descending
/// order, with rounding-level negatives clamped to zero.
#[derive(Debug, Clone)]
pub struct ReducedDensity {
    matrix: DMatrix<C64>,
    eigenvalues: Vec<f64>,
}

impl ReducedDensity {
    /// Validate a candidate density matrix: square, Hermitian, unit trace,
    /// positive semidefinite.
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self, AnalysisError> {
        if matrix.nrows() != matrix.ncols() {
            return Err(AnalysisError::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let scale = matrix.iter().map(|x| x.norm()).fold(1.0, f64::max);
        let deviation = (&matrix - matrix.adjoint())
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        if deviation > DENSITY_TOL * scale {
            return Err(AnalysisError::NotHermitian { deviation });
        }
        let trace: C64 = matrix.diagonal().iter().sum();
        if (trace.re - 1.0).abs() > DENSITY_TOL || trace.im.abs() > DENSITY_TOL {
            return Err(AnalysisError::TraceNotOne {
                trace: (trace.re, trace.im),
            });
        }
        let mut eigenvalues: Vec<f64> = matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        for lambda in &mut eigenvalues {
            if *lambda < -EIGENVALUE_CLIP {
                return Err(AnalysisError::NegativeEigenvalue { value: *lambda });
            }
            *lambda = lambda.max(0.0);
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Ok(Self {
            matrix,
            eigenvalues,
        })
    }

    /// Dimension of the kept mode.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// The density matrix itself.
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Matrix entry ρ_{ij}.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.matrix[(i, j)]
    }

    /// Spectrum in descending order, clamped to be nonnegative.
    ///
    /// For the marginal of a pure pair state these are the squared Schmidt
    /// coefficients.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Trace of the matrix (1 up to [`DENSITY_TOL`] by construction).
    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|x| x.re).sum()
    }
}

/// Reduced density matrix of one mode of a pure pair state.
pub fn partial_trace(state: &BipartiteState, keep: Subsystem) -> ReducedDensity {
    let cut = state.cutoffs();
    let dim = match keep {
        Subsystem::Field => cut.field_dim(),
        Subsystem::Vibration => cut.vib_dim(),
    };
    let traced = match keep {
        Subsystem::Field => cut.vib_dim(),
        Subsystem::Vibration => cut.field_dim(),
    };
    let matrix = DMatrix::from_fn(dim, dim, |i, j| {
        (0..traced)
            .map(|k| match keep {
                Subsystem::Field => state.amplitude(i, k) * state.amplitude(j, k).conj(),
                Subsystem::Vibration => state.amplitude(k, i) * state.amplitude(k, j).conj(),
            })
            .sum()
    });
    ReducedDensity::from_matrix(matrix)
        .expect("marginal of a normalized pure state is a density matrix")
}

/// Von Neumann entropy −Σ λ ln λ of a reduced density, in nats.
pub fn von_neumann_entropy(rho: &ReducedDensity) -> f64 {
    rho.eigenvalues()
        .iter()
        .filter(|&&lambda| lambda > 0.0)
        .map(|&lambda| -lambda * lambda.ln())
        .sum()
}

/// Negativity of a pure pair state: the magnitude of the negative part of
/// the partial-transpose spectrum, (‖ρ^{T_f}‖₁ − 1)/2.
///
/// Zero for product states, 1/2 for a Bell pair.
pub fn negativity(state: &BipartiteState) -> f64 {
    let cut = state.cutoffs();
    let dim = cut.pair_dim();
    // transpose the field index of ψψ†: entry ((i,k), (j,l)) = ψ(j,k) ψ*(i,l)
    let transposed = DMatrix::from_fn(dim, dim, |row, col| {
        let (i, k) = (row / cut.vib_dim(), row % cut.vib_dim());
        let (j, l) = (col / cut.vib_dim(), col % cut.vib_dim());
        state.amplitude(j, k) * state.amplitude(i, l).conj()
    });
    let absolute_sum: f64 = transposed
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|lambda| lambda.abs())
        .sum();
    (0.5 * (absolute_sum - 1.0)).max(0.0)
}
