//! Time evolution: closed-form propagators for the two sideband
//! Hamiltonians, numeric propagation of arbitrary Hermitian Hamiltonians,
//! and the rotating-frame transform connecting the two pictures.
//!
//! Both sideband Hamiltonians only ever mix basis-state pairs. Under the
//! pair interaction ηg(σ₋â†b̂† + σ₊âb̂) the pair is
//! {|n, m, e⟩, |n+1, m+1, g⟩} with Rabi frequency ηg√((n+1)(m+1)); under
//! the swap interaction ηg(σ₋âb̂† + σ₊â†b̂) it is
//! {|n, m, e⟩, |n+1, m−1, g⟩} with Rabi frequency ηg√((n+1)m). Evolution
//! over a time t rotates each pair by its Rabi angle, so the propagators
//! here are exact, not approximations with a step size.
//!
//! Exactness holds only while every occupied pair fits under the cutoffs.
//! States whose pair partner would sit above a cutoff make the truncated
//! problem differ from the untruncated one; the analytic propagators refuse
//! such inputs instead of silently evolving the truncated version.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::hilbert::{FockCutoffs, HilbertError, PureState, Qubit};
use crate::operators::{HERMITICITY_TOL, OperatorMatrix, SystemParams};

/// Occupation probability in the top level of either mode above which a
/// truncated numeric run is no longer trusted.
pub const LEAKAGE_THRESHOLD: f64 = 1e-6;

/// Amplitude magnitude above which a basis state counts as occupied when
/// checking the analytic propagators' preconditions.
pub const POPULATED_TOL: f64 = 1e-12;

/// Errors from propagation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PropagationError {
    /// Propagation times must be finite and non-negative.
    #[error("propagation time must be finite and non-negative, got {t}")]
    InvalidTime { t: f64 },
    /// The rotating-frame transform accepts negative times, but never NaN
    /// or infinity.
    #[error("frame transform time must be finite, got {t}")]
    NonFiniteTime { t: f64 },
    /// Numeric propagation demands a Hermitian Hamiltonian.
    #[error("Hamiltonian deviates from Hermitian by {deviation:.3e} (max element {scale:.3e})")]
    NotHermitian { deviation: f64, scale: f64 },
    /// State and propagator live in different spaces.
    #[error("cutoff mismatch: propagator built for {expected}, state lives in {got}")]
    CutoffMismatch {
        expected: FockCutoffs,
        got: FockCutoffs,
    },
    /// An occupied basis state couples to a level above the cutoffs, so the
    /// closed-form evolution would leave the truncated space.
    #[error(
        "analytic {interaction} propagation would leave the truncated space: \
         |n_f={n_f}, m_v={m_v}, {qubit}⟩ is occupied (probability {population:.3e}) \
         and couples above cutoffs {cutoffs}"
    )]
    TruncationLeak {
        interaction: &'static str,
        n_f: usize,
        m_v: usize,
        qubit: Qubit,
        population: f64,
        cutoffs: FockCutoffs,
    },
    /// State construction after propagation failed, e.g. norm drift.
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// Occupation of the top truncated level of each mode.
///
/// For numeric propagation this is the honesty metric: population at the
/// edge of the truncated space signals that the untruncated dynamics would
/// have climbed higher.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leakage {
    /// Total probability on states with n_f = field_dim − 1.
    pub field_top: f64,
    /// Total probability on states with m_v = vib_dim − 1.
    pub vib_top: f64,
}

impl Leakage {
    /// Measure the top-level occupation of a state.
    pub fn from_state(state: &PureState) -> Self {
        let cut = state.cutoffs();
        let top_n = cut.field_dim() - 1;
        let top_m = cut.vib_dim() - 1;
        let mut field_top = 0.0;
        let mut vib_top = 0.0;
        for (n_f, m_v, q) in cut.basis_labels() {
            let p = state.amplitude(n_f, m_v, q).norm_sqr();
            if n_f == top_n {
                field_top += p;
            }
            if m_v == top_m {
                vib_top += p;
            }
        }
        Self { field_top, vib_top }
    }

    /// Larger of the two mode occupations.
    pub fn max(&self) -> f64 {
        self.field_top.max(self.vib_top)
    }

    /// Whether the run stays under [`LEAKAGE_THRESHOLD`].
    pub fn is_trusted(&self) -> bool {
        self.max() <= LEAKAGE_THRESHOLD
    }
}

/// Result of a numeric propagation step.
#[derive(Debug, Clone)]
pub struct Propagated {
    pub state: PureState,
    pub leakage: Leakage,
}

fn check_time(t: f64) -> Result<(), PropagationError> {
    if !t.is_finite() || t < 0.0 {
        return Err(PropagationError::InvalidTime { t });
    }
    Ok(())
}

/// Rotate the amplitude pair (top, bottom) of a two-state block by the Rabi
/// angle. exp(−iθσ_x) sends top ↦ cosθ·top − i sinθ·bottom and symmetrically.
fn rotate_pair(amps: &mut [C64], i: usize, j: usize, angle: f64) {
    let (s, c) = angle.sin_cos();
    let (a, b) = (amps[i], amps[j]);
    amps[i] = c * a - C64::i() * s * b;
    amps[j] = c * b - C64::i() * s * a;
}

fn leak_error(
    interaction: &'static str,
    state: &PureState,
    n_f: usize,
    m_v: usize,
    qubit: Qubit,
) -> PropagationError {
    PropagationError::TruncationLeak {
        interaction,
        n_f,
        m_v,
        qubit,
        population: state.amplitude(n_f, m_v, qubit).norm_sqr(),
        cutoffs: state.cutoffs(),
    }
}

/// Exact evolution under the pair interaction ηg(σ₋â†b̂† + σ₊âb̂) for a
/// time t.
///
/// Each occupied |n, m, e⟩ needs its partner |n+1, m+1, g⟩ inside the
/// cutoffs; occupied excited states in the top level of either mode are
/// rejected as [`PropagationError::TruncationLeak`]. Ground states with
/// n_f = 0 or m_v = 0 are stationary.
pub fn analytic_red_propagate(
    params: &SystemParams,
    state: &PureState,
    t: f64,
) -> Result<PureState, PropagationError> {
    check_time(t)?;
    let cut = state.cutoffs();
    let (fd, vd) = (cut.field_dim(), cut.vib_dim());
    let w = params.eta_g();
    let mut amps = state.amplitudes().to_vec();
    for n in 0..fd {
        for m in 0..vd {
            let ie = cut.index(n, m, Qubit::E);
            if n + 1 == fd || m + 1 == vd {
                if amps[ie].norm() > POPULATED_TOL {
                    return Err(leak_error("pair-interaction", state, n, m, Qubit::E));
                }
                continue;
            }
            let ig = cut.index(n + 1, m + 1, Qubit::G);
            let rabi = w * (((n + 1) * (m + 1)) as f64).sqrt();
            rotate_pair(&mut amps, ie, ig, rabi * t);
        }
    }
    Ok(PureState::from_normalized_amplitudes(cut, amps)?)
}

/// Exact evolution under the swap interaction ηg(σ₋âb̂† + σ₊â†b̂) for a
/// time t.
///
/// Each occupied |n, m, e⟩ with m ≥ 1 needs |n+1, m−1, g⟩ inside the
/// cutoffs, and each occupied |n, m, g⟩ with n ≥ 1 needs |n−1, m+1, e⟩;
/// violations are rejected as [`PropagationError::TruncationLeak`]. Excited
/// states with m_v = 0 and ground states with n_f = 0 are stationary.
pub fn analytic_blue_propagate(
    params: &SystemParams,
    state: &PureState,
    t: f64,
) -> Result<PureState, PropagationError> {
    check_time(t)?;
    let cut = state.cutoffs();
    let (fd, vd) = (cut.field_dim(), cut.vib_dim());
    let w = params.eta_g();
    let mut amps = state.amplitudes().to_vec();
    for n in 0..fd {
        for m in 1..vd {
            let ie = cut.index(n, m, Qubit::E);
            if n + 1 == fd {
                if amps[ie].norm() > POPULATED_TOL {
                    return Err(leak_error("swap-interaction", state, n, m, Qubit::E));
                }
                continue;
            }
            let ig = cut.index(n + 1, m - 1, Qubit::G);
            let rabi = w * (((n + 1) * m) as f64).sqrt();
            rotate_pair(&mut amps, ie, ig, rabi * t);
        }
    }
    // ground states in the top vibrational level with n_f ≥ 1 have their
    // partner |n−1, vib_dim, e⟩ outside the space
    for n in 1..fd {
        let ig = cut.index(n, vd - 1, Qubit::G);
        if amps[ig].norm() > POPULATED_TOL {
            return Err(leak_error("swap-interaction", state, n, vd - 1, Qubit::G));
        }
    }
    Ok(PureState::from_normalized_amplitudes(cut, amps)?)
}

/// Eigendecomposition of a Hermitian Hamiltonian, reusable across many
/// propagation times and states.
///
/// Immutable after construction, so it can be shared freely across threads
/// when scanning times or parameters.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    cutoffs: FockCutoffs,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<C64>,
}

impl HermitianEigen {
    /// Decompose; errors if the matrix is not Hermitian within
    /// [`HERMITICITY_TOL`] of its largest element.
    pub fn new(hamiltonian: &OperatorMatrix) -> Result<Self, PropagationError> {
        let deviation = hamiltonian.hermiticity_error();
        let scale = hamiltonian.max_abs();
        if deviation > HERMITICITY_TOL * scale {
            return Err(PropagationError::NotHermitian { deviation, scale });
        }
        let eig = hamiltonian.entries().clone().symmetric_eigen();
        Ok(Self {
            cutoffs: hamiltonian.cutoffs(),
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    /// Cutoffs the decomposed Hamiltonian acts under.
    pub fn cutoffs(&self) -> FockCutoffs {
        self.cutoffs
    }

    /// Evolve a state for a time t as V e^{−iΛt} V† ψ, reporting the
    /// top-level leakage of the result.
    pub fn propagate(&self, state: &PureState, t: f64) -> Result<Propagated, PropagationError> {
        check_time(t)?;
        if state.cutoffs() != self.cutoffs {
            return Err(PropagationError::CutoffMismatch {
                expected: self.cutoffs,
                got: state.cutoffs(),
            });
        }
        let psi = DVector::from_column_slice(state.amplitudes());
        let coeffs = self.eigenvectors.adjoint() * psi;
        let phased = DVector::from_fn(coeffs.len(), |k, _| {
            coeffs[k] * C64::new(0.0, -self.eigenvalues[k] * t).exp()
        });
        let out = &self.eigenvectors * phased;
        let state = PureState::from_normalized_amplitudes(self.cutoffs, out.as_slice().to_vec())?;
        let leakage = Leakage::from_state(&state);
        Ok(Propagated { state, leakage })
    }
}

/// One-shot numeric propagation: decompose `hamiltonian` and evolve `state`
/// for a time t. Reuse [`HermitianEigen`] directly when propagating to many
/// times.
pub fn numeric_propagate(
    hamiltonian: &OperatorMatrix,
    state: &PureState,
    t: f64,
) -> Result<Propagated, PropagationError> {
    HermitianEigen::new(hamiltonian)?.propagate(state, t)
}

/// Transform a Schrödinger-picture state at time t into the rotating frame
/// of the uncoupled Hamiltonian: ψ_I = e^{+iH₀t} ψ_S.
///
/// H₀ is diagonal, so this only applies a phase per basis state. Negative
/// times are allowed and invert the transform.
pub fn to_interaction_picture(
    params: &SystemParams,
    state: &PureState,
    t: f64,
) -> Result<PureState, PropagationError> {
    if !t.is_finite() {
        return Err(PropagationError::NonFiniteTime { t });
    }
    let cut = state.cutoffs();
    let mut amps = state.amplitudes().to_vec();
    for (n_f, m_v, q) in cut.basis_labels() {
        let energy = params.omega() * n_f as f64
            + params.nu() * m_v as f64
            + params.omega0() / 2.0 * q.sigma_z();
        amps[cut.index(n_f, m_v, q)] *= C64::new(0.0, energy * t).exp();
    }
    Ok(PureState::from_normalized_amplitudes(cut, amps)?)
}
