//! State containers and basis indexing for the cavity ⊗ vibration ⊗ qubit
//! Hilbert space.
//!
//! Both bosonic modes are truncated: photon number `n_f < field_dim`, phonon
//! number `m_v < vib_dim`. A basis state |n_f, m_v, q⟩ lives at flat index
//! `(n_f * vib_dim + m_v) * 2 + q` with q = 0 for |g⟩ and q = 1 for |e⟩.
//! Every amplitude vector in this crate, including the JSON dump format,
//! uses that ordering.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance inside which a vector counts as unit-norm.
pub const NORM_TOL: f64 = 1e-12;

/// Errors from constructing or combining states.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    /// Mode truncations must keep at least the vacuum level.
    #[error("Fock cutoffs must be at least 1, got field_dim={field_dim}, vib_dim={vib_dim}")]
    InvalidCutoffs { field_dim: usize, vib_dim: usize },
    /// Requested occupation does not fit under the cutoffs.
    #[error("occupation (n_f={n_f}, m_v={m_v}) lies outside cutoffs {cutoffs}")]
    OccupationOutOfRange {
        n_f: usize,
        m_v: usize,
        cutoffs: FockCutoffs,
    },
    /// Amplitude vector length does not match the cutoffs.
    #[error("amplitude vector has length {got}, cutoffs demand {expected}")]
    WrongLength { got: usize, expected: usize },
    /// A vector expected to be unit-norm was not.
    #[error("vector norm deviates from 1 by {deviation:.3e}, beyond {NORM_TOL:.0e}")]
    NotNormalized { deviation: f64 },
    /// Normalizing a (numerically) zero vector is meaningless.
    #[error("cannot normalize a vector with norm below {NORM_TOL:.0e}")]
    ZeroNorm,
    /// NaN or infinite amplitude component.
    #[error("amplitudes must be finite")]
    NonFinite,
    /// Two states (or an operator and a state) live in different spaces.
    #[error("cutoff mismatch: {a} vs {b}")]
    CutoffMismatch { a: FockCutoffs, b: FockCutoffs },
}

/// Electronic state of the ion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    /// Ground state |g⟩.
    G,
    /// Excited state |e⟩.
    E,
}

impl Qubit {
    /// Both states in index order.
    pub const BOTH: [Qubit; 2] = [Qubit::G, Qubit::E];

    /// Position within a basis pair: |g⟩ = 0, |e⟩ = 1.
    pub fn offset(self) -> usize {
        match self {
            Qubit::G => 0,
            Qubit::E => 1,
        }
    }

    /// Inverse of [`Qubit::offset`].
    pub fn from_offset(q: usize) -> Option<Self> {
        match q {
            0 => Some(Qubit::G),
            1 => Some(Qubit::E),
            _ => None,
        }
    }

    /// Eigenvalue under σ_z, with |e⟩ the +1 eigenstate.
    pub fn sigma_z(self) -> f64 {
        match self {
            Qubit::G => -1.0,
            Qubit::E => 1.0,
        }
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Qubit::G => write!(f, "g"),
            Qubit::E => write!(f, "e"),
        }
    }
}

/// Truncation of the two bosonic modes.
///
/// `field_dim` levels for the cavity mode and `vib_dim` for the vibrational
/// mode, each counted from the vacuum, so occupations run over
/// `0..field_dim` and `0..vib_dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockCutoffs {
    field_dim: usize,
    vib_dim: usize,
}

impl FockCutoffs {
    /// Validate and build cutoffs; both dimensions must be at least 1.
    pub fn new(field_dim: usize, vib_dim: usize) -> Result<Self, HilbertError> {
        if field_dim < 1 || vib_dim < 1 {
            return Err(HilbertError::InvalidCutoffs { field_dim, vib_dim });
        }
        Ok(Self { field_dim, vib_dim })
    }

    /// Number of cavity levels.
    pub fn field_dim(&self) -> usize {
        self.field_dim
    }

    /// Number of vibrational levels.
    pub fn vib_dim(&self) -> usize {
        self.vib_dim
    }

    /// Dimension of the full tripartite space.
    pub fn total_dim(&self) -> usize {
        self.field_dim * self.vib_dim * 2
    }

    /// Dimension of the field ⊗ vibration pair, without the qubit.
    pub fn pair_dim(&self) -> usize {
        self.field_dim * self.vib_dim
    }

    /// Flat index of |n_f, m_v, q⟩.
    ///
    /// Panics if the occupations lie outside the cutoffs; callers that take
    /// user input must range-check first (see [`basis_state`]).
    pub fn index(&self, n_f: usize, m_v: usize, q: Qubit) -> usize {
        assert!(
            n_f < self.field_dim && m_v < self.vib_dim,
            "basis label (n_f={n_f}, m_v={m_v}) outside cutoffs {self}"
        );
        (n_f * self.vib_dim + m_v) * 2 + q.offset()
    }

    /// Inverse of [`FockCutoffs::index`].
    pub fn unindex(&self, i: usize) -> (usize, usize, Qubit) {
        assert!(i < self.total_dim(), "index {i} outside {self}");
        let q = Qubit::from_offset(i % 2).expect("i % 2 is 0 or 1");
        let pair = i / 2;
        (pair / self.vib_dim, pair % self.vib_dim, q)
    }

    /// Flat index of |n_f, m_v⟩ in the field ⊗ vibration pair space.
    pub fn pair_index(&self, n_f: usize, m_v: usize) -> usize {
        assert!(
            n_f < self.field_dim && m_v < self.vib_dim,
            "pair label (n_f={n_f}, m_v={m_v}) outside cutoffs {self}"
        );
        n_f * self.vib_dim + m_v
    }

    /// Basis labels in flat-index order.
    pub fn basis_labels(self) -> impl Iterator<Item = (usize, usize, Qubit)> {
        (0..self.field_dim).flat_map(move |n_f| {
            (0..self.vib_dim)
                .flat_map(move |m_v| Qubit::BOTH.into_iter().map(move |q| (n_f, m_v, q)))
        })
    }

    fn check_match(self, other: FockCutoffs) -> Result<(), HilbertError> {
        if self == other {
            Ok(())
        } else {
            Err(HilbertError::CutoffMismatch { a: self, b: other })
        }
    }
}

impl fmt::Display for FockCutoffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(field_dim={}, vib_dim={})",
            self.field_dim, self.vib_dim
        )
    }
}

fn validated_amplitudes(expected_len: usize, amplitudes: &[C64]) -> Result<(), HilbertError> {
    if amplitudes.len() != expected_len {
        return Err(HilbertError::WrongLength {
            got: amplitudes.len(),
            expected: expected_len,
        });
    }
    if amplitudes
        .iter()
        .any(|a| !a.re.is_finite() || !a.im.is_finite())
    {
        return Err(HilbertError::NonFinite);
    }
    Ok(())
}

fn vector_norm(amplitudes: &[C64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Normalized pure state of the full cavity ⊗ vibration ⊗ qubit system.
#[derive(Debug, Clone)]
pub struct PureState {
    cutoffs: FockCutoffs,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Build a state from raw amplitudes, scaling to unit norm.
    ///
    /// Errors on wrong length, non-finite entries, and vectors of
    /// (numerically) zero norm.
    pub fn from_amplitudes(
        cutoffs: FockCutoffs,
        mut amplitudes: Vec<C64>,
    ) -> Result<Self, HilbertError> {
        validated_amplitudes(cutoffs.total_dim(), &amplitudes)?;
        let norm = vector_norm(&amplitudes);
        if norm < NORM_TOL {
            return Err(HilbertError::ZeroNorm);
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self {
            cutoffs,
            amplitudes,
        })
    }

    /// Build a state from amplitudes that must already be unit-norm within
    /// [`NORM_TOL`]; the residual deviation is then scaled out.
    ///
    /// Propagators use this constructor so that a norm drift beyond the
    /// tolerance surfaces as an error instead of being silently rescaled.
    pub fn from_normalized_amplitudes(
        cutoffs: FockCutoffs,
        mut amplitudes: Vec<C64>,
    ) -> Result<Self, HilbertError> {
        validated_amplitudes(cutoffs.total_dim(), &amplitudes)?;
        let norm = vector_norm(&amplitudes);
        let deviation = (norm - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(HilbertError::NotNormalized { deviation });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self {
            cutoffs,
            amplitudes,
        })
    }

    /// Cutoffs of the space this state lives in.
    pub fn cutoffs(&self) -> FockCutoffs {
        self.cutoffs
    }

    /// Amplitudes in flat-index order.
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Amplitude on |n_f, m_v, q⟩. Panics on out-of-range labels.
    pub fn amplitude(&self, n_f: usize, m_v: usize, q: Qubit) -> C64 {
        self.amplitudes[self.cutoffs.index(n_f, m_v, q)]
    }

    /// Euclidean norm; 1 up to rounding for any constructed state.
    pub fn norm(&self) -> f64 {
        vector_norm(&self.amplitudes)
    }

    /// Total probability of finding the qubit in `q`.
    pub fn qubit_population(&self, q: Qubit) -> f64 {
        self.amplitudes
            .iter()
            .skip(q.offset())
            .step_by(2)
            .map(|a| a.norm_sqr())
            .sum()
    }
}

/// Basis state |n_f, m_v, q⟩.
pub fn basis_state(
    cutoffs: FockCutoffs,
    n_f: usize,
    m_v: usize,
    q: Qubit,
) -> Result<PureState, HilbertError> {
    if n_f >= cutoffs.field_dim() || m_v >= cutoffs.vib_dim() {
        return Err(HilbertError::OccupationOutOfRange { n_f, m_v, cutoffs });
    }
    let mut amplitudes = vec![C64::new(0.0, 0.0); cutoffs.total_dim()];
    amplitudes[cutoffs.index(n_f, m_v, q)] = C64::new(1.0, 0.0);
    Ok(PureState {
        cutoffs,
        amplitudes,
    })
}

/// Weighted sum of states, scaled to unit norm.
///
/// Errors if the terms live under different cutoffs or if the sum has
/// (numerically) zero norm, which includes an empty term list.
pub fn superpose(terms: &[(C64, &PureState)]) -> Result<PureState, HilbertError> {
    let Some(((_, first), rest)) = terms.split_first() else {
        return Err(HilbertError::ZeroNorm);
    };
    let cutoffs = first.cutoffs();
    for (_, state) in rest {
        cutoffs.check_match(state.cutoffs())?;
    }
    let mut amplitudes = vec![C64::new(0.0, 0.0); cutoffs.total_dim()];
    for (weight, state) in terms {
        for (acc, a) in amplitudes.iter_mut().zip(state.amplitudes()) {
            *acc += weight * a;
        }
    }
    PureState::from_amplitudes(cutoffs, amplitudes)
}

/// Inner product ⟨a|b⟩, conjugate-linear in the first argument.
pub fn inner_product(a: &PureState, b: &PureState) -> Result<C64, HilbertError> {
    a.cutoffs().check_match(b.cutoffs())?;
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Normalized pure state of the field ⊗ vibration pair after the qubit has
/// been measured away.
#[derive(Debug, Clone)]
pub struct BipartiteState {
    cutoffs: FockCutoffs,
    amplitudes: Vec<C64>,
}

impl BipartiteState {
    /// Build a pair state from raw amplitudes, scaling to unit norm.
    pub fn from_amplitudes(
        cutoffs: FockCutoffs,
        mut amplitudes: Vec<C64>,
    ) -> Result<Self, HilbertError> {
        validated_amplitudes(cutoffs.pair_dim(), &amplitudes)?;
        let norm = vector_norm(&amplitudes);
        if norm < NORM_TOL {
            return Err(HilbertError::ZeroNorm);
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self {
            cutoffs,
            amplitudes,
        })
    }

    /// Pair basis state |n_f, m_v⟩.
    pub fn basis_state(cutoffs: FockCutoffs, n_f: usize, m_v: usize) -> Result<Self, HilbertError> {
        if n_f >= cutoffs.field_dim() || m_v >= cutoffs.vib_dim() {
            return Err(HilbertError::OccupationOutOfRange { n_f, m_v, cutoffs });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); cutoffs.pair_dim()];
        amplitudes[cutoffs.pair_index(n_f, m_v)] = C64::new(1.0, 0.0);
        Ok(Self {
            cutoffs,
            amplitudes,
        })
    }

    /// Cutoffs of the pair space.
    pub fn cutoffs(&self) -> FockCutoffs {
        self.cutoffs
    }

    /// Amplitudes in pair-index order (`n_f * vib_dim + m_v`).
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Amplitude on |n_f, m_v⟩. Panics on out-of-range labels.
    pub fn amplitude(&self, n_f: usize, m_v: usize) -> C64 {
        self.amplitudes[self.cutoffs.pair_index(n_f, m_v)]
    }

    /// Inner product ⟨self|other⟩, conjugate-linear in `self`.
    pub fn overlap(&self, other: &Self) -> Result<C64, HilbertError> {
        self.cutoffs.check_match(other.cutoffs)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(x, y)| x.conj() * y)
            .sum())
    }
}

/// Dump format for tripartite states.
///
/// `amplitudes[i]` is the `[re, im]` pair of the amplitude at flat index
/// `i`, so entry order is exactly the basis order of [`FockCutoffs::index`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub field_dim: usize,
    pub vib_dim: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateJson {
    /// Capture a state into the dump format.
    pub fn from_state(state: &PureState) -> Self {
        Self {
            field_dim: state.cutoffs().field_dim(),
            vib_dim: state.cutoffs().vib_dim(),
            amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    /// Rebuild the state; the stored amplitudes must be unit-norm within
    /// [`NORM_TOL`].
    pub fn to_state(&self) -> Result<PureState, HilbertError> {
        let cutoffs = FockCutoffs::new(self.field_dim, self.vib_dim)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        PureState::from_normalized_amplitudes(cutoffs, amplitudes)
    }
}
