//! Mode and qubit operators on the truncated tripartite space, and the
//! Hamiltonians built from them.
//!
//! Conventions: â/â† act on the vibrational mode (frequency ν), b̂/b̂† on the
//! cavity mode (frequency ω), σ_z on the electronic transition (frequency
//! ω₀), all with ħ = 1. The coupled system is
//!
//! > H = ν â†â + ω b̂†b̂ + (ω₀/2) σ_z + g (σ₊+σ₋)(b̂†+b̂) sin(η(â†+â))
//!
//! with coupling g and Lamb-Dicke parameter η. Expanding the sine to first
//! order and keeping one resonant pairing gives the two sideband
//! Hamiltonians used by the protocol: at detuning ω₀ − ω = +ν the pair
//! creation/annihilation form ηg(σ₋â†b̂† + σ₊âb̂), at ω₀ − ω = −ν the
//! quantum-swap form ηg(σ₋âb̂† + σ₊â†b̂).

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::hilbert::{FockCutoffs, HilbertError, PureState, Qubit};

/// Relative tolerance for hermiticity checks, against the largest matrix
/// element.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Errors from operator construction and application.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    /// A physical parameter was zero, negative, or non-finite.
    #[error("system parameter {name} must be positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    /// Matrix shape does not match the cutoffs.
    #[error("matrix is {rows}x{cols}, cutoffs demand {dim}x{dim}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        dim: usize,
    },
    /// An operation requiring a Hermitian matrix received one that is not.
    #[error("matrix deviates from Hermitian by {deviation:.3e} (max element {scale:.3e})")]
    NotHermitian { deviation: f64, scale: f64 },
    /// Operator and state live in different spaces.
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// Physical parameters of the ion-cavity system, ħ = 1.
///
/// All frequencies are angular. The derived detuning δ = ω₀ − ω selects the
/// sideband: δ = +ν drives pair creation/annihilation, δ = −ν the quantum
/// swap. That resonance condition is checked by the protocol layer, not
/// here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    nu: f64,
    omega: f64,
    omega0: f64,
    g: f64,
    eta: f64,
}

impl SystemParams {
    /// Validate and build; every parameter must be positive and finite.
    pub fn new(nu: f64, omega: f64, omega0: f64, g: f64, eta: f64) -> Result<Self, OperatorError> {
        for (name, value) in [
            ("nu", nu),
            ("omega", omega),
            ("omega0", omega0),
            ("g", g),
            ("eta", eta),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(OperatorError::InvalidParameter { name, value });
            }
        }
        Ok(Self {
            nu,
            omega,
            omega0,
            g,
            eta,
        })
    }

    /// Parameters with the cavity tuned to the lower sideband, ω = ω₀ − ν.
    pub fn red_resonant(nu: f64, omega0: f64, g: f64, eta: f64) -> Result<Self, OperatorError> {
        Self::new(nu, omega0 - nu, omega0, g, eta)
    }

    /// Parameters with the cavity tuned to the upper sideband, ω = ω₀ + ν.
    pub fn blue_resonant(nu: f64, omega0: f64, g: f64, eta: f64) -> Result<Self, OperatorError> {
        Self::new(nu, omega0 + nu, omega0, g, eta)
    }

    /// Vibrational frequency ν.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Cavity frequency ω.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Electronic transition frequency ω₀.
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Coupling strength g.
    pub fn g(&self) -> f64 {
        self.g
    }

    /// Lamb-Dicke parameter η.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Detuning δ = ω₀ − ω.
    pub fn detuning(&self) -> f64 {
        self.omega0 - self.omega
    }

    /// Sideband Rabi scale ηg.
    pub fn eta_g(&self) -> f64 {
        self.eta * self.g
    }
}

/// Dense operator on the tripartite space, tagged with its cutoffs.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    cutoffs: FockCutoffs,
    entries: DMatrix<C64>,
}

impl OperatorMatrix {
    /// Zero operator.
    pub fn zeros(cutoffs: FockCutoffs) -> Self {
        let dim = cutoffs.total_dim();
        Self {
            cutoffs,
            entries: DMatrix::zeros(dim, dim),
        }
    }

    /// Wrap an explicit matrix; its shape must match the cutoffs.
    pub fn from_matrix(cutoffs: FockCutoffs, entries: DMatrix<C64>) -> Result<Self, OperatorError> {
        let dim = cutoffs.total_dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(OperatorError::ShapeMismatch {
                rows: entries.nrows(),
                cols: entries.ncols(),
                dim,
            });
        }
        Ok(Self { cutoffs, entries })
    }

    /// Cutoffs this operator acts under.
    pub fn cutoffs(&self) -> FockCutoffs {
        self.cutoffs
    }

    /// Underlying matrix.
    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> Self {
        Self {
            cutoffs: self.cutoffs,
            entries: self.entries.adjoint(),
        }
    }

    /// Largest absolute deviation from hermiticity, max |M − M†|.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.entries.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                let d = (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest absolute matrix element.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Whether the matrix is Hermitian within [`HERMITICITY_TOL`] relative
    /// to its largest element.
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() <= HERMITICITY_TOL * self.max_abs()
    }

    /// Element ⟨bra|M|ket⟩ between basis states. Panics on out-of-range
    /// labels.
    pub fn matrix_entry(&self, bra: (usize, usize, Qubit), ket: (usize, usize, Qubit)) -> C64 {
        let i = self.cutoffs.index(bra.0, bra.1, bra.2);
        let j = self.cutoffs.index(ket.0, ket.1, ket.2);
        self.entries[(i, j)]
    }

    /// Apply to a state, returning raw (generally unnormalized) amplitudes.
    pub fn apply(&self, state: &PureState) -> Result<Vec<C64>, OperatorError> {
        if self.cutoffs != state.cutoffs() {
            return Err(HilbertError::CutoffMismatch {
                a: self.cutoffs,
                b: state.cutoffs(),
            }
            .into());
        }
        let dim = self.cutoffs.total_dim();
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (j, a) in state.amplitudes().iter().enumerate() {
                acc += self.entries[(i, j)] * a;
            }
            *slot = acc;
        }
        Ok(out)
    }

    /// Matrix element ⟨bra|M|ket⟩ between arbitrary states.
    pub fn matrix_element(&self, bra: &PureState, ket: &PureState) -> Result<C64, OperatorError> {
        if bra.cutoffs() != ket.cutoffs() {
            return Err(HilbertError::CutoffMismatch {
                a: bra.cutoffs(),
                b: ket.cutoffs(),
            }
            .into());
        }
        let applied = self.apply(ket)?;
        Ok(bra
            .amplitudes()
            .iter()
            .zip(&applied)
            .map(|(x, y)| x.conj() * y)
            .sum())
    }

    /// Expectation value ⟨ψ|M|ψ⟩.
    pub fn expectation(&self, state: &PureState) -> Result<C64, OperatorError> {
        self.matrix_element(state, state)
    }
}

impl Add for OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.cutoffs, rhs.cutoffs, "operator cutoffs differ");
        OperatorMatrix {
            cutoffs: self.cutoffs,
            entries: self.entries + rhs.entries,
        }
    }
}

impl Sub for OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.cutoffs, rhs.cutoffs, "operator cutoffs differ");
        OperatorMatrix {
            cutoffs: self.cutoffs,
            entries: self.entries - rhs.entries,
        }
    }
}

impl Mul for OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.cutoffs, rhs.cutoffs, "operator cutoffs differ");
        OperatorMatrix {
            cutoffs: self.cutoffs,
            entries: self.entries * rhs.entries,
        }
    }
}

impl Mul<f64> for OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: f64) -> OperatorMatrix {
        self * C64::new(rhs, 0.0)
    }
}

impl Mul<C64> for OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: C64) -> OperatorMatrix {
        OperatorMatrix {
            cutoffs: self.cutoffs,
            entries: self.entries * rhs,
        }
    }
}

/// Single-mode annihilation matrix: ⟨n−1|a|n⟩ = √n.
fn ladder(dim: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    m
}

/// Embed factor operators as field ⊗ vibration ⊗ qubit.
fn embed(
    cutoffs: FockCutoffs,
    field: &DMatrix<C64>,
    vib: &DMatrix<C64>,
    qubit: &DMatrix<C64>,
) -> OperatorMatrix {
    OperatorMatrix {
        cutoffs,
        entries: field.kronecker(vib).kronecker(qubit),
    }
}

fn id(dim: usize) -> DMatrix<C64> {
    DMatrix::identity(dim, dim)
}

/// Identity on the full space.
pub fn identity(cutoffs: FockCutoffs) -> OperatorMatrix {
    OperatorMatrix {
        cutoffs,
        entries: id(cutoffs.total_dim()),
    }
}

/// Vibrational annihilation â.
pub fn vib_annihilation(cutoffs: FockCutoffs) -> OperatorMatrix {
    embed(
        cutoffs,
        &id(cutoffs.field_dim()),
        &ladder(cutoffs.vib_dim()),
        &id(2),
    )
}

/// Vibrational creation â†.
pub fn vib_creation(cutoffs: FockCutoffs) -> OperatorMatrix {
    vib_annihilation(cutoffs).adjoint()
}

/// Cavity annihilation b̂.
pub fn field_annihilation(cutoffs: FockCutoffs) -> OperatorMatrix {
    embed(
        cutoffs,
        &ladder(cutoffs.field_dim()),
        &id(cutoffs.vib_dim()),
        &id(2),
    )
}

/// Cavity creation b̂†.
pub fn field_creation(cutoffs: FockCutoffs) -> OperatorMatrix {
    field_annihilation(cutoffs).adjoint()
}

/// Phonon number â†â, built diagonally so the entries are exact.
pub fn vib_number(cutoffs: FockCutoffs) -> OperatorMatrix {
    let vib = DMatrix::from_fn(cutoffs.vib_dim(), cutoffs.vib_dim(), |i, j| {
        C64::new(if i == j { i as f64 } else { 0.0 }, 0.0)
    });
    embed(cutoffs, &id(cutoffs.field_dim()), &vib, &id(2))
}

/// Photon number b̂†b̂, built diagonally so the entries are exact.
pub fn field_number(cutoffs: FockCutoffs) -> OperatorMatrix {
    let field = DMatrix::from_fn(cutoffs.field_dim(), cutoffs.field_dim(), |i, j| {
        C64::new(if i == j { i as f64 } else { 0.0 }, 0.0)
    });
    embed(cutoffs, &field, &id(cutoffs.vib_dim()), &id(2))
}

fn qubit_matrix(gg: f64, ge: f64, eg: f64, ee: f64) -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(gg, 0.0),
            C64::new(ge, 0.0),
            C64::new(eg, 0.0),
            C64::new(ee, 0.0),
        ],
    )
}

/// Qubit raising σ₊ = |e⟩⟨g|.
pub fn sigma_plus(cutoffs: FockCutoffs) -> OperatorMatrix {
    embed(
        cutoffs,
        &id(cutoffs.field_dim()),
        &id(cutoffs.vib_dim()),
        &qubit_matrix(0.0, 0.0, 1.0, 0.0),
    )
}

/// Qubit lowering σ₋ = |g⟩⟨e|.
pub fn sigma_minus(cutoffs: FockCutoffs) -> OperatorMatrix {
    embed(
        cutoffs,
        &id(cutoffs.field_dim()),
        &id(cutoffs.vib_dim()),
        &qubit_matrix(0.0, 1.0, 0.0, 0.0),
    )
}

/// Pauli σ_z with |e⟩ the +1 eigenstate.
pub fn sigma_z(cutoffs: FockCutoffs) -> OperatorMatrix {
    embed(
        cutoffs,
        &id(cutoffs.field_dim()),
        &id(cutoffs.vib_dim()),
        &qubit_matrix(-1.0, 0.0, 0.0, 1.0),
    )
}

/// Projector |e⟩⟨e| on the excited electronic state, (σ_z + 1)/2.
pub fn excited_projector(cutoffs: FockCutoffs) -> OperatorMatrix {
    embed(
        cutoffs,
        &id(cutoffs.field_dim()),
        &id(cutoffs.vib_dim()),
        &qubit_matrix(0.0, 0.0, 0.0, 1.0),
    )
}

/// Operator sine through the spectral calculus: sin(M) = V sin(Λ) V† for
/// Hermitian M = V Λ V†.
///
/// Errors if the input is not Hermitian within [`HERMITICITY_TOL`].
pub fn operator_sine(m: &OperatorMatrix) -> Result<OperatorMatrix, OperatorError> {
    let deviation = m.hermiticity_error();
    let scale = m.max_abs();
    if deviation > HERMITICITY_TOL * scale {
        return Err(OperatorError::NotHermitian { deviation, scale });
    }
    let eig = m.entries.clone().symmetric_eigen();
    let sines = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| C64::new(x.sin(), 0.0)));
    let entries = &eig.eigenvectors * sines * eig.eigenvectors.adjoint();
    Ok(OperatorMatrix {
        cutoffs: m.cutoffs,
        entries,
    })
}

/// Uncoupled Hamiltonian H₀ = ν â†â + ω b̂†b̂ + (ω₀/2) σ_z.
pub fn free_hamiltonian(params: &SystemParams, cutoffs: FockCutoffs) -> OperatorMatrix {
    vib_number(cutoffs) * params.nu()
        + field_number(cutoffs) * params.omega()
        + sigma_z(cutoffs) * (params.omega0() / 2.0)
}

/// Full coupled Hamiltonian, with the sine of the ion displacement kept to
/// all orders:
///
/// > H = H₀ + g (σ₊+σ₋)(b̂†+b̂) sin(η(â†+â))
pub fn full_hamiltonian(params: &SystemParams, cutoffs: FockCutoffs) -> OperatorMatrix {
    let displacement = (vib_creation(cutoffs) + vib_annihilation(cutoffs)) * params.eta();
    let sine = operator_sine(&displacement).expect("eta (a† + a) is Hermitian by construction");
    let coupling = (sigma_plus(cutoffs) + sigma_minus(cutoffs))
        * (field_creation(cutoffs) + field_annihilation(cutoffs))
        * sine;
    free_hamiltonian(params, cutoffs) + coupling * params.g()
}

/// Lamb-Dicke Hamiltonian: the sine replaced by its first-order expansion,
///
/// > H_LD = H₀ + ηg (σ₊+σ₋)(b̂†+b̂)(â†+â)
pub fn lamb_dicke_hamiltonian(params: &SystemParams, cutoffs: FockCutoffs) -> OperatorMatrix {
    let coupling = (sigma_plus(cutoffs) + sigma_minus(cutoffs))
        * (field_creation(cutoffs) + field_annihilation(cutoffs))
        * (vib_creation(cutoffs) + vib_annihilation(cutoffs));
    free_hamiltonian(params, cutoffs) + coupling * params.eta_g()
}

/// Pair creation/annihilation interaction ηg(σ₋â†b̂† + σ₊âb̂), the rotating
/// frame resonant part at detuning δ = +ν. Phonon and photon are created
/// (annihilated) together while the qubit flips down (up).
pub fn red_rwa_hamiltonian(params: &SystemParams, cutoffs: FockCutoffs) -> OperatorMatrix {
    let down = sigma_minus(cutoffs) * vib_creation(cutoffs) * field_creation(cutoffs);
    let up = sigma_plus(cutoffs) * vib_annihilation(cutoffs) * field_annihilation(cutoffs);
    (down + up) * params.eta_g()
}

/// Quantum-swap interaction ηg(σ₋âb̂† + σ₊â†b̂), the rotating frame resonant
/// part at detuning δ = −ν. A phonon converts into a photon (and back)
/// while the qubit flips.
pub fn blue_rwa_hamiltonian(params: &SystemParams, cutoffs: FockCutoffs) -> OperatorMatrix {
    let down = sigma_minus(cutoffs) * vib_annihilation(cutoffs) * field_creation(cutoffs);
    let up = sigma_plus(cutoffs) * vib_creation(cutoffs) * field_annihilation(cutoffs);
    (down + up) * params.eta_g()
}
