//! The Bell-state generation protocol: prepare the ion in an electronic
//! superposition, drive one sideband for a scheduled pulse time, then
//! measure the electronic state and keep the ground-state outcome.
//!
//! From |n⟩_f |m⟩_v (cosθ|e⟩ + e^{iφ} sinθ|g⟩), a sideband pulse entangles
//! the electronic state with the two bosonic modes. At pulse times where
//! the excited branch has fully transferred, a ground-state measurement
//! leaves the field ⊗ vibration pair in
//!
//! > (e^{iφ}|n, m⟩ − i|n', m'⟩)/√2   at θ = π/4,
//!
//! with (n', m') the partner occupation of the driven sideband. For
//! n = m = 0 on the lower sideband (and n = 0, m = 1 on the upper) these
//! are Bell states of the pair.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::hilbert::{BipartiteState, FockCutoffs, HilbertError, PureState, Qubit};
use crate::operators::SystemParams;
use crate::propagation::{PropagationError, analytic_blue_propagate, analytic_red_propagate};

/// Post-selection probabilities below this are treated as impossible
/// outcomes.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

/// Relative tolerance on the sideband resonance condition δ = ±ν.
pub const RESONANCE_TOL: f64 = 1e-9;

/// Errors from protocol configuration and execution.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    /// Preparation angle θ must lie in [0, π/2].
    #[error("theta must lie in [0, pi/2], got {theta}")]
    ThetaOutOfRange { theta: f64 },
    /// Preparation phase φ must lie in (−π, π].
    #[error("phi must lie in (-pi, pi], got {phi}")]
    PhiOutOfRange { phi: f64 },
    /// The initial occupation leaves no room for the driven sideband to
    /// deposit a quantum, so the analytic evolution would leak.
    #[error(
        "initial occupation (n={n_f}, m={m_v}) leaves no truncation margin \
         under cutoffs {cutoffs} for the {sideband} sideband"
    )]
    NoTruncationMargin {
        n_f: usize,
        m_v: usize,
        sideband: Sideband,
        cutoffs: FockCutoffs,
    },
    /// The cavity is not tuned to the requested sideband.
    #[error(
        "{sideband} sideband needs detuning omega0 - omega = {expected}, got {detuning} \
         (relative tolerance {RESONANCE_TOL:.0e})"
    )]
    OffResonance {
        sideband: Sideband,
        detuning: f64,
        expected: f64,
    },
    /// Conditioning on an outcome whose probability is numerically zero.
    #[error(
        "post-selection on outcome {outcome} failed: probability {probability:.3e} \
         is below {MIN_OUTCOME_PROBABILITY:.0e}"
    )]
    PostSelectionFailed { outcome: Qubit, probability: f64 },
    /// Bell targets need at least two levels in each mode.
    #[error("Bell targets need field_dim >= 2 and vib_dim >= 2, got {cutoffs}")]
    CutoffsTooSmallForBell { cutoffs: FockCutoffs },
    /// State-level failure while running the protocol.
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    /// Propagation-level failure while running the protocol.
    #[error(transparent)]
    Propagation(#[from] PropagationError),
}

/// Which vibrational sideband the cavity is tuned to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sideband {
    /// Lower sideband, δ = +ν: photon and phonon are created together
    /// while the qubit drops (pair interaction).
    Red,
    /// Upper sideband, δ = −ν: a phonon converts into a photon while the
    /// qubit drops (swap interaction).
    Blue,
}

impl Sideband {
    /// Detuning δ = ω₀ − ω this sideband requires, in units of ν.
    fn detuning_sign(self) -> f64 {
        match self {
            Sideband::Red => 1.0,
            Sideband::Blue => -1.0,
        }
    }

    /// Partner occupation reached from the excited branch of |n, m, e⟩.
    ///
    /// Returns None when the branch is stationary (upper sideband with no
    /// phonon to convert).
    pub fn partner(self, n_f: usize, m_v: usize) -> Option<(usize, usize)> {
        match self {
            Sideband::Red => Some((n_f + 1, m_v + 1)),
            Sideband::Blue => (m_v >= 1).then(|| (n_f + 1, m_v - 1)),
        }
    }

    /// Excitation label L of the excited branch of |n, m, e⟩: the branch
    /// Rabi frequency is ηg√(L + 1).
    ///
    /// On the lower sideband L + 1 = (n+1)(m+1); on the upper,
    /// L + 1 = (n+1)m. A stationary upper-sideband branch (m = 0) has no
    /// Rabi frequency; the label falls back to 0 so schedules degrade to
    /// the bare pulse time.
    pub fn effective_excitation(self, n_f: usize, m_v: usize) -> usize {
        match self {
            Sideband::Red => (n_f + 1) * (m_v + 1) - 1,
            Sideband::Blue => ((n_f + 1) * m_v).saturating_sub(1),
        }
    }
}

impl fmt::Display for Sideband {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sideband::Red => write!(f, "red"),
            Sideband::Blue => write!(f, "blue"),
        }
    }
}

impl FromStr for Sideband {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "red" => Ok(Sideband::Red),
            "blue" => Ok(Sideband::Blue),
            other => Err(format!("unknown sideband '{other}', expected red or blue")),
        }
    }
}

/// Pulse time of the k-th full-transfer window for excitation label
/// `m_eff`: t_k = π(4k + 1) / (2 ηg √(m_eff + 1)).
///
/// At these times sin(ηg√(m_eff+1) t) = +1 exactly, so the transferred
/// branch carries the fixed −i phase the Bell targets assume; the windows
/// with sin = −1 are deliberately skipped.
pub fn bell_time(params: &SystemParams, k: usize, m_eff: usize) -> f64 {
    PI * (4 * k + 1) as f64 / (2.0 * params.eta_g() * ((m_eff + 1) as f64).sqrt())
}

/// Validated description of one protocol run.
#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    sideband: Sideband,
    n_f: usize,
    m_v: usize,
    theta: f64,
    phi: f64,
    k: usize,
    params: SystemParams,
    cutoffs: FockCutoffs,
}

impl ProtocolConfig {
    /// Validate a protocol description.
    ///
    /// Checks the angle ranges, the resonance condition for the chosen
    /// sideband, and that both branches of the initial state evolve inside
    /// the cutoffs (no truncation leak).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        sideband: Sideband,
        n_f: usize,
        m_v: usize,
        theta: f64,
        phi: f64,
        k: usize,
        params: SystemParams,
        cutoffs: FockCutoffs,
    ) -> Result<Self, ProtocolError> {
        if !theta.is_finite() || !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(ProtocolError::ThetaOutOfRange { theta });
        }
        if !phi.is_finite() || phi <= -PI || phi > PI {
            return Err(ProtocolError::PhiOutOfRange { phi });
        }
        let expected = sideband.detuning_sign() * params.nu();
        if (params.detuning() - expected).abs() > RESONANCE_TOL * params.nu() {
            return Err(ProtocolError::OffResonance {
                sideband,
                detuning: params.detuning(),
                expected,
            });
        }
        if n_f >= cutoffs.field_dim() || m_v >= cutoffs.vib_dim() {
            return Err(HilbertError::OccupationOutOfRange { n_f, m_v, cutoffs }.into());
        }
        let margin_ok = match sideband {
            // excited branch climbs to (n+1, m+1)
            Sideband::Red => n_f + 2 <= cutoffs.field_dim() && m_v + 2 <= cutoffs.vib_dim(),
            // excited branch moves to (n+1, m-1) when m >= 1; ground branch
            // moves to (n-1, m+1) when n >= 1
            Sideband::Blue => {
                (m_v == 0 || n_f + 2 <= cutoffs.field_dim())
                    && (n_f == 0 || m_v + 2 <= cutoffs.vib_dim())
            }
        };
        if !margin_ok {
            return Err(ProtocolError::NoTruncationMargin {
                n_f,
                m_v,
                sideband,
                cutoffs,
            });
        }
        Ok(Self {
            sideband,
            n_f,
            m_v,
            theta,
            phi,
            k,
            params,
            cutoffs,
        })
    }

    pub fn sideband(&self) -> Sideband {
        self.sideband
    }

    pub fn n_f(&self) -> usize {
        self.n_f
    }

    pub fn m_v(&self) -> usize {
        self.m_v
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn cutoffs(&self) -> FockCutoffs {
        self.cutoffs
    }

    /// Scheduled pulse time: the k-th full-transfer window of the excited
    /// branch.
    pub fn interaction_time(&self) -> f64 {
        bell_time(
            &self.params,
            self.k,
            self.sideband.effective_excitation(self.n_f, self.m_v),
        )
    }

    /// Initial state |n⟩_f |m⟩_v (cosθ|e⟩ + e^{iφ} sinθ|g⟩).
    pub fn prepare_initial(&self) -> PureState {
        let mut amps = vec![C64::new(0.0, 0.0); self.cutoffs.total_dim()];
        amps[self.cutoffs.index(self.n_f, self.m_v, Qubit::E)] = C64::new(self.theta.cos(), 0.0);
        amps[self.cutoffs.index(self.n_f, self.m_v, Qubit::G)] =
            C64::from_polar(self.theta.sin(), self.phi);
        PureState::from_normalized_amplitudes(self.cutoffs, amps)
            .expect("cos/sin pair is unit norm")
    }

    /// Evolve the initial state for an explicit time under the configured
    /// sideband interaction.
    pub fn evolve_for(&self, t: f64) -> Result<PureState, ProtocolError> {
        let initial = self.prepare_initial();
        let evolved = match self.sideband {
            Sideband::Red => analytic_red_propagate(&self.params, &initial, t)?,
            Sideband::Blue => analytic_blue_propagate(&self.params, &initial, t)?,
        };
        Ok(evolved)
    }
}

/// Evolve a configured protocol to its scheduled pulse time.
pub fn evolve_protocol(config: &ProtocolConfig) -> Result<PureState, ProtocolError> {
    config.evolve_for(config.interaction_time())
}

/// Outcome of measuring the electronic state.
#[derive(Debug, Clone)]
pub struct MeasurementRecord {
    /// Which electronic state was found.
    pub outcome: Qubit,
    /// Born probability of that outcome.
    pub probability: f64,
    /// Normalized field ⊗ vibration state conditioned on the outcome.
    pub post_state: BipartiteState,
}

/// Project onto an electronic outcome and renormalize the remaining pair.
///
/// Errors when the outcome probability is below
/// [`MIN_OUTCOME_PROBABILITY`].
pub fn measure_qubit(
    state: &PureState,
    outcome: Qubit,
) -> Result<MeasurementRecord, ProtocolError> {
    let probability = state.qubit_population(outcome);
    if probability < MIN_OUTCOME_PROBABILITY {
        return Err(ProtocolError::PostSelectionFailed {
            outcome,
            probability,
        });
    }
    let cut = state.cutoffs();
    let mut amps = vec![C64::new(0.0, 0.0); cut.pair_dim()];
    for n_f in 0..cut.field_dim() {
        for m_v in 0..cut.vib_dim() {
            amps[cut.pair_index(n_f, m_v)] = state.amplitude(n_f, m_v, outcome);
        }
    }
    let post_state = BipartiteState::from_amplitudes(cut, amps)?;
    Ok(MeasurementRecord {
        outcome,
        probability,
        post_state,
    })
}

/// The four Bell states of the {0, 1} ⊗ {0, 1} occupation subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellTarget {
    /// (|0,0⟩ + |1,1⟩)/√2
    PhiPlus,
    /// (|0,0⟩ − |1,1⟩)/√2
    PhiMinus,
    /// (|0,1⟩ + |1,0⟩)/√2
    PsiPlus,
    /// (|0,1⟩ − |1,0⟩)/√2
    PsiMinus,
}

impl BellTarget {
    /// All four targets in a fixed report order.
    pub const ALL: [BellTarget; 4] = [
        BellTarget::PhiPlus,
        BellTarget::PhiMinus,
        BellTarget::PsiPlus,
        BellTarget::PsiMinus,
    ];

    /// Stable identifier used in reports and output files.
    pub fn label(self) -> &'static str {
        match self {
            BellTarget::PhiPlus => "phi_plus",
            BellTarget::PhiMinus => "phi_minus",
            BellTarget::PsiPlus => "psi_plus",
            BellTarget::PsiMinus => "psi_minus",
        }
    }
}

impl fmt::Display for BellTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Build a Bell target embedded under the given cutoffs.
///
/// Errors unless both modes keep at least two levels.
pub fn bell_target(
    cutoffs: FockCutoffs,
    target: BellTarget,
) -> Result<BipartiteState, ProtocolError> {
    if cutoffs.field_dim() < 2 || cutoffs.vib_dim() < 2 {
        return Err(ProtocolError::CutoffsTooSmallForBell { cutoffs });
    }
    let mut amps = vec![C64::new(0.0, 0.0); cutoffs.pair_dim()];
    let (first, second, sign) = match target {
        BellTarget::PhiPlus => ((0, 0), (1, 1), 1.0),
        BellTarget::PhiMinus => ((0, 0), (1, 1), -1.0),
        BellTarget::PsiPlus => ((0, 1), (1, 0), 1.0),
        BellTarget::PsiMinus => ((0, 1), (1, 0), -1.0),
    };
    let r = 0.5f64.sqrt();
    amps[cutoffs.pair_index(first.0, first.1)] = C64::new(r, 0.0);
    amps[cutoffs.pair_index(second.0, second.1)] = C64::new(sign * r, 0.0);
    Ok(BipartiteState::from_amplitudes(cutoffs, amps)?)
}

/// Full report of one conditional Bell-state run.
#[derive(Debug, Clone)]
pub struct BellRunReport {
    /// Scheduled pulse time that was applied.
    pub time: f64,
    /// Ground-state measurement record, including the post-selected pair.
    pub record: MeasurementRecord,
    /// Fidelity of the post-selected pair against each Bell target, in
    /// [`BellTarget::ALL`] order.
    pub fidelities: [(BellTarget, f64); 4],
    /// Target with the highest fidelity.
    pub best_target: BellTarget,
    /// Fidelity against `best_target`.
    pub best_fidelity: f64,
}

/// Run the full protocol: prepare, pulse to the scheduled time, measure the
/// electronic ground state, and score the post-selected pair against the
/// four Bell targets.
pub fn run_bell_protocol(config: &ProtocolConfig) -> Result<BellRunReport, ProtocolError> {
    let time = config.interaction_time();
    let evolved = config.evolve_for(time)?;
    let record = measure_qubit(&evolved, Qubit::G)?;
    let mut fidelities = [(BellTarget::PhiPlus, 0.0); 4];
    for (slot, target) in fidelities.iter_mut().zip(BellTarget::ALL) {
        let reference = bell_target(config.cutoffs(), target)?;
        let fidelity = reference.overlap(&record.post_state)?.norm_sqr();
        *slot = (target, fidelity);
    }
    let (best_target, best_fidelity) = fidelities
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("four candidates");
    Ok(BellRunReport {
        time,
        record,
        fidelities,
        best_target,
        best_fidelity,
    })
}
