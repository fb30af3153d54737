//! Simulation of conditional Bell-state generation between the quantized
//! motion of a trapped ion and the field of a surrounding cavity.
//!
//! A single two-level ion sits in a high-Q cavity. Driving the system on a
//! vibrational sideband of the electronic transition couples photon number
//! and phonon number; measuring the electronic state afterwards projects the
//! remaining field ⊗ vibration pair into an entangled state. At the right
//! pulse times that state is a Bell state.
//!
//! The crate is organized bottom-up:
//!
//! * [`hilbert`]: basis indexing, state containers, serialization.
//! * [`operators`]: mode and qubit operators, Hamiltonians, operator sine.
//! * [`propagation`]: closed-form sideband propagators, numeric propagation
//!   through a Hermitian eigendecomposition, rotating-frame transform.
//! * [`protocol`]: pulse timing, conditional measurement, Bell targets.
//! * [`analysis`]: fidelity, reduced density matrices, entropy, negativity.
//! * [`cli`]: config parsing and the command runners behind the `ionbell`
//!   binary.

pub mod analysis;
pub mod cli;
pub mod hilbert;
pub mod operators;
pub mod propagation;
pub mod protocol;
