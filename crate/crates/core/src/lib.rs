//! Continuous-time classical (CTRW) and quantum (CTQW) walks on discrete
//! rings whose couplings decay as `R^-gamma`.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: ring definition, coupling table, explicit Hamiltonian.
//! - [`spectral`]: Bloch spectrum, dense diagonalization, density of states.
//! - [`dynamics`]: return probabilities, site profiles, mean square displacement.
//! - [`special`]: Riemann zeta, Dirichlet eta, Bessel `J0`.
//! - [`asymptotics`]: stationary phase approximation and band-edge limits.
//! - [`analysis`]: DOS exponent fits, power-law fits, universality verdicts.
//! - [`oracle`]: dense matrix-exponential propagation used to cross-check
//!   the spectral route.
//! - [`io`]: CSV and JSON serialization.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod asymptotics;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod model;
pub mod oracle;
pub mod special;
pub mod spectral;

mod quadrature;

pub use analysis::{
    classify_universality, fit_dos_exponents, fit_power_law, standard_fits, ClassicalClass,
    FitParams, FitResult, FitWindow, QuantumClass, UniversalityReport,
};
pub use asymptotics::{band_maximum, second_derivative, spa_params, spa_return, SpaParams, SpaSystem};
pub use dynamics::{
    classical_return_avg, msd, msd_from_spectrum, msd_return_relation_check, quantum_return_avg,
    transition_probabilities, ProbabilityProfile, SeriesKind, TimeGrid, TimeSeries, WalkKind,
};
pub use error::{Error, Result};
pub use model::{build_coupling_table, build_hamiltonian, ring_distance, CouplingTable, Gamma, HamiltonianMatrix, RingSpec};
pub use spectral::{
    analytic_dos, bloch_eigenvalue, diagonalize_spectrum, dos_histogram, full_spectrum,
    generalized_dos, DosCase, DosEstimate, Spectrum, SpectrumSource,
};

/// Crate version, embedded in every serialized artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
