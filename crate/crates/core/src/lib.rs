//! Two-photon dynamics in linearly coupled cavity arrays.
//!
//! A pair of photons launched into a chain of `N` coupled cavities either
//! stays bunched on one site (localized) or spreads across distinct sites
//! (delocalized). This crate models the chain, evolves two-photon states
//! along two independent routes — an analytic normal-mode propagator and a
//! brute-force Fock-sector diagonalization — and measures coincidence
//! correlations, the delocalization degree `S`, and the entanglement
//! negativity of the initial superposition. Parameter sweeps over the
//! mixing angle θ, the relative phase φ, and the chain length `N` locate
//! the maximum achievable delocalization within a time horizon.
//!
//! Module map:
//! - [`lattice`]: chain model, normal modes, and the propagator `G(t)`.
//! - [`fock`]: two-photon basis, sector Hamiltonian, oracle evolution,
//!   and the reference initial states.
//! - [`correlations`]: joint/normalized coincidence matrices, `S`, the
//!   closed-form ψ-family route, and negativity.
//! - [`sweep`]: time grids, maximum searches, and figure sweeps.
//!
//! Cavity and mode labels are 1-based everywhere in the public API, keeping
//! indices aligned with the usual physics notation; storage is 0-based
//! internally.

pub mod correlations;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod sweep;

pub use correlations::{
    delocalization, delocalization_timeseries, g2_matrix, negativity, p_closed_form,
    propagate_two_photon, report_from_state, Coincidence, CorrelationReport, NegativityValue,
    PsiDynamics,
};
pub use error::{Error, Result};
pub use fock::{
    chi_state, evolve_oracle, psi_state, sector_hamiltonian, PsiFamily, SectorSpectrum,
    TwoPhotonBasis, TwoPhotonState,
};
pub use lattice::{normal_modes, propagator, ArrayModel, NormalModes, Propagator};
pub use sweep::{
    center_pair, max_delocalization, max_delocalization_oracle, n_sweep, theta_phi_sweep,
    SweepResult, SweepRow, TimeGrid,
};
