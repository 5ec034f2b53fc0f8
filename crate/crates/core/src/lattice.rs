//! Chain model and the analytic single-photon propagator.
//!
//! An open chain of `N` identical cavities with nearest-neighbour hopping
//! diagonalizes in the sine-transform basis: mode `k` has frequency
//! `Ω_k = ω + 2J·cos(πk/(N+1))` and mode function
//! `S̃(j,k) = sqrt(2/(N+1))·sin(jπk/(N+1))`. The Heisenberg-picture
//! propagator `G_jl(t) = Σ_k exp(−iΩ_k t)·S̃(j,k)·S̃(l,k)` is unitary and
//! complex-symmetric; annihilation operators evolve with `G`, creation
//! operators with its conjugate.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform chain of linearly coupled cavities (ħ = 1).
///
/// All cavities share the resonance frequency `omega`; adjacent cavities
/// exchange photons with hopping strength `hopping`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayModel {
    n_cavities: usize,
    omega: f64,
    hopping: f64,
}

impl ArrayModel {
    /// Builds a chain of `n_cavities ≥ 1` cavities. `omega` and `hopping`
    /// must be finite; `hopping` may carry either sign.
    pub fn new(n_cavities: usize, omega: f64, hopping: f64) -> Result<Self> {
        if n_cavities == 0 {
            return Err(Error::InvalidModel("n_cavities must be at least 1".into()));
        }
        if !omega.is_finite() {
            return Err(Error::InvalidModel(format!("omega must be finite, got {omega}")));
        }
        if !hopping.is_finite() {
            return Err(Error::InvalidModel(format!("hopping must be finite, got {hopping}")));
        }
        Ok(Self { n_cavities, omega, hopping })
    }

    pub fn n_cavities(&self) -> usize {
        self.n_cavities
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    /// Normal-mode decomposition of the chain.
    pub fn normal_modes(&self) -> NormalModes {
        normal_modes(self)
    }

    /// Propagator `G(t)` at time `t`.
    pub fn propagator(&self, t: f64) -> Result<Propagator> {
        self.normal_modes().propagator(t)
    }
}

/// Mode frequencies `Ω_k` and the orthogonal sine-transform matrix `S̃`.
///
/// `S̃` is symmetric and its own inverse, so one matrix serves both
/// directions of the transform.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalModes {
    frequencies: DVector<f64>,
    mode_matrix: DMatrix<f64>,
}

/// Decomposes the chain into its normal modes.
pub fn normal_modes(model: &ArrayModel) -> NormalModes {
    let n = model.n_cavities();
    let scale = (2.0 / (n as f64 + 1.0)).sqrt();
    let frequencies = DVector::from_fn(n, |k, _| {
        model.omega() + 2.0 * model.hopping() * (PI * (k + 1) as f64 / (n as f64 + 1.0)).cos()
    });
    // The integer product (j·k) is formed first so the argument — and with
    // it the matrix — is symmetric under j↔k exactly, not just in theory.
    let mode_matrix = DMatrix::from_fn(n, n, |j, k| {
        scale * (PI * ((j + 1) * (k + 1)) as f64 / (n as f64 + 1.0)).sin()
    });
    NormalModes { frequencies, mode_matrix }
}

impl NormalModes {
    pub fn n_cavities(&self) -> usize {
        self.frequencies.len()
    }

    /// Mode frequencies `Ω_k`, ordered `k = 1..N`.
    pub fn frequencies(&self) -> &DVector<f64> {
        &self.frequencies
    }

    /// Mode matrix with `S̃(j,k)` at row `j−1`, column `k−1`.
    pub fn mode_matrix(&self) -> &DMatrix<f64> {
        &self.mode_matrix
    }

    /// Per-mode phases `exp(−iΩ_k t)`.
    pub(crate) fn phases(&self, t: f64) -> DVector<Complex64> {
        self.frequencies.map(|w| Complex64::from_polar(1.0, -w * t))
    }

    /// Row `j` (1-based) of `G(t)`: the amplitudes for a photon initially
    /// in cavity `j` to be found in each cavity at time `t`.
    pub fn propagator_row(&self, j: usize, t: f64) -> Result<DVector<Complex64>> {
        let n = self.n_cavities();
        if j < 1 || j > n {
            return Err(Error::IndexOutOfRange { index: j, limit: n });
        }
        if !t.is_finite() {
            return Err(Error::NonFiniteTime(t));
        }
        let phases = self.phases(t);
        Ok(self.row_with_phases(j, &phases))
    }

    pub(crate) fn row_with_phases(&self, j: usize, phases: &DVector<Complex64>) -> DVector<Complex64> {
        let n = self.n_cavities();
        DVector::from_fn(n, |l, _| {
            let mut g = Complex64::ZERO;
            for k in 0..n {
                g += phases[k] * (self.mode_matrix[(j - 1, k)] * self.mode_matrix[(l, k)]);
            }
            g
        })
    }

    /// Full propagator `G(t)` from the spectral sum.
    pub fn propagator(&self, t: f64) -> Result<Propagator> {
        if !t.is_finite() {
            return Err(Error::NonFiniteTime(t));
        }
        let n = self.n_cavities();
        let phases = self.phases(t);
        let mut matrix = DMatrix::zeros(n, n);
        // Fill the upper triangle and mirror so G_jl == G_lj holds exactly.
        for j in 0..n {
            for l in j..n {
                let mut g = Complex64::ZERO;
                for k in 0..n {
                    g += phases[k] * (self.mode_matrix[(j, k)] * self.mode_matrix[(l, k)]);
                }
                matrix[(j, l)] = g;
                matrix[(l, j)] = g;
            }
        }
        Ok(Propagator { time: t, matrix })
    }
}

/// Convenience wrapper: propagator straight from the model.
pub fn propagator(model: &ArrayModel, t: f64) -> Result<Propagator> {
    model.propagator(t)
}

/// The single-photon propagator `G(t)`: a unitary, complex-symmetric
/// `N×N` matrix mapping initial-cavity amplitudes to time-`t` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    time: f64,
    matrix: DMatrix<Complex64>,
}

impl Propagator {
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn n_cavities(&self) -> usize {
        self.matrix.nrows()
    }

    /// Matrix storage, 0-based.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `G_jl(t)` with 1-based cavity labels.
    pub fn entry(&self, j: usize, l: usize) -> Result<Complex64> {
        let n = self.n_cavities();
        for index in [j, l] {
            if index < 1 || index > n {
                return Err(Error::IndexOutOfRange { index, limit: n });
            }
        }
        Ok(self.matrix[(j - 1, l - 1)])
    }

    /// Largest entry of `G·G† − I`; zero for an exactly unitary matrix.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.n_cavities();
        let product = &self.matrix * self.matrix.adjoint();
        let mut worst = 0.0f64;
        for j in 0..n {
            for l in 0..n {
                let expected = if j == l { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((product[(j, l)] - expected).norm());
            }
        }
        worst
    }
}
