//! Coincidence-detection observables: joint detection probabilities,
//! the normalized coincidence matrix, the delocalization degree `S`, and
//! the negativity of the initial two-mode superposition.
//!
//! Two independent evaluation routes are provided. [`report_from_state`]
//! works on any sector state (typically oracle-evolved), while
//! [`PsiDynamics`] and [`p_closed_form`] evaluate the closed normal-mode
//! expressions for the ψ-family directly from propagator rows. Agreement
//! between the routes is the central correctness check of the crate.

use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{psi_state, PsiFamily, SectorSpectrum, TwoPhotonState};
use crate::lattice::{ArrayModel, NormalModes};

/// Occupations below this are treated as zero when they appear in a
/// normalization denominator: the coincidence ratio is undefined there,
/// and the reported value is 0 with a degenerate flag.
pub const DEGENERACY_THRESHOLD: f64 = 1e-14;

/// All coincidence observables of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    joint: DMatrix<f64>,
    normalized: DMatrix<f64>,
    mean_occupation: Vec<f64>,
    s_value: f64,
    degenerate: Vec<(usize, usize)>,
}

impl CorrelationReport {
    /// Joint detection probabilities `Q_mn` (symmetric): for `m ≠ n` the
    /// probability of one photon in each cavity, for `m = n` the
    /// probability of both photons in `m`. The upper triangle sums to 1.
    pub fn joint(&self) -> &DMatrix<f64> {
        &self.joint
    }

    /// Normalized coincidence matrix `P_mn = ⟨a_n†a_m†a_m a_n⟩/(⟨n_m⟩⟨n_n⟩)`
    /// (symmetric); degenerate entries are 0 and flagged.
    pub fn normalized(&self) -> &DMatrix<f64> {
        &self.normalized
    }

    /// Mean photon number per cavity.
    pub fn mean_occupation(&self) -> &[f64] {
        &self.mean_occupation
    }

    /// Delocalization degree `S`: the probability of finding the photons
    /// in two different cavities, `1 − Σ_m Q_mm`.
    pub fn s_value(&self) -> f64 {
        self.s_value
    }

    /// Pairs `(m, n)`, `m ≤ n`, whose normalized entry had a vanishing
    /// occupation in the denominator.
    pub fn degenerate_pairs(&self) -> &[(usize, usize)] {
        &self.degenerate
    }

    /// Whether the normalized entry at `(m, n)` was flagged; arguments
    /// accepted in either order.
    pub fn is_degenerate(&self, m: usize, n: usize) -> bool {
        let key = if m <= n { (m, n) } else { (n, m) };
        self.degenerate.binary_search(&key).is_ok()
    }
}

/// Computes every coincidence observable of `state`.
pub fn report_from_state(state: &TwoPhotonState) -> Result<CorrelationReport> {
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidState(format!("state norm is {norm}, expected 1")));
    }
    let n = state.n_cavities();
    let mut joint = DMatrix::zeros(n, n);
    for (i, (m, p)) in state.basis().pairs().enumerate() {
        let prob = state.amplitudes()[i].norm_sqr();
        joint[(m - 1, p - 1)] = prob;
        joint[(p - 1, m - 1)] = prob;
    }
    let mean_occupation = state.mean_occupation();
    let mut normalized = DMatrix::zeros(n, n);
    let mut degenerate = Vec::new();
    for m in 0..n {
        for p in m..n {
            let (value, flagged) = normalize_entry(
                joint[(m, p)],
                m == p,
                mean_occupation[m],
                mean_occupation[p],
            );
            normalized[(m, p)] = value;
            normalized[(p, m)] = value;
            if flagged {
                degenerate.push((m + 1, p + 1));
            }
        }
    }
    let s_value = 1.0 - joint.diagonal().sum();
    Ok(CorrelationReport { joint, normalized, mean_occupation, s_value, degenerate })
}

/// Numerator ⟨a_n†a_m†a_m a_n⟩ over the occupation product, guarding
/// vanishing denominators.
fn normalize_entry(q: f64, diagonal: bool, occ_m: f64, occ_n: f64) -> (f64, bool) {
    if occ_m < DEGENERACY_THRESHOLD || occ_n < DEGENERACY_THRESHOLD {
        return (0.0, true);
    }
    let numerator = if diagonal { 2.0 * q } else { q };
    (numerator / (occ_m * occ_n), false)
}

/// Delocalization degree of a state: `1 − Σ_m |c_mm|²`.
pub fn delocalization(state: &TwoPhotonState) -> f64 {
    let mut localized = 0.0;
    for (i, (m, p)) in state.basis().pairs().enumerate() {
        if m == p {
            localized += state.amplitudes()[i].norm_sqr();
        }
    }
    1.0 - localized
}

/// Normalized coincidence matrix alone (the `P_mn` of
/// [`CorrelationReport::normalized`]).
pub fn g2_matrix(state: &TwoPhotonState) -> Result<DMatrix<f64>> {
    Ok(report_from_state(state)?.normalized)
}

/// A normalized coincidence value together with its degeneracy flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coincidence {
    pub value: f64,
    pub degenerate: bool,
}

/// Closed-form evolution of a ψ-family state through propagator rows.
///
/// Only the two rows `G_r·(t)` and `G_s·(t)` of the propagator enter any
/// ψ-family observable, so each time sample costs `O(N²)` instead of the
/// oracle's `O(D²)`. Holds the normal modes, so construct once per
/// (model, family) and sample freely.
#[derive(Debug, Clone)]
pub struct PsiDynamics {
    modes: NormalModes,
    family: PsiFamily,
    weight_r: f64,
    weight_s: Complex64,
}

impl PsiDynamics {
    pub fn new(model: &ArrayModel, family: &PsiFamily) -> Result<Self> {
        let n = model.n_cavities();
        for index in [family.r(), family.s()] {
            if index > n {
                return Err(Error::IndexOutOfRange { index, limit: n });
            }
        }
        let (weight_r, weight_s) = family.weights();
        Ok(Self { modes: model.normal_modes(), family: *family, weight_r, weight_s })
    }

    pub fn family(&self) -> &PsiFamily {
        &self.family
    }

    pub fn n_cavities(&self) -> usize {
        self.modes.n_cavities()
    }

    /// Propagator rows `r` and `s` at time `t`.
    fn rows(&self, t: f64) -> Result<(DVector<Complex64>, DVector<Complex64>)> {
        if !t.is_finite() {
            return Err(Error::NonFiniteTime(t));
        }
        let phases = self.modes.phases(t);
        let row_r = self.modes.row_with_phases(self.family.r(), &phases);
        let row_s = self.modes.row_with_phases(self.family.s(), &phases);
        Ok((row_r, row_s))
    }

    /// Evolved sector state at time `t`:
    /// `c_mm = cosθ·G_rm² + e^{iφ}·sinθ·G_sm²` and
    /// `c_mn = √2·(cosθ·G_rm·G_rn + e^{iφ}·sinθ·G_sm·G_sn)` for `m < n`.
    pub fn state_at(&self, t: f64) -> Result<TwoPhotonState> {
        let (row_r, row_s) = self.rows(t)?;
        let basis = crate::fock::TwoPhotonBasis::new(self.n_cavities())?;
        let mut amplitudes = DVector::from_element(basis.dim(), Complex64::ZERO);
        for (i, (m, n)) in basis.pairs().enumerate() {
            let pair = self.weight_r * (row_r[m - 1] * row_r[n - 1])
                + self.weight_s * (row_s[m - 1] * row_s[n - 1]);
            amplitudes[i] = if m == n { pair } else { SQRT_2 * pair };
        }
        TwoPhotonState::new(basis, amplitudes)
    }

    /// Delocalization degree at time `t`, without materializing the state.
    pub fn delocalization_at(&self, t: f64) -> Result<f64> {
        let (row_r, row_s) = self.rows(t)?;
        let mut localized = 0.0;
        for m in 0..self.n_cavities() {
            let c = self.weight_r * (row_r[m] * row_r[m])
                + self.weight_s * (row_s[m] * row_s[m]);
            localized += c.norm_sqr();
        }
        Ok(1.0 - localized)
    }

    /// Closed-form normalized coincidence at `(m, n)` and time `t`:
    ///
    /// `P_mn = ½·|cosθ·G_mr·G_nr + e^{iφ}·sinθ·G_ms·G_ns|² / (d_m·d_n)`
    /// with `d_j = cos²θ·|G_jr|² + sin²θ·|G_js|²`, returning 0 with a flag
    /// when either occupation factor vanishes.
    pub fn coincidence_at(&self, t: f64, m: usize, n: usize) -> Result<Coincidence> {
        let limit = self.n_cavities();
        for index in [m, n] {
            if index < 1 || index > limit {
                return Err(Error::IndexOutOfRange { index, limit });
            }
        }
        let (row_r, row_s) = self.rows(t)?;
        let cos2 = self.weight_r * self.weight_r;
        let sin_theta = self.family.theta().sin();
        let sin2 = sin_theta * sin_theta;
        let occupation =
            |j: usize| cos2 * row_r[j - 1].norm_sqr() + sin2 * row_s[j - 1].norm_sqr();
        let (d_m, d_n) = (occupation(m), occupation(n));
        if d_m < DEGENERACY_THRESHOLD || d_n < DEGENERACY_THRESHOLD {
            return Ok(Coincidence { value: 0.0, degenerate: true });
        }
        let amplitude = self.weight_r * (row_r[m - 1] * row_r[n - 1])
            + self.weight_s * (row_s[m - 1] * row_s[n - 1]);
        Ok(Coincidence { value: 0.5 * amplitude.norm_sqr() / (d_m * d_n), degenerate: false })
    }
}

/// One-shot closed-form coincidence; see [`PsiDynamics::coincidence_at`].
pub fn p_closed_form(
    model: &ArrayModel,
    family: &PsiFamily,
    t: f64,
    m: usize,
    n: usize,
) -> Result<Coincidence> {
    PsiDynamics::new(model, family)?.coincidence_at(t, m, n)
}

/// Evolves an arbitrary sector state along the normal-mode route.
///
/// The state is rewritten as a symmetric amplitude matrix
/// `A_mn` (`|ψ⟩ = Σ A_mn a_m†a_n†|0⟩`), which evolves by congruence with
/// the propagator: `A(t) = Gᵀ·A·G`.
pub fn propagate_two_photon(
    modes: &NormalModes,
    state: &TwoPhotonState,
    t: f64,
) -> Result<TwoPhotonState> {
    let n = modes.n_cavities();
    if state.n_cavities() != n {
        return Err(Error::InvalidState(format!(
            "state has N={}, modes have N={n}",
            state.n_cavities()
        )));
    }
    let mut a = DMatrix::from_element(n, n, Complex64::ZERO);
    for (i, (m, p)) in state.basis().pairs().enumerate() {
        let c = state.amplitudes()[i];
        if m == p {
            a[(m - 1, m - 1)] = c / SQRT_2;
        } else {
            a[(m - 1, p - 1)] = c / 2.0;
            a[(p - 1, m - 1)] = c / 2.0;
        }
    }
    let g = modes.propagator(t)?;
    let evolved = g.matrix().transpose() * &a * g.matrix();
    let basis = state.basis();
    let mut amplitudes = DVector::from_element(basis.dim(), Complex64::ZERO);
    for (i, (m, p)) in basis.pairs().enumerate() {
        amplitudes[i] = if m == p {
            SQRT_2 * evolved[(m - 1, m - 1)]
        } else {
            2.0 * evolved[(m - 1, p - 1)]
        };
    }
    TwoPhotonState::new(basis, amplitudes)
}

/// Delocalization degree over a time grid, evaluated on the oracle route.
///
/// Diagonalizes once and reuses the spectrum for every sample; samples are
/// computed in parallel and returned in grid order.
pub fn delocalization_timeseries(
    model: &ArrayModel,
    family: &PsiFamily,
    times: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if times.is_empty() {
        return Err(Error::InvalidGrid("time grid is empty".into()));
    }
    if let Some(bad) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::NonFiniteTime(*bad));
    }
    let spectrum = SectorSpectrum::new(model)?;
    let state0 = psi_state(family, model.n_cavities())?;
    use rayon::prelude::*;
    times
        .par_iter()
        .map(|&t| Ok((t, delocalization(&spectrum.evolve(&state0, t)?))))
        .collect()
}

/// Entanglement negativity of the initial ψ-family state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityValue {
    value: f64,
}

impl NegativityValue {
    /// The negativity, in `[0, 1/2]`.
    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Negativity of the pure two-mode state across the `r|s` bipartition,
/// via its Schmidt weights `{cos²θ, sin²θ}`:
/// `N_e = ((Σ_i √λ_i)² − 1)/2 = sinθ·cosθ`. Independent of `φ`.
pub fn negativity(family: &PsiFamily) -> NegativityValue {
    let weights = [family.theta().cos().powi(2), family.theta().sin().powi(2)];
    let root_sum: f64 = weights.iter().map(|w| w.sqrt()).sum();
    NegativityValue { value: (root_sum * root_sum - 1.0) / 2.0 }
}
