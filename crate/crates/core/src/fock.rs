//! Exact two-photon Fock sector: basis indexing, the sector Hamiltonian,
//! brute-force time evolution (the oracle), and the reference initial states.
//!
//! The sector is spanned by `|1_m 1_n⟩` for `m < n` and `|2_m⟩` for `m = n`,
//! giving dimension `D = N(N+1)/2`. Everything here works directly with the
//! `D×D` Hamiltonian and is deliberately independent of the normal-mode
//! propagator, so the two evolution routes can cross-check each other.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::ArrayModel;

/// Indexing scheme for the two-photon sector of an `N`-cavity chain.
///
/// Ordered pairs `(m, n)` with `1 ≤ m ≤ n ≤ N` map bijectively onto
/// `0..D−1` in lexicographic order; `(m, m)` labels `|2_m⟩` and `(m, n)`
/// with `m < n` labels the symmetrized `|1_m 1_n⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoPhotonBasis {
    n_cavities: usize,
}

impl TwoPhotonBasis {
    pub fn new(n_cavities: usize) -> Result<Self> {
        if n_cavities == 0 {
            return Err(Error::InvalidModel("n_cavities must be at least 1".into()));
        }
        Ok(Self { n_cavities })
    }

    pub fn n_cavities(&self) -> usize {
        self.n_cavities
    }

    /// Sector dimension `D = N(N+1)/2`.
    pub fn dim(&self) -> usize {
        self.n_cavities * (self.n_cavities + 1) / 2
    }

    /// Storage index of the pair `(m, n)`; the arguments may come in either
    /// order. Cavity labels are 1-based.
    pub fn index_of(&self, m: usize, n: usize) -> Result<usize> {
        let limit = self.n_cavities;
        for index in [m, n] {
            if index < 1 || index > limit {
                return Err(Error::IndexOutOfRange { index, limit });
            }
        }
        let (lo, hi) = if m <= n { (m, n) } else { (n, m) };
        // Pairs with first element < lo occupy the leading blocks, which
        // hold N, N−1, … entries; their total telescopes as below.
        let lead = lo - 1;
        Ok(lead * (2 * limit - lead + 1) / 2 + (hi - lo))
    }

    /// Pair `(m, n)` with `m ≤ n` stored at `index`.
    pub fn pair_at(&self, index: usize) -> Result<(usize, usize)> {
        if index >= self.dim() {
            return Err(Error::IndexOutOfRange { index, limit: self.dim() - 1 });
        }
        let mut remaining = index;
        for m in 1..=self.n_cavities {
            let block = self.n_cavities - m + 1;
            if remaining < block {
                return Ok((m, m + remaining));
            }
            remaining -= block;
        }
        unreachable!("index verified against dim above")
    }

    /// All pairs in storage order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n_cavities).flat_map(move |m| (m..=self.n_cavities).map(move |n| (m, n)))
    }
}

/// A normalized state of the two-photon sector.
///
/// `amplitudes[i]` is the coefficient `c_mn` of the basis vector stored at
/// `i` (see [`TwoPhotonBasis`]); the squared norm must be 1 within `1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonState {
    basis: TwoPhotonBasis,
    amplitudes: DVector<Complex64>,
}

impl TwoPhotonState {
    pub fn new(basis: TwoPhotonBasis, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::InvalidState(format!(
                "expected {} amplitudes for N={}, got {}",
                basis.dim(),
                basis.n_cavities(),
                amplitudes.len()
            )));
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("state norm is {norm}, expected 1")));
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn basis(&self) -> TwoPhotonBasis {
        self.basis
    }

    pub fn n_cavities(&self) -> usize {
        self.basis.n_cavities()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Amplitude `c_mn`; arguments accepted in either order.
    pub fn amplitude(&self, m: usize, n: usize) -> Result<Complex64> {
        Ok(self.amplitudes[self.basis.index_of(m, n)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Mean photon number `⟨n_j⟩` per cavity: each pair containing `j`
    /// contributes its probability, with weight 2 for the doubly occupied
    /// pair `(j, j)`. The total over cavities is 2.
    pub fn mean_occupation(&self) -> Vec<f64> {
        let n = self.n_cavities();
        let mut occupation = vec![0.0; n];
        for (i, (m, n_pair)) in self.basis.pairs().enumerate() {
            let p = self.amplitudes[i].norm_sqr();
            if m == n_pair {
                occupation[m - 1] += 2.0 * p;
            } else {
                occupation[m - 1] += p;
                occupation[n_pair - 1] += p;
            }
        }
        occupation
    }
}

/// The two-parameter family of doubly occupied superpositions
/// `cosθ·|2_r⟩ + e^{iφ}·sinθ·|2_s⟩` over two distinct cavities.
///
/// Arbitrary real `theta`/`phi` are accepted and reduced to the canonical
/// ranges `θ ∈ [0, π/2]`, `φ ∈ [0, 2π)`; the reduction preserves the state
/// up to a global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiFamily {
    r: usize,
    s: usize,
    theta: f64,
    phi: f64,
}

impl PsiFamily {
    pub fn new(r: usize, s: usize, theta: f64, phi: f64) -> Result<Self> {
        if r == 0 || s == 0 {
            return Err(Error::InvalidFamily("cavity labels are 1-based; got 0".into()));
        }
        if r == s {
            return Err(Error::InvalidFamily(format!("r and s must differ, both are {r}")));
        }
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidFamily(format!(
                "theta and phi must be finite, got theta={theta}, phi={phi}"
            )));
        }
        let (cos, sin) = (theta.cos(), theta.sin());
        // Fold the signs of cosθ and sinθ into θ ∈ [0, π/2] and a φ shift;
        // the leftover factor is a global phase.
        let canonical_theta = sin.abs().atan2(cos.abs());
        let mut canonical_phi = if (cos < 0.0) != (sin < 0.0) {
            phi + std::f64::consts::PI
        } else {
            phi
        };
        canonical_phi = canonical_phi.rem_euclid(std::f64::consts::TAU);
        if canonical_phi >= std::f64::consts::TAU {
            canonical_phi = 0.0;
        }
        Ok(Self { r, s, theta: canonical_theta, phi: canonical_phi })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Canonical mixing angle in `[0, π/2]`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Canonical relative phase in `[0, 2π)`.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Superposition weights `(cosθ, e^{iφ}·sinθ)`.
    pub fn weights(&self) -> (f64, Complex64) {
        (self.theta.cos(), Complex64::from_polar(self.theta.sin(), self.phi))
    }
}

/// The chain Hamiltonian restricted to the two-photon sector, as a real
/// symmetric `D×D` matrix.
///
/// Every basis state carries diagonal energy `2ω`. Hopping moves one photon
/// across one bond: the matrix element is `J·√(n_c)·√(n_{c'}+1)` for a hop
/// from cavity `c` to `c'`, which evaluates to `√2·J` when a doubly occupied
/// cavity is involved and `J` otherwise.
pub fn sector_hamiltonian(model: &ArrayModel) -> DMatrix<f64> {
    let n = model.n_cavities();
    let basis = TwoPhotonBasis { n_cavities: n };
    let dim = basis.dim();
    let mut h = DMatrix::zeros(dim, dim);
    for (i, (m, p)) in basis.pairs().enumerate() {
        h[(i, i)] = 2.0 * model.omega();
        // Apply each directed hop a†_dst a_src to |m, p⟩ once.
        for (src, dst) in hop_targets(m, p, n) {
            let (occ_src, occ_dst) = occupations(m, p, src, dst);
            let amplitude =
                model.hopping() * ((occ_src as f64).sqrt() * ((occ_dst + 1) as f64).sqrt());
            let moved = if src == m { (dst, p) } else { (m, dst) };
            let j = basis
                .index_of(moved.0, moved.1)
                .expect("hop target stays inside the chain");
            h[(j, i)] += amplitude;
        }
    }
    h
}

/// Directed nearest-neighbour hops available from the pair `(m, p)`.
fn hop_targets(m: usize, p: usize, n: usize) -> Vec<(usize, usize)> {
    let mut hops = Vec::with_capacity(4);
    let mut push = |src: usize| {
        if src > 1 {
            hops.push((src, src - 1));
        }
        if src < n {
            hops.push((src, src + 1));
        }
    };
    push(m);
    if p != m {
        push(p);
    }
    hops
}

/// Occupation numbers of the source and destination cavities before a hop
/// out of the pair state `(m, p)`.
fn occupations(m: usize, p: usize, src: usize, dst: usize) -> (usize, usize) {
    let occ = |cavity: usize| (cavity == m) as usize + (cavity == p) as usize;
    (occ(src), occ(dst))
}

/// Cached eigendecomposition of the sector Hamiltonian.
///
/// Diagonalize once, then evolve any state to any time with two dense
/// matrix–vector products; this is the brute-force ground truth against
/// which the normal-mode route is checked.
#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    basis: TwoPhotonBasis,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SectorSpectrum {
    pub fn new(model: &ArrayModel) -> Result<Self> {
        let basis = TwoPhotonBasis::new(model.n_cavities())?;
        let h = sector_hamiltonian(model);
        let eigen = nalgebra::SymmetricEigen::try_new(h, f64::EPSILON, 0)
            .ok_or(Error::EigenFailure)?;
        Ok(Self { basis, eigenvalues: eigen.eigenvalues, eigenvectors: eigen.eigenvectors })
    }

    pub fn basis(&self) -> TwoPhotonBasis {
        self.basis
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// `exp(−iHt)|state⟩` via the cached spectrum.
    pub fn evolve(&self, state: &TwoPhotonState, t: f64) -> Result<TwoPhotonState> {
        if state.basis() != self.basis {
            return Err(Error::InvalidState(format!(
                "state has N={}, spectrum has N={}",
                state.n_cavities(),
                self.basis.n_cavities()
            )));
        }
        if !t.is_finite() {
            return Err(Error::NonFiniteTime(t));
        }
        let dim = self.basis.dim();
        let v = &self.eigenvectors;
        let c = state.amplitudes();
        // w = Vᵀ·c, then out = V·(e^{−iλt} ∘ w); V is real orthogonal.
        let mut projected = DVector::from_element(dim, Complex64::ZERO);
        for k in 0..dim {
            let mut w = Complex64::ZERO;
            for i in 0..dim {
                w += v[(i, k)] * c[i];
            }
            projected[k] = Complex64::from_polar(1.0, -self.eigenvalues[k] * t) * w;
        }
        let mut out = DVector::from_element(dim, Complex64::ZERO);
        for i in 0..dim {
            let mut acc = Complex64::ZERO;
            for k in 0..dim {
                acc += v[(i, k)] * projected[k];
            }
            out[i] = acc;
        }
        TwoPhotonState::new(self.basis, out)
    }
}

/// One-shot oracle evolution; diagonalizes on every call. Sweeps should
/// hold a [`SectorSpectrum`] instead.
pub fn evolve_oracle(model: &ArrayModel, state0: &TwoPhotonState, t: f64) -> Result<TwoPhotonState> {
    SectorSpectrum::new(model)?.evolve(state0, t)
}

/// The family state `cosθ·|2_r⟩ + e^{iφ}·sinθ·|2_s⟩` in an `N`-cavity chain.
pub fn psi_state(family: &PsiFamily, n_cavities: usize) -> Result<TwoPhotonState> {
    let basis = TwoPhotonBasis::new(n_cavities)?;
    for index in [family.r(), family.s()] {
        if index > n_cavities {
            return Err(Error::IndexOutOfRange { index, limit: n_cavities });
        }
    }
    let (w_r, w_s) = family.weights();
    let mut amplitudes = DVector::from_element(basis.dim(), Complex64::ZERO);
    amplitudes[basis.index_of(family.r(), family.r())?] = Complex64::new(w_r, 0.0);
    amplitudes[basis.index_of(family.s(), family.s())?] = w_s;
    TwoPhotonState::new(basis, amplitudes)
}

/// The alternating superposition `(1/√N)·Σ_n (−1)ⁿ·|2_n⟩`, an exact
/// eigenstate of the sector Hamiltonian with eigenvalue `2ω`.
pub fn chi_state(n_cavities: usize) -> Result<TwoPhotonState> {
    let basis = TwoPhotonBasis::new(n_cavities)?;
    let scale = 1.0 / (n_cavities as f64).sqrt();
    let mut amplitudes = DVector::from_element(basis.dim(), Complex64::ZERO);
    for n in 1..=n_cavities {
        let sign = if n % 2 == 0 { scale } else { -scale };
        amplitudes[basis.index_of(n, n)?] = Complex64::new(sign, 0.0);
    }
    TwoPhotonState::new(basis, amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

    fn model(n: usize) -> ArrayModel {
        ArrayModel::new(n, 1.0, 0.1).unwrap()
    }

    #[test]
    fn basis_dimension_and_bijection() {
        for n in 1..=16 {
            let basis = TwoPhotonBasis::new(n).unwrap();
            assert_eq!(basis.dim(), n * (n + 1) / 2);
            let mut expected = 0;
            for (m, p) in basis.pairs() {
                assert_eq!(basis.index_of(m, p).unwrap(), expected);
                assert_eq!(basis.index_of(p, m).unwrap(), expected, "order-insensitive");
                assert_eq!(basis.pair_at(expected).unwrap(), (m, p));
                expected += 1;
            }
            assert_eq!(expected, basis.dim());
            assert!(basis.pair_at(expected).is_err());
            assert!(basis.index_of(0, 1).is_err());
            assert!(basis.index_of(1, n + 1).is_err());
        }
    }

    #[test]
    fn state_validation() {
        let basis = TwoPhotonBasis::new(2).unwrap();
        let short = DVector::from_element(2, Complex64::ONE);
        assert!(TwoPhotonState::new(basis, short).is_err());
        let unnormalized = DVector::from_element(3, Complex64::new(0.9, 0.0));
        assert!(TwoPhotonState::new(basis, unnormalized).is_err());
    }

    #[test]
    fn sector_hamiltonian_two_cavities() {
        let h = sector_hamiltonian(&model(2));
        let c = 0.1 * 2.0f64.sqrt();
        let expected = DMatrix::from_row_slice(3, 3, &[2.0, c, 0.0, c, 2.0, c, 0.0, c, 2.0]);
        assert_eq!(h.nrows(), 3);
        for (a, b) in h.iter().zip(expected.iter()) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn sector_hamiltonian_single_cavity() {
        let h = sector_hamiltonian(&model(1));
        assert_eq!(h.nrows(), 1);
        assert_eq!(h[(0, 0)], 2.0);
    }

    #[test]
    fn sector_hamiltonian_exactly_symmetric() {
        for n in 1..=12 {
            let h = sector_hamiltonian(&model(n));
            assert_eq!(h, h.transpose(), "N={n}");
        }
    }

    #[test]
    fn sector_hamiltonian_coupling_pattern() {
        // Spot-check the two coupling magnitudes on a longer chain.
        let h = sector_hamiltonian(&model(4));
        let basis = TwoPhotonBasis::new(4).unwrap();
        let at = |a: (usize, usize), b: (usize, usize)| {
            h[(basis.index_of(a.0, a.1).unwrap(), basis.index_of(b.0, b.1).unwrap())]
        };
        let root2 = 2.0f64.sqrt();
        assert!((at((2, 2), (2, 3)) - 0.1 * root2).abs() < 1e-15);
        assert!((at((2, 2), (1, 2)) - 0.1 * root2).abs() < 1e-15);
        assert!((at((1, 3), (1, 4)) - 0.1).abs() < 1e-15);
        assert!((at((1, 3), (1, 2)) - 0.1).abs() < 1e-15);
        assert!((at((1, 3), (2, 3)) - 0.1).abs() < 1e-15);
        assert_eq!(at((1, 1), (2, 3)), 0.0, "non-adjacent pairs do not couple");
        assert_eq!(at((1, 4), (2, 2)), 0.0);
    }

    #[test]
    fn chi_is_an_eigenstate() {
        for n in 1..=16 {
            let m = model(n);
            let h = sector_hamiltonian(&m);
            let chi = chi_state(n).unwrap();
            let real: DVector<f64> = chi.amplitudes().map(|c| c.re);
            let residual = (&h * &real - 2.0 * m.omega() * &real).amax();
            assert!(residual < 1e-12, "N={n}: residual {residual}");
        }
    }

    #[test]
    fn chi_state_small_cases() {
        let chi1 = chi_state(1).unwrap();
        assert!((chi1.amplitude(1, 1).unwrap() - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let chi2 = chi_state(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((chi2.amplitude(1, 1).unwrap() - Complex64::new(-h, 0.0)).norm() < 1e-15);
        assert!((chi2.amplitude(2, 2).unwrap() - Complex64::new(h, 0.0)).norm() < 1e-15);
        assert_eq!(chi2.amplitude(1, 2).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn psi_state_examples() {
        let pure = psi_state(&PsiFamily::new(1, 2, 0.0, 0.3).unwrap(), 2).unwrap();
        assert!((pure.amplitude(1, 1).unwrap() - Complex64::ONE).norm() < 1e-15);

        let family = PsiFamily::new(1, 2, FRAC_PI_4, PI).unwrap();
        let state = psi_state(&family, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((state.amplitude(1, 1).unwrap() - Complex64::new(h, 0.0)).norm() < 1e-12);
        assert!((state.amplitude(2, 2).unwrap() - Complex64::new(-h, 0.0)).norm() < 1e-12);
        assert_eq!(state.amplitude(1, 2).unwrap(), Complex64::ZERO);

        assert!(psi_state(&PsiFamily::new(1, 3, 0.1, 0.0).unwrap(), 2).is_err());
    }

    #[test]
    fn psi_family_rejects_bad_inputs() {
        assert!(PsiFamily::new(1, 1, 0.1, 0.0).is_err());
        assert!(PsiFamily::new(0, 2, 0.1, 0.0).is_err());
        assert!(PsiFamily::new(1, 2, f64::NAN, 0.0).is_err());
        assert!(PsiFamily::new(1, 2, 0.1, f64::INFINITY).is_err());
    }

    #[test]
    fn evolve_at_zero_is_identity() {
        let family = PsiFamily::new(1, 3, 0.9, 2.1).unwrap();
        let state = psi_state(&family, 4).unwrap();
        let evolved = evolve_oracle(&model(4), &state, 0.0).unwrap();
        for i in 0..state.amplitudes().len() {
            assert!((evolved.amplitudes()[i] - state.amplitudes()[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn chi_only_picks_up_a_global_phase() {
        let m = model(6);
        let spectrum = SectorSpectrum::new(&m).unwrap();
        let chi = chi_state(6).unwrap();
        for t in [0.7, 13.0, 222.5] {
            let evolved = spectrum.evolve(&chi, t).unwrap();
            let phase = Complex64::from_polar(1.0, -2.0 * m.omega() * t);
            for i in 0..chi.amplitudes().len() {
                let expected = phase * chi.amplitudes()[i];
                assert!((evolved.amplitudes()[i] - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn two_cavity_beamsplitter_probability() {
        // Balanced superposition with φ=0: the coincidence probability
        // oscillates as sin²(2Jt).
        let m = model(2);
        let spectrum = SectorSpectrum::new(&m).unwrap();
        let state = psi_state(&PsiFamily::new(1, 2, FRAC_PI_4, 0.0).unwrap(), 2).unwrap();
        for t in [0.0, 1.3, 7.853981633974483, 25.0, 311.7] {
            let evolved = spectrum.evolve(&state, t).unwrap();
            let p = evolved.amplitude(1, 2).unwrap().norm_sqr();
            let expected = (0.2 * t).sin().powi(2);
            assert!((p - expected).abs() < 1e-12, "t={t}: {p} vs {expected}");
        }
    }

    #[test]
    fn mean_occupation_weights() {
        // |2_1⟩ puts two photons in cavity 1; |1_1 1_2⟩ puts one in each.
        let basis = TwoPhotonBasis::new(2).unwrap();
        let mut amp = DVector::from_element(3, Complex64::ZERO);
        amp[0] = Complex64::ONE;
        let doubly = TwoPhotonState::new(basis, amp).unwrap();
        assert_eq!(doubly.mean_occupation(), vec![2.0, 0.0]);

        let mut amp = DVector::from_element(3, Complex64::ZERO);
        amp[1] = Complex64::ONE;
        let split = TwoPhotonState::new(basis, amp).unwrap();
        assert_eq!(split.mean_occupation(), vec![1.0, 1.0]);
    }

    proptest! {
        #[test]
        fn canonical_ranges(theta in -12.0f64..12.0, phi in -12.0f64..12.0) {
            let family = PsiFamily::new(1, 2, theta, phi).unwrap();
            prop_assert!((0.0..=FRAC_PI_2).contains(&family.theta()));
            prop_assert!((0.0..TAU).contains(&family.phi()));
        }

        #[test]
        fn canonicalization_preserves_the_state(theta in -12.0f64..12.0, phi in -12.0f64..12.0) {
            // Both the populations and the phase-sensitive cross term
            // conj(c_rr)·c_ss are invariant under the reduction.
            let family = PsiFamily::new(1, 2, theta, phi).unwrap();
            let (w_r, w_s) = family.weights();
            prop_assert!((w_r * w_r - theta.cos().powi(2)).abs() < 1e-12);
            let cross = Complex64::new(w_r, 0.0).conj() * w_s;
            let raw = Complex64::from_polar(theta.sin(), phi) * theta.cos();
            prop_assert!((cross - raw).norm() < 1e-12);
        }

        #[test]
        fn oracle_conserves_norm(n in 1usize..=8, t in 0.0f64..4000.0, theta in 0.0f64..TAU, phi in 0.0f64..TAU) {
            let spectrum = SectorSpectrum::new(&model(n)).unwrap();
            let state = family_state(n, theta, phi);
            let evolved = spectrum.evolve(&state, t).unwrap();
            prop_assert!((evolved.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn oracle_conserves_photon_number(n in 1usize..=8, t in 0.0f64..4000.0, theta in 0.0f64..TAU) {
            let spectrum = SectorSpectrum::new(&model(n)).unwrap();
            let evolved = spectrum.evolve(&family_state(n, theta, 0.4), t).unwrap();
            let total: f64 = evolved.mean_occupation().iter().sum();
            prop_assert!((total - 2.0).abs() < 1e-12);
        }

        #[test]
        fn oracle_is_reversible(n in 1usize..=8, t in 0.0f64..4000.0, theta in 0.0f64..TAU, phi in 0.0f64..TAU) {
            let spectrum = SectorSpectrum::new(&model(n)).unwrap();
            let state = family_state(n, theta, phi);
            let there = spectrum.evolve(&state, t).unwrap();
            let back = spectrum.evolve(&there, -t).unwrap();
            for i in 0..state.amplitudes().len() {
                prop_assert!((back.amplitudes()[i] - state.amplitudes()[i]).norm() < 1e-10);
            }
        }
    }

    /// A family state for any chain size, falling back to |2_1⟩ when the
    /// chain is too short for two distinct cavities.
    fn family_state(n: usize, theta: f64, phi: f64) -> TwoPhotonState {
        if n == 1 {
            let basis = TwoPhotonBasis::new(1).unwrap();
            return TwoPhotonState::new(basis, DVector::from_element(1, Complex64::ONE)).unwrap();
        }
        psi_state(&PsiFamily::new(1, n, theta, phi).unwrap(), n).unwrap()
    }
}
