//! Truncated single- and two-mode Fock-space states.
//!
//! A single mode is represented by its complex amplitudes over the number
//! states `|0⟩ .. |n_max⟩`. Two-mode states hold the joint amplitude matrix
//! `c_{m,n}` over `|m⟩⊗|n⟩`. All values are immutable after construction and
//! every operation is a pure function.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Tolerance for the unit-norm invariant of constructed states.
pub const UNIT_NORM_TOL: f64 = 1e-12;
/// Largest truncation tail mass a checked coherent constructor accepts.
pub const COHERENT_TAIL_LIMIT: f64 = 1e-10;

/// Whether amplitudes are normalized to 1 or kept exactly as constructed.
///
/// The `Raw` convention exists for the truncated phase state, whose
/// literature convention carries total squared norm `1/(2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormConvention {
    Unit,
    Raw,
}

/// One of the two modes of a [`TwoModeState`] (rows are `Left`, columns `Right`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Smallest truncation for which a coherent state of parameter `gamma` keeps
/// its Poisson tail below ~1e-12: `ceil(|γ|² + 10|γ| + 20)`.
pub fn auto_truncation(gamma: Complex64) -> usize {
    let r = gamma.norm();
    (r * r + 10.0 * r + 20.0).ceil() as usize
}

/// State of a single field mode on the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amps: Array1<Complex64>,
    convention: NormConvention,
    tail_mass: f64,
}

impl FockState {
    /// Number state `|n⟩`: amplitude 1 at index `n`, 0 elsewhere.
    pub fn number(n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::NumberOutOfRange { n, n_max });
        }
        let mut amps = Array1::zeros(n_max + 1);
        amps[n] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amps,
            convention: NormConvention::Unit,
            tail_mass: 0.0,
        })
    }

    /// Vacuum `|0⟩`.
    pub fn vacuum(n_max: usize) -> Self {
        Self::number(0, n_max).expect("0 <= n_max always holds")
    }

    /// Coherent state `|γ⟩` with `c_n = e^{-|γ|²/2} γⁿ/√n!`, renormalized to
    /// unit norm so that the truncation tail is absorbed; the discarded tail
    /// mass `Σ_{n>n_max} |c_n|²` is recorded on the state.
    ///
    /// Fails if the tail mass exceeds [`COHERENT_TAIL_LIMIT`]; use
    /// [`FockState::coherent_unchecked`] to override.
    pub fn coherent(gamma: Complex64, n_max: usize) -> Result<Self> {
        let state = Self::coherent_unchecked(gamma, n_max);
        if state.tail_mass > COHERENT_TAIL_LIMIT {
            return Err(Error::TruncationTail {
                n_max,
                tail_mass: state.tail_mass,
                limit: COHERENT_TAIL_LIMIT,
            });
        }
        Ok(state)
    }

    /// Coherent state at the automatic truncation [`auto_truncation`].
    pub fn coherent_auto(gamma: Complex64) -> Self {
        Self::coherent_unchecked(gamma, auto_truncation(gamma))
    }

    /// Coherent state without the tail-mass gate. The amplitudes are built in
    /// log space so large `|γ|` does not underflow through `e^{-|γ|²/2}`.
    pub fn coherent_unchecked(gamma: Complex64, n_max: usize) -> Self {
        let r = gamma.norm();
        if r == 0.0 {
            return Self::vacuum(n_max);
        }
        let theta = gamma.arg();
        let ln_r = r.ln();
        let mut amps = Array1::zeros(n_max + 1);
        let mut ln_fact = 0.0;
        let mut retained = 0.0;
        for n in 0..=n_max {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            let mag = (-0.5 * r * r + n as f64 * ln_r - 0.5 * ln_fact).exp();
            retained += mag * mag;
            amps[n] = Complex64::from_polar(mag, theta * n as f64);
        }
        let tail_mass = (1.0 - retained).max(0.0);
        let scale = retained.sqrt().recip();
        amps.mapv_inplace(|c| c * scale);
        Self {
            amps,
            convention: NormConvention::Unit,
            tail_mass,
        }
    }

    /// Truncated phase state with amplitudes `c_n ∝ e^{inφ}`.
    ///
    /// `NormConvention::Raw` keeps the literature normalization
    /// `c_n = e^{inφ}/√(2π(n_max+1))` (total squared norm `1/(2π)`); `Unit`
    /// uses `c_n = e^{inφ}/√(n_max+1)`.
    pub fn phase(phi: f64, n_max: usize, convention: NormConvention) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::NonFinite);
        }
        let dim = (n_max + 1) as f64;
        let scale = match convention {
            NormConvention::Unit => dim.sqrt().recip(),
            NormConvention::Raw => (2.0 * std::f64::consts::PI * dim).sqrt().recip(),
        };
        let amps = Array1::from_iter((0..=n_max).map(|n| Complex64::from_polar(scale, phi * n as f64)));
        Ok(Self {
            amps,
            convention,
            tail_mass: 0.0,
        })
    }

    /// Builds a unit-norm state from arbitrary amplitudes (normalizing them).
    pub fn from_amps(amps: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_amps_raw(amps)?;
        let norm = state.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidInput("cannot normalize the zero vector".into()));
        }
        let amps = state.amps.mapv(|c| c / norm);
        Ok(Self {
            amps,
            convention: NormConvention::Unit,
            tail_mass: 0.0,
        })
    }

    /// Wraps amplitudes as-is under the `Raw` convention.
    pub fn from_amps_raw(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidInput("state needs at least one amplitude".into()));
        }
        if amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            amps: Array1::from_vec(amps),
            convention: NormConvention::Raw,
            tail_mass: 0.0,
        })
    }

    /// Crate-internal constructor for operations that provably preserve the
    /// stored convention (e.g. diagonal phase ramps).
    pub(crate) fn from_parts(
        amps: Array1<Complex64>,
        convention: NormConvention,
        tail_mass: f64,
    ) -> Self {
        Self {
            amps,
            convention,
            tail_mass,
        }
    }

    pub fn n_max(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    pub fn amps(&self) -> &Array1<Complex64> {
        &self.amps
    }

    pub fn convention(&self) -> NormConvention {
        self.convention
    }

    /// Truncation tail mass recorded by the coherent constructors (0 otherwise).
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Inner product `⟨self|other⟩ = Σ conj(a_n)·b_n`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Photon-number expectation `⟨n̂⟩ = Σ n|c_n|² / Σ |c_n|²`.
    pub fn expect_n(&self) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (n, c) in self.amps.iter().enumerate() {
            let w = c.norm_sqr();
            num += n as f64 * w;
            den += w;
        }
        num / den
    }

    /// `⟨n̂(n̂-1)⟩`, the normally ordered second factorial moment.
    pub fn expect_n_nm1(&self) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (n, c) in self.amps.iter().enumerate() {
            let w = c.norm_sqr();
            num += (n * n.saturating_sub(1)) as f64 * w;
            den += w;
        }
        num / den
    }

    /// Same state embedded in a larger basis (zero-padded above `self.n_max()`).
    pub fn padded(&self, n_max: usize) -> Self {
        if n_max <= self.n_max() {
            return self.clone();
        }
        let mut amps = Array1::zeros(n_max + 1);
        amps.slice_mut(ndarray::s![..self.dim()]).assign(&self.amps);
        Self {
            amps,
            convention: self.convention,
            tail_mass: self.tail_mass,
        }
    }

    /// Tensor product `|self⟩⊗|other⟩` with `c_{m,n} = a_m·b_n`.
    pub fn tensor(&self, other: &Self) -> Result<TwoModeState> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let dim = self.dim();
        let mut amps = Array2::zeros((dim, dim));
        for m in 0..dim {
            for n in 0..dim {
                amps[[m, n]] = self.amps[m] * other.amps[n];
            }
        }
        Ok(TwoModeState { amps })
    }
}

/// Joint state of two modes sharing one truncation: amplitudes `c_{m,n}`
/// over `|m⟩_L |n⟩_R`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    amps: Array2<Complex64>,
}

impl TwoModeState {
    pub fn from_amps(amps: Array2<Complex64>) -> Result<Self> {
        if amps.nrows() != amps.ncols() {
            return Err(Error::DimensionMismatch {
                left: amps.nrows(),
                right: amps.ncols(),
            });
        }
        if amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { amps })
    }

    pub fn zeros(n_max: usize) -> Self {
        Self {
            amps: Array2::zeros((n_max + 1, n_max + 1)),
        }
    }

    pub fn n_max(&self) -> usize {
        self.amps.nrows() - 1
    }

    pub fn dim(&self) -> usize {
        self.amps.nrows()
    }

    pub fn amp(&self, m: usize, n: usize) -> Complex64 {
        self.amps[[m, n]]
    }

    pub fn amps(&self) -> &Array2<Complex64> {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Mean photon number of one mode, `⟨n̂_side⟩`.
    pub fn mean_photons(&self, side: Side) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((m, n), c) in self.amps.indexed_iter() {
            let w = c.norm_sqr();
            let idx = match side {
                Side::Left => m,
                Side::Right => n,
            };
            num += idx as f64 * w;
            den += w;
        }
        num / den
    }

    /// Joint photon-number correlator `⟨n̂_L n̂_R⟩`.
    pub fn expect_nn(&self) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((m, n), c) in self.amps.indexed_iter() {
            let w = c.norm_sqr();
            num += (m * n) as f64 * w;
            den += w;
        }
        num / den
    }

    /// Purity `Tr(ρ_side²)` of the reduced density matrix of one mode.
    /// 1 for a product state, strictly below 1 when the modes are entangled.
    pub fn reduced_purity(&self, side: Side) -> f64 {
        let c = &self.amps;
        let ct = c.mapv(|z| z.conj()).reversed_axes();
        // ρ_L = C·C† / ‖C‖², ρ_R has the same spectrum for a pure joint state.
        let rho = match side {
            Side::Left => c.dot(&ct),
            Side::Right => ct.dot(c),
        };
        let norm = self.norm_sqr();
        rho.iter().map(|z| z.norm_sqr()).sum::<f64>() / (norm * norm)
    }

    /// `â_L` applied to the joint amplitudes (components above the shared
    /// truncation are dropped).
    pub fn lower_left(&self) -> Self {
        let dim = self.dim();
        let mut out = Array2::zeros((dim, dim));
        for m in 0..dim - 1 {
            let f = ((m + 1) as f64).sqrt();
            for n in 0..dim {
                out[[m, n]] = f * self.amps[[m + 1, n]];
            }
        }
        Self { amps: out }
    }

    /// `â†_L` applied to the joint amplitudes.
    pub fn raise_left(&self) -> Self {
        let dim = self.dim();
        let mut out = Array2::zeros((dim, dim));
        for m in 1..dim {
            let f = (m as f64).sqrt();
            for n in 0..dim {
                out[[m, n]] = f * self.amps[[m - 1, n]];
            }
        }
        Self { amps: out }
    }

    /// `â_R` applied to the joint amplitudes.
    pub fn lower_right(&self) -> Self {
        let dim = self.dim();
        let mut out = Array2::zeros((dim, dim));
        for m in 0..dim {
            for n in 0..dim - 1 {
                out[[m, n]] = ((n + 1) as f64).sqrt() * self.amps[[m, n + 1]];
            }
        }
        Self { amps: out }
    }

    /// `â†_R` applied to the joint amplitudes.
    pub fn raise_right(&self) -> Self {
        let dim = self.dim();
        let mut out = Array2::zeros((dim, dim));
        for m in 0..dim {
            for n in 1..dim {
                out[[m, n]] = (n as f64).sqrt() * self.amps[[m, n - 1]];
            }
        }
        Self { amps: out }
    }
}

/// The physical prefactor `s = ħω/(2ε₀V)` in which all field expectation
/// values are expressed. The default unit scale keeps results dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeScale {
    scale: f64,
    omega: Option<f64>,
    volume: Option<f64>,
}

impl ModeScale {
    /// Mode units: `s = 1`.
    pub fn unit() -> Self {
        Self {
            scale: 1.0,
            omega: None,
            volume: None,
        }
    }

    /// An explicit scale with no physical parameters attached.
    pub fn from_scale(scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidInput(format!(
                "mode scale must be positive and finite, got {scale}"
            )));
        }
        Ok(Self {
            scale,
            omega: None,
            volume: None,
        })
    }

    /// Physical scale `s = ħω/(2ε₀V)` from the angular frequency (rad/s) and
    /// the mode volume (m³).
    pub fn physical(omega: f64, volume: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
        }
        if !(volume.is_finite() && volume > 0.0) {
            return Err(Error::InvalidInput(format!("volume must be positive, got {volume}")));
        }
        Ok(Self {
            scale: HBAR * omega / (2.0 * EPSILON_0 * volume),
            omega: Some(omega),
            volume: Some(volume),
        })
    }

    /// A unit-scale carrier for an angular frequency (for operators that only
    /// need `ω`, like the Hamiltonian in mode units).
    pub fn with_omega(omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
        }
        Ok(Self {
            scale: 1.0,
            omega: Some(omega),
            volume: None,
        })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn sqrt_scale(&self) -> f64 {
        self.scale.sqrt()
    }

    pub fn omega(&self) -> Option<f64> {
        self.omega
    }

    pub fn volume(&self) -> Option<f64> {
        self.volume
    }
}
