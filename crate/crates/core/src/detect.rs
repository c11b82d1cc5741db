//! Homodyne/heterodyne signal models, quadrature noise, photon-counting
//! rates, and first/second-order coherence.
//!
//! Quantum detection outputs are expressed in powers of the single prefactor
//! `s = ħω/(2ε₀V)` carried by [`ModeScale`]; the default unit scale keeps
//! them dimensionless. The balanced-homodyne observables come in two
//! independent routes: closed forms in the ladder moments of the signal
//! state, and the full two-mode difference operator acting on
//! `|ψ₁⟩⊗|γ₂⟩` — tests hold the routes against each other.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{auto_truncation, FockState, ModeScale, Side, TwoModeState};
use crate::network::{split_state, MzConfig, SplitterCoeffs};
use crate::ops::OperatorMatrix;

/// Hard cap on the joint-basis dimension built by the two-mode routes
/// (memory grows as the square of this).
pub const MAX_JOINT_DIM: usize = 1024;

/// Ratio of the quantum homodyne mean (closed form evaluated with
/// `|E_i| = 2√s|γ_i|`) to the classical filtered difference signal. The
/// classical model squares full field amplitudes while the quantum operators
/// carry half of each, leaving a constant factor of one half between the
/// two conventions.
pub const CLASSICAL_CALIBRATION: f64 = 0.5;

/// A classical single-frequency field `|E|·cos(k·r - ωt + φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalField {
    pub amp: f64,
    pub phase: f64,
    pub omega: f64,
}

impl ClassicalField {
    pub fn new(amp: f64, phase: f64, omega: f64) -> Result<Self> {
        if !(amp.is_finite() && amp >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "field amplitude must be nonnegative, got {amp}"
            )));
        }
        if !phase.is_finite() || !omega.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { amp, phase, omega })
    }
}

/// Detector and difference signals of the classical balanced mixer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalSignal {
    /// `s₁(t) = ½[|E₁|cos(ω₁t-φ₁) + |E₂|sin(ω₂t-φ₂)]²`
    pub s1: f64,
    /// `s₂(t) = ½[|E₁|sin(ω₁t-φ₁) + |E₂|cos(ω₂t-φ₂)]²`
    pub s2: f64,
    /// `s = s₁ - s₂` including the 2ω terms
    pub s: f64,
    /// The surviving beat term `|E₁||E₂|·sin[(ω₂-ω₁)t - φ₂ + φ₁]` after the
    /// detectors average out the 2ω oscillations.
    pub s_filtered: f64,
}

/// Classical difference signal of two fields mixed on a balanced splitter.
pub fn classical_signal(f1: &ClassicalField, f2: &ClassicalField, t: f64) -> ClassicalSignal {
    let x1 = f1.omega * t - f1.phase;
    let x2 = f2.omega * t - f2.phase;
    let s1 = 0.5 * (f1.amp * x1.cos() + f2.amp * x2.sin()).powi(2);
    let s2 = 0.5 * (f1.amp * x1.sin() + f2.amp * x2.cos()).powi(2);
    ClassicalSignal {
        s1,
        s2,
        s: s1 - s2,
        s_filtered: f1.amp * f2.amp * ((f2.omega - f1.omega) * t - f2.phase + f1.phase).sin(),
    }
}

/// The single-mode ladder moments that the homodyne closed forms consume:
/// `⟨â⟩`, `⟨ââ⟩`, and `⟨n̂⟩` of a unit-norm state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderMoments {
    pub a: Complex64,
    pub aa: Complex64,
    pub n: f64,
}

impl LadderMoments {
    /// Moments computed from the amplitudes (normalized by the squared norm).
    pub fn from_state(s: &FockState) -> Self {
        let amps = s.amps();
        let mut a = Complex64::new(0.0, 0.0);
        let mut aa = Complex64::new(0.0, 0.0);
        let mut n = 0.0;
        let mut norm = 0.0;
        for (m, c) in amps.iter().enumerate() {
            norm += c.norm_sqr();
            n += m as f64 * c.norm_sqr();
            if m + 1 < s.dim() {
                a += c.conj() * amps[m + 1] * ((m + 1) as f64).sqrt();
            }
            if m + 2 < s.dim() {
                aa += c.conj() * amps[m + 2] * (((m + 1) * (m + 2)) as f64).sqrt();
            }
        }
        Self {
            a: a / norm,
            aa: aa / norm,
            n: n / norm,
        }
    }

    /// Exact moments of the coherent state `|γ⟩`, with no basis in sight;
    /// the route for local-oscillator strengths far beyond any sensible
    /// truncation.
    pub fn coherent(gamma: Complex64) -> Self {
        Self {
            a: gamma,
            aa: gamma * gamma,
            n: gamma.norm_sqr(),
        }
    }
}

fn effective_lo(gamma2: Complex64, phi2: f64) -> Complex64 {
    gamma2 * Complex64::from_polar(1.0, phi2)
}

/// Closed-form balanced-homodyne mean
/// `⟨s⟩ = -s·|γ₂|[sin(φ₂)·⟨â+â†⟩ + cos(φ₂)·⟨i(â-â†)⟩]`,
/// with the retroreflector phase `phi2` added onto the phase of `gamma2`.
pub fn homodyne_mean_closed(
    m: &LadderMoments,
    gamma2: Complex64,
    phi2: f64,
    ms: &ModeScale,
) -> f64 {
    let lo = effective_lo(gamma2, phi2);
    let (mag, phase) = lo.to_polar();
    -2.0 * ms.scale() * mag * (phase.sin() * m.a.re - phase.cos() * m.a.im)
}

/// Closed-form second moment of the difference signal,
/// `⟨s²⟩ = s²|γ₂|²[(2⟨n̂⟩+1) - 2cos(2φ₂)Re⟨ââ⟩ - 2sin(2φ₂)Im⟨ââ⟩] + s²⟨n̂⟩`;
/// the trailing `s²⟨n̂⟩` is the vacuum contribution that survives even with
/// the local oscillator switched off.
pub fn homodyne_second_moment_closed(
    m: &LadderMoments,
    gamma2: Complex64,
    phi2: f64,
    ms: &ModeScale,
) -> f64 {
    let lo = effective_lo(gamma2, phi2);
    let (mag, phase) = lo.to_polar();
    let s = ms.scale();
    let bracket = 2.0 * m.n + 1.0
        - 2.0 * ((2.0 * phase).cos() * m.aa.re + (2.0 * phase).sin() * m.aa.im);
    s * s * (mag * mag * bracket + m.n)
}

/// Mean and fluctuation of the balanced-homodyne output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneReport {
    pub mean: f64,
    pub second_moment: f64,
    /// `second_moment - mean²`, clamped at 0 against rounding.
    pub variance: f64,
}

/// Builds `|ψ₁⟩⊗|γ₂⟩` on a joint basis wide enough that the local
/// oscillator's truncation tail is negligible.
fn joint_with_lo(s: &FockState, lo: Complex64) -> Result<TwoModeState> {
    let n_joint = s.n_max() + auto_truncation(lo) + 2;
    if n_joint + 1 > MAX_JOINT_DIM {
        return Err(Error::TruncationTooSmall {
            n_max: MAX_JOINT_DIM - 1,
            required: n_joint,
        });
    }
    let padded = s.padded(n_joint);
    let oscillator = FockState::coherent_unchecked(lo, n_joint);
    padded.tensor(&oscillator)
}

/// The difference-signal operator `s·i(â₁†â₂ - â₂†â₁)` applied to joint
/// amplitudes. Total photon number is conserved, so the truncated action is
/// exact on states supported below the joint cutoff.
fn difference_signal(joint: &TwoModeState, ms: &ModeScale) -> TwoModeState {
    let up = joint.lower_right().raise_left(); // â₁†â₂
    let down = joint.lower_left().raise_right(); // â₂†â₁
    let i_s = Complex64::new(0.0, ms.scale());
    let amps = up.amps() - down.amps();
    TwoModeState::from_amps(amps.mapv(|c| c * i_s)).expect("finite amplitudes")
}

/// Homodyne mean via the full two-mode operator on `|ψ₁⟩⊗|γ₂⟩`.
pub fn homodyne_mean(
    s: &FockState,
    gamma2: Complex64,
    phi2: f64,
    ms: &ModeScale,
) -> Result<f64> {
    let joint = joint_with_lo(s, effective_lo(gamma2, phi2))?;
    let applied = difference_signal(&joint, ms);
    Ok(joint.inner(&applied)?.re)
}

/// Homodyne mean, second moment, and variance via the two-mode operator.
pub fn homodyne_noise(
    s: &FockState,
    gamma2: Complex64,
    phi2: f64,
    ms: &ModeScale,
) -> Result<HomodyneReport> {
    let joint = joint_with_lo(s, effective_lo(gamma2, phi2))?;
    let applied = difference_signal(&joint, ms);
    let mean = joint.inner(&applied)?.re;
    let second_moment = applied.norm_sqr();
    Ok(HomodyneReport {
        mean,
        second_moment,
        variance: (second_moment - mean * mean).max(0.0),
    })
}

/// Quadrature means, standard deviations, and their uncertainty product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureStats {
    pub mean_q: f64,
    pub mean_p: f64,
    pub dev_q: f64,
    pub dev_p: f64,
    /// `δE_q·δE_p`; bounded below by `s` for any state.
    pub product: f64,
}

/// Means and spreads of `Ê_q`, `Ê_p` on a unit-norm state. Rejects states
/// holding more than 1e-8 of their mass in the top quarter of the basis,
/// where the truncated quadrature matrices are unreliable.
pub fn quadrature_stats(s: &FockState, ms: &ModeScale) -> Result<QuadratureStats> {
    let start = (3 * s.dim()).div_ceil(4);
    let mass: f64 = (start..s.dim()).map(|n| s.amp(n).norm_sqr()).sum();
    if mass > 1e-8 {
        return Err(Error::TopOfBasis { mass, index: start });
    }
    let n_max = s.n_max();
    let eq = OperatorMatrix::quadrature_q(n_max, ms);
    let ep = OperatorMatrix::quadrature_p(n_max, ms);
    let mean_q = eq.expect(s)?.re;
    let mean_p = ep.expect(s)?.re;
    let dev_q = eq.variance(s)?.max(0.0).sqrt();
    let dev_p = ep.variance(s)?.max(0.0).sqrt();
    Ok(QuadratureStats {
        mean_q,
        mean_p,
        dev_q,
        dev_p,
        product: dev_q * dev_p,
    })
}

/// Unit system for [`counting_rate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateUnits {
    /// Photons per mode: returns `⟨â†â⟩`.
    Mode,
    /// Energy flux `(ħωc/V)·⟨â†â⟩` in W/m²; requires `ω` and `V` on the
    /// scale. Dividing by `ħω` recovers photons per unit area per unit time.
    Physical,
}

/// Time-averaged photodetection rate of the state. The vacuum energy `½ħω`
/// is deliberately absent: photodetectors do not capture it.
pub fn counting_rate(s: &FockState, ms: &ModeScale, units: RateUnits) -> Result<f64> {
    let n = s.expect_n();
    match units {
        RateUnits::Mode => Ok(n),
        RateUnits::Physical => {
            let omega = ms.omega().ok_or(Error::MissingPhysical("omega"))?;
            let volume = ms.volume().ok_or(Error::MissingPhysical("volume"))?;
            Ok(crate::fock::HBAR * omega * crate::fock::SPEED_OF_LIGHT / volume * n)
        }
    }
}

/// Detected intensities at the two exit ports of a balanced Mach-Zehnder
/// interferometer, in units of `s = ħω/(2ε₀V)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MzPortSignals {
    /// `s·⟨n⟩·sin²(ϕ/2)`
    pub port3: f64,
    /// `s·⟨n⟩·cos²(ϕ/2)`
    pub port4: f64,
    /// `port4 - port3 = s·⟨n⟩·cos ϕ`, the first-order coherence signal.
    pub difference: f64,
}

/// First-order coherence readout: the state runs through a balanced-pair
/// Mach-Zehnder at internal phase `phi` and both exit intensities are
/// evaluated on the transformed two-mode state.
pub fn g1_mz(s: &FockState, phi: f64, ms: &ModeScale) -> Result<MzPortSignals> {
    let split = split_state(s, &crate::network::mz_effective(&MzConfig::balanced(phi)))?;
    let scale = ms.scale();
    let port3 = scale * split.mean_photons(Side::Left);
    let port4 = scale * split.mean_photons(Side::Right);
    Ok(MzPortSignals {
        port3,
        port4,
        difference: port4 - port3,
    })
}

/// Second-order coherence through a splitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G2Report {
    /// `s²·⟨n̂₃n̂₄⟩ = s²·|ρ|²|τ|²·⟨n(n-1)⟩`, the two-detector correlator.
    pub correlator: f64,
    /// `g² = ⟨n(n-1)⟩/⟨n⟩²`; absent for states with `⟨n⟩ = 0`.
    pub normalized: Option<f64>,
}

/// Intensity correlation of the two splitter outputs. The `⟨n(n-1)⟩`
/// coefficient (not `⟨n⟩²`) is the quantum signature: a lone photon exits
/// one port only, so `|1⟩` gives exactly zero.
pub fn g2_splitter(s: &FockState, sc: &SplitterCoeffs, ms: &ModeScale) -> Result<G2Report> {
    let split = split_state(s, sc)?;
    let scale = ms.scale();
    let correlator = scale * scale * split.expect_nn();
    let n = s.expect_n();
    let normalized = if n > 0.0 {
        Some(s.expect_n_nm1() / (n * n))
    } else {
        None
    };
    Ok(G2Report {
        correlator,
        normalized,
    })
}
