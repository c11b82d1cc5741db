//! Phase eigenstates, phase distributions, and the phase-operator pathology.
//!
//! The phase content of a state is read off the distribution
//! `P(φ) = (2π)⁻¹|Σ_n c_n e^{-inφ}|²`. A Hermitian operator generating that
//! distribution does not exist; this module builds the candidate operator and
//! the one-sided shift operators so the failure can be measured, and provides
//! the cos/sin estimators that replace it in practice.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockState, ModeScale, NormConvention};
use crate::ops::OperatorMatrix;

/// Number of subintervals used by [`phase_moments`]. The plain trapezoid
/// rule carries an `h²/6` endpoint error from the `(φ-θ)²` weight (the
/// distribution itself is integrated exactly), so 2¹⁵ points keep the vacuum
/// variance within 1e-8 of π²/3.
const MOMENT_INTERVALS: usize = 1 << 15;

/// Uniform grid of `M` phase values over the half-open interval
/// `[lo, lo + 2π)` with spacing exactly `2π/M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGrid {
    lo: f64,
    m: usize,
}

impl PhaseGrid {
    pub const MIN_POINTS: usize = 16;

    pub fn new(lo: f64, m: usize) -> Result<Self> {
        if m < Self::MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {} points, got {m}",
                Self::MIN_POINTS
            )));
        }
        if !lo.is_finite() {
            return Err(Error::InvalidGrid("lower edge must be finite".into()));
        }
        Ok(Self { lo, m })
    }

    /// 2048 points starting at φ = 0; exact for states with `n_max ≤ 512`.
    pub fn default_grid() -> Self {
        Self { lo: 0.0, m: 2048 }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    /// Grids are never empty (`MIN_POINTS` is enforced at construction).
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.m as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.lo + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.m).map(move |j| self.point(j))
    }
}

/// `P(φ)` sampled on a [`PhaseGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution {
    grid: PhaseGrid,
    density: Vec<f64>,
}

impl PhaseDistribution {
    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Trapezoid integral over one period. On a uniform periodic grid this
    /// is exact for trigonometric polynomials of degree below the grid size,
    /// so unit-norm states integrate to 1 up to rounding.
    pub fn integral(&self) -> f64 {
        self.grid.spacing() * self.density.iter().sum::<f64>()
    }
}

/// Amplitude `⟨φ|ψ⟩·√(2π) = Σ_n c_n e^{-inφ}` of the projection onto the
/// phase state.
fn projection_sum(s: &FockState, phi: f64) -> Complex64 {
    s.amps()
        .iter()
        .enumerate()
        .map(|(n, c)| c * Complex64::from_polar(1.0, -(n as f64) * phi))
        .sum()
}

/// Phase probability density `P(φ) = (2π)⁻¹|Σ_n c_n e^{-inφ}|²` on the grid.
pub fn phase_distribution(s: &FockState, grid: &PhaseGrid) -> PhaseDistribution {
    let density = grid
        .points()
        .map(|phi| projection_sum(s, phi).norm_sqr() / (2.0 * PI))
        .collect();
    PhaseDistribution { grid: *grid, density }
}

/// Mean and variance of `φ` over the interval `(center-π, center+π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMoments {
    pub mean: f64,
    pub variance: f64,
}

/// Trapezoid moments of `P(φ)` about `center`, on an internal 2¹⁵-interval
/// closed grid over `[center-π, center+π]`.
///
/// For a coherent state with `center = arg γ` the distribution is even about
/// the center, so the mean returns `arg γ`.
pub fn phase_moments(s: &FockState, center: f64) -> PhaseMoments {
    let m = MOMENT_INTERVALS;
    let h = 2.0 * PI / m as f64;
    let mut first = 0.0;
    let mut second = 0.0;
    for j in 0..=m {
        let u = -PI + j as f64 * h;
        let p = projection_sum(s, center + u).norm_sqr() / (2.0 * PI);
        let w = if j == 0 || j == m { 0.5 } else { 1.0 };
        first += w * u * p;
        second += w * u * u * p;
    }
    first *= h;
    second *= h;
    PhaseMoments {
        mean: center + first,
        variance: second - first * first,
    }
}

/// Phase variance of a coherent state with `|γ| = absgamma` from the
/// reindexed double series
/// `π²/3 + 4e^{-|γ|²} Σ_{k≥1} Σ_{n=0}^{⌊(k-1)/2⌋} (-|γ|)^k/[(k-2n)²√((k-n)!n!)]`.
///
/// Terms are summed until their magnitude stays below 1e-12; fails if that
/// has not happened by `k_max`.
pub fn phase_variance_series(absgamma: f64, k_max: usize) -> Result<f64> {
    if !(absgamma.is_finite() && absgamma >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "|gamma| must be a nonnegative real, got {absgamma}"
        )));
    }
    let base = PI * PI / 3.0;
    if absgamma == 0.0 {
        return Ok(base);
    }
    let gsq = absgamma * absgamma;
    let ln_g = absgamma.ln();
    let ln_fact = ln_factorials(k_max + 1);
    let prefactor = 4.0 * (-gsq).exp();

    let mut total = base;
    let mut last_term = f64::INFINITY;
    let mut quiet = 0usize;
    for k in 1..=k_max {
        let mut inner = 0.0;
        for n in 0..=(k - 1) / 2 {
            let ln_mag = k as f64 * ln_g - 0.5 * (ln_fact[k - n] + ln_fact[n]);
            inner += ln_mag.exp() / ((k - 2 * n) * (k - 2 * n)) as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = prefactor * sign * inner;
        total += term;
        last_term = term.abs();
        // The series alternates and its envelope grows before the factorial
        // takes over, so ask for a few consecutive quiet terms.
        if last_term < 1e-12 {
            quiet += 1;
            if quiet >= 3 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::SeriesNotConverged { k_max, last_term })
}

fn ln_factorials(up_to: usize) -> Vec<f64> {
    let mut table = vec![0.0; up_to + 1];
    for n in 1..=up_to {
        table[n] = table[n - 1] + (n as f64).ln();
    }
    table
}

/// Expectations of the cos/sin phase estimators
/// `(â†+â)/2⟨n⟩^{1/2}`, `i(â†-â)/2⟨n⟩^{1/2}` and their squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigEstimates {
    pub cos: f64,
    pub sin: f64,
    pub cos2: f64,
    pub sin2: f64,
}

/// Evaluates the four estimator expectations, honoring the state's norm
/// convention: unit-norm states use ordinary expectations, raw states use
/// the literal (non-normalized) sums so the truncated-phase-state arithmetic
/// of the `1/√(2π(n_max+1))` convention comes out unchanged.
///
/// Vacuum input is rejected: the `⟨n⟩^{1/2}` normalizer is undefined there.
pub fn trig_estimators(s: &FockState) -> Result<TrigEstimates> {
    let amps = s.amps();
    let mut sum_a = Complex64::new(0.0, 0.0); // ⟨â⟩ numerator
    let mut sum_aa = Complex64::new(0.0, 0.0); // ⟨ââ⟩ numerator
    let mut sum_n = 0.0;
    let mut sum_1 = 0.0;
    for (m, c) in amps.iter().enumerate() {
        sum_1 += c.norm_sqr();
        sum_n += m as f64 * c.norm_sqr();
        if m + 1 < s.dim() {
            sum_a += c.conj() * amps[m + 1] * ((m + 1) as f64).sqrt();
        }
        if m + 2 < s.dim() {
            sum_aa += c.conj() * amps[m + 2] * (((m + 1) * (m + 2)) as f64).sqrt();
        }
    }
    if s.convention() == NormConvention::Unit {
        sum_a /= sum_1;
        sum_aa /= sum_1;
        sum_n /= sum_1;
        sum_1 = 1.0;
    }
    if sum_n <= 0.0 {
        return Err(Error::VacuumInput);
    }
    let half_inv_sqrt_n = 0.5 / sum_n.sqrt();
    let quarter_inv_n = 0.25 / sum_n;
    // ⟨(â†+â)²⟩ = 2Re⟨ââ⟩ + 2⟨n̂⟩ + ⟨1̂⟩, ⟨-(â†-â)²⟩ = -2Re⟨ââ⟩ + 2⟨n̂⟩ + ⟨1̂⟩.
    let sym = 2.0 * sum_n + sum_1;
    Ok(TrigEstimates {
        cos: 2.0 * sum_a.re * half_inv_sqrt_n,
        sin: 2.0 * sum_a.im * half_inv_sqrt_n,
        cos2: (2.0 * sum_aa.re + sym) * quarter_inv_n,
        sin2: (-2.0 * sum_aa.re + sym) * quarter_inv_n,
    })
}

/// Interval convention for the candidate phase operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseRange {
    /// φ ∈ [0, 2π): diagonal π, off-diagonal `i/(n-m)`.
    ZeroTwoPi,
    /// φ ∈ (-π, π]: diagonal 0, off-diagonal `i(-1)^{n-m}/(n-m)`.
    PlusMinusPi,
}

/// The hypothetical phase operator on the truncated basis. Hermitian by
/// construction, yet it fails to reproduce `φ̂|φ⟩ = φ|φ⟩` and its commutator
/// with `n̂` is not `i·1̂`; see [`number_phase_commutator_residual`].
pub fn phase_operator(n_max: usize, range: PhaseRange) -> OperatorMatrix {
    let dim = n_max + 1;
    let mut m = ndarray::Array2::zeros((dim, dim));
    for row in 0..dim {
        for col in 0..dim {
            m[[row, col]] = if row == col {
                match range {
                    PhaseRange::ZeroTwoPi => Complex64::new(PI, 0.0),
                    PhaseRange::PlusMinusPi => Complex64::new(0.0, 0.0),
                }
            } else {
                let diff = col as f64 - row as f64;
                match range {
                    PhaseRange::ZeroTwoPi => Complex64::new(0.0, 1.0 / diff),
                    PhaseRange::PlusMinusPi => {
                        let sign = if (col + row) % 2 == 0 { 1.0 } else { -1.0 };
                        Complex64::new(0.0, sign / diff)
                    }
                }
            };
        }
    }
    OperatorMatrix::from_matrix(m).expect("square finite matrix")
}

/// `[n̂, φ̂]|ψ⟩ - i|ψ⟩` evaluated in closed form for the `[0, 2π)` operator:
/// `-i(Σ_n c_n)·Σ_m|m⟩`. On the truncated basis the matrix product matches
/// this exactly; it never reduces to zero, which is the obstruction to `φ̂`
/// being conjugate to `n̂`.
pub fn number_phase_commutator_residual(s: &FockState) -> FockState {
    let coeff = -Complex64::i() * s.amps().iter().sum::<Complex64>();
    FockState::from_amps_raw(vec![coeff; s.dim()]).expect("finite amplitudes")
}

/// One-sided shift operators `E₊ = Σ|n⟩⟨n+1|` and `E₋ = Σ|n+1⟩⟨n|`, the
/// would-be `e^{±iφ̂}`.
///
/// `E₋E₊ = 1̂ - |0⟩⟨0|` holds exactly even when truncated; `E₊E₋` equals the
/// identity except for the `(n_max, n_max)` corner, which truncation zeroes.
pub fn shift_ops(n_max: usize) -> (OperatorMatrix, OperatorMatrix) {
    let dim = n_max + 1;
    let mut up = ndarray::Array2::zeros((dim, dim));
    for n in 0..n_max {
        up[[n, n + 1]] = Complex64::new(1.0, 0.0);
    }
    let e_plus = OperatorMatrix::from_matrix(up).expect("square finite matrix");
    let e_minus = e_plus.adjoint();
    (e_plus, e_minus)
}

/// Applies the diagonal phase ramp `e^{iφ₀n̂}`; phase states map to phase
/// states with their angle advanced by `φ₀`. The ramp is norm-preserving, so
/// the input's convention and tail metadata carry over.
pub fn number_shift_phase(s: &FockState, phi0: f64) -> FockState {
    let amps = s
        .amps()
        .iter()
        .enumerate()
        .map(|(n, c)| c * Complex64::from_polar(1.0, phi0 * n as f64))
        .collect();
    FockState::from_parts(amps, s.convention(), s.tail_mass())
}

/// Finite-`N` inner product of two phase states separated by `dphi`:
/// `(2π)⁻¹ Σ_{n=0}^{N} e^{in·dφ}`. As `N` grows the real part sharpens into
/// the `π`-area peak that underlies the delta-orthonormality argument.
pub fn dirichlet_kernel(dphi: f64, n_terms: usize) -> Complex64 {
    (0..=n_terms)
        .map(|n| Complex64::from_polar(1.0, dphi * n as f64))
        .sum::<Complex64>()
        / (2.0 * PI)
}

/// `Σ_{m=1}^{n_max} √m`, the divergent weight in the phase-state field
/// expectation; grows as `(2/3)·n_max^{3/2}`.
pub fn sqrt_partial_sum(n_max: usize) -> f64 {
    (1..=n_max).map(|m| (m as f64).sqrt()).sum()
}

/// Coefficient `(2π)⁻¹·√(2s)·Σ_{m=1}^{n_max}√m` of the sinusoidal field
/// expectation on a truncated phase state. The partial sum diverges with
/// `n_max`, which is the finite-basis picture of the infinite field
/// amplitude carried by an exact phase eigenstate.
pub fn efield_phase_state_coefficient(n_max: usize, ms: &ModeScale) -> f64 {
    (2.0 * ms.scale()).sqrt() / (2.0 * PI) * sqrt_partial_sum(n_max)
}
