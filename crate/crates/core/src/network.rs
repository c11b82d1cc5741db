//! Lossless beam splitters and the Mach-Zehnder interferometer.
//!
//! A splitter is a pair of Fresnel coefficients `(ρ, τ)` with
//! `|ρ|² + |τ|² = 1`. Front-to-back symmetric splitters obey the phase rule
//! `φ_ρ - φ_τ = ±π/2`; asymmetric ones carry a second pair `(ρ', τ')` for
//! port 2 constrained by `|ρ| = |ρ'|`, `|τ| = |τ'|` and
//! `φ_ρ + φ_ρ' = φ_τ + φ_τ' ± π`. A Mach-Zehnder interferometer is the
//! compound splitter built from two symmetric splitters and an internal
//! phase `ϕ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockState, TwoModeState};

/// Phase-rule tolerance for splitter validation.
pub const SPLITTER_TOL: f64 = 1e-12;
/// Largest factorial representable in f64 without overflow.
const MAX_FACTORIAL: usize = 170;

fn factorial(n: usize) -> Result<f64> {
    if n > MAX_FACTORIAL {
        return Err(Error::InvalidInput(format!(
            "factorial({n}) overflows f64 (limit {MAX_FACTORIAL})"
        )));
    }
    Ok((1..=n).fold(1.0, |acc, k| acc * k as f64))
}

/// Binomial coefficient by accumulated ratios; exact in f64 for the photon
/// numbers used here.
fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k.min(n));
    let mut acc = 1.0;
    for i in 1..=k {
        acc = acc * (n - k + i) as f64 / i as f64;
    }
    acc
}

/// Fresnel reflection/transmission coefficients of a lossless splitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitterCoeffs {
    rho: Complex64,
    tau: Complex64,
    primed: Option<(Complex64, Complex64)>,
    symmetric: bool,
}

impl SplitterCoeffs {
    /// A front-to-back symmetric splitter; validates `|ρ|² + |τ|² = 1` and
    /// the `φ_ρ - φ_τ = ±π/2` phase rule.
    pub fn symmetric(rho: Complex64, tau: Complex64) -> Result<Self> {
        check_unitary(rho, tau)?;
        check_quarter_phase(rho, tau)?;
        Ok(Self {
            rho,
            tau,
            primed: None,
            symmetric: true,
        })
    }

    /// The balanced 50/50 splitter `(ρ, τ) = (1/√2, i/√2)`.
    pub fn balanced() -> Self {
        let w = 1.0 / 2.0f64.sqrt();
        Self {
            rho: Complex64::new(w, 0.0),
            tau: Complex64::new(0.0, w),
            primed: None,
            symmetric: true,
        }
    }

    /// A symmetric splitter with reflectance `|ρ|² = r_sq` and the default
    /// phase choice `(ρ, τ) = (√r_sq, i√(1-r_sq))`.
    pub fn from_reflectance(r_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r_sq) {
            return Err(Error::InvalidSplitter(format!(
                "reflectance must lie in [0, 1], got {r_sq}"
            )));
        }
        Ok(Self {
            rho: Complex64::new(r_sq.sqrt(), 0.0),
            tau: Complex64::new(0.0, (1.0 - r_sq).sqrt()),
            primed: None,
            symmetric: true,
        })
    }

    /// An asymmetric lossless splitter with separate port-2 coefficients;
    /// validates both unitarity relations, the magnitude equalities, and the
    /// `φ_ρ + φ_ρ' = φ_τ + φ_τ' ± π` phase constraint.
    pub fn asymmetric(
        rho: Complex64,
        tau: Complex64,
        rho_p: Complex64,
        tau_p: Complex64,
    ) -> Result<Self> {
        check_unitary(rho, tau)?;
        check_unitary(rho_p, tau_p)?;
        if (rho.norm() - rho_p.norm()).abs() > SPLITTER_TOL {
            return Err(Error::InvalidSplitter(format!(
                "|rho| = {} != |rho'| = {}",
                rho.norm(),
                rho_p.norm()
            )));
        }
        if (tau.norm() - tau_p.norm()).abs() > SPLITTER_TOL {
            return Err(Error::InvalidSplitter(format!(
                "|tau| = {} != |tau'| = {}",
                tau.norm(),
                tau_p.norm()
            )));
        }
        // φ_ρ + φ_ρ' = φ_τ + φ_τ' ± π  ⇔  ρρ'·conj(ττ') is real negative.
        let w = rho * rho_p * (tau * tau_p).conj();
        if w.norm() > SPLITTER_TOL
            && (w.im.abs() > SPLITTER_TOL * w.norm().max(1.0) || w.re >= 0.0)
        {
            return Err(Error::InvalidSplitter(
                "phases violate phi_rho + phi_rho' = phi_tau + phi_tau' ± pi".into(),
            ));
        }
        Ok(Self {
            rho,
            tau,
            primed: Some((rho_p, tau_p)),
            symmetric: false,
        })
    }

    /// A bare coefficient pair validated only for `|ρ|² + |τ|² = 1`; usable
    /// wherever light enters through port 1 alone.
    pub fn plain(rho: Complex64, tau: Complex64) -> Result<Self> {
        check_unitary(rho, tau)?;
        Ok(Self {
            rho,
            tau,
            primed: None,
            symmetric: false,
        })
    }

    pub fn rho(&self) -> Complex64 {
        self.rho
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Port-2 coefficients: the primed pair if present, the port-1 pair for
    /// a symmetric splitter, and nothing for a bare pair.
    pub fn port2_coeffs(&self) -> Option<(Complex64, Complex64)> {
        self.primed
            .or(if self.symmetric { Some((self.rho, self.tau)) } else { None })
    }
}

fn check_unitary(rho: Complex64, tau: Complex64) -> Result<()> {
    let sum = rho.norm_sqr() + tau.norm_sqr();
    if (sum - 1.0).abs() > SPLITTER_TOL {
        return Err(Error::InvalidSplitter(format!(
            "|rho|^2 + |tau|^2 = {sum}, expected 1"
        )));
    }
    Ok(())
}

fn check_quarter_phase(rho: Complex64, tau: Complex64) -> Result<()> {
    // φ_ρ - φ_τ = ±π/2 ⇔ Re(ρ·conj(τ)) = 0; dark ports satisfy it trivially.
    let w = rho * tau.conj();
    if w.norm() > SPLITTER_TOL && w.re.abs() > SPLITTER_TOL * w.norm().max(1.0) {
        return Err(Error::InvalidSplitter(
            "phases violate phi_rho - phi_tau = ± pi/2".into(),
        ));
    }
    Ok(())
}

/// Joint exit state for the number states `|n1⟩₁|n2⟩₂` arriving at the two
/// input ports. The output truncation equals `n1 + n2` (total photon number
/// is conserved, so nothing spills).
///
/// With both inputs populated the transformation needs the port-2
/// coefficients, i.e. a symmetric or asymmetric splitter.
pub fn split_joint_number(n1: usize, n2: usize, sc: &SplitterCoeffs) -> Result<TwoModeState> {
    let total = n1 + n2;
    let (rho, tau) = (sc.rho(), sc.tau());
    let (rho_p, tau_p) = if n2 == 0 {
        (rho, tau)
    } else {
        sc.port2_coeffs().ok_or_else(|| {
            Error::InvalidSplitter(
                "two-input transformation needs port-2 coefficients (symmetric or primed)".into(),
            )
        })?
    };
    let norm_in = (factorial(n1)? * factorial(n2)?).sqrt();
    let mut amps = ndarray::Array2::zeros((total + 1, total + 1));
    for m1 in 0..=n1 {
        for m2 in 0..=n2 {
            let m = m1 + m2;
            let coeff = norm_in * (factorial(m)? * factorial(total - m)?).sqrt()
                / (factorial(m1)? * factorial(m2)? * factorial(n1 - m1)? * factorial(n2 - m2)?);
            amps[[m, total - m]] += rho.powu(m1 as u32)
                * rho_p.powu((n2 - m2) as u32)
                * tau.powu((n1 - m1) as u32)
                * tau_p.powu(m2 as u32)
                * coeff;
        }
    }
    TwoModeState::from_amps(amps)
}

/// A single-mode state entering port 1 (port 2 dark), transformed by
/// linearity of the binomial splitter law:
/// `Σ_n c_n Σ_m √C(n,m) ρ^m τ^{n-m} |m⟩₃|n-m⟩₄`. Preserves the input norm.
pub fn split_state(s: &FockState, sc: &SplitterCoeffs) -> Result<TwoModeState> {
    let n_max = s.n_max();
    let (rho, tau) = (sc.rho(), sc.tau());
    let mut amps = ndarray::Array2::zeros((n_max + 1, n_max + 1));
    for (n, c) in s.amps().iter().enumerate() {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        for m in 0..=n {
            amps[[m, n - m]] +=
                c * binomial(n, m).sqrt() * rho.powu(m as u32) * tau.powu((n - m) as u32);
        }
    }
    TwoModeState::from_amps(amps)
}

/// Photon-number bookkeeping for `|n⟩` through a splitter, computed from the
/// transformed state. The closed forms are `⟨m⟩₃ = n|ρ|²`,
/// `⟨n-m⟩₄ = n|τ|²`, `⟨m(n-m)⟩ = n(n-1)|ρ|²|τ|²`; the positive
/// `product_gap = ⟨m⟩₃⟨n-m⟩₄ - ⟨m(n-m)⟩ = n|ρ|²|τ|²` is the entanglement
/// signature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementCheck {
    pub mean_port3: f64,
    pub mean_port4: f64,
    pub correlator: f64,
    pub product_gap: f64,
}

pub fn entanglement_check(n: usize, sc: &SplitterCoeffs) -> Result<EntanglementCheck> {
    let state = split_joint_number(n, 0, sc)?;
    let mean_port3 = state.mean_photons(crate::fock::Side::Left);
    let mean_port4 = state.mean_photons(crate::fock::Side::Right);
    let correlator = state.expect_nn();
    Ok(EntanglementCheck {
        mean_port3,
        mean_port4,
        correlator,
        product_gap: mean_port3 * mean_port4 - correlator,
    })
}

/// Which binomial moment [`binomial_moment`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentPower {
    First,
    Second,
}

/// Closed form and brute-force sum of `Σ_m m^p C(n,m) x^m y^{n-m}`:
/// `nx(x+y)^{n-1}` for `p = 1`, plus `n(n-1)x²(x+y)^{n-2}` for `p = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialMoment {
    pub closed: f64,
    pub brute: f64,
}

pub fn binomial_moment(n: usize, x: f64, y: f64, power: MomentPower) -> BinomialMoment {
    let nf = n as f64;
    let closed = if n == 0 {
        0.0
    } else {
        let first = nf * x * (x + y).powi(n as i32 - 1);
        match power {
            MomentPower::First => first,
            MomentPower::Second => {
                if n == 1 {
                    first
                } else {
                    first + nf * (nf - 1.0) * x * x * (x + y).powi(n as i32 - 2)
                }
            }
        }
    };
    let brute = (0..=n)
        .map(|m| {
            let mf = m as f64;
            let weight = match power {
                MomentPower::First => mf,
                MomentPower::Second => mf * mf,
            };
            weight * binomial(n, m) * x.powi(m as i32) * y.powi((n - m) as i32)
        })
        .sum();
    BinomialMoment { closed, brute }
}

/// A Mach-Zehnder interferometer: two symmetric splitters and the phase `ϕ`
/// picked up in the arm fed by the first splitter's transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MzConfig {
    s1: SplitterCoeffs,
    s2: SplitterCoeffs,
    phi: f64,
}

impl MzConfig {
    pub fn new(s1: SplitterCoeffs, s2: SplitterCoeffs, phi: f64) -> Result<Self> {
        if !s1.is_symmetric() || !s2.is_symmetric() {
            return Err(Error::InvalidSplitter(
                "Mach-Zehnder analysis assumes symmetric constituent splitters".into(),
            ));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidInput("phi must be finite".into()));
        }
        Ok(Self { s1, s2, phi })
    }

    /// Both splitters balanced 50/50.
    pub fn balanced(phi: f64) -> Self {
        Self::new(SplitterCoeffs::balanced(), SplitterCoeffs::balanced(), phi)
            .expect("balanced splitters are symmetric")
    }

    pub fn s1(&self) -> &SplitterCoeffs {
        &self.s1
    }

    pub fn s2(&self) -> &SplitterCoeffs {
        &self.s2
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// All eight compound coefficients of the interferometer, one per
/// entry/exit port pairing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MzCompound {
    pub rho_13: Complex64,
    pub rho_24: Complex64,
    pub rho_31: Complex64,
    pub rho_42: Complex64,
    pub tau_14: Complex64,
    pub tau_23: Complex64,
    pub tau_32: Complex64,
    pub tau_41: Complex64,
}

/// Compound reflection/transmission coefficients for every port of the
/// interferometer. Reciprocity (`ρ₁₃ = ρ₃₁` etc.) is built into the
/// formulas; the magnitude equalities across ports and the `±π` phase
/// relation `φ_ρ₁₃ + φ_ρ₂₄ = φ_τ₁₄ + φ_τ₂₃ ± π` follow from the symmetric
/// phase rule of the constituent splitters.
pub fn mz_compound_table(cfg: &MzConfig) -> MzCompound {
    let (r1, t1) = (cfg.s1.rho(), cfg.s1.tau());
    let (r2, t2) = (cfg.s2.rho(), cfg.s2.tau());
    let arm = Complex64::from_polar(1.0, cfg.phi);
    MzCompound {
        rho_13: r1 * r2 + t1 * t2 * arm,
        rho_24: r1 * r2 * arm + t1 * t2,
        rho_31: r2 * r1 + t2 * t1 * arm,
        rho_42: r2 * r1 * arm + t2 * t1,
        tau_14: r1 * t2 + t1 * r2 * arm,
        tau_23: r1 * t2 * arm + t1 * r2,
        tau_32: r2 * t1 + t2 * r1 * arm,
        tau_41: r2 * t1 * arm + t2 * r1,
    }
}

/// Effective Fresnel coefficients of the interferometer seen as one
/// asymmetric splitter: `ρ = ρ₁ρ₂ + τ₁τ₂e^{iϕ}`, `τ = ρ₁τ₂ + τ₁ρ₂e^{iϕ}`
/// for port 1, with the port-2 pair `(ρ₂₄, τ₂₃)` attached.
pub fn mz_effective(cfg: &MzConfig) -> SplitterCoeffs {
    let t = mz_compound_table(cfg);
    SplitterCoeffs::asymmetric(t.rho_13, t.tau_14, t.rho_24, t.tau_23)
        .expect("compound coefficients of symmetric splitters form a valid asymmetric splitter")
}

/// `|n⟩` through the interferometer, via the effective-splitter path.
pub fn mz_split_number(n: usize, cfg: &MzConfig) -> Result<TwoModeState> {
    let input = FockState::number(n, n)?;
    split_state(&input, &mz_effective(cfg))
}
