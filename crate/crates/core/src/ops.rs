//! Operator matrices on the truncated number basis.
//!
//! Operators are dense `(n_max+1)²` complex matrices with rows indexing the
//! output state. Truncation corrupts the top of the ladder, so identities
//! that hold exactly on the infinite basis are asserted here on the lower
//! half of the basis (indices `0..=n_max/2`) for states whose support stays
//! below that cut.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{auto_truncation, FockState, ModeScale, HBAR};

/// Hermiticity gate used by [`OperatorMatrix::variance`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default tolerance handed to [`mat_exp`] by the operators built on it.
pub const DEFAULT_EXP_TOL: f64 = 1e-12;

/// Dense complex operator on the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    m: Array2<Complex64>,
}

impl OperatorMatrix {
    pub fn from_matrix(m: Array2<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        if m.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { m })
    }

    pub fn zeros(n_max: usize) -> Self {
        Self {
            m: Array2::zeros((n_max + 1, n_max + 1)),
        }
    }

    pub fn identity(n_max: usize) -> Self {
        Self {
            m: Array2::eye(n_max + 1),
        }
    }

    /// Annihilation operator: `â|n⟩ = √n|n-1⟩`, i.e. `a[n-1, n] = √n`.
    pub fn annihilation(n_max: usize) -> Self {
        let mut m = Array2::zeros((n_max + 1, n_max + 1));
        for n in 1..=n_max {
            m[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        Self { m }
    }

    /// Creation operator, the exact adjoint of [`OperatorMatrix::annihilation`].
    /// On the truncated basis the top state `|n_max⟩` maps to the zero vector.
    pub fn creation(n_max: usize) -> Self {
        Self::annihilation(n_max).adjoint()
    }

    /// Photon-number operator `n̂ = diag(0, 1, .., n_max)`.
    pub fn number(n_max: usize) -> Self {
        let mut m = Array2::zeros((n_max + 1, n_max + 1));
        for n in 0..=n_max {
            m[[n, n]] = Complex64::new(n as f64, 0.0);
        }
        Self { m }
    }

    /// `n̂^{1/2} = diag(√0, √1, .., √n_max)`, the weight that turns the bare
    /// shift operators into the ladder operators.
    pub fn number_sqrt(n_max: usize) -> Self {
        let mut m = Array2::zeros((n_max + 1, n_max + 1));
        for n in 0..=n_max {
            m[[n, n]] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        Self { m }
    }

    /// Rank-one projector `|n⟩⟨n|`.
    pub fn projector(n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::NumberOutOfRange { n, n_max });
        }
        let mut m = Array2::zeros((n_max + 1, n_max + 1));
        m[[n, n]] = Complex64::new(1.0, 0.0);
        Ok(Self { m })
    }

    /// Single-mode Hamiltonian `Ĥ = ħω(n̂ + ½)`; needs `ω` on the scale.
    pub fn hamiltonian(n_max: usize, ms: &ModeScale) -> Result<Self> {
        let omega = ms.omega().ok_or(Error::MissingPhysical("omega"))?;
        let mut m = Array2::zeros((n_max + 1, n_max + 1));
        for n in 0..=n_max {
            m[[n, n]] = Complex64::new(HBAR * omega * (n as f64 + 0.5), 0.0);
        }
        Ok(Self { m })
    }

    /// Cosine quadrature `Ê_q = √s (â† + â)` with `s = ħω/(2ε₀V)`.
    pub fn quadrature_q(n_max: usize, ms: &ModeScale) -> Self {
        let a = Self::annihilation(n_max);
        let sq = Complex64::new(ms.sqrt_scale(), 0.0);
        Self {
            m: (&a.adjoint().m + &a.m) * sq,
        }
    }

    /// Sine quadrature `Ê_p = i√s (â† - â)`.
    pub fn quadrature_p(n_max: usize, ms: &ModeScale) -> Self {
        let a = Self::annihilation(n_max);
        let isq = Complex64::new(0.0, ms.sqrt_scale());
        Self {
            m: (&a.adjoint().m - &a.m) * isq,
        }
    }

    pub fn n_max(&self) -> usize {
        self.m.nrows() - 1
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[[i, j]]
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.m
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.t().mapv(|c| c.conj()),
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            m: self.m.mapv(|c| c * factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            m: &self.m + &other.m,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            m: &self.m - &other.m,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            m: self.m.dot(&other.m),
        })
    }

    /// Commutator `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            m: self.m.dot(&other.m) - other.m.dot(&self.m),
        })
    }

    /// `A|s⟩`; the result carries the `Raw` convention since applying an
    /// operator does not preserve normalization in general.
    pub fn apply(&self, s: &FockState) -> Result<FockState> {
        if self.dim() != s.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: s.dim(),
            });
        }
        let v = self.m.dot(s.amps());
        FockState::from_amps_raw(v.to_vec())
    }

    /// Expectation `⟨s|A|s⟩ / ⟨s|s⟩`. Dividing by the squared norm makes the
    /// raw-convention states usable here as well.
    pub fn expect(&self, s: &FockState) -> Result<Complex64> {
        let applied = self.apply(s)?;
        Ok(s.inner(&applied)? / s.norm_sqr())
    }

    /// Variance `⟨A²⟩ - ⟨A⟩²` of a Hermitian operator.
    /// Rejects non-Hermitian input instead of silently taking real parts.
    pub fn variance(&self, s: &FockState) -> Result<f64> {
        let dev = self.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let applied = self.apply(s)?;
        let norm = s.norm_sqr();
        let second = applied.norm_sqr() / norm;
        let mean = (s.inner(&applied)? / norm).re;
        Ok(second - mean * mean)
    }

    /// `max |M - M†|` over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                dev = dev.max((self.m[[i, j]] - self.m[[j, i]].conj()).norm());
            }
        }
        dev
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0f64, |acc, c| acc.max(c.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .m
            .iter()
            .zip(other.m.iter())
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).norm())))
    }

    /// `max |A-B|` over the block of rows and columns `0..=limit`; this is the
    /// comparison used for identities corrupted at the top of the ladder.
    pub fn max_abs_diff_on(&self, other: &Self, limit: usize) -> Result<f64> {
        self.check_dim(other)?;
        let hi = limit.min(self.n_max());
        let mut dev: f64 = 0.0;
        for i in 0..=hi {
            for j in 0..=hi {
                dev = dev.max((self.m[[i, j]] - other.m[[i, j]]).norm());
            }
        }
        Ok(dev)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    fn one_norm(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..self.dim() {
            let col: f64 = self.m.column(j).iter().map(|c| c.norm()).sum();
            best = best.max(col);
        }
        best
    }
}

/// Index of the last row/column of the lower half-basis, `n_max/2`.
pub fn lower_half(n_max: usize) -> usize {
    n_max / 2
}

/// Matrix exponential `e^A` by scaling-and-squaring around a truncated Taylor
/// core: `A` is halved until its 1-norm is ≤ 0.5, the series is summed until
/// the term norm drops below `tol`, and the result is squared back up.
pub fn mat_exp(a: &OperatorMatrix, tol: f64) -> Result<OperatorMatrix> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let norm = a.one_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = Complex64::new((0.5f64).powi(squarings as i32) * 2.0, 0.0);
    let b = a.m.mapv(|c| c * scale * Complex64::new(0.5, 0.0));

    let dim = b.nrows();
    let mut total = Array2::eye(dim);
    let mut term: Array2<Complex64> = Array2::eye(dim);
    let mut converged = false;
    let mut residual = f64::INFINITY;
    const MAX_TERMS: usize = 120;
    for k in 1..=MAX_TERMS {
        term = term.dot(&b) / Complex64::new(k as f64, 0.0);
        total += &term;
        residual = OperatorMatrix { m: term.clone() }.one_norm();
        if residual <= tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ExpNotConverged { tol, residual });
    }
    for _ in 0..squarings {
        total = total.dot(&total);
    }
    Ok(OperatorMatrix { m: total })
}

/// Translation (displacement) operator `T̂(γ) = e^{γâ† - γ*â}`.
///
/// Unitarity degrades near the truncation, so the constructor requires
/// `|γ|² + 10|γ| + 20 ≤ n_max`; identities involving `T̂` hold on the lower
/// half-basis.
pub fn translation(gamma: Complex64, n_max: usize) -> Result<OperatorMatrix> {
    let required = auto_truncation(gamma);
    if n_max < required {
        return Err(Error::TruncationTooSmall { n_max, required });
    }
    let a = OperatorMatrix::annihilation(n_max);
    let generator = a
        .adjoint()
        .scaled(gamma)
        .sub(&a.scaled(gamma.conj()))?;
    mat_exp(&generator, DEFAULT_EXP_TOL)
}

/// Outcome of [`cbh_check`]: the largest deviation between `e^Â e^B̂` and
/// `e^{Â+B̂+½[Â,B̂]}` on the lower half-basis.
#[derive(Debug, Clone, Copy)]
pub struct CbhReport {
    pub deviation: f64,
    pub tol: f64,
}

impl CbhReport {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tol
    }
}

/// Verifies the special Campbell-Baker-Hausdorff identity with `Â = γâ†`
/// and `B̂ = -γ*â`, both sides evaluated independently through [`mat_exp`].
pub fn cbh_check(gamma: Complex64, n_max: usize, tol: f64) -> Result<CbhReport> {
    let required = auto_truncation(gamma);
    if n_max < required {
        return Err(Error::TruncationTooSmall { n_max, required });
    }
    let a = OperatorMatrix::annihilation(n_max);
    let op_a = a.adjoint().scaled(gamma);
    let op_b = a.scaled(-gamma.conj());

    let lhs = mat_exp(&op_a, DEFAULT_EXP_TOL)?.mul(&mat_exp(&op_b, DEFAULT_EXP_TOL)?)?;
    let exponent = op_a
        .add(&op_b)?
        .add(&op_a.commutator(&op_b)?.scaled(Complex64::new(0.5, 0.0)))?;
    let rhs = mat_exp(&exponent, DEFAULT_EXP_TOL)?;

    let deviation = lhs.max_abs_diff_on(&rhs, lower_half(n_max))?;
    Ok(CbhReport { deviation, tol })
}
