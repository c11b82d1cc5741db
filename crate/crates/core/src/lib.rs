//! Truncated Fock-space quantum optics.
//!
//! Everything here acts on a single field mode (or a pair of modes) whose
//! number basis is cut off at `n_max`, turning states into complex vectors
//! and operators into dense complex matrices. On that footing the crate
//! covers:
//!
//! * Glauber coherent states, their photon statistics, and the displacement
//!   (translation) operator ([`fock`], [`ops`]);
//! * quadrature operators, homodyne signal and noise models, photon-counting
//!   rates, and first/second-order coherence ([`detect`]);
//! * phase eigenstates, phase distributions, and a numerical demonstration of
//!   why no Hermitian phase operator exists ([`phase`]);
//! * lossless beam splitters, Hong-Ou-Mandel interference, and the
//!   Mach-Zehnder interferometer as a compound splitter ([`network`]).
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything is safe to share across threads.

pub mod detect;
pub mod error;
pub mod fock;
pub mod network;
pub mod ops;
pub mod phase;

pub use error::{Error, Result};
pub use fock::{auto_truncation, FockState, ModeScale, NormConvention, Side, TwoModeState};
pub use ops::{cbh_check, mat_exp, translation, OperatorMatrix};
