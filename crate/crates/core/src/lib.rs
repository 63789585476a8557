//! Numerical toolkit for spin coherent states and coherent-operator quantum
//! channels.
//!
//! The crate covers the full pipeline from exact angular-momentum coupling to
//! entropy inequalities:
//!
//! - [`spin`]: spin representation spaces, spin operators, Bloch coherent
//!   states, lower symbols and sphere quadrature.
//! - [`coupling`]: exact Clebsch-Gordan coefficients, the minimal-total-spin
//!   isometry and the partial-trace form of the channel (the reference
//!   construction everything else is checked against).
//! - [`channel`]: bosonic ladder operators, the collapsed Kraus form of the
//!   channel, closed-form coherent output spectra and the ladder-compression
//!   operator used in the majorization argument.
//! - [`majorization`]: spectrum comparison, concave trace functionals and the
//!   mixture property.
//! - [`entropy`]: von Neumann and Wehrl entropies, concave classical
//!   averages, the Berezin-Lieb gap and the large-output-spin limit.
//! - [`optimizer`]: random density matrices, minimal-output-entropy search
//!   and randomized conjecture scans.
//! - [`glauber`]: harmonic-oscillator coherent states, Husimi functions on
//!   truncated Fock space and the large-spin phase-space limit.
//!
//! All operations are pure functions of their inputs; every type is freely
//! shareable across threads.

pub mod channel;
pub mod coupling;
pub mod entropy;
pub mod error;
pub mod glauber;
pub mod linalg;
pub mod majorization;
pub mod numeric;
pub mod optimizer;
pub mod spin;
pub mod tol;

pub use channel::{apply_channel, kraus_set, CoherentSpectrum, KrausSet, LadderOps};
pub use coupling::{
    channel_via_partial_trace, clebsch_gordan, min_spin_isometry, partial_inner, CouplingIsometry,
    ExactCoeff,
};
pub use entropy::{
    berezin_lieb_gap, classical_concave_average, coherent_classical_average, von_neumann_entropy,
    wehrl_entropy, LimitCurve,
};
pub use error::{Error, Result};
pub use glauber::{FockDensity, PhaseGrid};
pub use linalg::{CMat, CVec, C64};
pub use majorization::{majorizes, trace_concave, ConcaveSpec, SpectrumSeq};
pub use optimizer::{sample_density, SearchConfig, SearchResult};
pub use spin::{
    coherent_ket, lower_symbol, sphere_quadrature, spin_operators, DensityMatrix, SphPoint,
    SphereQuadrature, StateVec, TwiceSpin,
};
