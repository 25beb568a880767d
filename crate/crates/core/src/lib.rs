//! Lorentz sequence spaces `ℓ^{p,q}`, their mutual embeddings, and numerical
//! evidence about how far those embeddings are from compact.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`.

pub mod audit;
pub mod catalog;
pub mod error;
pub mod interval;
pub mod isotonic;
pub mod noncompactness;
pub mod norms;
pub mod sampling;
pub mod scalar;
pub mod search;
pub mod sequence;
pub mod space;
pub mod summation;

pub use catalog::{classify, series_norm, Attainment, EmbeddingSpec, EmbeddingVerdict, MaximalityTag, TheoremTag};
pub use error::{Error, Result};
pub use interval::Interval;
pub use norms::norm;
pub use scalar::Scalar;
pub use search::{convergence_study, estimate_operator_norm, riemann_ratio, Family, SearchConfig, SearchResult};
pub use sequence::{distribution, rearrange, FiniteSequence, Rearrangement};
pub use space::{LorentzParams, SpaceDescriptor};

pub type Sequence = FiniteSequence<f64>;
pub type Decreasing = Rearrangement<f64>;
pub type Space = SpaceDescriptor<f64>;
pub type Params = LorentzParams<f64>;
pub type Spec = EmbeddingSpec<f64>;
pub type Verdict = EmbeddingVerdict<f64>;
pub type Bracket = Interval<f64>;
pub type Search = SearchResult<f64>;
pub type Cover = noncompactness::CoverCertificate<f64>;
pub type Witness = noncompactness::WitnessReport<f64>;
pub type Alpha = noncompactness::AlphaBracket<f64>;
