//! Evidence about the ball measure of non-compactness `α(I)` at finite
//! truncation: span bounds, constant-sequence covers (upper bounds), and
//! witnesses that refute proposed covers (lower-bound evidence).

mod alpha;
mod cover;
mod span;
mod witness;

pub use alpha::{alpha_bracket, AlphaBasis, AlphaBracket};
pub use cover::{
    build_constant_cover, minimal_lattice_size, verify_cover, weighted_axis_cover,
    weighted_five_ball_cover, CoverCase, CoverCertificate, CoverCheck, Refutation, Verification,
};
pub use span::{entry_range, span_estimate, span_upper_bound, SpanBound, SpanCase};
pub use witness::{signflip_witness, spike_witness, spread_witness, Construction, WitnessReport};
