//! Limits of real-valued functions along directed sets.
//!
//! A [`Direction`] says how the argument moves ("as x tends to 1 from the
//! left", "as n tends to infinity", "as the partition mesh shrinks"); a
//! [`Net`] is a real-valued function on it. Limits are estimated from the
//! sup/inf envelopes of the net over shrinking tails, epsilon-delta
//! certificates are checked on denser probe grids, and [`axioms`] turns the
//! defining properties of a limit operator into seeded property checks.

pub mod axioms;
pub mod directions;
pub mod envelope;
pub mod error;
pub mod expr;
pub mod net;

pub use directions::{make_direction, riemann_stieltjes_net, riemann_stieltjes_sum, Direction, DirectionKind, DirectionParams, TagRule};
pub use envelope::{
    envelopes, epsilon_delta_certificate, estimate_limit, limit_of_product, limit_of_quotient, limit_of_sum,
    mb_limit, sandwich_limit, Certificate, CertificateEntry, EnvelopeStep, EnvelopeTrace, EstimateConfig,
    LimitVerdict,
};
pub use error::LimitError;
pub use net::{cofinal_chain, join, ultimately_less, Net, Partition, Point, Tail, UltimatelyVerdict};
