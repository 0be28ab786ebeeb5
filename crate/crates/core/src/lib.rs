//! Relative entropy coding: stochastic codes over shared randomness.
//!
//! A stochastic code transmits an exact sample from a target conditional
//! distribution `P_{Y|X=x}` using a bit string plus common randomness that
//! encoder and decoder regenerate from a shared seed. This crate implements
//! the two general-purpose selection codes (rejection sampling and the
//! Poisson functional representation / global-bound A* sampler), the
//! dithered and layered quantiser codes for additive channels, the Elias
//! universal integer codes they serialise indices with, and a statistical
//! harness that verifies every distributional and codelength claim at desk
//! scale.

pub mod bits;
pub mod codec;
pub mod dither;
pub mod harness;
pub mod math;
pub mod models;
pub mod selection;
pub mod stream;

pub use bits::{BitCursor, BitString};
pub use codec::{CodecError, CodecKind, RecordCodec};
pub use dither::{DitherRecord, SmsuRepresentation};
pub use models::{
    AdditiveUnimodalMechanism, CategoricalMechanism, GaussianGaussianMechanism, Mechanism,
    SourceDistribution, UniformAdditiveMechanism,
};
pub use selection::{Budget, SelectionAlgo, SelectionOutcome};
pub use stream::DeterministicStream;
