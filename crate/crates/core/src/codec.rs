//! Record codec dispatch: one encode/decode surface over the four codes.
//!
//! A record codec couples a mechanism with a coding algorithm (and, for the
//! layered quantiser, the noise's scale-mixture representation). Record `i`
//! of a file always uses substream `i`; each record's payload is one
//! codeword, concatenated without per-record alignment.

use crate::bits::{elias_delta_encode, BitCursor, BitString};
use crate::dither::{dq_decode, dq_encode, lq_decode, lq_encode, DitherError, SmsuRepresentation};
use crate::models::Mechanism;
use crate::selection::{
    pfr_select, rejection_select, selection_decode, Budget, SelectionAlgo, SelectionError,
};
use crate::stream::DeterministicStream;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Dither(#[from] DitherError),
}

/// Identifier of the four coding algorithms; also the container codec byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodecKind {
    Rejection,
    Pfr,
    Dq,
    Lq,
}

impl CodecKind {
    pub fn id(self) -> u8 {
        match self {
            CodecKind::Rejection => 0,
            CodecKind::Pfr => 1,
            CodecKind::Dq => 2,
            CodecKind::Lq => 3,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0 => Some(CodecKind::Rejection),
            1 => Some(CodecKind::Pfr),
            2 => Some(CodecKind::Dq),
            3 => Some(CodecKind::Lq),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CodecKind::Rejection => "rejection",
            CodecKind::Pfr => "pfr",
            CodecKind::Dq => "dq",
            CodecKind::Lq => "lq",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rejection" => Some(CodecKind::Rejection),
            "pfr" => Some(CodecKind::Pfr),
            "dq" => Some(CodecKind::Dq),
            "lq" => Some(CodecKind::Lq),
            _ => None,
        }
    }
}

enum Inner {
    Selection(SelectionAlgo, Budget),
    Dq,
    Lq(SmsuRepresentation),
}

/// A mechanism bound to a coding algorithm.
pub struct RecordCodec<'a> {
    mech: &'a dyn Mechanism,
    inner: Inner,
}

impl<'a> RecordCodec<'a> {
    pub fn selection(mech: &'a dyn Mechanism, algo: SelectionAlgo, budget: Budget) -> Self {
        Self {
            mech,
            inner: Inner::Selection(algo, budget),
        }
    }

    /// Dithered quantiser over the mechanism's source distribution; the
    /// simulated channel is `Y = X + Unif(-1/2, 1/2)`.
    pub fn dithered(mech: &'a dyn Mechanism) -> Self {
        Self {
            mech,
            inner: Inner::Dq,
        }
    }

    /// Layered quantiser over the mechanism's source distribution with the
    /// supplied noise representation.
    pub fn layered(mech: &'a dyn Mechanism, smsu: SmsuRepresentation) -> Self {
        Self {
            mech,
            inner: Inner::Lq(smsu),
        }
    }

    pub fn mechanism(&self) -> &dyn Mechanism {
        self.mech
    }

    pub fn kind(&self) -> CodecKind {
        match &self.inner {
            Inner::Selection(SelectionAlgo::Rejection, _) => CodecKind::Rejection,
            Inner::Selection(SelectionAlgo::Pfr, _) => CodecKind::Pfr,
            Inner::Dq => CodecKind::Dq,
            Inner::Lq(_) => CodecKind::Lq,
        }
    }

    pub fn encode(&self, x: f64, seed: u64, substream: u64) -> Result<BitString, CodecError> {
        self.encode_with_stats(x, seed, substream).map(|(bits, _)| bits)
    }

    /// Encodes and reports the sampler's certified step count, when the
    /// codec has one. Quantiser codecs examine no proposals.
    pub fn encode_with_stats(
        &self,
        x: f64,
        seed: u64,
        substream: u64,
    ) -> Result<(BitString, Option<u64>), CodecError> {
        match &self.inner {
            Inner::Selection(algo, budget) => {
                let mut stream = DeterministicStream::new(seed, substream);
                let outcome = match algo {
                    SelectionAlgo::Rejection => {
                        rejection_select(self.mech, x, &mut stream, *budget)?
                    }
                    SelectionAlgo::Pfr => pfr_select(self.mech, x, &mut stream, *budget)?,
                };
                let bits =
                    elias_delta_encode(outcome.selected_index).map_err(SelectionError::from)?;
                Ok((bits, Some(outcome.steps_examined)))
            }
            Inner::Dq => Ok((dq_encode(self.mech, x, seed, substream)?, None)),
            Inner::Lq(smsu) => Ok((lq_encode(self.mech, smsu, x, seed, substream)?, None)),
        }
    }

    pub fn decode(
        &self,
        bits: &BitString,
        cursor: &mut BitCursor,
        seed: u64,
        substream: u64,
    ) -> Result<f64, CodecError> {
        match &self.inner {
            Inner::Selection(algo, _) => {
                Ok(selection_decode(self.mech, bits, cursor, seed, substream, *algo)?)
            }
            Inner::Dq => Ok(dq_decode(self.mech, bits, cursor, seed, substream)?),
            Inner::Lq(smsu) => Ok(lq_decode(self.mech, smsu, bits, cursor, seed, substream)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::UniformAdditiveMechanism;

    #[test]
    fn codec_ids_roundtrip() {
        for kind in [CodecKind::Rejection, CodecKind::Pfr, CodecKind::Dq, CodecKind::Lq] {
            assert_eq!(CodecKind::from_id(kind.id()), Some(kind));
            assert_eq!(CodecKind::parse(kind.name()), Some(kind));
        }
        assert_eq!(CodecKind::from_id(9), None);
    }

    #[test]
    fn dispatch_round_trips_each_codec() {
        let mech = UniformAdditiveMechanism::new(8).unwrap();
        let codecs = [
            RecordCodec::selection(&mech, SelectionAlgo::Rejection, Budget::unlimited()),
            RecordCodec::selection(&mech, SelectionAlgo::Pfr, Budget::unlimited()),
            RecordCodec::dithered(&mech),
            RecordCodec::layered(&mech, SmsuRepresentation::unit_uniform()),
        ];
        for codec in &codecs {
            let bits = codec.encode(3.0, 99, 5).unwrap();
            let mut cur = BitCursor::new();
            let y = codec.decode(&bits, &mut cur, 99, 5).unwrap();
            assert!((y - 3.0).abs() <= 8.0, "{:?}", codec.kind());
            assert_eq!(cur.position(), bits.len());
        }
    }
}
