//! Container wire format.
//!
//! Layout, little-endian throughout:
//!
//! ```text
//! magic "RECB" | version u8 | mechanism id u8 | parameter block
//! | codec id u8 | seed u64 | record count u64 | payload bit length u64
//! | payload bytes (zero-padded to a byte boundary at the end only)
//! ```
//!
//! Parameter blocks per mechanism id:
//!   0 categorical      : inputs u64, outputs u64, source pmf f64 x inputs,
//!                        channel rows f64 x inputs*outputs
//!   1 gaussian         : sigma f64, rho f64
//!   2 uniform-additive : levels u64
//!
//! The seed travels in the header in cleartext: the file is self-contained
//! and the cost of sharing randomness is header overhead, excluded from the
//! per-record payload accounting.

use rec_core::{
    BitString, CategoricalMechanism, CodecKind, GaussianGaussianMechanism, Mechanism,
    SmsuRepresentation, UniformAdditiveMechanism,
};
use std::io::{self, Read, Write};
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"RECB";
pub const VERSION: u8 = 1;

#[derive(Debug, Error)]
pub enum ContainerError {
    #[error("bad magic {0:02x?}, not a container file")]
    BadMagic([u8; 4]),
    #[error("unsupported container version {0}")]
    BadVersion(u8),
    #[error("unknown mechanism id {0}")]
    BadMechanismId(u8),
    #[error("unknown codec id {0}")]
    BadCodecId(u8),
    #[error("payload truncated: header promises {bits} bits, file holds {available} bytes")]
    TruncatedPayload { bits: u64, available: usize },
    #[error("invalid mechanism parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Mechanism parameters as they are serialised into the header.
#[derive(Debug, Clone, PartialEq)]
pub enum MechanismSpec {
    Categorical {
        source_pmf: Vec<f64>,
        channel_rows: Vec<Vec<f64>>,
    },
    Gaussian {
        sigma: f64,
        rho: f64,
    },
    UniformAdditive {
        levels: u64,
    },
}

impl MechanismSpec {
    pub fn id(&self) -> u8 {
        match self {
            MechanismSpec::Categorical { .. } => 0,
            MechanismSpec::Gaussian { .. } => 1,
            MechanismSpec::UniformAdditive { .. } => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MechanismSpec::Categorical { .. } => "categorical",
            MechanismSpec::Gaussian { .. } => "gaussian",
            MechanismSpec::UniformAdditive { .. } => "uniform-additive",
        }
    }

    /// Builds the runnable mechanism, validating parameters.
    pub fn instantiate(&self) -> Result<Box<dyn Mechanism + Send + Sync>, ContainerError> {
        let boxed: Box<dyn Mechanism + Send + Sync> = match self {
            MechanismSpec::Categorical {
                source_pmf,
                channel_rows,
            } => Box::new(
                CategoricalMechanism::new(source_pmf.clone(), channel_rows.clone())
                    .map_err(|e| ContainerError::BadParameters(e.to_string()))?,
            ),
            MechanismSpec::Gaussian { sigma, rho } => Box::new(
                GaussianGaussianMechanism::new(*sigma, *rho)
                    .map_err(|e| ContainerError::BadParameters(e.to_string()))?,
            ),
            MechanismSpec::UniformAdditive { levels } => Box::new(
                UniformAdditiveMechanism::new(*levels)
                    .map_err(|e| ContainerError::BadParameters(e.to_string()))?,
            ),
        };
        Ok(boxed)
    }

    /// Noise representation the layered quantiser uses under this mechanism:
    /// the Gaussian scale mixture for the Gaussian channel, the degenerate
    /// unit mixture (plain dither) otherwise.
    pub fn smsu(&self) -> SmsuRepresentation {
        match self {
            MechanismSpec::Gaussian { rho, .. } => SmsuRepresentation::gaussian(*rho),
            _ => SmsuRepresentation::unit_uniform(),
        }
    }

    fn write_params(&self, out: &mut Vec<u8>) {
        match self {
            MechanismSpec::Categorical {
                source_pmf,
                channel_rows,
            } => {
                out.extend((source_pmf.len() as u64).to_le_bytes());
                out.extend((channel_rows[0].len() as u64).to_le_bytes());
                for &p in source_pmf {
                    out.extend(p.to_le_bytes());
                }
                for row in channel_rows {
                    for &p in row {
                        out.extend(p.to_le_bytes());
                    }
                }
            }
            MechanismSpec::Gaussian { sigma, rho } => {
                out.extend(sigma.to_le_bytes());
                out.extend(rho.to_le_bytes());
            }
            MechanismSpec::UniformAdditive { levels } => {
                out.extend(levels.to_le_bytes());
            }
        }
    }

    fn read_params(id: u8, r: &mut impl Read) -> Result<Self, ContainerError> {
        match id {
            0 => {
                let inputs = read_u64(r)? as usize;
                let outputs = read_u64(r)? as usize;
                if inputs == 0 || outputs == 0 || inputs > 1 << 20 || outputs > 1 << 20 {
                    return Err(ContainerError::BadParameters(format!(
                        "implausible categorical shape {inputs}x{outputs}"
                    )));
                }
                let source_pmf = (0..inputs).map(|_| read_f64(r)).collect::<Result<_, _>>()?;
                let channel_rows = (0..inputs)
                    .map(|_| (0..outputs).map(|_| read_f64(r)).collect::<Result<_, _>>())
                    .collect::<Result<_, _>>()?;
                Ok(MechanismSpec::Categorical {
                    source_pmf,
                    channel_rows,
                })
            }
            1 => Ok(MechanismSpec::Gaussian {
                sigma: read_f64(r)?,
                rho: read_f64(r)?,
            }),
            2 => Ok(MechanismSpec::UniformAdditive {
                levels: read_u64(r)?,
            }),
            other => Err(ContainerError::BadMechanismId(other)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub mechanism: MechanismSpec,
    pub codec: CodecKind,
    pub seed: u64,
    pub record_count: u64,
    pub payload_bits: u64,
}

fn read_u64(r: &mut impl Read) -> Result<u64, ContainerError> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64, ContainerError> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

/// Serialises header plus payload; the payload is byte-aligned only at its
/// end.
pub fn write_container(
    header: &Header,
    payload: &BitString,
    w: &mut impl Write,
) -> Result<(), ContainerError> {
    debug_assert_eq!(header.payload_bits as usize, payload.len());
    let mut bytes = Vec::new();
    bytes.extend(MAGIC);
    bytes.push(VERSION);
    bytes.push(header.mechanism.id());
    header.mechanism.write_params(&mut bytes);
    bytes.push(header.codec.id());
    bytes.extend(header.seed.to_le_bytes());
    bytes.extend(header.record_count.to_le_bytes());
    bytes.extend((payload.len() as u64).to_le_bytes());
    bytes.extend(payload.as_padded_bytes());
    w.write_all(&bytes)?;
    Ok(())
}

/// Parses and validates a container; magic and version are checked before
/// anything else is interpreted.
pub fn read_container(r: &mut impl Read) -> Result<(Header, BitString), ContainerError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(ContainerError::BadMagic(magic));
    }
    let mut byte = [0u8; 1];
    r.read_exact(&mut byte)?;
    if byte[0] != VERSION {
        return Err(ContainerError::BadVersion(byte[0]));
    }
    r.read_exact(&mut byte)?;
    let mechanism = MechanismSpec::read_params(byte[0], r)?;
    r.read_exact(&mut byte)?;
    let codec = CodecKind::from_id(byte[0]).ok_or(ContainerError::BadCodecId(byte[0]))?;
    let seed = read_u64(r)?;
    let record_count = read_u64(r)?;
    let payload_bits = read_u64(r)?;
    let mut payload_bytes = Vec::new();
    r.read_to_end(&mut payload_bytes)?;
    let needed = payload_bits.div_ceil(8) as usize;
    if payload_bytes.len() < needed {
        return Err(ContainerError::TruncatedPayload {
            bits: payload_bits,
            available: payload_bytes.len(),
        });
    }
    let payload = BitString::from_padded_bytes(&payload_bytes[..needed], payload_bits as usize);
    Ok((
        Header {
            mechanism,
            codec,
            seed,
            record_count,
            payload_bits,
        },
        payload,
    ))
}
