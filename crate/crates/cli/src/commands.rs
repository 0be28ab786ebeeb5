//! Encode and decode commands over record files.

use crate::container::{read_container, write_container, ContainerError, Header, MechanismSpec};
use rec_core::{BitCursor, BitString, Budget, CodecKind, RecordCodec, SelectionAlgo};
use std::fs;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Verification suite reported failures. Exit code 1.
    #[error("{0} verification check(s) failed")]
    Verification(usize),
    /// Malformed input or container. Exit code 2.
    #[error("format error: {0}")]
    Format(String),
    /// A codec failed on a record. Exit code 3.
    #[error("codec error at record {record}: {message}")]
    Codec { record: u64, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Format(_) => 2,
            CliError::Codec { .. } => 3,
        }
    }
}

impl From<ContainerError> for CliError {
    fn from(e: ContainerError) -> Self {
        CliError::Format(e.to_string())
    }
}

/// Builds the record codec for a mechanism spec; `budget` applies to the
/// selection codecs only.
pub fn build_codec<'a>(
    mech: &'a (dyn rec_core::Mechanism + Send + Sync),
    spec: &MechanismSpec,
    codec: CodecKind,
    budget: Budget,
) -> RecordCodec<'a> {
    match codec {
        CodecKind::Rejection => RecordCodec::selection(mech, SelectionAlgo::Rejection, budget),
        CodecKind::Pfr => RecordCodec::selection(mech, SelectionAlgo::Pfr, budget),
        CodecKind::Dq => RecordCodec::dithered(mech),
        CodecKind::Lq => RecordCodec::layered(mech, spec.smsu()),
    }
}

/// Parses newline-separated decimal records; blank lines are skipped.
pub fn parse_records(text: &str) -> Result<Vec<f64>, CliError> {
    let mut records = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let value: f64 = trimmed.parse().map_err(|_| {
            CliError::Format(format!("line {}: unparseable record {trimmed:?}", lineno + 1))
        })?;
        records.push(value);
    }
    Ok(records)
}

/// Encodes records into container bytes: record `i` uses substream `i`, and
/// the payload is one concatenated bit string, byte-aligned at the end only.
pub fn encode_records(
    spec: &MechanismSpec,
    codec: CodecKind,
    seed: u64,
    budget: Budget,
    records: &[f64],
) -> Result<Vec<u8>, CliError> {
    let mech = spec.instantiate()?;
    let record_codec = build_codec(mech.as_ref(), spec, codec, budget);
    let mut payload = BitString::new();
    for (i, &x) in records.iter().enumerate() {
        let bits = record_codec.encode(x, seed, i as u64).map_err(|e| CliError::Codec {
            record: i as u64,
            message: e.to_string(),
        })?;
        payload.extend(&bits);
    }
    let header = Header {
        mechanism: spec.clone(),
        codec,
        seed,
        record_count: records.len() as u64,
        payload_bits: payload.len() as u64,
    };
    let mut out = Vec::new();
    write_container(&header, &payload, &mut out)?;
    Ok(out)
}

/// Decodes container bytes into reconstructions, one per record.
pub fn decode_records(bytes: &[u8]) -> Result<Vec<f64>, CliError> {
    let (header, payload) = read_container(&mut &bytes[..])?;
    let mech = header.mechanism.instantiate()?;
    // decoding never consults the budget: the transmitted index bounds the
    // replay length
    let codec = build_codec(
        mech.as_ref(),
        &header.mechanism,
        header.codec,
        Budget::unlimited(),
    );
    let mut cursor = BitCursor::new();
    let mut out = Vec::with_capacity(header.record_count as usize);
    for i in 0..header.record_count {
        let y = codec
            .decode(&payload, &mut cursor, header.seed, i)
            .map_err(|e| CliError::Codec {
                record: i,
                message: e.to_string(),
            })?;
        out.push(y);
    }
    Ok(out)
}

pub fn cmd_encode(
    spec: &MechanismSpec,
    codec: CodecKind,
    seed: u64,
    budget: Budget,
    input: &Path,
    output: &Path,
) -> Result<(), CliError> {
    let text = fs::read_to_string(input)
        .map_err(|e| CliError::Format(format!("{}: {e}", input.display())))?;
    let records = parse_records(&text)?;
    let bytes = encode_records(spec, codec, seed, budget, &records)?;
    fs::write(output, bytes).map_err(|e| CliError::Format(format!("{}: {e}", output.display())))?;
    Ok(())
}

pub fn cmd_decode(input: &Path, output: &Path) -> Result<(), CliError> {
    let bytes =
        fs::read(input).map_err(|e| CliError::Format(format!("{}: {e}", input.display())))?;
    let values = decode_records(&bytes)?;
    let mut text = String::new();
    for v in values {
        text.push_str(&format!("{v}\n"));
    }
    fs::write(output, text).map_err(|e| CliError::Format(format!("{}: {e}", output.display())))?;
    Ok(())
}
