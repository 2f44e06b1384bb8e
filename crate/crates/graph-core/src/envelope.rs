//! Versioned, checksummed binary container used for every on-disk artifact.
//!
//! Layout: 4-byte magic, u32 version (LE), u64 payload length (LE), bincode
//! payload, 32-byte SHA-256 of everything before it.

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnvelopeError {
    #[error("not a recognised artifact (bad magic)")]
    BadMagic,
    #[error("unsupported format version {found}, expected {expected}")]
    Version { found: u32, expected: u32 },
    #[error("artifact truncated")]
    Truncated,
    #[error("checksum mismatch")]
    Checksum,
    #[error("codec error: {0}")]
    Codec(#[from] bincode::Error),
}

const HEADER: usize = 16;

pub fn seal<T: Serialize>(magic: [u8; 4], version: u32, value: &T) -> Result<Vec<u8>, EnvelopeError> {
    let payload = bincode::serialize(value)?;
    let mut out = Vec::with_capacity(HEADER + payload.len() + 32);
    out.extend_from_slice(&magic);
    out.extend_from_slice(&version.to_le_bytes());
    out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    out.extend_from_slice(&payload);
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    Ok(out)
}

pub fn open<T: DeserializeOwned>(bytes: &[u8], magic: [u8; 4], version: u32) -> Result<T, EnvelopeError> {
    if bytes.len() < 4 {
        return Err(EnvelopeError::Truncated);
    }
    if bytes[..4] != magic {
        return Err(EnvelopeError::BadMagic);
    }
    if bytes.len() < HEADER + 32 {
        return Err(EnvelopeError::Truncated);
    }
    let found = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if found != version {
        return Err(EnvelopeError::Version { found, expected: version });
    }
    let len = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    if bytes.len() != HEADER + len + 32 {
        return Err(EnvelopeError::Truncated);
    }
    let (body, digest) = bytes.split_at(HEADER + len);
    if Sha256::digest(body).as_slice() != digest {
        return Err(EnvelopeError::Checksum);
    }
    Ok(bincode::deserialize(&body[HEADER..])?)
}
