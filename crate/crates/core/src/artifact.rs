//! Versioned, digest-checked JSON envelopes for everything written to disk.
//!
//! An envelope is `{format, version, kind, digest, payload}` where `digest`
//! is the SHA-256 of the payload's canonical JSON (object keys sorted, no
//! whitespace). Reading checks the format tag, then the version, then the
//! kind, then the digest, and only then decodes the payload.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::path::Path;

pub const FORMAT: &str = "truthbench-artifact";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArtifactKind {
    Tower,
    Proof,
    Theory,
    Report,
}

impl fmt::Display for ArtifactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArtifactKind::Tower => "tower",
            ArtifactKind::Proof => "proof",
            ArtifactKind::Theory => "theory",
            ArtifactKind::Report => "report",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ArtifactError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("not a {FORMAT} document: {0}")]
    Format(String),
    #[error("artifact version {found} is not supported (this build reads version {FORMAT_VERSION})")]
    Version { found: u32 },
    #[error("expected a {expected} artifact, found {found}")]
    Kind { expected: ArtifactKind, found: ArtifactKind },
    #[error("payload digest mismatch: recorded {recorded}, computed {computed}")]
    Digest { recorded: String, computed: String },
    #[error("malformed {kind} payload: {msg}")]
    Payload { kind: ArtifactKind, msg: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactEnvelope {
    pub format: String,
    pub version: u32,
    pub kind: ArtifactKind,
    pub digest: String,
    pub payload: serde_json::Value,
}

/// Hex SHA-256 of the canonical JSON form of `payload`.
pub fn payload_digest(payload: &serde_json::Value) -> String {
    // serde_json's map is a BTreeMap without the preserve_order feature, so
    // `to_string` is already canonical.
    let text = serde_json::to_string(payload).expect("a Value always serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl ArtifactEnvelope {
    pub fn seal<T: Serialize>(kind: ArtifactKind, payload: &T) -> Self {
        let payload = serde_json::to_value(payload).expect("payload types serialize to JSON");
        ArtifactEnvelope { format: FORMAT.to_string(), version: FORMAT_VERSION, kind, digest: payload_digest(&payload), payload }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelopes serialize")
    }

    /// Parse and validate an envelope of any kind.
    pub fn parse(text: &str) -> Result<Self, ArtifactError> {
        let raw: serde_json::Value = serde_json::from_str(text).map_err(|e| ArtifactError::Format(e.to_string()))?;
        let obj = raw.as_object().ok_or_else(|| ArtifactError::Format("top level is not an object".into()))?;
        if obj.get("format").and_then(|v| v.as_str()) != Some(FORMAT) {
            return Err(ArtifactError::Format("missing or wrong format tag".into()));
        }
        // The version is checked before the rest of the shape so that other
        // versions are reported as such, whatever their layout.
        let version = obj
            .get("version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| ArtifactError::Format("missing version".into()))?;
        if version != u64::from(FORMAT_VERSION) {
            return Err(ArtifactError::Version { found: u32::try_from(version).unwrap_or(u32::MAX) });
        }
        let env: ArtifactEnvelope = serde_json::from_value(raw).map_err(|e| ArtifactError::Format(e.to_string()))?;
        let computed = payload_digest(&env.payload);
        if computed != env.digest {
            return Err(ArtifactError::Digest { recorded: env.digest, computed });
        }
        Ok(env)
    }

    /// Parse, validate and decode a payload of the expected kind.
    pub fn open<T: DeserializeOwned>(text: &str, expected: ArtifactKind) -> Result<T, ArtifactError> {
        let env = ArtifactEnvelope::parse(text)?;
        if env.kind != expected {
            return Err(ArtifactError::Kind { expected, found: env.kind });
        }
        serde_json::from_value(env.payload).map_err(|e| ArtifactError::Payload { kind: expected, msg: e.to_string() })
    }
}

pub fn write_artifact<T: Serialize>(path: &Path, kind: ArtifactKind, payload: &T) -> Result<(), ArtifactError> {
    std::fs::write(path, ArtifactEnvelope::seal(kind, payload).to_json())
        .map_err(|source| ArtifactError::Io { path: path.display().to_string(), source })
}

pub fn read_artifact<T: DeserializeOwned>(path: &Path, kind: ArtifactKind) -> Result<T, ArtifactError> {
    let text = std::fs::read_to_string(path).map_err(|source| ArtifactError::Io { path: path.display().to_string(), source })?;
    ArtifactEnvelope::open(&text, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Sample {
        name: String,
        values: Vec<u64>,
    }

    fn sample() -> Sample {
        Sample { name: "x".into(), values: vec![1, 2, 3] }
    }

    #[test]
    fn round_trip() {
        let text = ArtifactEnvelope::seal(ArtifactKind::Report, &sample()).to_json();
        let back: Sample = ArtifactEnvelope::open(&text, ArtifactKind::Report).unwrap();
        assert_eq!(back, sample());
    }

    #[test]
    fn tampering_is_detected() {
        let text = ArtifactEnvelope::seal(ArtifactKind::Report, &sample()).to_json();
        let bad = text.replace("\"x\"", "\"y\"");
        assert!(matches!(ArtifactEnvelope::parse(&bad), Err(ArtifactError::Digest { .. })));
    }

    #[test]
    fn other_versions_are_rejected() {
        let mut env = ArtifactEnvelope::seal(ArtifactKind::Tower, &sample());
        env.version = 2;
        assert!(matches!(ArtifactEnvelope::parse(&env.to_json()), Err(ArtifactError::Version { found: 2 })));
        // Even when the rest of the layout is unrecognizable.
        let text = format!(r#"{{"format":"{FORMAT}","version":7,"body":[]}}"#);
        assert!(matches!(ArtifactEnvelope::parse(&text), Err(ArtifactError::Version { found: 7 })));
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let text = ArtifactEnvelope::seal(ArtifactKind::Proof, &sample()).to_json();
        let r: Result<Sample, _> = ArtifactEnvelope::open(&text, ArtifactKind::Tower);
        assert!(matches!(r, Err(ArtifactError::Kind { .. })));
    }

    #[test]
    fn digest_ignores_key_order() {
        let a: serde_json::Value = serde_json::from_str(r#"{"a":1,"b":2}"#).unwrap();
        let b: serde_json::Value = serde_json::from_str(r#"{"b":2,"a":1}"#).unwrap();
        assert_eq!(payload_digest(&a), payload_digest(&b));
    }
}
