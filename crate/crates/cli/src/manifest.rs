//! Run manifests: every invocation records its command line, seed, resolved
//! parameters and input digests; the digest over those is embedded in every
//! output file, so identical `(argv, seed)` reproduce byte-identical outputs
//! while the sidecar manifest carries the wall clock and output hashes.

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::path::Path;
use std::time::Instant;

#[derive(Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub seed: Option<u64>,
    pub params: Value,
    pub inputs: Vec<FileDigest>,
    /// sha256 over (command, seed, params, inputs); embedded in outputs
    pub digest: String,
    pub outputs: Vec<FileDigest>,
    pub wall_clock_ms: u128,
    pub version: String,
}

pub struct Runner {
    command: String,
    seed: Option<u64>,
    params: Value,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    start: Instant,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    hex::encode(h.finalize())
}

impl Runner {
    pub fn new() -> Self {
        let command = std::env::args().collect::<Vec<_>>().join(" ");
        Runner {
            command,
            seed: None,
            params: Value::Null,
            inputs: Vec::new(),
            outputs: Vec::new(),
            start: Instant::now(),
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    pub fn set_params<T: Serialize>(&mut self, params: &T) -> Result<()> {
        self.params = serde_json::to_value(params)?;
        Ok(())
    }

    /// Read and parse a JSON input, recording its digest. Parse failures
    /// carry line/column diagnostics and map to the usage exit code.
    pub fn read_json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let bytes = std::fs::read(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        self.inputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        serde_json::from_slice(&bytes).map_err(|e| {
            anyhow::anyhow!(
                "malformed JSON at {}:{}:{}: {}",
                path.display(),
                e.line(),
                e.column(),
                e
            )
        })
    }

    pub fn digest(&self) -> String {
        let key = serde_json::json!({
            "command": self.command,
            "seed": self.seed,
            "params": self.params,
            "inputs": self.inputs.iter().map(|f| (&f.path, &f.sha256)).collect::<Vec<_>>(),
        });
        sha256_hex(key.to_string().as_bytes())
    }

    /// Write a JSON output with the manifest digest injected.
    pub fn write_output(&mut self, path: &Path, mut value: Value) -> Result<()> {
        if let Some(obj) = value.as_object_mut() {
            obj.insert("manifest_digest".into(), Value::String(self.digest()));
        }
        let bytes = serde_json::to_vec_pretty(&value)?;
        std::fs::write(path, &bytes)
            .with_context(|| format!("cannot write {}", path.display()))?;
        self.outputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }

    /// Attach the digest to a report destined for stdout.
    pub fn stamp(&self, mut value: Value) -> Value {
        if let Some(obj) = value.as_object_mut() {
            obj.insert("manifest_digest".into(), Value::String(self.digest()));
        }
        value
    }

    /// Write the sidecar manifest next to the first output (if any).
    pub fn finish(self) -> Result<()> {
        let manifest = RunManifest {
            digest: self.digest(),
            command: self.command,
            seed: self.seed,
            params: self.params,
            inputs: self.inputs,
            outputs: self.outputs,
            wall_clock_ms: self.start.elapsed().as_millis(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        };
        if let Some(first) = manifest.outputs.first() {
            let path = format!("{}.manifest.json", first.path);
            std::fs::write(&path, serde_json::to_vec_pretty(&manifest)?)
                .with_context(|| format!("cannot write {path}"))?;
        }
        Ok(())
    }
}
