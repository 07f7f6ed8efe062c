use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use cubicl::{FieldTower, TOOL_VERSION};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cache::CacheStatus;

/// Primary output of a command. `stable` is the same content with timing
/// removed, and is what the checksum covers.
pub struct Rendered {
    pub body: String,
    pub stable: Option<String>,
}

impl Rendered {
    pub fn plain(body: String) -> Rendered {
        Rendered { body, stable: None }
    }
}

#[derive(Serialize)]
pub struct TowerInfo {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    pub moduli: String,
    pub omega_image: String,
}

impl TowerInfo {
    pub fn of(t: &FieldTower) -> TowerInfo {
        TowerInfo {
            p: t.p(),
            k: t.k(),
            q: t.q(),
            moduli: t.moduli_description(),
            omega_image: t.format_elem(t.omega_image()),
        }
    }
}

#[derive(Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub tower: TowerInfo,
    pub command_line: Vec<String>,
    pub threads: usize,
    pub cutoffs: serde_json::Value,
    pub family_cache: CacheStatus,
    pub runtime_ms: u64,
    pub output_sha256: String,
}

pub fn sha256_hex(s: &str) -> String {
    Sha256::digest(s.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Writes the output to `out` (or stdout) and the manifest next to it (or to stderr).
pub fn emit(out: Option<&Path>, rendered: &Rendered, manifest: &RunManifest) -> anyhow::Result<()> {
    let m = serde_json::to_string_pretty(manifest)? + "\n";
    match out {
        Some(path) => {
            fs::write(path, &rendered.body)?;
            fs::write(manifest_path(path), m)?;
        }
        None => {
            std::io::stdout().write_all(rendered.body.as_bytes())?;
            std::io::stderr().write_all(m.as_bytes())?;
        }
    }
    Ok(())
}

pub fn checksum(rendered: &Rendered) -> String {
    sha256_hex(rendered.stable.as_deref().unwrap_or(&rendered.body))
}

pub fn tool_version() -> String {
    TOOL_VERSION.to_string()
}
