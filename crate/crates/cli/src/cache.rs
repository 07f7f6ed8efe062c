//! On-disk family cache, enabled by `CUBICL_CACHE_DIR`.

use std::fs;
use std::path::PathBuf;

use cubicl::family::enumerate_family;
use cubicl::{Family, FieldTower, TOOL_VERSION};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "CUBICL_CACHE_DIR";

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    q: u32,
    g: u32,
    tower_moduli: String,
    tool_version: String,
    family: Family,
}

fn entry_path(dir: &std::path::Path, t: &FieldTower, g: u32) -> PathBuf {
    let digest = Sha256::digest(t.moduli_description().as_bytes());
    let tag: String = digest.iter().take(6).map(|b| format!("{b:02x}")).collect();
    dir.join(format!("family-q{}-g{}-{}-v{}.json", t.q(), g, tag, TOOL_VERSION))
}

/// The family of genus `g`, read from the cache when a matching entry exists.
pub fn family(t: &FieldTower, g: u32) -> anyhow::Result<(Family, CacheStatus)> {
    let Some(dir) = std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty()).map(PathBuf::from) else {
        return Ok((enumerate_family(t, g)?, CacheStatus::Disabled));
    };
    let path = entry_path(&dir, t, g);
    if let Ok(bytes) = fs::read(&path) {
        if let Ok(e) = serde_json::from_slice::<Entry>(&bytes) {
            if e.q == t.q() && e.g == g && e.tower_moduli == t.moduli_description() && e.tool_version == TOOL_VERSION {
                return Ok((e.family, CacheStatus::Hit));
            }
        }
    }
    let family = enumerate_family(t, g)?;
    let entry = Entry { q: t.q(), g, tower_moduli: t.moduli_description(), tool_version: TOOL_VERSION.into(), family };
    fs::create_dir_all(&dir)?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_vec(&entry)?)?;
    fs::rename(&tmp, &path)?;
    Ok((entry.family, CacheStatus::Miss))
}
