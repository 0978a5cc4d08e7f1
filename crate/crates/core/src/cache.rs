//! Disk cache for character tables, keyed by a hash of the multiplication
//! table. Reuse is bit-exact: tables round-trip through JSON with full f64
//! precision.

use crate::group::{ConjugacyData, FiniteGroup};
use crate::rep::{character_table_seeded, CharacterTable, RepError};
use std::path::Path;

pub const DEFAULT_CACHE_DIR: &str = ".doublecat-cache";

/// FNV-1a over the multiplication table bytes.
pub fn table_key(group: &FiniteGroup) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    let mut eat = |v: u64| {
        for b in v.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    eat(group.order() as u64);
    for a in group.elements() {
        for b in group.elements() {
            eat(group.mul(a, b) as u64);
        }
    }
    h
}

pub fn load(dir: &Path, group: &FiniteGroup) -> Option<CharacterTable> {
    let path = dir.join(format!("table-{:016x}.json", table_key(group)));
    let bytes = std::fs::read(path).ok()?;
    serde_json::from_slice(&bytes).ok()
}

pub fn store(dir: &Path, group: &FiniteGroup, table: &CharacterTable) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("table-{:016x}.json", table_key(group)));
    std::fs::write(path, serde_json::to_vec(table).expect("table serializes"))
}

/// Compute a character table, consulting and populating the cache when a
/// directory is given. Cache misses and hits produce identical tables.
pub fn character_table_cached(
    group: &FiniteGroup,
    conj: &ConjugacyData,
    seed: u64,
    dir: Option<&Path>,
) -> Result<CharacterTable, RepError> {
    if let Some(dir) = dir {
        if let Some(table) = load(dir, group) {
            return Ok(table);
        }
    }
    let table = character_table_seeded(group, conj, seed)?;
    if let Some(dir) = dir {
        let _ = store(dir, group, &table);
    }
    Ok(table)
}
