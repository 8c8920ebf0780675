//! On-disk JSON cache for balls, complex slices and building balls.
//!
//! Entries are keyed by the system's content hash, the radius and the
//! cellulation (or `q`), plus a format version; a version bump invalidates
//! every entry. Writes go through a temporary file and a rename.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::building::{build_building_ball, BuildingData, BuildingSlice};
use crate::coxeter::{Ball, CoxeterSystem};
use crate::davis::{Cellulation, ComplexSlice, SliceData};
use crate::Result;

pub const FORMAT_VERSION: u32 = 1;
/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "L2COX_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    version: u32,
    system_hash: String,
    payload: T,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    /// Cache in `$L2COX_CACHE_DIR`, if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Cache::new(dir).map(Some),
            _ => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, kind: &str, hash: &str, params: &str) -> PathBuf {
        self.dir.join(format!("{kind}-{hash}-{params}-v{FORMAT_VERSION}.json"))
    }

    fn load<T: DeserializeOwned>(&self, path: &Path, hash: &str) -> Option<T> {
        let text = fs::read_to_string(path).ok()?;
        match serde_json::from_str::<Envelope<T>>(&text) {
            Ok(env) if env.version == FORMAT_VERSION && env.system_hash == hash => Some(env.payload),
            Ok(_) => None,
            Err(e) => {
                log::warn!("ignoring unreadable cache entry {}: {e}", path.display());
                None
            }
        }
    }

    fn store<T: Serialize>(&self, path: &Path, hash: &str, payload: &T) -> Result<()> {
        let env = Envelope { version: FORMAT_VERSION, system_hash: hash.to_string(), payload };
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&env)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn ball(&self, system: &CoxeterSystem, radius: usize) -> Result<Ball> {
        let hash = system.content_hash();
        let path = self.path("ball", &hash, &format!("r{radius}"));
        if let Some(mut ball) = self.load::<Ball>(&path, &hash) {
            ball.reindex();
            return Ok(ball);
        }
        let ball = system.enumerate_ball(radius)?;
        self.store(&path, &hash, &ball)?;
        Ok(ball)
    }

    pub fn slice(&self, system: &CoxeterSystem, cellulation: Cellulation, radius: usize) -> Result<ComplexSlice> {
        let hash = system.content_hash();
        let path = self.path("slice", &hash, &format!("{cellulation}-r{radius}"));
        if let Some(data) = self.load::<SliceData>(&path, &hash) {
            return ComplexSlice::from_data(system, data);
        }
        let slice = ComplexSlice::build(system, cellulation, radius)?;
        self.store(&path, &hash, slice.data())?;
        Ok(slice)
    }

    pub fn building(&self, system: &CoxeterSystem, q: u32, radius: usize) -> Result<BuildingSlice> {
        let hash = system.content_hash();
        let path = self.path("building", &hash, &format!("q{q}-r{radius}"));
        if let Some(data) = self.load::<BuildingData>(&path, &hash) {
            return BuildingSlice::from_data(system, data);
        }
        let b = build_building_ball(system, q, radius)?;
        self.store(&path, &hash, b.data())?;
        Ok(b)
    }
}

/// Builds through the cache when one is given.
pub fn slice_with(cache: Option<&Cache>, system: &CoxeterSystem, cellulation: Cellulation, radius: usize) -> Result<ComplexSlice> {
    match cache {
        Some(c) => c.slice(system, cellulation, radius),
        None => ComplexSlice::build(system, cellulation, radius),
    }
}

pub fn building_with(cache: Option<&Cache>, system: &CoxeterSystem, q: u32, radius: usize) -> Result<BuildingSlice> {
    match cache {
        Some(c) => c.building(system, q, radius),
        None => build_building_ball(system, q, radius),
    }
}
