//! JSON serialization of resolutions for the on-disk cache.

use serde::{Deserialize, Serialize};

use super::FreeResolution;
use crate::error::{Error, Result};
use crate::f2linalg::BitVector;
use crate::gradedmod::GradedModule;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub format_version: u32,
    pub module_hash: String,
    pub s_max: u32,
    pub t_max: i32,
}

#[derive(Serialize, Deserialize)]
struct CachedLevel {
    degrees: Vec<i32>,
    differentials: Vec<BitVector>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    header: CacheHeader,
    module: serde_json::Value,
    levels: Vec<CachedLevel>,
}

impl FreeResolution {
    pub fn cache_header(&self) -> CacheHeader {
        CacheHeader {
            format_version: FORMAT_VERSION,
            module_hash: self.module.content_hash(),
            s_max: self.s_max,
            t_max: self.t_max,
        }
    }

    /// File name under which this resolution is cached.
    pub fn cache_file_name(module: &GradedModule, s_max: u32, t_max: i32) -> String {
        format!("{}_s{}_t{}.json", module.content_hash(), s_max, t_max)
    }

    pub fn to_cache_json(&self) -> String {
        let file = CacheFile {
            header: self.cache_header(),
            module: serde_json::from_str(&self.module.to_json()).expect("module JSON is valid"),
            levels: self
                .level_data()
                .iter()
                .map(|l| CachedLevel {
                    degrees: l.degrees.clone(),
                    differentials: l.d.clone(),
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("resolution serialization cannot fail")
    }

    /// Loads a cached resolution, checking that it was computed for `module`
    /// with the requested bounds. Any mismatch is an error.
    pub fn from_cache_json(s: &str, module: &GradedModule, s_max: u32, t_max: i32) -> Result<FreeResolution> {
        let file: CacheFile = serde_json::from_str(s)?;
        let want = CacheHeader {
            format_version: FORMAT_VERSION,
            module_hash: module.content_hash(),
            s_max,
            t_max,
        };
        if file.header != want {
            return Err(Error::Parse(format!(
                "cache header {:?} does not match {:?}",
                file.header, want
            )));
        }
        let stored = GradedModule::from_json(&file.module.to_string())?;
        if stored.content_hash() != want.module_hash {
            return Err(Error::Parse("cached module does not match its hash".into()));
        }
        let levels = file
            .levels
            .into_iter()
            .map(|l| (l.degrees, l.differentials))
            .collect();
        let res = FreeResolution::from_parts(stored, s_max, t_max, levels)?;
        res.check_d_squared()
            .map_err(|e| Error::Parse(format!("cached resolution is inconsistent: {e}")))?;
        Ok(res)
    }
}
