use std::path::PathBuf;

use log::{info, warn};
use mahowald_core::gradedmod::GradedModule;
use mahowald_core::resolution::{minimal_resolution, FreeResolution};
use mahowald_core::Result;

/// Resolutions on disk, keyed by module hash and bounds. The cache is advisory:
/// unreadable or inconsistent files are reported and recomputed.
pub struct ResolutionCache {
    dir: Option<PathBuf>,
}

impl ResolutionCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    pub fn resolve(&self, m: &GradedModule, s_max: u32, t_max: i32) -> Result<FreeResolution> {
        let Some(dir) = &self.dir else {
            return minimal_resolution(m, s_max, t_max);
        };
        let path = dir.join(FreeResolution::cache_file_name(m, s_max, t_max));
        match std::fs::read_to_string(&path) {
            Ok(text) => match FreeResolution::from_cache_json(&text, m, s_max, t_max) {
                Ok(r) => {
                    info!("cache hit {}", path.display());
                    return Ok(r);
                }
                Err(e) => warn!("ignoring cache file {}: {e}", path.display()),
            },
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => warn!("cannot read cache file {}: {e}", path.display()),
        }
        let r = minimal_resolution(m, s_max, t_max)?;
        if let Err(e) = self.store(&path, &r) {
            warn!("cannot write cache file {}: {e}", path.display());
        } else {
            info!("cached {}", path.display());
        }
        Ok(r)
    }

    fn store(&self, path: &std::path::Path, r: &FreeResolution) -> std::io::Result<()> {
        let dir = path.parent().expect("cache files live in a directory");
        std::fs::create_dir_all(dir)?;
        // write then rename so readers never see a partial file
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, r.to_cache_json())?;
        std::fs::rename(&tmp, path)
    }
}
