use crate::report::RunReport;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

/// Cache directory: COPRIME_CACHE_DIR if set, else ./.cache.
pub fn cache_dir() -> PathBuf {
    match std::env::var_os("COPRIME_CACHE_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(".cache"),
    }
}

/// Content address of a canonical request string.
pub fn key(canonical_request: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(canonical_request.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

/// Returns the stored report if present, parseable, and from this tool
/// version; anything else is treated as a miss (with a warning when the
/// file exists but is unusable).
pub fn lookup(dir: &Path, key: &str, tool_version: &str) -> Option<RunReport> {
    let path = entry_path(dir, key);
    let text = fs::read_to_string(&path).ok()?;
    match serde_json::from_str::<RunReport>(&text) {
        Ok(report) if report.tool_version == tool_version => Some(report),
        Ok(_) => None, // stale version
        Err(e) => {
            eprintln!(
                "warning: ignoring corrupted cache entry {}: {e}",
                path.display()
            );
            None
        }
    }
}

/// Best-effort atomic store: write a temp file, then rename. Failures only
/// warn — the computation result has already been produced.
pub fn store(dir: &Path, key: &str, report: &RunReport) {
    if let Err(e) = fs::create_dir_all(dir) {
        eprintln!("warning: cannot create cache dir {}: {e}", dir.display());
        return;
    }
    let tmp = dir.join(format!("{key}.json.tmp.{}", std::process::id()));
    let text = match serde_json::to_string_pretty(report) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("warning: cannot serialize cache entry: {e}");
            return;
        }
    };
    if let Err(e) = fs::write(&tmp, text) {
        eprintln!("warning: cannot write cache entry {}: {e}", tmp.display());
        return;
    }
    if let Err(e) = fs::rename(&tmp, entry_path(dir, key)) {
        eprintln!("warning: cannot finalize cache entry: {e}");
        let _ = fs::remove_file(&tmp);
    }
}
