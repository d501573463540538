//! Run directories, metadata and CSV writing.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Map, Value};
use wilton_core::resonance::resonance_cutoff;
use wilton_core::spectra::bound_constant;

use crate::config::RunConfig;

/// Float formatting shared by all CSV files: 17 significant digits.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comma-separated CSV built row by row.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { text: format!("{}\n", header.join(",")) }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// One command's output directory plus the metadata it accumulates.
pub struct Run {
    pub dir: PathBuf,
    started: Instant,
    meta: Map<String, Value>,
}

impl Run {
    /// Create `<out>/<cmd>_<timestamp>`, suffixed `_1`, `_2`, ... if taken.
    pub fn create(out: &Path, cmd: &str, cfg: &RunConfig, text: Option<&str>) -> std::io::Result<Self> {
        fs::create_dir_all(out)?;
        let now = chrono::Local::now();
        let base = format!("{cmd}_{}", now.format("%Y%m%d-%H%M%S"));
        let mut dir = out.join(&base);
        let mut n = 1;
        loop {
            match fs::create_dir(&dir) {
                Ok(()) => break,
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    dir = out.join(format!("{base}_{n}"));
                    n += 1;
                }
                Err(e) => return Err(e),
            }
        }
        let mut meta = Map::new();
        meta.insert("command".into(), json!(cmd));
        meta.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        meta.insert("started".into(), json!(now.to_rfc3339()));
        meta.insert("config".into(), serde_json::to_value(cfg).unwrap_or(Value::Null));
        if let Some(t) = text {
            meta.insert("config_text".into(), json!(t));
        }
        meta.insert("resonance_tol".into(), json!(cfg.resonance.tol));
        meta.insert("dno_order".into(), json!({ "ww": cfg.ww.dno_order, "lifespan": cfg.lifespan.dno_order }));
        if let Ok(p) = cfg.physical() {
            meta.insert(
                "constants".into(),
                json!({ "bound_constant": bound_constant(&p), "resonance_cutoff": resonance_cutoff(&p) }),
            );
        }
        Ok(Self { dir, started: Instant::now(), meta })
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.meta.insert(key.into(), v);
    }

    pub fn write(&self, name: &str, contents: &str) -> std::io::Result<()> {
        fs::write(self.dir.join(name), contents)
    }

    /// Write `metadata.json` with the final status and wall time.
    pub fn finish(mut self, status: &str) -> std::io::Result<PathBuf> {
        self.meta.insert("status".into(), json!(status));
        self.meta.insert("wall_time_s".into(), json!(self.started.elapsed().as_secs_f64()));
        let text = serde_json::to_string_pretty(&Value::Object(self.meta)).unwrap_or_default();
        fs::write(self.dir.join("metadata.json"), text + "\n")?;
        Ok(self.dir)
    }
}
