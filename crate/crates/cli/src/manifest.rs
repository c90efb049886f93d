//! Reproducibility metadata attached to every run.
//!
//! The comment header written into output files is a pure function of
//! (subcommand, argv, seed, version) so identical invocations produce
//! byte-identical files; the wall-clock duration is only reported on stderr.

use std::time::Instant;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub version: &'static str,
}

impl RunManifest {
    pub fn new(subcommand: &str, seed: Option<u64>) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            args: std::env::args().skip(1).collect(),
            seed,
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    /// `#`-prefixed header lines embedded at the top of output files.
    pub fn comment_header(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# lacunary v{}\n", self.version));
        s.push_str(&format!("# subcommand: {}\n", self.subcommand));
        s.push_str(&format!("# args: {}\n", self.args.join(" ")));
        if let Some(seed) = self.seed {
            s.push_str(&format!("# seed: {seed}\n"));
        }
        s
    }

    /// Full manifest (with duration) as one JSON line on stderr.
    pub fn emit_stderr(&self, started: Instant) {
        let mut v = serde_json::to_value(self).expect("manifest serializes");
        v["duration_ms"] = serde_json::json!(started.elapsed().as_millis() as u64);
        eprintln!("{v}");
    }
}
