//! Optional key=value configuration files and the small range/list parsers
//! shared by the subcommands.

use metafunc_core::crossbreed::Scheme;
use metafunc_core::ladder::OmegaVariant;
use std::path::Path;

/// Values read from a `key=value` file; every flag overrides its entry.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    pub l: Option<u32>,
    pub u: Option<f64>,
    pub omega: Option<OmegaVariant>,
    pub k2: Option<f64>,
    pub p: Option<i32>,
    pub scheme: Option<Scheme>,
    pub m: Option<String>,
    pub n: Option<String>,
    pub cells: Option<String>,
    pub tol: Option<f64>,
    pub jobs: Option<usize>,
    pub format: Option<super::Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| format!("reading {}: {e}", path.display()))?;
        let mut cfg = FileConfig::default();
        for (idx, line) in raw.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), idx + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| format!("{}:{}: bad {what}: {value}", path.display(), idx + 1);
            match key {
                "L" => cfg.l = Some(value.parse().map_err(|_| bad("L"))?),
                "U" => cfg.u = Some(value.parse().map_err(|_| bad("U"))?),
                "omega" => {
                    cfg.omega = Some(match value {
                        "leading" => OmegaVariant::LeadingLog,
                        "calibrated" => OmegaVariant::Calibrated,
                        _ => return Err(bad("omega")),
                    })
                }
                "k2" => cfg.k2 = Some(value.parse().map_err(|_| bad("k2"))?),
                "p" => cfg.p = Some(value.parse().map_err(|_| bad("p"))?),
                "scheme" => {
                    cfg.scheme = Some(match value {
                        "simple" => Scheme::Simple,
                        "cyclic" => Scheme::Cyclic,
                        _ => return Err(bad("scheme")),
                    })
                }
                "m" => cfg.m = Some(value.to_string()),
                "n" => cfg.n = Some(value.to_string()),
                "cells" => cfg.cells = Some(value.to_string()),
                "tol" => cfg.tol = Some(value.parse().map_err(|_| bad("tol"))?),
                "jobs" => cfg.jobs = Some(value.parse().map_err(|_| bad("jobs"))?),
                "format" => {
                    cfg.format = Some(match value {
                        "text" => super::Format::Text,
                        "json" => super::Format::Json,
                        "csv" => super::Format::Csv,
                        "latex" => super::Format::Latex,
                        _ => return Err(bad("format")),
                    })
                }
                _ => return Err(format!("{}:{}: unknown key {key}", path.display(), idx + 1)),
            }
        }
        Ok(cfg)
    }
}

/// Inclusive range "A..B", or a single index "A".
pub fn parse_range(spec: &str) -> Result<Vec<u32>, String> {
    let bad = || format!("bad range: {spec} (expected A..B)");
    let (a, b) = match spec.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (spec.trim(), spec.trim()),
    };
    let a: u32 = a.parse().map_err(|_| bad())?;
    let b: u32 = b.parse().map_err(|_| bad())?;
    if a == 0 || b < a {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

/// Comma-separated cell list "0,1,2".
pub fn parse_cells(spec: &str) -> Result<Vec<u32>, String> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad cell list: {spec}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_range("7").unwrap(), vec![7]);
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("x..2").is_err());
    }

    #[test]
    fn cells() {
        assert_eq!(parse_cells("0,1").unwrap(), vec![0, 1]);
        assert!(parse_cells("0,x").is_err());
    }

    #[test]
    fn config_file_round_trip() {
        let dir = std::env::temp_dir().join("metafunc-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(
            &path,
            "# comment\nL = 60\nU=0.8\nomega=leading\nscheme=cyclic\nn=1..4\n",
        )
        .unwrap();
        let cfg = FileConfig::load(&path).unwrap();
        assert_eq!(cfg.l, Some(60));
        assert_eq!(cfg.u, Some(0.8));
        assert_eq!(cfg.omega, Some(OmegaVariant::LeadingLog));
        assert_eq!(cfg.scheme, Some(Scheme::Cyclic));
        assert_eq!(cfg.n.as_deref(), Some("1..4"));
        assert!(FileConfig::load(&dir.join("missing.conf")).is_err());
        std::fs::write(&path, "bogus=1\n").unwrap();
        assert!(FileConfig::load(&path).is_err());
    }
}
