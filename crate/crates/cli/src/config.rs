//! Experiment configuration: flags over a key = value file over defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use holonomy_core::disk::DiskFamily;
use serde::Serialize;

/// Options shared by every command. Unset flags fall back to the config file,
/// then to the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Dimension n of H^n (2..=4).
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Subdivision depth (0..=4).
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// geodesic-disk, tilted-geodesic-disk or bumped-disk.
    #[arg(long, global = true)]
    pub disk: Option<String>,
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    #[arg(long, global = true)]
    pub amplitude: Option<f64>,
    #[arg(long, global = true)]
    pub frequency: Option<f64>,
    #[arg(long, global = true)]
    pub tilt: Option<f64>,
    /// Integrator step.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Tolerance of the adaptive boundary lift.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output directory; reports go to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// +1 or -1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub orientation: Option<i8>,
    /// key = value file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Acceptance limits used to set the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Limits {
    pub holonomy_distance: f64,
    pub construction_residual: f64,
    pub area_gap: f64,
    pub holonomy_gap: f64,
    pub psi_gap: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Self { holonomy_distance: 1e-6, construction_residual: 1e-9, area_gap: 0.02, holonomy_gap: 1e-2, psi_gap: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub dim: usize,
    pub depth: usize,
    pub disk: DiskFamily,
    pub step: f64,
    pub tol: f64,
    pub quadrature: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub orientation: i8,
    pub limits: Limits,
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
        let v = v.trim().trim_matches('"');
        map.insert(k.trim().replace('_', "-"), v.to_string());
    }
    Ok(map)
}

const KEYS: &[&str] = &[
    "dim",
    "depth",
    "disk",
    "radius",
    "amplitude",
    "frequency",
    "tilt",
    "step",
    "tol",
    "quadrature",
    "out",
    "seed",
    "orientation",
    "max-holonomy-distance",
    "max-construction-residual",
    "max-area-gap",
    "max-holonomy-gap",
    "max-psi-gap",
];

struct Source<'a> {
    file: &'a BTreeMap<String, String>,
}

impl Source<'_> {
    fn get<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.get(key) {
            Some(s) => s.parse().map_err(|_| format!("invalid value {s:?} for {key}")),
            None => Ok(default),
        }
    }
}

impl ExperimentConfig {
    pub fn resolve(command: &str, o: &Overrides) -> Result<Self, String> {
        let file = match &o.config {
            Some(p) => read_config_file(p)?,
            None => BTreeMap::new(),
        };
        if let Some(k) = file.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(format!("unknown config key {k:?}"));
        }
        let src = Source { file: &file };
        let name = src.get(o.disk.clone(), "disk", "geodesic-disk".to_string())?;
        let radius = src.get(o.radius, "radius", 0.8)?;
        let disk = match name.as_str() {
            "geodesic-disk" => DiskFamily::GeodesicDisk { radius },
            "tilted-geodesic-disk" => DiskFamily::TiltedGeodesicDisk { radius, tilt: src.get(o.tilt, "tilt", 0.5)? },
            "bumped-disk" => DiskFamily::BumpedDisk {
                radius,
                amplitude: src.get(o.amplitude, "amplitude", 0.3)?,
                frequency: src.get(o.frequency, "frequency", 1.0)?,
            },
            other => return Err(format!("unknown disk family {other:?}")),
        };
        let default_dim = if disk.in_standard_slice() { 2 } else { 3 };
        let d = Limits::default();
        let cfg = Self {
            command: command.to_string(),
            dim: src.get(o.dim, "dim", default_dim)?,
            depth: src.get(o.depth, "depth", 3)?,
            disk,
            step: src.get(o.step, "step", 1e-3)?,
            tol: src.get(o.tol, "tol", 1e-10)?,
            quadrature: src.get(None, "quadrature", 96)?,
            out: match &o.out {
                Some(p) => Some(p.clone()),
                None => file.get("out").map(PathBuf::from),
            },
            seed: match o.seed {
                Some(s) => Some(s),
                None => file.get("seed").map(|s| s.parse().map_err(|_| format!("invalid seed {s:?}"))).transpose()?,
            },
            orientation: src.get(o.orientation, "orientation", 1)?,
            limits: Limits {
                holonomy_distance: src.get(None, "max-holonomy-distance", d.holonomy_distance)?,
                construction_residual: src.get(None, "max-construction-residual", d.construction_residual)?,
                area_gap: src.get(None, "max-area-gap", d.area_gap)?,
                holonomy_gap: src.get(None, "max-holonomy-gap", d.holonomy_gap)?,
                psi_gap: src.get(None, "max-psi-gap", d.psi_gap)?,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(2..=4).contains(&self.dim) {
            return Err(format!("dimension must be in 2..=4, got {}", self.dim));
        }
        if self.depth > holonomy_core::subdivision::MAX_STEP {
            return Err(format!("depth must be at most {}, got {}", holonomy_core::subdivision::MAX_STEP, self.depth));
        }
        if self.orientation != 1 && self.orientation != -1 {
            return Err(format!("orientation must be 1 or -1, got {}", self.orientation));
        }
        let l = &self.limits;
        let positive = [
            ("step", self.step),
            ("tol", self.tol),
            ("max-holonomy-distance", l.holonomy_distance),
            ("max-construction-residual", l.construction_residual),
            ("max-area-gap", l.area_gap),
            ("max-holonomy-gap", l.holonomy_gap),
            ("max-psi-gap", l.psi_gap),
        ];
        if let Some((k, v)) = positive.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return Err(format!("{k} must be positive, got {v}"));
        }
        if self.quadrature < 4 {
            return Err(format!("quadrature must be at least 4, got {}", self.quadrature));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# run\ndisk = bumped-disk\ndepth = 2\nradius = 0.5\nmax_area_gap = 0.1\n").unwrap();
        let o = Overrides { depth: Some(1), config: Some(path), ..Default::default() };
        let c = ExperimentConfig::resolve("theorem", &o).unwrap();
        assert_eq!(c.depth, 1);
        assert_eq!(c.dim, 3);
        assert_eq!(c.disk, DiskFamily::BumpedDisk { radius: 0.5, amplitude: 0.3, frequency: 1.0 });
        assert_eq!(c.limits.area_gap, 0.1);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = |o: Overrides| ExperimentConfig::resolve("theorem", &o).is_err();
        assert!(bad(Overrides { depth: Some(5), ..Default::default() }));
        assert!(bad(Overrides { dim: Some(1), ..Default::default() }));
        assert!(bad(Overrides { step: Some(0.0), ..Default::default() }));
        assert!(bad(Overrides { orientation: Some(2), ..Default::default() }));
        assert!(bad(Overrides { disk: Some("cube".into()), ..Default::default() }));
        assert!(parse_config("depth 3").is_err());
    }
}
