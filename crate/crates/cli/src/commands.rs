//! The experiment commands. Each returns a report and whether its
//! acceptance checks passed.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use holonomy_core::curves::{theorem_check, TheoremOptions, TheoremReport};
use holonomy_core::hyperbolic::{totally_geodesic_triangle, HPoint};
use holonomy_core::lift::{horizontal_lift, polygon_loop};
use holonomy_core::lorentz::{max_abs, psi};
use holonomy_core::path::section;
use holonomy_core::subdivision::{build_level, verify_properties, ExportedTriangle, PropertyReport};
use log::info;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::ExperimentConfig;

/// A failed precondition; mapped to exit code 2.
#[derive(Debug)]
pub struct Invalid(pub String);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

pub struct Outcome {
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: Option<f64>,
    pub passed: bool,
}

fn check(name: &str, value: f64, limit: f64) -> Check {
    Check { name: name.into(), value, limit: Some(limit), passed: value <= limit }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Writes `text` to `out/name`, or to stdout without an output directory.
fn emit(cfg: &ExperimentConfig, name: &str, text: &str) -> Result<()> {
    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            let path = dir.join(name);
            fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
            info!("wrote {}", path.display());
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `x1,y1;x2,y2;x3,y3` (slice coordinates of the three vertices).
pub fn parse_vertices(s: &str) -> Result<[[f64; 2]; 3], Invalid> {
    let bad = || Invalid(format!("--vertices expects x1,y1;x2,y2;x3,y3, got {s:?}"));
    let pts: Vec<[f64; 2]> = s
        .split(';')
        .map(|p| {
            let v: Vec<f64> = p.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
            <[f64; 2]>::try_from(v).map_err(|_| bad())
        })
        .collect::<Result<_, _>>()?;
    pts.try_into().map_err(|_| bad())
}

fn slice_point(dim: usize, xy: [f64; 2]) -> HPoint {
    let mut w = vec![0.0; dim];
    w[0] = xy[0];
    w[1] = xy[1];
    HPoint::from_spatial(&w)
}

/// Vertices within hyperbolic distance 1 of the origin of the slice.
fn random_vertices(seed: u64) -> [[f64; 2]; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::array::from_fn(|_| {
        let r = rng.random::<f64>().sqrt().sinh();
        let th = rng.random_range(0.0..2.0 * PI);
        [r * th.cos(), r * th.sin()]
    })
}

#[derive(Debug, Serialize)]
struct TriangleReport {
    vertices: [[f64; 2]; 3],
    dim: usize,
    step: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: i8,
    area: f64,
    numeric_holonomy: Vec<Vec<f64>>,
    closed_form: Vec<Vec<f64>>,
    distance: f64,
    check: Check,
}

pub const DEFAULT_VERTICES: [[f64; 2]; 3] = [[0.0, 0.0], [0.2, 0.7], [0.8, 0.0]];

pub fn triangle_holonomy(cfg: &ExperimentConfig, vertices: Option<&str>) -> Result<Outcome> {
    let mut v = match (vertices, cfg.seed) {
        (Some(s), _) => parse_vertices(s)?,
        (None, Some(seed)) => random_vertices(seed),
        (None, None) => DEFAULT_VERTICES,
    };
    if cfg.orientation < 0 {
        v.swap(1, 2);
    }
    let pts = v.map(|xy| slice_point(cfg.dim, xy));
    let invalid = |e: holonomy_core::Error| Invalid(format!("triangle {v:?}: {e}"));
    let tri = totally_geodesic_triangle(&pts[0], &pts[1], &pts[2]).map_err(invalid)?;
    let [a, b, g] = tri.vertex_angles().map_err(invalid)?;
    let delta: i8 = if a + b + g > 0.0 { 1 } else { -1 };
    let area = PI - (a + b + g).abs();
    let closed = psi(cfg.dim, f64::from(delta) * area);
    let base = section(&pts[0]);
    let lift = horizontal_lift(&polygon_loop(&pts)?, &base, cfg.step)?;
    let numeric = &base.inverse() * lift.endpoint();
    let distance = max_abs(&(numeric.mat() - closed.mat()));
    let c = check("holonomy distance", distance, cfg.limits.holonomy_distance);
    let passed = c.passed;
    let report = TriangleReport {
        vertices: v,
        dim: cfg.dim,
        step: cfg.step,
        alpha: a,
        beta: b,
        gamma: g,
        delta,
        area,
        numeric_holonomy: holonomy_core::curves::rows(numeric.mat()),
        closed_form: holonomy_core::curves::rows(closed.mat()),
        distance,
        check: c,
    };
    println!("alpha    {a:.12}");
    println!("beta     {b:.12}");
    println!("gamma    {g:.12}");
    println!("area     {area:.12}");
    println!("delta    {delta}");
    println!("numeric  {}", matrix_line(&report.numeric_holonomy));
    println!("closed   {}", matrix_line(&report.closed_form));
    println!("distance {distance:.3e} (limit {:.0e})", cfg.limits.holonomy_distance);
    if cfg.out.is_some() {
        emit(cfg, "triangle_holonomy.json", &json(&report)?)?;
    }
    Ok(Outcome { passed })
}

fn matrix_line(rows: &[Vec<f64>]) -> String {
    rows.iter()
        .map(|r| r.iter().map(|x| format!("{x:+.9}")).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(" | ")
}

#[derive(Debug, Serialize)]
struct LevelAudit {
    step: usize,
    triangles: usize,
    passed: bool,
    failures: PropertyReport,
}

#[derive(Debug, Serialize)]
struct AuditReport {
    depth: usize,
    orientation: i8,
    corrupted: Option<[usize; 2]>,
    levels: Vec<LevelAudit>,
    passed: bool,
    triangles: Vec<ExportedTriangle>,
}

pub fn subdivision_audit(cfg: &ExperimentConfig, corrupt_order: bool) -> Result<Outcome> {
    let mut levels = Vec::new();
    let mut last = None;
    let mut corrupted = None;
    for n in 0..=cfg.depth {
        let mut level = build_level(n, cfg.orientation)?;
        if corrupt_order && n == cfg.depth {
            if level.len() < 2 {
                return Err(Invalid("--corrupt-order needs depth >= 1".into()).into());
            }
            let (i, j) = (0, level.len() / 2);
            level = level.with_swapped(i, j);
            corrupted = Some([i, j]);
        }
        let report = verify_properties(&level);
        info!("step {n}: {} triangles, passed {}", level.len(), report.passed());
        levels.push(LevelAudit { step: n, triangles: level.len(), passed: report.passed(), failures: report });
        last = Some(level);
    }
    let passed = levels.iter().all(|l| l.passed);
    let report = AuditReport {
        depth: cfg.depth,
        orientation: cfg.orientation,
        corrupted,
        levels,
        passed,
        triangles: last.expect("at least one level").export(),
    };
    emit(cfg, "subdivision_audit.json", &json(&report)?)?;
    Ok(Outcome { passed })
}

#[derive(Debug, Serialize)]
struct TheoremSummary<'a> {
    config: &'a ExperimentConfig,
    report: &'a TheoremReport,
    checks: Vec<Check>,
    passed: bool,
}

/// Depth from which the absolute limits apply; shallower runs only check
/// the construction residual and monotonicity.
pub const LIMIT_DEPTH: usize = 3;

fn decreasing(name: &str, values: &[f64]) -> Option<Check> {
    if values.len() < 2 {
        return None;
    }
    let worst = values.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    Some(Check { name: name.into(), value: worst, limit: None, passed: worst < 0.0 })
}

fn theorem_checks(cfg: &ExperimentConfig, r: &TheoremReport) -> Vec<Check> {
    let l = &cfg.limits;
    let last = r.rows.last().expect("at least one row");
    let residual = r.rows.iter().map(|x| x.construction_residual).fold(0.0, f64::max);
    let mut out = vec![check("construction residual", residual, l.construction_residual)];
    let gaps: Vec<f64> = r.rows.iter().map(|x| x.holonomy_gap).collect();
    let cauchy: Vec<f64> = r.rows.iter().filter_map(|x| x.cauchy).collect();
    out.extend(decreasing("holonomy gap decreasing (largest step change)", &gaps));
    out.extend(decreasing("cauchy differences decreasing (largest step change)", &cauchy));
    if cfg.depth >= LIMIT_DEPTH {
        out.push(check("area gap", last.area_gap, l.area_gap));
        out.push(check("holonomy gap", last.holonomy_gap, l.holonomy_gap));
        if let Some(p) = last.psi_gap {
            out.push(check("psi gap", p, l.psi_gap));
        }
    }
    out
}

pub fn theorem(cfg: &ExperimentConfig) -> Result<Outcome> {
    let phi = cfg.disk.build(cfg.dim).map_err(|e| Invalid(format!("disk: {e}")))?;
    let opts = TheoremOptions { orientation: cfg.orientation, step: cfg.step, tol: cfg.tol, quadrature: cfg.quadrature };
    let n_min = cfg.depth.min(1);
    let in_slice = cfg.disk.in_standard_slice();
    let report = theorem_check(phi.as_ref(), n_min, cfg.depth, in_slice, &opts)?;
    let checks = theorem_checks(cfg, &report);
    let passed = checks.iter().all(|c| c.passed);
    for c in checks.iter().filter(|c| !c.passed) {
        match c.limit {
            Some(l) => log::warn!("{} = {:.3e} exceeds {l:.0e}", c.name, c.value),
            None => log::warn!("{} fails: largest change {:+.3e}", c.name, c.value),
        }
    }
    let summary = TheoremSummary { config: cfg, report: &report, checks, passed };
    match &cfg.out {
        Some(dir) => {
            write_table(&dir.join("convergence.csv"), &report, dir)?;
            emit(cfg, "summary.json", &json(&summary)?)?;
        }
        None => emit(cfg, "summary.json", &json(&summary)?)?,
    }
    Ok(Outcome { passed })
}

fn write_table(path: &Path, r: &TheoremReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    w.write_record([
        "n",
        "triangles",
        "pleated_area",
        "length",
        "construction_residual",
        "area_gap",
        "holonomy_gap",
        "cauchy",
        "psi_gap",
    ])?;
    let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
    for row in &r.rows {
        w.write_record([
            row.n.to_string(),
            row.triangles.to_string(),
            format!("{:e}", row.pleated_area),
            format!("{:e}", row.length),
            format!("{:e}", row.construction_residual),
            format!("{:e}", row.area_gap),
            format!("{:e}", row.holonomy_gap),
            opt(row.cauchy),
            opt(row.psi_gap),
        ])?;
    }
    w.flush()?;
    info!("wrote {}", path.display());
    Ok(())
}
