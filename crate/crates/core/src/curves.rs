//! Holonomy curves on the subdivided disk and the fiber curve.
//!
//! Curves on the disk are edge paths in the vertex graph of a level. The
//! holonomy curve gamma_j runs around the union of the first j triangles; it
//! is built from gamma_{j-1} by walking back to the start of triangle j,
//! going around it, walking back, and cancelling backtracks. Transported to
//! H^n, the vertices are mapped by the disk embedding and joined by geodesics
//! (the pleated surface). The fiber curve in K = SO(n) advances on each grid
//! interval by the holonomy of one pleated triangle.

use std::io::Write;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::disk::{boundary_uv, disk_area, DiskEmbedding};
use crate::error::{Error, Result};
use crate::grid::{build_grid, TimeGrid};
use crate::hyperbolic::{totally_geodesic_triangle, unit_tangent, GeodesicTriangle, HPoint};
use crate::lift::{fiber_distance, horizontal_lift, horizontal_lift_adaptive, lift_endpoint, lift_vertices};
use crate::lorentz::{bracket, exp_map, log_map, psi, AlgebraElement, GroupElement};
use crate::path::{FnCurve, PiecewiseGeodesic, Speed};
use crate::subdivision::{build_level, edge, SubdivisionLevel};

/// A path in the vertex graph of a level, as a vertex id sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgePath {
    pub vertices: Vec<usize>,
}

impl EdgePath {
    pub fn constant(v: usize) -> Self {
        Self { vertices: vec![v] }
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("non-empty path")
    }

    pub fn is_loop(&self) -> bool {
        self.start() == self.end()
    }

    pub fn is_constant(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Number of edges traversed.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self { vertices }
    }

    /// Concatenation self * other.
    pub fn concat(&self, other: &EdgePath) -> Result<Self> {
        if self.end() != other.start() {
            return Err(Error::DomainMismatch);
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        Ok(Self { vertices })
    }

    /// Directed edges in traversal order.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        self.vertices.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Distinct undirected edges.
    pub fn edge_set(&self) -> std::collections::BTreeSet<(usize, usize)> {
        self.vertices.windows(2).map(|w| edge(w[0], w[1])).collect()
    }

    /// The initial part of the path up to the first visit of `v`.
    pub fn prefix_to(&self, v: usize) -> Option<Self> {
        let i = self.vertices.iter().position(|&x| x == v)?;
        Some(Self { vertices: self.vertices[..=i].to_vec() })
    }
}

/// Cancels adjacent traversals of the same edge in opposite directions until
/// none remain. Endpoints are preserved and the image only shrinks; constant
/// speed is applied when the path is realized as a curve.
pub fn simplify(path: &EdgePath) -> EdgePath {
    let mut stack: Vec<usize> = Vec::with_capacity(path.vertices.len());
    for &v in &path.vertices {
        if stack.last() == Some(&v) {
            continue;
        }
        if stack.len() >= 2 && stack[stack.len() - 2] == v {
            stack.pop();
        } else {
            stack.push(v);
        }
    }
    EdgePath { vertices: stack }
}

/// Image type of simplify(c_bar * 1c) relative to the triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideImage {
    Point,
    OneSide,
    TwoSides,
    Boundary,
}

/// The seven curves attached to the j-th grid point (j >= 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveBundle {
    pub j: usize,
    /// Holonomy curve: the boundary of the union of the first j triangles, a loop at the base point.
    pub gamma: EdgePath,
    /// From the base point to the start of triangle j, against gamma_{j-1}.
    pub c: EdgePath,
    pub c_bar: EdgePath,
    /// Boundary loop of triangle j at its starting point.
    pub phi: EdgePath,
    /// Boundary loop of triangle j at its ending point.
    pub psi: EdgePath,
    /// From the base point to the end of triangle j, against gamma_j.
    pub c1: EdgePath,
    pub c1_bar: EdgePath,
}

/// The holonomy curves of a level, computed once in order.
#[derive(Debug, Clone)]
pub struct CurveSystem<'a> {
    level: &'a SubdivisionLevel,
    gammas: Vec<EdgePath>,
    approaches: Vec<EdgePath>,
}

/// Walks back along `gamma` from the base point to `target`. When the target is
/// the base point itself the walk may stop at once or go all the way round;
/// `full` selects the second reading.
fn against(gamma: &EdgePath, target: usize, full: bool) -> EdgePath {
    if full && target == gamma.start() {
        return gamma.reversed();
    }
    gamma.reversed().prefix_to(target).expect("target lies on the holonomy curve")
}

/// True when the loop visits no vertex twice apart from closing up.
fn is_simple_loop(p: &EdgePath) -> bool {
    let mut seen = std::collections::HashSet::new();
    p.vertices[..p.vertices.len() - 1].iter().all(|v| seen.insert(*v))
}

/// The approach path c for a triangle starting at `start` and the resulting
/// holonomy curve. Of the two walks to a start at the base point, the one
/// giving a simple loop around the prefix union is taken.
fn extend(prev: &EdgePath, start: usize, phi: &EdgePath) -> Result<(EdgePath, EdgePath)> {
    if !prev.vertices.contains(&start) {
        return Err(Error::AddressNotFound("triangle start is not on the previous holonomy curve".into()));
    }
    let build = |c: EdgePath| -> Result<(EdgePath, EdgePath)> {
        let g = simplify(&prev.concat(&c)?.concat(phi)?.concat(&c.reversed())?);
        Ok((c, g))
    };
    let first = build(against(prev, start, false))?;
    if is_simple_loop(&first.1) || start != prev.start() || prev.is_constant() {
        return Ok(first);
    }
    build(against(prev, start, true))
}

impl<'a> CurveSystem<'a> {
    pub fn new(level: &'a SubdivisionLevel) -> Result<Self> {
        let mut gammas = vec![EdgePath::constant(level.basepoint)];
        let mut approaches = Vec::with_capacity(level.len());
        for t in &level.triangles {
            let prev = gammas.last().expect("non-empty");
            let phi = EdgePath { vertices: t.loop_ids().to_vec() };
            let (c, g) = extend(prev, t.start_id(), &phi)
                .map_err(|_| Error::AddressNotFound(format!("start of {} is not on the previous holonomy curve", t.address)))?;
            approaches.push(c);
            gammas.push(g);
        }
        Ok(Self { level, gammas, approaches })
    }

    pub fn level(&self) -> &SubdivisionLevel {
        self.level
    }

    /// gamma_j for j = 0..=N; gamma_0 is constant at the base point.
    pub fn gamma(&self, j: usize) -> &EdgePath {
        &self.gammas[j]
    }

    pub fn len(&self) -> usize {
        self.gammas.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bundle(&self, j: usize) -> Result<CurveBundle> {
        if j == 0 || j > self.len() {
            return Err(Error::GridDomain(format!("index {j}"), "curve bundle"));
        }
        let t = &self.level.triangles[j - 1];
        let c = self.approaches[j - 1].clone();
        let phi = EdgePath { vertices: t.loop_ids().to_vec() };
        let psi = if t.triangle.closed {
            phi.clone()
        } else {
            let l = t.loop_ids();
            let k = l[..3].iter().position(|&v| v == t.end_id()).expect("end is a vertex");
            EdgePath { vertices: (0..4).map(|i| l[(k + i) % 3]).collect() }
        };
        // At an end on the base point, the walk round the whole loop is taken
        // when stopping at once would leave simplify(c_bar * 1c) off the triangle.
        let mut c1 = against(&self.gammas[j], t.end_id(), false);
        if t.end_id() == self.level.basepoint && follows_backwards(&c.reversed(), &c1, &phi).is_none() {
            c1 = against(&self.gammas[j], t.end_id(), true);
        }
        Ok(CurveBundle {
            j,
            gamma: self.gammas[j].clone(),
            c_bar: c.reversed(),
            c,
            phi,
            psi,
            c1_bar: c1.reversed(),
            c1,
        })
    }

    /// Boundary edges of the union of the first j triangles.
    pub fn prefix_boundary(&self, j: usize) -> std::collections::BTreeSet<(usize, usize)> {
        let mut count = std::collections::HashMap::new();
        for t in &self.level.triangles[..j] {
            for e in t.edges() {
                *count.entry(e).or_insert(0) += 1;
            }
        }
        count.into_iter().filter(|(_, c)| *c == 1).map(|(e, _)| e).collect()
    }

    /// Classifies the image of simplify(c_bar * 1c) for triangle j. The
    /// simplified path must run from the start of the triangle along its
    /// boundary against the orientation.
    pub fn classify(&self, j: usize) -> Result<SideImage> {
        let b = self.bundle(j)?;
        let len = follows_backwards(&b.c_bar, &b.c1, &b.phi).ok_or_else(|| {
            Error::AddressNotFound(format!("simplified path of triangle {j} does not follow its boundary backwards"))
        })?;
        Ok(match len {
            0 => SideImage::Point,
            1 => SideImage::OneSide,
            2 => SideImage::TwoSides,
            _ => SideImage::Boundary,
        })
    }
}

/// Number of edges of simplify(c_bar * 1c) when it is an initial piece of the
/// loop phi run backwards.
fn follows_backwards(c_bar: &EdgePath, c1: &EdgePath, phi: &EdgePath) -> Option<usize> {
    let s = simplify(&c_bar.concat(c1).ok()?);
    let back = phi.reversed();
    (s.len() <= 3 && s.vertices[..] == back.vertices[..=s.len()]).then_some(s.len())
}

/// Builds the bundle for the grid point t0 (t0 != 0).
pub fn build_curve_bundle(grid: &TimeGrid, t0: f64, system: &CurveSystem) -> Result<CurveBundle> {
    let j = grid.j_n(t0)?;
    if j == 0 {
        return Err(Error::GridDomain("0".into(), "curve bundle"));
    }
    system.bundle(j)
}

/// A disk path realized at constant speed in the plane and mapped by the embedding.
pub fn tilde_curve<'a>(
    path: &EdgePath,
    level: &SubdivisionLevel,
    phi: &'a dyn DiskEmbedding,
) -> FnCurve<impl Fn(f64) -> HPoint + Sync + 'a> {
    let pts: Vec<_> = path.vertices.iter().map(|&v| level.point(v)).collect();
    let lens: Vec<f64> = pts.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let total: f64 = lens.iter().sum();
    let mut breaks = vec![0.0];
    let mut acc = 0.0;
    for l in &lens {
        acc += l;
        breaks.push(if total > 0.0 { acc / total } else { 1.0 });
    }
    if lens.is_empty() {
        breaks.push(1.0);
    }
    let b = breaks.clone();
    let f = move |t: f64| {
        if pts.len() == 1 {
            return phi.point(pts[0].x, pts[0].y);
        }
        let i = crate::path::piece_index(&b, t).min(pts.len() - 2);
        let s = if b[i + 1] > b[i] { (t - b[i]) / (b[i + 1] - b[i]) } else { 0.0 };
        let p = pts[i] * (1.0 - s) + pts[i + 1] * s;
        phi.point(p.x, p.y)
    };
    FnCurve::new(phi.dim(), breaks, f)
}

/// The boundary circle mapped by the embedding, starting at the base point.
pub fn boundary_curve<'a>(phi: &'a dyn DiskEmbedding, orientation: i8) -> FnCurve<impl Fn(f64) -> HPoint + Sync + 'a> {
    FnCurve::new(phi.dim(), vec![0.0, 1.0], move |t| {
        let (u, v) = boundary_uv(t, orientation);
        phi.point(u, v)
    })
}

/// Totally geodesic triangles with the embedded vertices of a level.
#[derive(Debug, Clone)]
pub struct PleatedSurface {
    pub dim: usize,
    /// Embedded vertex for each vertex id.
    pub points: Vec<HPoint>,
    /// Triangles in level order, traversed along their boundary loops.
    pub triangles: Vec<GeodesicTriangle>,
    pub areas: Vec<f64>,
}

impl PleatedSurface {
    pub fn new(level: &SubdivisionLevel, phi: &dyn DiskEmbedding) -> Result<Self> {
        let dim = phi.dim();
        let points: Vec<HPoint> = level.vertices.iter().map(|p| phi.point(p.x, p.y)).collect();
        let mut triangles = Vec::with_capacity(level.len());
        let mut areas = Vec::with_capacity(level.len());
        for t in &level.triangles {
            let l = t.loop_ids();
            let mut tri = totally_geodesic_triangle(&points[l[0]], &points[l[1]], &points[l[2]])?;
            tri.orientation = 1;
            areas.push(tri.area());
            triangles.push(tri);
        }
        Ok(Self { dim, points, triangles, areas })
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Embedded vertices of a disk path.
    pub fn hat_points(&self, path: &EdgePath) -> Vec<HPoint> {
        path.vertices.iter().map(|&v| self.points[v].clone()).collect()
    }

    /// A disk path as a constant-speed piecewise geodesic.
    pub fn hat_curve(&self, path: &EdgePath) -> Result<PiecewiseGeodesic> {
        PiecewiseGeodesic::new(&self.hat_points(path), Speed::Constant)
    }
}

/// Prefix sums of the pleated areas: s_n at the grid points 1..=N and the total.
pub fn area_clock(surface: &PleatedSurface) -> (Vec<f64>, f64) {
    let mut acc = 0.0;
    let clock: Vec<f64> = surface
        .areas
        .iter()
        .map(|a| {
            acc += a;
            acc
        })
        .collect();
    (clock, acc)
}

/// One grid interval of the fiber curve.
#[derive(Debug, Clone)]
pub struct FiberSegment {
    pub address: String,
    pub area: f64,
    /// Unit direction [X, Y] / |[X, Y]| in k.
    pub direction: AlgebraElement,
    /// Lift of the start of the triangle, reached along c from the previous value.
    pub lifted_start: GroupElement,
    /// Values at the two ends of the interval.
    pub from: GroupElement,
    pub to: GroupElement,
}

/// The curve f_n in K, piecewise a one-parameter subgroup on the grid of D_n.
#[derive(Debug, Clone)]
pub struct FiberCurve {
    pub n: usize,
    pub dim: usize,
    pub grid: TimeGrid,
    pub segments: Vec<FiberSegment>,
}

/// Builds the fiber curve of a level on a pleated surface.
pub fn build_fiber_curve(system: &CurveSystem, surface: &PleatedSurface) -> Result<FiberCurve> {
    let level = system.level();
    let grid = build_grid(level.step)?;
    let dim = surface.dim;
    let mut segments = Vec::with_capacity(level.len());
    let mut f = GroupElement::identity(dim);
    for (i, t) in level.triangles.iter().enumerate() {
        let b = system.bundle(i + 1)?;
        let g = lift_endpoint(&surface.hat_points(&b.c), &f)?;
        let l = t.loop_ids();
        let s = &surface.points[l[0]];
        let x = unit_tangent(s, &surface.points[l[1]])?;
        let y = unit_tangent(s, &surface.points[l[2]])?;
        let ginv = g.inverse();
        let xs = ginv.act(&x).rows(1, dim).into_owned();
        let ys = ginv.act(&y).rows(1, dim).into_owned();
        let xy = bracket(&AlgebraElement::horizontal_from_vector(&xs), &AlgebraElement::horizontal_from_vector(&ys))?;
        let norm = xy.norm();
        if norm < 1e-12 {
            return Err(Error::ZeroBracket);
        }
        let direction = xy.scale(1.0 / norm);
        let area = surface.areas[i];
        let next = &f * &exp_map(&direction.scale(area));
        segments.push(FiberSegment {
            address: t.address.to_string(),
            area,
            direction,
            lifted_start: g,
            from: f,
            to: next.clone(),
        });
        f = next;
    }
    Ok(FiberCurve { n: level.step, dim, grid, segments })
}

impl FiberCurve {
    /// Value at the j-th grid point.
    pub fn at_index(&self, j: usize) -> GroupElement {
        if j == 0 {
            GroupElement::identity(self.dim)
        } else {
            self.segments[j - 1].to.clone()
        }
    }

    /// f_n(t) for t in [0, 1]; constant after the last grid point.
    pub fn eval(&self, t: f64) -> GroupElement {
        let pts = self.grid.points();
        if t >= *pts.last().unwrap() {
            return self.endpoint();
        }
        let i = pts.partition_point(|&x| x <= t).max(1) - 1;
        let seg = &self.segments[i];
        let s = (t - pts[i]) / (pts[i + 1] - pts[i]);
        &seg.from * &exp_map(&seg.direction.scale(s * seg.area))
    }

    pub fn endpoint(&self) -> GroupElement {
        self.at_index(self.segments.len())
    }

    pub fn total_area(&self) -> f64 {
        self.segments.iter().map(|s| s.area).sum()
    }

    /// Length measured from the stored values: sum of |log(f(t_{j-1})^-1 f(t_j))|.
    pub fn measured_length(&self) -> Result<f64> {
        let mut total = 0.0;
        for s in &self.segments {
            total += s.from.distance(&s.to)?;
        }
        Ok(total)
    }

    /// Area clock s_n at the grid points 1..=N.
    pub fn clock(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.segments
            .iter()
            .map(|s| {
                acc += s.area;
                acc
            })
            .collect()
    }

    fn clock_segment(&self, s: f64) -> (usize, f64) {
        let mut acc = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            if s <= acc + seg.area || i + 1 == self.segments.len() {
                return (i, (s - acc).clamp(0.0, seg.area));
            }
            acc += seg.area;
        }
        (0, 0.0)
    }

    /// The unit-speed reparametrization on [0, total area].
    pub fn reparametrized(&self, s: f64) -> GroupElement {
        if self.segments.is_empty() || s <= 0.0 {
            return GroupElement::identity(self.dim);
        }
        let (i, r) = self.clock_segment(s);
        let seg = &self.segments[i];
        &seg.from * &exp_map(&seg.direction.scale(r))
    }

    /// The left-translated unit velocity of the reparametrized curve.
    pub fn direction_field(&self, s: f64) -> AlgebraElement {
        let (i, _) = self.clock_segment(s);
        self.segments[i].direction.clone()
    }

    /// Angle between the directions on either side of the j-th grid point (0 < j < N).
    pub fn turning_angle(&self, j: usize) -> f64 {
        let a = &self.segments[j - 1].direction;
        let b = &self.segments[j].direction;
        let d = a.mat() - b.mat();
        let e = a.mat() + b.mat();
        2.0 * d.norm().atan2(e.norm())
    }

    /// Largest component of log f_n(t_j) off the axis of Psi, over all grid points.
    pub fn off_axis_residual(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for j in 1..=self.segments.len() {
            let l = log_map(&self.at_index(j))?;
            let mut m = l.mat().clone();
            m[(1, 2)] = 0.0;
            m[(2, 1)] = 0.0;
            worst = worst.max(m.amax());
        }
        Ok(worst)
    }

    pub fn export(&self) -> FiberCurveExport {
        let pts = self.grid.points();
        let mut cumulative = 0.0;
        FiberCurveExport {
            n: self.n,
            grid: pts.clone(),
            triangles: self
                .segments
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    cumulative += s.area;
                    SegmentExport {
                        index: i + 1,
                        address: s.address.clone(),
                        t: pts[i + 1],
                        area: s.area,
                        direction: s.direction.coordinates().iter().copied().collect(),
                        cumulative_length: cumulative,
                        endpoint: rows(s.to.mat()),
                    }
                })
                .collect(),
        }
    }

    /// Writes f_n sampled at unit speed: s, direction coordinates, matrix entries.
    pub fn write_csv<W: Write>(&self, out: W, samples: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let total = self.total_area();
        let d = self.dim + 1;
        let k = AlgebraElement::zero(self.dim).coordinates().len();
        let mut header = vec!["s".to_string()];
        header.extend((0..k).map(|i| format!("F{i}")));
        header.extend((0..d * d).map(|i| format!("f{}{}", i / d, i % d)));
        w.write_record(&header)?;
        for i in 0..=samples {
            let s = total * i as f64 / samples.max(1) as f64;
            let g = self.reparametrized(s);
            let dir = self.direction_field(s).coordinates();
            let mut rec = vec![format!("{s:.12e}")];
            rec.extend(dir.iter().map(|x| format!("{x:.12e}")));
            rec.extend((0..d * d).map(|i| format!("{:.12e}", g.mat()[(i / d, i % d)])));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Row-major copy of a matrix for serialization.
pub fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentExport {
    pub index: usize,
    pub address: String,
    pub t: f64,
    pub area: f64,
    pub direction: Vec<f64>,
    pub cumulative_length: f64,
    pub endpoint: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiberCurveExport {
    pub n: usize,
    pub grid: Vec<f64>,
    pub triangles: Vec<SegmentExport>,
}

/// Holonomy of the embedded boundary circle, lifted at e.
pub fn boundary_holonomy(phi: &dyn DiskEmbedding, orientation: i8, step: f64, tol: f64) -> Result<GroupElement> {
    let curve = boundary_curve(phi, orientation);
    let lift = horizontal_lift_adaptive(&curve, &GroupElement::identity(phi.dim()), step, tol)?;
    Ok(lift.endpoint().clone())
}

/// Endpoint of the lift at e of the pleated holonomy curve gamma_j, by the ODE integrator.
pub fn gamma_lift_endpoint(system: &CurveSystem, surface: &PleatedSurface, j: usize, step: f64) -> Result<GroupElement> {
    let pts = surface.hat_points(system.gamma(j));
    let curve = PiecewiseGeodesic::new(&pts, Speed::Constant)?;
    Ok(horizontal_lift(&curve, &GroupElement::identity(surface.dim), step)?.endpoint().clone())
}

/// Endpoint of the exact vertex-to-vertex lift of gamma_j.
pub fn gamma_exact_endpoint(system: &CurveSystem, surface: &PleatedSurface, j: usize) -> Result<GroupElement> {
    let pts = surface.hat_points(system.gamma(j));
    Ok(lift_vertices(&pts, &GroupElement::identity(surface.dim))?.pop().expect("non-empty"))
}

/// Settings for [`theorem_check`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TheoremOptions {
    pub orientation: i8,
    /// Integrator step for the boundary lift.
    pub step: f64,
    /// Tolerance of the adaptive boundary lift.
    pub tol: f64,
    /// Radial and angular Gauss-Legendre nodes for the disk area.
    pub quadrature: usize,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        Self { orientation: 1, step: 1e-2, tol: 1e-10, quadrature: 96 }
    }
}

/// One row of the convergence table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremRow {
    pub n: usize,
    pub triangles: usize,
    pub pleated_area: f64,
    pub length: f64,
    /// (i) |length(f_n) - pleated area|.
    pub construction_residual: f64,
    /// (ii) |pleated area - disk area| / disk area.
    pub area_gap: f64,
    /// (iii) d(f_n endpoint, boundary holonomy).
    pub holonomy_gap: f64,
    /// (iv) d(f_n endpoint, f_{n+1} endpoint); absent on the last row.
    pub cauchy: Option<f64>,
    /// d(f_n endpoint, Psi(o * disk area)) when the disk lies in the standard slice.
    pub psi_gap: Option<f64>,
    pub endpoint: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremReport {
    pub disk: String,
    pub dim: usize,
    pub orientation: i8,
    pub disk_area: f64,
    pub boundary_holonomy: Vec<Vec<f64>>,
    pub rows: Vec<TheoremRow>,
}

/// Runs the finite-step checks for n = n_min..=n_max. `in_slice` enables the
/// comparison with Psi of the disk area.
pub fn theorem_check(
    phi: &dyn DiskEmbedding,
    n_min: usize,
    n_max: usize,
    in_slice: bool,
    opts: &TheoremOptions,
) -> Result<TheoremReport> {
    let area = disk_area(phi, opts.quadrature)?;
    let hol = boundary_holonomy(phi, opts.orientation, opts.step, opts.tol)?;
    let mut rows: Vec<TheoremRow> = Vec::new();
    let mut prev_end: Option<GroupElement> = None;
    for n in n_min..=n_max {
        let level = build_level(n, opts.orientation)?;
        let system = CurveSystem::new(&level)?;
        let surface = PleatedSurface::new(&level, phi)?;
        let fiber = build_fiber_curve(&system, &surface)?;
        let end = fiber.endpoint();
        if let (Some(p), Some(row)) = (&prev_end, rows.last_mut()) {
            row.cauchy = Some(fiber_distance(p, &end)?);
        }
        let pleated = surface.total_area();
        let length = fiber.measured_length()?;
        let psi_gap = if in_slice {
            Some(fiber_distance(&end, &psi(phi.dim(), f64::from(opts.orientation) * area))?)
        } else {
            None
        };
        rows.push(TheoremRow {
            n,
            triangles: level.len(),
            pleated_area: pleated,
            length,
            construction_residual: (length - pleated).abs(),
            area_gap: (pleated - area).abs() / area,
            holonomy_gap: fiber_distance(&end, &hol)?,
            cauchy: None,
            psi_gap,
            endpoint: rows_of(&end),
        });
        prev_end = Some(end);
    }
    Ok(TheoremReport {
        disk: phi.name(),
        dim: phi.dim(),
        orientation: opts.orientation,
        disk_area: area,
        boundary_holonomy: rows_of(&hol),
        rows,
    })
}

fn rows_of(g: &GroupElement) -> Vec<Vec<f64>> {
    rows(g.mat())
}
