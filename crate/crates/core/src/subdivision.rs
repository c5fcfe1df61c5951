//! Ordered barycentric subdivision of the disk.
//!
//! Step n consists of the interior triangles T_{0 a1..an}, obtained by
//! subdividing an inscribed equilateral triangle T0 n times, and the exterior
//! triangles S^{b0..bk}_{0 c1..cm} (k >= 1, k + m = n), built on the chords
//! between T0 and the unit circle. Each triangle carries a starting and an
//! ending point, and the total order makes consecutive triangles meet at
//! those points.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;
use std::fmt;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::TOLERANCES;

pub type Point2 = Vector2<f64>;

/// Largest supported step.
pub const MAX_STEP: usize = 4;

/// Symbolic address of a triangle of step n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriangleAddress {
    /// T_{0 a1..an}; `digits` holds a1..an, each in 1..=6.
    Interior { digits: Vec<u8> },
    /// S^{b0 b1..bk}_{0 c1..cm}; b0 in 1..=3, bi in 1..=2, ci in 1..=6.
    Exterior { upper: Vec<u8>, lower: Vec<u8> },
}

impl TriangleAddress {
    pub fn step(&self) -> usize {
        match self {
            TriangleAddress::Interior { digits } => digits.len(),
            TriangleAddress::Exterior { upper, lower } => upper.len() - 1 + lower.len(),
        }
    }

    /// Checks the digit ranges.
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            TriangleAddress::Interior { digits } => digits.iter().all(|d| (1..=6).contains(d)),
            TriangleAddress::Exterior { upper, lower } => {
                upper.len() >= 2
                    && (1..=3).contains(&upper[0])
                    && upper[1..].iter().all(|d| (1..=2).contains(d))
                    && lower.iter().all(|d| (1..=6).contains(d))
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::AddressNotFound(self.to_string()))
        }
    }

    /// The address of the parent at step n - 1, if any.
    pub fn parent(&self) -> Option<TriangleAddress> {
        match self {
            TriangleAddress::Interior { digits } if !digits.is_empty() => {
                Some(TriangleAddress::Interior { digits: digits[..digits.len() - 1].to_vec() })
            }
            TriangleAddress::Exterior { upper, lower } if !lower.is_empty() => Some(TriangleAddress::Exterior {
                upper: upper.clone(),
                lower: lower[..lower.len() - 1].to_vec(),
            }),
            _ => None,
        }
    }

    /// The child with the given last digit.
    pub fn child(&self, d: u8) -> TriangleAddress {
        match self {
            TriangleAddress::Interior { digits } => {
                let mut digits = digits.clone();
                digits.push(d);
                TriangleAddress::Interior { digits }
            }
            TriangleAddress::Exterior { upper, lower } => {
                let mut lower = lower.clone();
                lower.push(d);
                TriangleAddress::Exterior { upper: upper.clone(), lower }
            }
        }
    }
}

impl fmt::Display for TriangleAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |w: &[u8]| w.iter().map(|d| char::from(b'0' + d)).collect::<String>();
        match self {
            TriangleAddress::Interior { digits } => write!(f, "T0{}", word(digits)),
            TriangleAddress::Exterior { upper, lower } => write!(f, "S^{}_0{}", word(upper), word(lower)),
        }
    }
}

/// Total order of addresses of the same step: interior triangles first in
/// dictionary order, then exterior triangles by increasing k; for equal k the
/// upper words are compared in reversed dictionary order when k is odd and in
/// dictionary order when k is even, and ties are broken by the lower words.
pub fn order_compare(l: &TriangleAddress, m: &TriangleAddress) -> Result<Ordering> {
    if l.step() != m.step() {
        return Err(Error::AddressNotFound(format!("{l} and {m} belong to different steps")));
    }
    use TriangleAddress::*;
    Ok(match (l, m) {
        (Interior { digits: a }, Interior { digits: b }) => a.cmp(b),
        (Interior { .. }, Exterior { .. }) => Ordering::Less,
        (Exterior { .. }, Interior { .. }) => Ordering::Greater,
        (Exterior { upper: ua, lower: la }, Exterior { upper: ub, lower: lb }) => {
            let (ka, kb) = (ua.len() - 1, ub.len() - 1);
            ka.cmp(&kb).then_with(|| {
                let upper = if ka % 2 == 1 { ub.cmp(ua) } else { ua.cmp(ub) };
                upper.then_with(|| la.cmp(lb))
            })
        }
    })
}

/// A triangle of the disk with its vertex roles.
///
/// `roles[0]` is the starting point and (`roles[0]`, `roles[1]`) the initial
/// side. When `closed` the ending point is the starting point; otherwise it is
/// `roles[2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarTriangle {
    pub roles: [Point2; 3],
    pub closed: bool,
    pub orientation: i8,
}

impl PlanarTriangle {
    pub fn start(&self) -> Point2 {
        self.roles[0]
    }

    pub fn end(&self) -> Point2 {
        if self.closed {
            self.roles[0]
        } else {
            self.roles[2]
        }
    }

    pub fn barycenter(&self) -> Point2 {
        (self.roles[0] + self.roles[1] + self.roles[2]) / 3.0
    }

    pub fn euclidean_area(&self) -> f64 {
        0.5 * cross(self.roles[1] - self.roles[0], self.roles[2] - self.roles[0]).abs()
    }

    /// Role indices in loop order from the starting point: counterclockwise for
    /// orientation +1, clockwise for -1.
    pub fn loop_order(&self) -> [usize; 3] {
        let c = cross(self.roles[1] - self.roles[0], self.roles[2] - self.roles[0]);
        if (c > 0.0) == (self.orientation > 0) {
            [0, 1, 2]
        } else {
            [0, 2, 1]
        }
    }
}

fn cross(a: Point2, b: Point2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn open(s: Point2, third: Point2, end: Point2, orientation: i8) -> PlanarTriangle {
    PlanarTriangle { roles: [s, third, end], closed: false, orientation }
}

fn closed(s: Point2, x: Point2, y: Point2, orientation: i8) -> PlanarTriangle {
    PlanarTriangle { roles: [s, x, y], closed: true, orientation }
}

/// Naming of the six barycentric children.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChildNaming {
    Standard,
    /// Used for the first subdivision of S^{b0..bk}_0 when k is odd and bk = 1
    /// or k is even and bk = 2: the last two children trade places.
    Swapped,
}

/// The six children N1..N6 of a triangle, in naming order.
///
/// With s, x, y the roles, B the barycenter and m_sx, m_xy, m_ys the side
/// midpoints, N1 = (s, m_sx, B) starts at s and ends at B, N6 contains the
/// ending point of the parent and ends there, and N2..N5 start and end at B
/// with their initial side shared with an earlier child.
pub fn children(t: &PlanarTriangle, naming: ChildNaming) -> [PlanarTriangle; 6] {
    let [s, x, y] = t.roles;
    let o = t.orientation;
    let b = t.barycenter();
    let (m_sx, m_xy, m_ys) = ((s + x) * 0.5, (x + y) * 0.5, (y + s) * 0.5);
    if t.closed {
        [
            open(s, m_sx, b, o),
            closed(b, m_sx, x, o),
            closed(b, x, m_xy, o),
            closed(b, m_xy, y, o),
            closed(b, y, m_ys, o),
            open(b, m_ys, s, o),
        ]
    } else {
        match naming {
            ChildNaming::Standard => [
                open(s, m_sx, b, o),
                closed(b, m_sx, x, o),
                closed(b, x, m_xy, o),
                closed(b, s, m_ys, o),
                closed(b, m_ys, y, o),
                open(b, m_xy, y, o),
            ],
            ChildNaming::Swapped => [
                open(s, m_sx, b, o),
                closed(b, m_sx, x, o),
                closed(b, x, m_xy, o),
                closed(b, s, m_ys, o),
                closed(b, m_xy, y, o),
                open(b, m_ys, y, o),
            ],
        }
    }
}

fn circle(theta: f64) -> Point2 {
    Point2::new(theta.cos(), theta.sin())
}

/// Angles of the sides of T0, in the counterclockwise picture.
fn t0_side(b0: u8) -> (f64, f64) {
    let a = -PI / 2.0 + f64::from(b0 - 1) * 2.0 * PI / 3.0;
    (a, a + 2.0 * PI / 3.0)
}

/// T0 in the counterclockwise picture.
fn t0_ccw() -> PlanarTriangle {
    let (p, x, y) = (circle(-PI / 2.0), circle(PI / 6.0), circle(5.0 * PI / 6.0));
    closed(p, x, y, 1)
}

/// S^{upper}_0 in the counterclockwise picture.
fn exterior_base_ccw(upper: &[u8]) -> PlanarTriangle {
    let (mut a, mut b) = t0_side(upper[0]);
    let mut third = Point2::zeros();
    for &digit in &upper[1..] {
        let m = 0.5 * (a + b);
        third = (circle(a) + circle(b)) * 0.5;
        if digit == 1 {
            b = m;
        } else {
            a = m;
        }
    }
    let k = upper.len() - 1;
    let (start, end) = if k % 2 == 1 { (circle(b), circle(a)) } else { (circle(a), circle(b)) };
    open(start, third, end, 1)
}

fn reflect(t: &PlanarTriangle) -> PlanarTriangle {
    let f = |p: Point2| Point2::new(-p.x, p.y);
    PlanarTriangle { roles: [f(t.roles[0]), f(t.roles[1]), f(t.roles[2])], closed: t.closed, orientation: -t.orientation }
}

fn subdivide_word(base: &PlanarTriangle, word: &[u8], first: ChildNaming) -> PlanarTriangle {
    let mut t = *base;
    for (i, &d) in word.iter().enumerate() {
        let naming = if i == 0 { first } else { ChildNaming::Standard };
        t = children(&t, naming)[usize::from(d) - 1];
    }
    t
}

fn exterior_first_naming(upper: &[u8]) -> ChildNaming {
    let k = upper.len() - 1;
    let bk = upper[k];
    if (!k.is_multiple_of(2) && bk == 1) || (k.is_multiple_of(2) && bk == 2) {
        ChildNaming::Swapped
    } else {
        ChildNaming::Standard
    }
}

/// Geometry and roles of the triangle at `addr`.
pub fn triangle_at(addr: &TriangleAddress, orientation: i8) -> Result<PlanarTriangle> {
    addr.validate()?;
    if addr.step() > MAX_STEP {
        return Err(Error::StepOutOfRange(addr.step()));
    }
    let t = match addr {
        TriangleAddress::Interior { digits } => subdivide_word(&t0_ccw(), digits, ChildNaming::Standard),
        TriangleAddress::Exterior { upper, lower } => {
            subdivide_word(&exterior_base_ccw(upper), lower, exterior_first_naming(upper))
        }
    };
    Ok(if orientation < 0 { reflect(&t) } else { t })
}

fn words(len: usize, alphabet: u8) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (1..=alphabet).map(move |d| {
                    let mut w = w.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out
}

/// All addresses of step n, in order.
pub fn addresses(n: usize) -> Vec<TriangleAddress> {
    let mut out: Vec<TriangleAddress> = words(n, 6).into_iter().map(|digits| TriangleAddress::Interior { digits }).collect();
    for k in 1..=n {
        let mut uppers: Vec<Vec<u8>> = (1..=3u8)
            .flat_map(|b0| {
                words(k, 2).into_iter().map(move |w| {
                    let mut u = vec![b0];
                    u.extend(w);
                    u
                })
            })
            .collect();
        if k % 2 == 1 {
            uppers.reverse();
        }
        for upper in uppers {
            for lower in words(n - k, 6) {
                out.push(TriangleAddress::Exterior { upper: upper.clone(), lower });
            }
        }
    }
    out
}

/// Number of triangles of step n.
pub fn triangle_count(n: usize) -> usize {
    6usize.pow(n as u32) + (1..=n).map(|k| 3 * 2usize.pow(k as u32) * 6usize.pow((n - k) as u32)).sum::<usize>()
}

/// A triangle of a level with its vertex ids in role order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelTriangle {
    pub address: TriangleAddress,
    pub triangle: PlanarTriangle,
    pub ids: [usize; 3],
}

impl LevelTriangle {
    pub fn start_id(&self) -> usize {
        self.ids[0]
    }

    pub fn end_id(&self) -> usize {
        if self.triangle.closed {
            self.ids[0]
        } else {
            self.ids[2]
        }
    }

    /// Vertex ids of the boundary loop, starting and ending at the starting point.
    pub fn loop_ids(&self) -> [usize; 4] {
        let o = self.triangle.loop_order();
        [self.ids[o[0]], self.ids[o[1]], self.ids[o[2]], self.ids[o[0]]]
    }

    pub fn edges(&self) -> [(usize, usize); 3] {
        let [a, b, c] = self.ids;
        [edge(a, b), edge(b, c), edge(c, a)]
    }
}

/// Undirected edge key.
pub fn edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Registry identifying planar points closer than the merge tolerance.
#[derive(Debug, Default, Clone)]
struct VertexRegistry {
    points: Vec<Point2>,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl VertexRegistry {
    const CELL: f64 = 1e-9;

    fn key(p: Point2) -> (i64, i64) {
        ((p.x / Self::CELL).floor() as i64, (p.y / Self::CELL).floor() as i64)
    }

    fn id(&mut self, p: Point2) -> usize {
        let (cx, cy) = Self::key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(cx + dx, cy + dy)) {
                    for &i in ids {
                        if (self.points[i] - p).norm() < TOLERANCES.point_merge {
                            return i;
                        }
                    }
                }
            }
        }
        let i = self.points.len();
        self.points.push(p);
        self.cells.entry((cx, cy)).or_default().push(i);
        i
    }
}

/// All triangles of one step, in order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubdivisionLevel {
    pub step: usize,
    pub orientation: i8,
    pub vertices: Vec<Point2>,
    pub basepoint: usize,
    pub triangles: Vec<LevelTriangle>,
}

/// Builds step n for the given orientation (+1 counterclockwise, -1 clockwise).
pub fn build_level(n: usize, orientation: i8) -> Result<SubdivisionLevel> {
    if n > MAX_STEP {
        return Err(Error::StepOutOfRange(n));
    }
    let orientation = if orientation < 0 { -1 } else { 1 };
    let mut reg = VertexRegistry::default();
    let basepoint = reg.id(Point2::new(0.0, -1.0));
    let mut triangles = Vec::with_capacity(triangle_count(n));
    for address in addresses(n) {
        let triangle = triangle_at(&address, orientation)?;
        let ids = [reg.id(triangle.roles[0]), reg.id(triangle.roles[1]), reg.id(triangle.roles[2])];
        triangles.push(LevelTriangle { address, triangle, ids });
    }
    Ok(SubdivisionLevel { step: n, orientation, vertices: reg.points, basepoint, triangles })
}

/// One entry of the JSON level export.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExportedTriangle {
    pub address: String,
    pub vertices: [[f64; 2]; 3],
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub order_index: usize,
}

impl SubdivisionLevel {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn point(&self, id: usize) -> Point2 {
        self.vertices[id]
    }

    fn find(&self, addr: &TriangleAddress) -> Result<&LevelTriangle> {
        self.triangles
            .iter()
            .find(|t| &t.address == addr)
            .ok_or_else(|| Error::AddressNotFound(addr.to_string()))
    }

    pub fn start_point(&self, addr: &TriangleAddress) -> Result<Point2> {
        Ok(self.find(addr)?.triangle.start())
    }

    pub fn end_point(&self, addr: &TriangleAddress) -> Result<Point2> {
        Ok(self.find(addr)?.triangle.end())
    }

    /// Copy with entries i and j exchanged (for fault injection).
    pub fn with_swapped(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.triangles.swap(i, j);
        out
    }

    /// Total Euclidean area of the triangles.
    pub fn euclidean_area(&self) -> f64 {
        self.triangles.iter().map(|t| t.triangle.euclidean_area()).sum()
    }

    pub fn export(&self) -> Vec<ExportedTriangle> {
        let pt = |p: Point2| [p.x, p.y];
        self.triangles
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let o = t.triangle.loop_order();
                ExportedTriangle {
                    address: t.address.to_string(),
                    vertices: [pt(t.triangle.roles[o[0]]), pt(t.triangle.roles[o[1]]), pt(t.triangle.roles[o[2]])],
                    start: pt(t.triangle.start()),
                    end: pt(t.triangle.end()),
                    order_index: i,
                }
            })
            .collect()
    }
}

/// Violations found by [`verify_properties`], one list per property.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub step: usize,
    pub triangles: usize,
    /// The initial side of each non-first triangle lies on the boundary of the
    /// union of its predecessors and splits into sides of its first two children.
    pub p1: Vec<String>,
    /// Every prefix union is a disk: its boundary is one simple cycle and its
    /// Euler characteristic is 1.
    pub p2: Vec<String>,
    /// First and sixth children share the starting and ending point of their parent.
    pub p3: Vec<String>,
    /// Consecutive triangles meet: end(L) = start(M); the chain starts and ends at the base point.
    pub p4: Vec<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.p1.is_empty() && self.p2.is_empty() && self.p3.is_empty() && self.p4.is_empty()
    }
}

fn boundary_is_single_cycle(boundary: &HashSet<(usize, usize)>) -> bool {
    if boundary.is_empty() {
        return false;
    }
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in boundary {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if adj.values().any(|v| v.len() != 2) {
        return false;
    }
    let start = *adj.keys().next().unwrap();
    let (mut prev, mut cur) = (start, adj[&start][0]);
    let mut steps = 1;
    while cur != start {
        let nb = &adj[&cur];
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
        steps += 1;
        if steps > boundary.len() {
            return false;
        }
    }
    steps == boundary.len()
}

/// Checks Properties 1-4 on a level.
pub fn verify_properties(level: &SubdivisionLevel) -> PropertyReport {
    let mut rep = PropertyReport { step: level.step, triangles: level.len(), ..Default::default() };
    let tol = 1e-12;
    let close = |a: Point2, b: Point2| (a - b).norm() < tol;

    // Property 1 and 2: incremental prefix unions.
    let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
    let mut verts: HashSet<usize> = HashSet::new();
    let mut boundary: HashSet<(usize, usize)> = HashSet::new();
    for (i, t) in level.triangles.iter().enumerate() {
        let initial = edge(t.ids[0], t.ids[1]);
        if i > 0 && edge_count.get(&initial) != Some(&1) {
            rep.p1.push(format!("{}: initial side is not on the boundary of its predecessors", t.address));
        }
        let kids = children(&t.triangle, ChildNaming::Standard);
        let m = (t.triangle.roles[0] + t.triangle.roles[1]) * 0.5;
        let has = |c: &PlanarTriangle, p: Point2| c.roles.iter().any(|q| close(*q, p));
        if !(has(&kids[0], t.triangle.roles[0]) && has(&kids[0], m) && has(&kids[1], m) && has(&kids[1], t.triangle.roles[1])) {
            rep.p1.push(format!("{}: initial side does not split into sides of the first two children", t.address));
        }
        for e in t.edges() {
            let c = edge_count.entry(e).or_insert(0);
            *c += 1;
            match *c {
                1 => {
                    boundary.insert(e);
                }
                2 => {
                    boundary.remove(&e);
                }
                _ => rep.p2.push(format!("{}: edge {:?} used by more than two triangles", t.address, e)),
            }
        }
        verts.extend(t.ids);
        let euler = verts.len() as i64 - edge_count.len() as i64 + (i + 1) as i64;
        if euler != 1 || !boundary_is_single_cycle(&boundary) {
            rep.p2.push(format!("prefix ending at {} is not a disk (Euler characteristic {euler})", t.address));
        }
    }

    // Property 3: compare with the previous step.
    if level.step > 0 {
        match build_level(level.step - 1, level.orientation) {
            Ok(prev) => {
                let index: HashMap<&TriangleAddress, &LevelTriangle> =
                    level.triangles.iter().map(|t| (&t.address, t)).collect();
                for parent in &prev.triangles {
                    let c1 = index.get(&parent.address.child(1));
                    let c6 = index.get(&parent.address.child(6));
                    match (c1, c6) {
                        (Some(c1), Some(c6)) => {
                            if !close(c1.triangle.start(), parent.triangle.start()) {
                                rep.p3.push(format!("{}: first child does not start at the parent's start", parent.address));
                            }
                            if !close(c6.triangle.end(), parent.triangle.end()) {
                                rep.p3.push(format!("{}: sixth child does not end at the parent's end", parent.address));
                            }
                        }
                        _ => rep.p3.push(format!("{}: children missing", parent.address)),
                    }
                }
            }
            Err(e) => rep.p3.push(format!("previous step unavailable: {e}")),
        }
    }

    // Property 4.
    if let (Some(first), Some(last)) = (level.triangles.first(), level.triangles.last()) {
        if first.start_id() != level.basepoint {
            rep.p4.push(format!("{} does not start at the base point", first.address));
        }
        if last.end_id() != level.basepoint {
            rep.p4.push(format!("{} does not end at the base point", last.address));
        }
    }
    for w in level.triangles.windows(2) {
        if w[0].end_id() != w[1].start_id() {
            rep.p4.push(format!("end of {} differs from start of {}", w[0].address, w[1].address));
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: &[u8]) -> TriangleAddress {
        TriangleAddress::Interior { digits: d.to_vec() }
    }

    fn s(u: &[u8], l: &[u8]) -> TriangleAddress {
        TriangleAddress::Exterior { upper: u.to_vec(), lower: l.to_vec() }
    }

    #[test]
    fn counts() {
        assert_eq!(build_level(0, 1).unwrap().len(), 1);
        assert_eq!(build_level(1, 1).unwrap().len(), 12);
        assert_eq!(build_level(2, 1).unwrap().len(), 84);
        assert_eq!(triangle_count(3), 528);
        assert_eq!(addresses(3).len(), 528);
        assert!(build_level(5, 1).is_err());
    }

    #[test]
    fn order_examples() {
        assert_eq!(order_compare(&t(&[1]), &s(&[1, 1], &[])).unwrap(), Ordering::Less);
        assert_eq!(order_compare(&t(&[1, 3]), &t(&[1, 4])).unwrap(), Ordering::Less);
        assert_eq!(order_compare(&s(&[1, 2], &[]), &s(&[1, 1], &[])).unwrap(), Ordering::Less);
        assert_eq!(order_compare(&s(&[1, 1, 2], &[]), &s(&[1, 2, 1], &[])).unwrap(), Ordering::Less);
        assert!(order_compare(&t(&[1]), &t(&[1, 1])).is_err());
    }

    #[test]
    fn generation_order_is_sorted() {
        for n in 0..=3 {
            let a = addresses(n);
            for w in a.windows(2) {
                assert_eq!(order_compare(&w[0], &w[1]).unwrap(), Ordering::Less, "{} {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn start_and_end_examples() {
        let l = build_level(1, 1).unwrap();
        let base = Point2::new(0.0, -1.0);
        assert!((l.start_point(&t(&[1])).unwrap() - base).norm() < 1e-15);
        assert!(l.end_point(&t(&[1])).unwrap().norm() < 1e-15);
        assert!((l.end_point(&l.triangles.last().unwrap().address).unwrap() - base).norm() < 1e-15);
        let l0 = build_level(0, 1).unwrap();
        assert!(l0.triangles[0].triangle.closed);
        assert!(l.start_point(&t(&[1, 1])).is_err());
    }

    #[test]
    fn properties_hold_for_both_orientations() {
        for o in [1, -1] {
            for n in 0..=3 {
                let rep = verify_properties(&build_level(n, o).unwrap());
                assert!(rep.passed(), "n={n} o={o}: {rep:?}");
            }
        }
    }

    #[test]
    fn swapped_entries_are_detected() {
        let l = build_level(1, 1).unwrap();
        let rep = verify_properties(&l.with_swapped(2, 5));
        assert!(!rep.p4.is_empty());
    }

    #[test]
    fn area_partition() {
        for n in 0..=3 {
            let l = build_level(n, 1).unwrap();
            let sides = 3 * 2usize.pow(n as u32);
            let polygon = 0.5 * sides as f64 * (2.0 * PI / sides as f64).sin();
            assert!((l.euclidean_area() - polygon).abs() < 1e-12);
        }
    }
}
