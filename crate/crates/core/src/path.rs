//! Parametrized curves on [0, 1]: piecewise-smooth base curves in H^n and
//! curves in the group.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hyperbolic::{distance, mink, HPoint};
use crate::lorentz::{log_map, GroupElement};
use crate::quadrature::gauss_legendre_on;

/// A curve in H^n, smooth on each piece between consecutive breakpoints.
pub trait BaseCurve: Sync {
    fn dim(&self) -> usize;

    /// 0 = b_0 < b_1 < ... < b_m = 1.
    fn breakpoints(&self) -> Vec<f64>;

    /// Point and velocity at `t` computed on the closed piece [b_piece, b_{piece+1}].
    fn eval(&self, piece: usize, t: f64) -> (HPoint, DVector<f64>);

    fn point(&self, t: f64) -> HPoint {
        let b = self.breakpoints();
        self.eval(piece_index(&b, t), t).0
    }
}

/// Index of the piece containing t (the left piece at interior breakpoints).
pub fn piece_index(breaks: &[f64], t: f64) -> usize {
    let m = breaks.len() - 1;
    (0..m).find(|&i| t <= breaks[i + 1]).unwrap_or(m - 1)
}

/// How time is distributed along the segments of a piecewise geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Speed {
    /// Time proportional to hyperbolic length.
    Constant,
    /// Equal time per segment.
    Raw,
}

/// A concatenation of geodesic segments through a list of points.
#[derive(Debug, Clone)]
pub struct PiecewiseGeodesic {
    points: Vec<HPoint>,
    lengths: Vec<f64>,
    breaks: Vec<f64>,
    speed: Speed,
}

impl PiecewiseGeodesic {
    /// Segments of zero length are dropped; a single point gives a constant curve.
    pub fn new(points: &[HPoint], speed: Speed) -> Result<Self> {
        let first = points.first().ok_or(Error::DomainMismatch)?;
        let n = first.dim();
        let mut pts = vec![first.clone()];
        for p in &points[1..] {
            if p.dim() != n {
                return Err(Error::DimensionMismatch(n, p.dim()));
            }
            if distance(pts.last().unwrap(), p) > 1e-14 {
                pts.push(p.clone());
            }
        }
        let lengths: Vec<f64> = pts.windows(2).map(|w| distance(&w[0], &w[1])).collect();
        let breaks = if lengths.is_empty() {
            vec![0.0, 1.0]
        } else {
            let weights: Vec<f64> = match speed {
                Speed::Constant => lengths.clone(),
                Speed::Raw => vec![1.0; lengths.len()],
            };
            let total: f64 = weights.iter().sum();
            let mut acc = 0.0;
            let mut b = vec![0.0];
            for w in &weights[..weights.len() - 1] {
                acc += w;
                b.push(acc / total);
            }
            b.push(1.0);
            b
        };
        Ok(Self { points: pts, lengths, breaks, speed })
    }

    /// Geodesic interpolation of samples taken at uniform times.
    pub fn from_samples(points: &[HPoint]) -> Result<Self> {
        Self::new(points, Speed::Raw)
    }

    pub fn points(&self) -> &[HPoint] {
        &self.points
    }

    pub fn speed(&self) -> Speed {
        self.speed
    }

    pub fn length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.lengths.is_empty()
    }

    /// Speeds |c'| on each piece.
    pub fn piece_speeds(&self) -> Vec<f64> {
        self.lengths
            .iter()
            .enumerate()
            .map(|(i, l)| l / (self.breaks[i + 1] - self.breaks[i]))
            .collect()
    }
}

impl BaseCurve for PiecewiseGeodesic {
    fn dim(&self) -> usize {
        self.points[0].dim()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breaks.clone()
    }

    fn eval(&self, piece: usize, t: f64) -> (HPoint, DVector<f64>) {
        if self.lengths.is_empty() {
            return (self.points[0].clone(), DVector::zeros(self.dim() + 1));
        }
        let (b0, b1) = (self.breaks[piece], self.breaks[piece + 1]);
        let s = ((t - b0) / (b1 - b0)).clamp(0.0, 1.0);
        let (p, q) = (self.points[piece].vec(), self.points[piece + 1].vec());
        let d = self.lengths[piece];
        let sd = d.sinh();
        let point = p * (((1.0 - s) * d).sinh() / sd) + q * ((s * d).sinh() / sd);
        let vel = (p * (-((1.0 - s) * d).cosh()) + q * (s * d).cosh()) * (d / sd / (b1 - b0));
        let point = if s == 0.0 {
            p.clone()
        } else if s == 1.0 {
            q.clone()
        } else {
            point
        };
        (HPoint::renormalize(&point).expect("geodesic point"), vel)
    }
}

/// A curve given by a closure, smooth on each piece, with velocities from a
/// fourth-order central difference evaluated inside the piece.
pub struct FnCurve<F: Fn(f64) -> HPoint + Sync> {
    dim: usize,
    f: F,
    breaks: Vec<f64>,
}

impl<F: Fn(f64) -> HPoint + Sync> FnCurve<F> {
    pub fn new(dim: usize, breaks: Vec<f64>, f: F) -> Self {
        Self { dim, f, breaks }
    }
}

impl<F: Fn(f64) -> HPoint + Sync> BaseCurve for FnCurve<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breaks.clone()
    }

    fn eval(&self, piece: usize, t: f64) -> (HPoint, DVector<f64>) {
        let (b0, b1) = (self.breaks[piece], self.breaks[piece + 1]);
        let h = 1e-4 * (b1 - b0);
        // shift the stencil centre inside the piece near its ends
        let c = t.clamp(b0 + 2.0 * h, b1 - 2.0 * h);
        let f = |x: f64| (self.f)(x).vec().clone();
        let mut v = (f(c - 2.0 * h) - f(c + 2.0 * h) + (f(c + h) - f(c - h)) * 8.0) / (12.0 * h);
        if c != t {
            // second-order Taylor correction for the shifted centre
            let acc = (f(c + h) - f(c) * 2.0 + f(c - h)) / (h * h);
            v += acc * (t - c);
        }
        let p = (self.f)(t);
        let v = p.tangent_part(&v);
        (p, v)
    }
}

/// Cartan section s(p) = exp(X_p) with X_p horizontal and exp(X_p) e = p.
pub fn section(p: &HPoint) -> GroupElement {
    let v = p.vec();
    let n = p.dim();
    let p0 = v[0];
    let w = v.rows(1, n);
    let mut m = DMatrix::zeros(n + 1, n + 1);
    m[(0, 0)] = p0;
    for i in 0..n {
        m[(0, i + 1)] = w[i];
        m[(i + 1, 0)] = w[i];
        for j in 0..n {
            m[(i + 1, j + 1)] = w[i] * w[j] / (1.0 + p0) + if i == j { 1.0 } else { 0.0 };
        }
    }
    GroupElement::from_matrix_unchecked(m)
}

/// Derivative of the section along a tangent vector v at p.
pub fn section_derivative(p: &HPoint, v: &DVector<f64>) -> DMatrix<f64> {
    let x = p.vec();
    let n = p.dim();
    let (p0, dp0) = (x[0], v[0]);
    let mut m = DMatrix::zeros(n + 1, n + 1);
    m[(0, 0)] = dp0;
    let c = 1.0 / (1.0 + p0);
    for i in 0..n {
        m[(0, i + 1)] = v[i + 1];
        m[(i + 1, 0)] = v[i + 1];
        for j in 0..n {
            let (wi, wj, dwi, dwj) = (x[i + 1], x[j + 1], v[i + 1], v[j + 1]);
            m[(i + 1, j + 1)] = (dwi * wj + wi * dwj) * c - wi * wj * dp0 * c * c;
        }
    }
    m
}

/// A curve in G, smooth on each piece.
pub trait GroupCurve: Sync {
    fn dim(&self) -> usize;
    fn breakpoints(&self) -> Vec<f64>;
    /// Value and derivative at t on the given piece.
    fn eval(&self, piece: usize, t: f64) -> (GroupElement, DMatrix<f64>);
}

/// The group curve s o c of a base curve through the Cartan section.
pub struct SectionCurve<'a> {
    pub base: &'a dyn BaseCurve,
}

impl GroupCurve for SectionCurve<'_> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.base.breakpoints()
    }

    fn eval(&self, piece: usize, t: f64) -> (GroupElement, DMatrix<f64>) {
        let (p, v) = self.base.eval(piece, t);
        (section(&p), section_derivative(&p, &v))
    }
}

/// Samples g_i at times t_i, joined by one-parameter subgroups
/// g(t) = g_i exp((t - t_i)/(t_{i+1} - t_i) log(g_i^-1 g_{i+1})).
#[derive(Debug, Clone)]
pub struct SampledGroupPath {
    times: Vec<f64>,
    values: Vec<GroupElement>,
    increments: Vec<DMatrix<f64>>,
}

impl SampledGroupPath {
    pub fn new(times: Vec<f64>, values: Vec<GroupElement>) -> Result<Self> {
        if times.len() != values.len() || times.len() < 2 {
            return Err(Error::DomainMismatch);
        }
        let increments = values
            .windows(2)
            .map(|w| log_map(&(&w[0].inverse() * &w[1])).map(|a| a.mat().clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { times, values, increments })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }
}

impl GroupCurve for SampledGroupPath {
    fn dim(&self) -> usize {
        self.values[0].dim()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.times.clone()
    }

    fn eval(&self, piece: usize, t: f64) -> (GroupElement, DMatrix<f64>) {
        let (t0, t1) = (self.times[piece], self.times[piece + 1]);
        let x = &self.increments[piece] / (t1 - t0);
        let g = &self.values[piece].mat().clone() * (&x * (t - t0)).exp();
        let dg = &g * &x;
        (GroupElement::from_matrix_unchecked(g), dg)
    }
}

/// Which trivialization of the velocity enters the curve distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trivialization {
    /// g^-1 g'
    Left,
    /// g' g^-1
    Right,
}

fn trivialized(g: &GroupElement, dg: &DMatrix<f64>, side: Trivialization) -> DMatrix<f64> {
    match side {
        Trivialization::Left => g.inverse().mat() * dg,
        Trivialization::Right => dg * g.inverse().mat(),
    }
}

fn merged_breaks(a: &[f64], b: &[f64], refine: usize) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    all.sort_by(|x, y| x.total_cmp(y));
    all.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
    let mut out = vec![all[0]];
    for w in all.windows(2) {
        for k in 1..=refine {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / refine as f64);
        }
    }
    out
}

/// rho(h, g) = integral over [0, 1] of || h^-1 h' - g^-1 g' || (left) or
/// || h' h^-1 - g' g^-1 || (right), with Gauss-Legendre quadrature on the
/// common refinement of both breakpoint sets.
pub fn rho_distance(h: &dyn GroupCurve, g: &dyn GroupCurve, side: Trivialization) -> Result<f64> {
    if h.dim() != g.dim() {
        return Err(Error::DimensionMismatch(h.dim(), g.dim()));
    }
    let (bh, bg) = (h.breakpoints(), g.breakpoints());
    let ends_match = |b: &[f64]| (b[0] - 0.0).abs() < 1e-12 && (b[b.len() - 1] - 1.0).abs() < 1e-12;
    if !ends_match(&bh) || !ends_match(&bg) {
        return Err(Error::DomainMismatch);
    }
    let refine = if bh.len() + bg.len() > 200 { 1 } else { 16 };
    let grid = merged_breaks(&bh, &bg, refine);
    let mut total = 0.0;
    for w in grid.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let (ph, pg) = (piece_index(&bh, mid), piece_index(&bg, mid));
        let (x, wts) = gauss_legendre_on(4, w[0], w[1]);
        for (t, wt) in x.iter().zip(&wts) {
            let (gh, dh) = h.eval(ph, *t);
            let (gg, dgg) = g.eval(pg, *t);
            let diff = trivialized(&gh, &dh, side) - trivialized(&gg, &dgg, side);
            total += wt * (0.5 * diff.norm_squared()).sqrt();
        }
    }
    Ok(total)
}

/// Hyperbolic length of a base curve by quadrature of |c'|.
pub fn curve_length(c: &dyn BaseCurve) -> f64 {
    let b = c.breakpoints();
    let mut total = 0.0;
    for i in 0..b.len() - 1 {
        let (x, w) = gauss_legendre_on(16, b[i], b[i + 1]);
        for (t, wt) in x.iter().zip(&w) {
            let (_, v) = c.eval(i, *t);
            total += wt * mink(&v, &v).max(0.0).sqrt();
        }
    }
    total
}
