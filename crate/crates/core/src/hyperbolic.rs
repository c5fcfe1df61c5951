//! The hyperboloid model of H^n: projection from the group, geodesics,
//! distances, signed vertex angles and angle-defect areas of triangles.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::GroupElement;
use crate::tolerance::TOLERANCES;

/// Minkowski inner product -x0 y0 + sum xi yi.
pub fn mink(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a.dot(b) - 2.0 * a[0] * b[0]
}

/// A point of H^n in hyperboloid coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    vec: DVector<f64>,
}

impl HPoint {
    /// Validates the hyperboloid constraint.
    pub fn new(vec: DVector<f64>) -> Result<Self> {
        let r = (mink(&vec, &vec) + 1.0).abs();
        if vec.len() < 3 || r > TOLERANCES.point * (1.0 + vec[0] * vec[0]) || vec[0] < 1.0 - TOLERANCES.point {
            return Err(Error::NotOnHyperboloid(r));
        }
        Ok(Self { vec })
    }

    /// The base point e = (1, 0, ..., 0).
    pub fn base(n: usize) -> Self {
        let mut vec = DVector::zeros(n + 1);
        vec[0] = 1.0;
        Self { vec }
    }

    /// Point with the given spatial part; x0 is recomputed.
    pub fn from_spatial(w: &[f64]) -> Self {
        let x0 = (1.0 + w.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let mut vec = DVector::zeros(w.len() + 1);
        vec[0] = x0;
        for (i, x) in w.iter().enumerate() {
            vec[i + 1] = *x;
        }
        Self { vec }
    }

    /// Re-normalizes an approximate point onto the upper sheet.
    pub fn renormalize(v: &DVector<f64>) -> Result<Self> {
        let q = -mink(v, v);
        if q.is_nan() || q <= 0.0 || v[0] <= 0.0 {
            return Err(Error::NotOnHyperboloid(q));
        }
        Ok(Self { vec: v / q.sqrt() })
    }

    pub fn vec(&self) -> &DVector<f64> {
        &self.vec
    }

    pub fn dim(&self) -> usize {
        self.vec.len() - 1
    }

    /// |<x,x> + 1|.
    pub fn residual(&self) -> f64 {
        (mink(&self.vec, &self.vec) + 1.0).abs()
    }

    /// Projects a Minkowski vector onto the tangent space at this point.
    pub fn tangent_part(&self, v: &DVector<f64>) -> DVector<f64> {
        v + &self.vec * mink(&self.vec, v)
    }

    /// Riemannian exponential at this point.
    pub fn exp(&self, v: &DVector<f64>) -> HPoint {
        let nv = mink(v, v).max(0.0).sqrt();
        if nv < 1e-300 {
            return self.clone();
        }
        HPoint { vec: &self.vec * nv.cosh() + v * (nv.sinh() / nv) }
    }
}

/// pi(g) = g e, the first column of g.
pub fn project(g: &GroupElement) -> HPoint {
    HPoint { vec: g.mat().column(0).into_owned() }
}

/// Hyperbolic distance, evaluated as 2 asinh(|p - q| / 2) for accuracy near 0.
pub fn distance(p: &HPoint, q: &HPoint) -> f64 {
    let d = &p.vec - &q.vec;
    let s = mink(&d, &d).max(0.0).sqrt();
    2.0 * (0.5 * s).asinh()
}

/// Constant-speed geodesic from p (t = 0) to q (t = 1).
pub fn geodesic(p: &HPoint, q: &HPoint, t: f64) -> HPoint {
    if t == 0.0 {
        return p.clone();
    }
    if t == 1.0 {
        return q.clone();
    }
    let d = distance(p, q);
    if d < 1e-300 {
        return p.clone();
    }
    let a = ((1.0 - t) * d).sinh() / d.sinh();
    let b = (t * d).sinh() / d.sinh();
    HPoint { vec: &p.vec * a + &q.vec * b }
}

/// Unit tangent at p of the geodesic towards q.
pub fn unit_tangent(p: &HPoint, q: &HPoint) -> Result<DVector<f64>> {
    let v = p.tangent_part(&q.vec);
    let nv = mink(&v, &v).max(0.0).sqrt();
    if nv < 1e-14 {
        return Err(Error::CoincidentPoints);
    }
    Ok(v / nv)
}

/// A geodesic triangle traversed p -> q -> r -> p.
///
/// `orientation` is +1 when this traversal is positive for the orientation of
/// the triangle's plane and -1 otherwise. Inside the standard slice spanned by
/// x0, x1, x2 the plane is oriented by the frame (E1 e, E2 e).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicTriangle {
    pub p: HPoint,
    pub q: HPoint,
    pub r: HPoint,
    pub orientation: i8,
}

fn in_standard_slice(p: &HPoint) -> bool {
    p.vec.iter().skip(3).all(|x| x.abs() < 1e-14)
}

/// Orientation of p -> q -> r inside the standard slice: positive iff det[p, q, r] < 0.
pub fn slice_orientation(p: &HPoint, q: &HPoint, r: &HPoint) -> Option<i8> {
    if !(in_standard_slice(p) && in_standard_slice(q) && in_standard_slice(r)) {
        return None;
    }
    let m = nalgebra::Matrix3::from_fn(|i, j| [p, q, r][j].vec[i]);
    let det = m.determinant();
    if det.abs() < 1e-300 {
        return None;
    }
    Some(if det < 0.0 { 1 } else { -1 })
}

/// Builds the triangle with geodesic sides through three distinct points.
pub fn totally_geodesic_triangle(a: &HPoint, b: &HPoint, c: &HPoint) -> Result<GeodesicTriangle> {
    if a.dim() != b.dim() || a.dim() != c.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim().max(c.dim())));
    }
    for (x, y) in [(a, b), (b, c), (c, a)] {
        if distance(x, y) < 1e-12 {
            return Err(Error::CoincidentPoints);
        }
    }
    let orientation = slice_orientation(a, b, c).unwrap_or(1);
    Ok(GeodesicTriangle { p: a.clone(), q: b.clone(), r: c.clone(), orientation })
}

impl GeodesicTriangle {
    /// The same triangle traversed backwards.
    pub fn reversed(&self) -> Self {
        Self { p: self.p.clone(), q: self.r.clone(), r: self.q.clone(), orientation: -self.orientation }
    }

    pub fn vertices(&self) -> [&HPoint; 3] {
        [&self.p, &self.q, &self.r]
    }

    /// Point on side `i` (0: p-q, 1: q-r, 2: r-p) at parameter t.
    pub fn side_point(&self, i: usize, t: f64) -> HPoint {
        let v = self.vertices();
        geodesic(v[i], v[(i + 1) % 3], t)
    }

    /// Signed turning angles at p, q, r: at each vertex, the angle from the
    /// outgoing direction to the reversed incoming direction.
    pub fn vertex_angles(&self) -> Result<[f64; 3]> {
        let v = self.vertices();
        let mut out = [0.0; 3];
        for i in 0..3 {
            let here = v[i];
            let next = v[(i + 1) % 3];
            let prev = v[(i + 2) % 3];
            let u = unit_tangent(here, next)?;
            let w = unit_tangent(here, prev)?;
            let c = mink(&u, &w);
            let perp = &w - &u * c;
            let s = mink(&perp, &perp).max(0.0).sqrt();
            if s < 1e-12 {
                return Err(Error::DegenerateTriangle);
            }
            out[i] = f64::from(self.orientation) * s.atan2(c);
        }
        Ok(out)
    }

    /// Angle defect pi - |alpha + beta + gamma|; degenerate triangles give 0.
    pub fn area(&self) -> f64 {
        match self.vertex_angles() {
            Ok([a, b, c]) => (PI - (a + b + c).abs()).max(0.0),
            Err(_) => {
                log::warn!("degenerate triangle: area reported as 0");
                0.0
            }
        }
    }
}

/// Free-function form of [`GeodesicTriangle::vertex_angles`].
pub fn vertex_angles(tri: &GeodesicTriangle) -> Result<[f64; 3]> {
    tri.vertex_angles()
}

/// Free-function form of [`GeodesicTriangle::area`].
pub fn triangle_area(tri: &GeodesicTriangle) -> f64 {
    tri.area()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::{exp_map, psi, AlgebraElement};
    use approx::assert_abs_diff_eq;

    // Polar coordinates in the oriented frame (E1 e, E2 e) = (d/dx2, d/dx1).
    fn slice_point(r: f64, theta: f64) -> HPoint {
        HPoint::from_spatial(&[r.sinh() * theta.sin(), r.sinh() * theta.cos()])
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project(&GroupElement::identity(2)), HPoint::base(2));
        assert!((project(&psi(2, 0.4)).vec() - HPoint::base(2).vec()).amax() < 1e-16);
        let t = 0.5_f64;
        let p = project(&exp_map(&AlgebraElement::e1(2).scale(t)));
        assert_abs_diff_eq!(p.vec()[0], 1.1276259652063807, epsilon = 1e-15);
        assert_abs_diff_eq!(p.vec()[1], 0.0);
        assert_abs_diff_eq!(p.vec()[2], 0.5210953054937474, epsilon = 1e-15);
    }

    #[test]
    fn distance_examples() {
        let p = slice_point(0.7, 0.3);
        assert_eq!(distance(&p, &p), 0.0);
        for t in [1e-6, 0.1, 1.0, 3.0] {
            let q = project(&exp_map(&AlgebraElement::e1(3).scale(t)));
            assert_abs_diff_eq!(distance(&HPoint::base(3), &q), t, epsilon = 1e-13 * (1.0 + t));
        }
        let q = slice_point(1.5, 2.0);
        let m = geodesic(&p, &q, 0.5);
        assert_abs_diff_eq!(distance(&p, &m), distance(&m, &q), epsilon = 1e-13);
        assert_eq!(geodesic(&p, &q, 1.0), q);
    }

    #[test]
    fn equilateral_angles_flip_with_orientation() {
        let pts: Vec<HPoint> = (0..3).map(|k| slice_point(1.0, 2.0 * PI * k as f64 / 3.0)).collect();
        let tri = totally_geodesic_triangle(&pts[0], &pts[1], &pts[2]).unwrap();
        let a = tri.vertex_angles().unwrap();
        assert!(a.iter().all(|x| *x > 0.0));
        assert_abs_diff_eq!(a[0], a[1], epsilon = 1e-13);
        assert_abs_diff_eq!(a[1], a[2], epsilon = 1e-13);
        let b = tri.reversed().vertex_angles().unwrap();
        assert_abs_diff_eq!(b[0], -a[0], epsilon = 1e-13);
        assert_abs_diff_eq!(tri.area(), tri.reversed().area(), epsilon = 1e-14);
    }

    #[test]
    fn right_isoceles_triangle() {
        let e = HPoint::base(2);
        let a = project(&exp_map(&AlgebraElement::e1(2)));
        let b = project(&exp_map(&AlgebraElement::e2(2)));
        let tri = totally_geodesic_triangle(&e, &a, &b).unwrap();
        assert_eq!(tri.orientation, 1);
        let ang = tri.vertex_angles().unwrap();
        assert_abs_diff_eq!(ang[0], PI / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ang[1], 0.5750061825784119, epsilon = 1e-13);
        assert_abs_diff_eq!(ang[2], 0.5750061825784119, epsilon = 1e-13);
        assert_abs_diff_eq!(tri.area(), 0.4207839616380729, epsilon = 1e-13);
    }

    #[test]
    fn coincident_points_rejected() {
        let e = HPoint::base(2);
        let q = slice_point(1.0, 0.0);
        assert_eq!(totally_geodesic_triangle(&e, &e, &q), Err(Error::CoincidentPoints));
    }

    #[test]
    fn degenerate_triangle_has_zero_area() {
        let p = slice_point(1.0, 0.0);
        let q = slice_point(1.0, PI);
        let tri = totally_geodesic_triangle(&p, &HPoint::base(2), &q).unwrap();
        assert_eq!(tri.vertex_angles(), Err(Error::DegenerateTriangle));
        assert_eq!(tri.area(), 0.0);
    }
}
