//! Embedded disks Phi: D^2 -> H^n with Phi(0, -1) = e, their numeric area,
//! and the built-in disk families.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{mink, HPoint};
use crate::quadrature::gauss_legendre_on;

/// The base point of the unit circle, mapped to e by every embedding.
pub const DISK_BASEPOINT: (f64, f64) = (0.0, -1.0);

/// A smooth map from (a neighbourhood of) the unit disk into H^n.
pub trait DiskEmbedding: Sync + Send {
    fn dim(&self) -> usize;

    fn point(&self, u: f64, v: f64) -> HPoint;

    /// Partial derivatives by a fourth-order central difference.
    fn jacobian(&self, u: f64, v: f64) -> (DVector<f64>, DVector<f64>) {
        let h = 1e-4;
        let f = |a: f64, b: f64| self.point(a, b).vec().clone();
        let du = (f(u - 2.0 * h, v) - f(u + 2.0 * h, v) + (f(u + h, v) - f(u - h, v)) * 8.0) / (12.0 * h);
        let dv = (f(u, v - 2.0 * h) - f(u, v + 2.0 * h) + (f(u, v + h) - f(u, v - h)) * 8.0) / (12.0 * h);
        (du, dv)
    }

    fn name(&self) -> String;
}

/// sqrt(det) of the induced metric at (u, v).
pub fn area_density(phi: &dyn DiskEmbedding, u: f64, v: f64) -> f64 {
    let (du, dv) = phi.jacobian(u, v);
    let (a, b, c) = (mink(&du, &du), mink(&du, &dv), mink(&dv, &dv));
    (a * c - b * b).max(0.0).sqrt()
}

/// Checks the base point constraint and that the Jacobian has rank 2 on a
/// polar sample grid.
pub fn check_embedding(phi: &dyn DiskEmbedding) -> Result<()> {
    let base = phi.point(DISK_BASEPOINT.0, DISK_BASEPOINT.1);
    if (base.vec() - HPoint::base(phi.dim()).vec()).amax() > 1e-9 {
        return Err(Error::InvalidDisk(format!("{} does not send the base point to e", phi.name())));
    }
    for i in 0..=8 {
        let rho = i as f64 / 8.0;
        for j in 0..16 {
            let th = 2.0 * PI * j as f64 / 16.0;
            let (u, v) = (rho * th.cos(), rho * th.sin());
            let (du, dv) = phi.jacobian(u, v);
            let (a, b, c) = (mink(&du, &du), mink(&du, &dv), mink(&dv, &dv));
            if a * c - b * b <= 1e-10 * (a * c).max(1e-300) {
                return Err(Error::RankDeficient(u, v));
            }
        }
    }
    Ok(())
}

/// Area of Phi(D^2) by a Gauss-Legendre tensor rule in polar coordinates
/// with `resolution` nodes in each direction.
pub fn disk_area(phi: &dyn DiskEmbedding, resolution: usize) -> Result<f64> {
    let (rs, rw) = gauss_legendre_on(resolution, 0.0, 1.0);
    let (ts, tw) = gauss_legendre_on(resolution, 0.0, 2.0 * PI);
    let rows: Vec<Result<f64>> = ts
        .par_iter()
        .zip(tw.par_iter())
        .map(|(th, wt)| {
            let mut acc = 0.0;
            for (rho, wr) in rs.iter().zip(&rw) {
                let (u, v) = (rho * th.cos(), rho * th.sin());
                let (du, dv) = phi.jacobian(u, v);
                let (a, b, c) = (mink(&du, &du), mink(&du, &dv), mink(&dv, &dv));
                let det = a * c - b * b;
                if det <= 1e-12 * (a * c).max(1e-300) {
                    return Err(Error::RankDeficient(u, v));
                }
                acc += wr * det.sqrt() * rho;
            }
            Ok(acc * wt)
        })
        .collect();
    rows.into_iter().sum()
}

fn slice_boost(r: f64) -> (f64, f64) {
    (r.cosh(), r.sinh())
}

/// Geodesic disk of radius r in the standard slice:
/// Phi(u, v) = exp(r E2) exp(r (u E1 + v E2)) e.
#[derive(Debug, Clone)]
pub struct GeodesicDisk {
    pub n: usize,
    pub radius: f64,
}

impl GeodesicDisk {
    /// Slice coordinates (x0, x1, x2) of Phi(u, v).
    fn slice_coords(&self, u: f64, v: f64) -> [f64; 3] {
        let r = self.radius;
        let rho = (u * u + v * v).sqrt();
        let (ch, sh_over) = if rho < 1e-12 {
            (1.0, r)
        } else {
            ((r * rho).cosh(), (r * rho).sinh() / rho)
        };
        // exp(r(uE1 + vE2)) e = (cosh, v sinh/rho, u sinh/rho)
        let (y0, y1, y2) = (ch, v * sh_over, u * sh_over);
        let (c, s) = slice_boost(r);
        [c * y0 + s * y1, s * y0 + c * y1, y2]
    }

    fn embed(&self, x: [f64; 3]) -> HPoint {
        let mut spatial = vec![0.0; self.n];
        spatial[0] = x[1];
        spatial[1] = x[2];
        HPoint::from_spatial(&spatial)
    }

    /// Closed-form area 2 pi (cosh r - 1).
    pub fn exact_area(&self) -> f64 {
        2.0 * PI * (self.radius.cosh() - 1.0)
    }
}

impl DiskEmbedding for GeodesicDisk {
    fn dim(&self) -> usize {
        self.n
    }

    fn point(&self, u: f64, v: f64) -> HPoint {
        self.embed(self.slice_coords(u, v))
    }

    fn name(&self) -> String {
        format!("geodesic-disk(r={})", self.radius)
    }
}

/// A geodesic disk rotated out of the standard slice by `tilt` in the (x2, x3) plane.
#[derive(Debug, Clone)]
pub struct TiltedGeodesicDisk {
    pub flat: GeodesicDisk,
    pub tilt: f64,
}

impl DiskEmbedding for TiltedGeodesicDisk {
    fn dim(&self) -> usize {
        self.flat.n
    }

    fn point(&self, u: f64, v: f64) -> HPoint {
        let x = self.flat.slice_coords(u, v);
        let mut spatial = vec![0.0; self.flat.n];
        spatial[0] = x[1];
        spatial[1] = x[2] * self.tilt.cos();
        spatial[2] = x[2] * self.tilt.sin();
        HPoint::from_spatial(&spatial)
    }

    fn name(&self) -> String {
        format!("tilted-geodesic-disk(r={}, tilt={})", self.flat.radius, self.tilt)
    }
}

/// A geodesic disk pushed along the x3 direction by the normal distance
/// h(u, v) = amplitude ((u^2 + (v + 1)^2) / 4) cos(frequency pi u),
/// which vanishes only at the base point.
#[derive(Debug, Clone)]
pub struct BumpedDisk {
    pub flat: GeodesicDisk,
    pub amplitude: f64,
    pub frequency: f64,
}

impl BumpedDisk {
    fn height(&self, u: f64, v: f64) -> f64 {
        self.amplitude * 0.25 * (u * u + (v + 1.0) * (v + 1.0)) * (self.frequency * PI * u).cos()
    }
}

impl DiskEmbedding for BumpedDisk {
    fn dim(&self) -> usize {
        self.flat.n
    }

    fn point(&self, u: f64, v: f64) -> HPoint {
        let x = self.flat.slice_coords(u, v);
        let h = self.height(u, v);
        let mut spatial = vec![0.0; self.flat.n];
        spatial[0] = h.cosh() * x[1];
        spatial[1] = h.cosh() * x[2];
        spatial[2] = h.sinh();
        HPoint::from_spatial(&spatial)
    }

    fn name(&self) -> String {
        format!(
            "bumped-disk(r={}, amplitude={}, frequency={})",
            self.flat.radius, self.amplitude, self.frequency
        )
    }
}

/// A disk tabulated on a regular (u, v) grid covering [-1, 1]^2, interpolated
/// bilinearly and renormalized onto the hyperboloid.
#[derive(Debug, Clone)]
pub struct GridDisk {
    n: usize,
    us: Vec<f64>,
    vs: Vec<f64>,
    values: Vec<DVector<f64>>,
}

impl GridDisk {
    /// Reads rows `u, v, x0, ..., xn`.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).from_path(path)?;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|s| s.trim().parse::<f64>().map_err(|e| Error::InvalidDisk(format!("bad number {s:?}: {e}"))))
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let width = rows.first().map(|r| r.len()).ok_or_else(|| Error::InvalidDisk("empty grid".into()))?;
        if width < 5 || rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidDisk("rows must read u, v, x0..xn with n >= 2".into()));
        }
        let n = width - 3;
        let mut us: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let mut vs: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        for axis in [&mut us, &mut vs] {
            axis.sort_by(|a, b| a.total_cmp(b));
            axis.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        }
        if us.len() < 2 || vs.len() < 2 || us.len() * vs.len() != rows.len() {
            return Err(Error::InvalidDisk("samples do not form a full grid".into()));
        }
        if us[0] > -1.0 + 1e-12 || vs[0] > -1.0 + 1e-12 || *us.last().unwrap() < 1.0 - 1e-12 || *vs.last().unwrap() < 1.0 - 1e-12 {
            return Err(Error::InvalidDisk("grid must cover [-1, 1]^2".into()));
        }
        let mut values = vec![DVector::zeros(0); rows.len()];
        for r in rows {
            let i = us.iter().position(|u| (u - r[0]).abs() < 1e-12).unwrap();
            let j = vs.iter().position(|v| (v - r[1]).abs() < 1e-12).unwrap();
            values[j * us.len() + i] = DVector::from_column_slice(&r[2..]);
        }
        Ok(Self { n, us, vs, values })
    }

    fn cell(axis: &[f64], x: f64) -> (usize, f64) {
        let k = match axis.iter().position(|a| *a > x) {
            Some(0) => 0,
            Some(k) => k - 1,
            None => axis.len() - 2,
        }
        .min(axis.len() - 2);
        (k, (x - axis[k]) / (axis[k + 1] - axis[k]))
    }
}

impl DiskEmbedding for GridDisk {
    fn dim(&self) -> usize {
        self.n
    }

    fn point(&self, u: f64, v: f64) -> HPoint {
        let (i, a) = Self::cell(&self.us, u);
        let (j, b) = Self::cell(&self.vs, v);
        let w = self.us.len();
        let val = |ii: usize, jj: usize| &self.values[jj * w + ii];
        let x = val(i, j) * ((1.0 - a) * (1.0 - b))
            + val(i + 1, j) * (a * (1.0 - b))
            + val(i, j + 1) * ((1.0 - a) * b)
            + val(i + 1, j + 1) * (a * b);
        HPoint::renormalize(&x).expect("grid values lie on the upper sheet")
    }

    fn name(&self) -> String {
        format!("grid-disk({}x{})", self.us.len(), self.vs.len())
    }
}

/// The named disk families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum DiskFamily {
    GeodesicDisk { radius: f64 },
    TiltedGeodesicDisk { radius: f64, tilt: f64 },
    BumpedDisk { radius: f64, amplitude: f64, frequency: f64 },
}

impl DiskFamily {
    pub fn name(&self) -> &'static str {
        match self {
            DiskFamily::GeodesicDisk { .. } => "geodesic-disk",
            DiskFamily::TiltedGeodesicDisk { .. } => "tilted-geodesic-disk",
            DiskFamily::BumpedDisk { .. } => "bumped-disk",
        }
    }

    /// Builds the embedding in H^n and checks it.
    pub fn build(&self, n: usize) -> Result<Box<dyn DiskEmbedding>> {
        if n < 2 {
            return Err(Error::UnsupportedDimension(n, 2));
        }
        let out: Box<dyn DiskEmbedding> = match *self {
            DiskFamily::GeodesicDisk { radius } => {
                check_radius(radius)?;
                Box::new(GeodesicDisk { n, radius })
            }
            DiskFamily::TiltedGeodesicDisk { radius, tilt } => {
                check_radius(radius)?;
                if n < 3 {
                    return Err(Error::UnsupportedDimension(n, 3));
                }
                Box::new(TiltedGeodesicDisk { flat: GeodesicDisk { n, radius }, tilt })
            }
            DiskFamily::BumpedDisk { radius, amplitude, frequency } => {
                check_radius(radius)?;
                if n < 3 {
                    return Err(Error::UnsupportedDimension(n, 3));
                }
                Box::new(BumpedDisk { flat: GeodesicDisk { n, radius }, amplitude, frequency })
            }
        };
        check_embedding(out.as_ref())?;
        Ok(out)
    }

    /// True when the disk lies in the standard slice spanned by x0, x1, x2.
    pub fn in_standard_slice(&self) -> bool {
        matches!(self, DiskFamily::GeodesicDisk { .. })
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidDisk(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

/// Point of the boundary circle at parameter t in [0, 1], starting at the base
/// point and running counterclockwise for orientation +1.
pub fn boundary_uv(t: f64, orientation: i8) -> (f64, f64) {
    let th = -PI / 2.0 + f64::from(orientation) * 2.0 * PI * t;
    (th.cos(), th.sin())
}

/// Matrix with the Jacobian columns, for inspection.
pub fn jacobian_matrix(phi: &dyn DiskEmbedding, u: f64, v: f64) -> DMatrix<f64> {
    let (du, dv) = phi.jacobian(u, v);
    DMatrix::from_columns(&[du, dv])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geodesic_disk_area_matches_closed_form() {
        let d = GeodesicDisk { n: 2, radius: 0.8 };
        let a = disk_area(&d, 64).unwrap();
        assert!((a - 2.1201662967515325).abs() < 1e-9, "{a}");
        assert_eq!(d.point(0.0, -1.0), HPoint::base(2));
    }

    #[test]
    fn families_satisfy_constraints() {
        for fam in [
            DiskFamily::GeodesicDisk { radius: 0.8 },
            DiskFamily::TiltedGeodesicDisk { radius: 0.8, tilt: 0.6 },
            DiskFamily::BumpedDisk { radius: 0.8, amplitude: 0.3, frequency: 1.0 },
        ] {
            let d = fam.build(3).unwrap();
            let p = d.point(0.3, -0.2);
            assert!(p.residual() < 1e-12);
        }
        assert!(DiskFamily::BumpedDisk { radius: 0.8, amplitude: 0.3, frequency: 1.0 }.build(2).is_err());
        assert!(DiskFamily::GeodesicDisk { radius: -1.0 }.build(2).is_err());
    }

    #[test]
    fn tilted_disk_has_same_area() {
        let fam = DiskFamily::TiltedGeodesicDisk { radius: 0.5, tilt: 1.1 };
        let a = disk_area(fam.build(3).unwrap().as_ref(), 64).unwrap();
        assert!((a - 2.0 * PI * (0.5f64.cosh() - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn grid_disk_reproduces_flat_disk() {
        let d = GeodesicDisk { n: 2, radius: 0.5 };
        let m = 41;
        let mut rows = Vec::new();
        for j in 0..m {
            for i in 0..m {
                let (u, v) = (-1.0 + 2.0 * i as f64 / (m - 1) as f64, -1.0 + 2.0 * j as f64 / (m - 1) as f64);
                let p = d.point(u, v);
                rows.push(vec![u, v, p.vec()[0], p.vec()[1], p.vec()[2]]);
            }
        }
        let g = GridDisk::from_rows(&rows).unwrap();
        assert!((g.point(0.0, -1.0).vec() - HPoint::base(2).vec()).amax() < 1e-12);
        let q = g.point(0.13, 0.41);
        assert!((q.vec() - d.point(0.13, 0.41).vec()).amax() < 1e-3);
        assert!(GridDisk::from_rows(&rows[1..]).is_err());
    }
}
