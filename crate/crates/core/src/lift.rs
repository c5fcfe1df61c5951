//! The connection of G -> H^n: horizontal lifts, holonomy, and the curve
//! distance rho with its contraction and continuity properties.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{distance, mink, project, HPoint};
use crate::lorentz::{bracket_unchecked, exp_map, AlgebraElement, GroupElement};
use crate::path::{
    curve_length, piece_index, rho_distance, section, section_derivative, BaseCurve, PiecewiseGeodesic,
    SampledGroupPath, SectionCurve, Speed, Trivialization,
};
use crate::quadrature::gauss_legendre_on;
use crate::tolerance::TOLERANCES;

/// omega_g(g v) = vertical part of v, for a tangent vector written as g v.
pub fn connection_form(_g: &GroupElement, v: &AlgebraElement) -> AlgebraElement {
    v.vertical()
}

/// Output of a horizontal lift.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftResult {
    pub times: Vec<f64>,
    /// The horizontal curve h(t) a(t) k0 at each time.
    pub lifted: Vec<GroupElement>,
    /// The fiber clock a(t) in K, a(0) = e.
    pub fiber_clock: Vec<GroupElement>,
    /// start^-1 lift(1) when the curve is a loop.
    pub endpoint_holonomy: Option<GroupElement>,
}

impl LiftResult {
    pub fn endpoint(&self) -> &GroupElement {
        self.lifted.last().expect("non-empty lift")
    }
}

/// -vertical(h^-1 h') for h = s o c at time t on the given piece.
fn clock_generator(curve: &dyn BaseCurve, piece: usize, t: f64) -> Result<DMatrix<f64>> {
    let (p, v) = curve.eval(piece, t);
    if v.iter().any(|x| !x.is_finite()) || p.vec().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let h = section(&p);
    let dh = section_derivative(&p, &v);
    let x = AlgebraElement::from_matrix_unchecked(h.inverse().mat() * dh);
    Ok(-x.vertical().mat())
}

fn dexpinv(u: &AlgebraElement, a: &AlgebraElement) -> AlgebraElement {
    let ua = bracket_unchecked(u, a);
    let uua = bracket_unchecked(u, &ua);
    &(a - &ua.scale(0.5)) + &uua.scale(1.0 / 12.0)
}

/// One Runge-Kutta-Munthe-Kaas step of order four for y' = A(t) y.
fn rkmk4_step(
    y: &GroupElement,
    a0: &AlgebraElement,
    am: &AlgebraElement,
    a1: &AlgebraElement,
    h: f64,
) -> GroupElement {
    let k1 = a0.scale(h);
    let k2 = dexpinv(&k1.scale(0.5), am).scale(h);
    let k3 = dexpinv(&k2.scale(0.5), am).scale(h);
    let k4 = dexpinv(&k3, a1).scale(h);
    let theta = (&(&k1 + &k2.scale(2.0)) + &(&k3.scale(2.0) + &k4)).scale(1.0 / 6.0);
    &exp_map(&theta) * y
}

/// Horizontal lift of `curve` starting at `start` (which must lie over curve(0)).
///
/// The fiber clock solves a' a^-1 = -vertical(h^-1 h') with h the section
/// along the curve; each smooth piece is integrated with steps of at most
/// `step` in arc length.
pub fn horizontal_lift(curve: &dyn BaseCurve, start: &GroupElement, step: f64) -> Result<LiftResult> {
    let n = curve.dim();
    if start.dim() != n {
        return Err(Error::DimensionMismatch(start.dim(), n));
    }
    let p0 = curve.point(0.0);
    let gap = distance(&project(start), &p0);
    if gap > TOLERANCES.point {
        return Err(Error::StartMismatch(gap));
    }
    let k0 = &section(&p0).inverse() * start;
    let breaks = curve.breakpoints();
    let mut times = vec![0.0];
    let mut clock = vec![GroupElement::identity(n)];
    let mut a = GroupElement::identity(n);
    let mut count = 0usize;
    for piece in 0..breaks.len() - 1 {
        let (b0, b1) = (breaks[piece], breaks[piece + 1]);
        let (xs, ws) = gauss_legendre_on(8, b0, b1);
        let len: f64 = xs
            .iter()
            .zip(&ws)
            .map(|(t, w)| {
                let v = curve.eval(piece, *t).1;
                w * mink(&v, &v).max(0.0).sqrt()
            })
            .sum();
        let m = ((len / step).ceil() as usize).max(1);
        let dt = (b1 - b0) / m as f64;
        let mut gen0 = AlgebraElement::from_matrix_unchecked(clock_generator(curve, piece, b0)?);
        for i in 0..m {
            let t = b0 + i as f64 * dt;
            let t1 = if i + 1 == m { b1 } else { t + dt };
            let genm = AlgebraElement::from_matrix_unchecked(clock_generator(curve, piece, t + 0.5 * dt)?);
            let gen1 = AlgebraElement::from_matrix_unchecked(clock_generator(curve, piece, t1)?);
            a = rkmk4_step(&a, &gen0, &genm, &gen1, dt);
            count += 1;
            if count.is_multiple_of(TOLERANCES.reprojection_interval) {
                a = a.reproject();
            }
            if a.mat().iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
            times.push(t1);
            clock.push(a.clone());
            gen0 = gen1;
        }
    }
    let lifted: Vec<GroupElement> = times
        .iter()
        .zip(&clock)
        .map(|(t, a)| {
            let p = curve.eval(piece_index(&breaks, *t), *t).0;
            &(&section(&p) * a) * &k0
        })
        .collect();
    let closed = distance(&curve.point(1.0), &p0) <= TOLERANCES.loop_closure;
    let endpoint_holonomy = closed.then(|| &start.inverse() * lifted.last().unwrap());
    Ok(LiftResult { times, lifted, fiber_clock: clock, endpoint_holonomy })
}

/// Repeats the lift with halved steps until the endpoint moves by less than `tol`.
pub fn horizontal_lift_adaptive(
    curve: &dyn BaseCurve,
    start: &GroupElement,
    step: f64,
    tol: f64,
) -> Result<LiftResult> {
    let mut h = step;
    let mut prev = horizontal_lift(curve, start, h)?;
    for _ in 0..8 {
        h *= 0.5;
        let next = horizontal_lift(curve, start, h)?;
        let change = crate::lorentz::max_abs(&(next.endpoint().mat() - prev.endpoint().mat()));
        prev = next;
        if change < tol {
            break;
        }
    }
    Ok(prev)
}

/// The horizontal element X with exp(X) e = q for a point q.
pub fn horizontal_generator(q: &HPoint) -> AlgebraElement {
    let v = q.vec();
    let n = q.dim();
    let w = v.rows(1, n).into_owned();
    let s = w.norm();
    if s < 1e-300 {
        return AlgebraElement::zero(n);
    }
    AlgebraElement::horizontal_from_vector(&(w * (s.asinh() / s)))
}

/// Exact lift of a piecewise geodesic through `points`: the values at the
/// vertices, g_{i+1} = g_i exp(X_i) with exp(X_i) e = g_i^-1 p_{i+1}.
pub fn lift_vertices(points: &[HPoint], start: &GroupElement) -> Result<Vec<GroupElement>> {
    let gap = distance(&project(start), &points[0]);
    if gap > TOLERANCES.point {
        return Err(Error::StartMismatch(gap));
    }
    let mut out = Vec::with_capacity(points.len());
    let mut g = start.clone();
    out.push(g.clone());
    for (i, q) in points[1..].iter().enumerate() {
        let local = HPoint::renormalize(&g.inverse().act(q.vec()))?;
        g = &g * &section(&local);
        if (i + 1) % TOLERANCES.reprojection_interval == 0 {
            g = g.reproject();
        }
        out.push(g.clone());
    }
    Ok(out)
}

/// Endpoint of the exact lift of a piecewise geodesic.
pub fn lift_endpoint(points: &[HPoint], start: &GroupElement) -> Result<GroupElement> {
    Ok(lift_vertices(points, start)?.pop().expect("non-empty"))
}

/// Holonomy k of a loop: the lift from `basefiber` ends at basefiber k.
pub fn holonomy(lp: &dyn BaseCurve, basefiber: &GroupElement, step: f64) -> Result<GroupElement> {
    let gap = distance(&lp.point(0.0), &lp.point(1.0));
    if gap > TOLERANCES.loop_closure {
        return Err(Error::NotALoop(gap));
    }
    let lift = horizontal_lift(lp, basefiber, step)?;
    Ok(lift.endpoint_holonomy.expect("closed loop").reproject())
}

/// Holonomy of a closed piecewise geodesic through `points`, via exact segment lifts.
pub fn holonomy_piecewise_geodesic(points: &[HPoint], basefiber: &GroupElement) -> Result<GroupElement> {
    let gap = distance(&points[0], points.last().unwrap());
    if gap > TOLERANCES.loop_closure {
        return Err(Error::NotALoop(gap));
    }
    let end = lift_endpoint(points, basefiber)?;
    Ok((&basefiber.inverse() * &end).reproject())
}

/// A base curve perturbed by eps t W(t) in its spatial coordinates, where W is
/// a random trigonometric vector field; the perturbation vanishes at t = 0.
pub struct PerturbedCurve<'a> {
    base: &'a dyn BaseCurve,
    eps: f64,
    coeffs: Vec<(DVector<f64>, DVector<f64>)>,
}

impl<'a> PerturbedCurve<'a> {
    pub fn new(base: &'a dyn BaseCurve, eps: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = base.dim();
        let coeffs = (0..3)
            .map(|_| {
                let a = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
                let b = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
                (a, b)
            })
            .collect();
        Self { base, eps, coeffs }
    }

    fn field(&self, t: f64) -> (DVector<f64>, DVector<f64>) {
        let n = self.base.dim();
        let mut w = DVector::zeros(n);
        let mut dw = DVector::zeros(n);
        for (k, (a, b)) in self.coeffs.iter().enumerate() {
            let f = (k + 1) as f64 * std::f64::consts::PI;
            w += a * (f * t).sin() + b * (f * t).cos();
            dw += a * (f * (f * t).cos()) - b * (f * (f * t).sin());
        }
        (w, dw)
    }
}

impl BaseCurve for PerturbedCurve<'_> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.base.breakpoints()
    }

    fn eval(&self, piece: usize, t: f64) -> (HPoint, DVector<f64>) {
        let n = self.dim();
        let (p, v) = self.base.eval(piece, t);
        let (w, dw) = self.field(t);
        let x = p.vec().rows(1, n) + &w * (self.eps * t);
        let dx = v.rows(1, n) + (&w + &dw * t) * self.eps;
        let q = HPoint::from_spatial(x.as_slice());
        let x0 = q.vec()[0];
        let mut vel = DVector::zeros(n + 1);
        vel[0] = x.dot(&dx) / x0;
        vel.rows_mut(1, n).copy_from(&dx);
        (q, vel)
    }
}

/// Distance ||log(a^-1 b)|| between fiber clock endpoints.
pub fn fiber_distance(a: &GroupElement, b: &GroupElement) -> Result<f64> {
    a.distance(b)
}

/// Measures (rho(h, h_eps), d(w_h(1), w_{h_eps}(1))) for a seeded perturbation of
/// size `scale`; h and h_eps are the section curves of the base curves.
pub fn endpoint_continuity_probe(curve: &dyn BaseCurve, scale: f64, seed: u64, step: f64) -> Result<(f64, f64)> {
    let pert = PerturbedCurve::new(curve, scale, seed);
    let start = section(&curve.point(0.0));
    let base_lift = horizontal_lift(curve, &start, step)?;
    let pert_lift = horizontal_lift(&pert, &start, step)?;
    let rho_in = rho_distance(&SectionCurve { base: curve }, &SectionCurve { base: &pert }, Trivialization::Left)?;
    let dist_out = fiber_distance(
        base_lift.fiber_clock.last().unwrap(),
        pert_lift.fiber_clock.last().unwrap(),
    )?;
    Ok((rho_in, dist_out))
}

/// Both sides of the contraction inequality for a pair of base curves.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ContractionSample {
    /// rho between fiber clocks, right trivialized, from integrated samples.
    pub rho_clock: f64,
    /// rho between section curves, left trivialized.
    pub rho_left: f64,
    /// rho between section curves, right trivialized.
    pub rho_right: f64,
}

/// Evaluates rho(w_h, w_g) and rho(h, g) for the section curves of two base curves.
pub fn contraction_sample(h: &dyn BaseCurve, g: &dyn BaseCurve, step: f64) -> Result<ContractionSample> {
    let lh = horizontal_lift(h, &section(&h.point(0.0)), step)?;
    let lg = horizontal_lift(g, &section(&g.point(0.0)), step)?;
    let wh = SampledGroupPath::new(lh.times.clone(), lh.fiber_clock.clone())?;
    let wg = SampledGroupPath::new(lg.times.clone(), lg.fiber_clock.clone())?;
    let (sh, sg) = (SectionCurve { base: h }, SectionCurve { base: g });
    Ok(ContractionSample {
        rho_clock: rho_distance(&wh, &wg, Trivialization::Right)?,
        rho_left: rho_distance(&sh, &sg, Trivialization::Left)?,
        rho_right: rho_distance(&sh, &sg, Trivialization::Right)?,
    })
}

/// Closed piecewise geodesic through the given vertices, starting and ending at the first.
pub fn polygon_loop(vertices: &[HPoint]) -> Result<PiecewiseGeodesic> {
    let mut pts = vertices.to_vec();
    pts.push(vertices[0].clone());
    PiecewiseGeodesic::new(&pts, Speed::Constant)
}

/// Hyperbolic length of the curve.
pub fn length(curve: &dyn BaseCurve) -> f64 {
    curve_length(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::totally_geodesic_triangle;
    use crate::lorentz::{max_abs, psi};

    #[test]
    fn connection_form_examples() {
        let e = GroupElement::identity(2);
        assert_eq!(connection_form(&e, &AlgebraElement::e3(2)), AlgebraElement::e3(2));
        assert_eq!(connection_form(&e, &AlgebraElement::e1(2)), AlgebraElement::zero(2));
    }

    #[test]
    fn constant_curve_lifts_to_constant() {
        let c = PiecewiseGeodesic::new(&[HPoint::base(2)], Speed::Constant).unwrap();
        let l = horizontal_lift(&c, &GroupElement::identity(2), 1e-2).unwrap();
        assert!(max_abs(&(l.endpoint().mat() - GroupElement::identity(2).mat())) < 1e-15);
    }

    #[test]
    fn geodesic_lift_is_one_parameter_subgroup() {
        let x = AlgebraElement::e1(3).scale(0.8);
        let q = project(&exp_map(&x));
        let c = PiecewiseGeodesic::new(&[HPoint::base(3), q], Speed::Constant).unwrap();
        let l = horizontal_lift(&c, &GroupElement::identity(3), 1e-2).unwrap();
        for (t, g) in l.times.iter().zip(&l.lifted) {
            assert!(max_abs(&(g.mat() - exp_map(&x.scale(*t)).mat())) < 1e-12);
        }
    }

    #[test]
    fn triangle_holonomy_is_psi_of_signed_area() {
        let a = HPoint::from_spatial(&[0.4, -0.3]);
        let b = HPoint::from_spatial(&[-0.2, 0.9]);
        let tri = totally_geodesic_triangle(&HPoint::base(2), &a, &b).unwrap();
        let area = tri.area();
        let delta = f64::from(tri.orientation);
        let lp = polygon_loop(&[HPoint::base(2), a, b]).unwrap();
        let hol = holonomy(&lp, &GroupElement::identity(2), 1e-3).unwrap();
        let expected = psi(2, delta * area);
        assert!(max_abs(&(hol.mat() - expected.mat())) < 1e-10);
        let exact = holonomy_piecewise_geodesic(lp.points(), &GroupElement::identity(2)).unwrap();
        assert!(max_abs(&(exact.mat() - expected.mat())) < 1e-12);
    }

    #[test]
    fn open_curve_rejected_as_loop() {
        let c = PiecewiseGeodesic::new(&[HPoint::base(2), HPoint::from_spatial(&[1.0, 0.0])], Speed::Constant)
            .unwrap();
        assert!(matches!(holonomy(&c, &GroupElement::identity(2), 1e-2), Err(Error::NotALoop(_))));
    }

    #[test]
    fn start_must_lie_over_curve() {
        let c = PiecewiseGeodesic::new(&[HPoint::base(2), HPoint::from_spatial(&[1.0, 0.0])], Speed::Constant)
            .unwrap();
        let g = exp_map(&AlgebraElement::e1(2));
        assert!(matches!(horizontal_lift(&c, &g, 1e-2), Err(Error::StartMismatch(_))));
    }

    #[test]
    fn zero_perturbation_probe() {
        let c = PiecewiseGeodesic::new(&[HPoint::base(2), HPoint::from_spatial(&[1.0, 0.5])], Speed::Constant)
            .unwrap();
        let (r, d) = endpoint_continuity_probe(&c, 0.0, 1, 1e-2).unwrap();
        assert!(r < 1e-14 && d < 1e-12);
    }
}
