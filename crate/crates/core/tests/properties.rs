use std::cmp::Ordering;

use holonomy_core::curves::*;
use holonomy_core::disk::*;
use holonomy_core::grid::*;
use holonomy_core::hyperbolic::*;
use holonomy_core::lift::*;
use holonomy_core::lorentz::*;
use holonomy_core::subdivision::*;
use nalgebra::DVector;
use proptest::prelude::*;

fn algebra(n: usize, c: &[f64]) -> AlgebraElement {
    let mut a = AlgebraElement::zero(n);
    let mut k = 0;
    for i in 1..=n {
        a = &a + &AlgebraElement::boost(n, i).scale(c[k]);
        k += 1;
    }
    for i in 1..=n {
        for j in i + 1..=n {
            a = &a + &AlgebraElement::rotation(n, i, j).scale(c[k]);
            k += 1;
        }
    }
    a
}

fn coeffs(len: usize, r: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-r..r, len)
}

fn dim_of(n: usize) -> usize {
    n * (n + 1) / 2
}

fn point(w: &[f64]) -> HPoint {
    HPoint::from_spatial(w)
}

fn random_group(n: usize, c: &[f64]) -> GroupElement {
    exp_map(&algebra(n, c))
}

fn rotation_k(n: usize, c: &[f64]) -> GroupElement {
    let mut a = AlgebraElement::zero(n);
    let mut k = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            a = &a + &AlgebraElement::rotation(n, i, j).scale(c[k]);
            k += 1;
        }
    }
    exp_map(&a)
}

fn move_point(g: &GroupElement, p: &HPoint) -> HPoint {
    HPoint::renormalize(&g.act(p.vec())).unwrap()
}

fn max_diff(a: &GroupElement, b: &GroupElement) -> f64 {
    max_abs(&(a.mat() - b.mat()))
}

/// Distance from p to the segment [a, b] in the plane.
fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let t = if d.norm_squared() == 0.0 { 0.0 } else { ((p - a).dot(&d) / d.norm_squared()).clamp(0.0, 1.0) };
    (p - (a + d * t)).norm()
}

fn polyline_distance(p: Point2, line: &[Point2]) -> f64 {
    if line.len() == 1 {
        return (p - line[0]).norm();
    }
    line.windows(2).map(|w| segment_distance(p, w[0], w[1])).fold(f64::INFINITY, f64::min)
}

fn planar(level: &SubdivisionLevel, path: &EdgePath) -> Vec<Point2> {
    path.vertices.iter().map(|&v| level.point(v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_lands_in_the_group(n in 2usize..5, c in coeffs(10, 1.5)) {
        let g = random_group(n, &c[..dim_of(n)]);
        prop_assert!(g.membership_residual() < 1e-9);
        prop_assert!(max_diff(&(&g * &g.inverse()), &GroupElement::identity(n)) < 1e-9);
    }

    #[test]
    fn log_inverts_exp_near_identity(n in 2usize..5, c in coeffs(10, 0.4)) {
        let a = algebra(n, &c[..dim_of(n)]);
        let l = log_map(&exp_map(&a)).unwrap();
        prop_assert!(max_abs(&(l.mat() - a.mat())) < 1e-9);
    }

    #[test]
    fn adjoint_of_k_is_an_isometry(n in 2usize..5, c in coeffs(10, 1.0), r in coeffs(6, 3.0)) {
        let a = algebra(n, &c[..dim_of(n)]);
        let k = rotation_k(n, &r[..n * (n - 1) / 2]);
        let b = adjoint(&k, &a);
        prop_assert!((b.norm() - a.norm()).abs() < 1e-9);
    }

    #[test]
    fn bracket_of_horizontals_is_vertical(n in 2usize..5, x in coeffs(4, 2.0), y in coeffs(4, 2.0)) {
        let xh = AlgebraElement::horizontal_from_vector(&DVector::from_column_slice(&x[..n]));
        let yh = AlgebraElement::horizontal_from_vector(&DVector::from_column_slice(&y[..n]));
        let b = bracket(&xh, &yh).unwrap();
        prop_assert!(b.horizontal().norm() < 1e-12);
    }

    #[test]
    fn distance_is_a_metric(a in coeffs(3, 2.0), b in coeffs(3, 2.0), c in coeffs(3, 2.0)) {
        let (p, q, r) = (point(&a), point(&b), point(&c));
        prop_assert!((distance(&p, &q) - distance(&q, &p)).abs() < 1e-9);
        prop_assert!(distance(&p, &r) <= distance(&p, &q) + distance(&q, &r) + 1e-9);
        prop_assert!(distance(&p, &p) < 1e-6);
    }

    #[test]
    fn area_is_invariant_under_isometries(a in coeffs(2, 1.5), b in coeffs(2, 1.5), c in coeffs(2, 1.5), g in coeffs(3, 1.0)) {
        let (p, q, r) = (point(&a), point(&b), point(&c));
        prop_assume!(slice_orientation(&p, &q, &r).is_some());
        let Ok(t) = totally_geodesic_triangle(&p, &q, &r) else { return Ok(()) };
        prop_assume!(t.area() > 1e-4);
        let h = random_group(2, &g);
        let moved = totally_geodesic_triangle(&move_point(&h, &p), &move_point(&h, &q), &move_point(&h, &r)).unwrap();
        prop_assert!((moved.area() - t.area()).abs() < 1e-9);
    }

    #[test]
    fn lift_is_equivariant(pts in prop::collection::vec(coeffs(3, 1.0), 2..6), g in coeffs(6, 0.8), r in coeffs(3, 3.0)) {
        let points: Vec<HPoint> = pts.iter().map(|w| point(w)).collect();
        let start = holonomy_core::path::section(&points[0]);
        let base = lift_endpoint(&points, &start).unwrap();
        let k = rotation_k(3, &r);
        let right = lift_endpoint(&points, &(&start * &k)).unwrap();
        prop_assert!(max_diff(&right, &(&base * &k)) < 1e-9);
        let h = random_group(3, &g);
        let moved: Vec<HPoint> = points.iter().map(|p| move_point(&h, p)).collect();
        let left = lift_endpoint(&moved, &(&h * &start)).unwrap();
        prop_assert!(max_diff(&left, &(&h * &base)) < 1e-8);
    }

    #[test]
    fn order_is_a_total_order(n in 1usize..4, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let all = addresses(n);
        let (a, b, c) = (&all[i.index(all.len())], &all[j.index(all.len())], &all[k.index(all.len())]);
        prop_assert_eq!(order_compare(a, b).unwrap(), order_compare(b, a).unwrap().reverse());
        if order_compare(a, b).unwrap() != Ordering::Greater && order_compare(b, c).unwrap() != Ordering::Greater {
            prop_assert_ne!(order_compare(a, c).unwrap(), Ordering::Greater);
        }
        prop_assert_eq!(order_compare(a, b).unwrap() == Ordering::Equal, a == b);
    }

    #[test]
    fn grid_maps_are_inverse(n in 0usize..4, i in any::<prop::sample::Index>()) {
        let g = build_grid(n).unwrap();
        let j = i.index(g.len());
        prop_assert_eq!(g.j_n(g.value(j)).unwrap(), j);
        if j + 1 < g.len() {
            let t = g.value(j);
            prop_assert_eq!(g.t1(g.t2(t).unwrap()).unwrap(), t);
        }
    }

    #[test]
    fn simplify_is_a_reduction(walk in prop::collection::vec(0usize..5, 1..30)) {
        let mut vertices = vec![walk[0]];
        for &v in &walk[1..] {
            if *vertices.last().unwrap() != v {
                vertices.push(v);
            }
        }
        let path = EdgePath { vertices };
        let s = simplify(&path);
        prop_assert_eq!(s.start(), path.start());
        prop_assert_eq!(s.end(), path.end());
        prop_assert_eq!(simplify(&s), s.clone());
        prop_assert!(s.edge_set().is_subset(&path.edge_set()));
        prop_assert!(s.vertices.windows(3).all(|w| w[0] != w[2]));
    }
}

#[test]
fn children_share_the_start_and_end_of_their_parent() {
    for o in [1, -1] {
        for n in 1..=3 {
            let coarse = build_level(n - 1, o).unwrap();
            let fine = build_level(n, o).unwrap();
            for parent in &coarse.triangles {
                let kids: Vec<&LevelTriangle> =
                    fine.triangles.iter().filter(|t| t.address.parent().as_ref() == Some(&parent.address)).collect();
                if kids.is_empty() {
                    continue;
                }
                let start = coarse.start_point(&parent.address).unwrap();
                let end = coarse.end_point(&parent.address).unwrap();
                assert!((fine.start_point(&kids[0].address).unwrap() - start).norm() < 1e-12, "{}", parent.address);
                assert!((fine.end_point(&kids[kids.len() - 1].address).unwrap() - end).norm() < 1e-12, "{}", parent.address);
            }
        }
    }
}

#[test]
fn subdivision_properties_hold_at_depth_four() {
    for o in [1, -1] {
        let level = build_level(4, o).unwrap();
        let report = verify_properties(&level);
        assert!(report.passed(), "{report:?}");
        assert_eq!(level.len(), triangle_count(4));
    }
}

#[test]
fn holonomy_curves_keep_their_image_under_refinement() {
    let coarse = build_level(1, 1).unwrap();
    let fine = build_level(2, 1).unwrap();
    let (gc, gf) = (build_grid(1).unwrap(), build_grid(2).unwrap());
    let (sc, sf) = (CurveSystem::new(&coarse).unwrap(), CurveSystem::new(&fine).unwrap());
    for j in 0..gc.len() {
        let a = planar(&coarse, sc.gamma(j));
        let b = planar(&fine, sf.gamma(gf.j_n(gc.value(j)).unwrap()));
        let worst = a
            .iter()
            .map(|&p| polyline_distance(p, &b))
            .chain(b.iter().map(|&p| polyline_distance(p, &a)))
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "gamma at t = {} moved by {worst}", gc.value(j));
    }
}

#[test]
fn fiber_curve_matches_lifts_and_stays_on_the_slice_axis() {
    let phi = GeodesicDisk { n: 3, radius: 0.8 };
    let level = build_level(2, 1).unwrap();
    let sys = CurveSystem::new(&level).unwrap();
    let surf = PleatedSurface::new(&level, &phi).unwrap();
    let f = build_fiber_curve(&sys, &surf).unwrap();
    for j in (0..=f.segments.len()).step_by(7) {
        let exact = gamma_exact_endpoint(&sys, &surf, j).unwrap();
        assert!(max_diff(&f.at_index(j), &exact) < 1e-10, "j = {j}");
    }
    assert!(f.off_axis_residual().unwrap() < 1e-10);
    assert!((f.measured_length().unwrap() - surf.total_area()).abs() < 1e-9);
}
