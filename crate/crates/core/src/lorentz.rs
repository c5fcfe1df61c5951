//! Lie theory of G = SO0(1,n), its maximal compact K = SO(n) and the algebra so(1,n).
//!
//! Matrices act on R^{1,n} with the form S = diag(-1, 1, ..., 1). The algebra
//! carries the inner product <A,B> = trace(A^T B) / 2 and splits as k + p, where
//! k (vertical) has zero first row and column and p (horizontal) is supported
//! on the first row and column.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::TOLERANCES;

/// The Minkowski form diag(-1, 1, ..., 1) of size n + 1.
pub fn minkowski(n: usize) -> DMatrix<f64> {
    let mut s = DMatrix::identity(n + 1, n + 1);
    s[(0, 0)] = -1.0;
    s
}

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// An element of SO0(1,n).
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    mat: DMatrix<f64>,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement{}", self.mat)
    }
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        Self { mat: DMatrix::identity(n + 1, n + 1) }
    }

    /// Wraps a matrix after checking membership in SO0(1,n).
    pub fn from_matrix(mat: DMatrix<f64>) -> Result<Self> {
        if !mat.is_square() || mat.nrows() < 3 {
            return Err(Error::UnsupportedDimension(mat.nrows().saturating_sub(1), 2));
        }
        let g = Self { mat };
        let r = g.membership_residual();
        if r > TOLERANCES.group || g.mat[(0, 0)] < 1.0 - TOLERANCES.group {
            return Err(Error::NotInGroup(r));
        }
        let det = g.mat.determinant();
        if (det - 1.0).abs() > TOLERANCES.group * 10.0 {
            return Err(Error::NotInGroup((det - 1.0).abs()));
        }
        Ok(g)
    }

    /// Wraps a matrix that is known to be in the group by construction.
    pub fn from_matrix_unchecked(mat: DMatrix<f64>) -> Self {
        Self { mat }
    }

    /// Embeds B in SO(n) as diag(1, B).
    pub fn from_rotation(b: &DMatrix<f64>) -> Result<Self> {
        let n = b.nrows();
        let mut mat = DMatrix::identity(n + 1, n + 1);
        mat.view_mut((1, 1), (n, n)).copy_from(b);
        Self::from_matrix(mat)
    }

    pub fn mat(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    /// The n of H^n.
    pub fn dim(&self) -> usize {
        self.mat.nrows() - 1
    }

    /// Inverse S g^T S, exact for group elements.
    pub fn inverse(&self) -> Self {
        let mut m = self.mat.transpose();
        let n1 = m.nrows();
        for i in 1..n1 {
            m[(0, i)] = -m[(0, i)];
            m[(i, 0)] = -m[(i, 0)];
        }
        Self { mat: m }
    }

    /// max |g^T S g - S|.
    pub fn membership_residual(&self) -> f64 {
        let s = minkowski(self.dim());
        max_abs(&(self.mat.transpose() * &s * &self.mat - s))
    }

    /// True when the element fixes the base point, i.e. lies in K.
    pub fn is_in_k(&self, tol: f64) -> bool {
        let n1 = self.mat.nrows();
        (self.mat[(0, 0)] - 1.0).abs() < tol
            && (1..n1).all(|i| self.mat[(0, i)].abs() < tol && self.mat[(i, 0)].abs() < tol)
    }

    /// Pulls a drifted matrix back onto the group with the Newton iteration
    /// g <- g (3I - S g^T S g) / 2.
    pub fn reproject(&self) -> Self {
        let n1 = self.mat.nrows();
        let eye = DMatrix::<f64>::identity(n1, n1);
        let mut g = self.clone();
        for _ in 0..8 {
            let m = g.inverse().mat * &g.mat;
            let err = max_abs(&(&m - &eye));
            if err < 1e-15 {
                break;
            }
            g.mat = &g.mat * (eye.scale(3.0) - m) * 0.5;
        }
        g
    }

    /// Applies the element to a vector of R^{1,n}.
    pub fn act(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.mat * v
    }

    /// Distance ||log(self^-1 other)|| measured with the algebra norm.
    pub fn distance(&self, other: &GroupElement) -> Result<f64> {
        Ok(log_map(&(&self.inverse() * other))?.norm())
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        GroupElement { mat: &self.mat * &rhs.mat }
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        &self * &rhs
    }
}

/// Multiplies a sequence of group elements, re-projecting at the configured interval.
pub fn product<'a, I: IntoIterator<Item = &'a GroupElement>>(n: usize, items: I) -> GroupElement {
    let mut acc = GroupElement::identity(n);
    for (i, g) in items.into_iter().enumerate() {
        acc = &acc * g;
        if (i + 1) % TOLERANCES.reprojection_interval == 0 {
            acc = acc.reproject();
        }
    }
    acc
}

/// An element of so(1,n).
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraElement {
    mat: DMatrix<f64>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement{}", self.mat)
    }
}

impl AlgebraElement {
    pub fn zero(n: usize) -> Self {
        Self { mat: DMatrix::zeros(n + 1, n + 1) }
    }

    /// Wraps a matrix after checking X^T S + S X = 0.
    pub fn from_matrix(mat: DMatrix<f64>) -> Result<Self> {
        if !mat.is_square() || mat.nrows() < 3 {
            return Err(Error::UnsupportedDimension(mat.nrows().saturating_sub(1), 2));
        }
        let s = minkowski(mat.nrows() - 1);
        let r = max_abs(&(mat.transpose() * &s + &s * &mat));
        if r > TOLERANCES.algebra * (1.0 + max_abs(&mat)) {
            return Err(Error::NotInAlgebra(r));
        }
        Ok(Self { mat })
    }

    pub fn from_matrix_unchecked(mat: DMatrix<f64>) -> Self {
        Self { mat }
    }

    /// Projects an arbitrary matrix onto so(1,n) via X -> (X - S X^T S) / 2.
    pub fn project_matrix(mat: &DMatrix<f64>) -> Self {
        let s = minkowski(mat.nrows() - 1);
        Self { mat: (mat - &s * mat.transpose() * &s) * 0.5 }
    }

    /// Boost generator e_{0i} + e_{i0}, 1 <= i <= n.
    pub fn boost(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= n, "boost index out of range");
        let mut mat = DMatrix::zeros(n + 1, n + 1);
        mat[(0, i)] = 1.0;
        mat[(i, 0)] = 1.0;
        Self { mat }
    }

    /// Rotation generator e_{ji} - e_{ij}. With this convention
    /// [boost(i), boost(j)] = rotation(j, i).
    pub fn rotation(n: usize, i: usize, j: usize) -> Self {
        assert!(i >= 1 && j >= 1 && i <= n && j <= n && i != j, "rotation indices out of range");
        let mut mat = DMatrix::zeros(n + 1, n + 1);
        mat[(j, i)] = 1.0;
        mat[(i, j)] = -1.0;
        Self { mat }
    }

    /// E1: boost along x2.
    pub fn e1(n: usize) -> Self {
        Self::boost(n, 2)
    }

    /// E2: boost along x1.
    pub fn e2(n: usize) -> Self {
        Self::boost(n, 1)
    }

    /// E3 = [E1, E2], the rotation generator of the (x1, x2) plane.
    pub fn e3(n: usize) -> Self {
        Self::rotation(n, 1, 2)
    }

    /// Horizontal element whose first column is (0, w).
    pub fn horizontal_from_vector(w: &DVector<f64>) -> Self {
        let n = w.len();
        let mut mat = DMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            mat[(0, i + 1)] = w[i];
            mat[(i + 1, 0)] = w[i];
        }
        Self { mat }
    }

    /// The vector w of the first column (0, w).
    pub fn horizontal_vector(&self) -> DVector<f64> {
        let n = self.dim();
        DVector::from_fn(n, |i, _| self.mat[(i + 1, 0)])
    }

    pub fn mat(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows() - 1
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { mat: &self.mat * c }
    }

    /// max |X^T S + S X|.
    pub fn membership_residual(&self) -> f64 {
        let s = minkowski(self.dim());
        max_abs(&(self.mat.transpose() * &s + &s * &self.mat))
    }

    pub fn norm(&self) -> f64 {
        inner_unchecked(self, self).sqrt()
    }

    /// Vertical (k) part.
    pub fn vertical(&self) -> Self {
        let mut mat = self.mat.clone();
        let n1 = mat.nrows();
        for i in 0..n1 {
            mat[(0, i)] = 0.0;
            mat[(i, 0)] = 0.0;
        }
        Self { mat }
    }

    /// Horizontal (p) part.
    pub fn horizontal(&self) -> Self {
        let n1 = self.mat.nrows();
        let mut mat = DMatrix::zeros(n1, n1);
        for i in 1..n1 {
            mat[(0, i)] = self.mat[(0, i)];
            mat[(i, 0)] = self.mat[(i, 0)];
        }
        Self { mat }
    }

    /// Coordinates in the orthonormal basis returned by [`FrameBasis::standard`].
    pub fn coordinates(&self) -> DVector<f64> {
        let basis = FrameBasis::standard(self.dim());
        DVector::from_iterator(
            basis.elements.len(),
            basis.elements.iter().map(|e| inner_unchecked(self, e)),
        )
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { mat: &self.mat + &rhs.mat }
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { mat: &self.mat - &rhs.mat }
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: AlgebraElement) -> AlgebraElement {
        &self + &rhs
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: AlgebraElement) -> AlgebraElement {
        &self - &rhs
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement { mat: -&self.mat }
    }
}

impl Mul<f64> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, c: f64) -> AlgebraElement {
        self.scale(c)
    }
}

fn same_dim(a: &AlgebraElement, b: &AlgebraElement) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

fn inner_unchecked(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
    0.5 * a.mat.component_mul(&b.mat).sum()
}

/// <a, b> = trace(a^T b) / 2.
pub fn algebra_inner(a: &AlgebraElement, b: &AlgebraElement) -> Result<f64> {
    same_dim(a, b)?;
    Ok(inner_unchecked(a, b))
}

/// [a, b] = ab - ba.
pub fn bracket(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    same_dim(a, b)?;
    Ok(bracket_unchecked(a, b))
}

pub(crate) fn bracket_unchecked(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    AlgebraElement { mat: &a.mat * &b.mat - &b.mat * &a.mat }
}

/// Splits into (vertical, horizontal) parts.
pub fn split_vertical_horizontal(a: &AlgebraElement) -> (AlgebraElement, AlgebraElement) {
    (a.vertical(), a.horizontal())
}

/// Matrix exponential (Pade scaling and squaring).
pub fn exp_map(a: &AlgebraElement) -> GroupElement {
    GroupElement { mat: a.mat.clone().exp() }
}

/// Psi(t) = exp(t E3).
pub fn psi(n: usize, t: f64) -> GroupElement {
    exp_map(&AlgebraElement::e3(n).scale(t))
}

fn sqrtm_denman_beavers(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let mut y = m.clone();
    let mut z = DMatrix::<f64>::identity(n, n);
    for _ in 0..100 {
        let yi = y.clone().try_inverse().ok_or_else(|| Error::LogDomain("singular iterate".into()))?;
        let zi = z.clone().try_inverse().ok_or_else(|| Error::LogDomain("singular iterate".into()))?;
        let y_next = (&y + zi) * 0.5;
        let z_next = (&z + yi) * 0.5;
        let delta = max_abs(&(&y_next - &y));
        y = y_next;
        z = z_next;
        if delta <= 1e-15 * (1.0 + max_abs(&y)) {
            return Ok(y);
        }
    }
    Err(Error::LogDomain("square root iteration did not converge".into()))
}

/// Principal logarithm by inverse scaling and squaring.
///
/// Elements whose rotation angles reach `pi - margin`, or whose rapidities exceed
/// the configured bound, are rejected.
pub fn log_map(g: &GroupElement) -> Result<AlgebraElement> {
    // Schur with a capped iteration count: the uncapped routine can stall on
    // block-diagonal input. Without eigenvalues the scaling loop still guards.
    let eig = nalgebra::linalg::Schur::try_new(g.mat.clone(), f64::EPSILON, 500)
        .map(|s| s.complex_eigenvalues())
        .unwrap_or_else(|| nalgebra::DVector::zeros(0));
    for ev in eig.iter() {
        let arg = ev.im.atan2(ev.re).abs();
        if arg >= std::f64::consts::PI - TOLERANCES.log_angle_margin {
            return Err(Error::LogDomain(format!("rotation angle {arg:.4} too close to pi")));
        }
        let rap = ev.norm().ln().abs();
        if !rap.is_finite() || rap > TOLERANCES.log_boost_limit {
            return Err(Error::LogDomain(format!("rapidity {rap:.4} out of range")));
        }
    }
    let n1 = g.mat.nrows();
    let eye = DMatrix::<f64>::identity(n1, n1);
    let mut m = g.mat.clone();
    let mut k = 0;
    while max_abs(&(&m - &eye)) > 0.25 {
        m = sqrtm_denman_beavers(&m)?;
        k += 1;
        if k > 60 {
            return Err(Error::LogDomain("scaling did not converge".into()));
        }
    }
    let x = &m - &eye;
    let mut term = x.clone();
    let mut sum = x.clone();
    for j in 2..200 {
        term = &term * &x;
        let c = if j % 2 == 0 { -1.0 } else { 1.0 } / j as f64;
        let add = &term * c;
        sum += &add;
        if max_abs(&add) < 1e-18 {
            break;
        }
    }
    let out = sum * 2f64.powi(k);
    Ok(AlgebraElement::project_matrix(&out))
}

/// Ad_k(a) = k a k^-1.
pub fn adjoint(k: &GroupElement, a: &AlgebraElement) -> AlgebraElement {
    AlgebraElement { mat: &k.mat * &a.mat * k.inverse().mat }
}

/// Killing form trace(ad_a ad_b), evaluated in an orthonormal basis.
pub fn killing_form(a: &AlgebraElement, b: &AlgebraElement) -> Result<f64> {
    same_dim(a, b)?;
    let basis = FrameBasis::standard(a.dim());
    Ok(basis
        .elements
        .iter()
        .map(|e| inner_unchecked(e, &bracket_unchecked(a, &bracket_unchecked(b, e))))
        .sum())
}

/// An ordered list of algebra elements, orthonormal for tr(A^T B) / 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameBasis {
    pub elements: Vec<AlgebraElement>,
}

impl FrameBasis {
    /// Boosts B_1..B_n followed by rotations R_{ij}, i < j.
    pub fn standard(n: usize) -> Self {
        let mut elements: Vec<AlgebraElement> = (1..=n).map(|i| AlgebraElement::boost(n, i)).collect();
        for i in 1..=n {
            for j in (i + 1)..=n {
                elements.push(AlgebraElement::rotation(n, i, j));
            }
        }
        Self { elements }
    }

    pub fn gram(&self) -> DMatrix<f64> {
        let m = self.elements.len();
        DMatrix::from_fn(m, m, |i, j| inner_unchecked(&self.elements[i], &self.elements[j]))
    }

    /// max |Gram - I|.
    pub fn orthonormality_residual(&self) -> f64 {
        let m = self.elements.len();
        max_abs(&(self.gram() - DMatrix::identity(m, m)))
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero(a.dim());
        for e in &self.elements {
            out = &out + &e.scale(inner_unchecked(a, e));
        }
        out
    }

    /// Largest norm of the part of a pairwise bracket that leaves the span.
    pub fn closure_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i + 1..] {
                let c = bracket_unchecked(a, b);
                worst = worst.max((&c - &self.project(&c)).norm());
            }
        }
        worst
    }
}

/// Orthonormal frame (x', y', [x', y']) of the so(1,2)-type subalgebra spanned by
/// two independent horizontal elements.
pub fn so12_subalgebra(x: &AlgebraElement, y: &AlgebraElement) -> Result<FrameBasis> {
    same_dim(x, y)?;
    let tol = 1e-9;
    let nx = x.norm();
    if nx < tol {
        return Err(Error::Dependent);
    }
    let u1 = x.scale(1.0 / nx);
    let r = y - &u1.scale(inner_unchecked(y, &u1));
    let nr = r.norm();
    if nr < tol * (1.0 + y.norm()) {
        return Err(Error::Dependent);
    }
    let u2 = r.scale(1.0 / nr);
    let b = bracket_unchecked(&u1, &u2);
    let nb = b.norm();
    if nb < tol {
        return Err(Error::Dependent);
    }
    let frame = FrameBasis { elements: vec![u1, u2, b.scale(1.0 / nb)] };
    let residual = frame.closure_residual();
    if residual > 1e-8 {
        return Err(Error::NotInAlgebra(residual));
    }
    Ok(frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn inner_products_of_named_generators() {
        let (e1, e2, e3) = (AlgebraElement::e1(2), AlgebraElement::e2(2), AlgebraElement::e3(2));
        assert_abs_diff_eq!(algebra_inner(&e1, &e1).unwrap(), 1.0);
        assert_abs_diff_eq!(algebra_inner(&e1, &e2).unwrap(), 0.0);
        assert_abs_diff_eq!(algebra_inner(&e3, &e3).unwrap(), 1.0);
        assert!(algebra_inner(&e1, &AlgebraElement::e1(3)).is_err());
    }

    #[test]
    fn named_brackets() {
        let (e1, e2, e3) = (AlgebraElement::e1(2), AlgebraElement::e2(2), AlgebraElement::e3(2));
        assert_eq!(bracket(&e1, &e2).unwrap(), e3);
        assert_eq!(bracket(&e1, &e1).unwrap(), AlgebraElement::zero(2));
        // so(1,2) is not so(3): the double bracket comes back with a plus sign.
        assert_eq!(bracket(&e1, &e3).unwrap(), e2);
    }

    #[test]
    fn psi_matrix() {
        let t = 0.3_f64;
        let m = psi(2, t).into_matrix();
        let expected = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, t.cos(), -t.sin(), 0.0, t.sin(), t.cos()]);
        assert!(max_abs(&(m - expected)) < 1e-15);
    }

    #[test]
    fn log_inverts_exp() {
        let a = &AlgebraElement::e1(2).scale(0.1) + &AlgebraElement::e2(2).scale(0.05);
        let back = log_map(&exp_map(&a)).unwrap();
        assert!(max_abs(&(back.mat() - a.mat())) < 1e-12);
        assert_eq!(exp_map(&AlgebraElement::zero(3)), GroupElement::identity(3));
    }

    #[test]
    fn log_rejects_half_turn() {
        assert!(matches!(log_map(&psi(2, 3.1)), Err(Error::LogDomain(_))));
        assert!(log_map(&psi(2, 3.0)).is_ok());
    }

    #[test]
    fn split_examples() {
        let (e1, e3) = (AlgebraElement::e1(2), AlgebraElement::e3(2));
        assert_eq!(split_vertical_horizontal(&e3), (e3.clone(), AlgebraElement::zero(2)));
        assert_eq!(split_vertical_horizontal(&e1), (AlgebraElement::zero(2), e1.clone()));
        assert_eq!(split_vertical_horizontal(&(&e1 + &e3)), (e3, e1));
    }

    #[test]
    fn adjoint_examples() {
        let e1 = AlgebraElement::e1(2);
        assert_eq!(adjoint(&GroupElement::identity(2), &e1), e1);
        assert_abs_diff_eq!(adjoint(&psi(2, 0.7), &e1).norm(), 1.0, epsilon = 1e-14);
        let rotated = adjoint(&psi(2, std::f64::consts::FRAC_PI_2), &e1);
        let e2 = AlgebraElement::e2(2);
        assert!(max_abs(&(rotated.mat() + e2.mat())) < 1e-15);
    }

    #[test]
    fn subalgebra_examples() {
        let (e1, e2) = (AlgebraElement::e1(2), AlgebraElement::e2(2));
        let f = so12_subalgebra(&e1, &e2).unwrap();
        assert!(f.orthonormality_residual() < 1e-14);
        assert_eq!(f.elements[2], AlgebraElement::e3(2));
        assert_eq!(so12_subalgebra(&e1, &e1.scale(2.0)), Err(Error::Dependent));
    }

    #[test]
    fn standard_basis_is_orthonormal() {
        for n in 2..=4 {
            let b = FrameBasis::standard(n);
            assert_eq!(b.elements.len(), n * (n + 1) / 2);
            assert!(b.orthonormality_residual() < 1e-15);
            assert!(b.closure_residual() < 1e-15);
        }
    }

    #[test]
    fn membership_checks() {
        assert!(GroupElement::from_matrix(DMatrix::identity(3, 3) * 2.0).is_err());
        let mut flip = DMatrix::identity(3, 3);
        flip[(0, 0)] = -1.0;
        flip[(1, 1)] = -1.0;
        assert!(GroupElement::from_matrix(flip).is_err());
        assert!(AlgebraElement::from_matrix(DMatrix::identity(3, 3)).is_err());
        assert!(GroupElement::from_matrix(psi(3, 0.2).into_matrix()).is_ok());
    }

    #[test]
    fn reprojection_removes_drift() {
        let g = exp_map(&(&AlgebraElement::e1(3).scale(0.4) + &AlgebraElement::rotation(3, 2, 3).scale(1.1)));
        let mut m = g.mat().clone();
        m[(1, 2)] += 1e-7;
        m[(0, 3)] -= 2e-7;
        let drifted = GroupElement::from_matrix_unchecked(m);
        assert!(drifted.membership_residual() > 1e-8);
        let fixed = drifted.reproject();
        assert!(fixed.membership_residual() < 1e-14);
        assert!(max_abs(&(fixed.mat() - g.mat())) < 1e-6);
    }

    #[test]
    fn killing_form_is_proportional_on_horizontal_part() {
        for n in 2..=4 {
            let mut ratio = None;
            for k in 0..5 {
                let x = AlgebraElement::horizontal_from_vector(&DVector::from_fn(n, |i, _| (1.3 * (i + k) as f64).sin()));
                let y = AlgebraElement::horizontal_from_vector(&DVector::from_fn(n, |i, _| (0.7 * (i * k + 1) as f64).cos()));
                let r = algebra_inner(&x, &y).unwrap() / killing_form(&x, &y).unwrap();
                if let Some(r0) = ratio {
                    assert_abs_diff_eq!(r, r0, epsilon = 1e-12);
                }
                ratio = Some(r);
            }
            assert_abs_diff_eq!(ratio.unwrap(), 1.0 / (2.0 * (n as f64 - 1.0)), epsilon = 1e-12);
        }
    }
}
