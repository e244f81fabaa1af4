//! Unit quaternions standing in for SU(2), and the traceless locus as unit
//! 3-vectors. Conjugation by a unit quaternion is the corresponding rotation.

use std::ops::{Mul, Neg};

use nalgebra::{Matrix3, Rotation3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit-norm slack tolerated by [`conj_action`].
pub const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub fn pure(v: &Vector3<f64>) -> Self {
        Self::new(0.0, v.x, v.y, v.z)
    }

    pub fn vector(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_squared(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn inverse(&self) -> Self {
        let n2 = self.norm_squared();
        let c = self.conjugate();
        Self::new(c.w / n2, c.x / n2, c.y / n2, c.z / n2)
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self::new(self.w / n, self.x / n, self.y / n, self.z / n)
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Trace of the corresponding 2×2 matrix.
    pub fn trace(&self) -> f64 {
        2.0 * self.w
    }

    /// Largest coordinate difference.
    pub fn distance(&self, other: &Quaternion) -> f64 {
        (self.w - other.w)
            .abs()
            .max((self.x - other.x).abs())
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }

    pub fn to_unit(&self) -> UnitQuaternion<f64> {
        UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(self.w, self.x, self.y, self.z))
    }

    pub fn from_unit(q: &UnitQuaternion<f64>) -> Self {
        Self::new(q.w, q.i, q.j, q.k)
    }

    /// Rotation matrix of `v ↦ q v q^{-1}`.
    pub fn rotation_matrix(&self) -> Matrix3<f64> {
        self.to_unit().to_rotation_matrix().into_inner()
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, b: Quaternion) -> Quaternion {
        qmul(&self, &b)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
pub fn qmul(a: &Quaternion, b: &Quaternion) -> Quaternion {
    Quaternion::new(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )
}

/// A trace-zero element of SU(2): a pure unit quaternion, kept as its
/// imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TracelessElement(pub Vector3<f64>);

impl TracelessElement {
    /// Normalizes `v`; fails on (near) zero input.
    pub fn new(v: Vector3<f64>) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n <= 1e-300 {
            return Err(Error::Domain("cannot normalize a zero vector".into()));
        }
        Ok(Self(v / n))
    }

    /// Trusts the caller that `v` is already unit length.
    pub fn new_unchecked(v: Vector3<f64>) -> Self {
        Self(v)
    }

    pub fn from_xyz(x: f64, y: f64, z: f64) -> Self {
        Self::new(Vector3::new(x, y, z)).expect("nonzero vector")
    }

    /// The planar element `cos t·i + sin t·j`.
    pub fn planar(t: f64) -> Self {
        Self(Vector3::new(t.cos(), t.sin(), 0.0))
    }

    pub fn vec(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn quaternion(&self) -> Quaternion {
        Quaternion::pure(&self.0)
    }

    pub fn dot(&self, other: &TracelessElement) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn neg(&self) -> Self {
        Self(-self.0)
    }
}

/// `g t g^{-1}`, computed as the rotation of `t` by the SO(3) image of `g`.
pub fn conj_action(g: &Quaternion, t: &TracelessElement) -> Result<TracelessElement> {
    if !g.is_unit(UNIT_TOL) {
        return Err(Error::Domain(format!(
            "conjugating element has norm {} (not unit)",
            g.norm()
        )));
    }
    Ok(rotate(&g.normalized(), t))
}

pub(crate) fn rotate(g: &Quaternion, t: &TracelessElement) -> TracelessElement {
    // v + 2w(u×v) + 2u×(u×v) with u the vector part
    let u = g.vector();
    let v = t.0;
    let uv = u.cross(&v);
    TracelessElement(v + 2.0 * g.w * uv + 2.0 * u.cross(&uv))
}

/// `u t u^{-1}` for traceless `u`, in closed form `2(u·v)u − v`.
pub fn reflect(u: &TracelessElement, t: &TracelessElement) -> TracelessElement {
    TracelessElement(reflect_vec(&u.0, &t.0))
}

#[inline]
pub(crate) fn reflect_vec(u: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
    2.0 * u.dot(v) * u - v
}

/// Rotation `g` minimizing `Σ ‖g·a_i − b_i‖²` over SO(3), with the attained
/// minimum. Proper-rotation Kabsch on the 3×3 cross-covariance.
pub fn align(a: &[TracelessElement], b: &[TracelessElement]) -> Result<(Quaternion, f64)> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Domain(format!(
            "align needs equal nonempty lists, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let mut h = Matrix3::<f64>::zeros();
    for (p, q) in a.iter().zip(b) {
        h += p.0 * q.0.transpose();
    }
    let svd = h.svd(true, true);
    let u = svd.u.expect("svd u");
    let v_t = svd.v_t.expect("svd v_t");
    let d = (v_t.transpose() * u.transpose()).determinant().signum();
    let fix = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, if d == 0.0 { 1.0 } else { d }));
    let r = v_t.transpose() * fix * u.transpose();
    let rot = Rotation3::from_matrix_unchecked(r);
    let g = Quaternion::from_unit(&UnitQuaternion::from_rotation_matrix(&rot));
    let dist = a
        .iter()
        .zip(b)
        .map(|(p, q)| (rotate(&g, p).0 - q.0).norm_squared())
        .sum::<f64>();
    Ok((g, dist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: &Vector3<f64>, b: &Vector3<f64>, tol: f64) -> bool {
        (a - b).amax() <= tol
    }

    #[test]
    fn quaternion_table() {
        let k = qmul(&Quaternion::I, &Quaternion::J);
        assert!(k.distance(&Quaternion::K) < 1e-15);
        let q = Quaternion::new(0.3, -0.2, 0.9, 0.1).normalized();
        assert!(qmul(&q, &q.inverse()).distance(&Quaternion::ONE) < 1e-15);
    }

    #[test]
    fn planar_product_closed_form() {
        for (a, b) in [(0.3, 1.7), (-2.0, 0.4), (PI, 0.0)] {
            let p = qmul(
                &TracelessElement::planar(a).quaternion(),
                &TracelessElement::planar(b).quaternion(),
            );
            let expect = Quaternion::new(-(a - b).cos(), 0.0, 0.0, -(a - b).sin());
            assert!(p.distance(&expect) < 1e-15);
        }
    }

    #[test]
    fn conj_examples() {
        let e1 = TracelessElement::from_xyz(1.0, 0.0, 0.0);
        let r = conj_action(&Quaternion::K, &e1).unwrap();
        assert!(close(&r.0, &Vector3::new(-1.0, 0.0, 0.0), 1e-15));
        let r = conj_action(&Quaternion::ONE, &e1).unwrap();
        assert_eq!(r, e1);
        let quarter = Quaternion::new(FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2);
        let r = conj_action(&quarter, &e1).unwrap();
        assert!(close(&r.0, &Vector3::new(0.0, 1.0, 0.0), 1e-15));
        assert!(conj_action(&Quaternion::new(2.0, 0.0, 0.0, 0.0), &e1).is_err());
    }

    #[test]
    fn conj_matches_quaternion_sandwich() {
        let g = Quaternion::new(0.1, 0.7, -0.3, 0.2).normalized();
        let t = TracelessElement::from_xyz(0.2, -0.5, 0.8);
        let sandwich = qmul(&qmul(&g, &t.quaternion()), &g.inverse());
        let r = conj_action(&g, &t).unwrap();
        assert!(sandwich.w.abs() < 1e-15);
        assert!(close(&sandwich.vector(), &r.0, 1e-15));
    }

    #[test]
    fn reflect_examples() {
        let u = TracelessElement::from_xyz(1.0, 0.0, 0.0);
        let v = TracelessElement::from_xyz(0.0, 1.0, 0.0);
        assert!(close(&reflect(&u, &v).0, &Vector3::new(0.0, -1.0, 0.0), 1e-15));
        assert!(close(&reflect(&v, &v).0, &v.0, 1e-15));
        let a = 0.7_f64;
        let w = TracelessElement::planar(a);
        assert!(close(&reflect(&u, &w).0, &TracelessElement::planar(-a).0, 1e-15));
    }

    #[test]
    fn align_examples() {
        let a = vec![
            TracelessElement::from_xyz(1.0, 0.0, 0.0),
            TracelessElement::from_xyz(0.3, 0.9, -0.1),
        ];
        let (g, d) = align(&a, &a).unwrap();
        assert!(d < 1e-24);
        assert!(g.distance(&Quaternion::ONE) < 1e-12 || g.distance(&-Quaternion::ONE) < 1e-12);

        let x = vec![TracelessElement::from_xyz(1.0, 0.0, 0.0)];
        let y = vec![TracelessElement::from_xyz(0.0, 1.0, 0.0)];
        let (g, d) = align(&x, &y).unwrap();
        assert!(d < 1e-24);
        assert!(close(&rotate(&g, &x[0]).0, &y[0].0, 1e-12));
        assert!(align(&x, &a).is_err());
    }
}
