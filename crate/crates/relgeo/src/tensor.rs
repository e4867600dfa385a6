//! Small fixed-size containers: 3-vectors (plain and jet-valued) and 2x2
//! tensors over either scalar type.

use crate::jet::{Axis, Jet2};
use crate::Result;
use serde::Serialize;

/// A plain 3-vector in E^3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub fn dot(self, rhs: Vec3) -> f64 {
        self.0[0] * rhs.0[0] + self.0[1] * rhs.0[1] + self.0[2] * rhs.0[2]
    }

    pub fn cross(self, rhs: Vec3) -> Vec3 {
        let a = self.0;
        let b = rhs.0;
        Vec3([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, c: f64) -> Vec3 {
        Vec3([self.0[0] * c, self.0[1] * c, self.0[2] * c])
    }

    pub fn normalized(self) -> Vec3 {
        self.scale(1.0 / self.norm())
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
        ])
    }
}

/// A 3-vector whose components are jets: a vector-valued function together
/// with its partial derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct JetVec3(pub [Jet2; 3]);

impl JetVec3 {
    pub fn constant(v: Vec3, order: usize) -> JetVec3 {
        JetVec3([
            Jet2::constant(v.0[0], order),
            Jet2::constant(v.0[1], order),
            Jet2::constant(v.0[2], order),
        ])
    }

    pub fn order(&self) -> usize {
        self.0[0]
            .order()
            .min(self.0[1].order())
            .min(self.0[2].order())
    }

    pub fn value(&self) -> Vec3 {
        Vec3([self.0[0].value(), self.0[1].value(), self.0[2].value()])
    }

    pub fn d(&self, axis: Axis) -> Result<JetVec3> {
        Ok(JetVec3([
            self.0[0].d(axis)?,
            self.0[1].d(axis)?,
            self.0[2].d(axis)?,
        ]))
    }

    pub fn dot(&self, rhs: &JetVec3) -> Jet2 {
        &(&(&self.0[0] * &rhs.0[0]) + &(&self.0[1] * &rhs.0[1])) + &(&self.0[2] * &rhs.0[2])
    }

    pub fn cross(&self, rhs: &JetVec3) -> JetVec3 {
        let a = &self.0;
        let b = &rhs.0;
        JetVec3([
            &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
            &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
            &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
        ])
    }

    /// Componentwise product with a scalar jet.
    pub fn scale_jet(&self, c: &Jet2) -> JetVec3 {
        JetVec3([&self.0[0] * c, &self.0[1] * c, &self.0[2] * c])
    }

    pub fn scale(&self, c: f64) -> JetVec3 {
        JetVec3([self.0[0].scale(c), self.0[1].scale(c), self.0[2].scale(c)])
    }

    /// Euclidean norm as a jet; requires a nonzero value.
    pub fn norm(&self) -> Result<Jet2> {
        self.dot(self).sqrt()
    }
}

impl std::ops::Add<&JetVec3> for &JetVec3 {
    type Output = JetVec3;
    fn add(self, rhs: &JetVec3) -> JetVec3 {
        JetVec3([
            &self.0[0] + &rhs.0[0],
            &self.0[1] + &rhs.0[1],
            &self.0[2] + &rhs.0[2],
        ])
    }
}

impl std::ops::Sub<&JetVec3> for &JetVec3 {
    type Output = JetVec3;
    fn sub(self, rhs: &JetVec3) -> JetVec3 {
        JetVec3([
            &self.0[0] - &rhs.0[0],
            &self.0[1] - &rhs.0[1],
            &self.0[2] - &rhs.0[2],
        ])
    }
}

/// A 2x2 tensor; `m[i][j]` is the component with first index `i+1`, second
/// index `j+1`. Used with `f64` entries for point values and with [`Jet2`]
/// entries when derivatives of the tensor are needed.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor2<T> {
    pub m: [[T; 2]; 2],
}

impl<T> Tensor2<T> {
    pub fn new(m: [[T; 2]; 2]) -> Tensor2<T> {
        Tensor2 { m }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Tensor2<T> {
        Tensor2 {
            m: [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]],
        }
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Tensor2<U> {
        Tensor2 {
            m: [
                [f(&self.m[0][0]), f(&self.m[0][1])],
                [f(&self.m[1][0]), f(&self.m[1][1])],
            ],
        }
    }
}

impl Tensor2<f64> {
    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Inverse; exists iff the determinant is nonzero.
    pub fn inverse(&self) -> Option<Tensor2<f64>> {
        let d = self.det();
        if d == 0.0 {
            return None;
        }
        Some(Tensor2::new([
            [self.m[1][1] / d, -self.m[0][1] / d],
            [-self.m[1][0] / d, self.m[0][0] / d],
        ]))
    }

    pub fn matmul(&self, rhs: &Tensor2<f64>) -> Tensor2<f64> {
        Tensor2::from_fn(|i, j| self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j])
    }

    pub fn scale(&self, c: f64) -> Tensor2<f64> {
        self.map(|x| x * c)
    }
}

impl Tensor2<Jet2> {
    pub fn values(&self) -> Tensor2<f64> {
        self.map(|j| j.value())
    }

    pub fn det(&self) -> Jet2 {
        &(&self.m[0][0] * &self.m[1][1]) - &(&self.m[0][1] * &self.m[1][0])
    }

    /// Inverse in jet arithmetic; fails if the determinant value term is zero.
    pub fn inverse(&self) -> Result<Tensor2<Jet2>> {
        let inv_det = self.det().recip()?;
        Ok(Tensor2::new([
            [&self.m[1][1] * &inv_det, -&(&self.m[0][1] * &inv_det)],
            [-&(&self.m[1][0] * &inv_det), &self.m[0][0] * &inv_det],
        ]))
    }

    pub fn matmul(&self, rhs: &Tensor2<Jet2>) -> Tensor2<Jet2> {
        Tensor2::from_fn(|i, j| &(&self.m[i][0] * &rhs.m[0][j]) + &(&self.m[i][1] * &rhs.m[1][j]))
    }

    pub fn d(&self, axis: Axis) -> Result<Tensor2<Jet2>> {
        Ok(Tensor2::new([
            [self.m[0][0].d(axis)?, self.m[0][1].d(axis)?],
            [self.m[1][0].d(axis)?, self.m[1][1].d(axis)?],
        ]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Axis;
    use approx::assert_relative_eq;

    #[test]
    fn inverse_identity() {
        let t = Tensor2::new([[2.0, 1.0], [0.5, 3.0]]);
        let inv = t.inverse().unwrap();
        let id = t.matmul(&inv);
        assert_relative_eq!(id.m[0][0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(id.m[1][1], 1.0, max_relative = 1e-12);
        assert_relative_eq!(id.m[0][1], 0.0, epsilon = 1e-12);
        assert_relative_eq!(id.m[1][0], 0.0, epsilon = 1e-12);
        assert!(Tensor2::new([[1.0, 2.0], [2.0, 4.0]]).inverse().is_none());
    }

    #[test]
    fn jet_tensor_inverse() {
        let u = Jet2::variable(Axis::U1, 0.4, 3);
        let v = Jet2::variable(Axis::U2, -0.1, 3);
        let t = Tensor2::new([[u.shift(2.0), v.clone()], [v.clone(), u.shift(3.0)]]);
        let id = t.matmul(&t.inverse().unwrap());
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(id.m[i][j].value(), expect, epsilon = 1e-13);
                // Derivatives of the identity vanish.
                assert_relative_eq!(id.m[i][j].coeff(1, 0), 0.0, epsilon = 1e-13);
                assert_relative_eq!(id.m[i][j].coeff(0, 1), 0.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn cross_is_orthogonal() {
        let a = Vec3([1.0, 2.0, 3.0]);
        let b = Vec3([-0.5, 0.25, 2.0]);
        let c = a.cross(b);
        assert_relative_eq!(c.dot(a), 0.0, epsilon = 1e-14);
        assert_relative_eq!(c.dot(b), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn jet_vec_derivative_of_dot() {
        // d/du1 <v, v> = 2 <v, dv/du1> for a jet-valued vector.
        let u = Jet2::variable(Axis::U1, 0.3, 3);
        let v = JetVec3([u.sin(), u.cos(), &u * &u]);
        let lhs = v.dot(&v).d(Axis::U1).unwrap().value();
        let rhs = 2.0 * v.d(Axis::U1).unwrap().dot(&v).value();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
    }
}
