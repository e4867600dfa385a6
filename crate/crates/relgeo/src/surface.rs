//! Euclidean layer: a parametric surface evaluated through jets, its three
//! fundamental forms, unit normal, Gaussian curvature, and the first
//! Beltrami operators with respect to the second and third forms.

use crate::expr::{Bindings, Expr};
use crate::jet::{Axis, Jet2};
use crate::tensor::{JetVec3, Tensor2, Vec3};
use crate::{tol, Error, Result};

/// A parametric surface given by three closed-form components, a parameter
/// box, and named-constant bindings.
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub name: String,
    pub components: [Expr; 3],
    /// Parameter box `[a1, b1] x [a2, b2]`; grids sample its interior.
    pub domain: [(f64, f64); 2],
    pub params: Bindings,
    pub default_grid: (usize, usize),
    pub note: String,
}

impl SurfaceSpec {
    /// Position jets of the immersion at `u`, exact to `order`.
    pub fn position_jets(&self, u: (f64, f64), order: usize) -> Result<JetVec3> {
        let u1 = Jet2::variable(Axis::U1, u.0, order);
        let u2 = Jet2::variable(Axis::U2, u.1, order);
        Ok(JetVec3([
            self.components[0].eval_jet(&u1, &u2, &self.params)?,
            self.components[1].eval_jet(&u1, &u2, &self.params)?,
            self.components[2].eval_jet(&u1, &u2, &self.params)?,
        ]))
    }

    /// Plain position evaluation, independent of the jet path.
    pub fn position(&self, u: (f64, f64)) -> Result<Vec3> {
        Ok(Vec3([
            self.components[0].eval(u.0, u.1, &self.params)?,
            self.components[1].eval(u.0, u.1, &self.params)?,
            self.components[2].eval(u.0, u.1, &self.params)?,
        ]))
    }
}

/// The full Euclidean jet data of a surface at one parameter point.
///
/// `position` carries jets to `order`; derived quantities carry as many
/// orders as the chain that produced them allows (`normal`: order - 1, the
/// forms and `gauss`: order - 2).
#[derive(Debug, Clone)]
pub struct SurfaceJet {
    pub point: (f64, f64),
    pub order: usize,
    pub position: JetVec3,
    pub tangents: [JetVec3; 2],
    /// Unit normal; oriented along `normal_sign * (x_1 x x_2)`.
    pub normal: JetVec3,
    pub normal_sign: f64,
    /// First fundamental form g_ij.
    pub first: Tensor2<Jet2>,
    /// Second fundamental form h_ij.
    pub second: Tensor2<Jet2>,
    /// Third fundamental form e_ij.
    pub third: Tensor2<Jet2>,
    pub first_inv: Tensor2<Jet2>,
    pub second_inv: Tensor2<Jet2>,
    pub third_inv: Tensor2<Jet2>,
    /// Gaussian curvature det(h)/det(g).
    pub gauss: Jet2,
}

impl SurfaceJet {
    /// Build the Euclidean data from position jets alone. `normal_sign`
    /// selects the orientation relative to the cross product of the tangents
    /// (+1 everywhere except when a caller must match the orientation of a
    /// related surface).
    pub fn from_position_jets(
        point: (f64, f64),
        position: JetVec3,
        normal_sign: f64,
    ) -> Result<SurfaceJet> {
        let order = position.order();
        if order < 2 {
            return Err(Error::Order {
                what: "surface evaluation",
                need: 2,
                have: order,
            });
        }
        let x1 = position.d(Axis::U1)?;
        let x2 = position.d(Axis::U2)?;
        let raw = x1.cross(&x2);
        let raw_norm_sq = raw.dot(&raw);
        if raw_norm_sq.value().sqrt() < tol::REGULARITY {
            return Err(Error::Regularity {
                u1: point.0,
                u2: point.1,
                norm: raw_norm_sq.value().sqrt(),
            });
        }
        let normal = raw
            .scale_jet(&raw_norm_sq.sqrt()?.recip()?)
            .scale(normal_sign);

        let tangents = [x1, x2];
        let first = Tensor2::from_fn(|i, j| tangents[i].dot(&tangents[j]));
        let mut second_partials = [[None, None], [None, None]];
        for i in 0..2 {
            for j in 0..2 {
                second_partials[i][j] = Some(tangents[i].d(Axis::from_index(j))?);
            }
        }
        let second = Tensor2::from_fn(|i, j| second_partials[i][j].as_ref().unwrap().dot(&normal));
        let det_g = first.det();
        let det_h = second.det();
        if det_h.value().abs() < tol::FLAT_POINT * det_g.value().abs() {
            return Err(Error::FlatPoint {
                u1: point.0,
                u2: point.1,
                det_h: det_h.value(),
            });
        }
        let normal_d = [normal.d(Axis::U1)?, normal.d(Axis::U2)?];
        let third = Tensor2::from_fn(|i, j| normal_d[i].dot(&normal_d[j]));
        let gauss = det_h.div(&det_g)?;
        let first_inv = first.inverse()?;
        let second_inv = second.inverse()?;
        let third_inv = third.inverse()?;
        Ok(SurfaceJet {
            point,
            order,
            position,
            tangents,
            normal,
            normal_sign,
            first,
            second,
            third,
            first_inv,
            second_inv,
            third_inv,
            gauss,
        })
    }

    pub fn second_partial(&self, i: usize, j: usize) -> Result<JetVec3> {
        self.tangents[i].d(Axis::from_index(j))
    }

    pub fn third_partial(&self, i: usize, j: usize, k: usize) -> Result<JetVec3> {
        self.tangents[i]
            .d(Axis::from_index(j))?
            .d(Axis::from_index(k))
    }
}

/// Evaluate a surface at a parameter point to the given jet order.
pub fn eval_surface(spec: &SurfaceSpec, u: (f64, f64), order: usize) -> Result<SurfaceJet> {
    if order < 2 {
        return Err(Error::Order {
            what: "surface evaluation",
            need: 2,
            have: order,
        });
    }
    SurfaceJet::from_position_jets(u, spec.position_jets(u, order)?, 1.0)
}

/// First Beltrami operator of `f` with respect to the second fundamental
/// form: `h^(ij) (d_i f) (d_j x)`, a tangential vector field.
pub fn beltrami_second(f: &Jet2, sj: &SurfaceJet) -> Result<JetVec3> {
    gradient_like(f, &sj.second_inv, &sj.tangents)
}

/// First Beltrami operator of `f` with respect to the third fundamental
/// form: `e^(ij) (d_i f) (d_j xi)`.
pub fn beltrami_third(f: &Jet2, sj: &SurfaceJet) -> Result<JetVec3> {
    let normal_d = [sj.normal.d(Axis::U1)?, sj.normal.d(Axis::U2)?];
    gradient_like(f, &sj.third_inv, &normal_d)
}

fn gradient_like(f: &Jet2, inv: &Tensor2<Jet2>, basis: &[JetVec3; 2]) -> Result<JetVec3> {
    if f.order() < 1 {
        return Err(Error::Order {
            what: "Beltrami operator argument",
            need: 1,
            have: 0,
        });
    }
    let df = [f.d(Axis::U1)?, f.d(Axis::U2)?];
    let mut acc = JetVec3::constant(Vec3::ZERO, f.order() - 1);
    for i in 0..2 {
        for j in 0..2 {
            acc = &acc + &basis[j].scale_jet(&(&inv.m[i][j] * &df[i]));
        }
    }
    Ok(acc)
}

/// The partial derivatives of the unit normal, checked against the Euclidean
/// Weingarten equations `d_i xi = -h_ij g^(jk) d_k x`.
pub fn euclidean_weingarten(sj: &SurfaceJet) -> Result<[Vec3; 2]> {
    let mut out = [Vec3::ZERO; 2];
    for i in 0..2 {
        let direct = sj.normal.d(Axis::from_index(i))?.value();
        let mut predicted = Vec3::ZERO;
        for j in 0..2 {
            for k in 0..2 {
                predicted = predicted
                    + sj.tangents[k]
                        .value()
                        .scale(-sj.second.m[i][j].value() * sj.first_inv.m[j][k].value());
            }
        }
        let dev = (direct - predicted).norm();
        assert!(
            dev <= tol::TENSOR_IDENTITY * (1.0 + direct.norm()),
            "Weingarten identity violated at {:?}: deviation {dev:.3e}",
            sj.point
        );
        out[i] = direct;
    }
    Ok(out)
}
