//! The relative frame of a normalized surface: support function, relative
//! normal, covector, relative metric, shape operator, relative curvatures,
//! Darboux tensor and Tchebychev vector, relative lines of curvature, and
//! centre-surface points.
//!
//! A relative normalization is any transversal field `y` along the surface
//! whose derivatives stay tangential. It is determined by its support
//! function `q = <xi, y>` alone, through `y = -grad_II(q, x) + q xi`; this
//! module therefore takes a support specification, builds `y`, and derives
//! the whole frame in jet arithmetic. All constructed quantities satisfy the
//! defining identities to floating-point roundoff, and the constructors
//! assert the cheap ones on the spot.

use std::fmt;
use std::str::FromStr;

use crate::expr::{Bindings, Expr};
use crate::jet::{Axis, Jet2};
use crate::surface::{beltrami_second, SurfaceJet};
use crate::tensor::{JetVec3, Tensor2, Vec3};
use crate::{tol, Error, Result};

/// How the support function of a normalization is produced.
#[derive(Debug, Clone, PartialEq)]
pub enum SupportSpec {
    /// q = 1; the relative normal is the Euclidean unit normal.
    Euclidean,
    /// q = |K~|^(1/4); the relative normal is the affine normal direction.
    Equiaffine,
    /// q = c |K~|^(1/4) with a nonzero real c.
    Homothetic(f64),
    /// q given as a closed-form expression in u1, u2.
    Custom(Expr),
}

impl SupportSpec {
    /// Extra jet orders a surface evaluation needs beyond the order wanted
    /// for quantities derived from `y` (the relative normal consumes the
    /// inverse second form, and equiaffine kinds also burn the two orders
    /// that the Gaussian curvature costs).
    pub fn order_cost(&self) -> usize {
        match self {
            SupportSpec::Euclidean | SupportSpec::Custom(_) => 2,
            SupportSpec::Equiaffine | SupportSpec::Homothetic(_) => 3,
        }
    }

    /// Minimum surface-jet order `build_frame` accepts for this kind.
    pub fn min_order(&self) -> usize {
        match self {
            SupportSpec::Euclidean | SupportSpec::Custom(_) => 3,
            SupportSpec::Equiaffine | SupportSpec::Homothetic(_) => 4,
        }
    }
}

impl fmt::Display for SupportSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportSpec::Euclidean => write!(f, "euclidean"),
            SupportSpec::Equiaffine => write!(f, "equiaffine"),
            SupportSpec::Homothetic(c) => write!(f, "equiaffine*{c}"),
            SupportSpec::Custom(e) => write!(f, "expr:{e}"),
        }
    }
}

impl FromStr for SupportSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<SupportSpec> {
        if s == "euclidean" {
            Ok(SupportSpec::Euclidean)
        } else if s == "equiaffine" {
            Ok(SupportSpec::Equiaffine)
        } else if let Some(c) = s.strip_prefix("equiaffine*") {
            let c: f64 = c
                .parse()
                .map_err(|_| Error::Parse(format!("bad homothety factor `{c}`")))?;
            if c == 0.0 {
                return Err(Error::Parse("homothety factor must be nonzero".into()));
            }
            Ok(SupportSpec::Homothetic(c))
        } else if let Some(e) = s.strip_prefix("expr:") {
            Ok(SupportSpec::Custom(Expr::parse(e)?))
        } else {
            Err(Error::Parse(format!(
                "unknown normalization `{s}` (euclidean | equiaffine | equiaffine*<c> | expr:<q>)"
            )))
        }
    }
}

/// The support function as a jet, to the maximum order the surface jets
/// allow for this kind.
pub fn support_jet(spec: &SupportSpec, sj: &SurfaceJet, params: &Bindings) -> Result<Jet2> {
    let q = match spec {
        SupportSpec::Euclidean => Jet2::constant(1.0, sj.order),
        SupportSpec::Equiaffine => sj.gauss.abs()?.powf(0.25)?,
        SupportSpec::Homothetic(c) => sj.gauss.abs()?.powf(0.25)?.scale(*c),
        SupportSpec::Custom(e) => e.eval_at(sj.point, sj.order, params)?,
    };
    if q.value().abs() < tol::ZERO_SUPPORT {
        return Err(Error::ZeroSupport {
            u1: sj.point.0,
            u2: sj.point.1,
            q: q.value(),
        });
    }
    Ok(q)
}

/// The unique relative normal with support function `q`:
/// `y = -grad_II(q, x) + q xi`.
pub fn relative_normal(q: &Jet2, sj: &SurfaceJet) -> Result<JetVec3> {
    let grad = beltrami_second(q, sj)?;
    Ok(&grad.scale(-1.0) + &sj.normal.scale_jet(q))
}

/// Per-point bundle of the relative geometry of a normalized surface.
#[derive(Debug, Clone)]
pub struct RelativeFrame {
    pub point: (f64, f64),
    /// Position value of the base surface at the point.
    pub position: Vec3,
    /// Support function q as a jet.
    pub support: Jet2,
    /// Relative normal y with its derivatives.
    pub rel_normal: JetVec3,
    /// Covector X of the tangent space (X = xi / q).
    pub covector: JetVec3,
    /// Relative metric G_ij = <d_j d_i x, X> and its inverse, as jets.
    pub metric: Tensor2<Jet2>,
    pub metric_inv: Tensor2<Jet2>,
    /// Covariant shape operator B_ij = <d_i y, d_j X>.
    pub shape_cov: Tensor2<Jet2>,
    /// Mixed shape operator B_i^j = B_ik G^(kj) (values).
    pub shape_mixed: Tensor2<f64>,
    /// Relative curvature K = det(B_i^j).
    pub curvature: f64,
    /// Relative mean curvature H = B_i^i / 2.
    pub mean_curvature: f64,
    /// Relative principal curvatures, kappa_1 >= kappa_2.
    pub principal: [f64; 2],
    /// Relative principal radii 1/kappa_i, present where kappa_i != 0.
    pub radii: [Option<f64>; 2],
    /// Darboux tensor A_ijk (fully symmetric).
    pub darboux: [[[f64; 2]; 2]; 2],
    /// Tchebychev components T^m and the tangential vector T = T^m d_m x.
    pub tchebychev_up: [f64; 2],
    pub tchebychev: Vec3,
    /// First-fundamental-form values of the base surface (used to normalize
    /// parameter directions).
    pub first_form: Tensor2<f64>,
}

/// Build the relative frame of `sj` for the given normalization.
pub fn build_frame(
    sj: &SurfaceJet,
    spec: &SupportSpec,
    params: &Bindings,
) -> Result<RelativeFrame> {
    if sj.order < spec.min_order() {
        return Err(Error::Order {
            what: "relative frame",
            need: spec.min_order(),
            have: sj.order,
        });
    }
    let q = support_jet(spec, sj, params)?;
    build_frame_from_support(sj, q)
}

/// Build the frame from an explicit support-function jet. This is the path
/// used for relatively parallel surfaces, whose support function is a jet
/// computed on the parallel surface rather than a closed form.
pub fn build_frame_from_support(sj: &SurfaceJet, q: Jet2) -> Result<RelativeFrame> {
    let point = sj.point;
    if q.value().abs() < tol::ZERO_SUPPORT {
        return Err(Error::ZeroSupport {
            u1: point.0,
            u2: point.1,
            q: q.value(),
        });
    }
    let y = relative_normal(&q, sj)?;
    let covector = sj.normal.scale_jet(&q.recip()?);

    transversality_check(sj, &y)?;

    // Defining identities of the covector, cheap to check on the spot.
    let y_val = y.value();
    let x_val = covector.value();
    for i in 0..2 {
        let t = sj.tangents[i].value();
        let dev = x_val.dot(t).abs();
        assert!(
            dev <= tol::TENSOR_IDENTITY * (1.0 + x_val.norm() * t.norm()),
            "covector not orthogonal to tangents at {point:?}: {dev:.3e}"
        );
    }
    let pairing = x_val.dot(y_val);
    assert!(
        (pairing - 1.0).abs() <= tol::TENSOR_IDENTITY * (1.0 + x_val.norm() * y_val.norm()),
        "covector pairing <X, y> = {pairing} at {point:?}"
    );

    let mut metric_entries: [[Option<Jet2>; 2]; 2] = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            metric_entries[i][j] = Some(sj.second_partial(i, j)?.dot(&covector));
        }
    }
    let metric = Tensor2::from_fn(|i, j| metric_entries[i][j].clone().unwrap());
    let metric_inv = metric.inverse()?;

    let dy = [y.d(Axis::U1)?, y.d(Axis::U2)?];
    let dx_cov = [covector.d(Axis::U1)?, covector.d(Axis::U2)?];
    let shape_cov = Tensor2::from_fn(|i, j| dy[i].dot(&dx_cov[j]));
    let b_scale = 1.0
        + shape_cov
            .values()
            .m
            .iter()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()));
    let sym_dev = (shape_cov.m[0][1].value() - shape_cov.m[1][0].value()).abs();
    assert!(
        sym_dev <= tol::FRAME_IDENTITY * b_scale,
        "shape operator asymmetry {sym_dev:.3e} at {point:?}"
    );
    // Second route where the order permits: B_ij = -<d_j d_i y, X>.
    if y.order() >= 2 {
        for i in 0..2 {
            for j in 0..2 {
                let alt = -dy[i].d(Axis::from_index(j))?.dot(&covector).value();
                let dev = (alt - shape_cov.m[i][j].value()).abs();
                assert!(
                    dev <= tol::FRAME_IDENTITY * b_scale,
                    "shape operator route mismatch at {point:?}: {dev:.3e}"
                );
            }
        }
    }

    let shape_mixed_jets = shape_cov.matmul(&metric_inv);
    let shape_mixed = shape_mixed_jets.values();
    let curvature = shape_mixed.det();
    let mean_curvature = 0.5 * shape_mixed.trace();

    // Weingarten-type equations d_i y = -B_i^j d_j x.
    for i in 0..2 {
        let mut predicted = Vec3::ZERO;
        for j in 0..2 {
            predicted = predicted + sj.tangents[j].value().scale(-shape_mixed.m[i][j]);
        }
        let dev = (dy[i].value() - predicted).norm();
        assert!(
            dev <= tol::FRAME_IDENTITY * (1.0 + dy[i].value().norm()),
            "Weingarten-type identity violated at {point:?}: {dev:.3e}"
        );
    }

    let disc = mean_curvature * mean_curvature - curvature;
    let disc_scale = 1.0 + mean_curvature * mean_curvature + curvature.abs();
    if disc < tol::COMPLEX_CURVATURE * disc_scale {
        return Err(Error::ComplexCurvature {
            u1: point.0,
            u2: point.1,
            disc,
        });
    }
    let root = if disc.abs() <= tol::UMBILIC_DISC * disc_scale {
        0.0
    } else {
        disc.sqrt()
    };
    let principal = [mean_curvature + root, mean_curvature - root];
    let radii = principal.map(|k| (k.abs() >= tol::ZERO_CURVATURE).then(|| 1.0 / k));

    let (darboux, tchebychev_up, tchebychev) =
        darboux_projected(sj, &covector, &metric, &metric_inv)?;

    Ok(RelativeFrame {
        point,
        position: sj.position.value(),
        support: q,
        rel_normal: y,
        covector,
        metric,
        metric_inv,
        shape_cov,
        shape_mixed,
        curvature,
        mean_curvature,
        principal,
        radii,
        darboux,
        tchebychev_up,
        tchebychev,
        first_form: sj.first.values(),
    })
}

/// Admissibility of the normalization: {d_1 x, d_2 x, y} spans E^3 and each
/// d_i y stays tangential.
fn transversality_check(sj: &SurfaceJet, y: &JetVec3) -> Result<()> {
    let x1 = sj.tangents[0].value();
    let x2 = sj.tangents[1].value();
    let yv = y.value();
    let m = nalgebra::Matrix3::new(
        x1.0[0], x2.0[0], yv.0[0], x1.0[1], x2.0[1], yv.0[1], x1.0[2], x2.0[2], yv.0[2],
    );
    let sv = m.singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if smin < tol::RANK_RATIO * smax {
        return Err(Error::Precondition(format!(
            "relative normalization not transversal at {:?}: singular value ratio {:.3e}",
            sj.point,
            smin / smax
        )));
    }
    for axis in Axis::BOTH {
        let dyi = y.d(axis)?.value();
        let normal_part = dyi.dot(sj.normal.value()).abs();
        assert!(
            normal_part <= tol::TENSOR_IDENTITY * (1.0 + dyi.norm()),
            "d_i y not tangential at {:?}: normal component {normal_part:.3e}",
            sj.point
        );
    }
    Ok(())
}

/// Christoffel symbols (values) of a metric given as jets of order >= 1.
fn christoffel_values(
    metric: &Tensor2<Jet2>,
    metric_inv: &Tensor2<f64>,
) -> Result<[[[f64; 2]; 2]; 2]> {
    let dg = [metric.d(Axis::U1)?.values(), metric.d(Axis::U2)?.values()];
    let mut gamma = [[[0.0; 2]; 2]; 2]; // gamma[m][i][j]
    for m in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                let mut sum = 0.0;
                for s in 0..2 {
                    sum += metric_inv.m[m][s] * (dg[i].m[s][j] + dg[j].m[s][i] - dg[s].m[i][j]);
                }
                gamma[m][i][j] = 0.5 * sum;
            }
        }
    }
    Ok(gamma)
}

/// Darboux tensor through the expansion of the repeated G-covariant
/// derivative with the tangential terms annihilated by X:
///
/// `A_ijk = <X, d_k d_j d_i x> - Gamma^m_ij G_mk - Gamma^m_ik G_mj - Gamma^m_jk G_mi`
///
/// (`<X, d_m x> = 0` kills the derivative-of-Christoffel term exactly, so no
/// extra jet order is spent on it). Symmetry of the result is asserted as the
/// self-check of the expansion.
fn darboux_projected(
    sj: &SurfaceJet,
    covector: &JetVec3,
    metric: &Tensor2<Jet2>,
    metric_inv: &Tensor2<Jet2>,
) -> Result<([[[f64; 2]; 2]; 2], [f64; 2], Vec3)> {
    let g_vals = metric.values();
    let ginv_vals = metric_inv.values();
    let gamma = christoffel_values(metric, &ginv_vals)?;

    let mut a = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let third = sj.third_partial(i, j, k)?.value();
                let mut v = covector.value().dot(third);
                for m in 0..2 {
                    v -= gamma[m][i][j] * g_vals.m[m][k]
                        + gamma[m][i][k] * g_vals.m[m][j]
                        + gamma[m][j][k] * g_vals.m[m][i];
                }
                a[i][j][k] = v;
            }
        }
    }

    let a_scale = 1.0
        + a.iter()
            .flatten()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()));
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for (p, q, r) in [(j, i, k), (k, j, i), (i, k, j)] {
                    assert!(
                        (a[i][j][k] - a[p][q][r]).abs() <= tol::FRAME_IDENTITY * a_scale,
                        "Darboux tensor not symmetric at {:?}",
                        sj.point
                    );
                }
            }
        }
    }

    // T^m = (1/2) A_i^{im}: contract two slots with G^(ij), raise the third.
    let mut t_up = [0.0; 2];
    for m in 0..2 {
        let mut sum = 0.0;
        for i in 0..2 {
            for r in 0..2 {
                for s in 0..2 {
                    sum += ginv_vals.m[i][r] * a[i][r][s] * ginv_vals.m[s][m];
                }
            }
        }
        t_up[m] = 0.5 * sum;
    }
    let t_vec = sj.tangents[0].value().scale(t_up[0]) + sj.tangents[1].value().scale(t_up[1]);
    Ok((a, t_up, t_vec))
}

/// Recompute the Darboux tensor and Tchebychev data of a frame.
pub fn darboux_tchebychev(
    frame: &RelativeFrame,
    sj: &SurfaceJet,
) -> Result<([[[f64; 2]; 2]; 2], [f64; 2], Vec3)> {
    darboux_projected(sj, &frame.covector, &frame.metric, &frame.metric_inv)
}

/// Darboux tensor through the literal covariant-derivative cascade, with
/// Christoffel symbols carried as jets. Needs one jet order more than the
/// projected route; used to cross-validate it.
pub fn darboux_covariant_route(
    frame: &RelativeFrame,
    sj: &SurfaceJet,
) -> Result<[[[f64; 2]; 2]; 2]> {
    let metric = &frame.metric;
    let metric_inv = &frame.metric_inv;
    let dg = [metric.d(Axis::U1)?, metric.d(Axis::U2)?];
    let mut gamma: Vec<Vec<Vec<Jet2>>> = Vec::new();
    for m in 0..2 {
        let mut gm = Vec::new();
        for i in 0..2 {
            let mut gmi = Vec::new();
            for j in 0..2 {
                let mut sum = Jet2::constant(0.0, dg[0].m[0][0].order());
                for s in 0..2 {
                    let term = &(&dg[i].m[s][j] + &dg[j].m[s][i]) - &dg[s].m[i][j];
                    sum = &sum + &(&metric_inv.m[m][s] * &term);
                }
                gmi.push(sum.scale(0.5));
            }
            gm.push(gmi);
        }
        gamma.push(gm);
    }

    // First covariant derivative V_ij = d_j d_i x - Gamma^m_ij d_m x.
    let mut v: Vec<Vec<JetVec3>> = Vec::new();
    for i in 0..2 {
        let mut vi = Vec::new();
        for j in 0..2 {
            let mut out = sj.second_partial(i, j)?;
            for m in 0..2 {
                out = &out - &sj.tangents[m].scale_jet(&gamma[m][i][j]);
            }
            vi.push(out);
        }
        v.push(vi);
    }

    let mut a = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let mut dd = v[i][j].d(Axis::from_index(k))?;
                for m in 0..2 {
                    dd = &dd - &v[m][j].scale_jet(&gamma[m][i][k]);
                    dd = &dd - &v[i][m].scale_jet(&gamma[m][j][k]);
                }
                a[i][j][k] = frame.covector.value().dot(dd.value());
            }
        }
    }
    Ok(a)
}

/// Directions of the relative lines of curvature in the parameter plane.
#[derive(Debug, Clone, PartialEq)]
pub enum LineDirections {
    /// Every direction is relatively principal.
    Umbilic,
    /// Two root directions (du1, du2), normalized to unit Euclidean length
    /// through the first fundamental form.
    Pair([[f64; 2]; 2]),
}

/// Solve `B_1^2 (du1)^2 + (B_2^2 - B_1^1) du1 du2 - B_2^1 (du2)^2 = 0`.
pub fn curvature_line_directions(frame: &RelativeFrame) -> Result<LineDirections> {
    let b = &frame.shape_mixed;
    let coeffs = equation_coefficients(b);
    let scale = 1.0 + b.m.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if coeffs.iter().all(|c| c.abs() < tol::UMBILIC * scale) {
        return Ok(LineDirections::Umbilic);
    }
    let (a, bb, c) = (coeffs[0], coeffs[1], coeffs[2]);
    let disc = bb * bb - 4.0 * a * c;
    if disc < tol::COMPLEX_CURVATURE * scale * scale {
        return Err(Error::ComplexCurvature {
            u1: frame.point.0,
            u2: frame.point.1,
            disc: disc / 4.0,
        });
    }
    let disc = disc.max(0.0);
    let dirs: [[f64; 2]; 2] = if a.abs() >= tol::UMBILIC * scale {
        // Stable quadratic roots for du1/du2.
        let qq = -0.5 * (bb + bb.signum() * disc.sqrt());
        let (r1, r2) = if qq.abs() > 0.0 {
            (qq / a, c / qq)
        } else {
            (0.0, 0.0)
        };
        [[r1, 1.0], [r2, 1.0]]
    } else if bb.abs() >= tol::UMBILIC * scale {
        // Degenerate leading coefficient: one root from the linear part, the
        // second direction at du2 = 0.
        [[-c / bb, 1.0], [1.0, 0.0]]
    } else {
        // Only the (du2)^2 term survives: du2 = 0 doubly.
        [[1.0, 0.0], [1.0, 0.0]]
    };
    let g = &frame.first_form;
    let normalized = dirs.map(|d| {
        let len_sq =
            g.m[0][0] * d[0] * d[0] + 2.0 * g.m[0][1] * d[0] * d[1] + g.m[1][1] * d[1] * d[1];
        let mut out = [d[0] / len_sq.sqrt(), d[1] / len_sq.sqrt()];
        // Canonical sign for stable comparisons.
        let lead = if out[0].abs() >= out[1].abs() {
            out[0]
        } else {
            out[1]
        };
        if lead < 0.0 {
            out = [-out[0], -out[1]];
        }
        out
    });
    Ok(LineDirections::Pair(normalized))
}

/// Coefficients (B_1^2, B_2^2 - B_1^1, -B_2^1) of the curvature-line
/// equation.
pub fn equation_coefficients(shape_mixed: &Tensor2<f64>) -> [f64; 3] {
    [
        shape_mixed.m[0][1],
        shape_mixed.m[1][1] - shape_mixed.m[0][0],
        -shape_mixed.m[1][0],
    ]
}

/// Centre-surface points `x + R_i y` for the branches whose principal
/// curvature does not vanish.
pub fn centre_points(frame: &RelativeFrame) -> [Option<Vec3>; 2] {
    let y = frame.rel_normal.value();
    [0, 1].map(|i| frame.radii[i].map(|r| frame.position + y.scale(r)))
}

/// Strict single branch variant.
pub fn centre_point(frame: &RelativeFrame, branch: usize) -> Result<Vec3> {
    centre_points(frame)[branch].ok_or(Error::ZeroCurvature {
        branch: branch + 1,
        kappa: frame.principal[branch],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::surface::eval_surface;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    fn sphere_at_equator(order: usize) -> SurfaceJet {
        let cat = Catalog::builtin();
        let sphere = cat.get("sphere").unwrap();
        eval_surface(sphere, (FRAC_PI_2, 0.0), order).unwrap()
    }

    fn saddle_at(u: (f64, f64), order: usize) -> SurfaceJet {
        let cat = Catalog::builtin();
        eval_surface(cat.get("saddle").unwrap(), u, order).unwrap()
    }

    #[test]
    fn support_kinds_parse_and_print() {
        for s in [
            "euclidean",
            "equiaffine",
            "equiaffine*2.5",
            "expr:1 + 0.1*u1",
        ] {
            let spec: SupportSpec = s.parse().unwrap();
            let round: SupportSpec = spec.to_string().parse().unwrap();
            assert_eq!(spec, round);
        }
        assert!("equiaffine*0".parse::<SupportSpec>().is_err());
        assert!("nope".parse::<SupportSpec>().is_err());
    }

    #[test]
    fn support_values() {
        let sj = sphere_at_equator(4);
        let p = Bindings::new();
        let q = support_jet(&SupportSpec::Euclidean, &sj, &p).unwrap();
        assert_relative_eq!(q.value(), 1.0);
        assert_relative_eq!(q.coeff(1, 0), 0.0);
        // K~ = 1 on the unit sphere, so the equiaffine support is 1 as well.
        let q = support_jet(&SupportSpec::Equiaffine, &sj, &p).unwrap();
        assert_relative_eq!(q.value(), 1.0, epsilon = 1e-12);
        // K~ = -1 at the saddle origin: |K~|^(1/4) = 1.
        let sj = saddle_at((0.0, 0.0), 4);
        let q = support_jet(&SupportSpec::Equiaffine, &sj, &p).unwrap();
        assert_relative_eq!(q.value(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn euclidean_normal_is_unit_normal() {
        let sj = sphere_at_equator(4);
        let q = Jet2::constant(1.0, 4);
        let y = relative_normal(&q, &sj).unwrap();
        assert!((y.value() - sj.normal.value()).norm() < 1e-12);
    }

    #[test]
    fn custom_support_normal_on_saddle() {
        // q = 1 + u1 at the origin: y = -(0,1,0) + (0,0,1).
        let sj = saddle_at((0.0, 0.0), 4);
        let q = Expr::parse("1 + u1")
            .unwrap()
            .eval_at((0.0, 0.0), 4, &Bindings::new())
            .unwrap();
        let y = relative_normal(&q, &sj).unwrap().value();
        assert_relative_eq!(y.0[0], 0.0, epsilon = 1e-13);
        assert_relative_eq!(y.0[1], -1.0, epsilon = 1e-13);
        assert_relative_eq!(y.0[2], 1.0, epsilon = 1e-13);
    }

    #[test]
    fn sphere_euclidean_frame() {
        let sj = sphere_at_equator(4);
        let f = build_frame(&sj, &SupportSpec::Euclidean, &Bindings::new()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(f.metric.m[i][j].value(), -expect, epsilon = 1e-12);
                assert_relative_eq!(f.shape_cov.m[i][j].value(), expect, epsilon = 1e-12);
                assert_relative_eq!(f.shape_mixed.m[i][j], -expect, epsilon = 1e-12);
            }
        }
        assert_relative_eq!(f.curvature, 1.0, epsilon = 1e-12);
        assert_relative_eq!(f.mean_curvature, -1.0, epsilon = 1e-12);
        assert_relative_eq!(f.principal[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(f.principal[1], -1.0, epsilon = 1e-12);
        assert_relative_eq!(f.radii[0].unwrap(), -1.0, epsilon = 1e-12);
        // Darboux tensor vanishes identically on the sphere.
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert_relative_eq!(f.darboux[i][j][k], 0.0, epsilon = 1e-10);
                }
            }
        }
        assert!(f.tchebychev.norm() < 1e-10);
    }

    #[test]
    fn saddle_euclidean_frame() {
        let sj = saddle_at((0.0, 0.0), 4);
        let f = build_frame(&sj, &SupportSpec::Euclidean, &Bindings::new()).unwrap();
        assert_relative_eq!(f.metric.m[0][0].value(), 0.0, epsilon = 1e-13);
        assert_relative_eq!(f.metric.m[0][1].value(), 1.0, epsilon = 1e-13);
        assert_relative_eq!(f.shape_cov.m[0][0].value(), 1.0, epsilon = 1e-13);
        assert_relative_eq!(f.shape_cov.m[0][1].value(), 0.0, epsilon = 1e-13);
        assert_relative_eq!(f.shape_mixed.m[0][0], 0.0, epsilon = 1e-13);
        assert_relative_eq!(f.shape_mixed.m[0][1], 1.0, epsilon = 1e-13);
        assert_relative_eq!(f.curvature, -1.0, epsilon = 1e-13);
        assert_relative_eq!(f.mean_curvature, 0.0, epsilon = 1e-13);
        assert_relative_eq!(f.principal[0], 1.0, epsilon = 1e-13);
        assert_relative_eq!(f.principal[1], -1.0, epsilon = 1e-13);
    }

    #[test]
    fn homothetic_frame_scales() {
        let sj = sphere_at_equator(5);
        let f = build_frame(&sj, &SupportSpec::Homothetic(2.0), &Bindings::new()).unwrap();
        assert!((f.rel_normal.value() - sj.normal.value().scale(2.0)).norm() < 1e-12);
        assert!((f.covector.value() - sj.normal.value().scale(0.5)).norm() < 1e-12);
        assert_relative_eq!(f.metric.m[0][0].value(), -0.5, epsilon = 1e-12);
        assert_relative_eq!(f.curvature, 4.0, epsilon = 1e-11);
        assert_relative_eq!(f.mean_curvature, -2.0, epsilon = 1e-12);
    }

    #[test]
    fn support_recovered_from_frame() {
        // <xi, y> must reproduce the q that built y.
        let sj = saddle_at((0.3, -0.2), 4);
        let q = Expr::parse("1 + 0.2*u1 - 0.1*u2^2")
            .unwrap()
            .eval_at((0.3, -0.2), 4, &Bindings::new())
            .unwrap();
        let f = build_frame_from_support(&sj, q.clone()).unwrap();
        let recovered = sj.normal.dot(&f.rel_normal);
        assert_relative_eq!(recovered.value(), q.value(), max_relative = 1e-12);
        assert_relative_eq!(recovered.coeff(1, 0), q.coeff(1, 0), epsilon = 1e-12);
    }

    #[test]
    fn zero_support_is_rejected() {
        let sj = saddle_at((0.0, 0.0), 4);
        let q = Jet2::constant(0.0, 4);
        assert!(matches!(
            build_frame_from_support(&sj, q),
            Err(Error::ZeroSupport { .. })
        ));
    }

    #[test]
    fn complex_principal_curvatures_are_rejected() {
        // A normalization of the saddle with constant mixed shape operator
        // [[2, 1], [-1, 2]]: H^2 - K = 4 - 5 < 0.
        let q = SupportSpec::Custom(
            Expr::parse("(2*u1*u2 + 0.5*u1^2 - 0.5*u2^2) / sqrt(1 + u1^2 + u2^2)").unwrap(),
        );
        let sj = saddle_at((0.6, 0.7), 4);
        assert!(matches!(
            build_frame(&sj, &q, &Bindings::new()),
            Err(Error::ComplexCurvature { .. })
        ));
    }

    #[test]
    fn curvature_lines_on_the_saddle() {
        let sj = saddle_at((0.0, 0.0), 4);
        let f = build_frame(&sj, &SupportSpec::Euclidean, &Bindings::new()).unwrap();
        let coeffs = equation_coefficients(&f.shape_mixed);
        assert_relative_eq!(coeffs[0], 1.0, epsilon = 1e-13);
        assert_relative_eq!(coeffs[1], 0.0, epsilon = 1e-13);
        assert_relative_eq!(coeffs[2], -1.0, epsilon = 1e-13);
        match curvature_line_directions(&f).unwrap() {
            LineDirections::Pair(dirs) => {
                for d in dirs {
                    // du1 = +/- du2, and the residual of the root vanishes.
                    assert_relative_eq!(d[0].abs(), d[1].abs(), max_relative = 1e-10);
                    let r =
                        coeffs[0] * d[0] * d[0] + coeffs[1] * d[0] * d[1] + coeffs[2] * d[1] * d[1];
                    assert!(r.abs() <= 1e-9);
                }
            }
            LineDirections::Umbilic => panic!("saddle is not relatively umbilic"),
        }
    }

    #[test]
    fn sphere_is_umbilic() {
        let sj = sphere_at_equator(4);
        let f = build_frame(&sj, &SupportSpec::Euclidean, &Bindings::new()).unwrap();
        assert_eq!(
            curvature_line_directions(&f).unwrap(),
            LineDirections::Umbilic
        );
    }

    #[test]
    fn centre_points_hand_values() {
        let sj = sphere_at_equator(4);
        let f = build_frame(&sj, &SupportSpec::Euclidean, &Bindings::new()).unwrap();
        for p in centre_points(&f) {
            assert!(p.unwrap().norm() < 1e-11, "sphere centres at the origin");
        }
        let sj = saddle_at((0.0, 0.0), 4);
        let f = build_frame(&sj, &SupportSpec::Euclidean, &Bindings::new()).unwrap();
        let pts = centre_points(&f);
        assert!((pts[0].unwrap() - Vec3([0.0, 0.0, 1.0])).norm() < 1e-12);
        assert!((pts[1].unwrap() - Vec3([0.0, 0.0, -1.0])).norm() < 1e-12);
    }

    #[test]
    fn zero_curvature_branch_error() {
        // The constant-transversal normalization of the paraboloid has
        // B = 0, so both radii branches are undefined.
        let cat = Catalog::builtin();
        let pb = cat.get("elliptic-paraboloid").unwrap();
        let sj = eval_surface(pb, (0.4, -0.3), 4).unwrap();
        let q = SupportSpec::Custom(Expr::parse("(1 + u1^2 + u2^2)^(-0.5)").unwrap());
        let f = build_frame(&sj, &q, &Bindings::new()).unwrap();
        assert!(f.curvature.abs() < 1e-12);
        assert!(f.mean_curvature.abs() < 1e-12);
        assert!(matches!(
            centre_point(&f, 0),
            Err(Error::ZeroCurvature { .. })
        ));
    }

    #[test]
    fn darboux_routes_agree() {
        let cat = Catalog::builtin();
        for (surface, support) in [
            (
                "saddle",
                SupportSpec::Custom(Expr::parse("1 + 0.1*u1").unwrap()),
            ),
            ("torus-outer-band", SupportSpec::Euclidean),
            ("sphere", SupportSpec::Equiaffine),
        ] {
            let spec = cat.get(surface).unwrap();
            let order = if matches!(support, SupportSpec::Equiaffine) {
                6
            } else {
                5
            };
            let sj = eval_surface(spec, (0.55, 0.45), order).unwrap();
            let f = build_frame(&sj, &support, &spec.params).unwrap();
            let via_jets = darboux_covariant_route(&f, &sj).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        assert_relative_eq!(
                            f.darboux[i][j][k],
                            via_jets[i][j][k],
                            epsilon = 1e-9,
                            max_relative = 1e-9
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn equiaffine_tchebychev_vanishes_pointwise() {
        let cat = Catalog::builtin();
        let spec = cat.get("torus-outer-band").unwrap();
        let sj = eval_surface(spec, (0.4, 1.3), 5).unwrap();
        let f = build_frame(&sj, &SupportSpec::Equiaffine, &spec.params).unwrap();
        assert!(
            f.tchebychev.norm() <= 1e-9,
            "equiaffine Tchebychev vector should vanish, got {:.3e}",
            f.tchebychev.norm()
        );
    }
}
