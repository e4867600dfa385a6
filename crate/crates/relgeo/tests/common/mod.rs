//! Shared fixtures and independent oracles for the integration suites.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use relgeo::expr::{Bindings, Expr};
use relgeo::frame::SupportSpec;
use relgeo::jet::Axis;
use relgeo::surface::SurfaceSpec;
use relgeo::Catalog;

/// Every catalog surface crossed with the four normalization kinds used
/// throughout the acceptance runs.
pub fn catalog_pairs() -> Vec<(SurfaceSpec, SupportSpec)> {
    let kinds = [
        SupportSpec::Euclidean,
        SupportSpec::Equiaffine,
        SupportSpec::Homothetic(3.0),
        SupportSpec::Custom(Expr::parse("1 + 0.1*u1").unwrap()),
    ];
    let mut out = Vec::new();
    for entry in Catalog::builtin().entries() {
        for kind in &kinds {
            out.push((entry.clone(), kind.clone()));
        }
    }
    out
}

fn saddle_on(domain: [(f64, f64); 2]) -> SurfaceSpec {
    SurfaceSpec {
        name: "saddle-band".into(),
        components: [
            Expr::parse("u1").unwrap(),
            Expr::parse("u2").unwrap(),
            Expr::parse("u1*u2").unwrap(),
        ],
        domain,
        params: Bindings::new(),
        default_grid: (8, 8),
        note: String::new(),
    }
}

/// Saddle band with a normalization whose mixed shape operator is the
/// constant matrix [[1, 1/2], [1/2, 1]]: relative curvature K = 3/4 and
/// relative mean curvature H = 1, both grid-constant, with H^2 - K = 1/4.
pub fn constant_curvatures_fixture() -> (SurfaceSpec, SupportSpec) {
    (
        saddle_on([(0.3, 0.9), (0.3, 0.9)]),
        SupportSpec::Custom(
            Expr::parse("(u1*u2 + 0.25*(u1^2 + u2^2)) * (1 + u1^2 + u2^2)^(-0.5)").unwrap(),
        ),
    )
}

/// Saddle band with shape operator [[1, u1], [u2, 1]]: constant relative
/// mean curvature H = 1 with non-constant relative curvature K = 1 - u1 u2.
pub fn constant_mean_fixture() -> (SurfaceSpec, SupportSpec) {
    (
        saddle_on([(0.3, 0.9), (0.3, 0.9)]),
        SupportSpec::Custom(
            Expr::parse("(u1*u2 + (u1^3 + u2^3)/6) * (1 + u1^2 + u2^2)^(-0.5)").unwrap(),
        ),
    )
}

/// Paraboloid normalized by the constant transversal field (0, 0, 1): the
/// shape operator vanishes identically, so K = H = 0 everywhere.
pub fn flat_shape_fixture() -> (SurfaceSpec, SupportSpec) {
    let cat = Catalog::builtin();
    (
        cat.get("elliptic-paraboloid").unwrap().clone(),
        SupportSpec::Custom(Expr::parse("(1 + u1^2 + u2^2)^(-0.5)").unwrap()),
    )
}

// ---------------------------------------------------------------------------
// Central-difference oracle for jet coefficients.
// ---------------------------------------------------------------------------

/// Single-axis central stencil of derivative order `k` at step `h`.
fn stencil(k: usize, h: f64) -> Vec<(f64, f64)> {
    match k {
        0 => vec![(0.0, 1.0)],
        1 => vec![(-1.0, -0.5 / h), (1.0, 0.5 / h)],
        2 => {
            let h2 = h * h;
            vec![(-1.0, 1.0 / h2), (0.0, -2.0 / h2), (1.0, 1.0 / h2)]
        }
        3 => {
            let h3 = 2.0 * h * h * h;
            vec![
                (-2.0, -1.0 / h3),
                (-1.0, 2.0 / h3),
                (1.0, -2.0 / h3),
                (2.0, 1.0 / h3),
            ]
        }
        _ => panic!("stencils implemented to order 3"),
    }
}

fn fd_once(
    f: &dyn Fn(f64, f64) -> f64,
    u: (f64, f64),
    a: usize,
    b: usize,
    h1: f64,
    h2: f64,
) -> f64 {
    let mut acc = 0.0;
    for (o1, w1) in stencil(a, h1) {
        for (o2, w2) in stencil(b, h2) {
            acc += w1 * w2 * f(u.0 + o1 * h1, u.1 + o2 * h2);
        }
    }
    acc
}

/// Mixed partial d^(a+b) f / du1^a du2^b by central differences. Cancellation
/// noise grows like eps / h^(a+b), so the step is sized by the total
/// derivative order (1e-5 only for plain first derivatives), and orders
/// above one get a single Richardson extrapolation to push the truncation
/// error to O(h^4). Keeps the oracle noise well below the 1e-6 comparison
/// tolerance for derivatives up to total order 3.
pub fn fd_partial(f: &dyn Fn(f64, f64) -> f64, u: (f64, f64), a: usize, b: usize) -> f64 {
    let h = match a + b {
        0 | 1 => 1e-5,
        2 => 1e-3,
        _ => 5e-3,
    };
    if a + b <= 1 {
        return fd_once(f, u, a, b, h, h);
    }
    let coarse = fd_once(f, u, a, b, h, h);
    let fine = fd_once(f, u, a, b, h / 2.0, h / 2.0);
    (4.0 * fine - coarse) / 3.0
}

// ---------------------------------------------------------------------------
// Deterministic random expressions for the jet fuzz set.
// ---------------------------------------------------------------------------

/// Random closed-form expression that stays smooth and moderately scaled on
/// [-1.5, 1.5]^2 (arguments of the fast-growing functions are damped, and
/// divisors and log/sqrt/abs arguments are bounded away from zero).
pub fn random_expr(rng: &mut ChaCha8Rng, depth: usize) -> Expr {
    if depth == 0 {
        return match rng.gen_range(0..3) {
            0 => Expr::Param(Axis::U1),
            1 => Expr::Param(Axis::U2),
            _ => Expr::Const(rng.gen_range(-1.5..1.5)),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| Box::new(random_expr(rng, depth - 1));
    match rng.gen_range(0..9) {
        0 => Expr::Add(sub(rng), sub(rng)),
        1 => Expr::Sub(sub(rng), sub(rng)),
        2 => Expr::Mul(sub(rng), sub(rng)),
        3 => Expr::Sin(sub(rng)),
        4 => Expr::Cos(sub(rng)),
        5 => Expr::Exp(Box::new(Expr::Mul(Box::new(Expr::Const(0.4)), sub(rng)))),
        6 => Expr::Div(
            sub(rng),
            Box::new(Expr::Add(
                Box::new(Expr::Const(2.5)),
                Box::new(Expr::Sin(sub(rng))),
            )),
        ),
        7 => Expr::Sqrt(Box::new(Expr::Add(
            Box::new(Expr::Const(2.0)),
            Box::new(Expr::Cos(sub(rng))),
        ))),
        _ => Expr::Ln(Box::new(Expr::Add(
            Box::new(Expr::Const(3.0)),
            Box::new(Expr::Sin(sub(rng))),
        ))),
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random interior parameter point of a surface's domain.
pub fn random_point(rng: &mut ChaCha8Rng, spec: &SurfaceSpec) -> (f64, f64) {
    let p = |range: (f64, f64), t: f64| range.0 + (0.05 + 0.9 * t) * (range.1 - range.0);
    (
        p(spec.domain[0], rng.gen_range(0.0..1.0)),
        p(spec.domain[1], rng.gen_range(0.0..1.0)),
    )
}
