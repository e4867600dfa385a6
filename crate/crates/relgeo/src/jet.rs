//! Exact bivariate truncated Taylor arithmetic.
//!
//! A [`Jet2`] of order `N` holds the Taylor coefficients `c_ab` of a scalar
//! function around an evaluation point, for every monomial
//! `(du1)^a (du2)^b` with `a + b <= N`. The partial derivative
//! `d^(a+b) f / du1^a du2^b` at the point is `c_ab * a! * b!`.
//!
//! Coefficient layout (fixed, so serialized coefficient slices are portable):
//! total-degree order, and within one total degree `d` ascending in `b`:
//!
//! ```text
//! index(a, b) = d (d + 1) / 2 + b   with d = a + b
//! (0,0) | (1,0) (0,1) | (2,0) (1,1) (0,2) | (3,0) (2,1) (1,2) (0,3) | ...
//! ```
//!
//! Arithmetic is exact up to the stated order: truncated products drop only
//! terms whose total degree exceeds the order, which a consumer of that order
//! never reads. Binary operations between jets of different orders truncate
//! to the smaller order (the higher coefficients of the result would not be
//! trustworthy). Differentiation [`Jet2::d`] lowers the order by one and
//! fails loudly on an order-0 jet rather than fabricating zeros.

use crate::{Error, Result};

/// Parameter axis of the two-dimensional parameter domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    U1,
    U2,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::U1, Axis::U2];

    /// 0 for u1, 1 for u2; handy for indexing tensors.
    pub fn index(self) -> usize {
        match self {
            Axis::U1 => 0,
            Axis::U2 => 1,
        }
    }

    pub fn from_index(i: usize) -> Axis {
        match i {
            0 => Axis::U1,
            1 => Axis::U2,
            _ => panic!("axis index out of range: {i}"),
        }
    }
}

/// Truncated bivariate Taylor expansion of a scalar at a parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    order: usize,
    coeffs: Vec<f64>,
}

fn coeff_count(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

fn index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

impl Jet2 {
    /// Jet of a constant: value term only, all derivatives zero.
    pub fn constant(value: f64, order: usize) -> Jet2 {
        let mut coeffs = vec![0.0; coeff_count(order)];
        coeffs[0] = value;
        Jet2 { order, coeffs }
    }

    /// Jet of the coordinate function on `axis` at the point: value term plus
    /// a unit first-order coefficient on its own axis.
    pub fn variable(axis: Axis, value: f64, order: usize) -> Jet2 {
        let mut jet = Jet2::constant(value, order);
        if order >= 1 {
            match axis {
                Axis::U1 => jet.coeffs[index(1, 0)] = 1.0,
                Axis::U2 => jet.coeffs[index(0, 1)] = 1.0,
            }
        }
        jet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The function value at the evaluation point (coefficient `c_00`).
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Taylor coefficient `c_ab`. Panics if `a + b` exceeds the order.
    pub fn coeff(&self, a: usize, b: usize) -> f64 {
        assert!(
            a + b <= self.order,
            "coefficient ({a},{b}) beyond jet order {}",
            self.order
        );
        self.coeffs[index(a, b)]
    }

    /// All coefficients in the documented total-degree layout.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// The mixed partial derivative value `d^(a+b) f / du1^a du2^b`.
    pub fn partial(&self, a: usize, b: usize) -> f64 {
        self.coeff(a, b) * factorial(a) * factorial(b)
    }

    /// Copy truncated to `order` (which must not exceed the current order).
    pub fn truncated(&self, order: usize) -> Jet2 {
        assert!(order <= self.order, "cannot extend a jet by truncation");
        Jet2 {
            order,
            coeffs: self.coeffs[..coeff_count(order)].to_vec(),
        }
    }

    /// Derivative with respect to `axis`, as a jet one order lower.
    pub fn d(&self, axis: Axis) -> Result<Jet2> {
        if self.order == 0 {
            return Err(Error::Order {
                what: "partial derivative of a jet",
                need: 1,
                have: 0,
            });
        }
        let order = self.order - 1;
        let mut coeffs = vec![0.0; coeff_count(order)];
        for d in 0..=order {
            for b in 0..=d {
                let a = d - b;
                coeffs[index(a, b)] = match axis {
                    Axis::U1 => (a + 1) as f64 * self.coeffs[index(a + 1, b)],
                    Axis::U2 => (b + 1) as f64 * self.coeffs[index(a, b + 1)],
                };
            }
        }
        Ok(Jet2 { order, coeffs })
    }

    fn binary(&self, rhs: &Jet2, f: impl Fn(f64, f64) -> f64) -> Jet2 {
        let order = self.order.min(rhs.order);
        let n = coeff_count(order);
        let coeffs = (0..n).map(|i| f(self.coeffs[i], rhs.coeffs[i])).collect();
        Jet2 { order, coeffs }
    }

    /// Scale every coefficient.
    pub fn scale(&self, c: f64) -> Jet2 {
        Jet2 {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Add a constant to the value term.
    pub fn shift(&self, c: f64) -> Jet2 {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    fn mul_impl(&self, rhs: &Jet2) -> Jet2 {
        let order = self.order.min(rhs.order);
        let mut coeffs = vec![0.0; coeff_count(order)];
        for d1 in 0..=order {
            for b1 in 0..=d1 {
                let a1 = d1 - b1;
                let c1 = self.coeffs[index(a1, b1)];
                if c1 == 0.0 {
                    continue;
                }
                for d2 in 0..=(order - d1) {
                    for b2 in 0..=d2 {
                        let a2 = d2 - b2;
                        let c2 = rhs.coeffs[index(a2, b2)];
                        if c2 == 0.0 {
                            continue;
                        }
                        coeffs[index(a1 + a2, b1 + b2)] += c1 * c2;
                    }
                }
            }
        }
        Jet2 { order, coeffs }
    }

    /// Compose a univariate Taylor series (coefficients `series[k]` of the
    /// outer function around this jet's value) with this jet. Horner on the
    /// zero-value deviation keeps every product truncated.
    fn compose(&self, series: &[f64]) -> Jet2 {
        let mut dev = self.clone();
        dev.coeffs[0] = 0.0;
        let mut acc = Jet2::constant(series[self.order], self.order);
        for k in (0..self.order).rev() {
            acc = acc.mul_impl(&dev).shift(series[k]);
        }
        acc
    }

    /// Reciprocal. Fails if the value term is zero.
    pub fn recip(&self) -> Result<Jet2> {
        let v = self.value();
        if v == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let mut series = vec![0.0; self.order + 1];
        let mut p = 1.0 / v;
        for s in series.iter_mut() {
            *s = p;
            p *= -1.0 / v;
        }
        Ok(self.compose(&series))
    }

    /// Quotient `self / rhs`. Fails if `rhs` has zero value term.
    pub fn div(&self, rhs: &Jet2) -> Result<Jet2> {
        Ok(self.mul_impl(&rhs.recip()?))
    }

    pub fn exp(&self) -> Jet2 {
        let e = self.value().exp();
        let mut series = vec![0.0; self.order + 1];
        let mut f = 1.0;
        for (k, s) in series.iter_mut().enumerate() {
            if k > 0 {
                f /= k as f64;
            }
            *s = e * f;
        }
        self.compose(&series)
    }

    pub fn ln(&self) -> Result<Jet2> {
        let v = self.value();
        if v <= 0.0 {
            return Err(Error::Domain {
                func: "ln",
                value: v,
            });
        }
        let mut series = vec![0.0; self.order + 1];
        series[0] = v.ln();
        let mut p = 1.0 / v;
        for k in 1..=self.order {
            series[k] = p / k as f64;
            p *= -1.0 / v;
        }
        Ok(self.compose(&series))
    }

    pub fn sin(&self) -> Jet2 {
        self.trig(true)
    }

    pub fn cos(&self) -> Jet2 {
        self.trig(false)
    }

    fn trig(&self, sin_first: bool) -> Jet2 {
        let (s, c) = self.value().sin_cos();
        let cycle = if sin_first {
            [s, c, -s, -c]
        } else {
            [c, -s, -c, s]
        };
        let mut series = vec![0.0; self.order + 1];
        let mut f = 1.0;
        for (k, v) in series.iter_mut().enumerate() {
            if k > 0 {
                f /= k as f64;
            }
            *v = cycle[k % 4] * f;
        }
        self.compose(&series)
    }

    /// Power with a real exponent. Integer exponents of magnitude up to 16 go
    /// through repeated multiplication and so accept any (for negative
    /// exponents, nonzero) base; other exponents require a positive value
    /// term.
    pub fn powf(&self, p: f64) -> Result<Jet2> {
        if p.fract() == 0.0 && p.abs() <= 16.0 {
            return self.powi(p as i64);
        }
        let v = self.value();
        if v <= 0.0 {
            return Err(Error::Domain {
                func: "powf",
                value: v,
            });
        }
        let mut series = vec![0.0; self.order + 1];
        let mut binom = 1.0;
        for (k, s) in series.iter_mut().enumerate() {
            if k > 0 {
                binom *= (p - (k - 1) as f64) / k as f64;
            }
            *s = binom * v.powf(p - k as f64);
        }
        Ok(self.compose(&series))
    }

    /// Integer power via repeated multiplication.
    pub fn powi(&self, n: i64) -> Result<Jet2> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut acc = Jet2::constant(1.0, self.order);
        for _ in 0..n {
            acc = acc.mul_impl(self);
        }
        Ok(acc)
    }

    pub fn sqrt(&self) -> Result<Jet2> {
        let v = self.value();
        if v <= 0.0 {
            return Err(Error::Domain {
                func: "sqrt",
                value: v,
            });
        }
        self.powf(0.5)
    }

    /// Sign-branch absolute value: `|f| = f` or `-f` by the sign of the value
    /// term. A jet centered where the argument vanishes has no one-sided
    /// expansion and is rejected.
    pub fn abs(&self) -> Result<Jet2> {
        let v = self.value();
        if v == 0.0 {
            return Err(Error::Domain {
                func: "abs",
                value: v,
            });
        }
        Ok(if v > 0.0 { self.clone() } else { -self })
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

macro_rules! jet_binop {
    ($trait:ident, $method:ident, $f:expr) => {
        impl std::ops::$trait<&Jet2> for &Jet2 {
            type Output = Jet2;
            fn $method(self, rhs: &Jet2) -> Jet2 {
                $f(self, rhs)
            }
        }
        impl std::ops::$trait<Jet2> for Jet2 {
            type Output = Jet2;
            fn $method(self, rhs: Jet2) -> Jet2 {
                $f(&self, &rhs)
            }
        }
        impl std::ops::$trait<&Jet2> for Jet2 {
            type Output = Jet2;
            fn $method(self, rhs: &Jet2) -> Jet2 {
                $f(&self, rhs)
            }
        }
        impl std::ops::$trait<Jet2> for &Jet2 {
            type Output = Jet2;
            fn $method(self, rhs: Jet2) -> Jet2 {
                $f(self, &rhs)
            }
        }
    };
}

jet_binop!(Add, add, |a: &Jet2, b: &Jet2| a.binary(b, |x, y| x + y));
jet_binop!(Sub, sub, |a: &Jet2, b: &Jet2| a.binary(b, |x, y| x - y));
jet_binop!(Mul, mul, |a: &Jet2, b: &Jet2| a.mul_impl(b));

impl std::ops::Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl std::ops::Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn variable_seeds() {
        let j = Jet2::variable(Axis::U1, 2.0, 2);
        assert_eq!(j.coeff(0, 0), 2.0);
        assert_eq!(j.coeff(1, 0), 1.0);
        assert_eq!(j.coeff(0, 1), 0.0);
        assert_eq!(j.coeff(2, 0), 0.0);
        assert_eq!(j.coeff(1, 1), 0.0);
        assert_eq!(j.coeff(0, 2), 0.0);

        let j = Jet2::variable(Axis::U2, 0.0, 1);
        assert_eq!(j.coeffs(), &[0.0, 0.0, 1.0]);

        let j = Jet2::variable(Axis::U1, -3.5, 0);
        assert_eq!(j.coeffs(), &[-3.5]);
    }

    #[test]
    fn bilinear_product() {
        let u = Jet2::variable(Axis::U1, 2.0, 2);
        let v = Jet2::variable(Axis::U2, 3.0, 2);
        let p = &u * &v;
        assert_eq!(p.coeff(0, 0), 6.0);
        assert_eq!(p.coeff(1, 0), 3.0);
        assert_eq!(p.coeff(0, 1), 2.0);
        assert_eq!(p.coeff(1, 1), 1.0);
        assert_eq!(p.coeff(2, 0), 0.0);
        assert_eq!(p.coeff(0, 2), 0.0);
    }

    #[test]
    fn sine_series_at_origin() {
        let u = Jet2::variable(Axis::U1, 0.0, 3);
        let s = u.sin();
        assert_relative_eq!(s.coeff(0, 0), 0.0);
        assert_relative_eq!(s.coeff(1, 0), 1.0);
        assert_relative_eq!(s.coeff(2, 0), 0.0);
        assert_relative_eq!(s.coeff(3, 0), -1.0 / 6.0, epsilon = 1e-15);
    }

    // Frozen from the central-difference oracle on f(u) = u^2 at 1.5
    // (see tests/jet_oracle.rs for the oracle itself).
    #[test]
    fn square_at_three_halves() {
        let u = Jet2::variable(Axis::U1, 1.5, 2);
        let p = u.powi(2).unwrap();
        assert_relative_eq!(p.coeff(0, 0), 2.25, max_relative = 1e-15);
        assert_relative_eq!(p.coeff(1, 0), 3.0, max_relative = 1e-15);
        assert_relative_eq!(p.coeff(2, 0), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn exponential_series() {
        let u = Jet2::variable(Axis::U1, 0.0, 4);
        let e = u.exp();
        for k in 0..=4 {
            assert_relative_eq!(e.coeff(k, 0), 1.0 / factorial(k), epsilon = 1e-15);
        }
    }

    #[test]
    fn log_series() {
        let u = Jet2::variable(Axis::U1, 1.0, 4);
        let l = u.ln().unwrap();
        assert_relative_eq!(l.coeff(0, 0), 0.0);
        assert_relative_eq!(l.coeff(1, 0), 1.0);
        assert_relative_eq!(l.coeff(2, 0), -0.5);
        assert_relative_eq!(l.coeff(3, 0), 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(l.coeff(4, 0), -0.25);
    }

    #[test]
    fn reciprocal_geometric_series() {
        let u = Jet2::variable(Axis::U1, 0.0, 4);
        let g = (Jet2::constant(1.0, 4) - u).recip().unwrap();
        for k in 0..=4 {
            assert_relative_eq!(g.coeff(k, 0), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn derivative_shifts_coefficients() {
        let u = Jet2::variable(Axis::U1, 0.7, 3);
        let v = Jet2::variable(Axis::U2, -0.2, 3);
        let f = (&u * &u) * &v; // u^2 v
        let fu = f.d(Axis::U1).unwrap(); // 2uv
        assert_relative_eq!(fu.value(), 2.0 * 0.7 * -0.2, max_relative = 1e-15);
        assert_relative_eq!(fu.coeff(1, 0), 2.0 * -0.2, max_relative = 1e-15);
        assert_relative_eq!(fu.coeff(0, 1), 2.0 * 0.7, max_relative = 1e-15);
        let fuv = fu.d(Axis::U2).unwrap();
        assert_relative_eq!(fuv.value(), 2.0 * 0.7, max_relative = 1e-15);
    }

    #[test]
    fn derivative_of_order_zero_fails() {
        let j = Jet2::constant(1.0, 0);
        assert!(matches!(j.d(Axis::U1), Err(Error::Order { .. })));
    }

    #[test]
    fn binary_ops_truncate_to_min_order() {
        let a = Jet2::variable(Axis::U1, 1.0, 4);
        let b = Jet2::variable(Axis::U2, 2.0, 2);
        assert_eq!((&a + &b).order(), 2);
        assert_eq!((&a * &b).order(), 2);
    }

    #[test]
    fn zero_value_rejections() {
        let z = Jet2::variable(Axis::U1, 0.0, 2);
        assert!(matches!(z.recip(), Err(Error::DivisionByZero)));
        assert!(matches!(z.abs(), Err(Error::Domain { .. })));
        assert!(matches!(z.ln(), Err(Error::Domain { .. })));
        let neg = Jet2::variable(Axis::U1, -1.0, 2);
        assert!(matches!(neg.sqrt(), Err(Error::Domain { .. })));
        // Integer powers of negative bases are fine.
        assert_relative_eq!(neg.powf(2.0).unwrap().value(), 1.0);
        assert_relative_eq!(neg.powi(-1).unwrap().value(), -1.0);
    }

    #[test]
    fn abs_branches() {
        let p = Jet2::variable(Axis::U1, 2.0, 2);
        let n = Jet2::variable(Axis::U1, -2.0, 2);
        assert_eq!(p.abs().unwrap(), p);
        assert_relative_eq!(n.abs().unwrap().value(), 2.0);
        assert_relative_eq!(n.abs().unwrap().coeff(1, 0), -1.0);
    }

    proptest::proptest! {
        // Ring axiom after rounding: distributivity coefficientwise.
        #[test]
        fn distributivity(coeffs in proptest::collection::vec(-2.0f64..2.0, 18)) {
            let jet = |c: &[f64]| Jet2 { order: 2, coeffs: c.to_vec() };
            let f = jet(&coeffs[0..6]);
            let g = jet(&coeffs[6..12]);
            let h = jet(&coeffs[12..18]);
            let lhs = (&f + &g) * &h;
            let rhs = &(&f * &h) + &(&g * &h);
            for i in 0..6 {
                proptest::prop_assert!(
                    (lhs.coeffs()[i] - rhs.coeffs()[i]).abs()
                        <= 1e-12 * (1.0 + lhs.coeffs()[i].abs())
                );
            }
        }

        // Multiplication against the closed form for monomial products.
        #[test]
        fn product_value_matches(x in -2.0f64..2.0, y in -2.0f64..2.0) {
            let u = Jet2::variable(Axis::U1, x, 3);
            let v = Jet2::variable(Axis::U2, y, 3);
            let p = (&u * &u) * &v;
            proptest::prop_assert!((p.value() - x * x * y).abs() < 1e-12);
            proptest::prop_assert!((p.partial(2, 1) - 2.0).abs() < 1e-12);
        }
    }
}
