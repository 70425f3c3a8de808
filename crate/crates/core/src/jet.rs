//! Two-variable jets truncated at third order, plus a forward-mode dual
//! number that can sit on top of them.
//!
//! A [`Jet`] carries a scalar field's value and its partial derivatives in
//! `(x, y)` up to order 3 at a single point. Arithmetic and elementary
//! functions propagate derivatives exactly (Leibniz and Faà di Bruno), so
//! closed-form fields can be differentiated analytically by simply evaluating
//! them on jets.
//!
//! The [`Real`] trait abstracts over `f64`, [`Jet`] and [`Dual`] so that the
//! same formula can be evaluated for values, for spatial derivatives, or for
//! derivatives with respect to an auxiliary variable.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar types the differential formulas are generic over.
pub trait Real:
    Copy
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(c: f64) -> Self;
    /// The plain value, with all derivative information dropped.
    fn re(&self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn powi(self, k: i32) -> Self;

    fn scale(self, c: f64) -> Self {
        self * Self::cst(c)
    }
    fn recip(self) -> Self {
        Self::cst(1.0) / self
    }
}

impl Real for f64 {
    fn cst(c: f64) -> Self {
        c
    }
    fn re(&self) -> f64 {
        *self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powi(self, k: i32) -> Self {
        f64::powi(self, k)
    }
}

/// Value and partial derivatives of a scalar field at a point, up to order 3.
///
/// Entries above `order` are kept at zero and carry no information.
#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
    pub dxxx: f64,
    pub dxxy: f64,
    pub dxyy: f64,
    pub dyyy: f64,
    pub order: u8,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.to_array();
        let n = [1, 3, 6, 10][self.order.min(3) as usize];
        write!(f, "Jet{}{:?}", self.order, &a[..n])
    }
}

impl Jet {
    pub const MAX_ORDER: u8 = 3;

    pub fn constant(value: f64) -> Self {
        Self::from_array([value, 0., 0., 0., 0., 0., 0., 0., 0., 0.], Self::MAX_ORDER)
    }

    /// The coordinate function `x` at `x0`.
    pub fn var_x(x0: f64) -> Self {
        Self::from_array([x0, 1., 0., 0., 0., 0., 0., 0., 0., 0.], Self::MAX_ORDER)
    }

    /// The coordinate function `y` at `y0`.
    pub fn var_y(y0: f64) -> Self {
        Self::from_array([y0, 0., 1., 0., 0., 0., 0., 0., 0., 0.], Self::MAX_ORDER)
    }

    /// Both coordinate jets at `(x0, y0)`.
    pub fn coords(x0: f64, y0: f64) -> (Self, Self) {
        (Self::var_x(x0), Self::var_y(y0))
    }

    pub fn first_order(value: f64, dx: f64, dy: f64) -> Self {
        Self::from_array([value, dx, dy, 0., 0., 0., 0., 0., 0., 0.], 1)
    }

    pub fn second_order(value: f64, dx: f64, dy: f64, dxx: f64, dxy: f64, dyy: f64) -> Self {
        Self::from_array([value, dx, dy, dxx, dxy, dyy, 0., 0., 0., 0.], 2)
    }

    /// Builds a jet from the ten entries in the order
    /// `value, dx, dy, dxx, dxy, dyy, dxxx, dxxy, dxyy, dyyy`.
    pub fn from_array(a: [f64; 10], order: u8) -> Self {
        let order = order.min(Self::MAX_ORDER);
        let keep = [1, 3, 6, 10][order as usize];
        let mut b = [0.0; 10];
        b[..keep].copy_from_slice(&a[..keep]);
        Jet {
            value: b[0],
            dx: b[1],
            dy: b[2],
            dxx: b[3],
            dxy: b[4],
            dyy: b[5],
            dxxx: b[6],
            dxxy: b[7],
            dxyy: b[8],
            dyyy: b[9],
            order,
        }
    }

    pub fn to_array(&self) -> [f64; 10] {
        [
            self.value, self.dx, self.dy, self.dxx, self.dxy, self.dyy, self.dxxx, self.dxxy,
            self.dxyy, self.dyyy,
        ]
    }

    /// Same jet with the derivative information above `order` dropped.
    pub fn truncate(&self, order: u8) -> Self {
        Self::from_array(self.to_array(), order.min(self.order))
    }

    pub fn is_finite(&self) -> bool {
        let n = [1, 3, 6, 10][self.order as usize];
        self.to_array()[..n].iter().all(|v| v.is_finite())
    }

    /// Jet of `∂f/∂x`, one order lower.
    pub fn partial_x(&self) -> Self {
        assert!(self.order >= 1, "partial_x of an order-0 jet");
        Self::from_array(
            [self.dx, self.dxx, self.dxy, self.dxxx, self.dxxy, self.dxyy, 0., 0., 0., 0.],
            self.order - 1,
        )
    }

    /// Jet of `∂f/∂y`, one order lower.
    pub fn partial_y(&self) -> Self {
        assert!(self.order >= 1, "partial_y of an order-0 jet");
        Self::from_array(
            [self.dy, self.dxy, self.dyy, self.dxxy, self.dxyy, self.dyyy, 0., 0., 0., 0.],
            self.order - 1,
        )
    }

    /// `φ(self)` given `φ` and its first three derivatives at `self.value`.
    pub fn compose(&self, f0: f64, d1: f64, d2: f64, d3: f64) -> Self {
        let g = self;
        let (gx, gy) = (g.dx, g.dy);
        Self::from_array(
            [
                f0,
                d1 * gx,
                d1 * gy,
                d2 * gx * gx + d1 * g.dxx,
                d2 * gx * gy + d1 * g.dxy,
                d2 * gy * gy + d1 * g.dyy,
                d3 * gx * gx * gx + 3.0 * d2 * gx * g.dxx + d1 * g.dxxx,
                d3 * gx * gx * gy + d2 * (2.0 * gx * g.dxy + gy * g.dxx) + d1 * g.dxxy,
                d3 * gx * gy * gy + d2 * (2.0 * gy * g.dxy + gx * g.dyy) + d1 * g.dxyy,
                d3 * gy * gy * gy + 3.0 * d2 * gy * g.dyy + d1 * g.dyyy,
            ],
            g.order,
        )
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.compose(e, e, e, e)
    }

    pub fn ln(self) -> Self {
        let t = self.value;
        self.compose(t.ln(), 1.0 / t, -1.0 / (t * t), 2.0 / (t * t * t))
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose(s, c, s, c)
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose(c, s, c, s)
    }

    pub fn tanh(self) -> Self {
        let t = self.value.tanh();
        let s2 = 1.0 - t * t;
        self.compose(t, s2, -2.0 * t * s2, s2 * (6.0 * t * t - 2.0))
    }

    pub fn tan(self) -> Self {
        let t = self.value.tan();
        let s2 = 1.0 + t * t;
        self.compose(t, s2, 2.0 * t * s2, s2 * (6.0 * t * t + 2.0))
    }

    pub fn atan(self) -> Self {
        let t = self.value;
        let w = 1.0 / (1.0 + t * t);
        self.compose(t.atan(), w, -2.0 * t * w * w, (6.0 * t * t - 2.0) * w * w * w)
    }

    pub fn asinh(self) -> Self {
        let t = self.value;
        let w = 1.0 / (1.0 + t * t);
        let r = w.sqrt();
        self.compose(t.asinh(), r, -t * r * w, (2.0 * t * t - 1.0) * r * w * w)
    }

    /// `acosh` on `t > 1`.
    pub fn acosh(self) -> Self {
        let t = self.value;
        let w = 1.0 / (t * t - 1.0);
        let r = w.sqrt();
        self.compose(t.acosh(), r, -t * r * w, (2.0 * t * t + 1.0) * r * w * w)
    }

    /// `acos` on `|t| < 1`.
    pub fn acos(self) -> Self {
        let t = self.value;
        let w = 1.0 / (1.0 - t * t);
        let r = w.sqrt();
        self.compose(t.acos(), -r, -t * r * w, -(2.0 * t * t + 1.0) * r * w * w)
    }

    pub fn powf(self, k: f64) -> Self {
        let t = self.value;
        self.compose(
            t.powf(k),
            k * t.powf(k - 1.0),
            k * (k - 1.0) * t.powf(k - 2.0),
            k * (k - 1.0) * (k - 2.0) * t.powf(k - 3.0),
        )
    }

    fn zip(self, rhs: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let (a, b) = (self.to_array(), rhs.to_array());
        let mut c = [0.0; 10];
        for i in 0..10 {
            c[i] = f(a[i], b[i]);
        }
        Self::from_array(c, self.order.min(rhs.order))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        let a = self.to_array();
        Self::from_array(a.map(|v| -v), self.order)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, g: Jet) -> Jet {
        let f = self;
        Self::from_array(
            [
                f.value * g.value,
                f.dx * g.value + f.value * g.dx,
                f.dy * g.value + f.value * g.dy,
                f.dxx * g.value + 2.0 * f.dx * g.dx + f.value * g.dxx,
                f.dxy * g.value + f.dx * g.dy + f.dy * g.dx + f.value * g.dxy,
                f.dyy * g.value + 2.0 * f.dy * g.dy + f.value * g.dyy,
                f.dxxx * g.value + 3.0 * f.dxx * g.dx + 3.0 * f.dx * g.dxx + f.value * g.dxxx,
                f.dxxy * g.value
                    + f.dxx * g.dy
                    + 2.0 * f.dxy * g.dx
                    + 2.0 * f.dx * g.dxy
                    + f.dy * g.dxx
                    + f.value * g.dxxy,
                f.dxyy * g.value
                    + 2.0 * f.dxy * g.dy
                    + f.dx * g.dyy
                    + f.dyy * g.dx
                    + 2.0 * f.dy * g.dxy
                    + f.value * g.dxyy,
                f.dyyy * g.value + 3.0 * f.dyy * g.dy + 3.0 * f.dy * g.dyy + f.value * g.dyyy,
            ],
            f.order.min(g.order),
        )
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        self * Real::recip(rhs)
    }
}

impl Real for Jet {
    fn cst(c: f64) -> Self {
        Jet::constant(c)
    }
    fn re(&self) -> f64 {
        self.value
    }
    fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s, -c)
    }
    fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c, s)
    }
    fn sqrt(self) -> Self {
        let r = self.value.sqrt();
        self.compose(r, 0.5 / r, -0.25 / (r * self.value), 0.375 / (r * self.value * self.value))
    }
    fn powi(self, k: i32) -> Self {
        let t = self.value;
        let k = k as f64;
        let p = |e: f64| if e == 0.0 { 1.0 } else { t.powf(e) };
        self.compose(p(k), k * p(k - 1.0), k * (k - 1.0) * p(k - 2.0), k * (k - 1.0) * (k - 2.0) * p(k - 3.0))
    }
    fn scale(self, c: f64) -> Self {
        Self::from_array(self.to_array().map(|v| v * c), self.order)
    }
    fn recip(self) -> Self {
        let t = self.value;
        let r = 1.0 / t;
        self.compose(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r)
    }
}

/// `re + eps·ε` with `ε² = 0`, over any [`Real`] base.
#[derive(Clone, Copy, Debug)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Real> Dual<T> {
    pub fn variable(re: T) -> Self {
        Dual { re, eps: T::cst(1.0) }
    }
    pub fn constant(re: T) -> Self {
        Dual { re, eps: T::cst(0.0) }
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual { re: self.re + o.re, eps: self.eps + o.eps }
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual { re: self.re - o.re, eps: self.eps - o.eps }
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual { re: self.re * o.re, eps: self.eps * o.re + self.re * o.eps }
    }
}

impl<T: Real> Div for Dual<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = o.re.recip();
        Dual { re: self.re * inv, eps: (self.eps - self.re * inv * o.eps) * inv }
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { re: -self.re, eps: -self.eps }
    }
}

impl<T: Real> Real for Dual<T> {
    fn cst(c: f64) -> Self {
        Dual::constant(T::cst(c))
    }
    fn re(&self) -> f64 {
        self.re.re()
    }
    fn sin(self) -> Self {
        Dual { re: self.re.sin(), eps: self.re.cos() * self.eps }
    }
    fn cos(self) -> Self {
        Dual { re: self.re.cos(), eps: -(self.re.sin() * self.eps) }
    }
    fn sqrt(self) -> Self {
        let r = self.re.sqrt();
        Dual { re: r, eps: self.eps / r.scale(2.0) }
    }
    fn powi(self, k: i32) -> Self {
        let d = if k == 0 { T::cst(0.0) } else { self.re.powi(k - 1).scale(k as f64) };
        Dual { re: self.re.powi(k), eps: d * self.eps }
    }
}
