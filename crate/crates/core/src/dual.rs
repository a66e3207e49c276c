//! Second-order dual numbers for exact first and second directional
//! derivatives.
//!
//! `Dual2` carries a value together with two independent first-order
//! perturbations and their mixed second-order term: evaluating `f` at
//! `x + a e1 + b e2` with `e1^2 = e2^2 = 0` yields `f`, `a f'`, `b f'` and
//! the mixed Hessian entry in one pass, with no truncation error.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual2 {
    pub re: f64,
    pub e1: f64,
    pub e2: f64,
    pub e12: f64,
}

impl Dual2 {
    pub const fn new(re: f64, e1: f64, e2: f64, e12: f64) -> Self {
        Dual2 { re, e1, e2, e12 }
    }

    pub const fn constant(x: f64) -> Self {
        Dual2::new(x, 0.0, 0.0, 0.0)
    }

    pub fn sqrt(self) -> Self {
        let r = self.re.sqrt();
        let d1 = 0.5 / r;
        let d2 = -0.25 / (self.re * r);
        self.chain(r, d1, d2)
    }

    pub fn abs(self) -> Self {
        if self.re >= 0.0 {
            self
        } else {
            -self
        }
    }

    pub fn powi(self, n: i32) -> Self {
        let f = self.re.powi(n);
        let d1 = n as f64 * self.re.powi(n - 1);
        let d2 = (n as f64) * (n as f64 - 1.0) * self.re.powi(n - 2);
        self.chain(f, d1, d2)
    }

    pub fn powf(self, p: f64) -> Self {
        let f = self.re.powf(p);
        let d1 = p * self.re.powf(p - 1.0);
        let d2 = p * (p - 1.0) * self.re.powf(p - 2.0);
        self.chain(f, d1, d2)
    }

    pub fn exp(self) -> Self {
        let f = self.re.exp();
        self.chain(f, f, f)
    }

    pub fn ln(self) -> Self {
        let f = self.re.ln();
        self.chain(f, 1.0 / self.re, -1.0 / (self.re * self.re))
    }

    /// Apply a scalar function with value `f`, derivative `d1` and second
    /// derivative `d2` at `self.re`.
    fn chain(self, f: f64, d1: f64, d2: f64) -> Self {
        Dual2 {
            re: f,
            e1: d1 * self.e1,
            e2: d1 * self.e2,
            e12: d1 * self.e12 + d2 * self.e1 * self.e2,
        }
    }

    fn inv(self) -> Self {
        let f = 1.0 / self.re;
        self.chain(f, -f * f, 2.0 * f * f * f)
    }
}

impl From<f64> for Dual2 {
    fn from(x: f64) -> Self {
        Dual2::constant(x)
    }
}

impl Add for Dual2 {
    type Output = Dual2;
    fn add(self, o: Dual2) -> Dual2 {
        Dual2::new(
            self.re + o.re,
            self.e1 + o.e1,
            self.e2 + o.e2,
            self.e12 + o.e12,
        )
    }
}

impl Sub for Dual2 {
    type Output = Dual2;
    fn sub(self, o: Dual2) -> Dual2 {
        Dual2::new(
            self.re - o.re,
            self.e1 - o.e1,
            self.e2 - o.e2,
            self.e12 - o.e12,
        )
    }
}

impl Mul for Dual2 {
    type Output = Dual2;
    fn mul(self, o: Dual2) -> Dual2 {
        Dual2::new(
            self.re * o.re,
            self.re * o.e1 + self.e1 * o.re,
            self.re * o.e2 + self.e2 * o.re,
            self.re * o.e12 + self.e1 * o.e2 + self.e2 * o.e1 + self.e12 * o.re,
        )
    }
}

impl Div for Dual2 {
    type Output = Dual2;
    fn div(self, o: Dual2) -> Dual2 {
        self * o.inv()
    }
}

impl Neg for Dual2 {
    type Output = Dual2;
    fn neg(self) -> Dual2 {
        Dual2::new(-self.re, -self.e1, -self.e2, -self.e12)
    }
}

impl AddAssign for Dual2 {
    fn add_assign(&mut self, o: Dual2) {
        *self = *self + o;
    }
}

impl SubAssign for Dual2 {
    fn sub_assign(&mut self, o: Dual2) {
        *self = *self - o;
    }
}

impl Mul<f64> for Dual2 {
    type Output = Dual2;
    fn mul(self, c: f64) -> Dual2 {
        Dual2::new(self.re * c, self.e1 * c, self.e2 * c, self.e12 * c)
    }
}
