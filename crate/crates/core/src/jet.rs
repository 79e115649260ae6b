//! Forward-mode dual numbers.
//!
//! A [`Jet`] carries a value together with its partial derivatives with
//! respect to `N` seeded inputs. Jets nest (`Jet<Jet<f64, 6>, 6>`), which is
//! how second derivatives of generator coefficients are obtained for the
//! Jacobi identity check.
//!
//! Everything that must be differentiated is written once against the
//! [`Scalar`] trait and instantiated with `f64` for plain evaluation.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic needed by field formulas and generator coefficients.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    /// Underlying real value (strips all derivative parts).
    fn re(&self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn tan(self) -> Self;
    fn atan(self) -> Self;
    fn atan2(self, x: Self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn powf(self, p: f64) -> Self;

    fn recip(self) -> Self {
        Self::cst(1.0) / self
    }

    fn sq(self) -> Self {
        self * self
    }
}

impl Scalar for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn re(&self) -> f64 {
        *self
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn tan(self) -> Self {
        f64::tan(self)
    }
    #[inline]
    fn atan(self) -> Self {
        f64::atan(self)
    }
    #[inline]
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    #[inline]
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
}

/// Value plus gradient with respect to `N` inputs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T, const N: usize> {
    pub v: T,
    pub d: [T; N],
}

/// The jet used by flow fields: derivatives in `(t, a, b)` where `(a, b)` is
/// `(x, y)` or `(r, theta)` depending on the frame.
pub type J3 = Jet<f64, 3>;

impl<T: Scalar, const N: usize> Jet<T, N> {
    pub fn constant(v: T) -> Self {
        Self {
            v,
            d: [T::cst(0.0); N],
        }
    }

    /// Independent variable number `i`.
    pub fn var(v: T, i: usize) -> Self {
        let mut d = [T::cst(0.0); N];
        d[i] = T::cst(1.0);
        Self { v, d }
    }

    /// Seeds every component of `vals` as its own independent variable.
    pub fn seed(vals: [T; N]) -> [Self; N] {
        let mut out = [Self::constant(T::cst(0.0)); N];
        for (i, v) in vals.into_iter().enumerate() {
            out[i] = Self::var(v, i);
        }
        out
    }

    /// Builds `g(inputs)` from its value and its partials with respect to
    /// each input. Used where `g` is only available numerically (roots of
    /// implicit equations, quadratures) but its local partials are known.
    pub fn chain<const M: usize>(value: T, partials: [T; M], inputs: &[Self; M]) -> Self {
        let mut d = [T::cst(0.0); N];
        for (p, x) in partials.iter().zip(inputs.iter()) {
            for (di, xi) in d.iter_mut().zip(x.d.iter()) {
                *di = *di + *p * *xi;
            }
        }
        Self { v: value, d }
    }

    #[inline]
    fn map(self, fv: T, dfv: T) -> Self {
        let mut d = self.d;
        for di in d.iter_mut() {
            *di = *di * dfv;
        }
        Self { v: fv, d }
    }
}

impl<const N: usize> Jet<f64, N> {
    pub fn grad(&self) -> [f64; N] {
        self.d
    }
}

impl<T: Scalar, const N: usize> Add for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(o.d.iter()) {
            *a = *a + *b;
        }
        Self { v: self.v + o.v, d }
    }
}

impl<T: Scalar, const N: usize> Sub for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(o.d.iter()) {
            *a = *a - *b;
        }
        Self { v: self.v - o.v, d }
    }
}

impl<T: Scalar, const N: usize> Mul for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(o.d.iter()) {
            *a = *a * o.v + self.v * *b;
        }
        Self { v: self.v * o.v, d }
    }
}

impl<T: Scalar, const N: usize> Div for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let inv = T::cst(1.0) / o.v;
        let v = self.v * inv;
        let mut d = self.d;
        for (a, b) in d.iter_mut().zip(o.d.iter()) {
            *a = (*a - v * *b) * inv;
        }
        Self { v, d }
    }
}

impl<T: Scalar, const N: usize> Neg for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        let mut d = self.d;
        for a in d.iter_mut() {
            *a = -*a;
        }
        Self { v: -self.v, d }
    }
}

impl<T: Scalar, const N: usize> Add<f64> for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn add(self, c: f64) -> Self {
        Self {
            v: self.v + c,
            d: self.d,
        }
    }
}

impl<T: Scalar, const N: usize> Sub<f64> for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn sub(self, c: f64) -> Self {
        Self {
            v: self.v - c,
            d: self.d,
        }
    }
}

impl<T: Scalar, const N: usize> Mul<f64> for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn mul(self, c: f64) -> Self {
        let mut d = self.d;
        for a in d.iter_mut() {
            *a = *a * c;
        }
        Self { v: self.v * c, d }
    }
}

impl<T: Scalar, const N: usize> Div<f64> for Jet<T, N> {
    type Output = Self;
    #[inline]
    fn div(self, c: f64) -> Self {
        self * (1.0 / c)
    }
}

impl<T: Scalar, const N: usize> Scalar for Jet<T, N> {
    fn cst(v: f64) -> Self {
        Self::constant(T::cst(v))
    }
    fn re(&self) -> f64 {
        self.v.re()
    }
    fn sin(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.map(s, c)
    }
    fn cos(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.map(c, -s)
    }
    fn tan(self) -> Self {
        let t = self.v.tan();
        self.map(t, t * t + 1.0)
    }
    fn atan(self) -> Self {
        let v = self.v;
        self.map(v.atan(), (v * v + 1.0).recip())
    }
    fn atan2(self, x: Self) -> Self {
        let y = self;
        let r2 = x.v * x.v + y.v * y.v;
        let mut d = y.d;
        for (dy, dx) in d.iter_mut().zip(x.d.iter()) {
            *dy = (x.v * *dy - y.v * *dx) / r2;
        }
        Self {
            v: y.v.atan2(x.v),
            d,
        }
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.map(s, (s * 2.0).recip())
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.map(e, e)
    }
    fn ln(self) -> Self {
        let v = self.v;
        self.map(v.ln(), v.recip())
    }
    fn powi(self, n: i32) -> Self {
        let v = self.v;
        if n == 0 {
            return Self::cst(1.0);
        }
        self.map(v.powi(n), v.powi(n - 1) * n as f64)
    }
    fn powf(self, p: f64) -> Self {
        let v = self.v;
        self.map(v.powf(p), v.powf(p - 1.0) * p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fd<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
        let h = 1e-6 * x.abs().max(1.0);
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn elementary_derivatives_match_central_differences() {
        let x = 0.73;
        let j = Jet::<f64, 1>::var(x, 0);
        let cases: Vec<(Jet<f64, 1>, Box<dyn Fn(f64) -> f64>)> = vec![
            (j.sin() * j.cos(), Box::new(|x: f64| x.sin() * x.cos())),
            (j.tan(), Box::new(|x: f64| x.tan())),
            (j.atan() / (j + 2.0), Box::new(|x: f64| x.atan() / (x + 2.0))),
            (j.sqrt().exp(), Box::new(|x: f64| x.sqrt().exp())),
            (j.ln() * j.powi(3), Box::new(|x: f64| x.ln() * x.powi(3))),
            (j.powf(1.5) - j.recip(), Box::new(|x: f64| x.powf(1.5) - 1.0 / x)),
        ];
        for (jet, f) in cases {
            assert_relative_eq!(jet.v, f(x), epsilon = 1e-14);
            assert_relative_eq!(jet.d[0], fd(&f, x), epsilon = 1e-8);
        }
    }

    #[test]
    fn atan2_gradient() {
        let [y, x] = Jet::<f64, 2>::seed([0.4, -1.2]);
        let a = y.atan2(x);
        let r2 = 0.4f64.powi(2) + 1.44;
        assert_relative_eq!(a.d[0], -1.2 / r2, epsilon = 1e-15);
        assert_relative_eq!(a.d[1], -0.4 / r2, epsilon = 1e-15);
    }

    #[test]
    fn nested_jets_give_second_derivatives() {
        type J = Jet<Jet<f64, 1>, 1>;
        let x = 0.3;
        let inner = Jet::<f64, 1>::var(x, 0);
        let outer = J::var(inner, 0);
        let y = outer.sin() * outer;
        // d²/dx² (x sin x) = 2cos x − x sin x
        assert_relative_eq!(y.d[0].d[0], 2.0 * x.cos() - x * x.sin(), epsilon = 1e-14);
    }

    #[test]
    fn chain_rule_composition() {
        let inputs = J3::seed([1.0, 2.0, 3.0]);
        let g = J3::chain(5.0, [2.0, 0.0, -1.0], &inputs);
        assert_eq!(g.d, [2.0, 0.0, -1.0]);
    }
}
