use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Result, RswError};
use crate::flow::{FlowField, Frame};

/// `n` equally spaced values from `lo` to `hi`, both included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Self {
        Self { lo, hi, n }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.n {
            0 => Vec::new(),
            1 => vec![self.lo],
            n => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.hi
                    } else {
                        self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

impl FromStr for Axis {
    type Err = RswError;

    /// Parses `lo:hi:count`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || RswError::InvalidParams(format!("expected lo:hi:count, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(bad());
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if !(lo.is_finite() && hi.is_finite()) || n == 0 || (n > 1 && hi < lo) {
            return Err(bad());
        }
        Ok(Self { lo, hi, n })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
    }
}

/// Tensor grid over `(t, a, b)`, where `(a, b)` is `(x, y)` or `(r, θ)`.
///
/// With `radial_fraction` set, `a` is read as a fraction of the field's
/// radial limit at each time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub t: Axis,
    pub a: Axis,
    pub b: Axis,
    pub radial_fraction: bool,
}

impl GridSpec {
    pub fn new(t: Axis, a: Axis, b: Axis) -> Self {
        Self {
            t,
            a,
            b,
            radial_fraction: false,
        }
    }

    pub fn radial_fraction(mut self) -> Self {
        self.radial_fraction = true;
        self
    }

    pub fn len(&self) -> usize {
        self.t.n * self.a.n * self.b.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in the order `t`, then `a`, then `b`.
    pub fn points(&self, field: &dyn FlowField) -> Result<Vec<[f64; 3]>> {
        if self.radial_fraction && field.frame() != Frame::Polar {
            return Err(RswError::InvalidParams("radial fractions need a polar grid".into()));
        }
        let (av, bv) = (self.a.values(), self.b.values());
        let mut out = Vec::with_capacity(self.len());
        for t in self.t.values() {
            let scale = if self.radial_fraction { field.radial_limit(t) } else { 1.0 };
            for &a in &av {
                for &b in &bv {
                    out.push([t, a * scale, b]);
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_is_inclusive() {
        let a: Axis = "0:1:5".parse().unwrap();
        assert_eq!(a.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!("2:2:1".parse::<Axis>().unwrap().values(), vec![2.0]);
        assert_eq!(a.to_string().parse::<Axis>().unwrap(), a);
    }

    #[test]
    fn axis_rejects_garbage() {
        for s in ["", "1:2", "a:1:2", "0:1:0", "1:0:3", "0:inf:2"] {
            assert!(s.parse::<Axis>().is_err(), "{s}");
        }
    }
}
