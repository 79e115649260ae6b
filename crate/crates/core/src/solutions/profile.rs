use std::fmt;
use std::sync::Arc;

use crate::jet::J3;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied smooth scalar function with its derivative, used for
/// `V̄(r)` in the stationary class and `ψ(λ)` in the contact class.
#[derive(Clone)]
pub struct Profile {
    f: RealFn,
    df: RealFn,
    label: String,
}

impl Profile {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            f: Arc::new(f),
            df: Arc::new(df),
            label: label.into(),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("const:{c}"), move |_| c, |_| 0.0)
    }

    /// `c·x^p`.
    pub fn power(c: f64, p: f64) -> Self {
        Self::new(format!("power:{c}:{p}"), move |x| c * x.powf(p), move |x| c * p * x.powf(p - 1.0))
    }

    /// `a·sin(k·x)`.
    pub fn sine(a: f64, k: f64) -> Self {
        Self::new(format!("sine:{a}:{k}"), move |x| a * (k * x).sin(), move |x| a * k * (k * x).cos())
    }

    /// Parses `const:c`, `power:c:p` or `sine:a:k`.
    pub fn parse(spec: &str) -> Option<Self> {
        let mut it = spec.split(':');
        let kind = it.next()?;
        let nums: Vec<f64> = it.map(|x| x.trim().parse().ok()).collect::<Option<_>>()?;
        match (kind, nums.as_slice()) {
            ("const", &[c]) => Some(Self::constant(c)),
            ("power", &[c, p]) => Some(Self::power(c, p)),
            ("sine", &[a, k]) => Some(Self::sine(a, k)),
            _ => None,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        (self.df)(x)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub(crate) fn jet(&self, x: J3) -> J3 {
        J3::chain(self.value(x.v), [self.deriv(x.v)], &[x])
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile({})", self.label)
    }
}
