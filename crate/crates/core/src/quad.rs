//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.

use crate::error::{Result, RswError};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_intervals: 4000,
        }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    Segment {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).abs(),
    }
}

/// Integrates `f` over `[a, b]`, returning `(value, error estimate)`.
///
/// The integrand is never evaluated at the endpoints, so integrable endpoint
/// singularities are tolerated (slowly); callers with known singular
/// behaviour should substitute first.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<(f64, f64)> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let mut segs = vec![kronrod(&f, a, b)];
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.error).sum();
        if !total.is_finite() {
            return Err(RswError::QuadratureFail { a, b });
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok((total, err));
        }
        if segs.len() >= opts.max_intervals {
            return Err(RswError::QuadratureFail { a, b });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let s = segs.swap_remove(worst);
        let m = 0.5 * (s.a + s.b);
        if m <= s.a.min(s.b) || m >= s.a.max(s.b) {
            // interval can no longer be split in floating point
            return Err(RswError::QuadratureFail { a, b });
        }
        segs.push(kronrod(&f, s.a, m));
        segs.push(kronrod(&f, m, s.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomials_are_exact() {
        let (v, _) = integrate(|x| x.powi(7) - 3.0 * x * x, -1.0, 2.0, QuadOptions::default()).unwrap();
        assert_relative_eq!(v, (2f64.powi(8) - 1.0) / 8.0 - 9.0, epsilon = 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let (v, _) = integrate(|x| (10.0 * x).sin().powi(2), 0.0, 3.0, QuadOptions::default()).unwrap();
        let exact = 1.5 - (60f64).sin() / 40.0;
        assert_relative_eq!(v, exact, epsilon = 1e-11);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let (a, _) = integrate(|x| x.exp(), 0.0, 1.0, QuadOptions::default()).unwrap();
        let (b, _) = integrate(|x| x.exp(), 1.0, 0.0, QuadOptions::default()).unwrap();
        assert_relative_eq!(a, -b, epsilon = 1e-15);
    }

    #[test]
    fn endpoint_singularity_converges() {
        let (v, _) = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, QuadOptions::rel(1e-8)).unwrap();
        assert_relative_eq!(v, 2.0, epsilon = 1e-7);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let opts = QuadOptions {
            max_intervals: 3,
            ..QuadOptions::default()
        };
        assert!(integrate(|x| 1.0 / x, 0.0, 1.0, opts).is_err());
    }
}
