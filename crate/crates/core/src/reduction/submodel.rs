use serde::Serialize;

/// Residuals of the contact-characteristic submodel
/// `(λ(φ² + 2gη))' + ψ² = 0`, `λφψ' = 0`, `(λφη)' = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContactResidual {
    /// Max absolute residual of each equation.
    pub max: [f64; 3],
    /// `λ` where the largest residual occurred.
    pub worst_lambda: f64,
}

impl ContactResidual {
    pub fn max_overall(&self) -> f64 {
        self.max.iter().copied().fold(0.0, f64::max)
    }
}

pub fn submodel_residual_contact(
    phi: &dyn Fn(f64) -> f64,
    psi: &dyn Fn(f64) -> f64,
    eta: &dyn Fn(f64) -> f64,
    g: f64,
    lambdas: &[f64],
) -> ContactResidual {
    let mut out = ContactResidual {
        max: [0.0; 3],
        worst_lambda: f64::NAN,
    };
    let mut worst = -1.0;
    for &l in lambdas {
        let d = 1e-2 * l.abs().max(1.0);
        // fourth-order central stencil
        let diff = |q: &dyn Fn(f64) -> f64| (q(l - 2.0 * d) - 8.0 * q(l - d) + 8.0 * q(l + d) - q(l + 2.0 * d)) / (12.0 * d);
        let e1 = diff(&|x| x * (phi(x).powi(2) + 2.0 * g * eta(x))) + psi(l).powi(2);
        let e2 = l * phi(l) * diff(psi);
        let e3 = diff(&|x| x * phi(x) * eta(x));
        for (m, e) in out.max.iter_mut().zip([e1, e2, e3]) {
            *m = m.max(e.abs());
            if e.abs() > worst {
                worst = e.abs();
                out.worst_lambda = l;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadOptions};

    #[test]
    fn degenerate_member() {
        let lams: Vec<f64> = (1..50).map(|i| 0.1 * i as f64).collect();
        let r = submodel_residual_contact(&|_| 0.0, &|_| 0.0, &|l| 3.0 / l, 1.0, &lams);
        assert!(r.max_overall() < 1e-12);
    }

    #[test]
    fn constant_profile_closed_form() {
        let (g, c, l0, e0) = (1.0, 0.7, 1.0, 2.0);
        let eta = move |l: f64| (l0 * e0 - c * c * (l - l0) / (2.0 * g)) / l;
        let lams: Vec<f64> = (1..50).map(|i| 0.1 * i as f64).collect();
        let r = submodel_residual_contact(&|_| 0.0, &|_| c, &eta, g, &lams);
        assert!(r.max_overall() < 1e-10, "{r:?}");
    }

    #[test]
    fn sine_profile_by_quadrature() {
        let (g, l0, e0) = (1.0, 1.0, 2.0);
        let eta = move |l: f64| {
            let (i, _) = integrate(|x| x.sin().powi(2), l0, l, QuadOptions::rel(1e-13)).unwrap();
            (l0 * e0 - i / (2.0 * g)) / l
        };
        let lams: Vec<f64> = (1..40).map(|i| 0.1 * i as f64).collect();
        let r = submodel_residual_contact(&|_| 0.0, &|l| l.sin(), &eta, g, &lams);
        assert!(r.max_overall() < 1e-6, "{r:?}");
    }

    #[test]
    fn wrong_profile_is_detected() {
        let lams: Vec<f64> = (1..20).map(|i| 0.1 * i as f64).collect();
        let r = submodel_residual_contact(&|_| 0.0, &|_| 1.0, &|l| 2.0 / l, 1.0, &lams);
        assert!(r.max[0] > 0.5);
    }
}
