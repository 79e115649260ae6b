use std::f64::consts::PI;

/// Real roots of `x³ + a x² + b x + c`, ascending, each polished by one
/// Newton step.
pub fn monic_cubic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = q * q / 4.0 + p * p * p / 27.0;
    let mut roots = depressed_roots(p, q, disc);
    for y in roots.iter_mut() {
        *y -= shift;
    }
    finish(roots, |x| ((x + a) * x + b) * x + c, |x| (3.0 * x + 2.0 * a) * x + b)
}

/// Roots of `y³ + p y + q` given `disc = q²/4 + p³/27`.
fn depressed_roots(p: f64, q: f64, disc: f64) -> Vec<f64> {
    let scale = p.abs().powf(1.5).max(q.abs()).max(f64::MIN_POSITIVE);
    if disc.abs() <= 1e-14 * scale * scale {
        if p == 0.0 {
            return vec![0.0];
        }
        // double root at -3q/(2p), simple root at 3q/p
        let d = -1.5 * q / p;
        return vec![3.0 * q / p, d, d];
    }
    if disc < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3).map(|k| m * (phi - 2.0 * PI * k as f64 / 3.0).cos()).collect()
    } else {
        let sd = disc.sqrt();
        let u = (-0.5 * q + sd).cbrt();
        let v = (-0.5 * q - sd).cbrt();
        vec![u + v]
    }
}

fn finish(mut roots: Vec<f64>, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> Vec<f64> {
    for x in roots.iter_mut() {
        let d = df(*x);
        if d != 0.0 {
            let step = f(*x) / d;
            let cand = *x - step;
            if f(cand).abs() <= f(*x).abs() {
                *x = cand;
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| *a == *b);
    roots
}

/// Real roots of `h³ + φ₁h² + φ₂`.
pub fn cubic_roots(phi1: f64, phi2: f64) -> Vec<f64> {
    if phi2 == 0.0 {
        let mut r = vec![0.0, -phi1];
        r.sort_by(f64::total_cmp);
        r.dedup();
        return r;
    }
    let shift = phi1 / 3.0;
    let p = -phi1 * phi1 / 3.0;
    let q = 2.0 * phi1.powi(3) / 27.0 + phi2;
    // q²/4 + p³/27 = φ₂ G / 4, computed without cancellation
    let g = 4.0 / 27.0 * phi1.powi(3) + phi2;
    let disc = phi2 * g / 4.0;
    let mut roots = depressed_roots(p, q, disc);
    for y in roots.iter_mut() {
        *y -= shift;
    }
    finish(roots, |h| (h + phi1) * h * h + phi2, |h| (3.0 * h + 2.0 * phi1) * h)
}

/// Sign of `φ₂·G`; negative means three distinct real roots.
pub fn cubic_discriminant_sign(phi1: f64, phi2: f64) -> f64 {
    (phi2 * (4.0 / 27.0 * phi1.powi(3) + phi2)).signum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let r = cubic_roots(0.0, -8.0);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 2.0).abs() < 1e-14);

        let (p1, p2) = (-0.49875f64, 0.5);
        let g = 4.0 / 27.0 * p1.powi(3) + p2;
        assert!((g - 0.4816).abs() < 1e-4);
        let r = cubic_roots(p1, p2);
        assert!(r.iter().all(|&h| h < 0.0));
    }

    #[test]
    fn three_roots() {
        // (h - 1)(h - 2)(h + 1) = h³ - 2h² - h + 2 has a linear term, so use
        // (h-1)(h-2)(h+2/3): h³ - (7/3)h² + 0·h + 4/3
        let r = cubic_roots(-7.0 / 3.0, 4.0 / 3.0);
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([-2.0 / 3.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn general_monic() {
        let r = monic_cubic_roots(-6.0, 11.0, -6.0);
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let r = monic_cubic_roots(0.0, 1.0, 0.0);
        assert_eq!(r, vec![0.0]);
    }

    proptest! {
        #[test]
        fn roots_satisfy_cubic(phi1 in -10.0f64..10.0, phi2 in -10.0f64..10.0) {
            let roots = cubic_roots(phi1, phi2);
            let tol = 1e-9 * phi1.abs().max(1.0).powi(3);
            for &h in &roots {
                let f = (h + phi1) * h * h + phi2;
                prop_assert!(f.abs() < tol, "F({h}) = {f}");
            }
            let s = cubic_discriminant_sign(phi1, phi2);
            let g = 4.0 / 27.0 * phi1.powi(3) + phi2;
            if (phi2 * g).abs() > 1e-6 {
                prop_assert_eq!(roots.len(), if s < 0.0 { 3 } else { 1 });
            }
        }
    }
}
