use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsw_core::flow::in_frame;
use rsw_core::ode::AdaptiveOptions;
use rsw_core::quad::{integrate, QuadOptions};
use rsw_core::solutions::{make_family, trajectory_formula, FamilyId, FamilyParams};
use rsw_core::verify::{evolve_material_curve, integrate_trajectory, pv_drift};
use rsw_core::{potential_vorticity, DerivativeMode, Field, FieldExt, FlowParameters, Frame};

fn family(id: FamilyId) -> (Field, FlowParameters) {
    let p = id.default_flow_params();
    (make_family(id, &FamilyParams::defaults(id), &p).unwrap(), p)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn opts() -> AdaptiveOptions {
    AdaptiveOptions::default()
}

#[test]
fn cylinder_paths_match_the_formula_and_close() {
    let (field, p) = family(FamilyId::PulsatingCylinder);
    let fp = FamilyParams::defaults(FamilyId::PulsatingCylinder);
    let times = linspace(0.0, p.period(), 101);
    for (r0, th0) in [(1.0, 0.0), (0.3, 1.0), (1.7, -2.0)] {
        let tr = integrate_trajectory(&field, &p, r0, th0, &times, opts()).unwrap();
        let tf = trajectory_formula(&fp, &p, r0, th0).unwrap();
        let circle = tf.circle.unwrap();
        for pt in &tr.points {
            let (r, th) = tf.position(pt.t).unwrap();
            assert!((pt.r - r).abs() < 1e-7 && (pt.theta - th).abs() < 1e-7, "{pt:?} vs ({r}, {th})");
            assert!(circle.defect(pt.x, pt.y).abs() < 1e-8);
        }
        let last = tr.points.last().unwrap();
        assert!((last.x - r0 * th0.cos()).hypot(last.y - r0 * th0.sin()) < 1e-8);
    }
}

#[test]
fn rest_state_paths_are_fixed() {
    let (field, p) = family(FamilyId::RestState);
    let tr = integrate_trajectory(&field, &p, 0.8, 0.5, &linspace(0.0, 5.0, 11), opts()).unwrap();
    assert!(tr.points.iter().all(|q| q.r == 0.8 && q.theta == 0.5));
}

#[test]
fn drop_paths_match_the_formula_and_close() {
    let (field, p) = family(FamilyId::PulsatingDrop);
    let fp = FamilyParams::defaults(FamilyId::PulsatingDrop);
    let s3 = 3f64.sqrt();
    for (r0, periods) in [(s3 / 3.0, 3.0), (s3 / 6.0, 6.0)] {
        let times = linspace(0.0, periods * p.period(), 301);
        let tr = integrate_trajectory(&field, &p, r0, 0.0, &times, opts()).unwrap();
        let tf = trajectory_formula(&fp, &p, r0, 0.0).unwrap();
        for pt in &tr.points {
            let (r, th) = tf.position(pt.t).unwrap();
            assert!((pt.r - r).abs() < 1e-6 && (pt.theta - th).abs() < 1e-6, "{pt:?} vs ({r}, {th})");
        }
        let last = tr.points.last().unwrap();
        assert!((last.x - r0).hypot(last.y) < 1e-6, "r0 = {r0}: {last:?}");
        // one full turn in the opposite sense
        assert!((last.theta + 2.0 * PI).abs() < 1e-6);
    }
}

#[test]
fn drop_formula_agrees_with_the_branch_form() {
    // θ = (2C/f + 1) atan(ατ) − atan τ + Cχ(t) + θ₀ with τ = tan(ft/2)
    let p = FlowParameters::new(1.0, 1.0).unwrap();
    let alpha = 2.0;
    let fp = FamilyParams::PulsatingDrop { alpha };
    let r0 = 0.4;
    let tf = trajectory_formula(&fp, &p, r0, 0.3).unwrap();
    let c = tf.rotation_rate.unwrap();
    assert!((c - rsw_core::solutions::drop_l(alpha, &p) * r0 * alpha.sqrt()).abs() < 1e-15);
    for t in [0.2f64, 1.0, 2.5, 4.0, 5.9, 8.0, 13.0] {
        let tau = (0.5 * t).tan();
        let chi = rsw_core::transforms::chi(t, p.f());
        let theta = (2.0 * c + 1.0) * (alpha * tau).atan() - tau.atan() + c * chi + 0.3;
        let r = r0 * ((1.0 + alpha * alpha * tau * tau) / (1.0 + tau * tau)).sqrt();
        let (rf, thf) = tf.position(t).unwrap();
        assert!((rf - r).abs() < 1e-12 && (thf - theta).abs() < 1e-12, "t = {t}: {thf} vs {theta}");
    }
}

#[test]
fn constant_image_paths_follow_circles() {
    let (field, p) = family(FamilyId::ConstantSwImage);
    let fp = FamilyParams::defaults(FamilyId::ConstantSwImage);
    for (r0, th0) in [(1.0, 0.3), (0.5, 2.0)] {
        let tf = trajectory_formula(&fp, &p, r0, th0).unwrap();
        let times = linspace(PI, 5.0, 41);
        let tr = integrate_trajectory(&field, &p, r0, th0, &times, opts()).unwrap();
        let circle = tf.circle.unwrap();
        for pt in &tr.points {
            let (x, y) = tf.cartesian(pt.t).unwrap();
            assert!((pt.x - x).hypot(pt.y - y) < 1e-7, "{pt:?}");
            assert!(circle.defect(pt.x, pt.y).abs() < 1e-7);
        }
    }
}

#[test]
fn cylinder_potential_vorticity_is_uniform() {
    let (field, p) = family(FamilyId::PulsatingCylinder);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let q = [rng.gen_range(-10.0..10.0), rng.gen_range(0.05..4.0), rng.gen_range(-PI..PI)];
        let w = potential_vorticity(field.as_ref(), q, &p, DerivativeMode::Analytic).unwrap();
        assert!((w - 1.0).abs() < 1e-10, "{q:?}: {w}");
    }
}

/// Starting radii and time span for the conservation check of each family.
fn pv_setup(id: FamilyId, field: &Field, p: &FlowParameters) -> (Vec<f64>, f64, f64) {
    let w = field.window();
    match id {
        FamilyId::RestState | FamilyId::PulsatingCylinder | FamilyId::StationaryRotSym => {
            (linspace(0.2, 2.0, 20), 0.0, p.period())
        }
        FamilyId::PulsatingDrop => (linspace(0.05, 1.6, 20), 0.0, p.period()),
        FamilyId::ConstantSwImage => (linspace(0.2, 1.5, 20), 0.3, 5.5),
        FamilyId::BarochronousSw => (linspace(0.2, 2.0, 20), -3.0, 3.0),
        FamilyId::StationaryRing => {
            // time to drift from 1.1 r* out to 0.9 r^*
            let polar = in_frame(field.clone(), Frame::Polar);
            let (lo, hi) = (1.1 * w.r_lo, 0.9 * w.r_hi);
            let (t_exit, _) = integrate(
                |r| 1.0 / polar.eval([0.0, r, 0.0]).unwrap()[0],
                lo,
                hi,
                QuadOptions::rel(1e-8),
            )
            .unwrap();
            (linspace(lo, 1.5 * w.r_lo, 20), 0.0, t_exit)
        }
        FamilyId::CollapseContact => (linspace(0.45, 0.85, 20), 0.3, 5.5),
        FamilyId::CollapseContactCubic => (linspace(2.0, 3.0, 20), 2.0, 4.0),
        FamilyId::CollapseScaling => (linspace(0.2, 2.0, 20), 0.0, 0.9 * w.t_hi),
    }
}

#[test]
fn potential_vorticity_is_materially_conserved() {
    for id in FamilyId::ALL {
        let (field, p) = family(id);
        let (radii, t0, t1) = pv_setup(id, &field, &p);
        assert_eq!(radii.len(), 20);
        let times = linspace(t0, t1, 41);
        let mut worst = 0.0f64;
        for (i, &r0) in radii.iter().enumerate() {
            let tr = integrate_trajectory(&field, &p, r0, 0.37 * i as f64, &times, opts())
                .unwrap_or_else(|e| panic!("{id} r0 = {r0}: {e}"));
            worst = worst.max(pv_drift(&field, &p, &tr, DerivativeMode::Analytic).unwrap());
        }
        let per_period = worst * p.period() / (t1 - t0).max(p.period());
        assert!(per_period < 1e-5, "{id}: {worst}");
    }
}

#[test]
fn contact_surfaces_are_material() {
    let (field, p) = family(FamilyId::CollapseContact);
    let times = linspace(0.3, 5.5, 53);
    for r0 in [0.45, 0.6, 0.85] {
        let tr = integrate_trajectory(&field, &p, r0, 0.0, &times, opts()).unwrap();
        let lam = |t: f64, r: f64| (1.0 - (p.f() * t).cos()) / (r * r);
        let l0 = lam(0.3, r0);
        for pt in &tr.points {
            assert!((lam(pt.t, pt.r) - l0).abs() < 1e-6 * l0, "{pt:?}");
            // the piston law r ∝ sin(ft/2)
            let piston = r0 * (0.5 * pt.t).sin() / 0.15f64.sin();
            assert!((pt.r - piston).abs() < 1e-6);
        }
    }
}

#[test]
fn drop_material_curve_winds_up() {
    let (field, p) = family(FamilyId::PulsatingDrop);
    let quarter: Vec<f64> = (0..=4).map(|n| PI * n as f64 / 2.0).collect();
    let mc = evolve_material_curve(&field, &p, [0.4, 0.5], 0.3, 200, &quarter, opts()).unwrap();
    assert!((mc.lengths[0] - 2.0 * PI * 0.3).abs() < 1e-3);
    // the curve breathes with the drop within a period
    assert!(mc.lengths[2] > mc.lengths[0] && mc.lengths[4] < mc.lengths[2]);
    // but at equal phase it keeps stretching into a spiral
    let periods: Vec<f64> = (0..=4).map(|k| p.period() * k as f64).collect();
    let mc = evolve_material_curve(&field, &p, [0.4, 0.5], 0.3, 400, &periods, opts()).unwrap();
    for w in mc.lengths.windows(2) {
        assert!(w[1] > w[0], "{:?}", mc.lengths);
    }
}

#[test]
fn cylinder_material_curve_returns() {
    let (field, p) = family(FamilyId::PulsatingCylinder);
    let times = linspace(0.0, p.period(), 9);
    let mc = evolve_material_curve(&field, &p, [0.0, 0.0], 1.0, 64, &times, opts()).unwrap();
    assert!(*mc.max_displacement.last().unwrap() < 1e-6);
    assert!(mc.max_displacement[4] > 0.5);
}

#[test]
fn single_marker_is_one_trajectory() {
    let (field, p) = family(FamilyId::PulsatingDrop);
    let times = linspace(0.0, 3.0, 7);
    let mc = evolve_material_curve(&field, &p, [0.4, 0.5], 0.0, 50, &times, opts()).unwrap();
    assert_eq!(mc.particles.len(), 1);
    let r0 = 0.4f64.hypot(0.5);
    let tr = integrate_trajectory(&field, &p, r0, 0.5f64.atan2(0.4), &times, opts()).unwrap();
    assert_eq!(mc.particles[0], tr);
}

#[test]
fn leaving_the_domain_is_reported() {
    let (field, p) = family(FamilyId::StationaryRing);
    let w = field.window();
    let r = integrate_trajectory(&field, &p, 1.2 * w.r_lo, 0.0, &[0.0, 1e6], opts());
    assert!(r.is_err());
    let (cyl, p) = family(FamilyId::PulsatingCylinder);
    assert!(integrate_trajectory(&cyl, &p, 0.0, 0.0, &[0.0, 1.0], opts()).is_err());
}
