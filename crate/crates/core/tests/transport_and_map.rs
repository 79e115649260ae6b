use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsw_core::flow::in_frame;
use rsw_core::jet::J3;
use rsw_core::solutions::{default_grid, drop_l, make_family, FamilyId, FamilyParams, Profile};
use rsw_core::transforms::{map_field_rsw_to_sw, map_field_sw_to_rsw, transport_solution, Direction, EquivalenceMap};
use rsw_core::verify::{residual, residual_points, Axis, GridSpec};
use rsw_core::{DerivativeMode, FieldExt, FlowField, FlowParameters, Frame, Result, System, Window};

const ANALYTIC: DerivativeMode = DerivativeMode::Analytic;

fn unit() -> FlowParameters {
    FlowParameters::new(1.0, 1.0).unwrap()
}

/// Source grid points pushed through the forward map.
fn image_points(id: FamilyId, src: &rsw_core::Field, p: &FlowParameters) -> Vec<[f64; 3]> {
    let cart = in_frame(src.clone(), Frame::Cartesian);
    let map = EquivalenceMap::new(*p, Direction::RswToSw);
    let native = default_grid(id, src.as_ref()).points(src.as_ref()).unwrap();
    native
        .into_iter()
        .map(|q| match src.frame() {
            Frame::Cartesian => q,
            Frame::Polar => [q[0], q[1] * q[2].cos(), q[1] * q[2].sin()],
        })
        .filter(|q| q[0] > 0.05 && q[0] < p.period() - 0.05 && cart.check(*q).is_ok())
        .map(|q| map.map_point(q).unwrap())
        .collect()
}

#[test]
fn images_of_rotating_families_solve_the_classical_system() {
    for id in FamilyId::ALL {
        let p = id.default_flow_params();
        let src = make_family(id, &FamilyParams::defaults(id), &p).unwrap();
        if src.system() != System::Rotating {
            continue;
        }
        let image = map_field_rsw_to_sw(src.clone(), &p).unwrap();
        assert_eq!(image.system(), System::NonRotating);
        let pts = image_points(id, &src, &p);
        assert!(pts.len() > 100, "{id}: {}", pts.len());
        let rep = residual_points(image.as_ref(), &pts, &p, ANALYTIC).unwrap();
        assert!(rep.max_overall() < 1e-6, "{id}: {rep:?}");
    }
}

#[test]
fn preimage_of_the_barochronous_pair_is_the_rest_state() {
    let p = unit();
    let src = make_family(FamilyId::BarochronousSw, &FamilyParams::defaults(FamilyId::BarochronousSw), &p).unwrap();
    let back = map_field_sw_to_rsw(src, &p).unwrap();
    for q in [[0.5, 0.3, -0.2], [2.0, 1.0, 1.0], [5.5, -1.5, 0.1]] {
        let [u, v, h] = back.eval(q).unwrap();
        assert!(u.abs() < 1e-12 && v.abs() < 1e-12 && (h - 1.0).abs() < 1e-12);
    }
}

#[test]
fn point_map_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for f in [0.37, 1.0, 2.0] {
        let p = FlowParameters::new(f, 1.0).unwrap();
        let fwd = EquivalenceMap::new(p, Direction::RswToSw);
        let inv = EquivalenceMap::new(p, Direction::SwToRsw);
        for _ in 0..2000 {
            let t = rng.gen_range(0.02..0.98) * p.period();
            let q = [t, rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            let back = inv.map_point(fwd.map_point(q).unwrap()).unwrap();
            let err = (0..3).map(|i| (back[i] - q[i]).abs()).fold(0.0, f64::max);
            assert!(err < 1e-10, "f = {f}, {q:?}: {err}");
        }
    }
}

/// The printed sign of the `u₀ cot` term does not give a solution.
#[test]
fn printed_constant_image_sign_fails() {
    struct Printed;
    impl FlowField for Printed {
        fn frame(&self) -> Frame {
            Frame::Cartesian
        }
        fn window(&self) -> Window {
            Window::time(0.0, 2.0 * PI, &unit())
        }
        fn name(&self) -> String {
            "printed".into()
        }
        fn eval_jet_unchecked(&self, q: &[J3; 3]) -> Result<[J3; 3]> {
            use rsw_core::jet::Scalar;
            let [t, x, y] = *q;
            let half = t * 0.5;
            let cot = half.cos() / half.sin();
            let (u0, v0) = (1.0, 0.5);
            let u = cot * u0 - v0 + (x * cot + y) * 0.5;
            let v = -cot * v0 + u0 - (x - y * cot) * 0.5;
            let h = (half.sin() * half.sin()).recip();
            Ok([u, v, h])
        }
    }
    let grid = GridSpec::new(Axis::new(0.5, 5.0, 10), Axis::new(-2.0, 2.0, 10), Axis::new(-2.0, 2.0, 10));
    let rep = residual(Arc::new(Printed), &grid, &unit(), ANALYTIC).unwrap();
    assert!(rep.max_overall() > 0.1, "{rep:?}");
}

#[test]
fn transported_rest_state_is_the_cylinder() {
    let p = unit();
    let rest = make_family(FamilyId::RestState, &FamilyParams::RestState { h0: 1.0 }, &p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for alpha in [0.5, 2.0, 3.0] {
        let moved = transport_solution(rest.clone(), alpha, &p).unwrap();
        let cyl = make_family(FamilyId::PulsatingCylinder, &FamilyParams::PulsatingCylinder { alpha, h0: 1.0 }, &p).unwrap();
        let mut worst = 0.0f64;
        for _ in 0..500 {
            let q = [rng.gen_range(-7.0..7.0), rng.gen_range(0.05..3.0), rng.gen_range(-PI..PI)];
            let (a, b) = (moved.eval(q).unwrap(), cyl.eval(q).unwrap());
            for i in 0..3 {
                worst = worst.max((a[i] - b[i]).abs());
            }
        }
        assert!(worst < 1e-12, "alpha = {alpha}: {worst}");
    }
}

#[test]
fn transported_stationary_profile_is_the_drop() {
    let p = unit();
    for alpha in [0.5, 2.0, 3.0] {
        let l = drop_l(alpha, &p);
        let edge = -p.f() / l;
        let stationary = FamilyParams::StationaryRotSym {
            vbar: Profile::power(l, 2.0),
            h0: p.f().powi(4) / (12.0 * p.g() * l * l),
            r_max: edge * (1.0 - 1e-6),
        };
        let src = make_family(FamilyId::StationaryRotSym, &stationary, &p).unwrap();
        let moved = transport_solution(src, alpha, &p).unwrap();
        let grid = GridSpec::new(Axis::new(0.0, 6.0, 10), Axis::new(0.02, 0.95, 10), Axis::new(0.1, 6.0, 10)).radial_fraction();
        let rep = residual(moved.clone(), &grid, &p, ANALYTIC).unwrap();
        assert!(rep.max_overall() < 1e-6, "alpha = {alpha}: {rep:?}");

        let drop = make_family(FamilyId::PulsatingDrop, &FamilyParams::PulsatingDrop { alpha }, &p).unwrap();
        for q in grid.points(moved.as_ref()).unwrap() {
            let (a, b) = (moved.eval(q).unwrap(), drop.eval(q).unwrap());
            for i in 0..3 {
                assert!((a[i] - b[i]).abs() < 1e-8, "alpha = {alpha} at {q:?}");
            }
        }
    }
}
