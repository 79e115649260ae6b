use std::f64::consts::PI;

use proptest::prelude::*;
use rsw_core::liealg::{jacobi_defect, RswBasis, SwBasis};
use rsw_core::reduction::{cubic_roots, ring_depth, RingBranch, RingConstants};
use rsw_core::solutions::{make_family, FamilyId, FamilyParams};
use rsw_core::transforms::{point_forward, point_inverse, state_forward, state_inverse, transport_solution};
use rsw_core::verify::residual_at;
use rsw_core::{DerivativeMode, FieldExt, FlowParameters};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn point_map_round_trips(f in 0.2f64..3.0, frac in 0.02f64..0.98, x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let t = frac * 2.0 * PI / f;
        let [tp, xp, yp] = point_forward(f, t, x, y);
        let [t2, x2, y2] = point_inverse(f, tp, xp, yp);
        let scale = 1.0 + x.abs() + y.abs();
        prop_assert!((t2 - t).abs() < 1e-9 * (1.0 + t));
        prop_assert!((x2 - x).abs() < 1e-9 * scale && (y2 - y).abs() < 1e-9 * scale);
    }

    #[test]
    fn state_map_round_trips(
        f in 0.2f64..3.0, frac in 0.05f64..0.95,
        x in -3.0f64..3.0, y in -3.0f64..3.0,
        u in -2.0f64..2.0, v in -2.0f64..2.0, h in 0.1f64..5.0,
    ) {
        let t = frac * 2.0 * PI / f;
        let [up, vp, hp] = state_forward(f, t, x, y, u, v, h);
        let [u2, v2, h2] = state_inverse(f, t, x, y, up, vp, hp);
        prop_assert!((u2 - u).abs() < 1e-9 && (v2 - v).abs() < 1e-9 && (h2 - h).abs() < 1e-9 * h);
    }

    #[test]
    fn jacobi_identity_holds(
        i in 1usize..=9, j in 1usize..=9, k in 1usize..=9,
        f in 0.2f64..3.0, p in prop::array::uniform6(-2.0f64..2.0),
    ) {
        let mut p = p;
        p[5] = p[5].abs() + 0.1;
        for d in jacobi_defect(&RswBasis { f }, i, j, k, p) {
            prop_assert!(d.abs() < 1e-8, "{:?}", d);
        }
        for d in jacobi_defect(&SwBasis, i, j, k, p) {
            prop_assert!(d.abs() < 1e-8, "{:?}", d);
        }
    }

    #[test]
    fn cubic_roots_are_roots(phi1 in -5.0f64..5.0, phi2 in -5.0f64..5.0) {
        for h in cubic_roots(phi1, phi2) {
            let val = h * h * h + phi1 * h * h + phi2;
            prop_assert!(val.abs() < 1e-9 * (1.0 + phi1.abs() + phi2.abs()) * (1.0 + h.abs()).powi(3));
        }
    }

    #[test]
    fn ring_branches_bracket_critical_depth(c1 in 0.5f64..3.0, c2 in -2.0f64..2.0, c3 in 0.1f64..2.0, frac in 0.05f64..0.95) {
        let p = FlowParameters::new(0.1, 1.0).unwrap();
        let c = RingConstants { c1, c2, c3 };
        if let Ok(b) = rsw_core::reduction::ring_bounds(&c, &p) {
            let r = b.r_inner + frac * (b.r_outer - b.r_inner);
            let (lo, _) = ring_depth(&c, r, RingBranch::Lower, &p).unwrap();
            let (hi, _) = ring_depth(&c, r, RingBranch::Upper, &p).unwrap();
            prop_assert!(0.0 < lo && lo <= hi);
        }
    }

    #[test]
    fn cylinder_is_periodic(alpha in 0.3f64..3.0, f in 0.3f64..2.0, t in 0.0f64..6.0, r in 0.1f64..2.0, th in 0.0f64..6.0) {
        let p = FlowParameters::new(f, 1.0).unwrap();
        let fp = FamilyParams::PulsatingCylinder { alpha, h0: 1.0 };
        let field = make_family(FamilyId::PulsatingCylinder, &fp, &p).unwrap();
        let a = field.eval([t, r, th]).unwrap();
        let b = field.eval([t + p.period(), r, th]).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn transported_rest_solves_rsw(alpha in 0.3f64..3.0, t in 0.0f64..6.0, r in 0.1f64..2.0, th in 0.0f64..6.0) {
        let p = FlowParameters::new(1.0, 1.0).unwrap();
        let rest = make_family(FamilyId::RestState, &FamilyParams::RestState { h0: 1.0 }, &p).unwrap();
        let moved = transport_solution(rest, alpha, &p).unwrap();
        let res = residual_at(moved.as_ref(), [t, r, th], &p, DerivativeMode::Analytic).unwrap();
        prop_assert!(res.iter().all(|e| e.abs() < 1e-10), "{:?}", res);
    }

    #[test]
    fn drop_depth_is_nonnegative(alpha in 0.3f64..3.0, t in 0.0f64..6.0, frac in 0.0f64..0.999, th in 0.0f64..6.0) {
        let p = FlowParameters::new(1.0, 1.0).unwrap();
        let field = make_family(FamilyId::PulsatingDrop, &FamilyParams::PulsatingDrop { alpha }, &p).unwrap();
        let r = frac * field.radial_limit(t);
        let [_, _, h] = field.eval([t, r, th]).unwrap();
        prop_assert!(h >= 0.0);
    }
}
