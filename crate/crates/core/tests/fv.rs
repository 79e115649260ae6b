use std::f64::consts::PI;

use rsw_core::solutions::{make_family, FamilyId, FamilyParams};
use rsw_core::verify::{corrupt_depth, fv_convergence, fv_oracle, residual, FvConfig};
use rsw_core::{DerivativeMode, FlowParameters};

#[test]
fn cylinder_converges_at_first_order() {
    let p = FlowParameters::new(1.0, 1.0).unwrap();
    let fp = FamilyParams::PulsatingCylinder { alpha: 2.0, h0: 1.0 };
    let field = make_family(FamilyId::PulsatingCylinder, &fp, &p).unwrap();
    let cfg = FvConfig::square(3.0, 100, 0.0, 0.5 * PI);
    let conv = fv_convergence(&field, &p, &cfg).unwrap();
    println!("cylinder: {conv:?}");
    assert!(conv.rate >= 0.8, "{conv:?}");
    assert!(conv.fine.l1_total < conv.coarse.l1_total);
}

#[test]
fn rest_state_is_preserved() {
    let p = FlowParameters::new(1.0, 1.0).unwrap();
    let field = make_family(FamilyId::RestState, &FamilyParams::defaults(FamilyId::RestState), &p).unwrap();
    let res = fv_oracle(&field, &p, &FvConfig::square(1.0, 20, 0.0, 1.0)).unwrap();
    assert!(res.l1_total < 1e-12, "{res:?}");
}

#[test]
fn drop_error_shrinks_inside_the_mask() {
    let p = FlowParameters::new(1.0, 1.0).unwrap();
    let fp = FamilyParams::PulsatingDrop { alpha: 2.0 };
    let field = make_family(FamilyId::PulsatingDrop, &fp, &p).unwrap();
    let mut cfg = FvConfig::square(2.5, 40, 0.1, 0.3);
    cfg.mask = Some(0.7);
    let conv = fv_convergence(&field, &p, &cfg).unwrap();
    println!("drop: {conv:?}");
    assert!(conv.fine.l1_total < conv.coarse.l1_total, "{conv:?}");
}

#[test]
fn bad_cfl_is_rejected() {
    let p = FlowParameters::new(1.0, 1.0).unwrap();
    let field = make_family(FamilyId::RestState, &FamilyParams::defaults(FamilyId::RestState), &p).unwrap();
    let mut cfg = FvConfig::square(1.0, 10, 0.0, 1.0);
    cfg.cfl = 1.5;
    assert!(fv_oracle(&field, &p, &cfg).is_err());
}

#[test]
fn corrupted_depth_is_detected() {
    for id in [FamilyId::PulsatingDrop, FamilyId::StationaryRotSym] {
        let p = id.default_flow_params();
        let field = make_family(id, &FamilyParams::defaults(id), &p).unwrap();
        let grid = rsw_core::solutions::default_grid(id, field.as_ref());
        let clean = residual(field.clone(), &grid, &p, DerivativeMode::Analytic).unwrap();
        let bad = residual(corrupt_depth(field, 1.01), &grid, &p, DerivativeMode::Analytic).unwrap();
        assert!(clean.max_overall() < 1e-6);
        assert!(bad.max_overall() > 1e-3, "{id}: {}", bad.max_overall());
    }
}
