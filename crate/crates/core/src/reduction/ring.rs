use serde::Serialize;

use super::cubic::cubic_roots;
use crate::error::{Result, RswError};
use crate::flow::FlowParameters;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RingConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl RingConstants {
    pub fn validate(&self, params: &FlowParameters) -> Result<()> {
        if ![self.c1, self.c2, self.c3].iter().all(|c| c.is_finite()) {
            return Err(RswError::InvalidParams("ring constants must be finite".into()));
        }
        if self.c3 == 0.0 {
            return Err(RswError::InvalidParams("C3 must be nonzero".into()));
        }
        if self.c1 <= params.f() * self.c2.abs() / 2.0 {
            return Err(RswError::NoRingExists(format!(
                "C1 = {} does not exceed f|C2|/2 = {}",
                self.c1,
                params.f() * self.c2.abs() / 2.0
            )));
        }
        Ok(())
    }

    /// Depth at which the Froude number equals one.
    pub fn sonic_depth(&self, params: &FlowParameters) -> f64 {
        (2.0 * self.c1 - self.c2 * params.f()) / (3.0 * params.g())
    }
}

/// `φ₁(r)`, `φ₂(r)` of the stationary ring cubic and their radial slopes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CubicCoeffs {
    pub phi1: f64,
    pub phi2: f64,
    pub dphi1: f64,
    pub dphi2: f64,
}

impl CubicCoeffs {
    pub fn at(c: &RingConstants, r: f64, params: &FlowParameters) -> Self {
        let (f, g) = (params.f(), params.g());
        let r2 = r * r;
        Self {
            phi1: (f * f * r2 / 8.0 + c.c2 * c.c2 / (2.0 * r2) - c.c1) / g,
            phi2: c.c3 * c.c3 / (2.0 * g * r2),
            dphi1: (f * f * r / 4.0 - c.c2 * c.c2 / (r2 * r)) / g,
            dphi2: -c.c3 * c.c3 / (g * r2 * r),
        }
    }

    /// `G = F(−2φ₁/3)`: negative exactly where two positive depths exist.
    pub fn g(&self) -> f64 {
        4.0 / 27.0 * self.phi1.powi(3) + self.phi2
    }

    pub fn critical_depth(&self) -> f64 {
        -2.0 / 3.0 * self.phi1
    }

    pub fn f_h(&self, h: f64) -> f64 {
        (3.0 * h + 2.0 * self.phi1) * h
    }

    pub fn f_r(&self, h: f64) -> f64 {
        self.dphi1 * h * h + self.dphi2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RingBranch {
    /// Smaller positive depth (supercritical).
    Lower,
    /// Larger positive depth.
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RingBounds {
    pub r_inner: f64,
    pub r_outer: f64,
    pub hc_inner: f64,
    pub hc_outer: f64,
}

fn bisect(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    let s_lo = g(lo).signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid).signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // return whichever end has the smaller residual
    if g(lo).abs() <= g(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Radii bounding the ring where the cubic has two positive roots.
pub fn ring_bounds(c: &RingConstants, params: &FlowParameters) -> Result<RingBounds> {
    c.validate(params)?;
    let f = params.f();
    let g_of = |r: f64| CubicCoeffs::at(c, r, params).g();
    let well = (2.0 * c.c2.abs() / f).sqrt();
    let outer_zero = (8.0 * c.c1).sqrt() / f;
    let r_start = 0.01 * well.max(1e-3 * outer_zero);
    let r_stop = 100.0 * (8.0 * params.g().max(1.0) * c.c1).sqrt() / f;

    let mut prev = (r_start, g_of(r_start));
    let mut inner = None;
    let mut outer = None;
    let mut r = r_start;
    while r < r_stop {
        r *= 1.1;
        let cur = (r, g_of(r));
        if prev.1 >= 0.0 && cur.1 < 0.0 && inner.is_none() {
            inner = Some((prev.0, cur.0));
        }
        if prev.1 < 0.0 && cur.1 >= 0.0 {
            outer = Some((prev.0, cur.0));
        }
        prev = cur;
    }
    let (Some((a, b)), Some((c_, d))) = (inner, outer) else {
        return Err(RswError::NoRingExists("G(r) never changes sign".into()));
    };
    let r_inner = bisect(a, b, g_of);
    let r_outer = bisect(c_, d, g_of);
    Ok(RingBounds {
        r_inner,
        r_outer,
        hc_inner: CubicCoeffs::at(c, r_inner, params).critical_depth(),
        hc_outer: CubicCoeffs::at(c, r_outer, params).critical_depth(),
    })
}

/// Depth on the chosen branch at radius `r`, with `dh/dr`.
pub fn ring_depth(c: &RingConstants, r: f64, branch: RingBranch, params: &FlowParameters) -> Result<(f64, f64)> {
    let cc = CubicCoeffs::at(c, r, params);
    let g = cc.g();
    let hc = cc.critical_depth();
    let h = if g.abs() <= 1e-13 * cc.phi2.max(1e-300) || (g > 0.0 && g < 1e-10 * cc.phi2 && hc > 0.0) {
        hc
    } else {
        let pos: Vec<f64> = cubic_roots(cc.phi1, cc.phi2).into_iter().filter(|&h| h > 0.0).collect();
        match (branch, pos.len()) {
            (RingBranch::Lower, 2) => pos[0],
            (RingBranch::Upper, 2) => pos[1],
            (_, 1) => pos[0],
            _ => {
                return Err(RswError::WindowViolation {
                    point: [0.0, r, 0.0],
                    reason: "radius outside the ring".into(),
                })
            }
        }
    };
    let fh = cc.f_h(h);
    let dh = if fh == 0.0 { f64::INFINITY } else { -cc.f_r(h) / fh };
    Ok((h, dh))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_case() -> (RingConstants, FlowParameters) {
        (
            RingConstants { c1: 1.0, c2: 1.0, c3: 1.0 },
            FlowParameters::new(0.1, 1.0).unwrap(),
        )
    }

    #[test]
    fn sign_scan_brackets() {
        let (c, p) = figure_case();
        let g = |r: f64| CubicCoeffs::at(&c, r, &p).g();
        assert!(g(2.0) > 0.0 && g(2.2) < 0.0);
        assert!(g(25.0) < 0.0 && g(27.0) > 0.0);
    }

    #[test]
    fn bounds_for_figure_parameters() {
        let (c, p) = figure_case();
        let b = ring_bounds(&c, &p).unwrap();
        // brute-force scan on a fine uniform grid as an independent oracle
        let g = |r: f64| CubicCoeffs::at(&c, r, &p).g();
        let mut neg = Vec::new();
        let mut r = 0.5;
        while r < 40.0 {
            if g(r) < 0.0 {
                neg.push(r);
            }
            r += 1e-3;
        }
        assert!((neg[0] - b.r_inner).abs() < 2e-3);
        assert!((neg[neg.len() - 1] - b.r_outer).abs() < 2e-3);
        assert!((b.r_inner - 2.19).abs() < 0.01, "{}", b.r_inner);
        // the scan gives 25.72, i.e. 26 to two figures
        assert!((b.r_outer - 25.72).abs() < 0.01, "{}", b.r_outer);
        assert!(g(b.r_inner).abs() < 1e-10 && g(b.r_outer).abs() < 1e-10);
        let hs = c.sonic_depth(&p);
        assert!(b.hc_inner <= hs && b.hc_outer <= hs);
    }

    #[test]
    fn slope_blows_up_at_endpoints() {
        let (c, p) = figure_case();
        let b = ring_bounds(&c, &p).unwrap();
        // h - h_c grows like the square root of the distance to an endpoint,
        // so |h'| sqrt(d) settles to a constant while |h'| itself diverges
        for (r_end, side) in [(b.r_inner, 1.0), (b.r_outer, -1.0)] {
            for br in [RingBranch::Lower, RingBranch::Upper] {
                let scaled: Vec<f64> = [1e-5, 1e-7, 1e-9]
                    .iter()
                    .map(|&d| {
                        let (_, dh) = ring_depth(&c, r_end + side * d * r_end, br, &p).unwrap();
                        dh.abs() * (d * r_end).sqrt()
                    })
                    .collect();
                assert!((scaled[2] / scaled[0] - 1.0).abs() < 0.05, "{scaled:?}");
                let slope = |d: f64| ring_depth(&c, r_end + side * d * r_end, br, &p).unwrap().1.abs();
                assert!(slope(1e-9) > 50.0 * slope(1e-5));
            }
        }
    }

    #[test]
    fn threshold_has_no_ring() {
        let p = FlowParameters::new(0.1, 1.0).unwrap();
        let c = RingConstants { c1: 0.05, c2: 1.0, c3: 1.0 };
        assert!(matches!(ring_bounds(&c, &p), Err(RswError::NoRingExists(_))));
    }

    #[test]
    fn branches_are_ordered() {
        let (c, p) = figure_case();
        let b = ring_bounds(&c, &p).unwrap();
        for i in 1..50 {
            let r = b.r_inner + (b.r_outer - b.r_inner) * i as f64 / 50.0;
            let (lo, _) = ring_depth(&c, r, RingBranch::Lower, &p).unwrap();
            let (hi, _) = ring_depth(&c, r, RingBranch::Upper, &p).unwrap();
            let hc = CubicCoeffs::at(&c, r, &p).critical_depth();
            assert!(0.0 < lo && lo < hc && hc < hi);
        }
    }
}
