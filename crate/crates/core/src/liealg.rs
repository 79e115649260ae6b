//! Point-symmetry generators of the rotating and classical shallow water
//! systems, their commutators and structure constants.
//!
//! Generator coefficients are written once against [`Scalar`]; partial
//! derivatives needed by the bracket come from dual numbers, so brackets are
//! exact up to rounding. The fit onto the basis is the only numerical step.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, RswError};
use crate::flow::FlowParameters;
use crate::jet::{Jet, Scalar};
use crate::transforms;

pub const DIM: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GeneratorFamily {
    /// `X_1..X_9`: the rotating system, original basis.
    RswX,
    /// `Y_1..Y_9`: the rotating system, canonical basis.
    RswY,
    /// `Z_1..Z_9`: the non-rotating system.
    SwZ,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GeneratorId {
    pub family: GeneratorFamily,
    /// One-based.
    pub index: usize,
}

impl GeneratorId {
    pub fn new(family: GeneratorFamily, index: usize) -> Result<Self> {
        if !(1..=DIM).contains(&index) {
            return Err(RswError::InvalidParams(format!("generator index {index} not in 1..=9")));
        }
        Ok(Self { family, index })
    }
}

/// A point `(t, x, y, u, v, h)` of the base and fibre.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JetPoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub v: f64,
    pub h: f64,
}

impl JetPoint {
    pub fn to_array(self) -> [f64; 6] {
        [self.t, self.x, self.y, self.u, self.v, self.h]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self {
            t: a[0],
            x: a[1],
            y: a[2],
            u: a[3],
            v: a[4],
            h: a[5],
        }
    }
}

/// Coefficients `(c_t, c_x, c_y, c_u, c_v, c_h)` of a vector field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TangentVector(pub [f64; 6]);

impl TangentVector {
    pub fn max_abs_diff(&self, other: &TangentVector) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: f64) -> TangentVector {
        TangentVector(self.0.map(|a| a * c))
    }
}

/// A basis of nine vector fields on `(t, x, y, u, v, h)`.
pub trait GeneratorBasis: Sync {
    /// Coefficients of generator `k` (one-based) at `p`.
    fn coeffs<S: Scalar>(&self, k: usize, p: &[S; 6]) -> [S; 6];
}

/// `X_1..X_9` of the rotating system.
#[derive(Clone, Copy, Debug)]
pub struct RswBasis {
    pub f: f64,
}

impl GeneratorBasis for RswBasis {
    fn coeffs<S: Scalar>(&self, k: usize, p: &[S; 6]) -> [S; 6] {
        let f = self.f;
        let [t, x, y, u, v, h] = *p;
        let z = S::cst(0.0);
        let one = S::cst(1.0);
        let ft = t * f;
        let (s, c) = (ft.sin(), ft.cos());
        let hf = f / 2.0;
        match k {
            1 => [z, one, z, z, z, z],
            2 => [z, z, one, z, z, z],
            3 => [z, c, -s, -(s * f), -(c * f), z],
            4 => [z, s, c, c * f, -(s * f), z],
            5 => [z, -y, x, -v, u, z],
            6 => [z, x, y, u, v, h * 2.0],
            7 => [one, z, z, z, z, z],
            8 => [
                c,
                -((x * s - y * c) * hf),
                -((x * c + y * s) * hf),
                ((u - y * f) * s + (v - x * f) * c) * hf,
                -(((u + y * f) * c - (v + x * f) * s) * hf),
                h * s * f,
            ],
            9 => [
                s,
                (x * c + y * s) * hf,
                -((x * s - y * c) * hf),
                -(((u - y * f) * c - (v - x * f) * s) * hf),
                -(((u + y * f) * s + (v + x * f) * c) * hf),
                -(h * c * f),
            ],
            _ => panic!("generator index {k} out of range"),
        }
    }
}

/// `Y_1..Y_9`: linear combinations of the `X_k`.
#[derive(Clone, Copy, Debug)]
pub struct CanonicalBasis {
    x: RswBasis,
    /// Row `k` holds the coefficients of `Y_{k+1}` on `X_1..X_9`.
    combo: [[f64; DIM]; DIM],
}

impl CanonicalBasis {
    pub fn new(f: f64) -> Self {
        Self::with_combination(f, canonical_combination(f))
    }

    /// A basis built from an arbitrary change of basis; used to inject faults.
    pub fn with_combination(f: f64, combo: [[f64; DIM]; DIM]) -> Self {
        Self {
            x: RswBasis { f },
            combo,
        }
    }
}

/// Change of basis from `X` to `Y`.
pub fn canonical_combination(f: f64) -> [[f64; DIM]; DIM] {
    let mut m = [[0.0; DIM]; DIM];
    // indices are zero-based here: X_k is column k-1
    m[0][1] = 1.0;
    m[0][3] = -1.0;
    m[1][2] = 1.0;
    m[1][0] = -1.0;
    m[2][0] = 1.0;
    m[2][2] = 1.0;
    m[3][1] = 1.0;
    m[3][3] = 1.0;
    m[4][4] = 1.0;
    m[5][5] = 1.0;
    m[6][6] = 1.0 / f;
    m[6][4] = -0.5;
    m[6][7] = -1.0 / f;
    m[7][6] = 1.0 / f;
    m[7][4] = -0.5;
    m[7][7] = 1.0 / f;
    m[8][8] = -2.0 / f;
    m
}

impl GeneratorBasis for CanonicalBasis {
    fn coeffs<S: Scalar>(&self, k: usize, p: &[S; 6]) -> [S; 6] {
        let mut out = [S::cst(0.0); 6];
        for (m, &w) in self.combo[k - 1].iter().enumerate() {
            if w != 0.0 {
                let xm = self.x.coeffs(m + 1, p);
                for (o, c) in out.iter_mut().zip(xm) {
                    *o = *o + c * w;
                }
            }
        }
        out
    }
}

/// `Z_1..Z_9` of the non-rotating system.
#[derive(Clone, Copy, Debug, Default)]
pub struct SwBasis;

impl GeneratorBasis for SwBasis {
    fn coeffs<S: Scalar>(&self, k: usize, p: &[S; 6]) -> [S; 6] {
        let [t, x, y, u, v, h] = *p;
        let z = S::cst(0.0);
        let one = S::cst(1.0);
        match k {
            1 => [z, one, z, z, z, z],
            2 => [z, z, one, z, z, z],
            3 => [z, t, z, one, z, z],
            4 => [z, z, t, z, one, z],
            5 => [z, -y, x, -v, u, z],
            6 => [z, x, y, u, v, h * 2.0],
            7 => [one, z, z, z, z, z],
            8 => [t * t, t * x, t * y, x - t * u, y - t * v, -(t * h * 2.0)],
            9 => [t * 2.0, x, y, -u, -v, -(h * 2.0)],
            _ => panic!("generator index {k} out of range"),
        }
    }
}

/// Lie bracket of generators `i` and `j` of `basis` at `p`, generic in the
/// scalar so that brackets can themselves be differentiated.
pub fn bracket_in<B: GeneratorBasis, S: Scalar>(basis: &B, i: usize, j: usize, p: &[S; 6]) -> [S; 6] {
    let seeded = Jet::<S, 6>::seed(*p);
    let a = basis.coeffs(i, &seeded);
    let b = basis.coeffs(j, &seeded);
    bracket_from_jets(&a, &b)
}

/// `[A, B]^k = A^m ∂_m B^k − B^m ∂_m A^k` from jets of both fields.
fn bracket_from_jets<S: Scalar>(a: &[Jet<S, 6>; 6], b: &[Jet<S, 6>; 6]) -> [S; 6] {
    let mut out = [S::cst(0.0); 6];
    for k in 0..6 {
        let mut acc = S::cst(0.0);
        for m in 0..6 {
            acc = acc + a[m].v * b[k].d[m] - b[m].v * a[k].d[m];
        }
        out[k] = acc;
    }
    out
}

fn eval_family<S: Scalar>(family: GeneratorFamily, f: f64, k: usize, p: &[S; 6]) -> [S; 6] {
    match family {
        GeneratorFamily::RswX => RswBasis { f }.coeffs(k, p),
        GeneratorFamily::RswY => CanonicalBasis::new(f).coeffs(k, p),
        GeneratorFamily::SwZ => SwBasis.coeffs(k, p),
    }
}

pub fn generator_eval(id: GeneratorId, p: JetPoint, params: &FlowParameters) -> TangentVector {
    TangentVector(eval_family(id.family, params.f(), id.index, &p.to_array()))
}

pub fn lie_bracket(a: GeneratorId, b: GeneratorId, p: JetPoint, params: &FlowParameters) -> Result<TangentVector> {
    if a.family != b.family {
        return Err(RswError::InvalidParams("bracket of generators from different families".into()));
    }
    let f = params.f();
    let pt = p.to_array();
    let v = match a.family {
        GeneratorFamily::RswX => bracket_in(&RswBasis { f }, a.index, b.index, &pt),
        GeneratorFamily::RswY => bracket_in(&CanonicalBasis::new(f), a.index, b.index, &pt),
        GeneratorFamily::SwZ => bracket_in(&SwBasis, a.index, b.index, &pt),
    };
    Ok(TangentVector(v))
}

/// `[[A,B],C] + [[B,C],A] + [[C,A],B]` at `p`.
pub fn jacobi_defect<B: GeneratorBasis>(basis: &B, i: usize, j: usize, k: usize, p: [f64; 6]) -> [f64; 6] {
    type J6 = Jet<f64, 6>;
    let seeded = J6::seed(p);
    let gen = |n: usize| basis.coeffs::<J6>(n, &seeded);
    let br = |x: usize, y: usize| bracket_in::<B, J6>(basis, x, y, &seeded);
    let terms = [
        bracket_from_jets(&br(i, j), &gen(k)),
        bracket_from_jets(&br(j, k), &gen(i)),
        bracket_from_jets(&br(k, i), &gen(j)),
    ];
    let mut out = [0.0; 6];
    for t in terms {
        for (o, v) in out.iter_mut().zip(t) {
            *o += v;
        }
    }
    out
}

/// `coeffs[i][j][k]` with `[G_{i+1}, G_{j+1}] = Σ_k coeffs[i][j][k] G_{k+1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureTable {
    pub coeffs: [[[f64; DIM]; DIM]; DIM],
    /// Largest Euclidean residual of the per-bracket least-squares fits.
    pub fit_residual: f64,
    /// Smallest singular value of the sampled basis matrix.
    pub min_singular_value: f64,
}

impl StructureTable {
    pub fn entry(&self, i: usize, j: usize) -> [f64; DIM] {
        self.coeffs[i - 1][j - 1]
    }

    pub fn max_abs_diff(&self, other: &StructureTable) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    m = m.max((self.coeffs[i][j][k] - other.coeffs[i][j][k]).abs());
                }
            }
        }
        m
    }

    /// Entries of `self` that differ from `other` by more than `tol`.
    pub fn differences(&self, other: &StructureTable, tol: f64) -> Vec<(usize, usize, usize, f64, f64)> {
        let mut out = Vec::new();
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    let (a, b) = (self.coeffs[i][j][k], other.coeffs[i][j][k]);
                    if (a - b).abs() > tol {
                        out.push((i + 1, j + 1, k + 1, a, b));
                    }
                }
            }
        }
        out
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    m = m.max((self.coeffs[i][j][k] + self.coeffs[j][i][k]).abs());
                }
            }
        }
        m
    }

    /// Human-readable `[Y_i, Y_j] = ...` entries.
    pub fn render(&self, symbol: &str) -> Vec<Vec<String>> {
        (0..DIM)
            .map(|i| (0..DIM).map(|j| render_combination(&self.coeffs[i][j], symbol)).collect())
            .collect()
    }
}

fn render_combination(c: &[f64; DIM], symbol: &str) -> String {
    let mut parts = Vec::new();
    for (k, &v) in c.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let name = format!("{symbol}{}", k + 1);
        let term = if v == 1.0 {
            name
        } else if v == -1.0 {
            format!("-{name}")
        } else {
            format!("{v}{name}")
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+").replace("+-", "-")
    }
}

/// The commutator table of the canonical basis as published.
pub fn published_table() -> StructureTable {
    // (row, column, result index, coefficient), one-based
    const ENTRIES: &[(usize, usize, usize, f64)] = &[
        (1, 5, 2, 1.0),
        (1, 6, 1, 1.0),
        (1, 8, 3, 1.0),
        (1, 9, 1, 1.0),
        (2, 5, 1, -1.0),
        (2, 6, 2, 1.0),
        (2, 8, 4, 1.0),
        (2, 9, 2, 1.0),
        (3, 5, 4, 1.0),
        (3, 6, 3, 1.0),
        (3, 7, 1, -1.0),
        (3, 9, 3, -1.0),
        (4, 5, 3, -1.0),
        (4, 6, 4, 1.0),
        (4, 7, 2, -1.0),
        (4, 9, 4, -1.0),
        (5, 1, 2, -1.0),
        (5, 2, 1, 1.0),
        (5, 3, 4, -1.0),
        (5, 4, 3, 1.0),
        (6, 1, 1, -1.0),
        (6, 2, 2, -1.0),
        (6, 3, 3, -1.0),
        (6, 4, 4, -1.0),
        (7, 3, 1, 1.0),
        (7, 4, 2, 1.0),
        (7, 8, 9, 1.0),
        (7, 9, 7, 2.0),
        (8, 1, 3, -1.0),
        (8, 2, 4, -1.0),
        (8, 7, 9, -1.0),
        (8, 9, 8, -2.0),
        (9, 1, 1, -1.0),
        (9, 2, 2, -1.0),
        (9, 3, 3, 1.0),
        (9, 4, 4, 1.0),
        (9, 7, 7, -2.0),
        (9, 8, 8, 2.0),
    ];
    let mut coeffs = [[[0.0; DIM]; DIM]; DIM];
    for &(i, j, k, c) in ENTRIES {
        coeffs[i - 1][j - 1][k - 1] = c;
    }
    StructureTable {
        coeffs,
        fit_residual: 0.0,
        min_singular_value: f64::NAN,
    }
}

/// Options for the least-squares extraction of structure constants.
#[derive(Clone, Copy, Debug)]
pub struct FitOptions {
    pub points: usize,
    pub seed: u64,
    pub snap_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            points: 16,
            seed: 0x5eed,
            snap_tol: 1e-9,
        }
    }
}

/// Generic sample points: `(x, y, u, v, h)` uniform in `[-2, 2]`, `t` in
/// `(0.1, π/f − 0.1)`.
pub fn generic_points(n: usize, seed: u64, f: f64) -> Vec<[f64; 6]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t_hi = PI / f - 0.1;
    (0..n)
        .map(|_| {
            let mut p = [0.0; 6];
            p[0] = rng.gen_range(0.1..t_hi);
            for c in p.iter_mut().skip(1) {
                *c = rng.gen_range(-2.0..2.0);
            }
            p
        })
        .collect()
}

fn snap(v: f64, tol: f64) -> f64 {
    let half = (v * 2.0).round() / 2.0;
    if (v - half).abs() <= tol {
        half + 0.0
    } else {
        v
    }
}

pub fn structure_constants_of<B: GeneratorBasis>(basis: &B, points: &[[f64; 6]], snap_tol: f64) -> Result<StructureTable> {
    let rows = 6 * points.len();
    let mut a = DMatrix::<f64>::zeros(rows, DIM);
    for (pi, p) in points.iter().enumerate() {
        for k in 0..DIM {
            let g = basis.coeffs::<f64>(k + 1, p);
            for c in 0..6 {
                a[(6 * pi + c, k)] = g[c];
            }
        }
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd.rank(1e-10 * smax.max(1.0));
    if rank < DIM {
        return Err(RswError::FitDegenerate { rank });
    }
    let smin = svd.singular_values.min();

    let mut coeffs = [[[0.0; DIM]; DIM]; DIM];
    let mut worst: f64 = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            let mut b = DVector::<f64>::zeros(rows);
            for (pi, p) in points.iter().enumerate() {
                let br = bracket_in::<B, f64>(basis, i + 1, j + 1, p);
                for c in 0..6 {
                    b[6 * pi + c] = br[c];
                }
            }
            let x = svd.solve(&b, 1e-12 * smax).map_err(|_| RswError::FitDegenerate { rank })?;
            worst = worst.max((&a * &x - &b).norm());
            for k in 0..DIM {
                coeffs[i][j][k] = snap(x[k], snap_tol);
            }
        }
    }
    Ok(StructureTable {
        coeffs,
        fit_residual: worst,
        min_singular_value: smin,
    })
}

/// Which basis to fit in [`structure_constants`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TableFamily {
    RswY,
    SwZ,
}

pub fn structure_constants(family: TableFamily, params: &FlowParameters, opts: FitOptions) -> Result<StructureTable> {
    let f = params.f();
    let pts = generic_points(opts.points.max(12), opts.seed, f);
    match family {
        TableFamily::RswY => structure_constants_of(&CanonicalBasis::new(f), &pts, opts.snap_tol),
        TableFamily::SwZ => structure_constants_of(&SwBasis, &pts, opts.snap_tol),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsomorphismReport {
    pub rsw: StructureTable,
    pub sw: StructureTable,
    pub max_difference: f64,
    pub matches_published_table: bool,
    pub nilradical_abelian: bool,
    pub sl2_closed: bool,
}

const TABLE_TOL: f64 = 1e-9;

/// Checks that both tables coincide, then the Levi decomposition claims.
pub fn verify_isomorphism_with<B: GeneratorBasis>(rsw_basis: &B, params: &FlowParameters, opts: FitOptions) -> Result<IsomorphismReport> {
    let pts = generic_points(opts.points.max(12), opts.seed, params.f());
    let rsw = structure_constants_of(rsw_basis, &pts, opts.snap_tol)?;
    let sw = structure_constants_of(&SwBasis, &pts, opts.snap_tol)?;
    let diffs = rsw.differences(&sw, TABLE_TOL);
    if !diffs.is_empty() {
        let listing: Vec<String> = diffs
            .iter()
            .take(12)
            .map(|(i, j, k, a, b)| format!("[{i},{j}] on {k}: {a} vs {b}"))
            .collect();
        return Err(RswError::Mismatch(format!("{} entries differ: {}", diffs.len(), listing.join("; "))));
    }
    let nilradical_abelian = (1..=4).all(|i| (1..=4).all(|j| rsw.entry(i, j).iter().all(|c| c.abs() <= TABLE_TOL)));
    let sl2_closed = (7..=9).all(|i| {
        (7..=9).all(|j| {
            let e = rsw.entry(i, j);
            e[..6].iter().all(|c| c.abs() <= TABLE_TOL)
        })
    });
    Ok(IsomorphismReport {
        max_difference: rsw.max_abs_diff(&sw),
        matches_published_table: rsw.max_abs_diff(&published_table()) <= TABLE_TOL,
        rsw,
        sw,
        nilradical_abelian,
        sl2_closed,
    })
}

pub fn verify_isomorphism(params: &FlowParameters) -> Result<IsomorphismReport> {
    verify_isomorphism_with(&CanonicalBasis::new(params.f()), params, FitOptions::default())
}

/// Factor `m` with `Y'_k = m Z_k` under the equivalence map.
pub fn pushforward_multiplier(k: usize, f: f64) -> f64 {
    match k {
        3 | 4 | 8 => f,
        7 => 1.0 / f,
        _ => 1.0,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PushforwardReport {
    pub k: usize,
    pub multiplier: f64,
    /// Largest component error over the sample.
    pub max_error: f64,
    pub passed: bool,
}

pub const PUSHFORWARD_TOL: f64 = 1e-6;

/// Pushes `Y_k` through the equivalence map with a central-difference
/// Jacobian and compares with the multiple of `Z_k` at the image point.
pub fn pushforward_check(k: usize, params: &FlowParameters, sample: &[JetPoint]) -> Result<PushforwardReport> {
    if !(1..=DIM).contains(&k) {
        return Err(RswError::InvalidParams(format!("generator index {k} not in 1..=9")));
    }
    let f = params.f();
    let y = CanonicalBasis::new(f);
    let mult = pushforward_multiplier(k, f);
    let mut max_error: f64 = 0.0;
    for p in sample {
        let pt = p.to_array();
        transforms::check_regular_time(pt[0], f)?;
        let image = transforms::rsw_to_sw_coords::<f64>(f, &pt);
        let yk = y.coeffs::<f64>(k, &pt);
        let mut pushed = [0.0; 6];
        for j in 0..6 {
            let step = 1e-6 * pt[j].abs().max(1.0);
            let (mut lo, mut hi) = (pt, pt);
            lo[j] -= step;
            hi[j] += step;
            let a = transforms::rsw_to_sw_coords::<f64>(f, &lo);
            let b = transforms::rsw_to_sw_coords::<f64>(f, &hi);
            for i in 0..6 {
                pushed[i] += (b[i] - a[i]) / (hi[j] - lo[j]) * yk[j];
            }
        }
        let zk = SwBasis.coeffs::<f64>(k, &image);
        for i in 0..6 {
            max_error = max_error.max((pushed[i] - mult * zk[i]).abs());
        }
    }
    Ok(PushforwardReport {
        k,
        multiplier: mult,
        max_error,
        passed: max_error < PUSHFORWARD_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(f: f64) -> FlowParameters {
        FlowParameters::new(f, 1.0).unwrap()
    }

    fn id(family: GeneratorFamily, k: usize) -> GeneratorId {
        GeneratorId::new(family, k).unwrap()
    }

    #[test]
    fn generator_examples() {
        let p = JetPoint::from_array([0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let pr = params(1.0);
        assert_eq!(generator_eval(id(GeneratorFamily::RswX, 1), p, &pr).0, [0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(generator_eval(id(GeneratorFamily::RswX, 5), p, &pr).0, [0.0, -2.0, 1.0, -4.0, 3.0, 0.0]);

        let (x, y, u, v, h) = (0.3, -1.1, 0.7, 1.9, 0.4);
        let q = JetPoint::from_array([0.0, x, y, u, v, h]);
        let x8 = generator_eval(id(GeneratorFamily::RswX, 8), q, &pr).0;
        let expect = [1.0, y / 2.0, -x / 2.0, (v - x) / 2.0, -(u + y) / 2.0, 0.0];
        for (a, b) in x8.iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn bad_index_is_rejected() {
        assert!(GeneratorId::new(GeneratorFamily::RswY, 0).is_err());
        assert!(GeneratorId::new(GeneratorFamily::RswY, 10).is_err());
    }

    #[test]
    fn bracket_examples_against_table() {
        let pr = params(1.0);
        for p in generic_points(5, 7, 1.0) {
            let p = JetPoint::from_array(p);
            let b78 = lie_bracket(id(GeneratorFamily::RswY, 7), id(GeneratorFamily::RswY, 8), p, &pr).unwrap();
            let y9 = generator_eval(id(GeneratorFamily::RswY, 9), p, &pr);
            assert!(b78.max_abs_diff(&y9) < 1e-12);

            let b12 = lie_bracket(id(GeneratorFamily::RswY, 1), id(GeneratorFamily::RswY, 2), p, &pr).unwrap();
            assert!(b12.0.iter().all(|c| c.abs() < 1e-14));

            let b97 = lie_bracket(id(GeneratorFamily::RswY, 9), id(GeneratorFamily::RswY, 7), p, &pr).unwrap();
            let y7 = generator_eval(id(GeneratorFamily::RswY, 7), p, &pr).scaled(-2.0);
            assert!(b97.max_abs_diff(&y7) < 1e-12);
        }
    }

    #[test]
    fn mixed_family_bracket_is_rejected() {
        let p = JetPoint::from_array([0.5; 6]);
        let r = lie_bracket(id(GeneratorFamily::RswY, 1), id(GeneratorFamily::SwZ, 2), p, &params(1.0));
        assert!(r.is_err());
    }

    #[test]
    fn bracket_is_antisymmetric_and_bilinear() {
        let f = 0.8;
        let x = RswBasis { f };
        let y = CanonicalBasis::new(f);
        let combo = canonical_combination(f);
        for p in generic_points(6, 11, f) {
            for i in 1..=DIM {
                for j in 1..=DIM {
                    let a = bracket_in::<_, f64>(&y, i, j, &p);
                    let b = bracket_in::<_, f64>(&y, j, i, &p);
                    for c in 0..6 {
                        assert!((a[c] + b[c]).abs() < 1e-12);
                    }
                    // [Y_i, Y_j] = Σ a_m b_n [X_m, X_n]
                    let mut expand = [0.0; 6];
                    for m in 0..DIM {
                        for n in 0..DIM {
                            let w = combo[i - 1][m] * combo[j - 1][n];
                            if w != 0.0 {
                                let xb = bracket_in::<_, f64>(&x, m + 1, n + 1, &p);
                                for c in 0..6 {
                                    expand[c] += w * xb[c];
                                }
                            }
                        }
                    }
                    for c in 0..6 {
                        assert!((a[c] - expand[c]).abs() < 1e-12, "Y{i},Y{j}");
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_identity_on_random_triples() {
        let f = 1.3;
        let y = CanonicalBasis::new(f);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts = generic_points(20, 5, f);
        for p in pts {
            let (i, j, k) = (rng.gen_range(1..=9), rng.gen_range(1..=9), rng.gen_range(1..=9));
            let d = jacobi_defect(&y, i, j, k, p);
            assert!(d.iter().all(|c| c.abs() < 1e-9), "{i} {j} {k}: {d:?}");
            let d = jacobi_defect(&SwBasis, i, j, k, p);
            assert!(d.iter().all(|c| c.abs() < 1e-9));
        }
    }

    #[test]
    fn y_table_matches_published_table() {
        for f in [0.37, 1.0, 2.0] {
            let t = structure_constants(TableFamily::RswY, &params(f), FitOptions::default()).unwrap();
            let diffs = t.differences(&published_table(), 1e-9);
            assert!(diffs.is_empty(), "f = {f}: {diffs:?}");
            assert!(t.antisymmetry_defect() == 0.0);
        }
    }

    #[test]
    fn z_table_matches_published_table() {
        let t = structure_constants(TableFamily::SwZ, &params(1.0), FitOptions::default()).unwrap();
        assert!(t.differences(&published_table(), 1e-9).is_empty());
    }

    #[test]
    fn table_does_not_depend_on_sample() {
        let pr = params(0.6);
        let a = structure_constants(TableFamily::RswY, &pr, FitOptions { seed: 1, ..Default::default() }).unwrap();
        let b = structure_constants(TableFamily::RswY, &pr, FitOptions { seed: 2, ..Default::default() }).unwrap();
        assert!(a.max_abs_diff(&b) <= 1e-9);
    }

    #[test]
    fn isomorphism_passes_and_fault_is_caught() {
        for f in [1.0, 0.37] {
            let rep = verify_isomorphism(&params(f)).unwrap();
            assert!(rep.matches_published_table && rep.nilradical_abelian && rep.sl2_closed);
        }
        let f = 2.0;
        let mut combo = canonical_combination(f);
        // drop the 1/f factor in Y_7
        combo[6][6] = 1.0;
        combo[6][4] = -f / 2.0;
        combo[6][7] = -1.0;
        let bad = CanonicalBasis::with_combination(f, combo);
        let r = verify_isomorphism_with(&bad, &params(f), FitOptions::default());
        assert!(matches!(r, Err(RswError::Mismatch(_))));
    }

    #[test]
    fn degenerate_sample_is_reported() {
        let y = CanonicalBasis::new(1.0);
        let pts = vec![[0.5, 0.1, 0.2, 0.3, 0.4, 0.5]];
        assert!(matches!(structure_constants_of(&y, &pts, 1e-9), Err(RswError::FitDegenerate { .. })));
    }

    #[test]
    fn pushforward_examples() {
        let sample: Vec<JetPoint> = generic_points(8, 21, 1.0).into_iter().map(JetPoint::from_array).collect();
        let mut with_quarter = sample.clone();
        with_quarter.push(JetPoint::from_array([PI / 2.0, 0.4, -0.3, 0.2, 0.9, 1.3]));
        let r = pushforward_check(5, &params(1.0), &with_quarter).unwrap();
        assert!(r.passed, "{r:?}");

        let sample2: Vec<JetPoint> = generic_points(8, 22, 2.0).into_iter().map(JetPoint::from_array).collect();
        let r = pushforward_check(3, &params(2.0), &sample2).unwrap();
        assert_eq!(r.multiplier, 2.0);
        assert!(r.passed, "{r:?}");
        let r = pushforward_check(7, &params(2.0), &sample2).unwrap();
        assert_eq!(r.multiplier, 0.5);
        assert!(r.passed, "{r:?}");
        for k in 1..=9 {
            assert!(pushforward_check(k, &params(2.0), &sample2).unwrap().passed, "k = {k}");
        }
    }

    #[test]
    fn pushforward_rejects_singular_time() {
        let p = JetPoint::from_array([2.0 * PI, 0.1, 0.1, 0.1, 0.1, 1.0]);
        assert!(matches!(pushforward_check(1, &params(1.0), &[p]), Err(RswError::SingularTime { .. })));
    }

    #[test]
    fn periodic_and_time_independent_generators() {
        let f = 1.7;
        let x = RswBasis { f };
        let period = 2.0 * PI / f;
        for p in generic_points(5, 9, f) {
            let mut q = p;
            q[0] += period;
            for k in 1..=DIM {
                let a = x.coeffs::<f64>(k, &p);
                let b = x.coeffs::<f64>(k, &q);
                for c in 0..6 {
                    assert!((a[c] - b[c]).abs() < 1e-12);
                }
            }
            let mut shifted = p;
            shifted[0] += 0.37;
            for k in [1, 2, 5, 6, 7] {
                assert_eq!(x.coeffs::<f64>(k, &p), x.coeffs::<f64>(k, &shifted));
            }
        }
    }
}
