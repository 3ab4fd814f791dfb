//! The Riemannian submersion `π(a) = aᵀa` onto symmetric positive-definite
//! matrices carrying the finite-dimensional Ebin metric
//! `⟨h,k⟩_g = ¼·tr(hg⁻¹kg⁻¹)·√det g`: projections, horizontal/vertical
//! bundles, lifts, orbit decomposition, geodesics and curvature on the SPD
//! base, and the O'Neill bookkeeping relating the two curvatures.

use alloc::vec::Vec;

use crate::curvature::sectional_traceless_orthonormal;
use crate::error::{Error, Result};
use crate::flt;
use crate::frame::{FrameMatrix, TangentMatrix};
use crate::geodesic::solve_ivp;
use crate::matrix::{sample_gaussian, spd_inverse_det, sym_sqrt, RealMatrix, Seed};

/// A point `g` of Sym₊(m), with `g⁻¹` and `√det g` cached.
#[derive(Clone, Debug)]
pub struct SymPoint {
    g: RealMatrix,
    inv: RealMatrix,
    sqrt_det: f64,
}

impl SymPoint {
    /// Validates symmetry (to 1e-12 relative) and positive-definiteness at
    /// the rank tolerance applied to the eigenvalue square roots.
    pub fn new(g: RealMatrix) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::ShapeMismatch);
        }
        if g.max_abs_diff(&g.transpose()) > 1e-12 * (1.0 + g.max_abs()) {
            return Err(Error::NotSpd);
        }
        let (inv, det, ok) = spd_inverse_det(&g, g.rows());
        if !ok || det <= 0.0 {
            return Err(Error::NotSpd);
        }
        Ok(Self {
            g,
            inv,
            sqrt_det: flt::sqrt(det),
        })
    }

    pub fn g(&self) -> &RealMatrix {
        &self.g
    }

    pub fn inv(&self) -> &RealMatrix {
        &self.inv
    }

    pub fn sqrt_det(&self) -> f64 {
        self.sqrt_det
    }

    pub fn m(&self) -> usize {
        self.g.rows()
    }
}

/// A tangent `h ∈ T_g Sym₊(m) = Sym(m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTangent {
    h: RealMatrix,
}

impl SymTangent {
    pub fn new(h: RealMatrix) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::ShapeMismatch);
        }
        if h.max_abs_diff(&h.transpose()) > 1e-12 * (1.0 + h.max_abs()) {
            return Err(Error::NotSpd);
        }
        // Scrub rounding asymmetry so downstream algebra stays symmetric.
        let sym = RealMatrix::from_fn(h.rows(), h.cols(), |i, j| 0.5 * (h[(i, j)] + h[(j, i)]));
        Ok(Self { h: sym })
    }

    pub fn h(&self) -> &RealMatrix {
        &self.h
    }
}

/// The submersion `π(a) = aᵀa`.
pub fn project_pi(a: &FrameMatrix) -> SymPoint {
    SymPoint::new(a.gram().clone()).expect("Gram matrix of a full-rank frame is SPD")
}

/// Differential of the submersion, `dπ_a(v) = aᵀv + vᵀa`.
pub fn dpi(a: &FrameMatrix, v: &TangentMatrix) -> SymTangent {
    let av = &a.mat().transpose() * v.mat();
    let sum = &av + &av.transpose();
    SymTangent::new(sum).expect("dπ output is symmetric by construction")
}

/// Splits `u = h + vert` with `h·a⁺` symmetric (horizontal) and
/// `vert = Xa` for skew `X` (vertical); the parts are metric-orthogonal.
///
/// The projection is the closed form `h = ½(aa⁺·u + (a⁺)ᵀuᵀa)`.
pub fn split_horizontal_vertical(
    a: &FrameMatrix,
    u: &TangentMatrix,
) -> (TangentMatrix, TangentMatrix) {
    assert!(
        u.mat().same_shape(a.mat()),
        "tangent shape does not match base frame"
    );
    let proj = a.mat() * &(a.pinv() * u.mat());
    let mirrored = &a.pinv().transpose() * &(&u.mat().transpose() * a.mat());
    let h = (&proj + &mirrored).scale(0.5);
    let vert = u.mat() - &h;
    (TangentMatrix::new(h), TangentMatrix::new(vert))
}

/// Horizontal lift of `h ∈ T_g Sym₊(m)` at `a` with `π(a) = g`:
/// `v = ½(a⁺)ᵀh`, the unique horizontal preimage of `h` under `dπ_a`.
pub fn horizontal_lift(a: &FrameMatrix, h: &SymTangent) -> TangentMatrix {
    TangentMatrix::new((&a.pinv().transpose() * h.h()).scale(0.5))
}

/// Orbit decomposition `a = z·(s; 0)` with `z ∈ O(n)` and `s = √(aᵀa)` SPD.
///
/// `z₁ = a·s⁻¹` has orthonormal columns; the remaining columns are filled by
/// column-pivoted orthogonalization of the standard basis, which makes the
/// (non-unique) completion deterministic.
pub fn orbit_decompose(a: &FrameMatrix) -> Result<(RealMatrix, RealMatrix)> {
    let n = a.n();
    let m = a.m();
    let s = sym_sqrt(a.gram())?;
    let (s_inv, _, ok) = spd_inverse_det(&s, m);
    if !ok {
        return Err(Error::RankDeficient);
    }
    let z1 = a.mat() * &s_inv;
    let mut cols: Vec<Vec<f64>> = (0..m).map(|j| (0..n).map(|i| z1[(i, j)]).collect()).collect();
    let mut used = alloc::vec![false; n];
    while cols.len() < n {
        let mut best_idx = None;
        let mut best_norm = -1.0;
        let mut best_res: Vec<f64> = Vec::new();
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            let mut r: Vec<f64> = (0..n).map(|i| if i == cand { 1.0 } else { 0.0 }).collect();
            for c in &cols {
                let d: f64 = r.iter().zip(c.iter()).map(|(x, y)| x * y).sum();
                for (ri, ci) in r.iter_mut().zip(c.iter()) {
                    *ri -= d * ci;
                }
            }
            let norm = flt::sqrt(r.iter().map(|x| x * x).sum());
            if norm > best_norm {
                best_norm = norm;
                best_idx = Some(cand);
                best_res = r;
            }
        }
        let idx = best_idx.expect("candidate basis vector exists");
        used[idx] = true;
        // Re-orthogonalize once for numerical hygiene at small residuals.
        for c in &cols {
            let d: f64 = best_res.iter().zip(c.iter()).map(|(x, y)| x * y).sum();
            for (ri, ci) in best_res.iter_mut().zip(c.iter()) {
                *ri -= d * ci;
            }
        }
        let norm = flt::sqrt(best_res.iter().map(|x| x * x).sum());
        for x in best_res.iter_mut() {
            *x /= norm;
        }
        cols.push(best_res);
    }
    let z = RealMatrix::from_fn(n, n, |i, j| cols[j][i]);
    Ok((z, s))
}

/// The finite-dimensional Ebin metric `⟨h,k⟩_g = ¼·tr(hg⁻¹kg⁻¹)·√det g`.
pub fn sym_metric(g: &SymPoint, h: &SymTangent, k: &SymTangent) -> f64 {
    let x = g.inv() * h.h();
    let y = g.inv() * k.h();
    0.25 * x.trace_mul(&y) * g.sqrt_det()
}

fn sym_norm(g: &SymPoint, h: &SymTangent) -> f64 {
    flt::sqrt(sym_metric(g, h, h).max(0.0))
}

/// Right-hand side of the geodesic equation on Sym₊(m):
/// `g_tt = g_t g⁻¹ g_t + ¼·tr(g⁻¹g_t g⁻¹g_t)·g − ½·tr(g⁻¹g_t)·g_t`.
pub fn sym_geodesic_rhs(g: &SymPoint, gt: &SymTangent) -> SymTangent {
    let x = g.inv() * gt.h();
    let t1 = gt.h() * &x;
    let t2 = g.g().scale(0.25 * x.trace_mul(&x));
    let t3 = gt.h().scale(0.5 * x.trace());
    let out = &(&t1 + &t2) - &t3;
    SymTangent::new(out).expect("Sym geodesic RHS is symmetric")
}

/// Sectional curvature of Sym₊(m) (non-positive):
/// `K = (1/16)[tr([X₀,Y₀]²) + (m/4)(tr(X₀Y₀))² − (m/4)tr(X₀²)tr(Y₀²)]·√det g`
/// where `X₀, Y₀` are the traceless parts of `g⁻¹h, g⁻¹k` and `h, k` are
/// orthonormalized in the Ebin metric internally.
///
/// Curvature only sees the traceless parts: the volume direction `h = μg`
/// is flat, and the bracket term is insensitive to it anyway.
pub fn sym_sectional(g: &SymPoint, h: &SymTangent, k: &SymTangent) -> Result<f64> {
    let ghh = sym_metric(g, h, h);
    let gkk = sym_metric(g, k, k);
    let ghk = sym_metric(g, h, k);
    let gram_det = ghh * gkk - ghk * ghk;
    if !(gram_det > 1e-12 * ghh * gkk) || ghh <= 0.0 || gkk <= 0.0 {
        return Err(Error::DegeneratePlane);
    }
    let h1 = SymTangent::new(h.h().scale(1.0 / flt::sqrt(ghh))).expect("scaling keeps symmetry");
    let kp = k.h() - &h.h().scale(ghk / ghh);
    let kp = SymTangent::new(kp).expect("projection keeps symmetry");
    let nk = sym_norm(g, &kp);
    let k1 = SymTangent::new(kp.h().scale(1.0 / nk)).expect("scaling keeps symmetry");

    let m = g.m() as f64;
    let traceless = |t: &SymTangent| -> RealMatrix {
        let x = g.inv() * t.h();
        let shift = x.trace() / m;
        let mut out = x;
        for i in 0..out.rows() {
            out[(i, i)] -= shift;
        }
        out
    };
    let x = traceless(&h1);
    let y = traceless(&k1);
    let c = &(&x * &y) - &(&y * &x);
    let bracket = c.trace_mul(&c);
    let cross = x.trace_mul(&y);
    let sq = x.trace_mul(&x) * y.trace_mul(&y);
    Ok((bracket + 0.25 * m * cross * cross - 0.25 * m * sq) * g.sqrt_det() / 16.0)
}

/// The three quantities of O'Neill's formula at a horizontal 2-plane:
/// base curvature `k_sym`, total-space curvature `k_mat`, and the vertical
/// bracket term `¾‖[ua⁺, va⁺]‖²·√det(aᵀa)`, satisfying
/// `k_sym = k_mat + oneill_term`.
#[derive(Clone, Copy, Debug)]
pub struct OneillCheck {
    pub k_sym: f64,
    pub k_mat: f64,
    pub oneill_term: f64,
}

/// Evaluates O'Neill's identity data for horizontal `u, v` (orthonormalized
/// internally; horizontality is validated).
pub fn oneill_check(
    a: &FrameMatrix,
    u: &TangentMatrix,
    v: &TangentMatrix,
) -> Result<OneillCheck> {
    for t in [u, v] {
        let sq = a.to_square(t);
        if sq.max_abs_diff(&sq.transpose()) > 1e-8 * (1.0 + sq.max_abs()) {
            return Err(Error::NotHorizontal);
        }
    }
    let (u1, v1) = a.orthonormalize_pair(u, v)?;
    let k_mat = sectional_traceless_orthonormal(a, &u1, &v1);
    let g = project_pi(a);
    let k_sym = sym_sectional(&g, &dpi(a, &u1), &dpi(a, &v1))?;
    let us = a.to_square(&u1);
    let vs = a.to_square(&v1);
    let c = &(&us * &vs) - &(&vs * &us);
    let oneill_term = 0.75 * c.dot(&c) * a.sqrt_det_gram();
    Ok(OneillCheck {
        k_sym,
        k_mat,
        oneill_term,
    })
}

/// Realizes a metric point as a frame over a base frame: `b = a₀·√Y` with
/// `Y = g₀⁻¹g`, `g₀ = a₀ᵀa₀`, so that `bᵀb = g`.
pub fn lift_metric_to_frame(g: &SymPoint, a0: &FrameMatrix) -> Result<FrameMatrix> {
    if g.m() != a0.m() {
        return Err(Error::ShapeMismatch);
    }
    let g0_half = sym_sqrt(a0.gram())?;
    let (g0_half_inv, _, ok) = spd_inverse_det(&g0_half, a0.m());
    if !ok {
        return Err(Error::RankDeficient);
    }
    let middle = &(&g0_half_inv * g.g()) * &g0_half_inv;
    let s = sym_sqrt(&middle)?;
    let sqrt_y = &(&g0_half_inv * &s) * &g0_half;
    FrameMatrix::new(a0.mat() * &sqrt_y)
}

/// One named invariant check of the verification suite.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_err: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Outcome of [`verify_submersion`].
#[derive(Clone, Debug)]
pub struct SubmersionReport {
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckResult>,
}

impl SubmersionReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn random_frame(n: usize, m: usize, seed: Seed) -> FrameMatrix {
    let mut s = seed;
    loop {
        if let Ok(f) = FrameMatrix::new(sample_gaussian(n, m, s)) {
            return f;
        }
        s = s.derive(0);
    }
}

/// Runs the submersion invariant suite on seeded random data.
pub fn verify_submersion(seed: Seed, trials: usize) -> SubmersionReport {
    let dims = [(3usize, 2usize), (4, 2), (4, 3), (5, 3)];
    let mut checks: Vec<CheckResult> = Vec::new();
    let mut record = |name: &'static str, max_err: f64, threshold: f64| {
        checks.push(CheckResult {
            name,
            max_err,
            threshold,
            pass: max_err <= threshold,
        });
    };

    let mut fiber_err: f64 = 0.0;
    let mut split_err: f64 = 0.0;
    let mut lift_err: f64 = 0.0;
    let mut orbit_err: f64 = 0.0;
    let mut isometry_err: f64 = 0.0;
    let mut ode_err: f64 = 0.0;
    let mut oneill_err: f64 = 0.0;
    let mut sym_curv_max: f64 = f64::NEG_INFINITY;
    let mut horiz_err: f64 = 0.0;
    let mut lift_metric_err: f64 = 0.0;

    for trial in 0..trials {
        let (n, m) = dims[trial % dims.len()];
        let base = seed.derive(trial as u64 + 1);
        let a = random_frame(n, m, base);
        let u = TangentMatrix::new(sample_gaussian(n, m, base.derive(2)));
        let v = TangentMatrix::new(sample_gaussian(n, m, base.derive(3)));

        // Fibers: π is O(n)-invariant (checked through the orbit factor).
        let (z, s) = orbit_decompose(&a).expect("orbit decomposition of a valid frame");
        let zt_z = &z.transpose() * &z;
        orbit_err = orbit_err.max(zt_z.max_abs_diff(&RealMatrix::identity(n)));
        let mut s_tall = RealMatrix::zeros(n, m);
        for i in 0..m {
            for j in 0..m {
                s_tall[(i, j)] = s[(i, j)];
            }
        }
        orbit_err = orbit_err.max((&z * &s_tall).max_abs_diff(a.mat()) / (1.0 + a.mat().max_abs()));
        fiber_err = fiber_err
            .max(project_pi(&a).g().max_abs_diff(&(&s * &s)) / (1.0 + a.gram().max_abs()));

        // Bundle split: recombination, horizontality, orthogonality.
        let (h, vert) = split_horizontal_vertical(&a, &u);
        let rebuilt = h.mat() + vert.mat();
        split_err = split_err.max(rebuilt.max_abs_diff(u.mat()) / (1.0 + u.mat().max_abs()));
        let hsq = a.to_square(&h);
        split_err = split_err.max(hsq.max_abs_diff(&hsq.transpose()) / (1.0 + hsq.max_abs()));
        let scale = (a.norm(&h) * a.norm(&vert)).max(1e-30);
        split_err = split_err.max(a.metric(&h, &vert).abs() / scale);

        // Lift inverts dπ on the horizontal bundle.
        let hk = dpi(&a, &v);
        let lifted = horizontal_lift(&a, &hk);
        lift_err = lift_err
            .max(dpi(&a, &lifted).h().max_abs_diff(hk.h()) / (1.0 + hk.h().max_abs()));
        let lsq = a.to_square(&lifted);
        lift_err = lift_err.max(lsq.max_abs_diff(&lsq.transpose()) / (1.0 + lsq.max_abs()));

        // dπ isometry on horizontal vectors.
        let g = project_pi(&a);
        let nv = a.norm(&h);
        if nv > 1e-12 {
            isometry_err = isometry_err.max((sym_norm(&g, &dpi(&a, &h)) - nv).abs() / nv);
        }

        // Horizontal geodesics project onto Sym₊ geodesics.
        let speed = a.norm(&h);
        if speed > 1e-9 {
            let h_unit = TangentMatrix::new(h.mat().scale(1.0 / speed));
            let sol = solve_ivp(&a, &h_unit).expect("IVP for horizontal start");
            let fd = 1e-4;
            for &t in &[0.25, 0.5, 0.75] {
                let (at, vt) = sol.eval(t).expect("interior evaluation");
                let (ap, _) = sol.eval(t + fd).expect("interior evaluation");
                let (am, _) = sol.eval(t - fd).expect("interior evaluation");
                let gt = project_pi(&at);
                let gdot = dpi(&at, &vt);
                let second = &(&(ap.gram() + am.gram()) - &gt.g().scale(2.0)) * (1.0 / (fd * fd));
                let rhs = sym_geodesic_rhs(&gt, &gdot);
                ode_err = ode_err
                    .max(second.max_abs_diff(rhs.h()) / (1.0 + rhs.h().max_abs()));
                // Horizontality is preserved: L(t) stays symmetric.
                let l = vt.mat() * at.pinv();
                horiz_err = horiz_err.max(l.max_abs_diff(&l.transpose()) / (1.0 + l.max_abs()));
            }
        }

        // O'Neill identity on a horizontal plane.
        let (hv, _) = split_horizontal_vertical(&a, &v);
        if let Ok(oc) = oneill_check(&a, &h, &hv) {
            let denom = oc.k_sym.abs().max(oc.k_mat.abs()).max(1e-12);
            oneill_err = oneill_err.max((oc.k_sym - oc.k_mat - oc.oneill_term).abs() / denom);
        }

        // Base curvature is non-positive.
        let sh = dpi(&a, &u);
        let sk = dpi(&a, &v);
        if let Ok(ks) = sym_sectional(&g, &sh, &sk) {
            sym_curv_max = sym_curv_max.max(ks);
        }

        // Metric points lift back to frames over any base.
        let target = {
            let r = sample_gaussian(m, m, base.derive(4));
            let spd = &(&r.transpose() * &r) + &RealMatrix::identity(m).scale(0.5);
            SymPoint::new(spd).expect("constructed SPD matrix")
        };
        if let Ok(b) = lift_metric_to_frame(&target, &a) {
            lift_metric_err = lift_metric_err
                .max(b.gram().max_abs_diff(target.g()) / (1.0 + target.g().max_abs()));
        } else {
            lift_metric_err = f64::INFINITY;
        }
    }

    record("orbit_decomposition", orbit_err, 1e-10);
    record("fiber_projection", fiber_err, 1e-10);
    record("bundle_split", split_err, 1e-10);
    record("horizontal_lift", lift_err, 1e-10);
    record("dpi_isometry", isometry_err, 1e-10);
    record("projected_geodesic_ode", ode_err, 1e-5);
    record("horizontality_preserved", horiz_err, 1e-8);
    record("oneill_identity", oneill_err, 1e-8);
    record(
        "sym_sectional_nonpositive",
        sym_curv_max.max(0.0),
        1e-12,
    );
    record("lift_metric_to_frame", lift_metric_err, 1e-10);

    SubmersionReport {
        seed: seed.0,
        trials,
        checks,
    }
}
