//! Christoffel symbols, the Riemann tensor, sectional curvature, and seeded
//! Monte-Carlo curvature-sign scans.
//!
//! The Riemann tensor is computed along two independent routes that tests
//! cross-check against each other:
//!
//! * [`riemann`] — the coordinate formula
//!   `R(u,v)w = −dΓ(u)(v,w) + dΓ(v)(u,w) + Γ(u,Γ(v,w)) − Γ(v,Γ(u,w))`,
//!   built from the Christoffel symbol and its analytic directional
//!   derivative. This is the ground-truth path; a persistent disagreement
//!   with the closed form is a transcription bug there, not here.
//! * [`riemann_closed`] — the expanded closed form in the square variables
//!   `U = ua⁺`, `V = va⁺`, `W = wa⁺`.
//!
//! Sectional curvature likewise has a direct trace-polynomial form in the
//! traceless parts ([`sectional_traceless`]), which the scan uses, and the
//! tensor route ([`sectional`]).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frame::{FrameMatrix, TangentMatrix};
use crate::matrix::{gaussian_from_rng, RealMatrix, Seed};

/// Christoffel symbol `Γ_a(u,v)`, the symmetric bilinear polarization of the
/// geodesic equation's right-hand side:
///
/// ```text
/// Γ_a(u,v) = ½( u(aᵀa)⁻¹vᵀa + v(aᵀa)⁻¹uᵀa + ua⁺v + va⁺u
///             − (ua⁺)ᵀv − (va⁺)ᵀu + tr(u(aᵀa)⁻¹vᵀ)a − tr(ua⁺)v − tr(va⁺)u )
/// ```
pub fn christoffel(a: &FrameMatrix, u: &TangentMatrix, v: &TangentMatrix) -> TangentMatrix {
    let (u, v) = (u.mat(), v.mat());
    let ug = u * a.gram_inv();
    let vg = v * a.gram_inv();
    let pt = a.pinv().transpose();
    let t1 = &ug * &(&v.transpose() * a.mat());
    let t2 = &vg * &(&u.transpose() * a.mat());
    let t3 = u * &(a.pinv() * v);
    let t4 = v * &(a.pinv() * u);
    let t5 = &pt * &(&u.transpose() * v);
    let t6 = &pt * &(&v.transpose() * u);
    let t7 = a.mat().scale(ug.dot(v));
    let t8 = v.scale(u.trace_mul(a.pinv()));
    let t9 = u.scale(v.trace_mul(a.pinv()));
    let sum = &(&(&(&(&(&(&(&t1 + &t2) + &t3) + &t4) - &t5) - &t6) + &t7) - &t8) - &t9;
    TangentMatrix::new(sum.scale(0.5))
}

/// Directional derivative `dΓ_a(dir)(u,v)` of the Christoffel symbol in the
/// base point, in closed form (differentiating `(aᵀa)⁻¹` and `a⁺` exactly).
pub fn dchristoffel(
    a: &FrameMatrix,
    dir: &TangentMatrix,
    u: &TangentMatrix,
    v: &TangentMatrix,
) -> TangentMatrix {
    let b = dir.mat();
    let (u, v) = (u.mat(), v.mat());
    let ginv = a.gram_inv();
    let dg = &(&b.transpose() * a.mat()) + &(&a.mat().transpose() * b);
    let dginv = (&(ginv * &dg) * ginv).scale(-1.0);
    let dpinv = &(&dginv * &a.mat().transpose()) + &(ginv * &b.transpose());
    let dpinv_t = dpinv.transpose();

    let udg = u * &dginv;
    let vdg = v * &dginv;
    let t1 = &udg * &(&v.transpose() * a.mat());
    let t2 = &(u * ginv) * &(&v.transpose() * b);
    let t3 = &vdg * &(&u.transpose() * a.mat());
    let t4 = &(v * ginv) * &(&u.transpose() * b);
    let t5 = u * &(&dpinv * v);
    let t6 = v * &(&dpinv * u);
    let t7 = &dpinv_t * &(&u.transpose() * v);
    let t8 = &dpinv_t * &(&v.transpose() * u);
    let t9 = a.mat().scale(udg.dot(v));
    let t10 = b.scale((u * ginv).dot(v));
    let t11 = v.scale(u.trace_mul(&dpinv));
    let t12 = u.scale(v.trace_mul(&dpinv));
    let sum = &(&(&(&(&(&(&(&(&(&(&t1 + &t2) + &t3) + &t4) + &t5) + &t6) - &t7) - &t8) + &t9)
        + &t10)
        - &t11)
        - &t12;
    TangentMatrix::new(sum.scale(0.5))
}

/// Riemann tensor `R_a(u,v)w` via the coordinate formula
/// `−dΓ(u)(v,w) + dΓ(v)(u,w) + Γ(u,Γ(v,w)) − Γ(v,Γ(u,w))`.
pub fn riemann(
    a: &FrameMatrix,
    u: &TangentMatrix,
    v: &TangentMatrix,
    w: &TangentMatrix,
) -> TangentMatrix {
    let d_u = dchristoffel(a, u, v, w);
    let d_v = dchristoffel(a, v, u, w);
    let g_vw = christoffel(a, v, w);
    let g_uw = christoffel(a, u, w);
    let n1 = christoffel(a, u, &g_vw);
    let n2 = christoffel(a, v, &g_uw);
    let sum = &(&(d_v.mat() - d_u.mat()) + n1.mat()) - n2.mat();
    TangentMatrix::new(sum)
}

fn comm(x: &RealMatrix, y: &RealMatrix) -> RealMatrix {
    &(x * y) - &(y * x)
}

/// Riemann tensor via the expanded closed form in `U = ua⁺`, `V = va⁺`,
/// `W = wa⁺` and the projection `P = aa⁺` (secondary route, cross-checked
/// against [`riemann`]).
pub fn riemann_closed(
    a: &FrameMatrix,
    u: &TangentMatrix,
    v: &TangentMatrix,
    w: &TangentMatrix,
) -> TangentMatrix {
    let m = a.m() as f64;
    let uu = a.to_square(u);
    let vv = a.to_square(v);
    let ww = a.to_square(w);
    let ut = uu.transpose();
    let vt = vv.transpose();
    let wt = ww.transpose();
    let p = a.mat() * a.pinv();

    let mut expr = RealMatrix::zeros(a.n(), a.n());
    let mut add = |sign: f64, term: RealMatrix| {
        expr = &expr + &term.scale(sign);
    };

    add(1.0, &(&comm(&vv, &ut) * &wt) * &p);
    add(1.0, &(&ww * &comm(&ut, &vt)) * &p);
    add(1.0, &(&(&ww * &uu) * &vt) * &p);
    add(1.0, &(&(&wt * &uu) * &vt) * &p);
    add(1.0, &(&(&uu * &ww) * &vt) * &p);
    add(-1.0, &(&comm(&uu, &vt) * &wt) * &p);
    add(-1.0, &(&(&ww * &vv) * &ut) * &p);
    add(-1.0, &(&(&wt * &vv) * &ut) * &p);
    add(-1.0, &(&(&vv * &ww) * &ut) * &p);
    add(2.0, &(&(&vv * &ut) * &p) * &ww);
    add(1.0, &(&(&ww * &ut) * &p) * &vv);
    add(1.0, &(&(&vv * &wt) * &p) * &uu);
    add(-2.0, &(&(&uu * &vt) * &p) * &ww);
    add(-1.0, &(&(&ww * &vt) * &p) * &uu);
    add(-1.0, &(&(&uu * &wt) * &p) * &vv);
    add(2.0, &(&(&p * &vv) * &ut) * &ww);
    add(1.0, &(&(&p * &vv) * &wt) * &uu);
    add(1.0, &(&(&p * &ww) * &ut) * &vv);
    add(-2.0, &(&(&p * &uu) * &vt) * &ww);
    add(-1.0, &(&(&p * &uu) * &wt) * &vv);
    add(-1.0, &(&(&p * &ww) * &vt) * &uu);
    add(1.0, comm(&comm(&vv, &uu), &ww));
    add(1.0, &comm(&vt, &ut) * &ww);
    add(2.0, &(&uu * &wt) * &vv);
    add(2.0, &(&uu * &vt) * &ww);
    add(1.0, &(&vt * &uu) * &ww);
    add(1.0, &(&wt * &ut) * &vv);
    add(1.0, &(&vt * &ww) * &uu);
    add(-2.0, &(&vv * &wt) * &uu);
    add(-2.0, &(&vv * &ut) * &ww);
    add(-1.0, &(&ut * &vv) * &ww);
    add(-1.0, &(&wt * &vt) * &uu);
    add(-1.0, &(&ut * &ww) * &vv);
    add(vv.dot(&ww) * uu.trace(), p.clone());
    add(-vv.trace() * ww.dot(&uu), p.clone());
    add(m * uu.dot(&ww), vv.clone());
    add(-m * vv.dot(&ww), uu.clone());
    add(ww.trace() * vv.trace(), uu.clone());
    add(-ww.trace() * uu.trace(), vv);

    TangentMatrix::new((&expr * a.mat()).scale(0.25))
}

/// Sectional curvature `K_a(u,v) = ⟨R(u,v)v,u⟩_a` of the 2-plane spanned by
/// `u` and `v`, orthonormalized in the metric first.
pub fn sectional(a: &FrameMatrix, u: &TangentMatrix, v: &TangentMatrix) -> Result<f64> {
    let (u1, v1) = a.orthonormalize_pair(u, v)?;
    let r = riemann(a, &u1, &v1, &v1);
    Ok(a.metric(&r, &u1))
}

/// Sectional curvature via the direct trace polynomial in the traceless parts
/// `U₀, V₀` of `ua⁺, va⁺`. Used by the scan; agrees with [`sectional`].
pub fn sectional_traceless(a: &FrameMatrix, u: &TangentMatrix, v: &TangentMatrix) -> Result<f64> {
    let (u1, v1) = a.orthonormalize_pair(u, v)?;
    Ok(sectional_traceless_orthonormal(a, &u1, &v1))
}

/// The trace polynomial assuming `u, v` already metric-orthonormal.
pub(crate) fn sectional_traceless_orthonormal(
    a: &FrameMatrix,
    u: &TangentMatrix,
    v: &TangentMatrix,
) -> f64 {
    let m = a.m() as f64;
    let p = a.mat() * a.pinv();
    let usq = a.to_square(u);
    let vsq = a.to_square(v);
    let u0 = &usq - &p.scale(usq.trace() / m);
    let v0 = &vsq - &p.scale(vsq.trace() / m);
    let u0t = u0.transpose();
    let v0t = v0.transpose();

    let c1 = comm(&v0, &u0);
    let c2 = &(&v0t * &u0) - &(&u0 * &v0t);
    let c3 = &(&v0 * &u0t) - &(&u0t * &v0);
    let x = &v0 * &u0; // V₀U₀
    let y = &u0 * &v0; // U₀V₀
    let sq_v = &v0 * &v0;
    let sq_u = &u0 * &u0;
    let e = &v0 * &u0t; // V₀U₀ᵀ, transpose U₀V₀ᵀ
    let ee = &e * &e;
    let pe = &p * &e;
    let ep = &e * &p;
    let a_vvt = &v0 * &v0t;
    let g_uut = &u0 * &u0t;
    let f_vtv = &v0t * &v0;
    let b_utu = &u0t * &u0;

    let mut expr = 0.0;
    expr += 2.0 * c1.trace_mul(&c2);
    expr += 2.0 * c3.trace_mul(&c1);
    expr += 2.0 * x.dot(&y); // tr(V₀U₀V₀ᵀU₀ᵀ)
    expr += a_vvt.trace_mul(&b_utu); // tr(V₀V₀ᵀU₀ᵀU₀)
    expr += -4.0 * sq_v.dot(&sq_u); // tr(V₀V₀U₀ᵀU₀ᵀ)
    expr += 4.0 * e.dot(&e); // tr(V₀U₀ᵀU₀V₀ᵀ)
    expr += f_vtv.trace_mul(&g_uut); // tr(V₀ᵀV₀U₀U₀ᵀ)
    expr += -2.0 * a_vvt.trace_mul(&g_uut); // tr(V₀V₀ᵀU₀U₀ᵀ)
    expr += -2.0 * e.trace_mul(&e); // tr(V₀U₀ᵀV₀U₀ᵀ)
    expr += 6.0 * ee.trace_mul(&p); // tr(V₀U₀ᵀV₀U₀ᵀ·aa⁺)
    expr += -3.0 * pe.dot(&e); // tr(V₀U₀ᵀU₀V₀ᵀ·aa⁺)
    expr += -3.0 * e.dot(&ep); // tr(U₀V₀ᵀV₀U₀ᵀ·aa⁺)
    expr += -m * v0.dot(&v0) * u0.dot(&u0);
    expr += m * u0.dot(&v0) * u0.dot(&v0);

    expr * a.sqrt_det_gram() / 4.0
}

/// Sectional curvature for `m = 1` via the nonnegative closed form
/// `K = ¾‖a‖⁻²(‖u₀‖²‖v₀‖² − ⟨u₀,v₀⟩²)` on the traceless parts.
pub fn sectional_m1(a: &FrameMatrix, u: &TangentMatrix, v: &TangentMatrix) -> Result<f64> {
    if a.m() != 1 {
        return Err(Error::WrongDimension);
    }
    let (u1, v1) = a.orthonormalize_pair(u, v)?;
    let (u0, _) = a.traceless_split(&u1);
    let (v0, _) = a.traceless_split(&v1);
    let nu = a.metric(&u0, &u0);
    let nv = a.metric(&v0, &v0);
    let uv = a.metric(&u0, &v0);
    // ‖a‖²_a = √(aᵀa) when m = 1.
    Ok(0.75 / a.sqrt_det_gram() * (nu * nv - uv * uv))
}

/// One reproducible scan draw: `kappa` is a pure function of
/// `(m, n, base_seed, index)` regardless of how scans schedule work.
#[derive(Clone, Debug)]
pub struct CurvatureSample {
    pub m: usize,
    pub n: usize,
    pub kappa: f64,
    pub base_seed: Seed,
    pub index: u64,
    /// Draws rejected (rank failure or degenerate plane) before this sample.
    pub redraws: u64,
}

/// Draws sample `index` of a scan: `a`, `u`, `v` with i.i.d. standard-normal
/// entries (rejected draws are redrawn from the same stream), metric
/// Gram–Schmidt, then the sectional curvature.
pub fn curvature_sample(m: usize, n: usize, base_seed: Seed, index: u64) -> CurvatureSample {
    let mut rng = base_seed.derive(index).rng();
    let mut redraws = 0u64;
    loop {
        let a = match FrameMatrix::new(gaussian_from_rng(n, m, &mut rng)) {
            Ok(a) => a,
            Err(_) => {
                redraws += 1;
                continue;
            }
        };
        let u = TangentMatrix::new(gaussian_from_rng(n, m, &mut rng));
        let v = TangentMatrix::new(gaussian_from_rng(n, m, &mut rng));
        match sectional_traceless(&a, &u, &v) {
            Ok(kappa) => {
                return CurvatureSample {
                    m,
                    n,
                    kappa,
                    base_seed,
                    index,
                    redraws,
                }
            }
            Err(_) => {
                redraws += 1;
                continue;
            }
        }
    }
}

/// Histogram of sectional-curvature samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    bin_edges: Vec<f64>,
    counts: Vec<u64>,
    positive_fraction: f64,
    samples: u64,
    redraws: u64,
}

impl Histogram {
    /// Bins samples over their observed range into `bins` uniform bins.
    pub fn from_kappas(kappas: &[f64], bins: usize, redraws: u64) -> Self {
        assert!(bins >= 1 && !kappas.is_empty());
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut positive = 0u64;
        for &k in kappas {
            lo = lo.min(k);
            hi = hi.max(k);
            if k > 0.0 {
                positive += 1;
            }
        }
        if lo == hi {
            lo -= 0.5;
            hi += 0.5;
        }
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0u64; bins];
        for &k in kappas {
            let idx = (((k - lo) / width) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
        Histogram {
            bin_edges: edges,
            counts,
            positive_fraction: positive as f64 / kappas.len() as f64,
            samples: kappas.len() as u64,
            redraws,
        }
    }

    /// Bin boundaries, `bins + 1` increasing values.
    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Fraction of samples with strictly positive curvature.
    pub fn positive_fraction(&self) -> f64 {
        self.positive_fraction
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    /// Total rejected draws across all samples.
    pub fn redraws(&self) -> u64 {
        self.redraws
    }
}

/// Monte-Carlo scan of sectional-curvature signs at `(m, n)`.
///
/// Deterministic per seed and independent of the worker count: sample `i`
/// derives its own stream from `(seed, i)`.
pub fn curvature_scan(
    m: usize,
    n: usize,
    samples: u64,
    bins: usize,
    seed: Seed,
) -> Result<Histogram> {
    if m < 1 || m > n {
        return Err(Error::WrongDimension);
    }
    if samples < 1 || bins < 1 {
        return Err(Error::WrongDimension);
    }
    let (kappas, redraws) = scan_kappas(m, n, samples, seed);
    Ok(Histogram::from_kappas(&kappas, bins, redraws))
}

#[cfg(feature = "parallel")]
fn scan_kappas(m: usize, n: usize, samples: u64, seed: Seed) -> (Vec<f64>, u64) {
    use rayon::prelude::*;
    let results: Vec<(f64, u64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = curvature_sample(m, n, seed, i);
            (s.kappa, s.redraws)
        })
        .collect();
    let redraws = results.iter().map(|r| r.1).sum();
    (results.into_iter().map(|r| r.0).collect(), redraws)
}

#[cfg(not(feature = "parallel"))]
fn scan_kappas(m: usize, n: usize, samples: u64, seed: Seed) -> (Vec<f64>, u64) {
    let mut kappas = Vec::with_capacity(samples as usize);
    let mut redraws = 0u64;
    for i in 0..samples {
        let s = curvature_sample(m, n, seed, i);
        kappas.push(s.kappa);
        redraws += s.redraws;
    }
    (kappas, redraws)
}
