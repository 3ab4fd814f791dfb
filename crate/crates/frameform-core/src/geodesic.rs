//! The geodesic equation on the space of full-rank frames, its closed-form
//! solution, the τ/δ reduction, blow-up classification, an independent RK4
//! integrator, path functionals, and a shooting boundary-value solver.
//!
//! Closed form: with `L₀ = u₀a₀⁺`, `τ₀ = tr L₀`, `δ₀ = tr(L₀ᵀL₀)`,
//! `ω₀ = L₀ᵀ − L₀` and `P₀ = (a₀ᵀa₀)⁻¹(u₀ᵀa₀) − (τ₀/m)I`,
//!
//! ```text
//! a(t) = f(t)^{1/m} · e^{-s(t)ω₀} · a₀ · e^{s(t)P₀},
//! f(t) = (m·δ₀/4)t² + τ₀t + 1,   s(t) = ∫₀ᵗ dσ/f(σ).
//! ```
//!
//! The geodesic exists for all t ≥ 0 unless `u₀ = c·a₀` with `c < 0`, in
//! which case the frame collapses to the zero matrix at `T = 2/(|c|m)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flt;
use crate::frame::{FrameMatrix, TangentMatrix};
use crate::matrix::RealMatrix;
use crate::RANK_RTOL;

/// Tolerance for classifying `u₀` as a scalar multiple of `a₀`.
const PARALLEL_RTOL: f64 = 1e-10;

/// Below this `eps`, `s(t)` switches from the arctangent closed form to
/// composite Gauss–Legendre quadrature of `1/f`.
const EPS_DEGENERATE: f64 = 1e-8;

/// Closed-form solution data of the geodesic initial value problem.
#[derive(Clone, Debug)]
pub struct GeodesicSolution {
    a0: FrameMatrix,
    u0: TangentMatrix,
    tau0: f64,
    delta0: f64,
    eps: f64,
    omega0: RealMatrix,
    p0: RealMatrix,
    blowup: Option<f64>,
}

/// Solves the geodesic initial value problem in closed form.
pub fn solve_ivp(a0: &FrameMatrix, u0: &TangentMatrix) -> Result<GeodesicSolution> {
    GeodesicSolution::new(a0.clone(), u0.clone())
}

impl GeodesicSolution {
    pub fn new(a0: FrameMatrix, u0: TangentMatrix) -> Result<Self> {
        if !u0.mat().same_shape(a0.mat()) {
            return Err(Error::ShapeMismatch);
        }
        let m = a0.m() as f64;
        let n = a0.n();

        // Scaling initial data gets exact constants: the closed form then
        // reduces to a(t) = (1 + cmt/2)^{2/m} a₀.
        let base_sq = a0.mat().dot(a0.mat());
        let c = u0.mat().dot(a0.mat()) / base_sq;
        let off_ray = u0.mat() - &a0.mat().scale(c);
        if off_ray.frob_norm() <= PARALLEL_RTOL * u0.mat().frob_norm() {
            let blowup = if c < 0.0 { Some(2.0 / (-c * m)) } else { None };
            return Ok(Self {
                u0,
                tau0: c * m,
                delta0: c * c * m,
                eps: 0.0,
                omega0: RealMatrix::zeros(n, n),
                p0: RealMatrix::zeros(a0.m(), a0.m()),
                blowup,
                a0,
            });
        }

        let l0 = u0.mat() * a0.pinv();
        let tau0 = l0.trace();
        let delta0 = l0.dot(&l0);
        // Cauchy–Schwarz gate: τ₀² ≤ m·δ₀, equality only on the scaling ray.
        assert!(
            tau0 * tau0 <= m * delta0 * (1.0 + 1e-12),
            "Cauchy-Schwarz violation: tau0^2 = {} > m*delta0 = {}",
            tau0 * tau0,
            m * delta0
        );
        let eps = flt::sqrt((m * delta0 - tau0 * tau0).max(0.0));
        let omega0 = &l0.transpose() - &l0;
        let p0 = {
            let ua = &u0.mat().transpose() * a0.mat();
            let mut p = a0.gram_inv() * &ua;
            let shift = tau0 / m;
            for i in 0..p.rows() {
                p[(i, i)] -= shift;
            }
            p
        };
        // eps > 0 ⇒ f never vanishes ⇒ no finite blow-up. eps = 0 without the
        // parallel detection firing is a floating-point corner; classify by
        // the sign of c = τ₀/m like the exact parallel case.
        let blowup = if eps == 0.0 && tau0 < 0.0 {
            Some(-2.0 / tau0)
        } else {
            None
        };
        Ok(Self {
            a0,
            u0,
            tau0,
            delta0,
            eps,
            omega0,
            p0,
            blowup,
        })
    }

    pub fn a0(&self) -> &FrameMatrix {
        &self.a0
    }

    pub fn u0(&self) -> &TangentMatrix {
        &self.u0
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    /// `√(m·δ₀ − τ₀²)`; zero exactly on the scaling ray.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn omega0(&self) -> &RealMatrix {
        &self.omega0
    }

    pub fn p0(&self) -> &RealMatrix {
        &self.p0
    }

    /// Finite blow-up time `2/(|c|m)`, present iff `u₀ = c·a₀` with `c < 0`.
    pub fn blowup(&self) -> Option<f64> {
        self.blowup
    }

    /// `f(t) = (m·δ₀/4)t² + τ₀t + 1`.
    pub fn f(&self, t: f64) -> f64 {
        let m = self.a0.m() as f64;
        (m * self.delta0 / 4.0) * t * t + self.tau0 * t + 1.0
    }

    fn f_prime(&self, t: f64) -> f64 {
        let m = self.a0.m() as f64;
        (m * self.delta0 / 2.0) * t + self.tau0
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::OutOfDomain { t });
        }
        if let Some(blowup) = self.blowup {
            if t >= blowup {
                return Err(Error::BeyondBlowup { t, blowup });
            }
        }
        Ok(())
    }

    /// `s(t) = ∫₀ᵗ dσ/f(σ)` in closed form.
    ///
    /// For eps > 0 the antiderivative is `(2/eps)·arctan(eps·σ/(2+τ₀σ))`
    /// continued across the sign change of `2+τ₀σ`; `atan2` realizes exactly
    /// that continuation, so `s` is smooth and increasing with no branch
    /// overflow. On the scaling ray `s(t) = 2t/(2+τ₀t)`.
    pub fn s(&self, t: f64) -> f64 {
        if self.eps >= EPS_DEGENERATE {
            (2.0 / self.eps) * flt::atan2(self.eps * t, 2.0 + self.tau0 * t)
        } else if self.eps > 0.0 {
            // Near-degenerate band: the arctangent argument underflows the
            // quadratic structure of f; integrate 1/f by composite 5-point
            // Gauss-Legendre instead.
            gauss_legendre_5_composite(|x| 1.0 / self.f(x), 0.0, t, 16)
        } else {
            2.0 * t / (2.0 + self.tau0 * t)
        }
    }

    /// Evaluates the geodesic and its velocity at time `t`.
    pub fn eval(&self, t: f64) -> Result<(FrameMatrix, TangentMatrix)> {
        self.check_domain(t)?;
        if t == 0.0 {
            return Ok((self.a0.clone(), self.u0.clone()));
        }
        let m = self.a0.m() as f64;
        let f = self.f(t);
        let s = self.s(t);
        let rot = self.omega0.scale(-s).expm();
        let twist = self.p0.scale(s).expm();
        let core = &(&rot * self.a0.mat()) * &twist;
        let mat = core.scale(flt::powf(f, 1.0 / m));
        // a_t(t) = f^{1/m-1} e^{-sω₀} ((f'/m)a₀ − ω₀a₀ + a₀P₀) e^{sP₀}
        let inner = &(&self.a0.mat().scale(self.f_prime(t) / m) - &(&self.omega0 * self.a0.mat()))
            + &(self.a0.mat() * &self.p0);
        let vel = (&(&rot * &inner) * &twist).scale(flt::powf(f, 1.0 / m - 1.0));
        let frame = FrameMatrix::new(mat)?;
        Ok((frame, TangentMatrix::new(vel)))
    }

    /// The reduced invariants `(τ(t), δ(t)) = (f'(t)/f(t), δ₀/f(t))`.
    pub fn tau_delta(&self, t: f64) -> Result<(f64, f64)> {
        self.check_domain(t)?;
        let f = self.f(t);
        Ok((self.f_prime(t) / f, self.delta0 / f))
    }
}

/// Composite 5-point Gauss–Legendre quadrature.
fn gauss_legendre_5_composite(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const NODES: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.236_926_885_056_189,
        0.478_628_670_499_366,
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
    ];
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        for (x, w) in NODES.iter().zip(WEIGHTS.iter()) {
            total += w * f(mid + half * x);
        }
    }
    total * 0.5 * (b - a) / panels as f64
}

/// The right-hand side of the second-order geodesic equation,
/// `a_tt = a_t(aᵀa)⁻¹a_tᵀa + a_t a⁺ a_t − (a⁺)ᵀ a_tᵀ a_t
///        + ½tr(a_t(aᵀa)⁻¹a_tᵀ)a − tr(a_t a⁺)a_t`.
pub fn geodesic_rhs(a: &FrameMatrix, at: &TangentMatrix) -> TangentMatrix {
    assert!(
        at.mat().same_shape(a.mat()),
        "velocity shape does not match base frame"
    );
    let w = at.mat() * a.gram_inv();
    let t1 = &w * &(&at.mat().transpose() * a.mat());
    let t2 = at.mat() * &(a.pinv() * at.mat());
    let t3 = &a.pinv().transpose() * &(&at.mat().transpose() * at.mat());
    let t4 = a.mat().scale(0.5 * w.dot(at.mat()));
    let t5 = at.mat().scale(at.mat().trace_mul(a.pinv()));
    TangentMatrix::new(&(&(&(&t1 + &t2) - &t3) + &t4) - &t5)
}

/// A sampled curve of frames with velocities, for quadrature and comparison.
#[derive(Clone, Debug)]
pub struct MatrixPath {
    times: Vec<f64>,
    frames: Vec<FrameMatrix>,
    velocities: Vec<TangentMatrix>,
}

impl MatrixPath {
    pub fn new(
        times: Vec<f64>,
        frames: Vec<FrameMatrix>,
        velocities: Vec<TangentMatrix>,
    ) -> Result<Self> {
        if times.is_empty() || times.len() != frames.len() || times.len() != velocities.len() {
            return Err(Error::ShapeMismatch);
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::NotMonotone);
        }
        Ok(Self {
            times,
            frames,
            velocities,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn frames(&self) -> &[FrameMatrix] {
        &self.frames
    }

    pub fn velocities(&self) -> &[TangentMatrix] {
        &self.velocities
    }
}

/// Failure modes of the numeric integrator.
#[derive(Clone, Debug)]
pub enum IntegrateError {
    /// The path hit the rank tolerance at time `t`; the accepted prefix is
    /// returned so callers can inspect how far the integration got.
    RankLoss { t: f64, partial: MatrixPath },
    Invalid(Error),
}

impl core::fmt::Display for IntegrateError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            IntegrateError::RankLoss { t, .. } => {
                write!(f, "rank tolerance hit at t = {t}")
            }
            IntegrateError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for IntegrateError {}

/// Classical 4th-order integration of the geodesic equation as a first-order
/// system, used as an oracle independent of the closed form.
///
/// Full rank is monitored at every accepted state and every internal stage.
/// Because the rank tolerance is relative (scale-invariant) it cannot see a
/// uniform collapse toward the zero matrix, so states are additionally
/// checked against the running maximum singular value of the accepted path.
pub fn integrate_numeric(
    a0: &FrameMatrix,
    u0: &TangentMatrix,
    t_end: f64,
    steps: usize,
) -> core::result::Result<MatrixPath, IntegrateError> {
    if !u0.mat().same_shape(a0.mat()) {
        return Err(IntegrateError::Invalid(Error::ShapeMismatch));
    }
    if !(t_end > 0.0) || steps == 0 {
        return Err(IntegrateError::Invalid(Error::OutOfDomain { t: t_end }));
    }
    let dim = a0.n().max(a0.m()) as f64;
    let mut sigma_ref = a0.sigma_max();
    let check = |mat: RealMatrix, sigma_ref: f64| -> Option<FrameMatrix> {
        let frame = FrameMatrix::new(mat).ok()?;
        if frame.sigma_min() <= RANK_RTOL * dim * sigma_ref {
            return None;
        }
        Some(frame)
    };

    let h = t_end / steps as f64;
    let mut times = vec![0.0];
    let mut frames = vec![a0.clone()];
    let mut vels = vec![u0.clone()];
    let mut a = a0.mat().clone();
    let mut v = u0.mat().clone();

    for k in 0..steps {
        let t_next = if k + 1 == steps {
            t_end
        } else {
            (k + 1) as f64 * h
        };
        let rank_loss = |times: &[f64], frames: &[FrameMatrix], vels: &[TangentMatrix]| {
            IntegrateError::RankLoss {
                t: t_next,
                partial: MatrixPath::new(times.to_vec(), frames.to_vec(), vels.to_vec())
                    .expect("accepted path prefix is well-formed"),
            }
        };
        let stage = |mat: &RealMatrix, vel: &RealMatrix| -> Option<RealMatrix> {
            let frame = check(mat.clone(), sigma_ref)?;
            Some(geodesic_rhs(&frame, &TangentMatrix::new(vel.clone())).into_matrix())
        };

        let k1v = match stage(&a, &v) {
            Some(r) => r,
            None => return Err(rank_loss(&times, &frames, &vels)),
        };
        let a2 = &a + &v.scale(0.5 * h);
        let v2 = &v + &k1v.scale(0.5 * h);
        let k2v = match stage(&a2, &v2) {
            Some(r) => r,
            None => return Err(rank_loss(&times, &frames, &vels)),
        };
        let a3 = &a + &v2.scale(0.5 * h);
        let v3 = &v + &k2v.scale(0.5 * h);
        let k3v = match stage(&a3, &v3) {
            Some(r) => r,
            None => return Err(rank_loss(&times, &frames, &vels)),
        };
        let a4 = &a + &v3.scale(h);
        let v4 = &v + &k3v.scale(h);
        let k4v = match stage(&a4, &v4) {
            Some(r) => r,
            None => return Err(rank_loss(&times, &frames, &vels)),
        };

        let da = &(&(&v + &v2.scale(2.0)) + &(&v3.scale(2.0) + &v4)) * (h / 6.0);
        let dv = &(&(&k1v + &k2v.scale(2.0)) + &(&k3v.scale(2.0) + &k4v)) * (h / 6.0);
        a = &a + &da;
        v = &v + &dv;

        match check(a.clone(), sigma_ref) {
            Some(frame) => {
                sigma_ref = sigma_ref.max(frame.sigma_max());
                times.push(t_next);
                frames.push(frame);
                vels.push(TangentMatrix::new(v.clone()));
            }
            None => return Err(rank_loss(&times, &frames, &vels)),
        }
    }
    Ok(MatrixPath::new(times, frames, vels).expect("constructed path is well-formed"))
}

/// Trapezoidal energy `∫ ‖a_t‖²_a dt` of a sampled path.
pub fn path_energy(path: &MatrixPath) -> f64 {
    trapezoid(path, |a, v| a.metric(v, v))
}

/// Trapezoidal length `∫ ‖a_t‖_a dt` of a sampled path.
pub fn path_length(path: &MatrixPath) -> f64 {
    trapezoid(path, |a, v| a.norm(v))
}

fn trapezoid(path: &MatrixPath, integrand: impl Fn(&FrameMatrix, &TangentMatrix) -> f64) -> f64 {
    let vals: Vec<f64> = path
        .frames()
        .iter()
        .zip(path.velocities().iter())
        .map(|(a, v)| integrand(a, v))
        .collect();
    let mut acc = 0.0;
    for i in 1..vals.len() {
        acc += 0.5 * (vals[i - 1] + vals[i]) * (path.times()[i] - path.times()[i - 1]);
    }
    acc
}

/// Result of the shooting solver: initial velocity, endpoint residual in
/// Frobenius norm, and iterations used.
#[derive(Clone, Debug)]
pub struct Shot {
    pub u0: TangentMatrix,
    pub residual: f64,
    pub iterations: usize,
}

/// Failure modes of the shooting solver.
#[derive(Clone, Debug)]
pub enum ShootError {
    /// Iteration budget exhausted or the step search stalled; carries the
    /// best iterate so callers can restart from fresh guesses.
    NoConvergence(Shot),
    Invalid(Error),
}

impl core::fmt::Display for ShootError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ShootError::NoConvergence(s) => {
                write!(f, "shooting did not converge (residual {})", s.residual)
            }
            ShootError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ShootError {}

/// Endpoint of the unit-time geodesic from `a0` with velocity `u`, if it
/// exists (no blow-up in `[0,1]` and full rank at the endpoint).
fn unit_time_endpoint(a0: &FrameMatrix, u: &RealMatrix) -> Option<RealMatrix> {
    let sol = GeodesicSolution::new(a0.clone(), TangentMatrix::new(u.clone())).ok()?;
    if let Some(blowup) = sol.blowup() {
        if blowup <= 1.0 {
            return None;
        }
    }
    let (frame, _) = sol.eval(1.0).ok()?;
    Some(frame.mat().clone())
}

/// Damped Gauss–Newton on the endpoint map `u₀ ↦ a(1) − a₁` with a
/// finite-difference Jacobian, starting from `u₀ = a₁ − a₀`.
///
/// The endpoint map is not globally convex; when this stalls, restart from a
/// different guess via [`shoot_bvp_from`] (a horizontal lift of the Gram
/// difference, `½(a₀⁺)ᵀ(a₁ᵀa₁ − a₀ᵀa₀)`, is often a good second try).
pub fn shoot_bvp(
    a0: &FrameMatrix,
    a1: &FrameMatrix,
    max_iter: usize,
    tol: f64,
) -> core::result::Result<Shot, ShootError> {
    shoot_bvp_from(a0, a1, &TangentMatrix::new(a1.mat() - a0.mat()), max_iter, tol)
}

/// [`shoot_bvp`] with a caller-supplied initial velocity guess.
pub fn shoot_bvp_from(
    a0: &FrameMatrix,
    a1: &FrameMatrix,
    init: &TangentMatrix,
    max_iter: usize,
    tol: f64,
) -> core::result::Result<Shot, ShootError> {
    if !a1.mat().same_shape(a0.mat()) || !init.mat().same_shape(a0.mat()) {
        return Err(ShootError::Invalid(Error::ShapeMismatch));
    }
    let n = a0.n();
    let m = a0.m();
    let dim = n * m;

    let mut u = init.mat().clone();
    let mut end = unit_time_endpoint(a0, &u);
    for _ in 0..60 {
        if end.is_some() {
            break;
        }
        u = u.scale(0.5);
        end = unit_time_endpoint(a0, &u);
    }
    let mut end = match end {
        Some(e) => e,
        None => {
            return Err(ShootError::NoConvergence(Shot {
                u0: TangentMatrix::new(u),
                residual: f64::INFINITY,
                iterations: 0,
            }))
        }
    };
    let mut residual = (&end - a1.mat()).frob_norm();

    for iter in 0..max_iter {
        if residual <= tol {
            return Ok(Shot {
                u0: TangentMatrix::new(u),
                residual,
                iterations: iter,
            });
        }

        // Finite-difference Jacobian of the endpoint map, column per entry.
        let fd = 1e-7 * (1.0 + u.frob_norm());
        let mut jac = RealMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut up = u.clone();
            let (i, j) = (col / m, col % m);
            up[(i, j)] += fd;
            let (probe, step) = match unit_time_endpoint(a0, &up) {
                Some(e) => (e, fd),
                None => {
                    let mut um = u.clone();
                    um[(i, j)] -= fd;
                    match unit_time_endpoint(a0, &um) {
                        Some(e) => (e, -fd),
                        None => continue,
                    }
                }
            };
            let diff = &probe - &end;
            for row in 0..dim {
                jac[(row, col)] = diff.data()[row] / step;
            }
        }

        // Normal equations (JᵀJ + μI)δ = −JᵀF, with a tiny ridge fallback.
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let resid_vec = &end - a1.mat();
        let mut rhs = vec![0.0; dim];
        for r in 0..dim {
            let mut acc = 0.0;
            for c in 0..dim {
                acc += jt[(r, c)] * resid_vec.data()[c];
            }
            rhs[r] = -acc;
        }
        let mut mu = 0.0;
        let delta = loop {
            let mut lhs = jtj.clone();
            if mu > 0.0 {
                for i in 0..dim {
                    lhs[(i, i)] += mu;
                }
            }
            if let Some(d) = solve_linear(&lhs, &rhs) {
                break Some(d);
            }
            mu = if mu == 0.0 {
                1e-12 * (jtj.trace() / dim as f64).max(1e-300)
            } else {
                mu * 100.0
            };
            if mu > 1e6 {
                break None;
            }
        };
        let delta = match delta {
            Some(d) => RealMatrix::new(n, m, d).map_err(ShootError::Invalid)?,
            None => {
                return Err(ShootError::NoConvergence(Shot {
                    u0: TangentMatrix::new(u),
                    residual,
                    iterations: iter,
                }))
            }
        };

        // Step halving until the residual actually decreases.
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial = &u + &delta.scale(alpha);
            if let Some(e) = unit_time_endpoint(a0, &trial) {
                let r = (&e - a1.mat()).frob_norm();
                if r < residual {
                    u = trial;
                    end = e;
                    residual = r;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Err(ShootError::NoConvergence(Shot {
                u0: TangentMatrix::new(u),
                residual,
                iterations: iter,
            }));
        }
    }

    if residual <= tol {
        Ok(Shot {
            u0: TangentMatrix::new(u),
            residual,
            iterations: max_iter,
        })
    } else {
        Err(ShootError::NoConvergence(Shot {
            u0: TangentMatrix::new(u),
            residual,
            iterations: max_iter,
        }))
    }
}

/// [`shoot_bvp`] with a deterministic ladder of restart guesses: the direct
/// difference, the horizontal lift of the Gram difference, and rescaled
/// differences. Returns the first convergent shot, or the best iterate seen.
pub fn shoot_bvp_multistart(
    a0: &FrameMatrix,
    a1: &FrameMatrix,
    max_iter: usize,
    tol: f64,
) -> core::result::Result<Shot, ShootError> {
    let diff = a1.mat() - a0.mat();
    let gram_diff = a1.gram() - a0.gram();
    let lift = (&a0.pinv().transpose() * &gram_diff).scale(0.5);
    let guesses = [
        diff.clone(),
        lift,
        diff.scale(0.5),
        diff.scale(2.0),
    ];
    let mut best: Option<Shot> = None;
    for guess in guesses {
        match shoot_bvp_from(a0, a1, &TangentMatrix::new(guess), max_iter, tol) {
            Ok(shot) => return Ok(shot),
            Err(ShootError::NoConvergence(shot)) => {
                if best
                    .as_ref()
                    .map(|b| shot.residual < b.residual)
                    .unwrap_or(true)
                {
                    best = Some(shot);
                }
            }
            Err(e) => return Err(e),
        }
    }
    Err(ShootError::NoConvergence(best.expect("at least one attempt ran")))
}

/// Solves `A x = b` by partial-pivot LU; `None` when a pivot vanishes.
fn solve_linear(a: &RealMatrix, b: &[f64]) -> Option<Vec<f64>> {
    let k = a.rows();
    debug_assert!(a.is_square() && b.len() == k);
    let mut lu: Vec<f64> = a.data().to_vec();
    let mut x: Vec<f64> = b.to_vec();
    for col in 0..k {
        let mut piv = col;
        let mut best = flt::abs(lu[col * k + col]);
        for r in (col + 1)..k {
            let v = flt::abs(lu[r * k + col]);
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best <= 1e-300 {
            return None;
        }
        if piv != col {
            for j in 0..k {
                lu.swap(col * k + j, piv * k + j);
            }
            x.swap(col, piv);
        }
        let d = lu[col * k + col];
        for r in (col + 1)..k {
            let f = lu[r * k + col] / d;
            if f == 0.0 {
                continue;
            }
            for j in col..k {
                lu[r * k + j] -= f * lu[col * k + j];
            }
            x[r] -= f * x[col];
        }
    }
    for r in (0..k).rev() {
        let mut acc = x[r];
        for j in (r + 1)..k {
            acc -= lu[r * k + j] * x[j];
        }
        x[r] = acc / lu[r * k + r];
    }
    Some(x)
}
