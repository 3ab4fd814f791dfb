//! Points and tangent vectors of the space of full-rank `n×m` frames, the
//! scale-invariant metric `⟨u,v⟩_a = tr(u(aᵀa)⁻¹vᵀ)·√det(aᵀa)`, its square
//! reformulation `U = ua⁺`, the traceless/pure-trace splitting, metric
//! Gram–Schmidt, and the volume × unimodular product decomposition.

use crate::error::{Error, Result};
use crate::flt;
use crate::matrix::{spd_inverse_det, RealMatrix};

/// A point `a` of the space of full-rank `n×m` matrices, with the Gram data
/// every metric and curvature evaluation reuses cached at construction.
#[derive(Clone, Debug)]
pub struct FrameMatrix {
    mat: RealMatrix,
    gram: RealMatrix,
    gram_inv: RealMatrix,
    pinv: RealMatrix,
    sqrt_det_gram: f64,
    sigma_min: f64,
    sigma_max: f64,
}

impl FrameMatrix {
    /// Validates the full-rank tolerance and caches `aᵀa`, `(aᵀa)⁻¹`, `a⁺`
    /// and `√det(aᵀa)`.
    pub fn new(mat: RealMatrix) -> Result<Self> {
        if mat.rows() < mat.cols() {
            return Err(Error::WrongDimension);
        }
        let gram = &mat.transpose() * &mat;
        let (gram_inv, det, ok) = spd_inverse_det(&gram, mat.rows().max(mat.cols()));
        if !ok {
            return Err(Error::RankDeficient);
        }
        let (smin, smax) = {
            let (ev, _) = gram.sym_eigen();
            (
                flt::sqrt(ev[0].max(0.0)),
                flt::sqrt(ev[ev.len() - 1].max(0.0)),
            )
        };
        let pinv = &gram_inv * &mat.transpose();
        Ok(Self {
            mat,
            gram,
            gram_inv,
            pinv,
            sqrt_det_gram: flt::sqrt(det),
            sigma_min: smin,
            sigma_max: smax,
        })
    }

    pub fn mat(&self) -> &RealMatrix {
        &self.mat
    }

    /// Ambient dimension `n` (rows).
    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    /// Rank / column count `m`.
    pub fn m(&self) -> usize {
        self.mat.cols()
    }

    /// `aᵀa`.
    pub fn gram(&self) -> &RealMatrix {
        &self.gram
    }

    /// `(aᵀa)⁻¹`.
    pub fn gram_inv(&self) -> &RealMatrix {
        &self.gram_inv
    }

    /// Moore–Penrose pseudoinverse `a⁺ = (aᵀa)⁻¹aᵀ`.
    pub fn pinv(&self) -> &RealMatrix {
        &self.pinv
    }

    /// `√det(aᵀa)`.
    pub fn sqrt_det_gram(&self) -> f64 {
        self.sqrt_det_gram
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma_max
    }

    /// `λ·a` as a frame (fails only when `λ` is zero or non-finite).
    pub fn scaled(&self, lambda: f64) -> Result<FrameMatrix> {
        FrameMatrix::new(self.mat.scale(lambda))
    }

    /// The metric `⟨u,v⟩_a = tr(u(aᵀa)⁻¹vᵀ)·√det(aᵀa)`.
    ///
    /// Panics on conformality violations; shapes are a programming error at
    /// this level (public entry points validate them).
    pub fn metric(&self, u: &TangentMatrix, v: &TangentMatrix) -> f64 {
        assert!(
            u.mat().same_shape(&self.mat) && v.mat().same_shape(&self.mat),
            "tangent shape does not match base frame"
        );
        let x = u.mat() * &self.gram_inv;
        x.dot(v.mat()) * self.sqrt_det_gram
    }

    /// Metric norm `‖u‖_a`.
    pub fn norm(&self, u: &TangentMatrix) -> f64 {
        flt::sqrt(self.metric(u, u).max(0.0))
    }

    /// Square-matrix form `U = u·a⁺`, with `metric(u,v) = tr(UVᵀ)·√det(aᵀa)`.
    pub fn to_square(&self, u: &TangentMatrix) -> RealMatrix {
        u.mat() * &self.pinv
    }

    /// Splits `u = u₀ + c·a` with `c = tr(ua⁺)/m` and `tr(u₀a⁺) = 0`;
    /// the two parts are orthogonal in the metric.
    pub fn traceless_split(&self, u: &TangentMatrix) -> (TangentMatrix, f64) {
        let c = u.mat().trace_mul(&self.pinv) / self.m() as f64;
        let u0 = u.mat() - &self.mat.scale(c);
        (TangentMatrix::new(u0), c)
    }

    /// Gram–Schmidt in the metric inner product: normalizes `u` first, then
    /// projects and normalizes `v`, so curvature scans are reproducible.
    pub fn orthonormalize_pair(
        &self,
        u: &TangentMatrix,
        v: &TangentMatrix,
    ) -> Result<(TangentMatrix, TangentMatrix)> {
        let guu = self.metric(u, u);
        let gvv = self.metric(v, v);
        let guv = self.metric(u, v);
        let gram_det = guu * gvv - guv * guv;
        if !(gram_det > 1e-12 * guu * gvv) || guu <= 0.0 || gvv <= 0.0 {
            return Err(Error::DegeneratePlane);
        }
        let su = 1.0 / flt::sqrt(guu);
        let u1 = TangentMatrix::new(u.mat().scale(su));
        let w = v.mat() - &u.mat().scale(guv / guu);
        let w = TangentMatrix::new(w);
        let gww = self.metric(&w, &w);
        if !(gww > 0.0) {
            return Err(Error::DegeneratePlane);
        }
        let v1 = TangentMatrix::new(w.mat().scale(1.0 / flt::sqrt(gww)));
        Ok((u1, v1))
    }

    /// Decomposes into the volume density `ρ = √det(aᵀa)` and the unimodular
    /// frame `β = ρ^{-1/m}·a` with `det(βᵀβ) = 1`.
    pub fn product_decompose(&self) -> ProductPoint {
        let rho = self.sqrt_det_gram;
        let beta = self
            .scaled(flt::powf(rho, -1.0 / self.m() as f64))
            .expect("unimodular rescaling preserves full rank");
        ProductPoint {
            rho,
            beta,
            renormalized: false,
        }
    }
}

/// A tangent vector `u ∈ T_a M₊(n,m)`, i.e. an arbitrary real `n×m` matrix,
/// attached to a base frame by context.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentMatrix {
    mat: RealMatrix,
}

impl TangentMatrix {
    pub fn new(mat: RealMatrix) -> Self {
        Self { mat }
    }

    pub fn mat(&self) -> &RealMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.mat
    }

    pub fn zeros_like(a: &FrameMatrix) -> Self {
        Self::new(RealMatrix::zeros(a.n(), a.m()))
    }
}

impl From<RealMatrix> for TangentMatrix {
    fn from(mat: RealMatrix) -> Self {
        Self::new(mat)
    }
}

/// A point of the volume × unimodular decomposition `a ↔ (ρ, β)`, with
/// `ρ = √det(aᵀa) > 0` and `det(βᵀβ) = 1`.
#[derive(Clone, Debug)]
pub struct ProductPoint {
    rho: f64,
    beta: FrameMatrix,
    renormalized: bool,
}

impl ProductPoint {
    /// Builds a product point. A `beta` whose Gram determinant drifts from 1
    /// beyond 1e-10 relative is renormalized and flagged, not rejected.
    pub fn new(rho: f64, beta: FrameMatrix) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::NotPositive);
        }
        let det = beta.sqrt_det_gram();
        if flt::abs(det - 1.0) <= 1e-10 {
            Ok(Self {
                rho,
                beta,
                renormalized: false,
            })
        } else {
            let fixed = beta.scaled(flt::powf(det, -1.0 / beta.m() as f64))?;
            Ok(Self {
                rho,
                beta: fixed,
                renormalized: true,
            })
        }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn beta(&self) -> &FrameMatrix {
        &self.beta
    }

    /// Whether construction had to renormalize `beta` back to det 1.
    pub fn renormalized(&self) -> bool {
        self.renormalized
    }

    /// Inverse of the decomposition: `a = ρ^{1/m}·β`.
    pub fn compose(&self) -> FrameMatrix {
        self.beta
            .scaled(flt::powf(self.rho, 1.0 / self.beta.m() as f64))
            .expect("positive rescaling preserves full rank")
    }
}

/// The almost-product metric on `(ρ, β)` pairs, pointwise (quadrature weight 1):
/// `tr(h₁(βᵀβ)⁻¹h₂ᵀ)·ρ + (ν₁ν₂)/(m·ρ)`.
///
/// Requires both `hᵢ` to be tangent to the unimodular leaf, `tr(hᵢβ⁺) = 0`.
pub fn product_metric(
    p: &ProductPoint,
    (nu1, h1): (f64, &TangentMatrix),
    (nu2, h2): (f64, &TangentMatrix),
) -> Result<f64> {
    let beta = p.beta();
    for h in [h1, h2] {
        if !h.mat().same_shape(beta.mat()) {
            return Err(Error::ShapeMismatch);
        }
        let tr = h.mat().trace_mul(beta.pinv());
        if flt::abs(tr) > 1e-8 * (1.0 + h.mat().frob_norm()) {
            return Err(Error::NotUnimodularTangent);
        }
    }
    let x = h1.mat() * beta.gram_inv();
    let sym_part = x.dot(h2.mat()) * p.rho();
    let vol_part = nu1 * nu2 / (p.beta().m() as f64 * p.rho());
    Ok(sym_part + vol_part)
}
