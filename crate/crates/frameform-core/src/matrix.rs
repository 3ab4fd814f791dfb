//! Dense small-matrix primitives: pseudoinverse, symmetric square root,
//! matrix exponential, rank diagnostics and seeded Gaussian sampling.
//!
//! Everything here targets tiny dimensions (a handful of rows/columns), so
//! the implementations favor robustness and determinism over asymptotics:
//! partial-pivot LU for determinants, cyclic Jacobi for symmetric
//! eigendecompositions, scaling-and-squaring with a series core for the
//! exponential.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::flt;
use crate::RANK_RTOL;

/// Dense real matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    /// Builds a matrix from row-major data, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::WrongDimension);
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch);
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from rows given as slices (test/CLI convenience).
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::WrongDimension);
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch);
        }
        let data: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius inner product `Σ aᵢⱼ bᵢⱼ = tr(a bᵀ)`.
    pub fn dot(&self, other: &Self) -> f64 {
        assert!(self.same_shape(other), "dot of mismatched shapes");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(x, y)| x * y)
            .sum()
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_mul(&self, other: &Self) -> f64 {
        assert!(
            self.cols == other.rows && self.rows == other.cols,
            "trace_mul shape mismatch"
        );
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += self[(i, j)] * other[(j, i)];
            }
        }
        acc
    }

    pub fn frob_norm(&self) -> f64 {
        flt::sqrt(self.dot(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(flt::abs(*x)))
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert!(self.same_shape(other), "max_abs_diff shape mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .fold(0.0, |m, (x, y)| m.max(flt::abs(x - y)))
    }

    /// Determinant by partial-pivot LU. Square matrices only.
    pub fn det(&self) -> f64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let k = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..k {
            let mut piv = col;
            let mut best = flt::abs(a[col * k + col]);
            for r in (col + 1)..k {
                let v = flt::abs(a[r * k + col]);
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..k {
                    a.swap(col * k + j, piv * k + j);
                }
                det = -det;
            }
            let d = a[col * k + col];
            det *= d;
            for r in (col + 1)..k {
                let factor = a[r * k + col] / d;
                for j in col..k {
                    a[r * k + j] -= factor * a[col * k + j];
                }
            }
        }
        det
    }

    /// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
    ///
    /// Returns eigenvalues in ascending order and the matrix whose columns are
    /// the corresponding orthonormal eigenvectors. The input is symmetrized
    /// first; symmetry validation is left to callers with a tolerance policy.
    pub fn sym_eigen(&self) -> (Vec<f64>, RealMatrix) {
        assert!(self.is_square(), "sym_eigen of a non-square matrix");
        let k = self.rows;
        let mut a = RealMatrix::from_fn(k, k, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]));
        let mut v = RealMatrix::identity(k);
        let scale = a.frob_norm();
        if k > 1 && scale > 0.0 {
            for _sweep in 0..60 {
                let mut off = 0.0;
                for p in 0..k {
                    for q in (p + 1)..k {
                        off += a[(p, q)] * a[(p, q)];
                    }
                }
                if flt::sqrt(2.0 * off) <= 1e-15 * scale {
                    break;
                }
                for p in 0..k {
                    for q in (p + 1)..k {
                        let apq = a[(p, q)];
                        if flt::abs(apq) <= 1e-300 {
                            continue;
                        }
                        let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                        let t = if flt::abs(theta) > 1e150 {
                            0.5 / theta
                        } else {
                            let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                            sign / (flt::abs(theta) + flt::sqrt(theta * theta + 1.0))
                        };
                        let c = 1.0 / flt::sqrt(t * t + 1.0);
                        let s = t * c;
                        let tau = s / (1.0 + c);
                        let app = a[(p, p)];
                        let aqq = a[(q, q)];
                        a[(p, p)] = app - t * apq;
                        a[(q, q)] = aqq + t * apq;
                        a[(p, q)] = 0.0;
                        a[(q, p)] = 0.0;
                        for r in 0..k {
                            if r != p && r != q {
                                let arp = a[(r, p)];
                                let arq = a[(r, q)];
                                a[(r, p)] = arp - s * (arq + tau * arp);
                                a[(p, r)] = a[(r, p)];
                                a[(r, q)] = arq + s * (arp - tau * arq);
                                a[(q, r)] = a[(r, q)];
                            }
                        }
                        for r in 0..k {
                            let vrp = v[(r, p)];
                            let vrq = v[(r, q)];
                            v[(r, p)] = vrp - s * (vrq + tau * vrp);
                            v[(r, q)] = vrq + s * (vrp - tau * vrq);
                        }
                    }
                }
            }
        }
        let mut pairs: Vec<(f64, usize)> = (0..k).map(|i| (a[(i, i)], i)).collect();
        pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite eigenvalues"));
        let eigvals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let eigvecs = RealMatrix::from_fn(k, k, |i, j| v[(i, pairs[j].1)]);
        (eigvals, eigvecs)
    }

    /// Matrix exponential by scaling-and-squaring with a series core.
    ///
    /// The argument is scaled so its infinity norm is at most 1/2, the series
    /// is summed to machine-precision convergence, and the result squared back.
    pub fn expm(&self) -> RealMatrix {
        assert!(self.is_square(), "expm of a non-square matrix");
        let k = self.rows;
        let inf_norm = (0..k)
            .map(|i| (0..k).map(|j| flt::abs(self[(i, j)])).sum::<f64>())
            .fold(0.0_f64, f64::max);
        let squarings = if inf_norm > 0.5 {
            flt::ceil(flt::log2(inf_norm / 0.5)) as u32
        } else {
            0
        };
        let mut shrink = 1.0;
        for _ in 0..squarings {
            shrink *= 0.5;
        }
        let y = self.scale(shrink);
        let mut sum = RealMatrix::identity(k);
        let mut term = RealMatrix::identity(k);
        for j in 1..=40u32 {
            term = &(&term * &y) * (1.0 / j as f64);
            sum = &sum + &term;
            if term.max_abs() <= 1e-18 * sum.max_abs() {
                break;
            }
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    /// Singular value extremes `(σ_min, σ_max)` via the Gram spectrum.
    pub fn singular_extremes(&self) -> (f64, f64) {
        let (small, big) = if self.rows >= self.cols {
            let g = &self.transpose() * self;
            let (ev, _) = g.sym_eigen();
            (ev[0], ev[ev.len() - 1])
        } else {
            let g = self * &self.transpose();
            let (ev, _) = g.sym_eigen();
            (ev[0], ev[ev.len() - 1])
        };
        (flt::sqrt(small.max(0.0)), flt::sqrt(big.max(0.0)))
    }

    /// Whether the matrix passes the full-rank tolerance.
    pub fn is_full_rank(&self) -> bool {
        let (smin, smax) = self.singular_extremes();
        let dim = self.rows.max(self.cols) as f64;
        smin > RANK_RTOL * dim * smax
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &RealMatrix {
    type Output = RealMatrix;
    fn add(self, rhs: &RealMatrix) -> RealMatrix {
        assert!(self.same_shape(rhs), "add shape mismatch");
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(x, y)| x + y)
                .collect(),
        }
    }
}

impl Sub for &RealMatrix {
    type Output = RealMatrix;
    fn sub(self, rhs: &RealMatrix) -> RealMatrix {
        assert!(self.same_shape(rhs), "sub shape mismatch");
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(x, y)| x - y)
                .collect(),
        }
    }
}

impl Neg for &RealMatrix {
    type Output = RealMatrix;
    fn neg(self) -> RealMatrix {
        self.scale(-1.0)
    }
}

impl Mul for &RealMatrix {
    type Output = RealMatrix;
    fn mul(self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!(self.cols, rhs.rows, "mul shape mismatch");
        let mut out = RealMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let x = self[(i, l)];
                if x == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += x * rhs[(l, j)];
                }
            }
        }
        out
    }
}

impl Mul<f64> for &RealMatrix {
    type Output = RealMatrix;
    fn mul(self, rhs: f64) -> RealMatrix {
        self.scale(rhs)
    }
}

/// Moore–Penrose pseudoinverse `a⁺ = (aᵀa)⁻¹aᵀ` of a full-rank `n×m` matrix.
///
/// Fails with [`Error::RankDeficient`] when the smallest singular value is at
/// or below the rank tolerance.
pub fn pseudoinverse(a: &RealMatrix) -> Result<RealMatrix> {
    if a.rows() < a.cols() {
        return Err(Error::WrongDimension);
    }
    let gram = &a.transpose() * a;
    let (gram_inv, _det, ok) = spd_inverse_det(&gram, a.rows().max(a.cols()));
    if !ok {
        return Err(Error::RankDeficient);
    }
    Ok(&gram_inv * &a.transpose())
}

/// Inverse and determinant of an SPD Gram matrix through its spectrum.
///
/// `ok` is false when the spectrum fails the full-rank tolerance with the
/// ambient dimension `dim` (tolerance is applied to singular values √λ).
pub(crate) fn spd_inverse_det(gram: &RealMatrix, dim: usize) -> (RealMatrix, f64, bool) {
    let (ev, q) = gram.sym_eigen();
    let m = gram.rows();
    let smax = flt::sqrt(ev[m - 1].max(0.0));
    let smin = flt::sqrt(ev[0].max(0.0));
    let ok = smin > RANK_RTOL * dim as f64 * smax;
    if !ok {
        return (RealMatrix::zeros(m, m), 0.0, false);
    }
    let mut det = 1.0;
    for &l in &ev {
        det *= l;
    }
    let mut inv = RealMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let mut acc = 0.0;
            for l in 0..m {
                acc += q[(i, l)] * q[(j, l)] / ev[l];
            }
            inv[(i, j)] = acc;
        }
    }
    // Symmetrize away rounding noise.
    for i in 0..m {
        for j in (i + 1)..m {
            let s = 0.5 * (inv[(i, j)] + inv[(j, i)]);
            inv[(i, j)] = s;
            inv[(j, i)] = s;
        }
    }
    (inv, det, true)
}

/// Symmetric positive-definite square root of an SPD matrix.
pub fn sym_sqrt(p: &RealMatrix) -> Result<RealMatrix> {
    if !p.is_square() {
        return Err(Error::ShapeMismatch);
    }
    let asym = p.max_abs_diff(&p.transpose());
    if asym > 1e-12 * (1.0 + p.max_abs()) {
        return Err(Error::NotSpd);
    }
    let (ev, q) = p.sym_eigen();
    let m = p.rows();
    // SPD threshold consistent with the frame rank tolerance applied to the
    // singular values √λ of the underlying frames.
    let smin = flt::sqrt(ev[0].max(0.0));
    let smax = flt::sqrt(ev[m - 1].max(0.0));
    if ev[0] <= 0.0 || smin <= RANK_RTOL * m as f64 * smax {
        return Err(Error::NotSpd);
    }
    let mut s = RealMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let mut acc = 0.0;
            for l in 0..m {
                acc += q[(i, l)] * q[(j, l)] * flt::sqrt(ev[l]);
            }
            s[(i, j)] = acc;
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let v = 0.5 * (s[(i, j)] + s[(j, i)]);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    Ok(s)
}

/// Matrix exponential of a square matrix (always converges for finite input).
pub fn matrix_exp(x: &RealMatrix) -> RealMatrix {
    x.expm()
}

/// Reproducible seed for sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seed(pub u64);

impl Seed {
    /// Derives an independent per-index seed via SplitMix64 mixing, so that
    /// sample `i` of a scan is a pure function of `(base seed, i)` no matter
    /// how samples are distributed over workers.
    pub fn derive(self, index: u64) -> Seed {
        let mut z = self
            .0
            .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed(z ^ (z >> 31))
    }

    pub(crate) fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// `n×m` matrix with i.i.d. standard-normal entries, reproducible per seed.
pub fn sample_gaussian(n: usize, m: usize, seed: Seed) -> RealMatrix {
    let mut rng = seed.rng();
    gaussian_from_rng(n, m, &mut rng)
}

/// Draws a Gaussian matrix from an existing stream (row-major fill order).
pub fn gaussian_from_rng(n: usize, m: usize, rng: &mut ChaCha8Rng) -> RealMatrix {
    RealMatrix::from_fn(n, m, |_, _| rng.sample(StandardNormal))
}
