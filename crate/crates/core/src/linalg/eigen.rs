//! Dense Hermitian eigensolver.
//!
//! Householder reduction to tridiagonal form followed by implicit QL with
//! Wilkinson-type shifts on each unreduced block. Columns whose part below
//! the subdiagonal is already negligible are skipped, so matrices of the form
//! `c I + low rank` reduce in `O(rank * N^2)` work instead of `O(N^3)`.
//! Eigenvectors are produced on demand by back-transforming the tridiagonal
//! eigenvectors through the stored reflectors.
//!
//! Real symmetric input (all imaginary parts exactly zero) runs through the
//! same code instantiated over `f64`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use super::operator::HermitianOp;
use super::state::inner;
use crate::error::{Error, Result};

/// Column skip threshold, relative to the Frobenius norm of the input.
const DEFLATION_TOL: f64 = 64.0 * f64::EPSILON;
const MAX_QL_ITERATIONS: usize = 64;
/// Relative spread below which eigenvalues share one phase in `evolve`.
const CLUSTER_TOL: f64 = 1e-12;

/// Eigenvalues in ascending order with orthonormal eigenvectors.
///
/// Each eigenvector is gauge-fixed so that its first component of largest
/// magnitude is real and non-negative.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    values: Vec<f64>,
    vectors: Vec<Vec<Complex64>>,
}

impl EigenDecomposition {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvector `k` (ascending eigenvalue order).
    pub fn vector(&self, k: usize) -> &[Complex64] {
        &self.vectors[k]
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Full eigendecomposition of `h`.
pub fn hermitian_eig(h: &HermitianOp) -> Result<EigenDecomposition> {
    let spectrum = HermitianSpectrum::compute(h)?;
    let vectors = (0..spectrum.len()).map(|k| spectrum.eigenvector(k)).collect();
    Ok(EigenDecomposition {
        values: spectrum.values,
        vectors,
    })
}

/// All eigenvalues of a Hermitian matrix, with eigenvectors computed lazily.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    values: Vec<f64>,
    pairs: Vec<TridiagPair>,
    reduction: Reduction,
}

#[derive(Debug, Clone)]
enum Reduction {
    Real(Reduced<f64>),
    Complex(Reduced<Complex64>),
}

#[derive(Debug, Clone)]
struct TridiagPair {
    start: usize,
    local: Vec<f64>,
}

impl HermitianSpectrum {
    pub fn compute(h: &HermitianOp) -> Result<Self> {
        let dim = h.dim();
        let (diag, off, reduction) = if h.is_real() {
            let a: Vec<f64> = h.entries().iter().map(|c| c.re).collect();
            let red = tridiagonalize(a, dim);
            (red.diag.clone(), red.off.clone(), Reduction::Real(red))
        } else {
            let red = tridiagonalize(h.entries().to_vec(), dim);
            (red.diag.clone(), red.off.clone(), Reduction::Complex(red))
        };
        let mut pairs = solve_tridiagonal(diag, off)?;
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let values = pairs.iter().map(|p| p.0).collect();
        let pairs = pairs.into_iter().map(|p| p.1).collect();
        Ok(Self {
            values,
            pairs,
            reduction,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Gauge-fixed eigenvector for `values()[k]`.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let pair = &self.pairs[k];
        let mut v = match &self.reduction {
            Reduction::Real(r) => r.back_transform(pair),
            Reduction::Complex(r) => r.back_transform(pair),
        };
        fix_gauge(&mut v);
        v
    }

    /// `exp(-i H t) |v>`.
    ///
    /// The largest cluster of (numerically) equal eigenvalues contributes a
    /// single phase on the complement of the other eigenvectors, so only
    /// those are back-transformed.
    pub fn evolve(&self, t: f64, v: &[Complex64]) -> Vec<Complex64> {
        let (lo, hi) = self.largest_cluster();
        let phase = |lambda: f64| Complex64::from_polar(1.0, -lambda * t);
        let bulk = phase(self.values[lo]);
        let mut out: Vec<Complex64> = v.iter().map(|x| x * bulk).collect();
        for k in (0..lo).chain(hi..self.len()) {
            let u = self.eigenvector(k);
            let c = inner(&u, v) * (phase(self.values[k]) - bulk);
            for (o, ui) in out.iter_mut().zip(&u) {
                *o += ui * c;
            }
        }
        out
    }

    /// Index range of the longest run of eigenvalues equal within
    /// `CLUSTER_TOL` of the spectral scale.
    fn largest_cluster(&self) -> (usize, usize) {
        let scale = self.values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let tol = CLUSTER_TOL * scale;
        let mut best = (0, 0);
        let mut start = 0;
        for end in 1..=self.len() {
            if end == self.len() || self.values[end] - self.values[start] > tol {
                if end - start > best.1 - best.0 {
                    best = (start, end);
                }
                start = end;
            }
        }
        best
    }
}

/// Multiplies `v` by the phase that makes its first component of largest
/// magnitude real and non-negative.
pub fn fix_gauge(v: &mut [Complex64]) {
    let max_sqr = v.iter().map(|c| c.norm_sqr()).fold(0.0, f64::max);
    if max_sqr == 0.0 {
        return;
    }
    // within 1e-10 relative in magnitude
    let cutoff = max_sqr * (1.0 - 2e-10);
    let Some(k) = v.iter().position(|c| c.norm_sqr() >= cutoff) else {
        return;
    };
    let r = v[k].norm();
    let phase = v[k].conj() / r;
    for c in v.iter_mut() {
        *c *= phase;
    }
    // pin the pivot exactly onto the real axis
    v[k] = Complex64::new(r, 0.0);
}

trait Scalar:
    Copy
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    fn zero() -> Self;
    fn from_re(x: f64) -> Self;
    fn conj(self) -> Self;
    fn abs_sqr(self) -> f64;
    fn re(self) -> f64;
    fn scale(self, x: f64) -> Self;
    fn to_complex(self) -> Complex64;

    /// `self / |self|`, or one for zero.
    fn unit_phase(self) -> Self {
        let a = self.abs_sqr().sqrt();
        if a == 0.0 {
            Self::from_re(1.0)
        } else {
            self.scale(1.0 / a)
        }
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_re(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn abs_sqr(self) -> f64 {
        self * self
    }
    fn re(self) -> f64 {
        self
    }
    fn scale(self, x: f64) -> Self {
        self * x
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn abs_sqr(self) -> f64 {
        self.norm_sqr()
    }
    fn re(self) -> f64 {
        self.re
    }
    fn scale(self, x: f64) -> Self {
        self * x
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

#[derive(Debug, Clone)]
struct Reflector<S> {
    /// First row the reflector acts on.
    offset: usize,
    /// Unit vector `v` of `I - 2 v v^dagger`.
    v: Vec<S>,
}

/// `A = Q D T D^dagger Q^dagger` with `T` real symmetric tridiagonal,
/// `Q = P_0 P_1 ... P_m` and `D` a diagonal of unit phases.
#[derive(Debug, Clone)]
struct Reduced<S> {
    dim: usize,
    diag: Vec<f64>,
    off: Vec<f64>,
    phases: Vec<S>,
    reflectors: Vec<Reflector<S>>,
}

impl<S: Scalar> Reduced<S> {
    fn back_transform(&self, pair: &TridiagPair) -> Vec<Complex64> {
        let mut y = vec![S::zero(); self.dim];
        for (i, &z) in pair.local.iter().enumerate() {
            let row = pair.start + i;
            y[row] = self.phases[row].scale(z);
        }
        for r in self.reflectors.iter().rev() {
            let seg = &mut y[r.offset..];
            let mut dot = S::zero();
            for (vi, yi) in r.v.iter().zip(seg.iter()) {
                dot += vi.conj() * *yi;
            }
            let dot = dot.scale(2.0);
            for (vi, yi) in r.v.iter().zip(seg.iter_mut()) {
                *yi -= *vi * dot;
            }
        }
        y.into_iter().map(S::to_complex).collect()
    }
}

fn tridiagonalize<S: Scalar>(mut a: Vec<S>, n: usize) -> Reduced<S> {
    let fro = a.iter().map(|x| x.abs_sqr()).sum::<f64>().sqrt();
    let tol = DEFLATION_TOL * fro;
    let mut reflectors = Vec::new();
    let mut p = vec![S::zero(); n];

    for k in 0..n.saturating_sub(2) {
        // column k below the subdiagonal, read along the (conjugate) row
        let tail_sqr: f64 = a[k * n + k + 2..(k + 1) * n].iter().map(|x| x.abs_sqr()).sum();
        if tail_sqr.sqrt() <= tol {
            continue;
        }
        let l = n - k - 1;
        let alpha = a[(k + 1) * n + k];
        let xnorm = (alpha.abs_sqr() + tail_sqr).sqrt();
        let beta = -alpha.unit_phase().scale(xnorm);

        let mut v: Vec<S> = a[k * n + k + 1..(k + 1) * n].iter().map(|x| x.conj()).collect();
        v[0] -= beta;
        let vnorm = v.iter().map(|x| x.abs_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x = x.scale(1.0 / vnorm));

        // trailing block B = a[k+1.., k+1..]: B <- (I - 2vv†) B (I - 2vv†)
        let p = &mut p[..l];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 2 + i) * n];
            let mut acc = S::zero();
            for (bij, vj) in row.iter().zip(&v) {
                acc += *bij * *vj;
            }
            *pi = acc;
        }
        let mut vp = S::zero();
        for (vi, pi) in v.iter().zip(p.iter()) {
            vp += vi.conj() * *pi;
        }
        let vp = vp.re();
        // q = p - (v†p) v, stored in p
        for (pi, vi) in p.iter_mut().zip(&v) {
            *pi -= vi.scale(vp);
        }
        for i in 0..l {
            let vi2 = v[i].scale(2.0);
            let qi2 = p[i].scale(2.0);
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 2 + i) * n];
            for ((bij, vj), qj) in row.iter_mut().zip(&v).zip(p.iter()) {
                *bij -= vi2 * qj.conj() + qi2 * vj.conj();
            }
        }

        a[(k + 1) * n + k] = beta;
        a[k * n + k + 1] = beta.conj();
        for i in (k + 2)..n {
            a[i * n + k] = S::zero();
            a[k * n + i] = S::zero();
        }
        reflectors.push(Reflector { offset: k + 1, v });
    }

    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re()).collect();
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut phases = Vec::with_capacity(n);
    let mut phase = S::from_re(1.0);
    phases.push(phase);
    for i in 0..n.saturating_sub(1) {
        let sub = a[(i + 1) * n + i];
        off.push(sub.abs_sqr().sqrt());
        phase = phase * sub.unit_phase();
        phases.push(phase);
    }
    Reduced {
        dim: n,
        diag,
        off,
        phases,
        reflectors,
    }
}

/// Eigenpairs of the real symmetric tridiagonal matrix `(diag, off)`,
/// split into unreduced blocks first.
fn solve_tridiagonal(diag: Vec<f64>, mut off: Vec<f64>) -> Result<Vec<(f64, TridiagPair)>> {
    let n = diag.len();
    let scale = (0..n)
        .map(|i| diag[i].abs() + off.get(i).copied().unwrap_or(0.0))
        .fold(0.0, f64::max);
    for e in off.iter_mut() {
        if *e <= f64::EPSILON * scale {
            *e = 0.0;
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && off[end - 1] != 0.0 {
            end += 1;
        }
        if end - start == 1 {
            out.push((
                diag[start],
                TridiagPair {
                    start,
                    local: vec![1.0],
                },
            ));
        } else {
            let b = end - start;
            let mut d = diag[start..end].to_vec();
            let mut e = off[start..end - 1].to_vec();
            e.push(0.0);
            let mut z = vec![0.0; b * b];
            for i in 0..b {
                z[i * b + i] = 1.0;
            }
            tql2(&mut d, &mut e, &mut z, b)?;
            for (j, &lambda) in d.iter().enumerate() {
                let local = (0..b).map(|i| z[i * b + j]).collect();
                out.push((lambda, TridiagPair { start, local }));
            }
        }
        start = end;
    }
    Ok(out)
}

/// Implicit QL on a symmetric tridiagonal matrix. `e[i]` couples rows
/// `i` and `i + 1`; `z` (row-major, `n x n`) accumulates the rotations.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) -> Result<()> {
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence);
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let zi = z[k * n + i];
                        let zi1 = z[k * n + i + 1];
                        z[k * n + i + 1] = s * zi + c * zi1;
                        z[k * n + i] = c * zi - s * zi1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
