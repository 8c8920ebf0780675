//! Symmetrized sparse coboundaries and least-squares range projections.

use sprs::{CsMat, TriMat};

use super::CellComplex;
use crate::{Error, Result};

/// Iterative solver settings.
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Stop once `‖Mᵀr‖ ≤ tol · ‖Mᵀb‖` or `‖Mᵀr‖ ≤ tol · ‖M‖_F ‖r‖` (the
    /// LSQR test, which handles right-hand sides already near `ker Mᵀ`).
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-10, max_iter: 20_000 }
    }
}

/// `δ^k` in the coordinates `f ↦ t^{d/2} f`, where it becomes
/// `[τ:σ] t^{(d(τ)-d(σ))/2}` and `∂^t` becomes its transpose. Only the
/// columns with `keep[σ]` are retained (others are zero).
pub fn symmetric_coboundary<C: CellComplex>(slice: &C, k: usize, t: f64, keep: Option<&[bool]>) -> CsMat<f64> {
    let rows = slice.num_cells(k + 1);
    let cols = slice.num_cells(k);
    let sqrt_t = t.sqrt();
    let mut tri = TriMat::new((rows, cols));
    for tau in 0..rows {
        let dt = slice.weight_exp(k + 1, tau) as i32;
        for &(sigma, sign) in slice.faces(k + 1, tau) {
            let sigma = sigma as usize;
            if keep.is_some_and(|m| !m[sigma]) {
                continue;
            }
            let ds = slice.weight_exp(k, sigma) as i32;
            tri.add_triplet(tau, sigma, sign as f64 * sqrt_t.powi(dt - ds));
        }
    }
    tri.to_csr()
}

pub fn mul(m: &CsMat<f64>, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m.rows()];
    for (row, vec) in m.outer_iterator().enumerate() {
        out[row] = vec.iter().map(|(col, &v)| v * x[col]).sum();
    }
    out
}

pub fn mul_t(m: &CsMat<f64>, y: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m.cols()];
    for (row, vec) in m.outer_iterator().enumerate() {
        let yr = y[row];
        if yr != 0.0 {
            for (col, &v) in vec.iter() {
                out[col] += v * yr;
            }
        }
    }
    out
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Operator given either as `M` or as `Mᵀ` (to avoid materializing transposes).
#[derive(Clone, Copy)]
pub enum Op<'a> {
    Plain(&'a CsMat<f64>),
    Transposed(&'a CsMat<f64>),
}

impl Op<'_> {
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Op::Plain(m) => mul(m, x),
            Op::Transposed(m) => mul_t(m, x),
        }
    }

    pub fn apply_t(&self, y: &[f64]) -> Vec<f64> {
        match self {
            Op::Plain(m) => mul_t(m, y),
            Op::Transposed(m) => mul(m, y),
        }
    }

    fn frobenius(&self) -> f64 {
        let m = match self {
            Op::Plain(m) | Op::Transposed(m) => m,
        };
        m.data().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn domain_len(&self) -> usize {
        match self {
            Op::Plain(m) => m.cols(),
            Op::Transposed(m) => m.rows(),
        }
    }
}

/// Orthogonal projection of `b` onto the range of `op`, by CGLS on
/// `min ‖M x - b‖`. Returns `(M x, iterations)`.
pub fn project_onto_range(op: Op<'_>, b: &[f64], opts: SolverOptions) -> Result<(Vec<f64>, usize)> {
    let n = op.domain_len();
    if n == 0 {
        return Ok((vec![0.0; b.len()], 0));
    }
    let mut r = b.to_vec();
    let mut s = op.apply_t(&r);
    let target = opts.tol * norm(&s).max(f64::MIN_POSITIVE);
    let op_norm = op.frobenius();
    let mut p = s.clone();
    let mut gamma = dot(&s, &s);
    let mut mx = vec![0.0; b.len()];
    for iter in 0..opts.max_iter {
        if gamma.sqrt() <= target || gamma.sqrt() <= opts.tol * op_norm * norm(&r) {
            return Ok((mx, iter));
        }
        let q = op.apply(&p);
        let qq = dot(&q, &q);
        if qq == 0.0 {
            return Ok((mx, iter));
        }
        let alpha = gamma / qq;
        for (m, qi) in mx.iter_mut().zip(&q) {
            *m += alpha * qi;
        }
        for (ri, qi) in r.iter_mut().zip(&q) {
            *ri -= alpha * qi;
        }
        s = op.apply_t(&r);
        let gamma_new = dot(&s, &s);
        let beta = gamma_new / gamma;
        gamma = gamma_new;
        for (pi, si) in p.iter_mut().zip(&s) {
            *pi = si + beta * *pi;
        }
    }
    Err(Error::SolverNonConvergence { residual: gamma.sqrt(), iterations: opts.max_iter })
}
