//! Exact cochain operations, the comparison map `θ` and the duality map `𝒟`.

use super::{Cellulation, ComplexSlice};
use crate::scalar::Scalar;
use crate::{Error, Result};

impl ComplexSlice {
    /// `(δf)(τ) = Σ_σ [τ:σ] f(σ)` from `k`-cochains to `(k+1)`-cochains.
    pub fn coboundary<F: Scalar>(&self, k: usize, f: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.num_cells(k + 1)];
        for (tau, slot) in out.iter_mut().enumerate() {
            for &(sigma, sign) in self.faces(k + 1, tau) {
                let v = &f[sigma as usize];
                *slot = if sign > 0 { slot.add(v) } else { slot.sub(v) };
            }
        }
        out
    }

    /// `(∂^t g)(σ) = Σ_τ [τ:σ] g(τ) t^{d(τ)-d(σ)}` from `k`-chains to
    /// `(k-1)`-chains; the adjoint of `δ` for `⟨f,g⟩_t = Σ f g t^{d}`.
    pub fn boundary_t<F: Scalar>(&self, k: usize, g: &[F], t: &F) -> Vec<F> {
        let mut out = vec![F::zero(); self.num_cells(k.wrapping_sub(1))];
        if k == 0 {
            return out;
        }
        for (tau, gv) in g.iter().enumerate() {
            if gv.is_zero() {
                continue;
            }
            let dt = self.cells(k)[tau].weight_exp() as i64;
            for &(sigma, sign) in self.faces(k, tau) {
                let ds = self.cells(k - 1)[sigma as usize].weight_exp() as i64;
                let term = gv.mul(&t.powi(dt - ds));
                let slot = &mut out[sigma as usize];
                *slot = if sign > 0 { slot.add(&term) } else { slot.sub(&term) };
            }
        }
        out
    }

    /// Weighted inner product of two `k`-cochains.
    pub fn inner<F: Scalar>(&self, k: usize, f: &[F], g: &[F], t: &F) -> F {
        let mut acc = F::zero();
        for (i, cell) in self.cells(k).iter().enumerate() {
            if f[i].is_zero() || g[i].is_zero() {
                continue;
            }
            acc = acc.add(&f[i].mul(&g[i].conj()).mul(&t.pow(cell.weight_exp() as u32)));
        }
        acc
    }
}

/// Sign of the permutation taking `order` to increasing order.
fn permutation_sign(order: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] > order[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 { 1 } else { -1 }
}

/// Comparison map from `k`-chains on the dual cellulation to `k`-chains on
/// the standard one:
/// `θf(σ) = η(σ) (-1)^{d(σ)} t^{d(⟨α⟩) - d(σ)} f(⟨α⟩)` for every `k`-simplex
/// `σ = (wu, ∅ ⊊ {a_1} ⊊ … ⊊ T)` inside the block `⟨α⟩ = w⟨T⟩`, where the
/// orientation factor `η = (-1)^{|T|} sign(a_1, …, a_k)` compares the flag
/// order with the block's sorted orientation.
pub fn theta<F: Scalar>(dual: &ComplexSlice, st: &ComplexSlice, k: usize, f: &[F], t: &F) -> Result<Vec<F>> {
    check_pair(dual, st, Cellulation::Dual, Cellulation::St)?;
    let system = dual.system();
    let mut out = vec![F::zero(); st.num_cells(k)];
    for (idx, cell) in dual.cells(k).iter().enumerate() {
        if f[idx].is_zero() {
            continue;
        }
        let t_set = cell.chain[0];
        let members: Vec<usize> = t_set.iter().collect();
        let d_block = cell.weight_exp() as i64;
        for u in system.parabolic_elements(t_set)? {
            let wu = system.multiply(&cell.rep, &u)?;
            let d_sigma = wu.len() as i64;
            for order in permutations(&members) {
                let mut chain = vec![crate::coxeter::GenSet::EMPTY];
                for &a in &order {
                    chain.push(chain.last().unwrap().insert(a));
                }
                let target = st
                    .find(k, &wu, &chain)
                    .ok_or_else(|| Error::SliceMismatch(format!("simplex {wu:?} {chain:?} missing from st slice")))?;
                let eta = if members.len().is_multiple_of(2) { 1 } else { -1 } * permutation_sign(&order);
                let sign = eta * if d_sigma % 2 == 0 { 1 } else { -1 };
                let v = f[idx].mul(&t.powi(d_block - d_sigma)).mul(&F::from_i64(sign));
                out[target] = out[target].add(&v);
            }
        }
    }
    Ok(out)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

/// Duality map from cochains on the `Ghd` slice (weight `t`) to cochains on
/// the `Dual` slice (weight `1/t`): `𝒟f(w⟨T⟩) = t^{d(w)} f(wD_T)`.
/// Takes a `Ghd` cochain of degree `k` to a `Dual` cochain of degree `n - k`;
/// dual cells absent from the `Ghd` slice get 0.
pub fn poincare_map<F: Scalar>(ghd: &ComplexSlice, dual: &ComplexSlice, k: usize, f: &[F], t: &F) -> Result<Vec<F>> {
    check_pair(ghd, dual, Cellulation::Ghd, Cellulation::Dual)?;
    let n = ghd.dimension();
    if k > n {
        return Err(Error::InvalidArgument(format!("degree {k} exceeds dimension {n}")));
    }
    let mut out = vec![F::zero(); dual.num_cells(n - k)];
    for (idx, cell) in dual.cells(n - k).iter().enumerate() {
        if let Some(src) = ghd.find(k, &cell.rep, &cell.chain) {
            out[idx] = f[src].mul(&t.pow(cell.weight_exp() as u32));
        }
    }
    Ok(out)
}

fn check_pair(a: &ComplexSlice, b: &ComplexSlice, ca: Cellulation, cb: Cellulation) -> Result<()> {
    if a.cellulation() != ca || b.cellulation() != cb {
        return Err(Error::SliceMismatch(format!(
            "expected {ca} and {cb} slices, got {} and {}",
            a.cellulation(),
            b.cellulation()
        )));
    }
    if a.system().content_hash() != b.system().content_hash() || a.radius() != b.radius() {
        return Err(Error::SliceMismatch("slices differ in system or radius".into()));
    }
    Ok(())
}
