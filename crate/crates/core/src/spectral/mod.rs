//! Euler characteristics, harmonic projections on slices and trace
//! estimates of weighted L² Betti numbers.
//!
//! For a base cell `c` the estimate uses
//! `P 1_c = 1_c - proj_{ran A} 1_c - proj_{ran B} 1_c`, where `B = ∂^t` on all
//! `(i+1)`-cells of the slice and `A = δ` on `(i-1)`-cochains: supported on
//! interior cells for [`Scheme::Interior`] (so `ran A` consists of genuine
//! coboundaries of `Σ`), on all cells for [`Scheme::Absolute`] (the Hodge
//! projection of the finite complex). The interior scheme is monotone
//! non-increasing in the radius and bounds `b^i_t` from above.
//!
//! `b^i_t ≈ Σ_c ν_c (P 1_c)(c)` with `ν_c = 1/W_T(1/t)` on the dual
//! cellulation and `ν_c = 1/W_{T_0}(t)` on the standard and GHD ones.

mod complex;
mod solver;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::Serialize;

use crate::coxeter::CoxeterSystem;
use crate::davis::{Cellulation, ComplexSlice};
use crate::growth::{growth_series, rho};
use crate::poly::RationalFunction;
use crate::scalar::{format_rational, rational_to_f64, Scalar};
use crate::{Error, Result};

pub use complex::CellComplex;
pub use solver::{project_onto_range, symmetric_coboundary, Op, SolverOptions};

/// Relative distance to `ρ_W` under which estimates are flagged.
pub const NEAR_RHO_MARGIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Scheme {
    Absolute,
    Interior,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Absolute => "absolute",
            Scheme::Interior => "interior",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "absolute" => Ok(Scheme::Absolute),
            "interior" => Ok(Scheme::Interior),
            other => Err(Error::InvalidArgument(format!("unknown scheme {other:?}"))),
        }
    }
}

/// `Σ_k (-1)^k c^k_t` with `c^k_t = Σ_{σ^k ⊂ D} 1/W_{T(σ)}(t)`, summed over the
/// simplices of the Davis chamber (chains in 𝓕). Works for rational `t` and
/// for the formal variable.
pub fn euler_characteristic<F: Scalar>(system: &CoxeterSystem, t: &F) -> Result<F> {
    let chamber = ComplexSlice::build(system, Cellulation::St, 0)?;
    let mut acc = F::zero();
    for k in 0..=chamber.top_dim() {
        let ck = chain_sum(&chamber, k, t)?;
        acc = if k % 2 == 0 { acc.add(&ck) } else { acc.sub(&ck) };
    }
    Ok(acc)
}

fn chain_sum<F: Scalar>(chamber: &ComplexSlice, k: usize, t: &F) -> Result<F> {
    let mut acc = F::zero();
    for cell in chamber.cells(k) {
        let w = chamber.parabolic_growth(cell.stabilizer()).eval_in(t);
        acc = acc.add(&w.inv().ok_or(Error::Pole)?);
    }
    Ok(acc)
}

/// `c^k_t`, the trace of the identity on `k`-cochains.
pub fn c_i<F: Scalar>(system: &CoxeterSystem, k: usize, t: &F) -> Result<F> {
    let chamber = ComplexSlice::build(system, Cellulation::St, 0)?;
    chain_sum(&chamber, k, t)
}

/// Formal Euler characteristic as a rational function of `t`.
pub fn euler_characteristic_formal(system: &CoxeterSystem) -> Result<RationalFunction> {
    euler_characteristic(system, &RationalFunction::t())
}

/// The same alternating sum computed from dual-cell trace normalizations,
/// `Σ_{T ∈ 𝓕} (-1)^{|T|} / W_T(1/t)`.
pub fn euler_characteristic_dual<F: Scalar>(system: &CoxeterSystem, t: &F) -> Result<F> {
    let t_inv = t.inv().ok_or_else(|| Error::NonPositiveWeight("t = 0".into()))?;
    let mut acc = F::zero();
    for sub in system.spherical_subsets()? {
        let term = sub.growth.eval_in(&t_inv).inv().ok_or(Error::Pole)?;
        acc = if sub.set.len() % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    Ok(acc)
}

/// Contribution of one base cell to a trace estimate.
#[derive(Clone, Debug, Serialize)]
pub struct BaseCellTerm {
    pub cell: String,
    pub nu: f64,
    /// `(P 1_c)(c)`.
    pub diagonal: f64,
    pub contribution: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiEstimate {
    pub value: f64,
    pub degree: usize,
    /// Exact weight as `p/q`.
    pub t: String,
    pub cellulation: Cellulation,
    pub radius: usize,
    pub scheme: Scheme,
    /// Largest `‖Aᵀh‖ + ‖Bᵀh‖` over the projected base vectors `h`.
    pub residual: f64,
    pub per_base_cell: Vec<BaseCellTerm>,
}

fn check_weight(t: &BigRational) -> Result<()> {
    if t <= &BigRational::from_integer(0.into()) {
        return Err(Error::NonPositiveWeight(format_rational(t)));
    }
    Ok(())
}

/// The two operators whose ranges are removed in degree `i`.
struct Operators {
    a: Option<sprs::CsMat<f64>>,
    b: Option<sprs::CsMat<f64>>,
}

impl Operators {
    fn new<C: CellComplex>(slice: &C, i: usize, t: f64, scheme: Scheme) -> Self {
        let a = (i > 0).then(|| {
            let keep = match scheme {
                Scheme::Interior => Some(slice.interior_mask(i - 1)),
                Scheme::Absolute => None,
            };
            symmetric_coboundary(slice, i - 1, t, keep)
        });
        let b = (i < slice.top_dim()).then(|| symmetric_coboundary(slice, i, t, None));
        Operators { a, b }
    }

    /// Projection in symmetric coordinates and its residual.
    fn project(&self, v: &[f64], opts: SolverOptions) -> Result<(Vec<f64>, f64)> {
        let mut h = v.to_vec();
        if let Some(a) = &self.a {
            let (pa, _) = project_onto_range(Op::Plain(a), v, opts)?;
            h.iter_mut().zip(&pa).for_each(|(x, y)| *x -= y);
        }
        if let Some(b) = &self.b {
            let (pb, _) = project_onto_range(Op::Transposed(b), v, opts)?;
            h.iter_mut().zip(&pb).for_each(|(x, y)| *x -= y);
        }
        let mut residual = 0.0;
        if let Some(a) = &self.a {
            residual += solver::norm(&solver::mul_t(a, &h));
        }
        if let Some(b) = &self.b {
            residual += solver::norm(&solver::mul(b, &h));
        }
        Ok((h, residual))
    }
}

/// Orthogonal projection (for `⟨,⟩_t`) of an `i`-cochain onto the harmonic
/// space of the chosen scheme. Returns the projection and its residual.
pub fn harmonic_projection<C: CellComplex>(
    slice: &C,
    i: usize,
    t: &BigRational,
    scheme: Scheme,
    rhs: &[f64],
    opts: SolverOptions,
) -> Result<(Vec<f64>, f64)> {
    check_weight(t)?;
    if rhs.len() != slice.num_cells(i) {
        return Err(Error::InvalidArgument(format!("cochain has {} entries, expected {}", rhs.len(), slice.num_cells(i))));
    }
    let tf = rational_to_f64(t);
    let scale: Vec<f64> = (0..slice.num_cells(i)).map(|c| tf.powf(slice.weight_exp(i, c) as f64 / 2.0)).collect();
    let sym: Vec<f64> = rhs.iter().zip(&scale).map(|(v, s)| v * s).collect();
    let (h, residual) = Operators::new(slice, i, tf, scheme).project(&sym, opts)?;
    Ok((h.iter().zip(&scale).map(|(v, s)| v / s).collect(), residual))
}

/// Trace estimate of `b^i_t` on a prebuilt slice.
pub fn betti_estimate_on_slice<C: CellComplex>(
    slice: &C,
    i: usize,
    t: &BigRational,
    scheme: Scheme,
    opts: SolverOptions,
) -> Result<BettiEstimate> {
    check_weight(t)?;
    let tf = rational_to_f64(t);
    let ops = Operators::new(slice, i, tf, scheme);
    let mut per_base_cell = Vec::new();
    let mut value = 0.0;
    let mut residual: f64 = 0.0;
    let base = if i <= slice.top_dim() { slice.base_cells(i) } else { Vec::new() };
    for c in base {
        let mut e = vec![0.0; slice.num_cells(i)];
        e[c] = 1.0;
        let (h, r) = ops.project(&e, opts)?;
        residual = residual.max(r);
        let nu = slice.base_weight(i, c, t);
        value += nu * h[c];
        per_base_cell.push(BaseCellTerm {
            cell: slice.describe(i, c),
            nu,
            diagonal: h[c],
            contribution: nu * h[c],
        });
    }
    Ok(BettiEstimate {
        value,
        degree: i,
        t: format_rational(t),
        cellulation: slice.cellulation(),
        radius: slice.radius(),
        scheme,
        residual,
        per_base_cell,
    })
}

/// Builds the slice and estimates `b^i_t`.
pub fn betti_estimate(
    system: &CoxeterSystem,
    i: usize,
    t: &BigRational,
    cellulation: Cellulation,
    radius: usize,
    scheme: Scheme,
) -> Result<BettiEstimate> {
    let slice = ComplexSlice::build(system, cellulation, radius)?;
    betti_estimate_on_slice(&slice, i, t, scheme, SolverOptions::default())
}

/// One estimate per weight on a shared slice.
pub fn betti_sweep<C: CellComplex>(
    slice: &C,
    i: usize,
    ts: &[BigRational],
    scheme: Scheme,
    opts: SolverOptions,
) -> Result<Vec<BettiEstimate>> {
    ts.iter().map(|t| betti_estimate_on_slice(slice, i, t, scheme, opts)).collect()
}

pub const CSV_HEADER: &str = "system_hash,cellulation,scheme,radius,i,t,estimate,residual,c_i_t,chi_t";

/// CSV row in the `CSV_HEADER` layout.
pub fn csv_row(system: &CoxeterSystem, est: &BettiEstimate) -> Result<String> {
    let t: BigRational = crate::scalar::parse_rational(&est.t).ok_or_else(|| Error::Parse(est.t.clone()))?;
    let c = rational_to_f64(&c_i(system, est.degree, &t)?);
    let chi = rational_to_f64(&euler_characteristic(system, &t)?);
    Ok(format!(
        "{},{},{},{},{},{},{:.10},{:.3e},{:.10},{:.10}",
        system.content_hash(),
        est.cellulation,
        est.scheme,
        est.radius,
        est.degree,
        est.t,
        est.value,
        est.residual,
        c,
        chi
    ))
}

/// Warning text when `t` is within [`NEAR_RHO_MARGIN`] of `ρ_W`.
pub fn near_rho_warning(system: &CoxeterSystem, t: &BigRational) -> Result<Option<String>> {
    let r = rho(&growth_series(system)?);
    if r.is_near(rational_to_f64(t), NEAR_RHO_MARGIN) {
        return Ok(Some(format!(
            "t = {} is within {:.0}% of rho = {:.6}; the harmonic problem is ill-conditioned here",
            format_rational(t),
            NEAR_RHO_MARGIN * 100.0,
            r.approx
        )));
    }
    Ok(None)
}

/// `b^i_t` on the GHD slice paired with `b^{n-i}_{1/t}` on the dual slice.
#[derive(Clone, Debug, Serialize)]
pub struct DualityRow {
    pub i: usize,
    pub ghd_at_t: BettiEstimate,
    pub dual_at_inverse: BettiEstimate,
    pub difference: f64,
}

pub fn duality_report(
    system: &CoxeterSystem,
    t: &BigRational,
    radius: usize,
    scheme: Scheme,
    opts: SolverOptions,
) -> Result<Vec<DualityRow>> {
    check_weight(t)?;
    let ghd = ComplexSlice::build(system, Cellulation::Ghd, radius)?;
    let dual = ComplexSlice::build(system, Cellulation::Dual, radius)?;
    let n = ghd.dimension();
    let t_inv = t.recip();
    (0..=n)
        .map(|i| {
            let a = betti_estimate_on_slice(&ghd, i, t, scheme, opts)?;
            let b = betti_estimate_on_slice(&dual, n - i, &t_inv, scheme, opts)?;
            let difference = (a.value - b.value).abs();
            Ok(DualityRow { i, ghd_at_t: a, dual_at_inverse: b, difference })
        })
        .collect()
}

#[cfg(test)]
mod tests;
