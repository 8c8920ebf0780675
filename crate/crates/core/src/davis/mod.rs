//! Finite slices of the Davis complex `Σ` in three cellulations.
//!
//! Every cell is a coset `wW_T` (with its minimal representative) plus
//! combinatorial data:
//!
//! * `Dual`: the Coxeter block `w⟨T⟩`, of dimension `|T|`; faces are the
//!   blocks `x⟨T∖{s}⟩` with `x ∈ wW_T`. Translates carry the orientation
//!   twist `(-1)^{d(w)}`, which makes the incidence the plain cubical sign
//!   `(-1)^{position of s in T}` for every such face.
//! * `St`: simplices of the barycentric cellulation, `(wW_{T_0}, T_0 ⊊ … ⊊ T_k)`,
//!   with boundary sign `(-1)^j` for dropping `T_j`.
//! * `Ghd`: the cells `wD_T` of dimension `n - |T|` (right-angled systems with a
//!   flag-sphere nerve). Faces are `wD_{T ∪ {s}}`; incidences are the
//!   transposed `Dual` incidences, so the duality map intertwines `δ` and
//!   `∂^t` with sign `+1` in every degree.
//!
//! `d(cell)` is the length of the minimal representative.

mod build;
mod ops;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterSystem, GenSet, GroupElement};
use crate::poly::Poly;
use crate::scalar::rational_to_f64;
use crate::{Error, Result};

pub use build::{check_ghd_eligible, DEFAULT_CELL_CAP};
pub(crate) use build::chains;
pub use ops::{poincare_map, theta};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cellulation {
    St,
    Dual,
    Ghd,
}

impl fmt::Display for Cellulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cellulation::St => "st",
            Cellulation::Dual => "dual",
            Cellulation::Ghd => "ghd",
        })
    }
}

impl FromStr for Cellulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "st" | "standard" => Ok(Cellulation::St),
            "dual" | "d" => Ok(Cellulation::Dual),
            "ghd" => Ok(Cellulation::Ghd),
            other => Err(Error::InvalidArgument(format!("unknown cellulation {other:?}"))),
        }
    }
}

/// A cell: minimal coset representative plus its subset data (`[T]` for
/// `Dual`/`Ghd`, the chain `T_0 ⊊ … ⊊ T_k` for `St`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub rep: GroupElement,
    pub chain: Vec<GenSet>,
    pub dim: usize,
}

impl Cell {
    /// `d(σ)`.
    pub fn weight_exp(&self) -> usize {
        self.rep.len()
    }

    /// The subset whose parabolic the representative is reduced against.
    pub fn stabilizer(&self) -> GenSet {
        self.chain[0]
    }

    pub fn is_base(&self) -> bool {
        self.rep.is_identity()
    }
}

/// Serializable part of a slice: cells and face incidences.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SliceData {
    pub cellulation: Cellulation,
    pub radius: usize,
    /// Dimension of `Σ` (largest spherical subset size).
    pub dimension: usize,
    /// Cells per dimension.
    pub cells: Vec<Vec<Cell>>,
    /// `faces[k][c]` lists `(face index in dimension k-1, [c : face])`.
    pub faces: Vec<Vec<Vec<(u32, i8)>>>,
    /// Number of codimension-one cofaces each cell has in the full complex.
    pub expected_cofaces: Vec<Vec<u32>>,
}

/// Cells of a ball of `Σ` with signed incidences and interior flags.
#[derive(Clone, Debug)]
pub struct ComplexSlice {
    system: CoxeterSystem,
    data: SliceData,
    cofaces: Vec<Vec<Vec<(u32, i8)>>>,
    interior: Vec<Vec<bool>>,
    index: Vec<HashMap<(GroupElement, Vec<GenSet>), usize>>,
    growth: HashMap<GenSet, Poly>,
}

impl ComplexSlice {
    pub fn build(system: &CoxeterSystem, cellulation: Cellulation, radius: usize) -> Result<Self> {
        Self::build_capped(system, cellulation, radius, DEFAULT_CELL_CAP)
    }

    pub fn build_capped(system: &CoxeterSystem, cellulation: Cellulation, radius: usize, cap: usize) -> Result<Self> {
        let data = build::build_data(system, cellulation, radius, cap)?;
        Self::from_data(system, data)
    }

    /// Reassembles a slice from (possibly cached) cell data.
    pub fn from_data(system: &CoxeterSystem, data: SliceData) -> Result<Self> {
        let growth = system.spherical_subsets()?.into_iter().map(|s| (s.set, s.growth)).collect();
        let index: Vec<HashMap<_, usize>> = data
            .cells
            .iter()
            .map(|cells| cells.iter().enumerate().map(|(i, c)| ((c.rep.clone(), c.chain.clone()), i)).collect())
            .collect();
        let mut cofaces: Vec<Vec<Vec<(u32, i8)>>> = data.cells.iter().map(|c| vec![Vec::new(); c.len()]).collect();
        for (k, per_cell) in data.faces.iter().enumerate() {
            for (c, faces) in per_cell.iter().enumerate() {
                for &(f, sign) in faces {
                    cofaces[k - 1][f as usize].push((c as u32, sign));
                }
            }
        }
        let mut interior: Vec<Vec<bool>> = data.cells.iter().map(|c| vec![false; c.len()]).collect();
        for k in (0..data.cells.len()).rev() {
            for c in 0..data.cells[k].len() {
                let found = cofaces[k][c].len() as u32;
                interior[k][c] = found == data.expected_cofaces[k][c]
                    && cofaces[k][c].iter().all(|&(t, _)| interior[k + 1][t as usize]);
            }
        }
        Ok(ComplexSlice { system: system.clone(), data, cofaces, interior, index, growth })
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    pub fn data(&self) -> &SliceData {
        &self.data
    }

    pub fn cellulation(&self) -> Cellulation {
        self.data.cellulation
    }

    pub fn radius(&self) -> usize {
        self.data.radius
    }

    /// Dimension of `Σ`.
    pub fn dimension(&self) -> usize {
        self.data.dimension
    }

    /// Highest dimension with cells (equals `dimension()` for nonempty slices).
    pub fn top_dim(&self) -> usize {
        self.data.cells.len().saturating_sub(1)
    }

    pub fn cells(&self, k: usize) -> &[Cell] {
        self.data.cells.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn num_cells(&self, k: usize) -> usize {
        self.cells(k).len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.data.cells.iter().map(Vec::len).collect()
    }

    /// Faces of the `k`-cell `c` with incidence signs.
    pub fn faces(&self, k: usize, c: usize) -> &[(u32, i8)] {
        if k == 0 {
            return &[];
        }
        &self.data.faces[k][c]
    }

    /// Codimension-one cofaces of the `k`-cell `c` present in the slice.
    pub fn cofaces(&self, k: usize, c: usize) -> &[(u32, i8)] {
        self.cofaces.get(k).map_or(&[], |v| v[c].as_slice())
    }

    /// Whether every coface (of any codimension) of the cell lies in the slice.
    pub fn is_interior(&self, k: usize, c: usize) -> bool {
        self.interior[k][c]
    }

    pub fn interior_mask(&self, k: usize) -> &[bool] {
        self.interior.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn find(&self, k: usize, rep: &GroupElement, chain: &[GenSet]) -> Option<usize> {
        self.index.get(k)?.get(&(rep.clone(), chain.to_vec())).copied()
    }

    /// Indices of the `k`-cells with identity representative.
    pub fn base_cells(&self, k: usize) -> Vec<usize> {
        self.cells(k).iter().enumerate().filter(|(_, c)| c.is_base()).map(|(i, _)| i).collect()
    }

    /// `W_T(t)` for a spherical `T`.
    pub fn parabolic_growth(&self, t: GenSet) -> &Poly {
        &self.growth[&t]
    }

    /// Trace normalization of a base cell: `1/W_T(1/t)` for `Dual`,
    /// `1/W_{T_0}(t)` for `St` and `Ghd`.
    pub fn trace_weight(&self, cell: &Cell, t: &BigRational) -> BigRational {
        let w = self.parabolic_growth(cell.stabilizer());
        match self.cellulation() {
            Cellulation::Dual => w.eval(&t.recip()).recip(),
            Cellulation::St | Cellulation::Ghd => w.eval(t).recip(),
        }
    }

    pub fn trace_weight_f64(&self, cell: &Cell, t: &BigRational) -> f64 {
        rational_to_f64(&self.trace_weight(cell, t))
    }

    /// Same complex with every cell's orientation flipped by a pseudo-random
    /// sign (incidences become `ε_τ ε_σ [τ:σ]`).
    pub fn reoriented(&self, seed: u64) -> Result<Self> {
        let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            if state & 1 == 0 { 1i8 } else { -1 }
        };
        let eps: Vec<Vec<i8>> = self.data.cells.iter().map(|c| c.iter().map(|_| next()).collect()).collect();
        let mut data = self.data.clone();
        for (k, per_cell) in data.faces.iter_mut().enumerate() {
            for (c, faces) in per_cell.iter_mut().enumerate() {
                for (f, sign) in faces.iter_mut() {
                    *sign *= eps[k][c] * eps[k - 1][*f as usize];
                }
            }
        }
        Self::from_data(&self.system, data)
    }
}
