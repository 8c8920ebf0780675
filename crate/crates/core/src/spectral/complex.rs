use num_rational::BigRational;

use crate::davis::{Cellulation, ComplexSlice};

/// What the harmonic solver needs from a finite weighted cell complex.
pub trait CellComplex {
    fn top_dim(&self) -> usize;
    fn num_cells(&self, k: usize) -> usize;
    /// `(face index, incidence)` pairs of the `k`-cell `c`.
    fn faces(&self, k: usize, c: usize) -> &[(u32, i8)];
    /// Exponent `d(σ)` of the measure `t^{d(σ)}`.
    fn weight_exp(&self, k: usize, c: usize) -> usize;
    fn interior_mask(&self, k: usize) -> &[bool];
    /// Cells whose diagonal entries enter the trace.
    fn base_cells(&self, k: usize) -> Vec<usize>;
    /// Normalization `ν_c` of a base cell.
    fn base_weight(&self, k: usize, c: usize, t: &BigRational) -> f64;
    fn describe(&self, k: usize, c: usize) -> String;
    fn cellulation(&self) -> Cellulation;
    fn radius(&self) -> usize;
}

impl CellComplex for ComplexSlice {
    fn top_dim(&self) -> usize {
        ComplexSlice::top_dim(self)
    }

    fn num_cells(&self, k: usize) -> usize {
        ComplexSlice::num_cells(self, k)
    }

    fn faces(&self, k: usize, c: usize) -> &[(u32, i8)] {
        ComplexSlice::faces(self, k, c)
    }

    fn weight_exp(&self, k: usize, c: usize) -> usize {
        self.cells(k)[c].weight_exp()
    }

    fn interior_mask(&self, k: usize) -> &[bool] {
        ComplexSlice::interior_mask(self, k)
    }

    fn base_cells(&self, k: usize) -> Vec<usize> {
        ComplexSlice::base_cells(self, k)
    }

    fn base_weight(&self, k: usize, c: usize, t: &BigRational) -> f64 {
        self.trace_weight_f64(&self.cells(k)[c], t)
    }

    fn describe(&self, k: usize, c: usize) -> String {
        let cell = &self.cells(k)[c];
        let names = self.system().labels();
        let chain: Vec<String> = cell
            .chain
            .iter()
            .map(|s| format!("{{{}}}", s.iter().map(|g| names[g].as_str()).collect::<Vec<_>>().join(",")))
            .collect();
        format!("{} {}", self.system().format_element(&cell.rep), chain.join("<"))
    }

    fn cellulation(&self) -> Cellulation {
        ComplexSlice::cellulation(self)
    }

    fn radius(&self) -> usize {
        ComplexSlice::radius(self)
    }
}
