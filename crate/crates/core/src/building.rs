//! Balls in the right-angled building of uniform thickness `q+1`.
//!
//! Chambers are elements of the graph product `Γ` of copies of `ℤ_{q+1}`, one
//! per generator, with commutation along the edges `m_st = 2`. Elements are
//! stored as reduced syllable words `c_s^k` (`1 ≤ k ≤ q`) in shuffle normal
//! form: the lexicographically least arrangement under swaps of adjacent
//! commuting syllables. Projecting a syllable `c_s^k ↦ s` gives the Weyl
//! distance to the base chamber.
//!
//! The geometric realization uses the barycentric simplices
//! `(gΓ_{T_0}, T_0 ⊊ … ⊊ T_k)` with `g` the shortest element of its coset,
//! mirroring the `St` cellulation of `Σ` so cells project onto cells.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterSystem, GenSet, GroupElement};
use crate::davis::{chains, Cellulation, ComplexSlice};
use crate::spectral::{betti_estimate_on_slice, BettiEstimate, CellComplex, Scheme, SolverOptions};
use crate::{Error, Result};

pub const DEFAULT_CHAMBER_CAP: usize = 2_000_000;

/// Element of the graph product: syllables `(generator, power)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chamber(pub Vec<(u8, u8)>);

impl Chamber {
    pub fn identity() -> Self {
        Chamber(Vec::new())
    }

    /// Syllable length, i.e. gallery distance to the base chamber.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&(s, _)| s as usize)
    }
}

/// Graph product of `ℤ_{q+1}` over a right-angled Coxeter graph.
#[derive(Clone, Debug)]
pub struct GraphProduct {
    system: CoxeterSystem,
    q: u8,
}

impl GraphProduct {
    pub fn new(system: &CoxeterSystem, q: u32) -> Result<Self> {
        if !system.is_right_angled() {
            return Err(Error::NotRightAngled);
        }
        if q == 0 || q > 254 {
            return Err(Error::InvalidArgument(format!("thickness parameter q = {q} must lie in 1..=254")));
        }
        Ok(GraphProduct { system: system.clone(), q: q as u8 })
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    pub fn q(&self) -> u32 {
        self.q as u32
    }

    fn commute(&self, a: u8, b: u8) -> bool {
        a != b && self.system.commute(a as usize, b as usize)
    }

    /// Shuffle normal form of a reduced syllable word.
    fn canonical(&self, mut word: Vec<(u8, u8)>) -> Chamber {
        let mut out = Vec::with_capacity(word.len());
        while !word.is_empty() {
            let mut best: Option<usize> = None;
            for i in 0..word.len() {
                let movable = word[..i].iter().all(|&(b, _)| self.commute(b, word[i].0));
                if movable && best.is_none_or(|j| word[i].0 < word[j].0) {
                    best = Some(i);
                }
            }
            out.push(word.remove(best.expect("first syllable is always movable")));
        }
        Chamber(out)
    }

    /// Index of a syllable with letter `s` that can be shuffled to the end.
    fn trailing(&self, word: &[(u8, u8)], s: u8) -> Option<usize> {
        for i in (0..word.len()).rev() {
            if word[i].0 == s {
                return Some(i);
            }
            if !self.commute(word[i].0, s) {
                return None;
            }
        }
        None
    }

    /// `g · c_s^k`.
    pub fn mul_syllable(&self, g: &Chamber, s: usize, k: u32) -> Chamber {
        let modulus = self.q as u32 + 1;
        let k = k % modulus;
        let s = s as u8;
        let mut word = g.0.clone();
        if k == 0 {
            return g.clone();
        }
        match self.trailing(&word, s) {
            Some(i) => {
                let p = (word[i].1 as u32 + k) % modulus;
                if p == 0 {
                    word.remove(i);
                } else {
                    word[i].1 = p as u8;
                }
            }
            None => word.push((s, k as u8)),
        }
        self.canonical(word)
    }

    pub fn multiply(&self, g: &Chamber, h: &Chamber) -> Chamber {
        h.0.iter().fold(g.clone(), |acc, &(s, k)| self.mul_syllable(&acc, s as usize, k as u32))
    }

    pub fn inverse(&self, g: &Chamber) -> Chamber {
        let modulus = self.q + 1;
        self.canonical(g.0.iter().rev().map(|&(s, k)| (s, modulus - k)).collect())
    }

    /// Shortest element of `gΓ_T`.
    pub fn min_coset_rep(&self, g: &Chamber, t: GenSet) -> Chamber {
        let mut word = g.0.clone();
        'outer: loop {
            for s in t.iter() {
                if let Some(i) = self.trailing(&word, s as u8) {
                    word.remove(i);
                    continue 'outer;
                }
            }
            break;
        }
        self.canonical(word)
    }

    fn is_min_coset_rep(&self, g: &Chamber, t: GenSet) -> bool {
        t.iter().all(|s| self.trailing(&g.0, s as u8).is_none())
    }

    /// Image in `W` under `c_s^k ↦ s`.
    pub fn project(&self, g: &Chamber) -> Result<GroupElement> {
        self.system.normal_form(&g.letters().collect::<Vec<_>>())
    }

    /// The `W`-valued distance `δ(g, h) = π(g⁻¹h)`.
    pub fn weyl_distance(&self, g: &Chamber, h: &Chamber) -> Result<GroupElement> {
        self.project(&self.multiply(&self.inverse(g), h))
    }

    /// The `s`-panel of `g`: `{g c_s^k : 0 ≤ k ≤ q}`.
    pub fn panel(&self, g: &Chamber, s: usize) -> Vec<Chamber> {
        (0..=self.q as u32).map(|k| self.mul_syllable(g, s, k)).collect()
    }
}

/// Simplex `(gΓ_{T_0}, T_0 ⊊ … ⊊ T_k)` of the building.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BuildingCell {
    pub rep: Chamber,
    pub chain: Vec<GenSet>,
}

/// Serializable content of a building ball.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuildingData {
    pub q: u32,
    pub radius: usize,
    /// Chambers sorted by syllable length, then normal form.
    pub chambers: Vec<Chamber>,
    pub cells: Vec<Vec<BuildingCell>>,
    pub faces: Vec<Vec<Vec<(u32, i8)>>>,
    pub expected_cofaces: Vec<Vec<u32>>,
}

/// Finite ball of the building with simplicial incidences and interior flags.
#[derive(Clone, Debug)]
pub struct BuildingSlice {
    group: GraphProduct,
    data: BuildingData,
    interior: Vec<Vec<bool>>,
    index: Vec<HashMap<(Chamber, Vec<GenSet>), usize>>,
}

/// Chambers of syllable length `≤ radius` and the simplices they span.
pub fn build_building_ball(system: &CoxeterSystem, q: u32, radius: usize) -> Result<BuildingSlice> {
    build_building_ball_capped(system, q, radius, DEFAULT_CHAMBER_CAP)
}

pub fn build_building_ball_capped(system: &CoxeterSystem, q: u32, radius: usize, cap: usize) -> Result<BuildingSlice> {
    let group = GraphProduct::new(system, q)?;
    let n = system.rank();

    let mut shells: Vec<Vec<Chamber>> = vec![vec![Chamber::identity()]];
    let mut total = 1usize;
    for d in 0..radius {
        let mut next = HashSet::new();
        for g in &shells[d] {
            for s in 0..n {
                for k in 1..=q {
                    let h = group.mul_syllable(g, s, k);
                    if h.len() == d + 1 {
                        next.insert(h);
                    }
                }
            }
        }
        total += next.len();
        if total > cap {
            return Err(Error::ResourceCap(format!("building ball exceeds {cap} chambers at radius {}", d + 1)));
        }
        let mut next: Vec<Chamber> = next.into_iter().collect();
        next.sort();
        shells.push(next);
    }
    let chambers: Vec<Chamber> = shells.into_iter().flatten().collect();

    let sets: Vec<GenSet> = system.spherical_subsets()?.into_iter().map(|s| s.set).collect();
    let all_chains = chains(&sets);
    let dim = all_chains.iter().map(Vec::len).max().unwrap_or(1) - 1;
    let mut cells: Vec<Vec<BuildingCell>> = vec![Vec::new(); dim + 1];
    for chain in &all_chains {
        for g in &chambers {
            if group.is_min_coset_rep(g, chain[0]) {
                cells[chain.len() - 1].push(BuildingCell { rep: g.clone(), chain: chain.clone() });
            }
        }
    }
    let index = make_index(&cells);

    let modulus = BigInt::from(q + 1);
    let mut faces: Vec<Vec<Vec<(u32, i8)>>> = cells.iter().map(|c| vec![Vec::new(); c.len()]).collect();
    let mut expected: Vec<Vec<u32>> = cells.iter().map(|c| vec![0; c.len()]).collect();
    for k in 0..cells.len() {
        for (c, cell) in cells[k].iter().enumerate() {
            let chain = &cell.chain;
            if chain.len() > 1 {
                for j in 0..chain.len() {
                    let mut rest = chain.clone();
                    rest.remove(j);
                    let rep = if j == 0 { group.min_coset_rep(&cell.rep, chain[1]) } else { cell.rep.clone() };
                    let f = index[k - 1].get(&(rep, rest)).ok_or_else(|| {
                        Error::SliceMismatch("face of a building simplex is missing from the ball".into())
                    })?;
                    faces[k][c].push((*f as u32, if j % 2 == 0 { 1 } else { -1 }));
                }
            }
            let mut count = 0u64;
            for j in 1..=chain.len() {
                let lo = chain[j - 1];
                count += sets
                    .iter()
                    .filter(|&&s| s != lo && lo.is_subset_of(s) && chain.get(j).is_none_or(|&hi| s != hi && s.is_subset_of(hi)))
                    .count() as u64;
            }
            let t0 = chain[0];
            for &s in &sets {
                if s != t0 && s.is_subset_of(t0) {
                    let split = modulus.pow((t0.len() - s.len()) as u32);
                    count += u64::try_from(split).map_err(|_| Error::ResourceCap("coface count overflow".into()))?;
                }
            }
            expected[k][c] = u32::try_from(count).map_err(|_| Error::ResourceCap("coface count overflow".into()))?;
        }
    }

    BuildingSlice::from_data(system, BuildingData { q, radius, chambers, cells, faces, expected_cofaces: expected })
}

fn make_index(cells: &[Vec<BuildingCell>]) -> Vec<HashMap<(Chamber, Vec<GenSet>), usize>> {
    cells
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(i, c)| ((c.rep.clone(), c.chain.clone()), i)).collect())
        .collect()
}

impl BuildingSlice {
    /// Reassembles a slice from (possibly cached) data.
    pub fn from_data(system: &CoxeterSystem, data: BuildingData) -> Result<Self> {
        let group = GraphProduct::new(system, data.q)?;
        let index = make_index(&data.cells);
        let mut cofaces: Vec<Vec<Vec<u32>>> = data.cells.iter().map(|c| vec![Vec::new(); c.len()]).collect();
        for (k, per_cell) in data.faces.iter().enumerate() {
            for (c, faces) in per_cell.iter().enumerate() {
                for &(f, _) in faces {
                    cofaces[k - 1][f as usize].push(c as u32);
                }
            }
        }
        let mut interior: Vec<Vec<bool>> = data.cells.iter().map(|c| vec![false; c.len()]).collect();
        for k in (0..data.cells.len()).rev() {
            for c in 0..data.cells[k].len() {
                interior[k][c] = cofaces[k][c].len() as u32 == data.expected_cofaces[k][c]
                    && cofaces[k][c].iter().all(|&t| interior[k + 1][t as usize]);
            }
        }
        Ok(BuildingSlice { group, data, interior, index })
    }

    pub fn group(&self) -> &GraphProduct {
        &self.group
    }

    pub fn system(&self) -> &CoxeterSystem {
        self.group.system()
    }

    pub fn data(&self) -> &BuildingData {
        &self.data
    }

    pub fn q(&self) -> u32 {
        self.data.q
    }

    pub fn chambers(&self) -> &[Chamber] {
        &self.data.chambers
    }

    pub fn cells(&self, k: usize) -> &[BuildingCell] {
        self.data.cells.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.data.cells.iter().map(Vec::len).collect()
    }

    pub fn find(&self, k: usize, rep: &Chamber, chain: &[GenSet]) -> Option<usize> {
        self.index.get(k)?.get(&(rep.clone(), chain.to_vec())).copied()
    }

    /// Building radius minus the largest diameter of a spherical residue.
    pub fn safe_radius(&self) -> usize {
        let diameter = self.data.cells.len() - 1;
        self.data.radius.saturating_sub(diameter)
    }

    /// Chambers per syllable length.
    pub fn shell_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.data.radius + 1];
        for g in &self.data.chambers {
            sizes[g.len()] += 1;
        }
        sizes
    }

    /// Panels lying entirely inside the ball, and how many of them fail to
    /// have exactly `q+1` chambers.
    pub fn panel_report(&self) -> PanelReport {
        let mut panels: BTreeMap<(usize, Chamber), usize> = BTreeMap::new();
        for g in &self.data.chambers {
            for s in 0..self.system().rank() {
                let base = self.group.min_coset_rep(g, GenSet::singleton(s));
                *panels.entry((s, base)).or_default() += 1;
            }
        }
        let complete: Vec<usize> =
            panels.iter().filter(|((_, base), _)| base.len() < self.data.radius).map(|(_, &n)| n).collect();
        PanelReport {
            panels_checked: complete.len(),
            irregular: complete.iter().filter(|&&n| n != self.q() as usize + 1).count(),
        }
    }

    /// Compares shell sizes within the safe radius with `N_W(d) q^d`.
    pub fn shell_report(&self) -> Result<Vec<ShellCount>> {
        let ball = self.system().enumerate_ball(self.safe_radius())?;
        let sizes = self.shell_sizes();
        Ok(ball
            .profile()
            .iter()
            .enumerate()
            .map(|(d, &nw)| ShellCount { d, found: sizes[d], expected: nw * (self.q() as usize).pow(d as u32) })
            .collect())
    }
}

impl CellComplex for BuildingSlice {
    fn top_dim(&self) -> usize {
        self.data.cells.len().saturating_sub(1)
    }

    fn num_cells(&self, k: usize) -> usize {
        self.cells(k).len()
    }

    fn faces(&self, k: usize, c: usize) -> &[(u32, i8)] {
        if k == 0 {
            return &[];
        }
        &self.data.faces[k][c]
    }

    fn weight_exp(&self, k: usize, c: usize) -> usize {
        self.cells(k)[c].rep.len()
    }

    fn interior_mask(&self, k: usize) -> &[bool] {
        self.interior.get(k).map_or(&[], Vec::as_slice)
    }

    fn base_cells(&self, k: usize) -> Vec<usize> {
        self.cells(k).iter().enumerate().filter(|(_, c)| c.rep.is_identity()).map(|(i, _)| i).collect()
    }

    /// `1/|Γ_{T_0}| = 1/(q+1)^{|T_0|}`, independent of `t`.
    fn base_weight(&self, k: usize, c: usize, _t: &BigRational) -> f64 {
        let order = (self.q() as f64 + 1.0).powi(self.cells(k)[c].chain[0].len() as i32);
        1.0 / order
    }

    fn describe(&self, k: usize, c: usize) -> String {
        let cell = &self.cells(k)[c];
        let names = self.system().labels();
        let rep = if cell.rep.is_identity() {
            "e".to_string()
        } else {
            cell.rep.0.iter().map(|&(s, p)| format!("{}^{p}", names[s as usize])).collect::<Vec<_>>().join(" ")
        };
        let chain: Vec<String> = cell
            .chain
            .iter()
            .map(|s| format!("{{{}}}", s.iter().map(|g| names[g].as_str()).collect::<Vec<_>>().join(",")))
            .collect();
        format!("{rep} {}", chain.join("<"))
    }

    fn cellulation(&self) -> Cellulation {
        Cellulation::St
    }

    fn radius(&self) -> usize {
        self.data.radius
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PanelReport {
    pub panels_checked: usize,
    pub irregular: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShellCount {
    pub d: usize,
    pub found: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberMismatch {
    pub cell: String,
    pub expected: u64,
    pub found: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    pub safe_radius: usize,
    pub cells_checked: usize,
    pub mismatches: Vec<FiberMismatch>,
}

impl FiberReport {
    pub fn is_exact(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn check_pair(b: &BuildingSlice, s: &ComplexSlice) -> Result<()> {
    if s.cellulation() != Cellulation::St {
        return Err(Error::SliceMismatch(format!("expected an st slice of the Davis complex, got {}", s.cellulation())));
    }
    if s.system().content_hash() != b.system().content_hash() {
        return Err(Error::SliceMismatch("building and slice use different systems".into()));
    }
    if s.radius() > b.data.radius {
        return Err(Error::SliceMismatch(format!(
            "slice radius {} exceeds building radius {}",
            s.radius(),
            b.data.radius
        )));
    }
    Ok(())
}

/// Counts, for every cell of `Σ` within the safe radius, the building
/// simplices over it; each fiber should have `q^{d(σ)}` elements.
pub fn fiber_counts(bslice: &BuildingSlice, sslice: &ComplexSlice) -> Result<FiberReport> {
    check_pair(bslice, sslice)?;
    let safe = bslice.safe_radius().min(sslice.radius());
    let mut counts: HashMap<(usize, usize), u64> = HashMap::new();
    for k in 0..=bslice.top_dim() {
        for cell in bslice.cells(k) {
            if cell.rep.len() > safe {
                continue;
            }
            let w = bslice.group.project(&cell.rep)?;
            if let Some(idx) = sslice.find(k, &w, &cell.chain) {
                *counts.entry((k, idx)).or_default() += 1;
            }
        }
    }
    let q = bslice.q() as u64;
    let mut report = FiberReport { safe_radius: safe, cells_checked: 0, mismatches: Vec::new() };
    for k in 0..=sslice.top_dim() {
        for (idx, cell) in sslice.cells(k).iter().enumerate() {
            if cell.weight_exp() > safe {
                continue;
            }
            report.cells_checked += 1;
            let expected = q.pow(cell.weight_exp() as u32);
            let found = counts.get(&(k, idx)).copied().unwrap_or(0);
            if found != expected {
                report.mismatches.push(FiberMismatch { cell: sslice.describe(k, idx), expected, found });
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub degree: usize,
    /// `Σ_{σ ⊂ X} |lift f(σ)|²`.
    pub lift_norm_sq: String,
    /// `Σ_{σ ⊂ Σ} |f(σ)|² q^{d(σ)}`.
    pub weighted_norm_sq: String,
    pub norm_identity: bool,
    /// Building `(k+1)`-cells on which `δ(lift f) = lift(δf)` was compared.
    pub cells_compared: usize,
    pub delta_commutes: bool,
}

/// Lifts a `k`-cochain on `Σ` to the building (constant on fibers) and checks
/// `‖lift f‖² = ‖f‖²_{q}` and `δ ∘ lift = lift ∘ δ`, exactly.
pub fn transfer_check(bslice: &BuildingSlice, sslice: &ComplexSlice, k: usize, f: &[BigRational]) -> Result<TransferReport> {
    check_pair(bslice, sslice)?;
    if f.len() != sslice.num_cells(k) {
        return Err(Error::InvalidArgument(format!("cochain has {} entries, expected {}", f.len(), sslice.num_cells(k))));
    }
    let q = BigRational::from_integer(BigInt::from(bslice.q()));
    let lift = |deg: usize, g: &[BigRational]| -> Result<Vec<Option<BigRational>>> {
        bslice
            .cells(deg)
            .iter()
            .map(|cell| {
                let w = bslice.group.project(&cell.rep)?;
                Ok(sslice.find(deg, &w, &cell.chain).map(|i| g[i].clone()))
            })
            .collect()
    };

    let lifted = lift(k, f)?;
    let lift_norm: BigRational = lifted.iter().flatten().map(|v| v * v).sum();
    let weighted: BigRational = sslice
        .cells(k)
        .iter()
        .zip(f)
        .map(|(cell, v)| v * v * num_traits::pow(q.clone(), cell.weight_exp()))
        .sum();

    let mut compared = 0;
    let mut commutes = true;
    if k < bslice.top_dim() {
        let df = sslice.coboundary(k, f);
        let lifted_df = lift(k + 1, &df)?;
        for (tau, target) in lifted_df.iter().enumerate() {
            let Some(target) = target else { continue };
            let mut acc = BigRational::zero();
            for &(sigma, sign) in bslice.faces(k + 1, tau) {
                let v = lifted[sigma as usize]
                    .as_ref()
                    .ok_or_else(|| Error::SliceMismatch("face projects outside the slice".into()))?;
                if sign > 0 {
                    acc += v;
                } else {
                    acc -= v;
                }
            }
            compared += 1;
            commutes &= &acc == target;
        }
    }
    Ok(TransferReport {
        degree: k,
        norm_identity: lift_norm == weighted,
        lift_norm_sq: crate::scalar::format_rational(&lift_norm),
        weighted_norm_sq: crate::scalar::format_rational(&weighted),
        cells_compared: compared,
        delta_commutes: commutes,
    })
}

/// Random integer `k`-cochains on `Σ` supported on cells with `d ≤ max_d`.
pub fn sample_cochains(sslice: &ComplexSlice, k: usize, max_d: usize, count: usize, seed: u64) -> Vec<Vec<BigRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            sslice
                .cells(k)
                .iter()
                .map(|c| {
                    let v = if c.weight_exp() <= max_d { rng.gen_range(-5i64..=5) } else { 0 };
                    BigRational::from_integer(v.into())
                })
                .collect()
        })
        .collect()
}

/// Trace estimate of the `i`-th L² Betti number of the building, using the
/// counting measure and `ν = 1/(q+1)^{|T_0|}` on base simplices.
pub fn building_betti(bslice: &BuildingSlice, i: usize, opts: SolverOptions) -> Result<BettiEstimate> {
    betti_estimate_on_slice(bslice, i, &BigRational::one(), Scheme::Interior, opts)
}
