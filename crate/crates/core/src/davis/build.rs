use std::collections::{BTreeMap, HashMap, HashSet};

use super::{Cell, Cellulation, SliceData};
use crate::coxeter::{CoxeterSystem, GenSet, GroupElement};
use crate::{Error, Result};

/// Default total cell limit for a slice.
pub const DEFAULT_CELL_CAP: usize = 5_000_000;

/// Finite parabolic data shared by the builders.
struct Parabolics {
    sets: Vec<GenSet>,
    elements: HashMap<GenSet, Vec<GroupElement>>,
    longest: HashMap<GenSet, usize>,
}

impl Parabolics {
    fn new(system: &CoxeterSystem) -> Result<Self> {
        let subsets = system.spherical_subsets()?;
        let mut elements = HashMap::new();
        let mut longest = HashMap::new();
        for sub in &subsets {
            longest.insert(sub.set, sub.longest_length());
            elements.insert(sub.set, system.parabolic_elements(sub.set)?);
        }
        Ok(Parabolics { sets: subsets.iter().map(|s| s.set).collect(), elements, longest })
    }

    fn contains(&self, t: GenSet) -> bool {
        self.longest.contains_key(&t)
    }

    fn order(&self, t: GenSet) -> usize {
        self.elements[&t].len()
    }

    /// Minimal representatives of `W_T / W_U` for `U ⊆ T`.
    fn coset_reps(&self, system: &CoxeterSystem, t: GenSet, u: GenSet) -> Result<Vec<GroupElement>> {
        let mut out = Vec::new();
        for x in &self.elements[&t] {
            let mut reduced = true;
            for s in u.iter() {
                if system.is_right_descent(x, s)? {
                    reduced = false;
                    break;
                }
            }
            if reduced {
                out.push(x.clone());
            }
        }
        Ok(out)
    }
}

fn is_reduced(system: &CoxeterSystem, w: &GroupElement, t: GenSet) -> Result<bool> {
    for s in t.iter() {
        if system.is_right_descent(w, s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Accepts only right-angled systems whose nerve (the flag complex of the
/// commutation graph) is a triangulated sphere of dimension ≤ 2.
pub fn check_ghd_eligible(system: &CoxeterSystem) -> Result<()> {
    if !system.is_right_angled() {
        return Err(Error::NotRightAngled);
    }
    let n = system.rank();
    let adj = |a: usize, b: usize| a != b && system.m(a, b) == 2;
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| adj(a, b)).collect();
    let triangles: Vec<(usize, usize, usize)> = edges
        .iter()
        .flat_map(|&(a, b)| (b + 1..n).filter(move |&c| adj(a, c) && adj(b, c)).map(move |c| (a, b, c)))
        .collect();
    let has_four_clique = triangles.iter().any(|&(a, b, c)| (c + 1..n).any(|d| adj(a, d) && adj(b, d) && adj(c, d)));
    if has_four_clique {
        return Err(Error::NotSphereNerve("nerve has dimension > 2".into()));
    }
    let connected = |verts: &[usize], edge: &dyn Fn(usize, usize) -> bool| {
        if verts.is_empty() {
            return true;
        }
        let mut seen = HashSet::from([verts[0]]);
        let mut stack = vec![verts[0]];
        while let Some(v) = stack.pop() {
            for &u in verts {
                if !seen.contains(&u) && edge(u, v) {
                    seen.insert(u);
                    stack.push(u);
                }
            }
        }
        seen.len() == verts.len()
    };
    let all: Vec<usize> = (0..n).collect();
    let is_cycle = |verts: &[usize]| {
        verts.len() >= 4 && verts.iter().all(|&v| verts.iter().filter(|&&u| adj(u, v)).count() == 2) && connected(verts, &adj)
    };
    if edges.is_empty() {
        return if n == 2 { Ok(()) } else { Err(Error::NotSphereNerve(format!("{n} isolated vertices is not S^0"))) };
    }
    if triangles.is_empty() {
        return if is_cycle(&all) { Ok(()) } else { Err(Error::NotSphereNerve("1-dimensional nerve is not a cycle".into())) };
    }
    for &(a, b) in &edges {
        let count = triangles.iter().filter(|&&(x, y, z)| [x, y, z].contains(&a) && [x, y, z].contains(&b)).count();
        if count != 2 {
            return Err(Error::NotSphereNerve(format!("edge ({a},{b}) lies in {count} triangles")));
        }
    }
    for v in 0..n {
        let link: Vec<usize> = (0..n).filter(|&u| adj(u, v)).collect();
        if !is_cycle(&link) {
            return Err(Error::NotSphereNerve(format!("link of vertex {v} is not a cycle")));
        }
    }
    let euler = n as i64 - edges.len() as i64 + triangles.len() as i64;
    if euler != 2 || !connected(&all, &adj) {
        return Err(Error::NotSphereNerve(format!("Euler characteristic {euler} != 2 or disconnected")));
    }
    Ok(())
}

/// All strictly increasing chains in `sets` (sorted by size), as vectors.
pub(crate) fn chains(sets: &[GenSet]) -> Vec<Vec<GenSet>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<GenSet>> = sets.iter().map(|&s| vec![s]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().unwrap();
        for &s in sets {
            if s != last && last.is_subset_of(s) {
                let mut longer = chain.clone();
                longer.push(s);
                stack.push(longer);
            }
        }
        out.push(chain);
    }
    out.sort_by_key(|c| (c.len(), c.iter().map(|s| (s.len(), s.iter().collect::<Vec<_>>())).collect::<Vec<_>>()));
    out
}

struct CellTable {
    cells: Vec<Vec<Cell>>,
    index: Vec<HashMap<(GroupElement, Vec<GenSet>), usize>>,
}

impl CellTable {
    fn new(dimension: usize) -> Self {
        CellTable { cells: vec![Vec::new(); dimension + 1], index: vec![HashMap::new(); dimension + 1] }
    }

    fn push(&mut self, cell: Cell) {
        let k = cell.dim;
        self.index[k].insert((cell.rep.clone(), cell.chain.clone()), self.cells[k].len());
        self.cells[k].push(cell);
    }

    fn lookup(&self, k: usize, rep: &GroupElement, chain: &[GenSet]) -> Result<u32> {
        self.index[k]
            .get(&(rep.clone(), chain.to_vec()))
            .map(|&i| i as u32)
            .ok_or_else(|| Error::SliceMismatch(format!("face {rep:?} {chain:?} missing from slice")))
    }

    fn total(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    fn sort(&mut self) {
        for (k, cells) in self.cells.iter_mut().enumerate() {
            cells.sort_by(|a, b| {
                a.rep.cmp(&b.rep).then_with(|| {
                    let key = |c: &Cell| c.chain.iter().map(|s| (s.len(), s.iter().collect::<Vec<_>>())).collect::<Vec<_>>();
                    key(a).cmp(&key(b))
                })
            });
            self.index[k] = cells.iter().enumerate().map(|(i, c)| ((c.rep.clone(), c.chain.clone()), i)).collect();
        }
    }
}

pub(super) fn build_data(system: &CoxeterSystem, cellulation: Cellulation, radius: usize, cap: usize) -> Result<SliceData> {
    if cellulation == Cellulation::Ghd {
        check_ghd_eligible(system)?;
    }
    let par = Parabolics::new(system)?;
    let dimension = par.sets.iter().map(|s| s.len()).max().unwrap_or(0);
    let ball = system.enumerate_ball(radius)?;
    let by_length: Vec<&[GroupElement]> = ball.shells().iter().map(Vec::as_slice).collect();
    let elements_up_to = |r: usize| by_length.iter().take(r + 1).flat_map(|s| s.iter());
    let mut table = CellTable::new(dimension);
    let check_cap = |table: &CellTable| {
        if table.total() > cap {
            Err(Error::ResourceCap(format!("slice exceeds the cell limit of {cap}")))
        } else {
            Ok(())
        }
    };

    match cellulation {
        Cellulation::Dual | Cellulation::Ghd => {
            for &t in &par.sets {
                // Dual blocks need every element of the coset inside the ball.
                let reach = match cellulation {
                    Cellulation::Dual => match radius.checked_sub(par.longest[&t]) {
                        Some(r) => r,
                        None => continue,
                    },
                    _ => radius,
                };
                let dim = if cellulation == Cellulation::Dual { t.len() } else { dimension - t.len() };
                for w in elements_up_to(reach) {
                    if is_reduced(system, w, t)? {
                        table.push(Cell { rep: w.clone(), chain: vec![t], dim });
                    }
                }
                check_cap(&table)?;
            }
        }
        Cellulation::St => {
            for chain in chains(&par.sets) {
                let t0 = chain[0];
                for w in elements_up_to(radius) {
                    if is_reduced(system, w, t0)? {
                        table.push(Cell { rep: w.clone(), chain: chain.clone(), dim: chain.len() - 1 });
                    }
                }
                check_cap(&table)?;
            }
        }
    }
    table.sort();

    let mut faces: Vec<Vec<Vec<(u32, i8)>>> = table.cells.iter().map(|c| vec![Vec::new(); c.len()]).collect();
    let mut expected: Vec<Vec<u32>> = table.cells.iter().map(|c| vec![0; c.len()]).collect();
    let mut reps_cache: BTreeMap<(GenSet, GenSet), Vec<GroupElement>> = BTreeMap::new();
    let mut coset_reps = |t: GenSet, u: GenSet| -> Result<Vec<GroupElement>> {
        if let Some(v) = reps_cache.get(&(t, u)) {
            return Ok(v.clone());
        }
        let v = par.coset_reps(system, t, u)?;
        reps_cache.insert((t, u), v.clone());
        Ok(v)
    };
    let sign = |pos: usize| if pos.is_multiple_of(2) { 1i8 } else { -1 };

    for k in 0..table.cells.len() {
        for c in 0..table.cells[k].len() {
            let cell = table.cells[k][c].clone();
            let t = cell.chain[0];
            match cellulation {
                Cellulation::Dual => {
                    for s in t.iter() {
                        let u = t.remove(s);
                        for x in coset_reps(t, u)? {
                            let rep = system.multiply(&cell.rep, &x)?;
                            let f = table.lookup(k - 1, &rep, &[u])?;
                            faces[k][c].push((f, sign(t.position(s))));
                        }
                    }
                    expected[k][c] = (0..system.rank()).filter(|&s| !t.contains(s) && par.contains(t.insert(s))).count() as u32;
                }
                Cellulation::Ghd => {
                    for s in 0..system.rank() {
                        let bigger = t.insert(s);
                        if t.contains(s) || !par.contains(bigger) {
                            continue;
                        }
                        let rep = system.min_coset_rep(&cell.rep, bigger)?;
                        let f = table.lookup(k - 1, &rep, &[bigger])?;
                        faces[k][c].push((f, sign(bigger.position(s))));
                    }
                    expected[k][c] = t.iter().map(|s| (par.order(t) / par.order(t.remove(s))) as u32).sum();
                }
                Cellulation::St => {
                    let chain = &cell.chain;
                    if chain.len() > 1 {
                        for j in 0..chain.len() {
                            let mut rest = chain.clone();
                            rest.remove(j);
                            let rep = if j == 0 { system.min_coset_rep(&cell.rep, chain[1])? } else { cell.rep.clone() };
                            let f = table.lookup(k - 1, &rep, &rest)?;
                            faces[k][c].push((f, sign(j)));
                        }
                    }
                    let mut count = 0u32;
                    // insertions after T_0 keep the coset
                    for j in 1..=chain.len() {
                        let lo = chain[j - 1];
                        count += par
                            .sets
                            .iter()
                            .filter(|&&s| s != lo && lo.is_subset_of(s) && chain.get(j).is_none_or(|&hi| s != hi && s.is_subset_of(hi)))
                            .count() as u32;
                    }
                    // insertions below T_0 split the coset
                    for &s in &par.sets {
                        if s != t && s.is_subset_of(t) {
                            count += (par.order(t) / par.order(s)) as u32;
                        }
                    }
                    expected[k][c] = count;
                }
            }
        }
    }
    Ok(SliceData { cellulation, radius, dimension, cells: table.cells, faces, expected_cofaces: expected })
}
