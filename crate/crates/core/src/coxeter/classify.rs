//! Recognition of finite parabolic subgroups via the classification of
//! connected finite Coxeter graphs.

use serde::{Deserialize, Serialize};

use super::{CoxeterSystem, GenSet, INFINITY};
use crate::poly::Poly;
use crate::Result;

/// Type of an irreducible finite Coxeter group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiniteType {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    H3,
    H4,
    I2(u32),
}

/// A spherical subset `T` together with the growth polynomial of `W_T`.
#[derive(Clone, Debug)]
pub struct SphericalSubset {
    pub set: GenSet,
    pub components: Vec<FiniteType>,
    /// `W_T(t) = Σ_{w ∈ W_T} t^{d(w)}`.
    pub growth: Poly,
}

impl SphericalSubset {
    /// Length of the longest element of `W_T`.
    pub fn longest_length(&self) -> usize {
        self.growth.degree().unwrap_or(0)
    }

    pub fn order(&self) -> u64 {
        self.growth.eval_f64(1.0).round() as u64
    }
}

impl CoxeterSystem {
    /// Connected components of the Coxeter graph restricted to `t`
    /// (edges are pairs with `m ≠ 2`).
    pub fn graph_components(&self, t: GenSet) -> Vec<GenSet> {
        let mut left = t;
        let mut out = Vec::new();
        while let Some(start) = left.iter().next() {
            let mut comp = GenSet::singleton(start);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for u in left.iter() {
                    if !comp.contains(u) && self.m(u, v) != 2 {
                        comp = comp.insert(u);
                        stack.push(u);
                    }
                }
            }
            left = GenSet(left.0 & !comp.0);
            out.push(comp);
        }
        out
    }

    /// Classifies `W_T`; `None` when it is infinite.
    pub fn finite_type(&self, t: GenSet) -> Option<Vec<FiniteType>> {
        self.graph_components(t).into_iter().map(|c| self.classify_component(c)).collect()
    }

    pub fn is_spherical(&self, t: GenSet) -> bool {
        self.finite_type(t).is_some()
    }

    fn classify_component(&self, comp: GenSet) -> Option<FiniteType> {
        let nodes: Vec<usize> = comp.iter().collect();
        let n = nodes.len();
        if n == 1 {
            return Some(FiniteType::A(1));
        }
        let mut edges = Vec::new();
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                match self.m(a, b) {
                    2 => {}
                    INFINITY => return None,
                    m => edges.push((a, b, m)),
                }
            }
        }
        if n == 2 {
            let m = edges[0].2;
            return Some(if m == 3 { FiniteType::A(2) } else if m == 4 { FiniteType::B(2) } else { FiniteType::I2(m) });
        }
        // connected with n-1 edges means a tree
        if edges.len() != n - 1 || edges.iter().any(|e| e.2 > 5) {
            return None;
        }
        let degree = |v: usize| edges.iter().filter(|e| e.0 == v || e.1 == v).count();
        let is_leaf_edge = |e: &(usize, usize, u32)| degree(e.0) == 1 || degree(e.1) == 1;
        let count4 = edges.iter().filter(|e| e.2 == 4).count();
        let count5 = edges.iter().filter(|e| e.2 == 5).count();
        let branch: Vec<usize> = nodes.iter().copied().filter(|&v| degree(v) >= 3).collect();
        if nodes.iter().any(|&v| degree(v) > 3) || branch.len() > 1 {
            return None;
        }
        if let Some(&centre) = branch.first() {
            if count4 + count5 > 0 {
                return None;
            }
            let mut arms: Vec<usize> = edges
                .iter()
                .filter(|e| e.0 == centre || e.1 == centre)
                .map(|e| arm_length(&edges, centre, if e.0 == centre { e.1 } else { e.0 }))
                .collect();
            arms.sort_unstable();
            return match (arms[0], arms[1], arms[2]) {
                (1, 1, _) => Some(FiniteType::D(n)),
                (1, 2, 2..=4) => Some(FiniteType::E(n)),
                _ => None,
            };
        }
        match (count4, count5) {
            (0, 0) => Some(FiniteType::A(n)),
            (1, 0) => {
                let e = edges.iter().find(|e| e.2 == 4).unwrap();
                if is_leaf_edge(e) {
                    Some(FiniteType::B(n))
                } else if n == 4 {
                    Some(FiniteType::F4)
                } else {
                    None
                }
            }
            (0, 1) => {
                let e = edges.iter().find(|e| e.2 == 5).unwrap();
                match (n, is_leaf_edge(e)) {
                    (3, true) => Some(FiniteType::H3),
                    (4, true) => Some(FiniteType::H4),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Growth polynomial of a finite parabolic subgroup, by enumeration.
    pub fn parabolic_growth(&self, t: GenSet) -> Result<Poly> {
        if !self.is_spherical(t) {
            return Err(crate::Error::NotSpherical(t.iter().collect()));
        }
        let elements = self.parabolic_elements(t)?;
        let top = elements.last().map_or(0, |w| w.len());
        let mut counts = vec![0i64; top + 1];
        for w in &elements {
            counts[w.len()] += 1;
        }
        Ok(Poly::from_ints(&counts))
    }

    /// All spherical subsets, ordered by size and then by member list.
    pub fn spherical_subsets(&self) -> Result<Vec<SphericalSubset>> {
        let rank = self.rank();
        if rank > 24 {
            return Err(crate::Error::ResourceCap(format!("rank {rank} too large to enumerate subsets")));
        }
        let mut sets: Vec<GenSet> = (0..1u64 << rank).map(GenSet).filter(|&t| self.is_spherical(t)).collect();
        sets.sort_by_key(|t| (t.len(), t.iter().collect::<Vec<_>>()));
        sets.into_iter()
            .map(|set| {
                Ok(SphericalSubset { set, components: self.finite_type(set).unwrap(), growth: self.parabolic_growth(set)? })
            })
            .collect()
    }
}

/// Number of vertices on the branch leaving `centre` through `first`.
fn arm_length(edges: &[(usize, usize, u32)], centre: usize, first: usize) -> usize {
    let (mut prev, mut cur, mut len) = (centre, first, 1);
    loop {
        let next = edges
            .iter()
            .filter_map(|e| if e.0 == cur && e.1 != prev { Some(e.1) } else if e.1 == cur && e.0 != prev { Some(e.0) } else { None })
            .next();
        match next {
            Some(v) => {
                prev = cur;
                cur = v;
                len += 1;
            }
            None => return len,
        }
    }
}
