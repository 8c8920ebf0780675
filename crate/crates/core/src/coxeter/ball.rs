use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{CoxeterSystem, GroupElement};
use crate::{Error, Result};

/// Default element limit for ball enumeration.
pub const DEFAULT_ELEMENT_CAP: usize = 2_000_000;

/// All elements of length at most `radius`, grouped into length shells,
/// each shell in ShortLex order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ball {
    radius: usize,
    shells: Vec<Vec<GroupElement>>,
    #[serde(skip)]
    index: HashMap<GroupElement, usize>,
}

impl Ball {
    pub(crate) fn from_shells(radius: usize, shells: Vec<Vec<GroupElement>>) -> Self {
        let mut b = Ball { radius, shells, index: HashMap::new() };
        b.reindex();
        b
    }

    /// Rebuilds the lookup table (needed after deserialization).
    pub fn reindex(&mut self) {
        self.index = self.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn shells(&self) -> &[Vec<GroupElement>] {
        &self.shells
    }

    pub fn len(&self) -> usize {
        self.shells.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Shell sizes `(#length 0, #length 1, …)`.
    pub fn profile(&self) -> Vec<usize> {
        self.shells.iter().map(Vec::len).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.shells.iter().flatten()
    }

    /// Position of `w` in the global (BFS, ShortLex) ordering.
    pub fn index_of(&self, w: &GroupElement) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn contains(&self, w: &GroupElement) -> bool {
        self.index.contains_key(w)
    }
}

impl CoxeterSystem {
    /// Enumerates the ball of the given radius with the default element cap.
    pub fn enumerate_ball(&self, radius: usize) -> Result<Ball> {
        self.enumerate_ball_capped(radius, DEFAULT_ELEMENT_CAP)
    }

    /// Breadth-first enumeration; fails once more than `cap` elements have
    /// been produced.
    pub fn enumerate_ball_capped(&self, radius: usize, cap: usize) -> Result<Ball> {
        let mut shells = vec![vec![GroupElement::identity()]];
        let mut total = 1;
        for _ in 0..radius {
            let last = shells.last().unwrap();
            let mut next = BTreeSet::new();
            for w in last {
                for s in 0..self.rank() {
                    let (ws, longer) = self.mul_gen(w, s)?;
                    if longer {
                        next.insert(ws);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            total += next.len();
            if total > cap {
                return Err(Error::ResourceCap(format!("ball exceeds the element limit of {cap}")));
            }
            shells.push(next.into_iter().collect());
        }
        Ok(Ball::from_shells(radius, shells))
    }
}
