//! Finite topological sites: a point set with the topology generated by a
//! family of cover sets, plus an adjacency graph used for connectivity.
//!
//! Sets are `u128` bitmasks, so sites have at most 128 points. Topologies
//! are capped at [`MAX_OPENS`] open sets.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 128;
pub const MAX_OPENS: usize = 1 << 16;

pub type PointSet = u128;

pub fn mask(points: impl IntoIterator<Item = usize>) -> PointSet {
    points.into_iter().fold(0, |m, p| m | (1u128 << p))
}

pub fn members(set: PointSet) -> BTreeSet<usize> {
    (0..MAX_POINTS).filter(|&p| set >> p & 1 == 1).collect()
}

pub fn contains(set: PointSet, p: usize) -> bool {
    p < MAX_POINTS && set >> p & 1 == 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSite {
    points: usize,
    cover: Vec<PointSet>,
    opens: Vec<PointSet>,
    edges: Vec<(usize, usize)>,
}

impl FiniteSite {
    /// The topology generated by `cover_sets`: closed under finite
    /// intersections, then under unions, with `∅` and `X` added.
    pub fn new(points: usize, cover_sets: &[Vec<usize>], edges: Vec<(usize, usize)>) -> Result<Self> {
        if points == 0 || points > MAX_POINTS {
            return Err(Error::TopologyTooLarge(format!("{points} points; between 1 and {MAX_POINTS} are supported")));
        }
        let all: PointSet = if points == MAX_POINTS { u128::MAX } else { (1u128 << points) - 1 };
        let mut cover = Vec::new();
        for set in cover_sets {
            if let Some(p) = set.iter().find(|&&p| p >= points) {
                return Err(Error::Invalid(format!("cover point {p} is outside 0..{points}")));
            }
            cover.push(mask(set.iter().copied()));
        }
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= points || b >= points) {
            return Err(Error::Invalid(format!("edge ({a}, {b}) leaves the point set")));
        }
        let mut basis: BTreeSet<PointSet> = cover.iter().copied().collect();
        basis.insert(all);
        loop {
            let list: Vec<PointSet> = basis.iter().copied().collect();
            let before = basis.len();
            for (i, &a) in list.iter().enumerate() {
                for &b in &list[i + 1..] {
                    basis.insert(a & b);
                }
            }
            if basis.len() == before {
                break;
            }
            if basis.len() > MAX_OPENS {
                return Err(Error::TopologyTooLarge(format!("more than {MAX_OPENS} basic opens")));
            }
        }
        let mut opens: HashSet<PointSet> = HashSet::from([0]);
        for &b in &basis {
            let grown: Vec<PointSet> = opens.iter().map(|&o| o | b).collect();
            opens.extend(grown);
            if opens.len() > MAX_OPENS {
                return Err(Error::TopologyTooLarge(format!("more than {MAX_OPENS} open sets")));
            }
        }
        let mut opens: Vec<PointSet> = opens.into_iter().collect();
        opens.sort_unstable();
        Ok(FiniteSite {
            points,
            cover,
            opens,
            edges,
        })
    }

    /// A cycle graph of `n` points with arcs as cover sets.
    pub fn circle(n: usize, arcs: &[Vec<usize>]) -> Result<Self> {
        Self::new(n, arcs, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    /// A path graph of `n` points with intervals as cover sets.
    pub fn interval(n: usize, pieces: &[Vec<usize>]) -> Result<Self> {
        Self::new(n, pieces, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn point_count(&self) -> usize {
        self.points
    }

    pub fn whole(&self) -> PointSet {
        *self.opens.last().expect("X is open")
    }

    pub fn cover_sets(&self) -> &[PointSet] {
        &self.cover
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_open(&self, set: PointSet) -> bool {
        self.opens.binary_search(&set).is_ok()
    }

    pub fn opens_containing(&self, x: usize) -> impl Iterator<Item = PointSet> + '_ {
        self.opens.iter().copied().filter(move |&o| contains(o, x))
    }

    /// The smallest open set containing `x`.
    pub fn minimal_open(&self, x: usize) -> PointSet {
        self.opens_containing(x).fold(self.whole(), |a, b| a & b)
    }

    /// Connected components of `set` in the adjacency graph.
    pub fn components(&self, set: PointSet) -> Vec<PointSet> {
        let mut left = set;
        let mut out = Vec::new();
        while left != 0 {
            let start = left.trailing_zeros() as usize;
            let mut comp = 1u128 << start;
            loop {
                let mut grown = comp;
                for &(a, b) in &self.edges {
                    if contains(set, a) && contains(set, b) && (contains(comp, a) || contains(comp, b)) {
                        grown |= (1u128 << a) | (1u128 << b);
                    }
                }
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            out.push(comp);
            left &= !comp;
        }
        out
    }
}
