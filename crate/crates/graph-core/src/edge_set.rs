use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::EdgeId;

/// A set of edge ids of one host graph, stored as a bitmap over `0..m`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeSet {
    bits: FixedBitSet,
}

impl EdgeSet {
    pub fn new(m: usize) -> Self {
        EdgeSet {
            bits: FixedBitSet::with_capacity(m),
        }
    }

    /// The set `{0, .., m-1}`.
    pub fn full(m: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(m);
        bits.insert_range(..);
        EdgeSet { bits }
    }

    pub fn from_edges<I: IntoIterator<Item = EdgeId>>(m: usize, edges: I) -> Self {
        let mut set = EdgeSet::new(m);
        for e in edges {
            set.insert(e);
        }
        set
    }

    /// Size of the universe this set ranges over.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, e: EdgeId) {
        self.bits.insert(e as usize);
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.bits.set(e as usize, false);
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        self.bits.contains(e as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.bits.ones().map(|e| e as EdgeId)
    }

    pub fn union_with(&mut self, other: &EdgeSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &EdgeSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &EdgeSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// Number of 64-bit words backing the bitmap.
    pub fn words(&self) -> usize {
        self.bits.len().div_ceil(64)
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        let edges: Vec<EdgeId> = iter.into_iter().collect();
        let m = edges.iter().map(|&e| e as usize + 1).max().unwrap_or(0);
        EdgeSet::from_edges(m, edges)
    }
}
