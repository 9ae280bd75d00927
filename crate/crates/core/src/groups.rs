//! Disjoint partitions of the penalized coefficients.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Partition of the penalized coefficient indices `0..len` into disjoint groups.
///
/// Group ids are dense (`0..n_groups`) and numbered in order of first
/// appearance, so two label vectors that induce the same partition produce
/// equal indices. A partition made only of singletons is the entry-wise
/// (LASSO) penalty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupIndex {
    group_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl GroupIndex {
    /// Every coefficient in its own group.
    pub fn singletons(len: usize) -> Self {
        GroupIndex {
            group_of: (0..len).collect(),
            members: (0..len).map(|j| vec![j]).collect(),
        }
    }

    /// Builds the partition induced by arbitrary labels, one per coefficient.
    pub fn from_labels<L: Eq + Hash + Clone>(labels: &[L]) -> Self {
        let mut dense: HashMap<L, usize> = HashMap::new();
        let mut group_of = Vec::with_capacity(labels.len());
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (j, label) in labels.iter().enumerate() {
            let next = dense.len();
            let g = *dense.entry(label.clone()).or_insert(next);
            if g == members.len() {
                members.push(Vec::new());
            }
            members[g].push(j);
            group_of.push(g);
        }
        GroupIndex { group_of, members }
    }

    /// Consecutive blocks with the given sizes.
    pub fn contiguous(sizes: &[usize]) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::InvalidArgument("empty group in block layout".into()));
        }
        let labels: Vec<usize> = sizes
            .iter()
            .enumerate()
            .flat_map(|(g, &s)| std::iter::repeat_n(g, s))
            .collect();
        Ok(Self::from_labels(&labels))
    }

    /// Number of coefficients covered.
    pub fn len(&self) -> usize {
        self.group_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.group_of.is_empty()
    }

    pub fn n_groups(&self) -> usize {
        self.members.len()
    }

    pub fn group_of(&self, j: usize) -> usize {
        self.group_of[j]
    }

    pub fn labels(&self) -> &[usize] {
        &self.group_of
    }

    pub fn members(&self, g: usize) -> &[usize] {
        &self.members[g]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.members.iter().map(Vec::as_slice)
    }

    pub fn is_entrywise(&self) -> bool {
        self.members.iter().all(|m| m.len() == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_densified_in_first_appearance_order() {
        let g = GroupIndex::from_labels(&[7, 3, 7, 9, 3]);
        assert_eq!(g.labels(), &[0, 1, 0, 2, 1]);
        assert_eq!(g.members(0), &[0, 2]);
        assert_eq!(g.n_groups(), 3);
        assert!(!g.is_entrywise());
    }

    #[test]
    fn singletons_are_entrywise() {
        let g = GroupIndex::singletons(4);
        assert!(g.is_entrywise());
        assert_eq!(g, GroupIndex::from_labels(&["a", "b", "c", "d"]));
    }

    #[test]
    fn contiguous_blocks() {
        let g = GroupIndex::contiguous(&[2, 1, 3]).unwrap();
        assert_eq!(g.labels(), &[0, 0, 1, 2, 2, 2]);
        assert!(GroupIndex::contiguous(&[1, 0]).is_err());
    }
}
