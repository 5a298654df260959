//! Basis labels for the exterior powers of `R^{2n}`.
//!
//! Coordinates are numbered `1..=2n`: index `i <= n` is `x_i`, index `n + i`
//! is `y_i`. A [`MultiIndex`] is a strictly increasing tuple of such indices
//! and names the monomial `dz_{i_1} ^ ... ^ dz_{i_k}`.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    /// Validates that `indices` is strictly increasing and inside `1..=dim`.
    pub fn new(indices: &[usize], dim: usize) -> Result<Self> {
        let fail = |reason: &str| Error::InvalidIndex {
            indices: indices.to_vec(),
            reason: reason.to_string(),
        };
        if dim > u8::MAX as usize {
            return Err(fail("ambient dimension too large"));
        }
        if indices.iter().any(|&i| i == 0 || i > dim) {
            return Err(fail(&format!("entries must lie in 1..={dim}")));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(fail("entries must be strictly increasing"));
        }
        Ok(MultiIndex(indices.iter().map(|&i| i as u8).collect()))
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub(crate) fn from_sorted(indices: Vec<u8>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        MultiIndex(indices)
    }

    /// Sorts an arbitrary sequence of distinct indices, returning the sorted
    /// index and whether the sorting permutation is odd. `None` on repeats.
    pub fn sort_signed(indices: &[usize]) -> Option<(MultiIndex, bool)> {
        let mut odd = false;
        for (a, b) in indices.iter().tuple_combinations() {
            if a == b {
                return None;
            }
            if a > b {
                odd = !odd;
            }
        }
        let sorted = indices.iter().sorted().map(|&i| i as u8).collect();
        Some((MultiIndex(sorted), odd))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&(i as u8)).is_ok()
    }

    pub fn max_index(&self) -> usize {
        self.0.last().map_or(0, |&i| i as usize)
    }

    /// Concatenates `self` and `other` and sorts. Returns `None` when they
    /// share an index, otherwise the merged index and whether the shuffle
    /// that sorts it is odd.
    pub fn merge(&self, other: &MultiIndex) -> Option<(MultiIndex, bool)> {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let mut inversions = 0usize;
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    // other[j] jumps over every remaining element of self
                    inversions += self.0.len() - i;
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => return None,
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Some((MultiIndex(out), inversions % 2 == 1))
    }

    /// The index with the entry at `position` removed.
    pub fn remove_at(&self, position: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v.remove(position);
        MultiIndex(v)
    }

    /// Indices of `1..=dim` not in `self`.
    pub fn complement(&self, dim: usize) -> MultiIndex {
        MultiIndex((1..=dim as u8).filter(|i| !self.0.contains(i)).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// The `C(dim, degree)` multi-indices of the given degree in lexicographic order.
pub fn basis(dim: usize, degree: usize) -> Vec<MultiIndex> {
    (1..=dim as u8).combinations(degree).map(MultiIndex).collect()
}

/// Lexicographically ordered basis of one exterior power, with position lookup.
#[derive(Clone, Debug)]
pub struct Basis {
    elems: Vec<MultiIndex>,
    positions: HashMap<MultiIndex, usize>,
}

impl Basis {
    pub fn new(dim: usize, degree: usize) -> Self {
        let elems = basis(dim, degree);
        let positions = elems.iter().enumerate().map(|(p, m)| (m.clone(), p)).collect();
        Basis { elems, positions }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[MultiIndex] {
        &self.elems
    }

    pub fn get(&self, position: usize) -> &MultiIndex {
        &self.elems[position]
    }

    pub fn position(&self, index: &MultiIndex) -> Option<usize> {
        self.positions.get(index).copied()
    }
}

pub fn binomial(n: usize, k: isize) -> usize {
    if k < 0 || k as usize > n {
        return 0;
    }
    let k = (k as usize).min(n - k as usize);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(MultiIndex::new(&[1, 3, 4], 4).is_ok());
        assert!(MultiIndex::new(&[3, 1], 4).is_err());
        assert!(MultiIndex::new(&[1, 1], 4).is_err());
        assert!(MultiIndex::new(&[0, 2], 4).is_err());
        assert!(MultiIndex::new(&[2, 5], 4).is_err());
    }

    #[test]
    fn merge_signs() {
        let a = MultiIndex::new(&[1, 3], 4).unwrap();
        let b = MultiIndex::new(&[2, 4], 4).unwrap();
        // (1,3,2,4) -> one inversion
        assert_eq!(a.merge(&b), Some((MultiIndex::new(&[1, 2, 3, 4], 4).unwrap(), true)));
        assert!(b.merge(&a).unwrap().1);
        let c = MultiIndex::new(&[3], 4).unwrap();
        assert_eq!(a.merge(&c), None);
    }

    #[test]
    fn sort_signed_matches_merge() {
        let (m, odd) = MultiIndex::sort_signed(&[1, 4, 2, 5]).unwrap();
        assert_eq!(m.to_vec(), vec![1, 2, 4, 5]);
        assert!(odd);
        assert!(MultiIndex::sort_signed(&[2, 2]).is_none());
    }

    #[test]
    fn basis_is_lexicographic() {
        let b = basis(4, 2);
        let v: Vec<_> = b.iter().map(|m| m.to_vec()).collect();
        assert_eq!(
            v,
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]
        );
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(basis(6, 0), vec![MultiIndex::empty()]);
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(6, -1), 0);
        assert_eq!(binomial(6, 7), 0);
    }
}
