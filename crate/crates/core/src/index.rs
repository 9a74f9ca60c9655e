//! Index subsets I ⊆ J = {0, .., n-1}.

use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// A sorted, duplicate-free set of component indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSubset(Vec<usize>);

impl IndexSubset {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        IndexSubset(indices)
    }

    pub fn empty() -> Self {
        IndexSubset(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        IndexSubset((0..n).collect())
    }

    /// Subset whose members are the set bits of `mask`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        IndexSubset((0..n).filter(|&j| mask >> j & 1 == 1).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// First member that is not a valid index into `n` components.
    pub fn out_of_range(&self, n: usize) -> Option<usize> {
        self.0.iter().copied().find(|&j| j >= n)
    }

    pub fn complement(&self, n: usize) -> IndexSubset {
        IndexSubset((0..n).filter(|&j| !self.contains(j)).collect())
    }

    /// All 2^n subsets when `n <= max_exhaustive`, otherwise `sample_size`
    /// distinct random subsets (always including ∅ and J).
    pub fn enumerate<R: Rng + ?Sized>(
        n: usize,
        max_exhaustive: usize,
        sample_size: usize,
        rng: &mut R,
    ) -> Vec<IndexSubset> {
        if n <= max_exhaustive && n < 64 {
            return (0..1u64 << n).map(|m| IndexSubset::from_mask(m, n)).collect();
        }
        let mut out = vec![IndexSubset::empty(), IndexSubset::full(n)];
        let mut seen: std::collections::BTreeSet<IndexSubset> = out.iter().cloned().collect();
        let mut guard = 0;
        while out.len() < sample_size.max(2) && guard < sample_size * 64 {
            guard += 1;
            let k = rng.random_range(0..=n);
            let picked = IndexSubset::new(sample(rng, n, k).into_vec());
            if seen.insert(picked.clone()) {
                out.push(picked);
            }
        }
        out
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, j) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}
