//! Twist multisets, set and multiset partitions, and automorphism counts.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CombinatoricsError {
    #[error("r must be at least 2, got {0}")]
    BadRank(u32),
    #[error("twist {twist} out of range 0..={max} for r = {r}")]
    TwistOutOfRange { twist: u32, max: u32, r: u32 },
    #[error("{0} is not a partition of {1}")]
    NotAPartition(String, String),
    #[error("automorphism quotient {num}/{den} is not integral")]
    NonIntegral { num: u128, den: u128 },
}

/// Sorted multiset of internal twists `0 <= a_i <= r - 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwistMultiset {
    r: u32,
    entries: Vec<u32>,
}

impl TwistMultiset {
    pub fn new(r: u32, mut entries: Vec<u32>) -> Result<Self, CombinatoricsError> {
        if r < 2 {
            return Err(CombinatoricsError::BadRank(r));
        }
        if let Some(&twist) = entries.iter().find(|&&a| a + 2 > r) {
            return Err(CombinatoricsError::TwistOutOfRange {
                twist,
                max: r - 2,
                r,
            });
        }
        entries.sort_unstable();
        Ok(TwistMultiset { r, entries })
    }

    pub fn empty(r: u32) -> Self {
        TwistMultiset {
            r,
            entries: Vec::new(),
        }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// `r(I)`: `Σ a_i mod r`.
    pub fn residue(&self) -> u32 {
        self.sum() % self.r
    }

    /// `b_i = r - a_i`, each at least 2.
    pub fn b_values(&self) -> Vec<u32> {
        self.entries.iter().map(|a| self.r - a).collect()
    }

    /// `b_I = Σ (r - a_i)`.
    pub fn b_sum(&self) -> u32 {
        self.b_values().iter().sum()
    }

    pub fn aut_order(&self) -> u128 {
        aut_order(&self.entries)
    }

    /// The sub-multiset picked out by 1-based positions.
    pub fn select(&self, positions: &[usize]) -> TwistMultiset {
        let mut entries: Vec<u32> = positions.iter().map(|&i| self.entries[i - 1]).collect();
        entries.sort_unstable();
        TwistMultiset { r: self.r, entries }
    }

    /// Every nonempty sub-multiset, each distinct one once.
    pub fn sub_multisets(&self) -> Vec<TwistMultiset> {
        let l = self.len();
        let mut seen = BTreeSet::new();
        for mask in 1u64..(1u64 << l) {
            let picked: Vec<u32> = (0..l)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.entries[i])
                .collect();
            seen.insert(TwistMultiset {
                r: self.r,
                entries: picked,
            });
        }
        seen.into_iter().collect()
    }

    fn canonical_key(&self) -> (usize, &[u32]) {
        (self.entries.len(), &self.entries)
    }
}

impl PartialOrd for TwistMultiset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TwistMultiset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canonical_key()
            .cmp(&other.canonical_key())
            .then(self.r.cmp(&other.r))
    }
}

impl fmt::Display for TwistMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.entries.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Product of the factorials of the multiplicities of `items`.
pub fn aut_order<T: Ord>(items: &[T]) -> u128 {
    let mut sorted: Vec<&T> = items.iter().collect();
    sorted.sort();
    let mut order: u128 = 1;
    let mut run: u128 = 0;
    for (i, item) in sorted.iter().enumerate() {
        run = if i > 0 && sorted[i - 1] == *item {
            run + 1
        } else {
            1
        };
        order *= run;
    }
    order
}

/// Partition of `{1, ..., l}` into disjoint nonempty blocks.
///
/// Blocks are sorted internally and ordered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    l: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Normalizes block order. Panics if `blocks` is not a partition of `[l]`.
    pub fn new(l: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort();
        let mut all: Vec<usize> = blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(
            all,
            (1..=l).collect::<Vec<_>>(),
            "blocks must cover [l] disjointly"
        );
        SetPartition { l, blocks }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn h(&self) -> usize {
        self.blocks.len()
    }

    /// Image under `a`: each block becomes the multiset of its twists.
    pub fn image(&self, twists: &TwistMultiset) -> MultisetPartition {
        MultisetPartition::new(self.blocks.iter().map(|b| twists.select(b)).collect())
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let items: Vec<String> = b.iter().map(usize::to_string).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        write!(f, "{{{}}}", blocks.join(","))
    }
}

/// Unordered partition of a multiset, stored in canonical form: parts sorted
/// by size and then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultisetPartition {
    parts: Vec<TwistMultiset>,
}

impl MultisetPartition {
    pub fn new(mut parts: Vec<TwistMultiset>) -> Self {
        parts.sort();
        MultisetPartition { parts }
    }

    pub fn parts(&self) -> &[TwistMultiset] {
        &self.parts
    }

    pub fn h(&self) -> usize {
        self.parts.len()
    }

    /// `|Aut({I_1, ..., I_h})|`: permutations of the parts fixing the partition.
    pub fn aut_order(&self) -> u128 {
        aut_order(&self.parts)
    }

    /// Disjoint union of the parts.
    pub fn union(&self) -> Vec<u32> {
        let mut all: Vec<u32> = self
            .parts
            .iter()
            .flat_map(|p| p.entries().to_vec())
            .collect();
        all.sort_unstable();
        all
    }
}

impl fmt::Display for MultisetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All partitions of `[l]` into exactly `h` blocks.
pub fn set_partitions(l: usize, h: usize) -> Vec<SetPartition> {
    all_set_partitions(l)
        .into_iter()
        .filter(|p| p.h() == h)
        .collect()
}

/// All partitions of `[l]`, grouped by the "place the next element into an
/// existing block or a new one" recursion.
pub fn all_set_partitions(l: usize) -> Vec<SetPartition> {
    fn place(next: usize, l: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<SetPartition>) {
        if next > l {
            out.push(SetPartition {
                l,
                blocks: blocks.clone(),
            });
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(next);
            place(next + 1, l, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![next]);
        place(next + 1, l, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    place(1, l, &mut Vec::new(), &mut out);
    out
}

/// All unordered partitions of `twists` into `h` nonempty multisets.
pub fn multiset_partitions(twists: &TwistMultiset, h: usize) -> Vec<MultisetPartition> {
    set_partitions(twists.len(), h)
        .iter()
        .map(|q| q.image(twists))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// `|a^{-1}(P)|`, from `|Aut(I)| = |a^{-1}(P)| · |Aut(P)| · Π_j |Aut(I_j)|`.
pub fn fiber_size(
    twists: &TwistMultiset,
    partition: &MultisetPartition,
) -> Result<u128, CombinatoricsError> {
    if partition.union() != twists.entries() || partition.parts().iter().any(|p| p.is_empty()) {
        return Err(CombinatoricsError::NotAPartition(
            partition.to_string(),
            twists.to_string(),
        ));
    }
    let num = twists.aut_order();
    let den = partition.aut_order()
        * partition
            .parts()
            .iter()
            .map(TwistMultiset::aut_order)
            .product::<u128>();
    if !num.is_multiple_of(den) {
        return Err(CombinatoricsError::NonIntegral { num, den });
    }
    Ok(num / den)
}
