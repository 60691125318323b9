//! Closed-form primary open r-spin invariants.
//!
//! `⟨Π τ_0^{a_i} σ^{k+1}⟩ = (k+l-1)! / (-r)^{l-1}` when
//! `r(2l + k - 2) = (r-2)k + 2Σ a_i`, and zero otherwise.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinatorics::TwistMultiset;
use crate::rational::{self, Rational};

/// `(r, {a_i}, k)`. Twists may reach `r - 1` here; the generating function
/// only ever uses `a_i <= r - 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantKey {
    pub r: u32,
    pub twists: Vec<u32>,
    pub k: u32,
}

impl InvariantKey {
    /// Panics if `r < 2` or a twist exceeds `r - 1`.
    pub fn new(r: u32, mut twists: Vec<u32>, k: u32) -> Self {
        assert!(r >= 2, "r must be at least 2");
        assert!(twists.iter().all(|&a| a < r), "twists must lie in 0..r");
        twists.sort_unstable();
        InvariantKey { r, twists, k }
    }

    pub fn from_multiset(twists: &TwistMultiset, k: u32) -> Self {
        InvariantKey {
            r: twists.r(),
            twists: twists.entries().to_vec(),
            k,
        }
    }

    pub fn l(&self) -> usize {
        self.twists.len()
    }
}

/// The dimension constraint, cleared of denominators.
pub fn satisfies_constraint(key: &InvariantKey) -> bool {
    let r = key.r as i64;
    let k = key.k as i64;
    let l = key.l() as i64;
    let sum: i64 = key.twists.iter().map(|&a| a as i64).sum();
    r * (2 * l + k - 2) == (r - 2) * k + 2 * sum
}

pub fn open_invariant(key: &InvariantKey) -> Rational {
    if !satisfies_constraint(key) {
        return Rational::zero();
    }
    let l = key.l() as i64;
    // With l = 0 the constraint forces k = r >= 2, so k + l - 1 >= 0.
    let top = key.k as i64 + l - 1;
    let numerator = Rational::from_integer(rational::factorial(top as u32));
    numerator
        * rational::pow_signed(
            &Rational::from_integer(BigInt::from(-(key.r as i64))),
            1 - l,
        )
}

/// `Σ a_i = r(I) + (|I| - 1) r`, equivalently `0 < Σ (r - a_i) <= r`.
pub fn is_admissible(twists: &TwistMultiset) -> bool {
    !twists.is_empty() && twists.b_sum() <= twists.r()
}

/// The one boundary count `k = r(I)` giving a nonzero invariant, when the
/// multiset is admissible.
pub fn unique_boundary_count(twists: &TwistMultiset) -> Option<u32> {
    is_admissible(twists).then(|| twists.residue())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantEntry {
    pub key: InvariantKey,
    pub value: Rational,
}

/// Every admissible multiset of twists `0 <= a_i <= r - 2`, ordered by size
/// and then lexicographically.
pub fn admissible_multisets(r: u32) -> Vec<TwistMultiset> {
    // Grow ascending twist lists while the budget Σ b_i <= r holds.
    fn grow(r: u32, min_a: u32, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        for a in min_a..=r - 2 {
            let b = r - a;
            if b > budget {
                continue;
            }
            cur.push(a);
            out.push(cur.clone());
            grow(r, a, budget - b, cur, out);
            cur.pop();
        }
    }
    let mut found = Vec::new();
    grow(r, 0, r, &mut Vec::new(), &mut found);
    let mut sets: Vec<TwistMultiset> = found
        .into_iter()
        .map(|e| TwistMultiset::new(r, e).expect("twists in range"))
        .collect();
    sets.sort();
    sets
}

/// All nonzero primary invariants: the closed term `(∅, k = r)` first, then
/// each admissible multiset with `k = r(I)`.
pub fn enumerate_nonzero(r: u32) -> Vec<InvariantEntry> {
    let closed = InvariantKey::new(r, Vec::new(), r);
    let mut out = vec![InvariantEntry {
        value: open_invariant(&closed),
        key: closed,
    }];
    for twists in admissible_multisets(r) {
        let key = InvariantKey::from_multiset(&twists, twists.residue());
        let value = open_invariant(&key);
        debug_assert!(!value.is_zero());
        out.push(InvariantEntry { key, value });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::multiset_partitions;
    use crate::rational::{frac, int};

    fn ms(r: u32, e: &[u32]) -> TwistMultiset {
        TwistMultiset::new(r, e.to_vec()).unwrap()
    }

    fn inv(r: u32, e: &[u32], k: u32) -> Rational {
        open_invariant(&InvariantKey::new(r, e.to_vec(), k))
    }

    /// Independent oracle: the constraint as printed, over rationals.
    fn raw_constraint(r: u32, e: &[u32], k: u32) -> bool {
        let lhs = frac(
            (r as i64 - 2) * k as i64 + 2 * e.iter().map(|&a| a as i64).sum::<i64>(),
            r as i64,
        );
        lhs == int(2 * e.len() as i64 + k as i64 - 2)
    }

    /// Multisets of size <= max_len with entries in 0..=max_a.
    fn multisets(max_len: usize, max_a: u32) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for m in &frontier {
                let start = m.last().copied().unwrap_or(0);
                for a in start..=max_a {
                    let mut n: Vec<u32> = m.clone();
                    n.push(a);
                    next.push(n);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    #[test]
    fn closed_formula_examples() {
        assert_eq!(inv(4, &[], 4), int(-24));
        assert_eq!(inv(4, &[2, 2], 0), frac(-1, 4));
        assert_eq!(inv(4, &[1], 0), int(0));
        assert_eq!(inv(5, &[3], 3), int(6));
        assert_eq!(inv(5, &[3, 3], 1), frac(-2, 5));
    }

    #[test]
    fn boundary_count_examples() {
        assert_eq!(unique_boundary_count(&ms(5, &[3, 3])), Some(1));
        assert_eq!(unique_boundary_count(&ms(4, &[2, 2])), Some(0));
        assert_eq!(unique_boundary_count(&ms(4, &[0])), Some(0));
        assert_eq!(unique_boundary_count(&ms(4, &[0, 0])), None);
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&ms(4, &[2, 2])));
        assert!(!is_admissible(&ms(4, &[2, 2, 2])));
        assert!(!is_admissible(&TwistMultiset::empty(4)));
    }

    #[test]
    fn r2_table() {
        let table = enumerate_nonzero(2);
        let rows: Vec<(Vec<u32>, u32, Rational)> = table
            .into_iter()
            .map(|e| (e.key.twists, e.key.k, e.value))
            .collect();
        assert_eq!(rows, vec![(vec![], 2, int(-2)), (vec![0], 0, int(1))]);
    }

    #[test]
    fn formula_agrees_with_raw_constraint() {
        for r in 2..=8u32 {
            for e in multisets(4, r - 1) {
                for k in 0..=2 * r {
                    let v = inv(r, &e, k);
                    assert_eq!(
                        !v.is_zero(),
                        raw_constraint(r, &e, k),
                        "r={r} I={e:?} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn nonzero_iff_k_is_residue() {
        for r in 2..=8u32 {
            for twists in admissible_multisets(r) {
                for k in 0..=2 * r {
                    let nonzero =
                        !open_invariant(&InvariantKey::from_multiset(&twists, k)).is_zero();
                    assert_eq!(nonzero, k == twists.residue(), "r={r} I={twists} k={k}");
                }
            }
        }
    }

    #[test]
    fn admissibility_is_hereditary() {
        for r in 2..=9u32 {
            for twists in admissible_multisets(r) {
                for sub in twists.sub_multisets() {
                    assert!(is_admissible(&sub), "r={r} I={twists} sub={sub}");
                    let sum = sub.sum();
                    assert_eq!(sum, sub.residue() + (sub.len() as u32 - 1) * r);
                }
            }
        }
    }

    #[test]
    fn residues_add_over_partitions() {
        for r in 2..=9u32 {
            for twists in admissible_multisets(r) {
                for h in 1..=twists.len() {
                    for p in multiset_partitions(&twists, h) {
                        let total: u32 = p.parts().iter().map(TwistMultiset::residue).sum();
                        assert_eq!(total, twists.residue() + (h as u32 - 1) * r);
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_bounds() {
        for r in 2..=10u32 {
            for e in enumerate_nonzero(r) {
                assert!(e.key.k <= r && e.key.l() <= r as usize);
                if e.key.l() >= 1 {
                    assert!(e.key.l() <= (r / 2) as usize);
                }
            }
        }
    }
}
