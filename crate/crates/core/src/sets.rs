//! Small index sets over `[0, 64)` and subset enumeration helpers.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest number of message symbols an [`IndexSet`] can address.
pub const MAX_INDEX: usize = 64;

/// A set of 0-based message indices stored as a bitmask.
///
/// Serializes as a sorted list of 1-based indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        IndexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_INDEX);
        if n == MAX_INDEX {
            IndexSet(u64::MAX)
        } else {
            IndexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        IndexSet(1u64 << i)
    }

    /// Build from 1-based indices. Panics on index 0 or above 64.
    pub fn from_one_based(indices: &[usize]) -> Self {
        indices.iter().fold(IndexSet::EMPTY, |s, &i| {
            assert!((1..=MAX_INDEX).contains(&i), "index {i} out of range");
            s.with(i - 1)
        })
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_INDEX && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        IndexSet(self.0 | 1u64 << i)
    }

    pub fn without(self, i: usize) -> Self {
        IndexSet(self.0 & !(1u64 << i))
    }

    pub fn union(self, other: Self) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        IndexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        IndexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Ascending 0-based indices.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn to_one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Lexicographic comparison of the sorted element lists.
    pub fn lex_cmp(self, other: Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        iter.into_iter().fold(IndexSet::EMPTY, IndexSet::with)
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Displays 1-based, e.g. `{1,2,3}`.
impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&i| i == 0 || i > MAX_INDEX) {
            return Err(serde::de::Error::custom(format!("index {bad} out of range")));
        }
        Ok(IndexSet::from_one_based(&v))
    }
}

/// Binomial coefficient with `C(n, k) = 0` for `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `items` in lexicographic order of their position lists.
pub fn combinations_lex(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    LexCombinations::new(items.len(), k)
        .map(|idx| idx.iter().map(|&i| items[i]).collect())
        .collect()
}

/// Lazy iterator over `k`-subsets of `0..n` as ascending position lists,
/// in lexicographic order.
pub struct LexCombinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl LexCombinations {
    pub fn new(n: usize, k: usize) -> Self {
        LexCombinations { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for LexCombinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let (n, k) = (self.n, self.idx.len());
        let mut i = k;
        while i > 0 && self.idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            self.done = true;
        } else {
            self.idx[i - 1] += 1;
            for j in i..k {
                self.idx[j] = self.idx[j - 1] + 1;
            }
        }
        Some(out)
    }
}

/// All `k`-subsets of `items` in colexicographic order (ordered by largest
/// position first, then the next largest, and so on).
pub fn combinations_colex(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut combos = combinations_lex(items, k);
    let pos = |v: &Vec<usize>| -> Vec<usize> {
        let mut p: Vec<usize> = v
            .iter()
            .map(|x| items.iter().position(|y| y == x).unwrap())
            .collect();
        p.reverse();
        p
    };
    combos.sort_by_key(pos);
    combos
}

/// Subsets of `universe` with exactly `k` elements, in lexicographic order of
/// their sorted element lists.
pub fn subsets_of_size(universe: IndexSet, k: usize) -> impl Iterator<Item = IndexSet> {
    let items = universe.to_vec();
    LexCombinations::new(items.len(), k).map(move |c| c.into_iter().map(|i| items[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_one_based() {
        let s = IndexSet::from_one_based(&[3, 1, 2]);
        assert_eq!(s.to_string(), "{1,2,3}");
        assert_eq!(s.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, -1), 0);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn lex_and_colex_orders() {
        let items = [0, 1, 2, 3];
        let lex = combinations_lex(&items, 2);
        assert_eq!(lex, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let colex = combinations_colex(&items, 2);
        assert_eq!(colex, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations_lex(&items, 0), vec![Vec::<usize>::new()]);
        assert!(combinations_lex(&items, 5).is_empty());
        assert_eq!(combinations_lex(&[], 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn subset_sizes() {
        let u = IndexSet::full(5);
        assert_eq!(subsets_of_size(u, 3).count(), 10);
        assert!(subsets_of_size(u, 3).all(|s| s.len() == 3 && s.is_subset(u)));
    }
}
