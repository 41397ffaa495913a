//! The family `Phi(B)`: non-empty packet sets `C` such that every user sees
//! either none of `C` or at least `2 delta_s + 1` of it.
//!
//! `Phi(B)` is closed under union, so when it is non-empty it has a unique
//! maximum element `C_max`. Coding can beat the uncoded scheme exactly when
//! `Phi(B)` is non-empty.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::BnsiProblem;
use crate::sets::{subsets_of_size, IndexSet};

/// Largest `2^n` for the exhaustive `B_max` search.
pub const BMAX_GUARD: u128 = 1 << 24;
/// Largest `2^n` for which the disjoint collection is searched exactly.
pub const EXACT_COLLECTION_GUARD: u128 = 1 << 20;
/// Backtracking nodes before the exact collection search gives up and the
/// greedy answer is returned instead.
pub const COLLECTION_NODE_BUDGET: u64 = 1 << 22;

pub fn phi_contains(p: &BnsiProblem, c: IndexSet) -> bool {
    if c.is_empty() || !c.is_subset(p.all()) {
        return false;
    }
    let lo = p.two_delta() + 1;
    p.demands().iter().all(|x| {
        let d = x.intersection(c).len();
        d == 0 || d >= lo
    })
}

/// Outcome of the peeling test for `Phi(B) = ∅`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiEmptiness {
    pub is_empty: bool,
    pub witness: Option<IndexSet>,
}

/// Peeling: repeatedly delete the packets of the lowest-index user with
/// `1 <= deg <= 2 delta_s` (users of degree 0 drop out on their own). What
/// survives is the largest element of `Phi(B)`, or nothing.
pub fn phi_emptiness(p: &BnsiProblem) -> PhiEmptiness {
    let witness = alg2_on(p, p.all());
    PhiEmptiness { is_empty: witness.is_none(), witness }
}

/// Peeling started from `start` instead of `[n]`: the largest element of
/// `Phi(B)` contained in `start`, if any.
///
/// A deleted packet never belongs to such an element: if `C` is in `Phi(B)`,
/// `C` is inside `P` and the user touches `C`, then that user sees at least
/// `2 delta_s + 1` packets of `P`.
pub fn alg2_on(p: &BnsiProblem, start: IndexSet) -> Option<IndexSet> {
    let hi = p.two_delta();
    let mut packets = start.intersection(p.all());
    loop {
        let cur = packets;
        let low = p.demands().iter().find(|x| {
            let d = x.intersection(cur).len();
            d >= 1 && d <= hi
        });
        match low {
            Some(x) => packets = cur.difference(*x),
            None => return (!cur.is_empty()).then_some(cur),
        }
    }
}

/// The unique maximum element of `Phi(B)`.
pub fn c_max(p: &BnsiProblem) -> Option<IndexSet> {
    alg2_on(p, p.all())
}

/// A largest `B` whose induced subproblem has empty `Phi`; sizes are tried
/// in decreasing order and the lexicographically least set of the first
/// feasible size wins.
pub fn b_max(p: &BnsiProblem) -> Result<IndexSet> {
    let size = 1u128 << p.n();
    if size > BMAX_GUARD {
        return Err(Error::too_large("B_max search (2^n)", size, BMAX_GUARD));
    }
    if c_max(p).is_none() {
        return Ok(p.all());
    }
    for k in (0..p.n()).rev() {
        let subsets: Vec<IndexSet> = subsets_of_size(p.all(), k).collect();
        if let Some(b) = subsets.par_iter().find_first(|&&b| alg2_on(p, b).is_none()) {
            return Ok(*b);
        }
    }
    Ok(IndexSet::EMPTY)
}

/// `d_C = min over users touching C of (|X_i ∩ C| - 2 delta_s)^+`; the
/// dimension of an MDS block on `C`. A set no user touches needs no
/// transmissions at all, so `d_C = |C|` there.
pub fn block_dimension(p: &BnsiProblem, c: IndexSet) -> usize {
    p.demands()
        .iter()
        .map(|x| x.intersection(c).len())
        .filter(|&d| d > 0)
        .map(|d| d.saturating_sub(p.two_delta()))
        .min()
        .unwrap_or(c.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exact,
    Greedy,
}

/// Pairwise disjoint elements of `Phi(B)`, sorted by least element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisjointCollection {
    pub sets: Vec<IndexSet>,
    pub mode: SearchMode,
}

impl DisjointCollection {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn covered(&self) -> IndexSet {
        self.sets.iter().fold(IndexSet::EMPTY, |a, &s| a.union(s))
    }
}

/// A maximum-cardinality collection of disjoint `Phi` elements.
///
/// Exact search when `2^n` is within [`EXACT_COLLECTION_GUARD`] and the
/// node budget suffices, greedy otherwise. Among collections of the same
/// size the one with the largest `sum d_C` wins, then the largest covered
/// set, then the lexicographically least list of sets.
pub fn disjoint_phi_collection(p: &BnsiProblem) -> DisjointCollection {
    if (1u128 << p.n()) <= EXACT_COLLECTION_GUARD {
        if let Some(sets) = exact_collection(p) {
            return DisjointCollection { sets, mode: SearchMode::Exact };
        }
    }
    greedy_disjoint_collection(p)
}

/// Greedy: take the maximum `Phi` element of the remaining packets, shrink
/// it to an inclusion-minimal element, remove it, repeat.
pub fn greedy_disjoint_collection(p: &BnsiProblem) -> DisjointCollection {
    let mut remaining = p.all();
    let mut sets = Vec::new();
    while let Some(mut c) = alg2_on(p, remaining) {
        for j in c.iter() {
            if let Some(smaller) = alg2_on(p, c.without(j)) {
                c = smaller;
            }
        }
        sets.push(c);
        remaining = remaining.difference(c);
    }
    sets.sort_by(|a, b| a.lex_cmp(*b));
    DisjointCollection { sets, mode: SearchMode::Greedy }
}

#[derive(Clone, Debug)]
struct Score {
    count: usize,
    dims: usize,
    covered: usize,
    sets: Vec<IndexSet>,
}

impl Score {
    fn of(p: &BnsiProblem, sets: &[IndexSet]) -> Score {
        let mut sets = sets.to_vec();
        sets.sort_by(|a, b| a.lex_cmp(*b));
        Score {
            count: sets.len(),
            dims: sets.iter().map(|&c| block_dimension(p, c)).sum(),
            covered: sets.iter().map(|c| c.len()).sum(),
            sets,
        }
    }

    /// `Greater` means better.
    fn cmp(&self, other: &Score) -> Ordering {
        self.count
            .cmp(&other.count)
            .then(self.dims.cmp(&other.dims))
            .then(self.covered.cmp(&other.covered))
            .then_with(|| {
                let lex = self.sets.iter().map(|s| s.to_vec()).cmp(other.sets.iter().map(|s| s.to_vec()));
                lex.reverse()
            })
    }
}

fn exact_collection(p: &BnsiProblem) -> Option<Vec<IndexSet>> {
    let n = p.n();
    let all = p.all();
    let elements: Vec<IndexSet> = (1u64..1u64 << n)
        .map(IndexSet::from_bits)
        .filter(|&c| phi_contains(p, c))
        .collect();
    if elements.is_empty() {
        return Some(Vec::new());
    }
    let min_size = elements.iter().map(|c| c.len()).min().unwrap();
    let mut by_min: Vec<Vec<IndexSet>> = vec![Vec::new(); n];
    for &c in &elements {
        by_min[c.min().unwrap()].push(c);
    }
    struct Search<'a> {
        p: &'a BnsiProblem,
        by_min: Vec<Vec<IndexSet>>,
        min_size: usize,
        best: Score,
        nodes: u64,
    }
    impl Search<'_> {
        fn go(&mut self, available: IndexSet, chosen: &mut Vec<IndexSet>) -> bool {
            self.nodes += 1;
            if self.nodes > COLLECTION_NODE_BUDGET {
                return false;
            }
            let bound = chosen.len() + available.len() / self.min_size;
            if bound < self.best.count {
                return true;
            }
            let Some(j) = available.min() else {
                let score = Score::of(self.p, chosen);
                if score.cmp(&self.best) == Ordering::Greater {
                    self.best = score;
                }
                return true;
            };
            for idx in 0..self.by_min[j].len() {
                let c = self.by_min[j][idx];
                if c.is_subset(available) {
                    chosen.push(c);
                    let ok = self.go(available.difference(c), chosen);
                    chosen.pop();
                    if !ok {
                        return false;
                    }
                }
            }
            self.go(available.without(j), chosen)
        }
    }
    let mut s = Search {
        p,
        by_min,
        min_size,
        best: Score { count: 0, dims: 0, covered: 0, sets: Vec::new() },
        nodes: 0,
    };
    let finished = s.go(all, &mut Vec::new());
    finished.then_some(s.best.sets)
}
