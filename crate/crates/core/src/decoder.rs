//! Per-receiver syndrome decoding.
//!
//! User `i` receives `c = xL` and holds `x^e = x_{X_i} + eps`. With `H` a
//! parity check of `rowspan(L_{Y_i})` and `A = H L_{X_i}^T`, the syndrome
//! `H (x^e L_{X_i} - c)^T = A eps^T` no longer depends on the interference
//! `x_{Y_i}`, and a table from syndromes back to low-weight error vectors
//! recovers `eps`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;
use crate::problem::BnsiProblem;
use crate::sets::{binomial, IndexSet, LexCombinations};
use crate::validity::{is_valid_by_rank, EncoderMatrix};

/// Syndrome tables larger than this are not materialised; decoding then
/// searches the error patterns directly.
pub const TABLE_GUARD: u128 = 1 << 24;

/// `c = xL`.
pub fn encode(l: &EncoderMatrix, x: &[Elem]) -> Result<Vec<Elem>> {
    l.left_mul_vec(x)
}

#[derive(Clone, Debug)]
pub struct ReceiverDecoder {
    user: usize,
    field: Field,
    demand: IndexSet,
    beta: IndexSet,
    h: Matrix,
    a: Matrix,
    l_x: Matrix,
    delta_s: usize,
    table: Option<SyndromeTable>,
}

#[derive(Clone, Debug)]
struct SyndromeTable {
    /// `(eps, A eps^T)` in enumeration order.
    entries: Vec<(Vec<Elem>, Vec<Elem>)>,
    index: HashMap<Vec<Elem>, usize>,
}

/// Number of error patterns of length `len` and weight at most `delta`.
pub fn error_pattern_count(q: u32, len: usize, delta: usize) -> u128 {
    (0..=delta.min(len))
        .map(|w| binomial(len as i64, w as i64).saturating_mul((q as u128 - 1).saturating_pow(w as u32)))
        .fold(0u128, u128::saturating_add)
}

/// Error vectors of weight at most `delta`, ordered by weight, then support
/// (lexicographic), then values (ascending, last position fastest).
pub fn error_patterns(q: u32, len: usize, delta: usize) -> impl Iterator<Item = Vec<Elem>> {
    (0..=delta.min(len)).flat_map(move |w| {
        LexCombinations::new(len, w).flat_map(move |supp| {
            let combos = (q as u64 - 1).pow(w as u32);
            let supp = supp.clone();
            (0..combos).map(move |mut c| {
                let mut e = vec![0; len];
                for &pos in supp.iter().rev() {
                    e[pos] = (c % (q as u64 - 1)) as Elem + 1;
                    c /= q as u64 - 1;
                }
                e
            })
        })
    })
}

/// Build the decoder of user `i` (0-based).
///
/// `beta` is grown greedily over `Y_i` in ascending order. The table is
/// built over every error pattern of weight at most `delta_s`; two patterns
/// sharing a syndrome mean `L` is invalid for this user
/// ([`Error::DuplicateSyndrome`]). Above [`TABLE_GUARD`] no table is kept
/// and `L` is checked with the rank criterion instead.
pub fn build_decoder(p: &BnsiProblem, l: &EncoderMatrix, i: usize) -> Result<ReceiverDecoder> {
    if i >= p.m() {
        return Err(Error::PreconditionViolated(format!("user {} does not exist (m = {})", i + 1, p.m())));
    }
    let f = p.field().clone();
    let demand = p.demand(i);
    let mut beta = IndexSet::EMPTY;
    let mut rank = 0;
    for j in p.interference(i).iter() {
        let candidate = beta.with(j);
        let r = l.select_rows(candidate.iter()).rank();
        if r > rank {
            beta = candidate;
            rank = r;
        }
    }
    let h = l.select_rows(beta.iter()).parity_check_of_rowspace()?;
    let l_x = l.select_rows(demand.iter());
    let a = h.mul(&l_x.transpose())?;
    let len = demand.len();
    let delta = p.delta_s();
    let table = if error_pattern_count(f.order(), len, delta) <= TABLE_GUARD {
        let mut entries = Vec::new();
        let mut index = HashMap::new();
        for eps in error_patterns(f.order(), len, delta) {
            let syn = a.mul_col_vec(&eps)?;
            if index.insert(syn.clone(), entries.len()).is_some() {
                return Err(Error::DuplicateSyndrome);
            }
            entries.push((eps, syn));
        }
        Some(SyndromeTable { entries, index })
    } else {
        if !is_valid_by_rank(p, l)?.is_valid() {
            return Err(Error::InvalidEncoder);
        }
        None
    };
    Ok(ReceiverDecoder { user: i, field: f, demand, beta, h, a, l_x, delta_s: delta, table })
}

impl ReceiverDecoder {
    pub fn user(&self) -> usize {
        self.user
    }

    pub fn beta(&self) -> IndexSet {
        self.beta
    }

    pub fn demand(&self) -> IndexSet {
        self.demand
    }

    /// Parity check of `rowspan(L_{beta})`.
    pub fn h(&self) -> &Matrix {
        &self.h
    }

    /// `H L_{X_i}^T`.
    pub fn a(&self) -> &Matrix {
        &self.a
    }

    /// `(eps, syndrome)` pairs in enumeration order, if a table was built.
    pub fn table(&self) -> Option<&[(Vec<Elem>, Vec<Elem>)]> {
        self.table.as_ref().map(|t| t.entries.as_slice())
    }

    /// `b = H (x^e L_{X_i} - c)^T`.
    pub fn syndrome(&self, c: &[Elem], side_info: &[Elem]) -> Result<Vec<Elem>> {
        if side_info.len() != self.demand.len() {
            return Err(Error::DimensionMismatch(format!(
                "side information has {} symbols, user demands {}",
                side_info.len(),
                self.demand.len()
            )));
        }
        if c.len() != self.h.cols() {
            return Err(Error::DimensionMismatch(format!(
                "codeword has {} symbols, codelength is {}",
                c.len(),
                self.h.cols()
            )));
        }
        let f = &self.field;
        let y = self.l_x.left_mul_vec(side_info)?;
        let y: Vec<Elem> = y.iter().zip(c).map(|(&a, &b)| f.sub(a, b)).collect();
        self.h.mul_col_vec(&y)
    }

    /// Recover `x_{X_i}` from the codeword and noisy side
    /// information. Exact whenever the side information has at most
    /// `delta_s` errors.
    pub fn decode(&self, c: &[Elem], side_info: &[Elem]) -> Result<Vec<Elem>> {
        let b = self.syndrome(c, side_info)?;
        let eps = match &self.table {
            Some(t) => t.index.get(&b).map(|&k| t.entries[k].0.clone()),
            None => error_patterns(self.field.order(), self.demand.len(), self.delta_s)
                .find(|e| self.a.mul_col_vec(e).map_or(false, |s| s == b)),
        };
        let eps = eps.ok_or(Error::SyndromeNotFound)?;
        let f = &self.field;
        Ok(side_info.iter().zip(&eps).map(|(&x, &e)| f.sub(x, e)).collect())
    }
}

/// Convenience wrapper: build user `i`'s decoder and run it once.
pub fn decode(p: &BnsiProblem, l: &EncoderMatrix, i: usize, c: &[Elem], side_info: &[Elem]) -> Result<Vec<Elem>> {
    build_decoder(p, l, i)?.decode(c, side_info)
}
