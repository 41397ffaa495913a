//! Exact optimal codelength for small instances.
//!
//! Validity of `L` depends only on `W = { z : zL = 0 }`: `L` is valid iff
//! `W` avoids the interfering set `I`. Any subspace `W` is such a kernel
//! (take the columns of `L` to be a basis of `W^perp`, giving
//! `n - dim W` columns), so
//! `N_opt = n - max { dim W : W ∩ I = ∅ }`.
//! Subspaces are visited once each through their reduced echelon bases,
//! largest dimension first.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::matrix::Matrix;
use crate::problem::{BnsiProblem, INTERFERING_GUARD};
use crate::sets::LexCombinations;
use crate::space::{self, rank_of, space_size};
use crate::validity::EncoderMatrix;

/// Largest number of subspaces the subspace oracle may visit.
pub const SUBSPACE_GUARD: u128 = 1 << 24;
/// Largest `q^{nN}` the matrix-enumeration oracle may visit per `N`.
pub const EXHAUSTIVE_GUARD: u128 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub n_opt: usize,
    pub encoder: EncoderMatrix,
    /// Basis of the kernel `W` of the optimal encoder, in reduced echelon form.
    pub kernel: Matrix,
}

/// Gaussian binomial `[n choose k]_q`, saturating.
pub fn gaussian_binomial(n: usize, k: usize, q: u32) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        let a = q.checked_pow((n - i) as u32).map(|x| x - 1);
        let b = q.checked_pow((i + 1) as u32).map(|x| x - 1);
        match (a.and_then(|a| num.checked_mul(a)), b.and_then(|b| den.checked_mul(b))) {
            (Some(x), Some(y)) => {
                num = x;
                den = y;
            }
            _ => return u128::MAX,
        }
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Number of subspaces of `F_q^n`.
pub fn subspace_count(n: usize, q: u32) -> u128 {
    (0..=n).map(|k| gaussian_binomial(n, k, q)).fold(0u128, u128::saturating_add)
}

/// Exact `N_opt` and an optimal encoder via subspace enumeration.
pub fn optimal_codelength_subspace(p: &BnsiProblem) -> Result<OracleResult> {
    let q = p.q();
    let n = p.n();
    let count = subspace_count(n, q);
    if count > SUBSPACE_GUARD {
        return Err(Error::too_large("subspaces of F_q^n", count, SUBSPACE_GUARD));
    }
    space::guard_space("interfering set (q^n)", q, n, INTERFERING_GUARD)?;
    let bad = interfering_bitmap(p);
    let f = p.field();
    for k in (0..=n).rev() {
        let pivots: Vec<Vec<usize>> = LexCombinations::new(n, k).collect();
        let found = pivots.par_iter().find_map_first(|piv| {
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| ((piv[r] + 1)..n).filter(|c| !piv.contains(c)).map(move |c| (r, c)))
                .collect();
            let total = space_size(q, free.len()) as u64;
            (0..total).find_map(|code| {
                let vals = space::unrank(code, q, free.len());
                let mut w = Matrix::zeros(f, k, n);
                for (r, &c) in piv.iter().enumerate() {
                    w.set(r, c, 1);
                }
                for (&(r, c), &v) in free.iter().zip(&vals) {
                    w.set(r, c, v);
                }
                avoids(&w, &bad).then_some(w)
            })
        });
        if let Some(w) = found {
            let l = w.right_null_space().transpose();
            return Ok(OracleResult { n_opt: n - k, encoder: EncoderMatrix::new(p, l)?, kernel: w });
        }
    }
    unreachable!("the zero subspace always avoids I")
}

fn interfering_bitmap(p: &BnsiProblem) -> Vec<bool> {
    let total = space_size(p.q(), p.n()) as u64;
    (0..total)
        .map(|c| p.support_interferes(space::support(&space::unrank(c, p.q(), p.n()))))
        .collect()
}

/// Whether every nonzero vector of `rowspan(w)` lies outside `I`.
fn avoids(w: &Matrix, bad: &[bool]) -> bool {
    let f = w.field();
    let q = f.order();
    let (k, n) = (w.rows(), w.cols());
    let mut coeff = vec![0 as Elem; k];
    let mut v = vec![0 as Elem; n];
    loop {
        let mut pos = k;
        loop {
            if pos == 0 {
                return true;
            }
            pos -= 1;
            let old = coeff[pos];
            let new = if old + 1 == q { 0 } else { old + 1 };
            coeff[pos] = new;
            let delta = f.sub(new, old);
            for (c, x) in v.iter_mut().enumerate() {
                *x = f.add(*x, f.mul(delta, w.get(pos, c)));
            }
            if new != 0 {
                break;
            }
        }
        if bad[rank_of(&v, q) as usize] {
            return false;
        }
    }
}

/// Smallest `N <= n_max` for which some `n x N` matrix is valid, by
/// enumerating every matrix; `None` if there is none.
pub fn optimal_codelength_exhaustive(p: &BnsiProblem, n_max: usize) -> Result<Option<usize>> {
    let q = p.q();
    let n = p.n();
    for cols in 0..=n_max {
        let size = space_size(q, n * cols);
        if size > EXHAUSTIVE_GUARD {
            return Err(Error::too_large("candidate matrices (q^{nN})", size, EXHAUSTIVE_GUARD));
        }
    }
    let interfering: Vec<Vec<Elem>> = p.interfering_set()?.collect();
    let f = p.field();
    for cols in 0..=n_max {
        let total = space_size(q, n * cols) as u64;
        let hit = (0..total).into_par_iter().any(|code| {
            let entries = space::unrank(code, q, n * cols);
            let rows: Vec<Vec<Elem>> = (0..n).map(|r| entries[r * cols..(r + 1) * cols].to_vec()).collect();
            let l = Matrix::from_rows_with_cols(f, &rows, cols).expect("well formed");
            interfering.iter().all(|z| l.left_mul_vec(z).expect("lengths agree").iter().any(|&x| x != 0))
        });
        if hit {
            return Ok(Some(cols));
        }
    }
    Ok(None)
}
