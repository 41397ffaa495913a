//! Enumeration of `F_q^n` in lexicographic order of the integer encoding
//! (`z_1` is the most significant digit).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;
use crate::sets::IndexSet;

/// `q^n`, saturating at `u128::MAX`.
pub fn space_size(q: u32, n: usize) -> u128 {
    (0..n).try_fold(1u128, |acc, _| acc.checked_mul(q as u128)).unwrap_or(u128::MAX)
}

pub(crate) fn guard_space(what: &'static str, q: u32, n: usize, limit: u128) -> Result<u64> {
    let size = space_size(q, n);
    if size > limit {
        return Err(Error::too_large(what, size, limit));
    }
    Ok(size as u64)
}

/// The vector with lexicographic rank `code`.
pub fn unrank(code: u64, q: u32, n: usize) -> Vec<Elem> {
    let mut v = vec![0; n];
    let mut c = code;
    for slot in v.iter_mut().rev() {
        *slot = (c % q as u64) as Elem;
        c /= q as u64;
    }
    v
}

/// Lexicographic rank of `v`.
pub fn rank_of(v: &[Elem], q: u32) -> u64 {
    v.iter().fold(0u64, |acc, &x| acc * q as u64 + x as u64)
}

pub fn support(v: &[Elem]) -> IndexSet {
    v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect()
}

/// Every vector of `F_q^n`, lexicographically.
pub fn all_vectors(q: u32, n: usize) -> impl Iterator<Item = Vec<Elem>> {
    let total = space_size(q, n) as u64;
    (0..total).map(move |c| unrank(c, q, n))
}

/// Lexicographically least `z` with `keep(support(z))` and `z * l = 0`, if any.
///
/// The image `z * l` is updated incrementally as the counter advances, so
/// each step costs about one row update. The space is split on the leading
/// digits and scanned in parallel; the least witness still wins.
pub(crate) fn least_kernel_vector<F>(l: &Matrix, keep: F) -> Option<Vec<Elem>>
where
    F: Fn(IndexSet) -> bool + Sync,
{
    let f = l.field();
    let q = f.order();
    let n = l.rows();
    if n == 0 {
        return None;
    }
    // enough chunks to keep a pool busy, while chunks stay long enough to amortise setup
    let mut prefix = 0;
    while prefix < n.saturating_sub(4) && space_size(q, prefix) < 256 {
        prefix += 1;
    }
    let chunks = space_size(q, prefix) as u64;
    (0..chunks)
        .into_par_iter()
        .find_map_first(|pc| scan_chunk(f, l, prefix, pc, &keep))
}

fn scan_chunk<F>(f: &Field, l: &Matrix, prefix: usize, pc: u64, keep: &F) -> Option<Vec<Elem>>
where
    F: Fn(IndexSet) -> bool,
{
    let q = f.order();
    let n = l.rows();
    let cols = l.cols();
    let mut z = unrank(pc, q, prefix);
    z.resize(n, 0);
    let mut img = l.left_mul_vec(&z).expect("lengths agree");
    let mut supp = support(&z);
    loop {
        if keep(supp) && img.iter().all(|&x| x == 0) {
            return Some(z);
        }
        // advance the suffix counter
        let mut pos = n;
        loop {
            if pos == prefix {
                return None;
            }
            pos -= 1;
            let old = z[pos];
            let new = if old + 1 == q { 0 } else { old + 1 };
            z[pos] = new;
            let delta = f.sub(new, old);
            let row = l.row(pos);
            for c in 0..cols {
                img[c] = f.add(img[c], f.mul(delta, row[c]));
            }
            supp = if new == 0 { supp.without(pos) } else { supp.with(pos) };
            if new != 0 {
                break;
            }
        }
    }
}
