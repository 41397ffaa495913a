//! Helpers shared by the integration tests: random instances and
//! brute-force reference computations written straight from the
//! definitions.

#![allow(dead_code)]

use bnsi_core::space::all_vectors;
use bnsi_core::{BnsiProblem, Elem, EncoderMatrix, Field, IndexSet, Matrix};
use rand::Rng;

pub fn random_problem<R: Rng>(rng: &mut R, q: u32, n: usize, m_max: usize, delta_s: usize) -> BnsiProblem {
    let m = rng.gen_range(1..=m_max);
    let demands: Vec<IndexSet> = (0..m)
        .map(|_| loop {
            let bits = rng.gen_range(1u64..(1 << n));
            break IndexSet::from_bits(bits);
        })
        .collect();
    BnsiProblem::new(Field::with_order(q).unwrap(), n, demands, delta_s).unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, f: &Field, rows: usize, cols: usize) -> Matrix {
    let data: Vec<Vec<Elem>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..f.order())).collect()).collect();
    Matrix::from_rows_with_cols(f, &data, cols).unwrap()
}

pub fn random_encoder<R: Rng>(rng: &mut R, p: &BnsiProblem, cols: usize) -> EncoderMatrix {
    EncoderMatrix::new(p, random_matrix(rng, p.field(), p.n(), cols)).unwrap()
}

/// `z` is interfering iff some user sees between 1 and `2 delta_s` non-zero
/// symbols of `z` on its demand.
pub fn naive_interferes(p: &BnsiProblem, z: &[Elem]) -> bool {
    p.demands().iter().any(|x| {
        let w = x.iter().filter(|&j| z[j] != 0).count();
        w >= 1 && w <= 2 * p.delta_s()
    })
}

pub fn naive_interfering_set(p: &BnsiProblem) -> Vec<Vec<Elem>> {
    all_vectors(p.q(), p.n()).filter(|z| naive_interferes(p, z)).collect()
}

pub fn naive_times(f: &Field, z: &[Elem], l: &Matrix) -> Vec<Elem> {
    (0..l.cols())
        .map(|c| (0..l.rows()).fold(0, |acc, r| f.add(acc, f.mul(z[r], l.get(r, c)))))
        .collect()
}

pub fn naive_valid(p: &BnsiProblem, l: &Matrix) -> bool {
    all_vectors(p.q(), p.n())
        .filter(|z| naive_interferes(p, z))
        .all(|z| naive_times(p.field(), &z, l).iter().any(|&x| x != 0))
}

/// Every non-empty `C` with `|X_i ∩ C|` either 0 or above `2 delta_s`.
pub fn naive_phi(p: &BnsiProblem) -> Vec<IndexSet> {
    (1u64..(1 << p.n()))
        .map(IndexSet::from_bits)
        .filter(|&c| {
            p.demands().iter().all(|x| {
                let d = x.intersection(c).len();
                d == 0 || d > 2 * p.delta_s()
            })
        })
        .collect()
}
