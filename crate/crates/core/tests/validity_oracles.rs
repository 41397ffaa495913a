mod common;

use bnsi_core::validity::{is_valid_by_enumeration, is_valid_by_rank, necessary_check, Verdict};
use bnsi_core::space::all_vectors;
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn interfering_set_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let q = [2, 3, 4][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=5);
        let d = rng.gen_range(0..=2);
        let p = random_problem(&mut rng, q, n, 4, d);
        let got: Vec<_> = p.interfering_set().unwrap().collect();
        assert_eq!(got, naive_interfering_set(&p));
    }
}

#[test]
fn both_deciders_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let q = [2, 3, 4][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=5);
        let d = rng.gen_range(0..=2);
        let p = random_problem(&mut rng, q, n, 4, d);
        let cols = rng.gen_range(0..=n);
        let l = random_encoder(&mut rng, &p, cols);
        let truth = naive_valid(&p, &l);
        let by_enum = is_valid_by_enumeration(&p, &l).unwrap();
        assert_eq!(by_enum.is_valid(), truth);
        assert_eq!(is_valid_by_rank(&p, &l).unwrap().is_valid(), truth);
        if truth {
            assert!(necessary_check(&p, &l));
        }
        if let Verdict::Invalid(z) = by_enum {
            let least = all_vectors(p.q(), p.n())
                .find(|z| naive_interferes(&p, z) && naive_times(p.field(), z, &l).iter().all(|&x| x == 0))
                .unwrap();
            assert_eq!(z, least);
        }
    }
}

#[test]
fn rank_witness_is_a_real_violation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let n = rng.gen_range(2..=6);
        let p = random_problem(&mut rng, 2, n, 4, 1);
        let cols = rng.gen_range(1..=n);
        let l = random_encoder(&mut rng, &p, cols);
        if let Verdict::Invalid(w) = is_valid_by_rank(&p, &l).unwrap() {
            // some z supported inside the subset, non-zero there, with zL in
            // rowspan(L_Y); then a z' with z'L = 0 is interfering for w.user
            let ly = l.select_rows(p.interference(w.user).iter());
            let sub = l.select_rows(w.subset.iter());
            assert!(sub.vstack(&ly).unwrap().rank() < w.subset.len() + ly.rank());
            assert!(w.subset.is_subset(p.demand(w.user)));
        }
    }
}
