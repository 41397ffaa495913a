mod common;

use bnsi_core::bounds::{bounds_report, lower_bound_bmax, lower_bound_size, partition_optimizer, upper_bound_disjoint, upper_bound_mds, upper_bound_mds_disjoint};
use bnsi_core::oracle::{optimal_codelength_exhaustive, optimal_codelength_subspace};
use bnsi_core::structure::phi_emptiness;
use bnsi_core::validity::is_valid_by_rank;
use bnsi_core::{BnsiProblem, EncoderMatrix, Field, IndexSet};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn subspace_and_matrix_enumeration_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..40 {
        let (q, n) = [(2, 3), (2, 4), (3, 2), (3, 3), (4, 2)][rng.gen_range(0..5)];
        let d = rng.gen_range(0..=1);
        let p = random_problem(&mut rng, q, n, 3, d);
        let sub = optimal_codelength_subspace(&p).unwrap();
        let max_cols = (0..=n).take_while(|&c| (q as u128).pow((n * c) as u32) <= 1 << 26).last().unwrap();
        let exh = optimal_codelength_exhaustive(&p, max_cols).unwrap();
        if sub.n_opt <= max_cols {
            assert_eq!(exh, Some(sub.n_opt), "{p:?}");
        } else {
            assert_eq!(exh, None);
        }
        assert_eq!(sub.encoder.codelength(), sub.n_opt);
        assert!(naive_valid(&p, &sub.encoder));
    }
}

#[test]
fn full_length_exactly_when_phi_is_empty() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..150 {
        let n = rng.gen_range(1..=5);
        let p = random_problem(&mut rng, 2, n, 3, 1);
        let opt = optimal_codelength_subspace(&p).unwrap().n_opt;
        assert_eq!(opt == n, phi_emptiness(&p).is_empty);
    }
}

#[test]
fn bounds_sandwich_the_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..60 {
        let (q, n) = [(2, 5), (2, 6), (3, 4), (4, 3), (5, 3)][rng.gen_range(0..5)];
        let d = rng.gen_range(0..=1);
        let p = random_problem(&mut rng, q, n, 4, d);
        let opt = optimal_codelength_subspace(&p).unwrap().n_opt;
        assert!(lower_bound_size(&p) <= lower_bound_bmax(&p).unwrap());
        assert!(lower_bound_bmax(&p).unwrap() <= opt);
        let mut lengths = vec![upper_bound_disjoint(&p).0];
        lengths.extend(upper_bound_mds(&p).ok());
        lengths.extend(upper_bound_mds_disjoint(&p).ok().map(|x| x.0));
        lengths.extend(partition_optimizer(&p).ok().map(|r| r.construction));
        for c in lengths {
            assert!(opt <= c.length());
            let l = EncoderMatrix::new(&p, c.encoder.matrix().clone()).unwrap();
            assert!(is_valid_by_rank(&p, &l).unwrap().is_valid());
            assert!(naive_valid(&p, &l));
        }
        let report = bounds_report(&p, true);
        assert!(report.consistent, "{report:?}");
        assert_eq!(report.oracle, Some(opt));
    }
}

#[test]
fn lower_bounds_are_field_independent_where_expected() {
    // the demand-size and B_max bounds only look at supports
    let p = BnsiProblem::from_one_based(2, 4, &[&[1, 2, 3], &[2, 3, 4], &[1, 3, 4]], 1).unwrap();
    for q in [2, 3, 4, 5, 7] {
        let pq = p.with_field(Field::with_order(q).unwrap());
        assert_eq!(lower_bound_size(&pq), 2);
        assert_eq!(lower_bound_bmax(&pq).unwrap(), 3);
        assert_eq!(optimal_codelength_subspace(&pq).unwrap().n_opt, 3);
    }
    let _ = IndexSet::EMPTY;
}
