//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bnsi_core::bounds::{
    ecc_based_encoder, eta, lower_bound_bmax, lower_bound_size, min_distance, partition_optimizer, upper_bound_disjoint,
    upper_bound_mds, upper_bound_mds_disjoint, LinearCodeSpec,
};
use bnsi_core::decoder::{build_decoder, encode, error_patterns};
use bnsi_core::index_coding::{ic_interfering_set, ic_is_valid, reduce_to_ic};
use bnsi_core::oracle::{optimal_codelength_exhaustive, optimal_codelength_subspace};
use bnsi_core::space::{all_vectors, unrank};
use bnsi_core::structure::phi_emptiness;
use bnsi_core::validity::{is_valid_by_enumeration, is_valid_by_rank};
use bnsi_core::{BnsiProblem, Elem, EncoderMatrix, Field, IndexSet, Matrix};
use common::{naive_valid, random_encoder, random_problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    failures: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new(), detail: String::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }
}

fn three_users(q: u32) -> BnsiProblem {
    BnsiProblem::from_one_based(q, 4, &[&[1, 2, 3], &[2, 3, 4], &[1, 3, 4]], 1).unwrap()
}

fn sum_encoder(p: &BnsiProblem) -> EncoderMatrix {
    let rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]];
    EncoderMatrix::new(p, Matrix::from_rows(p.field(), &rows).unwrap()).unwrap()
}

fn criterion1() -> Outcome {
    let mut o = Outcome::new();
    let p = three_users(2);
    let opt = optimal_codelength_subspace(&p).unwrap();
    o.check(opt.n_opt == 3, format!("subspace N_opt = {}, expected 3", opt.n_opt));
    o.check(naive_valid(&p, &opt.encoder), "optimal encoder fails brute-force validity");
    let l = sum_encoder(&p);
    o.check(is_valid_by_enumeration(&p, &l).unwrap().is_valid(), "enumeration rejects the 4x3 matrix");
    o.check(is_valid_by_rank(&p, &l).unwrap().is_valid(), "rank check rejects the 4x3 matrix");
    let exh = optimal_codelength_exhaustive(&p, 3).unwrap();
    o.check(exh == Some(3), format!("matrix enumeration gives {exh:?}, expected Some(3)"));
    let any_4x2 = (0u64..256).any(|code| {
        let e = unrank(code, 2, 8);
        let rows: Vec<Vec<Elem>> = e.chunks(2).map(|r| r.to_vec()).collect();
        let l = EncoderMatrix::new(&p, Matrix::from_rows(p.field(), &rows).unwrap()).unwrap();
        is_valid_by_enumeration(&p, &l).unwrap().is_valid()
    });
    o.check(!any_4x2, "a valid 4x2 binary matrix exists");
    o.detail = format!("N_opt = {}, no valid 4x2 among 256", opt.n_opt);
    o
}

fn criterion2() -> Outcome {
    let mut o = Outcome::new();
    let p = three_users(2);
    let d = build_decoder(&p, &sum_encoder(&p), 0).unwrap();
    o.check(d.h().row_vecs() == vec![vec![1, 0, 1], vec![0, 1, 1]], format!("H = {:?}", d.h().row_vecs()));
    let mut table: Vec<(Vec<Elem>, Vec<Elem>)> = d.table().unwrap().to_vec();
    table.sort();
    let expected = vec![
        (vec![0, 0, 0], vec![0, 0]),
        (vec![0, 0, 1], vec![1, 1]),
        (vec![0, 1, 0], vec![0, 1]),
        (vec![1, 0, 0], vec![1, 0]),
    ];
    o.check(table == expected, format!("table = {table:?}"));
    let got = d.decode(&[0, 1, 1], &[1, 0, 1]).unwrap();
    o.check(got == vec![1, 0, 0], format!("decode gave {got:?}"));
    o.detail = "H, table and decode bit-exact".into();
    o
}

/// Multisets of `k` non-empty subsets of `[n]`, as non-decreasing bitmasks.
fn families(n: usize, k: usize) -> Vec<Vec<u64>> {
    let top = (1u64 << n) - 1;
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: u64, top: u64, k: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for b in start..=top {
            cur.push(b);
            rec(b, top, k, cur, out);
            cur.pop();
        }
    }
    rec(1, top, k, &mut cur, &mut out);
    out
}

fn criterion3() -> Outcome {
    let mut o = Outcome::new();
    let f = Field::with_order(2).unwrap();
    let mut count = 0;
    for n in 1..=4 {
        for m in 1..=3 {
            for fam in families(n, m) {
                let demands = fam.into_iter().map(IndexSet::from_bits).collect();
                let p = BnsiProblem::new(f.clone(), n, demands, 1).unwrap();
                let full = optimal_codelength_subspace(&p).unwrap().n_opt == n;
                o.check(full == phi_emptiness(&p).is_empty, format!("mismatch on {p:?}"));
                count += 1;
            }
        }
    }
    o.detail = format!("{count} instances, {} mismatches", o.failures.len());
    o
}

/// Largest-dimension `[n, k, >= d]` code among systematic generators
/// `[I_k | P]`; every linear code is equivalent to one of these up to a
/// coordinate permutation, which preserves the minimum distance.
fn best_code(f: &Field, n: usize, d: usize) -> Option<LinearCodeSpec> {
    let q = f.order();
    for k in (1..=(n + 1).saturating_sub(d)).rev() {
        let free = k * (n - k);
        let total = (q as u64).pow(free as u32);
        for code in 0..total {
            let vals = unrank(code, q, free);
            let rows: Vec<Vec<Elem>> = (0..k)
                .map(|r| {
                    let mut row = vec![0; n];
                    row[r] = 1;
                    row[k..].copy_from_slice(&vals[r * (n - k)..(r + 1) * (n - k)]);
                    row
                })
                .collect();
            let spec = LinearCodeSpec::from_generator(&Matrix::from_rows(f, &rows).unwrap()).unwrap();
            if min_distance(&spec).unwrap().map_or(false, |dist| dist >= d) {
                return Some(spec);
            }
        }
    }
    None
}

fn criterion4() -> Outcome {
    let mut o = Outcome::new();
    let mut notes = Vec::new();

    let p1 = three_users(2);
    let w = phi_emptiness(&p1).witness;
    o.check(w == Some(IndexSet::from_one_based(&[1, 2, 3, 4])), format!("three-user Phi witness {w:?}"));
    let empty = BnsiProblem::from_one_based(2, 5, &[&[1, 2, 3, 4], &[4, 5], &[1, 3, 5], &[1, 2, 4]], 1).unwrap();
    let e = phi_emptiness(&empty);
    let opt_empty = optimal_codelength_subspace(&empty).unwrap().n_opt;
    o.check(e.is_empty && opt_empty == 5, format!("n=5 instance: Phi empty {} N_opt {opt_empty}", e.is_empty));

    let (ls, lb) = (lower_bound_size(&p1), lower_bound_bmax(&p1).unwrap());
    o.check(ls == 2 && lb == 3, format!("three-user lower bounds {ls}, {lb}"));
    notes.push(format!("lower {ls}/{lb}"));

    for (q, want) in [(2u32, 5usize), (5, 4)] {
        let p = BnsiProblem::from_one_based(q, 6, &[&[1, 2, 3, 4], &[2, 3, 4, 5], &[1, 3, 4, 5, 6], &[2, 3, 4, 5, 6]], 1)
            .unwrap();
        let code = best_code(p.field(), 6, eta(&p) + 1).unwrap();
        let l = ecc_based_encoder(&p, &code).unwrap();
        let ok = l.codelength() == want && is_valid_by_rank(&p, &l).unwrap().is_valid();
        o.check(ok, format!("eta=4 example over GF({q}): N = {}, expected {want}", l.codelength()));
        notes.push(format!("ecc q={q} N={}", l.codelength()));
    }

    let mds = BnsiProblem::from_one_based(
        16,
        10,
        &[&[1, 3, 5, 7, 9], &[2, 4, 6, 8, 10], &[1, 2, 4, 6, 8, 10], &[3, 4, 5, 6, 7, 9]],
        1,
    )
    .unwrap();
    let c = upper_bound_mds(&mds).unwrap();
    o.check(c.length() == 7 && is_valid_by_rank(&mds, &c.encoder).unwrap().is_valid(), format!("n=10 MDS N = {}", c.length()));
    notes.push(format!("mds N={}", c.length()));

    let dis2 = BnsiProblem::from_one_based(2, 10, &[&[1, 2, 3, 9], &[4, 5, 6, 10], &[7, 8]], 1).unwrap();
    let (c2, _) = upper_bound_disjoint(&dis2);
    o.check(c2.length() == 8, format!("n=10 disjoint bound over GF(2) = {}", c2.length()));
    for q in [4u32, 5, 7, 8] {
        let p = dis2.with_field(Field::with_order(q).unwrap());
        let (c, _) = upper_bound_mds_disjoint(&p).unwrap();
        let ok = c.length() == 6 && is_valid_by_rank(&p, &c.encoder).unwrap().is_valid();
        o.check(ok, format!("n=10 MDS-disjoint bound over GF({q}) = {}", c.length()));
    }
    notes.push(format!("disjoint {}/6", c2.length()));

    let n7 = BnsiProblem::from_one_based(2, 7, &[&[1, 3, 5], &[2, 4, 6], &[3, 6, 7], &[4, 5, 6]], 1).unwrap();
    let opt7 = optimal_codelength_subspace(&n7).unwrap().n_opt;
    o.check(
        opt7 == 5,
        format!(
            "n=7 example: N_opt = {opt7}, expected 5 (Phi = {}, B_max = {}, disjoint bound {}, partition bound {})",
            phi_emptiness(&n7).witness.map(|s| s.to_string()).unwrap_or_default(),
            lower_bound_bmax(&n7).unwrap(),
            upper_bound_disjoint(&n7).0.length(),
            partition_optimizer(&n7).map(|r| r.construction.length()).unwrap_or(7),
        ),
    );
    notes.push(format!("n=7 N_opt={opt7}"));

    let ic = reduce_to_ic(&p1);
    o.check(
        ic.m_generated() == 18 && ic.m_distinct() == 12 && ic.m_hat_formula() == 18,
        format!("reduction counts {}/{}", ic.m_generated(), ic.m_distinct()),
    );
    notes.push(format!("IC {}/{}", ic.m_generated(), ic.m_distinct()));
    o.detail = notes.join(", ");
    o
}

fn criterion5() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut invalid = 0;
    for _ in 0..10_000 {
        let q = [2u32, 3, 4][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=6);
        let d = rng.gen_range(0..=2);
        let p = random_problem(&mut rng, q, n, 4, d);
        let cols = rng.gen_range(0..=n);
        let l = random_encoder(&mut rng, &p, cols);
        let a = is_valid_by_enumeration(&p, &l).unwrap().is_valid();
        let b = is_valid_by_rank(&p, &l).unwrap().is_valid();
        invalid += usize::from(!a);
        o.check(a == b, format!("disagreement on {p:?} with {l:?}"));
    }
    o.detail = format!("10000 pairs, {invalid} invalid, {} disagreements", o.failures.len());
    o
}

/// A random valid encoder of the smallest width at which random sampling
/// finds one, falling back to the identity.
fn random_valid_encoder<R: Rng>(rng: &mut R, p: &BnsiProblem) -> EncoderMatrix {
    for cols in 1..p.n() {
        for _ in 0..300 {
            let l = random_encoder(rng, p, cols);
            if is_valid_by_rank(p, &l).unwrap().is_valid() {
                return l;
            }
        }
    }
    EncoderMatrix::new(p, Matrix::identity(p.field(), p.n())).unwrap()
}

fn criterion6() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = 0u64;
    let mut saved = 0;
    for _ in 0..50 {
        let (q, n) = [(2u32, 6usize), (2, 8), (2, 10), (3, 5), (4, 5), (4, 6), (5, 4), (8, 4), (16, 3)][rng.gen_range(0..9)];
        let d = rng.gen_range(1..=2);
        let p = random_problem(&mut rng, q, n, 3, d);
        let l = random_valid_encoder(&mut rng, &p);
        saved += usize::from(l.codelength() < n);
        let f = p.field();
        for i in 0..p.m() {
            let dec = build_decoder(&p, &l, i).unwrap();
            let errs: Vec<Vec<Elem>> = error_patterns(q, p.demand(i).len(), d).collect();
            for x in all_vectors(q, n) {
                let c = encode(&l, &x).unwrap();
                let want: Vec<Elem> = p.demand(i).iter().map(|j| x[j]).collect();
                for e in &errs {
                    let noisy: Vec<Elem> = want.iter().zip(e).map(|(&a, &b)| f.add(a, b)).collect();
                    cases += 1;
                    if dec.decode(&c, &noisy).ok().as_ref() != Some(&want) {
                        o.check(false, format!("decode failure on {p:?}, user {}, x {x:?}, eps {e:?}", i + 1));
                    }
                }
            }
        }
    }
    o.detail = format!("50 encoders ({saved} shorter than n), {cases} decodings, {} failures", o.failures.len());
    o
}

fn criterion7() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let (q, n) = [(2u32, 6usize), (2, 10), (2, 14), (3, 6), (4, 5), (4, 7), (5, 5), (7, 4), (16, 3)][rng.gen_range(0..9)];
        let d = rng.gen_range(0..=2);
        let p = random_problem(&mut rng, q, n, 4, d);
        let ic = reduce_to_ic(&p);
        let a: Vec<_> = p.interfering_set().unwrap().collect();
        let b: Vec<_> = ic_interfering_set(&ic, p.field()).unwrap().collect();
        o.check(a == b, format!("interfering sets differ on {p:?}"));
        for _ in 0..20 {
            let cols = rng.gen_range(0..=n);
            let l = random_encoder(&mut rng, &p, cols);
            let bnsi = is_valid_by_enumeration(&p, &l).unwrap().is_valid();
            let icv = ic_is_valid(&ic, &l).unwrap();
            o.check(bnsi == icv, format!("validity differs on {p:?}"));
        }
    }
    o.detail = format!("200 instances x 20 matrices, {} mismatches", o.failures.len());
    o
}

fn criterion8() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut constructions = 0;
    for _ in 0..100 {
        let (q, n) = [(2u32, 5usize), (2, 6), (2, 7), (3, 4), (3, 5), (4, 4), (5, 4), (5, 5)][rng.gen_range(0..8)];
        let d = rng.gen_range(0..=1);
        let p = random_problem(&mut rng, q, n, 5, d);
        let opt = optimal_codelength_subspace(&p).unwrap().n_opt;
        let lows = [lower_bound_size(&p), lower_bound_bmax(&p).unwrap()];
        o.check(lows[0] <= lows[1], format!("size bound {} above B_max bound {} on {p:?}", lows[0], lows[1]));
        o.check(lows[1] <= opt, format!("B_max bound {} above N_opt {opt} on {p:?}", lows[1]));
        let mut built = vec![("disjoint", upper_bound_disjoint(&p).0)];
        built.extend(upper_bound_mds(&p).ok().map(|c| ("mds", c)));
        built.extend(upper_bound_mds_disjoint(&p).ok().map(|c| ("mds_disjoint", c.0)));
        built.extend(partition_optimizer(&p).ok().map(|r| ("partition", r.construction)));
        for (name, c) in built {
            constructions += 1;
            o.check(opt <= c.length(), format!("{name} length {} below N_opt {opt} on {p:?}", c.length()));
            let l = EncoderMatrix::new(&p, c.encoder.matrix().clone()).unwrap();
            o.check(l.codelength() == c.length(), format!("{name} reports a wrong length"));
            o.check(is_valid_by_rank(&p, &l).unwrap().is_valid(), format!("{name} matrix invalid on {p:?}"));
        }
    }
    o.detail = format!("100 instances, {constructions} constructions, {} violations", o.failures.len());
    o
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 8] = [
        ("three-user optimum", criterion1, Some(Duration::from_secs(1))),
        ("syndrome-decoding fixture", criterion2, None),
        ("Phi-empty iff N_opt = n", criterion3, Some(Duration::from_secs(300))),
        ("worked-example bound table", criterion4, None),
        ("validity-checker agreement", criterion5, Some(Duration::from_secs(120))),
        ("exhaustive decoding soundness", criterion6, None),
        ("index-coding reduction equivalence", criterion7, None),
        ("bounds sandwich the optimum", criterion8, None),
    ];
    let mut all_ok = true;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = run();
        let took = start.elapsed();
        if let Some(limit) = limit {
            out.check(took <= *limit, format!("took {took:.2?}, limit {limit:?}"));
        }
        let ok = out.failures.is_empty();
        all_ok &= ok;
        println!(
            "{} criterion {}: {} [{}] ({:.2?})",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            name,
            out.detail,
            took
        );
        for f in out.failures.iter().take(5) {
            println!("    {f}");
        }
        if out.failures.len() > 5 {
            println!("    ... {} more", out.failures.len() - 5);
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
