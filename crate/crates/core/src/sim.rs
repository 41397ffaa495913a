//! End-to-end broadcast rounds: draw messages and noisy side information,
//! encode, decode every user, count outcomes.
//!
//! Trial `t` draws from a ChaCha8 generator seeded with `seed` on stream
//! `t`, so a report depends only on the inputs and not on scheduling.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::decoder::{build_decoder, encode, ReceiverDecoder};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::problem::BnsiProblem;
use crate::validity::EncoderMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UserOutcome {
    /// 1-based user index.
    #[serde(rename = "i")]
    pub user: usize,
    pub successes: u64,
    pub failures: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimReport {
    pub trials: u64,
    pub seed: u64,
    pub n: usize,
    #[serde(rename = "N")]
    pub codelength: usize,
    pub savings: i64,
    pub fault_injection: bool,
    pub users: Vec<UserOutcome>,
}

impl SimReport {
    pub fn total_failures(&self) -> u64 {
        self.users.iter().map(|u| u.failures).sum()
    }
}

/// Run `trials` rounds. Error weights are uniform in `0..=delta_s`; with
/// `fault_injection` every user instead sees `min(delta_s + 1, |X_i|)`
/// errors, and decoding failures are counted rather than raised.
pub fn simulate(p: &BnsiProblem, l: &EncoderMatrix, trials: u64, seed: u64, fault_injection: bool) -> Result<SimReport> {
    let decoders = (0..p.m())
        .map(|i| match build_decoder(p, l, i) {
            Err(Error::DuplicateSyndrome) => Err(Error::InvalidEncoder),
            other => other,
        })
        .collect::<Result<Vec<_>>>()?;
    let zero = vec![0u64; p.m()];
    let failures = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(p, l, &decoders, seed, t, fault_injection))
        .try_reduce(
            || zero.clone(),
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    let users = failures
        .into_iter()
        .enumerate()
        .map(|(i, f)| UserOutcome { user: i + 1, successes: trials - f, failures: f })
        .collect();
    Ok(SimReport {
        trials,
        seed,
        n: p.n(),
        codelength: l.codelength(),
        savings: p.n() as i64 - l.codelength() as i64,
        fault_injection,
        users,
    })
}

fn run_trial(
    p: &BnsiProblem,
    l: &EncoderMatrix,
    decoders: &[ReceiverDecoder],
    seed: u64,
    trial: u64,
    fault_injection: bool,
) -> Result<Vec<u64>> {
    let f = p.field();
    let q = f.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let x: Vec<Elem> = (0..p.n()).map(|_| rng.gen_range(0..q)).collect();
    let c = encode(l, &x)?;
    let mut failed = vec![0u64; p.m()];
    for (i, dec) in decoders.iter().enumerate() {
        let wanted: Vec<Elem> = p.demand(i).iter().map(|j| x[j]).collect();
        let len = wanted.len();
        let weight = if fault_injection {
            (p.delta_s() + 1).min(len)
        } else {
            rng.gen_range(0..=p.delta_s().min(len))
        };
        let mut noisy = wanted.clone();
        for pos in sample(&mut rng, len, weight).iter() {
            noisy[pos] = f.add(noisy[pos], rng.gen_range(1..q));
        }
        match dec.decode(&c, &noisy) {
            Ok(got) if got == wanted => {}
            Ok(_) | Err(Error::SyndromeNotFound) => failed[i] = 1,
            Err(e) => return Err(e),
        }
    }
    Ok(failed)
}
