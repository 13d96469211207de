//! Temporary diagnostic: trace plain bit-flipping on a desk-scale instance.

use qcmdpc::decoder::{bgf_decode, syndrome, unsatisfied_counters, DecoderConfig, ErrorVector};
use qcmdpc::keys::{generate_key, BikeParams};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::BTreeSet;

fn main() {
    let r = 587usize;
    let params = BikeParams::new(r, 15, 18).unwrap();
    let key = generate_key(&params, 42).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let mut support = BTreeSet::new();
    while support.len() < 18 {
        support.insert((rng.next_u64() % (2 * r) as u64) as usize);
    }
    let e_set: BTreeSet<usize> = support.clone();
    let e = ErrorVector::new(2 * r, support.into_iter().collect()).unwrap();
    let s = syndrome(&key, &e).unwrap();
    println!("|s| = {}", s.weight());

    let threshold = 8usize;
    let mut flipped: BTreeSet<usize> = BTreeSet::new();
    for iter in 0..8 {
        let fv = ErrorVector::new(2 * r, flipped.iter().copied().collect()).unwrap();
        let hf = syndrome(&key, &fv).unwrap();
        let residual = s.add(&hf).unwrap();
        let wrong: BTreeSet<usize> = e_set.symmetric_difference(&flipped).copied().collect();
        println!(
            "iter {iter}: |residual| = {}, positions still wrong = {}",
            residual.weight(),
            wrong.len()
        );
        if residual.is_zero() {
            break;
        }
        let counters = unsatisfied_counters(&key, &residual).unwrap();
        let mut hist_wrong = [0usize; 16];
        let mut hist_good = [0usize; 16];
        for (j, &c) in counters.iter().enumerate() {
            if wrong.contains(&j) {
                hist_wrong[c] += 1;
            } else {
                hist_good[c] += 1;
            }
        }
        println!("  counters (wrong positions): {hist_wrong:?}");
        println!(
            "  counters (good, >=5 only): {:?}",
            &hist_good[5..]
        );
        let flips: Vec<usize> = counters
            .iter()
            .enumerate()
            .filter_map(|(j, &c)| (c >= threshold).then_some(j))
            .collect();
        let bad_flips = flips.iter().filter(|j| !wrong.contains(j)).count();
        println!("  flipping {} positions ({} of them mistaken)", flips.len(), bad_flips);
        for j in flips {
            if !flipped.remove(&j) {
                flipped.insert(j);
            }
        }
    }

    let outcome = bgf_decode(&key, &s, &DecoderConfig::defaults(587, 15)).unwrap();
    println!("bgf_decode: success = {}", outcome.is_success());
}
