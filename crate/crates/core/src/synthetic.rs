//! Seeded generators for paired datasets used in tests, benchmarks and demos.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::psychometrics::PairedRecord;
use crate::scoring::{CUTOFF, ITEM_COUNT, MAX_TOTAL};

fn items_for_total(total: u8, rng: &mut impl Rng) -> [u8; ITEM_COUNT] {
    let mut items = [0u8; ITEM_COUNT];
    shift_to_total(&mut items, total, rng);
    items
}

/// Moves item levels one step at a time until they sum to `target`.
fn shift_to_total(items: &mut [u8; ITEM_COUNT], target: u8, rng: &mut impl Rng) {
    debug_assert!(target <= MAX_TOTAL);
    loop {
        let sum: u8 = items.iter().sum();
        if sum == target {
            return;
        }
        let candidates: Vec<usize> = (0..ITEM_COUNT)
            .filter(|&i| {
                if sum < target {
                    items[i] < 3
                } else {
                    items[i] > 0
                }
            })
            .collect();
        let i = *candidates.choose(rng).expect("target within 0..=27");
        if sum < target {
            items[i] += 1;
        } else {
            items[i] -= 1;
        }
    }
}

fn record(index: usize, form_total: u8, agent_total: u8, rng: &mut impl Rng) -> PairedRecord {
    let form = items_for_total(form_total, rng);
    let mut agent = form;
    shift_to_total(&mut agent, agent_total, rng);
    PairedRecord::new(
        format!("s{:03}", index + 1),
        form,
        agent,
        rng.gen_range(0..=14),
    )
}

/// A dataset with a prescribed form-versus-agent confusion at the cutoff:
/// `tp` both positive, `fp` agent-only positive, `fn_` form-only positive,
/// `tn` both negative. Agent totals stay close to form totals.
pub fn with_confusion(tp: usize, fp: usize, fn_: usize, tn: usize, seed: u64) -> Vec<PairedRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(tp + fp + fn_ + tn);
    for _ in 0..tp {
        let f = rng.gen_range(CUTOFF..=22);
        let a = (f as i32 + rng.gen_range(-2..=3)).clamp(CUTOFF as i32, MAX_TOTAL as i32) as u8;
        pairs.push((f, a));
    }
    for _ in 0..fp {
        pairs.push((rng.gen_range(6..CUTOFF), rng.gen_range(CUTOFF..=13)));
    }
    for _ in 0..fn_ {
        pairs.push((rng.gen_range(CUTOFF..=12), rng.gen_range(7..CUTOFF)));
    }
    for _ in 0..tn {
        let f = rng.gen_range(0..CUTOFF);
        let a = (f as i32 + rng.gen_range(-2..=2)).clamp(0, CUTOFF as i32 - 1) as u8;
        pairs.push((f, a));
    }
    pairs.shuffle(&mut rng);
    pairs
        .into_iter()
        .enumerate()
        .map(|(i, (f, a))| record(i, f, a, &mut rng))
        .collect()
}

/// 108 subjects whose classification at the cutoff gives 23 true positives,
/// 8 false positives, 1 false negative and 76 true negatives.
pub fn reconstruction(seed: u64) -> Vec<PairedRecord> {
    with_confusion(23, 8, 1, 76, seed)
}

/// `n` subjects whose agent totals differ from form totals by a mean
/// absolute amount of `mean_abs_noise` (exact up to rounding of the sum).
pub fn noisy(n: usize, mean_abs_noise: f64, seed: u64) -> Vec<PairedRecord> {
    assert!(n > 0, "n must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let level_weights = [0.45, 0.30, 0.15, 0.10];
    let form_totals: Vec<u8> = (0..n)
        .map(|_| {
            (0..ITEM_COUNT)
                .map(|_| {
                    let u: f64 = rng.gen();
                    let mut acc = 0.0;
                    level_weights
                        .iter()
                        .position(|w| {
                            acc += w;
                            u < acc
                        })
                        .unwrap_or(3) as u8
                })
                .sum()
        })
        .collect();

    let max_noise = 6u8;
    let target: u32 = (mean_abs_noise * n as f64).round() as u32;
    assert!(
        target <= max_noise as u32 * n as u32,
        "noise level too high"
    );
    let mut noise: Vec<u8> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
    loop {
        let sum: u32 = noise.iter().map(|&d| d as u32).sum();
        if sum == target {
            break;
        }
        let i = rng.gen_range(0..n);
        if sum < target && noise[i] < max_noise {
            noise[i] += 1;
        } else if sum > target && noise[i] > 0 {
            noise[i] -= 1;
        }
    }

    (0..n)
        .map(|i| {
            let f = form_totals[i];
            let d = noise[i];
            let up = f + d <= MAX_TOTAL;
            let down = f >= d;
            let a = match (up, down) {
                (true, true) if rng.gen_bool(0.5) => f + d,
                (true, _) => f + d,
                _ => f - d,
            };
            record(i, f, a, &mut rng)
        })
        .collect()
}

/// `n` subjects with independent uniform item levels on both instruments.
pub fn uniform(n: usize, seed: u64) -> Vec<PairedRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let form = std::array::from_fn(|_| rng.gen_range(0..=3));
            let agent = std::array::from_fn(|_| rng.gen_range(0..=3));
            PairedRecord::new(format!("s{:03}", i + 1), form, agent, rng.gen_range(0..=14))
        })
        .collect()
}
