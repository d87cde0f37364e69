//! Deterministic parallel reductions.
//!
//! Family sums are mapped over fixed-size contiguous chunks of the canonical
//! order and the chunk partials are combined in a balanced pairwise tree.
//! The tree shape depends only on the item count, never on the worker count,
//! so every numeric output is reproducible bit-for-bit under any parallelism.

use rayon::prelude::*;

/// Fixed chunk length for all deterministic reductions.
pub const CHUNK: usize = 1024;

/// Balanced pairwise fold; the combining order is a function of `items.len()`
/// alone.
pub fn tree_fold<T: Clone>(items: Vec<T>, combine: impl Fn(&T, &T) -> T, identity: T) -> T {
    if items.is_empty() {
        return identity;
    }
    let mut level = items;
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| {
                if pair.len() == 2 {
                    combine(&pair[0], &pair[1])
                } else {
                    pair[0].clone()
                }
            })
            .collect();
    }
    level.into_iter().next().unwrap()
}

/// Deterministic parallel float sum over a slice.
pub fn par_sum_f64<I: Sync>(items: &[I], f: impl Fn(&I) -> f64 + Sync) -> f64 {
    let partials: Vec<f64> = items
        .par_chunks(CHUNK)
        .map(|chunk| chunk.iter().map(&f).fold(0.0, |a, b| a + b))
        .collect();
    tree_fold(partials, |a, b| a + b, 0.0)
}

/// Deterministic parallel integer sum (exact).
pub fn par_sum_i64<I: Sync>(items: &[I], f: impl Fn(&I) -> i64 + Sync) -> i64 {
    let partials: Vec<i64> = items
        .par_chunks(CHUNK)
        .map(|chunk| chunk.iter().map(&f).sum::<i64>())
        .collect();
    partials.into_iter().sum()
}

/// Deterministic parallel sum of integer pairs (exact), used for values in
/// the ring Z[sqrt(q)].
pub fn par_sum_i128_pair<I: Sync>(
    items: &[I],
    f: impl Fn(&I) -> (i128, i128) + Sync,
) -> (i128, i128) {
    let partials: Vec<(i128, i128)> = items
        .par_chunks(CHUNK)
        .map(|chunk| {
            chunk.iter().map(&f).fold((0i128, 0i128), |acc, v| {
                (acc.0 + v.0, acc.1 + v.1)
            })
        })
        .collect();
    partials
        .into_iter()
        .fold((0, 0), |acc, v| (acc.0 + v.0, acc.1 + v.1))
}

/// Deterministic parallel max over f64 values (NaN-free inputs).
pub fn par_max_f64<I: Sync>(items: &[I], f: impl Fn(&I) -> f64 + Sync) -> f64 {
    let partials: Vec<f64> = items
        .par_chunks(CHUNK)
        .map(|chunk| chunk.iter().map(&f).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    partials.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_fold_sums() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64 * 0.1).collect();
        let t = tree_fold(v.clone(), |a, b| a + b, 0.0);
        let s: f64 = v.iter().sum();
        assert!((t - s).abs() < 1e-9);
        assert_eq!(tree_fold(Vec::<f64>::new(), |a, b| a + b, 7.0), 7.0);
    }

    #[test]
    fn sums_independent_of_worker_count() {
        let items: Vec<u64> = (0..10_000).collect();
        let f = |x: &u64| ((*x as f64) * 0.7).sin();
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool3 = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let a = pool1.install(|| par_sum_f64(&items, f));
        let b = pool3.install(|| par_sum_f64(&items, f));
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
