//! Deterministic parallel reduction: fixed-size chunks, reduced in chunk order.

use rayon::prelude::*;

use crate::Result;

const CHUNK: usize = 2048;

/// Sums `width`-long accumulators over `0..count`. `add(i, acc)` adds the
/// contribution of item `i`. Chunk boundaries do not depend on the thread
/// pool, so the result is bit-identical for any number of workers.
pub(crate) fn chunked_sum<F>(count: usize, width: usize, add: F) -> Result<Vec<f64>>
where
    F: Fn(usize, &mut [f64]) -> Result<()> + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    let partials: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; width];
            for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                add(i, &mut acc)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = vec![0.0; width];
    for p in partials {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    Ok(total)
}

/// Ordered parallel map.
pub(crate) fn map_indexed<T, F>(count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    (0..count).into_par_iter().map(&f).collect()
}
