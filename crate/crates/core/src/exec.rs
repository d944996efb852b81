//! Sequential / parallel execution switch for the Monte Carlo loops.
//!
//! Chunk boundaries are fixed and every element is computed from its own
//! index, so the choice of mode never changes a result bit.

/// Elements handed to one worker at a time.
pub(crate) const CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is on, otherwise identical to
    /// [`Execution::Sequential`].
    #[default]
    Parallel,
}

impl Execution {
    /// True when this mode will actually fan out across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Calls `f(offset, chunk)` for consecutive `CHUNK`-sized slices of `out`.
    pub(crate) fn for_each_chunk<T, F>(self, out: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            out.par_chunks_mut(CHUNK)
                .enumerate()
                .for_each(|(i, chunk)| f(i * CHUNK, chunk));
            return;
        }
        out.chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(i, chunk)| f(i * CHUNK, chunk));
    }

    /// Element-wise `out[i] = op(a[i], b[i])`.
    pub(crate) fn zip_map(self, a: &[f64], b: &[f64], op: impl Fn(f64, f64) -> f64 + Sync + Send) -> Vec<f64> {
        debug_assert_eq!(a.len(), b.len());
        let mut out = vec![0.0; a.len()];
        self.for_each_chunk(&mut out, |offset, chunk| {
            for (k, slot) in chunk.iter_mut().enumerate() {
                *slot = op(a[offset + k], b[offset + k]);
            }
        });
        out
    }

    /// Ascending sort under IEEE total order.
    pub(crate) fn sort(self, values: &mut [f64]) {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            values.par_sort_unstable_by(f64::total_cmp);
            return;
        }
        values.sort_unstable_by(f64::total_cmp);
    }
}
