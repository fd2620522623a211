//! Switch points between rayon and plain iteration.
//!
//! Every batch entry point in the crate funnels through these helpers with
//! an explicit `par` request. With the `parallel` feature off the request
//! degrades to sequential silently, so the public `*_seq` variants and the
//! default paths stay link-compatible in both builds. All downstream merges
//! are exact (integer or rational) and indexed by chunk, so the two routes
//! produce bit-identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn map_collect<T, U, F>(par: bool, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if par {
        return items.into_par_iter().map(f).collect();
    }
    let _ = par;
    items.into_iter().map(f).collect()
}

/// Disjoint mutable chunks of `size` elements, each handed to `f` with its
/// chunk index. Chunk boundaries are fixed by `size`, never by thread count.
pub(crate) fn chunks_mut<T, F>(par: bool, data: &mut [T], size: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if par {
        data.par_chunks_mut(size)
            .enumerate()
            .for_each(|(i, c)| f(i, c));
        return;
    }
    let _ = par;
    for (i, c) in data.chunks_mut(size).enumerate() {
        f(i, c);
    }
}
