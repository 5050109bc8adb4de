//! IO, file formats, and the acceptance suite for the log-gas
//! laboratory. All numerics live in `loggas-core`; this crate adds
//! JSON-lines configuration files, on-disk ensemble stores with
//! reproducibility manifests, and the criterion checks that the
//! `loggas verify` subcommand and the acceptance tests share.

#![deny(unsafe_code)]

pub mod accept;
pub mod formats;
pub mod store;

use std::thread;

/// Maps `f` over `0..n` with up to `threads` worker threads, returning
/// results in index order. Each index is computed independently, so the
/// output does not depend on the thread count.
pub fn parallel_map_indexed<T, F>(n: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = threads.max(1).min(n.max(1));
    if threads <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let chunk = n.div_ceil(threads);
    thread::scope(|scope| {
        let mut rest = slots.as_mut_slice();
        let mut start = 0usize;
        let mut handles = Vec::new();
        while !rest.is_empty() {
            let take = chunk.min(rest.len());
            let (head, tail) = rest.split_at_mut(take);
            rest = tail;
            let f = &f;
            let base = start;
            handles.push(scope.spawn(move || {
                for (off, slot) in head.iter_mut().enumerate() {
                    *slot = Some(f(base + off));
                }
            }));
            start += take;
        }
        for h in handles {
            h.join().expect("worker thread panicked");
        }
    });
    slots.into_iter().map(|s| s.expect("slot filled")).collect()
}
