//! Order-preserving parallel map over scoped threads. Work is split into
//! contiguous chunks so results merge deterministically regardless of the
//! worker count.

pub fn parallel_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = workers.max(1).min(items.len().max(1));
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let mut out: Vec<Option<R>> = Vec::with_capacity(items.len());
    out.resize_with(items.len(), || None);
    let slots: Vec<(usize, &[T])> = items.chunks(chunk).enumerate().collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (i, part) in &slots {
            let f = &f;
            handles.push((i * chunk, scope.spawn(move || part.iter().map(f).collect::<Vec<R>>())));
        }
        for (offset, handle) in handles {
            for (j, r) in handle.join().expect("worker panicked").into_iter().enumerate() {
                out[offset + j] = Some(r);
            }
        }
    });
    out.into_iter().map(|r| r.expect("all slots filled")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order_across_worker_counts() {
        let items: Vec<u64> = (0..101).collect();
        let seq = parallel_map(&items, 1, |x| x * x);
        for workers in [2, 3, 8] {
            assert_eq!(parallel_map(&items, workers, |x| x * x), seq);
        }
    }
}
