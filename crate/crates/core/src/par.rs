//! Data-parallel helpers with a sequential fallback.
//!
//! Every search in this crate reports the *least* result in its
//! deterministic scan order, so the parallel paths use order-preserving
//! reductions (`find_map_first`, indexed `collect`). Without the `parallel`
//! feature, [`Exec::Parallel`] silently runs sequentially.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// First `Some` of `f(0), f(1), ..., f(n-1)` in index order.
pub fn find_map_first<R, F>(exec: Exec, n: usize, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().find_map_first(f);
    }
    let _ = exec;
    (0..n).find_map(f)
}

/// `[f(0), ..., f(n-1)]`, computed in parallel when requested.
pub fn map_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn find_first_is_least_index_in_both_modes() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            let hit = find_map_first(exec, 10_000, |i| (i % 777 == 776).then_some(i));
            assert_eq!(hit, Some(776));
            assert_eq!(find_map_first(exec, 100, |_| None::<()>), None);
        }
    }

    #[test]
    fn map_range_preserves_order() {
        let seq = map_range(Exec::Sequential, 1000, |i| i * i);
        let par = map_range(Exec::Parallel, 1000, |i| i * i);
        assert_eq!(seq, par);
    }
}
