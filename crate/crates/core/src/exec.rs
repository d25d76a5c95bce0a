//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature enabled, [`Execution::Parallel`] runs on the
//! current rayon pool. Without it, both variants run sequentially.

use std::ops::Range;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this run will actually fan out over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `range`, preserving order.
pub fn map_range<R, F>(exec: Execution, range: Range<usize>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

/// Like [`map_range`], with a per-worker scratch value built by `init`.
pub fn map_range_init<S, R, I, F>(exec: Execution, range: Range<usize>, init: I, f: F) -> Vec<R>
where
    R: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range
            .into_par_iter()
            .map_init(&init, |s, i| f(s, i))
            .collect();
    }
    let _ = exec;
    let mut scratch = init();
    range.map(|i| f(&mut scratch, i)).collect()
}

/// Returns some `Some` produced by `f`, stopping early once one is found.
///
/// In parallel mode the returned item is whichever worker finished first, so
/// callers must not depend on which witness comes back.
pub fn find_map_range_init<S, R, I, F>(
    exec: Execution,
    range: Range<usize>,
    init: I,
    f: F,
) -> Option<R>
where
    R: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range
            .into_par_iter()
            .map_init(&init, |s, i| f(s, i))
            .find_map_any(|r| r);
    }
    let _ = exec;
    let mut scratch = init();
    range.into_iter().find_map(|i| f(&mut scratch, i))
}
