//! Execution-mode plumbing: rayon when the `parallel` feature is on, with a
//! sequential fallback that produces bit-identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How data-parallel inner loops run. Outputs are identical across modes;
/// work items are indexed, so reductions happen in a fixed order. The
/// default is `Parallel` when the `parallel` feature is enabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Applies `f` to `0..count` and collects results in index order.
pub(crate) fn map_indexed<T, F>(count: usize, mode: ExecMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        ExecMode::Sequential => (0..count).map(f).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => (0..count).into_par_iter().map(f).collect(),
    }
}
